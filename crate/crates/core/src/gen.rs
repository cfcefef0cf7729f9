//! Instance generators for the benchmark families used throughout the test
//! battery and the CLI.
//!
//! Coordinates are chosen to be exactly representable as doubles; the tested
//! contract of each family is its conflict pattern, not the coordinates
//! themselves.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::Instance;
use crate::interval::{Interval, IntervalId};
use crate::order;

/// Multiplicities of a transfer-charging base instance: `L`/`R` flank copies,
/// `M` large middle copies, `S` small intervals nested inside the middles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseInstanceSpec {
    pub l: u64,
    pub r: u64,
    pub m: u64,
    pub s: u64,
}

impl BaseInstanceSpec {
    pub fn new(l: u64, r: u64, m: u64, s: u64) -> Self {
        assert!(
            l >= 1 && r >= 1 && m >= 1 && s >= 1,
            "multiplicities must be positive"
        );
        BaseInstanceSpec { l, r, m, s }
    }

    pub fn total(&self) -> u64 {
        self.l + self.r + self.m + self.s
    }
}

/// Which ids play which role in a base instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseRoles {
    pub l: Vec<IntervalId>,
    pub r: Vec<IntervalId>,
    pub m: Vec<IntervalId>,
    pub s: Vec<IntervalId>,
}

/// Roles of one construction inside a composed instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRoles {
    pub l: Vec<IntervalId>,
    pub r: Vec<IntervalId>,
    pub m: Vec<IntervalId>,
    pub s: Vec<IntervalId>,
}

/// Composed-instance size: the full three-construction chain, or the
/// eight-interval trim of the same chain that fits the exact-enumeration
/// guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComposedForm {
    Full,
    Trimmed,
}

/// Weight assignment for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    Unit,
    /// Integer weights 1..=9.
    Uniform,
}

/// The named instance families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeneratorSpec {
    /// `n - 2` identical middle copies flanked by two disjoint longer
    /// intervals, each partially conflicting every middle. Requires `n >= 3`.
    Flanked { n: usize },
    /// Canonical base geometry for the given multiplicities.
    Base(BaseInstanceSpec),
    /// Three chained base constructions sharing boundary optimal intervals.
    Composed(ComposedForm),
    /// Lower-bound witness: middle interval partially overlapped by two
    /// disjoint flankers, middle listed first.
    Lb1,
    /// Same three spans with the middle listed second.
    Lb2,
    /// Seeded random instance with `k` distinct lengths.
    Random {
        n: usize,
        k: usize,
        weights: WeightMode,
        seed: u64,
    },
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad generator spec: {0}")]
    BadSpec(String),
}

/// A generated instance plus any role metadata the family carries.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub label: String,
    pub base_roles: Option<BaseRoles>,
    pub constructions: Option<Vec<ConstructionRoles>>,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    match spec {
        GeneratorSpec::Flanked { n } => flanked(*n),
        GeneratorSpec::Base(base) => Ok(base_instance(base)),
        GeneratorSpec::Composed(form) => Ok(composed(*form)),
        GeneratorSpec::Lb1 => Ok(lower_bound(1)),
        GeneratorSpec::Lb2 => Ok(lower_bound(2)),
        GeneratorSpec::Random {
            n,
            k,
            weights,
            seed,
        } => random(*n, *k, *weights, *seed),
    }
}

/// Middles `[0, 6)` with flanks `[-4, 2.5)` and `[4, 10.5)`.
///
/// Ids `0..n-2` are the middles, `n-2` the left flank, `n-1` the right flank.
fn flanked(n: usize) -> Result<Generated, GenError> {
    if n < 3 {
        return Err(GenError::BadSpec(format!(
            "flanked requires n >= 3, got {n}"
        )));
    }
    let mut intervals = Vec::with_capacity(n);
    for i in 0..n - 2 {
        intervals.push(Interval::new(i, 0.0, 6.0));
    }
    intervals.push(Interval::new(n - 2, -4.0, 2.5));
    intervals.push(Interval::new(n - 1, 4.0, 10.5));
    Ok(Generated {
        instance: Instance::new(intervals),
        label: format!("flanked(n={n})"),
        base_roles: None,
        constructions: None,
    })
}

/// Canonical base geometry: `M` copies of `[0, 10)`; `L` copies of
/// `[-0.5, 0.5)`; `R` copies of `[9.5, 10.5)`; small intervals `[2, 3)`,
/// `[4, 5)`, `[6, 7)` with extras stacked as further copies of `[2, 3)`.
/// Flanks conflict the middles partially; the small intervals sit strictly
/// inside the middles and touch nothing else.
///
/// Ids are assigned in role order `L, R, M, S`.
pub fn base_instance(spec: &BaseInstanceSpec) -> Generated {
    let mut intervals = Vec::new();
    let mut roles = BaseRoles {
        l: vec![],
        r: vec![],
        m: vec![],
        s: vec![],
    };
    for _ in 0..spec.l {
        let id = intervals.len();
        intervals.push(Interval::new(id, -0.5, 0.5));
        roles.l.push(IntervalId(id));
    }
    for _ in 0..spec.r {
        let id = intervals.len();
        intervals.push(Interval::new(id, 9.5, 10.5));
        roles.r.push(IntervalId(id));
    }
    for _ in 0..spec.m {
        let id = intervals.len();
        intervals.push(Interval::new(id, 0.0, 10.0));
        roles.m.push(IntervalId(id));
    }
    let small_spans = [(2.0, 3.0), (4.0, 5.0), (6.0, 7.0)];
    for j in 0..spec.s as usize {
        let id = intervals.len();
        let (a, b) = if j < 3 {
            small_spans[j]
        } else {
            small_spans[0]
        };
        intervals.push(Interval::new(id, a, b));
        roles.s.push(IntervalId(id));
    }
    Generated {
        instance: Instance::new(intervals),
        label: format!("base(l={},r={},m={},s={})", spec.l, spec.r, spec.m, spec.s),
        base_roles: Some(roles),
        constructions: None,
    }
}

/// Three chained constructions over integer coordinates.
///
/// Layout (spans scaled so every coordinate is an integer):
///
/// ```text
///   inner:   J1[-97,-73) J2[-82,-58) J3[-67,-43)       I2[33,57)  J4[58,82)  I3[103,127)
///   middles: M1[-100,0)             M2[10,110)          M3[50,150)
///   flanks:  I1[-7,17)                                  I4[143,167)
/// ```
///
/// Constructions: `C1 = (-, {I1}, {M1}, {J1,J2,J3})`,
/// `C2 = ({I1}, {I3}, {M2}, {I2,J4})`, `C3 = ({I2}, {I4}, {M3}, {J4,I3})`.
/// The trimmed form drops `J1`, `J2`, and `I4` to reach eight intervals while
/// keeping all three constructions.
fn composed(form: ComposedForm) -> Generated {
    // (name, start, finish)
    let full: Vec<(&str, f64, f64)> = vec![
        ("J1", -97.0, -73.0),
        ("J2", -82.0, -58.0),
        ("J3", -67.0, -43.0),
        ("M1", -100.0, 0.0),
        ("I1", -7.0, 17.0),
        ("M2", 10.0, 110.0),
        ("I2", 33.0, 57.0),
        ("J4", 58.0, 82.0),
        ("M3", 50.0, 150.0),
        ("I3", 103.0, 127.0),
        ("I4", 143.0, 167.0),
    ];
    let keep: Vec<(&str, f64, f64)> = match form {
        ComposedForm::Full => full,
        ComposedForm::Trimmed => full
            .into_iter()
            .filter(|(name, _, _)| !matches!(*name, "J1" | "J2" | "I4"))
            .collect(),
    };
    let mut intervals = Vec::new();
    let mut id_of = std::collections::HashMap::new();
    for (name, a, b) in &keep {
        let id = intervals.len();
        intervals.push(Interval::new(id, *a, *b));
        id_of.insert(*name, IntervalId(id));
    }
    let ids = |names: &[&str]| -> Vec<IntervalId> {
        names.iter().filter_map(|n| id_of.get(n).copied()).collect()
    };
    let constructions = vec![
        ConstructionRoles {
            l: vec![],
            r: ids(&["I1"]),
            m: ids(&["M1"]),
            s: ids(&["J1", "J2", "J3"]),
        },
        ConstructionRoles {
            l: ids(&["I1"]),
            r: ids(&["I3"]),
            m: ids(&["M2"]),
            s: ids(&["I2", "J4"]),
        },
        ConstructionRoles {
            l: ids(&["I2"]),
            r: ids(&["I4"]),
            m: ids(&["M3"]),
            s: ids(&["J4", "I3"]),
        },
    ];
    let label = match form {
        ComposedForm::Full => "composed(full)".to_string(),
        ComposedForm::Trimmed => "composed(trimmed)".to_string(),
    };
    Generated {
        instance: Instance::new(intervals),
        label,
        base_roles: None,
        constructions: Some(constructions),
    }
}

/// The two lower-bound witnesses share the spans `[-18, -12)`, `[-13, -7)`,
/// `[-8, -2)`: the middle partially conflicts both outer intervals, which are
/// mutually disjoint. They differ in which position the middle occupies in
/// the id order.
fn lower_bound(which: u8) -> Generated {
    let (spans, label) = match which {
        1 => (
            // middle first, then left, then right
            vec![(-13.0, -7.0), (-18.0, -12.0), (-8.0, -2.0)],
            "lb1",
        ),
        _ => (
            // left, middle, right
            vec![(-18.0, -12.0), (-13.0, -7.0), (-8.0, -2.0)],
            "lb2",
        ),
    };
    let intervals = spans
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| Interval::new(i, a, b))
        .collect();
    Generated {
        instance: Instance::new(intervals),
        label: label.to_string(),
        base_roles: None,
        constructions: None,
    }
}

/// Seeded random instance: `k` distinct lengths drawn from a fixed menu, the
/// first `k` intervals receiving each length once so the requested `k` is
/// always realized; integer starts, so every coordinate is exact.
fn random(n: usize, k: usize, weights: WeightMode, seed: u64) -> Result<Generated, GenError> {
    if n == 0 {
        return Ok(Generated {
            instance: Instance::new(vec![]),
            label: format!("random(n=0,k=0,seed={seed})"),
            base_roles: None,
            constructions: None,
        });
    }
    const LENGTH_MENU: [f64; 8] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0];
    if k == 0 || k > n || k > LENGTH_MENU.len() {
        return Err(GenError::BadSpec(format!(
            "random requires 1 <= k <= min(n, {}), got n={n} k={k}",
            LENGTH_MENU.len()
        )));
    }
    let mut rng = order::rng_from_seed(seed);
    // Pick k distinct lengths from the menu.
    let mut menu: Vec<f64> = LENGTH_MENU.to_vec();
    order::shuffle(&mut menu, &mut rng);
    let lengths: Vec<f64> = menu.into_iter().take(k).collect();

    let window = (3 * n).max(8) as u64;
    let mut intervals = Vec::with_capacity(n);
    for i in 0..n {
        // First k intervals realize each length once.
        let len = if i < k {
            lengths[i]
        } else {
            lengths[order::bounded_u64(&mut rng, k as u64) as usize]
        };
        let start = order::bounded_u64(&mut rng, window) as f64;
        let weight = match weights {
            WeightMode::Unit => 1.0,
            WeightMode::Uniform => 1.0 + order::bounded_u64(&mut rng, 9) as f64,
        };
        intervals.push(Interval::weighted(i, start, start + len, weight));
    }
    Ok(Generated {
        instance: Instance::new(intervals),
        label: format!("random(n={n},k={k},seed={seed})"),
        base_roles: None,
        constructions: None,
    })
}

impl GeneratorSpec {
    /// Parse the CLI spec-string form, e.g. `flanked:n=6`,
    /// `base:l=1,r=1,m=2,s=3`, `composed:form=trimmed`, `lb1`, `lb2`,
    /// `random:n=7,k=2,weights=unit,seed=1`.
    pub fn parse(text: &str) -> Result<GeneratorSpec, GenError> {
        let (name, args) = match text.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => (text.trim(), ""),
        };
        let mut kv = std::collections::HashMap::new();
        if !args.is_empty() {
            for piece in args.split(',') {
                let (key, value) = piece.split_once('=').ok_or_else(|| {
                    GenError::BadSpec(format!("expected key=value, got `{piece}`"))
                })?;
                kv.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        let get_u64 =
            |kv: &std::collections::HashMap<String, String>, key: &str| -> Result<u64, GenError> {
                kv.get(key)
                    .ok_or_else(|| GenError::BadSpec(format!("missing `{key}`")))?
                    .parse::<u64>()
                    .map_err(|_| GenError::BadSpec(format!("invalid `{key}`")))
            };
        match name {
            "flanked" => Ok(GeneratorSpec::Flanked {
                n: get_u64(&kv, "n")? as usize,
            }),
            "base" => Ok(GeneratorSpec::Base(BaseInstanceSpec::new(
                get_u64(&kv, "l")?,
                get_u64(&kv, "r")?,
                get_u64(&kv, "m")?,
                get_u64(&kv, "s")?,
            ))),
            "composed" => {
                let form = match kv.get("form").map(String::as_str) {
                    None | Some("full") => ComposedForm::Full,
                    Some("trimmed") => ComposedForm::Trimmed,
                    Some(other) => {
                        return Err(GenError::BadSpec(format!(
                            "unknown composed form `{other}`"
                        )))
                    }
                };
                Ok(GeneratorSpec::Composed(form))
            }
            "lb1" => Ok(GeneratorSpec::Lb1),
            "lb2" => Ok(GeneratorSpec::Lb2),
            "random" => {
                let weights = match kv.get("weights").map(String::as_str) {
                    None | Some("unit") => WeightMode::Unit,
                    Some("uniform") => WeightMode::Uniform,
                    Some(other) => {
                        return Err(GenError::BadSpec(format!("unknown weight mode `{other}`")))
                    }
                };
                Ok(GeneratorSpec::Random {
                    n: get_u64(&kv, "n")? as usize,
                    k: get_u64(&kv, "k")? as usize,
                    weights,
                    seed: get_u64(&kv, "seed").unwrap_or(0),
                })
            }
            other => Err(GenError::BadSpec(format!("unknown generator `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{classify_conflict, ConflictKind};
    use crate::oracle;

    #[test]
    fn flanked_geometry() {
        let g = generate(&GeneratorSpec::Flanked { n: 10 }).unwrap();
        let inst = &g.instance;
        let stats = inst.stats();
        assert_eq!(stats.n, 10);
        assert_eq!(stats.k, 2);
        assert_eq!(stats.nesting_depth, 0);
        let left = inst.get(IntervalId(8));
        let right = inst.get(IntervalId(9));
        assert_eq!(classify_conflict(left, right), ConflictKind::Disjoint);
        for i in 0..8 {
            let mid = inst.get(IntervalId(i));
            assert_eq!(classify_conflict(left, mid), ConflictKind::Partial);
            assert_eq!(classify_conflict(right, mid), ConflictKind::Partial);
        }
        assert_eq!(oracle::opt_unweighted(inst).size, 2);
        assert!(generate(&GeneratorSpec::Flanked { n: 2 }).is_err());
    }

    #[test]
    fn base_geometry_and_stats() {
        let g = base_instance(&BaseInstanceSpec::new(1, 1, 1, 3));
        let inst = &g.instance;
        let stats = inst.stats();
        assert_eq!(stats.n, 6);
        assert_eq!(stats.k, 2);
        assert_eq!(stats.nesting_depth, 1);
        assert_eq!(oracle::brute_force_opt(inst, false).unwrap(), 5.0);

        let roles = g.base_roles.unwrap();
        let m = inst.get(roles.m[0]);
        for &l in &roles.l {
            assert_eq!(classify_conflict(inst.get(l), m), ConflictKind::Partial);
        }
        for &r in &roles.r {
            assert_eq!(classify_conflict(inst.get(r), m), ConflictKind::Partial);
        }
        for &s in &roles.s {
            assert_eq!(
                classify_conflict(m, inst.get(s)),
                ConflictKind::FirstContainsSecond
            );
        }
    }

    #[test]
    fn base_extras_stack_as_copies() {
        let g = base_instance(&BaseInstanceSpec::new(1, 1, 1, 5));
        let roles = g.base_roles.unwrap();
        let s3 = g.instance.get(roles.s[3]);
        let s0 = g.instance.get(roles.s[0]);
        assert_eq!(classify_conflict(s0, s3), ConflictKind::Identical);
    }

    #[test]
    fn lower_bound_patterns() {
        for spec in [GeneratorSpec::Lb1, GeneratorSpec::Lb2] {
            let g = generate(&spec).unwrap();
            let inst = &g.instance;
            assert_eq!(inst.len(), 3);
            assert_eq!(inst.stats().k, 1);
            assert_eq!(oracle::opt_unweighted(inst).size, 2);
        }
        // lb1: middle is id 0, flankers ids 1 and 2.
        let lb1 = generate(&GeneratorSpec::Lb1).unwrap().instance;
        assert_eq!(
            classify_conflict(lb1.get(IntervalId(0)), lb1.get(IntervalId(1))),
            ConflictKind::Partial
        );
        assert_eq!(
            classify_conflict(lb1.get(IntervalId(0)), lb1.get(IntervalId(2))),
            ConflictKind::Partial
        );
        assert_eq!(
            classify_conflict(lb1.get(IntervalId(1)), lb1.get(IntervalId(2))),
            ConflictKind::Disjoint
        );
        // lb2: middle is id 1.
        let lb2 = generate(&GeneratorSpec::Lb2).unwrap().instance;
        assert_eq!(
            classify_conflict(lb2.get(IntervalId(0)), lb2.get(IntervalId(1))),
            ConflictKind::Partial
        );
        assert_eq!(
            classify_conflict(lb2.get(IntervalId(1)), lb2.get(IntervalId(2))),
            ConflictKind::Partial
        );
        assert_eq!(
            classify_conflict(lb2.get(IntervalId(0)), lb2.get(IntervalId(2))),
            ConflictKind::Disjoint
        );
    }

    #[test]
    fn composed_conflict_pattern() {
        let g = generate(&GeneratorSpec::Composed(ComposedForm::Full)).unwrap();
        let inst = &g.instance;
        assert_eq!(inst.len(), 11);
        assert_eq!(inst.stats().k, 2);
        assert_eq!(inst.stats().nesting_depth, 1);
        let cons = g.constructions.as_ref().unwrap();
        assert_eq!(cons.len(), 3);
        for c in cons {
            for &m in &c.m {
                let mid = inst.get(m);
                for &s in &c.s {
                    assert_eq!(
                        classify_conflict(mid, inst.get(s)),
                        ConflictKind::FirstContainsSecond,
                        "member {s} of a construction must sit inside its middle"
                    );
                }
                for &f in c.l.iter().chain(&c.r) {
                    assert_eq!(
                        classify_conflict(mid, inst.get(f)),
                        ConflictKind::Partial,
                        "flank {f} must partially conflict the middle"
                    );
                }
            }
        }

        let t = generate(&GeneratorSpec::Composed(ComposedForm::Trimmed)).unwrap();
        assert_eq!(t.instance.len(), 8);
        assert_eq!(t.constructions.as_ref().unwrap().len(), 3);
        // Trimmed keeps every construction non-degenerate on the flank side.
        for c in t.constructions.as_ref().unwrap() {
            assert!(!c.l.is_empty() || !c.r.is_empty());
            assert!(!c.s.is_empty());
        }
    }

    #[test]
    fn random_realizes_requested_k() {
        for seed in 0..30 {
            let g = generate(&GeneratorSpec::Random {
                n: 7,
                k: 3,
                weights: WeightMode::Unit,
                seed,
            })
            .unwrap();
            assert_eq!(g.instance.stats().k, 3);
            assert_eq!(g.instance.len(), 7);
        }
        assert!(generate(&GeneratorSpec::Random {
            n: 2,
            k: 5,
            weights: WeightMode::Unit,
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        let cases = [
            ("flanked:n=6", GeneratorSpec::Flanked { n: 6 }),
            (
                "base:l=1,r=1,m=2,s=3",
                GeneratorSpec::Base(BaseInstanceSpec::new(1, 1, 2, 3)),
            ),
            (
                "composed:form=trimmed",
                GeneratorSpec::Composed(ComposedForm::Trimmed),
            ),
            ("lb1", GeneratorSpec::Lb1),
            ("lb2", GeneratorSpec::Lb2),
            (
                "random:n=7,k=2,weights=uniform,seed=9",
                GeneratorSpec::Random {
                    n: 7,
                    k: 2,
                    weights: WeightMode::Uniform,
                    seed: 9,
                },
            ),
        ];
        for (text, want) in cases {
            assert_eq!(GeneratorSpec::parse(text).unwrap(), want, "{text}");
        }
        assert!(GeneratorSpec::parse("nonsense").is_err());
        assert!(GeneratorSpec::parse("flanked:m=3").is_err());
    }
}
