//! Exact offline optima: denominators of competitive ratios and brute-force
//! testing oracles.

use thiserror::Error;

use crate::instance::Instance;
use crate::interval::{is_feasible_set, Interval, IntervalId};

/// Enumeration guard for [`brute_force_opt`].
pub const BRUTE_FORCE_MAX_ITEMS: usize = 20;
/// Enumeration guard for [`knapsack_opt`].
pub const KNAPSACK_MAX_ITEMS: usize = 25;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance too large for exact enumeration: {n} items exceeds guard {guard}")]
    InstanceTooLarge { n: usize, guard: usize },
}

/// Optimal unweighted solution: maximum-cardinality feasible subset, realized
/// by the earliest-finish greedy scan.
#[derive(Debug, Clone, PartialEq)]
pub struct OptSolution {
    pub size: usize,
    pub witness: Vec<IntervalId>,
}

/// Optimal weighted solution.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedOptSolution {
    pub weight: f64,
    pub witness: Vec<IntervalId>,
}

/// Earliest-finish greedy over intervals sorted by `(finish, start, id)`:
/// accept whenever disjoint from the last accepted interval.
pub fn opt_unweighted(inst: &Instance) -> OptSolution {
    let mut sorted: Vec<&Interval> = inst.intervals().iter().collect();
    sorted.sort_by(|a, b| {
        a.finish
            .total_cmp(&b.finish)
            .then(a.start.total_cmp(&b.start))
            .then(a.id.cmp(&b.id))
    });
    let mut witness = Vec::new();
    let mut frontier = f64::NEG_INFINITY;
    for iv in sorted {
        if iv.start >= frontier {
            witness.push(iv.id);
            frontier = iv.finish;
        }
    }
    witness.sort();
    OptSolution {
        size: witness.len(),
        witness,
    }
}

/// Maximum total weight over feasible subsets.
///
/// The value comes from the classical recurrence over intervals sorted by
/// finish time. The witness is deterministic: among equal-weight optima it is
/// the lexicographically smallest id set, built by a greedy inclusion scan in
/// id order with an exact "can this prefix still reach the optimum" check.
pub fn opt_weighted(inst: &Instance) -> WeightedOptSolution {
    let best = max_weight(inst.intervals().iter().collect());
    let mut chosen: Vec<&Interval> = Vec::new();
    let mut excluded: Vec<IntervalId> = Vec::new();
    let mut ids: Vec<IntervalId> = inst.ids().collect();
    ids.sort();
    for id in ids {
        let candidate = inst.get(id);
        if chosen.iter().any(|c| c.conflicts(candidate)) {
            excluded.push(id);
            continue;
        }
        let mut tentative = chosen.clone();
        tentative.push(candidate);
        let fixed: f64 = tentative.iter().map(|iv| iv.weight).sum();
        let pool: Vec<&Interval> = inst
            .intervals()
            .iter()
            .filter(|iv| {
                iv.id > id
                    && !excluded.contains(&iv.id)
                    && tentative.iter().all(|c| !c.conflicts(iv))
            })
            .collect();
        if fixed + max_weight(pool) == best {
            chosen = tentative;
        } else {
            excluded.push(id);
        }
    }
    WeightedOptSolution {
        weight: best,
        witness: chosen.iter().map(|iv| iv.id).collect(),
    }
}

/// Weighted interval scheduling recurrence over the given pool.
fn max_weight(mut pool: Vec<&Interval>) -> f64 {
    if pool.is_empty() {
        return 0.0;
    }
    pool.sort_by(|a, b| a.finish.total_cmp(&b.finish).then(a.id.cmp(&b.id)));
    let n = pool.len();
    // p[i]: number of intervals among the first i that end at or before
    // pool[i] starts (binary search over the sorted finishes).
    let mut dp = vec![0.0f64; n + 1];
    for i in 1..=n {
        let iv = pool[i - 1];
        let p = pool[..i - 1].partition_point(|j| j.finish <= iv.start);
        dp[i] = dp[i - 1].max(dp[p] + iv.weight);
    }
    dp[n]
}

/// Exact optimum by feasible-subset enumeration; the independent oracle for
/// both greedy paths. Guarded at [`BRUTE_FORCE_MAX_ITEMS`] items.
pub fn brute_force_opt(inst: &Instance, weighted: bool) -> Result<f64, OracleError> {
    let n = inst.len();
    if n > BRUTE_FORCE_MAX_ITEMS {
        return Err(OracleError::InstanceTooLarge {
            n,
            guard: BRUTE_FORCE_MAX_ITEMS,
        });
    }
    let items = inst.intervals();
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << n) {
        let subset: Vec<&Interval> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &items[i])
            .collect();
        if !is_feasible_set(&subset) {
            continue;
        }
        let value: f64 = if weighted {
            subset.iter().map(|iv| iv.weight).sum()
        } else {
            subset.len() as f64
        };
        best = best.max(value);
    }
    Ok(best)
}

/// An item for the removable knapsack problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnapsackItem {
    pub size: f64,
    pub value: f64,
}

impl KnapsackItem {
    pub fn new(size: f64, value: f64) -> Self {
        assert!(size > 0.0 && size.is_finite(), "size must be positive");
        assert!(value > 0.0 && value.is_finite(), "value must be positive");
        KnapsackItem { size, value }
    }

    pub fn density(&self) -> f64 {
        self.value / self.size
    }
}

/// Maximum total value over subsets with total size at most `capacity`, by
/// subset enumeration with a remaining-value prune. Real-valued sizes rule
/// out a pseudo-polynomial table; the guard keeps runtimes in check.
pub fn knapsack_opt(items: &[KnapsackItem], capacity: f64) -> Result<f64, OracleError> {
    if items.len() > KNAPSACK_MAX_ITEMS {
        return Err(OracleError::InstanceTooLarge {
            n: items.len(),
            guard: KNAPSACK_MAX_ITEMS,
        });
    }
    let mut suffix_value = vec![0.0f64; items.len() + 1];
    for i in (0..items.len()).rev() {
        suffix_value[i] = suffix_value[i + 1] + items[i].value;
    }
    let mut best = 0.0f64;
    fn descend(
        items: &[KnapsackItem],
        suffix_value: &[f64],
        i: usize,
        room: f64,
        value: f64,
        best: &mut f64,
    ) {
        if value > *best {
            *best = value;
        }
        if i == items.len() || value + suffix_value[i] <= *best {
            return;
        }
        if items[i].size <= room {
            descend(
                items,
                suffix_value,
                i + 1,
                room - items[i].size,
                value + items[i].value,
                best,
            );
        }
        descend(items, suffix_value, i + 1, room, value, best);
    }
    descend(items, &suffix_value, 0, capacity, 0.0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{self, GeneratorSpec};
    use crate::interval::Interval;

    #[test]
    fn flanked_family_optimum_is_the_two_flanks() {
        let inst = gen::generate(&GeneratorSpec::Flanked { n: 10 })
            .unwrap()
            .instance;
        let sol = opt_unweighted(&inst);
        assert_eq!(sol.size, 2);
        assert_eq!(sol.witness, vec![IntervalId(8), IntervalId(9)]);
        assert_eq!(brute_force_opt(&inst, false).unwrap(), 2.0);
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(vec![]);
        assert_eq!(opt_unweighted(&inst).size, 0);
        assert_eq!(opt_weighted(&inst).weight, 0.0);
        assert_eq!(brute_force_opt(&inst, false).unwrap(), 0.0);
    }

    #[test]
    fn pairwise_overlap_chain() {
        let inst = Instance::new(vec![
            Interval::new(0, 0.0, 2.0),
            Interval::new(1, 1.0, 3.0),
            Interval::new(2, 2.5, 4.5),
        ]);
        // 0 conflicts 1, 1 conflicts 2, but 0 and 2 are disjoint.
        assert_eq!(opt_unweighted(&inst).size, 2);
        let chain = Instance::new(vec![
            Interval::new(0, 0.0, 2.0),
            Interval::new(1, 1.0, 3.0),
            Interval::new(2, 1.5, 3.5),
        ]);
        assert_eq!(brute_force_opt(&chain, false).unwrap(), 1.0);
        assert_eq!(opt_unweighted(&chain).size, 1);
    }

    #[test]
    fn weighted_basics() {
        let single = Instance::new(vec![Interval::weighted(0, 0.0, 1.0, 7.0)]);
        assert_eq!(opt_weighted(&single).weight, 7.0);

        let copies = Instance::new(vec![
            Interval::weighted(0, 0.0, 1.0, 3.0),
            Interval::weighted(1, 0.0, 1.0, 5.0),
        ]);
        let sol = opt_weighted(&copies);
        assert_eq!(sol.weight, 5.0);
        assert_eq!(sol.witness, vec![IntervalId(1)]);
    }

    #[test]
    fn weighted_tie_break_prefers_smallest_id_set() {
        // {0} and {1} both weigh 2: pick {0}.
        let tie = Instance::new(vec![
            Interval::weighted(0, 0.0, 1.0, 2.0),
            Interval::weighted(1, 0.0, 1.0, 2.0),
        ]);
        assert_eq!(opt_weighted(&tie).witness, vec![IntervalId(0)]);

        // {0,1} and {2} both weigh 2: {0,1} is lexicographically smaller.
        let split = Instance::new(vec![
            Interval::weighted(0, 0.0, 1.0, 1.0),
            Interval::weighted(1, 1.0, 2.0, 1.0),
            Interval::weighted(2, 0.0, 2.0, 2.0),
        ]);
        assert_eq!(
            opt_weighted(&split).witness,
            vec![IntervalId(0), IntervalId(1)]
        );
    }

    #[test]
    fn random_instances_match_brute_force() {
        for seed in 0..100u64 {
            let inst = gen::generate(&GeneratorSpec::Random {
                n: 8,
                k: 3,
                weights: gen::WeightMode::Uniform,
                seed,
            })
            .unwrap()
            .instance;
            let bf_unweighted = brute_force_opt(&inst, false).unwrap();
            assert_eq!(
                opt_unweighted(&inst).size as f64,
                bf_unweighted,
                "seed {seed}"
            );
            let bf_weighted = brute_force_opt(&inst, true).unwrap();
            assert_eq!(opt_weighted(&inst).weight, bf_weighted, "seed {seed}");

            // Witnesses are feasible.
            let w = opt_weighted(&inst);
            let refs: Vec<&Interval> = w.witness.iter().map(|&id| inst.get(id)).collect();
            assert!(is_feasible_set(&refs));
            let u = opt_unweighted(&inst);
            let refs: Vec<&Interval> = u.witness.iter().map(|&id| inst.get(id)).collect();
            assert!(is_feasible_set(&refs));
        }
    }

    #[test]
    fn unit_weights_agree_with_unweighted() {
        for seed in 100..140u64 {
            let inst = gen::generate(&GeneratorSpec::Random {
                n: 7,
                k: 2,
                weights: gen::WeightMode::Unit,
                seed,
            })
            .unwrap()
            .instance;
            assert_eq!(
                opt_weighted(&inst).weight,
                opt_unweighted(&inst).size as f64
            );
        }
    }

    #[test]
    fn knapsack_examples() {
        let items = [
            KnapsackItem::new(6.0, 6.0),
            KnapsackItem::new(5.0, 5.0),
            KnapsackItem::new(5.0, 5.0),
        ];
        assert_eq!(knapsack_opt(&items, 10.0).unwrap(), 10.0);
        assert_eq!(knapsack_opt(&[], 10.0).unwrap(), 0.0);
        assert_eq!(
            knapsack_opt(&[KnapsackItem::new(4.0, 9.0)], 3.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn guards_fire() {
        let big = Instance::new(
            (0..21)
                .map(|i| Interval::new(i, i as f64, i as f64 + 1.0))
                .collect(),
        );
        assert!(matches!(
            brute_force_opt(&big, false),
            Err(OracleError::InstanceTooLarge { .. })
        ));
        let items: Vec<KnapsackItem> = (0..26).map(|_| KnapsackItem::new(1.0, 1.0)).collect();
        assert!(matches!(
            knapsack_opt(&items, 5.0),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }
}
