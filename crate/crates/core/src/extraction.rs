//! Single-bit randomness extraction from arrival order.
//!
//! Three pull-based processes consume the same arrival stream a host
//! algorithm sees, so extraction composes with online execution without
//! lookahead:
//!
//! * [`parity_bit`]: fix the first item's type; when the first item of a
//!   different type arrives at (1-based) index `i`, emit `1 - (i mod 2)`.
//!   Under sampling from a large population with first-type frequency
//!   `alpha`, the bit is 1 with probability
//!   `f(alpha) = (2 alpha^2 - 2 alpha - 1) / ((alpha + 1)(alpha - 2))`,
//!   which stays inside `(1/2, 2/3)`.
//! * [`pair_order_bit`]: read exactly two items and emit 1 iff the first
//!   precedes the second in the global item ordering. Unbiased whenever all
//!   items are distinct.
//! * [`combine_bit`]: if the first two items differ, emit 1 iff the second
//!   is smaller; otherwise fall back to the parity process over the full
//!   stream. Worst-case bias `g(r) = (1 - r)/2 + r/(1 + r)`, maximized at
//!   `r = sqrt(2) - 1` where it reaches `2 - sqrt(2)`.
//!
//! Items are real vectors ordered lexicographically; two items are the same
//! type iff they are coordinate-wise equal.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{self, for_each_permutation};

/// An input item: a vector of finite reals, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Item(Vec<OrderedF64>);

/// Finite double with a total order. Negative zero is normalized on
/// construction so equality and ordering agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderedF64(f64);

impl OrderedF64 {
    fn new(x: f64) -> Self {
        assert!(x.is_finite(), "item coordinates must be finite");
        OrderedF64(if x == 0.0 { 0.0 } else { x })
    }
}

impl Eq for OrderedF64 {}

impl PartialOrd for OrderedF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for OrderedF64 {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl Item {
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(!coords.is_empty(), "items need at least one coordinate");
        Item(coords.into_iter().map(OrderedF64::new).collect())
    }

    pub fn scalar(x: f64) -> Self {
        Item::new(vec![x])
    }

    pub fn coords(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.0).collect()
    }
}

/// A successfully extracted bit and the arrival index (1-based) at which the
/// process resolved. Every process needs at least two arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extracted {
    pub bit: u8,
    pub resolved_at: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum ExtractionError {
    #[error("stream ended without a second item type")]
    NoSecondType,
    #[error("stream ended before the process could read enough items")]
    TooFewItems,
    #[error("the first two items are identical")]
    IdenticalFirstPair,
    #[error("every item in the stream is identical")]
    AllIdentical,
    #[error("parameter outside the open unit interval")]
    DomainError,
}

/// Counter process: emit 1 iff the first differently-typed item arrives at
/// an even index. Consumes nothing past resolution.
pub fn parity_bit<I: Iterator<Item = Item>>(stream: I) -> Result<Extracted, ExtractionError> {
    let mut stream = stream;
    let first = stream.next().ok_or(ExtractionError::NoSecondType)?;
    let mut index = 1usize;
    for item in stream {
        index += 1;
        if item != first {
            return Ok(Extracted {
                bit: 1 - (index % 2) as u8,
                resolved_at: index,
            });
        }
    }
    Err(ExtractionError::NoSecondType)
}

/// Comparison process: read exactly two items, emit 1 iff the first is
/// smaller. Fails on an identical first pair, which violates the
/// all-distinct assumption.
pub fn pair_order_bit<I: Iterator<Item = Item>>(stream: I) -> Result<Extracted, ExtractionError> {
    let mut stream = stream;
    let first = stream.next().ok_or(ExtractionError::TooFewItems)?;
    let second = stream.next().ok_or(ExtractionError::TooFewItems)?;
    if first == second {
        return Err(ExtractionError::IdenticalFirstPair);
    }
    Ok(Extracted {
        bit: u8::from(first < second),
        resolved_at: 2,
    })
}

/// Combined process: order comparison when the first two items differ,
/// otherwise the counter process with the first item defining the reference
/// type.
///
/// In the fallback branch the identical opening pair advances the counter by
/// one, not two: a stream whose third item already differs emits 1. This
/// offset is what makes the fallback favor 1 with probability `1/(1+r)`
/// given a repeated-type frequency `r`, the quantity the combined closed
/// form `g(r) = (1-r)/2 + r/(1+r)` is built from.
pub fn combine_bit<I: Iterator<Item = Item>>(stream: I) -> Result<Extracted, ExtractionError> {
    let mut stream = stream;
    let first = stream.next().ok_or(ExtractionError::TooFewItems)?;
    let second = stream.next().ok_or(ExtractionError::TooFewItems)?;
    if first != second {
        return Ok(Extracted {
            bit: u8::from(second < first),
            resolved_at: 2,
        });
    }
    let mut index = 2usize;
    for item in stream {
        index += 1;
        if item != first {
            return Ok(Extracted {
                bit: (index % 2) as u8,
                resolved_at: index,
            });
        }
    }
    Err(ExtractionError::AllIdentical)
}

/// Extract `count` independent unbiased bits from consecutive disjoint pairs.
/// Fails with the 1-based index of the first identical pair, or with
/// [`ExtractionError::TooFewItems`] when the stream is shorter than
/// `2 * count`.
pub fn pair_bits<I: Iterator<Item = Item>>(
    stream: I,
    count: usize,
) -> Result<Vec<u8>, (usize, ExtractionError)> {
    let mut stream = stream;
    let mut bits = Vec::with_capacity(count);
    for pair_index in 1..=count {
        match pair_order_bit(stream.by_ref()) {
            Ok(e) => bits.push(e.bit),
            Err(err) => return Err((pair_index, err)),
        }
    }
    Ok(bits)
}

/// Which analytic bias curve to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiasModel {
    /// Counter process with first-type frequency `alpha`.
    ParityBit,
    /// Combined process with first-arriver frequency `r` against an
    /// otherwise all-distinct population.
    CombineBit,
}

/// `Pr(bit = 1)` under the large-population sampling model.
pub fn analytic_bias(model: BiasModel, parameter: f64) -> Result<f64, ExtractionError> {
    if !(parameter > 0.0 && parameter < 1.0) {
        return Err(ExtractionError::DomainError);
    }
    Ok(match model {
        BiasModel::ParityBit => {
            let a = parameter;
            (2.0 * a * a - 2.0 * a - 1.0) / ((a + 1.0) * (a - 2.0))
        }
        BiasModel::CombineBit => {
            let r = parameter;
            (1.0 - r) / 2.0 + r / (1.0 + r)
        }
    })
}

/// Which extraction process an empirical run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProcessKind {
    Parity,
    PairOrder,
    Combine,
}

/// How trial streams are produced.
///
/// `WithReplacement` draws items i.i.d. by frequency, matching the
/// large-population analysis behind the closed-form curves.
/// `Permutation` shuffles an explicit finite multiset (weights are copy
/// counts), matching the actual random-order setting; its finite-size bias
/// legitimately deviates from the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplingMode {
    WithReplacement,
    Permutation,
}

/// A population: items with positive frequency weights plus a sampling mode.
#[derive(Debug, Clone)]
pub struct PopulationSpec {
    pub items: Vec<(Item, f64)>,
    pub mode: SamplingMode,
    /// Force this item to arrive first, the rest drawn i.i.d. This realizes
    /// the conditional bias given the first arriver's type, which is what
    /// the combined closed form describes. Ignored in permutation mode.
    pub forced_first: Option<Item>,
}

impl PopulationSpec {
    pub fn with_replacement(items: Vec<(Item, f64)>) -> Self {
        assert!(!items.is_empty());
        assert!(items.iter().all(|(_, w)| *w > 0.0 && w.is_finite()));
        PopulationSpec {
            items,
            mode: SamplingMode::WithReplacement,
            forced_first: None,
        }
    }

    /// Weights are interpreted as copy counts.
    pub fn permutation(items: Vec<(Item, u64)>) -> Self {
        assert!(!items.is_empty());
        assert!(items.iter().all(|(_, c)| *c > 0));
        PopulationSpec {
            items: items.into_iter().map(|(i, c)| (i, c as f64)).collect(),
            mode: SamplingMode::Permutation,
            forced_first: None,
        }
    }

    /// Two scalar types at frequencies `alpha` and `1 - alpha`.
    pub fn two_types(alpha: f64) -> Self {
        PopulationSpec::with_replacement(vec![
            (Item::scalar(0.0), alpha),
            (Item::scalar(1.0), 1.0 - alpha),
        ])
    }

    /// The population behind the combined-process curve at parameter `r`:
    /// one repeated type at frequency `r` that is forced to arrive first,
    /// plus `singletons` distinct items sharing the remaining mass, half of
    /// them ordered below the repeated type and half above so the
    /// comparison branch is exactly fair.
    pub fn combine_conditional(r: f64, singletons: usize) -> Self {
        assert!(r > 0.0 && r < 1.0 && singletons >= 2 && singletons.is_multiple_of(2));
        let repeated = Item::scalar(0.0);
        let mut items = vec![(repeated.clone(), r)];
        let each = (1.0 - r) / singletons as f64;
        for i in 0..singletons {
            let value = (i / 2 + 1) as f64;
            let signed = if i % 2 == 0 { value } else { -value };
            items.push((Item::scalar(signed), each));
        }
        PopulationSpec {
            items,
            mode: SamplingMode::WithReplacement,
            forced_first: Some(repeated),
        }
    }

    fn expand_multiset(&self) -> Vec<Item> {
        let mut out = Vec::new();
        for (item, count) in &self.items {
            let c = *count as u64;
            assert!(
                (*count - c as f64).abs() == 0.0,
                "permutation mode needs integer copy counts"
            );
            for _ in 0..c {
                out.push(item.clone());
            }
        }
        out
    }
}

/// Empirical estimate of `Pr(bit = 1)` with failures excluded from the
/// estimate and reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasEstimate {
    pub p_hat: f64,
    pub std_error: f64,
    pub failure_rate: f64,
    pub trials: u64,
}

/// Cap on i.i.d. draws per trial; a trial that never resolves within the cap
/// counts as a failure.
const WITH_REPLACEMENT_DRAW_CAP: usize = 1 << 20;

/// Run `trials` seeded extraction trials over the population.
pub fn empirical_bias(
    process: ProcessKind,
    population: &PopulationSpec,
    trials: u64,
    seed: u64,
) -> BiasEstimate {
    assert!(trials >= 1);
    let mut rng = order::rng_from_seed(seed);
    let mut ones = 0u64;
    let mut successes = 0u64;
    let mut failures = 0u64;

    let total_weight: f64 = population.items.iter().map(|(_, w)| w).sum();
    let mut multiset = match population.mode {
        SamplingMode::Permutation => population.expand_multiset(),
        SamplingMode::WithReplacement => Vec::new(),
    };

    for _ in 0..trials {
        let outcome = match population.mode {
            SamplingMode::WithReplacement => {
                let head = population.forced_first.iter().cloned();
                let sampler = std::iter::from_fn(|| {
                    let mut u = order::unit_f64(&mut rng) * total_weight;
                    for (item, w) in &population.items {
                        if u < *w {
                            return Some(item.clone());
                        }
                        u -= *w;
                    }
                    Some(population.items.last().unwrap().0.clone())
                })
                .take(WITH_REPLACEMENT_DRAW_CAP);
                run_process(process, head.chain(sampler))
            }
            SamplingMode::Permutation => {
                order::shuffle(&mut multiset, &mut rng);
                run_process(process, multiset.iter().cloned())
            }
        };
        match outcome {
            Ok(e) => {
                successes += 1;
                ones += u64::from(e.bit);
            }
            Err(_) => failures += 1,
        }
    }

    let p_hat = if successes > 0 {
        ones as f64 / successes as f64
    } else {
        f64::NAN
    };
    let std_error = if successes > 1 {
        (p_hat * (1.0 - p_hat) / successes as f64).sqrt()
    } else {
        f64::NAN
    };
    BiasEstimate {
        p_hat,
        std_error,
        failure_rate: failures as f64 / trials as f64,
        trials,
    }
}

fn run_process<I: Iterator<Item = Item>>(
    process: ProcessKind,
    stream: I,
) -> Result<Extracted, ExtractionError> {
    match process {
        ProcessKind::Parity => parity_bit(stream),
        ProcessKind::PairOrder => pair_order_bit(stream),
        ProcessKind::Combine => combine_bit(stream),
    }
}

/// Exact bias over every permutation of a finite multiset: the probability
/// that the process emits 1 (conditioned on resolving) and the share of
/// permutations on which it fails.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBias {
    pub pr_one: BigRational,
    pub failure_share: BigRational,
}

pub fn exact_bias_by_enumeration(process: ProcessKind, multiset: &[Item]) -> ExactBias {
    let mut ones = 0u64;
    let mut successes = 0u64;
    let mut failures = 0u64;
    for_each_permutation(multiset, |arrangement| {
        match run_process(process, arrangement.iter().cloned()) {
            Ok(e) => {
                successes += 1;
                ones += u64::from(e.bit);
            }
            Err(_) => failures += 1,
        }
    });
    let total = successes + failures;
    ExactBias {
        pr_one: if successes > 0 {
            BigRational::new(ones.into(), successes.into())
        } else {
            BigRational::zero()
        },
        failure_share: BigRational::new(failures.into(), total.into()),
    }
}

/// Exact `Pr(second < first | first two distinct)` over every permutation of
/// the multiset. Equals 1/2 for any multiset with at least two types: the
/// distinct ordered first-pairs come in swapped couples.
pub fn exact_pr_second_smaller_given_distinct(multiset: &[Item]) -> BigRational {
    let mut distinct = 0u64;
    let mut second_smaller = 0u64;
    for_each_permutation(multiset, |arrangement| {
        if arrangement.len() >= 2 && arrangement[0] != arrangement[1] {
            distinct += 1;
            if arrangement[1] < arrangement[0] {
                second_smaller += 1;
            }
        }
    });
    assert!(distinct > 0, "multiset needs at least two distinct items");
    BigRational::new(second_smaller.into(), distinct.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;

    fn items(chars: &str) -> Vec<Item> {
        chars
            .chars()
            .map(|c| Item::scalar((c as u8 - b'a') as f64))
            .collect()
    }

    #[test]
    fn parity_bit_examples() {
        let out = parity_bit(items("ab").into_iter()).unwrap();
        assert_eq!((out.bit, out.resolved_at), (1, 2));
        let out = parity_bit(items("aab").into_iter()).unwrap();
        assert_eq!((out.bit, out.resolved_at), (0, 3));
        assert_eq!(
            parity_bit(items("aaa").into_iter()),
            Err(ExtractionError::NoSecondType)
        );
    }

    #[test]
    fn parity_bit_stops_reading_at_resolution() {
        // A panicking tail proves the process never looks past resolution.
        let head = items("ab").into_iter();
        let tail = std::iter::from_fn(|| -> Option<Item> { panic!("read past resolution") });
        let out = parity_bit(head.chain(tail)).unwrap();
        assert_eq!(out.resolved_at, 2);
    }

    #[test]
    fn pair_order_bit_examples() {
        let up = vec![Item::new(vec![1.0, 2.0]), Item::new(vec![3.0, 4.0])];
        assert_eq!(pair_order_bit(up.into_iter()).unwrap().bit, 1);
        let down = vec![Item::new(vec![3.0, 4.0]), Item::new(vec![1.0, 2.0])];
        assert_eq!(pair_order_bit(down.into_iter()).unwrap().bit, 0);
        let same = vec![Item::new(vec![1.0, 2.0]), Item::new(vec![1.0, 2.0])];
        assert_eq!(
            pair_order_bit(same.into_iter()),
            Err(ExtractionError::IdenticalFirstPair)
        );
        assert_eq!(
            pair_order_bit(items("a").into_iter()),
            Err(ExtractionError::TooFewItems)
        );
    }

    #[test]
    fn lexicographic_order_is_positional() {
        let a = Item::new(vec![1.0, 9.0]);
        let b = Item::new(vec![2.0, 0.0]);
        assert!(a < b);
    }

    #[test]
    fn combine_bit_examples() {
        // Second smaller than first resolves to 1 immediately.
        let out = combine_bit(items("ba").into_iter()).unwrap();
        assert_eq!((out.bit, out.resolved_at), (1, 2));
        let out = combine_bit(items("ab").into_iter()).unwrap();
        assert_eq!((out.bit, out.resolved_at), (0, 2));
        // The identical opening pair advances the fallback counter by one:
        // a third differing item emits 1, a fourth would emit 0.
        let out = combine_bit(items("aab").into_iter()).unwrap();
        assert_eq!((out.bit, out.resolved_at), (1, 3));
        let out = combine_bit(items("aaab").into_iter()).unwrap();
        assert_eq!((out.bit, out.resolved_at), (0, 4));
        assert_eq!(
            combine_bit(items("aaa").into_iter()),
            Err(ExtractionError::AllIdentical)
        );
    }

    #[test]
    fn combine_never_fails_with_two_types_present() {
        for arrangement in ["aab", "aba", "baa", "abab", "bbba"] {
            assert!(combine_bit(items(arrangement).into_iter()).is_ok());
        }
    }

    #[test]
    fn pair_bits_examples() {
        assert_eq!(pair_bits(items("abcd").into_iter(), 2).unwrap(), vec![1, 1]);
        assert_eq!(pair_bits(items("dcba").into_iter(), 2).unwrap(), vec![0, 0]);
        assert_eq!(
            pair_bits(items("aabc").into_iter(), 2),
            Err((1, ExtractionError::IdenticalFirstPair))
        );
        assert_eq!(
            pair_bits(items("abc").into_iter(), 2),
            Err((2, ExtractionError::TooFewItems))
        );
    }

    #[test]
    fn analytic_curves_hit_known_points() {
        assert!((analytic_bias(BiasModel::ParityBit, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let r = 2f64.sqrt() - 1.0;
        assert!(
            (analytic_bias(BiasModel::CombineBit, r).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-12
        );
        assert!((analytic_bias(BiasModel::CombineBit, 1e-9).unwrap() - 0.5).abs() < 1e-6);
        assert!(analytic_bias(BiasModel::ParityBit, 0.0).is_err());
        assert!(analytic_bias(BiasModel::ParityBit, 1.0).is_err());
    }

    #[test]
    fn parity_curve_is_symmetric_and_inside_envelope() {
        for i in 1..100 {
            let a = i as f64 / 100.0;
            let f = analytic_bias(BiasModel::ParityBit, a).unwrap();
            let f_mirror = analytic_bias(BiasModel::ParityBit, 1.0 - a).unwrap();
            assert!((f - f_mirror).abs() < 1e-12);
            assert!(f > 0.5 && f < 2.0 / 3.0 + 1e-12);
        }
        for i in 1..100 {
            let r = i as f64 / 100.0;
            let g = analytic_bias(BiasModel::CombineBit, r).unwrap();
            assert!(g > 0.5 && g <= 2.0 - 2f64.sqrt() + 1e-12);
        }
    }

    #[test]
    fn five_distinct_items_give_exactly_half() {
        let five = items("abcde");
        let exact = exact_bias_by_enumeration(ProcessKind::PairOrder, &five);
        assert_eq!(exact.pr_one, rat(1, 2));
        assert_eq!(exact.failure_share, rat(0, 1));
    }

    #[test]
    fn second_smaller_given_distinct_is_exactly_half_on_mixed_multisets() {
        for multiset in ["aab", "aabbc", "aaabbc", "abcdefg", "aabbccd"] {
            assert_eq!(
                exact_pr_second_smaller_given_distinct(&items(multiset)),
                rat(1, 2),
                "{multiset}"
            );
        }
    }

    #[test]
    fn empirical_matches_analytic_on_a_grid() {
        // Two-type parity bias across the grid, 4-sigma tolerance.
        for (i, &alpha) in [0.05, 0.25, 0.5, 0.75, 0.95].iter().enumerate() {
            let est = empirical_bias(
                ProcessKind::Parity,
                &PopulationSpec::two_types(alpha),
                100_000,
                900 + i as u64,
            );
            let f = analytic_bias(BiasModel::ParityBit, alpha).unwrap();
            assert!(
                (est.p_hat - f).abs() <= 4.0 * est.std_error,
                "alpha {alpha}: {} vs {f} (se {})",
                est.p_hat,
                est.std_error
            );
            assert_eq!(est.failure_rate, 0.0);
        }
        for (i, &r) in [0.2, 0.414, 0.8].iter().enumerate() {
            let est = empirical_bias(
                ProcessKind::Combine,
                &PopulationSpec::combine_conditional(r, 10_000),
                100_000,
                1700 + i as u64,
            );
            let g = analytic_bias(BiasModel::CombineBit, r).unwrap();
            assert!(
                (est.p_hat - g).abs() <= 4.0 * est.std_error,
                "r {r}: {} vs {g} (se {})",
                est.p_hat,
                est.std_error
            );
        }
    }

    #[test]
    fn permutation_mode_pair_bit_is_fair() {
        let pop = PopulationSpec::permutation(items("abcde").into_iter().map(|i| (i, 1)).collect());
        let est = empirical_bias(ProcessKind::PairOrder, &pop, 20_000, 5);
        assert!((est.p_hat - 0.5).abs() <= 4.0 * est.std_error);
    }

    #[test]
    fn combine_on_finite_multisets_never_fails_with_two_types() {
        let exact = exact_bias_by_enumeration(ProcessKind::Combine, &items("aaab"));
        assert_eq!(exact.failure_share, rat(0, 1));
        let exact = exact_bias_by_enumeration(ProcessKind::Combine, &items("aabbcc"));
        assert_eq!(exact.failure_share, rat(0, 1));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Any arrangement of a multiset with at least two types
            // resolves; with one type it always fails.
            #[test]
            fn combine_resolves_iff_two_types_exist(types in proptest::collection::vec(0u8..4, 2..7)) {
                let multiset: Vec<Item> =
                    types.iter().map(|&t| Item::scalar(t as f64)).collect();
                let distinct = {
                    let mut t = types.clone();
                    t.sort_unstable();
                    t.dedup();
                    t.len()
                };
                for_each_permutation(&multiset, |arrangement| {
                    let outcome = combine_bit(arrangement.iter().cloned());
                    if distinct >= 2 {
                        assert!(outcome.is_ok());
                    } else {
                        assert_eq!(outcome, Err(ExtractionError::AllIdentical));
                    }
                });
            }

            // The conditional fairness of the comparison branch is exact for
            // every multiset shape, not just the enumerated samples.
            #[test]
            fn comparison_branch_is_fair_on_any_mixed_multiset(
                types in proptest::collection::vec(0u8..3, 2..7)
            ) {
                let distinct = {
                    let mut t = types.clone();
                    t.sort_unstable();
                    t.dedup();
                    t.len()
                };
                prop_assume!(distinct >= 2);
                let multiset: Vec<Item> =
                    types.iter().map(|&t| Item::scalar(t as f64)).collect();
                prop_assert_eq!(
                    exact_pr_second_smaller_given_distinct(&multiset),
                    rat(1, 2)
                );
            }
        }
    }
}
