//! Execution of deterministic online algorithms with revocable acceptances.
//!
//! The engine replays an algorithm over one arrival order, enumerates all
//! orders for exact expectations (rational arithmetic), and estimates the
//! same expectations by seeded Monte Carlo sampling. Algorithms see only the
//! current held set and the arriving interval; the engine never exposes the
//! instance size or unarrived items.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::Instance;
use crate::interval::{is_feasible_set, Interval, IntervalId};
use crate::order::{self, ArrivalOrder};
use crate::ratio;

/// Guard for exact enumeration: `8! = 40320` runs.
pub const EXACT_MAX_ITEMS: usize = 8;

/// What an algorithm does with one arrival. A `Replace` discards a currently
/// held conflicting interval and takes the arrival in its place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
    Replace(IntervalId),
}

/// Event log of one online execution plus the final solution. Discarded
/// intervals (rejected or replaced) never reappear in the held set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunTrace {
    pub events: Vec<(IntervalId, Decision)>,
    pub final_solution: Vec<IntervalId>,
    /// Held set after each arrival; recorded only by [`run_with_snapshots`].
    pub snapshots: Option<Vec<Vec<IntervalId>>>,
}

impl RunTrace {
    pub fn final_size(&self) -> usize {
        self.final_solution.len()
    }

    pub fn final_weight(&self, inst: &Instance) -> f64 {
        self.final_solution
            .iter()
            .map(|&id| inst.get(id).weight)
            .sum()
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("arrival order is not a bijection on the instance ids")]
    InvalidOrder,
    #[error("algorithm returned an infeasible decision on arrival {arrival}: {reason}")]
    IllegalDecision { arrival: IntervalId, reason: String },
    #[error("instance too large for exact enumeration: {n} items exceeds guard {guard}")]
    InstanceTooLarge { n: usize, guard: usize },
}

/// A deterministic online decision rule with optional private memory.
/// Fresh state is created per run; decisions may depend only on the observed
/// history.
pub trait OnlineAlgorithm {
    fn decide(&mut self, held: &[&Interval], arrival: &Interval) -> Decision;
}

/// The greedy algorithm with replacement on strict containment: accept when
/// nothing held conflicts; otherwise take the arrival iff it is strictly
/// inside some held interval, discarding that interval; otherwise reject.
/// Identical spans are rejected.
#[derive(Debug, Default, Clone, Copy)]
pub struct GreedyReplace;

/// One decision of [`GreedyReplace`] against a feasible held set.
///
/// A feasible held set can contain at most one interval strictly containing
/// the arrival; this is asserted rather than assumed.
pub fn greedy_replace_step(held: &[&Interval], arrival: &Interval) -> Decision {
    let conflicting: Vec<&&Interval> = held.iter().filter(|h| h.conflicts(arrival)).collect();
    if conflicting.is_empty() {
        return Decision::Accept;
    }
    let containers: Vec<&&&Interval> = conflicting
        .iter()
        .filter(|h| h.strictly_contains(arrival))
        .collect();
    assert!(
        containers.len() <= 1,
        "disjoint held set cannot strictly contain an arrival twice"
    );
    match containers.first() {
        Some(h) => Decision::Replace(h.id),
        None => Decision::Reject,
    }
}

impl OnlineAlgorithm for GreedyReplace {
    fn decide(&mut self, held: &[&Interval], arrival: &Interval) -> Decision {
        greedy_replace_step(held, arrival)
    }
}

/// Run `alg` over one arrival order.
pub fn run<A: OnlineAlgorithm>(
    alg: &mut A,
    inst: &Instance,
    order: &ArrivalOrder,
) -> Result<RunTrace, EngineError> {
    run_inner(alg, inst, order, false)
}

/// Like [`run`], recording the held set after every arrival.
pub fn run_with_snapshots<A: OnlineAlgorithm>(
    alg: &mut A,
    inst: &Instance,
    order: &ArrivalOrder,
) -> Result<RunTrace, EngineError> {
    run_inner(alg, inst, order, true)
}

fn run_inner<A: OnlineAlgorithm>(
    alg: &mut A,
    inst: &Instance,
    order: &ArrivalOrder,
    snapshots: bool,
) -> Result<RunTrace, EngineError> {
    if !order.is_valid_for(inst) {
        return Err(EngineError::InvalidOrder);
    }
    let mut held: Vec<IntervalId> = Vec::new();
    let mut events = Vec::with_capacity(order.len());
    let mut snaps = snapshots.then(Vec::new);
    for &id in &order.0 {
        let arrival = inst.get(id);
        let held_refs: Vec<&Interval> = held.iter().map(|&h| inst.get(h)).collect();
        let decision = alg.decide(&held_refs, arrival);
        match decision {
            Decision::Accept => {
                if held_refs.iter().any(|h| h.conflicts(arrival)) {
                    return Err(EngineError::IllegalDecision {
                        arrival: id,
                        reason: "accepted while conflicting with the held set".into(),
                    });
                }
                held.push(id);
            }
            Decision::Reject => {}
            Decision::Replace(victim) => {
                let Some(pos) = held.iter().position(|&h| h == victim) else {
                    return Err(EngineError::IllegalDecision {
                        arrival: id,
                        reason: format!("replace victim {victim} is not held"),
                    });
                };
                if !inst.get(victim).conflicts(arrival) {
                    return Err(EngineError::IllegalDecision {
                        arrival: id,
                        reason: format!("replace victim {victim} does not conflict the arrival"),
                    });
                }
                if held_refs
                    .iter()
                    .any(|h| h.id != victim && h.conflicts(arrival))
                {
                    return Err(EngineError::IllegalDecision {
                        arrival: id,
                        reason: "replacement leaves the held set infeasible".into(),
                    });
                }
                held.remove(pos);
                held.push(id);
            }
        }
        events.push((id, decision));
        if let Some(s) = snaps.as_mut() {
            s.push(held.clone());
        }
    }
    debug_assert!({
        let refs: Vec<&Interval> = held.iter().map(|&h| inst.get(h)).collect();
        is_feasible_set(&refs)
    });
    let mut final_solution = held;
    final_solution.sort();
    Ok(RunTrace {
        events,
        final_solution,
        snapshots: snaps,
    })
}

/// Exact expectation of `metric` over all `n!` arrival orders, as a rational.
/// Guarded at [`EXACT_MAX_ITEMS`] items.
pub fn exact_expectation<A, MkA, M>(
    make_alg: MkA,
    inst: &Instance,
    metric: M,
) -> Result<BigRational, EngineError>
where
    A: OnlineAlgorithm,
    MkA: Fn() -> A,
    M: Fn(&RunTrace, &Instance) -> BigRational,
{
    if inst.len() > EXACT_MAX_ITEMS {
        return Err(EngineError::InstanceTooLarge {
            n: inst.len(),
            guard: EXACT_MAX_ITEMS,
        });
    }
    let mut sum = BigRational::zero();
    let mut count: u64 = 0;
    let mut failure: Option<EngineError> = None;
    order::for_each_order(inst, |order| {
        if failure.is_some() {
            return;
        }
        let mut alg = make_alg();
        match run(&mut alg, inst, order) {
            Ok(trace) => {
                sum += metric(&trace, inst);
                count += 1;
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(sum / BigRational::from_u64(count).unwrap())
}

/// Monte Carlo estimate of a run metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Sample mean and standard error of `metric` over `trials` uniform arrival
/// orders drawn from the seeded generator. Identical seeds give identical
/// output.
pub fn monte_carlo<A, MkA, M>(
    make_alg: MkA,
    inst: &Instance,
    trials: u64,
    seed: u64,
    metric: M,
) -> Result<McEstimate, EngineError>
where
    A: OnlineAlgorithm,
    MkA: Fn() -> A,
    M: Fn(&RunTrace, &Instance) -> f64,
{
    assert!(trials >= 1, "at least one trial required");
    let mut rng = order::rng_from_seed(seed);
    let mut ids: Vec<IntervalId> = inst.ids().collect();
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..trials {
        order::shuffle(&mut ids, &mut rng);
        let order = ArrivalOrder(ids.clone());
        let mut alg = make_alg();
        let value = metric(&run(&mut alg, inst, &order)?, inst);
        sum += value;
        sum_sq += value * value;
    }
    let mean = sum / trials as f64;
    let std_error = if trials > 1 {
        let var = (sum_sq - sum * sum / trials as f64) / (trials - 1) as f64;
        (var.max(0.0) / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        std_error,
        trials,
    })
}

/// Common run metrics.
pub mod metrics {
    use super::*;

    pub fn size(trace: &RunTrace, _inst: &Instance) -> BigRational {
        ratio::int(trace.final_size() as u64)
    }

    pub fn size_f64(trace: &RunTrace, _inst: &Instance) -> f64 {
        trace.final_size() as f64
    }

    pub fn weight(trace: &RunTrace, inst: &Instance) -> BigRational {
        trace
            .final_solution
            .iter()
            .map(|&id| ratio::from_f64(inst.get(id).weight))
            .sum()
    }

    pub fn weight_f64(trace: &RunTrace, inst: &Instance) -> f64 {
        trace.final_weight(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{self, GeneratorSpec};
    use crate::oracle;
    use crate::ratio::rat;

    fn flanked(n: usize) -> Instance {
        gen::generate(&GeneratorSpec::Flanked { n })
            .unwrap()
            .instance
    }

    #[test]
    fn greedy_replace_steps() {
        let m = Interval::new(0, 0.0, 10.0);
        let s = Interval::new(1, 2.0, 3.0);
        assert_eq!(
            greedy_replace_step(&[&m], &s),
            Decision::Replace(IntervalId(0))
        );

        let l = Interval::new(2, -0.5, 0.5);
        assert_eq!(greedy_replace_step(&[&l], &m), Decision::Reject);

        assert_eq!(greedy_replace_step(&[], &m), Decision::Accept);

        // Identical spans are rejected, never treated as containment.
        let copy = Interval::new(3, 0.0, 10.0);
        assert_eq!(greedy_replace_step(&[&m], &copy), Decision::Reject);
    }

    #[test]
    fn middle_first_pins_solution_size_one() {
        let inst = flanked(6);
        // Ids 0..n-2 are the identical middles; any order starting with one
        // of them blocks everything else.
        for first in 0..4 {
            let mut ids: Vec<IntervalId> = inst.ids().collect();
            ids.swap(0, first);
            let trace = run(&mut GreedyReplace, &inst, &ArrivalOrder(ids)).unwrap();
            assert_eq!(trace.final_size(), 1);
        }
    }

    #[test]
    fn flanks_first_reach_optimum() {
        let inst = flanked(6);
        let mut ids: Vec<IntervalId> = inst.ids().collect();
        // Left flank (id n-2) then right flank (id n-1), then middles.
        ids.rotate_right(2);
        let trace = run(&mut GreedyReplace, &inst, &ArrivalOrder(ids)).unwrap();
        assert_eq!(trace.final_size(), 2);
        assert_eq!(trace.events[0].1, Decision::Accept);
        assert_eq!(trace.events[1].1, Decision::Accept);
        assert!(trace.events[2..]
            .iter()
            .all(|(_, d)| *d == Decision::Reject));
    }

    #[test]
    fn empty_instance_gives_empty_trace() {
        let inst = Instance::new(vec![]);
        let trace = run(&mut GreedyReplace, &inst, &ArrivalOrder(vec![])).unwrap();
        assert!(trace.events.is_empty());
        assert!(trace.final_solution.is_empty());
    }

    #[test]
    fn invalid_orders_are_rejected() {
        let inst = flanked(4);
        assert!(matches!(
            run(
                &mut GreedyReplace,
                &inst,
                &ArrivalOrder(vec![IntervalId(0)])
            ),
            Err(EngineError::InvalidOrder)
        ));
        let dup = ArrivalOrder(vec![IntervalId(0); 4]);
        assert!(matches!(
            run(&mut GreedyReplace, &inst, &dup),
            Err(EngineError::InvalidOrder)
        ));
    }

    #[test]
    fn illegal_decisions_are_reported() {
        struct AlwaysAccept;
        impl OnlineAlgorithm for AlwaysAccept {
            fn decide(&mut self, _held: &[&Interval], _arrival: &Interval) -> Decision {
                Decision::Accept
            }
        }
        let inst = flanked(4);
        let order = ArrivalOrder::identity(&inst);
        assert!(matches!(
            run(&mut AlwaysAccept, &inst, &order),
            Err(EngineError::IllegalDecision { .. })
        ));
    }

    #[test]
    fn flanked_family_exact_expectation() {
        let inst = flanked(4);
        let e = exact_expectation(|| GreedyReplace, &inst, metrics::size).unwrap();
        assert_eq!(e, rat(3, 2));
        // ratio OPT / E = 2 / (3/2) = 4/3 = 2n/(n+2) at n = 4.
        let opt = oracle::opt_unweighted(&inst).size;
        assert_eq!(ratio::int(opt as u64) / e, rat(4, 3));
    }

    #[test]
    fn single_interval_expectation_is_one() {
        let inst = Instance::new(vec![Interval::new(0, 0.0, 1.0)]);
        let e = exact_expectation(|| GreedyReplace, &inst, metrics::size).unwrap();
        assert_eq!(e, rat(1, 1));
    }

    #[test]
    fn exact_guard_fires() {
        let inst = Instance::new(
            (0..9)
                .map(|i| Interval::new(i, i as f64, i as f64 + 1.0))
                .collect(),
        );
        assert!(matches!(
            exact_expectation(|| GreedyReplace, &inst, metrics::size),
            Err(EngineError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn single_trial_equals_run_on_sampled_order() {
        let inst = flanked(7);
        let est = monte_carlo(|| GreedyReplace, &inst, 1, 99, metrics::size_f64).unwrap();
        // The first shuffled order under seed 99 must reproduce the estimate.
        let mut rng = crate::order::rng_from_seed(99);
        let mut ids: Vec<IntervalId> = inst.ids().collect();
        crate::order::shuffle(&mut ids, &mut rng);
        let trace = run(&mut GreedyReplace, &inst, &ArrivalOrder(ids)).unwrap();
        assert_eq!(est.mean, trace.final_size() as f64);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn constant_metric_has_zero_std_error() {
        let inst = Instance::new(vec![Interval::new(0, 0.0, 1.0), Interval::new(1, 2.0, 3.0)]);
        let est = monte_carlo(|| GreedyReplace, &inst, 50, 7, metrics::size_f64).unwrap();
        assert_eq!(est.mean, 2.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn large_flanked_family_monte_carlo_tracks_closed_form() {
        let inst = flanked(100);
        let est = monte_carlo(|| GreedyReplace, &inst, 100_000, 2024, metrics::size_f64).unwrap();
        let expected = 102.0 / 100.0;
        assert!(
            (est.mean - expected).abs() <= 3.0 * est.std_error,
            "mean {} expected {} se {}",
            est.mean,
            expected,
            est.std_error
        );
    }

    #[test]
    fn monte_carlo_converges_to_exact_expectation() {
        let inst = gen::generate(&GeneratorSpec::Random {
            n: 6,
            k: 2,
            weights: gen::WeightMode::Unit,
            seed: 5,
        })
        .unwrap()
        .instance;
        let exact = exact_expectation(|| GreedyReplace, &inst, metrics::size).unwrap();
        let exact_f = crate::ratio::to_f64(&exact);
        let est = monte_carlo(|| GreedyReplace, &inst, 1_000_000, 31, metrics::size_f64).unwrap();
        let tol = 4.0 * est.std_error.max(1e-12);
        assert!(
            (est.mean - exact_f).abs() <= tol,
            "mc {} vs exact {} (se {})",
            est.mean,
            exact_f,
            est.std_error
        );
    }

    #[test]
    fn greedy_is_greedy_and_replacements_are_containments() {
        for seed in 0..50u64 {
            let inst = gen::generate(&GeneratorSpec::Random {
                n: 7,
                k: 3,
                weights: gen::WeightMode::Unit,
                seed,
            })
            .unwrap()
            .instance;
            let order = ArrivalOrder::sampled(&inst, seed ^ 0xabc);
            let trace = run_with_snapshots(&mut GreedyReplace, &inst, &order).unwrap();
            let snaps = trace.snapshots.as_ref().unwrap();
            let mut discarded: Vec<IntervalId> = Vec::new();
            for (i, (id, decision)) in trace.events.iter().enumerate() {
                let held_before: Vec<IntervalId> =
                    if i == 0 { vec![] } else { snaps[i - 1].clone() };
                let arrival = inst.get(*id);
                let conflict = held_before.iter().any(|&h| inst.get(h).conflicts(arrival));
                match decision {
                    Decision::Accept => assert!(!conflict),
                    // Greedy: a conflict-free arrival is always accepted.
                    Decision::Reject => {
                        assert!(conflict, "greedy must accept conflict-free arrivals");
                        discarded.push(*id);
                    }
                    Decision::Replace(victim) => {
                        assert!(inst.get(*victim).strictly_contains(arrival));
                        discarded.push(*victim);
                    }
                }
                // Nothing discarded ever reappears.
                for snap in &snaps[i..] {
                    for d in &discarded {
                        assert!(!snap.contains(d));
                    }
                }
            }
        }
    }

    #[test]
    fn single_length_runs_never_replace_and_stay_above_half_opt() {
        for seed in 200..240u64 {
            let inst = gen::generate(&GeneratorSpec::Random {
                n: 7,
                k: 1,
                weights: gen::WeightMode::Unit,
                seed,
            })
            .unwrap()
            .instance;
            let opt = oracle::opt_unweighted(&inst).size;
            crate::order::for_each_order(&inst, |order| {
                let trace = run(&mut GreedyReplace, &inst, order).unwrap();
                assert!(trace
                    .events
                    .iter()
                    .all(|(_, d)| !matches!(d, Decision::Replace(_))));
                assert!(trace.final_size() * 2 >= opt);
                assert!(trace.final_size() <= opt);
            });
        }
    }
}
