//! Charging instrumentation for the greedy replace-on-containment algorithm.
//!
//! Every optimal interval is charged to exactly one interval of the online
//! solution. On arrival of an optimal interval that is taken, it is charged
//! to itself; if it is rejected, it is charged to one conflicting held
//! interval (largest overlap, ties by smaller start then smaller id).
//! Whenever a held interval is replaced, all charge on it moves to the
//! replacing interval: a transfer charge, received at most once per interval.
//! The total charge on a final interval `I` splits as
//! `phi(I) = direct(I) + transfer(I)`, and the charges over the final
//! solution always sum to the optimum size.
//!
//! Besides the per-run bookkeeping this module carries the closed-form
//! transfer-charge probabilities for base instances and the nested-trace
//! bound used to cap the expected transfer charge at 1/2 (hence expected
//! total charge at 2.5).

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{greedy_replace_step, Decision};
use crate::gen::BaseRoles;
use crate::instance::Instance;
use crate::interval::{is_feasible_set, Interval, IntervalId};
use crate::oracle;
use crate::order::{self, ArrivalOrder};
use crate::ratio::{interleave_prefix_probability, rat};

#[derive(Debug, Error)]
pub enum ChargingError {
    #[error("arrival order is not a bijection on the instance ids")]
    InvalidOrder,
    #[error("optimal-solution policy returned an invalid witness: {0}")]
    InvalidOptWitness(String),
    #[error("instance too large for exact enumeration: {n} items exceeds guard {guard}")]
    InstanceTooLarge { n: usize, guard: usize },
    #[error("trace profile violates the pending-arrival inequality at stage {stage}")]
    ProfileInfeasible { stage: usize },
}

/// How the optimal solution used for charging is chosen. The choice may
/// depend on the arrival order.
#[derive(Debug, Clone)]
pub enum OptPolicy {
    /// Earliest-finish greedy witness, independent of the order.
    Canonical,
    /// For base instances: the optimum containing the latest-arriving flank
    /// copy on each side, plus the canonical optimum of the small intervals.
    LatestArrival(BaseRoles),
}

impl OptPolicy {
    pub fn witness(&self, inst: &Instance, order: &ArrivalOrder) -> Vec<IntervalId> {
        match self {
            OptPolicy::Canonical => oracle::opt_unweighted(inst).witness,
            OptPolicy::LatestArrival(roles) => {
                let position: HashMap<IntervalId, usize> =
                    order.0.iter().enumerate().map(|(i, &id)| (id, i)).collect();
                let last = |ids: &[IntervalId]| -> IntervalId {
                    *ids.iter()
                        .max_by_key(|id| position.get(id).copied().unwrap_or(0))
                        .expect("role set is non-empty")
                };
                let mut witness = vec![last(&roles.l), last(&roles.r)];
                witness.extend(greedy_over(inst, &roles.s));
                witness.sort();
                witness
            }
        }
    }
}

fn greedy_over(inst: &Instance, ids: &[IntervalId]) -> Vec<IntervalId> {
    let mut sorted: Vec<&Interval> = ids.iter().map(|&id| inst.get(id)).collect();
    sorted.sort_by(|a, b| {
        a.finish
            .total_cmp(&b.finish)
            .then(a.start.total_cmp(&b.start))
            .then(a.id.cmp(&b.id))
    });
    let mut chosen = Vec::new();
    let mut frontier = f64::NEG_INFINITY;
    for iv in sorted {
        if iv.start >= frontier {
            chosen.push(iv.id);
            frontier = iv.finish;
        }
    }
    chosen
}

/// Charge split of one final interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeBreakdown {
    pub phi: u64,
    pub direct: u64,
    pub transfer: u64,
}

/// One charging event during a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChargeEvent {
    /// An optimal interval was taken and charged to itself.
    SelfCharge { id: IntervalId },
    /// An optimal interval was rejected and charged to a conflicting held
    /// interval.
    DirectCharge { opt: IntervalId, to: IntervalId },
    /// A replacement moved `amount` units of charge from victim to replacer.
    Transfer {
        victim: IntervalId,
        replacer: IntervalId,
        amount: u64,
    },
}

/// Full charging record of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChargingTrace {
    /// Final mapping: optimal id to the final interval carrying its charge.
    pub mapping: BTreeMap<IntervalId, IntervalId>,
    /// Charge split per final interval.
    pub charges: BTreeMap<IntervalId, ChargeBreakdown>,
    /// For each final interval, the maximal chain of replaced predecessors
    /// ending at it (earliest first).
    pub predecessor_traces: BTreeMap<IntervalId, Vec<IntervalId>>,
    pub events: Vec<ChargeEvent>,
    pub final_solution: Vec<IntervalId>,
    pub opt_witness: Vec<IntervalId>,
}

impl ChargingTrace {
    pub fn total_transfer(&self) -> u64 {
        self.events
            .iter()
            .map(|e| match e {
                ChargeEvent::Transfer { amount, .. } => *amount,
                _ => 0,
            })
            .sum()
    }

    pub fn max_phi(&self) -> u64 {
        self.charges.values().map(|c| c.phi).max().unwrap_or(0)
    }
}

/// Replay the greedy replace-on-containment algorithm over one order,
/// maintaining the charge mapping.
pub fn simulate_charging(
    inst: &Instance,
    order: &ArrivalOrder,
    policy: &OptPolicy,
) -> Result<ChargingTrace, ChargingError> {
    if !order.is_valid_for(inst) {
        return Err(ChargingError::InvalidOrder);
    }
    let witness = policy.witness(inst, order);
    validate_witness(inst, &witness)?;
    let opt_set: HashSet<IntervalId> = witness.iter().copied().collect();

    let mut held: Vec<IntervalId> = Vec::new();
    let mut preimage: HashMap<IntervalId, Vec<IntervalId>> = HashMap::new();
    let mut direct: HashMap<IntervalId, u64> = HashMap::new();
    let mut transfer: HashMap<IntervalId, u64> = HashMap::new();
    let mut pred: HashMap<IntervalId, IntervalId> = HashMap::new();
    let mut events = Vec::new();

    for &id in &order.0 {
        let arrival = inst.get(id);
        let held_refs: Vec<&Interval> = held.iter().map(|&h| inst.get(h)).collect();
        let decision = greedy_replace_step(&held_refs, arrival);
        match decision {
            Decision::Accept => held.push(id),
            Decision::Reject => {}
            Decision::Replace(victim) => {
                let moved = preimage.remove(&victim).unwrap_or_default();
                let amount = moved.len() as u64;
                assert!(
                    transfer.insert(id, amount).is_none(),
                    "an interval is transfer charged at most once"
                );
                preimage.insert(id, moved);
                pred.insert(id, victim);
                events.push(ChargeEvent::Transfer {
                    victim,
                    replacer: id,
                    amount,
                });
                held.retain(|&h| h != victim);
                held.push(id);
            }
        }
        if opt_set.contains(&id) {
            match decision {
                Decision::Accept | Decision::Replace(_) => {
                    preimage.entry(id).or_default().push(id);
                    *direct.entry(id).or_insert(0) += 1;
                    events.push(ChargeEvent::SelfCharge { id });
                }
                Decision::Reject => {
                    let target = direct_charge_target(&held_refs, arrival);
                    preimage.entry(target).or_default().push(id);
                    let d = direct.entry(target).or_insert(0);
                    *d += 1;
                    assert!(*d <= 2, "direct charge exceeds two on {target}");
                    events.push(ChargeEvent::DirectCharge {
                        opt: id,
                        to: target,
                    });
                }
            }
        }
    }

    held.sort();
    let final_solution = held;
    let mut mapping = BTreeMap::new();
    let mut charges = BTreeMap::new();
    for &id in &final_solution {
        let opt_ids = preimage.remove(&id).unwrap_or_default();
        for &o in &opt_ids {
            mapping.insert(o, id);
        }
        charges.insert(
            id,
            ChargeBreakdown {
                phi: opt_ids.len() as u64,
                direct: direct.get(&id).copied().unwrap_or(0),
                transfer: transfer.get(&id).copied().unwrap_or(0),
            },
        );
    }

    let mut predecessor_traces = BTreeMap::new();
    for &id in &final_solution {
        let mut chain = vec![id];
        let mut cur = id;
        while let Some(&victim) = pred.get(&cur) {
            chain.push(victim);
            cur = victim;
        }
        chain.reverse();
        predecessor_traces.insert(id, chain);
    }

    let trace = ChargingTrace {
        mapping,
        charges,
        predecessor_traces,
        events,
        final_solution,
        opt_witness: witness,
    };
    validate_trace(inst, &trace);
    Ok(trace)
}

/// Largest overlap first, then smaller start, then smaller id.
fn direct_charge_target(held: &[&Interval], arrival: &Interval) -> IntervalId {
    held.iter()
        .filter(|h| h.conflicts(arrival))
        .max_by(|a, b| {
            let overlap_a = a.finish.min(arrival.finish) - a.start.max(arrival.start);
            let overlap_b = b.finish.min(arrival.finish) - b.start.max(arrival.start);
            overlap_a
                .total_cmp(&overlap_b)
                .then(b.start.total_cmp(&a.start))
                .then(b.id.cmp(&a.id))
        })
        .expect("a rejected optimal interval conflicts something held")
        .id
}

fn validate_witness(inst: &Instance, witness: &[IntervalId]) -> Result<(), ChargingError> {
    let refs: Vec<&Interval> = witness.iter().map(|&id| inst.get(id)).collect();
    if !is_feasible_set(&refs) {
        return Err(ChargingError::InvalidOptWitness(
            "witness is infeasible".into(),
        ));
    }
    let unique: HashSet<IntervalId> = witness.iter().copied().collect();
    if unique.len() != witness.len() {
        return Err(ChargingError::InvalidOptWitness(
            "witness repeats ids".into(),
        ));
    }
    let best = oracle::opt_unweighted(inst).size;
    if witness.len() != best {
        return Err(ChargingError::InvalidOptWitness(format!(
            "witness size {} is suboptimal (optimum {best})",
            witness.len()
        )));
    }
    Ok(())
}

/// Per-run conservation and consistency checks; violations are bugs.
fn validate_trace(inst: &Instance, trace: &ChargingTrace) {
    assert_eq!(
        trace.mapping.len(),
        trace.opt_witness.len(),
        "every optimal interval maps to exactly one final interval"
    );
    let phi_sum: u64 = trace.charges.values().map(|c| c.phi).sum();
    assert_eq!(
        phi_sum as usize,
        trace.opt_witness.len(),
        "charge conservation"
    );
    for (id, c) in &trace.charges {
        assert_eq!(
            c.phi,
            c.direct + c.transfer,
            "phi splits into direct + transfer on {id}"
        );
        assert!(c.direct <= 2, "direct charge is at most two on {id}");
    }
    for target in trace.mapping.values() {
        assert!(trace.final_solution.contains(target));
    }
    let refs: Vec<&Interval> = trace
        .final_solution
        .iter()
        .map(|&id| inst.get(id))
        .collect();
    assert!(is_feasible_set(&refs), "final solution is feasible");
    // Each predecessor chain must replay as recorded replacements.
    for (id, chain) in &trace.predecessor_traces {
        assert_eq!(chain.last(), Some(id));
        for w in chain.windows(2) {
            assert!(trace.events.iter().any(|e| matches!(
                e,
                ChargeEvent::Transfer { victim, replacer, .. }
                if victim == &w[0] && replacer == &w[1]
            )));
        }
    }
}

/// Closed-form transfer-charge probabilities on a base instance, conditioned
/// only on the multiplicities.
///
/// With `N = L + R + M + S`:
///
/// * a double transfer needs a middle first and every flank before the first
///   small interval: `pr_tc2 = (M/N) * (L+R)! S! / (L+R+S)!`;
/// * a single transfer needs exactly one flank side complete before the first
///   small interval;
/// * the expectation telescopes to
///   `e_tc = (M/N) * [L! S! / (L+S)! + R! S! / (R+S)!]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseChargeAnalytics {
    pub pr_tc1: BigRational,
    pub pr_tc2: BigRational,
    pub e_tc: BigRational,
}

pub fn base_charge_analytics(spec: &crate::gen::BaseInstanceSpec) -> BaseChargeAnalytics {
    let n = spec.total();
    let m_over_n = BigRational::new(spec.m.into(), n.into());
    let both = interleave_prefix_probability(spec.l + spec.r, spec.s);
    let left = interleave_prefix_probability(spec.l, spec.s);
    let right = interleave_prefix_probability(spec.r, spec.s);
    let pr_tc2 = m_over_n.clone() * both.clone();
    let pr_tc1 = m_over_n.clone() * (left.clone() + right.clone() - both.clone() - both);
    let e_tc = pr_tc1.clone() + rat(2, 1) * pr_tc2.clone();
    debug_assert_eq!(e_tc, m_over_n * (left + right));
    BaseChargeAnalytics {
        pr_tc1,
        pr_tc2,
        e_tc,
    }
}

/// One stage of a predecessor-trace profile: the pending middle, flank, and
/// small-interval counts when the stage's middle was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStage {
    pub m: u64,
    pub l: u64,
    pub r: u64,
    pub s: u64,
}

impl TraceStage {
    pub fn total(&self) -> u64 {
        self.m + self.l + self.r + self.s
    }
}

/// A profile of `d` stages describing the pending sets along a predecessor
/// trace. Feasible profiles satisfy, for every stage `i`,
/// `s_i >= s_d + sum_{j>i} (m_j + l_j + r_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceProfile {
    pub stages: Vec<TraceStage>,
}

impl TraceProfile {
    pub fn check_feasible(&self) -> Result<(), ChargingError> {
        let d = self.stages.len();
        assert!(d >= 1, "a profile needs at least one stage");
        let s_last = self.stages[d - 1].s;
        for i in 0..d {
            let pending: u64 = self.stages[i + 1..]
                .iter()
                .map(|st| st.m + st.l + st.r)
                .sum();
            if self.stages[i].s < s_last + pending {
                return Err(ChargingError::ProfileInfeasible { stage: i });
            }
        }
        Ok(())
    }
}

/// Result of [`transfer_charge_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBound {
    /// The stage-by-stage expected-transfer-charge expression.
    pub bound: BigRational,
    /// The closed-form recursion value over the stage middle counts.
    pub nested: BigRational,
}

/// Per-trace expected transfer charge expression
/// `sum_i (M_i / N_i) [L_i! S_i! / (L_i+S_i)! + R_i! S_i! / (R_i+S_i)!]`,
/// plus the nested recursion value over the middle counts, which is asserted
/// to stay at or below 1/4.
pub fn transfer_charge_bound(profile: &TraceProfile) -> Result<TraceBound, ChargingError> {
    profile.check_feasible()?;
    let mut bound = BigRational::zero();
    for st in &profile.stages {
        let m_over_n = BigRational::new(st.m.into(), st.total().into());
        bound += m_over_n
            * (interleave_prefix_probability(st.l, st.s)
                + interleave_prefix_probability(st.r, st.s));
    }
    let xs: Vec<u64> = profile.stages.iter().map(|st| st.m).collect();
    let nested = nested_bound(&xs);
    assert!(
        nested <= rat(1, 4),
        "nested recursion value must stay at or below 1/4"
    );
    Ok(TraceBound { bound, nested })
}

/// The recursion `sum_i x_i / ((x_i + 2 + s_i) (s_i + 1))` with
/// `s_i = x_{i+1} + 2 + s_{i+1}` and `s_d = 3`. Merging the first two
/// arguments never decreases the value, so the whole family is bounded by
/// the single-stage case `x / (4 (x + 5)) < 1/4`.
pub fn nested_bound(xs: &[u64]) -> BigRational {
    assert!(!xs.is_empty());
    let d = xs.len();
    let mut s = vec![0u64; d];
    s[d - 1] = 3;
    for i in (0..d - 1).rev() {
        s[i] = xs[i + 1] + 2 + s[i + 1];
    }
    let mut total = BigRational::zero();
    for i in 0..d {
        total += BigRational::new(xs[i].into(), ((xs[i] + 2 + s[i]) * (s[i] + 1)).into());
    }
    total
}

/// Exact mean of the per-run total transfer charge over all arrival orders.
pub fn exact_mean_transfer_charge(
    inst: &Instance,
    policy: &OptPolicy,
) -> Result<BigRational, ChargingError> {
    guard_exact(inst)?;
    let mut sum: u64 = 0;
    let mut count: u64 = 0;
    let mut failure = None;
    order::for_each_order(inst, |order| {
        if failure.is_some() {
            return;
        }
        match simulate_charging(inst, order, policy) {
            Ok(trace) => {
                sum += trace.total_transfer();
                count += 1;
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(BigRational::new(sum.into(), count.into()))
}

/// Monte Carlo estimate of the same mean.
pub fn mc_mean_transfer_charge(
    inst: &Instance,
    policy: &OptPolicy,
    trials: u64,
    seed: u64,
) -> Result<crate::engine::McEstimate, ChargingError> {
    assert!(trials >= 1);
    let mut rng = order::rng_from_seed(seed);
    let mut ids: Vec<IntervalId> = inst.ids().collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        order::shuffle(&mut ids, &mut rng);
        let order = ArrivalOrder(ids.clone());
        let trace = simulate_charging(inst, &order, policy)?;
        let v = trace.total_transfer() as f64;
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / trials as f64;
    let std_error = if trials > 1 {
        let var = (sum_sq - sum * sum / trials as f64) / (trials - 1) as f64;
        (var.max(0.0) / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(crate::engine::McEstimate {
        mean,
        std_error,
        trials,
    })
}

/// Conditional expected charge per interval: the mean of `phi(I)` over the
/// orders whose final solution contains `I`. `None` marks intervals that
/// never end up in the solution (excluded from the maximum).
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeTable {
    pub per_interval: BTreeMap<IntervalId, Option<BigRational>>,
    pub max: BigRational,
}

/// Exact conditional charge table over all arrival orders.
pub fn exact_max_conditional_charge(
    inst: &Instance,
    policy: &OptPolicy,
) -> Result<ChargeTable, ChargingError> {
    guard_exact(inst)?;
    let mut phi_sum: HashMap<IntervalId, u64> = HashMap::new();
    let mut in_alg: HashMap<IntervalId, u64> = HashMap::new();
    let mut failure = None;
    order::for_each_order(inst, |order| {
        if failure.is_some() {
            return;
        }
        match simulate_charging(inst, order, policy) {
            Ok(trace) => {
                for (&id, c) in &trace.charges {
                    *phi_sum.entry(id).or_insert(0) += c.phi;
                    *in_alg.entry(id).or_insert(0) += 1;
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut per_interval = BTreeMap::new();
    let mut max = BigRational::zero();
    for id in inst.ids() {
        let cell = in_alg.get(&id).map(|&count| {
            BigRational::new(phi_sum.get(&id).copied().unwrap_or(0).into(), count.into())
        });
        if let Some(v) = &cell {
            if *v > max {
                max = v.clone();
            }
        }
        per_interval.insert(id, cell);
    }
    Ok(ChargeTable { per_interval, max })
}

/// Sampled conditional charge table; means are reported as rationals over
/// the sampled orders so the return shape matches the exact path.
pub fn mc_max_conditional_charge(
    inst: &Instance,
    policy: &OptPolicy,
    trials: u64,
    seed: u64,
) -> Result<ChargeTable, ChargingError> {
    assert!(trials >= 1);
    let mut rng = order::rng_from_seed(seed);
    let mut ids: Vec<IntervalId> = inst.ids().collect();
    let mut phi_sum: HashMap<IntervalId, u64> = HashMap::new();
    let mut in_alg: HashMap<IntervalId, u64> = HashMap::new();
    for _ in 0..trials {
        order::shuffle(&mut ids, &mut rng);
        let order = ArrivalOrder(ids.clone());
        let trace = simulate_charging(inst, &order, policy)?;
        for (&id, c) in &trace.charges {
            *phi_sum.entry(id).or_insert(0) += c.phi;
            *in_alg.entry(id).or_insert(0) += 1;
        }
    }
    let mut per_interval = BTreeMap::new();
    let mut max = BigRational::zero();
    for id in inst.ids() {
        let cell = in_alg.get(&id).map(|&count| {
            BigRational::new(phi_sum.get(&id).copied().unwrap_or(0).into(), count.into())
        });
        if let Some(v) = &cell {
            if *v > max {
                max = v.clone();
            }
        }
        per_interval.insert(id, cell);
    }
    Ok(ChargeTable { per_interval, max })
}

fn guard_exact(inst: &Instance) -> Result<(), ChargingError> {
    if inst.len() > crate::engine::EXACT_MAX_ITEMS {
        return Err(ChargingError::InstanceTooLarge {
            n: inst.len(),
            guard: crate::engine::EXACT_MAX_ITEMS,
        });
    }
    Ok(())
}
