//! The acceptance battery: every check the project must pass, runnable both
//! from the `acceptance` integration test and from the CLI `verify`
//! subcommand. Each criterion reports one pass/fail line.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use crate::apps;
use crate::charging::{self, OptPolicy, TraceProfile, TraceStage};
use crate::engine::{self, metrics, GreedyReplace};
use crate::extraction::{
    empirical_bias, exact_bias_by_enumeration, exact_pr_second_smaller_given_distinct, Item,
    PopulationSpec, ProcessKind,
};
use crate::gen::{self, BaseInstanceSpec, ComposedForm, GeneratorSpec};
use crate::instance::Instance;
use crate::interval::{Interval, IntervalId};
use crate::oracle::{self, KnapsackItem};
use crate::order::{self, for_each_order, for_each_permutation, ArrivalOrder};
use crate::ratio::{self, rat};

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(name: &'static str, failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            CriterionResult {
                name,
                passed: true,
                detail: summary,
            }
        } else {
            CriterionResult {
                name,
                passed: false,
                detail: failures.join("; "),
            }
        }
    }

    pub fn render(&self) -> String {
        format!(
            "[{}] {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Run every acceptance criterion.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        flanked_family_expectation(),
        base_closed_form(),
        small_s_cases(),
        charge_bound(),
        profile_bounds(),
        lower_bound_instances(),
        bias_formulas(),
        conditional_pair_fairness(),
        derandomized_apps(),
        global_ratio_sanity(),
    ]
}

/// Criterion 1: Exact expectation (n+2)/n and ratio 2n/(n+2) on the flanked family.
fn flanked_family_expectation() -> CriterionResult {
    let started = Instant::now();
    let mut failures = Vec::new();
    for n in 3..=8u64 {
        let inst = gen::generate(&GeneratorSpec::Flanked { n: n as usize })
            .unwrap()
            .instance;
        let e = engine::exact_expectation(|| GreedyReplace, &inst, metrics::size).unwrap();
        let expected = BigRational::new((n + 2).into(), n.into());
        if e != expected {
            failures.push(format!("n={n}: E={e} expected {expected}"));
        }
        let opt = ratio::int(oracle::opt_unweighted(&inst).size as u64);
        let ratio = opt / e;
        let expected_ratio = BigRational::new((2 * n).into(), (n + 2).into());
        if ratio != expected_ratio {
            failures.push(format!("n={n}: ratio {ratio} expected {expected_ratio}"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("runtime {:.2}s exceeds 5s", elapsed.as_secs_f64()));
    }
    CriterionResult::new(
        "flanked-family expectation",
        failures,
        format!(
            "E[size] = (n+2)/n and ratio = 2n/(n+2) exactly for n in 3..=8 ({:.2}s)",
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 2: Exact enumeration matches the closed-form expected transfer charge;
/// Monte Carlo at scale matches (1/2) * 50/55.
fn base_closed_form() -> CriterionResult {
    let started = Instant::now();
    let mut failures = Vec::new();
    for spec in [
        BaseInstanceSpec::new(1, 1, 2, 3),
        BaseInstanceSpec::new(1, 1, 1, 3),
        BaseInstanceSpec::new(2, 1, 1, 3),
        BaseInstanceSpec::new(1, 2, 1, 4),
        BaseInstanceSpec::new(2, 2, 1, 3),
    ] {
        let g = gen::base_instance(&spec);
        let policy = OptPolicy::LatestArrival(g.base_roles.clone().unwrap());
        let measured = charging::exact_mean_transfer_charge(&g.instance, &policy).unwrap();
        let predicted = charging::base_charge_analytics(&spec).e_tc;
        if measured != predicted {
            failures.push(format!(
                "{}: enumerated {measured} vs closed form {predicted}",
                g.label
            ));
        }
    }

    let big = BaseInstanceSpec::new(1, 1, 50, 3);
    let g = gen::base_instance(&big);
    let policy = OptPolicy::LatestArrival(g.base_roles.clone().unwrap());
    let est = charging::mc_mean_transfer_charge(&g.instance, &policy, 100_000, 4242).unwrap();
    let predicted = ratio::to_f64(&charging::base_charge_analytics(&big).e_tc);
    if (est.mean - predicted).abs() > 3.0 * est.std_error {
        failures.push(format!(
            "base(1,1,50,3): mc {} vs {} (se {})",
            est.mean, predicted, est.std_error
        ));
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 30.0 {
        failures.push(format!("runtime {:.2}s exceeds 30s", elapsed.as_secs_f64()));
    }
    CriterionResult::new(
        "base-instance closed form",
        failures,
        format!(
            "exact enumeration equals the transfer-charge closed form; 1e5-trial estimate within 3 SE at m=50 ({:.2}s)",
            elapsed.as_secs_f64()
        ),
    )
}

/// Criterion 3: One and two small intervals: expected transfer charge M/N and
/// (2/3) M/N exactly, and conditional charge at most 5/2.
fn small_s_cases() -> CriterionResult {
    let mut failures = Vec::new();
    let mut value_cases = 0;
    // The stated values M/N and (2/3) M/N are the closed form at L = R = 1.
    for s in [1u64, 2] {
        for m in 1..=4u64 {
            let spec = BaseInstanceSpec::new(1, 1, m, s);
            if spec.total() > 7 {
                continue;
            }
            value_cases += 1;
            let g = gen::base_instance(&spec);
            let policy = OptPolicy::LatestArrival(g.base_roles.clone().unwrap());
            let measured = charging::exact_mean_transfer_charge(&g.instance, &policy).unwrap();
            let m_over_n = BigRational::new(m.into(), spec.total().into());
            let expected = match s {
                1 => m_over_n,
                _ => rat(2, 3) * m_over_n,
            };
            if measured != expected {
                failures.push(format!("{}: {measured} vs {expected}", g.label));
            }
        }
    }
    // Wider flank counts still satisfy the general closed form and the
    // conditional charge bound.
    let mut bound_cases = 0;
    for s in [1u64, 2] {
        for l in 1..=3u64 {
            for r in 1..=3u64 {
                for m in 1..=4u64 {
                    let spec = BaseInstanceSpec::new(l, r, m, s);
                    if spec.total() > 7 {
                        continue;
                    }
                    bound_cases += 1;
                    let g = gen::base_instance(&spec);
                    let policy = OptPolicy::LatestArrival(g.base_roles.clone().unwrap());
                    let measured =
                        charging::exact_mean_transfer_charge(&g.instance, &policy).unwrap();
                    let predicted = charging::base_charge_analytics(&spec).e_tc;
                    if measured != predicted {
                        failures.push(format!("{}: {measured} vs {predicted}", g.label));
                    }
                    let table =
                        charging::exact_max_conditional_charge(&g.instance, &policy).unwrap();
                    if table.max > rat(5, 2) {
                        failures.push(format!("{}: max charge {}", g.label, table.max));
                    }
                }
            }
        }
    }
    CriterionResult::new(
        "small-interval counts one and two",
        failures,
        format!(
            "E[transfer] = M/N and (2/3)M/N exactly on {value_cases} unit-flank specs; \
             closed form and charge bound hold on {bound_cases} wider specs"
        ),
    )
}

/// Criterion 4: Conditional expected charge at most 5/2 on every base spec with at
/// most eight items and on the composed chains, with per-construction
/// transfer no larger than the construction run alone.
fn charge_bound() -> CriterionResult {
    let mut failures = Vec::new();
    let mut specs = 0;
    for l in 1..=4u64 {
        for r in 1..=4u64 {
            for m in 1..=4u64 {
                for s in 1..=5u64 {
                    let spec = BaseInstanceSpec::new(l, r, m, s);
                    if spec.total() > 8 {
                        continue;
                    }
                    specs += 1;
                    let g = gen::base_instance(&spec);
                    let policy = OptPolicy::LatestArrival(g.base_roles.clone().unwrap());
                    let table =
                        charging::exact_max_conditional_charge(&g.instance, &policy).unwrap();
                    if table.max > rat(5, 2) {
                        failures.push(format!("{}: max charge {}", g.label, table.max));
                    }
                }
            }
        }
    }

    // Composed chain, trimmed to the enumeration guard: the charge bound
    // holds, and each construction picks up no more transfer than it does
    // standing alone.
    let composed = gen::generate(&GeneratorSpec::Composed(ComposedForm::Trimmed)).unwrap();
    let table =
        charging::exact_max_conditional_charge(&composed.instance, &OptPolicy::Canonical).unwrap();
    if table.max > rat(5, 2) {
        failures.push(format!("composed(trimmed): max charge {}", table.max));
    }
    let constructions = composed.constructions.as_ref().unwrap();
    let composed_tc = per_construction_transfer(&composed.instance, constructions);
    for (i, roles) in constructions.iter().enumerate() {
        let mut members: Vec<IntervalId> = roles
            .l
            .iter()
            .chain(&roles.r)
            .chain(&roles.m)
            .chain(&roles.s)
            .copied()
            .collect();
        members.sort();
        members.dedup();
        let standalone_inst = Instance::new(
            members
                .iter()
                .enumerate()
                .map(|(new_id, &old)| {
                    let iv = composed.instance.get(old);
                    Interval::weighted(new_id, iv.start, iv.finish, iv.weight)
                })
                .collect(),
        );
        let standalone =
            charging::exact_mean_transfer_charge(&standalone_inst, &OptPolicy::Canonical).unwrap();
        if composed_tc[i] > standalone {
            failures.push(format!(
                "construction {i}: composed transfer {} exceeds standalone {}",
                composed_tc[i], standalone
            ));
        }
    }

    CriterionResult::new(
        "conditional charge bound",
        failures,
        format!(
            "max conditional charge <= 5/2 over {specs} base specs and the composed chain; \
             per-construction transfer bounded by the standalone run"
        ),
    )
}

/// Expected transfer charge attributed to each construction (by the middle
/// interval being replaced), exact over all orders.
fn per_construction_transfer(
    inst: &Instance,
    constructions: &[gen::ConstructionRoles],
) -> Vec<BigRational> {
    let mut sums = vec![0u64; constructions.len()];
    let mut count = 0u64;
    for_each_order(inst, |order| {
        let trace = charging::simulate_charging(inst, order, &OptPolicy::Canonical).unwrap();
        count += 1;
        for event in &trace.events {
            if let charging::ChargeEvent::Transfer { victim, amount, .. } = event {
                for (i, c) in constructions.iter().enumerate() {
                    if c.m.contains(victim) {
                        sums[i] += amount;
                    }
                }
            }
        }
    });
    sums.into_iter()
        .map(|s| BigRational::new(s.into(), count.into()))
        .collect()
}

/// Criterion 5: Ten thousand random feasible trace profiles: recursion value at most
/// 1/4 and the full bound expression at most 1/2, exact rationals.
fn profile_bounds() -> CriterionResult {
    let mut failures = Vec::new();
    let mut rng = order::rng_from_seed(0x7f0f);
    let quarter = rat(1, 4);
    let half = rat(1, 2);
    for case in 0..10_000usize {
        let d = 1 + order::bounded_u64(&mut rng, 6) as usize;
        let mut stages: Vec<TraceStage> = (0..d)
            .map(|_| TraceStage {
                m: 1 + order::bounded_u64(&mut rng, 50),
                l: 1 + order::bounded_u64(&mut rng, 3),
                r: 1 + order::bounded_u64(&mut rng, 3),
                s: 0,
            })
            .collect();
        let s_last = 3 + order::bounded_u64(&mut rng, 6);
        for i in (0..d).rev() {
            let pending: u64 = stages[i + 1..].iter().map(|st| st.m + st.l + st.r).sum();
            let slack = if i + 1 == d {
                0
            } else {
                order::bounded_u64(&mut rng, 5)
            };
            stages[i].s = s_last + pending + slack;
        }
        let profile = TraceProfile { stages };
        match charging::transfer_charge_bound(&profile) {
            Ok(tb) => {
                if tb.nested > quarter {
                    failures.push(format!("case {case}: recursion {} > 1/4", tb.nested));
                }
                if tb.bound > half {
                    failures.push(format!("case {case}: bound {} > 1/2", tb.bound));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
        if failures.len() > 5 {
            break;
        }
    }
    CriterionResult::new(
        "trace profile bounds",
        failures,
        "10000 random feasible profiles (d <= 6, middles <= 50): recursion <= 1/4, bound <= 1/2"
            .into(),
    )
}

/// Criterion 6: Lower-bound witnesses: E = 5/3 exactly, ratio 6/5 >= 12/11.
fn lower_bound_instances() -> CriterionResult {
    let mut failures = Vec::new();
    for spec in [GeneratorSpec::Lb1, GeneratorSpec::Lb2] {
        let g = gen::generate(&spec).unwrap();
        let e = engine::exact_expectation(|| GreedyReplace, &g.instance, metrics::size).unwrap();
        if e != rat(5, 3) {
            failures.push(format!("{}: E={e}", g.label));
        }
        let ratio = ratio::int(oracle::opt_unweighted(&g.instance).size as u64) / e;
        if ratio != rat(6, 5) || ratio < rat(12, 11) {
            failures.push(format!("{}: ratio {ratio}", g.label));
        }
    }
    CriterionResult::new(
        "lower-bound witnesses",
        failures,
        "both witnesses give E = 5/3 and ratio 6/5 >= 12/11".into(),
    )
}

/// Criterion 7: Bias formulas: exact fairness of the pair comparison, Monte Carlo
/// agreement with both closed forms, and curve maxima in the right place.
fn bias_formulas() -> CriterionResult {
    let mut failures = Vec::new();

    let five: Vec<Item> = (0..5).map(|i| Item::scalar(i as f64)).collect();
    let exact = exact_bias_by_enumeration(ProcessKind::PairOrder, &five);
    if exact.pr_one != rat(1, 2) {
        failures.push(format!("pair comparison over 5 items: {}", exact.pr_one));
    }

    let est = empirical_bias(
        ProcessKind::Parity,
        &PopulationSpec::two_types(0.5),
        100_000,
        7001,
    );
    if (est.p_hat - 2.0 / 3.0).abs() > 3.0 * est.std_error {
        failures.push(format!(
            "parity at 1/2: {} vs 2/3 (se {})",
            est.p_hat, est.std_error
        ));
    }

    let r = 2f64.sqrt() - 1.0;
    let est = empirical_bias(
        ProcessKind::Combine,
        &PopulationSpec::combine_conditional(r, 10_000),
        100_000,
        7002,
    );
    let target = 2.0 - 2f64.sqrt();
    if (est.p_hat - target).abs() > 3.0 * est.std_error {
        failures.push(format!(
            "combine at sqrt(2)-1: {} vs {} (se {})",
            est.p_hat, target, est.std_error
        ));
    }

    let parity_curve =
        crate::experiment::curves(crate::experiment::CurveKind::ParityBias, 999, None);
    let best = parity_curve
        .iter()
        .max_by(|a, b| a.analytic.total_cmp(&b.analytic))
        .unwrap();
    if best.parameter != 0.5 {
        failures.push(format!("parity curve argmax at {}", best.parameter));
    }
    let combine_curve =
        crate::experiment::curves(crate::experiment::CurveKind::CombineBias, 999, None);
    let best = combine_curve
        .iter()
        .max_by(|a, b| a.analytic.total_cmp(&b.analytic))
        .unwrap();
    if (best.parameter - r).abs() > 0.002 {
        failures.push(format!("combine curve argmax at {}", best.parameter));
    }

    CriterionResult::new(
        "bias formulas",
        failures,
        "pair bit exactly fair; estimates match both closed forms within 3 SE; argmaxes at 0.5 and ~0.414".into(),
    )
}

/// Criterion 8: Conditional fairness of the comparison branch: over full permutation
/// enumeration of mixed multisets, Pr(second < first | distinct) = 1/2.
fn conditional_pair_fairness() -> CriterionResult {
    let mut failures = Vec::new();
    let multisets: Vec<Vec<u64>> = vec![
        vec![1, 1, 2],
        vec![1, 1, 2, 2, 3],
        vec![1, 1, 1, 2, 2, 3],
        vec![1, 2, 3, 4, 5, 6, 7],
        vec![1, 1, 2, 2, 3, 3, 4],
    ];
    for counts in &multisets {
        let items: Vec<Item> = counts
            .iter()
            .enumerate()
            .flat_map(|(t, &c)| (0..c).map(move |_| Item::scalar(t as f64)))
            .take(7)
            .collect();
        let p = exact_pr_second_smaller_given_distinct(&items);
        if p != rat(1, 2) {
            failures.push(format!("{counts:?}: {p}"));
        }
    }
    CriterionResult::new(
        "conditional pair fairness",
        failures,
        format!(
            "Pr(second < first | first two distinct) = 1/2 exactly on {} multisets",
            multisets.len()
        ),
    )
}

/// Criterion 9: Derandomized applications: trace equivalence, parity-restriction
/// optimality, near-perfect scores on constant strings, and ratio sweeps
/// inside 2.45 (single-length, string, knapsack) and 6.1 (two-length).
fn derandomized_apps() -> CriterionResult {
    let mut failures = Vec::new();

    trace_equivalence_sweeps(&mut failures);
    parity_restriction_optimality(&mut failures);
    constant_string_scores(&mut failures);
    let worst_single = single_length_ratio_sweep(&mut failures);
    let worst_string = string_ratio_sweep(&mut failures);
    let worst_knapsack = knapsack_ratio_sweep(&mut failures);
    let worst_two = two_length_ratio_sweep(&mut failures);

    CriterionResult::new(
        "derandomized applications",
        failures,
        format!(
            "trace equivalence on 1e4 pairs per app; worst ratios: single-length {:.3}, string {:.3}, knapsack {:.3} (<= 2.45), two-length {:.3} (<= 6.1)",
            worst_single, worst_string, worst_knapsack, worst_two
        ),
    )
}

fn random_single_length_instance(seed: u64, allow_copies: bool) -> Instance {
    let mut rng = order::rng_from_seed(seed);
    let n = 4 + order::bounded_u64(&mut rng, 4) as usize;
    let ell = 2.0;
    let mut intervals = Vec::with_capacity(n);
    let mut used = std::collections::HashSet::new();
    for i in 0..n {
        loop {
            let start = order::bounded_u64(&mut rng, 14) as f64 / 2.0;
            let weight = 1.0 + order::bounded_u64(&mut rng, 9) as f64;
            let key = (start.to_bits(), weight.to_bits());
            if !allow_copies && !used.insert(key) {
                continue;
            }
            intervals.push(Interval::weighted(i, start, start + ell, weight));
            break;
        }
    }
    Instance::new(intervals)
}

fn random_two_length_instance(seed: u64, n: usize) -> Instance {
    let mut rng = order::rng_from_seed(seed);
    let lengths = [2.0f64, 5.0];
    let mut used = std::collections::HashSet::new();
    let mut intervals = Vec::with_capacity(n);
    for i in 0..n {
        loop {
            let len = lengths[order::bounded_u64(&mut rng, 2) as usize];
            let start = order::bounded_u64(&mut rng, 16) as f64;
            if !used.insert((start.to_bits(), len.to_bits())) {
                continue;
            }
            let weight = 1.0 + order::bounded_u64(&mut rng, 9) as f64;
            intervals.push(Interval::weighted(i, start, start + len, weight));
            break;
        }
    }
    Instance::new(intervals)
}

fn random_knapsack_items(seed: u64) -> (Vec<KnapsackItem>, f64) {
    let mut rng = order::rng_from_seed(seed);
    let n = 5 + order::bounded_u64(&mut rng, 6) as usize;
    let items: Vec<KnapsackItem> = (0..n)
        .map(|_| {
            KnapsackItem::new(
                1.0 + order::bounded_u64(&mut rng, 10) as f64,
                1.0 + order::bounded_u64(&mut rng, 10) as f64,
            )
        })
        .collect();
    let capacity = 8.0 + order::bounded_u64(&mut rng, 13) as f64;
    (items, capacity)
}

fn trace_equivalence_sweeps(failures: &mut Vec<String>) {
    const PAIRS: u64 = 10_000;

    for pair in 0..PAIRS {
        let inst = random_single_length_instance(pair, true);
        let order = ArrivalOrder::sampled(&inst, pair ^ 0x51);
        let combined = apps::select_single_length(&inst, &order).unwrap();
        let alone = apps::serve_parity(&inst, &order, combined.served_parity).unwrap();
        if combined.final_solution != alone.final_solution {
            failures.push(format!("single-length trace mismatch at pair {pair}"));
            return;
        }
    }

    for pair in 0..PAIRS {
        let inst = random_two_length_instance(pair, 4 + (pair % 4) as usize);
        let order = ArrivalOrder::sampled(&inst, pair ^ 0x52);
        let combined = apps::select_two_length(&inst, &order).unwrap();
        if let (Some(len), Some(par)) = (combined.served_length, combined.served_parity) {
            let alone = apps::serve_cell(&inst, &order, len, par).unwrap();
            if combined.final_solution != alone.final_solution {
                failures.push(format!("two-length trace mismatch at pair {pair}"));
                return;
            }
        }
    }

    for pair in 0..PAIRS {
        let (items, capacity) = random_knapsack_items(pair);
        let mut rng = order::rng_from_seed(pair ^ 0x53);
        let mut idx: Vec<usize> = (0..items.len()).collect();
        order::shuffle(&mut idx, &mut rng);
        let out = apps::knapsack_online(&items, capacity, &idx);
        let (want_value, want_items) = match out.chosen {
            Some(0) | None => (out.density_greedy_value, &out.density_greedy_items),
            Some(_) => (out.value_greedy_value, &out.value_greedy_items),
        };
        if out.combined_value != want_value || &out.combined_items != want_items {
            failures.push(format!("knapsack trace mismatch at pair {pair}"));
            return;
        }
    }

    for pair in 0..PAIRS {
        let mut rng = order::rng_from_seed(pair ^ 0x54);
        let n = 5 + order::bounded_u64(&mut rng, 4) as usize;
        let bits: Vec<u8> = (0..n)
            .map(|_| order::bounded_u64(&mut rng, 2) as u8)
            .collect();
        let mut positions: Vec<usize> = (0..n).collect();
        order::shuffle(&mut positions, &mut rng);
        let combined = apps::guess_string(&bits, &positions);
        if let Some(r) = combined.resolved_bit {
            let alone = apps::guess_string_fixed_tail(&bits, &positions, r);
            if combined.guesses != alone.guesses || combined.correct != alone.correct {
                failures.push(format!("string trace mismatch at pair {pair}"));
                return;
            }
        }
    }
}

fn parity_restriction_optimality(failures: &mut Vec<String>) {
    for seed in 0..30u64 {
        let inst = random_single_length_instance(seed, true);
        for parity in [0u8, 1] {
            let sub = Instance::new(
                inst.intervals()
                    .iter()
                    .filter(|iv| apps::slot_key(iv, 2.0).parity == parity)
                    .cloned()
                    .collect(),
            );
            let want = oracle::opt_weighted(&sub).weight;
            let mut bad = false;
            for_each_order(&inst, |order| {
                if bad {
                    return;
                }
                let out = apps::serve_parity(&inst, order, parity).unwrap();
                if out.weight != want {
                    bad = true;
                }
            });
            if bad {
                failures.push(format!(
                    "parity restriction not offline-optimal (seed {seed}, parity {parity})"
                ));
                return;
            }
        }
    }
}

fn constant_string_scores(failures: &mut Vec<String>) {
    for n in 2..=8usize {
        for value in [0u8, 1] {
            let bits = vec![value; n];
            let order: Vec<usize> = (0..n).collect();
            let out = apps::guess_string(&bits, &order);
            if out.correct + 1 < n {
                failures.push(format!(
                    "constant string n={n} value={value}: {}",
                    out.correct
                ));
            }
        }
    }
}

/// Exact mean application value over all orders of a small instance.
fn exact_mean_app_value<F: Fn(&ArrivalOrder) -> f64>(inst: &Instance, value: F) -> f64 {
    let mut sum = 0.0;
    let mut count = 0u64;
    for_each_order(inst, |order| {
        sum += value(order);
        count += 1;
    });
    sum / count as f64
}

fn single_length_ratio_sweep(failures: &mut Vec<String>) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 100..140u64 {
        let inst = random_single_length_instance(seed, false);
        let opt = oracle::opt_weighted(&inst).weight;
        if opt == 0.0 {
            continue;
        }
        let mean = exact_mean_app_value(&inst, |order| {
            apps::select_single_length(&inst, order).unwrap().weight
        });
        let ratio = opt / mean;
        worst = worst.max(ratio);
        if ratio > 2.45 {
            failures.push(format!("single-length seed {seed}: ratio {ratio:.4}"));
        }
    }

    // A split-optimum instance: the expectation clears the guaranteed
    // fraction of the combined parity optima.
    let inst = Instance::new(vec![
        Interval::weighted(0, 0.0, 2.0, 9.0),
        Interval::weighted(1, 4.0, 6.0, 7.0),
        Interval::weighted(2, 1.0, 3.0, 8.0),
        Interval::weighted(3, 5.0, 7.0, 4.0),
        Interval::weighted(4, 8.0, 10.0, 3.0),
    ]);
    let even = oracle::opt_weighted(&Instance::new(
        inst.intervals()
            .iter()
            .filter(|iv| apps::slot_key(iv, 2.0).parity == 0)
            .cloned()
            .collect(),
    ))
    .weight;
    let odd = oracle::opt_weighted(&Instance::new(
        inst.intervals()
            .iter()
            .filter(|iv| apps::slot_key(iv, 2.0).parity == 1)
            .cloned()
            .collect(),
    ))
    .weight;
    let mean = exact_mean_app_value(&inst, |order| {
        apps::select_single_length(&inst, order).unwrap().weight
    });
    let guaranteed = (2f64.sqrt() - 1.0) * (even + odd);
    if mean + 1e-9 < guaranteed {
        failures.push(format!(
            "split-optimum instance: E[weight] {mean:.4} below (sqrt(2)-1)(W_even+W_odd) = {guaranteed:.4}"
        ));
    }
    worst
}

fn string_ratio_sweep(failures: &mut Vec<String>) -> f64 {
    let mut worst: f64 = 0.0;
    // Exact enumeration for short strings.
    for n in [6usize, 7] {
        for ones in 1..n {
            let mut bits = vec![0u8; n];
            for b in bits.iter_mut().take(ones) {
                *b = 1;
            }
            let positions: Vec<usize> = (0..n).collect();
            let mut sum = 0u64;
            let mut count = 0u64;
            for_each_permutation(&positions, |order| {
                sum += apps::guess_string(&bits, order).correct as u64;
                count += 1;
            });
            let mean = sum as f64 / count as f64;
            let ratio = n as f64 / mean;
            worst = worst.max(ratio);
            if ratio > 2.45 {
                failures.push(format!("string n={n} ones={ones}: exact ratio {ratio:.4}"));
            }
        }
    }
    // Monte Carlo for a longer string across the composition grid. Besides
    // the ratio cap, the per-position score clears the guaranteed fraction
    // of the majority share (up to a small finite-length allowance).
    let n = 40usize;
    for tenth in 1..=9usize {
        let ones = n * tenth / 10;
        let mut bits = vec![0u8; n];
        for b in bits.iter_mut().take(ones) {
            *b = 1;
        }
        let mut rng = order::rng_from_seed(6000 + tenth as u64);
        let mut positions: Vec<usize> = (0..n).collect();
        let trials = 100_000;
        let mut sum = 0u64;
        for _ in 0..trials {
            order::shuffle(&mut positions, &mut rng);
            sum += apps::guess_string(&bits, &positions).correct as u64;
        }
        let mean = sum as f64 / trials as f64;
        let ratio = n as f64 / mean;
        worst = worst.max(ratio);
        if ratio > 2.45 {
            failures.push(format!("string n=40 ones={ones}: mc ratio {ratio:.4}"));
        }
        let majority = (ones.max(n - ones)) as f64 / n as f64;
        let floor = (2f64.sqrt() - 1.0) * majority - 2.0 / n as f64;
        if mean / n as f64 + 1e-9 < floor {
            failures.push(format!(
                "string n=40 ones={ones}: score rate {:.4} below {floor:.4}",
                mean / n as f64
            ));
        }
    }
    worst
}

fn knapsack_ratio_sweep(failures: &mut Vec<String>) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 0..1000u64 {
        let (items, capacity) = random_knapsack_items(seed + 3000);
        let opt = oracle::knapsack_opt(&items, capacity).unwrap();
        if opt == 0.0 {
            continue;
        }
        let n = items.len();
        let mean = if n <= 7 {
            let idx: Vec<usize> = (0..n).collect();
            let mut sum = 0.0;
            let mut count = 0u64;
            for_each_permutation(&idx, |order| {
                sum += apps::knapsack_online(&items, capacity, order).combined_value;
                count += 1;
            });
            sum / count as f64
        } else {
            let mut rng = order::rng_from_seed(seed ^ 0xbead);
            let mut idx: Vec<usize> = (0..n).collect();
            let trials = 1000;
            let mut sum = 0.0;
            for _ in 0..trials {
                order::shuffle(&mut idx, &mut rng);
                sum += apps::knapsack_online(&items, capacity, &idx).combined_value;
            }
            sum / trials as f64
        };
        let ratio = opt / mean;
        worst = worst.max(ratio);
        if ratio > 2.45 {
            failures.push(format!("knapsack seed {seed}: ratio {ratio:.4}"));
            if failures.len() > 5 {
                return worst;
            }
        }
    }
    worst
}

fn two_length_ratio_sweep(failures: &mut Vec<String>) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 500..540u64 {
        let inst = random_two_length_instance(seed, 5 + (seed % 3) as usize);
        let opt = oracle::opt_weighted(&inst).weight;
        if opt == 0.0 {
            continue;
        }
        let mean = exact_mean_app_value(&inst, |order| {
            apps::select_two_length(&inst, order).unwrap().value
        });
        let ratio = opt / mean;
        worst = worst.max(ratio);
        if ratio > 6.1 {
            failures.push(format!("two-length seed {seed}: ratio {ratio:.4}"));
        }
    }

    // Optimum concentrated in one (length, parity) cell: the expectation is
    // at least a sixth of it.
    let inst = Instance::new(vec![
        Interval::weighted(0, 0.0, 2.0, 5.0),
        Interval::weighted(1, 4.0, 6.0, 5.0),
        Interval::weighted(2, 8.0, 10.0, 5.0),
        Interval::weighted(3, 1.0, 3.0, 1.0),
        Interval::weighted(4, 0.0, 5.0, 1.0),
        Interval::weighted(5, 5.0, 10.0, 1.0),
    ]);
    let opt = oracle::opt_weighted(&inst).weight;
    let mean = exact_mean_app_value(&inst, |order| {
        apps::select_two_length(&inst, order).unwrap().value
    });
    if mean + 1e-9 < opt / 6.0 {
        failures.push(format!(
            "cell-concentrated instance: E[value] {mean:.4} below OPT/6 = {:.4}",
            opt / 6.0
        ));
    }
    worst
}

/// Criterion 10: Global sanity: exact ratio at most 5/2 (plus 1e-9 headroom) on a
/// thousand random instances. A violation here contradicts the upper bound
/// and is treated as build-breaking.
fn global_ratio_sanity() -> CriterionResult {
    let mut failures = Vec::new();
    let threshold = rat(5, 2) + BigRational::new(1.into(), 1_000_000_000.into());
    let mut count = 0;
    for seed in 0..1000u64 {
        let n = 4 + (seed % 4) as usize; // 4..=7
        let k = 1 + (seed % 3) as usize;
        let inst = gen::generate(&GeneratorSpec::Random {
            n,
            k,
            weights: gen::WeightMode::Unit,
            seed: seed * 31 + 7,
        })
        .unwrap()
        .instance;
        count += 1;
        let e = engine::exact_expectation(|| GreedyReplace, &inst, metrics::size).unwrap();
        if e.is_zero() {
            continue;
        }
        let opt = ratio::int(oracle::opt_unweighted(&inst).size as u64);
        let ratio = opt / e;
        if ratio > threshold {
            failures.push(format!("seed {seed}: ratio {ratio}"));
            if failures.len() > 5 {
                break;
            }
        }
    }
    CriterionResult::new(
        "global ratio sanity",
        failures,
        format!("exact OPT/E[size] <= 5/2 + 1e-9 on {count} random instances (n <= 7, k <= 3)"),
    )
}

#[cfg(test)]
mod tests {
    // The full battery runs in the dedicated acceptance test target; here we
    // only keep the cheap structural checks alive.
    #[test]
    fn criteria_have_unique_names() {
        let names = [
            "flanked-family expectation",
            "base-instance closed form",
            "small-interval counts one and two",
            "conditional charge bound",
            "trace profile bounds",
            "lower-bound witnesses",
            "bias formulas",
            "conditional pair fairness",
            "derandomized applications",
            "global ratio sanity",
        ];
        let mut sorted = names.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }
}
