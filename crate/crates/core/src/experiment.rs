//! Experiment orchestration: generate an instance, enumerate or sample
//! arrival orders, run or charge, and emit report rows. Reports are
//! deterministic given the configuration, including seeds.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charging::{self, OptPolicy};
use crate::engine::{self, metrics, GreedyReplace};
use crate::extraction::{analytic_bias, empirical_bias, BiasModel, PopulationSpec, ProcessKind};
use crate::gen::{self, GeneratorSpec};
use crate::oracle;
use crate::ratio;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("[{label}] {source}")]
    Engine {
        label: String,
        #[source]
        source: engine::EngineError,
    },
    #[error("[{label}] {source}")]
    Charging {
        label: String,
        #[source]
        source: charging::ChargingError,
    },
    #[error("{0}")]
    Gen(#[from] gen::GenError),
    #[error("[{label}] metric requires base-instance roles")]
    MissingRoles { label: String },
}

/// What to measure per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    /// Final solution size of the greedy replace-on-containment run.
    Size,
    /// Final solution weight.
    Weight,
    /// Total transfer charge per run.
    TransferCharge,
    /// Maximum over intervals of the conditional expected charge.
    MaxConditionalCharge,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Size => "size",
            MetricKind::Weight => "weight",
            MetricKind::TransferCharge => "transfer_charge",
            MetricKind::MaxConditionalCharge => "max_conditional_charge",
        }
    }
}

/// Exact enumeration over all orders, or seeded sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

/// Which optimal-solution policy backs charging metrics. `Auto` picks the
/// latest-arrival policy when the generator carries base roles and the
/// canonical one otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolicyKind {
    Auto,
    Canonical,
    LatestArrival,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub metric: MetricKind,
    pub mode: RunMode,
    pub policy: PolicyKind,
}

/// A value cell: exact rational (rendered as numerator/denominator) or an
/// estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ValueCell {
    Exact { num: String, den: String },
    Estimate(f64),
}

impl ValueCell {
    pub fn exact(r: &BigRational) -> Self {
        ValueCell::Exact {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            ValueCell::Exact { num, den } => {
                let n: f64 = num.parse().unwrap_or(f64::NAN);
                let d: f64 = den.parse().unwrap_or(f64::NAN);
                n / d
            }
            ValueCell::Estimate(v) => *v,
        }
    }

    pub fn render(&self) -> String {
        match self {
            ValueCell::Exact { num, den } => format!("{num}/{den}"),
            ValueCell::Estimate(v) => format!("{v}"),
        }
    }
}

/// One report row. Exact-mode rows carry zero standard error and render the
/// value as an exact fraction; `ratio` is `OPT / value` for maximization
/// metrics and empty for charge metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub algorithm: String,
    pub mode: String,
    pub metric: String,
    pub value: ValueCell,
    pub std_error: f64,
    pub opt: Option<f64>,
    pub ratio: Option<ValueCell>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("instance,algorithm,mode,metric,value,std_error,opt,ratio,seed,trials\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.instance,
                r.algorithm,
                r.mode,
                r.metric,
                r.value.render(),
                r.std_error,
                r.opt.map(|v| v.to_string()).unwrap_or_default(),
                r.ratio.as_ref().map(|v| v.render()).unwrap_or_default(),
                r.seed.map(|v| v.to_string()).unwrap_or_default(),
                r.trials.map(|v| v.to_string()).unwrap_or_default(),
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Run the full pipeline for one configuration.
pub fn experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let generated = gen::generate(&config.generator)?;
    let label = generated.label.clone();
    let inst = &generated.instance;
    let policy = match config.policy {
        PolicyKind::Canonical => OptPolicy::Canonical,
        PolicyKind::LatestArrival => {
            OptPolicy::LatestArrival(generated.base_roles.clone().ok_or_else(|| {
                ExperimentError::MissingRoles {
                    label: label.clone(),
                }
            })?)
        }
        PolicyKind::Auto => match &generated.base_roles {
            Some(roles) => OptPolicy::LatestArrival(roles.clone()),
            None => OptPolicy::Canonical,
        },
    };

    let algorithm = "greedy-replace".to_string();
    let (mode_name, seed, trials) = match config.mode {
        RunMode::Exact => ("exact".to_string(), None, None),
        RunMode::MonteCarlo { trials, seed } => ("mc".to_string(), Some(seed), Some(trials)),
    };

    let opt_value = match config.metric {
        MetricKind::Size | MetricKind::TransferCharge | MetricKind::MaxConditionalCharge => {
            oracle::opt_unweighted(inst).size as f64
        }
        MetricKind::Weight => oracle::opt_weighted(inst).weight,
    };

    let wrap_engine = |source| ExperimentError::Engine {
        label: label.clone(),
        source,
    };
    let wrap_charging = |source| ExperimentError::Charging {
        label: label.clone(),
        source,
    };

    let (value, std_error, ratio_cell): (ValueCell, f64, Option<ValueCell>) = match config.metric {
        MetricKind::Size | MetricKind::Weight => match config.mode {
            RunMode::Exact => {
                let metric = match config.metric {
                    MetricKind::Size => metrics::size,
                    _ => metrics::weight,
                };
                let e = engine::exact_expectation(|| GreedyReplace, inst, metric)
                    .map_err(wrap_engine)?;
                let ratio = if e.is_zero() {
                    None
                } else {
                    Some(ValueCell::exact(&(ratio::from_f64(opt_value) / e.clone())))
                };
                (ValueCell::exact(&e), 0.0, ratio)
            }
            RunMode::MonteCarlo { trials, seed } => {
                let metric = match config.metric {
                    MetricKind::Size => metrics::size_f64,
                    _ => metrics::weight_f64,
                };
                let est = engine::monte_carlo(|| GreedyReplace, inst, trials, seed, metric)
                    .map_err(wrap_engine)?;
                let ratio = (est.mean != 0.0).then(|| ValueCell::Estimate(opt_value / est.mean));
                (ValueCell::Estimate(est.mean), est.std_error, ratio)
            }
        },
        MetricKind::TransferCharge => match config.mode {
            RunMode::Exact => {
                let e =
                    charging::exact_mean_transfer_charge(inst, &policy).map_err(wrap_charging)?;
                (ValueCell::exact(&e), 0.0, None)
            }
            RunMode::MonteCarlo { trials, seed } => {
                let est = charging::mc_mean_transfer_charge(inst, &policy, trials, seed)
                    .map_err(wrap_charging)?;
                (ValueCell::Estimate(est.mean), est.std_error, None)
            }
        },
        MetricKind::MaxConditionalCharge => {
            let table = match config.mode {
                RunMode::Exact => {
                    charging::exact_max_conditional_charge(inst, &policy).map_err(wrap_charging)?
                }
                RunMode::MonteCarlo { trials, seed } => {
                    charging::mc_max_conditional_charge(inst, &policy, trials, seed)
                        .map_err(wrap_charging)?
                }
            };
            (ValueCell::exact(&table.max), 0.0, None)
        }
    };

    Ok(ExperimentReport {
        rows: vec![ReportRow {
            instance: label,
            algorithm,
            mode: mode_name,
            metric: config.metric.name().to_string(),
            value,
            std_error,
            opt: Some(opt_value),
            ratio: ratio_cell,
            seed,
            trials,
        }],
    })
}

/// Which analytic curve to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// Counter-process bias as a function of the first-type frequency.
    ParityBias,
    /// Combined-process bias as a function of the repeated-type frequency.
    CombineBias,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvePoint {
    pub parameter: f64,
    pub analytic: f64,
    pub empirical: Option<f64>,
    pub std_error: Option<f64>,
}

/// Tabulate a bias curve on a uniform grid over the open unit interval,
/// optionally with empirical estimates alongside.
pub fn curves(which: CurveKind, points: usize, empirical: Option<(u64, u64)>) -> Vec<CurvePoint> {
    assert!(points >= 2, "a curve needs at least two grid points");
    let mut out = Vec::with_capacity(points);
    for i in 1..=points {
        let parameter = i as f64 / (points + 1) as f64;
        let (model, process, population) = match which {
            CurveKind::ParityBias => (
                BiasModel::ParityBit,
                ProcessKind::Parity,
                PopulationSpec::two_types(parameter),
            ),
            CurveKind::CombineBias => (
                BiasModel::CombineBit,
                ProcessKind::Combine,
                PopulationSpec::combine_conditional(parameter, 2000),
            ),
        };
        let analytic = analytic_bias(model, parameter).expect("grid point inside (0,1)");
        let (emp, se) = match empirical {
            Some((trials, seed)) => {
                let est = empirical_bias(process, &population, trials, seed.wrapping_add(i as u64));
                (Some(est.p_hat), Some(est.std_error))
            }
            None => (None, None),
        };
        out.push(CurvePoint {
            parameter,
            analytic,
            empirical: emp,
            std_error: se,
        });
    }
    out
}

pub fn curves_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("parameter,analytic,empirical,std_error\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.parameter,
            p.analytic,
            p.empirical.map(|v| v.to_string()).unwrap_or_default(),
            p.std_error.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    out
}
