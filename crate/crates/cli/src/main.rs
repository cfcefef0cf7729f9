//! Command-line harness: instance generation, single runs, exact and
//! sampled expectations, bias tables, curve emission, the acceptance
//! battery, and the derandomized applications.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a verification or
//! assertion check fails.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rosel::apps;
use rosel::charging::{ChargingTrace, OptPolicy};
use rosel::engine::{self, metrics, GreedyReplace};
use rosel::experiment::{
    curves, curves_to_csv, experiment, CurveKind, ExperimentConfig, MetricKind, PolicyKind, RunMode,
};
use rosel::extraction::{analytic_bias, empirical_bias, BiasModel, PopulationSpec, ProcessKind};
use rosel::gen::{self, GeneratorSpec};
use rosel::instance::Instance;
use rosel::interval::IntervalId;
use rosel::oracle::{self, KnapsackItem};
use rosel::order::ArrivalOrder;

const USAGE_ERROR: u8 = 1;
const CHECK_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rosel",
    about = "Online interval selection under random-order arrivals",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Seed for any sampled randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trial count for sampled estimates.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Write primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for report-shaped results.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Flat key=value config file; command-line flags win on conflict.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and print it in the instance text format.
    Gen {
        /// Generator spec, e.g. `flanked:n=6`, `base:l=1,r=1,m=2,s=3`,
        /// `composed:form=trimmed`, `lb1`, `lb2`,
        /// `random:n=7,k=2,weights=uniform,seed=1`.
        spec: String,
    },
    /// Run the greedy replace-on-containment algorithm over one order.
    Run {
        /// Instance file (`start finish [weight]` per line).
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated id order; a seeded uniform order when omitted.
        #[arg(long)]
        order: Option<String>,
    },
    /// Exact expectation over all arrival orders.
    Exact {
        #[arg(long, conflicts_with = "spec")]
        instance: Option<PathBuf>,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, value_enum, default_value = "size")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "auto")]
        policy: PolicyArg,
    },
    /// Monte Carlo estimate over sampled arrival orders.
    Mc {
        #[arg(long, conflicts_with = "spec")]
        instance: Option<PathBuf>,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, value_enum, default_value = "size")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "auto")]
        policy: PolicyArg,
    },
    /// Empirical vs analytic bias of one extraction process.
    Bias {
        #[arg(long, value_enum)]
        process: ProcessArg,
        /// Model parameter: first-type frequency (parity) or repeated-type
        /// frequency (combine).
        #[arg(long)]
        parameter: Option<f64>,
        /// Distinct singleton stand-ins for the combine population.
        #[arg(long, default_value_t = 10_000)]
        singletons: usize,
        /// Sampling model: i.i.d. draws by frequency (matches the closed
        /// forms) or shuffles of a finite multiset.
        #[arg(long, value_enum, default_value = "wr")]
        mode: BiasModeArg,
        /// Multiset size for permutation mode; the parameter is realized as
        /// the nearest copy split.
        #[arg(long, default_value_t = 20)]
        population: u64,
    },
    /// Emit an analytic bias curve as CSV (optionally with estimates).
    Curves {
        #[arg(long, value_enum)]
        which: CurveArg,
        #[arg(long, default_value_t = 99)]
        points: usize,
        /// Add empirical estimates alongside the analytic values.
        #[arg(long)]
        empirical: bool,
    },
    /// Run the acceptance battery; exits 2 if any criterion fails.
    Verify {
        /// Directory for sample charge-trace exports (JSON), one per named
        /// base instance.
        #[arg(long)]
        traces: Option<PathBuf>,
    },
    /// Run a derandomized application over exact or sampled orders.
    App {
        #[arg(value_enum)]
        which: AppArg,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        orders: OrdersArg,
        /// Knapsack capacity (knapsack app only).
        #[arg(long)]
        capacity: Option<f64>,
        /// Print one trace line per sampled order.
        #[arg(long)]
        emit_trace: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Size,
    Weight,
    TransferCharge,
    MaxCharge,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Auto,
    Canonical,
    LatestArrival,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProcessArg {
    Parity,
    Pair,
    Combine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BiasModeArg {
    /// With replacement (i.i.d.).
    Wr,
    /// Uniform shuffle of an explicit finite multiset.
    Perm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveArg {
    ParityBias,
    CombineBias,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AppArg {
    String,
    Knapsack,
    SingleLength,
    TwoLength,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrdersArg {
    Exact,
    Mc,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE_ERROR,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let global = match resolve_globals(cli.global) {
        Ok(g) => g,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    match dispatch(cli.command, &global) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

/// Resolved global options after merging the config file (flags win).
struct Globals {
    seed: u64,
    trials: u64,
    out: Option<PathBuf>,
    format: OutputFormat,
}

fn resolve_globals(args: GlobalArgs) -> Result<Globals, String> {
    let mut file: HashMap<String, String> = HashMap::new();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| format!("config {path:?}: {e}"))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            file.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let parse_u64 = |s: &String| {
        s.parse::<u64>()
            .map_err(|_| format!("invalid number `{s}`"))
    };
    let seed = match (args.seed, file.get("seed")) {
        (Some(s), _) => s,
        (None, Some(s)) => parse_u64(s)?,
        (None, None) => 0,
    };
    let trials = match (args.trials, file.get("trials")) {
        (Some(t), _) => t,
        (None, Some(t)) => parse_u64(t)?,
        (None, None) => 10_000,
    };
    let out = args.out.or_else(|| file.get("out").map(PathBuf::from));
    let format = match (args.format, file.get("format").map(String::as_str)) {
        (Some(f), _) => f,
        (None, Some("json")) => OutputFormat::Json,
        (None, Some("csv")) | (None, None) => OutputFormat::Csv,
        (None, Some(other)) => return Err(format!("unknown format `{other}`")),
    };
    Ok(Globals {
        seed,
        trials,
        out,
        format,
    })
}

fn emit(global: &Globals, text: &str) -> Result<(), String> {
    match &global.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("writing {path:?}: {e}")),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn load_instance(path: &PathBuf) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
    Instance::parse(&text).map_err(|e| e.to_string())
}

fn dispatch(command: Command, global: &Globals) -> Result<ExitCode, String> {
    match command {
        Command::Gen { spec } => {
            let parsed = GeneratorSpec::parse(&spec).map_err(|e| e.to_string())?;
            let generated = gen::generate(&parsed).map_err(|e| e.to_string())?;
            let mut text = format!("# {}\n", generated.label);
            text.push_str(&generated.instance.to_text());
            emit(global, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { instance, order } => {
            let inst = load_instance(&instance)?;
            let order = match order {
                Some(text) => {
                    let ids: Result<Vec<usize>, _> =
                        text.split(',').map(|p| p.trim().parse::<usize>()).collect();
                    ArrivalOrder(
                        ids.map_err(|_| "invalid order list".to_string())?
                            .into_iter()
                            .map(IntervalId)
                            .collect(),
                    )
                }
                None => ArrivalOrder::sampled(&inst, global.seed),
            };
            let trace = engine::run_with_snapshots(&mut GreedyReplace, &inst, &order)
                .map_err(|e| e.to_string())?;
            emit(global, &serde_json::to_string_pretty(&trace).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Exact {
            instance,
            spec,
            metric,
            policy,
        } => run_expectation(global, instance, spec, metric, policy, RunMode::Exact),
        Command::Mc {
            instance,
            spec,
            metric,
            policy,
        } => run_expectation(
            global,
            instance,
            spec,
            metric,
            policy,
            RunMode::MonteCarlo {
                trials: global.trials,
                seed: global.seed,
            },
        ),
        Command::Bias {
            process,
            parameter,
            singletons,
            mode,
            population,
        } => {
            if population < 2 {
                return Err("permutation populations need at least two items".into());
            }
            let scalar = rosel::extraction::Item::scalar;
            let (kind, model, parameter) = match process {
                ProcessArg::Parity => {
                    let p = parameter.unwrap_or(0.5);
                    (ProcessKind::Parity, Some(BiasModel::ParityBit), p)
                }
                ProcessArg::Combine => {
                    let p = parameter.unwrap_or(2f64.sqrt() - 1.0);
                    (ProcessKind::Combine, Some(BiasModel::CombineBit), p)
                }
                ProcessArg::Pair => (ProcessKind::PairOrder, None, f64::NAN),
            };
            let spec = match (mode, process) {
                (BiasModeArg::Wr, ProcessArg::Parity) => PopulationSpec::two_types(parameter),
                (BiasModeArg::Wr, ProcessArg::Combine) => {
                    PopulationSpec::combine_conditional(parameter, singletons)
                }
                (BiasModeArg::Wr, ProcessArg::Pair) => PopulationSpec::with_replacement(
                    (0..64).map(|i| (scalar(i as f64), 1.0 / 64.0)).collect(),
                ),
                (BiasModeArg::Perm, ProcessArg::Parity) => {
                    let first =
                        ((parameter * population as f64).round() as u64).clamp(1, population - 1);
                    PopulationSpec::permutation(vec![
                        (scalar(0.0), first),
                        (scalar(1.0), population - first),
                    ])
                }
                (BiasModeArg::Perm, ProcessArg::Combine) => {
                    let copies =
                        ((parameter * population as f64).round() as u64).clamp(1, population - 1);
                    let mut items = vec![(scalar(0.0), copies)];
                    for i in 0..population - copies {
                        let value = (i / 2 + 1) as f64;
                        items.push((scalar(if i % 2 == 0 { value } else { -value }), 1));
                    }
                    PopulationSpec::permutation(items)
                }
                (BiasModeArg::Perm, ProcessArg::Pair) => PopulationSpec::permutation(
                    (0..population).map(|i| (scalar(i as f64), 1)).collect(),
                ),
            };
            let est = empirical_bias(kind, &spec, global.trials, global.seed);
            let analytic = match model {
                Some(m) => analytic_bias(m, parameter)
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                None => "0.5".to_string(),
            };
            let mode_tag = match mode {
                BiasModeArg::Wr => "wr",
                BiasModeArg::Perm => "perm",
            };
            let mut text = String::from("model,parameter,analytic,empirical,stderr,trials,seed\n");
            text.push_str(&format!(
                "{}[{}],{},{},{},{},{},{}\n",
                match kind {
                    ProcessKind::Parity => "parity",
                    ProcessKind::PairOrder => "pair",
                    ProcessKind::Combine => "combine",
                },
                mode_tag,
                parameter,
                analytic,
                est.p_hat,
                est.std_error,
                global.trials,
                global.seed,
            ));
            emit(global, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Curves {
            which,
            points,
            empirical,
        } => {
            let kind = match which {
                CurveArg::ParityBias => CurveKind::ParityBias,
                CurveArg::CombineBias => CurveKind::CombineBias,
            };
            let data = curves(
                kind,
                points,
                empirical.then_some((global.trials, global.seed)),
            );
            emit(global, &curves_to_csv(&data))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { traces } => {
            if let Some(dir) = traces {
                export_sample_traces(&dir)?;
            }
            let results = rosel::verify::run_all();
            for r in &results {
                println!("{}", r.render());
            }
            if results.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(CHECK_FAILED))
            }
        }
        Command::App {
            which,
            instance,
            orders,
            capacity,
            emit_trace,
        } => run_app(global, which, &instance, orders, capacity, emit_trace),
    }
}

fn metric_kind(metric: MetricArg) -> MetricKind {
    match metric {
        MetricArg::Size => MetricKind::Size,
        MetricArg::Weight => MetricKind::Weight,
        MetricArg::TransferCharge => MetricKind::TransferCharge,
        MetricArg::MaxCharge => MetricKind::MaxConditionalCharge,
    }
}

fn run_expectation(
    global: &Globals,
    instance: Option<PathBuf>,
    spec: Option<String>,
    metric: MetricArg,
    policy: PolicyArg,
    mode: RunMode,
) -> Result<ExitCode, String> {
    let policy = match policy {
        PolicyArg::Auto => PolicyKind::Auto,
        PolicyArg::Canonical => PolicyKind::Canonical,
        PolicyArg::LatestArrival => PolicyKind::LatestArrival,
    };
    let report = match (&instance, &spec) {
        (None, Some(text)) => {
            let parsed = GeneratorSpec::parse(text).map_err(|e| e.to_string())?;
            experiment(&ExperimentConfig {
                generator: parsed,
                metric: metric_kind(metric),
                mode,
                policy,
            })
            .map_err(|e| e.to_string())?
        }
        (Some(path), None) => {
            // File-backed instances run through the engine directly.
            let inst = load_instance(path)?;
            let label = path.display().to_string();
            file_instance_report(&inst, label, metric, policy, mode)?
        }
        _ => return Err("exactly one of --instance or --spec is required".into()),
    };
    let text = match global.format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => report.to_json(),
    };
    emit(global, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn file_instance_report(
    inst: &Instance,
    label: String,
    metric: MetricArg,
    policy: PolicyKind,
    mode: RunMode,
) -> Result<rosel::experiment::ExperimentReport, String> {
    use rosel::experiment::{ExperimentReport, ReportRow, ValueCell};
    let policy = match policy {
        PolicyKind::LatestArrival => {
            return Err("latest-arrival policy needs a base-instance spec".into())
        }
        _ => OptPolicy::Canonical,
    };
    let opt = match metric {
        MetricArg::Weight => oracle::opt_weighted(inst).weight,
        _ => oracle::opt_unweighted(inst).size as f64,
    };
    let (mode_name, seed, trials) = match mode {
        RunMode::Exact => ("exact".to_string(), None, None),
        RunMode::MonteCarlo { trials, seed } => ("mc".to_string(), Some(seed), Some(trials)),
    };
    let (value, std_error, ratio): (ValueCell, f64, Option<ValueCell>) = match (metric, mode) {
        (MetricArg::Size, RunMode::Exact) | (MetricArg::Weight, RunMode::Exact) => {
            let m = if metric == MetricArg::Size {
                metrics::size
            } else {
                metrics::weight
            };
            let e =
                engine::exact_expectation(|| GreedyReplace, inst, m).map_err(|e| e.to_string())?;
            let ratio = Some(ValueCell::exact(&(rosel::ratio::from_f64(opt) / e.clone())));
            (ValueCell::exact(&e), 0.0, ratio)
        }
        (MetricArg::Size, RunMode::MonteCarlo { trials, seed })
        | (MetricArg::Weight, RunMode::MonteCarlo { trials, seed }) => {
            let m = if metric == MetricArg::Size {
                metrics::size_f64
            } else {
                metrics::weight_f64
            };
            let est = engine::monte_carlo(|| GreedyReplace, inst, trials, seed, m)
                .map_err(|e| e.to_string())?;
            (
                ValueCell::Estimate(est.mean),
                est.std_error,
                Some(ValueCell::Estimate(opt / est.mean)),
            )
        }
        (MetricArg::TransferCharge, RunMode::Exact) => {
            let e = rosel::charging::exact_mean_transfer_charge(inst, &policy)
                .map_err(|e| e.to_string())?;
            (ValueCell::exact(&e), 0.0, None)
        }
        (MetricArg::TransferCharge, RunMode::MonteCarlo { trials, seed }) => {
            let est = rosel::charging::mc_mean_transfer_charge(inst, &policy, trials, seed)
                .map_err(|e| e.to_string())?;
            (ValueCell::Estimate(est.mean), est.std_error, None)
        }
        (MetricArg::MaxCharge, mode) => {
            let table = match mode {
                RunMode::Exact => rosel::charging::exact_max_conditional_charge(inst, &policy),
                RunMode::MonteCarlo { trials, seed } => {
                    rosel::charging::mc_max_conditional_charge(inst, &policy, trials, seed)
                }
            }
            .map_err(|e| e.to_string())?;
            (ValueCell::exact(&table.max), 0.0, None)
        }
    };
    Ok(ExperimentReport {
        rows: vec![ReportRow {
            instance: label,
            algorithm: "greedy-replace".into(),
            mode: mode_name,
            metric: match metric {
                MetricArg::Size => "size",
                MetricArg::Weight => "weight",
                MetricArg::TransferCharge => "transfer_charge",
                MetricArg::MaxCharge => "max_conditional_charge",
            }
            .into(),
            value,
            std_error,
            opt: Some(opt),
            ratio,
            seed,
            trials,
        }],
    })
}

/// Export sample charge traces for a couple of base instances, one JSON
/// file each.
fn export_sample_traces(dir: &PathBuf) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("creating {dir:?}: {e}"))?;
    for (l, r, m, s) in [(1u64, 1u64, 1u64, 3u64), (1, 1, 2, 3)] {
        let g = gen::base_instance(&gen::BaseInstanceSpec::new(l, r, m, s));
        let policy = OptPolicy::LatestArrival(g.base_roles.clone().unwrap());
        let order = ArrivalOrder::identity(&g.instance);
        let trace: ChargingTrace = rosel::charging::simulate_charging(&g.instance, &order, &policy)
            .map_err(|e| e.to_string())?;
        let path = dir.join(format!("charge-trace-base-{l}-{r}-{m}-{s}.json"));
        fs::write(&path, serde_json::to_string_pretty(&trace).unwrap())
            .map_err(|e| format!("writing {path:?}: {e}"))?;
    }
    Ok(())
}

fn run_app(
    global: &Globals,
    which: AppArg,
    instance: &PathBuf,
    orders: OrdersArg,
    capacity: Option<f64>,
    emit_trace: bool,
) -> Result<ExitCode, String> {
    let text = fs::read_to_string(instance).map_err(|e| format!("reading {instance:?}: {e}"))?;
    let mut rows = String::from("app,instance,mode,value,std_error,opt,ratio,trials,seed\n");
    let label = instance.display().to_string();

    // Value per order, plus the offline optimum.
    type ValueOfOrder = Box<dyn FnMut(&[usize]) -> f64>;
    let (n, opt, mut value_of_order): (usize, f64, ValueOfOrder) = match which {
        AppArg::String => {
            let bits: Vec<u8> = text
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    other => Err(format!("invalid bit `{other}`")),
                })
                .collect::<Result<_, _>>()?;
            let n = bits.len();
            (
                n,
                n as f64,
                Box::new(move |order: &[usize]| {
                    let out = apps::guess_string(&bits, order);
                    out.correct as f64
                }),
            )
        }
        AppArg::Knapsack => {
            let mut items = Vec::new();
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(format!("line {}: expected `size value`", lineno + 1));
                }
                let size: f64 = fields[0].parse().map_err(|_| "invalid size".to_string())?;
                let value: f64 = fields[1].parse().map_err(|_| "invalid value".to_string())?;
                items.push(KnapsackItem::new(size, value));
            }
            let capacity = capacity.ok_or("knapsack requires --capacity")?;
            let opt = oracle::knapsack_opt(&items, capacity).map_err(|e| e.to_string())?;
            (
                items.len(),
                opt,
                Box::new(move |order: &[usize]| {
                    apps::knapsack_online(&items, capacity, order).combined_value
                }),
            )
        }
        AppArg::SingleLength | AppArg::TwoLength => {
            let inst = Instance::parse(&text).map_err(|e| e.to_string())?;
            let stats = inst.stats();
            match which {
                AppArg::SingleLength if stats.k > 1 => {
                    return Err("single-length app requires one interval length".into())
                }
                AppArg::TwoLength if stats.k > 2 => {
                    return Err("two-length app requires at most two interval lengths".into())
                }
                _ => {}
            }
            let opt = oracle::opt_weighted(&inst).weight;
            let n = inst.len();
            let is_single = which == AppArg::SingleLength;
            (
                n,
                opt,
                Box::new(move |order: &[usize]| {
                    let order = ArrivalOrder(order.iter().map(|&i| IntervalId(i)).collect());
                    if is_single {
                        apps::select_single_length(&inst, &order)
                            .map(|o| o.weight)
                            .unwrap_or(f64::NAN)
                    } else {
                        apps::select_two_length(&inst, &order)
                            .map(|o| o.value)
                            .unwrap_or(f64::NAN)
                    }
                }),
            )
        }
    };

    let (mode_name, mean, std_error, trials): (&str, f64, f64, Option<u64>) = match orders {
        OrdersArg::Exact => {
            if n > rosel::engine::EXACT_MAX_ITEMS {
                return Err(format!(
                    "exact order enumeration is guarded at {} items; use --orders mc",
                    rosel::engine::EXACT_MAX_ITEMS
                ));
            }
            let idx: Vec<usize> = (0..n).collect();
            let mut sum = 0.0;
            let mut count = 0u64;
            rosel::order::for_each_permutation(&idx, |order| {
                let v = value_of_order(order);
                if emit_trace {
                    println!("# order {order:?} -> {v}");
                }
                sum += v;
                count += 1;
            });
            ("exact", sum / count as f64, 0.0, None)
        }
        OrdersArg::Mc => {
            let mut rng_order: Vec<usize> = (0..n).collect();
            let mut rng = rosel::order::rng_from_seed(global.seed);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..global.trials {
                rosel::order::shuffle(&mut rng_order, &mut rng);
                let v = value_of_order(&rng_order);
                if emit_trace {
                    println!("# order {rng_order:?} -> {v}");
                }
                sum += v;
                sum_sq += v * v;
            }
            let mean = sum / global.trials as f64;
            let var = (sum_sq - sum * sum / global.trials as f64)
                / (global.trials.saturating_sub(1)) as f64;
            (
                "mc",
                mean,
                (var.max(0.0) / global.trials as f64).sqrt(),
                Some(global.trials),
            )
        }
    };

    let ratio = if mean > 0.0 { opt / mean } else { f64::NAN };
    rows.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        match which {
            AppArg::String => "string",
            AppArg::Knapsack => "knapsack",
            AppArg::SingleLength => "single-length",
            AppArg::TwoLength => "two-length",
        },
        label,
        mode_name,
        mean,
        std_error,
        opt,
        ratio,
        trials.map(|t| t.to_string()).unwrap_or_default(),
        trials.map(|_| global.seed.to_string()).unwrap_or_default(),
    ));
    emit(global, &rows)?;
    Ok(ExitCode::SUCCESS)
}
