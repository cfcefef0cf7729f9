//! End-to-end checks of the command-line surface: exit codes, formats, and
//! reproducibility.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn rosel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rosel-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn usage_errors_exit_one() {
    let out = rosel(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = rosel(&["gen", "bogus:spec"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_emits_parseable_instances() {
    let out = rosel(&["gen", "flanked:n=5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let inst = rosel::instance::Instance::parse(&text).unwrap();
    assert_eq!(inst.len(), 5);
}

#[test]
fn exact_reports_closed_form_rows() {
    let out = rosel(&["exact", "--spec", "lb1", "--metric", "size"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("5/3"), "{text}");
    assert!(text.contains("6/5"), "{text}");
}

#[test]
fn mc_is_reproducible_for_a_fixed_seed() {
    let args = [
        "mc",
        "--spec",
        "flanked:n=20",
        "--metric",
        "size",
        "--trials",
        "2000",
        "--seed",
        "7",
    ];
    let a = stdout(&rosel(&args));
    let b = stdout(&rosel(&args));
    assert_eq!(a, b);
    assert!(a.contains("mc"));
}

#[test]
fn run_consumes_instance_files_and_orders() {
    let dir = temp_dir("run");
    let path = dir.join("instance.txt");
    fs::write(&path, "0 10\n2 3\n-0.5 0.5\n").unwrap();
    let out = rosel(&[
        "run",
        "--instance",
        path.to_str().unwrap(),
        "--order",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // The small interval replaces the large one; the flank is then accepted.
    assert!(text.contains("Replace"), "{text}");
}

#[test]
fn bias_emits_csv_with_header() {
    let out = rosel(&[
        "bias",
        "--process",
        "parity",
        "--parameter",
        "0.5",
        "--trials",
        "4000",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("model,parameter,analytic,empirical,stderr,trials,seed"));
    assert!(text.contains("parity[wr],0.5,0.666666"));
}

#[test]
fn bias_permutation_mode_is_labelled() {
    let out = rosel(&[
        "bias",
        "--process",
        "pair",
        "--mode",
        "perm",
        "--population",
        "6",
        "--trials",
        "4000",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("pair[perm]"), "{text}");
}

#[test]
fn curves_write_to_files() {
    let dir = temp_dir("curves");
    let path = dir.join("curve.csv");
    let out = rosel(&[
        "curves",
        "--which",
        "parity-bias",
        "--points",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 10); // header + 9 points
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = temp_dir("config");
    let config = dir.join("run.conf");
    fs::write(&config, "seed=5\ntrials=1500\nformat=json\n").unwrap();
    let from_config = stdout(&rosel(&[
        "mc",
        "--spec",
        "lb1",
        "--metric",
        "size",
        "--config",
        config.to_str().unwrap(),
    ]));
    assert!(from_config.trim_start().starts_with('{'), "{from_config}");
    assert!(from_config.contains("\"trials\": 1500"));
    // An explicit flag overrides the config value.
    let overridden = stdout(&rosel(&[
        "mc",
        "--spec",
        "lb1",
        "--metric",
        "size",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "800",
    ]));
    assert!(overridden.contains("\"trials\": 800"));
}

#[test]
fn app_commands_report_summaries() {
    let dir = temp_dir("app");
    let strings = dir.join("bits.txt");
    fs::write(&strings, "0 0 0 0 0 0\n").unwrap();
    let out = rosel(&[
        "app",
        "string",
        "--instance",
        strings.to_str().unwrap(),
        "--orders",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("string"));
    assert!(text.contains(",6,")); // all six guesses correct

    let knap = dir.join("items.txt");
    fs::write(&knap, "6 6\n5 5\n5 5\n").unwrap();
    let out = rosel(&[
        "app",
        "knapsack",
        "--instance",
        knap.to_str().unwrap(),
        "--orders",
        "exact",
        "--capacity",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("knapsack"));

    let single = dir.join("single.txt");
    fs::write(&single, "0 2 4\n1 3 6\n4 6 2\n5 7 3\n").unwrap();
    let out = rosel(&[
        "app",
        "single-length",
        "--instance",
        single.to_str().unwrap(),
        "--orders",
        "mc",
        "--trials",
        "400",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("single-length"));
}
