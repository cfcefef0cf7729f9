//! Acceptance suite: runs every criterion of the verification battery and
//! prints one pass/fail line per criterion (visible with `--nocapture`).

use rosel::verify;

#[test]
fn acceptance_criteria() {
    let results = verify::run_all();
    for r in &results {
        println!("{}", r.render());
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name)
        .collect();
    assert!(
        failed.is_empty(),
        "failed criteria: {failed:?} (run with --nocapture for details)"
    );
}
