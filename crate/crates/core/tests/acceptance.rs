//! End-to-end acceptance gate: one check per headline claim, one printed
//! line per check. Run with `cargo test --test acceptance -- --nocapture`
//! or via the CLI as `equifit --seedcheck`.

use equifit::verify;

#[test]
fn acceptance() {
    let outcomes = verify::run_all();
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| o.name)
        .collect();
    assert!(failed.is_empty(), "failed checks: {failed:?}");
}
