//! Release gate: runs the full acceptance suite and prints one verdict
//! line per criterion. Run with `--nocapture` to see the lines even on
//! success:
//!
//! ```text
//! cargo test -p recolor-core --test acceptance -- --nocapture
//! ```

use recolor_core::acceptance::run_all;

#[test]
fn acceptance_suite() {
    let outcomes = run_all(false);
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).collect();
    assert!(
        failed.is_empty(),
        "{} of {} acceptance criteria failed",
        failed.len(),
        outcomes.len()
    );
}
