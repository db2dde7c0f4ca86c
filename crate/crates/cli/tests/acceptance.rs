//! Acceptance criteria: one PASS/FAIL line per criterion, details for the
//! failing checks, non-zero exit status if any criterion fails.

use pseudoherm_cli::verify::{criterion, report};

fn main() {
    let results: Vec<_> = (1..=8u8).map(criterion).collect();
    for c in &results {
        println!("{}", c.summary_line());
    }
    let failed: Vec<_> = results.iter().filter(|c| !c.passed()).cloned().collect();
    if failed.is_empty() {
        println!("acceptance: all 8 criteria passed");
        return;
    }
    println!();
    print!("{}", report(&failed));
    println!("acceptance: {} of 8 criteria failed", failed.len());
    std::process::exit(1);
}
