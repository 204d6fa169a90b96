// Runs every randomised self-check suite and prints a summary per suite.

use coleman_gross::checks::{run_suite, CheckConfig, SUITES};

fn main() -> coleman_gross::Result<()> {
    let cfg = CheckConfig { seed: 7, ..CheckConfig::default() };
    for suite in SUITES {
        let start = std::time::Instant::now();
        let report = run_suite(suite, &cfg)?;
        let worst = report.instances.iter().map(|i| i.residual_valuation).min();
        println!(
            "{suite:>20}: {} instances, worst residual valuation {:?}, {} in {:.1?}",
            report.instances.len(),
            worst,
            if report.passed { "pass" } else { "FAIL" },
            start.elapsed()
        );
        for i in report.instances.iter().filter(|i| !i.passed) {
            println!("    failed {} (v = {})", i.label, i.residual_valuation);
        }
        for s in &report.skipped {
            println!("    skipped {s}");
        }
    }
    Ok(())
}
