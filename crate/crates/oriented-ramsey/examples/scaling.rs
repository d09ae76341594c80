//! A small scaling sweep: exact path measurements plus solver probes,
//! rendered as CSV and summarized per grid point.

use oriented_ramsey::experiment::{run_scaling, to_csv, ColoringKind, ScalingConfig};

fn main() {
    let cfg = ScalingConfig::new(vec![128, 256, 512], 5, ColoringKind::Random, 2024);
    let report = run_scaling(&cfg);

    print!("{}", to_csv(&report));

    println!();
    for agg in &report.aggregates {
        println!(
            "N={:4}: mean best path {:6.1}, p50 {}, p90 {}, solver probe {}/{}",
            agg.n,
            agg.mean_best_path,
            agg.p50_best_path,
            agg.p90_best_path,
            agg.probe_successes,
            agg.trials
        );
    }

    // Same config, same records: the sweep is a pure function of it.
    let again = run_scaling(&cfg);
    assert_eq!(again.records, report.records);
    println!("\nrerun reproduced all {} records", report.records.len());
}
