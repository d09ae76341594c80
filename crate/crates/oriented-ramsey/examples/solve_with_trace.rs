//! The strategy ladder end to end, with its decision trace.

use oriented_ramsey::coloring::ColoredTournament;
use oriented_ramsey::machinery::SolverConfig;
use oriented_ramsey::solver::{find_monochromatic_tree, SolveOutcome};
use oriented_ramsey::tournament::Tournament;
use oriented_ramsey::tree::OrientedTree;

fn main() {
    let n = 1024;
    let g = ColoredTournament::random_coloring(Tournament::random(n, 5), 11);

    // Guarantee-scale target: a directed path of order n / (8 sqrt(log2 n)).
    let m = ((n as f64) / (8.0 * (n as f64).log2().sqrt())).ceil() as usize;
    let t = OrientedTree::out_path(m);
    let cfg = SolverConfig::for_tree(m);

    let report = find_monochromatic_tree(&g, &t, &cfg);
    for event in &report.trace {
        println!("[{}] {}", event.strategy, event.detail);
    }
    match &report.outcome {
        SolveOutcome::Found { color, strategy, embedding } => {
            println!(
                "\nfound a {color} path of order {m} via `{strategy}`; first hosts {:?}",
                &embedding.map[..6.min(m)]
            );
        }
        SolveOutcome::NotFound { refuted } => {
            println!("\nno copy found (refuted: {refuted})");
        }
    }
}
