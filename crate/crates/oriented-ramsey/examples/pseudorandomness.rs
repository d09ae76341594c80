//! Sampled pseudorandomness checks: random hosts pass, transitive hosts
//! fail with a witness pair that anyone can recount.

use oriented_ramsey::pseudo::{check_exhaustive, check_sampled, PseudoParams, PseudoVerdict};
use oriented_ramsey::tournament::Tournament;

fn main() {
    let params = PseudoParams::new(0.25);

    let random = Tournament::random(512, 3);
    let report = check_sampled(&random, &params, 10_000, 99);
    println!("random n=512: {:?} after {} trials", report.verdict, report.trials);
    if let Some(d) = &report.min_density {
        println!("  thinnest sampled pair density {:.3}", d.value());
    }

    let transitive = Tournament::transitive(512);
    let report = check_sampled(&transitive, &params, 10_000, 99);
    println!("transitive n=512: {:?}", report.verdict);
    let w = report.witness.expect("refutation carries a witness");
    let k = params.k_for(512);
    assert!(w.validates(&transitive, params.epsilon(), k));
    println!(
        "  witness: |A|={}, |B|={}, {} forward edges (recounted)",
        w.a.count(),
        w.b.count(),
        w.edges
    );

    // Exhaustive checking is only affordable for toy set sizes, and at
    // k=3 even a random host gets refuted: tiny sets fluctuate too much.
    // The sigma*log(n) set-size floor is what makes certification stick.
    let tiny = Tournament::random(12, 5);
    let toy = PseudoParams::new(0.25).with_k(3);
    let report = check_exhaustive(&tiny, &toy, 50_000_000).unwrap();
    println!("random n=12 at k=3: {:?} over {} enumerated pairs", report.verdict, report.trials);
    if report.verdict == PseudoVerdict::Refuted {
        let w = report.witness.unwrap();
        println!("  e.g. {} forward edges between two 3-sets", w.edges);
    }
}
