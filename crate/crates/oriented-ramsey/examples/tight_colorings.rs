//! Adversarial colourings that pin the extremal bounds, certified by
//! exact longest-path dynamic programming.

use oriented_ramsey::coloring::{block_coloring, interval_coloring};
use oriented_ramsey::oracle::longest_mono_paths;
use oriented_ramsey::tournament::Tournament;

fn main() {
    // Block colouring of the transitive tournament on (n-1)^2 vertices:
    // no monochromatic path reaches order n in either colour.
    for n in [4, 6, 8] {
        let g = block_coloring(n);
        let (red, blue) = longest_mono_paths(&g);
        assert!(red.exact && blue.exact);
        println!(
            "block colouring, {} vertices: longest red {}, blue {} (both = n-1 = {})",
            (n - 1) * (n - 1),
            red.order,
            blue.order,
            n - 1
        );
        assert_eq!(red.order, n - 1);
        assert_eq!(blue.order, n - 1);
    }

    // Interval colouring on random hosts: monochromatic paths stay below
    // 3N / sqrt(log2 N), matching the random lower-bound construction.
    println!();
    for e in [8, 10, 12] {
        let n = 1usize << e;
        let g = interval_coloring(&Tournament::random(n, 77));
        let (red, blue) = longest_mono_paths(&g);
        assert!(red.exact && blue.exact, "interval classes are acyclic");
        let best = red.order.max(blue.order);
        let bound = 3.0 * n as f64 / (n as f64).log2().sqrt();
        println!(
            "interval colouring, N={n}: longest mono path {best} <= {bound:.1} = 3N/sqrt(log2 N)"
        );
        assert!((best as f64) <= bound);
    }
}
