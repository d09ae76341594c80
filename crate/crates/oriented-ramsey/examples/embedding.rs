//! Direct embedding tools: the sparse-complement greedy, long cycles in
//! a colour class, min-degree pairs, and the exhaustive baseline.

use oriented_ramsey::bitset::VertexSet;
use oriented_ramsey::coloring::{Color, ColoredTournament};
use oriented_ramsey::embed::{
    exact_embed, find_red_tree_in_sparse_blue, long_cycle, mindegree_pair, validate_embedding,
    validate_mindegree_pair,
};
use oriented_ramsey::tournament::Tournament;
use oriented_ramsey::tree::{OrientedTree, TreeOrientation};

fn main() {
    // An all-red host is the extreme sparse-blue case: the greedy embeds
    // any directed tree up to the (epsilon/4)|U| guarantee.
    let n = 512;
    let host = ColoredTournament::monochromatic(Tournament::random(n, 21), Color::Red);
    let u = VertexSet::full(n);
    let t = OrientedTree::random(32, TreeOrientation::Out, 4);
    let emb = find_red_tree_in_sparse_blue(&host, &u, &t, 0.25).unwrap();
    validate_embedding(&host, &t, &emb).unwrap();
    println!("sparse-blue greedy: embedded a 32-vertex out-tree into n={n}, all edges red");

    // Every vertex with red out-degree >= d sits on a red cycle of
    // length >= d+1; here the host is a random colouring.
    let g = ColoredTournament::random_coloring(Tournament::random(256, 9), 17);
    let cycle = long_cycle(&g, Color::Red, &VertexSet::full(256)).unwrap();
    println!("red cycle of length {} in a random colouring of n=256", cycle.len());

    let pair = mindegree_pair(&g, Color::Red, &VertexSet::full(256), 0.1, 33, 64).unwrap();
    validate_mindegree_pair(&g, &pair).unwrap();
    println!(
        "min-degree pair: |A|={}, |B|={}, every A-vertex sends >= {} red edges into B",
        pair.a.count(),
        pair.b.count(),
        pair.k
    );

    // The exhaustive search is the ground truth the heuristics answer
    // to; one colour class at a time, or None to ignore colours.
    let small = ColoredTournament::random_coloring(Tournament::random(10, 2), 3);
    let probe = OrientedTree::random(5, TreeOrientation::Uniform, 6);
    for c in [Color::Red, Color::Blue] {
        match exact_embed(&small, &probe, Some(c), 1_000_000).unwrap() {
            Some(emb) => println!("exact search found a {c} copy: {:?}", emb.map),
            None => println!("no {c} copy of the 5-vertex probe in the 10-vertex host"),
        }
    }
}
