//! The four tree decompositions, shown on concrete trees.

use oriented_ramsey::split::{core_split, dpl, in_out_split, path_split, tree_split};
use oriented_ramsey::tree::{OrientedTree, TreeOrientation};

fn main() {
    // Out-directed path on 64 vertices: the canonical splitting client.
    let path = OrientedTree::out_path(64);
    let ts = tree_split(&path, 2.0, 1.0 / 6.0).unwrap();
    println!("tree_split of P64 (c=2, alpha=1/6): {} parts", ts.parts.len());
    for (i, part) in ts.parts.iter().take(3).enumerate() {
        println!("  part {i}: root {}, {} vertices", part.root, part.vertices.count());
    }
    println!("  ...");

    let ps = path_split(&path, 1.0 / 6.0).unwrap();
    println!("path_split of P64: {} chunks, quotient on {}", ps.parts.len(), ps.quotient.m());

    // A mixed-orientation tree alternates in- and out-directed layers.
    let mixed = OrientedTree::random(40, TreeOrientation::Uniform, 12);
    let io = in_out_split(&mixed);
    let sizes: Vec<usize> = io
        .layers
        .iter()
        .map(|l| l.iter().map(|s| s.vertices.count()).sum())
        .collect();
    println!("in_out_split of a random 40-vertex tree: layer sizes {sizes:?}");
    assert_eq!(sizes.iter().sum::<usize>(), 40);

    // Core layers peel high-descendant vertices; few layers suffice.
    let big = OrientedTree::random(2000, TreeOrientation::Out, 8);
    let k = (2000f64).powf(1.0 / 6.0).ceil() as usize;
    let cs = core_split(&big, k);
    println!("core_split of a random 2000-vertex tree at k={k}: {} layers", cs.layers.len());

    let layer = dpl(&big);
    println!(
        "first path layer: {} maximal paths, {} vertices left below",
        layer.paths.len(),
        layer.remainder.count()
    );
}
