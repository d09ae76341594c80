//! The split-and-assemble machinery exposed piece by piece: decompose a
//! tree, pick candidate regions, then stitch part embeddings together
//! along the connector edges.

use oriented_ramsey::bitset::VertexSet;
use oriented_ramsey::coloring::{Color, ColoredTournament};
use oriented_ramsey::embed::validate_embedding;
use oriented_ramsey::solver::{
    assemble_from_candidates, greedy_part_embed, CandidateSets, SplitSkeleton,
};
use oriented_ramsey::split::tree_split;
use oriented_ramsey::tournament::Tournament;
use oriented_ramsey::tree::OrientedTree;

fn main() {
    let n = 256;
    let host = ColoredTournament::monochromatic(Tournament::random(n, 31), Color::Red);
    let t = OrientedTree::out_path(64);

    let split = tree_split(&t, 2.0, 1.0 / 6.0).unwrap();
    let skeleton = SplitSkeleton::from_tree_split(&t, &split);
    println!("P64 split into {} parts; connectors: {:?}", skeleton.parts.len(),
        skeleton.connectors.iter().filter(|c| c.is_some()).count());

    // Hand every part the same free region; an all-red host makes any
    // disjoint slicing work, so slice the host evenly.
    let parts = skeleton.parts.len();
    let slab = n / parts;
    let regions: Vec<VertexSet> = (0..parts)
        .map(|i| {
            let mut s = VertexSet::empty(n);
            for v in i * slab..(i + 1) * slab {
                s.insert(v);
            }
            s
        })
        .collect();
    let cands = CandidateSets { sets: regions.clone(), regions };
    cands.check(&skeleton).unwrap();

    let mut embedder = |part: usize, root_host: usize| {
        greedy_part_embed(&host, Color::Red, &t, &skeleton.parts[part],
            skeleton.roots[part], &cands.regions[part], root_host)
    };
    let emb = assemble_from_candidates(&host, Color::Red, &t, &skeleton, &cands, &mut embedder)
        .unwrap();
    validate_embedding(&host, &t, &emb).unwrap();
    println!("assembled a red P64 across {} disjoint regions of {} vertices", parts, slab);
    println!("image starts {:?}", &emb.map[..8]);
}
