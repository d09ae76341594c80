//! Monochromatic oriented trees in two-coloured tournaments: generators,
//! pseudorandomness certificates, tree decompositions, embedding
//! machinery, a composite search pipeline, and small exact oracles.
//!
//! The runnable entry points live in `examples/`; the `oriented-ramsey`
//! binary exposes the same operations behind a thin subcommand surface.

pub mod bitset;
pub mod codec;
pub mod coloring;
pub mod embed;
pub mod experiment;
pub mod machinery;
pub mod oracle;
pub mod pseudo;
pub mod rng;
pub mod solver;
pub mod split;
pub mod tournament;
pub mod tree;

pub use bitset::VertexSet;
pub use coloring::{block_coloring, interval_blocks, interval_coloring, Color, ColoredTournament};
pub use tournament::{OverlapError, Tournament};
