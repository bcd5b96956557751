//! Choosing a combinatorial embedding of a biconnected planar graph so that
//! as many cycles from a prescribed set as possible bound faces.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`graph`]: multigraphs, rotation systems, face tracing, duals;
//! * [`planarity`] and [`spqr`]: planarity testing with embedding output and
//!   SPQR-trees with embedding composition;
//! * [`cycles`]: cycle sets, projections into skeletons, interface sets and
//!   the all-facial feasibility test;
//! * [`exact`] and [`approx`]: the dynamic programs over the SPQR-tree;
//! * [`oracle`]: exhaustive search used as ground truth;
//! * [`gen`]: instance generators, including the hardness constructions.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod approx;
pub mod cycles;
mod error;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod matching;
pub mod mis;
pub mod oracle;
pub mod planarity;
mod reconstruct;
pub mod spqr;
pub mod table;

pub use error::{Error, Result};

pub use approx::approximate;
pub use cycles::{check_all_facial, CycleId, CycleSet};
pub use exact::{solve_exact, solve_sp_fpt, solve_sp_two_shared};
pub use graph::{Cycle, Dart, EdgeId, Multigraph, RotationEmbedding, VertexId};
pub use planarity::planar_embed;
pub use spqr::{EmbeddingChoice, RootedTree, SpqrTree};
pub use table::{Guarantee, Method, Solution};

mod prelude {
    pub use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
    pub use alloc::string::{String, ToString};
    pub use alloc::vec;
    pub use alloc::vec::Vec;
    pub use alloc::format;
}
