//! Triangulations of 3-manifolds as isomorphism signatures, the bistellar
//! moves that connect them, exhaustive move-graph generation, network
//! analysis of those graphs, and a small dense classifier over fixed-length
//! signature datasets.
//!
//! The crate is organised bottom-up:
//!
//! - [`perm`], [`tri`], [`skeleton`]: the combinatorial data model;
//! - [`isosig`]: the bit-exact signature codec;
//! - [`moves`]: the 2-3 / 3-2 / 1-4 / 4-1 bistellar moves;
//! - [`graph`]: breadth-first move-graph generation and its file format;
//! - [`analysis`]: density, clustering, Wiener index, eigenvector
//!   centrality, minimum cycle basis, tetrahedron statistics;
//! - [`dataset`], [`mlp`]: one-hot signature datasets and the classifier
//!   with gradient saliency.

pub mod analysis;
pub mod dataset;
pub mod graph;
pub mod isosig;
pub mod mlp;
pub mod moves;
pub mod perm;
pub mod seeds;
pub mod sigfile;
pub mod skeleton;
pub mod tri;

pub use isosig::{decode, encode, IsoSig};
pub use perm::Perm4;
pub use tri::{FaceRef, Gluing, Triangulation};
