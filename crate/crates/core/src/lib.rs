//! Finite models of the m-coloured random graph and the colour-permuting
//! groups acting on it.
//!
//! * [`perm`]: permutations of `{1..d}` (right action) and small symmetric groups.
//! * [`graph`]: m-edge-coloured complete graphs, witness queries, saturation,
//!   back-and-forth extension and the even-palette obstruction.
//! * [`equivariant`]: finite groups with a colour action, equivariant pair
//!   colourings and the orbit-graph construction.
//! * [`spin`]: exact Clifford arithmetic for the two double covers of Sym(m).
//! * [`report`]: command pipelines producing machine-readable run reports.

pub mod equivariant;
pub mod graph;
pub mod perm;
pub mod report;
pub mod spin;

pub use equivariant::{FiniteGroup, OrbitGraphSpec, PairColouring};
pub use graph::{ColouredGraph, PartialIso, WitnessQuery};
pub use perm::{Colour, Perm};
pub use report::RunReport;
pub use spin::{CoverKind, PinElement};
