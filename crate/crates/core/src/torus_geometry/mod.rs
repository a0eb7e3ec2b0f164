//! Exact lattice algebra on T³: Spin^c classes, the projected lattice of a
//! nontrivial class, the fiber trivialisation, and parameter lattices.

pub mod ivec;
mod parameter;
mod projected;
pub mod smith;
mod spinc;

pub use ivec::IVec3;
pub use parameter::{saturate_and_cosets, ParameterLattice};
pub use projected::{projected_lattice, FiberFormSplit, ProjectedLattice, TrivializedPoint};
pub use spinc::{cup_pairing, decompose_spinc, SpincStructure};
