//! Musical icosahedra: 12-tone placements on the icosahedron graph, their
//! inter- and intra-permutation families, neighboring-number invariants,
//! and the permutation-extension that yields the 72 melakarta scales from
//! C major.

pub mod assignment;
pub mod diagrams;
pub mod error;
pub mod extension;
pub mod icosahedron;
pub mod invariants;
pub mod permutations;
pub mod report;
pub mod solver;
pub mod tones;
pub mod verify;

pub use assignment::{named_type, type1, MusicalIcosahedron, TypeLibrary};
pub use error::{Error, Result};
pub use icosahedron::{canonical_graph, InterMask, VertexId};
pub use invariants::{musical_invariant, neighboring_number, HalfInteger, InvariantSpec};
pub use tones::{PitchClass, Scale, ToneSet};
