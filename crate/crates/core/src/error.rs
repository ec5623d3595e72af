use thiserror::Error;

use crate::icosahedron::VertexId;
use crate::tones::PitchClass;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown tone name `{0}` (expected one of C, C#, D, Eb, E, F, F#, G, G#, A, Bb, B)")]
    UnknownTone(String),

    #[error("tone {0} appears more than once")]
    DuplicateTone(PitchClass),

    #[error("a scale holds 1 to 12 tones, got {0}")]
    ScaleLength(usize),

    #[error("zigzag (+{up}, -{down}) revisits {revisited} after {produced} tones")]
    NonBijectiveZigzag {
        up: i32,
        down: i32,
        revisited: PitchClass,
        produced: usize,
    },

    #[error("unknown scale catalog key `{0}`")]
    UnknownCatalog(String),

    #[error("melakarta index {0} is outside 1..=72")]
    MelakartaIndex(usize),

    #[error("a melakarta scale has 7 distinct tones, got {0}")]
    MelakartaSize(usize),

    #[error("unknown vertex `{0}` (expected h0..h5 or s0..s5)")]
    UnknownVertex(String),

    #[error("assignment is not a bijection: {0}")]
    NotBijective(String),

    #[error("unsupported icosahedron type `{0}`")]
    UnsupportedType(String),

    #[error("invalid swap mask `{0}` (expected slots 0..5, e.g. `0,2`)")]
    InvalidMask(String),

    #[error("intra-permutation moves {tone}, which sits on hexagon vertex {vertex}")]
    MovesHexagonTone { tone: PitchClass, vertex: VertexId },

    #[error("intra-permutation is not a bijection on tones")]
    NotAPermutation,

    #[error("tone {tone} shifts by an odd number of semitones ({delta}); no shift signature")]
    OddShift { tone: PitchClass, delta: u8 },

    #[error("gauge conflict: {0}")]
    GaugeConflict(String),

    #[error("invariant spec: {0}")]
    InvariantSpec(String),

    #[error("assignment is not a member of the inter family of type R{0}")]
    NotInFamily(char),

    #[error("unknown melakarta icosahedron `{0}` (expected A, B, C or D)")]
    UnknownRagaType(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
