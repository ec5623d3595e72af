//! Pitch classes, cyclic scales and the scale catalogs.
//!
//! Spelling is fixed to one name per pitch class (`Eb`, not `D#`; `Bb`, not
//! `A#`). Parsing accepts exactly these twelve names.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the 12 chromatic tones, `C = 0` up to `B = 11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PitchClass(u8);

const NAMES: [&str; 12] = [
    "C", "C#", "D", "Eb", "E", "F", "F#", "G", "G#", "A", "Bb", "B",
];

impl PitchClass {
    pub const C: PitchClass = PitchClass(0);
    pub const CS: PitchClass = PitchClass(1);
    pub const D: PitchClass = PitchClass(2);
    pub const EB: PitchClass = PitchClass(3);
    pub const E: PitchClass = PitchClass(4);
    pub const F: PitchClass = PitchClass(5);
    pub const FS: PitchClass = PitchClass(6);
    pub const G: PitchClass = PitchClass(7);
    pub const GS: PitchClass = PitchClass(8);
    pub const A: PitchClass = PitchClass(9);
    pub const BB: PitchClass = PitchClass(10);
    pub const B: PitchClass = PitchClass(11);

    /// Reduces any integer mod 12.
    pub fn new(value: i32) -> Self {
        PitchClass(value.rem_euclid(12) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        NAMES[self.0 as usize]
    }

    pub fn all() -> impl Iterator<Item = PitchClass> {
        (0..12).map(PitchClass)
    }

    pub fn transpose(self, semitones: i32) -> Self {
        PitchClass::new(self.0 as i32 + semitones)
    }
}

/// Parses one of the twelve canonical spellings.
pub fn pitch_class(name: &str) -> Result<PitchClass> {
    name.parse()
}

impl FromStr for PitchClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| PitchClass(i as u8))
            .ok_or_else(|| Error::UnknownTone(s.to_string()))
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for PitchClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PitchClass {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Unordered set of pitch classes stored as a 12-bit mask.
///
/// Ordering compares the raw mask, which only serves to make maps
/// deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ToneSet(u16);

impl ToneSet {
    pub fn empty() -> Self {
        ToneSet(0)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn insert(&mut self, pc: PitchClass) -> bool {
        let fresh = !self.contains(pc);
        self.0 |= 1 << pc.value();
        fresh
    }

    pub fn contains(self, pc: PitchClass) -> bool {
        self.0 & (1 << pc.value()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in ascending value order, C first.
    pub fn iter(self) -> impl Iterator<Item = PitchClass> {
        PitchClass::all().filter(move |pc| self.contains(*pc))
    }

    pub fn count_of(self, tones: &[PitchClass]) -> usize {
        tones.iter().filter(|t| self.contains(**t)).count()
    }
}

impl FromIterator<PitchClass> for ToneSet {
    fn from_iter<I: IntoIterator<Item = PitchClass>>(iter: I) -> Self {
        let mut set = ToneSet::empty();
        for pc in iter {
            set.insert(pc);
        }
        set
    }
}

impl fmt::Display for ToneSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, pc) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{pc}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered, cyclic sequence of distinct pitch classes.
///
/// The wrap-around pair (last, first) is always a neighboring pair, so a
/// scale of `n >= 2` tones has exactly `n` neighboring pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Scale {
    tones: Vec<PitchClass>,
}

impl Scale {
    pub fn new(tones: Vec<PitchClass>) -> Result<Self> {
        if tones.is_empty() || tones.len() > 12 {
            return Err(Error::ScaleLength(tones.len()));
        }
        let mut seen = ToneSet::empty();
        for &t in &tones {
            if !seen.insert(t) {
                return Err(Error::DuplicateTone(t));
            }
        }
        Ok(Scale { tones })
    }

    /// Builds a scale from tone names such as `["C", "Eb", "G"]`.
    pub fn parse<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let tones = names
            .iter()
            .map(|n| n.as_ref().parse())
            .collect::<Result<Vec<_>>>()?;
        Scale::new(tones)
    }

    pub fn tones(&self) -> &[PitchClass] {
        &self.tones
    }

    pub fn len(&self) -> usize {
        self.tones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tones.is_empty()
    }

    pub fn tone_set(&self) -> ToneSet {
        self.tones.iter().copied().collect()
    }

    /// Consecutive pairs including (last, first); empty for one-tone scales.
    pub fn neighbor_pairs(&self) -> impl Iterator<Item = (PitchClass, PitchClass)> + '_ {
        let n = self.tones.len();
        let count = if n < 2 { 0 } else { n };
        (0..count).map(move |i| (self.tones[i], self.tones[(i + 1) % n]))
    }
}

impl<'de> Deserialize<'de> for Scale {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let tones = Vec::<PitchClass>::deserialize(deserializer)?;
        Scale::new(tones).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pc) in self.tones.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{pc}")?;
        }
        Ok(())
    }
}

/// The 12-tone sequence from C that alternates steps of `+up` and `-down`.
pub fn zigzag_scale(up: i32, down: i32) -> Result<Scale> {
    let mut tones = Vec::with_capacity(12);
    let mut seen = ToneSet::empty();
    let mut current = PitchClass::C;
    for step in 0..12 {
        if !seen.insert(current) {
            return Err(Error::NonBijectiveZigzag {
                up,
                down,
                revisited: current,
                produced: step,
            });
        }
        tones.push(current);
        current = if step % 2 == 0 {
            current.transpose(up)
        } else {
            current.transpose(-down)
        };
    }
    Scale::new(tones)
}

/// The six zigzag step pairs that generate 12-tone scales.
pub const ZIGZAG_STEPS: [(i32, i32); 6] = [(1, 11), (3, 1), (5, 3), (7, 5), (9, 7), (11, 9)];

const CATALOG: &[(&str, &[&str])] = &[
    (
        "chromatic",
        &[
            "C", "C#", "D", "Eb", "E", "F", "F#", "G", "G#", "A", "Bb", "B",
        ],
    ),
    ("W1", &["C", "D", "E", "F#", "G#", "Bb"]),
    ("W2", &["C#", "Eb", "F", "G", "A", "B"]),
    (
        "pythagorean",
        &[
            "C", "G", "D", "A", "E", "B", "F#", "C#", "G#", "Eb", "Bb", "F",
        ],
    ),
    ("c_major", &["C", "D", "E", "F", "G", "A", "B"]),
    (
        "chromatic_A",
        &[
            "C", "G", "D", "C#", "E", "Eb", "F#", "F", "G#", "A", "Bb", "B",
        ],
    ),
    (
        "chromatic_B",
        &[
            "C", "G", "D", "Eb", "E", "C#", "F#", "F", "G#", "A", "Bb", "B",
        ],
    ),
    (
        "chromatic_C",
        &[
            "C", "G", "D", "C#", "E", "Eb", "F#", "F", "G#", "B", "Bb", "A",
        ],
    ),
    (
        "chromatic_D",
        &[
            "C", "G", "D", "Eb", "E", "C#", "F#", "F", "G#", "B", "Bb", "A",
        ],
    ),
    ("wholetone_A2", &["G", "C#", "Eb", "F", "A", "B"]),
    ("wholetone_B2", &["G", "Eb", "C#", "F", "A", "B"]),
    ("wholetone_C2", &["G", "C#", "Eb", "F", "B", "A"]),
    ("wholetone_D2", &["G", "Eb", "C#", "F", "B", "A"]),
];

/// Keys accepted by [`catalog`], in listing order.
pub fn catalog_keys() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|(k, _)| *k)
}

pub fn catalog(key: &str) -> Result<Scale> {
    let (_, names) = CATALOG
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| Error::UnknownCatalog(key.to_string()))?;
    Scale::parse(names)
}

/// Catalog lookup for keys known to exist.
pub(crate) fn builtin(key: &str) -> Scale {
    catalog(key).expect("builtin catalog key")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Melakarta {
    pub index: usize,
    pub name: String,
    pub tones: Scale,
}

const MELAKARTA_JSON: &str = include_str!("../data/melakarta.json");

/// All 72 melakarta scales ordered by index.
pub fn melakarta_catalog() -> &'static [Melakarta] {
    static TABLE: OnceLock<Vec<Melakarta>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let table: Vec<Melakarta> =
            serde_json::from_str(MELAKARTA_JSON).expect("bundled melakarta.json is valid");
        debug_assert!(table.iter().enumerate().all(|(i, m)| m.index == i + 1));
        table
    })
}

pub fn melakarta(index: usize) -> Result<&'static Melakarta> {
    if !(1..=72).contains(&index) {
        return Err(Error::MelakartaIndex(index));
    }
    Ok(&melakarta_catalog()[index - 1])
}

/// Inverse lookup. `Ok(None)` means a well-formed 7-tone set that is not a
/// melakarta scale; malformed input is an error.
pub fn melakarta_index(tones: &[PitchClass]) -> Result<Option<&'static Melakarta>> {
    let mut set = ToneSet::empty();
    for &t in tones {
        if !set.insert(t) {
            return Err(Error::DuplicateTone(t));
        }
    }
    if set.len() != 7 {
        return Err(Error::MelakartaSize(set.len()));
    }
    Ok(melakarta_for_set(set))
}

pub fn melakarta_for_set(set: ToneSet) -> Option<&'static Melakarta> {
    melakarta_catalog()
        .iter()
        .find(|m| m.tones.tone_set() == set)
}

/// Tones sorted by value, so C comes first when present.
pub fn ascending_from_c(set: ToneSet) -> Result<Scale> {
    Scale::new(set.iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &Scale) -> Vec<&'static str> {
        s.tones().iter().map(|t| t.name()).collect()
    }

    #[test]
    fn name_lookup() {
        assert_eq!(pitch_class("C").unwrap().value(), 0);
        assert_eq!(pitch_class("G").unwrap().value(), 7);
        assert_eq!(pitch_class("Bb").unwrap().value(), 10);
        for pc in PitchClass::all() {
            assert_eq!(pitch_class(pc.name()).unwrap(), pc);
        }
    }

    #[test]
    fn enharmonic_spellings_are_rejected() {
        for bad in ["D#", "A#", "Db", "c", "H", ""] {
            assert!(
                matches!(pitch_class(bad), Err(Error::UnknownTone(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn pitch_class_reduces_mod_12() {
        assert_eq!(PitchClass::new(12), PitchClass::C);
        assert_eq!(PitchClass::new(-1), PitchClass::B);
        assert_eq!(PitchClass::new(31), PitchClass::G);
    }

    #[test]
    fn scale_rejects_duplicates_and_bad_lengths() {
        assert!(matches!(
            Scale::new(vec![PitchClass::C, PitchClass::C]),
            Err(Error::DuplicateTone(_))
        ));
        assert!(matches!(Scale::new(vec![]), Err(Error::ScaleLength(0))));
    }

    #[test]
    fn neighbor_pairs_wrap_around() {
        let s = catalog("W1").unwrap();
        let pairs: Vec<_> = s.neighbor_pairs().collect();
        assert_eq!(pairs.len(), 6);
        assert_eq!(pairs[5], (PitchClass::BB, PitchClass::C));

        let single = Scale::new(vec![PitchClass::E]).unwrap();
        assert_eq!(single.neighbor_pairs().count(), 0);
        let two = Scale::new(vec![PitchClass::E, PitchClass::F]).unwrap();
        assert_eq!(two.neighbor_pairs().count(), 2);
    }

    #[test]
    fn zigzag_examples() {
        assert_eq!(
            names(&zigzag_scale(1, 11).unwrap()),
            ["C", "C#", "D", "Eb", "E", "F", "F#", "G", "G#", "A", "Bb", "B"]
        );
        assert_eq!(
            names(&zigzag_scale(3, 1).unwrap()),
            ["C", "Eb", "D", "F", "E", "G", "F#", "A", "G#", "B", "Bb", "C#"]
        );
        assert_eq!(
            names(&zigzag_scale(7, 5).unwrap()),
            ["C", "G", "D", "A", "E", "B", "F#", "C#", "G#", "Eb", "Bb", "F"]
        );
        assert_eq!(
            names(&zigzag_scale(5, 3).unwrap()),
            ["C", "F", "D", "G", "E", "A", "F#", "B", "G#", "C#", "Bb", "Eb"]
        );
        assert_eq!(
            names(&zigzag_scale(9, 7).unwrap()),
            ["C", "A", "D", "B", "E", "C#", "F#", "Eb", "G#", "F", "Bb", "G"]
        );
        assert_eq!(
            names(&zigzag_scale(11, 9).unwrap()),
            ["C", "B", "D", "C#", "E", "Eb", "F#", "F", "G#", "G", "Bb", "A"]
        );
    }

    #[test]
    fn zigzag_rejects_revisits() {
        // +2 -2 returns to C immediately
        assert!(matches!(
            zigzag_scale(2, 2),
            Err(Error::NonBijectiveZigzag { produced: 2, .. })
        ));
        // +11 then -1 is the descending chromatic scale, a valid 12-tone chain
        assert_eq!(zigzag_scale(11, 1).unwrap().tones()[1], PitchClass::B);
    }

    #[test]
    fn zigzag_matches_catalog() {
        assert_eq!(zigzag_scale(1, 11).unwrap(), catalog("chromatic").unwrap());
        assert_eq!(zigzag_scale(7, 5).unwrap(), catalog("pythagorean").unwrap());
    }

    #[test]
    fn catalog_examples() {
        assert_eq!(
            names(&catalog("W2").unwrap()),
            ["C#", "Eb", "F", "G", "A", "B"]
        );
        assert_eq!(
            names(&catalog("chromatic_A").unwrap()),
            ["C", "G", "D", "C#", "E", "Eb", "F#", "F", "G#", "A", "Bb", "B"]
        );
        assert_eq!(
            names(&catalog("wholetone_C2").unwrap()),
            ["G", "C#", "Eb", "F", "B", "A"]
        );
        assert!(matches!(catalog("dorian"), Err(Error::UnknownCatalog(_))));
        for key in catalog_keys() {
            catalog(key).unwrap();
        }
    }

    #[test]
    fn melakarta_examples() {
        let m = melakarta(1).unwrap();
        assert_eq!(m.name, "Kanakangi");
        assert_eq!(names(&m.tones), ["C", "C#", "D", "F", "G", "G#", "A"]);
        let m = melakarta(29).unwrap();
        assert_eq!(m.name, "Dheerasankarabaranam");
        assert_eq!(names(&m.tones), ["C", "D", "E", "F", "G", "A", "B"]);
        let m = melakarta(72).unwrap();
        assert_eq!(m.name, "Rasikapriya");
        assert_eq!(names(&m.tones), ["C", "Eb", "E", "F#", "G", "Bb", "B"]);
        assert!(matches!(melakarta(0), Err(Error::MelakartaIndex(0))));
        assert!(matches!(melakarta(73), Err(Error::MelakartaIndex(73))));
    }

    #[test]
    fn melakarta_inverse_lookup() {
        let set = |s: &[&str]| Scale::parse(s).unwrap().tones().to_vec();
        let hit = melakarta_index(&set(&["C", "D", "E", "F#", "G", "A", "B"]))
            .unwrap()
            .unwrap();
        assert_eq!((hit.index, hit.name.as_str()), (65, "Mechakalyani"));
        let hit = melakarta_index(&set(&["G", "C", "D", "E", "F", "A", "B"]))
            .unwrap()
            .unwrap();
        assert_eq!(hit.index, 29);
        let hit = melakarta_index(&set(&["C", "D", "E", "F", "G", "A", "Bb"]))
            .unwrap()
            .unwrap();
        assert_eq!((hit.index, hit.name.as_str()), (28, "Harikambhoji"));

        // well-formed miss: no G
        assert!(melakarta_index(&set(&["C", "D", "E", "F", "F#", "A", "B"]))
            .unwrap()
            .is_none());
        // malformed
        assert!(matches!(
            melakarta_index(&set(&["C", "D", "E"])),
            Err(Error::MelakartaSize(3))
        ));
        assert!(melakarta_index(&[PitchClass::C; 7]).is_err());
    }

    #[test]
    fn catalog_structure() {
        let all = melakarta_catalog();
        assert_eq!(all.len(), 72);
        let sets: std::collections::HashSet<_> = all.iter().map(|m| m.tones.tone_set()).collect();
        assert_eq!(sets.len(), 72);
        use PitchClass as P;
        for m in all {
            let s = m.tones.tone_set();
            assert!(s.contains(P::C) && s.contains(P::G), "{}", m.name);
            assert_eq!(s.count_of(&[P::F, P::FS]), 1);
            assert_eq!(s.count_of(&[P::CS, P::D, P::EB, P::E]), 2);
            assert_eq!(s.count_of(&[P::GS, P::A, P::BB, P::B]), 2);
            assert_eq!(ascending_from_c(s).unwrap(), m.tones, "{}", m.name);
        }
    }

    #[test]
    fn ascending_examples() {
        let s: ToneSet = [PitchClass::G, PitchClass::C, PitchClass::E]
            .into_iter()
            .collect();
        assert_eq!(names(&ascending_from_c(s).unwrap()), ["C", "E", "G"]);
        let s: ToneSet = [PitchClass::B, PitchClass::CS].into_iter().collect();
        assert_eq!(names(&ascending_from_c(s).unwrap()), ["C#", "B"]);
        assert!(ascending_from_c(ToneSet::empty()).is_err());
    }

    #[test]
    fn scale_json_rejects_duplicates() {
        let ok: Scale = serde_json::from_str(r#"["C","E","G"]"#).unwrap();
        assert_eq!(ok.len(), 3);
        assert!(serde_json::from_str::<Scale>(r#"["C","C"]"#).is_err());
    }
}
