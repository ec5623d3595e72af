//! Musical icosahedra: bijections from the 12 vertices of the canonical
//! graph to the 12 pitch classes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::icosahedron::{canonical_graph, IcosahedronGraph, InterMask, VertexId, VertexMap};
use crate::permutations::IntraPermutation;
use crate::tones::{builtin, PitchClass, Scale};

/// A placement of the 12 tones on the canonical icosahedron.
///
/// Equality and hashing compare the placement only; the label is descriptive.
#[derive(Debug, Clone)]
pub struct MusicalIcosahedron {
    tones: [PitchClass; 12],
    positions: [u8; 12],
    label: Option<String>,
}

impl PartialEq for MusicalIcosahedron {
    fn eq(&self, other: &Self) -> bool {
        self.tones == other.tones
    }
}

impl Eq for MusicalIcosahedron {}

impl std::hash::Hash for MusicalIcosahedron {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.tones.hash(state);
    }
}

impl MusicalIcosahedron {
    /// `tones[i]` is the tone on the vertex with dense index `i`
    /// (`h0..h5` then `s0..s5`).
    pub fn from_tones(tones: [PitchClass; 12]) -> Result<Self> {
        let mut positions = [u8::MAX; 12];
        for (v, t) in tones.iter().enumerate() {
            let slot = &mut positions[t.value() as usize];
            if *slot != u8::MAX {
                return Err(Error::NotBijective(format!(
                    "{t} placed on both {} and {}",
                    VertexId::from_dense(*slot as usize),
                    VertexId::from_dense(v)
                )));
            }
            *slot = v as u8;
        }
        Ok(MusicalIcosahedron {
            tones,
            positions,
            label: None,
        })
    }

    /// Reads hexagon tones then star tones.
    pub fn from_rings(hexagon: [PitchClass; 6], star: [PitchClass; 6]) -> Result<Self> {
        let mut tones = [PitchClass::C; 12];
        tones[..6].copy_from_slice(&hexagon);
        tones[6..].copy_from_slice(&star);
        Self::from_tones(tones)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn graph(&self) -> &'static IcosahedronGraph {
        canonical_graph()
    }

    pub fn tones(&self) -> &[PitchClass; 12] {
        &self.tones
    }

    pub fn tone_at(&self, v: VertexId) -> PitchClass {
        self.tones[v.dense()]
    }

    pub fn vertex_of(&self, pc: PitchClass) -> VertexId {
        VertexId::from_dense(self.positions[pc.value() as usize] as usize)
    }

    #[inline]
    pub(crate) fn dense_vertex_of(&self, pc: PitchClass) -> usize {
        self.positions[pc.value() as usize] as usize
    }

    /// Whether the two tones sit on adjacent vertices.
    pub fn tones_adjacent(&self, a: PitchClass, b: PitchClass) -> bool {
        canonical_graph().adjacent(self.dense_vertex_of(a), self.dense_vertex_of(b))
    }

    /// Exchanges the tones on `h_i` and `s_i` for every slot `i` in the mask.
    pub fn apply_inter(&self, mask: InterMask) -> Self {
        let mut tones = self.tones;
        for slot in mask.slots() {
            tones.swap(slot as usize, 6 + slot as usize);
        }
        let mut out = Self::from_tones(tones).expect("swaps preserve bijectivity");
        out.label = self.label.clone();
        out
    }

    /// Replaces each star tone `t` with `p(t)`. Fails if `p` moves a tone
    /// that sits on the hexagon.
    pub fn apply_intra(&self, p: &IntraPermutation) -> Result<Self> {
        for t in p.moved() {
            let v = self.vertex_of(t);
            if !v.is_star() {
                return Err(Error::MovesHexagonTone { tone: t, vertex: v });
            }
        }
        let tones = self.tones.map(|t| p.apply(t));
        let mut out = Self::from_tones(tones)?;
        out.label = self.label.clone();
        Ok(out)
    }

    /// The assignment obtained by moving every tone along a vertex map.
    pub fn transform(&self, map: &VertexMap) -> Self {
        let mut tones = [PitchClass::C; 12];
        for v in VertexId::all() {
            tones[map.apply(v).dense()] = self.tone_at(v);
        }
        Self::from_tones(tones).expect("vertex permutation preserves bijectivity")
    }

    /// Tones read along `h0, s0, h1, s1, ..., h5, s5`.
    pub fn induced_chain_scale(&self) -> Scale {
        let tones = (0..6u8)
            .flat_map(|i| [VertexId::hex(i), VertexId::star(i)])
            .map(|v| self.tone_at(v))
            .collect();
        Scale::new(tones).expect("bijection")
    }

    pub fn induced_hexagon_scale(&self) -> Scale {
        Scale::new(self.tones[..6].to_vec()).expect("bijection")
    }

    pub fn induced_star_scale(&self) -> Scale {
        Scale::new(self.tones[6..].to_vec()).expect("bijection")
    }

    /// The assignment whose induced chain scale is `chain`.
    pub fn from_chain(chain: &Scale) -> Result<Self> {
        if chain.len() != 12 {
            return Err(Error::NotBijective(format!(
                "chain scale has {} tones, need 12",
                chain.len()
            )));
        }
        let mut tones = [PitchClass::C; 12];
        for (k, &t) in chain.tones().iter().enumerate() {
            let i = (k / 2) as u8;
            let v = if k % 2 == 0 {
                VertexId::hex(i)
            } else {
                VertexId::star(i)
            };
            tones[v.dense()] = t;
        }
        Self::from_tones(tones)
    }

    pub fn to_file(&self) -> AssignmentFile {
        AssignmentFile {
            label: self.label.clone(),
            tones: VertexId::all()
                .map(|v| (v.to_string(), self.tone_at(v).name().to_string()))
                .collect(),
        }
    }

    pub fn from_file(file: &AssignmentFile) -> Result<Self> {
        let mut tones = [None; 12];
        for (key, name) in &file.tones {
            let v: VertexId = key.parse()?;
            let t: PitchClass = name.parse()?;
            tones[v.dense()] = Some(t);
        }
        let mut placed = [PitchClass::C; 12];
        for (i, t) in tones.iter().enumerate() {
            placed[i] = t.ok_or_else(|| {
                Error::NotBijective(format!("no tone on vertex {}", VertexId::from_dense(i)))
            })?;
        }
        let mut x = Self::from_tones(placed)?;
        x.label = file.label.clone();
        Ok(x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: AssignmentFile = serde_json::from_str(json)?;
        Self::from_file(&file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for MusicalIcosahedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            write!(f, "{label}: ")?;
        }
        write!(
            f,
            "hexagon [{}] star [{}]",
            self.induced_hexagon_scale(),
            self.induced_star_scale()
        )
    }
}

/// On-disk form: `{"label": ..., "tones": {"h0": "C", ..., "s5": "B"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub tones: BTreeMap<String, String>,
}

/// Built-in names resolved by [`named_type`].
pub const BUILTIN_TYPES: [&str; 8] = ["type1", "type3", "type1'", "type3'", "RA", "RB", "RC", "RD"];

/// The chromatic/whole-tone type 1: hexagon `C D E F# G# Bb`, star
/// `C# Eb F G A B`, so the chromatic scale zigzags `h0 s0 h1 s1 ...`.
pub fn type1() -> MusicalIcosahedron {
    use PitchClass as P;
    MusicalIcosahedron::from_rings(
        [P::C, P::D, P::E, P::FS, P::GS, P::BB],
        [P::CS, P::EB, P::F, P::G, P::A, P::B],
    )
    .expect("type 1 is a bijection")
    .with_label("type1")
}

/// The tritone swaps on the star that turn type n into type n'.
pub fn prime_swaps() -> IntraPermutation {
    use PitchClass as P;
    IntraPermutation::from_swaps(&[(P::CS, P::G), (P::EB, P::A), (P::F, P::B)])
        .expect("disjoint swaps")
}

fn raga_chain_key(name: &str) -> Option<&'static str> {
    match name {
        "RA" => Some("chromatic_A"),
        "RB" => Some("chromatic_B"),
        "RC" => Some("chromatic_C"),
        "RD" => Some("chromatic_D"),
        _ => None,
    }
}

/// Resolves a built-in type name.
pub fn named_type(name: &str) -> Result<MusicalIcosahedron> {
    let x = match name {
        "type1" => type1(),
        "type3" => type1().apply_inter(InterMask::FULL),
        "type1'" => type1().apply_intra(&prime_swaps())?,
        "type3'" => type1()
            .apply_intra(&prime_swaps())?
            .apply_inter(InterMask::FULL),
        _ => match raga_chain_key(name) {
            Some(key) => MusicalIcosahedron::from_chain(&builtin(key))?,
            None => return Err(Error::UnsupportedType(name.to_string())),
        },
    };
    Ok(x.with_label(name))
}

/// Built-in types plus assignments loaded from data files.
#[derive(Debug, Clone, Default)]
pub struct TypeLibrary {
    loaded: BTreeMap<String, MusicalIcosahedron>,
}

impl TypeLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an assignment under its label (or `name` if given).
    pub fn insert(&mut self, name: Option<&str>, x: MusicalIcosahedron) -> Result<String> {
        let key = name
            .map(str::to_string)
            .or_else(|| x.label().map(str::to_string))
            .ok_or_else(|| Error::UnsupportedType("<unlabeled assignment>".into()))?;
        self.loaded.insert(key.clone(), x.with_label(key.clone()));
        Ok(key)
    }

    pub fn load_file(&mut self, path: impl AsRef<Path>) -> Result<String> {
        let x = MusicalIcosahedron::load(path)?;
        self.insert(None, x)
    }

    /// Loads every `*.json` file in a directory, in file-name order.
    pub fn load_dir(&mut self, dir: impl AsRef<Path>) -> Result<Vec<String>> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        paths.sort();
        paths.iter().map(|p| self.load_file(p)).collect()
    }

    /// Loaded entries shadow built-ins of the same name.
    pub fn get(&self, name: &str) -> Result<MusicalIcosahedron> {
        match self.loaded.get(name) {
            Some(x) => Ok(x.clone()),
            None => named_type(name),
        }
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = BUILTIN_TYPES.iter().map(|s| s.to_string()).collect();
        out.extend(
            self.loaded
                .keys()
                .filter(|k| !BUILTIN_TYPES.contains(&k.as_str()))
                .cloned(),
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tones::catalog;

    fn star_names(x: &MusicalIcosahedron) -> Vec<&'static str> {
        x.induced_star_scale()
            .tones()
            .iter()
            .map(|t| t.name())
            .collect()
    }

    #[test]
    fn type1_layout() {
        let x = type1();
        assert_eq!(x.induced_chain_scale(), catalog("chromatic").unwrap());
        assert_eq!(x.induced_hexagon_scale(), catalog("W1").unwrap());
        assert_eq!(x.induced_star_scale(), catalog("W2").unwrap());
        for pc in PitchClass::all() {
            assert_eq!(x.tone_at(x.vertex_of(pc)), pc);
        }
    }

    #[test]
    fn named_type_examples() {
        let ra = named_type("RA").unwrap();
        assert_eq!(star_names(&ra), ["G", "C#", "Eb", "F", "A", "B"]);
        assert_eq!(
            named_type("type1'").unwrap().tone_at(VertexId::star(0)),
            PitchClass::G
        );
        assert_eq!(
            named_type("type3").unwrap().tone_at(VertexId::hex(0)),
            PitchClass::CS
        );
        assert_eq!(named_type("type3").unwrap().label(), Some("type3"));
        assert!(matches!(
            named_type("type2"),
            Err(Error::UnsupportedType(_))
        ));
    }

    #[test]
    fn raga_types_read_back_their_scales() {
        for (n, chain, star) in [
            ("RA", "chromatic_A", "wholetone_A2"),
            ("RB", "chromatic_B", "wholetone_B2"),
            ("RC", "chromatic_C", "wholetone_C2"),
            ("RD", "chromatic_D", "wholetone_D2"),
        ] {
            let x = named_type(n).unwrap();
            assert_eq!(x.induced_chain_scale(), catalog(chain).unwrap(), "{n}");
            assert_eq!(x.induced_star_scale(), catalog(star).unwrap(), "{n}");
            assert_eq!(x.induced_hexagon_scale(), catalog("W1").unwrap(), "{n}");
        }
        let rd = named_type("RD").unwrap();
        assert_eq!(star_names(&rd), ["G", "Eb", "C#", "F", "B", "A"]);
    }

    #[test]
    fn inter_swaps() {
        let t1 = type1();
        assert_eq!(t1.apply_inter(InterMask::EMPTY), t1);
        assert_eq!(
            t1.apply_inter(InterMask::FULL),
            named_type("type3").unwrap()
        );
        let one = t1.apply_inter(InterMask::from_slots([0]));
        assert_eq!(one.tone_at(VertexId::hex(0)), PitchClass::CS);
        assert_eq!(one.tone_at(VertexId::star(0)), PitchClass::C);
    }

    #[test]
    fn intra_examples() {
        use PitchClass as P;
        let t1 = type1();
        assert_eq!(t1.apply_intra(&IntraPermutation::identity()).unwrap(), t1);
        let p = prime_swaps();
        assert_eq!(t1.apply_intra(&p).unwrap(), named_type("type1'").unwrap());
        let swapped = t1
            .apply_intra(&IntraPermutation::from_swaps(&[(P::CS, P::EB)]).unwrap())
            .unwrap();
        assert_eq!(swapped.induced_hexagon_scale(), t1.induced_hexagon_scale());
        assert_eq!(swapped.tone_at(VertexId::star(0)), P::EB);
    }

    #[test]
    fn intra_rejects_hexagon_tones() {
        use PitchClass as P;
        let p = IntraPermutation::from_swaps(&[(P::C, P::CS)]).unwrap();
        assert!(matches!(
            type1().apply_intra(&p),
            Err(Error::MovesHexagonTone { tone: P::C, .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t1.json");
        let x = type1();
        x.save(&path).unwrap();
        let back = MusicalIcosahedron::load(&path).unwrap();
        assert_eq!(back, x);
        assert_eq!(back.label(), Some("type1"));
        let json = std::fs::read_to_string(&path).unwrap();
        assert!(json.contains(r#""h0": "C""#), "{json}");
    }

    #[test]
    fn file_errors() {
        let mut file = type1().to_file();
        file.tones.insert("s5".into(), "C".into());
        assert!(matches!(
            MusicalIcosahedron::from_file(&file),
            Err(Error::NotBijective(_))
        ));

        let mut file = type1().to_file();
        file.tones.insert("s5".into(), "A#".into());
        assert!(matches!(
            MusicalIcosahedron::from_file(&file),
            Err(Error::UnknownTone(_))
        ));

        let mut file = type1().to_file();
        file.tones.remove("h3");
        assert!(matches!(
            MusicalIcosahedron::from_file(&file),
            Err(Error::NotBijective(_))
        ));

        let mut file = type1().to_file();
        file.tones.insert("q1".into(), "C".into());
        assert!(matches!(
            MusicalIcosahedron::from_file(&file),
            Err(Error::UnknownVertex(_))
        ));

        assert!(matches!(
            MusicalIcosahedron::from_json("{not json"),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn library_loads_files() {
        let dir = tempfile::tempdir().unwrap();
        // any bijection works as a user-supplied type
        let custom = type1()
            .apply_inter(InterMask::from_slots([1, 3]))
            .with_label("type2");
        custom.save(dir.path().join("type2.json")).unwrap();
        std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();

        let mut lib = TypeLibrary::new();
        assert!(matches!(lib.get("type2"), Err(Error::UnsupportedType(_))));
        assert_eq!(lib.load_dir(dir.path()).unwrap(), ["type2"]);
        assert_eq!(lib.get("type2").unwrap(), custom);
        assert_eq!(lib.get("RA").unwrap(), named_type("RA").unwrap());
        assert!(lib.names().contains(&"type2".to_string()));
    }
}
