//! Backtracking search for assignments with prescribed neighboring numbers.
//!
//! Tones are placed one at a time, following the first constraint's scale
//! so that chains are built along edges. After every placement each
//! constraint is bounded: `adjacent_so_far <= required <= adjacent_so_far +
//! undecided_pairs`; branches that break a bound are cut.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use crate::assignment::MusicalIcosahedron;
use crate::error::{Error, Result};
use crate::icosahedron::{canonical_automorphisms, canonical_graph, VertexId};
use crate::tones::{catalog, PitchClass, Scale};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentConstraint {
    pub scale: Scale,
    pub required: usize,
}

impl AssignmentConstraint {
    pub fn new(scale: Scale, required: usize) -> Self {
        AssignmentConstraint { scale, required }
    }

    /// The neighboring condition: every neighbor pair adjacent.
    pub fn neighboring_condition(scale: Scale) -> Self {
        let required = scale.neighbor_pairs().count();
        AssignmentConstraint { scale, required }
    }

    pub fn is_satisfied_by(&self, x: &MusicalIcosahedron) -> bool {
        crate::invariants::neighboring_number(&self.scale, x) == self.required
    }
}

/// Tones pinned to vertices before the search starts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gauge {
    placements: Vec<(PitchClass, VertexId)>,
}

impl Gauge {
    pub fn none() -> Self {
        Gauge::default()
    }

    pub fn new(placements: Vec<(PitchClass, VertexId)>) -> Result<Self> {
        let mut tones = BTreeMap::new();
        let mut vertices = BTreeMap::new();
        for &(t, v) in &placements {
            if let Some(prev) = tones.insert(t, v) {
                if prev != v {
                    return Err(Error::GaugeConflict(format!(
                        "{t} pinned to both {prev} and {v}"
                    )));
                }
            }
            if let Some(prev) = vertices.insert(v, t) {
                if prev != t {
                    return Err(Error::GaugeConflict(format!(
                        "{prev} and {t} both pinned to {v}"
                    )));
                }
            }
        }
        Ok(Gauge {
            placements: tones.into_iter().collect(),
        })
    }

    pub fn placements(&self) -> &[(PitchClass, VertexId)] {
        &self.placements
    }

    /// `{"C": "h0", "D": "h1"}`
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: BTreeMap<String, String> = serde_json::from_str(json)?;
        let placements = raw
            .iter()
            .map(|(t, v)| Ok((t.parse()?, v.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        Gauge::new(placements)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScaleRef {
    Named(String),
    Tones(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintEntry {
    scale: ScaleRef,
    required: usize,
}

/// `[{"scale": "chromatic" | ["C", ...], "required": 12}, ...]`
pub fn constraints_from_json(json: &str) -> Result<Vec<AssignmentConstraint>> {
    let entries: Vec<ConstraintEntry> = serde_json::from_str(json)?;
    entries
        .into_iter()
        .map(|e| {
            let scale = match e.scale {
                ScaleRef::Named(key) => catalog(&key)?,
                ScaleRef::Tones(names) => Scale::parse(&names)?,
            };
            Ok(AssignmentConstraint::new(scale, e.required))
        })
        .collect()
}

pub fn load_constraints(path: impl AsRef<Path>) -> Result<Vec<AssignmentConstraint>> {
    constraints_from_json(&std::fs::read_to_string(path)?)
}

pub fn load_gauge(path: impl AsRef<Path>) -> Result<Gauge> {
    Gauge::from_json(&std::fs::read_to_string(path)?)
}

const FREE: u8 = u8::MAX;

struct Search<'a> {
    pairs: Vec<Vec<(usize, usize)>>,
    required: Vec<usize>,
    order: Vec<usize>,
    /// tone -> dense vertex or FREE
    position: [u8; 12],
    occupied: u16,
    out: &'a mut Vec<[PitchClass; 12]>,
}

impl Search<'_> {
    fn feasible(&self) -> bool {
        let g = canonical_graph();
        self.pairs
            .iter()
            .zip(&self.required)
            .all(|(pairs, &required)| {
                let mut adjacent = 0;
                let mut open = 0;
                for &(a, b) in pairs {
                    let (va, vb) = (self.position[a], self.position[b]);
                    if va == FREE || vb == FREE {
                        open += 1;
                    } else if g.adjacent(va as usize, vb as usize) {
                        adjacent += 1;
                    }
                }
                adjacent <= required && required <= adjacent + open
            })
    }

    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            let mut tones = [PitchClass::C; 12];
            for (t, &v) in self.position.iter().enumerate() {
                tones[v as usize] = PitchClass::new(t as i32);
            }
            self.out.push(tones);
            return;
        }
        let tone = self.order[depth];
        for v in 0..12u8 {
            if self.occupied & (1 << v) != 0 {
                continue;
            }
            self.position[tone] = v;
            self.occupied |= 1 << v;
            if self.feasible() {
                self.run(depth + 1);
            }
            self.occupied &= !(1 << v);
            self.position[tone] = FREE;
        }
    }
}

/// Every assignment meeting all constraints, sorted by the tuple of tones on
/// `h0..h5, s0..s5`. Unreachable targets simply give no solutions.
pub fn search_assignments(
    constraints: &[AssignmentConstraint],
    gauge: &Gauge,
) -> Result<Vec<MusicalIcosahedron>> {
    let mut position = [FREE; 12];
    let mut occupied = 0u16;
    for &(t, v) in gauge.placements() {
        position[t.value() as usize] = v.dense() as u8;
        occupied |= 1 << v.dense();
    }

    let mut order = Vec::with_capacity(12);
    let mut queued = 0u16;
    let mut enqueue = |t: PitchClass, order: &mut Vec<usize>| {
        let i = t.value() as usize;
        if queued & (1 << i) == 0 && position[i] == FREE {
            queued |= 1 << i;
            order.push(i);
        }
    };
    for c in constraints {
        for &t in c.scale.tones() {
            enqueue(t, &mut order);
        }
    }
    for t in PitchClass::all() {
        enqueue(t, &mut order);
    }

    let mut raw = Vec::new();
    let mut search = Search {
        pairs: constraints
            .iter()
            .map(|c| {
                c.scale
                    .neighbor_pairs()
                    .map(|(a, b)| (a.value() as usize, b.value() as usize))
                    .collect()
            })
            .collect(),
        required: constraints.iter().map(|c| c.required).collect(),
        order,
        position,
        occupied,
        out: &mut raw,
    };
    if search.feasible() {
        search.run(0);
    }
    raw.sort_unstable();
    raw.into_iter()
        .map(MusicalIcosahedron::from_tones)
        .collect()
}

/// Lexicographically smallest image of `x` under the graph automorphisms.
pub fn canonical_form(x: &MusicalIcosahedron) -> MusicalIcosahedron {
    canonical_automorphisms()
        .iter()
        .map(|a| x.transform(a))
        .min_by_key(|y| *y.tones())
        .expect("automorphism group is nonempty")
}

/// One representative per automorphism class, sorted.
pub fn modulo_automorphism(solutions: &[MusicalIcosahedron]) -> Vec<MusicalIcosahedron> {
    let classes: BTreeSet<[PitchClass; 12]> = solutions
        .iter()
        .map(|x| *canonical_form(x).tones())
        .collect();
    classes
        .into_iter()
        .map(|t| MusicalIcosahedron::from_tones(t).expect("bijection"))
        .collect()
}

/// The automorphism orbit of `x` as a sorted, duplicate-free list.
pub fn automorphism_orbit(x: &MusicalIcosahedron) -> Vec<MusicalIcosahedron> {
    let orbit: BTreeSet<[PitchClass; 12]> = canonical_automorphisms()
        .iter()
        .map(|a| *x.transform(a).tones())
        .collect();
    orbit
        .into_iter()
        .map(|t| MusicalIcosahedron::from_tones(t).expect("bijection"))
        .collect()
}
