//! Permutation-extension of a scale and the melakarta construction.
//!
//! Colour the vertices holding the scale's tones, apply an inter-permutation
//! mask, and read the tones that now sit on the coloured vertices. The
//! extension is the set of tone-sets obtained over all 64 masks, the empty
//! mask included, so the scale itself is always a member.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::assignment::{named_type, MusicalIcosahedron};
use crate::error::Result;
use crate::icosahedron::{InterMask, VertexId};
use crate::report::{Check, Report};
use crate::tones::{
    ascending_from_c, builtin, melakarta_catalog, melakarta_for_set, PitchClass, Scale, ToneSet,
};

/// Where a tone-set came from: a labelled base assignment and a swap mask.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Provenance {
    #[serde(rename = "type")]
    pub base: String,
    #[serde(rename = "mask_bits")]
    pub mask: InterMask,
}

#[derive(Debug, Clone, Default)]
pub struct ExtensionResult {
    entries: BTreeMap<ToneSet, BTreeSet<Provenance>>,
}

impl ExtensionResult {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, set: ToneSet) -> bool {
        self.entries.contains_key(&set)
    }

    pub fn tone_sets(&self) -> impl Iterator<Item = ToneSet> + '_ {
        self.entries.keys().copied()
    }

    pub fn provenance(&self, set: ToneSet) -> Option<&BTreeSet<Provenance>> {
        self.entries.get(&set)
    }

    pub fn entries(&self) -> impl Iterator<Item = (ToneSet, &BTreeSet<Provenance>)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Members as ascending scales from C.
    pub fn scales(&self) -> Vec<Scale> {
        self.entries
            .keys()
            .map(|s| ascending_from_c(*s).expect("nonempty"))
            .collect()
    }

    pub fn merge(&mut self, other: ExtensionResult) {
        for (set, prov) in other.entries {
            self.entries.entry(set).or_default().extend(prov);
        }
    }
}

fn colored_vertices(scale: &Scale, x: &MusicalIcosahedron) -> u16 {
    scale
        .tones()
        .iter()
        .fold(0u16, |acc, t| acc | 1 << x.dense_vertex_of(*t))
}

/// Drops slots whose swap cannot change the coloured tone-set (both or
/// neither vertex coloured).
pub fn minimal_mask(scale: &Scale, x: &MusicalIcosahedron, mask: InterMask) -> InterMask {
    let colored = colored_vertices(scale, x);
    InterMask::from_slots(mask.slots().filter(|&s| {
        let h = colored & (1 << VertexId::hex(s).dense()) != 0;
        let st = colored & (1 << VertexId::star(s).dense()) != 0;
        h != st
    }))
}

/// The tone-set read from the scale's coloured vertices after applying `mask`.
pub fn extend_with_mask(scale: &Scale, x: &MusicalIcosahedron, mask: InterMask) -> ToneSet {
    let colored = colored_vertices(scale, x);
    let swapped = x.apply_inter(mask);
    (0..12)
        .filter(|v| colored & (1 << v) != 0)
        .map(|v| swapped.tone_at(VertexId::from_dense(v)))
        .collect()
}

pub fn extend(scale: &Scale, x: &MusicalIcosahedron) -> ExtensionResult {
    let base = x.label().unwrap_or("unlabeled").to_string();
    let mut result = ExtensionResult::default();
    for mask in InterMask::all() {
        let set = extend_with_mask(scale, x, mask);
        result.entries.entry(set).or_default().insert(Provenance {
            base: base.clone(),
            mask: minimal_mask(scale, x, mask),
        });
    }
    result
}

pub fn extend_union(scale: &Scale, bases: &[MusicalIcosahedron]) -> ExtensionResult {
    let mut result = ExtensionResult::default();
    for x in bases {
        result.merge(extend(scale, x));
    }
    result
}

/// The four melakarta icosahedra RA..RD.
pub fn raga_types() -> Vec<MusicalIcosahedron> {
    ["RA", "RB", "RC", "RD"]
        .iter()
        .map(|n| named_type(n).expect("built-in"))
        .collect()
}

/// Melakarta shape: C and G, one of F/F#, two of C#..E, two of G#..B.
pub fn has_melakarta_shape(set: ToneSet) -> bool {
    use PitchClass as P;
    set.len() == 7
        && set.contains(P::C)
        && set.contains(P::G)
        && set.count_of(&[P::F, P::FS]) == 1
        && set.count_of(&[P::CS, P::D, P::EB, P::E]) == 2
        && set.count_of(&[P::GS, P::A, P::BB, P::B]) == 2
}

#[derive(Debug, Clone, Serialize)]
pub struct RagaEntry {
    pub raga_index: usize,
    pub name: String,
    pub tones: Scale,
    pub witnesses: Vec<Provenance>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnknownEntry {
    pub tones: Scale,
    pub witnesses: Vec<Provenance>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MelakartaReport {
    pub report: Report,
    /// Ordered by raga index; ragas the extension misses have no witnesses.
    pub ragas: Vec<RagaEntry>,
    /// Produced sets that are not melakarta scales (none expected).
    pub unknown: Vec<UnknownEntry>,
}

impl MelakartaReport {
    pub fn matched(&self) -> usize {
        self.ragas
            .iter()
            .filter(|r| !r.witnesses.is_empty())
            .count()
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for r in &self.ragas {
            let witnesses: Vec<String> = r
                .witnesses
                .iter()
                .map(|w| format!("{} {}", w.base, w.mask))
                .collect();
            out.push_str(&format!(
                "{:>2}  {:<20} {:<28} {}\n",
                r.raga_index,
                r.name,
                r.tones.to_string(),
                witnesses.join("; ")
            ));
        }
        for u in &self.unknown {
            out.push_str(&format!(
                "??  {:<20} {:<28}\n",
                "(not a melakarta)",
                u.tones.to_string()
            ));
        }
        out
    }
}

/// Extends the C major scale by RA..RD and compares with the catalog.
pub fn verify_melakarta() -> MelakartaReport {
    verify_melakarta_with(&builtin("c_major"), &raga_types())
}

pub fn verify_melakarta_with(scale: &Scale, bases: &[MusicalIcosahedron]) -> MelakartaReport {
    let mut report = Report::new("melakarta permutation-extension");
    let by_label: BTreeMap<String, &MusicalIcosahedron> = bases
        .iter()
        .map(|x| (x.label().unwrap_or("unlabeled").to_string(), x))
        .collect();

    for x in bases {
        let e = extend(scale, x);
        report.push(Check::equal(
            format!("|E(scale, {})|", x.label().unwrap_or("unlabeled")),
            e.len(),
            32,
        ));
        report.push(Check::new(
            format!(
                "E(scale, {}) contains the scale",
                x.label().unwrap_or("unlabeled")
            ),
            e.contains(scale.tone_set()),
            String::new(),
        ));
    }

    let union = extend_union(scale, bases);
    let catalog: BTreeSet<ToneSet> = melakarta_catalog()
        .iter()
        .map(|m| m.tones.tone_set())
        .collect();
    let produced: BTreeSet<ToneSet> = union.tone_sets().collect();
    report.push(Check::equal(
        "extension size",
        produced.len(),
        catalog.len(),
    ));
    let missing = catalog.difference(&produced).count();
    let extra = produced.difference(&catalog).count();
    report.push(Check::new(
        "extension equals the 72 melakarta scales",
        missing == 0 && extra == 0,
        format!(
            "{}/72 scales matched, {missing} missing, {extra} extra",
            catalog.len() - missing
        ),
    ));

    let ragas: Vec<RagaEntry> = melakarta_catalog()
        .iter()
        .map(|m| RagaEntry {
            raga_index: m.index,
            name: m.name.clone(),
            tones: m.tones.clone(),
            witnesses: union
                .provenance(m.tones.tone_set())
                .map(|p| p.iter().cloned().collect())
                .unwrap_or_default(),
        })
        .collect();
    let unknown: Vec<UnknownEntry> = union
        .entries()
        .filter(|(s, _)| melakarta_for_set(*s).is_none())
        .map(|(s, p)| UnknownEntry {
            tones: ascending_from_c(s).expect("nonempty"),
            witnesses: p.iter().cloned().collect(),
        })
        .collect();

    let unwitnessed: Vec<usize> = ragas
        .iter()
        .filter(|r| r.witnesses.is_empty())
        .map(|r| r.raga_index)
        .collect();
    report.push(Check::new(
        "every raga has a witness",
        unwitnessed.is_empty(),
        if unwitnessed.is_empty() {
            String::new()
        } else {
            format!("missing {unwitnessed:?}")
        },
    ));

    let mut replay_failures = 0;
    let mut replayed = 0;
    for (set, prov) in union.entries() {
        for w in prov {
            replayed += 1;
            let ok = by_label
                .get(&w.base)
                .is_some_and(|x| extend_with_mask(scale, x, w.mask) == set);
            if !ok {
                replay_failures += 1;
            }
        }
    }
    report.push(Check::new(
        "every witness reproduces its scale",
        replay_failures == 0,
        format!("{replayed} witnesses replayed, {replay_failures} failures"),
    ));

    let misshapen = produced
        .iter()
        .filter(|s| !has_melakarta_shape(**s))
        .count();
    report.push(Check::new(
        "every produced scale has C, G, one of F/F#, two of C#..E, two of G#..B",
        misshapen == 0,
        format!("{misshapen} violations"),
    ));

    MelakartaReport {
        report,
        ragas,
        unknown,
    }
}

/// Re-applies a witness to the named base and returns the resulting scale.
pub fn replay_witness(scale: &Scale, witness: &Provenance) -> Result<Scale> {
    let x = named_type(&witness.base)?;
    ascending_from_c(extend_with_mask(scale, &x, witness.mask))
}
