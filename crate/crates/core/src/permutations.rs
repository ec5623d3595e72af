//! Inter- and intra-permutation families and their classification tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::assignment::MusicalIcosahedron;
use crate::error::{Error, Result};
use crate::icosahedron::{mask_symmetry_class, InterMask, VertexId};
use crate::invariants::neighboring_number;
use crate::report::Check;
use crate::tones::{builtin, PitchClass, Scale, ToneSet};

/// A permutation of tones applied in place: the tone `t` on any vertex is
/// replaced by `apply(t)`. Only tones currently on star vertices may move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntraPermutation {
    image: [PitchClass; 12],
}

impl IntraPermutation {
    pub fn identity() -> Self {
        IntraPermutation {
            image: std::array::from_fn(|i| PitchClass::new(i as i32)),
        }
    }

    /// Explicit `from -> to` pairs; unlisted tones stay fixed.
    pub fn from_mapping(pairs: &[(PitchClass, PitchClass)]) -> Result<Self> {
        let mut image = Self::identity().image;
        let mut sources = ToneSet::empty();
        for &(from, to) in pairs {
            if !sources.insert(from) {
                return Err(Error::NotAPermutation);
            }
            image[from.value() as usize] = to;
        }
        let targets: ToneSet = image.iter().copied().collect();
        if targets.len() != 12 {
            return Err(Error::NotAPermutation);
        }
        Ok(IntraPermutation { image })
    }

    /// Disjoint transpositions `a <-> b`.
    pub fn from_swaps(swaps: &[(PitchClass, PitchClass)]) -> Result<Self> {
        let pairs: Vec<_> = swaps.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        Self::from_mapping(&pairs)
    }

    /// The permutation taking `base` to `target`. Both must agree on the
    /// hexagon.
    pub fn between(base: &MusicalIcosahedron, target: &MusicalIcosahedron) -> Result<Self> {
        for i in 0..6u8 {
            let v = VertexId::hex(i);
            if base.tone_at(v) != target.tone_at(v) {
                return Err(Error::MovesHexagonTone {
                    tone: base.tone_at(v),
                    vertex: v,
                });
            }
        }
        let pairs: Vec<_> = (0..6u8)
            .map(VertexId::star)
            .map(|v| (base.tone_at(v), target.tone_at(v)))
            .collect();
        Self::from_mapping(&pairs)
    }

    pub fn apply(&self, t: PitchClass) -> PitchClass {
        self.image[t.value() as usize]
    }

    pub fn moved(&self) -> impl Iterator<Item = PitchClass> + '_ {
        PitchClass::all().filter(|t| self.apply(*t) != *t)
    }

    pub fn is_identity(&self) -> bool {
        self.moved().next().is_none()
    }

    pub fn signature(&self) -> Result<ShiftSignature> {
        intra_signature(self)
    }
}

impl fmt::Display for IntraPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for (i, t) in self.moved().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}->{}", self.apply(t))?;
        }
        Ok(())
    }
}

/// Sorted multiset of shift values `a` with `b -> b + 2a` for each moved
/// tone `b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ShiftSignature(Vec<u8>);

impl ShiftSignature {
    pub fn new(mut values: Vec<u8>) -> Self {
        values.sort_unstable();
        ShiftSignature(values)
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ShiftSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for ShiftSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = inner
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u8>().ok().filter(|a| (1..=5).contains(a)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvariantSpec(format!("bad shift signature `{s}`")))?;
        Ok(ShiftSignature::new(values))
    }
}

impl Serialize for ShiftSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shift signature of an intra-permutation: for each moved tone `b`,
/// `((p(b) - b) / 2) mod 6`. Odd shifts have no signature.
pub fn intra_signature(p: &IntraPermutation) -> Result<ShiftSignature> {
    let values = p
        .moved()
        .map(|b| {
            let delta = (p.apply(b).value() + 12 - b.value()) % 12;
            if delta % 2 == 1 {
                Err(Error::OddShift { tone: b, delta })
            } else {
                Ok(delta / 2)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftSignature::new(values))
}

/// The signature of the type n -> type n' endpoint: every star tone moves by
/// a tritone.
pub fn tritone_signature() -> ShiftSignature {
    ShiftSignature(vec![3; 6])
}

#[derive(Debug, Clone)]
pub struct InterMember {
    pub mask: InterMask,
    pub assignment: MusicalIcosahedron,
    /// False for the empty and the full mask.
    pub intermediate: bool,
}

/// All 64 inter-permutation images of `base`, ordered by mask bits.
pub fn inter_family(base: &MusicalIcosahedron) -> Vec<InterMember> {
    InterMask::all()
        .map(|mask| InterMember {
            mask,
            assignment: base.apply_inter(mask),
            intermediate: mask != InterMask::EMPTY && mask != InterMask::FULL,
        })
        .collect()
}

/// (chain, hexagon, star) neighboring numbers, using scales induced by a base.
pub type NTriple = (usize, usize, usize);

#[derive(Debug, Clone, Serialize)]
pub struct InterClass {
    pub swaps: u32,
    pub representative: InterMask,
    pub masks: Vec<InterMask>,
    pub triple: NTriple,
    /// Whether every member of the class has the same triple.
    pub uniform: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InterTable {
    pub classes: Vec<InterClass>,
    pub checks: Vec<Check>,
}

impl InterTable {
    pub fn class_sizes(&self, swaps: u32) -> Vec<usize> {
        self.classes
            .iter()
            .filter(|c| c.swaps == swaps)
            .map(|c| c.masks.len())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> FamilyTable {
        FamilyTable {
            family: "inter".into(),
            columns: ["N(chain)", "N(hexagon)", "N(star)"],
            rows: self
                .classes
                .iter()
                .map(|c| FamilyRow {
                    key: c.swaps.to_string(),
                    class: c.representative.to_string(),
                    size: c.masks.len(),
                    values: [c.triple.0, c.triple.1, c.triple.2],
                })
                .collect(),
        }
    }
}

fn binomial6(k: u32) -> usize {
    [1, 6, 15, 20, 15, 6, 1][k as usize]
}

/// Groups the inter family by swap count and dihedral slot symmetry.
pub fn classify_inter_family(base: &MusicalIcosahedron) -> InterTable {
    classify_inter_family_with(
        base,
        &base.induced_chain_scale(),
        &base.induced_hexagon_scale(),
        &base.induced_star_scale(),
    )
}

/// [`classify_inter_family`] measured against explicit scales instead of
/// the ones induced by `base`.
pub fn classify_inter_family_with(
    base: &MusicalIcosahedron,
    chain: &Scale,
    hexagon: &Scale,
    star: &Scale,
) -> InterTable {
    let triple_of = |x: &MusicalIcosahedron| {
        (
            neighboring_number(chain, x),
            neighboring_number(hexagon, x),
            neighboring_number(star, x),
        )
    };

    let mut groups: BTreeMap<(u32, InterMask), Vec<(InterMask, NTriple)>> = BTreeMap::new();
    let mut relation_diff = Vec::new();
    let mut relation_sum = Vec::new();
    for member in inter_family(base) {
        let k = member.mask.count();
        let t = triple_of(&member.assignment);
        if 2 * (3 - k as i64) != t.1 as i64 - t.2 as i64 {
            relation_diff.push(member.mask);
        }
        if 2 * t.0 + t.1 + t.2 != 30 {
            relation_sum.push(member.mask);
        }
        let rep = mask_symmetry_class(member.mask).representative;
        groups.entry((k, rep)).or_default().push((member.mask, t));
    }

    let classes: Vec<InterClass> = groups
        .into_iter()
        .map(|((swaps, representative), members)| {
            let triple = members
                .iter()
                .find(|(m, _)| *m == representative)
                .map(|(_, t)| *t)
                .expect("representative is a member");
            InterClass {
                swaps,
                representative,
                uniform: members.iter().all(|(_, t)| *t == triple),
                masks: members.into_iter().map(|(m, _)| m).collect(),
                triple,
            }
        })
        .collect();

    let mut checks = vec![
        Check::new(
            "2(3-k) = N(hexagon) - N(star) for every member",
            relation_diff.is_empty(),
            format!("{} violations", relation_diff.len()),
        ),
        Check::new(
            "2 N(chain) + N(hexagon) + N(star) = 30 for every member",
            relation_sum.is_empty(),
            format!("{} violations", relation_sum.len()),
        ),
        Check::new(
            "members of a symmetry class share their triple",
            classes.iter().all(|c| c.uniform),
            String::new(),
        ),
    ];
    let sums: Vec<usize> = (0..=6)
        .map(|k| {
            classes
                .iter()
                .filter(|c| c.swaps == k)
                .map(|c| c.masks.len())
                .sum()
        })
        .collect();
    checks.push(Check::equal(
        "class sizes per k sum to C(6,k)",
        sums,
        (0..=6).map(binomial6).collect(),
    ));
    InterTable { classes, checks }
}

#[derive(Debug, Clone)]
pub struct IntraMember {
    pub permutation: IntraPermutation,
    /// `None` when some tone shifts by an odd interval.
    pub signature: Option<ShiftSignature>,
    pub assignment: MusicalIcosahedron,
    /// False for the identity and the all-tritone endpoint.
    pub intermediate: bool,
}

/// Lexicographic successor; false once the slice is in descending order.
fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs
        .iter()
        .rposition(|x| *x > xs[i])
        .expect("pivot has a successor");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// All 720 rearrangements of the star tones of `base`, ordered
/// lexicographically by the tuple of tones on `s0..s5`.
pub fn intra_family(base: &MusicalIcosahedron) -> Vec<IntraMember> {
    let hexagon: [PitchClass; 6] = std::array::from_fn(|i| base.tone_at(VertexId::hex(i as u8)));
    let mut star: [PitchClass; 6] = std::array::from_fn(|i| base.tone_at(VertexId::star(i as u8)));
    star.sort_unstable();
    let endpoint = tritone_signature();

    let mut out = Vec::with_capacity(720);
    loop {
        let mut assignment =
            MusicalIcosahedron::from_rings(hexagon, star).expect("rearranged bijection");
        if let Some(label) = base.label() {
            assignment = assignment.with_label(label);
        }
        let permutation = IntraPermutation::between(base, &assignment).expect("same hexagon");
        let signature = intra_signature(&permutation).ok();
        let intermediate = !permutation.is_identity() && signature.as_ref() != Some(&endpoint);
        out.push(IntraMember {
            permutation,
            signature,
            assignment,
            intermediate,
        });
        if !next_permutation(&mut star) {
            break;
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct IntraLevel {
    /// N(chromatic)
    pub chain: usize,
    /// N(pythagorean)
    pub fifths: usize,
    /// Signatures of intermediate members at this level with member counts.
    pub signatures: Vec<(ShiftSignature, usize)>,
}

impl IntraLevel {
    pub fn kinds(&self) -> usize {
        self.signatures.len()
    }

    pub fn members(&self) -> usize {
        self.signatures.iter().map(|(_, n)| n).sum()
    }

    pub fn signature_set(&self) -> BTreeSet<ShiftSignature> {
        self.signatures.iter().map(|(s, _)| s.clone()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntraTable {
    /// Ordered from N(chromatic) = 12 down to 0; levels without
    /// intermediates are omitted.
    pub levels: Vec<IntraLevel>,
    pub members: usize,
    pub intermediates: usize,
    pub checks: Vec<Check>,
}

impl IntraTable {
    pub fn level(&self, chain: usize) -> Option<&IntraLevel> {
        self.levels.iter().find(|l| l.chain == chain)
    }

    /// Number of signature kinds at each N(chromatic) from 12 down to 0.
    pub fn kind_counts(&self) -> Vec<usize> {
        (0..=12)
            .rev()
            .map(|c| self.level(c).map_or(0, IntraLevel::kinds))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> FamilyTable {
        let rows = self
            .levels
            .iter()
            .flat_map(|l| {
                l.signatures.iter().map(move |(sig, n)| FamilyRow {
                    key: format!("{}/{}", l.chain, l.fifths),
                    class: sig.to_string(),
                    size: *n,
                    values: [l.chain, l.fifths, 6],
                })
            })
            .collect();
        FamilyTable {
            family: "intra".into(),
            columns: ["N(chromatic)", "N(pythagorean)", "N(hexagon)"],
            rows,
        }
    }
}

/// Groups intermediates of the intra family by
/// (N(chromatic), N(pythagorean)) and lists the signatures at each level.
pub fn classify_intra_family(base: &MusicalIcosahedron) -> IntraTable {
    let chromatic = builtin("chromatic");
    let fifths = builtin("pythagorean");
    let hexagon = base.induced_hexagon_scale();
    let family = intra_family(base);

    let mut by_level: BTreeMap<(usize, usize), BTreeMap<ShiftSignature, usize>> = BTreeMap::new();
    let mut sig_levels: BTreeMap<ShiftSignature, BTreeSet<(usize, usize)>> = BTreeMap::new();
    let mut sum_violations = 0;
    let mut hexagon_violations = 0;
    let mut unsigned = 0;
    for m in &family {
        let c = neighboring_number(&chromatic, &m.assignment);
        let p = neighboring_number(&fifths, &m.assignment);
        if c + p != 12 {
            sum_violations += 1;
        }
        if neighboring_number(&hexagon, &m.assignment) != 6 {
            hexagon_violations += 1;
        }
        let Some(sig) = &m.signature else {
            unsigned += 1;
            continue;
        };
        sig_levels.entry(sig.clone()).or_default().insert((c, p));
        if m.intermediate {
            *by_level
                .entry((c, p))
                .or_default()
                .entry(sig.clone())
                .or_default() += 1;
        }
    }

    let mut levels: Vec<IntraLevel> = by_level
        .into_iter()
        .map(|((chain, fifths), sigs)| IntraLevel {
            chain,
            fifths,
            signatures: sigs.into_iter().collect(),
        })
        .collect();
    levels.sort_by(|a, b| b.chain.cmp(&a.chain).then(a.fifths.cmp(&b.fifths)));

    let intermediates = family.iter().filter(|m| m.intermediate).count();
    let split: Vec<String> = sig_levels
        .iter()
        .filter(|(_, l)| l.len() > 1)
        .map(|(s, _)| s.to_string())
        .collect();
    let checks = vec![
        Check::equal("family size", family.len(), 720),
        Check::equal("intermediates", intermediates, 718),
        Check::new(
            "N(chromatic) + N(pythagorean) = 12 for every member",
            sum_violations == 0,
            format!("{sum_violations} violations"),
        ),
        Check::new(
            "N(hexagon) = 6 for every member",
            hexagon_violations == 0,
            format!("{hexagon_violations} violations"),
        ),
        Check::new(
            "every member has a shift signature",
            unsigned == 0,
            format!("{unsigned} without"),
        ),
        Check::new(
            "each signature determines a single level",
            split.is_empty(),
            split.join(" "),
        ),
    ];
    IntraTable {
        levels,
        members: family.len(),
        intermediates,
        checks,
    }
}

/// One class per row, suitable for CSV or JSON export.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyRow {
    pub key: String,
    pub class: String,
    pub size: usize,
    pub values: [usize; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyTable {
    pub family: String,
    pub columns: [&'static str; 3],
    pub rows: Vec<FamilyRow>,
}

impl FamilyTable {
    pub fn to_csv(&self) -> String {
        let key = if self.family == "inter" {
            "swaps"
        } else {
            "level"
        };
        let mut out = format!(
            "{key},class,size,{},{},{}\n",
            self.columns[0], self.columns[1], self.columns[2]
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},\"{}\",{},{},{},{}\n",
                r.key, r.class, r.size, r.values[0], r.values[1], r.values[2]
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{named_type, prime_swaps, type1};
    use PitchClass as P;

    fn sig(s: &str) -> ShiftSignature {
        s.parse().unwrap()
    }

    #[test]
    fn signature_examples() {
        assert_eq!(prime_swaps().signature().unwrap(), sig("(3,3,3,3,3,3)"));
        let p = IntraPermutation::from_swaps(&[(P::CS, P::EB)]).unwrap();
        assert_eq!(p.signature().unwrap(), sig("(1, 5)"));
        let ra = named_type("RA").unwrap();
        let p = IntraPermutation::between(&type1(), &ra).unwrap();
        assert_eq!(p.signature().unwrap(), sig("(3, 5, 5, 5)"));
        assert!(IntraPermutation::identity().signature().unwrap().is_empty());
    }

    #[test]
    fn odd_shift_has_no_signature() {
        let p = IntraPermutation::from_swaps(&[(P::C, P::CS)]).unwrap();
        assert!(matches!(p.signature(), Err(Error::OddShift { .. })));
    }

    #[test]
    fn mapping_must_be_bijective() {
        assert!(IntraPermutation::from_mapping(&[(P::CS, P::G)]).is_err());
        assert!(IntraPermutation::from_mapping(&[(P::CS, P::G), (P::CS, P::A)]).is_err());
        assert!(IntraPermutation::from_swaps(&[(P::CS, P::G), (P::G, P::A)]).is_err());
    }

    #[test]
    fn signature_parsing() {
        assert_eq!(sig("(5, 1)").values(), [1, 5]);
        assert_eq!(sig("()").len(), 0);
        assert!("(0, 6)".parse::<ShiftSignature>().is_err());
        assert_eq!(sig("(4,5,5,5,5)").to_string(), "(4, 5, 5, 5, 5)");
    }

    #[test]
    fn next_permutation_enumerates_all() {
        let mut xs = [1, 2, 3, 4];
        let mut n = 1;
        while next_permutation(&mut xs) {
            n += 1;
        }
        assert_eq!(n, 24);
        assert_eq!(xs, [4, 3, 2, 1]);
    }

    #[test]
    fn inter_family_shape() {
        let fam = inter_family(&type1());
        assert_eq!(fam.len(), 64);
        assert_eq!(fam.iter().filter(|m| m.intermediate).count(), 62);
        assert_eq!(fam[63].assignment, named_type("type3").unwrap());
        assert!(fam
            .iter()
            .enumerate()
            .all(|(i, m)| m.mask.bits() as usize == i));
    }

    #[test]
    fn inter_classification_of_type1() {
        let t = classify_inter_family(&type1());
        assert!(t.passed(), "{:?}", t.checks);
        let row = |k: u32| -> Vec<(usize, NTriple)> {
            let mut r: Vec<_> = t
                .classes
                .iter()
                .filter(|c| c.swaps == k)
                .map(|c| (c.masks.len(), c.triple))
                .collect();
            r.sort();
            r
        };
        assert_eq!(row(1), vec![(6, (11, 6, 2))]);
        assert_eq!(
            row(2),
            vec![(3, (10, 6, 4)), (6, (10, 6, 4)), (6, (11, 5, 3))]
        );
        assert_eq!(
            row(3),
            vec![(2, (9, 6, 6)), (6, (11, 4, 4)), (12, (10, 5, 5))]
        );
        // the alternating class
        let alt = t
            .classes
            .iter()
            .find(|c| c.representative == InterMask::from_slots([0, 2, 4]))
            .unwrap();
        assert_eq!(alt.triple, (9, 6, 6));
    }

    #[test]
    fn intra_family_shape() {
        let fam = intra_family(&type1());
        assert_eq!(fam.len(), 720);
        assert_eq!(fam.iter().filter(|m| m.intermediate).count(), 718);
        assert!(fam[0].permutation.is_identity());
        let distinct: std::collections::HashSet<_> =
            fam.iter().map(|m| m.assignment.clone()).collect();
        assert_eq!(distinct.len(), 720);
    }

    #[test]
    fn intra_classification_of_type1() {
        let t = classify_intra_family(&type1());
        assert!(t.passed(), "{:?}", t.checks);
        assert_eq!(t.kind_counts(), [1, 2, 4, 8, 6, 8, 20, 8, 6, 8, 4, 2, 1]);
        assert_eq!(t.level(6).unwrap().fifths, 6);
        assert_eq!(
            t.level(11).unwrap().signature_set(),
            [sig("(1,5)"), sig("(4,5,5,5,5)")].into_iter().collect()
        );
        assert_eq!(
            t.level(0).unwrap().signature_set(),
            [sig("(2,2,2,2,2,2)")].into_iter().collect()
        );
        assert_eq!(t.levels.iter().map(IntraLevel::members).sum::<usize>(), 718);
    }

    #[test]
    fn csv_export() {
        let csv = classify_inter_family(&type1()).table().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 14);
        assert_eq!(lines[0], "swaps,class,size,N(chain),N(hexagon),N(star)");
        assert_eq!(lines[1], "0,\"{}\",1,12,6,0");
        let json = classify_intra_family(&type1()).table().to_json();
        assert!(json.contains("\"(2, 2, 2, 2, 2, 2)\""));
    }
}
