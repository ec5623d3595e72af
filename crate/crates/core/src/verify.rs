//! Report-style verification of every reference number, grouped in
//! sections. Mismatches become failed checks, never panics.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::assignment::{named_type, MusicalIcosahedron};
use crate::diagrams::{permutation_circle_svg, RagaType};
use crate::error::{Error, Result};
use crate::extension::verify_melakarta;
use crate::icosahedron::{canonical_graph, InterMask, VertexId};
use crate::invariants::{family_invariant, neighboring_number, HalfInteger};
use crate::permutations::{
    classify_inter_family_with, classify_intra_family, IntraPermutation, NTriple, ShiftSignature,
};
use crate::report::{Check, Report};
use crate::solver::{
    automorphism_orbit, modulo_automorphism, search_assignments, AssignmentConstraint, Gauge,
};
use crate::tones::{builtin, PitchClass};

/// Sorted (class size, triple) pairs for each swap count 0..=6.
const INTER_CLASSES: [&[(usize, NTriple)]; 7] = [
    &[(1, (12, 6, 0))],
    &[(6, (11, 6, 2))],
    &[(3, (10, 6, 4)), (6, (10, 6, 4)), (6, (11, 5, 3))],
    &[(2, (9, 6, 6)), (6, (11, 4, 4)), (12, (10, 5, 5))],
    &[(3, (10, 4, 6)), (6, (10, 4, 6)), (6, (11, 3, 5))],
    &[(6, (11, 2, 6))],
    &[(1, (12, 0, 6))],
];

/// Signature kinds per N(chromatic) level, from 12 down to 0.
const INTRA_KIND_COUNTS: [usize; 13] = [1, 2, 4, 8, 6, 8, 20, 8, 6, 8, 4, 2, 1];

const RAGA_SIGNATURES: [(&str, &str); 4] = [
    ("RA", "(3, 5, 5, 5)"),
    ("RB", "(3, 4, 5)"),
    ("RC", "(1, 3, 5, 5, 5, 5)"),
    ("RD", "(1, 3, 4, 5, 5)"),
];

const FAMILY_INVARIANT: HalfInteger = HalfInteger::from_int(15);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Section {
    Type1,
    Inter,
    Intra,
    Raga,
    Solver,
    Diagrams,
}

impl Section {
    pub const ALL: [Section; 6] = [
        Section::Type1,
        Section::Inter,
        Section::Intra,
        Section::Raga,
        Section::Solver,
        Section::Diagrams,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Type1 => "type1",
            Section::Inter => "inter",
            Section::Intra => "intra",
            Section::Raga => "raga",
            Section::Solver => "solver",
            Section::Diagrams => "diagrams",
        }
    }

    pub fn run(self, base: &MusicalIcosahedron) -> Report {
        match self {
            Section::Type1 => verify_type1(base),
            Section::Inter => verify_inter(base),
            Section::Intra => verify_intra(base),
            Section::Raga => verify_raga(base),
            Section::Solver => verify_solver(base),
            Section::Diagrams => verify_diagrams(),
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Section::ALL
            .into_iter()
            .find(|sec| sec.name() == s)
            .ok_or_else(|| Error::InvariantSpec(format!("unknown verification section `{s}`")))
    }
}

/// Every section against `base`, in order.
pub fn verify_all(base: &MusicalIcosahedron) -> Vec<Report> {
    Section::ALL.iter().map(|s| s.run(base)).collect()
}

/// Ground truth of the base assignment against the fixed scales.
pub fn verify_type1(base: &MusicalIcosahedron) -> Report {
    let mut report = Report::new("type 1 ground truth");
    let graph = canonical_graph().validate();
    report.push(Check::new(
        "canonical graph is an icosahedron",
        graph.passed(),
        graph
            .failed()
            .map(|c| c.name)
            .collect::<Vec<_>>()
            .join(", "),
    ));
    report.push(Check::equal(
        "automorphism group order",
        canonical_graph().automorphisms().len(),
        120,
    ));
    for (key, expected) in [("chromatic", 12), ("W1", 6), ("W2", 0), ("pythagorean", 0)] {
        report.push(Check::equal(
            format!("N({key}, base)"),
            neighboring_number(&builtin(key), base),
            expected,
        ));
    }
    report
}

/// The 64-member inter family, measured with chromatic / W1 / W2.
pub fn verify_inter(base: &MusicalIcosahedron) -> Report {
    let mut report = Report::new("inter-permutations");
    let (chain, w1, w2) = (builtin("chromatic"), builtin("W1"), builtin("W2"));
    let table = classify_inter_family_with(base, &chain, &w1, &w2);
    report.checks.extend(table.checks.iter().cloned());

    let mut off_invariant = 0;
    let mut intermediates = 0;
    for mask in InterMask::all() {
        let x = base.apply_inter(mask);
        let halves = 2 * neighboring_number(&chain, &x)
            + neighboring_number(&w1, &x)
            + neighboring_number(&w2, &x);
        if HalfInteger::from_halves(halves as i64) != FAMILY_INVARIANT {
            off_invariant += 1;
        }
        if mask != InterMask::EMPTY && mask != InterMask::FULL {
            intermediates += 1;
        }
    }
    report.push(Check::new(
        "N(chromatic) + N(W1)/2 + N(W2)/2 = 15 for all 64 members",
        off_invariant == 0,
        format!("{off_invariant} members off"),
    ));
    report.push(Check::equal("intermediates", intermediates, 62));
    report.push(Check::equal("symmetry classes", table.classes.len(), 13));

    for (k, expected) in INTER_CLASSES.iter().enumerate() {
        let mut got: Vec<(usize, NTriple)> = table
            .classes
            .iter()
            .filter(|c| c.swaps == k as u32)
            .map(|c| (c.masks.len(), c.triple))
            .collect();
        got.sort_unstable();
        report.push(Check::equal(
            format!("k={k} classes (size, triple)"),
            got,
            expected.to_vec(),
        ));
    }
    let kinds: BTreeSet<NTriple> = table.classes.iter().map(|c| c.triple).collect();
    report.push(Check::equal("distinct triples", kinds.len(), 11));
    let swapped = base.apply_inter(InterMask::from_slots([0]));
    report.push(Check::equal(
        "single swap triple",
        (
            neighboring_number(&chain, &swapped),
            neighboring_number(&w1, &swapped),
            neighboring_number(&w2, &swapped),
        ),
        (11, 6, 2),
    ));
    report.notice(
        "the alternating k=3 class {0,2,4} computes to (9, 6, 6), the value both relations force; \
         the commonly quoted value is (10, 6, 6)",
    );
    report
}

fn chain_and_fifths(x: &MusicalIcosahedron) -> (usize, usize) {
    (
        neighboring_number(&builtin("chromatic"), x),
        neighboring_number(&builtin("pythagorean"), x),
    )
}

fn spot_check(
    report: &mut Report,
    name: &str,
    base: &MusicalIcosahedron,
    mapping: &[(PitchClass, PitchClass)],
    expected: (usize, usize),
) {
    let result = IntraPermutation::from_mapping(mapping).and_then(|p| base.apply_intra(&p));
    match result {
        Ok(x) => report.push(Check::equal(
            format!("{name} (N(chromatic), N(pythagorean))"),
            chain_and_fifths(&x),
            expected,
        )),
        Err(e) => report.push(Check::new(name, false, e.to_string())),
    }
}

fn signature_set(sigs: &[&str]) -> BTreeSet<ShiftSignature> {
    sigs.iter()
        .map(|s| s.parse().expect("literal signature"))
        .collect()
}

/// The 720-member intra family and its level table.
pub fn verify_intra(base: &MusicalIcosahedron) -> Report {
    use PitchClass as P;
    let mut report = Report::new("intra-permutations");
    let table = classify_intra_family(base);
    report.checks.extend(table.checks.iter().cloned());
    report.push(Check::equal(
        "signature kinds per level 12..0",
        table.kind_counts(),
        INTRA_KIND_COUNTS.to_vec(),
    ));
    let level = |c: usize| {
        table
            .level(c)
            .map(|l| l.signature_set())
            .unwrap_or_default()
    };
    report.push(Check::equal(
        "level 11 signatures",
        level(11),
        signature_set(&["(1, 5)", "(4, 5, 5, 5, 5)"]),
    ));
    report.push(Check::equal(
        "level 0 signatures",
        level(0),
        signature_set(&["(2, 2, 2, 2, 2, 2)"]),
    ));
    report.push(Check::equal(
        "level 12 signatures",
        level(12),
        signature_set(&["(5, 5, 5, 5, 5, 5)"]),
    ));
    report.notice(
        "the level-12 signature moves all six star tones, (5, 5, 5, 5, 5, 5); \
         it is sometimes listed with only five entries",
    );

    spot_check(
        &mut report,
        "C# <-> Eb",
        base,
        &[(P::CS, P::EB), (P::EB, P::CS)],
        (11, 1),
    );
    spot_check(
        &mut report,
        "C# <-> G",
        base,
        &[(P::CS, P::G), (P::G, P::CS)],
        (8, 4),
    );
    spot_check(
        &mut report,
        "every star tone up a major third",
        base,
        &[
            (P::CS, P::F),
            (P::F, P::A),
            (P::A, P::CS),
            (P::EB, P::G),
            (P::G, P::B),
            (P::B, P::EB),
        ],
        (0, 12),
    );
    report
}

/// The melakarta icosahedra and the extension theorem.
pub fn verify_raga(base: &MusicalIcosahedron) -> Report {
    let melakarta = verify_melakarta();
    let mut report = melakarta.report.clone();
    report.push(Check::new(
        "scales matched",
        melakarta.matched() == 72 && melakarta.unknown.is_empty(),
        format!("{}/72 scales matched", melakarta.matched()),
    ));
    for (name, expected) in RAGA_SIGNATURES {
        let x = named_type(name).expect("built-in raga type");
        let n: RagaType = name.parse().expect("raga type name");
        let signature = IntraPermutation::between(base, &x).and_then(|p| p.signature());
        match signature {
            Ok(sig) => report.push(Check::equal(
                format!("{name} intra signature"),
                sig.to_string(),
                expected.to_string(),
            )),
            Err(e) => report.push(Check::new(
                format!("{name} intra signature"),
                false,
                e.to_string(),
            )),
        }
        report.push(Check::equal(
            format!("{name} chain scale"),
            x.induced_chain_scale().to_string(),
            n.chromatic().to_string(),
        ));
        report.push(Check::equal(
            format!("{name} star scale"),
            x.induced_star_scale().to_string(),
            n.whole_tone().to_string(),
        ));
        report.push(Check::equal(
            format!("{name} hexagon scale"),
            x.induced_hexagon_scale().to_string(),
            builtin("W1").to_string(),
        ));
        let off = InterMask::all()
            .filter(|m| family_invariant(&x, &x.apply_inter(*m)) != FAMILY_INVARIANT)
            .count();
        report.push(Check::new(
            format!("{name} family invariant = 15 for all 64 members"),
            off == 0,
            format!("{off} members off"),
        ));
    }
    report
}

/// Solver oracle: the type 1 constraints, gauged and ungauged.
pub fn verify_solver(base: &MusicalIcosahedron) -> Report {
    use PitchClass as P;
    let mut report = Report::new("solver oracle");
    let constraints = [
        AssignmentConstraint::new(builtin("chromatic"), 12),
        AssignmentConstraint::new(builtin("W1"), 6),
        AssignmentConstraint::new(builtin("W2"), 0),
    ];
    let gauge = Gauge::new(vec![
        (P::C, VertexId::hex(0)),
        (P::D, VertexId::hex(1)),
        (P::CS, VertexId::star(0)),
    ])
    .expect("consistent gauge");
    match search_assignments(&constraints, &gauge) {
        Ok(sols) => report.push(Check::new(
            "gauged search contains the base",
            sols.contains(base),
            format!("{} solutions", sols.len()),
        )),
        Err(e) => report.push(Check::new(
            "gauged search contains the base",
            false,
            e.to_string(),
        )),
    }
    match search_assignments(&constraints, &Gauge::none()) {
        Ok(sols) => {
            let orbit = automorphism_orbit(base);
            report.push(Check::new(
                "ungauged solutions equal the automorphism orbit of the base",
                sols == orbit,
                format!("{} solutions, orbit of {}", sols.len(), orbit.len()),
            ));
            let inverted =
                MusicalIcosahedron::from_tones(base.tones().map(|t| P::new(-i32::from(t.value()))))
                    .expect("negation is a bijection");
            report.notice(format!(
                "{} classes modulo automorphism; negating every tone of the base gives a solution {} its orbit",
                modulo_automorphism(&sols).len(),
                if orbit.contains(&inverted) { "inside" } else { "outside" }
            ));
        }
        Err(e) => report.push(Check::new(
            "ungauged solutions equal the automorphism orbit of the base",
            false,
            e.to_string(),
        )),
    }
    report
}

/// Circle counts of the permutation-circle diagrams against the invariant.
pub fn verify_diagrams() -> Report {
    let mut report = Report::new("permutation-circle diagrams");
    for n in RagaType::ALL {
        let base = n.assignment();
        let mut mismatched = 0;
        let mut off = 0;
        for m in InterMask::all() {
            let x = base.apply_inter(m);
            match permutation_circle_svg(n, &x) {
                Ok(d) => {
                    mismatched += usize::from(d.count != family_invariant(&base, &x));
                    off += usize::from(d.count != FAMILY_INVARIANT);
                }
                Err(_) => mismatched += 1,
            }
        }
        report.push(Check::new(
            format!("{n} circle count = invariant = 15 for all 64 members"),
            mismatched == 0 && off == 0,
            format!("{mismatched} mismatched, {off} not 15"),
        ));
    }
    report
}

/// Whether every report passed.
pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}
