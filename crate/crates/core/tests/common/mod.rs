use std::path::PathBuf;

use musical_icosahedron::diagrams::{
    dodecagon_svg, permutation_circle_svg, projection_svg, projection_svg_with_pairs, RagaType,
};
use musical_icosahedron::tones::catalog;
use musical_icosahedron::{named_type, type1, InterMask};

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// (file name, freshly rendered document) for every golden file.
pub fn golden_cases() -> Vec<(&'static str, String)> {
    let swapped = type1().apply_inter(InterMask::from_slots([0]));
    let chromatic = catalog("chromatic").unwrap();
    let rb = RagaType::B
        .assignment()
        .apply_inter(InterMask::from_slots([0, 2]));
    vec![
        ("projection_type1.svg", projection_svg(&type1())),
        (
            "projection_pairs_0.svg",
            projection_svg_with_pairs(&swapped, InterMask::from_slots([0])),
        ),
        ("dodecagon_type1.svg", dodecagon_svg(&type1(), &chromatic)),
        ("dodecagon_swap_0.svg", dodecagon_svg(&swapped, &chromatic)),
        (
            "dodecagon_type3.svg",
            dodecagon_svg(&named_type("type3").unwrap(), &chromatic),
        ),
        (
            "circles_RA.svg",
            permutation_circle_svg(RagaType::A, &RagaType::A.assignment())
                .unwrap()
                .svg,
        ),
        (
            "circles_RB_0_2.svg",
            permutation_circle_svg(RagaType::B, &rb).unwrap().svg,
        ),
    ]
}
