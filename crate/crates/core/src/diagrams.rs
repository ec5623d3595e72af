//! SVG renderings: the projected icosahedron, the dodecagon neighboring
//! diagram and the permutation-circle diagram of the melakarta types.
//!
//! All geometry is fixed by the constants below and every number is printed
//! with three decimals, so equal inputs give byte-identical documents.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::assignment::{named_type, MusicalIcosahedron};
use crate::error::{Error, Result};
use crate::extension::verify_melakarta;
use crate::icosahedron::{InterMask, VertexId};
use crate::invariants::HalfInteger;
use crate::tones::{builtin, PitchClass, Scale, ToneSet};

pub const SKY_BLUE: &str = "#87ceeb";
pub const PURPLE: &str = "#800080";
pub const YELLOW_GREEN: &str = "#9acd32";
pub const ORANGE: &str = "#ffa500";
pub const GREEN: &str = "#228b22";
const INACTIVE: &str = "#c8c8c8";
const INK: &str = "#000000";

/// Pixels per unit of projection radius.
const PROJECTION_SCALE: f64 = 150.0;
const PROJECTION_SIZE: f64 = 400.0;
const VERTEX_RADIUS: f64 = 14.0;
const PAIR_ELLIPSE_MINOR: f64 = 22.0;
const PAIR_ELLIPSE_PAD: f64 = 24.0;

const DODECAGON_SIZE: f64 = 400.0;
const DODECAGON_RADIUS: f64 = 160.0;

const CIRCLE_SIZE: f64 = 480.0;
const CIRCLE_RING_RADIUS: f64 = 180.0;

const LABEL_FONT: &str = "font-family=\"sans-serif\" font-size=\"14\"";
const STROKE_WIDTH: f64 = 2.0;

/// Fixed-precision number with negative zero folded into zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn open_svg(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = num(width),
        h = num(height)
    );
}

fn close_svg(out: &mut String) {
    out.push_str("</svg>\n");
}

fn label(out: &mut String, x: f64, y: f64, text: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" {LABEL_FONT}>{text}</text>",
        num(x),
        num(y)
    );
}

/// Screen position of `v` in a projection panel centred at `(cx, cy)`.
fn projected(v: VertexId, cx: f64, cy: f64, scale: f64) -> (f64, f64) {
    let (x, y) = crate::icosahedron::canonical_graph().coord(v);
    (cx + scale * x, cy - scale * y)
}

/// Draws one projection panel into `out`.
fn projection_panel(
    out: &mut String,
    x: &MusicalIcosahedron,
    (cx, cy): (f64, f64),
    scale: f64,
    pairs: Option<InterMask>,
    highlight: Option<(ToneSet, &str)>,
) {
    let graph = x.graph();
    if let Some(swapped) = pairs {
        for (slot, (h, s)) in graph.pairs().into_iter().enumerate() {
            let (hx, hy) = projected(h, cx, cy, scale);
            let (sx, sy) = projected(s, cx, cy, scale);
            let (mx, my) = ((hx + sx) / 2.0, (hy + sy) / 2.0);
            let half = ((hx - sx).hypot(hy - sy)) / 2.0 + PAIR_ELLIPSE_PAD;
            let angle = (hy - sy).atan2(hx - sx).to_degrees();
            let fill = if swapped.contains(slot as u8) {
                format!("fill=\"{SKY_BLUE}\" fill-opacity=\"0.5\"")
            } else {
                "fill=\"none\"".to_string()
            };
            let _ = writeln!(
                out,
                "<ellipse class=\"pair\" cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" transform=\"rotate({} {} {})\" stroke=\"{SKY_BLUE}\" stroke-width=\"{}\" {fill}/>",
                num(mx),
                num(my),
                num(half),
                num(PAIR_ELLIPSE_MINOR),
                num(angle),
                num(mx),
                num(my),
                num(STROKE_WIDTH)
            );
        }
    }
    for (a, b) in graph.edges() {
        let (ax, ay) = projected(a, cx, cy, scale);
        let (bx, by) = projected(b, cx, cy, scale);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{INK}\" stroke-width=\"1.000\"/>",
            num(ax),
            num(ay),
            num(bx),
            num(by)
        );
    }
    for v in VertexId::all() {
        let (vx, vy) = projected(v, cx, cy, scale);
        let tone = x.tone_at(v);
        let fill = match highlight {
            Some((set, color)) if set.contains(tone) => color,
            _ => "#ffffff",
        };
        let _ = writeln!(
            out,
            "<circle class=\"vertex\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\" stroke=\"{INK}\"/>",
            num(vx),
            num(vy),
            num(VERTEX_RADIUS)
        );
        label(out, vx, vy, tone.name());
    }
}

/// The assignment on the projected icosahedron: 30 edges, 12 tone labels.
pub fn projection_svg(x: &MusicalIcosahedron) -> String {
    render_projection(x, None)
}

/// Like [`projection_svg`] with the six inter-pair slots outlined by
/// sky-blue ellipses; slots in `swapped` are filled.
pub fn projection_svg_with_pairs(x: &MusicalIcosahedron, swapped: InterMask) -> String {
    render_projection(x, Some(swapped))
}

fn render_projection(x: &MusicalIcosahedron, pairs: Option<InterMask>) -> String {
    let mut out = String::new();
    open_svg(&mut out, PROJECTION_SIZE, PROJECTION_SIZE);
    let c = PROJECTION_SIZE / 2.0;
    projection_panel(&mut out, x, (c, c), PROJECTION_SCALE, pairs, None);
    close_svg(&mut out);
    out
}

/// Point `i` of 12 on a circle, C at the top, clockwise.
fn dial(i: usize, cx: f64, cy: f64, r: f64) -> (f64, f64) {
    let angle = FRAC_PI_2 - PI / 6.0 * i as f64;
    (cx + r * angle.cos(), cy - r * angle.sin())
}

/// The twelve tones in chromatic order on a dodecagon, with a chord for
/// every cyclic neighbor pair of `chain` that is adjacent in `member`.
/// The chord count equals the neighboring number of `chain`.
pub fn dodecagon_svg(member: &MusicalIcosahedron, chain: &Scale) -> String {
    let mut out = String::new();
    open_svg(&mut out, DODECAGON_SIZE, DODECAGON_SIZE);
    let c = DODECAGON_SIZE / 2.0;
    let pos = |t: PitchClass| dial(t.value() as usize, c, c, DODECAGON_RADIUS);

    let corners: Vec<String> = PitchClass::all()
        .map(|t| {
            let (x, y) = pos(t);
            format!("{},{}", num(x), num(y))
        })
        .collect();
    let _ = writeln!(
        out,
        "<polygon class=\"dodecagon\" points=\"{}\" fill=\"none\" stroke=\"{INACTIVE}\"/>",
        corners.join(" ")
    );
    for (a, b) in chain.neighbor_pairs() {
        if !member.tones_adjacent(a, b) {
            continue;
        }
        let (ax, ay) = pos(a);
        let (bx, by) = pos(b);
        let _ = writeln!(
            out,
            "<line class=\"chord\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{GREEN}\" stroke-width=\"{}\"/>",
            num(ax),
            num(ay),
            num(bx),
            num(by),
            num(STROKE_WIDTH)
        );
    }
    for t in PitchClass::all() {
        let (x, y) = dial(t.value() as usize, c, c, DODECAGON_RADIUS + 22.0);
        label(&mut out, x, y, t.name());
    }
    close_svg(&mut out);
    out
}

/// One of the four melakarta icosahedra RA..RD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RagaType {
    A,
    B,
    C,
    D,
}

impl RagaType {
    pub const ALL: [RagaType; 4] = [RagaType::A, RagaType::B, RagaType::C, RagaType::D];

    pub fn letter(self) -> char {
        match self {
            RagaType::A => 'A',
            RagaType::B => 'B',
            RagaType::C => 'C',
            RagaType::D => 'D',
        }
    }

    /// Type name, e.g. `RA`.
    pub fn name(self) -> String {
        format!("R{}", self.letter())
    }

    pub fn color(self) -> &'static str {
        match self {
            RagaType::A => SKY_BLUE,
            RagaType::B => PURPLE,
            RagaType::C => YELLOW_GREEN,
            RagaType::D => ORANGE,
        }
    }

    pub fn assignment(self) -> MusicalIcosahedron {
        named_type(&self.name()).expect("built-in raga type")
    }

    /// The deformed chromatic scale laid out on the hexagon/star chain.
    pub fn chromatic(self) -> Scale {
        builtin(&format!("chromatic_{}", self.letter()))
    }

    /// The deformed whole-tone scale on the star.
    pub fn whole_tone(self) -> Scale {
        builtin(&format!("wholetone_{}2", self.letter()))
    }

    fn from_label(label: &str) -> Option<RagaType> {
        RagaType::ALL.into_iter().find(|n| n.name() == label)
    }
}

impl fmt::Display for RagaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.letter())
    }
}

impl FromStr for RagaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letter = s.strip_prefix('R').unwrap_or(s);
        match letter {
            "A" => Ok(RagaType::A),
            "B" => Ok(RagaType::B),
            "C" => Ok(RagaType::C),
            "D" => Ok(RagaType::D),
            _ => Err(Error::UnknownRagaType(s.to_string())),
        }
    }
}

/// A permutation-circle diagram and the weighted count of its colored circles.
#[derive(Debug, Clone, Serialize)]
pub struct CircleDiagram {
    #[serde(skip)]
    pub svg: String,
    pub full_circles: usize,
    pub half_circles: usize,
    pub quarter_circles: usize,
    /// `full + half/2 + quarter/4` over colored circles.
    pub count: HalfInteger,
}

/// Class and stroke of one diagram element.
#[derive(Clone, Copy)]
struct Mark<'a> {
    class: &'a str,
    on: bool,
    color: &'a str,
}

impl fmt::Display for Mark<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (state, stroke) = if self.on {
            ("on", self.color)
        } else {
            ("off", INACTIVE)
        };
        write!(
            f,
            "class=\"{} {state}\" fill=\"none\" stroke=\"{stroke}\"",
            self.class
        )
    }
}

fn circle_element(out: &mut String, mark: Mark, (cx, cy): (f64, f64), r: f64) {
    let _ = writeln!(
        out,
        "<circle {mark} cx=\"{}\" cy=\"{}\" r=\"{}\" stroke-width=\"{}\"/>",
        num(cx),
        num(cy),
        num(r),
        num(STROKE_WIDTH)
    );
}

/// Apex of the semicircle on `p`..`q`, bulging toward `center` when
/// `inward`, away from it otherwise.
fn apex(p: (f64, f64), q: (f64, f64), center: (f64, f64), inward: bool) -> ((f64, f64), f64) {
    let m = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
    let r = (q.0 - p.0).hypot(q.1 - p.1) / 2.0;
    let mut n = (-(q.1 - p.1) / (2.0 * r), (q.0 - p.0) / (2.0 * r));
    let toward = n.0 * (center.0 - m.0) + n.1 * (center.1 - m.1);
    if (toward < 0.0) == inward {
        n = (-n.0, -n.1);
    }
    ((m.0 + r * n.0, m.1 + r * n.1), r)
}

/// Sweep flag for the quarter arc from `from` to `to` around `m`.
fn sweep(m: (f64, f64), from: (f64, f64), to: (f64, f64)) -> u8 {
    let cross = (from.0 - m.0) * (to.1 - m.1) - (from.1 - m.1) * (to.0 - m.0);
    u8::from(cross > 0.0)
}

fn arc_element(
    out: &mut String,
    mark: Mark,
    from: (f64, f64),
    to: (f64, f64),
    m: (f64, f64),
    r: f64,
) {
    let _ = writeln!(
        out,
        "<path {mark} d=\"M {} {} A {} {} 0 0 {} {} {}\" stroke-width=\"{}\"/>",
        num(from.0),
        num(from.1),
        num(r),
        num(r),
        sweep(m, from, to),
        num(to.0),
        num(to.1),
        num(STROKE_WIDTH)
    );
}

/// Half circle on `p`..`q` as one path, or as two separate quarter arcs
/// meeting at the apex when `split`.
fn semicircle(
    out: &mut String,
    mark: Mark,
    p: (f64, f64),
    q: (f64, f64),
    center: (f64, f64),
    inward: bool,
    split: bool,
) {
    let (top, r) = apex(p, q, center, inward);
    let m = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
    if split {
        arc_element(out, mark, p, top, m, r);
        arc_element(out, mark, q, top, m, r);
        return;
    }
    let _ = writeln!(
        out,
        "<path {mark} d=\"M {} {} A {r} {r} 0 0 {} {} {} A {r} {r} 0 0 {} {} {}\" stroke-width=\"{}\"/>",
        num(p.0),
        num(p.1),
        sweep(m, p, top),
        num(top.0),
        num(top.1),
        sweep(m, top, q),
        num(q.0),
        num(q.1),
        num(STROKE_WIDTH),
        r = num(r)
    );
}

/// The permutation-circle diagram of `x`, which must lie in the inter
/// family of type `n`.
///
/// Tones sit on a ring in deformed-chromatic order. Each consecutive pair
/// gets a full circle, each hexagon whole-tone pair a half circle outside
/// the ring, each consecutive pair of the deformed whole-tone chain a half
/// circle inside it, and the chain's closing link two quarter circles.
/// An element is colored when its two tones are adjacent in `x`.
pub fn permutation_circle_svg(n: RagaType, x: &MusicalIcosahedron) -> Result<CircleDiagram> {
    let base = n.assignment();
    if !InterMask::all().any(|m| base.apply_inter(m).tones() == x.tones()) {
        return Err(Error::NotInFamily(n.letter()));
    }
    let chromatic = n.chromatic();
    let hexagon = base.induced_hexagon_scale();
    let whole = n.whole_tone();
    let color = n.color();

    let c = CIRCLE_SIZE / 2.0;
    let center = (c, c);
    let order: Vec<PitchClass> = chromatic.tones().to_vec();
    let pos = |t: PitchClass| {
        let i = order
            .iter()
            .position(|o| *o == t)
            .expect("chromatic holds all tones");
        dial(i, c, c, CIRCLE_RING_RADIUS)
    };

    let mut out = String::new();
    open_svg(&mut out, CIRCLE_SIZE, CIRCLE_SIZE);
    let (mut fulls, mut halves, mut quarters) = (0, 0, 0);

    for (a, b) in chromatic.neighbor_pairs() {
        let on = x.tones_adjacent(a, b);
        fulls += usize::from(on);
        let (p, q) = (pos(a), pos(b));
        let m = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
        let r = (q.0 - p.0).hypot(q.1 - p.1) / 2.0;
        circle_element(
            &mut out,
            Mark {
                class: "full",
                on,
                color,
            },
            m,
            r,
        );
    }
    for (a, b) in hexagon.neighbor_pairs() {
        let on = x.tones_adjacent(a, b);
        halves += usize::from(on);
        semicircle(
            &mut out,
            Mark {
                class: "half",
                on,
                color,
            },
            pos(a),
            pos(b),
            center,
            false,
            false,
        );
    }
    let w = whole.tones();
    for pair in w.windows(2) {
        let on = x.tones_adjacent(pair[0], pair[1]);
        halves += usize::from(on);
        semicircle(
            &mut out,
            Mark {
                class: "half",
                on,
                color,
            },
            pos(pair[0]),
            pos(pair[1]),
            center,
            true,
            false,
        );
    }
    let (last, first) = (w[w.len() - 1], w[0]);
    let on = x.tones_adjacent(last, first);
    quarters += 2 * usize::from(on);
    semicircle(
        &mut out,
        Mark {
            class: "quarter",
            on,
            color,
        },
        pos(last),
        pos(first),
        center,
        true,
        true,
    );

    for (i, t) in order.iter().enumerate() {
        let (lx, ly) = dial(i, c, c, CIRCLE_RING_RADIUS + 40.0);
        label(&mut out, lx, ly, t.name());
    }
    close_svg(&mut out);

    let count = HalfInteger::from_halves((4 * fulls + 2 * halves + quarters) as i64 / 2);
    Ok(CircleDiagram {
        svg: out,
        full_circles: fulls,
        half_circles: halves,
        quarter_circles: quarters,
        count,
    })
}

const GALLERY_PANEL: f64 = 300.0;
const GALLERY_SCALE: f64 = 110.0;
const GALLERY_HEADER: f64 = 40.0;

/// File name for a raga diagram, e.g. `raga_1_Kanakangi.svg`.
pub fn raga_file_name(index: usize, name: &str) -> String {
    format!("raga_{index}_{}.svg", name.replace(' ', "_"))
}

/// One SVG per melakarta scale, each showing the witnessing types after
/// their inter-permutation with the scale's tones filled in the type color.
pub fn raga_gallery() -> Vec<(String, String)> {
    let report = verify_melakarta();
    report
        .ragas
        .iter()
        .map(|raga| {
            let set = raga.tones.tone_set();
            let panels = raga.witnesses.len().max(1) as f64;
            let mut out = String::new();
            open_svg(
                &mut out,
                GALLERY_PANEL * panels,
                GALLERY_PANEL + GALLERY_HEADER,
            );
            label(
                &mut out,
                GALLERY_PANEL * panels / 2.0,
                GALLERY_HEADER / 2.0,
                &format!("{}: {} ({})", raga.raga_index, raga.name, raga.tones),
            );
            for (i, w) in raga.witnesses.iter().enumerate() {
                let Some(n) = RagaType::from_label(&w.base) else {
                    continue;
                };
                let x = n.assignment().apply_inter(w.mask);
                let cx = GALLERY_PANEL * (i as f64 + 0.5);
                let cy = GALLERY_HEADER + GALLERY_PANEL / 2.0;
                projection_panel(
                    &mut out,
                    &x,
                    (cx, cy),
                    GALLERY_SCALE,
                    None,
                    Some((set, n.color())),
                );
                label(
                    &mut out,
                    cx,
                    GALLERY_HEADER + GALLERY_PANEL - 12.0,
                    &format!("{} {}", w.base, w.mask),
                );
            }
            close_svg(&mut out);
            (raga_file_name(raga.raga_index, &raga.name), out)
        })
        .collect()
}

/// Writes [`raga_gallery`] into `dir`, creating it if needed.
pub fn write_raga_gallery(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, svg) in raga_gallery() {
        let path = dir.join(name);
        std::fs::write(&path, svg)?;
        written.push(path);
    }
    Ok(written)
}
