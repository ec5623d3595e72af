//! The icosahedron graph in its 3-fold projection.
//!
//! Vertices split into the belt hexagon `h0..h5` and the hexagram `s0..s5`
//! (even `s` indices form the upper triangle, odd ones the lower). Edges:
//!
//! * `h_i - h_{i+1}` (belt cycle)
//! * `s_i - s_{i+2}` (the two triangles)
//! * `s_i - h_{i-1}`, `s_i - h_i`, `s_i - h_{i+1}`
//!
//! all indices mod 6. Slot `i` of the inter-pair structure is the edge
//! `(h_i, s_i)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Hexagon,
    Star,
}

/// A vertex, addressed as `h0..h5` or `s0..s5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub kind: VertexKind,
    pub index: u8,
}

impl VertexId {
    pub const fn hex(index: u8) -> Self {
        VertexId {
            kind: VertexKind::Hexagon,
            index: index % 6,
        }
    }

    pub const fn star(index: u8) -> Self {
        VertexId {
            kind: VertexKind::Star,
            index: index % 6,
        }
    }

    /// Dense index: `h_i -> i`, `s_i -> 6 + i`.
    pub fn dense(self) -> usize {
        match self.kind {
            VertexKind::Hexagon => self.index as usize,
            VertexKind::Star => 6 + self.index as usize,
        }
    }

    pub fn from_dense(i: usize) -> Self {
        assert!(i < 12, "vertex index {i} out of range");
        if i < 6 {
            VertexId::hex(i as u8)
        } else {
            VertexId::star((i - 6) as u8)
        }
    }

    pub fn all() -> impl Iterator<Item = VertexId> {
        (0..12).map(VertexId::from_dense)
    }

    pub fn is_star(self) -> bool {
        self.kind == VertexKind::Star
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            VertexKind::Hexagon => 'h',
            VertexKind::Star => 's',
        };
        write!(f, "{prefix}{}", self.index)
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownVertex(s.to_string());
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let index: u8 = chars.as_str().parse().map_err(|_| bad())?;
        if index > 5 || chars.as_str().len() != 1 {
            return Err(bad());
        }
        match kind {
            'h' => Ok(VertexId::hex(index)),
            's' => Ok(VertexId::star(index)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const HEXAGON_RADIUS: f64 = 1.0;
pub const HEXAGRAM_RADIUS: f64 = 0.55;

/// A simple graph on the 12 projection vertices, stored as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq)]
pub struct IcosahedronGraph {
    adjacency: [u16; 12],
    coords: [(f64, f64); 12],
}

impl IcosahedronGraph {
    pub fn canonical() -> Self {
        let mut edges = Vec::with_capacity(30);
        for i in 0..6u8 {
            edges.push((VertexId::hex(i), VertexId::hex(i + 1)));
            edges.push((VertexId::star(i), VertexId::star(i + 2)));
            for d in [5, 0, 1] {
                edges.push((VertexId::star(i), VertexId::hex(i + d)));
            }
        }
        IcosahedronGraph::from_edges(edges)
    }

    /// Any simple graph on the 12 vertices, laid out with the canonical
    /// projection coordinates. Self-loops are ignored.
    pub fn from_edges<I: IntoIterator<Item = (VertexId, VertexId)>>(edges: I) -> Self {
        let mut adjacency = [0u16; 12];
        for (a, b) in edges {
            let (a, b) = (a.dense(), b.dense());
            if a != b {
                adjacency[a] |= 1 << b;
                adjacency[b] |= 1 << a;
            }
        }
        IcosahedronGraph {
            adjacency,
            coords: projection_coords(),
        }
    }

    pub fn is_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacent(a.dense(), b.dense())
    }

    #[inline]
    pub(crate) fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] & (1 << b) != 0
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.dense()].count_ones() as usize
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let mask = self.adjacency[v.dense()];
        (0..12)
            .filter(move |i| mask & (1 << i) != 0)
            .map(VertexId::from_dense)
    }

    /// Edges `(a, b)` with `a < b` in dense order, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for a in 0..12 {
            for b in (a + 1)..12 {
                if self.adjacent(a, b) {
                    out.push((VertexId::from_dense(a), VertexId::from_dense(b)));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn triangles(&self) -> Vec<[VertexId; 3]> {
        let mut out = Vec::new();
        for a in 0..12 {
            for b in (a + 1)..12 {
                if !self.adjacent(a, b) {
                    continue;
                }
                for c in (b + 1)..12 {
                    if self.adjacent(a, c) && self.adjacent(b, c) {
                        out.push([a, b, c].map(VertexId::from_dense));
                    }
                }
            }
        }
        out
    }

    /// The six swap slots `(h_i, s_i)`.
    pub fn pairs(&self) -> [(VertexId, VertexId); 6] {
        std::array::from_fn(|i| (VertexId::hex(i as u8), VertexId::star(i as u8)))
    }

    pub fn coord(&self, v: VertexId) -> (f64, f64) {
        self.coords[v.dense()]
    }

    pub fn is_connected(&self) -> bool {
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let mut next = 0u16;
            for v in 0..12 {
                if frontier & (1 << v) != 0 {
                    next |= self.adjacency[v];
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == 0x0fff
    }

    pub fn is_automorphism(&self, map: &VertexMap) -> bool {
        (0..12).all(|a| (0..12).all(|b| self.adjacent(a, b) == self.adjacent(map.0[a], map.0[b])))
    }

    /// All adjacency-preserving vertex permutations, found by backtracking.
    pub fn automorphisms(&self) -> Vec<VertexMap> {
        let mut out = Vec::new();
        let mut image = [usize::MAX; 12];
        let mut used = 0u16;
        self.extend_automorphism(0, &mut image, &mut used, &mut out);
        out
    }

    fn extend_automorphism(
        &self,
        v: usize,
        image: &mut [usize; 12],
        used: &mut u16,
        out: &mut Vec<VertexMap>,
    ) {
        if v == 12 {
            out.push(VertexMap(*image));
            return;
        }
        for w in 0..12 {
            if *used & (1 << w) != 0 {
                continue;
            }
            let consistent = (0..v).all(|u| self.adjacent(u, v) == self.adjacent(image[u], w));
            if consistent {
                image[v] = w;
                *used |= 1 << w;
                self.extend_automorphism(v + 1, image, used, out);
                *used &= !(1 << w);
            }
        }
        image[v] = usize::MAX;
    }

    /// Checks the defining properties of the icosahedron graph.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let edges = self.edge_count();
        checks.push(GraphCheck::new(
            "30 edges",
            edges == 30,
            format!("{edges} edges"),
        ));

        let degrees: BTreeSet<usize> = VertexId::all().map(|v| self.degree(v)).collect();
        checks.push(GraphCheck::new(
            "5-regular",
            degrees.len() == 1 && degrees.contains(&5),
            format!("degrees {degrees:?}"),
        ));

        let triangles = self.triangles();
        let mut per_edge = [[0u8; 12]; 12];
        for t in &triangles {
            let [a, b, c] = t.map(VertexId::dense);
            per_edge[a][b] += 1;
            per_edge[a][c] += 1;
            per_edge[b][c] += 1;
        }
        let bad = self
            .edges()
            .into_iter()
            .filter(|(a, b)| per_edge[a.dense()][b.dense()] != 2)
            .count();
        checks.push(GraphCheck::new(
            "every edge in exactly 2 triangles",
            bad == 0,
            format!("{bad} edges violate"),
        ));
        checks.push(GraphCheck::new(
            "20 triangles",
            triangles.len() == 20,
            format!("{} triangles", triangles.len()),
        ));
        checks.push(GraphCheck::new(
            "connected",
            self.is_connected(),
            String::new(),
        ));
        let pairs_ok = self.pairs().iter().all(|(h, s)| self.is_edge(*h, *s));
        checks.push(GraphCheck::new(
            "inter-pairs are edges",
            pairs_ok,
            String::new(),
        ));
        ValidationReport { checks }
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            vertices: VertexId::all().collect(),
            edges: self.edges(),
            pairs: self.pairs().to_vec(),
            coords: VertexId::all().map(|v| self.coord(v)).collect(),
        }
    }
}

fn projection_coords() -> [(f64, f64); 12] {
    std::array::from_fn(|i| {
        let v = VertexId::from_dense(i);
        let radius = if v.is_star() {
            HEXAGRAM_RADIUS
        } else {
            HEXAGON_RADIUS
        };
        // h0 at the top, indices increasing clockwise
        let angle = std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_3 * v.index as f64;
        (radius * angle.cos(), radius * angle.sin())
    })
}

/// Shared instance of the canonical graph.
pub fn canonical_graph() -> &'static IcosahedronGraph {
    static GRAPH: OnceLock<IcosahedronGraph> = OnceLock::new();
    GRAPH.get_or_init(IcosahedronGraph::canonical)
}

/// Automorphisms of the canonical graph, in backtracking order.
pub fn canonical_automorphisms() -> &'static [VertexMap] {
    static AUTS: OnceLock<Vec<VertexMap>> = OnceLock::new();
    AUTS.get_or_init(|| canonical_graph().automorphisms())
}

/// A permutation of the 12 vertices in dense indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexMap(pub(crate) [usize; 12]);

impl VertexMap {
    pub fn identity() -> Self {
        VertexMap(std::array::from_fn(|i| i))
    }

    /// `h_i -> h_{i+k}`, `s_i -> s_{i+k}`.
    pub fn slot_rotation(k: u8) -> Self {
        VertexMap(std::array::from_fn(|i| {
            let v = VertexId::from_dense(i);
            VertexId {
                kind: v.kind,
                index: (v.index + k) % 6,
            }
            .dense()
        }))
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        VertexId::from_dense(self.0[v.dense()])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl GraphCheck {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        GraphCheck {
            name,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<GraphCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &GraphCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn validate_icosahedron(graph: &IcosahedronGraph) -> ValidationReport {
    graph.validate()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphExport {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub pairs: Vec<(VertexId, VertexId)>,
    pub coords: Vec<(f64, f64)>,
}

/// A subset of the six swap slots.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct InterMask(u8);

impl InterMask {
    pub const EMPTY: InterMask = InterMask(0);
    pub const FULL: InterMask = InterMask(0b11_1111);

    pub fn new(bits: u8) -> Self {
        InterMask(bits & 0b11_1111)
    }

    pub fn from_slots<I: IntoIterator<Item = u8>>(slots: I) -> Self {
        InterMask::new(slots.into_iter().fold(0, |acc, s| acc | 1 << (s % 6)))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, slot: u8) -> bool {
        self.0 & (1 << slot) != 0
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn slots(self) -> impl Iterator<Item = u8> {
        (0..6).filter(move |s| self.contains(*s))
    }

    /// All 64 masks in increasing bit order.
    pub fn all() -> impl Iterator<Item = InterMask> {
        (0..64).map(InterMask)
    }

    fn map_slots(self, f: impl Fn(u8) -> u8) -> Self {
        InterMask::from_slots(self.slots().map(f))
    }
}

impl fmt::Display for InterMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.slots().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Accepts `0,2`, `{0,2}` or an empty list.
impl FromStr for InterMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut mask = InterMask::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.parse::<u8>() {
                Ok(slot) if slot < 6 => mask.0 |= 1 << slot,
                _ => return Err(Error::InvalidMask(s.to_string())),
            }
        }
        Ok(mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MaskClass {
    /// Smallest mask (by bits) in the orbit.
    pub representative: InterMask,
    pub orbit_size: usize,
}

/// Orbit of a mask under the dihedral group of order 12 acting on slot
/// indices (rotations `i -> i + k`, reflections `i -> k - i`).
pub fn mask_orbit(m: InterMask) -> BTreeSet<InterMask> {
    let mut orbit = BTreeSet::new();
    for k in 0..6u8 {
        orbit.insert(m.map_slots(|i| (i + k) % 6));
        orbit.insert(m.map_slots(|i| (k + 6 - i) % 6));
    }
    orbit
}

pub fn mask_symmetry_class(m: InterMask) -> MaskClass {
    let orbit = mask_orbit(m);
    MaskClass {
        representative: *orbit.first().expect("orbit contains m"),
        orbit_size: orbit.len(),
    }
}
