//! Mobiles: bicolored plane trees with buds on black vertices and weighted
//! half-edges ("darts"), plus exhaustive generation and the well-labelled
//! form of 0-branching mobiles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MobileError {
    #[error("malformed mobile: {0}")]
    Structure(String),
    #[error("mobile violates the family: {0}")]
    Family(String),
}

/// A mobile. Every vertex lists its darts in clockwise order; a dart with no
/// mate is a bud.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobile {
    pub color: Vec<Color>,
    pub special: Option<usize>,
    pub rot: Vec<Vec<usize>>,
    pub dart_vertex: Vec<usize>,
    pub mate: Vec<Option<usize>>,
    pub weight: Vec<i64>,
}

/// Families of mobiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MobileSpec {
    DBranching(i64),
    BDibranching(i64),
    Typed { d: i64, p: i64, q: i64 },
    TypedBipartite { b: i64, r: i64, s: i64 },
    ZeroBranching,
}

impl MobileSpec {
    pub fn expected_excess(&self) -> i64 {
        match *self {
            MobileSpec::DBranching(d) => -d,
            MobileSpec::BDibranching(b) => -2 * b,
            MobileSpec::Typed { p, .. } => -p,
            MobileSpec::TypedBipartite { r, .. } => -2 * r,
            MobileSpec::ZeroBranching => 0,
        }
    }

    fn edge_weight(&self) -> i64 {
        match *self {
            MobileSpec::DBranching(d) | MobileSpec::Typed { d, .. } => d - 2,
            MobileSpec::BDibranching(b) | MobileSpec::TypedBipartite { b, .. } => b - 1,
            MobileSpec::ZeroBranching => -2,
        }
    }

    fn white_weight(&self) -> i64 {
        match *self {
            MobileSpec::DBranching(d) | MobileSpec::Typed { d, .. } => d,
            MobileSpec::BDibranching(b) | MobileSpec::TypedBipartite { b, .. } => b,
            MobileSpec::ZeroBranching => 0,
        }
    }

    fn white_ok(&self, w: i64) -> bool {
        match self {
            MobileSpec::ZeroBranching => w == 0,
            _ => w >= 1 && w <= self.white_weight(),
        }
    }

    fn black_weights(&self) -> &'static [i64] {
        match self {
            MobileSpec::DBranching(_) | MobileSpec::Typed { .. } => &[0, -1, -2],
            MobileSpec::BDibranching(_) | MobileSpec::TypedBipartite { .. } => &[0, -1],
            MobileSpec::ZeroBranching => &[-1, -2],
        }
    }

    fn black_ok(&self, deg: i64, w: i64) -> bool {
        match *self {
            MobileSpec::DBranching(d) | MobileSpec::Typed { d, .. } => deg + w == d,
            MobileSpec::BDibranching(b) | MobileSpec::TypedBipartite { b, .. } => deg % 2 == 0 && deg / 2 + w == b,
            MobileSpec::ZeroBranching => deg + w == 0,
        }
    }

    fn special_ok(&self, deg: i64, w: i64) -> Option<bool> {
        match *self {
            MobileSpec::Typed { p, q, .. } => Some(deg == q && w == p - q),
            MobileSpec::TypedBipartite { r, s, .. } => Some(deg == 2 * s && w == r - s),
            _ => None,
        }
    }
}

impl Mobile {
    /// Builds a mobile and checks that it is a tree with consistent darts.
    pub fn new(
        color: Vec<Color>,
        special: Option<usize>,
        rot: Vec<Vec<usize>>,
        mate: Vec<Option<usize>>,
        weight: Vec<i64>,
    ) -> Result<Self, MobileError> {
        let bad = |s: &str| Err(MobileError::Structure(s.to_string()));
        let nd = mate.len();
        if weight.len() != nd || rot.len() != color.len() {
            return bad("inconsistent sizes");
        }
        let mut dart_vertex = vec![usize::MAX; nd];
        for (v, r) in rot.iter().enumerate() {
            for &d in r {
                if d >= nd || dart_vertex[d] != usize::MAX {
                    return bad("dart listed twice or out of range");
                }
                dart_vertex[d] = v;
            }
        }
        if dart_vertex.contains(&usize::MAX) {
            return bad("dart not attached to a vertex");
        }
        let mut edges = 0;
        for d in 0..nd {
            match mate[d] {
                Some(e) => {
                    if e >= nd || e == d || mate[e] != Some(d) {
                        return bad("mate is not an involution");
                    }
                    edges += 1;
                }
                None => {
                    if color[dart_vertex[d]] != Color::Black {
                        return bad("bud at a white vertex");
                    }
                }
            }
        }
        if let Some(s) = special {
            if s >= color.len() || color[s] != Color::Black {
                return bad("special vertex must be black");
            }
        }
        let m = Mobile { color, special, rot, dart_vertex, mate, weight };
        if color_count(&m.color) == 0 || edges / 2 + 1 != m.color.len() || !m.is_connected() {
            return bad("not a tree");
        }
        Ok(m)
    }

    fn is_connected(&self) -> bool {
        let n = self.color.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &d in &self.rot[v] {
                if let Some(e) = self.mate[d] {
                    let w = self.dart_vertex[e];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn n_vertices(&self) -> usize {
        self.color.len()
    }

    pub fn n_darts(&self) -> usize {
        self.mate.len()
    }

    pub fn is_bud(&self, d: usize) -> bool {
        self.mate[d].is_none()
    }

    /// Next dart clockwise around the vertex of `d`.
    pub fn next_cw(&self, d: usize) -> usize {
        let r = &self.rot[self.dart_vertex[d]];
        let i = r.iter().position(|&x| x == d).unwrap();
        r[(i + 1) % r.len()]
    }

    pub fn prev_cw(&self, d: usize) -> usize {
        let r = &self.rot[self.dart_vertex[d]];
        let i = r.iter().position(|&x| x == d).unwrap();
        r[(i + r.len() - 1) % r.len()]
    }

    pub fn buds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_darts()).filter(|&d| self.is_bud(d))
    }

    pub fn n_buds(&self) -> usize {
        self.buds().count()
    }

    pub fn white_darts(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_darts()).filter(|&d| self.color[self.dart_vertex[d]] == Color::White)
    }

    /// White half-edges minus buds.
    pub fn excess(&self) -> i64 {
        self.white_darts().count() as i64 - self.n_buds() as i64
    }

    pub fn vertex_weight(&self, v: usize) -> i64 {
        self.rot[v].iter().filter(|&&d| !self.is_bud(d)).map(|&d| self.weight[d]).sum()
    }

    pub fn black_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_vertices()).filter(|&v| self.color[v] == Color::Black)
    }

    /// Degrees of the non-special black vertices, sorted.
    pub fn black_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> =
            self.black_vertices().filter(|&v| Some(v) != self.special).map(|v| self.rot[v].len()).collect();
        d.sort_unstable();
        d
    }

    /// Checks the weight conditions of `spec` and its excess.
    pub fn validate(&self, spec: MobileSpec) -> Result<(), MobileError> {
        let fail = |s: String| Err(MobileError::Family(s));
        let ew = spec.edge_weight();
        for d in 0..self.n_darts() {
            let Some(e) = self.mate[d] else { continue };
            let w = self.weight[d];
            let ok = match self.color[self.dart_vertex[d]] {
                Color::White => spec.white_ok(w),
                Color::Black => spec.black_weights().contains(&w),
            };
            if !ok {
                return fail(format!("dart {} has weight {w} outside the allowed range", d + 1));
            }
            if w + self.weight[e] != ew {
                return fail(format!("edge at dart {} has weight {}, expected {ew}", d + 1, w + self.weight[e]));
            }
        }
        let typed = matches!(spec, MobileSpec::Typed { .. } | MobileSpec::TypedBipartite { .. });
        if typed != self.special.is_some() {
            return fail("special vertex presence does not match the family".into());
        }
        for v in 0..self.n_vertices() {
            let w = self.vertex_weight(v);
            let deg = self.rot[v].len() as i64;
            match self.color[v] {
                Color::White => {
                    if w != spec.white_weight() {
                        return fail(format!("white vertex {v} has weight {w}"));
                    }
                }
                Color::Black => {
                    let ok = if Some(v) == self.special {
                        spec.special_ok(deg, w).unwrap()
                    } else {
                        spec.black_ok(deg, w)
                    };
                    if !ok {
                        return fail(format!("black vertex {v} has degree {deg} and weight {w}"));
                    }
                }
            }
        }
        if self.excess() != spec.expected_excess() {
            return fail(format!("excess {} differs from {}", self.excess(), spec.expected_excess()));
        }
        Ok(())
    }

    /// Code of the mobile traversed from dart `start`.
    pub fn rooted_code(&self, start: usize) -> Vec<i64> {
        let nd = self.n_darts();
        let mut label = vec![usize::MAX; nd];
        let mut order = vec![start];
        label[start] = 0;
        let mut i = 0;
        while i < order.len() {
            let d = order[i];
            let mut next = vec![self.next_cw(d)];
            if let Some(e) = self.mate[d] {
                next.push(e);
            }
            for x in next {
                if label[x] == usize::MAX {
                    label[x] = order.len();
                    order.push(x);
                }
            }
            i += 1;
        }
        let mut code = Vec::with_capacity(5 * nd + 1);
        code.push(nd as i64);
        for &d in &order {
            let v = self.dart_vertex[d];
            code.push(label[self.next_cw(d)] as i64);
            code.push(self.mate[d].map_or(-1, |e| label[e] as i64));
            code.push(self.weight[d]);
            code.push(self.color[v] as i64);
            code.push((Some(v) == self.special) as i64);
        }
        code
    }

    /// Isomorphism-invariant code: minimum over all starting darts.
    pub fn canonical_code(&self) -> Vec<i64> {
        if self.n_darts() == 0 {
            return vec![0, self.color[0] as i64, self.special.is_some() as i64];
        }
        (0..self.n_darts()).map(|d| self.rooted_code(d)).min().unwrap()
    }

    /// Number of distinct mobiles obtained by marking one dart of `darts`.
    pub fn distinct_markings(&self, darts: impl IntoIterator<Item = usize>) -> usize {
        darts.into_iter().map(|d| self.rooted_code(d)).collect::<BTreeSet<_>>().len()
    }

    pub fn dot(&self) -> String {
        let mut s = String::from("graph mobile {\n");
        for v in 0..self.n_vertices() {
            let (shape, fill) = match self.color[v] {
                Color::Black => ("circle", "black"),
                Color::White => ("circle", "white"),
            };
            let _ = writeln!(s, "  n{v} [shape={shape}, style=filled, fillcolor={fill}, label=\"\"];");
        }
        for d in 0..self.n_darts() {
            match self.mate[d] {
                Some(e) if d < e => {
                    let _ = writeln!(
                        s,
                        "  n{} -- n{} [taillabel=\"{}\", headlabel=\"{}\"];",
                        self.dart_vertex[d], self.dart_vertex[e], self.weight[d], self.weight[e]
                    );
                }
                None => {
                    let _ = writeln!(s, "  b{d} [shape=point];\n  n{} -- b{d} [arrowhead=normal, dir=forward];", self.dart_vertex[d]);
                }
                _ => {}
            }
        }
        s.push_str("}\n");
        s
    }
}

fn color_count(c: &[Color]) -> usize {
    c.len()
}

/// Mobile file. Ids are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobileFile {
    pub vertices: Vec<VertexRecord>,
    pub darts: Vec<DartRecord>,
    /// Darts around each vertex in clockwise order, indexed like `vertices`.
    pub rotations: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub color: Color,
    #[serde(default)]
    pub special: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DartRecord {
    pub id: usize,
    /// `null` for a bud.
    pub mate: Option<usize>,
    pub weight: i64,
}

impl MobileFile {
    pub fn from_mobile(m: &Mobile) -> Self {
        MobileFile {
            vertices: (0..m.n_vertices())
                .map(|v| VertexRecord { id: v + 1, color: m.color[v], special: Some(v) == m.special })
                .collect(),
            darts: (0..m.n_darts())
                .map(|d| DartRecord { id: d + 1, mate: m.mate[d].map(|e| e + 1), weight: m.weight[d] })
                .collect(),
            rotations: m.rot.iter().map(|r| r.iter().map(|&d| d + 1).collect()).collect(),
        }
    }

    pub fn to_mobile(&self) -> Result<Mobile, MobileError> {
        let err = |s: &str| MobileError::Structure(s.to_string());
        let nv = self.vertices.len();
        let nd = self.darts.len();
        let mut color = vec![Color::White; nv];
        let mut special = None;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i + 1 {
                return Err(err("vertex ids must be 1..n in order"));
            }
            color[i] = v.color;
            if v.special {
                if special.is_some() {
                    return Err(err("more than one special vertex"));
                }
                special = Some(i);
            }
        }
        let mut mate = vec![None; nd];
        let mut weight = vec![0; nd];
        for (i, d) in self.darts.iter().enumerate() {
            if d.id != i + 1 {
                return Err(err("dart ids must be 1..n in order"));
            }
            mate[i] = match d.mate {
                Some(0) => return Err(err("dart id 0")),
                Some(e) => Some(e - 1),
                None => None,
            };
            weight[i] = d.weight;
        }
        if self.rotations.len() != nv {
            return Err(err("one rotation per vertex is required"));
        }
        let mut rot = Vec::with_capacity(nv);
        for r in &self.rotations {
            let mut out = Vec::with_capacity(r.len());
            for &d in r {
                if d == 0 {
                    return Err(err("dart id 0"));
                }
                out.push(d - 1);
            }
            rot.push(out);
        }
        Mobile::new(color, special, rot, mate, weight)
    }
}

// ---------------------------------------------------------------------------
// Generation by the planted decomposition.

#[derive(Debug)]
enum Item {
    Bud,
    Edge(i64, Rc<Planted>),
}

/// A planted mobile: a root vertex with a dangling dart of weight `root_w`,
/// followed clockwise by `items`.
#[derive(Debug)]
struct Planted {
    root_w: i64,
    white: bool,
    items: Vec<Item>,
}

type Seq = Rc<Vec<(Vec<Rc<ItemRc>>, i64)>>;

#[derive(Debug)]
struct ItemRc(Item);

struct Generator {
    spec: MobileSpec,
    max_deg: usize,
    planted: HashMap<(i64, usize, usize), Rc<Vec<Rc<Planted>>>>,
    white_seq: HashMap<(i64, usize, usize), Seq>,
    black_seq: HashMap<(usize, usize, usize), Seq>,
}

impl Generator {
    fn new(spec: MobileSpec, max_deg: usize) -> Self {
        Generator { spec, max_deg, planted: HashMap::new(), white_seq: HashMap::new(), black_seq: HashMap::new() }
    }

    /// Planted mobiles with root weight `rho`, exactly `nb` black and `nw`
    /// white vertices.
    fn planted(&mut self, rho: i64, nb: usize, nw: usize) -> Rc<Vec<Rc<Planted>>> {
        if let Some(r) = self.planted.get(&(rho, nb, nw)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if self.spec.white_ok(rho) {
            if nw >= 1 {
                let rem = self.spec.white_weight() - rho;
                for (items, _) in self.white_sequences(rem, nb, nw - 1).iter() {
                    out.push(Rc::new(Planted { root_w: rho, white: true, items: unwrap_items(items) }));
                }
            }
        } else if self.spec.black_weights().contains(&rho) && nb >= 1 {
            let slots = self.max_deg.saturating_sub(1);
            for (items, w) in self.black_sequences(slots, nb - 1, nw).iter() {
                if self.spec.black_ok(items.len() as i64 + 1, rho + w) {
                    out.push(Rc::new(Planted { root_w: rho, white: false, items: unwrap_items(items) }));
                }
            }
        }
        let out = Rc::new(out);
        self.planted.insert((rho, nb, nw), out.clone());
        out
    }

    /// Sequences of edges around a white vertex with weights summing to `rem`.
    fn white_sequences(&mut self, rem: i64, nb: usize, nw: usize) -> Seq {
        if let Some(r) = self.white_seq.get(&(rem, nb, nw)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if rem == 0 && nb == 0 && nw == 0 {
            out.push((Vec::new(), 0));
        }
        let weights: Vec<i64> = match self.spec {
            MobileSpec::ZeroBranching => vec![0],
            _ => (1..=rem).collect(),
        };
        for a in weights {
            if a > rem {
                continue;
            }
            let child_w = self.spec.edge_weight() - a;
            for cb in 0..=nb {
                for cw in 0..=nw {
                    if cb + cw == 0 {
                        continue;
                    }
                    let children = self.planted(child_w, cb, cw);
                    if children.is_empty() {
                        continue;
                    }
                    let rests = self.white_sequences(rem - a, nb - cb, nw - cw);
                    for c in children.iter() {
                        for (rest, rw) in rests.iter() {
                            let mut v = vec![Rc::new(ItemRc(Item::Edge(a, c.clone())))];
                            v.extend(rest.iter().cloned());
                            out.push((v, a + rw));
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.white_seq.insert((rem, nb, nw), out.clone());
        out
    }

    /// Sequences of at most `slots` buds and edges around a black vertex,
    /// with the total dart weight.
    fn black_sequences(&mut self, slots: usize, nb: usize, nw: usize) -> Seq {
        if let Some(r) = self.black_seq.get(&(slots, nb, nw)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if nb == 0 && nw == 0 {
            out.push((Vec::new(), 0));
        }
        if slots > 0 {
            for (rest, rw) in self.black_sequences(slots - 1, nb, nw).iter() {
                let mut v = vec![Rc::new(ItemRc(Item::Bud))];
                v.extend(rest.iter().cloned());
                out.push((v, *rw));
            }
            for &a in self.spec.black_weights() {
                let child_w = self.spec.edge_weight() - a;
                for cb in 0..=nb {
                    for cw in 0..=nw {
                        if cb + cw == 0 {
                            continue;
                        }
                        let children = self.planted(child_w, cb, cw);
                        if children.is_empty() {
                            continue;
                        }
                        let rests = self.black_sequences(slots - 1, nb - cb, nw - cw);
                        for c in children.iter() {
                            for (rest, rw) in rests.iter() {
                                let mut v = vec![Rc::new(ItemRc(Item::Edge(a, c.clone())))];
                                v.extend(rest.iter().cloned());
                                out.push((v, a + rw));
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.black_seq.insert((slots, nb, nw), out.clone());
        out
    }
}

fn unwrap_items(items: &[Rc<ItemRc>]) -> Vec<Item> {
    items
        .iter()
        .map(|i| match &i.0 {
            Item::Bud => Item::Bud,
            Item::Edge(a, c) => Item::Edge(*a, c.clone()),
        })
        .collect()
}

struct Builder {
    color: Vec<Color>,
    rot: Vec<Vec<usize>>,
    mate: Vec<Option<usize>>,
    weight: Vec<i64>,
}

impl Builder {
    fn dart(&mut self, v: usize, w: i64) -> usize {
        self.mate.push(None);
        self.weight.push(w);
        self.rot[v].push(self.mate.len() - 1);
        self.mate.len() - 1
    }

    fn vertex(&mut self, c: Color) -> usize {
        self.color.push(c);
        self.rot.push(Vec::new());
        self.color.len() - 1
    }

    fn items(&mut self, v: usize, items: &[Item]) {
        for it in items {
            match it {
                Item::Bud => {
                    self.dart(v, 0);
                }
                Item::Edge(a, child) => {
                    let d = self.dart(v, *a);
                    let c = self.vertex(if child.white { Color::White } else { Color::Black });
                    let e = self.dart(c, child.root_w);
                    self.mate[d] = Some(e);
                    self.mate[e] = Some(d);
                    self.items(c, &child.items);
                }
            }
        }
    }
}

/// All mobiles of the family with at most `max_black` black vertices (the
/// special vertex included) of degree at most `max_deg`, up to isomorphism,
/// sorted by black count then code.
pub fn enumerate_mobiles(spec: MobileSpec, max_deg: usize, max_black: usize) -> Vec<Mobile> {
    let mut gen = Generator::new(spec, max_deg);
    let mut found: BTreeMap<(usize, Vec<i64>), Mobile> = BTreeMap::new();
    let typed = matches!(spec, MobileSpec::Typed { .. } | MobileSpec::TypedBipartite { .. });
    for nb in 1..=max_black {
        for nw in 0..=max_black * max_deg {
            let seqs = gen.black_sequences(max_deg, nb - 1, nw);
            for (items, w) in seqs.iter() {
                let deg = items.len() as i64;
                let ok = if typed { spec.special_ok(deg, *w).unwrap() } else { spec.black_ok(deg, *w) };
                if !ok {
                    continue;
                }
                let mut b = Builder { color: Vec::new(), rot: Vec::new(), mate: Vec::new(), weight: Vec::new() };
                let root = b.vertex(Color::Black);
                b.items(root, &unwrap_items(items));
                let special = if typed { Some(root) } else { None };
                let m = Mobile::new(b.color, special, b.rot, b.mate, b.weight).expect("generated mobile is a tree");
                let code = m.canonical_code();
                found.entry((nb, code)).or_insert(m);
            }
        }
    }
    found.into_values().collect()
}

// ---------------------------------------------------------------------------
// Well-labelled mobiles.

/// A mobile whose edges all join a black vertex to a white vertex; white
/// vertices are real or fake and carry labels. Weights and buds are unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellLabelledMobile {
    pub tree: Mobile,
    pub fake: Vec<bool>,
    pub label: Vec<i64>,
}

impl WellLabelledMobile {
    /// Jumps at every corner of every black vertex, keyed by the dart that
    /// follows the corner clockwise.
    pub fn jumps(&self) -> Vec<(usize, i64)> {
        let t = &self.tree;
        let mut out = Vec::new();
        for b in t.black_vertices() {
            let r = &t.rot[b];
            for i in 0..r.len() {
                let d0 = r[i];
                let d1 = r[(i + 1) % r.len()];
                let v = t.dart_vertex[t.mate[d0].unwrap()];
                let v1 = t.dart_vertex[t.mate[d1].unwrap()];
                out.push((d1, self.label[v] - self.label[v1] + (!self.fake[v1]) as i64));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), MobileError> {
        let t = &self.tree;
        let fail = |s: &str| Err(MobileError::Family(s.to_string()));
        if t.n_buds() > 0 {
            return fail("well-labelled mobiles have no buds");
        }
        for d in 0..t.n_darts() {
            let e = t.mate[d].unwrap();
            if t.color[t.dart_vertex[d]] == t.color[t.dart_vertex[e]] {
                return fail("edge between vertices of the same color");
            }
        }
        let mut anchor = false;
        for v in 0..t.n_vertices() {
            if t.color[v] == Color::Black {
                continue;
            }
            if self.fake[v] && t.rot[v].len() != 2 {
                return fail("fake vertex of degree other than 2");
            }
            let (l, min) = (self.label[v], if self.fake[v] { 0 } else { 1 });
            if l < min {
                return fail("label below its minimum");
            }
            anchor |= l == min;
        }
        if !anchor && t.color.contains(&Color::White) {
            return fail("no vertex attains the minimal label");
        }
        if self.jumps().iter().any(|&(_, j)| j < 0) {
            return fail("negative jump");
        }
        Ok(())
    }
}

/// Inserts `jump(c)` buds in each black corner and drops labels and fake
/// vertices, giving a 0-branching mobile.
pub fn theta(w: &WellLabelledMobile) -> Result<Mobile, MobileError> {
    w.validate()?;
    let t = &w.tree;
    let jumps: HashMap<usize, i64> = w.jumps().into_iter().collect();
    // New vertex ids: blacks and real whites, in order.
    let mut new_id = vec![usize::MAX; t.n_vertices()];
    let mut color = Vec::new();
    for v in 0..t.n_vertices() {
        if t.color[v] == Color::Black || !w.fake[v] {
            new_id[v] = color.len();
            color.push(t.color[v]);
        }
    }
    let mut rot = vec![Vec::new(); color.len()];
    let mut mate: Vec<Option<usize>> = Vec::new();
    let mut weight = Vec::new();
    // dart id in the new mobile for each old dart at a kept vertex
    let mut nd = vec![usize::MAX; t.n_darts()];
    for v in 0..t.n_vertices() {
        if new_id[v] == usize::MAX {
            continue;
        }
        for &d in &t.rot[v] {
            if t.color[v] == Color::Black {
                for _ in 0..jumps[&d] {
                    rot[new_id[v]].push(mate.len());
                    mate.push(None);
                    weight.push(0);
                }
            }
            nd[d] = mate.len();
            rot[new_id[v]].push(mate.len());
            mate.push(None);
            let other = t.dart_vertex[t.mate[d].unwrap()];
            weight.push(match (t.color[v], w.fake[other]) {
                (Color::White, _) => 0,
                (Color::Black, true) => -1,
                (Color::Black, false) => -2,
            });
        }
    }
    for d in 0..t.n_darts() {
        if nd[d] == usize::MAX {
            continue;
        }
        let e = t.mate[d].unwrap();
        let target = if nd[e] != usize::MAX {
            e
        } else {
            // through a fake vertex: the other dart of the fake vertex
            let f = t.dart_vertex[e];
            let other = t.rot[f].iter().copied().find(|&x| x != e).unwrap();
            t.mate[other].unwrap()
        };
        mate[nd[d]] = Some(nd[target]);
    }
    Mobile::new(color, None, rot, mate, weight)
}

/// Inverse of [`theta`] on 0-branching mobiles.
pub fn theta_inverse(m: &Mobile) -> Result<WellLabelledMobile, MobileError> {
    m.validate(MobileSpec::ZeroBranching)?;
    if m.n_darts() == 0 {
        // the lone black vertex (image of the vertex map)
        return Ok(WellLabelledMobile { tree: m.clone(), fake: vec![false], label: vec![0] });
    }
    // Rebuild the tree without buds, with a fake vertex on each black-black edge.
    let mut color = m.color.clone();
    let mut fake = vec![false; m.n_vertices()];
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); m.n_vertices()];
    let mut mate: Vec<Option<usize>> = Vec::new();
    let mut new_dart = vec![usize::MAX; m.n_darts()];
    for v in 0..m.n_vertices() {
        for &d in &m.rot[v] {
            if !m.is_bud(d) {
                new_dart[d] = mate.len();
                rot[v].push(mate.len());
                mate.push(None);
            }
        }
    }
    for d in 0..m.n_darts() {
        let Some(e) = m.mate[d] else { continue };
        if d > e {
            continue;
        }
        let (a, b) = (new_dart[d], new_dart[e]);
        if m.color[m.dart_vertex[d]] == Color::Black && m.color[m.dart_vertex[e]] == Color::Black {
            let f = color.len();
            color.push(Color::White);
            fake.push(true);
            let (x, y) = (mate.len(), mate.len() + 1);
            mate.push(Some(a));
            mate.push(Some(b));
            mate[a] = Some(x);
            mate[b] = Some(y);
            rot.push(vec![x, y]);
            let _ = f;
        } else {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
    }
    let n = mate.len();
    let tree = Mobile::new(color, None, rot, mate, vec![0; n])?;
    // Labels from bud counts: going clockwise around a black vertex from
    // neighbour v to v' across a corner with k buds, l(v') = l(v) - k + [v' real].
    let mut buds_before = vec![0i64; m.n_darts()];
    for v in m.black_vertices() {
        let r = &m.rot[v];
        let start = r.iter().position(|&d| !m.is_bud(d)).unwrap();
        let mut k = 0;
        for i in 1..=r.len() {
            let d = r[(start + i) % r.len()];
            if m.is_bud(d) {
                k += 1;
            } else {
                buds_before[d] = k;
                k = 0;
            }
        }
    }
    let mut jump_before = vec![0i64; tree.n_darts()];
    for d in 0..m.n_darts() {
        if new_dart[d] != usize::MAX {
            jump_before[new_dart[d]] = buds_before[d];
        }
    }
    let mut label = vec![i64::MIN; tree.n_vertices()];
    let first_white = (0..tree.n_vertices()).find(|&v| tree.color[v] == Color::White).unwrap();
    label[first_white] = 0;
    let mut queue = VecDeque::from([first_white]);
    while let Some(v) = queue.pop_front() {
        for &d in &tree.rot[v] {
            let bd = tree.mate[d].unwrap();
            let b = tree.dart_vertex[bd];
            let r = &tree.rot[b];
            let i = r.iter().position(|&x| x == bd).unwrap();
            let mut cur = v;
            for k in 1..r.len() {
                let nxt_d = r[(i + k) % r.len()];
                let nxt = tree.dart_vertex[tree.mate[nxt_d].unwrap()];
                let l = label[cur] - jump_before[nxt_d] + (!fake[nxt]) as i64;
                if label[nxt] == i64::MIN {
                    label[nxt] = l;
                    queue.push_back(nxt);
                }
                cur = nxt;
            }
        }
    }
    let shift = (0..tree.n_vertices())
        .filter(|&v| tree.color[v] == Color::White)
        .map(|v| if fake[v] { label[v] } else { label[v] - 1 })
        .min()
        .unwrap();
    for v in 0..tree.n_vertices() {
        label[v] = if tree.color[v] == Color::White { label[v] - shift } else { 0 };
    }
    let w = WellLabelledMobile { tree, fake, label };
    w.validate()?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(buds: usize) -> Mobile {
        Mobile::new(vec![Color::Black], None, vec![(0..buds).collect()], vec![None; buds], vec![0; buds]).unwrap()
    }

    #[test]
    fn excess_examples() {
        let w = Mobile::new(vec![Color::White], None, vec![vec![]], vec![], vec![]).unwrap();
        assert_eq!(w.excess(), 0);
        assert_eq!(star(3).excess(), -3);
        assert!(star(3).validate(MobileSpec::DBranching(3)).is_ok());
        assert!(star(3).validate(MobileSpec::DBranching(2)).is_err());
    }

    #[test]
    fn three_branching_small() {
        let one = enumerate_mobiles(MobileSpec::DBranching(3), 3, 1);
        assert_eq!(one.len(), 1);
        let three = enumerate_mobiles(MobileSpec::DBranching(3), 3, 3);
        assert_eq!(three.iter().filter(|m| m.black_vertices().count() == 3).count(), 1);
        assert_eq!(three.iter().filter(|m| m.black_vertices().count() == 2).count(), 0);
    }

    #[test]
    fn generated_mobiles_validate() {
        for spec in [MobileSpec::DBranching(1), MobileSpec::DBranching(2), MobileSpec::DBranching(4), MobileSpec::BDibranching(2)] {
            for m in enumerate_mobiles(spec, 4, 2) {
                m.validate(spec).unwrap();
            }
        }
    }

    #[test]
    fn theta_single_edge() {
        // black - white(1)
        let tree = Mobile::new(vec![Color::Black, Color::White], None, vec![vec![0], vec![1]], vec![Some(1), Some(0)], vec![0, 0]).unwrap();
        let w = WellLabelledMobile { tree, fake: vec![false, false], label: vec![0, 1] };
        let m = theta(&w).unwrap();
        assert_eq!(m.n_buds(), 1);
        m.validate(MobileSpec::ZeroBranching).unwrap();
        let back = theta_inverse(&m).unwrap();
        assert_eq!(back.label, vec![0, 1]);
    }

    #[test]
    fn file_round_trip() {
        let m = &enumerate_mobiles(MobileSpec::DBranching(2), 4, 2)[1];
        let f = MobileFile::from_mobile(m);
        let text = serde_json::to_string(&f).unwrap();
        let back: MobileFile = serde_json::from_str(&text).unwrap();
        assert_eq!(&back.to_mobile().unwrap(), m);
    }
}
