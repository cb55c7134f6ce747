//! Weighted biorientations of plane maps and the pipelines computing the
//! unique suitable d/(d-2)- and b/(b-1)-orientations.
//!
//! An edge with half-edges `h` (at `u`) and `alpha(h)` (at `v`) can be
//! traversed from `u` to `v` iff `alpha(h)` is ingoing. Walking that way, the
//! face of `h` is on the left.

use std::collections::VecDeque;

use petgraph::algo::dinics;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{AnnularMap, CombinatorialMap, Half, InnerQuadrangulation, PlaneMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZBiorientation {
    pub ingoing: Vec<bool>,
    pub weight: Vec<i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("girth violation: no orientation exists (Hall violation on vertex set {certificate:?})")]
    GirthViolation { certificate: Vec<usize> },
    #[error("class violation: {0}")]
    Class(String),
}

/// Parameters of the orientation families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GirthSpec {
    Plain(i64),
    Bipartite(i64),
    Annular { d: i64, p: i64, q: i64 },
    AnnularBipartite { b: i64, r: i64, s: i64 },
    Zero,
}

impl GirthSpec {
    pub fn outer_degree(&self) -> usize {
        match *self {
            GirthSpec::Plain(d) => d as usize,
            GirthSpec::Bipartite(b) => 2 * b as usize,
            GirthSpec::Annular { p, .. } => p as usize,
            GirthSpec::AnnularBipartite { r, .. } => 2 * r as usize,
            GirthSpec::Zero => 0,
        }
    }

    pub fn inner_root_degree(&self) -> Option<usize> {
        match *self {
            GirthSpec::Annular { q, .. } => Some(q as usize),
            GirthSpec::AnnularBipartite { s, .. } => Some(2 * s as usize),
            _ => None,
        }
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self, GirthSpec::Bipartite(_) | GirthSpec::AnnularBipartite { .. })
    }

    /// Smallest allowed degree of an ordinary inner face.
    fn min_face_degree(&self) -> usize {
        match *self {
            GirthSpec::Plain(d) | GirthSpec::Annular { d, .. } => d as usize,
            GirthSpec::Bipartite(b) | GirthSpec::AnnularBipartite { b, .. } => 2 * b as usize,
            GirthSpec::Zero => 0,
        }
    }

    fn validate(&self) -> Result<(), OrientError> {
        let ok = match *self {
            GirthSpec::Plain(d) => d >= 1,
            GirthSpec::Bipartite(b) => b >= 1,
            GirthSpec::Annular { d, p, q } => d >= 1 && p >= 1 && p <= q,
            GirthSpec::AnnularBipartite { b, r, s } => b >= 1 && r >= 1 && r <= s,
            GirthSpec::Zero => true,
        };
        if ok { Ok(()) } else { Err(OrientError::Invalid(format!("bad parameters {self:?}"))) }
    }
}

impl ZBiorientation {
    pub fn zeros(n: usize) -> Self {
        ZBiorientation { ingoing: vec![false; n], weight: vec![0; n] }
    }

    /// Sets a half-edge weight and derives its direction from the sign.
    pub fn set(&mut self, h: Half, w: i64) {
        self.weight[h] = w;
        self.ingoing[h] = w > 0;
    }

    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weight.is_empty()
    }

    /// Number of ingoing half-edges of the edge of `h`.
    pub fn edge_type(&self, m: &CombinatorialMap, h: Half) -> u8 {
        self.ingoing[h] as u8 + self.ingoing[m.alpha(h)] as u8
    }

    pub fn edge_weight(&self, m: &CombinatorialMap, h: Half) -> i64 {
        self.weight[h] + self.weight[m.alpha(h)]
    }

    pub fn vertex_weights(&self, m: &CombinatorialMap) -> Vec<i64> {
        let mut w = vec![0; m.n_vertices()];
        for h in 0..m.len() {
            if self.ingoing[h] {
                w[m.vertex(h)] += self.weight[h];
            }
        }
        w
    }

    /// Face weight: sum of outgoing half-edges having the face on their right.
    pub fn face_weights(&self, m: &CombinatorialMap) -> Vec<i64> {
        let mut w = vec![0; m.n_faces()];
        for h in 0..m.len() {
            if !self.ingoing[h] {
                w[m.face(m.alpha(h))] += self.weight[h];
            }
        }
        w
    }

    /// Z-biorientation sign rule.
    pub fn check_signs(&self) -> Result<(), String> {
        for h in 0..self.len() {
            let w = self.weight[h];
            if self.ingoing[h] && w < 1 || !self.ingoing[h] && w > 0 {
                return Err(format!("half-edge {} has direction/weight mismatch", h + 1));
            }
        }
        Ok(())
    }

    pub fn to_records(&self) -> Vec<OrientationRecord> {
        (0..self.len())
            .map(|h| OrientationRecord {
                half_edge: h + 1,
                direction: if self.ingoing[h] { Direction::In } else { Direction::Out },
                weight: self.weight[h],
            })
            .collect()
    }

    pub fn from_records(n: usize, records: &[OrientationRecord]) -> Result<Self, OrientError> {
        let mut o = ZBiorientation::zeros(n);
        let mut seen = vec![false; n];
        for r in records {
            if r.half_edge == 0 || r.half_edge > n || seen[r.half_edge - 1] {
                return Err(OrientError::Invalid(format!("bad record for half-edge {}", r.half_edge)));
            }
            seen[r.half_edge - 1] = true;
            o.ingoing[r.half_edge - 1] = r.direction == Direction::In;
            o.weight[r.half_edge - 1] = r.weight;
        }
        if seen.contains(&false) {
            return Err(OrientError::Invalid("orientation does not cover all half-edges".into()));
        }
        Ok(o)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationRecord {
    pub half_edge: usize,
    pub direction: Direction,
    pub weight: i64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub admissible: bool,
    pub minimal: bool,
    pub accessible: bool,
    pub suitable: bool,
}

/// Vertices reachable from `v` along traversable edges.
fn reachable_vertices(m: &CombinatorialMap, o: &ZBiorientation, v: usize) -> Vec<bool> {
    let verts = m.vertices();
    let mut seen = vec![false; m.n_vertices()];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &h in &verts[x] {
            let a = m.alpha(h);
            let y = m.vertex(a);
            if o.ingoing[a] && !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Faces that cannot reach `root` in the blocked dual digraph: there is an
/// arc `face(h) -> face(alpha h)` whenever the traversal along `h` (with
/// `face(h)` on the left) is not allowed. These faces form the interiors of
/// the counterclockwise circuits.
fn ccw_interior(m: &CombinatorialMap, o: &ZBiorientation, root: usize) -> Vec<bool> {
    let nf = m.n_faces();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for h in 0..m.len() {
        if !o.ingoing[m.alpha(h)] {
            rev[m.face(m.alpha(h))].push(m.face(h));
        }
    }
    let mut reach = vec![false; nf];
    reach[root] = true;
    let mut stack = vec![root];
    while let Some(f) = stack.pop() {
        for &g in &rev[f] {
            if !reach[g] {
                reach[g] = true;
                stack.push(g);
            }
        }
    }
    reach.into_iter().map(|r| !r).collect()
}

/// No counterclockwise circuit with respect to the face `root`.
pub fn is_minimal(m: &CombinatorialMap, o: &ZBiorientation, root: usize) -> bool {
    m.is_empty() || !ccw_interior(m, o, root).contains(&true)
}

pub fn is_admissible(p: &PlaneMap, o: &ZBiorientation) -> Result<(), String> {
    let m = &p.map;
    let outer = p.outer_halves();
    let rf = p.root_face();
    let mut outer_vertex = vec![false; m.n_vertices()];
    for &h in &outer {
        if outer_vertex[m.vertex(h)] {
            return Err("root face contour is not a simple cycle".into());
        }
        outer_vertex[m.vertex(h)] = true;
        if m.face(m.alpha(h)) == rf {
            return Err("root face contour is not a simple cycle".into());
        }
    }
    let mut contour = vec![false; m.len()];
    for &h in &outer {
        let a = m.alpha(h);
        contour[h] = true;
        contour[a] = true;
        if o.ingoing[h] || o.weight[h] != 0 || !o.ingoing[a] || o.weight[a] != 1 {
            return Err(format!("outer edge at half-edge {} is not clockwise 1-way with weights 0/1", h + 1));
        }
    }
    for h in 0..m.len() {
        if !contour[h] && outer_vertex[m.vertex(h)] && o.ingoing[h] {
            return Err(format!("inner half-edge {} at an outer vertex is ingoing", h + 1));
        }
    }
    Ok(())
}

/// Flags of a biorientation of a face-rooted plane map.
pub fn classify(p: &PlaneMap, o: &ZBiorientation) -> Result<Flags, OrientError> {
    if o.len() != p.map.len() {
        return Err(OrientError::Invalid("orientation size does not match the map".into()));
    }
    o.check_signs().map_err(OrientError::Invalid)?;
    let m = &p.map;
    let admissible = is_admissible(p, o).is_ok();
    let minimal = is_minimal(m, o, p.root_face());
    let accessible = m.is_empty()
        || p.outer_halves().iter().all(|&h| reachable_vertices(m, o, m.vertex(h)).iter().all(|&r| r));
    Ok(Flags { admissible, minimal, accessible, suitable: admissible && minimal && accessible })
}

/// Flags in the outer-degree-0 sense: every half-edge at the marked vertex
/// is outgoing, no directed cycle has the marked vertex on its right, and
/// everything is reachable from it.
pub fn classify_vertex_rooted(m: &CombinatorialMap, o: &ZBiorientation, v0: usize) -> Flags {
    if m.is_empty() {
        return Flags { admissible: true, minimal: true, accessible: true, suitable: true };
    }
    let at_v0: Vec<Half> = (0..m.len()).filter(|&h| m.vertex(h) == v0).collect();
    let admissible = at_v0.iter().all(|&h| !o.ingoing[h]);
    // A directed cycle cannot pass through v0, so all faces around v0 lie on
    // one side of it; any of them serves as the reference face.
    let minimal = is_minimal(m, o, m.face(at_v0[0]));
    let accessible = reachable_vertices(m, o, v0).iter().all(|&r| r);
    Flags { admissible, minimal, accessible, suitable: admissible && minimal && accessible }
}

/// Weight conditions of the family `spec`. `inner` is the inner root face
/// half-edge for annular specs.
pub fn check_constraints(
    p: &PlaneMap,
    inner: Option<Half>,
    o: &ZBiorientation,
    spec: GirthSpec,
) -> Result<(), String> {
    let m = &p.map;
    if let GirthSpec::Zero = spec {
        return Err("use check_zero_constraints for the vertex-rooted case".into());
    }
    if p.outer_degree() != spec.outer_degree() {
        return Err(format!("root face has degree {}, expected {}", p.outer_degree(), spec.outer_degree()));
    }
    let special = match (spec.inner_root_degree(), inner) {
        (Some(q), Some(i)) => {
            if m.face_orbit(i).len() != q {
                return Err(format!("inner root face has degree {}, expected {q}", m.face_orbit(i).len()));
            }
            Some(m.face(i))
        }
        (None, None) => None,
        _ => return Err("inner root face does not match the family".into()),
    };
    let (edge_w, vertex_w, min_out) = match spec {
        GirthSpec::Plain(d) | GirthSpec::Annular { d, .. } => (d - 2, d, -2),
        GirthSpec::Bipartite(b) | GirthSpec::AnnularBipartite { b, .. } => (b - 1, b, -1),
        GirthSpec::Zero => unreachable!(),
    };
    o.check_signs()?;
    let rf = p.root_face();
    let outer: Vec<Half> = p.outer_halves();
    let mut contour = vec![false; m.len()];
    let mut outer_vertex = vec![false; m.n_vertices()];
    for &h in &outer {
        contour[h] = true;
        contour[m.alpha(h)] = true;
        outer_vertex[m.vertex(h)] = true;
    }
    for h in 0..m.len() {
        if contour[h] {
            continue;
        }
        if !o.ingoing[h] && o.weight[h] < min_out {
            return Err(format!("outgoing half-edge {} has weight {} below {min_out}", h + 1, o.weight[h]));
        }
        if h < m.alpha(h) && o.edge_weight(m, h) != edge_w {
            return Err(format!("inner edge at half-edge {} has weight {}, expected {edge_w}", h + 1, o.edge_weight(m, h)));
        }
    }
    for (v, w) in o.vertex_weights(m).into_iter().enumerate() {
        if !outer_vertex[v] && w != vertex_w {
            return Err(format!("inner vertex {v} has weight {w}, expected {vertex_w}"));
        }
    }
    let degs = m.face_degrees();
    for (f, w) in o.face_weights(m).into_iter().enumerate() {
        if f == rf {
            continue;
        }
        let deg = degs[f] as i64;
        if Some(f) == special {
            let target = match spec {
                GirthSpec::Annular { p, q, .. } => p - q,
                GirthSpec::AnnularBipartite { r, s, .. } => r - s,
                _ => unreachable!(),
            };
            if w != target {
                return Err(format!("inner root face has weight {w}, expected {target}"));
            }
            continue;
        }
        let ok = match spec {
            GirthSpec::Plain(d) | GirthSpec::Annular { d, .. } => deg + w == d,
            GirthSpec::Bipartite(b) | GirthSpec::AnnularBipartite { b, .. } => deg % 2 == 0 && deg / 2 + w == b,
            GirthSpec::Zero => unreachable!(),
        };
        if !ok {
            return Err(format!("inner face {f} of degree {deg} has weight {w}"));
        }
    }
    Ok(())
}

/// Weight conditions of 0/(-2)-orientations rooted at vertex `v0`.
pub fn check_zero_constraints(m: &CombinatorialMap, o: &ZBiorientation, v0: usize) -> Result<(), String> {
    for h in 0..m.len() {
        let w = o.weight[h];
        if o.ingoing[h] && w < 0 || !o.ingoing[h] && !(w == -1 || w == -2) {
            return Err(format!("half-edge {} has weight {w} outside the allowed range", h + 1));
        }
        if h < m.alpha(h) && o.edge_weight(m, h) != -2 {
            return Err(format!("edge at half-edge {} has weight {}", h + 1, o.edge_weight(m, h)));
        }
    }
    for (v, w) in o.vertex_weights(m).into_iter().enumerate() {
        if v != v0 && w != 0 {
            return Err(format!("vertex {v} has weight {w}"));
        }
    }
    let degs = m.face_degrees();
    for (f, w) in o.face_weights(m).into_iter().enumerate() {
        if degs[f] as i64 + w != 0 {
            return Err(format!("face {f} has degree {} and weight {w}", degs[f]));
        }
    }
    Ok(())
}

/// An alpha/beta-orientation: vertex weights `alpha` (indexed by vertex) and
/// edge weights `beta` (indexed by half-edge, read on the smaller id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaBetaSpec {
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
}

/// Builds an N-biorientation with prescribed vertex and edge weights by
/// max-flow. On failure returns a vertex set `S` with
/// `sum_S alpha < sum_{E_S} beta`, or the empty set when the totals differ.
pub fn find_alpha_beta(m: &CombinatorialMap, spec: &AlphaBetaSpec) -> Result<ZBiorientation, OrientError> {
    let beta_of = |h: Half| spec.beta[h.min(m.alpha(h))];
    let total_alpha: u64 = spec.alpha.iter().sum();
    let total_beta: u64 = m.edge_reps().map(beta_of).sum();
    if total_alpha != total_beta {
        return Err(OrientError::GirthViolation { certificate: Vec::new() });
    }
    let mut g: DiGraph<(), u64> = DiGraph::new();
    let s = g.add_node(());
    let t = g.add_node(());
    let vnodes: Vec<NodeIndex> = (0..m.n_vertices()).map(|_| g.add_node(())).collect();
    for (v, &a) in spec.alpha.iter().enumerate() {
        g.add_edge(vnodes[v], t, a);
    }
    let big = total_beta + 1;
    // Arc carrying the weight of half-edge h, if any.
    let mut arc_of = vec![None; m.len()];
    for h in m.edge_reps() {
        let e = g.add_node(());
        g.add_edge(s, e, beta_of(h));
        arc_of[h] = Some(g.add_edge(e, vnodes[m.vertex(h)], big));
        if !m.is_loop(h) {
            arc_of[m.alpha(h)] = Some(g.add_edge(e, vnodes[m.vertex(m.alpha(h))], big));
        }
    }
    let (value, flows) = dinics(&g, s, t);
    if value == total_beta {
        let mut o = ZBiorientation::zeros(m.len());
        for h in 0..m.len() {
            if let Some(a) = arc_of[h] {
                o.set(h, flows[a.index()] as i64);
            }
        }
        return Ok(o);
    }
    // Residual reachability from the source gives a minimum cut.
    let mut seen = vec![false; g.node_count()];
    seen[s.index()] = true;
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        for e in g.edge_indices() {
            let (a, b) = g.edge_endpoints(e).unwrap();
            let cap = g[e];
            let f = flows[e.index()];
            if a == x && f < cap && !seen[b.index()] {
                seen[b.index()] = true;
                stack.push(b);
            }
            if b == x && f > 0 && !seen[a.index()] {
                seen[a.index()] = true;
                stack.push(a);
            }
        }
    }
    let certificate = (0..m.n_vertices()).filter(|&v| seen[vnodes[v].index()]).collect();
    Err(OrientError::GirthViolation { certificate })
}

/// Pushes counterclockwise circuits of an N-biorientation until none is
/// left. Vertex and edge weights are preserved.
pub fn make_minimal(p: &PlaneMap, o: &ZBiorientation) -> ZBiorientation {
    let m = &p.map;
    let mut o = o.clone();
    if m.is_empty() {
        return o;
    }
    let rf = p.root_face();
    for _ in 0..1_000_000 {
        let inside = ccw_interior(m, &o, rf);
        if !inside.contains(&true) {
            return o;
        }
        for h in 0..m.len() {
            let a = m.alpha(h);
            if inside[m.face(h)] && !inside[m.face(a)] {
                debug_assert!(o.ingoing[a]);
                let (wa, wh) = (o.weight[a] - 1, o.weight[h] + 1);
                o.set(a, wa);
                o.set(h, wh);
            }
        }
    }
    panic!("minimalization did not terminate");
}

/// Regular orientation of `Q_M` -> b/(b-1)-orientation of `M`.
pub fn sigma_map(
    p: &PlaneMap,
    q: &InnerQuadrangulation,
    x: &ZBiorientation,
    b: i64,
) -> Result<ZBiorientation, OrientError> {
    let m = &p.map;
    let n = m.len();
    let mut y = ZBiorientation { ingoing: x.ingoing[..n].to_vec(), weight: x.weight[..n].to_vec() };
    for g in 0..n {
        let Some(qh) = q.q_at_corner[g] else { continue };
        if x.ingoing[qh] {
            let a = m.alpha(g);
            if !(y.ingoing[g] && y.weight[g] == b - 1 && !y.ingoing[a] && y.weight[a] == 0) {
                return Err(OrientError::Invalid(format!("non-coherent orientation at half-edge {}", g + 1)));
            }
            y.set(g, b);
            y.set(a, -1);
        }
    }
    Ok(y)
}

/// Inverse of [`sigma_map`].
pub fn sigma_inverse(p: &PlaneMap, q: &InnerQuadrangulation, y: &ZBiorientation, b: i64) -> ZBiorientation {
    let m = &p.map;
    let mut x = ZBiorientation::zeros(q.qm.len());
    for h in 0..m.len() {
        x.ingoing[h] = y.ingoing[h];
        x.weight[h] = y.weight[h];
    }
    for g in 0..m.len() {
        let Some(qh) = q.q_at_corner[g] else { continue };
        let a = m.alpha(g);
        if y.weight[g] == b && y.weight[a] == -1 {
            x.set(g, b - 1);
            x.set(a, 0);
            x.set(qh, 1);
            x.set(q.qm.alpha(qh), 0);
        } else {
            x.set(qh, 0);
            x.set(q.qm.alpha(qh), 1);
        }
    }
    x
}

fn is_contour(p: &PlaneMap) -> Vec<bool> {
    let m = &p.map;
    let mut c = vec![false; m.len()];
    for h in p.outer_halves() {
        c[h] = true;
        c[m.alpha(h)] = true;
    }
    c
}

/// d/(d-1)-orientation of the subdivision -> d/(d-2)-orientation of `M`.
/// The subdivision must come from [`PlaneMap::subdivide`].
pub fn tau_map(p: &PlaneMap, y: &ZBiorientation, d: i64) -> Result<ZBiorientation, OrientError> {
    let m = &p.map;
    let n = m.len();
    let contour = is_contour(p);
    let mut o = ZBiorientation { ingoing: y.ingoing[..n].to_vec(), weight: y.weight[..n].to_vec() };
    for h in m.edge_reps() {
        if contour[h] {
            continue;
        }
        let a = m.alpha(h);
        match (o.weight[h], o.weight[a]) {
            (-1, w) if w == d => o.weight[h] = -2,
            (w, -1) if w == d => o.weight[a] = -2,
            (i, j) if i + j == d - 2 => {}
            (i, j) => {
                return Err(OrientError::Invalid(format!(
                    "contracted edge at half-edge {} has weights ({i}, {j})",
                    h + 1
                )))
            }
        }
    }
    Ok(o)
}

/// Inverse of [`tau_map`], producing an orientation of `p.subdivide()`.
pub fn tau_inverse(p: &PlaneMap, o: &ZBiorientation, d: i64) -> ZBiorientation {
    let m = &p.map;
    let n = m.len();
    let contour = is_contour(p);
    let mut y = ZBiorientation::zeros(2 * n);
    for h in 0..n {
        let a = m.alpha(h);
        let mut w = o.weight[h];
        if !contour[h] && w == -2 && o.weight[a] == d {
            w = -1;
        }
        y.ingoing[h] = o.ingoing[h];
        y.weight[h] = w;
        let total = if contour[h] { 1 } else { d - 1 };
        y.set(n + h, total - w);
    }
    y
}

/// Halves (or doubles) the weights of all inner half-edges.
pub fn halve(p: &PlaneMap, o: &ZBiorientation) -> Result<ZBiorientation, OrientError> {
    let contour = is_contour(p);
    let mut r = o.clone();
    for h in 0..o.len() {
        if !contour[h] {
            if o.weight[h] % 2 != 0 {
                return Err(OrientError::Invalid(format!("odd weight on half-edge {}", h + 1)));
            }
            r.weight[h] = o.weight[h] / 2;
        }
    }
    Ok(r)
}

pub fn double(p: &PlaneMap, o: &ZBiorientation) -> ZBiorientation {
    let contour = is_contour(p);
    let mut r = o.clone();
    for h in 0..o.len() {
        if !contour[h] {
            r.weight[h] *= 2;
        }
    }
    r
}

/// Regular orientation pipeline for bipartite maps and b >= 2. `rs` carries
/// the annular parameters `(r, s)`.
fn regular_pipeline(p: &PlaneMap, inner: Option<Half>, b: i64, r: Option<i64>) -> Result<ZBiorientation, OrientError> {
    let m = &p.map;
    let q = InnerQuadrangulation::new(p, inner);
    let qm = &q.qm;
    let contour = is_contour(p);
    let mut alpha = vec![0u64; qm.n_vertices()];
    let mut outer_vertex = vec![false; m.n_vertices()];
    for h in p.outer_halves() {
        outer_vertex[m.vertex(h)] = true;
    }
    for h in 0..m.len() {
        let v = qm.vertex(h);
        alpha[v] = if outer_vertex[m.vertex(h)] { 1 } else { b as u64 };
    }
    let degs = m.face_degrees();
    for (f, fv) in q.face_vertex.iter().enumerate() {
        if let Some(fv) = *fv {
            let extra = if Some(fv) == q.special { r.unwrap() } else { b };
            alpha[fv] = (degs[f] / 2) as u64 + extra as u64;
        }
    }
    let mut beta = vec![0u64; qm.len()];
    for (h, bt) in beta.iter_mut().enumerate() {
        *bt = if h >= m.len() || contour[h] { 1 } else { (b - 1) as u64 };
    }
    let x = find_alpha_beta(qm, &AlphaBetaSpec { alpha, beta })?;
    let qp = PlaneMap { map: qm.clone(), root: p.root };
    let x = make_minimal(&qp, &x);
    sigma_map(p, &q, &x, b)
}

fn bipartite_orientation(p: &PlaneMap, inner: Option<Half>, b: i64, rs: Option<(i64, i64)>) -> Result<ZBiorientation, OrientError> {
    if b >= 2 {
        regular_pipeline(p, inner, b, rs.map(|(r, _)| r))
    } else {
        let o = general_orientation(p, inner, 2, rs.map(|(r, s)| (2 * r, 2 * s)))?;
        halve(p, &o)
    }
}

fn general_orientation(p: &PlaneMap, inner: Option<Half>, d: i64, pq: Option<(i64, i64)>) -> Result<ZBiorientation, OrientError> {
    let sub = p.subdivide();
    let y = bipartite_orientation(&sub.plane, inner, d, pq)?;
    tau_map(p, &y, d)
}

/// The unique suitable orientation of `p` in the family `spec`.
pub fn suitable_orientation(p: &PlaneMap, inner: Option<Half>, spec: GirthSpec) -> Result<ZBiorientation, OrientError> {
    spec.validate()?;
    let m = &p.map;
    if let GirthSpec::Zero = spec {
        return Ok(geodesic_biorientation(m, if m.is_empty() { 0 } else { m.vertex(p.root) }));
    }
    if m.is_empty() {
        return Err(OrientError::Class("the vertex map has no root face of positive degree".into()));
    }
    if p.outer_degree() != spec.outer_degree() {
        return Err(OrientError::Class(format!(
            "root face has degree {}, expected {}",
            p.outer_degree(),
            spec.outer_degree()
        )));
    }
    let special = match (spec.inner_root_degree(), inner) {
        (Some(q), Some(i)) => {
            if m.face(i) == p.root_face() || m.face_orbit(i).len() != q {
                return Err(OrientError::Class(format!("inner root face must have degree {q}")));
            }
            Some(m.face(i))
        }
        (None, None) => None,
        _ => return Err(OrientError::Invalid("inner root face does not match the family".into())),
    };
    if spec.is_bipartite() && !m.is_bipartite() {
        return Err(OrientError::Class("map is not bipartite".into()));
    }
    let rf = p.root_face();
    for (f, deg) in m.face_degrees().into_iter().enumerate() {
        if f != rf && Some(f) != special && deg < spec.min_face_degree() {
            return Err(OrientError::Class(format!("inner face of degree {deg} below {}", spec.min_face_degree())));
        }
    }
    let o = match spec {
        GirthSpec::Plain(d) => general_orientation(p, None, d, None)?,
        GirthSpec::Annular { d, p: pp, q } => general_orientation(p, inner, d, Some((pp, q)))?,
        GirthSpec::Bipartite(b) => bipartite_orientation(p, None, b, None)?,
        GirthSpec::AnnularBipartite { b, r, s } => bipartite_orientation(p, inner, b, Some((r, s)))?,
        GirthSpec::Zero => unreachable!(),
    };
    let flags = classify(p, &o)?;
    if !flags.suitable {
        return Err(OrientError::Class(format!("pipeline output is not suitable: {flags:?}")));
    }
    check_constraints(p, inner, &o, spec).map_err(OrientError::Class)?;
    Ok(o)
}

pub fn suitable_orientation_annular(a: &AnnularMap, spec: GirthSpec) -> Result<ZBiorientation, OrientError> {
    suitable_orientation(&a.plane, Some(a.inner), spec)
}

/// Geodesic biorientation: edges between vertices at equal distance from
/// `v0` are 0-way with weights (-1, -1); the others are 1-way toward the
/// farther endpoint with weights (-2, 0).
pub fn geodesic_biorientation(m: &CombinatorialMap, v0: usize) -> ZBiorientation {
    let mut o = ZBiorientation::zeros(m.len());
    if m.is_empty() {
        return o;
    }
    let dist = m.distances_from(v0);
    for h in 0..m.len() {
        let (du, dv) = (dist[m.vertex(h)], dist[m.vertex(m.alpha(h))]);
        if du == dv {
            o.weight[h] = -1;
        } else if du < dv {
            o.weight[h] = -2;
        } else {
            o.ingoing[h] = true;
            o.weight[h] = 0;
        }
    }
    o
}

/// Faces on the left of a closed walk given by the half-edges it leaves
/// along, as flood fill from the first face without crossing walk edges.
fn left_side(m: &CombinatorialMap, walk: &[Half]) -> Vec<bool> {
    let mut blocked = vec![false; m.len()];
    for &h in walk {
        blocked[h] = true;
        blocked[m.alpha(h)] = true;
    }
    let mut seen = vec![false; m.n_faces()];
    let start = m.face(walk[0]);
    seen[start] = true;
    let mut stack = vec![start];
    let faces = m.faces();
    while let Some(f) = stack.pop() {
        for &h in &faces[f] {
            let g = m.face(m.alpha(h));
            if !blocked[h] && !seen[g] {
                seen[g] = true;
                stack.push(g);
            }
        }
    }
    seen
}

/// Suitable 1/(-1)-orientation of a member of `C_1` built from its rightmost
/// BFS tree. BFS trees are searched exhaustively.
pub fn rightmost_bfs_orientation(c: &PlaneMap) -> Result<ZBiorientation, OrientError> {
    let m = &c.map;
    let y = c.root;
    if m.is_empty() || m.phi(y) != y {
        return Err(OrientError::Invalid("not a member of C_1".into()));
    }
    let x = m.alpha(y);
    let v0 = m.vertex(y);
    let dist = m.distances_from(v0);
    let nv = m.n_vertices();
    // Candidate parent half-edges (at the child) for each vertex.
    let mut cands: Vec<Vec<Half>> = vec![Vec::new(); nv];
    for h in 0..m.len() {
        let (v, u) = (m.vertex(h), m.vertex(m.alpha(h)));
        if dist[u] + 1 == dist[v] {
            cands[v].push(h);
        }
    }
    let others: Vec<usize> = (0..nv).filter(|&v| v != v0).collect();
    let mut choice = vec![0usize; others.len()];
    let mut found: Option<Vec<Option<Half>>> = None;
    loop {
        let mut parent: Vec<Option<Half>> = vec![None; nv];
        for (i, &v) in others.iter().enumerate() {
            parent[v] = Some(cands[v][choice[i]]);
        }
        if tree_is_rightmost(m, &parent, &dist, y, x, v0) {
            if found.is_some() {
                return Err(OrientError::Invalid("rightmost BFS tree is not unique".into()));
            }
            found = Some(parent);
        }
        // next combination
        let mut i = 0;
        loop {
            if i == others.len() {
                let parent = found.ok_or_else(|| OrientError::Invalid("no rightmost BFS tree".into()))?;
                return Ok(bfs_orientation(m, &parent, &dist, y, x, v0));
            }
            choice[i] += 1;
            if choice[i] < cands[others[i]].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Path from `v` up to the root as half-edges leaving each vertex toward its
/// parent.
fn path_to_root(m: &CombinatorialMap, parent: &[Option<Half>], mut v: usize) -> Vec<Half> {
    let mut out = Vec::new();
    while let Some(h) = parent[v] {
        out.push(h);
        v = m.vertex(m.alpha(h));
    }
    out
}

/// Orientation of a non-tree edge: the half-edge leaving the tail when the
/// fundamental cycle is walked with the root face on its left.
fn left_to_right_tail(m: &CombinatorialMap, parent: &[Option<Half>], h: Half, root_face: usize) -> Half {
    let (u, w) = (m.vertex(h), m.vertex(m.alpha(h)));
    // cycle: h from u to w, then w up to the common ancestor, then down to u
    let up_w = path_to_root(m, parent, w);
    let up_u = path_to_root(m, parent, u);
    let mut a = up_w.len();
    let mut b = up_u.len();
    while a > 0 && b > 0 && up_w[a - 1] == up_u[b - 1] {
        a -= 1;
        b -= 1;
    }
    let mut walk = vec![h];
    walk.extend_from_slice(&up_w[..a]);
    walk.extend(up_u[..b].iter().rev().map(|&g| m.alpha(g)));
    if left_side(m, &walk)[root_face] { h } else { m.alpha(h) }
}

fn tree_is_rightmost(m: &CombinatorialMap, parent: &[Option<Half>], dist: &[usize], y: Half, x: Half, _v0: usize) -> bool {
    let mut in_tree = vec![false; m.len()];
    for h in parent.iter().flatten() {
        in_tree[*h] = true;
        in_tree[m.alpha(*h)] = true;
    }
    let rf = m.face(y);
    for h in m.edge_reps() {
        if in_tree[h] || h == x || h == y {
            continue;
        }
        let tail = left_to_right_tail(m, parent, h, rf);
        if dist[m.vertex(tail)] > dist[m.vertex(m.alpha(tail))] {
            return false;
        }
    }
    true
}

fn bfs_orientation(m: &CombinatorialMap, parent: &[Option<Half>], dist: &[usize], y: Half, x: Half, _v0: usize) -> ZBiorientation {
    let mut o = ZBiorientation::zeros(m.len());
    let mut in_tree = vec![false; m.len()];
    for &h in parent.iter().flatten() {
        in_tree[h] = true;
        in_tree[m.alpha(h)] = true;
        o.set(h, 1);
        o.set(m.alpha(h), -2);
    }
    o.set(y, 0);
    o.set(x, 1);
    let rf = m.face(y);
    for h in m.edge_reps() {
        if in_tree[h] || h == x || h == y {
            continue;
        }
        let tail = left_to_right_tail(m, parent, h, rf);
        let head = m.alpha(tail);
        if dist[m.vertex(tail)] == dist[m.vertex(head)] {
            o.set(tail, 0);
            o.set(head, -1);
        } else {
            o.set(tail, -1);
            o.set(head, 0);
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> PlaneMap {
        let m = CombinatorialMap::from_cycles(6, &[vec![0, 5], vec![1, 2], vec![3, 4]]).unwrap();
        PlaneMap { map: m, root: 0 }
    }

    fn digon() -> PlaneMap {
        PlaneMap { map: CombinatorialMap::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap(), root: 0 }
    }

    #[test]
    fn triangle_plain3() {
        let t = triangle();
        let o = suitable_orientation(&t, None, GirthSpec::Plain(3)).unwrap();
        assert!(classify(&t, &o).unwrap().suitable);
        assert!(suitable_orientation(&t, None, GirthSpec::Plain(4)).is_err());
        assert!(check_constraints(&t, None, &o, GirthSpec::Plain(4)).is_err());
    }

    #[test]
    fn digon_specs() {
        let d = digon();
        let o = suitable_orientation(&d, None, GirthSpec::Plain(2)).unwrap();
        let b = suitable_orientation(&d, None, GirthSpec::Bipartite(1)).unwrap();
        assert_eq!(double(&d, &b), o);
        let inner = (0..4).find(|&h| d.map.face(h) != d.root_face()).unwrap();
        let a = suitable_orientation(&d, Some(inner), GirthSpec::Annular { d: 2, p: 2, q: 2 }).unwrap();
        assert_eq!(a.face_weights(&d.map)[d.map.face(inner)], 0);
    }

    #[test]
    fn flow_examples() {
        let link = CombinatorialMap::from_cycles(2, &[vec![0], vec![1]]).unwrap();
        let spec = AlphaBetaSpec { alpha: vec![2, 0], beta: vec![1, 1] };
        assert!(matches!(find_alpha_beta(&link, &spec), Err(OrientError::GirthViolation { .. })));
        // path a - b - c
        let path = CombinatorialMap::from_cycles(4, &[vec![0], vec![1, 2], vec![3]]).unwrap();
        let mid = path.vertex(1);
        let mut alpha = vec![0; 3];
        alpha[mid] = 2;
        let o = find_alpha_beta(&path, &AlphaBetaSpec { alpha, beta: vec![1; 4] }).unwrap();
        assert!(o.ingoing[1] && o.ingoing[2] && !o.ingoing[0] && !o.ingoing[3]);
    }

    #[test]
    fn reversed_contour_is_not_minimal() {
        let t = triangle();
        let o = suitable_orientation(&t, None, GirthSpec::Plain(3)).unwrap();
        let mut r = o.clone();
        for h in 0..6 {
            r.ingoing[h] = !o.ingoing[h];
            r.weight[h] = if r.ingoing[h] { 1 } else { 0 };
        }
        assert!(!classify(&t, &r).unwrap().minimal);
    }

    #[test]
    fn geodesic_examples() {
        let link = CombinatorialMap::from_cycles(2, &[vec![0], vec![1]]).unwrap();
        let o = geodesic_biorientation(&link, link.vertex(0));
        assert_eq!((o.weight[0], o.ingoing[1], o.weight[1]), (-2, true, 0));
        let t = triangle();
        let v0 = t.map.vertex(0);
        let o = geodesic_biorientation(&t.map, v0);
        assert!(check_zero_constraints(&t.map, &o, v0).is_ok());
        assert!(classify_vertex_rooted(&t.map, &o, v0).suitable);
    }

    #[test]
    fn tau_round_trip_on_triangle() {
        let t = triangle();
        let o = suitable_orientation(&t, None, GirthSpec::Plain(3)).unwrap();
        let y = tau_inverse(&t, &o, 3);
        assert_eq!(tau_map(&t, &y, 3).unwrap(), o);
    }
}
