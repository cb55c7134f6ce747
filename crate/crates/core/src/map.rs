//! Combinatorial maps: half-edges with an edge involution `alpha` and a vertex
//! rotation `sigma`. Faces are the orbits of `phi = sigma . alpha`.
//!
//! Half-edges are dense indices `0..2E` in memory and `1..2E` in files.
//! The map with no half-edge is the vertex map (one vertex, one face).
//!
//! Orientation convention: `sigma(h)` is the next half-edge clockwise around
//! the vertex of `h`, so that the face `phi`-orbit of `h` lies on the left of
//! `h` when walking away from its vertex. The corner `c(g)` is the corner
//! between `sigma^-1(g)` and `g`; it lies in the face of `g`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Half = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("alpha and sigma have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("the number of half-edges is odd")]
    OddSize,
    #[error("{0} is not a permutation")]
    NotPermutation(&'static str),
    #[error("alpha is not a fixed-point-free involution at half-edge {}", .0 + 1)]
    BadAlpha(usize),
    #[error("the map is disconnected")]
    Disconnected,
    #[error("non-planar: V - E + F = {0}")]
    NonPlanar(i64),
    #[error("dangling root reference {0}")]
    DanglingRoot(usize),
    #[error("{0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMap {
    alpha: Vec<Half>,
    sigma: Vec<Half>,
    sigma_inv: Vec<Half>,
    phi: Vec<Half>,
    phi_inv: Vec<Half>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    n_vertices: usize,
    n_faces: usize,
}

fn inverse(p: &[usize], name: &'static str) -> Result<Vec<usize>, MapError> {
    let mut inv = vec![usize::MAX; p.len()];
    for (i, &j) in p.iter().enumerate() {
        if j >= p.len() || inv[j] != usize::MAX {
            return Err(MapError::NotPermutation(name));
        }
        inv[j] = i;
    }
    Ok(inv)
}

/// Orbit ids of a permutation, numbered by first appearance in `0..n`.
fn orbit_ids(p: &[usize]) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; p.len()];
    let mut k = 0;
    for s in 0..p.len() {
        if id[s] != usize::MAX {
            continue;
        }
        let mut h = s;
        while id[h] == usize::MAX {
            id[h] = k;
            h = p[h];
        }
        k += 1;
    }
    (id, k)
}

impl CombinatorialMap {
    /// Builds and validates a map. Fails on the first violated invariant.
    pub fn new(alpha: Vec<Half>, sigma: Vec<Half>) -> Result<Self, MapError> {
        let m = Self::new_unchecked_genus(alpha, sigma)?;
        let chi = m.euler_characteristic();
        if chi != 2 {
            return Err(MapError::NonPlanar(chi));
        }
        Ok(m)
    }

    /// Validates everything except the genus.
    pub fn new_unchecked_genus(alpha: Vec<Half>, sigma: Vec<Half>) -> Result<Self, MapError> {
        if alpha.len() != sigma.len() {
            return Err(MapError::LengthMismatch(alpha.len(), sigma.len()));
        }
        let n = alpha.len();
        if n % 2 == 1 {
            return Err(MapError::OddSize);
        }
        for h in 0..n {
            if alpha[h] >= n || alpha[h] == h || alpha[alpha[h]] != h {
                return Err(MapError::BadAlpha(h));
            }
        }
        let sigma_inv = inverse(&sigma, "sigma")?;
        let phi: Vec<Half> = (0..n).map(|h| sigma[alpha[h]]).collect();
        let phi_inv = inverse(&phi, "phi")?;
        let (vertex_of, mut n_vertices) = orbit_ids(&sigma);
        let (face_of, mut n_faces) = orbit_ids(&phi);
        if n == 0 {
            n_vertices = 1;
            n_faces = 1;
        }
        let m = CombinatorialMap { alpha, sigma, sigma_inv, phi, phi_inv, vertex_of, face_of, n_vertices, n_faces };
        if !m.is_connected() {
            return Err(MapError::Disconnected);
        }
        Ok(m)
    }

    /// The map with a single vertex and no edge.
    pub fn vertex_map() -> Self {
        Self::new(Vec::new(), Vec::new()).expect("vertex map")
    }

    /// Builds a map from vertex cycles (rotation order) and the convention
    /// that half-edges `2k` and `2k+1` form an edge.
    pub fn from_cycles(n: usize, cycles: &[Vec<Half>]) -> Result<Self, MapError> {
        let alpha = (0..n).map(|h| h ^ 1).collect();
        let mut sigma = vec![usize::MAX; n];
        for c in cycles {
            for (i, &h) in c.iter().enumerate() {
                if h >= n || sigma[h] != usize::MAX {
                    return Err(MapError::NotPermutation("sigma"));
                }
                sigma[h] = c[(i + 1) % c.len()];
            }
        }
        if sigma.contains(&usize::MAX) {
            return Err(MapError::NotPermutation("sigma"));
        }
        Self::new(alpha, sigma)
    }

    fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(h) = stack.pop() {
            for x in [self.sigma[h], self.alpha[h]] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        count == n
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges() as i64 + self.n_faces as i64
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_faces(&self) -> usize {
        self.n_faces
    }

    #[inline]
    pub fn alpha(&self, h: Half) -> Half {
        self.alpha[h]
    }

    #[inline]
    pub fn sigma(&self, h: Half) -> Half {
        self.sigma[h]
    }

    #[inline]
    pub fn sigma_inv(&self, h: Half) -> Half {
        self.sigma_inv[h]
    }

    #[inline]
    pub fn phi(&self, h: Half) -> Half {
        self.phi[h]
    }

    #[inline]
    pub fn phi_inv(&self, h: Half) -> Half {
        self.phi_inv[h]
    }

    #[inline]
    pub fn vertex(&self, h: Half) -> usize {
        self.vertex_of[h]
    }

    #[inline]
    pub fn face(&self, h: Half) -> usize {
        self.face_of[h]
    }

    pub fn alpha_slice(&self) -> &[Half] {
        &self.alpha
    }

    pub fn sigma_slice(&self) -> &[Half] {
        &self.sigma
    }

    /// Orbit of `h` under `p`, starting at `h`.
    fn orbit(&self, h: Half, p: &[Half]) -> Vec<Half> {
        let mut out = vec![h];
        let mut x = p[h];
        while x != h {
            out.push(x);
            x = p[x];
        }
        out
    }

    /// Half-edges around the vertex of `h`, clockwise, starting at `h`.
    pub fn vertex_orbit(&self, h: Half) -> Vec<Half> {
        self.orbit(h, &self.sigma)
    }

    /// Half-edges of the face of `h` in `phi` order, starting at `h`.
    pub fn face_orbit(&self, h: Half) -> Vec<Half> {
        self.orbit(h, &self.phi)
    }

    /// One orbit per vertex, indexed by vertex id.
    pub fn vertices(&self) -> Vec<Vec<Half>> {
        let mut out = vec![Vec::new(); if self.is_empty() { 0 } else { self.n_vertices }];
        for (v, orbit) in out.iter_mut().enumerate() {
            let first = (0..self.len()).find(|&h| self.vertex_of[h] == v).unwrap();
            *orbit = self.vertex_orbit(first);
        }
        out
    }

    /// One orbit per face, indexed by face id.
    pub fn faces(&self) -> Vec<Vec<Half>> {
        let mut out = vec![Vec::new(); if self.is_empty() { 0 } else { self.n_faces }];
        for (f, orbit) in out.iter_mut().enumerate() {
            let first = (0..self.len()).find(|&h| self.face_of[h] == f).unwrap();
            *orbit = self.face_orbit(first);
        }
        out
    }

    pub fn face_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; if self.is_empty() { 1 } else { self.n_faces }];
        for &f in &self.face_of {
            d[f] += 1;
        }
        d
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; if self.is_empty() { 1 } else { self.n_vertices }];
        for &v in &self.vertex_of {
            d[v] += 1;
        }
        d
    }

    /// Edge representatives `h < alpha(h)`, in increasing order.
    pub fn edge_reps(&self) -> impl Iterator<Item = Half> + '_ {
        (0..self.len()).filter(move |&h| h < self.alpha[h])
    }

    pub fn is_loop(&self, h: Half) -> bool {
        self.vertex_of[h] == self.vertex_of[self.alpha[h]]
    }

    pub fn is_bipartite(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut color = vec![u8::MAX; self.n_vertices];
        color[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut adj = vec![Vec::new(); self.n_vertices];
        for h in 0..self.len() {
            adj[self.vertex_of[h]].push(self.vertex_of[self.alpha[h]]);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
        true
    }

    /// Length of a shortest cycle, `None` for trees.
    pub fn girth(&self) -> Option<usize> {
        if self.edge_reps().any(|h| self.is_loop(h)) {
            return Some(1);
        }
        let nv = self.n_vertices;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for h in 0..self.len() {
            adj[self.vertex_of[h]].push((self.vertex_of[self.alpha[h]], h.min(self.alpha[h])));
        }
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; nv];
        for e in self.edge_reps() {
            let (u, v) = (self.vertex_of[e], self.vertex_of[self.alpha[e]]);
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[u] = 0;
            let mut queue = VecDeque::from([u]);
            while let Some(x) = queue.pop_front() {
                if x == v || best.is_some_and(|b| dist[x] + 1 >= b) {
                    break;
                }
                for &(y, id) in &adj[x] {
                    if id != e && dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if dist[v] != usize::MAX {
                let len = dist[v] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }

    /// Distances from vertex `v` in the underlying graph.
    pub fn distances_from(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n_vertices];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let verts = self.vertices();
        while let Some(x) = queue.pop_front() {
            for &h in &verts[x] {
                let y = self.vertex_of[self.alpha[h]];
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Applies a relabeling `h -> perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.len();
        let mut alpha = vec![0; n];
        let mut sigma = vec![0; n];
        for h in 0..n {
            alpha[perm[h]] = perm[self.alpha[h]];
            sigma[perm[h]] = perm[self.sigma[h]];
        }
        Self::new(alpha, sigma).expect("relabeling preserves validity")
    }

    /// Canonical code of the map rooted at half-edge `root`, plus the labels
    /// assigned to every half-edge.
    pub fn rooted_code_with_labels(&self, root: Half) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        if n == 0 {
            return (vec![0], Vec::new());
        }
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[root] = 0;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for x in [self.sigma[h], self.alpha[h]] {
                if label[x] == u32::MAX {
                    label[x] = order.len() as u32;
                    order.push(x);
                }
            }
            i += 1;
        }
        let mut code = Vec::with_capacity(2 * n + 1);
        code.push(n as u32);
        for &h in &order {
            code.push(label[self.sigma[h]]);
            code.push(label[self.alpha[h]]);
        }
        (code, label)
    }

    pub fn rooted_code(&self, root: Half) -> Vec<u32> {
        self.rooted_code_with_labels(root).0
    }

    pub fn dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..if self.is_empty() { 1 } else { self.n_vertices } {
            let _ = writeln!(s, "  v{v};");
        }
        for h in self.edge_reps() {
            let _ = writeln!(
                s,
                "  v{} -- v{} [label=\"{}/{}\"];",
                self.vertex_of[h],
                self.vertex_of[self.alpha[h]],
                h + 1,
                self.alpha[h] + 1
            );
        }
        s.push_str("}\n");
        s
    }
}

/// A map with a root face, given by a half-edge on its left. The same
/// half-edge also marks the root corner `c(root)` when the map is rooted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMap {
    pub map: CombinatorialMap,
    pub root: Half,
}

/// A plane map with a second marked face, the inner root face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnularMap {
    pub plane: PlaneMap,
    pub inner: Half,
}

impl PlaneMap {
    pub fn new(map: CombinatorialMap, root: Half) -> Result<Self, MapError> {
        if !map.is_empty() && root >= map.len() {
            return Err(MapError::DanglingRoot(root + 1));
        }
        Ok(PlaneMap { map, root })
    }

    pub fn vertex_map() -> Self {
        PlaneMap { map: CombinatorialMap::vertex_map(), root: 0 }
    }

    pub fn root_face(&self) -> usize {
        if self.map.is_empty() { 0 } else { self.map.face(self.root) }
    }

    pub fn outer_degree(&self) -> usize {
        if self.map.is_empty() { 0 } else { self.map.face_orbit(self.root).len() }
    }

    /// Half-edges of the root face in `phi` order from the root.
    pub fn outer_halves(&self) -> Vec<Half> {
        if self.map.is_empty() { Vec::new() } else { self.map.face_orbit(self.root) }
    }

    pub fn is_outer_vertex(&self, v: usize) -> bool {
        self.outer_halves().iter().any(|&h| self.map.vertex(h) == v)
    }

    /// Degrees of the non-root faces, sorted.
    pub fn inner_face_degrees(&self) -> Vec<usize> {
        let rf = self.root_face();
        let mut d: Vec<usize> = self
            .map
            .face_degrees()
            .into_iter()
            .enumerate()
            .filter(|&(f, _)| f != rf || self.map.is_empty())
            .map(|(_, d)| d)
            .collect();
        if self.map.is_empty() {
            d.clear();
        }
        d.sort_unstable();
        d
    }

    /// Code of the map rooted at its root corner.
    pub fn rooted_code(&self) -> Vec<u32> {
        self.map.rooted_code(self.root)
    }

    /// Code invariant under the choice of corner in the root face.
    pub fn plane_code(&self) -> Vec<u32> {
        if self.map.is_empty() {
            return vec![0];
        }
        self.outer_halves().into_iter().map(|h| self.map.rooted_code(h)).min().unwrap()
    }

    pub fn with_root(&self, root: Half) -> PlaneMap {
        PlaneMap { map: self.map.clone(), root }
    }

    /// Standard duality: `sigma* = phi^-1`. The marked vertex is the dual of
    /// the root face.
    pub fn dual(&self) -> (CombinatorialMap, usize) {
        let n = self.map.len();
        let alpha = self.map.alpha.clone();
        let sigma = (0..n).map(|h| self.map.phi_inv(h)).collect();
        let d = CombinatorialMap::new(alpha, sigma).expect("dual of a planar map is planar");
        let v = if n == 0 { 0 } else { d.vertex(self.root) };
        (d, v)
    }

    /// Inserts a vertex in the middle of every edge. Original half-edges keep
    /// their ids; half-edge `h` is now paired with `n + h`, which sits at the
    /// edge-vertex of the edge of `h`.
    pub fn subdivide(&self) -> Subdivision {
        let n = self.map.len();
        let mut alpha = vec![0; 2 * n];
        let mut sigma = vec![0; 2 * n];
        for h in 0..n {
            alpha[h] = n + h;
            alpha[n + h] = h;
            sigma[h] = self.map.sigma(h);
            sigma[n + h] = n + self.map.alpha(h);
        }
        let map = CombinatorialMap::new(alpha, sigma).expect("subdivision is planar");
        let edge_vertex = self.map.edge_reps().map(|h| map.vertex(n + h)).collect();
        Subdivision { plane: PlaneMap { map, root: self.root }, original_len: n, edge_vertex }
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub plane: PlaneMap,
    pub original_len: usize,
    /// Edge-vertex of each original edge, in `edge_reps` order.
    pub edge_vertex: Vec<usize>,
}

impl AnnularMap {
    pub fn new(plane: PlaneMap, inner: Half) -> Result<Self, MapError> {
        if inner >= plane.map.len() {
            return Err(MapError::DanglingRoot(inner + 1));
        }
        if plane.map.face(inner) == plane.root_face() {
            return Err(MapError::Format("inner root face equals the root face".into()));
        }
        Ok(AnnularMap { plane, inner })
    }

    pub fn inner_face(&self) -> usize {
        self.plane.map.face(self.inner)
    }

    pub fn inner_degree(&self) -> usize {
        self.plane.map.face_orbit(self.inner).len()
    }

    /// Degrees of the faces other than both root faces, sorted.
    pub fn other_face_degrees(&self) -> Vec<usize> {
        let (r, i) = (self.plane.root_face(), self.inner_face());
        let mut d: Vec<usize> = self
            .plane
            .map
            .face_degrees()
            .into_iter()
            .enumerate()
            .filter(|&(f, _)| f != r && f != i)
            .map(|(_, d)| d)
            .collect();
        d.sort_unstable();
        d
    }

    /// Code with both root corners fixed.
    pub fn rooted_code(&self) -> Vec<u32> {
        let (mut code, label) = self.plane.map.rooted_code_with_labels(self.plane.root);
        code.push(label[self.inner]);
        code
    }

    /// Code invariant under the choice of corners in both root faces.
    pub fn plane_code(&self) -> Vec<u32> {
        let inner = self.plane.map.face_orbit(self.inner);
        self.plane
            .outer_halves()
            .into_iter()
            .map(|h| {
                let (mut code, label) = self.plane.map.rooted_code_with_labels(h);
                code.push(inner.iter().map(|&x| label[x]).min().unwrap());
                code
            })
            .min()
            .unwrap()
    }

    /// Separating and non-separating girths. A cycle separates when the two
    /// root faces lie on different sides of it.
    pub fn girths(&self) -> AnnularGirths {
        let m = &self.plane.map;
        let mut sep: Option<usize> = None;
        let mut non_sep: Option<usize> = None;
        for cycle in simple_cycles(m) {
            let len = cycle.len();
            let mut on_cycle = vec![false; m.len()];
            for &h in &cycle {
                on_cycle[h] = true;
                on_cycle[m.alpha(h)] = true;
            }
            let separating = !faces_connected(m, &on_cycle, self.plane.root_face(), self.inner_face());
            let slot = if separating { &mut sep } else { &mut non_sep };
            *slot = Some(slot.map_or(len, |b: usize| b.min(len)));
        }
        AnnularGirths { separating: sep, non_separating: non_sep }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnularGirths {
    pub separating: Option<usize>,
    pub non_separating: Option<usize>,
}

/// Whether faces `a` and `b` are joined by a path of faces crossing only
/// edges that are not blocked.
fn faces_connected(m: &CombinatorialMap, blocked: &[bool], a: usize, b: usize) -> bool {
    let mut seen = vec![false; m.n_faces()];
    let mut stack = vec![a];
    seen[a] = true;
    let faces = m.faces();
    while let Some(f) = stack.pop() {
        if f == b {
            return true;
        }
        for &h in &faces[f] {
            if blocked[h] {
                continue;
            }
            let g = m.face(m.alpha(h));
            if !seen[g] {
                seen[g] = true;
                stack.push(g);
            }
        }
    }
    false
}

/// All simple cycles of the underlying multigraph, each once, as lists of
/// half-edges walked along the cycle.
pub fn simple_cycles(m: &CombinatorialMap) -> Vec<Vec<Half>> {
    let mut out = Vec::new();
    for h in m.edge_reps() {
        if m.is_loop(h) {
            out.push(vec![h]);
        }
    }
    let verts = m.vertices();
    let nv = verts.len();
    // Cycles whose smallest vertex is `s`, walked from `s`; each cycle of
    // length >= 2 is found in both directions, keep the one whose first
    // half-edge id is smaller than the last edge's id.
    for s in 0..nv {
        let mut on_path = vec![false; nv];
        on_path[s] = true;
        let mut path: Vec<Half> = Vec::new();
        fn rec(
            m: &CombinatorialMap,
            verts: &[Vec<Half>],
            s: usize,
            v: usize,
            on_path: &mut Vec<bool>,
            path: &mut Vec<Half>,
            out: &mut Vec<Vec<Half>>,
        ) {
            for &h in &verts[v] {
                if m.is_loop(h) {
                    continue;
                }
                if let Some(&last) = path.last() {
                    if m.alpha(last) == h {
                        continue;
                    }
                }
                let w = m.vertex(m.alpha(h));
                if w == s {
                    if !path.is_empty() {
                        let first = path[0].min(m.alpha(path[0]));
                        let closing = h.min(m.alpha(h));
                        if first < closing {
                            let mut c = path.clone();
                            c.push(h);
                            out.push(c);
                        }
                    }
                } else if w > s && !on_path[w] {
                    on_path[w] = true;
                    path.push(h);
                    rec(m, verts, s, w, on_path, path, out);
                    path.pop();
                    on_path[w] = false;
                }
            }
        }
        rec(m, &verts, s, s, &mut on_path, &mut path, &mut out);
    }
    out
}

/// Map file (JSON). Half-edge ids are 1-based.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapFile {
    pub half_edges: usize,
    pub alpha: Vec<[usize; 2]>,
    pub sigma: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_half_edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_root_half_edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_corner: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_root_corner: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedMap {
    Plane(PlaneMap),
    Annular(AnnularMap),
}

impl ParsedMap {
    pub fn plane(&self) -> &PlaneMap {
        match self {
            ParsedMap::Plane(p) => p,
            ParsedMap::Annular(a) => &a.plane,
        }
    }
}

impl MapFile {
    pub fn from_map(map: &CombinatorialMap, root: Option<Half>, inner: Option<Half>) -> Self {
        let mut sigma: Vec<Vec<usize>> = map
            .vertices()
            .into_iter()
            .map(|orbit| {
                let k = orbit.iter().enumerate().min_by_key(|&(_, &h)| h).map(|(i, _)| i).unwrap();
                orbit[k..].iter().chain(&orbit[..k]).map(|&h| h + 1).collect()
            })
            .collect();
        sigma.sort();
        MapFile {
            half_edges: map.len(),
            alpha: map.edge_reps().map(|h| [h + 1, map.alpha(h) + 1]).collect(),
            sigma,
            root_half_edge: root.filter(|_| !map.is_empty()).map(|h| h + 1),
            inner_root_half_edge: inner.map(|h| h + 1),
            root_corner: None,
            inner_root_corner: None,
        }
    }

    pub fn from_plane(p: &PlaneMap) -> Self {
        Self::from_map(&p.map, Some(p.root), None)
    }

    pub fn from_annular(a: &AnnularMap) -> Self {
        Self::from_map(&a.plane.map, Some(a.plane.root), Some(a.inner))
    }

    pub fn to_map(&self) -> Result<ParsedMap, MapError> {
        let n = self.half_edges;
        let bad = |x: usize| x == 0 || x > n;
        let mut alpha = vec![usize::MAX; n];
        for &[a, b] in &self.alpha {
            if bad(a) || bad(b) {
                return Err(MapError::Format(format!("alpha pair ({a} {b}) out of range")));
            }
            if alpha[a - 1] != usize::MAX || alpha[b - 1] != usize::MAX {
                return Err(MapError::BadAlpha(a - 1));
            }
            alpha[a - 1] = b - 1;
            alpha[b - 1] = a - 1;
        }
        if let Some(h) = alpha.iter().position(|&x| x == usize::MAX) {
            return Err(MapError::BadAlpha(h));
        }
        let mut sigma = vec![usize::MAX; n];
        for c in &self.sigma {
            for (i, &h) in c.iter().enumerate() {
                if bad(h) || sigma[h - 1] != usize::MAX {
                    return Err(MapError::NotPermutation("sigma"));
                }
                sigma[h - 1] = c[(i + 1) % c.len()] - 1;
            }
        }
        if sigma.contains(&usize::MAX) {
            return Err(MapError::NotPermutation("sigma"));
        }
        let map = CombinatorialMap::new(alpha, sigma)?;
        let check = |x: usize| if bad(x) { Err(MapError::DanglingRoot(x)) } else { Ok(x - 1) };
        let root = match (self.root_half_edge, n) {
            (_, 0) => 0,
            (None, _) => return Err(MapError::Format("missing root_half_edge".into())),
            (Some(r), _) => check(r)?,
        };
        let root = match self.root_corner {
            Some(c) => {
                let c = check(c)?;
                if map.face(c) != map.face(root) {
                    return Err(MapError::Format("root_corner is not in the root face".into()));
                }
                c
            }
            None => root,
        };
        let plane = PlaneMap::new(map, root)?;
        match self.inner_root_half_edge {
            None => Ok(ParsedMap::Plane(plane)),
            Some(i) => {
                let mut inner = check(i)?;
                if let Some(c) = self.inner_root_corner {
                    let c = check(c)?;
                    if plane.map.face(c) != plane.map.face(inner) {
                        return Err(MapError::Format("inner_root_corner is not in the inner root face".into()));
                    }
                    inner = c;
                }
                Ok(ParsedMap::Annular(AnnularMap::new(plane, inner)?))
            }
        }
    }
}

pub fn parse_map(text: &str) -> Result<ParsedMap, MapError> {
    let file: MapFile = serde_json::from_str(text).map_err(|e| MapError::Format(e.to_string()))?;
    file.to_map()
}

/// Inner quadrangulation data: the superimposition `Q_M` of a plane map and
/// its face-vertices.
#[derive(Clone, Debug)]
pub struct InnerQuadrangulation {
    pub qm: CombinatorialMap,
    /// Number of half-edges of `M`; they keep their ids in `qm`.
    pub m_len: usize,
    /// For each half-edge `g` of `M` in an inner face, the half-edge of the
    /// Q-edge lying in corner `c(g)`, at the vertex of `g`. Its `alpha` is at
    /// the face-vertex. The M-edge of that Q-edge is the edge of `g`.
    pub q_at_corner: Vec<Option<Half>>,
    /// Face of `M` -> vertex of `qm`, for inner faces.
    pub face_vertex: Vec<Option<usize>>,
    /// Vertex of `qm` of the inner root face, if any.
    pub special: Option<usize>,
}

impl InnerQuadrangulation {
    pub fn new(p: &PlaneMap, inner_root: Option<Half>) -> Self {
        let m = &p.map;
        let n = m.len();
        let rf = p.root_face();
        let mut q_at_corner = vec![None; n];
        let mut next = n;
        for (g, slot) in q_at_corner.iter_mut().enumerate() {
            if m.face(g) != rf {
                *slot = Some(next);
                next += 2;
            }
        }
        let total = next;
        let mut alpha = vec![0; total];
        let mut sigma = vec![0; total];
        for h in 0..n {
            alpha[h] = m.alpha(h);
            let g = m.sigma(h);
            match q_at_corner[g] {
                Some(q) => {
                    sigma[h] = q;
                    sigma[q] = g;
                }
                None => sigma[h] = g,
            }
        }
        for g in 0..n {
            if let Some(q) = q_at_corner[g] {
                alpha[q] = q + 1;
                alpha[q + 1] = q;
                sigma[q + 1] = q_at_corner[m.phi_inv(g)].unwrap() + 1;
            }
        }
        let qm = CombinatorialMap::new(alpha, sigma).expect("inner quadrangulation is planar");
        let mut face_vertex = vec![None; m.n_faces()];
        for g in 0..n {
            if let Some(q) = q_at_corner[g] {
                face_vertex[m.face(g)] = Some(qm.vertex(q + 1));
            }
        }
        let special = inner_root.map(|h| face_vertex[m.face(h)].unwrap());
        InnerQuadrangulation { qm, m_len: n, q_at_corner, face_vertex, special }
    }
}

/// Rooted map with `n` edges -> member of `C_1` with `n + 1` edges: a loop
/// bounding a degree-1 root face is inserted in the root corner.
pub fn rooted_to_c1(r: &PlaneMap) -> PlaneMap {
    let n = r.map.len();
    let (x, y) = (n, n + 1);
    let mut alpha: Vec<Half> = r.map.alpha_slice().to_vec();
    let mut sigma: Vec<Half> = r.map.sigma_slice().to_vec();
    alpha.extend([y, x]);
    sigma.extend([y, 0]);
    if n == 0 {
        sigma[y] = x;
    } else {
        let prev = r.map.sigma_inv(r.root);
        sigma[prev] = x;
        sigma[y] = r.root;
    }
    let map = CombinatorialMap::new(alpha, sigma).expect("loop insertion keeps planarity");
    debug_assert_eq!(map.phi(y), y);
    PlaneMap { map, root: y }
}

/// Inverse of [`rooted_to_c1`].
pub fn c1_to_rooted(c: &PlaneMap) -> Result<PlaneMap, MapError> {
    let m = &c.map;
    let y = c.root;
    if m.is_empty() || m.phi(y) != y {
        return Err(MapError::Format("root face is not a loop of degree 1".into()));
    }
    let x = m.alpha(y);
    if m.sigma(x) != y {
        return Err(MapError::Format("root loop is not inserted in a corner".into()));
    }
    let r = m.sigma(y);
    if r == x {
        return Ok(PlaneMap::vertex_map());
    }
    let (map, relabel) = remove_edge(m, x);
    Ok(PlaneMap { map, root: relabel[r] })
}

/// Marked edge (as one of its half-edges) of a loopless map -> member of
/// `C_2`: the edge is doubled and the new digon becomes the root face.
pub fn edge_marked_to_c2(p: &PlaneMap, marked: Half) -> PlaneMap {
    let m = &p.map;
    let n = m.len();
    let (x, y) = (n, n + 1);
    let mut alpha: Vec<Half> = m.alpha_slice().to_vec();
    let mut sigma: Vec<Half> = m.sigma_slice().to_vec();
    alpha.extend([y, x]);
    sigma.extend([0, 0]);
    let mm = m.alpha(marked);
    sigma[x] = m.sigma(marked);
    sigma[marked] = x;
    let prev = m.sigma_inv(mm);
    sigma[prev] = y;
    sigma[y] = mm;
    let map = CombinatorialMap::new(alpha, sigma).expect("edge doubling keeps planarity");
    debug_assert_eq!(map.face_orbit(x).len(), 2);
    PlaneMap { map, root: x }
}

/// Inverse of [`edge_marked_to_c2`]: returns the map and a half-edge of the
/// marked edge.
pub fn c2_to_edge_marked(c: &PlaneMap) -> Result<(PlaneMap, Half), MapError> {
    let m = &c.map;
    let x = c.root;
    if m.is_empty() || m.phi(m.phi(x)) != x || m.phi(x) == x {
        return Err(MapError::Format("root face is not a digon".into()));
    }
    let mm = m.phi(x);
    let marked = m.alpha(mm);
    let (map, relabel) = remove_edge(m, x);
    let root = relabel[marked];
    Ok((PlaneMap { map, root }, root))
}

/// Deletes the edge of `h` (which must keep the map connected), compacting
/// half-edge ids. Returns the map and the old -> new id table.
pub fn remove_edge(m: &CombinatorialMap, h: Half) -> (CombinatorialMap, Vec<usize>) {
    let a = m.alpha(h);
    let n = m.len();
    let removed = |x: Half| x == h || x == a;
    let sigma: Vec<Half> = (0..n)
        .map(|x| {
            let mut y = m.sigma(x);
            while removed(y) {
                y = m.sigma(y);
            }
            y
        })
        .collect();
    let mut relabel = vec![usize::MAX; n];
    let mut k = 0;
    for (x, r) in relabel.iter_mut().enumerate() {
        if x != h && x != a {
            *r = k;
            k += 1;
        }
    }
    let mut alpha2 = vec![0; k];
    let mut sigma2 = vec![0; k];
    for x in 0..n {
        if x != h && x != a {
            alpha2[relabel[x]] = relabel[m.alpha(x)];
            sigma2[relabel[x]] = relabel[sigma[x]];
        }
    }
    (CombinatorialMap::new(alpha2, sigma2).expect("edge removal keeps a planar connected map"), relabel)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn loop_map() -> PlaneMap {
        PlaneMap { map: CombinatorialMap::from_cycles(2, &[vec![0, 1]]).unwrap(), root: 0 }
    }

    pub fn triangle() -> PlaneMap {
        // vertices a:{0,5} b:{1,2} c:{3,4}; edges (0,1) (2,3) (4,5)
        let m = CombinatorialMap::from_cycles(6, &[vec![0, 5], vec![1, 2], vec![3, 4]]).unwrap();
        PlaneMap { map: m, root: 0 }
    }

    #[test]
    fn loop_and_triangle_counts() {
        let l = loop_map();
        assert_eq!((l.map.n_vertices(), l.map.n_edges(), l.map.n_faces()), (1, 1, 2));
        assert_eq!(l.map.face_degrees(), vec![1, 1]);
        let t = triangle();
        assert_eq!((t.map.n_vertices(), t.map.n_edges(), t.map.n_faces()), (3, 3, 2));
        assert_eq!(t.map.girth(), Some(3));
    }

    #[test]
    fn torus_is_rejected() {
        // one vertex, two loops interleaved: a b a' b'
        let err = CombinatorialMap::from_cycles(4, &[vec![0, 2, 1, 3]]).unwrap_err();
        assert_eq!(err, MapError::NonPlanar(0));
    }

    #[test]
    fn girths_of_small_maps() {
        let link = CombinatorialMap::from_cycles(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(link.girth(), None);
        let digon = CombinatorialMap::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(digon.girth(), Some(2));
        assert_eq!(digon.face_degrees(), vec![2, 2]);
        assert_eq!(loop_map().map.girth(), Some(1));
    }

    #[test]
    fn dual_of_triangle_is_theta() {
        let (d, v) = triangle().dual();
        assert_eq!((d.n_vertices(), d.n_edges(), d.n_faces()), (2, 3, 3));
        assert_eq!(d.girth(), Some(2));
        assert_eq!(d.vertex_degrees()[v], 3);
    }

    #[test]
    fn subdivision_doubles_girth() {
        let s = triangle().subdivide();
        assert_eq!(s.plane.map.girth(), Some(6));
        assert!(s.plane.map.is_bipartite());
        let s = loop_map().subdivide();
        assert_eq!(s.plane.map.girth(), Some(2));
    }

    #[test]
    fn square_has_one_code() {
        let m = CombinatorialMap::from_cycles(8, &[vec![0, 7], vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let codes: std::collections::BTreeSet<_> = (0..8).map(|h| m.rooted_code(h)).collect();
        assert_eq!(codes.len(), 1);
        let l = loop_map().map;
        let link = CombinatorialMap::from_cycles(2, &[vec![0], vec![1]]).unwrap();
        assert_ne!(l.rooted_code(0), link.rooted_code(0));
    }

    #[test]
    fn annular_girths_of_digon_and_triangle() {
        let digon = CombinatorialMap::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let p = PlaneMap { map: digon, root: 0 };
        let inner = (0..4).find(|&h| p.map.face(h) != p.root_face()).unwrap();
        let a = AnnularMap::new(p, inner).unwrap();
        assert_eq!(a.girths(), AnnularGirths { separating: Some(2), non_separating: None });
        let t = triangle();
        let inner = (0..6).find(|&h| t.map.face(h) != t.root_face()).unwrap();
        let a = AnnularMap::new(t, inner).unwrap();
        assert_eq!(a.girths(), AnnularGirths { separating: Some(3), non_separating: None });
    }

    #[test]
    fn root_conversions_round_trip() {
        let v = PlaneMap::vertex_map();
        let c = rooted_to_c1(&v);
        assert_eq!(c.map.n_edges(), 1);
        assert_eq!(c.outer_degree(), 1);
        assert!(c1_to_rooted(&c).unwrap().map.is_empty());
        let t = triangle();
        let back = c1_to_rooted(&rooted_to_c1(&t)).unwrap();
        assert_eq!(back.rooted_code(), t.rooted_code());
        let link = PlaneMap { map: CombinatorialMap::from_cycles(2, &[vec![0], vec![1]]).unwrap(), root: 0 };
        let c2 = edge_marked_to_c2(&link, 0);
        assert_eq!(c2.outer_degree(), 2);
        assert_eq!(c2.map.girth(), Some(2));
        let (back, _) = c2_to_edge_marked(&c2).unwrap();
        assert_eq!(back.map.n_edges(), 1);
    }

    #[test]
    fn quadrangulation_of_triangle() {
        let t = triangle();
        let q = InnerQuadrangulation::new(&t, None);
        assert_eq!(q.qm.n_edges(), 6);
        assert_eq!(q.qm.n_vertices(), 4);
        let mut degs = q.qm.face_degrees();
        degs.sort();
        assert_eq!(degs, vec![3, 3, 3, 3]);
    }

    #[test]
    fn file_round_trip() {
        let t = triangle();
        let f = MapFile::from_plane(&t);
        let text = serde_json::to_string(&f).unwrap();
        let back = parse_map(&text).unwrap();
        assert_eq!(back.plane().rooted_code(), t.rooted_code());
    }
}
