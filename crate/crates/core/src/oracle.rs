//! Brute-force enumeration of small maps and orientations.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::map::{AnnularMap, CombinatorialMap, Half, PlaneMap};
use crate::orientation::{
    check_constraints, check_zero_constraints, classify, classify_vertex_rooted, is_admissible, GirthSpec,
    ZBiorientation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("resource guard: {0}")]
    Bound(String),
}

pub const MAX_EDGES: usize = 8;
pub const MAX_PERMUTATION_EDGES: usize = 5;

fn guard(edges: usize, limit: usize) -> Result<(), OracleError> {
    if edges > limit {
        return Err(OracleError::Bound(format!("{edges} edges exceed the limit of {limit}")));
    }
    Ok(())
}

/// Rooted planar maps with exactly `k` edges for `k = 0..=max_edges`, by
/// edge insertion. Entry `k` is sorted by rooted code.
pub fn rooted_maps_by_insertion(max_edges: usize) -> Result<Vec<Vec<PlaneMap>>, OracleError> {
    guard(max_edges, MAX_EDGES)?;
    let mut levels = vec![vec![PlaneMap::vertex_map()]];
    if max_edges == 0 {
        return Ok(levels);
    }
    let loop_map = CombinatorialMap::from_cycles(2, &[vec![0, 1]]).unwrap();
    let link = CombinatorialMap::from_cycles(2, &[vec![0], vec![1]]).unwrap();
    let mut current: BTreeMap<Vec<u32>, PlaneMap> = BTreeMap::new();
    for m in [loop_map, link] {
        let p = PlaneMap { map: m, root: 0 };
        current.insert(p.rooted_code(), p);
    }
    levels.push(current.values().cloned().collect());
    for _ in 2..=max_edges {
        let mut next: BTreeMap<Vec<u32>, PlaneMap> = BTreeMap::new();
        for p in &current {
            for child in insertions(&p.1.map) {
                let c = PlaneMap { map: child, root: p.1.root };
                next.entry(c.rooted_code()).or_insert(c);
            }
        }
        levels.push(next.values().cloned().collect());
        current = next;
    }
    Ok(levels)
}

/// All maps obtained by adding one edge: a pendant edge in any corner, or a
/// diagonal between two corners of one face.
fn insertions(m: &CombinatorialMap) -> Vec<CombinatorialMap> {
    let n = m.len();
    let (a, b) = (n, n + 1);
    let base_alpha = |alpha: &mut Vec<Half>| {
        alpha.extend_from_slice(m.alpha_slice());
        alpha.push(b);
        alpha.push(a);
    };
    // insert new half-edge `x` in the corner just before `g`
    let insert = |sigma: &mut Vec<Half>, x: Half, g: Half| {
        let prev = (0..sigma.len()).find(|&h| sigma[h] == g).unwrap();
        sigma[prev] = x;
        sigma[x] = g;
    };
    let mut out = Vec::new();
    for g in 0..n {
        let mut alpha = Vec::with_capacity(n + 2);
        base_alpha(&mut alpha);
        let mut sigma: Vec<Half> = m.sigma_slice().to_vec();
        sigma.extend([a, b]);
        insert(&mut sigma, a, g);
        out.push(CombinatorialMap::new(alpha, sigma).expect("pendant edge keeps planarity"));
    }
    for face in m.faces() {
        for &g1 in &face {
            for &g2 in &face {
                let mut alpha = Vec::with_capacity(n + 2);
                base_alpha(&mut alpha);
                let mut sigma: Vec<Half> = m.sigma_slice().to_vec();
                sigma.extend([a, b]);
                insert(&mut sigma, a, g1);
                insert(&mut sigma, b, g2);
                if let Ok(c) = CombinatorialMap::new(alpha, sigma) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Rooted planar maps with exactly `edges` edges by scanning all rotation
/// systems with `alpha = (0 1)(2 3)...`, rooted at half-edge 0.
pub fn rooted_maps_by_permutations(edges: usize) -> Result<Vec<PlaneMap>, OracleError> {
    guard(edges, MAX_PERMUTATION_EDGES)?;
    if edges == 0 {
        return Ok(vec![PlaneMap::vertex_map()]);
    }
    let n = 2 * edges;
    let alpha: Vec<Half> = (0..n).map(|h| h ^ 1).collect();
    let mut found: BTreeMap<Vec<u32>, PlaneMap> = BTreeMap::new();
    let mut sigma: Vec<Half> = (0..n).collect();
    permutations(&mut sigma, 0, &mut |s| {
        if let Ok(m) = CombinatorialMap::new(alpha.clone(), s.to_vec()) {
            let p = PlaneMap { map: m, root: 0 };
            found.entry(p.rooted_code()).or_insert(p);
        }
    });
    Ok(found.into_values().collect())
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

// ---------------------------------------------------------------------------
// Gluing polygons.

/// A map obtained by gluing polygons; `root` is half-edge 0 in the root
/// face, `inner` marks the inner root face when requested.
#[derive(Clone, Debug)]
pub struct Glued {
    pub plane: PlaneMap,
    pub inner: Option<Half>,
}

impl Glued {
    pub fn annular(&self) -> Option<AnnularMap> {
        self.inner.map(|i| AnnularMap { plane: self.plane.clone(), inner: i })
    }
}

struct Gluer {
    start: Vec<usize>,
    deg: Vec<usize>,
    face_of: Vec<usize>,
    /// inner root face index, if any (glued at every offset)
    marked: Option<usize>,
    alpha: Vec<Option<Half>>,
    touched: Vec<bool>,
    out: Vec<Glued>,
}

impl Gluer {
    fn phi(&self, h: Half) -> Half {
        let f = self.face_of[h];
        self.start[f] + (h - self.start[f] + 1) % self.deg[f]
    }

    /// Next unmatched half-edge along the boundary of the glued region.
    fn boundary_next(&self, z: Half) -> Half {
        let mut y = self.phi(z);
        let mut guard = 0;
        while let Some(a) = self.alpha[y] {
            y = self.phi(a);
            guard += 1;
            assert!(guard <= self.alpha.len(), "boundary walk does not close");
        }
        y
    }

    fn search(&mut self) {
        let n = self.alpha.len();
        let x = (0..n).find(|&h| self.alpha[h].is_none() && self.touched[self.face_of[h]]);
        let Some(x) = x else {
            if self.touched.iter().all(|&t| t) {
                self.emit();
            }
            return;
        };
        // same boundary cycle
        let mut y = self.boundary_next(x);
        while y != x {
            self.glue(x, y);
            self.search();
            self.unglue(x, y);
            y = self.boundary_next(y);
        }
        // a new face
        let mut seen_deg = BTreeSet::new();
        for f in 0..self.deg.len() {
            if self.touched[f] {
                continue;
            }
            if Some(f) == self.marked {
                for off in 0..self.deg[f] {
                    self.open(x, f, off);
                }
            } else if seen_deg.insert(self.deg[f]) {
                self.open(x, f, 0);
            }
        }
    }

    fn open(&mut self, x: Half, f: usize, off: usize) {
        let y = self.start[f] + off;
        self.touched[f] = true;
        self.glue(x, y);
        self.search();
        self.unglue(x, y);
        self.touched[f] = false;
    }

    fn glue(&mut self, x: Half, y: Half) {
        self.alpha[x] = Some(y);
        self.alpha[y] = Some(x);
    }

    fn unglue(&mut self, x: Half, y: Half) {
        self.alpha[x] = None;
        self.alpha[y] = None;
    }

    fn emit(&mut self) {
        let n = self.alpha.len();
        let alpha: Vec<Half> = self.alpha.iter().map(|a| a.unwrap()).collect();
        let sigma: Vec<Half> = (0..n).map(|h| self.phi(alpha[h])).collect();
        let map = CombinatorialMap::new(alpha, sigma).expect("boundary gluing is planar");
        let inner = self.marked.map(|f| self.start[f]);
        self.out.push(Glued { plane: PlaneMap { map, root: 0 }, inner });
    }
}

/// All rooted maps whose root face has degree `root_deg` and whose other
/// faces have the degrees in `faces` (plus a rooted inner root face of
/// degree `inner_deg`, when given). Each rooted map appears exactly once.
pub fn glue_polygons(root_deg: usize, inner_deg: Option<usize>, faces: &[usize]) -> Result<Vec<Glued>, OracleError> {
    let mut deg = vec![root_deg];
    let mut marked = None;
    if let Some(q) = inner_deg {
        marked = Some(1);
        deg.push(q);
    }
    let mut rest = faces.to_vec();
    rest.sort_unstable();
    deg.extend(rest);
    let total: usize = deg.iter().sum();
    if total % 2 == 1 || deg.contains(&0) {
        return Ok(Vec::new());
    }
    guard(total / 2, 2 * MAX_EDGES)?;
    let mut start = Vec::new();
    let mut face_of = Vec::new();
    for (f, &d) in deg.iter().enumerate() {
        start.push(face_of.len());
        face_of.extend(std::iter::repeat(f).take(d));
    }
    let mut touched = vec![false; deg.len()];
    touched[0] = true;
    let mut g = Gluer { start, deg, face_of, marked, alpha: vec![None; total], touched, out: Vec::new() };
    g.search();
    Ok(g.out)
}

/// Multisets of `k` face degrees drawn from `degrees`, for `k` in `0..=max_faces`.
pub fn profiles(degrees: &[usize], max_faces: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    fn rec(degrees: &[usize], from: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            return;
        }
        for i in from..degrees.len() {
            cur.push(degrees[i]);
            out.push(cur.clone());
            rec(degrees, i, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(degrees, 0, max_faces, &mut Vec::new(), &mut out);
    out
}

/// Counts of rooted maps in the class `C_d` (girth `d`, outer degree `d`),
/// by sorted inner-face profile, over profiles with at most `max_faces`
/// inner faces of degrees in `degrees`.
pub fn count_girth_class(d: usize, degrees: &[usize], max_faces: usize) -> Result<BTreeMap<Vec<usize>, u64>, OracleError> {
    let mut out = BTreeMap::new();
    for prof in profiles(degrees, max_faces) {
        let n = glue_polygons(d, None, &prof)?
            .into_iter()
            .filter(|g| g.plane.map.girth() == Some(d))
            .count() as u64;
        out.insert(prof, n);
    }
    Ok(out)
}

/// Rooted annular maps of type `(p, q)` with the given other faces, tallied
/// by `(separating girth, non-separating girth)` (`None` for no cycle).
pub fn annular_girth_table(p: usize, q: usize, faces: &[usize]) -> Result<BTreeMap<(Option<usize>, Option<usize>), u64>, OracleError> {
    let mut out = BTreeMap::new();
    for g in glue_polygons(p, Some(q), faces)? {
        let gi = g.annular().unwrap().girths();
        *out.entry((gi.separating, gi.non_separating)).or_insert(0) += 1;
    }
    Ok(out)
}

/// Rooted maps whose full face-degree multiset is `faces` (root face
/// included), filtered by `keep`.
pub fn count_rooted_with_faces(faces: &[usize], keep: impl Fn(&CombinatorialMap) -> bool) -> Result<u64, OracleError> {
    let distinct: BTreeSet<usize> = faces.iter().copied().collect();
    let mut total = 0;
    for r in distinct {
        let mut rest = faces.to_vec();
        let i = rest.iter().position(|&x| x == r).unwrap();
        rest.remove(i);
        total += glue_polygons(r, None, &rest)?.iter().filter(|g| keep(&g.plane.map)).count() as u64;
    }
    Ok(total)
}

pub fn is_simple(m: &CombinatorialMap) -> bool {
    m.girth().is_none_or(|g| g >= 3)
}

// ---------------------------------------------------------------------------
// Orientations.

/// An enumerated orientation with its suitability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundOrientation {
    pub orientation: ZBiorientation,
    pub suitable: bool,
}

/// Per-edge choices `(in_h, w_h, in_alpha_h, w_alpha_h)`.
fn edge_options(edge_w: i64, max_in: i64, min_in: i64, outs: &[i64]) -> Vec<(bool, i64, bool, i64)> {
    let mut v = Vec::new();
    for a in min_in..=max_in {
        for b in min_in..=max_in {
            if a + b == edge_w {
                v.push((true, a, true, b));
            }
        }
        for &b in outs {
            if a + b == edge_w {
                v.push((true, a, false, b));
                v.push((false, b, true, a));
            }
        }
    }
    for &a in outs {
        for &b in outs {
            if a + b == edge_w {
                v.push((false, a, false, b));
            }
        }
    }
    v
}

/// All orientations of `p` satisfying the weight conditions of `spec` (and
/// admissibility). For `GirthSpec::Zero` the outer vertex is `vertex(p.root)`.
pub fn enumerate_orientations(p: &PlaneMap, inner: Option<Half>, spec: GirthSpec) -> Result<Vec<FoundOrientation>, OracleError> {
    let m = &p.map;
    guard(m.n_edges(), 7)?;
    if m.is_empty() {
        let o = ZBiorientation::zeros(0);
        let suitable = match spec {
            GirthSpec::Zero => classify_vertex_rooted(m, &o, 0).suitable,
            _ => false,
        };
        return Ok(if spec == GirthSpec::Zero { vec![FoundOrientation { orientation: o, suitable }] } else { vec![] });
    }
    let zero = spec == GirthSpec::Zero;
    let (edge_w, max_in, min_in, outs): (i64, i64, i64, Vec<i64>) = match spec {
        GirthSpec::Plain(d) | GirthSpec::Annular { d, .. } => (d - 2, d, 1, vec![0, -1, -2]),
        GirthSpec::Bipartite(b) | GirthSpec::AnnularBipartite { b, .. } => (b - 1, b, 1, vec![0, -1]),
        GirthSpec::Zero => (-2, 0, 0, vec![-1, -2]),
    };
    if !zero && p.outer_degree() != spec.outer_degree() {
        return Ok(Vec::new());
    }
    let mut contour = vec![false; m.len()];
    if !zero {
        for h in p.outer_halves() {
            contour[h] = true;
            contour[m.alpha(h)] = true;
        }
    }
    let inner_opts = edge_options(edge_w, max_in, min_in, &outs);
    let outer_opts = vec![(true, 1, false, 0), (false, 0, true, 1)];
    let edges: Vec<Half> = m.edge_reps().collect();
    // vertex completion: a vertex is checked once all its edges are set
    let v0 = m.vertex(p.root);
    let outer_vertex: Vec<bool> =
        (0..m.n_vertices()).map(|v| if zero { v == v0 } else { p.is_outer_vertex(v) }).collect();
    let mut last_edge_of_vertex = vec![0usize; m.n_vertices()];
    for (k, &h) in edges.iter().enumerate() {
        last_edge_of_vertex[m.vertex(h)] = k;
        last_edge_of_vertex[m.vertex(m.alpha(h))] = k;
    }
    let mut o = ZBiorientation::zeros(m.len());
    let mut out = Vec::new();
    let vertex_w = max_in;
    let verts = m.vertices();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        edges: &[Half],
        m: &CombinatorialMap,
        contour: &[bool],
        inner_opts: &[(bool, i64, bool, i64)],
        outer_opts: &[(bool, i64, bool, i64)],
        o: &mut ZBiorientation,
        check_vertex: &dyn Fn(usize, &ZBiorientation) -> bool,
        emit: &mut dyn FnMut(&ZBiorientation),
    ) {
        if k == edges.len() {
            emit(o);
            return;
        }
        let h = edges[k];
        let a = m.alpha(h);
        let opts = if contour[h] { outer_opts } else { inner_opts };
        for &(ih, wh, ia, wa) in opts {
            o.ingoing[h] = ih;
            o.weight[h] = wh;
            o.ingoing[a] = ia;
            o.weight[a] = wa;
            if check_vertex(k, o) {
                rec(k + 1, edges, m, contour, inner_opts, outer_opts, o, check_vertex, emit);
            }
        }
    }
    let check_vertex = |k: usize, o: &ZBiorientation| {
        for v in [m.vertex(edges[k]), m.vertex(m.alpha(edges[k]))] {
            if last_edge_of_vertex[v] == k && !outer_vertex[v] {
                let w: i64 = verts[v].iter().filter(|&&g| o.ingoing[g]).map(|&g| o.weight[g]).sum();
                if w != vertex_w {
                    return false;
                }
            }
        }
        true
    };
    let mut emit = |o: &ZBiorientation| {
        let ok = if zero {
            check_zero_constraints(m, o, v0).is_ok() && (0..m.len()).all(|h| m.vertex(h) != v0 || !o.ingoing[h])
        } else {
            check_constraints(p, inner, o, spec).is_ok() && is_admissible(p, o).is_ok()
        };
        if ok {
            let suitable = if zero {
                classify_vertex_rooted(m, o, v0).suitable
            } else {
                classify(p, o).map(|f| f.suitable).unwrap_or(false)
            };
            out.push(FoundOrientation { orientation: o.clone(), suitable });
        }
    };
    rec(0, &edges, m, &contour, &inner_opts, &outer_opts, &mut o, &check_vertex, &mut emit);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::tests::triangle;

    #[test]
    fn rooted_map_counts() {
        let levels = rooted_maps_by_insertion(4).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 2, 9, 54, 378]);
        for k in 0..=3 {
            let perm = rooted_maps_by_permutations(k).unwrap();
            let a: BTreeSet<Vec<u32>> = perm.iter().map(|p| p.rooted_code()).collect();
            let b: BTreeSet<Vec<u32>> = levels[k].iter().map(|p| p.rooted_code()).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gluing_matches_insertion() {
        let levels = rooted_maps_by_insertion(4).unwrap();
        for (k, level) in levels.iter().enumerate().skip(1) {
            let mut by_profile: BTreeMap<(usize, Vec<usize>), BTreeSet<Vec<u32>>> = BTreeMap::new();
            for p in level {
                let mut inner = p.inner_face_degrees();
                inner.sort_unstable();
                by_profile.entry((p.outer_degree(), inner)).or_default().insert(p.rooted_code());
            }
            for ((r, prof), codes) in by_profile {
                let glued = glue_polygons(r, None, &prof).unwrap();
                let set: BTreeSet<Vec<u32>> = glued.iter().map(|g| g.plane.rooted_code()).collect();
                assert_eq!(glued.len(), set.len(), "duplicates for {r} {prof:?}");
                assert_eq!(set, codes, "edges {k} root {r} {prof:?}");
            }
        }
    }

    #[test]
    fn small_classes() {
        let c3 = count_girth_class(3, &[3], 1).unwrap();
        assert_eq!(c3[&vec![3]], 1);
        let annular = annular_girth_table(2, 2, &[]).unwrap();
        assert_eq!(annular.values().sum::<u64>(), 2);
    }

    #[test]
    fn triangle_orientations() {
        let found = enumerate_orientations(&triangle(), None, GirthSpec::Plain(3)).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].suitable);
    }
}
