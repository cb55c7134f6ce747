//! The master bijection between suitably bioriented plane maps and mobiles,
//! its inverse by closure, and the girth-class bijections built on it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::map::{AnnularMap, CombinatorialMap, Half, MapError, PlaneMap};
use crate::mobile::{Color, Mobile, MobileError, MobileSpec};
use crate::orientation::{classify, suitable_orientation, GirthSpec, OrientError, ZBiorientation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error(transparent)]
    Orient(#[from] OrientError),
    #[error(transparent)]
    Mobile(#[from] MobileError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("{0}")]
    Other(String),
}

/// Image of a bioriented map under the master bijection.
#[derive(Clone, Debug)]
pub struct PhiImage {
    pub mobile: Mobile,
    /// Buds created from the outer edges.
    pub exposed: Vec<usize>,
    /// Mobile dart at the black vertex of `face(h)` created for `h`, for
    /// every half-edge `h` of an inner face.
    pub black_dart: Vec<Option<usize>>,
}

/// Map produced by [`mobile_to_map`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GirthMap {
    /// A plane map; for outer degree 0 the root half-edge marks the outer
    /// vertex instead of a face.
    Plane(PlaneMap),
    Annular(AnnularMap),
}

impl GirthMap {
    pub fn plane(&self) -> &PlaneMap {
        match self {
            GirthMap::Plane(p) => p,
            GirthMap::Annular(a) => &a.plane,
        }
    }
}

/// The master bijection. `p` carries a suitable orientation `o`; for outer
/// degree 0 (`p.map` given with its root half-edge at the outer vertex)
/// pass `vertex_rooted = true`.
pub fn phi_general(
    p: &PlaneMap,
    o: &ZBiorientation,
    vertex_rooted: bool,
    special_face: Option<usize>,
) -> Result<PhiImage, BijectionError> {
    let m = &p.map;
    let n = m.len();
    if n == 0 {
        let mobile = Mobile::new(vec![Color::Black], None, vec![vec![]], vec![], vec![])?;
        return Ok(PhiImage { mobile, exposed: vec![], black_dart: vec![] });
    }
    let root_face = if vertex_rooted { None } else { Some(p.root_face()) };
    let outer_vertex: Vec<bool> = if vertex_rooted {
        (0..m.n_vertices()).map(|v| v == m.vertex(p.root)).collect()
    } else {
        (0..m.n_vertices()).map(|v| p.is_outer_vertex(v)).collect()
    };
    let mut inn = o.ingoing.clone();
    let mut outer_halves = Vec::new();
    if let Some(rf) = root_face {
        for h in m.face_orbit(p.root) {
            outer_halves.push(h);
            inn[h] = !inn[h];
            inn[m.alpha(h)] = !inn[m.alpha(h)];
        }
        for &h in &outer_halves {
            if inn[h] && m.face(h) != rf {
                return Err(BijectionError::Other("outer contour is not oriented as required".into()));
            }
        }
    }
    let w = &o.weight;

    let mut color = Vec::new();
    let mut rot: Vec<Vec<usize>> = Vec::new();
    let mut black_of_face = vec![usize::MAX; m.n_faces()];
    for f in 0..m.n_faces() {
        if Some(f) != root_face {
            black_of_face[f] = color.len();
            color.push(Color::Black);
            rot.push(Vec::new());
        }
    }
    let mut white_of_vertex = vec![usize::MAX; m.n_vertices()];
    for v in 0..m.n_vertices() {
        if !outer_vertex[v] {
            white_of_vertex[v] = color.len();
            color.push(Color::White);
            rot.push(Vec::new());
        }
    }
    let mut mate: Vec<Option<usize>> = Vec::new();
    let mut weight: Vec<i64> = Vec::new();
    let mut new_dart = |rot: &mut Vec<Vec<usize>>, v: usize, wt: i64| {
        mate.push(None);
        weight.push(wt);
        rot[v].push(mate.len() - 1);
        mate.len() - 1
    };

    // Black darts, clockwise around each black vertex in phi^-1 order.
    let mut bd: Vec<Option<usize>> = vec![None; n];
    for face in m.faces() {
        let f = m.face(face[0]);
        if Some(f) == root_face {
            continue;
        }
        let b = black_of_face[f];
        let mut order = face.clone();
        order[1..].reverse();
        for g in order {
            let a = m.alpha(g);
            let wt = match (inn[g], inn[a]) {
                (true, false) | (false, false) => w[a],
                _ => 0,
            };
            bd[g] = Some(new_dart(&mut rot, b, wt));
        }
    }
    // White darts, clockwise in sigma order.
    let mut wd: Vec<Option<usize>> = vec![None; n];
    for vert in m.vertices() {
        let v = m.vertex(vert[0]);
        if outer_vertex[v] {
            continue;
        }
        for g in vert {
            if inn[g] {
                wd[g] = Some(new_dart(&mut rot, white_of_vertex[v], w[g]));
            }
        }
    }
    let mut mate = mate;
    let weight = weight;
    let link = |mate: &mut Vec<Option<usize>>, x: usize, y: usize| {
        mate[x] = Some(y);
        mate[y] = Some(x);
    };
    for g in 0..n {
        let a = m.alpha(g);
        match (inn[g], inn[a]) {
            (true, true) if g < a => match (wd[g], wd[a]) {
                (Some(x), Some(y)) => link(&mut mate, x, y),
                _ => return Err(BijectionError::Other("2-way edge at an outer vertex".into())),
            },
            (true, false) => {
                if let Some(x) = bd[g] {
                    match wd[g] {
                        Some(y) => link(&mut mate, x, y),
                        None => return Err(BijectionError::Other("ingoing half-edge at an outer vertex".into())),
                    }
                } else if wd[g].is_some() {
                    return Err(BijectionError::Other("inner vertex reached from the root face".into()));
                }
            }
            (false, false) if g < a => match (bd[g], bd[a]) {
                (Some(x), Some(y)) => link(&mut mate, x, y),
                _ => return Err(BijectionError::Other("0-way edge on the root face".into())),
            },
            _ => {}
        }
    }
    let special = special_face.map(|f| black_of_face[f]);
    let exposed = outer_halves.iter().map(|&h| bd[m.alpha(h)].expect("inner side of an outer edge")).collect();
    let mobile = Mobile::new(color, special, rot, mate, weight)?;
    Ok(PhiImage { mobile, exposed, black_dart: bd })
}

/// The master bijection on a suitably bioriented plane map of positive
/// outer degree.
pub fn phi(p: &PlaneMap, o: &ZBiorientation) -> Result<PhiImage, BijectionError> {
    let flags = classify(p, o)?;
    if !flags.suitable {
        return Err(OrientError::Class(format!("orientation is not suitable: {flags:?}")).into());
    }
    phi_general(p, o, false, None)
}

// ---------------------------------------------------------------------------
// Closure.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// Dart of the mobile, by id.
    Real(usize),
    /// Stem placed before the black-white dart (extended id) it precedes.
    Stem(usize),
    /// Dart at a fake black vertex, paired with the white dart given.
    Fake(usize),
}

/// Result of matching buds to stems on the fully blossoming mobile.
struct Blossom {
    /// For each bud: the extended dart of the matched stem's black-white
    /// dart, or `None` if unmatched.
    matched: Vec<(usize, Option<Kind>)>,
    /// Unmatched buds in contour order.
    unmatched: Vec<usize>,
}

fn blossom(t: &Mobile) -> Blossom {
    // Extended darts: every dart of t, plus two fake darts per white-white
    // edge, plus one stem per black-white dart (real or fake black side).
    let nd = t.n_darts();
    let mut kinds: Vec<Kind> = (0..nd).map(Kind::Real).collect();
    let mut ext_vertex: Vec<usize> = t.dart_vertex.clone();
    let mut ext_mate: Vec<Option<usize>> = t.mate.clone();
    let mut rot: Vec<Vec<usize>> = t.rot.clone();
    for d in 0..nd {
        let Some(e) = t.mate[d] else { continue };
        if d < e && t.color[t.dart_vertex[d]] == Color::White && t.color[t.dart_vertex[e]] == Color::White {
            let v = rot.len();
            let (x, y) = (kinds.len(), kinds.len() + 1);
            kinds.push(Kind::Fake(d));
            kinds.push(Kind::Fake(e));
            ext_vertex.push(v);
            ext_vertex.push(v);
            ext_mate.push(Some(d));
            ext_mate.push(Some(e));
            ext_mate[d] = Some(x);
            ext_mate[e] = Some(y);
            rot.push(vec![x, y]);
        }
    }
    let is_black_vertex = |v: usize| v >= t.n_vertices() || t.color[v] == Color::Black;
    for v in 0..rot.len() {
        if !is_black_vertex(v) {
            continue;
        }
        let mut r = Vec::new();
        for &d in &rot[v] {
            if let Some(e) = ext_mate[d] {
                if !is_black_vertex(ext_vertex[e]) {
                    let s = kinds.len();
                    kinds.push(Kind::Stem(d));
                    ext_vertex.push(v);
                    ext_mate.push(None);
                    r.push(s);
                }
            }
            r.push(d);
        }
        rot[v] = r;
    }
    let total = kinds.len();
    let mut pos = vec![0; total];
    for r in &rot {
        for (i, &d) in r.iter().enumerate() {
            pos[d] = i;
        }
    }
    // Counterclockwise contour walk.
    let ccw = |d: usize| {
        let r = &rot[ext_vertex[d]];
        r[(pos[d] + r.len() - 1) % r.len()]
    };
    let start = 0;
    let mut seq = Vec::with_capacity(total);
    let mut d = start;
    loop {
        let dangling = match kinds[d] {
            Kind::Real(x) => t.mate[x].is_none(),
            Kind::Stem(_) => true,
            Kind::Fake(_) => false,
        };
        if dangling {
            seq.push(d);
        }
        d = match ext_mate[d] {
            Some(e) if !dangling => ccw(e),
            _ => ccw(d),
        };
        if d == start {
            break;
        }
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut matched_stem = vec![None; total];
    for _ in 0..2 {
        for &d in &seq {
            match kinds[d] {
                Kind::Real(_) => {
                    if matched_stem[d].is_none() && !stack.contains(&d) {
                        stack.push(d);
                    }
                }
                Kind::Stem(x) => {
                    if matched_stem.iter().any(|m| *m == Some(d)) {
                        continue;
                    }
                    if let Some(b) = stack.pop() {
                        matched_stem[b] = Some(d);
                        let _ = x;
                    }
                }
                Kind::Fake(_) => {}
            }
        }
    }
    let mut matched = Vec::new();
    let mut unmatched = Vec::new();
    for &d in &seq {
        if let Kind::Real(x) = kinds[d] {
            match matched_stem[d] {
                Some(s) => {
                    let Kind::Stem(target) = kinds[s] else { unreachable!() };
                    matched.push((x, Some(kinds[target])));
                }
                None => unmatched.push(x),
            }
        }
    }
    Blossom { matched, unmatched }
}

/// Inverse of the master bijection: the map (rooted on an outer corner, or
/// at the outer vertex for excess 0) with its suitable orientation.
pub fn phi_inverse(t: &Mobile) -> Result<(PlaneMap, ZBiorientation), BijectionError> {
    let excess = t.excess();
    if excess > 0 {
        return Err(BijectionError::Other(format!("excess {excess} is positive")));
    }
    if t.n_vertices() == 1 && t.n_darts() == 0 && t.color[0] == Color::Black {
        return Ok((PlaneMap::vertex_map(), ZBiorientation::zeros(0)));
    }
    let bl = blossom(t);
    // Half-edges of M: darts at black vertices, then one root half-edge per
    // unmatched bud.
    let black_darts: Vec<usize> = (0..t.n_darts()).filter(|&d| t.color[t.dart_vertex[d]] == Color::Black).collect();
    let mut id = vec![usize::MAX; t.n_darts()];
    for (i, &d) in black_darts.iter().enumerate() {
        id[d] = i;
    }
    let k = bl.unmatched.len();
    let nb = black_darts.len();
    let n = nb + k;
    let mut alpha = vec![usize::MAX; n];
    let mut o = ZBiorientation::zeros(n);
    let pair = |alpha: &mut Vec<usize>, x: usize, y: usize| {
        alpha[x] = y;
        alpha[y] = x;
    };
    for &d in &black_darts {
        if let Some(e) = t.mate[d] {
            if t.color[t.dart_vertex[e]] == Color::Black {
                // 0-way edge
                pair(&mut alpha, id[d], id[e]);
                o.weight[id[d]] = t.weight[e];
            }
        }
    }
    // Fake-stem partners: the other bud of the same fake vertex.
    let mut fake_partner: std::collections::HashMap<usize, usize> = Default::default();
    for &(bud, target) in &bl.matched {
        match target {
            Some(Kind::Real(x)) => {
                // 1-way edge: x is the black dart of a black-white edge
                pair(&mut alpha, id[bud], id[x]);
                let white = t.mate[x].unwrap();
                o.ingoing[id[x]] = true;
                o.weight[id[x]] = t.weight[white];
                o.weight[id[bud]] = t.weight[x];
            }
            Some(Kind::Fake(white)) => {
                // 2-way edge; `white` is the white dart the fake dart faces
                let other_white = t.mate[white].unwrap();
                let key = white.min(other_white);
                o.ingoing[id[bud]] = true;
                o.weight[id[bud]] = t.weight[other_white];
                if let Some(&b2) = fake_partner.get(&key) {
                    pair(&mut alpha, id[bud], id[b2]);
                } else {
                    fake_partner.insert(key, bud);
                }
            }
            _ => return Err(BijectionError::Other("bud matched to a non-stem".into())),
        }
    }
    for (i, &bud) in bl.unmatched.iter().enumerate() {
        pair(&mut alpha, id[bud], nb + i);
        o.ingoing[id[bud]] = true;
        o.weight[id[bud]] = 1;
    }
    if alpha.contains(&usize::MAX) {
        return Err(BijectionError::Other("closure left a half-edge unpaired".into()));
    }
    // phi: counterclockwise successor at each black vertex; root cycle.
    let mut phi = vec![0; n];
    for &d in &black_darts {
        phi[id[d]] = id[t.prev_cw(d)];
    }
    for i in 0..k {
        phi[nb + i] = nb + (i + k - 1) % k;
    }
    let sigma: Vec<usize> = (0..n).map(|h| phi[alpha[h]]).collect();
    let map = CombinatorialMap::new(alpha, sigma)?;
    let root = if k > 0 {
        nb
    } else {
        // outer vertex: the one without ingoing half-edges
        (0..n)
            .find(|&h| map.vertex_orbit(h).iter().all(|&g| !o.ingoing[g]))
            .ok_or_else(|| BijectionError::Other("no vertex without ingoing half-edges".into()))?
    };
    Ok((PlaneMap::new(map, root)?, o))
}

/// Complete closure: the vertex-rooted bioriented map dual to
/// `phi_inverse(t)`. Half-edge ids and the orientation are shared.
pub fn psi(t: &Mobile) -> Result<(CombinatorialMap, usize, ZBiorientation), BijectionError> {
    if t.excess() >= 0 {
        return Err(BijectionError::Other(format!("excess {} is not negative", t.excess())));
    }
    let (p, o) = phi_inverse(t)?;
    let (d, v0) = p.dual();
    Ok((d, v0, o))
}

fn mobile_spec(spec: GirthSpec) -> MobileSpec {
    match spec {
        GirthSpec::Plain(d) => MobileSpec::DBranching(d),
        GirthSpec::Bipartite(b) => MobileSpec::BDibranching(b),
        GirthSpec::Annular { d, p, q } => MobileSpec::Typed { d, p, q },
        GirthSpec::AnnularBipartite { b, r, s } => MobileSpec::TypedBipartite { b, r, s },
        GirthSpec::Zero => MobileSpec::ZeroBranching,
    }
}

pub fn to_mobile_spec(spec: GirthSpec) -> MobileSpec {
    mobile_spec(spec)
}

/// Girth bijection, map side. For `GirthSpec::Zero` the root half-edge of
/// `p` marks the outer vertex.
pub fn map_to_mobile(p: &PlaneMap, inner: Option<Half>, spec: GirthSpec) -> Result<PhiImage, BijectionError> {
    let o = suitable_orientation(p, inner, spec)?;
    let zero = spec == GirthSpec::Zero;
    let img = phi_general(p, &o, zero, inner.map(|h| p.map.face(h)))?;
    img.mobile.validate(mobile_spec(spec))?;
    Ok(img)
}

pub fn annular_to_mobile(a: &AnnularMap, spec: GirthSpec) -> Result<PhiImage, BijectionError> {
    map_to_mobile(&a.plane, Some(a.inner), spec)
}

/// Girth bijection, mobile side.
pub fn mobile_to_map(t: &Mobile, spec: MobileSpec) -> Result<GirthMap, BijectionError> {
    t.validate(spec)?;
    let (p, o) = phi_inverse(t)?;
    let _ = o;
    match t.special {
        None => Ok(GirthMap::Plane(p)),
        Some(s) => {
            let d = t.rot[s].first().copied().ok_or_else(|| BijectionError::Other("special vertex has no darts".into()))?;
            // black darts are numbered in dart order
            let h = (0..d).filter(|&x| t.color[t.dart_vertex[x]] == Color::Black).count();
            Ok(GirthMap::Annular(AnnularMap::new(p, h)?))
        }
    }
}

/// Cardinalities of the rooting sets of the rooting claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootingCounts {
    pub outer_corners: usize,
    pub exposed_buds: usize,
    pub non_exposed_buds: usize,
    pub white_half_edges: usize,
}

impl RootingCounts {
    pub fn holds(&self) -> bool {
        self.outer_corners == self.exposed_buds && self.non_exposed_buds == self.white_half_edges
    }
}

pub fn rooting_counts(p: &PlaneMap, img: &PhiImage) -> RootingCounts {
    let t = &img.mobile;
    let outer: BTreeSet<Vec<u32>> = p.outer_halves().into_iter().map(|h| p.map.rooted_code(h)).collect();
    let exposed: BTreeSet<usize> = img.exposed.iter().copied().collect();
    RootingCounts {
        outer_corners: outer.len(),
        exposed_buds: t.distinct_markings(exposed.iter().copied()),
        non_exposed_buds: t.distinct_markings(t.buds().filter(|d| !exposed.contains(d))),
        white_half_edges: t.distinct_markings(t.white_darts()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::tests::{loop_map, triangle};
    use crate::mobile::enumerate_mobiles;

    #[test]
    fn triangle_gives_three_buds() {
        let img = map_to_mobile(&triangle(), None, GirthSpec::Plain(3)).unwrap();
        assert_eq!(img.mobile.n_vertices(), 1);
        assert_eq!(img.mobile.n_buds(), 3);
        assert_eq!(img.exposed.len(), 3);
    }

    #[test]
    fn loop_gives_one_bud() {
        let img = map_to_mobile(&loop_map(), None, GirthSpec::Plain(1)).unwrap();
        assert_eq!(img.mobile.n_buds(), 1);
        assert_eq!(img.mobile.n_vertices(), 1);
    }

    #[test]
    fn closure_of_small_mobiles() {
        for t in enumerate_mobiles(MobileSpec::DBranching(3), 3, 3) {
            let GirthMap::Plane(p) = mobile_to_map(&t, MobileSpec::DBranching(3)).unwrap() else { panic!() };
            assert_eq!(p.outer_degree(), 3);
            let back = map_to_mobile(&p, None, GirthSpec::Plain(3)).unwrap();
            assert_eq!(back.mobile.canonical_code(), t.canonical_code());
        }
    }

    fn girth_spec(s: MobileSpec) -> GirthSpec {
        match s {
            MobileSpec::DBranching(d) => GirthSpec::Plain(d),
            MobileSpec::BDibranching(b) => GirthSpec::Bipartite(b),
            MobileSpec::Typed { d, p, q } => GirthSpec::Annular { d, p, q },
            MobileSpec::TypedBipartite { b, r, s } => GirthSpec::AnnularBipartite { b, r, s },
            MobileSpec::ZeroBranching => GirthSpec::Zero,
        }
    }

    #[test]
    fn mobile_round_trips() {
        let specs = [
            MobileSpec::DBranching(1),
            MobileSpec::DBranching(2),
            MobileSpec::DBranching(3),
            MobileSpec::DBranching(4),
            MobileSpec::BDibranching(1),
            MobileSpec::BDibranching(2),
            MobileSpec::ZeroBranching,
            MobileSpec::Typed { d: 2, p: 2, q: 2 },
            MobileSpec::Typed { d: 3, p: 3, q: 4 },
            MobileSpec::Typed { d: 1, p: 1, q: 2 },
            MobileSpec::TypedBipartite { b: 1, r: 1, s: 2 },
            MobileSpec::TypedBipartite { b: 2, r: 2, s: 2 },
        ];
        for spec in specs {
            let all = enumerate_mobiles(spec, 4, 3);
            assert!(!all.is_empty(), "{spec:?}");
            for t in all {
                let g = mobile_to_map(&t, spec).unwrap_or_else(|e| panic!("{spec:?} {e}"));
                let (p, inner) = match &g {
                    GirthMap::Plane(p) => (p.clone(), None),
                    GirthMap::Annular(a) => (a.plane.clone(), Some(a.inner)),
                };
                let (_, o) = phi_inverse(&t).unwrap();
                let back = map_to_mobile(&p, inner, girth_spec(spec)).unwrap_or_else(|e| panic!("{spec:?} {e}\n{t:?}"));
                assert_eq!(back.mobile.canonical_code(), t.canonical_code(), "{spec:?}");
                let o2 = suitable_orientation(&p, inner, girth_spec(spec)).unwrap();
                assert_eq!(o, o2, "{spec:?}");
            }
        }
    }
}
