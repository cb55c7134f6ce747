//! Acceptance checks: each criterion is a sweep over oracle-generated
//! objects producing a [`Report`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bijection::{map_to_mobile, mobile_to_map, rooting_counts};
use crate::map::{AnnularMap, CombinatorialMap, PlaneMap};
use crate::mobile::{enumerate_mobiles, theta, theta_inverse, MobileSpec};
use crate::oracle::{
    annular_girth_table, count_girth_class, count_rooted_with_faces, enumerate_orientations, glue_polygons, is_simple,
    profiles, rooted_maps_by_insertion, OracleError,
};
use crate::orientation::{
    double, geodesic_biorientation, halve, rightmost_bfs_orientation, suitable_orientation, tau_inverse, tau_map,
    GirthSpec,
};
use crate::series::{
    b_annular, count_bipartite, count_loopless, count_simple_bipartite, even_part, f_d, g_annular, g_annular_extraction,
    loopless_from_f2, loopless_series, solve_v, solve_w, verify_loopless_reduction, FaceVars,
};

#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    /// Canonical code of the counterexample (or the parameters checked).
    pub code: Vec<i64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub criterion: u8,
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    fn new(criterion: u8, name: &'static str) -> Self {
        Report { criterion, name, checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Smallest counterexample, shortest code first.
    pub fn smallest_failure(&self) -> Option<&Failure> {
        self.failures.iter().min_by(|a, b| (a.code.len(), &a.code).cmp(&(b.code.len(), &b.code)))
    }

    fn check(&mut self, ok: bool, code: Vec<i64>, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(Failure { code, detail: detail() });
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {} {}: {status} ({} checks", self.criterion, self.name, self.checked)?;
        match self.smallest_failure() {
            None => write!(f, ")"),
            Some(x) => write!(f, ", {} failures; smallest {:?}: {})", self.failures.len(), x.code, x.detail),
        }
    }
}

fn code(p: &PlaneMap) -> Vec<i64> {
    p.rooted_code().into_iter().map(i64::from).collect()
}

fn params(xs: &[i64]) -> Vec<i64> {
    xs.to_vec()
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Distinct plane maps (rooted maps up to the choice of outer corner).
fn plane_maps(levels: &[Vec<PlaneMap>]) -> Vec<PlaneMap> {
    let mut seen = BTreeMap::new();
    for p in levels.iter().flatten() {
        seen.entry(p.plane_code()).or_insert_with(|| p.clone());
    }
    seen.into_values().collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Round trip through the girth bijection on `C_d`.
pub fn roundtrip(max_edges: usize, ds: &[i64]) -> Result<Report, OracleError> {
    let mut r = Report::new(1, "roundtrip");
    let levels = rooted_maps_by_insertion(max_edges)?;
    for p in plane_maps(&levels) {
        let d = p.outer_degree() as i64;
        if !ds.contains(&d) || p.map.girth() != Some(d as usize) {
            continue;
        }
        let result = map_to_mobile(&p, None, GirthSpec::Plain(d)).map_err(|e| e.to_string()).and_then(|img| {
            img.mobile.validate(MobileSpec::DBranching(d)).map_err(|e| e.to_string())?;
            let back = mobile_to_map(&img.mobile, MobileSpec::DBranching(d)).map_err(|e| e.to_string())?;
            if back.plane().plane_code() != p.plane_code() {
                return Err("closure is not isomorphic to the input".into());
            }
            if sorted(p.inner_face_degrees()) != sorted(img.mobile.black_degrees()) {
                return Err("face degrees differ from black degrees".into());
            }
            Ok(())
        });
        r.check(result.is_ok(), code(&p), || format!("d={d}: {}", result.unwrap_err()));
    }
    Ok(r)
}

/// Existence and uniqueness of suitable orientations, by exhaustive search.
pub fn orientations(max_edges: usize) -> Result<Report, OracleError> {
    let mut r = Report::new(2, "orientations");
    let levels = rooted_maps_by_insertion(max_edges)?;
    let maps = plane_maps(&levels);
    let check = |r: &mut Report, p: &PlaneMap, inner, spec: GirthSpec, member: bool| -> Result<(), OracleError> {
        let found = enumerate_orientations(p, inner, spec)?;
        let suitable: Vec<_> = found.iter().filter(|f| f.suitable).collect();
        let pipeline = suitable_orientation(p, inner, spec);
        let ok = if member {
            suitable.len() == 1 && pipeline.as_ref().ok() == Some(&suitable[0].orientation)
        } else {
            found.is_empty() && pipeline.is_err()
        };
        let c = match inner {
            None => code(p),
            Some(i) => AnnularMap { plane: p.clone(), inner: i }.rooted_code().into_iter().map(i64::from).collect(),
        };
        r.check(ok, c, || {
            format!(
                "{spec:?}: member={member}, found {}, suitable {}, pipeline ok={}",
                found.len(),
                suitable.len(),
                pipeline.is_ok()
            )
        });
        Ok(())
    };
    for p in &maps {
        if p.map.is_empty() {
            continue;
        }
        let deg = p.outer_degree();
        if (1..=3).contains(&deg) {
            check(&mut r, p, None, GirthSpec::Plain(deg as i64), p.map.girth() == Some(deg))?;
        }
        if deg == 2 || deg == 4 {
            let member = p.map.is_bipartite() && p.map.girth() == Some(deg);
            check(&mut r, p, None, GirthSpec::Bipartite(deg as i64 / 2), member)?;
        }
    }
    for pp in 1..=3usize {
        for q in 1..=3usize {
            for faces in profiles(&[1, 2, 3], 1) {
                for g in glue_polygons(pp, Some(q), &faces)? {
                    let a = g.annular().unwrap();
                    let gi = a.girths();
                    for d in 1..=3usize {
                        let member = gi.separating == Some(pp) && gi.non_separating.is_none_or(|n| n >= d);
                        let spec = GirthSpec::Annular { d: d as i64, p: pp as i64, q: q as i64 };
                        check(&mut r, &a.plane, Some(a.inner), spec, member)?;
                    }
                }
            }
        }
    }
    for s in 1..=2usize {
        for faces in profiles(&[2, 4], 1) {
            for g in glue_polygons(2, Some(2 * s), &faces)? {
                let a = g.annular().unwrap();
                let gi = a.girths();
                let member = a.plane.map.is_bipartite()
                    && gi.separating == Some(2)
                    && gi.non_separating.is_none_or(|n| n >= 2);
                let spec = GirthSpec::AnnularBipartite { b: 1, r: 1, s: s as i64 };
                check(&mut r, &a.plane, Some(a.inner), spec, member)?;
            }
        }
    }
    Ok(r)
}

/// Coefficients of `F_d` against oracle counts of `C_d`.
pub fn counts(ds: &[usize], max_degree: usize, max_inner_faces: usize) -> Result<Report, OracleError> {
    let mut r = Report::new(3, "counts");
    let degrees: Vec<usize> = (1..=max_degree).collect();
    let vars = FaceVars::faces(&degrees, max_inner_faces as u32);
    for &d in ds {
        let f = f_d(d, &vars);
        for (prof, n) in count_girth_class(d, &degrees, max_inner_faces)? {
            let got = f.coeff(&vars.exponent_of(&prof).unwrap());
            let mut c = vec![d as i64];
            c.extend(prof.iter().map(|&x| x as i64));
            r.check(got == big(n), c, || format!("d={d} faces {prof:?}: series {got}, oracle {n}"));
        }
    }
    // F_1(t, t^2, ...) against rooted maps by edges
    let half = FaceVars::half_edges(&degrees, 5);
    let f1 = f_d(1, &half);
    let levels = rooted_maps_by_insertion(2)?;
    for (k, level) in levels.iter().enumerate() {
        let got = f1.coeff(&[2 * k as u32 + 1]);
        let n = level.len() as u64;
        r.check(got == big(n), vec![k as i64], || format!("[t^{}]F_1 = {got}, rooted maps with {k} edges {n}", 2 * k + 1));
    }
    let tri = f_d(3, &FaceVars::faces(&[3], 5));
    let got: Vec<BigInt> = [1, 3, 5].iter().map(|&k| tri.coeff(&[k])).collect();
    r.check(got == vec![big(1), big(1), big(3)], vec![3], || format!("F_3 at degrees {{3}}: {got:?}"));
    Ok(r)
}

/// Loopless maps: closed formula, algebraic series, `F_2` specialization and
/// brute force; then the Motzkin identities.
pub fn loopless(max_n: usize, identity_bound: u32) -> Result<Report, OracleError> {
    let mut r = Report::new(4, "loopless");
    let levels = rooted_maps_by_insertion(max_n)?;
    let series = loopless_series(max_n as u32).univariate_coeffs();
    let from_f2 = loopless_from_f2(max_n as u32);
    for (n, level) in levels.iter().enumerate() {
        let brute = level.iter().filter(|p| p.map.girth() != Some(1)).count() as u64;
        let formula = count_loopless(n as u64);
        let ok = formula == big(brute) && series[n] == formula && from_f2[n] == formula;
        r.check(ok, vec![n as i64], || {
            format!("n={n}: formula {formula}, series {}, F_2 {}, brute {brute}", series[n], from_f2[n])
        });
    }
    for c in verify_loopless_reduction(identity_bound) {
        r.check(c.holds, vec![], || format!("identity {} fails", c.name));
    }
    Ok(r)
}

/// Closed formulas for bipartite and simple bipartite maps against brute
/// force, for every face profile with at most `max_e` edges.
pub fn formulas(max_e: usize) -> Result<Report, OracleError> {
    let mut r = Report::new(5, "formulas");
    let evens: Vec<usize> = (1..=max_e).map(|i| 2 * i).collect();
    for prof in profiles(&evens, max_e) {
        let half: usize = prof.iter().sum();
        if prof.is_empty() || half > 2 * max_e {
            continue;
        }
        let mut n = vec![0u64; max_e];
        for &f in &prof {
            n[f / 2 - 1] += 1;
        }
        let brute = count_rooted_with_faces(&prof, CombinatorialMap::is_bipartite)?;
        let formula = count_bipartite(&n);
        let c: Vec<i64> = prof.iter().map(|&x| x as i64).collect();
        r.check(formula == big(brute), c.clone(), || format!("bipartite {prof:?}: formula {formula}, brute {brute}"));
        if prof.iter().all(|&f| f >= 4) {
            let brute = count_rooted_with_faces(&prof, |m| m.is_bipartite() && is_simple(m))?;
            let formula = count_simple_bipartite(&n[1..]);
            r.check(formula == big(brute), c, || format!("simple bipartite {prof:?}: formula {formula}, brute {brute}"));
        }
    }
    let named = [(vec![1u64], 2u64), (vec![0, 1], 5), (vec![2], 1)];
    for (n, want) in named {
        let got = count_simple_bipartite(&n);
        r.check(got == big(want), n.iter().map(|&x| x as i64).collect(), || format!("simple bipartite {n:?} = {got}"));
    }
    Ok(r)
}

/// Annular series against oracle counts, plus the internal identities.
pub fn annular(max_pq: usize, max_degree: usize, max_faces: usize) -> Result<Report, OracleError> {
    let mut r = Report::new(6, "annular");
    let degrees: Vec<usize> = (1..=max_degree).collect();
    let vars = FaceVars::faces(&degrees, max_faces as u32);
    let ws: Vec<_> = (1..=max_degree).map(|d| solve_w(d, &vars)).collect();
    for p in 1..=max_pq {
        for q in 1..=max_pq {
            for prof in profiles(&degrees, max_faces) {
                let table = annular_girth_table(p, q, &prof)?;
                let exp = vars.exponent_of(&prof).unwrap();
                // the series only has variables for non-root faces of degree >= d
                for d in (1..=max_degree).filter(|&d| prof.iter().all(|&f| f >= d)) {
                    for e in 1..=max_pq {
                        let n: u64 = table
                            .iter()
                            .filter(|((sep, non), _)| sep.is_none_or(|s| s >= e) && non.is_none_or(|x| x >= d))
                            .map(|(_, &c)| c)
                            .sum();
                        let got = g_annular(&ws[d - 1], e as i64, p as i64, q as i64).coeff(&exp);
                        let mut c = params(&[d as i64, e as i64, p as i64, q as i64]);
                        c.extend(prof.iter().map(|&x| x as i64));
                        r.check(got == big(n), c, || format!("d={d} e={e} p={p} q={q} faces {prof:?}: series {got}, oracle {n}"));
                    }
                }
            }
        }
    }
    for (d, w) in ws.iter().enumerate() {
        for p in 1..=max_pq as i64 {
            for q in 1..=max_pq as i64 {
                let ok = g_annular(w, p, p, q) == g_annular_extraction(w, p, q);
                r.check(ok, params(&[d as i64 + 1, p, q]), || format!("double sum vs extraction at d={} p={p} q={q}", d + 1));
            }
        }
    }
    let even_degrees: Vec<usize> = (1..=6).collect();
    let ev = FaceVars::faces(&even_degrees, 2);
    for b in 1..=2i64 {
        let w = solve_w(2 * b as usize, &ev);
        let v = solve_v(b as usize, &ev);
        for c in 1..=2i64 {
            for rr in 1..=2i64 {
                for s in 1..=2i64 {
                    let ok = b_annular(&v, c, rr, s) == even_part(&g_annular(&w, 2 * c, 2 * rr, 2 * s), &ev);
                    r.check(ok, params(&[b, c, rr, s]), || format!("B vs even G at b={b} c={c} r={rr} s={s}"));
                }
            }
        }
    }
    let g22 = g_annular(&ws[1], 2, 2, 2).constant_term();
    r.check(g22 == big(2), params(&[2, 2, 2, 2]), || format!("constant term of G at d=e=p=q=2 is {g22}"));
    Ok(r)
}

/// Mobile enumeration against rooted-map counts through the rooting claim.
pub fn mobiles(ds: &[i64], max_degree: usize, max_black: usize) -> Result<Report, OracleError> {
    let mut r = Report::new(7, "mobiles");
    let degrees: Vec<usize> = (1..=max_degree).collect();
    for &d in ds {
        let spec = MobileSpec::DBranching(d);
        let mut by_claim: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        let mut by_exposed: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for t in enumerate_mobiles(spec, max_degree, max_black) {
            let tc = t.canonical_code();
            r.check(t.excess() == -d, tc.clone(), || format!("excess {} for d={d}", t.excess()));
            let marks = t.distinct_markings(t.buds()) as i64 - t.distinct_markings(t.white_darts()) as i64;
            let prof = sorted(t.black_degrees());
            *by_claim.entry(prof.clone()).or_insert(0) += marks.max(0) as u64;
            let result = mobile_to_map(&t, spec)
                .map_err(|e| e.to_string())
                .and_then(|m| {
                    let p = m.plane().clone();
                    let img = map_to_mobile(&p, None, GirthSpec::Plain(d)).map_err(|e| e.to_string())?;
                    Ok((rooting_counts(&p, &img), marks))
                });
            match result {
                Ok((rc, marks)) => {
                    r.check(rc.holds() && rc.exposed_buds as i64 == marks, tc, || format!("rooting counts {rc:?}, claim {marks}"));
                    *by_exposed.entry(prof).or_insert(0) += rc.exposed_buds as u64;
                }
                Err(e) => r.check(false, tc, || e),
            }
        }
        let oracle = count_girth_class(d as usize, &degrees, max_black)?;
        let keys: BTreeSet<&Vec<usize>> = oracle.keys().chain(by_claim.keys()).collect();
        for prof in keys {
            let want = oracle.get(prof).copied().unwrap_or(0);
            let a = by_claim.get(prof).copied().unwrap_or(0);
            let b = by_exposed.get(prof).copied().unwrap_or(0);
            let mut c = vec![d];
            c.extend(prof.iter().map(|&x| x as i64));
            r.check(a == want && b == want, c, || format!("d={d} profile {prof:?}: claim {a}, exposed {b}, oracle {want}"));
        }
    }
    let families = [
        MobileSpec::BDibranching(1),
        MobileSpec::BDibranching(2),
        MobileSpec::Typed { d: 2, p: 2, q: 3 },
        MobileSpec::Typed { d: 1, p: 1, q: 2 },
        MobileSpec::TypedBipartite { b: 1, r: 1, s: 2 },
    ];
    for spec in families {
        for t in enumerate_mobiles(spec, 4, 2) {
            let want = spec.expected_excess();
            r.check(t.excess() == want, t.canonical_code(), || format!("{spec:?}: excess {} expected {want}", t.excess()));
        }
    }
    Ok(r)
}

/// Rightmost BFS, halving/doubling, tau, geodesic orientations and theta.
pub fn special_cases(max_edges: usize, max_black: usize) -> Result<Report, OracleError> {
    let mut r = Report::new(8, "special-cases");
    let levels = rooted_maps_by_insertion(max_edges)?;
    let maps = plane_maps(&levels);
    for p in &maps {
        if p.map.is_empty() {
            continue;
        }
        let deg = p.outer_degree();
        if p.map.girth() != Some(deg) {
            continue;
        }
        let d = deg as i64;
        let Ok(o) = suitable_orientation(p, None, GirthSpec::Plain(d)) else {
            r.check(false, code(p), || "pipeline failed on a class member".into());
            continue;
        };
        if deg == 1 {
            let bfs = rightmost_bfs_orientation(p);
            r.check(bfs.as_ref().ok() == Some(&o), code(p), || format!("rightmost BFS: {bfs:?}"));
        }
        let y = tau_inverse(p, &o, d);
        let back = tau_map(p, &y, d);
        r.check(back.as_ref().ok() == Some(&o), code(p), || "tau round trip".into());
        if deg % 2 == 0 && p.map.is_bipartite() {
            let b = suitable_orientation(p, None, GirthSpec::Bipartite(d / 2));
            let ok = match &b {
                Ok(b) => &double(p, b) == &o && halve(p, &o).as_ref().ok() == Some(b),
                Err(_) => false,
            };
            r.check(ok, code(p), || "halve/double".into());
        }
    }
    for p in levels.iter().flatten() {
        let found = enumerate_orientations(p, None, GirthSpec::Zero)?;
        let suitable: Vec<_> = found.iter().filter(|f| f.suitable).collect();
        let v0 = if p.map.is_empty() { 0 } else { p.map.vertex(p.root) };
        let geo = geodesic_biorientation(&p.map, v0);
        let ok = suitable.len() == 1 && suitable[0].orientation == geo;
        r.check(ok, code(p), || format!("{} orientations, {} suitable", found.len(), suitable.len()));
    }
    let zero = enumerate_mobiles(MobileSpec::ZeroBranching, 4, max_black);
    let codes: BTreeSet<Vec<i64>> = zero.iter().map(|t| t.canonical_code()).collect();
    // theta after theta_inverse being the identity makes theta_inverse injective
    for t in &zero {
        let tc = t.canonical_code();
        let result = theta_inverse(t).map_err(|e| e.to_string()).and_then(|w| {
            w.validate().map_err(|e| e.to_string())?;
            let back = theta(&w).map_err(|e| e.to_string())?;
            back.validate(MobileSpec::ZeroBranching).map_err(|e| e.to_string())?;
            Ok(back.canonical_code())
        });
        let ok = result.as_ref().is_ok_and(|back| back == &tc);
        r.check(ok, tc, || format!("theta: {result:?}"));
    }
    r.check(codes.len() == zero.len(), vec![], || "duplicate zero-branching mobiles".into());
    Ok(r)
}

/// All criteria with the acceptance bounds.
pub fn run_all() -> Result<Vec<Report>, OracleError> {
    Ok(vec![
        roundtrip(6, &[1, 2, 3, 4])?,
        orientations(5)?,
        counts(&[1, 2, 3], 5, 3)?,
        loopless(4, 20)?,
        formulas(5)?,
        annular(4, 4, 2)?,
        mobiles(&[1, 2, 3, 4], 5, 3)?,
        special_cases(4, 3)?,
    ])
}
