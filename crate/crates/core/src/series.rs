//! Exact truncated power series and the counting results built on them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Multivariate power series with integer coefficients. Each variable has a
/// positive grade and terms of graded degree above `bound` are dropped.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    grade: Rc<Vec<u32>>,
    bound: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*{e:?}")).collect();
        write!(f, "Series[{}]", parts.join(" + "))
    }
}

impl Series {
    pub fn zero(grade: Rc<Vec<u32>>, bound: u32) -> Self {
        assert!(grade.iter().all(|&g| g > 0), "grades must be positive");
        Series { grade, bound, terms: BTreeMap::new() }
    }

    fn like(&self) -> Self {
        Series { grade: self.grade.clone(), bound: self.bound, terms: BTreeMap::new() }
    }

    pub fn constant_like(&self, c: impl Into<BigInt>) -> Self {
        let mut s = self.like();
        s.add_term(vec![0; self.grade.len()], c.into());
        s
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(1)
    }

    pub fn zero_like(&self) -> Self {
        self.like()
    }

    pub fn monomial_like(&self, exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        let mut s = self.like();
        s.add_term(exps, c.into());
        s
    }

    pub fn nvars(&self) -> usize {
        self.grade.len()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn degree_of(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(self.grade.iter()).map(|(e, g)| e * g).sum()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() || self.degree_of(&exps) > self.bound {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut s = self.like();
        if c.is_zero() {
            return s;
        }
        for (e, v) in &self.terms {
            s.terms.insert(e.clone(), v * c);
        }
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = self.one_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        let mut s = self.like();
        for (e, v) in &self.terms {
            if keep(e) {
                s.terms.insert(e.clone(), v.clone());
            }
        }
        s
    }

    /// Coefficients of a series in one variable, indexed by exponent.
    pub fn univariate_coeffs(&self) -> Vec<BigInt> {
        assert_eq!(self.nvars(), 1);
        let top = self.bound / self.grade[0];
        (0..=top).map(|k| self.coeff(&[k])).collect()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|v| !v.is_negative())
    }

    /// Shifts every term by the monomial `exps` (multiplication by it).
    pub fn shift(&self, exps: &[u32]) -> Self {
        let mut s = self.like();
        for (e, v) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            s.add_term(ne, v.clone());
        }
        s
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let mut s = self.clone();
        for (e, v) in &rhs.terms {
            s.add_term(e.clone(), v.clone());
        }
        s
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let mut s = self.clone();
        for (e, v) in &rhs.terms {
            s.add_term(e.clone(), -v.clone());
        }
        s
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, v1) in &self.terms {
            let d1 = self.degree_of(e1);
            for (e2, v2) in &rhs.terms {
                if d1 + self.degree_of(e2) > self.bound {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += v1 * v2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Series { grade: self.grade.clone(), bound: self.bound, terms: acc }
    }
}

// ---------------------------------------------------------------------------
// Face variables.

/// The variables `x_i` (`i` in `degrees`): either one variable per degree,
/// graded by face count, or the specialization `x_i = t^i`.
#[derive(Clone, Debug)]
pub struct FaceVars {
    pub degrees: Vec<usize>,
    pub by_half_edges: bool,
    proto: Series,
}

impl FaceVars {
    /// One variable per degree; `bound` limits the number of faces.
    pub fn faces(degrees: &[usize], bound: u32) -> Self {
        let grade = Rc::new(vec![1; degrees.len()]);
        FaceVars { degrees: degrees.to_vec(), by_half_edges: false, proto: Series::zero(grade, bound) }
    }

    /// `x_i = t^i` for every `i` in `degrees`; `bound` limits the power of `t`.
    pub fn half_edges(degrees: &[usize], bound: u32) -> Self {
        let grade = Rc::new(vec![1]);
        FaceVars { degrees: degrees.to_vec(), by_half_edges: true, proto: Series::zero(grade, bound) }
    }

    pub fn zero(&self) -> Series {
        self.proto.zero_like()
    }

    pub fn one(&self) -> Series {
        self.proto.one_like()
    }

    pub fn x(&self, i: usize) -> Series {
        match self.degrees.iter().position(|&d| d == i) {
            None => self.zero(),
            Some(k) => {
                if self.by_half_edges {
                    self.proto.monomial_like(vec![i as u32], 1)
                } else {
                    let mut e = vec![0; self.degrees.len()];
                    e[k] = 1;
                    self.proto.monomial_like(e, 1)
                }
            }
        }
    }

    /// Exponent vector of a face-degree multiset (degrees outside the set
    /// give `None`).
    pub fn exponent_of(&self, faces: &[usize]) -> Option<Vec<u32>> {
        if self.by_half_edges {
            return Some(vec![faces.iter().sum::<usize>() as u32]);
        }
        let mut e = vec![0; self.degrees.len()];
        for f in faces {
            e[self.degrees.iter().position(|d| d == f)?] += 1;
        }
        Some(e)
    }
}

// ---------------------------------------------------------------------------
// Combinatorial helpers.

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    factorial(n as u64) / (factorial(k as u64) * factorial((n - k) as u64))
}

pub fn multinomial(parts: &[u64]) -> BigInt {
    let n: u64 = parts.iter().sum();
    parts.iter().fold(factorial(n), |a, &p| a / factorial(p))
}

/// Exact division; panics when `num` is not a multiple of `den`.
pub fn exact_div(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(!den.is_zero(), "division by zero");
    let (q, r) = (num / den, num % den);
    assert!(r.is_zero(), "inexact division {num} / {den}");
    q
}

/// `h_j(w_1, w_2, ...)`: compositions of `j` with `w_i` marking parts of
/// size `i`. `args[k]` is `w_{k+1}`; parts beyond `args` contribute zero.
pub fn h_poly(j: usize, args: &[Series], one: &Series) -> Series {
    let mut h = vec![one.clone()];
    for m in 1..=j {
        let mut s = one.zero_like();
        for i in 1..=m.min(args.len()) {
            s = &s + &(&args[i - 1] * &h[m - i]);
        }
        h.push(s);
    }
    h.pop().unwrap()
}

fn fixed_point(mut state: Vec<Series>, step: impl Fn(&mut Vec<Series>), bound: u32) -> Vec<Series> {
    for _ in 0..(bound as usize + 2) * 4 {
        let before = state.clone();
        step(&mut state);
        if before == state {
            return state;
        }
    }
    panic!("fixed-point iteration did not stabilize");
}

// ---------------------------------------------------------------------------
// The W system.

/// Solution of the W system for girth `d`: `w[j + 2]` is `W_j` for `j` in
/// `-2..=d`.
#[derive(Clone, Debug)]
pub struct WSolution {
    pub d: usize,
    pub w: Vec<Series>,
}

impl WSolution {
    pub fn get(&self, j: i64) -> &Series {
        &self.w[(j + 2) as usize]
    }

    /// `F_d = W_{d-2} - sum_{j=-2}^{d-3} W_j W_{d-2-j}`.
    pub fn f(&self) -> Series {
        let d = self.d as i64;
        let mut f = self.get(d - 2).clone();
        for j in -2..=d - 3 {
            f = &f - &(self.get(j) * self.get(d - 2 - j));
        }
        f
    }

    /// Re-evaluates every equation and reports whether all residuals vanish.
    pub fn residuals_vanish(&self, vars: &FaceVars) -> bool {
        let mut again = self.w.clone();
        w_step(self.d, vars, &mut again);
        again == self.w
    }
}

/// `[u^k] sum_{i in Delta, i >= d} x_i u^i (1 + W_0 + u^-1 W_{-1} + u^-2)^{i-1}`.
fn black_extraction(d: usize, vars: &FaceVars, k: i64, w0: &Series, wm1: &Series) -> Series {
    let one = vars.one();
    let r = &one + w0;
    let mut total = vars.zero();
    for &i in &vars.degrees {
        if i < d {
            continue;
        }
        let i = i as i64;
        // a + 2b = i - k, with a + b <= i - 1
        let rest = i - k;
        if rest < 0 {
            continue;
        }
        let mut inner = vars.zero();
        for b in 0..=rest / 2 {
            let a = rest - 2 * b;
            if a + b > i - 1 {
                continue;
            }
            let c = i - 1 - a - b;
            let coeff = multinomial(&[a as u64, b as u64, c as u64]);
            let term = &r.pow(c as u32) * &wm1.pow(a as u32);
            inner = &inner + &term.scale(&coeff);
        }
        total = &total + &(&vars.x(i as usize) * &inner);
    }
    total
}

fn w_step(d: usize, vars: &FaceVars, w: &mut [Series]) {
    let di = d as i64;
    let idx = |j: i64| (j + 2) as usize;
    let one = vars.one();
    // first line for j in [-2 .. d-3], second line for j in [d-2 .. d];
    // when d = 1 the second line takes precedence on j = -1.
    for j in -2..=di {
        let value = if j <= di - 3 {
            let args: Vec<Series> = (1..di).map(|k| w[idx(k)].clone()).collect();
            h_poly((j + 2) as usize, &args, &one)
        } else {
            black_extraction(d, vars, j + 2, &w[idx(0)], &w[idx(-1)])
        };
        w[idx(j)] = value;
    }
}

/// Solves the W system by fixed-point iteration.
pub fn solve_w(d: usize, vars: &FaceVars) -> WSolution {
    assert!(d >= 1, "d must be positive");
    let mut init = vec![vars.zero(); d + 3];
    init[0] = vars.one();
    let bound = vars.one().bound();
    let w = fixed_point(init, |w| w_step(d, vars, w), bound);
    WSolution { d, w }
}

pub fn f_d(d: usize, vars: &FaceVars) -> Series {
    solve_w(d, vars).f()
}

// ---------------------------------------------------------------------------
// The V system (bipartite case).

/// `v[j + 1]` is `V_j` for `j` in `-1..=b`.
#[derive(Clone, Debug)]
pub struct VSolution {
    pub b: usize,
    pub v: Vec<Series>,
}

impl VSolution {
    pub fn get(&self, j: i64) -> &Series {
        &self.v[(j + 1) as usize]
    }

    /// `E_b = V_{b-1} - sum_{j=-1}^{b-2} V_j V_{b-j-1}`.
    pub fn e(&self) -> Series {
        let b = self.b as i64;
        let mut e = self.get(b - 1).clone();
        for j in -1..=b - 2 {
            e = &e - &(self.get(j) * self.get(b - j - 1));
        }
        e
    }

    pub fn residuals_vanish(&self, vars: &FaceVars) -> bool {
        let mut again = self.v.clone();
        v_step(self.b, vars, &mut again);
        again == self.v
    }
}

fn v_step(b: usize, vars: &FaceVars, v: &mut [Series]) {
    let bi = b as i64;
    let idx = |j: i64| (j + 1) as usize;
    let one = vars.one();
    for j in -1..=bi {
        let value = if j <= bi - 2 {
            let args: Vec<Series> = (1..bi).map(|k| v[idx(k)].clone()).collect();
            h_poly((j + 1) as usize, &args, &one)
        } else {
            let r = &one + &v[idx(0)];
            let mut s = vars.zero();
            for &deg in &vars.degrees {
                if deg % 2 == 1 || deg < 2 * b {
                    continue;
                }
                let i = (deg / 2) as i64;
                let c = binomial(2 * i - 1, i - j - 1);
                s = &s + &(&vars.x(deg) * &r.pow((i + j) as u32)).scale(&c);
            }
            s
        };
        v[idx(j)] = value;
    }
}

pub fn solve_v(b: usize, vars: &FaceVars) -> VSolution {
    assert!(b >= 1, "b must be positive");
    let mut init = vec![vars.zero(); b + 2];
    init[0] = vars.one();
    let bound = vars.one().bound();
    let v = fixed_point(init, |v| v_step(b, vars, v), bound);
    VSolution { b, v }
}

/// Keeps only the monomials without odd-degree face variables.
pub fn even_part(s: &Series, vars: &FaceVars) -> Series {
    if vars.by_half_edges {
        return s.clone();
    }
    let odd: Vec<bool> = vars.degrees.iter().map(|d| d % 2 == 1).collect();
    s.filter(|e| e.iter().zip(&odd).all(|(&x, &o)| !o || x == 0))
}

// ---------------------------------------------------------------------------
// Annular series.

/// `beta(p, i, e) = p! / (i! floor((p-i-e)/2)! floor((p-i+e-1)/2)!)`.
pub fn beta_coeff(p: i64, i: i64, e: i64) -> Option<BigInt> {
    if i < 0 || e < 1 || i > p - e {
        return None;
    }
    let a = (p - i - e).div_euclid(2);
    let b = (p - i + e - 1).div_euclid(2);
    Some(exact_div(&factorial(p as u64), &(factorial(i as u64) * factorial(a as u64) * factorial(b as u64))))
}

/// `gamma(p, i, a)`: zero unless `p - i = a (mod 2)`.
pub fn gamma_coeff(p: i64, i: i64, a: i64) -> BigInt {
    if (p - i - a).rem_euclid(2) != 0 || p - i - a < 0 {
        return BigInt::zero();
    }
    exact_div(
        &factorial(p as u64),
        &(factorial(i as u64) * factorial(((p - i - a) / 2) as u64) * factorial(((p - i + a) / 2) as u64)),
    )
}

/// Rooted annular maps of type (p, q), non-separating girth at least `d`,
/// separating girth at least `e`, by the double-sum formula.
pub fn g_annular(w: &WSolution, e: i64, p: i64, q: i64) -> Series {
    let one = w.get(-2);
    let r = one + w.get(0);
    let wm1 = w.get(-1);
    let mut g = one.zero_like();
    for i in 0..=p - e {
        for j in 0..=q - e {
            if (i + j - p - q).rem_euclid(2) != 0 {
                continue;
            }
            let num = beta_coeff(p, i, e).unwrap() * beta_coeff(q, j, e).unwrap() * 2;
            let c = exact_div(&num, &BigInt::from(p + q - i - j));
            let term = &r.pow(((p + q - i - j) / 2) as u32) * &wm1.pow((i + j) as u32);
            g = &g + &term.scale(&c);
        }
    }
    g
}

/// `p [u^{p-q}] (1 + W_0 + u^-1 W_{-1} + u^-2)^q`, the case `e = p`.
pub fn g_annular_extraction(w: &WSolution, p: i64, q: i64) -> Series {
    let one = w.get(-2);
    let r = one + w.get(0);
    let wm1 = w.get(-1);
    let mut g = one.zero_like();
    let rest = q - p;
    if rest < 0 {
        return g;
    }
    for b in 0..=rest / 2 {
        let a = rest - 2 * b;
        if a + b > q {
            continue;
        }
        let c = q - a - b;
        let coeff = multinomial(&[a as u64, b as u64, c as u64]) * p;
        g = &g + &(&r.pow(c as u32) * &wm1.pow(a as u32)).scale(&coeff);
    }
    g
}

/// `4rs/(r+s) C(2r-1, r-c) C(2s-1, s-c) (1 + V_0)^{r+s}`.
pub fn b_annular(v: &VSolution, c: i64, r: i64, s: i64) -> Series {
    let one = v.get(-1);
    let num = binomial(2 * r - 1, r - c) * binomial(2 * s - 1, s - c) * (4 * r * s);
    let coeff = exact_div(&num, &BigInt::from(r + s));
    (one + v.get(0)).pow((r + s) as u32).scale(&coeff)
}

// ---------------------------------------------------------------------------
// Closed formulas.

/// Rooted loopless maps with `n` edges: `2 (4n+1)! / ((n+1)! (3n+2)!)`.
pub fn count_loopless(n: u64) -> BigInt {
    exact_div(&(factorial(4 * n + 1) * 2), &(factorial(n + 1) * factorial(3 * n + 2)))
}

/// `alpha = 1 + t alpha^4` up to `t^bound`.
pub fn alpha_series(bound: u32) -> Series {
    let proto = Series::zero(Rc::new(vec![1]), bound);
    let t = proto.monomial_like(vec![1], 1);
    let one = proto.one_like();
    let a = fixed_point(vec![one.clone()], |s| s[0] = &one + &(&t * &s[0].pow(4)), bound);
    a.into_iter().next().unwrap()
}

/// `C(t) = alpha^2 (2 - alpha)`.
pub fn loopless_series(bound: u32) -> Series {
    let a = alpha_series(bound);
    let two = a.constant_like(2);
    &a.pow(2) * &(&two - &a)
}

/// Rooted simple bipartite maps with `n[k]` faces of degree `2(k+2)`.
pub fn count_simple_bipartite(n: &[u64]) -> BigInt {
    let faces: u64 = n.iter().sum();
    assert!(faces > 0, "at least one face is required");
    let e: u64 = n.iter().enumerate().map(|(k, &c)| (k as u64 + 2) * c).sum();
    let mut num = factorial(e + faces - 3) * 2;
    let mut den = factorial(e - 1);
    for (k, &c) in n.iter().enumerate() {
        let i = k as i64 + 2;
        num *= binomial(2 * i - 1, i - 2).pow(c as u32);
        den *= factorial(c);
    }
    exact_div(&num, &den)
}

/// Rooted bipartite maps with `n[k]` faces of degree `2(k+1)`.
pub fn count_bipartite(n: &[u64]) -> BigInt {
    let faces: u64 = n.iter().sum();
    assert!(faces > 0, "at least one face is required");
    let e: u64 = n.iter().enumerate().map(|(k, &c)| (k as u64 + 1) * c).sum();
    let v = 2 + e - faces;
    let mut num = factorial(e) * 2;
    let mut den = factorial(v);
    for (k, &c) in n.iter().enumerate() {
        let i = k as i64 + 1;
        num *= binomial(2 * i - 1, i - 1).pow(c as u32);
        den *= factorial(c);
    }
    exact_div(&num, &den)
}

/// Coefficient of `prod x_{2i}^{n[i-2]}` in `R^a`, where
/// `R = 1 + sum_{i>=2} x_{2i} C(2i-1, i-2) R^{i+1}`.
pub fn lagrange_ra(a: u64, n: &[u64]) -> BigInt {
    assert!(a >= 1);
    let s1: u64 = n.iter().enumerate().map(|(k, &c)| (k as u64 + 3) * c).sum();
    let s2: u64 = n.iter().enumerate().map(|(k, &c)| (k as u64 + 2) * c).sum();
    let mut num = factorial(s1 + a - 1) * a;
    let mut den = factorial(s2 + a);
    for (k, &c) in n.iter().enumerate() {
        let i = k as i64 + 2;
        num *= binomial(2 * i - 1, i - 2).pow(c as u32);
        den *= factorial(c);
    }
    exact_div(&num, &den)
}

/// `R^a` by direct expansion of the defining equation, with variables
/// `x_4, x_6, ..., x_{2k}` and at most `bound` faces.
pub fn ra_series(a: u32, k: usize, bound: u32) -> Series {
    let degrees: Vec<usize> = (2..=k).map(|i| 2 * i).collect();
    let vars = FaceVars::faces(&degrees, bound);
    let one = vars.one();
    let r = fixed_point(
        vec![one.clone()],
        |s| {
            let mut next = one.clone();
            for i in 2..=k as i64 {
                let term = &vars.x(2 * i as usize) * &s[0].pow((i + 1) as u32);
                next = &next + &term.scale(&binomial(2 * i - 1, i - 2));
            }
            s[0] = next;
        },
        bound,
    );
    r[0].pow(a)
}

// ---------------------------------------------------------------------------
// Loopless maps through Motzkin paths.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Weighted Motzkin paths (up `tR`, level `tS`, down `t`) by dynamic
/// programming: bridges ending at heights `0..=max_height` and excursions.
pub fn motzkin_series(r: &Series, s: &Series, max_height: usize) -> (Vec<Series>, Series) {
    let bound = r.bound();
    let t = r.monomial_like(vec![1], 1);
    let up = &t * r;
    let level = &t * s;
    let n = bound as i64;
    let width = (2 * n + 1) as usize;
    let off = n;
    let mut bridges = vec![r.zero_like(); width];
    let mut cur = vec![r.zero_like(); width];
    cur[off as usize] = r.one_like();
    let mut exc = vec![r.zero_like(); width];
    exc[off as usize] = r.one_like();
    let mut excursion = r.zero_like();
    for _ in 0..=n {
        for h in 0..width {
            bridges[h] = &bridges[h] + &cur[h];
        }
        excursion = &excursion + &exc[off as usize];
        let step = |state: &Vec<Series>, nonneg: bool| {
            let mut next = vec![r.zero_like(); width];
            for h in 0..width {
                if state[h].is_zero() {
                    continue;
                }
                if h + 1 < width {
                    next[h + 1] = &next[h + 1] + &(&state[h] * &up);
                }
                next[h] = &next[h] + &(&state[h] * &level);
                if h > 0 && (!nonneg || h as i64 > off) {
                    next[h - 1] = &next[h - 1] + &(&state[h] * &t);
                }
            }
            next
        };
        cur = step(&cur, false);
        exc = step(&exc, true);
    }
    let b = (0..=max_height).map(|k| bridges[off as usize + k].clone()).collect();
    (b, excursion)
}

/// Checks the Motzkin identities, the closed-form solution and the loopless
/// specialization of `F_2` up to `t^bound`.
pub fn verify_loopless_reduction(bound: u32) -> Vec<IdentityCheck> {
    let degrees: Vec<usize> = (2..=bound as usize).collect();
    let vars = FaceVars::half_edges(&degrees, bound);
    let w = solve_w(2, &vars);
    let one = vars.one();
    let t = one.monomial_like(vec![1], 1);
    let r = &one + w.get(0);
    let s = w.get(-1).clone();
    let (b, m) = motzkin_series(&r, &s, 3);
    let trm = &(&t * &r) * &m;
    let mut out = Vec::new();
    let mut check = |name: &str, holds: bool| out.push(IdentityCheck { name: name.to_string(), holds });

    check("R = 1 + t B_1", r == &one + &(&t * &b[1]));
    check("S = t B_2", s == &t * &b[2]);
    check("F_2 = R - 1 - S^2 - t B_3", w.f() == &(&(&r - &one) - &s.pow(2)) - &(&t * &b[3]));
    check("(i) B_k = B_0 (tRM)^k", (0..=3).all(|k| b[k] == &b[0] * &trm.pow(k as u32)));
    let t2 = t.pow(2);
    check("(ii) M = 1 + tSM + t^2 R M^2", m == &(&one + &(&(&t * &s) * &m)) + &(&(&t2 * &r) * &m.pow(2)));
    check(
        "(iii) B_0 = 1 + tSB_0 + 2t^2 RMB_0",
        b[0] == &(&one + &(&(&t * &s) * &b[0])) + &(&(&(&t2 * &r) * &m) * &b[0]).scale(&BigInt::from(2)),
    );
    check("(iv) R = 1 + t^2 B_0 M R", r == &one + &(&(&(&t2 * &b[0]) * &m) * &r));
    check("(v) S = t^3 B_0 M^2 R^2", s == &(&(&t.pow(3) * &b[0]) * &m.pow(2)) * &r.pow(2));

    // alpha(t^2) with alpha = 1 + t^2 alpha^4
    let alpha2 = fixed_point(vec![one.clone()], |x| x[0] = &one + &(&t2 * &x[0].pow(4)), bound).remove(0);
    check("M = alpha", m == alpha2);
    check("B_0 = alpha^2", b[0] == alpha2.pow(2));
    check("R = alpha", r == alpha2);
    check("S = t^3 alpha^6", s == &t.pow(3) * &alpha2.pow(6));
    let two = one.constant_like(2);
    check("F_2 = alpha^2 (2 - alpha) - 1", w.f() == &(&alpha2.pow(2) * &(&two - &alpha2)) - &one);

    // degenerate weights: excursions are Catalan numbers, bridges central binomials
    let zero = one.zero_like();
    let (b_plain, m_plain) = motzkin_series(&one, &zero, 0);
    let catalan = (0..=bound / 2).all(|k| {
        m_plain.coeff(&[2 * k]) == exact_div(&binomial(2 * k as i64, k as i64), &BigInt::from(k + 1))
    });
    let central = (0..=bound / 2).all(|k| b_plain[0].coeff(&[2 * k]) == binomial(2 * k as i64, k as i64));
    check("excursions at S=0, R=1 are Catalan numbers in t^2", catalan);
    check("bridges at S=0, R=1 are central binomials in t^2", central);
    out
}

/// Coefficients `[t^{2n}] F_2(t^2, t^3, ...)`, i.e. loopless maps with `n`
/// edges for `n >= 1`.
pub fn loopless_from_f2(max_n: u32) -> Vec<BigInt> {
    let bound = 2 * max_n;
    let degrees: Vec<usize> = (2..=bound as usize).collect();
    let vars = FaceVars::half_edges(&degrees, bound);
    let f = f_d(2, &vars);
    (0..=max_n).map(|n| if n == 0 { BigInt::one() } else { f.coeff(&[2 * n]) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn h_examples() {
        let vars = FaceVars::faces(&[3, 4, 5], 6);
        let w: Vec<Series> = [3, 4, 5].iter().map(|&i| vars.x(i)).collect();
        let one = vars.one();
        assert_eq!(h_poly(0, &w, &one), one);
        assert_eq!(h_poly(1, &w, &one), w[0]);
        let h3 = &(&w[0].pow(3) + &(&w[0] * &w[1]).scale(&int(2))) + &w[2];
        assert_eq!(h_poly(3, &w, &one), h3);
    }

    #[test]
    fn triangulations() {
        let vars = FaceVars::faces(&[3], 5);
        let w = solve_w(3, &vars);
        assert!(w.get(2).is_zero() && w.get(3).is_zero());
        let x = vars.x(3);
        assert_eq!(w.get(1), &(&x * &(&vars.one() + w.get(0)).pow(2)));
        let f = w.f();
        assert_eq!((f.coeff(&[1]), f.coeff(&[3]), f.coeff(&[5])), (int(1), int(1), int(3)));
        assert!(w.residuals_vanish(&vars));
    }

    #[test]
    fn general_maps() {
        let degrees: Vec<usize> = (1..=5).collect();
        let vars = FaceVars::half_edges(&degrees, 5);
        let f = f_d(1, &vars);
        assert_eq!((f.coeff(&[1]), f.coeff(&[3]), f.coeff(&[5])), (int(1), int(2), int(9)));
    }

    #[test]
    fn empty_degree_set() {
        let vars = FaceVars::faces(&[], 4);
        let w = solve_w(2, &vars);
        assert!(w.w[1..].iter().all(|s| s.is_zero()));
    }

    #[test]
    fn bipartite_reduction() {
        for b in 1..=2usize {
            let degrees: Vec<usize> = (2 * b..=6).collect();
            let vars = FaceVars::faces(&degrees, 3);
            let f = f_d(2 * b, &vars);
            let v = solve_v(b, &vars);
            assert!(v.residuals_vanish(&vars));
            assert_eq!(v.e(), even_part(&f, &vars));
            let w = solve_w(2 * b, &vars);
            for i in 0..=b as i64 {
                assert_eq!(v.get(i), &even_part(w.get(2 * i), &vars));
            }
            for j in (-1..=2 * b as i64).filter(|j| j.rem_euclid(2) == 1) {
                assert!(even_part(w.get(j), &vars).is_zero());
            }
        }
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_coeff(1, 0, 1), Some(int(1)));
        assert_eq!(beta_coeff(2, 0, 2), Some(int(2)));
        assert_eq!(beta_coeff(3, 1, 1), Some(int(6)));
        assert_eq!(beta_coeff(3, 3, 1), None);
    }

    #[test]
    fn telescoping_identity() {
        for p in 1..=6i64 {
            for q in 1..=6i64 {
                for e in 1..=p.min(q) {
                    for i in 0..=p - e {
                        for j in 0..=q - e {
                            let lhs: BigInt = (e..=(p - i).min(q - j))
                                .map(|a| gamma_coeff(p, i, a) * gamma_coeff(q, j, a) * a)
                                .sum();
                            let rhs = if (i + j - p - q).rem_euclid(2) == 0 {
                                exact_div(
                                    &(beta_coeff(p, i, e).unwrap() * beta_coeff(q, j, e).unwrap() * 2),
                                    &int(p + q - i - j),
                                )
                            } else {
                                int(0)
                            };
                            assert_eq!(lhs, rhs, "p={p} q={q} e={e} i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn annular_forms_agree() {
        let vars = FaceVars::faces(&[2, 3, 4], 3);
        let w = solve_w(2, &vars);
        assert_eq!(g_annular(&w, 2, 2, 2).constant_term(), int(2));
        for (p, q) in [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)] {
            assert_eq!(g_annular(&w, p, p, q), g_annular_extraction(&w, p, q), "p={p} q={q}");
        }
        assert!(g_annular(&w, 3, 2, 4).is_zero());
        let v = solve_v(1, &vars);
        assert_eq!(b_annular(&v, 1, 1, 1).constant_term(), int(2));
        assert_eq!(b_annular(&v, 1, 1, 1), even_part(&g_annular(&w, 2, 2, 2), &vars));
    }

    #[test]
    fn loopless_numbers() {
        let expected = [1, 1, 3, 13, 68];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(count_loopless(n as u64), int(c));
        }
        let a = alpha_series(3);
        assert_eq!(a.univariate_coeffs(), vec![int(1), int(1), int(4), int(22)]);
        let c = loopless_series(4);
        assert_eq!(c.univariate_coeffs(), expected.iter().map(|&v| int(v)).collect::<Vec<_>>());
        assert_eq!(loopless_from_f2(4), expected.iter().map(|&v| int(v)).collect::<Vec<_>>());
    }

    #[test]
    fn motzkin_identities() {
        for c in verify_loopless_reduction(14) {
            assert!(c.holds, "{}", c.name);
        }
    }

    #[test]
    fn closed_formula_examples() {
        assert_eq!(count_simple_bipartite(&[1]), int(2));
        assert_eq!(count_simple_bipartite(&[0, 1]), int(5));
        assert_eq!(count_simple_bipartite(&[2]), int(1));
        assert_eq!(count_bipartite(&[1]), int(1));
        assert_eq!(count_bipartite(&[2]), int(1));
        assert_eq!(count_bipartite(&[0, 1]), int(2));
        assert_eq!(lagrange_ra(1, &[0]), int(1));
        assert_eq!(lagrange_ra(1, &[1]), int(1));
        assert_eq!(lagrange_ra(2, &[1]), int(2));
    }

    #[test]
    fn lagrange_matches_expansion() {
        for a in 1..=3u32 {
            let s = ra_series(a, 4, 3);
            for (e, c) in s.terms() {
                let n: Vec<u64> = e.iter().map(|&x| x as u64).collect();
                assert_eq!(&lagrange_ra(a as u64, &n), c);
            }
        }
    }
}
