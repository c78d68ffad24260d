//! Closed-form summation of multiplicative-geometric terms over polyhedral
//! lattice regions.
//!
//! A term has the shape `konst · scalar · P(x) · Π κ_i^{x_i} · t^{w·x + b}`
//! with `P` a polynomial with rational coefficients.  Variables are summed
//! out one at a time by the usual Fourier–Motzkin case split: for the chosen
//! variable v the region gives lower bounds `v ≥ L_i(x')` and upper bounds
//! `v ≤ U_j(x')`; we split according to which L is the max and which U the
//! min, sum v in closed form with
//!
//! ```text
//!   Σ_{v ≥ a} v^k X^v = X^a Σ_i C(k,i) a^{k-i} E_i(X),   E_i(X) = Σ_{v ≥ 0} v^i X^v,
//! ```
//!
//! and fold `X^{L(x')}` back into the remaining multipliers.  Every bound must
//! have coefficient ±1 on the eliminated variable; every region used here
//! needs only such unimodular cuts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeffs::{Annulus, CoeffElement, LPoly, Mono, MonoCtx, RatFunc, Session};
use crate::error::{Error, Result};
use crate::exec;

// ---------------------------------------------------------------------------
// affine forms and regions

/// a·x + b
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub a: Vec<i64>,
    pub b: i64,
}

impl Affine {
    pub fn new(a: Vec<i64>, b: i64) -> Self {
        Affine { a, b }
    }
    pub fn constant(dims: usize, b: i64) -> Self {
        Affine { a: vec![0; dims], b }
    }
    pub fn var(dims: usize, i: usize) -> Self {
        let mut a = vec![0; dims];
        a[i] = 1;
        Affine { a, b: 0 }
    }
    pub fn dims(&self) -> usize {
        self.a.len()
    }
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.a.iter().zip(x).map(|(a, x)| a * x).sum::<i64>() + self.b
    }
    pub fn add(&self, o: &Affine) -> Affine {
        Affine { a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(), b: self.b + o.b }
    }
    pub fn sub(&self, o: &Affine) -> Affine {
        self.add(&o.scale(-1))
    }
    pub fn scale(&self, k: i64) -> Affine {
        Affine { a: self.a.iter().map(|x| x * k).collect(), b: self.b * k }
    }
    pub fn plus(&self, k: i64) -> Affine {
        Affine { a: self.a.clone(), b: self.b + k }
    }
    pub fn is_constant(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }
    /// Constraint `self ≥ 0` tightened for integer points: divide by the
    /// content of `a` and floor the constant.
    fn tighten(mut self) -> Affine {
        let g = self.a.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g > 1 {
            for x in self.a.iter_mut() {
                *x /= g;
            }
            self.b = Integer::div_floor(&self.b, &g);
        }
        self
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["m", "n", "l", "x3", "x4", "x5"];
        let mut s = String::new();
        for (i, &c) in self.a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let v = names.get(i).copied().unwrap_or("x");
            let sign = if c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                s.push_str(&format!("{sign}{v}"));
            } else {
                s.push_str(&format!("{sign}{mag}{v}"));
            }
        }
        if self.b != 0 || s.is_empty() {
            if self.b >= 0 && !s.is_empty() {
                s.push('+');
            }
            s.push_str(&self.b.to_string());
        }
        write!(f, "{s}")
    }
}

/// Integer points satisfying every `cons[i] ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub dims: usize,
    pub cons: Vec<Affine>,
}

impl Region {
    pub fn whole(dims: usize) -> Self {
        Region { dims, cons: Vec::new() }
    }
    pub fn with(mut self, c: Affine) -> Self {
        self.cons.push(c);
        self
    }
    pub fn with_all(mut self, cs: impl IntoIterator<Item = Affine>) -> Self {
        self.cons.extend(cs);
        self
    }
    /// x_i ≥ k
    pub fn ge(self, i: usize, k: i64) -> Self {
        let d = self.dims;
        self.with(Affine::var(d, i).plus(-k))
    }
    /// x_i ≤ k
    pub fn le(self, i: usize, k: i64) -> Self {
        let d = self.dims;
        self.with(Affine::var(d, i).scale(-1).plus(k))
    }
    /// f ≥ k
    pub fn form_ge(self, f: &Affine, k: i64) -> Self {
        self.with(f.plus(-k))
    }
    /// f ≤ k
    pub fn form_le(self, f: &Affine, k: i64) -> Self {
        self.with(f.scale(-1).plus(k))
    }
    pub fn contains(&self, x: &[i64]) -> bool {
        self.cons.iter().all(|c| c.eval(x) >= 0)
    }
    /// Sound integer-infeasibility test (Fourier–Motzkin with tightening).
    /// `false` means the region certainly has no integer point.
    pub fn maybe_feasible(&self) -> bool {
        fm_feasible(&self.cons, self.dims)
    }

    fn simplified(&self) -> Option<Region> {
        simplify(&self.cons).map(|cons| Region { dims: self.dims, cons })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cons.iter().map(|c| format!("{c} >= 0")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Tighten, drop trivially true constraints, keep the strongest of parallel
/// ones.  None when a constant constraint is violated.
fn simplify(cons: &[Affine]) -> Option<Vec<Affine>> {
    let mut best: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for c in cons {
        let c = c.clone().tighten();
        if c.is_constant() {
            if c.b < 0 {
                return None;
            }
            continue;
        }
        best.entry(c.a).and_modify(|b| *b = (*b).min(c.b)).or_insert(c.b);
    }
    // opposite pairs a·x + b ≥ 0 and −a·x + b' ≥ 0 need b + b' ≥ 0
    for (a, b) in &best {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        if let Some(b2) = best.get(&neg) {
            if b + b2 < 0 {
                return None;
            }
        }
    }
    Some(best.into_iter().map(|(a, b)| Affine { a, b }).collect())
}

fn fm_feasible(cons: &[Affine], dims: usize) -> bool {
    let Some(mut cur) = simplify(cons) else { return false };
    for v in 0..dims {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cur {
            match c.a[v].signum() {
                1 => pos.push(c),
                -1 => neg.push(c),
                _ => rest.push(c),
            }
        }
        for p in &pos {
            for n in &neg {
                let (cp, cn) = (p.a[v], -n.a[v]);
                rest.push(p.scale(cn).add(&n.scale(cp)));
            }
        }
        match simplify(&rest) {
            Some(r) => cur = r,
            None => return false,
        }
        if cur.len() > 400 {
            // give up pruning; correctness never depends on it
            return true;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// multivariate polynomials with rational coefficients

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    dims: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(dims: usize) -> Self {
        MPoly { dims, terms: BTreeMap::new() }
    }
    pub fn constant(dims: usize, c: BigRational) -> Self {
        let mut p = Self::zero(dims);
        if !c.is_zero() {
            p.terms.insert(vec![0; dims], c);
        }
        p
    }
    pub fn one(dims: usize) -> Self {
        Self::constant(dims, BigRational::one())
    }
    pub fn var(dims: usize, i: usize) -> Self {
        let mut e = vec![0; dims];
        e[i] = 1;
        let mut p = Self::zero(dims);
        p.terms.insert(e, BigRational::one());
        p
    }
    pub fn from_affine(f: &Affine) -> Self {
        let d = f.dims();
        let mut p = Self::constant(d, BigRational::from_integer(f.b.into()));
        for (i, &c) in f.a.iter().enumerate() {
            if c != 0 {
                p = p.add(&Self::var(d, i).scale(&BigRational::from_integer(c.into())));
            }
        }
        p
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.dims]).is_some_and(|c| c.is_one())
    }
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&vec![0; self.dims]).cloned(),
            _ => None,
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let slot = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        MPoly { dims: self.dims, terms }
    }
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dims);
        }
        MPoly { dims: self.dims, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dims);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = out.terms.entry(e).or_insert_with(BigRational::zero);
                *slot += c1 * c2;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dims);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }
    /// Coefficients of v^0, v^1, ... as polynomials in the other variables.
    fn split_var(&self, v: usize) -> Vec<MPoly> {
        let mut out = vec![Self::zero(self.dims); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }
    /// v ↦ −v
    fn negate_var(&self, v: usize) -> Self {
        MPoly {
            dims: self.dims,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), if e[v] % 2 == 1 { -c } else { c.clone() })).collect(),
        }
    }
    pub fn eval(&self, x: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    term *= BigRational::from_integer(BigInt::from(*xi).pow(k));
                }
            }
            acc += term;
        }
        acc
    }
    pub fn eval_f64(&self, x: &[i64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(0.0);
                for (xi, &k) in x.iter().zip(e) {
                    t *= (*xi as f64).powi(k as i32);
                }
                t
            })
            .sum()
    }
}

/// Σ_{v=1}^{n} v^k as a polynomial in n (coefficients low to high).
fn faulhaber(k: u32) -> Vec<BigRational> {
    // (n+1)^{k+1} − 1 = Σ_{j=0}^{k} C(k+1, j) F_j(n)
    let mut fs: Vec<Vec<BigRational>> = Vec::new();
    for kk in 0..=k {
        let mut rhs = vec![BigRational::zero(); kk as usize + 2];
        for (i, slot) in rhs.iter_mut().enumerate() {
            *slot = BigRational::from_integer(binom(kk as i64 + 1, i as i64));
        }
        rhs[0] -= BigRational::one();
        for (j, fj) in fs.iter().enumerate() {
            let c = BigRational::from_integer(binom(kk as i64 + 1, j as i64));
            for (i, x) in fj.iter().enumerate() {
                rhs[i] -= &c * x;
            }
        }
        let d = BigRational::from_integer(BigInt::from(kk + 1));
        fs.push(rhs.into_iter().map(|x| x / &d).collect());
    }
    fs.pop().unwrap()
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn eulerian(i: u32) -> Vec<BigInt> {
    // A(n, m) = (n − m) A(n−1, m−1) + (m+1) A(n−1, m)
    let mut row = vec![BigInt::one()];
    for n in 2..=i as i64 {
        let mut next = vec![BigInt::zero(); n as usize];
        for m in 0..n {
            let a = if m >= 1 { &row[m as usize - 1] * (n - m) } else { BigInt::zero() };
            let b = if (m as usize) < row.len() { &row[m as usize] * (m + 1) } else { BigInt::zero() };
            next[m as usize] = a + b;
        }
        row = next;
    }
    row
}

fn compose(f: &[BigRational], a: &Affine) -> MPoly {
    let base = MPoly::from_affine(a);
    let mut acc = MPoly::zero(a.dims());
    let mut pw = MPoly::one(a.dims());
    for c in f {
        acc = acc.add(&pw.scale(c));
        pw = pw.mul(&base);
    }
    acc
}

// ---------------------------------------------------------------------------
// factored rational functions with monomial-binomial denominators

/// Sparse sum of r·ζ^z·u^j·t^p keyed by (p, z, j).
type SparseNum = BTreeMap<(i64, u32, u8), BigRational>;

fn sparse_one() -> SparseNum {
    let mut s = SparseNum::new();
    s.insert((0, 0, 0), BigRational::one());
    s
}

fn sparse_mul(a: &SparseNum, b: &SparseNum, ctx: MonoCtx) -> SparseNum {
    let mut out = SparseNum::new();
    for (&(p1, z1, j1), r1) in a {
        for (&(p2, z2, j2), r2) in b {
            let m = Mono::new(ctx, r1 * r2, z1 as i64 + z2 as i64, j1 as i64 + j2 as i64);
            let slot = out.entry((p1 + p2, m.zeta_exp(), m.u_exp())).or_insert_with(BigRational::zero);
            *slot += m.ratio();
        }
    }
    out.retain(|_, r| !r.is_zero());
    out
}

fn sparse_mono(m: &Mono, tpow: i64) -> SparseNum {
    let mut s = SparseNum::new();
    if !m.is_zero() {
        s.insert((tpow, m.zeta_exp(), m.u_exp()), m.ratio().clone());
    }
    s
}

/// Multiset of denominator factors (1 − κ t^w), w ≥ 0.
pub type DenKey = Vec<(Mono, i64, u32)>;

#[derive(Clone, Debug)]
struct FRat {
    num: SparseNum,
    den: BTreeMap<(Mono, i64), u32>,
}

impl FRat {
    fn one() -> Self {
        FRat { num: sparse_one(), den: BTreeMap::new() }
    }
    /// E_i(X) = Σ_{v≥0} v^i X^v with X = κ t^w.
    fn euler(i: u32, kappa: &Mono, w: i64) -> Self {
        let ctx = kappa.ctx();
        let mut num = SparseNum::new();
        if i == 0 {
            num = sparse_one();
        } else {
            for (k, a) in eulerian(i).into_iter().enumerate() {
                let m = kappa.pow(k as i64 + 1).mul(&Mono::rational(ctx, BigRational::from_integer(a)));
                for (key, r) in sparse_mono(&m, w * (k as i64 + 1)) {
                    *num.entry(key).or_insert_with(BigRational::zero) += r;
                }
            }
        }
        let mut f = FRat { num, den: BTreeMap::new() };
        f.push_den(kappa, w, i + 1);
        f
    }
    fn push_den(&mut self, kappa: &Mono, w: i64, mult: u32) {
        if w < 0 {
            // 1/(1 − κ t^w) = −κ^{-1} t^{-w} / (1 − κ^{-1} t^{-w})
            let inv = kappa.inv();
            let fac = sparse_mono(&inv.neg().pow(mult as i64), -w * mult as i64);
            self.num = sparse_mul(&self.num, &fac, kappa.ctx());
            *self.den.entry((inv, -w)).or_insert(0) += mult;
        } else {
            *self.den.entry((kappa.clone(), w)).or_insert(0) += mult;
        }
    }
    fn mul(&self, o: &FRat, ctx: MonoCtx) -> FRat {
        let mut den = self.den.clone();
        for (k, m) in &o.den {
            *den.entry(k.clone()).or_insert(0) += m;
        }
        FRat { num: sparse_mul(&self.num, &o.num, ctx), den }
    }
    fn key(&self) -> DenKey {
        self.den.iter().map(|((k, w), m)| (k.clone(), *w, *m)).collect()
    }
}

// ---------------------------------------------------------------------------
// terms

/// One summand family on a region: konst·scalar·P(x)·Π κ_i^{x_i}·t^{texp(x)}.
#[derive(Clone, Debug)]
pub struct LatticeTerm {
    pub konst: CoeffElement,
    pub scalar: Mono,
    pub poly: MPoly,
    pub kappa: Vec<Mono>,
    pub texp: Affine,
}

impl LatticeTerm {
    pub fn unit(s: &Arc<Session>, dims: usize) -> Self {
        let ctx = MonoCtx::of(s);
        LatticeTerm {
            konst: CoeffElement::one(s),
            scalar: Mono::one(ctx),
            poly: MPoly::one(dims),
            kappa: vec![Mono::one(ctx); dims],
            texp: Affine::constant(dims, 0),
        }
    }
    pub fn dims(&self) -> usize {
        self.kappa.len()
    }
    /// Pointwise product of two terms.
    pub fn times(&self, o: &LatticeTerm) -> LatticeTerm {
        LatticeTerm {
            konst: self.konst.mul_unchecked(&o.konst),
            scalar: self.scalar.mul(&o.scalar),
            poly: self.poly.mul(&o.poly),
            kappa: self.kappa.iter().zip(&o.kappa).map(|(a, b)| a.mul(b)).collect(),
            texp: self.texp.add(&o.texp),
        }
    }
    /// Exact value at an integer point, as a polynomial in t (one monomial).
    pub fn value_at(&self, x: &[i64]) -> (CoeffElement, i64) {
        let mut m = self.scalar.clone();
        for (k, &xi) in self.kappa.iter().zip(x) {
            m = m.mul(&k.pow(xi));
        }
        let p = self.poly.eval(x);
        (m.act(&self.konst).scale(&p), self.texp.eval(x))
    }
    /// Floating value at an integer point for numeric t.
    pub fn value_complex(&self, x: &[i64], t: Complex64) -> Complex64 {
        let mut v = self.konst.embed() * self.scalar.value() * self.poly.eval_f64(x);
        for (k, &xi) in self.kappa.iter().zip(x) {
            if xi != 0 {
                v *= k.value().powi(xi as i32);
            }
        }
        v * t.powi(self.texp.eval(x) as i32)
    }
}

/// A region together with the term summed over it.
#[derive(Clone, Debug)]
pub struct CellTermSpec {
    pub region: Region,
    pub term: LatticeTerm,
}

/// Several terms sharing one region (they are eliminated together).
#[derive(Clone, Debug)]
pub struct CellBundle {
    pub region: Region,
    pub terms: Vec<LatticeTerm>,
}

#[derive(Clone, Debug)]
struct Item {
    konst: CoeffElement,
    scalar: Mono,
    poly: MPoly,
    kappa: Vec<Mono>,
    texp: Affine,
    frat: FRat,
    annulus: Annulus,
}

impl Item {
    fn from_term(t: &LatticeTerm) -> Self {
        Item {
            konst: t.konst.clone(),
            scalar: t.scalar.clone(),
            poly: t.poly.clone(),
            kappa: t.kappa.clone(),
            texp: t.texp.clone(),
            frat: FRat::one(),
            annulus: Annulus::FULL,
        }
    }

    fn reflect(&mut self, v: usize) {
        self.kappa[v] = self.kappa[v].inv();
        self.texp.a[v] = -self.texp.a[v];
        self.poly = self.poly.negate_var(v);
    }

    /// Multiply by X^{a(x')} where X = κ_v t^{w_v}, then clear v.
    fn fold_power(&mut self, v: usize, kv: &Mono, wv: i64, a: &Affine) {
        for (j, &aj) in a.a.iter().enumerate() {
            if aj != 0 && j != v {
                self.kappa[j] = self.kappa[j].mul(&kv.pow(aj));
            }
        }
        self.scalar = self.scalar.mul(&kv.pow(a.b));
        for (j, &aj) in a.a.iter().enumerate() {
            if j != v {
                self.texp.a[j] += wv * aj;
            }
        }
        self.texp.b += wv * a.b;
        self.kappa[v] = Mono::one(kv.ctx());
        self.texp.a[v] = 0;
    }

    /// Σ_{v = lo}^{hi} (hi = None: ray upward).
    fn sum_var(&self, v: usize, lo: &Affine, hi: Option<&Affine>, out: &mut Vec<Item>) -> Result<()> {
        let kv = self.kappa[v].clone();
        let wv = self.texp.a[v];
        let parts = self.poly.split_var(v);
        let ctx = kv.ctx();
        if kv.is_one() && wv == 0 {
            let Some(hi) = hi else {
                return Err(Error::Divergent("summand is constant along an infinite ray".into()));
            };
            let mut poly = MPoly::zero(self.poly.dims);
            for (k, pk) in parts.iter().enumerate() {
                if pk.is_zero() {
                    continue;
                }
                let f = faulhaber(k as u32);
                let s = compose(&f, hi).add(&compose(&f, &lo.plus(-1)).scale(&-BigRational::one()));
                poly = poly.add(&pk.mul(&s));
            }
            if !poly.is_zero() {
                let mut it = self.clone();
                it.poly = poly;
                it.kappa[v] = Mono::one(ctx);
                it.texp.a[v] = 0;
                out.push(it);
            }
            return Ok(());
        }
        let mut annulus = self.annulus;
        if hi.is_none() {
            let mag = kv.abs();
            annulus = match wv.signum() {
                0 => {
                    if mag >= 1.0 {
                        return Err(Error::Divergent(format!("ratio {kv} has modulus ≥ 1 and no t-dependence")));
                    }
                    annulus
                }
                1 => annulus.intersect(Annulus { lo: 0.0, hi: mag.powf(-1.0 / wv as f64) }),
                _ => annulus.intersect(Annulus { lo: mag.powf(1.0 / (-wv) as f64), hi: f64::INFINITY }),
            };
        }
        let endpoints: Vec<(Affine, bool)> = match hi {
            Some(h) => vec![(lo.clone(), false), (h.plus(1), true)],
            None => vec![(lo.clone(), false)],
        };
        let deg = parts.len();
        for (a, negate) in endpoints {
            let apoly = MPoly::from_affine(&a);
            let mut apows = vec![MPoly::one(self.poly.dims)];
            for _ in 1..deg {
                let last = apows.last().unwrap().mul(&apoly);
                apows.push(last);
            }
            for i in 0..deg {
                let mut p = MPoly::zero(self.poly.dims);
                for (k, pk) in parts.iter().enumerate().skip(i) {
                    if pk.is_zero() {
                        continue;
                    }
                    let c = BigRational::from_integer(binom(k as i64, i as i64));
                    p = p.add(&pk.mul(&apows[k - i]).scale(&c));
                }
                if p.is_zero() {
                    continue;
                }
                if negate {
                    p = p.scale(&-BigRational::one());
                }
                let mut it = self.clone();
                it.poly = p;
                it.annulus = annulus;
                it.frat = it.frat.mul(&FRat::euler(i as u32, &kv, wv), ctx);
                it.fold_power(v, &kv, wv, &a);
                out.push(it);
            }
        }
        Ok(())
    }
}

struct Job {
    cons: Vec<Affine>,
    active: Vec<bool>,
    items: Vec<Item>,
}

fn pick_var(cons: &[Affine], active: &[bool]) -> Result<(usize, bool)> {
    // (variable, appears in constraints); prefer the last variable with
    // unit coefficients everywhere
    for v in (0..active.len()).rev() {
        if active[v] && cons.iter().all(|c| c.a[v] == 0) {
            return Ok((v, false));
        }
    }
    for v in (0..active.len()).rev() {
        if active[v] && cons.iter().all(|c| c.a[v].abs() <= 1) {
            return Ok((v, true));
        }
    }
    let shown: Vec<String> = cons.iter().map(|c| format!("{c} >= 0")).collect();
    Err(Error::Unclosed(format!("no unimodular variable to eliminate in {{{}}}", shown.join(", "))))
}

fn drop_var(f: &Affine, v: usize) -> Affine {
    let mut g = f.clone();
    g.a[v] = 0;
    g
}

fn eliminate(job: Job, out: &mut Accumulator) -> Result<()> {
    let mut stack = vec![job];
    while let Some(mut job) = stack.pop() {
        let Some(cons) = simplify(&job.cons) else { continue };
        job.cons = cons;
        if !job.active.iter().any(|&a| a) {
            for it in job.items {
                out.push_leaf(it);
            }
            continue;
        }
        if !fm_feasible(&job.cons, job.active.len()) {
            continue;
        }
        let (v, bounded) = pick_var(&job.cons, &job.active)?;
        if !bounded {
            let d = job.active.len();
            let up = Affine::var(d, v);
            let down = Affine::var(d, v).scale(-1).plus(-1);
            for extra in [up, down] {
                let mut cons = job.cons.clone();
                cons.push(extra);
                stack.push(Job { cons, active: job.active.clone(), items: job.items.clone() });
            }
            continue;
        }
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        let mut rest = Vec::new();
        for c in &job.cons {
            match c.a[v] {
                1 => lowers.push(drop_var(c, v).scale(-1)),
                -1 => uppers.push(drop_var(c, v)),
                _ => rest.push(c.clone()),
            }
        }
        let mut items = job.items;
        if lowers.is_empty() {
            for it in items.iter_mut() {
                it.reflect(v);
            }
            // v ≤ U  ⇔  −v ≥ −U
            lowers = uppers.iter().map(|u| u.scale(-1)).collect();
            uppers = Vec::new();
        }
        let mut active = job.active.clone();
        active[v] = false;
        let uchoices: Vec<Option<usize>> =
            if uppers.is_empty() { vec![None] } else { (0..uppers.len()).map(Some).collect() };
        for i in 0..lowers.len() {
            for &j in &uchoices {
                let mut cons = rest.clone();
                for (k, lk) in lowers.iter().enumerate() {
                    if k == i {
                        continue;
                    }
                    let diff = lowers[i].sub(lk);
                    cons.push(if k < i { diff.plus(-1) } else { diff });
                }
                if let Some(j) = j {
                    for (k, uk) in uppers.iter().enumerate() {
                        if k == j {
                            continue;
                        }
                        let diff = uk.sub(&uppers[j]);
                        cons.push(if k < j { diff.plus(-1) } else { diff });
                    }
                    cons.push(uppers[j].sub(&lowers[i]));
                }
                let Some(cons) = simplify(&cons) else { continue };
                if !fm_feasible(&cons, active.len()) {
                    continue;
                }
                let mut next = Vec::new();
                for it in &items {
                    it.sum_var(v, &lowers[i], j.map(|j| &uppers[j]), &mut next)?;
                }
                if !next.is_empty() {
                    stack.push(Job { cons, active: active.clone(), items: next });
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// accumulation

struct Accumulator {
    ctx: MonoCtx,
    groups: HashMap<(DenKey, CoeffElement), SparseNum>,
    annulus: Annulus,
}

impl Accumulator {
    fn new(ctx: MonoCtx) -> Self {
        Accumulator { ctx, groups: HashMap::new(), annulus: Annulus::FULL }
    }
    fn push_leaf(&mut self, it: Item) {
        let c = it.poly.as_constant().expect("all variables eliminated");
        if c.is_zero() {
            return;
        }
        let m = it.scalar.mul(&Mono::rational(self.ctx, c));
        let num = sparse_mul(&it.frat.num, &sparse_mono(&m, it.texp.b), self.ctx);
        self.annulus = self.annulus.intersect(it.annulus);
        let slot = self.groups.entry((it.frat.key(), it.konst)).or_default();
        for (k, r) in num {
            let e = slot.entry(k).or_insert_with(BigRational::zero);
            *e += r;
            if e.is_zero() {
                slot.remove(&k);
            }
        }
    }
    fn finish(self, s: &Arc<Session>) -> FactoredSum {
        let mut groups: BTreeMap<DenKey, LPoly> = BTreeMap::new();
        for ((key, konst), num) in self.groups {
            if num.is_empty() {
                continue;
            }
            let lo = num.keys().next().unwrap().0;
            let hi = num.keys().next_back().unwrap().0;
            let mut coeffs = vec![CoeffElement::zero(s); (hi - lo + 1) as usize];
            for ((p, z, j), r) in num {
                let m = Mono::new(self.ctx, r, z as i64, j as i64);
                let slot = &mut coeffs[(p - lo) as usize];
                *slot = slot.add_unchecked(&m.to_k(s));
            }
            let poly = LPoly::from_coeffs(s, lo, coeffs).scale(&konst);
            let e = groups.entry(key).or_insert_with(|| LPoly::zero(s));
            *e = e.add(&poly);
        }
        groups.retain(|_, p| !p.is_zero());
        FactoredSum { session: s.clone(), groups, annulus: self.annulus }
    }
}

/// Σ_g N_g(t) / Π (1 − κ t^w)^mult, grouped by denominator.
#[derive(Clone, Debug)]
pub struct FactoredSum {
    session: Arc<Session>,
    groups: BTreeMap<DenKey, LPoly>,
    annulus: Annulus,
}

impl FactoredSum {
    pub fn zero(s: &Arc<Session>) -> Self {
        FactoredSum { session: s.clone(), groups: BTreeMap::new(), annulus: Annulus::FULL }
    }
    pub fn session(&self) -> &Arc<Session> {
        &self.session
    }
    pub fn annulus(&self) -> Annulus {
        self.annulus
    }
    pub fn groups(&self) -> &BTreeMap<DenKey, LPoly> {
        &self.groups
    }
    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut groups = self.groups.clone();
        for (k, p) in &o.groups {
            let e = groups.entry(k.clone()).or_insert_with(|| LPoly::zero(&self.session));
            *e = e.add(p);
        }
        groups.retain(|_, p| !p.is_zero());
        FactoredSum { session: self.session.clone(), groups, annulus: self.annulus.intersect(o.annulus) }
    }
    pub fn scale(&self, c: &CoeffElement) -> Self {
        let groups = self.groups.iter().map(|(k, p)| (k.clone(), p.scale(c))).filter(|(_, p)| !p.is_zero()).collect();
        FactoredSum { session: self.session.clone(), groups, annulus: self.annulus }
    }
    pub fn neg(&self) -> Self {
        self.scale(&CoeffElement::from_int(&self.session, -1))
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Collapse to one fraction over the least common multiset of factors.
    pub fn to_ratfunc(&self) -> RatFunc {
        let s = &self.session;
        let mut lcm: BTreeMap<(Mono, i64), u32> = BTreeMap::new();
        for key in self.groups.keys() {
            for (k, w, m) in key {
                let e = lcm.entry((k.clone(), *w)).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut num = LPoly::zero(s);
        for (key, p) in &self.groups {
            let have: BTreeMap<(Mono, i64), u32> = key.iter().map(|(k, w, m)| ((k.clone(), *w), *m)).collect();
            let mut q = p.clone();
            for ((k, w), m) in &lcm {
                let missing = m - have.get(&(k.clone(), *w)).copied().unwrap_or(0);
                for _ in 0..missing {
                    q = q.mul_binomial(k, *w);
                }
            }
            num = num.add(&q);
        }
        let mut den = LPoly::one(s);
        for ((k, w), m) in &lcm {
            for _ in 0..*m {
                den = den.mul_binomial(k, *w);
            }
        }
        let annulus = (self.annulus != Annulus::FULL).then_some(self.annulus);
        RatFunc::new(num, den).expect("product of binomials is nonzero").with_annulus(annulus)
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, p) in &self.groups {
            let mut d = Complex64::new(1.0, 0.0);
            for (k, w, m) in key {
                d *= (Complex64::new(1.0, 0.0) - k.value() * t.powi(*w as i32)).powi(*m as i32);
            }
            acc += p.eval_complex(t) / d;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// summands built as products of piecewise factors

/// One branch of a piecewise factor: valid where every `cons ≥ 0`, equal to
/// `term` there.
#[derive(Clone, Debug)]
pub struct Alt {
    pub cons: Vec<Affine>,
    pub term: LatticeTerm,
}

/// A piecewise factor; its branches must partition the region where it is used.
#[derive(Clone, Debug)]
pub struct Family(pub Vec<Alt>);

impl Family {
    pub fn single(term: LatticeTerm) -> Self {
        Family(vec![Alt { cons: Vec::new(), term }])
    }
    fn constrained(&self) -> bool {
        self.0.iter().any(|a| !a.cons.is_empty())
    }
    /// t^{k·|f|}, split at the sign of f.
    pub fn abs_weight(s: &Arc<Session>, f: &Affine, k: i64) -> Self {
        let d = f.dims();
        let mut pos = LatticeTerm::unit(s, d);
        pos.texp = f.scale(k);
        let mut neg = LatticeTerm::unit(s, d);
        neg.texp = f.scale(-k);
        Family(vec![Alt { cons: vec![f.clone()], term: pos }, Alt { cons: vec![f.scale(-1).plus(-1)], term: neg }])
    }
    /// (κ)^{|f|}·t^{k|f|}
    pub fn abs_power(s: &Arc<Session>, f: &Affine, kappa: &Mono, k: i64) -> Self {
        let d = f.dims();
        let mk = |g: &Affine| {
            let mut t = LatticeTerm::unit(s, d);
            t.texp = g.scale(k);
            t.scalar = kappa.pow(g.b);
            t.kappa = g.a.iter().map(|&a| kappa.pow(a)).collect();
            t
        };
        let neg = f.scale(-1);
        Family(vec![Alt { cons: vec![f.clone()], term: mk(f) }, Alt { cons: vec![neg.plus(-1)], term: mk(&neg) }])
    }
}

/// Multiply out the families over `base`, pruning infeasible branch
/// combinations.  Unconstrained families become extra terms of one bundle.
pub fn expand(base: &Region, families: &[Family], seed: &LatticeTerm) -> Vec<CellBundle> {
    let (cons_f, free_f): (Vec<&Family>, Vec<&Family>) = families.iter().partition(|f| f.constrained());
    let mut free_terms = vec![seed.clone()];
    for f in &free_f {
        free_terms = free_terms.iter().flat_map(|t| f.0.iter().map(move |a| t.times(&a.term))).collect();
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Region, LatticeTerm)> = vec![(0, base.clone(), LatticeTerm::unit(seed.konst.session(), base.dims))];
    while let Some((k, region, term)) = stack.pop() {
        if k == cons_f.len() {
            if let Some(region) = region.simplified() {
                let terms = free_terms.iter().map(|t| t.times(&term)).collect();
                out.push(CellBundle { region, terms });
            }
            continue;
        }
        for alt in cons_f[k].0.iter().rev() {
            let r = region.clone().with_all(alt.cons.iter().cloned());
            if r.maybe_feasible() {
                stack.push((k + 1, r, term.times(&alt.term)));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// public entry points

/// Sum every bundle; bundles are processed data-parallel and merged in input
/// order.
pub fn sum_bundles(s: &Arc<Session>, bundles: &[CellBundle]) -> Result<FactoredSum> {
    let ctx = MonoCtx::of(s);
    let parts = exec::par_map(bundles, |b| -> Result<FactoredSum> {
        let mut acc = Accumulator::new(ctx);
        let job = Job {
            cons: b.region.cons.clone(),
            active: vec![true; b.region.dims],
            items: b.terms.iter().map(Item::from_term).collect(),
        };
        eliminate(job, &mut acc)?;
        Ok(acc.finish(s))
    });
    let mut total = FactoredSum::zero(s);
    for p in parts {
        total = total.add(&p?);
    }
    Ok(total)
}

pub fn sum_cells_factored(s: &Arc<Session>, cells: &[CellTermSpec]) -> Result<FactoredSum> {
    let bundles: Vec<CellBundle> =
        cells.iter().map(|c| CellBundle { region: c.region.clone(), terms: vec![c.term.clone()] }).collect();
    sum_bundles(s, &bundles)
}

/// Exact closed form of Σ over all cells.
pub fn sum_lattice(s: &Arc<Session>, cells: &[CellTermSpec]) -> Result<RatFunc> {
    Ok(sum_cells_factored(s, cells)?.to_ratfunc())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Σ_{k ≥ start} (ratio·t^{t_step})^k, or Σ_{k ≤ start} for `Down`.
pub fn geom_closed(ratio: &Mono, t_step: i64, start: i64, direction: Direction, s: &Arc<Session>) -> Result<RatFunc> {
    if ratio.is_one() && t_step == 0 {
        return Err(Error::Divergent("ratio·t^step is identically 1".into()));
    }
    let ctx = MonoCtx::of(s);
    let region = match direction {
        Direction::Up => Region::whole(1).ge(0, start),
        Direction::Down => Region::whole(1).le(0, start),
    };
    let term = LatticeTerm {
        konst: CoeffElement::one(s),
        scalar: Mono::one(ctx),
        poly: MPoly::one(1),
        kappa: vec![ratio.clone()],
        texp: Affine::new(vec![t_step], 0),
    };
    sum_lattice(s, &[CellTermSpec { region, term }])
}

/// Split a region so that every |form| and every comparison `form ⋚ k` is
/// constant on each cell.  Cells are disjoint and cover the region.
pub fn region_split(region: &Region, abs_forms: &[Affine], thresholds: &[(Affine, i64)]) -> Vec<Region> {
    let mut cells = vec![region.clone()];
    for f in abs_forms {
        cells = cells
            .into_iter()
            .flat_map(|c| [c.clone().form_ge(f, 0), c.form_le(f, -1)])
            .filter(|c| c.maybe_feasible())
            .collect();
    }
    for (f, k) in thresholds {
        cells = cells
            .into_iter()
            .flat_map(|c| [c.clone().form_le(f, k - 1), c.clone().form_ge(f, *k).form_le(f, *k), c.form_ge(f, k + 1)])
            .filter(|c| c.maybe_feasible())
            .collect();
    }
    cells.into_iter().filter_map(|c| c.simplified()).collect()
}

/// Numeric partial sum of a bundle over the box |x_i| ≤ radius.
pub fn partial_sum(bundles: &[CellBundle], radius: i64, t: Complex64) -> Complex64 {
    let parts = exec::par_map(bundles, |b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_point(b.region.dims, radius, |x| {
            if b.region.contains(x) {
                for term in &b.terms {
                    acc += term.value_complex(x, t);
                }
            }
        });
        acc
    });
    parts.into_iter().sum()
}

pub(crate) fn for_each_point(dims: usize, radius: i64, mut f: impl FnMut(&[i64])) {
    let mut x = vec![-radius; dims];
    if dims == 0 {
        f(&x);
        return;
    }
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == dims {
                return;
            }
            x[i] += 1;
            if x[i] <= radius {
                break;
            }
            x[i] = -radius;
            i += 1;
        }
    }
}
