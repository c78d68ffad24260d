//! Schwartz–Bruhat functions built from centred balls ϖ^k𝒪 and shells
//! ϖ^k𝒪^×, and their scaled pairings
//!
//! ```text
//!   ∫ φ(ϖ^{e}·x, with some coordinates set to 0) · conj ψ(x, with some set to 0) dx.
//! ```
//!
//! Everything reduces to one-dimensional box intersections, which are again
//! balls, shells or empty, so the pairings are exact rationals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeffs::{CoeffElement, Mono, MonoCtx, Session};
use crate::error::{Error, Result};
use crate::lattice_series::{Affine, Alt, Family, LatticeTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxKind {
    Ball,
    Shell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxSet {
    pub kind: BoxKind,
    pub level: i64,
}

impl BoxSet {
    pub fn ball(level: i64) -> Self {
        BoxSet { kind: BoxKind::Ball, level }
    }
    pub fn shell(level: i64) -> Self {
        BoxSet { kind: BoxKind::Shell, level }
    }
    pub fn contains_zero(&self) -> bool {
        self.kind == BoxKind::Ball
    }
    /// Membership for an element of valuation v (None for 0).
    pub fn contains_val(&self, v: Option<i64>) -> bool {
        match (self.kind, v) {
            (BoxKind::Ball, None) => true,
            (BoxKind::Shell, None) => false,
            (BoxKind::Ball, Some(v)) => v >= self.level,
            (BoxKind::Shell, Some(v)) => v == self.level,
        }
    }
    pub fn measure(&self, q: u64) -> BigRational {
        let base = qpow(q, -self.level);
        match self.kind {
            BoxKind::Ball => base,
            BoxKind::Shell => base * (BigRational::one() - BigRational::new(1.into(), q.into())),
        }
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            BoxKind::Ball => "ball",
            BoxKind::Shell => "shell",
        };
        write!(f, "{k}:{}", self.level)
    }
}

pub(crate) fn qpow(q: u64, e: i64) -> BigRational {
    let p = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Finite combination Σ coef_i·1_{box_i} on F^d.
#[derive(Clone, Debug)]
pub struct SchwartzFn {
    pub dim: usize,
    pub terms: Vec<(Vec<BoxSet>, CoeffElement)>,
}

impl SchwartzFn {
    pub fn zero(dim: usize) -> Self {
        SchwartzFn { dim, terms: Vec::new() }
    }
    pub fn indicator(boxes: Vec<BoxSet>, s: &Arc<Session>) -> Self {
        SchwartzFn { dim: boxes.len(), terms: vec![(boxes, CoeffElement::one(s))] }
    }
    /// 1_{𝒪^d}
    pub fn unit_lattice(dim: usize, s: &Arc<Session>) -> Self {
        Self::indicator(vec![BoxSet::ball(0); dim], s)
    }
    pub fn plus(mut self, boxes: Vec<BoxSet>, coef: CoeffElement) -> Result<Self> {
        if boxes.len() != self.dim {
            return Err(Error::Invalid(format!("box of dimension {} in a {}-dimensional function", boxes.len(), self.dim)));
        }
        self.terms.push((boxes, coef));
        Ok(self)
    }
    pub fn scale(&self, c: &CoeffElement) -> Self {
        SchwartzFn { dim: self.dim, terms: self.terms.iter().map(|(b, x)| (b.clone(), x.mul_unchecked(c))).collect() }
    }
    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }
    /// φ₁ ⊗ φ₂ on F^{d₁+d₂}.
    pub fn tensor(&self, o: &SchwartzFn) -> SchwartzFn {
        let mut terms = Vec::new();
        for (b1, c1) in &self.terms {
            for (b2, c2) in &o.terms {
                let mut b = b1.clone();
                b.extend(b2.iter().copied());
                terms.push((b, c1.mul_unchecked(c2)));
            }
        }
        SchwartzFn { dim: self.dim + o.dim, terms }
    }
    /// Whether every coefficient is rational (then conj is trivial).
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.as_rational().is_some())
    }
}

/// How one coordinate enters a pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    /// φ evaluated at ϖ^e·x
    Scaled(i64),
    /// φ's coordinate replaced by 0
    LeftZero,
    /// ψ's coordinate replaced by 0 (φ still scaled by ϖ^e)
    RightZero(i64),
}

/// Piece of the one-dimensional pairing meas(A(a−e) ∩ B(b)) on an interval of e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPiece {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub coef: BigRational,
    /// whether the value carries an extra factor q^{e}
    pub qexp: bool,
}

/// The one-dimensional pairing as a piecewise function of the scaling e.
pub fn pair_pieces(a: BoxSet, b: BoxSet, q: u64) -> Vec<PairPiece> {
    let (al, bl) = (a.level, b.level);
    let r = BigRational::one() - BigRational::new(1.into(), q.into());
    use BoxKind::*;
    match (a.kind, b.kind) {
        (Ball, Ball) => vec![
            PairPiece { lo: None, hi: Some(al - bl), coef: qpow(q, -al), qexp: true },
            PairPiece { lo: Some(al - bl + 1), hi: None, coef: qpow(q, -bl), qexp: false },
        ],
        (Ball, Shell) => vec![PairPiece { lo: Some(al - bl), hi: None, coef: qpow(q, -bl) * r, qexp: false }],
        (Shell, Ball) => vec![PairPiece { lo: None, hi: Some(al - bl), coef: qpow(q, -al) * r, qexp: true }],
        (Shell, Shell) => vec![PairPiece { lo: Some(al - bl), hi: Some(al - bl), coef: qpow(q, -bl) * r, qexp: false }],
    }
}

fn coord_value(a: BoxSet, b: BoxSet, c: Coord, q: u64) -> Result<BigRational> {
    match c {
        Coord::LeftZero => Ok(if a.contains_zero() { b.measure(q) } else { BigRational::zero() }),
        Coord::RightZero(e) => {
            let shifted = BoxSet { kind: a.kind, level: a.level - e };
            Ok(if b.contains_zero() { shifted.measure(q) } else { BigRational::zero() })
        }
        Coord::Scaled(e) => {
            for p in pair_pieces(a, b, q) {
                if p.lo.map_or(true, |lo| e >= lo) && p.hi.map_or(true, |hi| e <= hi) {
                    return Ok(if p.qexp { p.coef * qpow(q, e) } else { p.coef });
                }
            }
            Ok(BigRational::zero())
        }
    }
}

/// ∫ φ(ϖ^e x)·conj ψ(x) dx with per-coordinate zeroing.
pub fn sb_scale_pair_coords(phi: &SchwartzFn, psi: &SchwartzFn, coords: &[Coord]) -> Result<CoeffElement> {
    if phi.dim != psi.dim || coords.len() != phi.dim {
        return Err(Error::Invalid("dimension mismatch in pairing".into()));
    }
    let s = phi
        .terms
        .first()
        .or(psi.terms.first())
        .map(|(_, c)| c.session().clone())
        .ok_or_else(|| Error::Invalid("pairing of two empty functions".into()))?;
    let q = s.q();
    let mut acc = CoeffElement::zero(&s);
    for (ba, ca) in &phi.terms {
        for (bb, cb) in &psi.terms {
            let mut r = BigRational::one();
            for k in 0..phi.dim {
                r *= coord_value(ba[k], bb[k], coords[k], q)?;
                if r.is_zero() {
                    break;
                }
            }
            if !r.is_zero() {
                acc = acc.add_unchecked(&ca.mul_unchecked(&cb.conj()).scale(&r));
            }
        }
    }
    Ok(acc)
}

/// ∫ φ(ϖ^e x with coordinates in `zero_pattern` set to 0)·conj ψ(x) dx.
pub fn sb_scale_pair(phi: &SchwartzFn, psi: &SchwartzFn, e: &[i64], zero_pattern: &[usize]) -> Result<CoeffElement> {
    let coords: Vec<Coord> =
        e.iter().enumerate().map(|(k, &ek)| if zero_pattern.contains(&k) { Coord::LeftZero } else { Coord::Scaled(ek) }).collect();
    sb_scale_pair_coords(phi, psi, &coords)
}

/// Floating evaluator of the plain scaled pairing ⟨φ(ϖ^e·), ψ⟩ with the
/// one-dimensional pieces converted once, for partial sums over large windows.
#[derive(Clone, Debug)]
pub struct PairEvalF64 {
    q: f64,
    /// per pair of terms: conj-weighted coefficient, then per coordinate the
    /// pieces (lo, hi, coef, qexp)
    terms: Vec<(num_complex::Complex64, Vec<Vec<(Option<i64>, Option<i64>, f64, bool)>>)>,
}

impl PairEvalF64 {
    pub fn new(phi: &SchwartzFn, psi: &SchwartzFn) -> Self {
        let q = phi.terms.first().or(psi.terms.first()).map(|(_, c)| c.session().q()).unwrap_or(2);
        let mut terms = Vec::new();
        for (ba, ca) in &phi.terms {
            for (bb, cb) in &psi.terms {
                let w = ca.embed() * cb.embed().conj();
                if w == num_complex::Complex64::new(0.0, 0.0) {
                    continue;
                }
                let coords = (0..phi.dim)
                    .map(|k| {
                        pair_pieces(ba[k], bb[k], q)
                            .into_iter()
                            .map(|p| (p.lo, p.hi, crate::coeffs::big_ratio_f64(p.coef.numer(), p.coef.denom()), p.qexp))
                            .collect()
                    })
                    .collect();
                terms.push((w, coords));
            }
        }
        PairEvalF64 { q: q as f64, terms }
    }

    pub fn value(&self, e: &[i64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (w, coords) in &self.terms {
            let mut r = 1.0;
            for (pieces, &ek) in coords.iter().zip(e) {
                let hit = pieces.iter().find(|p| p.0.map_or(true, |lo| ek >= lo) && p.1.map_or(true, |hi| ek <= hi));
                r *= match hit {
                    Some(&(_, _, c, true)) => c * self.q.powi(ek as i32),
                    Some(&(_, _, c, false)) => c,
                    None => 0.0,
                };
                if r == 0.0 {
                    break;
                }
            }
            if r != 0.0 {
                acc += w * r;
            }
        }
        acc
    }
}

/// Floating value of the plain scaled pairing ⟨φ(ϖ^e·), ψ⟩.
pub fn pair_value_f64(phi: &SchwartzFn, psi: &SchwartzFn, e: &[i64]) -> num_complex::Complex64 {
    PairEvalF64::new(phi, psi).value(e)
}

/// Stabilisation level: for |e_k| ≥ l₁ every coordinate pairing equals its
/// degenerate (zeroed) form exactly.  Upward it matches the left-zeroed
/// pairing from e ≥ T_up; downward the right-zeroed one for e ≤ T_down.
pub fn locality_threshold(phi: &SchwartzFn) -> i64 {
    let mut l1 = 0i64;
    for (ba, _) in &phi.terms {
        for (bb, _) in &phi.terms {
            for k in 0..phi.dim {
                let (a, b) = (ba[k], bb[k]);
                let d = a.level - b.level;
                let (up, down) = match (a.kind, b.kind) {
                    (BoxKind::Ball, BoxKind::Ball) => (d, d),
                    (BoxKind::Ball, BoxKind::Shell) => (d, d - 1),
                    (BoxKind::Shell, BoxKind::Ball) => (d + 1, d),
                    (BoxKind::Shell, BoxKind::Shell) => (d + 1, d - 1),
                };
                l1 = l1.max(up).max(-down);
            }
        }
    }
    l1
}

/// Scan check of a threshold: for every coordinate and every e with
/// l ≤ |e| ≤ l + width, the scaled pairing agrees with the zeroed one while
/// the other coordinates run over a window.
pub fn certify_threshold(phi: &SchwartzFn, l1: i64, width: i64) -> Result<bool> {
    let d = phi.dim;
    let others: Vec<i64> = (-2..=2).collect();
    for k in 0..d {
        for mag in l1..=l1 + width {
            for sign in [1i64, -1] {
                let ek = sign * mag;
                let mut rest = vec![0usize; d - 1];
                loop {
                    let mut coords = Vec::with_capacity(d);
                    let mut zeroed = Vec::with_capacity(d);
                    let mut it = rest.iter();
                    for j in 0..d {
                        if j == k {
                            coords.push(Coord::Scaled(ek));
                            zeroed.push(if sign > 0 { Coord::LeftZero } else { Coord::RightZero(ek) });
                        } else {
                            let c = Coord::Scaled(others[*it.next().unwrap()]);
                            coords.push(c);
                            zeroed.push(c);
                        }
                    }
                    if sb_scale_pair_coords(phi, phi, &coords)? != sb_scale_pair_coords(phi, phi, &zeroed)? {
                        return Ok(false);
                    }
                    let mut i = 0;
                    while i < rest.len() {
                        rest[i] += 1;
                        if rest[i] < others.len() {
                            break;
                        }
                        rest[i] = 0;
                        i += 1;
                    }
                    if i == rest.len() {
                        break;
                    }
                }
            }
        }
    }
    Ok(true)
}

/// How a coordinate is degenerated in a stabilised constant: `U` sets φ's
/// coordinate to 0, `D` sets ψ's to 0 and drops the q^{e} factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degen {
    U,
    D,
}

/// The stabilised constants k^i_j of a function on F³.
#[derive(Clone, Debug)]
pub struct AsymptoticConstants {
    pub l1: i64,
    /// k[i-1][j-1] = k^i_j
    pub k: [[CoeffElement; 4]; 2],
}

pub const K_PATTERNS: [[[Degen; 3]; 4]; 2] = {
    use Degen::*;
    [[[U, U, U], [D, U, U], [U, U, D], [D, U, D]], [[U, D, U], [D, D, U], [U, D, D], [D, D, D]]]
};

pub fn degenerate_pair(phi: &SchwartzFn, pattern: &[Degen]) -> Result<CoeffElement> {
    let coords: Vec<Coord> =
        pattern.iter().map(|d| if *d == Degen::U { Coord::LeftZero } else { Coord::RightZero(0) }).collect();
    sb_scale_pair_coords(phi, phi, &coords)
}

pub fn sb_asymptotic_constants(phi: &SchwartzFn) -> Result<AsymptoticConstants> {
    if phi.dim != 3 {
        return Err(Error::Invalid("asymptotic constants need a function on F³".into()));
    }
    let l1 = locality_threshold(phi);
    let mk = |i: usize| -> Result<[CoeffElement; 4]> {
        Ok([
            degenerate_pair(phi, &K_PATTERNS[i][0])?,
            degenerate_pair(phi, &K_PATTERNS[i][1])?,
            degenerate_pair(phi, &K_PATTERNS[i][2])?,
            degenerate_pair(phi, &K_PATTERNS[i][3])?,
        ])
    };
    Ok(AsymptoticConstants { l1, k: [mk(0)?, mk(1)?] })
}

/// a_{n,m} = ∫ φ(ϖ^{n+m}x₁, ϖ^n x₂, 0)·φ(x) dX
pub fn a_nm(phi: &SchwartzFn, n: i64, m: i64) -> Result<CoeffElement> {
    sb_scale_pair_coords(phi, phi, &[Coord::Scaled(n + m), Coord::Scaled(n), Coord::LeftZero])
}

/// b_{n,m} = ∫ φ(ϖ^{n+m}x₁, ϖ^n x₂, x₃)·φ(x₁, x₂, 0) dX
pub fn b_nm(phi: &SchwartzFn, n: i64, m: i64) -> Result<CoeffElement> {
    sb_scale_pair_coords(phi, phi, &[Coord::Scaled(n + m), Coord::Scaled(n), Coord::RightZero(0)])
}

/// How a coordinate of a lattice pairing depends on the summation variables.
#[derive(Clone, Debug)]
pub enum FormCoord {
    /// φ's coordinate scaled by ϖ^{f(x)}
    Scaled(Affine),
    /// φ's coordinate set to 0
    LeftZero,
    /// ψ's coordinate set to 0, φ's scaled by ϖ^{f(x)}
    RightZero(Affine),
}

/// The pairing ⟨φ(ϖ^{e(x)}·), ψ⟩ as piecewise lattice families with every
/// coordinate scaled.
pub fn pairing_families(
    phi: &SchwartzFn,
    psi: &SchwartzFn,
    forms: &[Affine],
    s: &Arc<Session>,
) -> Vec<(CoeffElement, Vec<Family>)> {
    let coords: Vec<FormCoord> = forms.iter().cloned().map(FormCoord::Scaled).collect();
    pairing_families_with(phi, psi, &coords, forms.first().map(|f| f.dims()).unwrap_or(0), s)
}

/// One list of per-coordinate families for each pair of terms, with the
/// pair's coefficient as the seed constant.  Pairs that vanish identically
/// are dropped.
pub fn pairing_families_with(
    phi: &SchwartzFn,
    psi: &SchwartzFn,
    coords: &[FormCoord],
    dims: usize,
    s: &Arc<Session>,
) -> Vec<(CoeffElement, Vec<Family>)> {
    let ctx = MonoCtx::of(s);
    let q = s.q();
    let qm = Mono::int(ctx, q as i64);
    let mut out = Vec::new();
    for (ba, ca) in &phi.terms {
        for (bb, cb) in &psi.terms {
            let mut konst = ca.mul_unchecked(&cb.conj());
            if konst.is_zero() {
                continue;
            }
            let mut fams = Vec::new();
            let mut dead = false;
            for (k, c) in coords.iter().enumerate() {
                let (a, b) = (ba[k], bb[k]);
                match c {
                    FormCoord::LeftZero => {
                        if !a.contains_zero() {
                            dead = true;
                        } else {
                            konst = konst.scale(&b.measure(q));
                        }
                    }
                    FormCoord::RightZero(f) => {
                        if !b.contains_zero() {
                            dead = true;
                        } else {
                            // meas(A(a − e)) = q^{e}·meas(A(a))
                            konst = konst.scale(&a.measure(q));
                            let mut term = LatticeTerm::unit(s, dims);
                            term.scalar = qm.pow(f.b);
                            term.kappa = f.a.iter().map(|&x| qm.pow(x)).collect();
                            fams.push(Family::single(term));
                        }
                    }
                    FormCoord::Scaled(f) => {
                        let mut alts = Vec::new();
                        for p in pair_pieces(a, b, q) {
                            let mut cons = Vec::new();
                            if let Some(lo) = p.lo {
                                cons.push(f.plus(-lo));
                            }
                            if let Some(hi) = p.hi {
                                cons.push(f.scale(-1).plus(hi));
                            }
                            let mut term = LatticeTerm::unit(s, dims);
                            term.scalar = Mono::rational(ctx, p.coef.clone());
                            if p.qexp {
                                term.scalar = term.scalar.mul(&qm.pow(f.b));
                                term.kappa = f.a.iter().map(|&x| qm.pow(x)).collect();
                            }
                            alts.push(Alt { cons, term });
                        }
                        if alts.is_empty() {
                            dead = true;
                        } else {
                            fams.push(Family(alts));
                        }
                    }
                }
                if dead {
                    break;
                }
            }
            if !dead && !konst.is_zero() {
                out.push((konst, fams));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force measure of {x : ϖ^e x ∈ A} ∩ B on a residue window.
    fn brute_1d(a: BoxSet, b: BoxSet, e: i64, p: u64) -> BigRational {
        // x = p^lo·k, k mod p^{hi-lo}; each class has measure p^{-hi}
        let lo = (a.level - e).min(b.level) - 1;
        let hi = (a.level - e).max(b.level) + 2;
        let span = p.pow((hi - lo) as u32);
        let mut count = 0u64;
        for k in 0..span {
            let v = if k == 0 {
                None
            } else {
                let mut k = k;
                let mut v = lo;
                while k % p == 0 {
                    k /= p;
                    v += 1;
                }
                Some(v)
            };
            let scaled = v.map(|v| v + e);
            if a.contains_val(scaled) && b.contains_val(v) {
                count += 1;
            }
        }
        BigRational::new(count.into(), 1.into()) * qpow(p, -hi)
    }

    #[test]
    fn pieces_match_brute_force() {
        let boxes = [BoxSet::ball(0), BoxSet::ball(-1), BoxSet::shell(0), BoxSet::shell(1), BoxSet::ball(2)];
        for p in [2u64, 3] {
            for &a in &boxes {
                for &b in &boxes {
                    for e in -3..=3 {
                        let v = coord_value(a, b, Coord::Scaled(e), p).unwrap();
                        assert_eq!(v, brute_1d(a, b, e, p), "{a} {b} e={e} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let s = Session::new(3, 1).unwrap();
        let phi = SchwartzFn::unit_lattice(3, &s);
        assert!(sb_scale_pair(&phi, &phi, &[0, 0, 0], &[]).unwrap().is_one());
        assert_eq!(sb_scale_pair(&phi, &phi, &[-1, 0, 0], &[]).unwrap(), CoeffElement::from_frac(&s, 1, 3));
        assert!(sb_scale_pair(&phi, &phi, &[2, 1, 7], &[2]).unwrap().is_one());
        let k = sb_asymptotic_constants(&phi).unwrap();
        assert!(k.k[0][0].is_one());
    }

    #[test]
    fn thresholds_are_certified() {
        let s = Session::new(2, 1).unwrap();
        let fns = [
            SchwartzFn::unit_lattice(3, &s),
            SchwartzFn::indicator(vec![BoxSet::ball(-2); 3], &s),
            SchwartzFn::indicator(vec![BoxSet::shell(0), BoxSet::ball(0), BoxSet::ball(0)], &s),
            SchwartzFn::indicator(vec![BoxSet::ball(-1), BoxSet::ball(0), BoxSet::ball(0)], &s)
                .plus(vec![BoxSet::ball(0), BoxSet::shell(0), BoxSet::ball(1)], CoeffElement::from_int(&s, 2))
                .unwrap(),
        ];
        for phi in &fns {
            let l1 = locality_threshold(phi);
            assert!(certify_threshold(phi, l1, 6).unwrap(), "l1 = {l1}");
        }
        // a shell in the first coordinate only stabilises from level 1 on
        assert_eq!(locality_threshold(&fns[2]), 1);
        assert!(!certify_threshold(&fns[2], 0, 2).unwrap());
    }
}
