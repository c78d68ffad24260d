//! Local zeta integrals as Cartan-cell sums, their closed forms, the doubled
//! integral I_v and the regularised local period.
//!
//! Variables are ordered (m, n, l): m ≥ 0 is the GL(2) Cartan gap, n the
//! GL(2) centre exponent, l the GL(1) exponent.  A cell of height Δ = q^{-D}
//! contributes the weight |Δ|^{σ} with σ = s + shift, i.e. (u^{2·shift}·t)^D.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::coeffs::{Annulus, CoeffElement, Mono, Order, RatFunc, Session};
use crate::error::{Error, Result};
use crate::lattice_series::{expand, sum_bundles, Affine, Alt, CellBundle, Family, LatticeTerm, MPoly, Region};
use crate::lfactors::{doubling_lfactor, euler_factor, euler_value, LFactorSpec};
use crate::padic_geometry::PadicParams;
use crate::repcoeff::SphericalModel;
use crate::schwartz::{pairing_families, PairEvalF64, SchwartzFn};

pub const M: usize = 0;
pub const N: usize = 1;
pub const L: usize = 2;

/// How the height enters: symbolically as |Δ|^{s + k/2}, or frozen at s = k/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SPoint {
    Shift(i64),
    Value(i64),
}

impl SPoint {
    /// (u-exponent, t-exponent) per unit of height.
    fn weight(self) -> (i64, i64) {
        match self {
            SPoint::Shift(k) => (k, 1),
            SPoint::Value(k) => (k, 0),
        }
    }
    /// The same point half a unit further right (the GL(2) section carries
    /// an intrinsic s + 1/2).
    fn plus_half(self) -> Self {
        match self {
            SPoint::Shift(k) => SPoint::Shift(k + 1),
            SPoint::Value(k) => SPoint::Value(k + 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZetaResult {
    pub closed_form: RatFunc,
    pub convergence: Annulus,
    pub normalization: Vec<String>,
}

// ---------------------------------------------------------------------------
// summand families shared with the lemma verifier

/// κ^{f(x)} as a lattice term.
pub(crate) fn power_term(s: &Arc<Session>, kappa: &Mono, f: &Affine) -> LatticeTerm {
    let mut t = LatticeTerm::unit(s, f.dims());
    t.scalar = kappa.pow(f.b);
    t.kappa = f.a.iter().map(|&a| kappa.pow(a)).collect();
    t
}

/// Cell volume of K diag(ϖ^{n+m}, ϖ^n) K: 1 at m = 0, q^m(1 + 1/q) beyond.
pub(crate) fn measure_family(p: &PadicParams, dims: usize) -> Family {
    let s = p.session();
    let m = Affine::var(dims, M);
    let mut big = power_term(s, &p.q_mono(), &m);
    big.konst = CoeffElement::one(s).add_unchecked(&CoeffElement::from_frac(s, 1, p.q as i64));
    Family(vec![
        Alt { cons: vec![m.scale(-1)], term: LatticeTerm::unit(s, dims) },
        Alt { cons: vec![m.plus(-1)], term: big },
    ])
}

/// d_m from the spherical model (two free terms, or one polynomial term in
/// the degenerate case).
pub(crate) fn dm_family(p: &PadicParams, model: &SphericalModel, dims: usize) -> Family {
    let s = p.session();
    let m = Affine::var(dims, M);
    let ub = p.u().mul(&model.beta);
    if model.degenerate {
        let mut t = power_term(s, &ub, &m);
        let slope = BigRational::new((p.q as i64 - 1).into(), (p.q as i64 + 1).into());
        t.poly = MPoly::one(dims).add(&MPoly::var(dims, M).scale(&slope));
        Family::single(t)
    } else {
        let mut a = power_term(s, &ub, &m);
        a.konst = model.c1.clone();
        let mut b = power_term(s, &p.u().mul(&model.beta.inv()), &m);
        b.konst = model.c2.clone();
        Family(vec![Alt { cons: vec![], term: a }, Alt { cons: vec![], term: b }])
    }
}

/// Families of the height weight Σ|f_i| at a given point.
pub(crate) fn height_families(p: &PadicParams, forms: &[Affine], at: SPoint) -> Vec<Family> {
    let s = p.session();
    let (ue, te) = at.weight();
    let kappa = p.u().pow(ue);
    forms.iter().map(|f| Family::abs_power(s, f, &kappa, te)).collect()
}

/// Bundles of Σ (seed)·(extra families)·⟨φ(ϖ^{forms}·), φ⟩ over `base`.
pub(crate) fn bundles_with_pairing(
    p: &PadicParams,
    phi: &SchwartzFn,
    forms: &[Affine],
    base: &Region,
    seed: &LatticeTerm,
    extra: &[Family],
) -> Vec<CellBundle> {
    let s = p.session();
    let mut out = Vec::new();
    for (konst, fams) in pairing_families(phi, phi, forms, s) {
        let mut all: Vec<Family> = extra.to_vec();
        all.extend(fams);
        let mut sd = seed.clone();
        sd.konst = sd.konst.mul_unchecked(&konst);
        out.extend(expand(base, &all, &sd));
    }
    out
}

fn close(s: &Arc<Session>, bundles: &[CellBundle]) -> Result<(RatFunc, Annulus)> {
    let f = sum_bundles(s, bundles)?;
    let a = f.annulus();
    Ok((f.to_ratfunc(), a))
}

fn e_forms(dims: usize, gl2: bool, gl1: bool) -> Vec<Affine> {
    let mut v = Vec::new();
    if gl2 {
        v.push(Affine::var(dims, M).add(&Affine::var(dims, N)));
        v.push(Affine::var(dims, N));
    }
    if gl1 {
        v.push(Affine::var(dims, if gl2 { L } else { 0 }));
    }
    v
}

// ---------------------------------------------------------------------------
// the integrals

/// Σ_l α^l·⟨ω(ϖ^l)φ, φ⟩·|ϖ^l|^{σ}, for φ on F.
pub fn zeta_gl1(p: &PadicParams, phi: &SchwartzFn, at: SPoint) -> Result<ZetaResult> {
    if phi.dim != 1 {
        return Err(Error::Invalid("GL(1) zeta integral needs a function on F".into()));
    }
    let s = p.session();
    let forms = e_forms(1, false, true);
    let seed = power_term(s, &p.alpha().mul(&p.c()).mul(&p.u()), &forms[0]);
    let bundles = bundles_with_pairing(p, phi, &forms, &Region::whole(1), &seed, &height_families(p, &forms, at));
    let (closed_form, convergence) = close(s, &bundles)?;
    Ok(ZetaResult { closed_form, convergence, normalization: vec![] })
}

/// Σ_{m≥0, n} vol·d_m·⟨ω(diag(ϖ^{n+m}, ϖ^n))φ, φ⟩·Δ^{σ + 1/2}, for φ on F².
pub fn zeta_gl2(p: &PadicParams, phi: &SchwartzFn, model: &SphericalModel, at: SPoint) -> Result<ZetaResult> {
    if phi.dim != 2 {
        return Err(Error::Invalid("GL(2) zeta integral needs a function on F²".into()));
    }
    let s = p.session();
    let forms = e_forms(2, true, false);
    let cu = p.c().mul(&p.u());
    let seed = power_term(s, &cu, &forms[0].add(&forms[1]));
    let mut extra = vec![measure_family(p, 2), dm_family(p, model, 2)];
    extra.extend(height_families(p, &forms, at.plus_half()));
    let bundles = bundles_with_pairing(p, phi, &forms, &Region::whole(2).ge(M, 0), &seed, &extra);
    let (closed_form, convergence) = close(s, &bundles)?;
    Ok(ZetaResult { closed_form, convergence, normalization: vec![] })
}

/// The doubled integral over GL(2) × GL(1) with height Δ₂(g)^s, for φ on F³.
pub fn doubled_iv(p: &PadicParams, phi: &SchwartzFn, model: &SphericalModel) -> Result<ZetaResult> {
    let bundles = iv_bundles(p, phi, model)?;
    let (closed_form, convergence) = close(p.session(), &bundles)?;
    Ok(ZetaResult { closed_form, convergence, normalization: vec!["height Δ₂(g)".into()] })
}

pub fn iv_bundles(p: &PadicParams, phi: &SchwartzFn, model: &SphericalModel) -> Result<Vec<CellBundle>> {
    if phi.dim != 3 {
        return Err(Error::Invalid("I_v needs a function on F³".into()));
    }
    let s = p.session();
    let forms = e_forms(3, true, true);
    let cu = p.c().mul(&p.u());
    let seed = power_term(s, &cu, &forms[0].add(&forms[1]).add(&forms[2]))
        .times(&power_term(s, &p.alpha(), &Affine::var(3, L)));
    let mut extra = vec![measure_family(p, 3), dm_family(p, model, 3)];
    extra.extend(height_families(p, &forms[..2], SPoint::Shift(0)));
    Ok(bundles_with_pairing(p, phi, &forms, &Region::whole(3).ge(M, 0), &seed, &extra))
}

/// P_v = c_v·(L(3)/L_E(3/2, B))·lim_{s→0} ζ(2s)/L(s, doubling)·I_v(s), i.e.
/// L(1)²/L_E(1/2, A)·lim(…).  `half` = A and `three_half` = B.
pub fn local_period(
    p: &PadicParams,
    phi: &SchwartzFn,
    model: &SphericalModel,
    half: &[Mono],
    three_half: &[Mono],
) -> Result<CoeffElement> {
    let iv = doubled_iv(p, phi, model)?.closed_form;
    let lim = regularized_limit(p, &iv)?;
    let cv = crate::lfactors::const_cv(p, half, three_half)?;
    let s = p.session();
    let ctx = p.ctx();
    let l3 = euler_value(&LFactorSpec::trivial(ctx, 6, 0), s, "L(3)")?;
    let le32 = euler_value(&LFactorSpec::new(three_half.to_vec(), 3, 0), s, "L_E(3/2)")?;
    Ok(cv.mul_unchecked(&l3).mul_unchecked(&le32.inv()?).mul_unchecked(&lim))
}

/// lim_{s→0} ζ(2s)/L(s, doubling)·f(s).
pub fn regularized_limit(p: &PadicParams, f: &RatFunc) -> Result<CoeffElement> {
    let s = p.session();
    let zeta2 = euler_factor(&LFactorSpec::trivial(p.ctx(), 0, 2), s);
    let total = zeta2.div(&doubling_lfactor(p, 0))?.mul(f);
    match total.order_and_lead()? {
        (Order::Infinity, _) => Ok(CoeffElement::zero(s)),
        (Order::Finite(k), _) if k > 0 => Ok(CoeffElement::zero(s)),
        (Order::Finite(0), Some(lead)) => Ok(lead),
        (Order::Finite(k), _) => Err(Error::DivergentRegularization(k)),
    }
}

/// Second path for product data φ = φ₂⊗φ₁: the limit of the GL(2) factor
/// times the frozen GL(1) integral, with the L(1)²/L_E(1/2) prefactor.
pub fn local_period_factored(
    p: &PadicParams,
    phi2: &SchwartzFn,
    phi1: &SchwartzFn,
    model: &SphericalModel,
    half: &[Mono],
) -> Result<CoeffElement> {
    let s = p.session();
    let ctx = p.ctx();
    let z2 = zeta_gl2(p, phi2, model, SPoint::Shift(-1))?.closed_form;
    let z1 = zeta_gl1(p, phi1, SPoint::Value(0))?.closed_form;
    let z1v = z1.eval(&CoeffElement::one(s))?;
    let lim = regularized_limit(p, &z2)?;
    let l1 = euler_value(&LFactorSpec::trivial(ctx, 2, 0), s, "L(1)")?;
    let le = euler_value(&LFactorSpec::new(half.to_vec(), 1, 0), s, "L_E(1/2)")?;
    Ok(l1.mul_unchecked(&l1).mul_unchecked(&le.inv()?).mul_unchecked(&lim).mul_unchecked(&z1v))
}

/// The unramified identity for 1_{𝒪^m}: (engine closed form, Euler-factor
/// quotient).  m = 1 compares against L(s + 1/2, {αc, (αc)⁻¹})/L(2s + 1),
/// m = 2 against L(s + 1/2, doubling)/(L(2s + 2)·L(2s + 1)).
pub fn unramified_identity(p: &PadicParams, model: &SphericalModel, m: u32) -> Result<(RatFunc, RatFunc)> {
    let s = p.session();
    let phi = SchwartzFn::unit_lattice(m as usize, s);
    match m {
        1 => {
            let z = zeta_gl1(p, &phi, SPoint::Shift(0))?.closed_form;
            let ac = p.alpha().mul(&p.c());
            let lf = euler_factor(&LFactorSpec::new(vec![ac.clone(), ac.inv()], 1, 1), s);
            Ok((z, lf.div(&crate::lfactors::dm_normalizer(1, s))?))
        }
        2 => {
            let z = zeta_gl2(p, &phi, model, SPoint::Shift(0))?.closed_form;
            Ok((z, doubling_lfactor(p, 1).div(&crate::lfactors::dm_normalizer(2, s))?))
        }
        _ => Err(Error::Invalid(format!("unramified identity is implemented for m = 1, 2 (got {m})"))),
    }
}

// ---------------------------------------------------------------------------
// direct numeric summands (independent of the family machinery)

/// Floating summands evaluated straight from the coefficient formulas.
pub struct NumericSummand<'a> {
    p: &'a PadicParams,
    pair: PairEvalF64,
    dm: Vec<Complex64>,
    cu: Complex64,
    alpha: Complex64,
    u: f64,
    q: f64,
}

impl<'a> NumericSummand<'a> {
    pub fn new(p: &'a PadicParams, phi: &'a SchwartzFn, model: &SphericalModel, max_m: u64) -> Self {
        NumericSummand {
            p,
            pair: PairEvalF64::new(phi, phi),
            dm: (0..=max_m).map(|m| model.dm(p, m).embed()).collect(),
            cu: p.c().mul(&p.u()).value(),
            alpha: p.alpha().value(),
            u: p.u().value().re,
            q: p.q as f64,
        }
    }
    fn vol(&self, m: i64) -> f64 {
        if m == 0 {
            1.0
        } else {
            self.q.powi(m as i32) * (1.0 + 1.0 / self.q)
        }
    }
    fn weight(&self, d: i64, at: SPoint, t: f64) -> f64 {
        let (ue, te) = at.weight();
        (self.u.powi(ue as i32) * t.powi(te as i32)).powi(d as i32)
    }
    pub fn gl1(&self, l: i64, at: SPoint, t: f64) -> Complex64 {
        let pair = self.pair.value(&[l]);
        (self.alpha * self.cu).powi(l as i32) * pair * self.weight(l.abs(), at, t)
    }
    pub fn gl2(&self, m: i64, n: i64, at: SPoint, t: f64) -> Complex64 {
        let pair = self.pair.value(&[n + m, n]);
        let d = (n + m).abs() + n.abs();
        self.dm[m as usize] * self.vol(m) * self.cu.powi((2 * n + m) as i32) * pair * self.weight(d, at.plus_half(), t)
    }
    /// I_v summand; `height` gives the t-exponent of the cell.
    pub fn iv_with(&self, m: i64, n: i64, l: i64, t: f64, height: impl Fn(i64, i64, i64) -> i64) -> Complex64 {
        let pair = self.pair.value(&[n + m, n, l]);
        self.dm[m as usize]
            * self.vol(m)
            * self.alpha.powi(l as i32)
            * self.cu.powi((2 * n + m + l) as i32)
            * pair
            * t.powi(height(m, n, l) as i32)
    }
    pub fn iv(&self, m: i64, n: i64, l: i64, t: f64) -> Complex64 {
        self.iv_with(m, n, l, t, |m, n, _| (n + m).abs() + n.abs())
    }
    pub fn params(&self) -> &PadicParams {
        self.p
    }
}

/// Partial sums over the box |n|, |l| ≤ R, 0 ≤ m ≤ R.
pub fn truncated_gl1(ns: &NumericSummand, at: SPoint, t: f64, r: i64) -> Complex64 {
    (-r..=r).map(|l| ns.gl1(l, at, t)).sum()
}

pub fn truncated_gl2(ns: &NumericSummand, at: SPoint, t: f64, r: i64) -> Complex64 {
    let rows: Vec<i64> = (0..=r).collect();
    crate::exec::par_map(&rows, |&m| (-r..=r).map(|n| ns.gl2(m, n, at, t)).sum::<Complex64>()).into_iter().sum()
}

pub fn truncated_3d(ns: &NumericSummand, t: f64, r: i64, f: impl Fn(&NumericSummand, i64, i64, i64, f64) -> Complex64 + Sync) -> Complex64 {
    let rows: Vec<i64> = (0..=r).collect();
    crate::exec::par_map(&rows, |&m| {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in -r..=r {
            for l in -r..=r {
                acc += f(ns, m, n, l, t);
            }
        }
        acc
    })
    .into_iter()
    .sum()
}

pub fn truncated_iv(ns: &NumericSummand, t: f64, r: i64) -> Complex64 {
    truncated_3d(ns, t, r, |ns, m, n, l, t| ns.iv(m, n, l, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::LPoly;
    use crate::lfactors::dm_normalizer;
    use crate::schwartz::BoxSet;

    fn params(q: u64, n: u32, c: i64, a: i64) -> PadicParams {
        PadicParams::new(q, n, c, a).unwrap()
    }

    #[test]
    fn gl1_unramified() {
        for (q, n, c, a) in [(3u64, 5u32, 1i64, 2i64), (2, 4, 0, 0), (5, 4, 2, 1)] {
            let p = params(q, n, c, a);
            let s = p.session();
            let z = zeta_gl1(&p, &SchwartzFn::unit_lattice(1, s), SPoint::Shift(0)).unwrap();
            let ac = p.alpha().mul(&p.c());
            let lf = euler_factor(&LFactorSpec::new(vec![ac.clone(), ac.inv()], 1, 1), s);
            assert!(z.closed_form.equals(&lf.div(&dm_normalizer(1, s)).unwrap()));
            let one = LPoly::one(s);
            let t = LPoly::t_pow(s, 1);
            let hand = RatFunc::new(
                one.sub(&t.pow(2).scale(&CoeffElement::from_frac(s, 1, q as i64))),
                one.mul_binomial(&ac.mul(&p.u()), 1).mul_binomial(&ac.inv().mul(&p.u()), 1),
            )
            .unwrap();
            assert!(z.closed_form.equals(&hand));
        }
    }

    #[test]
    fn gl2_unramified() {
        for (q, n, c) in [(3u64, 5u32, 1i64), (2, 1, 0), (2, 2, 1), (5, 4, 1)] {
            let p = params(q, n, c, 0);
            let s = p.session();
            let model = SphericalModel::new(&p).unwrap();
            let z = zeta_gl2(&p, &SchwartzFn::unit_lattice(2, s), &model, SPoint::Shift(0)).unwrap();
            let expect = doubling_lfactor(&p, 1).div(&dm_normalizer(2, s)).unwrap();
            assert!(z.closed_form.equals(&expect), "q={q} N={n} c={c}");
        }
    }

    #[test]
    fn sesquilinear_and_phase_invariant() {
        let p = params(3, 4, 1, 1);
        let s = p.session();
        let phi = SchwartzFn::indicator(vec![BoxSet::ball(-1)], s).plus(vec![BoxSet::shell(1)], CoeffElement::from_int(s, 2)).unwrap();
        let base = zeta_gl1(&p, &phi, SPoint::Shift(0)).unwrap().closed_form;
        let k = CoeffElement::from_int(s, 2).add_unchecked(&CoeffElement::zeta_pow(s, 1));
        let scaled = zeta_gl1(&p, &phi.scale(&k), SPoint::Shift(0)).unwrap().closed_form;
        assert!(scaled.equals(&base.scale(&k.mul_unchecked(&k.conj()))));
        let model = SphericalModel::new(&p).unwrap();
        let phi2 = phi.tensor(&SchwartzFn::unit_lattice(1, s));
        let z = zeta_gl2(&p, &phi2, &model, SPoint::Shift(0)).unwrap().closed_form;
        let zr = zeta_gl2(&p, &phi2.scale(&CoeffElement::zeta_pow(s, 1)), &model, SPoint::Shift(0)).unwrap().closed_form;
        assert!(z.equals(&zr));
    }

    #[test]
    fn truncations_converge() {
        let p = params(3, 5, 1, 2);
        let s = p.session();
        let model = SphericalModel::new(&p).unwrap();
        let phi1 = SchwartzFn::indicator(vec![BoxSet::ball(-1)], s);
        let phi2 = SchwartzFn::indicator(vec![BoxSet::shell(0), BoxSet::ball(-1)], s)
            .plus(vec![BoxSet::ball(0), BoxSet::ball(0)], CoeffElement::zeta_pow(s, 2))
            .unwrap();
        let t0 = 0.4;
        let z1 = zeta_gl1(&p, &phi1, SPoint::Shift(0)).unwrap();
        let n1 = NumericSummand::new(&p, &phi1, &model, 0);
        let v = z1.closed_form.eval_complex(Complex64::new(t0, 0.0)).unwrap();
        assert!((truncated_gl1(&n1, SPoint::Shift(0), t0, 60) - v).norm() < 1e-9);
        let z2 = zeta_gl2(&p, &phi2, &model, SPoint::Shift(0)).unwrap();
        let n2 = NumericSummand::new(&p, &phi2, &model, 60);
        let v = z2.closed_form.eval_complex(Complex64::new(t0, 0.0)).unwrap();
        assert!((truncated_gl2(&n2, SPoint::Shift(0), t0, 60) - v).norm() < 1e-9);
    }

    #[test]
    fn iv_factorises_for_products() {
        let p = params(2, 4, 1, 1);
        let s = p.session();
        let model = SphericalModel::new(&p).unwrap();
        let phi2 = SchwartzFn::indicator(vec![BoxSet::ball(-1), BoxSet::shell(0)], s);
        let phi1 = SchwartzFn::indicator(vec![BoxSet::ball(1)], s)
            .plus(vec![BoxSet::shell(-1)], CoeffElement::zeta_pow(s, 1))
            .unwrap();
        let iv = doubled_iv(&p, &phi2.tensor(&phi1), &model).unwrap().closed_form;
        let z2 = zeta_gl2(&p, &phi2, &model, SPoint::Shift(-1)).unwrap().closed_form;
        let z1 = zeta_gl1(&p, &phi1, SPoint::Value(0)).unwrap().closed_form;
        assert!(iv.equals(&z2.mul(&z1)));
        let empty = SchwartzFn::zero(3);
        assert!(doubled_iv(&p, &empty, &model).unwrap().closed_form.is_zero());
        let half = vec![p.alpha().mul(&p.c()), p.alpha().mul(&p.c()).inv()];
        assert!(local_period(&p, &empty, &model, &half, &half).unwrap().is_zero());
    }

    #[test]
    fn unramified_period_is_one() {
        for (q, n, c, a) in [(2u64, 1u32, 0i64, 0i64), (3, 5, 1, 2), (5, 4, 1, 1), (3, 2, 1, 0)] {
            let p = params(q, n, c, a);
            let s = p.session();
            let model = SphericalModel::new(&p).unwrap();
            let ac = p.alpha().mul(&p.c());
            let half = vec![ac.clone(), ac.inv()];
            let three = vec![Mono::one(p.ctx()); 2];
            let v = local_period(&p, &SchwartzFn::unit_lattice(3, s), &model, &half, &three).unwrap();
            assert!(v.is_one(), "q={q} N={n} c={c} a={a}: {v}");
            let w = local_period_factored(&p, &SchwartzFn::unit_lattice(2, s), &SchwartzFn::unit_lattice(1, s), &model, &half)
                .unwrap();
            assert!(w.is_one());
        }
    }
}
