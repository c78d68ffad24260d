//! Local Euler factors as rational functions of t = q^{-s}.

use std::sync::Arc;

use crate::coeffs::{CoeffElement, LPoly, Mono, RatFunc, Session};
use crate::error::{Error, Result};
use crate::padic_geometry::PadicParams;

/// Π_a 1/(1 − a·q^{-k/2}·t^p): the factor L(p·s + k/2, {a}).
#[derive(Clone, Debug)]
pub struct LFactorSpec {
    pub satake: Vec<Mono>,
    /// k, the shift being k/2
    pub shift_half: i64,
    pub t_power: i64,
}

impl LFactorSpec {
    pub fn new(satake: Vec<Mono>, shift_half: i64, t_power: i64) -> Self {
        LFactorSpec { satake, shift_half, t_power }
    }
    /// The trivial-parameter factor ζ(p·s + k/2).
    pub fn trivial(ctx: crate::coeffs::MonoCtx, shift_half: i64, t_power: i64) -> Self {
        Self::new(vec![Mono::one(ctx)], shift_half, t_power)
    }
    fn kappas(&self) -> impl Iterator<Item = Mono> + '_ {
        self.satake.iter().map(|a| a.mul(&Mono::u(a.ctx(), self.shift_half)))
    }
    /// Denominator Π(1 − κ t^p).
    pub fn denominator(&self, s: &Arc<Session>) -> LPoly {
        self.kappas().fold(LPoly::one(s), |acc, k| acc.mul_binomial(&k, self.t_power))
    }
}

pub fn euler_factor(spec: &LFactorSpec, s: &Arc<Session>) -> RatFunc {
    RatFunc::new(LPoly::one(s), spec.denominator(s)).expect("binomial product is nonzero")
}

/// Value of an s-independent factor (t_power = 0); `name` labels pole errors.
pub fn euler_value(spec: &LFactorSpec, s: &Arc<Session>, name: &str) -> Result<CoeffElement> {
    let d = spec.denominator(s).eval(&CoeffElement::one(s))?;
    if d.is_zero() {
        return Err(Error::FactorPole(name.to_string()));
    }
    d.inv()
}

/// Π_{r=0}^{m-1} L(2s + m − r) with trivial character.
pub fn dm_normalizer(m: u32, s: &Arc<Session>) -> RatFunc {
    let ctx = crate::coeffs::MonoCtx::of(s);
    let mut den = LPoly::one(s);
    for r in 0..m as i64 {
        let k = Mono::u(ctx, 2 * (m as i64 - r));
        den = den.mul_binomial(&k, 2);
    }
    RatFunc::new(LPoly::one(s), den).expect("nonzero")
}

/// 1/((1 − t)²(1 − ct)(1 − c⁻¹t)).
pub fn lfactor_bc_pi2(p: &PadicParams) -> RatFunc {
    let ctx = p.ctx();
    let c = p.c();
    let spec = LFactorSpec::new(vec![Mono::one(ctx), Mono::one(ctx), c.clone(), c.inv()], 0, 1);
    euler_factor(&spec, p.session())
}

/// Order at t = 1 of ζ(2s)/L_E(s, BC(π₂)⊗γ).
pub fn vanish_order_t(p: &PadicParams) -> i64 {
    let s = p.session();
    let zeta2 = euler_factor(&LFactorSpec::trivial(p.ctx(), 0, 2), s);
    let q = zeta2.div(&lfactor_bc_pi2(p)).expect("nonzero");
    match q.order_at_one() {
        crate::coeffs::Order::Finite(k) => k,
        crate::coeffs::Order::Infinity => unreachable!("quotient of nonzero factors"),
    }
}

/// L(s + k/2, {βc, β⁻¹c, βc⁻¹, β⁻¹c⁻¹}): the L-factor produced by the
/// unramified doubling integral of the spherical model against the Weil
/// twist c.
pub fn doubling_lfactor(p: &PadicParams, shift_half: i64) -> RatFunc {
    let (b, c) = (p.beta(), p.c());
    let sat = vec![b.mul(&c), b.inv().mul(&c), b.mul(&c.inv()), b.inv().mul(&c.inv())];
    euler_factor(&LFactorSpec::new(sat, shift_half, 1), p.session())
}

/// c_v = L(1)²·L_E(3/2, B)/(L(3)·L_E(1/2, A)), where `half` = A and
/// `three_half` = B are the split-place parameter lists (two entries each).
pub fn const_cv(p: &PadicParams, half: &[Mono], three_half: &[Mono]) -> Result<CoeffElement> {
    let s = p.session();
    let ctx = p.ctx();
    let l1 = euler_value(&LFactorSpec::trivial(ctx, 2, 0), s, "L(1)")?;
    let l3 = euler_value(&LFactorSpec::trivial(ctx, 6, 0), s, "L(3)")?;
    let le_half = euler_value(&LFactorSpec::new(half.to_vec(), 1, 0), s, "L_E(1/2)")?;
    let le_3half = euler_value(&LFactorSpec::new(three_half.to_vec(), 3, 0), s, "L_E(3/2)")?;
    let num = l1.mul_unchecked(&l1).mul_unchecked(&le_3half);
    let den = l3.mul_unchecked(&le_half);
    Ok(num.mul_unchecked(&den.inv()?))
}
