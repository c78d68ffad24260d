use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{CoeffElement, Session};
use super::poly::{gcd, LPoly};
use crate::error::{Error, Result};

/// Open annulus lo < |t| < hi on which a defining series converged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub lo: f64,
    pub hi: f64,
}

impl Annulus {
    pub const FULL: Annulus = Annulus { lo: 0.0, hi: f64::INFINITY };

    pub fn intersect(self, o: Annulus) -> Annulus {
        Annulus { lo: self.lo.max(o.lo), hi: self.hi.min(o.hi) }
    }
    pub fn contains(&self, r: f64) -> bool {
        self.lo < r && r < self.hi
    }
    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

/// Order at t = 1; the zero function has infinite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(i64),
    Infinity,
}

impl Order {
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Order::Finite(v) => v >= k,
            Order::Infinity => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone)]
pub struct RatFunc {
    num: LPoly,
    den: LPoly,
    annulus: Option<Annulus>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    Numeric,
}

impl RatFunc {
    pub fn new(num: LPoly, den: LPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFunc { num, den, annulus: None })
    }
    pub fn from_poly(p: LPoly) -> Self {
        let s = p.session().clone();
        RatFunc { num: p, den: LPoly::one(&s), annulus: None }
    }
    pub fn constant(c: CoeffElement) -> Self {
        Self::from_poly(LPoly::constant(c))
    }
    pub fn zero(s: &Arc<Session>) -> Self {
        Self::from_poly(LPoly::zero(s))
    }
    pub fn one(s: &Arc<Session>) -> Self {
        Self::from_poly(LPoly::one(s))
    }
    pub fn with_annulus(mut self, a: Option<Annulus>) -> Self {
        self.annulus = a;
        self
    }

    pub fn num(&self) -> &LPoly {
        &self.num
    }
    pub fn den(&self) -> &LPoly {
        &self.den
    }
    pub fn annulus(&self) -> Option<Annulus> {
        self.annulus
    }
    pub fn session(&self) -> &Arc<Session> {
        self.num.session()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn meet(a: Option<Annulus>, b: Option<Annulus>) -> Option<Annulus> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.intersect(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let annulus = Self::meet(self.annulus, o.annulus);
        if self.den == o.den {
            return RatFunc { num: self.num.add(&o.num), den: self.den.clone(), annulus };
        }
        RatFunc { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den), annulus }
    }
    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone(), annulus: self.annulus }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        RatFunc {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
            annulus: Self::meet(self.annulus, o.annulus),
        }
    }
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFunc {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
            annulus: Self::meet(self.annulus, o.annulus),
        })
    }
    pub fn scale(&self, c: &CoeffElement) -> Self {
        RatFunc { num: self.num.scale(c), den: self.den.clone(), annulus: self.annulus }
    }

    /// Exact equality as functions (cross-multiplication).
    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// Cancel the common factor (shared (1 − t)-powers first, then the full
    /// gcd) and scale so the denominator has constant term 1.
    pub fn normalize(&self) -> Result<Self> {
        if self.den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let s = self.session().clone();
        if self.num.is_zero() {
            return Ok(RatFunc::zero(&s).with_annulus(self.annulus));
        }
        let tpow = self.num.low() - self.den.low();
        let mut n = self.num.shift(-self.num.low());
        let mut d = self.den.shift(-self.den.low());
        let (kn, nq) = n.split_at_one().unwrap();
        let (kd, dq) = d.split_at_one().unwrap();
        let k = kn.min(kd);
        let one = LPoly::one(&s);
        let t_minus_one = LPoly::t_pow(&s, 1).sub(&one);
        n = nq.mul(&t_minus_one.pow(kn - k));
        d = dq.mul(&t_minus_one.pow(kd - k));
        let g = gcd(&n, &d)?;
        if g.high() > 0 {
            n = n.div_rem(&g)?.0;
            d = d.div_rem(&g)?.0;
        }
        let c0 = d.coeff(0).inv()?;
        Ok(RatFunc { num: n.scale(&c0).shift(tpow), den: d.scale(&c0), annulus: self.annulus })
    }

    /// Order in (1 − t) at t = 1 together with the value g(1) of the cofactor.
    pub fn order_and_lead(&self) -> Result<(Order, Option<CoeffElement>)> {
        let Some((kn, n)) = self.num.split_at_one() else {
            return Ok((Order::Infinity, None));
        };
        let (kd, d) = self.den.split_at_one().ok_or(Error::ZeroDenominator)?;
        // (t − 1)^k = (−1)^k (1 − t)^k
        let k = kn as i64 - kd as i64;
        let mut lead = n.sum_coeffs().mul_unchecked(&d.sum_coeffs().inv()?);
        if k.rem_euclid(2) == 1 {
            lead = lead.neg();
        }
        Ok((Order::Finite(k), Some(lead)))
    }

    pub fn order_at_one(&self) -> Order {
        self.order_and_lead().map(|x| x.0).unwrap_or(Order::Infinity)
    }

    pub fn lead_at_one(&self) -> Result<CoeffElement> {
        self.order_and_lead()?.1.ok_or_else(|| Error::Invalid("leading coefficient of the zero function".into()))
    }

    pub fn eval(&self, t0: &CoeffElement) -> Result<CoeffElement> {
        let d = self.den.eval(t0);
        match d {
            Ok(dv) if !dv.is_zero() => Ok(self.num.eval(t0)?.mul_unchecked(&dv.inv()?)),
            _ => {
                let n = self.normalize()?;
                let dv = n.den.eval(t0)?;
                if dv.is_zero() {
                    return Err(Error::Pole);
                }
                Ok(n.num.eval(t0)?.mul_unchecked(&dv.inv()?))
            }
        }
    }

    pub fn eval_complex(&self, t0: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(t0);
        let scale: f64 = self.den.coeffs().iter().map(|c| c.embed().norm()).sum();
        if d.norm() > 1e-9 * scale {
            return Ok(self.num.eval_complex(t0) / d);
        }
        // a common factor of numerator and denominator may vanish here
        let n = self.normalize()?;
        let d = n.den.eval_complex(t0);
        let scale: f64 = n.den.coeffs().iter().map(|c| c.embed().norm()).sum();
        if d.norm() <= 1e-12 * scale {
            return Err(Error::Pole);
        }
        Ok(n.num.eval_complex(t0) / d)
    }
}

/// Value of rf_eval in either mode.
#[derive(Clone, Debug)]
pub enum EvalValue {
    Exact(CoeffElement),
    Numeric(Complex64),
}

pub fn rf_eval(f: &RatFunc, t0: &CoeffElement, mode: EvalMode) -> Result<EvalValue> {
    match mode {
        EvalMode::Exact => f.eval(t0).map(EvalValue::Exact),
        EvalMode::Numeric => f.eval_complex(t0.embed()).map(EvalValue::Numeric),
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Mono, MonoCtx};

    fn setup(q: u64, n: u32) -> (Arc<Session>, LPoly, LPoly) {
        let s = Session::new(q, n).unwrap();
        let one = LPoly::one(&s);
        let t = LPoly::t_pow(&s, 1);
        (s, one, t)
    }

    #[test]
    fn removable_singularities_evaluate() {
        let (s, one, t) = setup(2, 4);
        // (1 − 4t²)/((1 − 2t)(1 − t/3)) = (1 + 2t)/(1 − t/3) at t = 1/2
        let k = Mono::int(MonoCtx::of(&s), 2);
        let f = RatFunc::new(
            one.sub(&t.pow(2).scale(&CoeffElement::from_int(&s, 4))),
            one.mul_binomial(&k, 1).mul(&one.sub(&t.scale(&CoeffElement::from_frac(&s, 1, 3)))),
        )
        .unwrap();
        let v = f.eval_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 2.4).abs() < 1e-12 && v.im.abs() < 1e-12);
        let zero = RatFunc::new(LPoly::zero(&s), one.mul_binomial(&k, 1)).unwrap();
        assert_eq!(zero.eval_complex(Complex64::new(0.5, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let pole = RatFunc::new(one.clone(), one.mul_binomial(&k, 1)).unwrap();
        assert!(matches!(pole.eval_complex(Complex64::new(0.5, 0.0)), Err(Error::Pole)));
    }

    #[test]
    fn normalization_examples() {
        let (s, one, t) = setup(3, 4);
        let f = RatFunc::new(one.sub(&t.pow(2)), one.sub(&t)).unwrap().normalize().unwrap();
        assert!(f.equals(&RatFunc::from_poly(one.add(&t))));
        assert_eq!(f.den(), &one);
        let c = CoeffElement::zeta_pow(&s, 1);
        let g = RatFunc::new(one.sub(&t).scale(&c), one.sub(&t).pow(2)).unwrap().normalize().unwrap();
        assert_eq!(g.num(), &LPoly::constant(c));
        assert_eq!(g.den(), &one.sub(&t));
        let h = RatFunc::new(t.pow(3), t.clone()).unwrap().normalize().unwrap();
        assert_eq!(h.num(), &t.pow(2));
        assert_eq!(h.normalize().unwrap().num(), h.num());
        assert_eq!(RatFunc::new(one.clone(), LPoly::zero(&s)).err(), Some(Error::ZeroDenominator));
    }

    #[test]
    fn orders_and_leads() {
        let (s, one, t) = setup(3, 1);
        let f = RatFunc::new(one.sub(&t).pow(4), one.sub(&t.pow(2))).unwrap();
        assert_eq!(f.order_at_one(), Order::Finite(3));
        assert_eq!(f.lead_at_one().unwrap(), CoeffElement::from_frac(&s, 1, 2));
        let g = RatFunc::new(one.clone(), one.sub(&t)).unwrap();
        assert_eq!(g.order_at_one(), Order::Finite(-1));
        let lin = RatFunc::from_poly(one.sub(&t).scale(&CoeffElement::from_int(&s, 2)));
        assert_eq!(lin.lead_at_one().unwrap(), CoeffElement::from_int(&s, 2));
        assert_eq!(RatFunc::zero(&s).order_at_one(), Order::Infinity);
    }

    #[test]
    fn evaluation() {
        let (s, one, t) = setup(3, 4);
        let f = RatFunc::new(one.clone(), one.sub(&t)).unwrap();
        let half = CoeffElement::from_frac(&s, 1, 2);
        assert_eq!(f.eval(&half).unwrap(), CoeffElement::from_int(&s, 2));
        assert_eq!(f.eval(&CoeffElement::one(&s)).err(), Some(Error::Pole));
        let sq = RatFunc::from_poly(t.pow(2));
        let v = sq.eval_complex(CoeffElement::zeta_pow(&s, 1).embed()).unwrap();
        assert!((v + 1.0).norm() < 1e-12);
        // removable singularity is evaluated after normalization
        let r = RatFunc::new(one.sub(&t.pow(2)), one.sub(&t)).unwrap();
        assert_eq!(r.eval(&CoeffElement::one(&s)).unwrap(), CoeffElement::from_int(&s, 2));
    }
}
