//! Monomials r·ζ^z·u^j — the multiplicative scalars of every geometric
//! series ratio.  They multiply in O(1) and have a canonical form, so they
//! can key denominators and be compared against 1 exactly.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{big_ratio_f64, CoeffElement, Session};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoCtx {
    pub q: u64,
    pub n: u32,
    /// Integer square root of q when q is a perfect square.
    root: Option<u64>,
}

impl MonoCtx {
    pub fn new(q: u64, n: u32) -> Self {
        let r = (q as f64).sqrt().round() as u64;
        MonoCtx { q, n, root: (r * r == q).then_some(r) }
    }
    pub fn of(s: &Session) -> Self {
        Self::new(s.q(), s.n())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    r: BigRational,
    z: u32,
    j: u8,
    ctx: MonoCtx,
}

impl Mono {
    fn canon(mut r: BigRational, z: i64, mut j: i64, ctx: MonoCtx) -> Self {
        let mut z = z.rem_euclid(ctx.n as i64);
        if r.is_zero() {
            return Mono { r, z: 0, j: 0, ctx };
        }
        let q = BigInt::from(ctx.q);
        let half = j.div_euclid(2);
        j = j.rem_euclid(2);
        if half > 0 {
            r /= BigRational::from_integer(q.pow(half as u32));
        } else if half < 0 {
            r *= BigRational::from_integer(q.pow((-half) as u32));
        }
        if j == 1 {
            if let Some(root) = ctx.root {
                r /= BigRational::from_integer(BigInt::from(root));
                j = 0;
            }
        }
        if ctx.n % 2 == 0 && r.is_negative() {
            r = -r;
            z = (z + ctx.n as i64 / 2).rem_euclid(ctx.n as i64);
        }
        Mono { r, z: z as u32, j: j as u8, ctx }
    }

    pub fn new(ctx: MonoCtx, r: BigRational, z: i64, j: i64) -> Self {
        Self::canon(r, z, j, ctx)
    }
    pub fn one(ctx: MonoCtx) -> Self {
        Self::canon(BigRational::one(), 0, 0, ctx)
    }
    pub fn int(ctx: MonoCtx, v: i64) -> Self {
        Self::canon(BigRational::from_integer(v.into()), 0, 0, ctx)
    }
    pub fn zeta(ctx: MonoCtx, z: i64) -> Self {
        Self::canon(BigRational::one(), z, 0, ctx)
    }
    /// u^j = q^{-j/2}.
    pub fn u(ctx: MonoCtx, j: i64) -> Self {
        Self::canon(BigRational::one(), 0, j, ctx)
    }
    pub fn rational(ctx: MonoCtx, r: BigRational) -> Self {
        Self::canon(r, 0, 0, ctx)
    }

    pub fn ctx(&self) -> MonoCtx {
        self.ctx
    }
    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.z == 0 && self.j == 0 && self.r.is_one()
    }
    pub fn ratio(&self) -> &BigRational {
        &self.r
    }
    pub fn zeta_exp(&self) -> u32 {
        self.z
    }
    pub fn u_exp(&self) -> u8 {
        self.j
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        debug_assert_eq!(self.ctx, o.ctx);
        Self::canon(&self.r * &o.r, self.z as i64 + o.z as i64, self.j as i64 + o.j as i64, self.ctx)
    }
    pub fn inv(&self) -> Mono {
        assert!(!self.is_zero(), "inverse of a zero monomial");
        Self::canon(self.r.recip(), -(self.z as i64), -(self.j as i64), self.ctx)
    }
    pub fn neg(&self) -> Mono {
        Self::canon(-self.r.clone(), self.z as i64, self.j as i64, self.ctx)
    }
    pub fn conj(&self) -> Mono {
        Self::canon(self.r.clone(), -(self.z as i64), self.j as i64, self.ctx)
    }
    pub fn pow(&self, e: i64) -> Mono {
        if e == 0 {
            return Self::one(self.ctx);
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = e.unsigned_abs();
        let r = num_traits::pow::pow(base.r.clone(), k as usize);
        Self::canon(r, base.z as i64 * (k as i64 % self.ctx.n as i64), base.j as i64 * k as i64, self.ctx)
    }

    /// |value| = |r|·q^{-j/2}.
    pub fn abs(&self) -> f64 {
        big_ratio_f64(self.r.numer(), self.r.denom()).abs() * (self.ctx.q as f64).powf(-(self.j as f64) / 2.0)
    }
    /// Whether |value| = 1 exactly.
    pub fn is_unimodular(&self) -> bool {
        self.j == 0 && self.r.abs().is_one()
    }

    pub fn value(&self) -> Complex64 {
        let ang = 2.0 * std::f64::consts::PI * self.z as f64 / self.ctx.n as f64;
        Complex64::from_polar(self.abs(), ang) * if self.r.is_negative() { -1.0 } else { 1.0 }
    }

    pub fn to_k(&self, s: &Arc<Session>) -> CoeffElement {
        let mut e = CoeffElement::from_rational(s, &self.r).mul_zeta(self.z as i64);
        if self.j == 1 {
            e = e.mul_u();
        }
        e
    }

    /// self · x for x in K.
    pub fn act(&self, x: &CoeffElement) -> CoeffElement {
        if self.is_one() {
            return x.clone();
        }
        let mut e = if self.r.is_one() { x.clone() } else { x.scale(&self.r) };
        if self.z != 0 {
            e = e.mul_zeta(self.z as i64);
        }
        if self.j == 1 {
            e = e.mul_u();
        }
        e
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)?;
        if self.z != 0 {
            write!(f, "*z^{}", self.z)?;
        }
        if self.j != 0 {
            write!(f, "*u")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let c = MonoCtx::new(3, 4);
        assert!(Mono::zeta(c, 2).neg().is_one());
        assert!(Mono::u(c, 2).mul(&Mono::int(c, 3)).is_one());
        assert_eq!(Mono::zeta(c, 1).pow(-3), Mono::zeta(c, 1));
        let sq = MonoCtx::new(4, 1);
        assert_eq!(Mono::u(sq, 1), Mono::rational(sq, BigRational::new(1.into(), 2.into())));
        let odd = MonoCtx::new(2, 5);
        assert!(!Mono::int(odd, -1).is_one());
        assert!(Mono::zeta(odd, 3).mul(&Mono::zeta(odd, 3).conj()).is_one());
    }

    #[test]
    fn agrees_with_field() {
        for (q, n) in [(3u64, 5u32), (5, 20), (4, 4), (2, 8)] {
            let s = Session::new(q, n).unwrap();
            let c = MonoCtx::of(&s);
            let m = Mono::new(c, BigRational::new((-3).into(), 7.into()), 3, 5);
            let k = m.to_k(&s);
            assert!((k.embed() - m.value()).norm() < 1e-12);
            let m2 = m.pow(3).mul(&m.inv());
            assert_eq!(m2.to_k(&s), &k * &k);
            let x = CoeffElement::zeta_pow(&s, 1) + CoeffElement::from_int(&s, 2);
            assert_eq!(m.act(&x), &k * &x);
        }
    }
}
