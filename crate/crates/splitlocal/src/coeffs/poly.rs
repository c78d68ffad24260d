use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{CoeffElement, Session};
use super::mono::Mono;
use crate::error::{Error, Result};

/// Laurent polynomial Σ coeffs[i]·t^{low+i} over K, kept trimmed: no zero
/// coefficient at either end, and the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct LPoly {
    low: i64,
    coeffs: Vec<CoeffElement>,
    session: Arc<Session>,
}

impl LPoly {
    pub fn zero(s: &Arc<Session>) -> Self {
        LPoly { low: 0, coeffs: Vec::new(), session: s.clone() }
    }
    pub fn one(s: &Arc<Session>) -> Self {
        Self::constant(CoeffElement::one(s))
    }
    pub fn constant(c: CoeffElement) -> Self {
        Self::monomial(c, 0)
    }
    pub fn monomial(c: CoeffElement, k: i64) -> Self {
        let s = c.session().clone();
        Self::from_coeffs(&s, k, vec![c])
    }
    /// t^k
    pub fn t_pow(s: &Arc<Session>, k: i64) -> Self {
        Self::monomial(CoeffElement::one(s), k)
    }
    pub fn from_coeffs(s: &Arc<Session>, low: i64, coeffs: Vec<CoeffElement>) -> Self {
        let mut p = LPoly { low, coeffs, session: s.clone() };
        p.trim();
        p
    }
    /// 1 − κ·t^w
    pub fn binomial(s: &Arc<Session>, kappa: &Mono, w: i64) -> Self {
        let one = LPoly::one(s);
        one.sub(&Self::monomial(kappa.to_k(s), w))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn session(&self) -> &Arc<Session> {
        &self.session
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn low(&self) -> i64 {
        self.low
    }
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }
    pub fn coeffs(&self) -> &[CoeffElement] {
        &self.coeffs
    }
    pub fn coeff(&self, k: i64) -> CoeffElement {
        let i = k - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            CoeffElement::zero(&self.session)
        } else {
            self.coeffs[i as usize].clone()
        }
    }
    /// Some(c) when the polynomial is the constant c (including 0).
    pub fn as_constant(&self) -> Option<CoeffElement> {
        match self.coeffs.len() {
            0 => Some(CoeffElement::zero(&self.session)),
            1 if self.low == 0 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut coeffs = vec![CoeffElement::zero(&self.session); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] = c.clone();
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(o.low - low) as usize + i];
            *slot = slot.add_unchecked(c);
        }
        Self::from_coeffs(&self.session, low, coeffs)
    }
    pub fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }
    pub fn neg(&self) -> Self {
        LPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), session: self.session.clone() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.session);
        }
        let mut coeffs = vec![CoeffElement::zero(&self.session); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add_unchecked(&a.mul_unchecked(b));
            }
        }
        Self::from_coeffs(&self.session, self.low + o.low, coeffs)
    }
    pub fn scale(&self, c: &CoeffElement) -> Self {
        if c.is_one() {
            return self.clone();
        }
        Self::from_coeffs(&self.session, self.low, self.coeffs.iter().map(|x| x.mul_unchecked(c)).collect())
    }
    pub fn scale_mono(&self, m: &Mono) -> Self {
        if m.is_one() {
            return self.clone();
        }
        Self::from_coeffs(&self.session, self.low, self.coeffs.iter().map(|x| m.act(x)).collect())
    }
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LPoly { low: self.low + k, coeffs: self.coeffs.clone(), session: self.session.clone() }
    }
    /// self·(1 − κ t^w), cheaper than a general product.
    pub fn mul_binomial(&self, kappa: &Mono, w: i64) -> Self {
        self.sub(&self.scale_mono(kappa).shift(w))
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.session);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at t = 1.
    pub fn sum_coeffs(&self) -> CoeffElement {
        self.coeffs.iter().fold(CoeffElement::zero(&self.session), |a, c| a.add_unchecked(c))
    }

    /// Quotient by (t − 1), assuming the value at 1 vanishes.
    pub fn div_t_minus_one(&self) -> Self {
        // P(t) = (t - 1) Q(t) with Q Laurent: q_{k-1} = running sum of top coefficients
        let n = self.coeffs.len();
        let mut out = vec![CoeffElement::zero(&self.session); n.saturating_sub(1)];
        let mut acc = CoeffElement::zero(&self.session);
        for i in (1..n).rev() {
            acc = acc.add_unchecked(&self.coeffs[i]);
            out[i - 1] = acc.clone();
        }
        Self::from_coeffs(&self.session, self.low, out)
    }

    /// (k, Q) with P = (t − 1)^k·Q and Q(1) ≠ 0.  Zero polynomial → None.
    pub fn split_at_one(&self) -> Option<(u32, Self)> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut p = self.clone();
        while p.sum_coeffs().is_zero() {
            p = p.div_t_minus_one();
            k += 1;
        }
        Some((k, p))
    }

    pub fn eval(&self, t: &CoeffElement) -> Result<CoeffElement> {
        if self.is_zero() {
            return Ok(CoeffElement::zero(&self.session));
        }
        let mut acc = CoeffElement::zero(&self.session);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(t).add_unchecked(c);
        }
        if self.low >= 0 {
            Ok(acc.mul_unchecked(&t.pow(self.low)?))
        } else if t.is_zero() {
            Err(Error::Pole)
        } else {
            Ok(acc.mul_unchecked(&t.pow(self.low)?))
        }
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.embed();
        }
        acc * t.powi(self.low as i32)
    }

    /// Plain (nonnegative-power) polynomial division; both must have low ≥ 0
    /// semantics — callers pass polynomials with low = 0.
    pub(crate) fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let s = &self.session;
        let dl = d.coeffs.last().unwrap().inv()?;
        let dd = d.high();
        let mut r = self.clone();
        let mut qcoef: Vec<(i64, CoeffElement)> = Vec::new();
        while !r.is_zero() && r.high() >= dd {
            let k = r.high() - dd;
            let c = r.coeffs.last().unwrap().mul_unchecked(&dl);
            r = r.sub(&d.scale(&c).shift(k));
            qcoef.push((k, c));
        }
        let mut q = LPoly::zero(s);
        for (k, c) in qcoef {
            q = q.add(&LPoly::monomial(c, k));
        }
        Ok((q, r))
    }

    pub(crate) fn monic(&self) -> Result<Self> {
        match self.coeffs.last() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv()?)),
        }
    }
}

impl PartialEq for LPoly {
    fn eq(&self, o: &Self) -> bool {
        self.low == o.low && self.coeffs == o.coeffs
    }
}
impl Eq for LPoly {}

pub(crate) fn gcd(a: &LPoly, b: &LPoly) -> Result<LPoly> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r.monic()?;
    }
    a.monic()
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*t^{}", self.low + i as i64))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_and_divide() {
        let s = Session::new(3, 1).unwrap();
        let one = LPoly::one(&s);
        let t = LPoly::t_pow(&s, 1);
        let p = one.sub(&t).pow(3).mul(&one.add(&t));
        let (k, q) = p.split_at_one().unwrap();
        assert_eq!(k, 3);
        assert_eq!(q, one.add(&t).neg());
        let (qq, r) = p.div_rem(&one.sub(&t).pow(2)).unwrap();
        assert!(r.is_zero());
        assert_eq!(qq, one.sub(&t).mul(&one.add(&t)));
    }

    #[test]
    fn gcd_of_cyclotomic_factors() {
        let s = Session::new(2, 4).unwrap();
        let t = LPoly::t_pow(&s, 1);
        let one = LPoly::one(&s);
        let i = CoeffElement::zeta_pow(&s, 1);
        let a = one.sub(&t.pow(4));
        let b = t.sub(&LPoly::constant(i.clone())).mul(&t.add(&one));
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, b.monic().unwrap());
    }
}
