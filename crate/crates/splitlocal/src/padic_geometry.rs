//! Cartan-cell bookkeeping for split GL(1) and GL(2): parameters, cell
//! volumes and the doubling height.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeffs::{prime_power, CoeffElement, Mono, MonoCtx, Session};
use crate::error::{Error, Result};

/// Local data at a split place: residue size q, root-of-unity order N and
/// the exponents of c = γ₁²(ϖ), α = σ(ϖ) and the Satake parameter β of π₂
/// (β = c unless overridden).
#[derive(Clone, Debug)]
pub struct PadicParams {
    pub q: u64,
    pub n: u32,
    pub c_exp: i64,
    pub alpha_exp: i64,
    pub beta_exp: i64,
    session: Arc<Session>,
}

impl PadicParams {
    pub fn new(q: u64, n: u32, c_exp: i64, alpha_exp: i64) -> Result<Self> {
        Self::with_beta(q, n, c_exp, alpha_exp, None)
    }

    pub fn with_beta(q: u64, n: u32, c_exp: i64, alpha_exp: i64, beta_exp: Option<i64>) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::Invalid(format!("q = {q} is not a prime power ≥ 2")));
        }
        if n == 0 {
            return Err(Error::Invalid("N must be ≥ 1".into()));
        }
        let m = n as i64;
        let c_exp = c_exp.rem_euclid(m);
        Ok(PadicParams {
            q,
            n,
            c_exp,
            alpha_exp: alpha_exp.rem_euclid(m),
            beta_exp: beta_exp.unwrap_or(c_exp).rem_euclid(m),
            session: Session::new(q, n)?,
        })
    }

    pub fn session(&self) -> &Arc<Session> {
        &self.session
    }
    pub fn ctx(&self) -> MonoCtx {
        MonoCtx::of(&self.session)
    }
    pub fn c(&self) -> Mono {
        Mono::zeta(self.ctx(), self.c_exp)
    }
    pub fn alpha(&self) -> Mono {
        Mono::zeta(self.ctx(), self.alpha_exp)
    }
    pub fn beta(&self) -> Mono {
        Mono::zeta(self.ctx(), self.beta_exp)
    }
    pub fn u(&self) -> Mono {
        Mono::u(self.ctx(), 1)
    }
    pub fn q_mono(&self) -> Mono {
        Mono::int(self.ctx(), self.q as i64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    GL1,
    GL2,
}

/// ϖ^l in GL1, or K diag(ϖ^{n+m}, ϖ^n) K in GL2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellIndex {
    pub group: Group,
    pub l: i64,
    pub n: i64,
    pub m: i64,
}

impl CellIndex {
    pub fn gl1(l: i64) -> Self {
        CellIndex { group: Group::GL1, l, n: 0, m: 0 }
    }
    pub fn gl2(n: i64, m: i64) -> Result<Self> {
        if m < 0 {
            return Err(Error::Invalid(format!("Cartan exponent m = {m} must be ≥ 0")));
        }
        Ok(CellIndex { group: Group::GL2, l: 0, n, m })
    }
}

/// Σ|a_i|: the height Δ equals q^{-result}, i.e. t^{result} after Δ^s.
pub fn delta_exponent(exponents: &[i64]) -> u64 {
    exponents.iter().map(|a| a.unsigned_abs()).sum()
}

/// Volume of the cell with vol(K) = 1: 1 for GL1 and for m = 0,
/// q^m(1 + 1/q) otherwise.
pub fn cell_measure(idx: &CellIndex, s: &Arc<Session>) -> CoeffElement {
    CoeffElement::from_rational(s, &cell_measure_rational(idx, s.q()))
}

pub(crate) fn cell_measure_rational(idx: &CellIndex, q: u64) -> BigRational {
    match idx.group {
        Group::GL1 => BigRational::from_integer(1.into()),
        Group::GL2 if idx.m == 0 => BigRational::from_integer(1.into()),
        Group::GL2 => {
            let qm = BigInt::from(q).pow(idx.m as u32 - 1);
            BigRational::from_integer(qm * (q + 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of index-p^m sublattices of Z_p² with elementary divisors
    /// (1, p^m), from Hermite normal forms [[p^a, b], [0, p^d]].
    fn hnf_count(p: u64, m: u32) -> u64 {
        let mut count = 0;
        for a in 0..=m {
            let d = m - a;
            for b in 0..p.pow(d) {
                let primitive = a == 0 || d == 0 || b % p != 0;
                if primitive {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn measure_matches_coset_count() {
        for p in [2u64, 3, 5] {
            let s = Session::new(p, 1).unwrap();
            for m in 0..5u32 {
                let idx = CellIndex::gl2(-3, m as i64).unwrap();
                let expect = CoeffElement::from_int(&s, hnf_count(p, m) as i64);
                assert_eq!(cell_measure(&idx, &s), expect, "p={p} m={m}");
            }
        }
        let s = Session::new(3, 1).unwrap();
        assert_eq!(cell_measure(&CellIndex::gl2(0, 2).unwrap(), &s), CoeffElement::from_int(&s, 12));
        assert!(cell_measure(&CellIndex::gl1(7), &s).is_one());
    }

    #[test]
    fn heights() {
        assert_eq!(delta_exponent(&[2, -1]), 3);
        assert_eq!(delta_exponent(&[0, 0, 0]), 0);
        assert_eq!(delta_exponent(&[5]), 5);
        // Δ is not multiplicative: g = diag(ϖ, 1), l = ϖ^{-1}·Id
        let gl = delta_exponent(&[1 - 1, 0 - 1]);
        let sep = delta_exponent(&[1, 0]) + delta_exponent(&[-1, -1]);
        assert!(gl < sep);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PadicParams::new(6, 4, 1, 0).is_err());
        assert!(CellIndex::gl2(0, -1).is_err());
        let p = PadicParams::new(3, 5, 7, -1).unwrap();
        assert_eq!((p.c_exp, p.alpha_exp, p.beta_exp), (2, 4, 2));
    }
}
