//! Matrix coefficients on Cartan cells: the split Weil representation on
//! 𝒮(F³), the spherical function of the unramified principal series with
//! Satake parameters (β, β⁻¹), and GL(1) characters.

use num_rational::BigRational;
use num_traits::One;

use crate::coeffs::{CoeffElement, Mono};
use crate::error::{Error, Result};
use crate::padic_geometry::PadicParams;
use crate::schwartz::{a_nm, b_nm, locality_threshold, sb_scale_pair_coords, Coord, SchwartzFn};

/// ⟨ω(diag(ϖ^{e₁}, ϖ^{e₂}, ϖ^{e₃}))φ, φ⟩ = (cu)^{Σe}·⟨φ(ϖ^e·), φ⟩.
pub fn weil_coeff(p: &PadicParams, phi: &SchwartzFn, e: &[i64]) -> Result<CoeffElement> {
    let coords: Vec<Coord> = e.iter().map(|&x| Coord::Scaled(x)).collect();
    let pair = sb_scale_pair_coords(phi, phi, &coords)?;
    let sum: i64 = e.iter().sum();
    Ok(p.c().mul(&p.u()).pow(sum).act(&pair))
}

/// The stabilised form of c_{n,m,l} = weil_coeff(φ, (n+m, n, l)), valid for |l| ≥ l₁.
pub fn weil_coeff_asym(p: &PadicParams, phi: &SchwartzFn, n: i64, m: i64, l: i64) -> Result<CoeffElement> {
    let l1 = locality_threshold(phi);
    if l.abs() < l1 {
        return Err(Error::Invalid(format!("|l| = {} is below the stabilisation level {l1}", l.abs())));
    }
    let c = p.c();
    let u = p.u();
    let k = 2 * n + m;
    if l >= 0 {
        Ok(c.mul(&u).pow(k + l).act(&a_nm(phi, n, m)?))
    } else {
        // |det|^{1/2} contributes u^{k+l}; the x₃-dilation of ψ's side gives u^{-2l}
        Ok(c.pow(k + l).mul(&u.pow(k - l)).act(&b_nm(phi, n, m)?))
    }
}

/// Satake data of the spherical function.
#[derive(Clone, Debug)]
pub struct SphericalModel {
    pub beta: Mono,
    /// A = (1 − q⁻¹β⁻²)/(1 − β⁻²) and its β ↦ β⁻¹ image, scaled by 1/(1 + 1/q)
    pub c1: CoeffElement,
    pub c2: CoeffElement,
    /// β² = 1: the generic closed form has a removable singularity
    pub degenerate: bool,
}

impl SphericalModel {
    pub fn new(p: &PadicParams) -> Result<Self> {
        let s = p.session();
        let beta = p.beta();
        let b2 = beta.pow(2);
        let degenerate = b2.is_one();
        let qinv = CoeffElement::from_frac(s, 1, p.q as i64);
        let norm = CoeffElement::one(s).add_unchecked(&qinv).inv()?;
        let (c1, c2) = if degenerate {
            (CoeffElement::one(s), CoeffElement::zero(s))
        } else {
            let one = CoeffElement::one(s);
            let coef = |x: &Mono| -> Result<CoeffElement> {
                let xk = x.to_k(s);
                let num = one.sub_unchecked(&qinv.mul_unchecked(&xk));
                Ok(num.mul_unchecked(&one.sub_unchecked(&xk).inv()?).mul_unchecked(&norm))
            };
            (coef(&b2.inv())?, coef(&b2)?)
        };
        Ok(SphericalModel { beta, c1, c2, degenerate })
    }

    /// d_m = ⟨π(diag(ϖ^m, 1))v, v⟩.
    pub fn dm(&self, p: &PadicParams, m: u64) -> CoeffElement {
        let s = p.session();
        let m = m as i64;
        let um = p.u().pow(m);
        if self.degenerate {
            let q = p.q as i64;
            let slope = BigRational::new((q - 1).into(), (q + 1).into());
            let poly = BigRational::one() + slope * BigRational::from_integer(m.into());
            um.mul(&self.beta.pow(m)).act(&CoeffElement::from_rational(s, &poly))
        } else {
            let a = self.beta.pow(m).act(&self.c1);
            let b = self.beta.pow(-m).act(&self.c2);
            um.act(&a.add_unchecked(&b))
        }
    }
}

pub fn macdonald_dm(p: &PadicParams, m: u64) -> Result<CoeffElement> {
    Ok(SphericalModel::new(p)?.dm(p, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Character {
    Sigma,
    Mu,
}

/// σ(ϖ^l) = μ(ϖ^l) = α^l (the central character of π₂ is trivial).
pub fn char_coeff(p: &PadicParams, _which: Character, l: i64) -> CoeffElement {
    p.alpha().pow(l).to_k(p.session())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwartz::BoxSet;

    fn params(q: u64, n: u32, c: i64) -> PadicParams {
        PadicParams::new(q, n, c, 1).unwrap()
    }

    #[test]
    fn weil_examples() {
        let p = params(3, 5, 2);
        let s = p.session();
        let phi = SchwartzFn::unit_lattice(3, s);
        assert!(weil_coeff(&p, &phi, &[0, 0, 0]).unwrap().is_one());
        let cu = p.c().mul(&p.u()).to_k(s);
        assert_eq!(weil_coeff(&p, &phi, &[1, 0, 0]).unwrap(), cu);
        let expect = p.c().inv().to_k(s).mul_unchecked(&CoeffElement::q_half_pow(s, -1));
        assert_eq!(weil_coeff(&p, &phi, &[-1, 0, 0]).unwrap(), expect);
    }

    #[test]
    fn stabilised_branches_agree() {
        let p = params(2, 8, 3);
        let s = p.session();
        let phi = SchwartzFn::indicator(vec![BoxSet::ball(-1), BoxSet::shell(0), BoxSet::ball(1)], s)
            .plus(vec![BoxSet::ball(0); 3], CoeffElement::zeta_pow(s, 1))
            .unwrap();
        let l1 = locality_threshold(&phi);
        assert!(l1 > 0);
        for l in l1..l1 + 4 {
            for (n, m) in [(0, 0), (2, 1), (-3, 2)] {
                for sign in [1, -1] {
                    let a = weil_coeff_asym(&p, &phi, n, m, sign * l).unwrap();
                    let b = weil_coeff(&p, &phi, &[n + m, n, sign * l]).unwrap();
                    assert_eq!(a, b, "n={n} m={m} l={}", sign * l);
                }
            }
        }
        assert!(weil_coeff_asym(&p, &phi, 0, 0, 0).is_err());
    }

    /// d₁ from the Hecke operator: T = 1_{K diag(ϖ,1) K} acts on the spherical
    /// vector by q^{1/2}(β + β⁻¹), spread over q + 1 cosets.
    #[test]
    fn dm_hecke_oracle_and_recursion() {
        for (q, n, c) in [(3u64, 5u32, 1i64), (2, 4, 1), (5, 12, 5), (3, 2, 1), (4, 1, 0)] {
            let p = params(q, n, c);
            let s = p.session();
            let model = SphericalModel::new(&p).unwrap();
            assert!(model.dm(&p, 0).is_one());
            let b = p.beta();
            let eig = CoeffElement::q_half_pow(s, 1).mul_unchecked(&b.to_k(s).add_unchecked(&b.inv().to_k(s)));
            let d1 = eig.mul_unchecked(&CoeffElement::from_frac(s, 1, q as i64 + 1));
            assert_eq!(model.dm(&p, 1), d1, "q={q} N={n}");
            let tr = p.u().to_k(s).mul_unchecked(&b.to_k(s).add_unchecked(&b.inv().to_k(s)));
            let u2 = CoeffElement::from_frac(s, 1, q as i64);
            for m in 0..6 {
                let lhs = model.dm(&p, m + 2);
                let rhs = tr.mul_unchecked(&model.dm(&p, m + 1)).sub_unchecked(&u2.mul_unchecked(&model.dm(&p, m)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn characters() {
        let p = PadicParams::new(3, 4, 0, 1).unwrap();
        assert!(char_coeff(&p, Character::Sigma, 0).is_one());
        assert_eq!(char_coeff(&p, Character::Mu, 2), CoeffElement::from_int(p.session(), -1));
        assert_eq!(char_coeff(&p, Character::Sigma, -1), char_coeff(&p, Character::Sigma, 1).conj());
    }
}
