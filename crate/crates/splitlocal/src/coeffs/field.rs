//! The coefficient field K = Q(zeta_N)[u]/(u^2 - 1/q).
//!
//! Elements are stored as one integer vector of length `2*phi(N)` over a
//! common positive denominator: the first half holds the power-basis
//! coordinates of `a`, the second those of `b`, for `a + b*u`.  When
//! `sqrt(q)` already lies in Q(zeta_N) the quadratic layer would carry zero
//! divisors, so the session folds `u` into the cyclotomic part and every `b`
//! half stays zero.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Fixed (q, N) pair shared by every element of a computation.
#[derive(Debug)]
pub struct Session {
    q: u64,
    n: u32,
    prime: u64,
    deg: usize,
    /// `x^k mod Phi_N` for `k < N`.
    xpow: Vec<Vec<i64>>,
    /// `u` written in the cyclotomic basis (numerators, denominator) when
    /// `sqrt(q)` is in Q(zeta_N).
    u_inner: Option<(Vec<BigInt>, BigInt)>,
}

pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        p = q;
    }
    let mut r = q;
    let mut k = 0;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut out = vec![0i64; num.len() - dd];
    for i in (0..out.len()).rev() {
        let c = rem[i + dd];
        out[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    out
}

pub(crate) fn cyclotomic(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_divexact(&p, &cyclotomic(d));
        }
    }
    p
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

impl Session {
    pub fn new(q: u64, n: u32) -> Result<Arc<Session>> {
        let (prime, k) =
            prime_power(q).ok_or_else(|| Error::Invalid(format!("q = {q} is not a prime power ≥ 2")))?;
        if n == 0 {
            return Err(Error::Invalid("N must be ≥ 1".into()));
        }
        let phi = cyclotomic(n);
        let deg = phi.len() - 1;
        let mut xpow = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..n {
            xpow.push(cur.clone());
            // multiply by x and reduce with the monic Phi_N
            let top = cur[deg - 1];
            let mut next = vec![0i64; deg];
            for i in (1..deg).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..deg {
                next[i] -= top * phi[i];
            }
            cur = next;
        }
        let mut s = Session { q, n, prime, deg, xpow, u_inner: None };
        s.u_inner = s.inner_sqrt(k).map(|root| (root, BigInt::from(q)));
        Ok(Arc::new(s))
    }

    /// sqrt(q) in the cyclotomic basis, if it exists there.
    fn inner_sqrt(&self, k: u32) -> Option<Vec<BigInt>> {
        let p = self.prime;
        let n = self.n as u64;
        let scale = BigInt::from(p).pow(k / 2);
        let mut root = vec![BigInt::zero(); self.deg];
        if k % 2 == 0 {
            root[0] = scale;
            return Some(root);
        }
        let sqrt_p: Vec<i64> = if p == 2 {
            if n % 8 != 0 {
                return None;
            }
            let e = (n / 8) as usize;
            let mut v = self.xpow[e].clone();
            for (a, b) in v.iter_mut().zip(&self.xpow[(n as usize - e) % n as usize]) {
                *a += b;
            }
            v
        } else {
            let need = if p % 4 == 1 { p } else { 4 * p };
            if n % need != 0 {
                return None;
            }
            let step = n / p;
            let mut g = vec![0i64; self.deg];
            for a in 1..p {
                let l = legendre(a, p);
                for (gi, xi) in g.iter_mut().zip(&self.xpow[((a * step) % n) as usize]) {
                    *gi += l * xi;
                }
            }
            if p % 4 == 1 {
                g
            } else {
                // G = i sqrt(p), so sqrt(p) = -i G = i^3 G
                let i3 = &self.xpow[(3 * n / 4) as usize];
                let prod = self.cyc_mul_i64(&g, i3);
                prod
            }
        };
        for (r, s) in root.iter_mut().zip(sqrt_p) {
            *r = &scale * s;
        }
        Some(root)
    }

    fn cyc_mul_i64(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let d = self.deg;
        let mut out = vec![0i64; d];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0 {
                    continue;
                }
                let k = (i + j) % self.n as usize;
                for (o, x) in out.iter_mut().zip(&self.xpow[k]) {
                    *o += a[i] * b[j] * x;
                }
            }
        }
        out
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// The prime p with q = p^k.
    pub fn prime(&self) -> u64 {
        self.prime
    }
    /// phi(N), the degree of Q(zeta_N).
    pub fn degree(&self) -> usize {
        self.deg
    }
    /// Whether `u` had to be folded into Q(zeta_N).
    pub fn u_folded(&self) -> bool {
        self.u_inner.is_some()
    }
    pub(crate) fn xpow(&self, k: usize) -> &[i64] {
        &self.xpow[k % self.n as usize]
    }

    fn same(&self, other: &Session) -> bool {
        self.q == other.q && self.n == other.n
    }

    /// Product in Q(zeta_N) of two integer coordinate vectors.
    fn cyc_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.deg;
        let mut raw: Vec<BigInt> = vec![BigInt::zero(); 2 * d - 1];
        let mut any = false;
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                raw[i + j] += ai * bj;
                any = true;
            }
        }
        if !any {
            return vec![BigInt::zero(); d];
        }
        let mut out: Vec<BigInt> = raw.drain(..d).collect();
        for (off, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.xpow(d + off)) {
                if x != 0 {
                    *o += &c * x;
                }
            }
        }
        out
    }
}

/// An element of K; carries its session.
#[derive(Clone)]
pub struct CoeffElement {
    s: Arc<Session>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CoeffElement {
    fn raw(s: &Arc<Session>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -&*x;
            }
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if num.iter().all(|x| x.is_zero()) {
            den = BigInt::one();
        } else if !g.is_one() {
            for x in num.iter_mut() {
                *x = &*x / &g;
            }
            den = den / g;
        }
        CoeffElement { s: s.clone(), num, den }
    }

    pub fn zero(s: &Arc<Session>) -> Self {
        CoeffElement { s: s.clone(), num: vec![BigInt::zero(); 2 * s.deg], den: BigInt::one() }
    }
    pub fn one(s: &Arc<Session>) -> Self {
        Self::from_int(s, 1)
    }
    pub fn from_int(s: &Arc<Session>, v: i64) -> Self {
        let mut e = Self::zero(s);
        e.num[0] = BigInt::from(v);
        e
    }
    pub fn from_rational(s: &Arc<Session>, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); 2 * s.deg];
        num[0] = r.numer().clone();
        Self::raw(s, num, r.denom().clone())
    }
    pub fn from_frac(s: &Arc<Session>, p: i64, q: i64) -> Self {
        Self::from_rational(s, &BigRational::new(p.into(), q.into()))
    }
    /// zeta_N^k for any integer k.
    pub fn zeta_pow(s: &Arc<Session>, k: i64) -> Self {
        let n = s.n as i64;
        let idx = k.rem_euclid(n) as usize;
        let mut num = vec![BigInt::zero(); 2 * s.deg];
        for (o, &x) in num.iter_mut().zip(s.xpow(idx)) {
            *o = BigInt::from(x);
        }
        CoeffElement { s: s.clone(), num, den: BigInt::one() }
    }
    /// u^k = q^{-k/2}.
    pub fn u_pow(s: &Arc<Session>, k: i64) -> Self {
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let qpow = BigInt::from(s.q).pow(half.unsigned_abs() as u32);
        let rat = if half >= 0 {
            BigRational::new(BigInt::one(), qpow)
        } else {
            BigRational::from_integer(qpow)
        };
        let base = Self::from_rational(s, &rat);
        if odd {
            base.mul_unchecked(&Self::u(s))
        } else {
            base
        }
    }
    pub fn u(s: &Arc<Session>) -> Self {
        match &s.u_inner {
            Some((v, d)) => {
                let mut num = v.clone();
                num.resize(2 * s.deg, BigInt::zero());
                Self::raw(s, num, d.clone())
            }
            None => {
                let mut e = Self::zero(s);
                e.num[s.deg] = BigInt::one();
                e
            }
        }
    }
    /// q^{k/2}.
    pub fn q_half_pow(s: &Arc<Session>, k: i64) -> Self {
        Self::u_pow(s, -k)
    }

    pub fn session(&self) -> &Arc<Session> {
        &self.s
    }
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }
    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|x| x.is_zero())
    }
    /// Some(r) if the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(|x| x.is_zero())
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }
    /// Rational coordinates: (a-part, b-part), each of length phi(N).
    pub fn coordinates(&self) -> (Vec<BigRational>, Vec<BigRational>) {
        let d = self.s.deg;
        let f = |x: &BigInt| BigRational::new(x.clone(), self.den.clone());
        (self.num[..d].iter().map(f).collect(), self.num[d..].iter().map(f).collect())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.s, &o.s) || self.s.same(&o.s) {
            Ok(())
        } else {
            Err(Error::MixedSession(self.s.q, self.s.n, o.s.q, o.s.n))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_unchecked(o))
    }
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn add_unchecked(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect();
            return Self::raw(&self.s, num, self.den.clone());
        }
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
        Self::raw(&self.s, num, &self.den * &o.den)
    }

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let d = self.s.deg;
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.s);
        }
        if let Some(r) = o.small_scalar() {
            return self.scale_int(&r.0, &r.1);
        }
        if let Some(r) = self.small_scalar() {
            return o.scale_int(&r.0, &r.1);
        }
        let (a0, a1) = self.num.split_at(d);
        let (b0, b1) = o.num.split_at(d);
        let a1z = a1.iter().all(|x| x.is_zero());
        let b1z = b1.iter().all(|x| x.is_zero());
        let mut num = self.s.cyc_mul(a0, b0);
        let den;
        if a1z && b1z {
            num.resize(2 * d, BigInt::zero());
            den = &self.den * &o.den;
        } else {
            let q = BigInt::from(self.s.q);
            let p11 = if a1z || b1z { vec![BigInt::zero(); d] } else { self.s.cyc_mul(a1, b1) };
            let mut p01 = if b1z { vec![BigInt::zero(); d] } else { self.s.cyc_mul(a0, b1) };
            if !a1z {
                for (x, y) in p01.iter_mut().zip(self.s.cyc_mul(a1, b0)) {
                    *x += y;
                }
            }
            for (x, y) in num.iter_mut().zip(p11) {
                *x = &*x * &q + y;
            }
            num.extend(p01.into_iter().map(|x| x * &q));
            den = &self.den * &o.den * q;
        }
        Self::raw(&self.s, num, den)
    }

    /// (numerator, denominator) when the element is rational.
    fn small_scalar(&self) -> Option<(BigInt, BigInt)> {
        self.num[1..].iter().all(|x| x.is_zero()).then(|| (self.num[0].clone(), self.den.clone()))
    }

    fn scale_int(&self, n: &BigInt, d: &BigInt) -> Self {
        let num = self.num.iter().map(|x| x * n).collect();
        Self::raw(&self.s, num, &self.den * d)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.scale_int(r.numer(), r.denom())
    }

    pub fn neg(&self) -> Self {
        CoeffElement { s: self.s.clone(), num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    pub fn sub_unchecked(&self, o: &Self) -> Self {
        self.add_unchecked(&o.neg())
    }

    /// Multiply by zeta^k (a permutation-with-reduction of coordinates).
    pub fn mul_zeta(&self, k: i64) -> Self {
        let d = self.s.deg;
        let n = self.s.n as i64;
        if k.rem_euclid(n) == 0 {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); 2 * d];
        for half in 0..2 {
            for i in 0..d {
                let c = &self.num[half * d + i];
                if c.is_zero() {
                    continue;
                }
                let idx = (i as i64 + k).rem_euclid(n) as usize;
                for (j, &x) in self.s.xpow(idx).iter().enumerate() {
                    if x != 0 {
                        num[half * d + j] += c * x;
                    }
                }
            }
        }
        CoeffElement { s: self.s.clone(), num, den: self.den.clone() }
    }

    /// Multiply by u (swap of halves with a 1/q), or by the folded u.
    pub fn mul_u(&self) -> Self {
        if self.s.u_inner.is_some() {
            return self.mul_unchecked(&Self::u(&self.s));
        }
        let d = self.s.deg;
        let mut num = Vec::with_capacity(2 * d);
        num.extend(self.num[d..].iter().cloned());
        let q = BigInt::from(self.s.q);
        num.extend(self.num[..d].iter().map(|x| x * &q));
        Self::raw(&self.s, num, &self.den * q)
    }

    /// a - b u
    fn u_conj(&self) -> Self {
        let d = self.s.deg;
        let mut num = self.num.clone();
        for x in num[d..].iter_mut() {
            *x = -&*x;
        }
        CoeffElement { s: self.s.clone(), num, den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if let Some((n, d)) = self.small_scalar() {
            return Ok(Self::from_rational(&self.s, &BigRational::new(d, n)));
        }
        let c = self.u_conj();
        let norm = self.mul_unchecked(&c);
        let d = self.s.deg;
        debug_assert!(norm.num[d..].iter().all(|x| x.is_zero()));
        let inv_norm = self.cyc_inv(&norm.num[..d], &norm.den)?;
        Ok(c.mul_unchecked(&inv_norm))
    }

    /// Inverse of (v / den) in Q(zeta_N) by solving the multiplication matrix.
    fn cyc_inv(&self, v: &[BigInt], den: &BigInt) -> Result<Self> {
        let d = self.s.deg;
        // column j = v * x^j
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = vec![BigInt::zero(); d];
            e[j] = BigInt::one();
            cols.push(self.s.cyc_mul(v, &e));
        }
        // augmented rows over Q
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    (0..d).map(|j| BigRational::from_integer(cols[j][i].clone())).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::ZeroInverse)?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        // solution y solves (v/1) y = 1, so (v/den)^{-1} = den * y
        let mut l = BigInt::one();
        for row in &m {
            l = l.lcm(row[d].denom());
        }
        let mut num: Vec<BigInt> = m.iter().map(|row| (&row[d] * BigRational::from_integer(l.clone())).to_integer() * den).collect();
        num.resize(2 * d, BigInt::zero());
        Ok(Self::raw(&self.s, num, l))
    }

    /// Complex conjugation: zeta -> zeta^{-1}, u fixed.
    pub fn conj(&self) -> Self {
        let d = self.s.deg;
        let n = self.s.n as usize;
        let mut num = vec![BigInt::zero(); 2 * d];
        for half in 0..2 {
            for i in 0..d {
                let c = &self.num[half * d + i];
                if c.is_zero() {
                    continue;
                }
                for (j, &x) in self.s.xpow((n - i % n) % n).iter().enumerate() {
                    if x != 0 {
                        num[half * d + j] += c * x;
                    }
                }
            }
        }
        CoeffElement { s: self.s.clone(), num, den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.s);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// Complex value under zeta -> e^{2 pi i/N}, u -> q^{-1/2}.
    pub fn embed(&self) -> Complex64 {
        let d = self.s.deg;
        let n = self.s.n as f64;
        let u = (self.s.q as f64).powf(-0.5);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / n);
            let a = big_ratio_f64(&self.num[i], &self.den);
            let b = big_ratio_f64(&self.num[d + i], &self.den);
            acc += z * (a + b * u);
        }
        acc
    }
}

pub(crate) fn big_ratio_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as usize;
            let a = (n >> shift).to_f64().unwrap_or(0.0);
            let b = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
            a / b
        }
    }
}

impl PartialEq for CoeffElement {
    fn eq(&self, o: &Self) -> bool {
        self.s.same(&o.s) && self.den == o.den && self.num == o.num
    }
}
impl Eq for CoeffElement {}

impl Hash for CoeffElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.num.hash(h);
        self.den.hash(h);
    }
}

impl PartialOrd for CoeffElement {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for CoeffElement {
    fn cmp(&self, o: &Self) -> Ordering {
        self.den.cmp(&o.den).then_with(|| self.num.cmp(&o.num))
    }
}

impl fmt::Debug for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoeffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.s.deg;
        let mut parts = Vec::new();
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let r = BigRational::new(x.clone(), self.den.clone());
            let k = i % d;
            let mut s = r.to_string();
            if i >= d {
                s.push_str("*u");
            }
            if k > 0 {
                s.push_str(&format!("*z^{k}"));
            }
            parts.push(s);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&CoeffElement> for &CoeffElement {
            type Output = CoeffElement;
            fn $m(self, o: &CoeffElement) -> CoeffElement {
                self.check(o).expect("mixed coefficient sessions");
                self.$f(o)
            }
        }
        impl std::ops::$tr<CoeffElement> for CoeffElement {
            type Output = CoeffElement;
            fn $m(self, o: CoeffElement) -> CoeffElement {
                (&self).$m(&o)
            }
        }
    };
}
binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

impl std::ops::Neg for &CoeffElement {
    type Output = CoeffElement;
    fn neg(self) -> CoeffElement {
        CoeffElement::neg(self)
    }
}

/// Field operations by name, with explicit errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KOp {
    Add,
    Mul,
    Inv,
    Conj,
}

/// `inv` and `conj` act on `a` alone.
pub fn k_arith(a: &CoeffElement, b: &CoeffElement, op: KOp) -> Result<CoeffElement> {
    match op {
        KOp::Add => a.try_add(b),
        KOp::Mul => a.try_mul(b),
        KOp::Inv => a.inv(),
        KOp::Conj => Ok(a.conj()),
    }
}
