//! Exact arithmetic in the cyclotomic field Q(zeta_n).
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(n)-1)`
//! reduced modulo the n-th cyclotomic polynomial, so two elements are equal
//! exactly when their coefficient vectors are. Coefficients are rationals that
//! share one positive denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            out -= out / q;
        }
        q += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn moebius(n: u64) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            m /= q;
            if m.is_multiple_of(q) {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// The n-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Built as the product of `(x^d - 1)^mu(n/d)` over divisors `d | n`; each
/// factor is sparse so this is linear in `n` per divisor.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let deg = euler_phi(n) as usize;
    // Work with (1 - x^d) factors: prod (1 - x^d)^mu(n/d) equals Phi_n for n > 1
    // and -Phi_1 for n = 1. Truncated power series of degree `deg` suffice.
    let mut series = vec![0i64; deg + 1];
    series[0] = 1;
    for d in divisors(n) {
        let d_us = d as usize;
        match moebius(n / d) {
            1 => {
                for i in (d_us..=deg).rev() {
                    series[i] -= series[i - d_us];
                }
            }
            -1 => {
                // divide by (1 - x^d): multiply by 1 + x^d + x^2d + ...
                for i in d_us..=deg {
                    series[i] += series[i - d_us];
                }
            }
            _ => {}
        }
    }
    if n == 1 {
        series.iter_mut().for_each(|c| *c = -*c);
    }
    series
}

/// Context for one conductor: the modulus polynomial and its sparse tail.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    n: u64,
    degree: usize,
    poly: Vec<i64>,
    // nonzero (index, coefficient) pairs of Phi_n below the leading term
    tail: Vec<(usize, i64)>,
}

impl CycloField {
    pub fn new(n: u64) -> Arc<Self> {
        let poly = cyclotomic_poly(n);
        let degree = poly.len() - 1;
        let tail = poly[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect();
        Arc::new(CycloField {
            n,
            degree,
            poly,
            tail,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `phi(n)`, the dimension over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.poly
    }

    /// Reduces a dense integer polynomial in zeta (any length) to the power
    /// basis. Uses `zeta^n = 1` first, then long division by Phi_n.
    pub fn reduce_i64(&self, coeffs: &[i64]) -> Vec<i64> {
        let n = self.n as usize;
        let mut v = vec![0i64; n.max(self.degree)];
        for (i, c) in coeffs.iter().enumerate() {
            v[i % n] += c;
        }
        for i in (self.degree..v.len()).rev() {
            let c = v[i];
            if c != 0 {
                let shift = i - self.degree;
                for &(j, pj) in &self.tail {
                    v[shift + j] -= c * pj;
                }
                v[i] = 0;
            }
        }
        v.truncate(self.degree);
        v
    }

    fn reduce_big(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.n as usize;
        if v.len() > n {
            let extra = v.split_off(n);
            for (i, c) in extra.into_iter().enumerate() {
                v[i % n] += c;
            }
        }
        if v.len() < self.degree {
            v.resize(self.degree, BigInt::zero());
        }
        for i in (self.degree..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            let shift = i - self.degree;
            for &(j, pj) in &self.tail {
                v[shift + j] -= &c * pj;
            }
        }
        v.truncate(self.degree);
        v
    }
}

/// An element of Q(zeta_n).
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElt {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElt {
    fn from_parts(field: Arc<CycloField>, num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree);
        let mut out = CycloElt { field, num, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            self.num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            self.num.iter_mut().for_each(|c| *c /= &g);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloElt {
            field: Arc::clone(field),
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CycloField>, value: i64) -> Self {
        Self::from_rational(field, &BigRational::from_integer(value.into()))
    }

    pub fn from_rational(field: &Arc<CycloField>, value: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = value.numer().clone();
        Self::from_parts(Arc::clone(field), num, value.denom().clone())
    }

    /// `zeta_n^k`, any integer `k`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let n = field.n as i64;
        let e = k.rem_euclid(n) as usize;
        let mut dense = vec![0i64; e + 1];
        dense[e] = 1;
        Self::from_exponent_counts(field, &dense)
    }

    /// `sum_j counts[j] * zeta^j`.
    pub fn from_exponent_counts(field: &Arc<CycloField>, counts: &[i64]) -> Self {
        let reduced = field.reduce_i64(counts);
        let num = reduced.into_iter().map(BigInt::from).collect();
        Self::from_parts(Arc::clone(field), num, BigInt::one())
    }

    /// Builds an element from power-basis coefficients (reduced mod Phi_n).
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = field.reduce_big(num);
        Self::from_parts(Arc::clone(field), num, den)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.n
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The value as an integer if it lies in Z.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.field.n == other.field.n,
            "conductor mismatch: {} vs {}",
            self.field.n,
            other.field.n
        );
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.field.n as usize;
        let mut dense = vec![BigInt::zero(); n];
        for (j, c) in self.num.iter().enumerate() {
            dense[(n - j) % n] += c;
        }
        let num = self.field.reduce_big(dense);
        Self::from_parts(Arc::clone(&self.field), num, self.den.clone())
    }

    /// Applies the automorphism `zeta -> zeta^k`, `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let n = self.field.n;
        let kk = k.rem_euclid(n as i64) as u64;
        if kk.gcd(&n) != 1 {
            return Err(Error::NotCoprime { k, n });
        }
        let mut dense = vec![BigInt::zero(); n as usize];
        for (j, c) in self.num.iter().enumerate() {
            dense[((j as u64 * kk) % n) as usize] += c;
        }
        let num = self.field.reduce_big(dense);
        Ok(Self::from_parts(
            Arc::clone(&self.field),
            num,
            self.den.clone(),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.field.n));
        }
        let deg = self.field.degree;
        // Column j of the multiplication matrix is self * zeta^j; solve M u = e_0.
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(deg);
        let mut cur = self.num.clone();
        for _ in 0..deg {
            cols.push(cur.clone());
            let mut shifted = vec![BigInt::zero(); deg + 1];
            for (i, c) in cur.into_iter().enumerate() {
                shifted[i + 1] = c;
            }
            cur = self.field.reduce_big(shifted);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..deg)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..deg)
                    .map(|c| BigRational::from_integer(cols[c][r].clone()))
                    .collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..deg {
            let pivot = (col..deg)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(Error::DivisionByZero(self.field.n))?;
            aug.swap(col, pivot);
            let inv_p = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &inv_p;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = aug.into_iter().map(|mut r| r.pop().unwrap()).collect();
        // u is in coordinates of the basis zeta^j, then scale by the denominator
        let scale = BigRational::from_integer(self.den.clone());
        let coeffs: Vec<BigRational> = sol.into_iter().map(|x| x * &scale).collect();
        Ok(Self::from_coeffs(&self.field, &coeffs))
    }

    /// `self^e`; negative exponents go through [`CycloElt::inv`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(e.unsigned_abs()))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Least `N >= 1` with `self^N = 1`, or `None` if `self` is not a root
    /// of unity. Roots of unity in Q(zeta_n) are `+-zeta_n^k`, so their order
    /// divides `lcm(2, n)`.
    pub fn is_root_of_unity(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        // |w| = 1 under every embedding is necessary and cheap to test.
        if !(self * &self.conj()).is_one() {
            return None;
        }
        let l = self.field.n.lcm(&2);
        if !self.pow_u(l).is_one() {
            return None;
        }
        divisors(l).into_iter().find(|&d| self.pow_u(d).is_one())
    }

    /// Evaluates under `zeta_n -> exp(2 pi i k / n)`.
    pub fn embed(&self, k: i64) -> Result<Complex64> {
        let n = self.field.n;
        if (k.rem_euclid(n as i64) as u64).gcd(&n) != 1 {
            return Err(Error::NotCoprime { k, n });
        }
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle =
                2.0 * std::f64::consts::PI * ((k as i128 * j as i128).rem_euclid(n as i128) as f64)
                    / n as f64;
            acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, angle);
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn add(self, rhs: &CycloElt) -> CycloElt {
        self.check_same(rhs);
        let den = self.den.lcm(&rhs.den);
        let (fa, fb) = (&den / &self.den, &den / &rhs.den);
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        CycloElt::from_parts(Arc::clone(&self.field), num, den)
    }
}

impl<'a> Sub<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn sub(self, rhs: &CycloElt) -> CycloElt {
        self + &(-rhs)
    }
}

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        CycloElt {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a CycloElt> for &'a CycloElt {
    type Output = CycloElt;
    fn mul(self, rhs: &CycloElt) -> CycloElt {
        self.check_same(rhs);
        let deg = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * deg - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce_big(prod);
        CycloElt::from_parts(Arc::clone(&self.field), num, &self.den * &rhs.den)
    }
}

impl fmt::Debug for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElt(n={}, {})", self.field.n, self)
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = BigRational::new(c.clone(), self.den.clone());
            let (sign, mag) = if coeff.is_negative() {
                ("-", -coeff)
            } else {
                ("+", coeff)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{j}")?,
                (_, false) => write!(f, "{mag}*z^{j}")?,
            }
        }
        Ok(())
    }
}
