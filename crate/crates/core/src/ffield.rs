//! The prime field F_p with a fixed generator of F_p^x and a dense
//! discrete-log table. Multiplicative characters are powers `T^a` of the
//! character `T` sending the generator to `zeta_{p-1}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloElt, CycloField};
use crate::error::{Error, Result};

/// Largest prime accepted; the dlog table is dense.
pub const MAX_PRIME: u64 = 1 << 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut q = 17;
    while q * q <= n {
        if n.is_multiple_of(q) || n.is_multiple_of(q + 2) {
            return false;
        }
        q += 6;
    }
    true
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(3)..=hi).filter(|&n| n % 2 == 1 && is_prime(n))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// A multiplicative character `T^a`, exponent taken modulo `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharExponent(pub u64);

impl CharExponent {
    pub const TRIVIAL: CharExponent = CharExponent(0);

    /// The quadratic character `T^((p-1)/2)`.
    pub fn quadratic(field: &PrimeField) -> Self {
        CharExponent(field.order() / 2)
    }

    pub fn reduced(self, field: &PrimeField) -> u64 {
        self.0 % field.order()
    }

    pub fn inverse(self, field: &PrimeField) -> Self {
        let n = field.order();
        CharExponent((n - self.0 % n) % n)
    }
}

#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    generator: u64,
    // dlog[x] for x in 1..p; dlog[0] unused
    dlog: Vec<u32>,
    // powers[e] = generator^e, e in 0..p-1
    powers: Vec<u32>,
    cyclo: Arc<CycloField>,
}

impl PrimeField {
    /// Builds F_p with its smallest primitive root and full dlog table.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::EvenOrTooSmall(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::TooLarge(p));
        }
        let order = p - 1;
        let factors = prime_factors(order);
        let generator = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
            .expect("every prime field has a primitive root");
        let mut dlog = vec![0u32; p as usize];
        let mut powers = vec![0u32; order as usize];
        let mut x = 1u64;
        for e in 0..order {
            powers[e as usize] = x as u32;
            dlog[x as usize] = e as u32;
            x = x * generator % p;
        }
        Ok(PrimeField {
            p,
            generator,
            dlog,
            powers,
            cyclo: CycloField::new(order),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p - 1`, the order of the character group.
    pub fn order(&self) -> u64 {
        self.p - 1
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// The cyclotomic field of conductor `p - 1` where character values live.
    pub fn cyclo(&self) -> &Arc<CycloField> {
        &self.cyclo
    }

    /// Discrete log base the generator; `None` at zero.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        (x != 0).then(|| self.dlog[x as usize] as u64)
    }

    /// `generator^e`, exponent taken mod `p - 1`.
    pub fn gen_pow(&self, e: u64) -> u64 {
        self.powers[(e % self.order()) as usize] as u64
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        let l = self.dlog(x)?;
        Some(self.gen_pow(self.order() - l))
    }

    /// Reduction of `num/den` mod p, `None` when p divides the denominator.
    pub fn reduce_fraction(&self, num: i64, den: i64) -> Option<u64> {
        let d = self.inv(self.reduce(den))?;
        Some(self.reduce(num) * d % self.p)
    }

    /// Exponent `e` with `T^a(x) = zeta_{p-1}^e`, or `None` when `x = 0`.
    pub fn char_exponent_at(&self, a: CharExponent, x: u64) -> Option<u64> {
        let l = self.dlog(x)?;
        Some((a.0 % self.order()) * l % self.order())
    }

    /// `T^a(x)` in Q(zeta_{p-1}); every character vanishes at 0.
    pub fn char_eval(&self, a: CharExponent, x: u64) -> CycloElt {
        match self.char_exponent_at(a, x) {
            Some(e) => CycloElt::zeta_pow(&self.cyclo, e as i64),
            None => CycloElt::zero(&self.cyclo),
        }
    }

    /// Legendre symbol via Euler's criterion.
    pub fn legendre(&self, x: u64) -> i8 {
        match pow_mod(x % self.p, (self.p - 1) / 2, self.p) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }
}
