//! Gauss sums (floating point, diagnostic only) and exact Jacobi sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloElt;
use crate::error::{Error, Result};
use crate::ffield::{CharExponent, PrimeField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussDiagnostic {
    pub p: u64,
    pub a: u64,
    pub re: f64,
    pub im: f64,
}

impl GaussDiagnostic {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `g(T^a) = sum_x T^a(x) zeta_p^x` in double precision.
pub fn gauss_sum(field: &PrimeField, a: CharExponent) -> GaussDiagnostic {
    let p = field.p();
    let n = field.order() as f64;
    let tau = std::f64::consts::TAU;
    let value: Complex64 = (1..p)
        .map(|x| {
            let e = field.char_exponent_at(a, x).unwrap() as f64;
            Complex64::from_polar(1.0, tau * e / n)
                * Complex64::from_polar(1.0, tau * x as f64 / p as f64)
        })
        .sum();
    GaussDiagnostic {
        p,
        a: a.reduced(field),
        re: value.re,
        im: value.im,
    }
}

/// Jacobi sum as an exponent histogram: entry `j` counts the `x` with
/// `A(x)B(1-x) = zeta_{p-1}^j`.
pub(crate) fn jacobi_counts(field: &PrimeField, a: CharExponent, b: CharExponent) -> Vec<i64> {
    let p = field.p();
    let n = field.order();
    let mut counts = vec![0i64; n as usize];
    for x in 2..p {
        let ea = field.char_exponent_at(a, x).unwrap();
        let eb = field.char_exponent_at(b, p + 1 - x).unwrap();
        counts[((ea + eb) % n) as usize] += 1;
    }
    counts
}

/// `J(T^a, T^b) = sum_x T^a(x) T^b(1 - x)`, exactly, in Q(zeta_{p-1}).
pub fn jacobi_sum(field: &PrimeField, a: CharExponent, b: CharExponent) -> CycloElt {
    CycloElt::from_exponent_counts(field.cyclo(), &jacobi_counts(field, a, b))
}

/// Compares `J(A, B)` under the embedding `zeta_{p-1} -> e^{2 pi i/(p-1)}`
/// with `g(A) g(B) / g(AB)`.
pub fn gauss_jacobi_check(field: &PrimeField, a: CharExponent, b: CharExponent) -> Result<bool> {
    let n = field.order();
    let (ra, rb) = (a.reduced(field), b.reduced(field));
    if ra == 0 || rb == 0 || (ra + rb) % n == 0 {
        return Err(Error::DegenerateCharacters {
            p: field.p(),
            a: ra,
            b: rb,
        });
    }
    let j = jacobi_sum(field, a, b).embed(1)?;
    let ratio = gauss_sum(field, a).value() * gauss_sum(field, b).value()
        / gauss_sum(field, CharExponent((ra + rb) % n)).value();
    Ok((j - ratio).norm() <= 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::odd_primes;

    // independent brute force through char_eval
    fn jacobi_brute(field: &PrimeField, a: CharExponent, b: CharExponent) -> CycloElt {
        let p = field.p();
        (0..p).fold(CycloElt::zero(field.cyclo()), |acc, x| {
            let term = &field.char_eval(a, x) * &field.char_eval(b, (p + 1 - x) % p);
            &acc + &term
        })
    }

    #[test]
    fn gauss_sum_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let g0 = gauss_sum(&f5, CharExponent(0)).value();
        assert!((g0 - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let g2 = gauss_sum(&f5, CharExponent(2)).value();
        assert!((g2 - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-9);
        let f7 = PrimeField::new(7).unwrap();
        let g3 = gauss_sum(&f7, CharExponent(3)).value();
        assert!((g3.norm() - 7f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn jacobi_sum_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(
            jacobi_sum(&f7, CharExponent(0), CharExponent(0)),
            CycloElt::from_integer(f7.cyclo(), 5)
        );
        let f11 = PrimeField::new(11).unwrap();
        // J(chi, chi-bar) = -chi(-1)
        let j = jacobi_sum(&f11, CharExponent(1), CharExponent(9));
        assert_eq!(j, CycloElt::from_integer(f11.cyclo(), 1));
        assert_eq!(j, jacobi_brute(&f11, CharExponent(1), CharExponent(9)));
        let f19 = PrimeField::new(19).unwrap();
        let w = jacobi_sum(&f19, CharExponent(2), CharExponent(9));
        assert_eq!(&w * &w.conj(), CycloElt::from_integer(f19.cyclo(), 19));
    }

    #[test]
    fn jacobi_norm_and_embedding_for_p11() {
        let f = PrimeField::new(11).unwrap();
        let w = jacobi_sum(&f, CharExponent(1), CharExponent(5));
        assert_eq!(&w * &w.conj(), CycloElt::from_integer(f.cyclo(), 11));
        for k in [1, 3, 7, 9] {
            assert!((w.embed(k).unwrap().norm() - 11f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn histogram_matches_brute_force() {
        for p in odd_primes(3, 23) {
            let f = PrimeField::new(p).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    let (a, b) = (CharExponent(a), CharExponent(b));
                    assert_eq!(jacobi_sum(&f, a, b), jacobi_brute(&f, a, b));
                }
            }
        }
    }

    #[test]
    fn symmetry_and_conjugation() {
        for p in odd_primes(3, 31) {
            let f = PrimeField::new(p).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    let (ca, cb) = (CharExponent(a), CharExponent(b));
                    let j = jacobi_sum(&f, ca, cb);
                    assert_eq!(j, jacobi_sum(&f, cb, ca));
                    assert_eq!(j.conj(), jacobi_sum(&f, ca.inverse(&f), cb.inverse(&f)));
                }
            }
        }
    }

    #[test]
    fn gauss_jacobi_examples() {
        let f11 = PrimeField::new(11).unwrap();
        assert!(gauss_jacobi_check(&f11, CharExponent(1), CharExponent(5)).unwrap());
        let f19 = PrimeField::new(19).unwrap();
        assert!(gauss_jacobi_check(&f19, CharExponent(2), CharExponent(9)).unwrap());
        let f7 = PrimeField::new(7).unwrap();
        assert!(matches!(
            gauss_jacobi_check(&f7, CharExponent(0), CharExponent(1)),
            Err(Error::DegenerateCharacters { .. })
        ));
        assert!(gauss_jacobi_check(&f7, CharExponent(2), CharExponent(4)).is_err());
    }
}
