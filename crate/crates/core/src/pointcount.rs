//! Point counts for `y^2 = x^d + c` and `y^2 = x^d + c x` over F_p.
//!
//! Counts use the normalization "affine solutions + 1" throughout, both for
//! the Jacobi-sum formulas and for the brute-force oracle. For even `d` the
//! smooth model has two points at infinity, so for those curves this is not
//! the count of the smooth projective curve.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsums::jacobi_counts;
use crate::cyclo::CycloElt;
use crate::error::{Error, Result};
use crate::ffield::{odd_primes, pow_mod, CharExponent, PrimeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `y^2 = x^d + c`
    AdditiveConstant,
    /// `y^2 = x^d + c x`, `d` odd
    LinearTwist,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::AdditiveConstant => "additive",
            Family::LinearTwist => "linear",
        })
    }
}

impl Family {
    /// The curve of this family with integer constant `c`.
    pub fn curve(self, d: u32, c: i64) -> Result<CurveSpec> {
        match self {
            Family::AdditiveConstant => CurveSpec::additive(d, c),
            Family::LinearTwist => CurveSpec::linear(d, c),
        }
    }
}

/// Nonzero rational constant `num/den` in lowest terms, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constant {
    pub num: i64,
    pub den: i64,
}

impl Constant {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidCurve("c must be a nonzero rational".into()));
        }
        let g = num.gcd(&den);
        let s = den.signum();
        Ok(Constant {
            num: s * num / g,
            den: s * den / g,
        })
    }

    pub fn integer(value: i64) -> Result<Self> {
        Self::new(value, 1)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveSpec {
    pub family: Family,
    pub d: u32,
    pub c: Constant,
}

impl CurveSpec {
    pub fn new(family: Family, d: u32, c: Constant) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidCurve(format!(
                "d must be at least 3, got {d}"
            )));
        }
        if family == Family::LinearTwist && d.is_multiple_of(2) {
            return Err(Error::InvalidCurve(format!(
                "d must be odd for y^2 = x^d + cx, got {d}"
            )));
        }
        Ok(CurveSpec { family, d, c })
    }

    pub fn additive(d: u32, c: i64) -> Result<Self> {
        Self::new(Family::AdditiveConstant, d, Constant::integer(c)?)
    }

    pub fn linear(d: u32, c: i64) -> Result<Self> {
        Self::new(Family::LinearTwist, d, Constant::integer(c)?)
    }

    pub fn genus(&self) -> u32 {
        (self.d - 1) / 2
    }

    /// Smoothness of the affine model mod p: p odd and coprime to `2 d c`,
    /// or to `2 (d - 1) c` for the linear twist, whose right-hand side
    /// `x (x^(d-1) + c)` stays squarefree when `p | d`.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        let divides = |x: i64| x.unsigned_abs().is_multiple_of(p);
        let degree_factor = match self.family {
            Family::AdditiveConstant => self.d as i64,
            Family::LinearTwist => self.d as i64 - 1,
        };
        !(p == 2 || divides(degree_factor) || divides(self.c.num) || divides(self.c.den))
    }

    /// The modulus `M` such that primes `p = 1 mod M` have all `2g` characters.
    pub fn generic_modulus(&self) -> u64 {
        match self.family {
            Family::AdditiveConstant => (self.d as u64).lcm(&2),
            Family::LinearTwist => 2 * (self.d as u64 - 1),
        }
    }

    /// `f(x)` evaluated mod p, with `c` already reduced.
    fn eval(&self, x: u64, c: u64, p: u64) -> u64 {
        let xd = pow_mod(x, self.d as u64, p);
        match self.family {
            Family::AdditiveConstant => (xd + c) % p,
            Family::LinearTwist => (xd + c * x % p) % p,
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, mag) = if self.c.num < 0 {
            (
                "-",
                Constant {
                    num: -self.c.num,
                    den: self.c.den,
                },
            )
        } else {
            ("+", self.c)
        };
        match self.family {
            Family::AdditiveConstant => write!(f, "y^2 = x^{} {sign} {mag}", self.d),
            Family::LinearTwist if mag.num == 1 && mag.den == 1 => {
                write!(f, "y^2 = x^{} {sign} x", self.d)
            }
            Family::LinearTwist => write!(f, "y^2 = x^{} {sign} ({mag})x", self.d),
        }
    }
}

/// One character `T^exponent` in the point-count sum. `index` is `m` for the
/// additive family and the odd `t = 2m + 1` for the linear twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub index: u64,
    pub exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributionSet {
    pub family: Family,
    pub p: u64,
    pub d: u32,
    pub entries: Vec<Contribution>,
}

impl ContributionSet {
    pub fn indices(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.index).collect()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.exponent).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Characters appearing in the point-count formula at `p`, ascending.
pub fn contributing_ms(p: u64, d: u32, family: Family) -> ContributionSet {
    let n = p - 1;
    let d = d as u64;
    let entries = match family {
        Family::AdditiveConstant => (1..d)
            .filter(|m| (n * m).is_multiple_of(d))
            .map(|m| Contribution {
                index: m,
                exponent: n * m / d,
            })
            .filter(|c| (1..=p - 2).contains(&c.exponent))
            .collect(),
        Family::LinearTwist => {
            let modulus = 2 * (d - 1);
            (1..modulus)
                .step_by(2)
                .filter(|t| (t * n).is_multiple_of(modulus))
                .map(|t| Contribution {
                    index: t,
                    exponent: t * n / modulus,
                })
                .filter(|c| c.exponent <= p - 2)
                .collect()
        }
    };
    ContributionSet {
        family,
        p,
        d: d as u32,
        entries,
    }
}

/// Rotation exponent of the twist factor `T^a(-c) phi(c)` for one term.
///
/// Counting `y^2 = x^d + c` as `sum_{u - w = c} #{y^2 = u} #{x^d = w}` gives
/// `phi(c) T^a(-c) J(T^a, phi)` per character. For the linear twist the
/// contributing primes have `p = 1 mod 4`, so `phi(c) = phi(-c)` there.
fn twist_shift(field: &PrimeField, curve: &CurveSpec, c: u64, exponent: u64) -> Result<u64> {
    let n = field.order();
    let p = field.p();
    let minus_c = field
        .dlog(p - c)
        .ok_or_else(|| bad_reduction(field, curve))?;
    let plus_c = field.dlog(c).ok_or_else(|| bad_reduction(field, curve))?;
    Ok((exponent % n * minus_c % n + (n / 2) * plus_c) % n)
}

fn bad_reduction(field: &PrimeField, curve: &CurveSpec) -> Error {
    Error::BadReduction {
        p: field.p(),
        curve: curve.to_string(),
    }
}

fn reduced_constant(field: &PrimeField, curve: &CurveSpec) -> Result<u64> {
    if !curve.has_good_reduction(field.p()) {
        return Err(bad_reduction(field, curve));
    }
    field
        .reduce_fraction(curve.c.num, curve.c.den)
        .ok_or_else(|| bad_reduction(field, curve))
}

/// Each contributing term `T^a(-c) phi(c) J(T^a, phi)` exactly.
pub fn frobenius_terms(
    field: &PrimeField,
    curve: &CurveSpec,
) -> Result<Vec<(Contribution, CycloElt)>> {
    let c = reduced_constant(field, curve)?;
    let phi = CharExponent::quadratic(field);
    contributing_ms(field.p(), curve.d, curve.family)
        .entries
        .into_iter()
        .map(|entry| {
            let shift = twist_shift(field, curve, c, entry.exponent)?;
            let counts = jacobi_counts(field, CharExponent(entry.exponent), phi);
            let n = counts.len();
            let mut rotated = vec![0i64; n];
            for (j, v) in counts.into_iter().enumerate() {
                rotated[(j + shift as usize) % n] += v;
            }
            Ok((
                entry,
                CycloElt::from_exponent_counts(field.cyclo(), &rotated),
            ))
        })
        .collect()
}

/// `p + 1 + sum_a T^a(-c) phi(c) J(T^a, phi)`, which must be an integer.
pub fn count_formula(field: &PrimeField, curve: &CurveSpec) -> Result<i64> {
    let c = reduced_constant(field, curve)?;
    let n = field.order() as usize;
    let phi = CharExponent::quadratic(field);
    let mut total = vec![0i64; n];
    for entry in contributing_ms(field.p(), curve.d, curve.family).entries {
        let shift = twist_shift(field, curve, c, entry.exponent)? as usize;
        for (j, v) in jacobi_counts(field, CharExponent(entry.exponent), phi)
            .into_iter()
            .enumerate()
        {
            total[(j + shift) % n] += v;
        }
    }
    let reduced = field.cyclo().reduce_i64(&total);
    if reduced[1..].iter().any(|&v| v != 0) {
        return Err(Error::NonIntegerResult {
            p: field.p(),
            curve: curve.to_string(),
        });
    }
    Ok(field.p() as i64 + 1 + reduced[0])
}

/// `#{(x, y) in F_p^2 : y^2 = f(x)} + 1` by enumeration.
pub fn count_bruteforce(field: &PrimeField, curve: &CurveSpec) -> i64 {
    let p = field.p();
    let c = field.reduce_fraction(curve.c.num, curve.c.den).unwrap_or(0);
    let mut roots = vec![0i64; p as usize];
    for y in 0..p {
        roots[(y * y % p) as usize] += 1;
    }
    1 + (0..p)
        .map(|x| roots[curve.eval(x, c, p) as usize])
        .sum::<i64>()
}

/// Points of the smooth projective model: the affine count plus one point at
/// infinity for odd `d`, two for even `d` (the leading coefficient is 1).
pub fn count_projective(field: &PrimeField, curve: &CurveSpec) -> Result<i64> {
    let extra = if curve.d.is_multiple_of(2) { 1 } else { 0 };
    Ok(count_formula(field, curve)? + extra)
}

/// `count` is the smooth projective count, so `t_p` is the trace of Frobenius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub p: u64,
    pub count: i64,
    pub t_p: i64,
    pub x_p: f64,
}

impl TraceSample {
    pub fn new(p: u64, count: i64) -> Self {
        let t_p = p as i64 + 1 - count;
        TraceSample {
            p,
            count,
            t_p,
            x_p: t_p as f64 / (p as f64).sqrt(),
        }
    }

    /// `|t_p| <= 2 g sqrt(p)`, checked as `t_p^2 <= 4 g^2 p` in integers.
    pub fn within_weil_bound(&self, genus: u32) -> bool {
        let g = genus as i128;
        (self.t_p as i128).pow(2) <= 4 * g * g * self.p as i128
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub samples: usize,
    pub mean: f64,
    pub moment2: f64,
    pub moment4: f64,
    pub moment6: f64,
    /// Residue of `p` modulo `modulus` -> number of samples.
    pub modulus: u64,
    pub per_class: BTreeMap<u64, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub curve: CurveSpec,
    pub samples: Vec<TraceSample>,
    pub summary: SweepSummary,
}

/// One sample per good odd prime in `[p_min, p_max]`, computed in parallel.
pub fn trace_sweep(curve: &CurveSpec, p_min: u64, p_max: u64) -> Result<Sweep> {
    let primes: Vec<u64> = odd_primes(p_min, p_max)
        .filter(|&p| curve.has_good_reduction(p))
        .collect();
    let samples = primes
        .par_iter()
        .map(|&p| {
            let field = PrimeField::new(p)?;
            Ok(TraceSample::new(p, count_projective(&field, curve)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&samples, curve.generic_modulus());
    Ok(Sweep {
        curve: *curve,
        samples,
        summary,
    })
}

fn summarize(samples: &[TraceSample], modulus: u64) -> SweepSummary {
    let k = samples.len().max(1) as f64;
    let moment = |e: i32| samples.iter().map(|s| s.x_p.powi(e)).sum::<f64>() / k;
    let mut per_class = BTreeMap::new();
    for s in samples {
        *per_class.entry(s.p % modulus).or_insert(0) += 1;
    }
    SweepSummary {
        samples: samples.len(),
        mean: moment(1),
        moment2: moment(2),
        moment4: moment(4),
        moment6: moment(6),
        modulus,
        per_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn curve_validation() {
        assert!(CurveSpec::linear(8, 1).is_err());
        assert!(CurveSpec::additive(2, 1).is_err());
        assert!(Constant::new(0, 1).is_err());
        assert_eq!(CurveSpec::additive(10, 1).unwrap().genus(), 4);
        assert_eq!(CurveSpec::additive(9, 1).unwrap().genus(), 4);
        assert_eq!(CurveSpec::linear(7, 1).unwrap().genus(), 3);
        assert_eq!(Constant::new(4, -6).unwrap(), Constant { num: -2, den: 3 });
    }

    #[test]
    fn display() {
        assert_eq!(
            CurveSpec::additive(9, -1).unwrap().to_string(),
            "y^2 = x^9 - 1"
        );
        assert_eq!(
            CurveSpec::linear(7, 1).unwrap().to_string(),
            "y^2 = x^7 + x"
        );
        assert_eq!(
            CurveSpec::linear(7, 3).unwrap().to_string(),
            "y^2 = x^7 + (3)x"
        );
    }

    #[test]
    fn contribution_examples() {
        // p = 19 = 1 mod 9
        assert_eq!(
            contributing_ms(19, 9, Family::AdditiveConstant).indices(),
            (1..=8).collect::<Vec<_>>()
        );
        // p = 13 = 4 mod 9
        assert_eq!(
            contributing_ms(13, 9, Family::AdditiveConstant).indices(),
            vec![3, 6]
        );
        // p = 11 = 3 mod 4
        assert!(contributing_ms(11, 7, Family::LinearTwist).is_empty());
        assert_eq!(
            contributing_ms(13, 7, Family::LinearTwist).indices(),
            vec![1, 3, 5, 7, 9, 11]
        );
    }

    #[test]
    fn additive_contributions_match_gcd_description() {
        for p in odd_primes(3, 300) {
            for d in 3..=24u32 {
                let e = (d as u64).gcd(&(p - 1));
                let expect: Vec<u64> = (1..e).map(|j| j * (p - 1) / e).collect();
                assert_eq!(
                    contributing_ms(p, d, Family::AdditiveConstant).exponents(),
                    expect,
                    "p={p} d={d}"
                );
            }
        }
    }

    #[test]
    fn count_examples() {
        let f = field(5);
        assert_eq!(count_bruteforce(&f, &CurveSpec::additive(3, 1).unwrap()), 6);
        assert_eq!(
            count_bruteforce(&field(3), &CurveSpec::additive(9, 1).unwrap()),
            4
        );
        assert_eq!(
            count_bruteforce(&field(7), &CurveSpec::linear(7, 1).unwrap()),
            8
        );

        let x9 = CurveSpec::additive(9, 1).unwrap();
        let f19 = field(19);
        assert_eq!(
            count_formula(&f19, &x9).unwrap(),
            count_bruteforce(&f19, &x9)
        );
        for p in [5u64, 11, 17, 23, 29] {
            assert_eq!(
                count_formula(&field(p), &CurveSpec::additive(9, 7).unwrap()).unwrap(),
                p as i64 + 1
            );
        }
        for p in [11u64, 19, 23, 31] {
            assert_eq!(
                count_formula(&field(p), &CurveSpec::linear(7, 5).unwrap()).unwrap(),
                p as i64 + 1
            );
        }
    }

    #[test]
    fn bad_reduction_rejected() {
        let x9 = CurveSpec::additive(9, 1).unwrap();
        assert!(matches!(
            count_formula(&field(3), &x9),
            Err(Error::BadReduction { .. })
        ));
        let half =
            CurveSpec::new(Family::AdditiveConstant, 6, Constant::new(1, 5).unwrap()).unwrap();
        assert!(matches!(
            count_formula(&field(5), &half),
            Err(Error::BadReduction { .. })
        ));
        let x7 = CurveSpec::linear(7, 1).unwrap();
        assert!(!x7.has_good_reduction(3));
        assert!(x7.has_good_reduction(7));
        assert_eq!(count_formula(&field(7), &x7).unwrap(), 8);
    }

    #[test]
    fn rational_constant_reduces_by_inverse() {
        let curve =
            CurveSpec::new(Family::AdditiveConstant, 6, Constant::new(2, 3).unwrap()).unwrap();
        for p in [7u64, 13, 19, 31, 37] {
            let f = field(p);
            assert_eq!(
                count_formula(&f, &curve).unwrap(),
                count_bruteforce(&f, &curve),
                "p={p}"
            );
        }
    }

    #[test]
    fn sweep_examples() {
        let x9 = CurveSpec::additive(9, 1).unwrap();
        let sweep = trace_sweep(&x9, 3, 300).unwrap();
        for s in sweep.samples.iter().filter(|s| s.p % 3 == 2) {
            assert_eq!(s.t_p, 0);
        }
        assert!(sweep.samples.windows(2).all(|w| w[0].p < w[1].p));
        assert!(sweep.samples.iter().all(|s| s.within_weil_bound(4)));
        assert_eq!(
            sweep.summary.per_class.values().sum::<usize>(),
            sweep.samples.len()
        );

        let x6 = CurveSpec::additive(6, 1).unwrap();
        let s7 = trace_sweep(&x6, 7, 7).unwrap();
        assert_eq!(s7.samples.len(), 1);
        // two points at infinity on the smooth model of an even-degree curve
        assert_eq!(
            s7.samples[0].t_p,
            8 - (count_bruteforce(&field(7), &x6) + 1)
        );
        assert_eq!(
            s7.samples[0].count,
            count_projective(&field(7), &x6).unwrap()
        );
    }
}
