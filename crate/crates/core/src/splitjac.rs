//! Symbolic Jacobian factorizations for `y^2 = x^(2g+2) + c` and
//! `y^2 = x^(2g+1) + c x`.
//!
//! Factorizations are records of which curves appear and with what
//! multiplicity; the constant `c` is carried symbolically except in the
//! lower-genus curves, where powers `c^(k/g)` are tracked as exponents.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcount::{Constant, Family};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JacFactor {
    /// `y^2 = x^degree + c` or `y^2 = x^degree + c x`.
    Trinomial {
        family: Family,
        degree: u32,
    },
    /// `E: y^2 = x^3 + c x`
    Elliptic,
    LowerGenus(LowerGenusCurve),
}

impl JacFactor {
    pub fn additive(degree: u32) -> Self {
        JacFactor::Trinomial {
            family: Family::AdditiveConstant,
            degree,
        }
    }

    pub fn linear(degree: u32) -> Self {
        JacFactor::Trinomial {
            family: Family::LinearTwist,
            degree,
        }
    }

    pub fn genus(&self) -> u32 {
        match self {
            JacFactor::Trinomial { degree, .. } => degree.saturating_sub(1) / 2,
            JacFactor::Elliptic => 1,
            JacFactor::LowerGenus(c) => c.genus(),
        }
    }
}

impl fmt::Display for JacFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacFactor::Trinomial {
                family: Family::AdditiveConstant,
                degree,
            } => write!(f, "(y^2 = x^{degree} + c)"),
            JacFactor::Trinomial {
                family: Family::LinearTwist,
                degree,
            } => write!(f, "(y^2 = x^{degree} + cx)"),
            JacFactor::Elliptic => write!(f, "(E: y^2 = x^3 + cx)"),
            JacFactor::LowerGenus(c) => write!(f, "(C_{}: {})", c.i, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPower {
    pub factor: JacFactor,
    pub exponent: u32,
    /// A further splitting of this factor, when one was applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<Box<IsogenyFactorization>>,
}

impl FactorPower {
    fn new(factor: JacFactor, exponent: u32) -> Self {
        FactorPower {
            factor,
            exponent,
            refinement: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyFactorization {
    pub source: JacFactor,
    pub factors: Vec<FactorPower>,
}

impl IsogenyFactorization {
    /// `sum exponent * genus` over the factors.
    pub fn total_genus(&self) -> u32 {
        self.factors
            .iter()
            .map(|f| f.exponent * f.factor.genus())
            .sum()
    }

    pub fn conserves_genus(&self) -> bool {
        self.total_genus() == self.source.genus()
            && self.factors.iter().all(|f| {
                f.refinement
                    .as_ref()
                    .is_none_or(|r| r.source == f.factor && r.conserves_genus())
            })
    }

    /// Factor list with equal factors merged, in a fixed order, for comparison.
    pub fn normalized(&self) -> Vec<(JacFactor, u32)> {
        let mut out: Vec<(JacFactor, u32)> = Vec::new();
        for f in &self.factors {
            match out.iter_mut().find(|(g, _)| *g == f.factor) {
                Some((_, e)) => *e += f.exponent,
                None => out.push((f.factor.clone(), f.exponent)),
            }
        }
        out.sort_by_key(|(f, _)| format!("{f:?}"));
        out
    }
}

impl fmt::Display for IsogenyFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fp| {
                let base = match &fp.refinement {
                    Some(r) => format!("[{}]", r.factors_string()),
                    None => fp.factor.to_string(),
                };
                if fp.exponent == 1 {
                    base
                } else {
                    format!("{base}^{}", fp.exponent)
                }
            })
            .collect();
        write!(f, "Jac{} ~ {}", self.source, parts.join(" x "))
    }
}

impl IsogenyFactorization {
    fn factors_string(&self) -> String {
        let s = self.to_string();
        s.split_once(" ~ ")
            .map_or(s.clone(), |(_, r)| r.to_string())
    }
}

fn check_even(g: u32) -> Result<()> {
    if g % 2 == 1 {
        return Err(Error::OddInput(g));
    }
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    Ok(())
}

/// `Jac(y^2 = x^(2g+2) + c) ~ Jac(y^2 = x^(g+1) + c)^2` for even `g`.
pub fn split_even(g: u32) -> Result<IsogenyFactorization> {
    check_even(g)?;
    Ok(IsogenyFactorization {
        source: JacFactor::additive(2 * g + 2),
        factors: vec![FactorPower::new(JacFactor::additive(g + 1), 2)],
    })
}

/// `Jac(y^2 = x^(2g+2) + c) ~ Jac(y^2 = x^(g+1) + c) x Jac(y^2 = x^(g+2) + cx)`
/// for odd `g >= 3`.
pub fn split_odd(g: u32) -> Result<IsogenyFactorization> {
    if g.is_multiple_of(2) || g < 3 {
        return Err(Error::EvenInput(g));
    }
    Ok(odd_step(g))
}

// no lower bound: the recursion bottoms out through g = 1
fn odd_step(g: u32) -> IsogenyFactorization {
    IsogenyFactorization {
        source: JacFactor::additive(2 * g + 2),
        factors: vec![
            FactorPower::new(JacFactor::additive(g + 1), 1),
            FactorPower::new(JacFactor::linear(g + 2), 1),
        ],
    }
}

/// 2-adic valuation of a positive integer.
pub fn v2(n: u32) -> u32 {
    n.trailing_zeros()
}

/// Closed form of the full recursion, with `k = v2(g + 1)`:
/// `(x^((g+1)/2^k) + c)^2 x prod_{i=1..k} (x^((g+1)/2^(i-1) + 1) + cx)`.
pub fn split_full_closed_form(g: u32) -> Result<IsogenyFactorization> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let k = v2(g + 1);
    let mut factors = vec![FactorPower::new(JacFactor::additive((g + 1) >> k), 2)];
    for i in 1..=k {
        factors.push(FactorPower::new(
            JacFactor::linear(((g + 1) >> (i - 1)) + 1),
            1,
        ));
    }
    Ok(IsogenyFactorization {
        source: JacFactor::additive(2 * g + 2),
        factors,
    })
}

/// The factorization obtained by splitting off linear twists with the odd
/// lemma until the genus is even, then applying the even lemma.
pub fn split_recursive(g: u32) -> Result<IsogenyFactorization> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let source = JacFactor::additive(2 * g + 2);
    let mut factors = Vec::new();
    let mut h = g;
    loop {
        if h.is_multiple_of(2) {
            // split_even, allowing the degenerate h = 0 end point (x + c)^2
            factors.push(FactorPower::new(JacFactor::additive(h + 1), 2));
            break;
        }
        let step = odd_step(h);
        factors.push(step.factors[1].clone());
        h = (h - 1) / 2;
    }
    Ok(IsogenyFactorization { source, factors })
}

/// The full 2-adic splitting of `Jac(y^2 = x^(2g+2) + c)`, checked against
/// the step-by-step recursion.
pub fn split_full(g: u32) -> Result<IsogenyFactorization> {
    let closed = split_full_closed_form(g)?;
    let recursive = split_recursive(g)?;
    assert_eq!(
        closed.normalized(),
        recursive.normalized(),
        "closed form and recursion disagree at g={g}"
    );
    Ok(closed)
}

/// [`split_full`] with every linear-twist factor of odd genus >= 3 further
/// split by [`split_refined`].
pub fn split_full_refined(g: u32, c: Constant) -> Result<IsogenyFactorization> {
    let mut out = split_full(g)?;
    for fp in &mut out.factors {
        if let JacFactor::Trinomial {
            family: Family::LinearTwist,
            degree,
        } = fp.factor
        {
            let h = (degree - 1) / 2;
            if h >= 3 && h % 2 == 1 {
                fp.refinement = Some(Box::new(split_refined(h, c)?));
            }
        }
    }
    Ok(out)
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficient `(-1)^k [C(g-k, k) + C(g-k-1, k-1)]` of the Lockwood expansion.
pub fn lockwood_coefficient(g: u32, k: u32) -> i64 {
    let (g, k) = (g as i64, k as i64);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    sign * (binomial(g - k, k) + binomial(g - k - 1, k - 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerTerm {
    pub x_exponent: u32,
    pub coefficient: i64,
    /// Multiplier `k` in `zeta^(i k)`.
    pub zeta_multiplier: u32,
    /// `i k mod g`.
    pub zeta_exponent: u32,
    /// `c^(c_exponent.0 / c_exponent.1)`.
    pub c_exponent: (u32, u32),
}

/// `C_i: y^2 = sum_k (-1)^k [C(g-k,k) + C(g-k-1,k-1)] zeta^(ik) c^(k/g) x^(g-2k)`
/// with `zeta` a primitive g-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerGenusCurve {
    pub g: u32,
    pub i: u32,
    pub c: Constant,
    pub terms: Vec<LowerTerm>,
}

impl LowerGenusCurve {
    pub fn genus(&self) -> u32 {
        (self.g - 1) / 2
    }

    /// Row in the `x^g - g z^{i} x^(g-2) + ...` notation, `i` left symbolic.
    pub fn table_notation(&self) -> String {
        self.render(|m| match m {
            0 => String::new(),
            1 => "z^{i}".into(),
            m => format!("z^{{{m}i}}"),
        })
    }

    fn render(&self, zeta: impl Fn(u32) -> String) -> String {
        let mut s = String::from("y^2 = ");
        let trivial_c = self.c.num == 1 && self.c.den == 1;
        for (idx, t) in self.terms.iter().enumerate() {
            let mag = t.coefficient.unsigned_abs();
            if idx > 0 {
                s.push_str(if t.coefficient < 0 { " - " } else { " + " });
            } else if t.coefficient < 0 {
                s.push('-');
            }
            if mag != 1 || t.x_exponent == 0 {
                s.push_str(&mag.to_string());
            }
            s.push_str(&zeta(t.zeta_multiplier));
            if t.c_exponent.0 != 0 && !trivial_c {
                s.push_str(&format!(
                    "({})^({}/{})",
                    self.c, t.c_exponent.0, t.c_exponent.1
                ));
            }
            match t.x_exponent {
                0 => {}
                1 => s.push('x'),
                e => s.push_str(&format!("x^{e}")),
            }
        }
        s
    }
}

impl fmt::Display for LowerGenusCurve {
    /// Concrete `i`, with `z` a primitive g-th root of unity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = self.render(|m| match (m * self.i) % self.g {
            0 => String::new(),
            1 => "z".into(),
            e => format!("z^{e}"),
        });
        f.write_str(&row)
    }
}

/// The curve `C_i` attached to `y^2 = x^(2g+1) + c x`, `g` odd.
pub fn lower_genus_curve(g: u32, i: u32, c: Constant) -> Result<LowerGenusCurve> {
    if g.is_multiple_of(2) || g < 3 {
        return Err(Error::EvenInput(g));
    }
    let terms = (0..=(g - 1) / 2)
        .map(|k| LowerTerm {
            x_exponent: g - 2 * k,
            coefficient: lockwood_coefficient(g, k),
            zeta_multiplier: k,
            zeta_exponent: (i * k) % g,
            c_exponent: (k, g),
        })
        .collect();
    Ok(LowerGenusCurve { g, i, c, terms })
}

/// `Jac(y^2 = x^(2g+1) + cx) ~ E x Jac(C_0) x Jac(C_1)` for odd `g >= 3`.
pub fn split_refined(g: u32, c: Constant) -> Result<IsogenyFactorization> {
    if g.is_multiple_of(2) || g < 3 {
        return Err(Error::EvenInput(g));
    }
    Ok(IsogenyFactorization {
        source: JacFactor::linear(2 * g + 1),
        factors: vec![
            FactorPower::new(JacFactor::Elliptic, 1),
            FactorPower::new(JacFactor::LowerGenus(lower_genus_curve(g, 0, c)?), 1),
            FactorPower::new(JacFactor::LowerGenus(lower_genus_curve(g, 1, c)?), 1),
        ],
    })
}

/// Numerically checks
/// `x^(2g+1) + c x = sum_k coeff_k zeta^(ik) c^(k/g) x^(2k+1) (x^2 + zeta^i c^(1/g))^(g-2k)`
/// at `trials` random points of the square `[-1, 1]^2`, relative tolerance `tol`.
/// Uses the principal branch of `c^(1/g)` and `zeta = exp(2 pi i / g)`.
pub fn lockwood_check(
    g: u32,
    i: u32,
    c: Constant,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<bool> {
    let curve = lower_genus_curve(g, i, c)?;
    Ok(lockwood_check_terms(&curve, trials, tol, seed))
}

/// As [`lockwood_check`], reading the coefficients from `curve.terms`.
pub fn lockwood_check_terms(curve: &LowerGenusCurve, trials: usize, tol: f64, seed: u64) -> bool {
    let g = curve.g;
    let c = curve.c.num as f64 / curve.c.den as f64;
    let c_root = Complex64::new(c, 0.0).powf(1.0 / g as f64);
    let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / g as f64);
    let zi = zeta.powu(curve.i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let lhs = x.powu(2 * g + 1) + c * x;
        let mut scale = lhs.norm().max(1.0);
        let rhs: Complex64 = curve
            .terms
            .iter()
            .map(|t| {
                let k = (g - t.x_exponent) / 2;
                let term = t.coefficient as f64
                    * zi.powu(k)
                    * c_root.powu(k)
                    * x.powu(2 * k + 1)
                    * (x * x + zi * c_root).powu(t.x_exponent);
                scale = scale.max(term.norm());
                term
            })
            .sum();
        (lhs - rhs).norm() <= tol * scale
    })
}
