//! The Stickelberger carry matrix and its integer kernel.
//!
//! Rows are the embeddings of the character group into the circle, indexed
//! by units `k mod (p-1)`. Columns are the characters `T^a` whose Jacobi sums
//! `J(T^a, phi)` appear in the point count, excluding `a = (p-1)/2`. The entry
//! is the valuation of `J(T^a, phi)` at the embedding `k`: 1 when
//! `(k a mod (p-1)) + (k (p-1)/2 mod (p-1))` overflows `p - 1`, else 0.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloElt;
use crate::error::{Error, Result};
use crate::ffield::PrimeField;
use crate::lattice;
use crate::pointcount::{
    contributing_ms, frobenius_terms, Constant, Contribution, CurveSpec, Family,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StColumns {
    pub p: u64,
    pub d: u32,
    pub family: Family,
    pub columns: Vec<Contribution>,
    /// All `2g` Tate-module characters are present.
    pub is_generic: bool,
}

/// Genus of either family; both have `2g` Tate-module characters.
pub fn genus_of(d: u32, _family: Family) -> u32 {
    (d - 1) / 2
}

/// Contributing characters with the quadratic one removed.
pub fn st_columns(p: u64, d: u32, family: Family) -> StColumns {
    let half = (p - 1) / 2;
    let columns: Vec<Contribution> = contributing_ms(p, d, family)
        .entries
        .into_iter()
        .filter(|c| c.exponent != half)
        .collect();
    let is_generic = columns.len() == 2 * genus_of(d, family) as usize;
    StColumns {
        p,
        d,
        family,
        columns,
        is_generic,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarryMatrix {
    pub p: u64,
    pub d: u32,
    pub family: Family,
    /// Units `k mod (p-1)`, ascending.
    pub rows: Vec<u64>,
    /// Column character exponents `a`.
    pub cols: Vec<u64>,
    /// `m` (additive) or `t` (linear twist) for each column.
    pub col_labels: Vec<u64>,
    pub entries: Vec<Vec<u8>>,
    pub is_generic: bool,
}

pub(crate) fn carry(k: u64, a: u64, n: u64) -> u8 {
    u8::from((k * a) % n + (k * (n / 2)) % n >= n)
}

fn units(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|k| k.gcd(&n) == 1).collect()
}

pub fn build_matrix(p: u64, d: u32, family: Family) -> Result<CarryMatrix> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::EvenOrTooSmall(p));
    }
    let cols = st_columns(p, d, family);
    if cols.columns.is_empty() {
        return Err(Error::NoColumns { p, d });
    }
    let n = p - 1;
    let rows = units(n);
    let entries = rows
        .iter()
        .map(|&k| {
            cols.columns
                .iter()
                .map(|c| carry(k, c.exponent, n))
                .collect()
        })
        .collect();
    Ok(CarryMatrix {
        p,
        d,
        family,
        rows,
        cols: cols.columns.iter().map(|c| c.exponent).collect(),
        col_labels: cols.columns.iter().map(|c| c.index).collect(),
        entries,
        is_generic: cols.is_generic,
    })
}

impl CarryMatrix {
    /// A matrix with explicit entries, for diagnostics on hand-built data.
    pub fn from_entries(p: u64, rows: Vec<u64>, cols: Vec<u64>, entries: Vec<Vec<u8>>) -> Self {
        let col_labels = cols.clone();
        CarryMatrix {
            p,
            d: 0,
            family: Family::AdditiveConstant,
            rows,
            cols,
            col_labels,
            entries,
            is_generic: false,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row][col]
    }

    /// Column `j` as a vector over the rows.
    pub fn column(&self, j: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[j] as i64).collect()
    }

    pub fn as_i64(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        lattice::rank(&self.as_i64(), self.ncols())
    }

    pub fn annihilates(&self, v: &[i64]) -> bool {
        v.len() == self.ncols() && lattice::mat_vec(&self.as_i64(), v).iter().all(|&x| x == 0)
    }

    /// Plain 0/1 grid, one line per row.
    pub fn to_grid(&self) -> String {
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for CarryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self
            .col_labels
            .iter()
            .map(|l| l.to_string().len())
            .max()
            .unwrap_or(1);
        let kw = self.rows.last().map_or(1, |k| k.to_string().len());
        write!(f, "{:>kw$}  |", "k")?;
        for l in &self.col_labels {
            write!(f, " {l:>w$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(kw + 3 + (w + 1) * self.ncols()))?;
        for (k, row) in self.rows.iter().zip(&self.entries) {
            write!(f, "{k:>kw$}  |")?;
            for x in row {
                write!(f, " {x:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelLattice {
    pub basis: Vec<Vec<i64>>,
    pub rank: usize,
    pub saturated: bool,
}

pub fn right_kernel(matrix: &CarryMatrix) -> Result<KernelLattice> {
    let basis = lattice::integer_kernel(&matrix.as_i64(), matrix.ncols())?;
    let saturated = lattice::is_saturated(&basis, matrix.ncols());
    Ok(KernelLattice {
        rank: basis.len(),
        basis,
        saturated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum Relation {
    /// The Jacobi-sum product is exactly 1.
    Exact,
    /// The product is a root of unity of this order.
    Torsion(u64),
    Fail,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Exact => write!(f, "exact"),
            Relation::Torsion(n) => write!(f, "torsion (order {n})"),
            Relation::Fail => write!(f, "FAIL"),
        }
    }
}

/// Multiplies Frobenius values `T^a(-c) phi(c) J(T^a, phi)` along kernel
/// vectors. The per-column values and their inverses are computed once.
pub struct RelationVerifier<'a> {
    matrix: &'a CarryMatrix,
    values: Vec<CycloElt>,
    inverses: Vec<CycloElt>,
    one: CycloElt,
}

impl<'a> RelationVerifier<'a> {
    pub fn new(field: &PrimeField, matrix: &'a CarryMatrix, c: Constant) -> Result<Self> {
        let curve = CurveSpec::new(matrix.family, matrix.d, c)?;
        let mut terms = frobenius_terms(field, &curve)?;
        terms.retain(|(entry, _)| matrix.cols.contains(&entry.exponent));
        let p = CycloElt::from_integer(field.cyclo(), field.p() as i64);
        let inv_p = CycloElt::from_rational(
            field.cyclo(),
            &num_rational::BigRational::new(BigInt::from(1), BigInt::from(field.p())),
        );
        let mut values = Vec::with_capacity(matrix.ncols());
        let mut inverses = Vec::with_capacity(matrix.ncols());
        for &a in &matrix.cols {
            let (_, value) =
                terms
                    .iter()
                    .find(|(entry, _)| entry.exponent == a)
                    .ok_or(Error::NoColumns {
                        p: field.p(),
                        d: matrix.d,
                    })?;
            // |J|^2 = p for these characters, so the inverse is conj / p
            let conj = value.conj();
            let inverse = if &conj * value == p {
                &conj * &inv_p
            } else {
                value.inv()?
            };
            values.push(value.clone());
            inverses.push(inverse);
        }
        Ok(RelationVerifier {
            matrix,
            values,
            inverses,
            one: CycloElt::one(field.cyclo()),
        })
    }

    /// The exact product `prod_a value_a^{v_a}`.
    pub fn product(&self, v: &[i64]) -> Result<CycloElt> {
        if !self.matrix.annihilates(v) {
            return Err(Error::NotInKernel {
                len: v.len(),
                rows: self.matrix.nrows(),
                cols: self.matrix.ncols(),
            });
        }
        let mut acc = self.one.clone();
        for (j, &e) in v.iter().enumerate() {
            let base = if e >= 0 {
                &self.values[j]
            } else {
                &self.inverses[j]
            };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * base;
            }
        }
        Ok(acc)
    }

    pub fn check(&self, v: &[i64]) -> Result<Relation> {
        let w = self.product(v)?;
        Ok(match w.is_root_of_unity() {
            Some(1) => Relation::Exact,
            Some(n) => Relation::Torsion(n),
            None => Relation::Fail,
        })
    }
}

/// Classifies one kernel vector of `matrix` at the prime of `field`.
pub fn verify_relation(
    field: &PrimeField,
    matrix: &CarryMatrix,
    v: &[i64],
    c: Constant,
) -> Result<Relation> {
    RelationVerifier::new(field, matrix, c)?.check(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Violation {
    RowUnbalanced { k: u64 },
    ColumnUnbalanced { a: u64 },
    ConjugateMismatch { k: u64, a: u64 },
    GaloisMismatch { k: u64, a: u64, u: u64 },
}

/// Checks balance, conjugate complementarity and Galois stability; returns
/// the violations found (empty for a valid carry matrix).
pub fn validate_matrix(m: &CarryMatrix) -> Vec<Violation> {
    let n = m.p - 1;
    let mut out = Vec::new();
    for (i, row) in m.entries.iter().enumerate() {
        let ones = row.iter().filter(|&&x| x == 1).count();
        if 2 * ones != row.len() {
            out.push(Violation::RowUnbalanced { k: m.rows[i] });
        }
    }
    for (j, &a) in m.cols.iter().enumerate() {
        let ones = m.entries.iter().filter(|r| r[j] == 1).count();
        if 2 * ones != m.nrows() {
            out.push(Violation::ColumnUnbalanced { a });
        }
    }
    let row_of = |k: u64| m.rows.iter().position(|&r| r == k % n);
    let col_of = |a: u64| m.cols.iter().position(|&c| c == a % n);
    for (i, &k) in m.rows.iter().enumerate() {
        for (j, &a) in m.cols.iter().enumerate() {
            let ok = row_of(n - k).is_some_and(|ci| m.entries[ci][j] == 1 - m.entries[i][j]);
            if !ok {
                out.push(Violation::ConjugateMismatch { k, a });
            }
        }
    }
    for &u in &m.rows {
        let u_inv = m
            .rows
            .iter()
            .copied()
            .find(|&x| x * u % n == 1)
            .unwrap_or(1);
        for (i, &k) in m.rows.iter().enumerate() {
            for (j, &a) in m.cols.iter().enumerate() {
                let ok = match (row_of(k * u), col_of(u_inv * a)) {
                    (Some(ri), Some(cj)) => m.entries[ri][cj] == m.entries[i][j],
                    _ => false,
                };
                if !ok {
                    out.push(Violation::GaloisMismatch { k, a, u });
                }
            }
        }
    }
    out
}
