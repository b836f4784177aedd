//! Identification of the identity component ST^0 as a torus.
//!
//! The columns of a carry matrix are the valuation images of the Tate-module
//! characters. Modulo the all-ones (cyclotomic) direction they generate the
//! character lattice of the torus. Columns equal up to sign and up to the
//! all-ones vector give the same circle; a class with `k` positive members is
//! a `U(1)_k`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{is_prime, PrimeField};
use crate::lattice;
use crate::pointcount::CurveSpec;
use crate::stmatrix::{
    build_matrix, right_kernel, st_columns, validate_matrix, CarryMatrix, Relation,
    RelationVerifier,
};

/// Primes searched for generic behaviour before giving up.
pub const GENERIC_SEARCH_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightClass {
    /// The member column whose first-row entry is 0.
    pub weight: Vec<u8>,
    pub plus: usize,
    pub minus: usize,
    pub plus_columns: Vec<u64>,
    pub minus_columns: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub classes: Vec<WeightClass>,
    /// Labels of columns that are 0 or all-ones (trivial modulo the cyclotomic
    /// direction). Never expected for a carry matrix.
    pub degenerate: Vec<u64>,
}

pub fn weight_classes(m: &CarryMatrix) -> ClassReport {
    let mut classes: Vec<WeightClass> = Vec::new();
    let mut degenerate = Vec::new();
    for j in 0..m.ncols() {
        let col: Vec<u8> = m.entries.iter().map(|r| r[j]).collect();
        let label = m.col_labels[j];
        if col.iter().all(|&x| x == 0) || col.iter().all(|&x| x == 1) {
            degenerate.push(label);
            continue;
        }
        let plus = col[0] == 0;
        let rep: Vec<u8> = if plus {
            col
        } else {
            col.iter().map(|x| 1 - x).collect()
        };
        let idx = match classes.iter().position(|c| c.weight == rep) {
            Some(i) => i,
            None => {
                classes.push(WeightClass {
                    weight: rep,
                    plus: 0,
                    minus: 0,
                    plus_columns: Vec::new(),
                    minus_columns: Vec::new(),
                });
                classes.len() - 1
            }
        };
        let class = &mut classes[idx];
        if plus {
            class.plus += 1;
            class.plus_columns.push(label);
        } else {
            class.minus += 1;
            class.minus_columns.push(label);
        }
    }
    ClassReport {
        classes,
        degenerate,
    }
}

fn rank_with_ones(vectors: impl Iterator<Item = Vec<i64>>, len: usize) -> usize {
    let mut rows: Vec<Vec<i64>> = vectors.collect();
    rows.push(vec![1; len]);
    lattice::rank(&rows, len)
}

/// `rank(columns + all-ones) - 1`.
pub fn torus_dimension(m: &CarryMatrix) -> usize {
    rank_with_ones((0..m.ncols()).map(|j| m.column(j)), m.nrows()) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnWeight {
    pub label: u64,
    pub exponent: u64,
    pub class: usize,
    /// +1 if the column equals the class weight, -1 if it is its conjugate.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub weight: Vec<u8>,
    pub plus: usize,
    pub minus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub dimension: usize,
    pub multiplicities: Vec<usize>,
    pub kernel_rank: usize,
    pub exact_relations: usize,
    pub torsion_relations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusId {
    pub name: String,
    pub dimension: usize,
    /// Classes at the first prime used.
    pub classes: Vec<ClassSummary>,
    pub weight_matrix: Vec<ColumnWeight>,
    pub primes_used: Vec<u64>,
    pub per_prime: Vec<PrimeReport>,
}

/// `U(1)_k` factors joined by " x ", largest `k` first, `U(1)_1` written `U(1)`.
pub fn torus_name(mut multiplicities: Vec<usize>) -> String {
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    multiplicities
        .into_iter()
        .map(|k| match k {
            1 => "U(1)".to_string(),
            k => format!("U(1)_{k}"),
        })
        .collect::<Vec<_>>()
        .join(" x ")
}

/// The first `count` primes at which all `2g` characters contribute.
pub fn generic_primes(curve: &CurveSpec, count: usize) -> Result<Vec<u64>> {
    let modulus = curve.generic_modulus();
    let primes: Vec<u64> = (1..)
        .map(|j| j * modulus + 1)
        .take_while(|&p| p < GENERIC_SEARCH_BOUND)
        .filter(|&p| is_prime(p) && curve.has_good_reduction(p))
        .filter(|&p| st_columns(p, curve.d, curve.family).is_generic)
        .take(count)
        .collect();
    if primes.len() < count {
        return Err(Error::NoGenericPrime(GENERIC_SEARCH_BOUND));
    }
    Ok(primes)
}

struct PrimeResult {
    matrix: CarryMatrix,
    report: PrimeReport,
    classes: ClassReport,
}

fn analyze_prime(curve: &CurveSpec, p: u64) -> Result<PrimeResult> {
    let matrix = build_matrix(p, curve.d, curve.family)?;
    let violations = validate_matrix(&matrix);
    if !violations.is_empty() {
        return Err(Error::InvalidMatrix {
            p,
            count: violations.len(),
        });
    }
    let kernel = right_kernel(&matrix)?;
    let field = PrimeField::new(p)?;
    let verifier = RelationVerifier::new(&field, &matrix, curve.c)?;
    let (mut exact, mut torsion) = (0, 0);
    for (index, v) in kernel.basis.iter().enumerate() {
        match verifier.check(v)? {
            Relation::Exact => exact += 1,
            Relation::Torsion(_) => torsion += 1,
            Relation::Fail => return Err(Error::RelationVerificationFailed { p, index }),
        }
    }
    let classes = weight_classes(&matrix);
    let mut multiplicities: Vec<usize> = classes.classes.iter().map(|c| c.plus).collect();
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    let report = PrimeReport {
        p,
        dimension: torus_dimension(&matrix),
        multiplicities,
        kernel_rank: kernel.rank,
        exact_relations: exact,
        torsion_relations: torsion,
    };
    Ok(PrimeResult {
        matrix,
        report,
        classes,
    })
}

/// Runs the carry-matrix pipeline at the first `num_primes` generic primes,
/// checks every kernel relation exactly, and names the resulting torus.
pub fn identify_st0(curve: &CurveSpec, num_primes: usize) -> Result<TorusId> {
    let primes = generic_primes(curve, num_primes.max(1))?;
    let results = primes
        .par_iter()
        .map(|&p| analyze_prime(curve, p))
        .collect::<Result<Vec<_>>>()?;

    let first = &results[0];
    for r in &results[1..] {
        let (a, b) = (&first.report, &r.report);
        if a.dimension != b.dimension || a.multiplicities != b.multiplicities {
            return Err(Error::InconsistentAcrossPrimes(format!(
                "p={} gives dimension {} with classes {:?}, p={} gives dimension {} with classes {:?}",
                a.p, a.dimension, a.multiplicities, b.p, b.dimension, b.multiplicities
            )));
        }
    }
    for r in &results {
        let c = &r.classes;
        if !c.degenerate.is_empty() || c.classes.iter().any(|k| k.plus != k.minus) {
            return Err(Error::InconsistentAcrossPrimes(format!(
                "unbalanced or degenerate weight classes at p={}",
                r.report.p
            )));
        }
    }

    let dimension = first.report.dimension;
    let classes = &first.classes.classes;
    let independent = rank_with_ones(
        classes
            .iter()
            .map(|c| c.weight.iter().map(|&x| x as i64).collect()),
        first.matrix.nrows(),
    ) == classes.len() + 1;
    let name = if independent && classes.len() == dimension {
        torus_name(first.report.multiplicities.clone())
    } else {
        torus_name(vec![1; dimension])
    };

    let mut weight_matrix = Vec::with_capacity(first.matrix.ncols());
    let by_label: BTreeMap<u64, (usize, i8)> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            c.plus_columns
                .iter()
                .map(move |&l| (l, (i, 1)))
                .chain(c.minus_columns.iter().map(move |&l| (l, (i, -1))))
        })
        .collect();
    for (&label, &exponent) in first.matrix.col_labels.iter().zip(&first.matrix.cols) {
        let (class, sign) = by_label[&label];
        weight_matrix.push(ColumnWeight {
            label,
            exponent,
            class,
            sign,
        });
    }

    Ok(TorusId {
        name,
        dimension,
        classes: classes
            .iter()
            .map(|c| ClassSummary {
                weight: c.weight.clone(),
                plus: c.plus,
                minus: c.minus,
            })
            .collect(),
        weight_matrix,
        primes_used: primes,
        per_prime: results.into_iter().map(|r| r.report).collect(),
    })
}

/// Convenience for the additive family with `c = 1`.
pub fn identify_additive(d: u32) -> Result<TorusId> {
    identify_st0(&CurveSpec::additive(d, 1)?, 3)
}
