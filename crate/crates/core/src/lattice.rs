//! Integer lattices: kernels by unimodular column reduction, Hermite normal
//! form, rank and saturation tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Mat = Vec<Vec<BigInt>>;

fn to_big(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn to_small(rows: Mat) -> Result<Vec<Vec<i64>>> {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("lattice entry")))
                .collect()
        })
        .collect()
}

fn col_axpy(m: &mut Mat, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[dst] -= delta;
        }
    }
}

fn col_swap(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Reduces `a` (m x n) by unimodular column operations to lower echelon form,
/// applying the same operations to `u` (n x n). Returns the rank.
fn column_echelon(a: &mut Mat, u: &mut Mat, ncols: usize) -> usize {
    let mut pc = 0;
    for r in 0..a.len() {
        if pc == ncols {
            break;
        }
        loop {
            let best = (pc..ncols)
                .filter(|&j| !a[r][j].is_zero())
                .min_by_key(|&j| a[r][j].abs());
            let Some(j) = best else { break };
            col_swap(a, pc, j);
            col_swap(u, pc, j);
            let mut done = true;
            for j in pc + 1..ncols {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = a[r][j].div_floor(&a[r][pc]);
                col_axpy(a, j, pc, &q);
                col_axpy(u, j, pc, &q);
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                pc += 1;
                break;
            }
        }
    }
    pc
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn hnf_big(mut rows: Mat, ncols: usize) -> Mat {
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].abs());
            let Some(i) = best else { break };
            rows.swap(r, i);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                rows[r].iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            let pivot = rows[r].clone();
            for row in rows.iter_mut().take(r) {
                let q = row[col].div_floor(&pivot[col]);
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows
/// dropped. Two generating sets span the same lattice iff their HNFs agree.
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    to_small(hnf_big(to_big(rows), ncols))
}

/// Rank over Q.
pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    hnf_big(to_big(rows), ncols).len()
}

/// Basis of `{v in Z^n : M v = 0}` for `M` given by `rows` with `ncols`
/// columns, in Hermite normal form. The integer kernel is saturated because
/// it is read off a unimodular transform.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    let mut a = to_big(rows);
    let mut u = identity(ncols);
    let rank = column_echelon(&mut a, &mut u, ncols);
    let basis: Mat = (rank..ncols)
        .map(|j| u.iter().map(|row| row[j].clone()).collect())
        .collect();
    to_small(hnf_big(basis, ncols))
}

/// Whether the lattice spanned by `rows` equals its rational closure in Z^n,
/// i.e. `Z^n / L` is torsion-free.
pub fn is_saturated(rows: &[Vec<i64>], ncols: usize) -> bool {
    let mut a = hnf_big(to_big(rows), ncols);
    let r = a.len();
    let mut u = identity(ncols);
    column_echelon(&mut a, &mut u, ncols);
    // a is now [L | 0] with L lower triangular; saturated iff det L = +-1
    (0..r).all(|i| a[i][i].abs().is_one())
}

/// `M v` for a dense integer matrix.
pub fn mat_vec(rows: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    rows.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
