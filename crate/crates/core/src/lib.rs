//! Point counts, Sato-Tate identity components and Jacobian splittings for
//! the trinomial hyperelliptic curves `y^2 = x^d + c` and `y^2 = x^d + c x`.
//!
//! The pipeline runs bottom up: [`ffield`] supplies discrete logs and
//! multiplicative characters, [`cyclo`] exact arithmetic in `Q(zeta_n)`,
//! [`charsums`] Jacobi sums, [`pointcount`] the character-sum point counts,
//! [`stmatrix`] the carry matrix and its kernel, [`groupid`] the torus name
//! and [`splitjac`] the symbolic isogeny factorizations.

pub mod charsums;
pub mod cyclo;
pub mod error;
pub mod ffield;
pub mod groupid;
pub mod lattice;
pub mod pointcount;
pub mod splitjac;
pub mod stmatrix;

pub use charsums::{gauss_jacobi_check, gauss_sum, jacobi_sum, GaussDiagnostic};
pub use cyclo::{CycloElt, CycloField};
pub use error::{Error, Result};
pub use ffield::{is_prime, odd_primes, CharExponent, PrimeField};
pub use groupid::{generic_primes, identify_additive, identify_st0, torus_name, TorusId};
pub use pointcount::{
    contributing_ms, count_bruteforce, count_formula, count_projective, trace_sweep, Constant,
    ContributionSet, CurveSpec, Family, Sweep, SweepSummary, TraceSample,
};
pub use splitjac::{
    lockwood_check, lower_genus_curve, split_even, split_full, split_full_refined, split_odd,
    split_refined, FactorPower, IsogenyFactorization, JacFactor, LowerGenusCurve,
};
pub use stmatrix::{
    build_matrix, right_kernel, validate_matrix, verify_relation, CarryMatrix, KernelLattice,
    Relation, RelationVerifier,
};
