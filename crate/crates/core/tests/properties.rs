use hyperjac::cyclo::{CycloElt, CycloField};
use hyperjac::ffield::{odd_primes, CharExponent, PrimeField};
use hyperjac::groupid::{identify_st0, weight_classes};
use hyperjac::pointcount::{count_bruteforce, count_formula, CurveSpec, Family};
use hyperjac::splitjac::{split_full, split_full_refined};
use hyperjac::stmatrix::{build_matrix, right_kernel, validate_matrix};
use hyperjac::{jacobi_sum, Constant, IsogenyFactorization, TorusId};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn elt(n: u64, coeffs: &[(i64, i64)]) -> CycloElt {
    let f = CycloField::new(n);
    let cs: Vec<BigRational> = coeffs
        .iter()
        .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    CycloElt::from_coeffs(&f, &cs)
}

fn conductor() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 4, 5, 8, 9, 12, 15, 20])
}

fn element(n: u64) -> impl Strategy<Value = CycloElt> {
    prop::collection::vec((-9i64..=9, 1i64..=4), n as usize).prop_map(move |cs| elt(n, &cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn embedding_is_a_ring_map((a, b, k) in conductor().prop_flat_map(|n| (element(n), element(n), 1..n as i64))) {
        let n = a.conductor() as i64;
        prop_assume!(num_integer::gcd(k, n) == 1);
        let (ea, eb) = (a.embed(k).unwrap(), b.embed(k).unwrap());
        let scale = 1.0 + ea.norm() * eb.norm() + ea.norm() + eb.norm();
        prop_assert!(((&a + &b).embed(k).unwrap() - (ea + eb)).norm() < 1e-9 * scale);
        prop_assert!(((&a * &b).embed(k).unwrap() - ea * eb).norm() < 1e-9 * scale);
        prop_assert!((a.conj().embed(k).unwrap() - ea.conj()).norm() < 1e-9 * scale);
    }

    #[test]
    fn conjugation_is_an_involutive_homomorphism((a, b) in conductor().prop_flat_map(|n| (element(n), element(n)))) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn inverse_times_element_is_one(a in conductor().prop_flat_map(element)) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn jacobi_sums_have_norm_p(p in prop::sample::select(odd_primes(5, 80).collect::<Vec<_>>()), a in 1u64..1000, b in 1u64..1000) {
        let f = PrimeField::new(p).unwrap();
        let n = f.order();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != 0 && b != 0 && (a + b) % n != 0);
        let j = jacobi_sum(&f, CharExponent(a), CharExponent(b));
        prop_assert_eq!(&j * &j.conj(), CycloElt::from_integer(f.cyclo(), p as i64));
    }

    #[test]
    fn formula_agrees_with_enumeration(d in 3u32..=16, c in -20i64..=20, idx in 0usize..40) {
        prop_assume!(c != 0);
        let primes: Vec<u64> = odd_primes(3, 400).collect();
        let p = primes[idx % primes.len()];
        let curve = CurveSpec::additive(d, c).unwrap();
        prop_assume!(curve.has_good_reduction(p));
        let f = PrimeField::new(p).unwrap();
        prop_assert_eq!(count_formula(&f, &curve).unwrap(), count_bruteforce(&f, &curve));
    }

    #[test]
    fn linear_twist_formula_agrees(d in prop::sample::select(vec![3u32, 5, 7, 9, 11, 13]), c in -20i64..=20, idx in 0usize..40) {
        prop_assume!(c != 0);
        let primes: Vec<u64> = odd_primes(3, 400).collect();
        let p = primes[idx % primes.len()];
        let curve = CurveSpec::linear(d, c).unwrap();
        prop_assume!(curve.has_good_reduction(p));
        let f = PrimeField::new(p).unwrap();
        prop_assert_eq!(count_formula(&f, &curve).unwrap(), count_bruteforce(&f, &curve));
    }
}

#[test]
fn carry_matrices_pass_structural_checks() {
    for d in 3..=16u32 {
        for p in odd_primes(3, 200) {
            let Ok(m) = build_matrix(p, d, Family::AdditiveConstant) else {
                continue;
            };
            assert!(validate_matrix(&m).is_empty(), "p={p} d={d}");
            let k = right_kernel(&m).unwrap();
            assert!(k.saturated);
            assert_eq!(k.rank + m.rank(), m.ncols(), "p={p} d={d}");
            for v in &k.basis {
                assert_eq!(v.iter().sum::<i64>(), 0);
            }
        }
    }
}

#[test]
fn weight_classes_pair_conjugates() {
    let m = build_matrix(11, 10, Family::AdditiveConstant).unwrap();
    let report = weight_classes(&m);
    assert!(report.degenerate.is_empty());
    assert_eq!(report.classes.len(), 2);
    for c in &report.classes {
        assert_eq!((c.plus, c.minus), (2, 2));
    }
}

#[test]
fn linear_twist_identity_components() {
    // Jac(y^2 = x^5 + cx) is isogenous to the square of a CM elliptic curve
    let id = identify_st0(&CurveSpec::linear(5, 1).unwrap(), 3).unwrap();
    assert_eq!((id.dimension, id.name.as_str()), (1, "U(1)_2"));
    let id = identify_st0(&CurveSpec::linear(7, 1).unwrap(), 3).unwrap();
    assert!(id.dimension >= 1 && id.dimension <= 3);
    assert!(id
        .per_prime
        .iter()
        .all(|r| r.kernel_rank + r.dimension + 1 >= 6));
}

#[test]
fn identity_component_is_independent_of_c() {
    for d in [6u32, 8, 10] {
        let names: Vec<String> = [1i64, 2, -3]
            .into_iter()
            .map(|c| {
                identify_st0(&CurveSpec::additive(d, c).unwrap(), 2)
                    .unwrap()
                    .name
            })
            .collect();
        assert!(names.windows(2).all(|w| w[0] == w[1]), "d={d}: {names:?}");
    }
}

#[test]
fn json_round_trips() {
    let id: TorusId = identify_st0(&CurveSpec::additive(12, 1).unwrap(), 3).unwrap();
    let back: TorusId = serde_json::from_str(&serde_json::to_string(&id).unwrap()).unwrap();
    assert_eq!(back, id);

    let split = split_full_refined(11, Constant::integer(2).unwrap()).unwrap();
    let back: IsogenyFactorization =
        serde_json::from_str(&serde_json::to_string(&split).unwrap()).unwrap();
    assert_eq!(back, split);
    assert!(back.conserves_genus());

    let m = build_matrix(19, 9, Family::AdditiveConstant).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(
        serde_json::from_str::<hyperjac::CarryMatrix>(&text).unwrap(),
        m
    );
}

#[test]
fn splitting_genus_accounting() {
    for g in 2..=200u32 {
        let s = split_full(g).unwrap();
        assert_eq!(s.total_genus(), g);
        assert_eq!(s.factors[0].exponent, 2);
    }
}
