mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use common::*;
use padic_vertex::engine::{compute_ts, extract_coefficient, extract_coefficient_with_order, ts_sequence};
use padic_vertex::padic::{reduce_rational_mod, teichmuller_lift, OmegaParam, PrimeData};
use padic_vertex::quiver::{factor_list_phi_s, QuiverModel, TargetMonomial};
use padic_vertex::vertex::vertex_padic_limit;

const SMALL_PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 17];

/// `-Σ_{t ∈ F_p} (t(t-1)(t-z0))^{(p-1)/2} mod p`.
fn point_sum(p: u64, z0: u64) -> u64 {
    let total: u64 = (0..p)
        .map(|t| {
            let v = t * ((t + p - 1) % p) % p * ((t + p - z0 % p) % p) % p;
            pow_mod(v, (p - 1) / 2, p)
        })
        .sum::<u64>()
        % p;
    (p - total) % p
}

#[test]
fn unsigned_t1_matches_point_sum() {
    let w = OmegaParam::new(1, 2).unwrap();
    for p in SMALL_PRIMES {
        let t = compute_ts(1, 2, &w, &PrimeData::new(p, 1, &w).unwrap()).unwrap();
        for z0 in 0..p {
            let v = t.unsigned.eval(&big(z0 as i64)).mod_floor(&big(p as i64));
            assert_eq!(v, big(point_sum(p, z0) as i64), "p={p}, z0={z0}");
        }
    }
}

#[test]
fn extraction_is_order_independent() {
    let model = QuiverModel::new(2, 4).unwrap();
    let w = OmegaParam::new(1, 2).unwrap();
    let pd = PrimeData::new(3, 1, &w).unwrap();
    let fl = factor_list_phi_s(&model, &w, &pd).unwrap();
    let target = TargetMonomial::standard(&model, 3);
    let reference = extract_coefficient(&fl, &target).unwrap();
    assert!(!reference.is_zero());
    for order in [[3, 2, 1, 0], [1, 0, 3, 2], [0, 3, 1, 2]] {
        assert_eq!(extract_coefficient_with_order(&fl, &target, &order).unwrap(), reference);
    }
}

#[test]
fn padic_limit_agrees_with_vertex_coefficients() {
    for (n, r, q, p, a) in [(2usize, 1u64, 2u64, 3u64, 3u32), (3, 1, 3, 7, 2), (2, 2, 5, 11, 1)] {
        let w = OmegaParam::new(r, q).unwrap();
        let limit = vertex_padic_limit(1, n, &w, p, a, 10).unwrap();
        let m = modulus(p, a);
        let expected: Vec<BigInt> = closed_form_vertex(n, r as i64, q as i64, 10)
            .iter()
            .map(|c| rational_mod(c, &m))
            .collect();
        assert_eq!(limit.coeffs, expected, "n={n}, omega={r}/{q}, p={p}, a={a}");
    }
}

#[test]
fn k2_dwork_mod_p_squared() {
    let ts = ts_sequence(2, 4, &OmegaParam::new(1, 3).unwrap(), 7, 3).unwrap();
    let m = modulus(7, 2);
    let c = |i: usize| ts[i].signed.coeffs().to_vec();
    let lhs = trim(mul(&c(3), &subst(&c(1), 7), &m, None));
    let rhs = trim(mul(&c(2), &subst(&c(2), 7), &m, None));
    assert_eq!(lhs, rhs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn teichmuller_is_fixed_by_frobenius(pi in 0usize..SMALL_PRIMES.len(), u in 0u64..1000, s in 1u32..5) {
        let p = SMALL_PRIMES[pi];
        let t = teichmuller_lift(u % p, p, s).unwrap();
        let m = modulus(p, s);
        prop_assert_eq!(t.value().modpow(&big(p as i64), &m), t.value().clone());
        prop_assert_eq!(t.value().mod_floor(&big(p as i64)), big((u % p) as i64));
    }

    #[test]
    fn rational_reduction_matches_reference(num in -10_000i64..10_000, den in 1i64..500, pi in 0usize..SMALL_PRIMES.len(), a in 1u32..4) {
        let p = SMALL_PRIMES[pi];
        prop_assume!(den % p as i64 != 0);
        let x = rat(num, den);
        let lib = reduce_rational_mod(&x, p, a).unwrap();
        prop_assert_eq!(lib.value().clone(), rational_mod(&x, &modulus(p, a)));
    }

    #[test]
    fn k1_normalization_and_degree(n in 2usize..4, wi in 0usize..4, pi in 0usize..SMALL_PRIMES.len()) {
        let (r, q) = [(1u64, 2u64), (1, 3), (1, 4), (2, 5)][wi];
        let p = SMALL_PRIMES[pi];
        prop_assume!((p - 1) % q == 0);
        let w = OmegaParam::new(r, q).unwrap();
        let t = compute_ts(1, n, &w, &PrimeData::new(p, 1, &w).unwrap()).unwrap();
        prop_assert_eq!(t.signed.coeff(0), big(1));
        prop_assert_eq!(t.signed.degree(), Some(((p - 1) * r / q) as usize));
        prop_assert!(t.signed.coeffs().iter().zip(t.unsigned.coeffs()).all(|(a, b)| a == &(b * t.sign)));
    }
}
