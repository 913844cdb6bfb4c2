//! End-to-end checks of the explicit families against independent oracles.

use steinhaus_core::binommat::circ;
use steinhaus_core::families::{
    a0, balanced_period, e_alpha_count, gen_x, gen_y, gen_z, in_f, odd_balance_predicate, sample_e, ESpec,
    FamilyHint, OSpec,
};
use steinhaus_core::idap::{idap_from_antisym_orbit, idap_orbit_antisym_predicate, idap_orbit_direct, idap_rescale};
use steinhaus_core::iap::IapSpec;
use steinhaus_core::{ModTuple, Modulus};

fn m(x: u64) -> Modulus {
    Modulus::new(x).unwrap()
}

/// Balance by filling the whole triangle with the negated rule, cell by cell.
fn naive_balanced(row: &[u64], m: u64) -> bool {
    let mut counts = vec![0u64; m as usize];
    let mut cur = row.to_vec();
    while !cur.is_empty() {
        cur.iter().for_each(|&x| counts[x as usize] += 1);
        cur = cur.windows(2).map(|w| (2 * m - w[0] - w[1]) % m).collect();
    }
    counts.iter().all(|&c| c == counts[0])
}

/// The period computed from scratch: `u_{24q + r} = t_r + q (t_r + t_{23-r})`.
fn naive_period(t: &[i64; 24], m: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|j| {
            let (q, r) = ((j / 24) as i64, j % 24);
            (t[r] + q * (t[r] + t[23 - r])).rem_euclid(m as i64) as u64
        })
        .collect()
}

#[test]
fn universal_periods_match_naive_construction() {
    let t = steinhaus_core::families::universal_a(315).unwrap();
    for mv in 1..=10u64 {
        let len = if mv % 2 == 0 { 12 * mv } else { 3 * mv } as usize;
        let cert = balanced_period(m(mv), &FamilyHint::Universal { mu: 315 }).unwrap();
        assert_eq!(cert.period.v, naive_period(&t.0, mv, len), "m = {mv}");
        for lambda in 1..=2 {
            assert!(naive_balanced(&cert.period.v.repeat(lambda), mv), "m = {mv}, λ = {lambda}");
        }
    }
}

#[test]
fn e_members_give_balanced_triangles() {
    for i0 in 1..=7 {
        for negative in [false, true] {
            let alpha = std::array::from_fn(|i| (i as i64 * 7 + i0 as i64) % 5 - 2);
            let t = sample_e(&ESpec { i0, negative, alpha }).unwrap();
            assert!(in_f(&t));
            for u in 0..=3u32 {
                let mv = 1u64 << u;
                let row = naive_period(&t.0, mv, 12 * mv as usize);
                assert!(naive_balanced(&row, mv), "X_{i0} u = {u}");
                assert!(naive_balanced(&row.repeat(2), mv), "X_{i0} u = {u}, twice");
            }
        }
    }
}

#[test]
fn generator_relations() {
    // Y_j = Z_j - Z_{8+j} + Z_{17-j} has vanishing antisymmetric difference.
    for j in 1..=8 {
        let y = gen_y(j).unwrap();
        assert!(y.times_x().is_zero());
        let z = gen_z(j).unwrap().axpy(-1, &gen_z(8 + j).unwrap()).add(&gen_z(17 - j).unwrap());
        assert_eq!(y, z);
    }
    // The A0 element equals X_1 - 4Y_5 - 4Y_8 and lies in F.
    assert_eq!(a0(), gen_x(1).unwrap().axpy(-4, &gen_y(5).unwrap()).axpy(-4, &gen_y(8).unwrap()));
    assert!(in_f(&a0()));
}

#[test]
fn bounded_members_of_e() {
    assert_eq!(e_alpha_count(3), 0);
    assert_eq!(e_alpha_count(4), 330);
}

#[test]
fn doubly_arithmetic_orbit_of_a0() {
    for u in 3..=5u32 {
        let mv = m(1 << u);
        let k = 3usize << u;
        let a = a0().project(mv);
        assert!(idap_orbit_antisym_predicate(&a, k as u64).unwrap(), "u = {u}");
        assert!(idap_orbit_direct(&IapSpec::antisymmetric(a.clone()).unwrap(), k).unwrap());
        let spec = idap_from_antisym_orbit(&a, k).unwrap();
        let square = idap_rescale(&spec, k / 24, 1).unwrap();
        let scale = 1i64 << (u - 2);
        let d1: Vec<i64> = [1, 2, 1].repeat(1 << u).into_iter().map(|x| x * scale).collect();
        let d2: Vec<i64> = [3, 3, 2].repeat(1 << u).into_iter().map(|x| x * scale).collect();
        assert_eq!(square.d1, circ(&d1, mv), "D1 at u = {u}");
        assert_eq!(square.d2, circ(&d2, mv), "D2 at u = {u}");
    }
}

#[test]
fn odd_moduli() {
    for mv in [1u64, 3, 5, 7, 9, 11, 15] {
        for (a1, a2) in [(1, 1), (1, 2), (2, 1), (0, 1), (1, 3), (1, 0), (3, 3)] {
            let pred = odd_balance_predicate(a1, a2, m(mv)).unwrap();
            let t = steinhaus_core::families::a1_tuple().scale(a1).axpy(a2, &steinhaus_core::families::a2_tuple());
            let row = naive_period(&t.0, mv, 3 * mv as usize);
            if pred {
                assert!(naive_balanced(&row, mv), "({a1}, {a2}) mod {mv}");
            }
        }
    }
    let o = OSpec { a1: 1, negative: false, alpha: 1, beta: 2 };
    for mv in [5u64, 7, 11] {
        balanced_period(m(mv), &FamilyHint::O(o.clone())).unwrap();
    }
    assert!(balanced_period(m(4), &FamilyHint::O(o)).is_err());
}

#[test]
fn modulus_outside_family_rejected() {
    let e = balanced_period(m(6), &FamilyHint::E(ESpec { i0: 1, negative: false, alpha: [0; 16] }));
    assert!(e.is_err());
    let u = balanced_period(m(22), &FamilyHint::Universal { mu: 315 });
    assert!(u.is_err());
    let digits = ModTuple::from_digits(m(2), "001101000001100000101100").unwrap();
    assert_eq!(balanced_period(m(2), &FamilyHint::Universal { mu: 1 }).unwrap().period, digits);
}
