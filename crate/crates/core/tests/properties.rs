//! Property-based tests of the algebraic invariants, each checked against a
//! naive oracle written here rather than the library's fast paths.

use proptest::prelude::*;
use steinhaus_core::arithtri::{at_multiplicity, shift_invariance_holds, ArithTriangle};
use steinhaus_core::binommat::{cmat_tmat_by_recursion, cmat_tmat_closed_form, composition_identities_check};
use steinhaus_core::iap::{
    iap_derive, iap_iterated, iap_window, orbit_is_periodic, orbit_is_periodic_direct, IapSpec,
};
use steinhaus_core::idap::{decompose_triangle, idap_eval, IdapSpec};
use steinhaus_core::modlinalg::{left_kernel_gfp, rank_gfp};
use steinhaus_core::modring::{
    concat, is_antisymmetric, is_balanced, multiplicity, project, sigma, tuple_add, ModTuple, Modulus,
    MultiplicityMap,
};
use steinhaus_core::triangle::{
    build_triangle, derive, reflect_h, rotate120, steinhaus_equiv_check, streaming_counts, triangle_balanced,
    triangle_multiplicity, LocalRule,
};
use steinhaus_core::ModMatrix;

fn modulus() -> impl Strategy<Value = Modulus> {
    (2u64..=12).prop_map(|m| Modulus::new(m).unwrap())
}

fn tuple(max_len: usize) -> impl Strategy<Value = ModTuple> {
    (modulus(), 1..=max_len).prop_flat_map(|(m, n)| {
        prop::collection::vec(0..m.get(), n).prop_map(move |v| ModTuple { m, v })
    })
}

/// Antisymmetric rows `u[n-1-j] = -u[j]`; a middle entry must satisfy `2x = 0`.
fn antisymmetric(max_len: usize) -> impl Strategy<Value = ModTuple> {
    (modulus(), 1..=max_len, any::<bool>()).prop_flat_map(|(m, n, half)| {
        prop::collection::vec(0..m.get(), n / 2).prop_map(move |left| {
            let mut v = vec![0; n];
            for (j, &x) in left.iter().enumerate() {
                v[j] = x;
                v[n - 1 - j] = m.neg(x);
            }
            if n % 2 == 1 && half && m.get() % 2 == 0 {
                v[n / 2] = m.get() / 2;
            }
            ModTuple { m, v }
        })
    })
}

/// Naive triangle: a full `n x n` grid filled row by row.
fn naive_counts(row: &[u64], m: u64, negate: bool) -> Vec<u64> {
    let mut counts = vec![0u64; m as usize];
    let mut cur = row.to_vec();
    while !cur.is_empty() {
        for &x in &cur {
            counts[x as usize] += 1;
        }
        cur = cur
            .windows(2)
            .map(|w| {
                let s = (w[0] + w[1]) % m;
                if negate {
                    (m - s) % m
                } else {
                    s
                }
            })
            .collect();
    }
    counts
}

fn iap_spec() -> impl Strategy<Value = IapSpec> {
    (modulus(), prop::sample::select(vec![1usize, 2, 3, 4, 6])).prop_flat_map(|(m, k)| {
        (prop::collection::vec(0..m.get(), k), prop::collection::vec(0..m.get(), k))
            .prop_map(move |(a, d)| IapSpec::new(ModTuple { m, v: a }, ModTuple { m, v: d }).unwrap())
    })
}

proptest! {
    #[test]
    fn projection_is_a_homomorphism(a in tuple(16), seed in any::<u64>()) {
        let b = ModTuple::new(a.m, a.v.iter().map(|&x| x.wrapping_mul(seed | 1) % a.m.get()));
        for d in (1..=a.m.get()).filter(|d| a.m.get() % d == 0) {
            let lhs = project(&tuple_add(&a, &b).unwrap(), d).unwrap();
            let rhs = tuple_add(&project(&a, d).unwrap(), &project(&b, d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn antisymmetric_sum_is_two_torsion(t in antisymmetric(20)) {
        prop_assert!(is_antisymmetric(&t));
        prop_assert_eq!(t.m.add(sigma(&t), sigma(&t)), 0);
    }

    #[test]
    fn multiplicity_is_additive(a in tuple(12), extra in prop::collection::vec(0u64..1000, 0..12)) {
        let b = ModTuple::new(a.m, extra);
        let joined = multiplicity(&concat(&a, &b).unwrap());
        let (ma, mb) = (multiplicity(&a), multiplicity(&b));
        for x in 0..a.m.get() {
            prop_assert_eq!(joined.count(x), ma.count(x) + mb.count(x));
        }
    }

    #[test]
    fn projection_theorem(m in prop::sample::select(vec![4u64, 6, 8, 9, 12, 16]),
                          counts in prop::collection::vec(0u64..4, 16),
                          pick in 0usize..16, periodic in any::<bool>()) {
        let mm = Modulus::new(m).unwrap();
        let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        let d = divisors[pick % divisors.len()];
        let c: Vec<u64> = (0..m as usize).map(|x| if periodic { counts[x % d as usize] } else { counts[x] }).collect();
        let map = MultiplicityMap::from_counts(mm, c.clone()).unwrap();
        let proj = map.project(d).unwrap();
        for x in 0..d {
            let fiber: u64 = (0..m / d).map(|l| c[(x + l * d) as usize]).sum();
            prop_assert_eq!(proj.count(x), fiber);
        }
        prop_assert_eq!(is_balanced(&map), is_balanced(&proj) && map.is_shift_invariant(d % m));
    }

    #[test]
    fn triangle_counts_match_naive(row in tuple(18), negate in any::<bool>()) {
        let rule = if negate { LocalRule::Negated } else { LocalRule::Pascal };
        let want = naive_counts(&row.v, row.m.get(), negate);
        let t = build_triangle(&row, rule);
        prop_assert!(t.is_consistent());
        prop_assert_eq!(&triangle_multiplicity(&t).counts, &want);
        prop_assert_eq!(&streaming_counts(row.m, &row.v, rule), &want);
    }

    #[test]
    fn antisymmetric_rows_alternate_between_rules(row in antisymmetric(16)) {
        let p = build_triangle(&row, LocalRule::Pascal);
        let n = build_triangle(&row, LocalRule::Negated);
        for i in 0..p.size() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(&p.rows[i], &steinhaus_core::modring::tuple_scale(sign, &n.rows[i]));
        }
    }

    #[test]
    fn derivation_preserves_antisymmetry(row in antisymmetric(20)) {
        prop_assume!(row.len() >= 2);
        let d = derive(&row, LocalRule::Negated);
        prop_assert!(is_antisymmetric(&d));
        prop_assert_eq!(sigma(&d), 0);
    }

    #[test]
    fn unit_scaling_preserves_balance(row in tuple(12), pick in 0usize..16) {
        let units = row.m.units();
        let u = units[pick % units.len()];
        let t = build_triangle(&row, LocalRule::Pascal);
        prop_assert_eq!(triangle_balanced(&t.scale(u as i64)), triangle_balanced(&t));
    }

    #[test]
    fn dihedral_group_laws(row in tuple(12)) {
        let t = build_triangle(&row, LocalRule::Negated);
        let r = rotate120(&t).unwrap();
        let h = reflect_h(&t).unwrap();
        prop_assert!(r.is_consistent() && h.is_consistent());
        prop_assert_eq!(&rotate120(&rotate120(&r).unwrap()).unwrap(), &t);
        prop_assert_eq!(&reflect_h(&h).unwrap(), &t);
        let hrhr = rotate120(&reflect_h(&rotate120(&h).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(&hrhr, &t);
        prop_assert_eq!(triangle_multiplicity(&r), triangle_multiplicity(&t));
    }

    #[test]
    fn iap_derivation_matches_rowwise(s in iap_spec(), times in 1u64..6) {
        // Derive a long enough window term by term and compare.
        let len = 3 * s.k + times as usize + 1;
        let mut w = iap_window(&s, 0, len as i64 - 1).unwrap();
        for _ in 0..times {
            w = derive(&w, LocalRule::Negated);
        }
        let d = if times == 1 { iap_derive(&s) } else { iap_iterated(&s, times) };
        prop_assert_eq!(&iap_window(&d, 0, w.len() as i64 - 1).unwrap(), &w);
    }

    #[test]
    fn binomial_tables_agree(k in 1usize..10, i in 0u64..40, m in modulus()) {
        prop_assert_eq!(cmat_tmat_closed_form(k, i, m), cmat_tmat_by_recursion(k, i, m));
    }

    #[test]
    fn binomial_compositions(k in 1usize..8, i in 0u64..20, j in 0u64..20, m in modulus()) {
        prop_assert!(composition_identities_check(k, i, j, m).unwrap());
    }

    #[test]
    fn kernel_vectors_annihilate(p in prop::sample::select(vec![2u64, 3, 5, 7]),
                                 rows in 1usize..7, cols in 1usize..7,
                                 data in prop::collection::vec(0u64..7, 36)) {
        let m = Modulus::new(p).unwrap();
        let a = ModMatrix::from_fn(m, rows, cols, |r, c| data[r * 6 + c] as i64);
        let basis = left_kernel_gfp(&a, p).unwrap();
        prop_assert_eq!(basis.dimension() + rank_gfp(&a, p).unwrap(), rows);
        for v in &basis.vectors {
            prop_assert!(a.vec_mul(&v.v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn arithmetic_triangle_counts_match_naive(m in modulus(), a in 0i64..50, d1 in 0i64..50, d2 in 0i64..50, n in 0usize..25) {
        let t = ArithTriangle::new(m, a, d1, d2, n);
        let mut want = vec![0u64; m.get() as usize];
        for i in 0..n as i64 {
            for j in 0..n as i64 - i {
                want[(a + i * d2 + j * d1).rem_euclid(m.get() as i64) as usize] += 1;
            }
        }
        prop_assert_eq!(at_multiplicity(&t).counts, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn orbit_predicate_matches_derivation(s in iap_spec(), lambda in 1usize..5, p2 in 1usize..30, clear in any::<bool>()) {
        let m = s.m.get();
        // Half the cases have differences killed by λ so the row is periodic.
        let s = if clear {
            let q = m / num_integer::gcd(lambda as u64, m);
            IapSpec::new(s.a.clone(), ModTuple::new(s.m, s.d.v.iter().map(|&x| x * q))).unwrap()
        } else {
            s
        };
        let p1 = s.k * lambda;
        prop_assert_eq!(orbit_is_periodic(&s, p1, p2 as u64).unwrap(), orbit_is_periodic_direct(&s, p1, p2).unwrap());
    }

    #[test]
    fn pascal_and_negated_balance_agree(row in antisymmetric(24)) {
        let pascal = is_balanced(&MultiplicityMap { m: row.m, counts: naive_counts(&row.v, row.m.get(), false) });
        prop_assert_eq!(steinhaus_equiv_check(&row).unwrap(), pascal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn shift_invariance(m in 2u64..=30, a in 0i64..30, d1 in 0u64..30, pick in 0usize..64, laps in 0usize..5, minus_one in any::<bool>()) {
        let mm = Modulus::new(m).unwrap();
        // Multiplying by a unit keeps gcd(d, m), which the theorem requires.
        let units = mm.units();
        let d1 = d1 % m;
        let d2 = mm.mul(d1, units[pick % units.len()]);
        let q = (m / num_integer::gcd(d1, m)) as usize;
        let n = q * laps + if minus_one { q - 1 } else { 0 };
        prop_assert!(shift_invariance_holds(&ArithTriangle::new(mm, a, d1 as i64, d2 as i64, n)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_is_a_partition(k in 1usize..6, extra in 0usize..24, m in modulus(),
                                    data in prop::collection::vec(0i64..1000, 75)) {
        let n = extra + k;
        let block = |off: usize| ModMatrix::from_fn(m, k, k, |r, c| data[off + r * k + c]);
        let spec = IdapSpec::new(block(0), block(25), block(50)).unwrap();
        let parts = decompose_triangle(&spec, n).unwrap();
        prop_assert_eq!(parts.len(), k * k);
        let mut seen = vec![vec![0u8; n]; n];
        for p in &parts {
            let (r, c) = p.origin;
            for li in 0..p.triangle.n {
                for lj in 0..p.triangle.n - li {
                    let (i, j) = (r + li * k, c + lj * k);
                    prop_assert!(i + j < n, "cell ({}, {}) outside", i, j);
                    seen[i][j] += 1;
                    prop_assert_eq!(p.triangle.cell(li, lj), idap_eval(&spec, i, j as i64));
                }
            }
        }
        for i in 0..n {
            for j in 0..n - i {
                prop_assert_eq!(seen[i][j], 1);
            }
        }
    }
}
