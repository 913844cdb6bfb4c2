//! Reproducibility suites: each check recomputes one published result from
//! scratch and compares it against the value printed in the literature.
//!
//! The fast suite runs in seconds; the full suite adds the size-6 search
//! modulo 21.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arithtri::{shift_invariance_holds, ArithTriangle};
use crate::binommat::{congruence_c24, congruence_t24, mmat};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::families::{
    a0, a1_tuple, a2_tuple, balanced_period, check_mainthm, first_period, repeated_counts, sample_e, ESpec,
    FamilyHint,
};
use crate::iap::{iap_window, orbit_is_periodic, orbit_is_periodic_direct, IapSpec};
use crate::idap::{decompose_triangle, idap_eval, IdapSpec};
use crate::matrix::ModMatrix;
use crate::modlinalg::{left_kernel_gfp, span_equal};
use crate::modring::{is_balanced, ModTuple, Modulus, MultiplicityMap};
use crate::search::{bset, brute_force_balanced, SearchJob};
use crate::triangle::{
    build_triangle, reflect_h, rotate120, steinhaus_equiv_check, streaming_counts, total_counts, LocalRule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fast,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            _ => Err(Error::Parse(format!("unknown suite {s:?} (expected fast or full)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

/// Balanced periods of `μ A0 + 4 A2` with `μ = 315`, for `m = 1..=10`.
pub const UNIVERSAL_GOLDENS: [&str; 10] = [
    "000",
    "001101000001100000101100",
    "012201120",
    "003321220201100220123302201123022003302022321100",
    "041122203334410",
    "045501420045504420345504423345204423342204123342201123042201120042501120",
    "043356662205511124430",
    "047761664245104260567706605527422003742026325544443365260641500664163302201123026407346422721140",
    "045531126612207783378864450",
    "041127208889960046127708889965046627708884965546627703884465546622703384465541622203384460541122203389460041122208389960",
];

/// Balanced periods of `A0` modulo 4 and 8.
pub const A0_GOLDENS: [(u64, &str); 2] = [
    (4, "001123220203300220321102203321022001102022123300"),
    (8, "001163260207340260761142243325422441502422123304405567664603744664365546647721026045106026527700"),
];

/// Published `π_2` kernel dimensions of `M_k^{2k}`.
pub const KERNEL_DIMS: [(usize, usize); 11] =
    [(2, 0), (4, 0), (8, 0), (10, 0), (12, 8), (14, 12), (16, 0), (18, 4), (20, 0), (22, 0), (24, 16)];

/// Published generators of the nontrivial `π_2` kernels of `M_k^{2k}`.
pub const KERNEL_GENERATORS: [(usize, &[&str]); 4] = [
    (
        12,
        &[
            "100000001000",
            "010000000100",
            "001000000010",
            "000100000001",
            "000010000001",
            "000001000010",
            "000000100100",
            "000000011000",
        ],
    ),
    (
        14,
        &[
            "10000000000010",
            "01000000000001",
            "00100000000001",
            "00010000000010",
            "00001000000010",
            "00000100000001",
            "00000010000001",
            "00000001000010",
            "00000000100010",
            "00000000010001",
            "00000000001001",
            "00000000000110",
        ],
    ),
    (18, &["100010010001100010", "010001100010010001", "001001100100001001", "000110011000000110"]),
    (
        24,
        &[
            "100000000000000010000000",
            "010000000000000001000000",
            "001000000000000000100000",
            "000100000000000000010000",
            "000010000000000000001000",
            "000001000000000000000100",
            "000000100000000000000010",
            "000000010000000000000001",
            "000000001000000000000001",
            "000000000100000000000010",
            "000000000010000000000100",
            "000000000001000000001000",
            "000000000000100000010000",
            "000000000000010000100000",
            "000000000000001001000000",
            "000000000000000110000000",
        ],
    ),
];

/// Published `dim Lker_p M_24^{24p}`.
pub const PRIME_KERNEL_DIMS: [(u64, usize); 9] =
    [(2, 16), (3, 21), (5, 23), (7, 11), (11, 2), (13, 11), (17, 5), (73, 8), (241, 5)];

/// Published unit-orbit counts of `B_12` at `2^0..2^3` and of `B_24` at `2^1`.
pub const BSET12_COUNTS: [usize; 4] = [1, 8, 86, 455];
pub const BSET24_COUNT: usize = 658;

fn m(x: u64) -> Modulus {
    Modulus::new(x).expect("positive modulus")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Contradiction(msg()))
    }
}

/// Criterion 1: universal goldens and the two `A0` periods.
pub fn check_goldens() -> Result<String> {
    let hint = FamilyHint::Universal { mu: 315 };
    for (i, want) in UNIVERSAL_GOLDENS.iter().enumerate() {
        let mm = m(i as u64 + 1);
        let got = balanced_period(mm, &hint)?.period.to_digits().unwrap_or_default();
        ensure(got == *want, || format!("m = {mm}: got {got}, want {want}"))?;
    }
    for (mv, want) in A0_GOLDENS {
        let got = first_period(m(mv), &a0())?.to_digits().unwrap_or_default();
        ensure(got == want, || format!("A0 modulo {mv}: got {got}, want {want}"))?;
    }
    Ok("10 universal periods and 2 A0 periods match".into())
}

/// Criterion 2: balance of the universal periods at `λ ∈ {1, 2}`.
pub fn check_balance() -> Result<String> {
    for mv in 1..=10u64 {
        let p = ModTuple::from_digits(m(mv), UNIVERSAL_GOLDENS[mv as usize - 1])?;
        for lambda in [1, 2] {
            let mm = repeated_counts(&p, lambda);
            ensure(is_balanced(&mm), || format!("m = {mv}, λ = {lambda}: counts {:?}", mm.counts))?;
            if mv == 8 && lambda == 1 {
                ensure(mm.counts.iter().all(|&c| c == 582), || format!("m = 8 counts {:?}", mm.counts))?;
            }
        }
    }
    Ok("m = 1..10, λ = 1, 2 balanced; m = 8 has 582 per residue".into())
}

/// Criterion 3: elements of `E` at `2^u`, `u = 0..4`, `λ = 1..3`.
pub fn check_powers_of_two(samples: usize, seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples = vec![a0()];
    for s in 0..samples {
        let spec = ESpec {
            i0: s % 7 + 1,
            negative: (s / 7) % 2 == 1,
            alpha: std::array::from_fn(|_| rng.gen_range(-3..=3)),
        };
        tuples.push(sample_e(&spec)?);
    }
    for t in &tuples {
        for u in 0..=4 {
            check_mainthm(t, u, 3)?;
        }
    }
    Ok(format!("{} tuples × u = 0..4 × λ = 1..3", tuples.len()))
}

/// Criterion 4: closed-form congruences for `C_24` and `T_24`.
pub fn check_congruences() -> Result<String> {
    for u in 4..=7 {
        let (a, b) = congruence_c24(u)?;
        ensure(a == b, || format!("C_24 congruence fails at u = {u}"))?;
    }
    for u in 5..=7 {
        let (a, b) = congruence_t24(u)?;
        ensure(a == b, || format!("T_24 congruence fails at u = {u}"))?;
    }
    Ok("C: u = 4..7, T: u = 5..7".into())
}

/// Criterion 5: `π_2` kernels of `M_k^{2k}`.
pub fn check_kernel_tables() -> Result<String> {
    let two = m(2);
    for (k, dim) in KERNEL_DIMS {
        let basis = left_kernel_gfp(&mmat(k, 2 * k as u64, two), 2)?;
        ensure(basis.dimension() == dim, || format!("k = {k}: dimension {} != {dim}", basis.dimension()))?;
        if let Some((_, gens)) = KERNEL_GENERATORS.iter().find(|(kk, _)| *kk == k) {
            let published: Vec<ModTuple> =
                gens.iter().map(|g| ModTuple::from_digits(two, g)).collect::<Result<_>>()?;
            ensure(span_equal(&basis.vectors, &published, 2)?, || format!("k = {k}: spans differ"))?;
        }
    }
    Ok("11 dimensions, 4 generator tables span-equal".into())
}

/// Criterion 6: `dim Lker_p M_24^{24p}`.
pub fn check_prime_kernels(primes: &[u64]) -> Result<String> {
    for &p in primes {
        let want = PRIME_KERNEL_DIMS
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, d)| *d)
            .ok_or_else(|| Error::Precondition(format!("no published dimension for p = {p}")))?;
        let dim = left_kernel_gfp(&mmat(24, 24 * p, m(p)), p)?.dimension();
        ensure(dim == want, || format!("p = {p}: dimension {dim} != {want}"))?;
    }
    Ok(format!("p ∈ {primes:?}"))
}

/// Criterion 7: `B_12` up to `2^3` and `B_24` at `2^1`, counted up to units.
pub fn check_bset(budget: &Budget) -> Result<String> {
    let r12 = bset(12, 3, budget)?;
    let got: Vec<usize> = r12.levels.iter().map(|l| l.up_to_units).collect();
    ensure(got == BSET12_COUNTS, || format!("B_12 counts {got:?}"))?;
    let r24 = bset(24, 1, budget)?;
    ensure(r24.up_to_units() == BSET24_COUNT, || format!("B_24(2) = {}", r24.up_to_units()))?;
    for k in [2, 4, 8, 10, 16, 20, 22] {
        ensure(bset(k, 1, budget)?.total() == 0, || format!("B_{k}(2) is not empty"))?;
    }
    Ok(format!("B_12: {got:?}; B_24(2) = {BSET24_COUNT}"))
}

/// Unit-orbit counts of `B_12` at every level `2^0..2^6`; the last level
/// is empty.
pub const BSET12_FULL_COUNTS: [usize; 7] = [1, 8, 86, 455, 80, 2, 0];

pub fn check_bset12_full(budget: &Budget) -> Result<String> {
    let r = bset(12, 6, budget)?;
    let got: Vec<usize> = r.levels.iter().map(|l| l.up_to_units).collect();
    ensure(got == BSET12_FULL_COUNTS, || format!("B_12 counts {got:?}"))?;
    Ok(format!("B_12 at 2^0..2^6: {got:?}"))
}

/// Criterion 8: no balanced Pascal triangle of size `n` modulo `mv`.
pub fn check_no_balanced(mv: u64, n: usize, budget: &Budget) -> Result<String> {
    let r = brute_force_balanced(&SearchJob::new(m(mv), n, LocalRule::Pascal), budget, None, 0)?;
    ensure(r.balanced == 0, || format!("{} balanced triangles of size {n} modulo {mv}", r.balanced))?;
    Ok(format!("{} rows, 0 balanced", r.examined))
}

fn random_tuple(rng: &mut ChaCha8Rng, mm: Modulus, len: usize) -> ModTuple {
    ModTuple::new(mm, (0..len).map(|_| rng.gen_range(0..mm.get())))
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, mm: Modulus, len: usize) -> ModTuple {
    let mut v = vec![0u64; len];
    for j in 0..len / 2 {
        v[j] = rng.gen_range(0..mm.get());
        v[len - 1 - j] = mm.neg(v[j]);
    }
    if len % 2 == 1 {
        let half = if mm.get() % 2 == 0 && rng.gen_bool(0.5) { mm.get() / 2 } else { 0 };
        v[len / 2] = half;
    }
    ModTuple { m: mm, v }
}

/// Criterion 9: property suites with pinned sample counts.
pub fn check_properties(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = Budget::default();

    // Every residue appears m^(n-1) t_n times over all triangles of size n.
    for (mv, nmax) in [(2u64, 6usize), (3, 5), (5, 3)] {
        for n in 1..=nmax {
            for rule in [LocalRule::Pascal, LocalRule::Negated] {
                let counts = total_counts(m(mv), n, rule, &budget)?;
                let want = mv.pow(n as u32 - 1) * (n * (n + 1) / 2) as u64;
                ensure(counts.iter().all(|&c| c == want), || format!("average count fails at m = {mv}, n = {n}"))?;
            }
        }
    }

    // Matrix predicate for orbit periodicity against direct derivation.
    let mut positive = 0;
    for trial in 0..600 {
        let k = [1usize, 2, 3, 4, 6][rng.gen_range(0..5)];
        let mm = m(rng.gen_range(2..=9));
        let lambda = rng.gen_range(1..=4);
        let p1 = k * lambda;
        let a = random_tuple(&mut rng, mm, k);
        let d = if trial % 2 == 0 {
            random_tuple(&mut rng, mm, k)
        } else {
            // Differences killed by λ, so the row is p1-periodic.
            let q = mm.get() / num_integer::gcd(lambda as u64, mm.get());
            ModTuple::new(mm, (0..k).map(|_| q * rng.gen_range(0..mm.get()) % mm.get()))
        };
        let s = IapSpec::new(a, d)?;
        let p2 = rng.gen_range(1..=3 * p1);
        let fast = orbit_is_periodic(&s, p1, p2 as u64)?;
        let slow = orbit_is_periodic_direct(&s, p1, p2)?;
        ensure(fast == slow, || format!("orbit predicate disagrees on {s:?}, p = ({p1}, {p2})"))?;
        positive += fast as usize;
    }
    ensure(positive > 0, || "no periodic orbit sampled".into())?;

    // Shift invariance of arithmetic triangles.
    let mut shift_cases = 0;
    while shift_cases < 1000 {
        let mm = m(rng.gen_range(2..=30));
        let d1 = rng.gen_range(0..mm.get());
        let d2 = rng.gen_range(0..mm.get());
        let g = num_integer::gcd(d1, mm.get());
        if g != num_integer::gcd(d2, mm.get()) {
            continue;
        }
        let q = (mm.get() / g) as usize;
        let n = q * rng.gen_range(0..=4) + if rng.gen_bool(0.5) { q - 1 } else { 0 };
        let t = ArithTriangle::new(mm, rng.gen_range(0..30), d1 as i64, d2 as i64, n);
        ensure(shift_invariance_holds(&t)?, || format!("shift invariance fails for {t:?}"))?;
        shift_cases += 1;
    }

    // Decomposition of an interlaced doubly arithmetic triangle.
    for _ in 0..200 {
        let k = rng.gen_range(1..=5);
        let n = rng.gen_range(0..=4 * k + 3);
        let mm = m(rng.gen_range(2..=12));
        let rand_block = |rng: &mut ChaCha8Rng| {
            let vals: Vec<i64> = (0..k * k).map(|_| rng.gen_range(0..mm.get() as i64)).collect();
            ModMatrix::from_fn(mm, k, k, |r, c| vals[r * k + c])
        };
        let spec = IdapSpec::new(rand_block(&mut rng), rand_block(&mut rng), rand_block(&mut rng))?;
        let parts = decompose_triangle(&spec, n)?;
        let cells: usize = parts.iter().map(|p| p.triangle.n * (p.triangle.n + 1) / 2).sum();
        ensure(cells == n * (n + 1) / 2, || format!("k = {k}, n = {n}: {cells} cells"))?;
        for i in 0..n {
            for j in 0..n - i {
                let owner = &parts[(i % k) * k + j % k];
                let (li, lj) = (i / k, j / k);
                ensure(li + lj < owner.triangle.n, || format!("cell ({i}, {j}) uncovered"))?;
                ensure(owner.triangle.cell(li, lj) == idap_eval(&spec, i, j as i64), || {
                    format!("cell ({i}, {j}) value differs")
                })?;
            }
        }
    }

    // Pascal and negated balance agree on antisymmetric rows.
    let mut antisym_balanced = 0;
    for trial in 0..600 {
        let row = if trial < 40 {
            let mv = trial as u64 % 10 + 1;
            ModTuple::from_digits(m(mv), UNIVERSAL_GOLDENS[mv as usize - 1])?
        } else {
            let mm = m(rng.gen_range(2..=8));
            let n = rng.gen_range(1..=24);
            random_antisymmetric(&mut rng, mm, n)
        };
        antisym_balanced += steinhaus_equiv_check(&row)? as usize;
    }
    ensure(antisym_balanced > 0, || "no balanced antisymmetric row sampled".into())?;

    // Dihedral group laws on negated triangles.
    for _ in 0..200 {
        let mm = m(rng.gen_range(2..=7));
        let n = rng.gen_range(1..=12);
        let t = build_triangle(&random_tuple(&mut rng, mm, n), LocalRule::Negated);
        let r = rotate120(&t)?;
        let h = reflect_h(&t)?;
        ensure(r.is_consistent() && h.is_consistent(), || "image is not a triangle".into())?;
        ensure(rotate120(&rotate120(&r)?)? == t, || "r^3 != id".into())?;
        ensure(reflect_h(&h)? == t, || "h^2 != id".into())?;
        ensure(reflect_h(&rotate120(&reflect_h(&r)?)?)? == t, || "hrhr != id".into())?;
    }

    // Projection theorem, both directions.
    let mut balanced_seen = 0;
    for trial in 0..500 {
        let mv = [4u64, 6, 8, 9, 12, 15, 16, 18][rng.gen_range(0..8)];
        let divisors: Vec<u64> = (1..=mv).filter(|d| mv % d == 0).collect();
        let d = divisors[rng.gen_range(0..divisors.len())];
        let counts: Vec<u64> = match trial % 3 {
            0 => vec![rng.gen_range(0..5); mv as usize],
            1 => {
                let base: Vec<u64> = (0..d).map(|_| rng.gen_range(0..5)).collect();
                (0..mv).map(|x| base[(x % d) as usize]).collect()
            }
            _ => (0..mv).map(|_| rng.gen_range(0..5)).collect(),
        };
        let mm = MultiplicityMap::from_counts(m(mv), counts)?;
        let proj = mm.project(d)?;
        let lhs = is_balanced(&mm);
        let rhs = is_balanced(&proj) && mm.is_shift_invariant(d % mv);
        ensure(lhs == rhs, || format!("projection theorem fails for {:?} at d = {d}", mm.counts))?;
        balanced_seen += lhs as usize;
    }
    ensure(balanced_seen > 0, || "no balanced multiset sampled".into())?;

    Ok("average counts, 600 orbit predicates, 1000 shift cases, 200 decompositions, 600 antisymmetric rows, \
        200 dihedral laws, 500 projections"
        .into())
}

/// Criterion 10: no balanced triangle from `<A1, A2>` for even moduli.
pub fn check_even_obstruction() -> Result<String> {
    let mut cases = 0;
    for a1 in -3i64..=3 {
        for a2 in -3i64..=3 {
            let t = a1_tuple().scale(a1).axpy(a2, &a2_tuple());
            for mv in [2u64, 4, 6] {
                let mm = m(mv);
                let spec = IapSpec::new(t.project(mm), t.times_x().project(mm))?;
                for lambda in 1..=3usize {
                    let n = 3 * lambda * mv as usize;
                    let row = iap_window(&spec, 0, n as i64 - 1)?;
                    let mmap = MultiplicityMap { m: mm, counts: streaming_counts(mm, &row.v, LocalRule::Negated) };
                    ensure(!is_balanced(&mmap), || format!("({a1}, {a2}) modulo {mv}, size {n} is balanced"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} triangles, none balanced"))
}

/// Items deliberately left unreproduced, reported with status SKIP.
pub const NOT_REPRODUCED: &[&str] = &[
    "|B_24(4)| = 178102 and |B_24(8)| = 14237227: beyond desk-scale enumeration",
    "|BT_24(8)| = 896 and the lower bounds 896·2^15, 896·2^30: require B_24(8)",
    "kernel dimension sweep over all primes p < 3000: only the listed primes are checked",
];

fn timed(id: &str, name: &str, limit_ms: u128, f: impl FnOnce() -> Result<String>) -> CheckOutcome {
    let start = Instant::now();
    let res = f();
    let elapsed_ms = start.elapsed().as_millis();
    let (status, detail) = match res {
        Ok(d) if elapsed_ms <= limit_ms => (Status::Pass, d),
        Ok(d) => (Status::Fail, format!("{d}; took {elapsed_ms} ms, limit {limit_ms} ms")),
        Err(e) => (Status::Fail, e.to_string()),
    };
    CheckOutcome { id: id.into(), name: name.into(), status, detail, elapsed_ms, limit_ms }
}

fn skipped(id: &str, name: &str, why: &str) -> CheckOutcome {
    CheckOutcome {
        id: id.into(),
        name: name.into(),
        status: Status::Skip,
        detail: why.into(),
        elapsed_ms: 0,
        limit_ms: 0,
    }
}

/// Runs every check of the suite in order.
pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    let budget = Budget::unlimited();
    let mut out = vec![
        timed("1", "golden periods", 1_000, check_goldens),
        timed("2", "balance of golden periods", 5_000, check_balance),
        timed("3", "powers of two from E", 60_000, || check_powers_of_two(20, 0x5eed)),
        timed("4", "C_24 and T_24 congruences", 10_000, check_congruences),
        timed("5", "kernel tables modulo 2", 10_000, check_kernel_tables),
        timed("6", "prime kernel dimensions", 60_000, || check_prime_kernels(&[2, 3, 5, 7, 11, 13, 17, 73, 241])),
        timed("7", "B_k search counts", 600_000, || check_bset(&budget)),
        match suite {
            Suite::Full => timed("7b", "B_12 up to 2^6", 1_800_000, || check_bset12_full(&budget)),
            Suite::Fast => skipped("7b", "B_12 up to 2^6", "full suite only"),
        },
        timed("8a", "no balanced size 5 modulo 15", 60_000, || check_no_balanced(15, 5, &budget)),
    ];
    out.push(match suite {
        Suite::Full => timed("8b", "no balanced size 6 modulo 21", 3_600_000, || check_no_balanced(21, 6, &budget)),
        Suite::Fast => skipped("8b", "no balanced size 6 modulo 21", "full suite only"),
    });
    out.push(timed("9", "property suites", 120_000, || check_properties(0x5eed)));
    out.push(timed("10", "even-modulus obstruction", 10_000, check_even_obstruction));
    for (i, item) in NOT_REPRODUCED.iter().enumerate() {
        out.push(skipped(&format!("11.{}", i + 1), "not reproduced", item));
    }
    out
}

/// Whether no check failed.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_checks_pass() {
        check_goldens().unwrap();
        check_balance().unwrap();
        check_kernel_tables().unwrap();
        check_prime_kernels(&[2, 3, 11]).unwrap();
        check_even_obstruction().unwrap();
    }
}
