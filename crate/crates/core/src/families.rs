//! Explicit families of integer 24-tuples whose projections give balanced
//! triangles, and the constructors that turn them into certified periods.
//!
//! * `Z_1..Z_16` span the tuples whose antisymmetric orbits are periodic
//!   modulo every power of two; `Y_1..Y_8` and `X_1..X_7` are fixed
//!   combinations of them.
//! * `E = {±X_i} + <4Y_1..4Y_8, 8Z_9..8Z_16>` solves powers of two.
//! * `O = {a1 A1 + a2 A2 : a2 = ±3^α 2^β, α ∈ {0,1}, 3 ∤ gcd(a1, a2)}`
//!   solves odd moduli; `O'` restricts to `a2 = ±2^α`.
//! * `U_μ = μE + 4O'` solves every even modulus whose odd part divides `μ`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::binommat::{nd0_int, xmat_int};
use crate::error::{Error, Result};
use crate::iap::{iap_is_periodic_direct, iap_window, IapSpec};
use crate::modring::{self, ModTuple, Modulus, MultiplicityMap};
use crate::triangle::{self, LocalRule};

/// A 24-tuple of integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntTuple24(pub [i64; 24]);

impl IntTuple24 {
    pub const ZERO: IntTuple24 = IntTuple24([0; 24]);

    pub fn from_slice(v: &[i64]) -> Result<Self> {
        let arr: [i64; 24] = v.try_into().map_err(|_| Error::LengthMismatch(v.len(), 24))?;
        Ok(IntTuple24(arr))
    }

    /// Elementary tuple `E_i` (1-indexed).
    pub fn elementary(i: usize) -> Result<Self> {
        if !(1..=24).contains(&i) {
            return Err(Error::IndexOutOfRange { index: i, max: 24 });
        }
        let mut t = [0; 24];
        t[i - 1] = 1;
        Ok(IntTuple24(t))
    }

    pub fn add(&self, o: &IntTuple24) -> IntTuple24 {
        IntTuple24(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn scale(&self, c: i64) -> IntTuple24 {
        IntTuple24(self.0.map(|x| x * c))
    }

    /// `t + c * o`.
    pub fn axpy(&self, c: i64, o: &IntTuple24) -> IntTuple24 {
        IntTuple24(std::array::from_fn(|i| self.0[i] + c * o.0[i]))
    }

    /// `t X_24` over the integers: entry `j` is `t_j + t_{23-j}`.
    pub fn times_x(&self) -> IntTuple24 {
        IntTuple24(std::array::from_fn(|j| self.0[j] + self.0[23 - j]))
    }

    pub fn project(&self, m: Modulus) -> ModTuple {
        ModTuple::from_signed(m, &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

fn check_index(i: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, max })
    }
}

fn e(i: usize) -> IntTuple24 {
    IntTuple24::elementary(i).expect("index in range")
}

/// `Z_i = E_i - 3E_{16+i} + 2E_{25-i}` for `i <= 8`,
/// `Z_{8+i} = E_{8+i} - 2E_{16+i} + E_{25-i}`.
pub fn gen_z(i: usize) -> Result<IntTuple24> {
    check_index(i, 16)?;
    Ok(if i <= 8 {
        e(i).axpy(-3, &e(16 + i)).axpy(2, &e(25 - i))
    } else {
        let j = i - 8;
        e(i).axpy(-2, &e(16 + j)).axpy(1, &e(25 - j))
    })
}

/// `Y_j = Z_j - Z_{8+j} + Z_{17-j}`.
pub fn gen_y(j: usize) -> Result<IntTuple24> {
    check_index(j, 8)?;
    Ok(gen_z(j)?.axpy(-1, &gen_z(8 + j)?).add(&gen_z(17 - j)?))
}

/// Coordinates of `X_1..X_7` in the basis `Z_1..Z_16`.
const X_IN_Z: [[i64; 16]; 7] = [
    [0, 0, 1, 1, 2, 3, 2, 2, 4, 2, 0, 3, -1, -4, 0, -2],
    [0, 0, 1, 3, 0, 3, 2, 0, 2, 2, 0, -1, 3, -4, 0, 0],
    [0, 0, 3, 3, 0, 1, 0, 0, 2, 0, -4, -1, 3, 0, 2, 0],
    [0, 2, 1, 3, 0, 1, 0, 0, 2, -2, -2, -1, 3, -2, 4, 0],
    [2, 0, 1, 1, 0, 3, 2, 0, 0, 2, 0, 1, 1, -4, 0, 2],
    [2, 0, 3, 3, 2, 1, 0, 2, 2, 0, -4, 1, 1, 0, 2, 0],
    [2, 2, 3, 1, 0, 3, 2, 0, 0, 0, -2, 1, 1, -2, 2, 2],
];

/// Combination `sum c_i Z_i`.
pub fn from_z_coords(c: &[i64; 16]) -> IntTuple24 {
    (0..16).fold(IntTuple24::ZERO, |acc, i| acc.axpy(c[i], &gen_z(i + 1).expect("index")))
}

pub fn gen_x(i: usize) -> Result<IntTuple24> {
    check_index(i, 7)?;
    Ok(from_z_coords(&X_IN_Z[i - 1]))
}

/// `X_1 - 4Y_5 - 4Y_8`, the small element of `E` used for worked examples.
pub fn a0() -> IntTuple24 {
    gen_x(1).unwrap().axpy(-4, &gen_y(5).unwrap()).axpy(-4, &gen_y(8).unwrap())
}

/// `(1, 0, -1)^8`.
pub fn a1_tuple() -> IntTuple24 {
    IntTuple24(std::array::from_fn(|i| [1, 0, -1][i % 3]))
}

/// The 3-interlaced progression `<(0, 1, -1), (-1, 2, -1)>` cut to 24 terms.
pub fn a2_tuple() -> IntTuple24 {
    IntTuple24(std::array::from_fn(|i| {
        let (q, r) = ((i / 3) as i64, i % 3);
        [0, 1, -1][r] + q * [-1, 2, -1][r]
    }))
}

/// `μ A0 + 4 A2`, an element of `U_μ` for odd `μ`.
pub fn universal_a(mu: i64) -> Result<IntTuple24> {
    if mu < 1 || mu % 2 == 0 {
        return Err(Error::Precondition(format!("μ must be odd and positive, got {mu}")));
    }
    Ok(a0().scale(mu).axpy(4, &a2_tuple()))
}

/// `lcm(1, 3, ..., m0 - 1)`.
pub fn mu_for_range(m0: u64) -> Result<u64> {
    if m0 < 2 || m0 % 2 == 1 {
        return Err(Error::Precondition(format!("range bound must be even and at least 2, got {m0}")));
    }
    Ok((1..m0).step_by(2).fold(1u64, |acc, x| acc.lcm(&x)))
}

/// Parameters of `±X_{i0} + 4 sum alpha_i Y_i + 8 sum alpha_{8+i} Z_{8+i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ESpec {
    pub i0: usize,
    pub negative: bool,
    pub alpha: [i64; 16],
}

pub fn sample_e(spec: &ESpec) -> Result<IntTuple24> {
    let sign = if spec.negative { -1 } else { 1 };
    let mut t = gen_x(spec.i0)?.scale(sign);
    for j in 1..=8 {
        t = t.axpy(4 * spec.alpha[j - 1], &gen_y(j)?);
    }
    for i in 9..=16 {
        t = t.axpy(8 * spec.alpha[i - 1], &gen_z(i)?);
    }
    Ok(t)
}

/// Whether `t Nd0 = 0` over the integers, i.e. the antisymmetric orbit of
/// `t` is periodic modulo every power of two.
pub fn in_f(t: &IntTuple24) -> bool {
    nd0_int().vec_mul(&t.0).iter().all(|&x| x == 0)
}

/// `a1 A1 + a2 A2` with `a2 = ±3^α 2^β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OSpec {
    pub a1: i64,
    pub negative: bool,
    pub alpha: u32,
    pub beta: u32,
}

impl OSpec {
    pub fn a2(&self) -> Result<i64> {
        if self.alpha > 1 {
            return Err(Error::Precondition(format!("exponent of 3 must be 0 or 1, got {}", self.alpha)));
        }
        let mag = 3i64.pow(self.alpha).checked_mul(1i64.checked_shl(self.beta).unwrap_or(0)).unwrap_or(0);
        if mag == 0 || self.beta >= 62 {
            return Err(Error::Precondition("power of two too large".into()));
        }
        Ok(if self.negative { -mag } else { mag })
    }

    pub fn tuple(&self) -> Result<IntTuple24> {
        let a2 = self.a2()?;
        if self.a1.gcd(&a2) % 3 == 0 {
            return Err(Error::Precondition(format!("3 divides gcd({}, {a2})", self.a1)));
        }
        Ok(a1_tuple().scale(self.a1).axpy(a2, &a2_tuple()))
    }
}

/// `a1 A1 + a2 A2` with `a2 = ±2^α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OPrimeSpec {
    pub a1: i64,
    pub negative: bool,
    pub alpha: u32,
}

impl OPrimeSpec {
    pub fn tuple(&self) -> Result<IntTuple24> {
        OSpec { a1: self.a1, negative: self.negative, alpha: 0, beta: self.alpha }.a2().map(|a2| {
            a1_tuple().scale(self.a1).axpy(a2, &a2_tuple())
        })
    }
}

/// Constructive description of a tuple, used to certify which theorem applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyHint {
    E(ESpec),
    O(OSpec),
    #[serde(rename = "oprime")]
    OPrime(OPrimeSpec),
    /// `μ e + 4 o` with `e ∈ E`, `o ∈ O'`.
    #[serde(rename = "umu")]
    UMu { mu: i64, e: ESpec, o: OPrimeSpec },
    /// `μ A0 + 4 A2`.
    Universal { mu: i64 },
}

impl FamilyHint {
    pub fn tuple(&self) -> Result<IntTuple24> {
        match self {
            FamilyHint::E(s) => sample_e(s),
            FamilyHint::O(s) => s.tuple(),
            FamilyHint::OPrime(s) => s.tuple(),
            FamilyHint::UMu { mu, e, o } => {
                if *mu < 1 || mu % 2 == 0 {
                    return Err(Error::Precondition(format!("μ must be odd and positive, got {mu}")));
                }
                Ok(sample_e(e)?.scale(*mu).axpy(4, &o.tuple()?))
            }
            FamilyHint::Universal { mu } => universal_a(*mu),
        }
    }

    /// Checks that the family's theorem covers modulus `m`.
    fn covers(&self, m: u64) -> Result<()> {
        let odd_part = m >> m.trailing_zeros();
        let fail = |why: String| Err(Error::Precondition(why));
        match self {
            FamilyHint::E(_) if !m.is_power_of_two() => fail(format!("E covers powers of two, not {m}")),
            FamilyHint::O(_) | FamilyHint::OPrime(_) if m % 2 == 0 => {
                fail(format!("O covers odd moduli, not {m}"))
            }
            FamilyHint::UMu { mu, .. } | FamilyHint::Universal { mu }
                if (*mu as u64) % odd_part != 0 =>
            {
                fail(format!("odd part {odd_part} of {m} does not divide μ = {mu}"))
            }
            _ => Ok(()),
        }
    }
}

/// Result of certifying a period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCertificate {
    pub m: u64,
    pub period: ModTuple,
    pub length: usize,
    /// Horizontal and vertical period of the orbit.
    pub periodic: [usize; 2],
    /// Repetition counts whose triangles were checked balanced.
    pub balanced_lambda: Vec<usize>,
}

/// Period length: `12m` for even `m`, `3m` for odd `m`.
pub fn period_length(m: u64) -> usize {
    if m % 2 == 0 {
        12 * m as usize
    } else {
        3 * m as usize
    }
}

/// Multiplicity of the negated-rule triangle on `period` repeated `lambda` times.
pub fn repeated_counts(period: &ModTuple, lambda: usize) -> MultiplicityMap {
    let row = modring::repeat(period, lambda);
    MultiplicityMap { m: period.m, counts: triangle::streaming_counts(period.m, &row.v, LocalRule::Negated) }
}

/// Certifies that `period` is an orbit period (`len` derivations return it)
/// and that the triangles on `period^λ` are balanced for each given `λ`.
pub fn certify_period(period: &ModTuple, lambdas: &[usize]) -> Result<PeriodCertificate> {
    let len = period.len();
    if !triangle::orbit_is_periodic(period, LocalRule::Negated, len)? {
        return Err(Error::Contradiction(format!(
            "orbit of {period} is not ({len}, {len})-periodic"
        )));
    }
    for &lambda in lambdas {
        let mm = repeated_counts(period, lambda);
        if !modring::is_balanced(&mm) {
            return Err(Error::Contradiction(format!(
                "triangle of size {} modulo {} is unbalanced: counts {:?}",
                lambda * len,
                period.m,
                mm.counts
            )));
        }
    }
    Ok(PeriodCertificate {
        m: period.m.get(),
        period: period.clone(),
        length: len,
        periodic: [len, len],
        balanced_lambda: lambdas.to_vec(),
    })
}

/// The first period of `<π_m(t), π_m(t) X_24>`.
pub fn first_period(m: Modulus, t: &IntTuple24) -> Result<ModTuple> {
    let spec = IapSpec::new(t.project(m), t.times_x().project(m))?;
    let len = period_length(m.get());
    if !iap_is_periodic_direct(&spec, len) {
        return Err(Error::Contradiction(format!("sequence is not {len}-periodic modulo {m}")));
    }
    iap_window(&spec, 0, len as i64 - 1)
}

/// Builds and certifies the balanced period modulo `m` for a tuple given
/// by its family description.
pub fn balanced_period(m: Modulus, hint: &FamilyHint) -> Result<PeriodCertificate> {
    hint.covers(m.get())?;
    let t = hint.tuple()?;
    let period = first_period(m, &t)?;
    certify_period(&period, &[1, 2])
}

/// Outcome of checking one element of `E` at one power of two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainThmReport {
    pub u: u32,
    pub period: ModTuple,
    pub balanced_lambda: Vec<usize>,
}

/// For `t ∈ E`: the orbit modulo `2^u` is `(12*2^u, 12*2^u)`-periodic and
/// the triangles of size `12 * 2^u * λ` are balanced for `λ = 1..=lambda_max`.
pub fn check_mainthm(t: &IntTuple24, u: u32, lambda_max: usize) -> Result<MainThmReport> {
    let m = Modulus::new(1u64 << u)?;
    let period = first_period(m, t)?;
    let lambdas: Vec<usize> = (1..=lambda_max).collect();
    let cert = certify_period(&period, &lambdas)?;
    Ok(MainThmReport { u, period: cert.period, balanced_lambda: cert.balanced_lambda })
}

/// `gcd(a1, a2, m) = 1` and `gcd(a2, m) ∈ {1, 3}` for odd `m`. When true, the
/// size-`3m` triangle of `a1 A1 + a2 A2` is built and checked balanced; when
/// the tuple reduces to a multiple of `A1` and `m ∉ {1, 3}`, it is checked
/// unbalanced.
pub fn odd_balance_predicate(a1: i64, a2: i64, m: Modulus) -> Result<bool> {
    let mv = m.get() as i64;
    if mv % 2 == 0 {
        return Err(Error::Precondition(format!("modulus must be odd, got {m}")));
    }
    let pred = a1.gcd(&a2).gcd(&mv) == 1 && matches!(a2.gcd(&mv), 1 | 3);
    let t = a1_tuple().scale(a1).axpy(a2, &a2_tuple());
    let period = first_period(m, &t)?;
    let balanced = modring::is_balanced(&repeated_counts(&period, 1));
    if pred && !balanced {
        return Err(Error::Contradiction(format!("({a1}, {a2}) modulo {m} should be balanced")));
    }
    if a2 % mv == 0 && mv != 1 && mv != 3 && balanced {
        return Err(Error::Contradiction(format!("multiple of A1 modulo {m} should be unbalanced")));
    }
    Ok(pred)
}

/// Coordinates of `X_i` in the `Z` basis.
pub fn x_coords(i: usize) -> Result<[i64; 16]> {
    check_index(i, 7)?;
    Ok(X_IN_Z[i - 1])
}

/// Number of elements of `E` whose entries all lie in `[-alpha, alpha]`.
///
/// An element of `<Z_1..Z_16>` is determined by its first 16 entries (its
/// `Z` coordinates). Membership in `±X_i + M` fixes the first eight
/// coordinates modulo 4 and, given those, the next eight modulo 8, so the
/// search only visits coordinates in the right residue classes.
pub fn e_alpha_count(alpha: i64) -> usize {
    let zs: Vec<IntTuple24> = (1..=16).map(|i| gen_z(i).unwrap()).collect();
    let mut found = std::collections::BTreeSet::new();
    let in_class = |r: i64, modulus: i64| -> Vec<i64> {
        (-alpha..=alpha).filter(|v| (v - r).rem_euclid(modulus) == 0).collect()
    };
    for i in 1..=7 {
        for sign in [1i64, -1] {
            let x: Vec<i64> = X_IN_Z[i - 1].iter().map(|c| c * sign).collect();
            let low: Vec<Vec<i64>> = (0..8).map(|j| in_class(x[j], 4)).collect();
            if low.iter().any(|v| v.is_empty()) {
                continue;
            }
            let mut idx = [0usize; 8];
            loop {
                let c_low: Vec<i64> = (0..8).map(|j| low[j][idx[j]]).collect();
                // y_j = (c_j - x_j) / 4 shifts coordinate 8+j by -4y_j and 17-j by +4y_j.
                let mut target = [0i64; 8];
                for t in 0..8 {
                    target[t] = x[8 + t];
                }
                for j in 0..8 {
                    let y = (c_low[j] - x[j]) / 4;
                    target[j] -= 4 * y;
                    target[15 - j - 8] += 4 * y;
                }
                let high: Vec<Vec<i64>> = (0..8).map(|t| in_class(target[t], 8)).collect();
                if high.iter().all(|v| !v.is_empty()) {
                    let mut hidx = [0usize; 8];
                    loop {
                        let mut c = [0i64; 16];
                        c[..8].copy_from_slice(&c_low);
                        for t in 0..8 {
                            c[8 + t] = high[t][hidx[t]];
                        }
                        let tup = (0..16).fold(IntTuple24::ZERO, |acc, k| acc.axpy(c[k], &zs[k]));
                        if tup.0.iter().all(|v| v.abs() <= alpha) {
                            found.insert(tup.0);
                        }
                        if !advance(&mut hidx, &high) {
                            break;
                        }
                    }
                }
                if !advance(&mut idx, &low) {
                    break;
                }
            }
        }
    }
    found.len()
}

fn advance(idx: &mut [usize; 8], choices: &[Vec<i64>]) -> bool {
    for t in (0..8).rev() {
        idx[t] += 1;
        if idx[t] < choices[t].len() {
            return true;
        }
        idx[t] = 0;
    }
    false
}

/// Integer `X_24`, re-exported for callers working over the integers.
pub fn x24() -> crate::matrix::IntMatrix {
    xmat_int(24)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: u64) -> Modulus {
        Modulus::new(x).unwrap()
    }

    #[test]
    fn generators() {
        let z1 = gen_z(1).unwrap();
        let mut expect = [0i64; 24];
        expect[0] = 1;
        expect[16] = -3;
        expect[23] = 2;
        assert_eq!(z1.0, expect);
        assert!(gen_y(1).unwrap().times_x().is_zero());
        assert!(gen_z(17).is_err() && gen_y(0).is_err() && gen_x(8).is_err());
    }

    #[test]
    fn worked_tuple() {
        assert_eq!(
            a0().0,
            [0, 0, 1, 1, -2, 3, 2, -2, 0, 2, 0, -1, 3, -4, 0, 2, -2, 0, -1, -2, 1, 1, -4, 2]
        );
        let d: Vec<i64> = [2, -4, 2].repeat(8);
        assert_eq!(a0().times_x().0.to_vec(), d);
    }

    #[test]
    fn generator_cross_checks() {
        let d: Vec<i64> = [2, -4, 2].repeat(8);
        let p2 = gen_x(1).unwrap().project(m(2));
        for i in 1..=7 {
            let x = gen_x(i).unwrap();
            assert_eq!(x.times_x().0.to_vec(), d, "X_{i} X_24");
            assert!(in_f(&x));
            assert_eq!(x.project(m(2)), p2);
        }
        for i in 1..=16 {
            assert!(in_f(&gen_z(i).unwrap()));
        }
        for j in 1..=8 {
            assert!(gen_y(j).unwrap().times_x().is_zero());
        }
        assert!(in_f(&IntTuple24::ZERO));
    }

    #[test]
    fn odd_case_tuples() {
        assert!(a1_tuple().times_x().is_zero());
        assert_eq!(a2_tuple().times_x().0.to_vec(), [-8, 16, -8].repeat(8));
        assert_eq!(
            a2_tuple().0,
            [0, 1, -1, -1, 3, -2, -2, 5, -3, -3, 7, -4, -4, 9, -5, -5, 11, -6, -6, 13, -7, -7, 15, -8]
        );
    }

    #[test]
    fn universal_tuple() {
        assert_eq!(
            universal_a(315).unwrap().0,
            [
                0, 4, 311, 311, -618, 937, 622, -610, -12, 618, 28, -331, 929, -1224, -20, 610, -586, -24, -339,
                -578, 287, 287, -1200, 598
            ]
        );
        assert_eq!(universal_a(1).unwrap(), a0().axpy(4, &a2_tuple()));
        assert!(universal_a(4).is_err());
    }

    #[test]
    fn lcm_of_odds() {
        assert_eq!(mu_for_range(10).unwrap(), 315);
        assert_eq!(mu_for_range(2).unwrap(), 1);
        assert_eq!(mu_for_range(12).unwrap(), 3465);
        assert!(mu_for_range(7).is_err());
    }

    #[test]
    fn small_periods() {
        let h = FamilyHint::Universal { mu: 315 };
        assert_eq!(balanced_period(m(1), &h).unwrap().period.to_digits().unwrap(), "000");
        assert_eq!(
            balanced_period(m(2), &h).unwrap().period.to_digits().unwrap(),
            "001101000001100000101100"
        );
        assert_eq!(balanced_period(m(3), &h).unwrap().period.to_digits().unwrap(), "012201120");
        assert!(balanced_period(m(11), &h).is_err());
    }

    #[test]
    fn odd_predicate() {
        assert!(odd_balance_predicate(0, 4, m(315)).unwrap());
        assert!(!odd_balance_predicate(1, 0, m(5)).unwrap());
        assert!(odd_balance_predicate(1, 0, m(3)).unwrap());
        assert!(odd_balance_predicate(1, 0, m(4)).is_err());
    }

    #[test]
    fn bounded_elements() {
        assert_eq!(e_alpha_count(3), 0);
        assert_eq!(e_alpha_count(4), 330);
    }

    #[test]
    fn small_projections() {
        let mut p2 = std::collections::BTreeSet::new();
        let mut p4 = std::collections::BTreeSet::new();
        for i in 1..=7 {
            for neg in [false, true] {
                let spec = ESpec { i0: i, negative: neg, alpha: [1; 16] };
                let t = sample_e(&spec).unwrap();
                assert!(in_f(&t));
                p2.insert(t.project(m(2)).to_digits().unwrap());
                p4.insert(t.project(m(4)).to_digits().unwrap());
            }
        }
        assert_eq!(p2.len(), 1);
        assert_eq!(p4.len(), 14);
    }
}
