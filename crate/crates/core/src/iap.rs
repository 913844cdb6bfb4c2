//! Interlaced arithmetic progressions and the periodicity of their orbits.
//!
//! A `k`-interlaced arithmetic progression `<A, D>` is the two-sided
//! sequence with `u[q*k + r] = A[r] + q * D[r]`. Derivation (negated rule)
//! maps such a sequence to another one with the same `k`, which makes orbit
//! periodicity a linear-algebra question about `(A | D)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::binommat::{pmat, xmat, SumTable};
use crate::error::{Error, Result};
use crate::matrix::ModMatrix;
use crate::modring::{is_antisymmetric, ModTuple, Modulus};
use crate::triangle::{self, LocalRule};

/// `<A, D>` over Z/mZ. JSON: `{"m": 3, "k": 3, "A": [0,2,1], "D": [1,1,1]}`;
/// signed entries are accepted on input and reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawIap", into = "RawIap")]
pub struct IapSpec {
    pub m: Modulus,
    pub k: usize,
    pub a: ModTuple,
    pub d: ModTuple,
}

#[derive(Serialize, Deserialize)]
struct RawIap {
    m: u64,
    k: usize,
    #[serde(rename = "A")]
    a: Vec<i64>,
    #[serde(rename = "D")]
    d: Vec<i64>,
}

impl TryFrom<RawIap> for IapSpec {
    type Error = Error;
    fn try_from(r: RawIap) -> Result<Self> {
        let m = Modulus::new(r.m)?;
        IapSpec::new(ModTuple::from_signed(m, &r.a), ModTuple::from_signed(m, &r.d)).and_then(|s| {
            if s.k != r.k {
                Err(Error::LengthMismatch(r.a.len(), r.k))
            } else {
                Ok(s)
            }
        })
    }
}

impl From<IapSpec> for RawIap {
    fn from(s: IapSpec) -> Self {
        RawIap {
            m: s.m.get(),
            k: s.k,
            a: s.a.v.iter().map(|&x| x as i64).collect(),
            d: s.d.v.iter().map(|&x| x as i64).collect(),
        }
    }
}

impl IapSpec {
    pub fn new(a: ModTuple, d: ModTuple) -> Result<Self> {
        if a.m != d.m {
            return Err(Error::ModulusMismatch(a.m.get(), d.m.get()));
        }
        if a.len() != d.len() {
            return Err(Error::LengthMismatch(a.len(), d.len()));
        }
        if a.is_empty() {
            return Err(Error::Precondition("an interlaced progression needs k >= 1".into()));
        }
        Ok(IapSpec { m: a.m, k: a.len(), a, d })
    }

    /// The antisymmetric-period progression `<A, A X_k>`.
    pub fn antisymmetric(a: ModTuple) -> Result<Self> {
        let d = antisym_diff(&a);
        IapSpec::new(a, d)
    }
}

/// Value at index `j` (negative indices allowed).
pub fn iap_eval(s: &IapSpec, j: i64) -> u64 {
    let k = s.k as i64;
    let (q, r) = (j.div_euclid(k), j.rem_euclid(k) as usize);
    s.m.add(s.a.v[r], s.m.scale(q, s.d.v[r]))
}

/// The inclusive window `S[i1..=i2]`.
pub fn iap_window(s: &IapSpec, i1: i64, i2: i64) -> Result<ModTuple> {
    if i1 > i2 {
        return Err(Error::Precondition(format!("empty window {i1}..={i2}")));
    }
    Ok(ModTuple { m: s.m, v: (i1..=i2).map(|j| iap_eval(s, j)).collect() })
}

/// One derivation under the negated rule.
pub fn iap_derive(s: &IapSpec) -> IapSpec {
    let m = s.m;
    let k = s.k;
    let a = (0..k)
        .map(|r| {
            if r + 1 < k {
                m.neg(m.add(s.a.v[r], s.a.v[r + 1]))
            } else {
                // The successor of the last slot is slot 0 of the next block.
                m.neg(m.add(m.add(s.a.v[r], s.a.v[0]), s.d.v[0]))
            }
        })
        .collect();
    let d = (0..k).map(|r| m.neg(m.add(s.d.v[r], s.d.v[(r + 1) % k]))).collect();
    IapSpec { m, k, a: ModTuple { m, v: a }, d: ModTuple { m, v: d } }
}

/// `i` derivations via `(-1)^i (A C^i + D T^i, D C^i)`.
pub fn iap_iterated(s: &IapSpec, i: u64) -> IapSpec {
    let tab = SumTable::new(s.k, i, s.m);
    let (c, t) = (tab.cmat(), tab.tmat());
    let sign = if i % 2 == 0 { 1 } else { -1 };
    let ac = c.vec_mul(&s.a.v).expect("shape");
    let dt = t.vec_mul(&s.d.v).expect("shape");
    let dc = c.vec_mul(&s.d.v).expect("shape");
    let m = s.m;
    let a = ac.iter().zip(&dt).map(|(&x, &y)| m.scale(sign, m.add(x, y))).collect();
    let d = dc.iter().map(|&x| m.scale(sign, x)).collect();
    IapSpec { m, k: s.k, a: ModTuple { m, v: a }, d: ModTuple { m, v: d } }
}

fn multiple_of_k(k: usize, p: usize) -> Result<u64> {
    if p == 0 || p % k != 0 {
        return Err(Error::Precondition(format!("period {p} is not a positive multiple of k = {k}")));
    }
    Ok((p / k) as u64)
}

/// `lambda * D = 0`, i.e. `D` vanishes modulo `m / gcd(lambda, m)`.
fn differences_vanish(d: &ModTuple, lambda: u64) -> bool {
    let m = d.m.get();
    let q = m / lambda.gcd(&m);
    d.v.iter().all(|&x| x % q == 0)
}

/// Whether the sequence is `p`-periodic, for `p` a multiple of `k`.
pub fn iap_is_periodic(s: &IapSpec, p: usize) -> Result<bool> {
    let lambda = multiple_of_k(s.k, p)?;
    Ok(differences_vanish(&s.d, lambda))
}

/// Whether `S[j + p] = S[j]` for all `j`, for any `p >= 1` (no divisibility
/// requirement). Both sides are `k`-interlaced progressions, so agreement
/// on `2k` consecutive indices suffices.
pub fn iap_is_periodic_direct(s: &IapSpec, p: usize) -> bool {
    (0..2 * s.k as i64).all(|j| iap_eval(s, j + p as i64) == iap_eval(s, j))
}

/// Whether the orbit is `(p1, p2)`-periodic: `S` is `p1`-periodic and
/// `(A | D)` lies in the left kernel of `[[W, 0], [T, W]]` at exponent `p2`.
pub fn orbit_is_periodic(s: &IapSpec, p1: usize, p2: u64) -> Result<bool> {
    let lambda = multiple_of_k(s.k, p1)?;
    if !differences_vanish(&s.d, lambda) {
        return Ok(false);
    }
    let mut ad = s.a.v.clone();
    ad.extend_from_slice(&s.d.v);
    Ok(pmat(s.k, p2, s.m).vec_mul(&ad)?.iter().all(|&x| x == 0))
}

/// Reference check by derivation: build one horizontal period and derive it
/// `p2` times.
pub fn orbit_is_periodic_direct(s: &IapSpec, p1: usize, p2: usize) -> Result<bool> {
    if p1 == 0 {
        return Err(Error::Precondition("horizontal period must be at least 1".into()));
    }
    if !iap_is_periodic_direct(s, p1) {
        return Ok(false);
    }
    let period = iap_window(s, 0, p1 as i64 - 1)?;
    triangle::orbit_is_periodic(&period, LocalRule::Negated, p2)
}

/// `D = A X_k`, the differences making the first period antisymmetric.
pub fn antisym_diff(a: &ModTuple) -> ModTuple {
    let x = xmat(a.len(), a.m);
    ModTuple { m: a.m, v: x.vec_mul(&a.v).expect("shape") }
}

/// Whether the orbit of `<A, A X_k>` is `(p, lambda * p)`-periodic:
/// `A X_k` vanishes modulo `m / gcd(p / k, m)` and `A M_k^{lambda p} = 0`.
pub fn orbit_is_periodic_antisym(a: &ModTuple, p: usize, lambda: u64) -> Result<bool> {
    let k = a.len();
    let q = multiple_of_k(k, p)?;
    let d = antisym_diff(a);
    if !differences_vanish(&d, q) {
        return Ok(false);
    }
    let mm = crate::binommat::mmat(k, lambda * p as u64, a.m);
    Ok(mm.vec_mul(&a.v)?.iter().all(|&x| x == 0))
}

/// Whether the first `len` terms of `<A, A X_k>` form an antisymmetric word.
pub fn first_period_antisymmetric(a: &ModTuple, len: usize) -> Result<bool> {
    let s = IapSpec::antisymmetric(a.clone())?;
    if len == 0 {
        return Ok(true);
    }
    Ok(is_antisymmetric(&iap_window(&s, 0, len as i64 - 1)?))
}

/// A `p`-periodic `k`-interlaced progression is also `gcd(k, p)`-interlaced;
/// returns that coarser description.
pub fn reduce_interlace(s: &IapSpec, p: usize) -> Result<IapSpec> {
    if p == 0 || !iap_is_periodic_direct(s, p) {
        return Err(Error::Precondition(format!("sequence is not {p}-periodic")));
    }
    let g = s.k.gcd(&p);
    let m = s.m;
    let a = (0..g as i64).map(|j| iap_eval(s, j)).collect();
    let d = (0..g as i64).map(|j| m.sub(iap_eval(s, j + g as i64), iap_eval(s, j))).collect();
    IapSpec::new(ModTuple { m, v: a }, ModTuple { m, v: d })
}

/// `(A | D) P` for the block matrix at exponent `p2`, exposed for reports.
pub fn orbit_residual(s: &IapSpec, p2: u64) -> Result<ModMatrix> {
    let mut ad = s.a.v.clone();
    ad.extend_from_slice(&s.d.v);
    let r = pmat(s.k, p2, s.m).vec_mul(&ad)?;
    Ok(ModMatrix { m: s.m, rows: 1, cols: r.len(), data: r })
}
