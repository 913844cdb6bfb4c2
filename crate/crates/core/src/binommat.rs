//! Arithmetic binomial sums and the matrices built from them.
//!
//! For a block length `k` and a number of derivations `i`,
//!
//! * `s0(k, i, j) = sum_a binom(i, a*k + j)`
//! * `s1(k, i, j) = sum_a a * binom(i, a*k + j)`
//!
//! The circulant `C_k^i` has entry `(r, s)` equal to `s0(k, i, r - s)` and the
//! Toeplitz `T_k^i` has entry `s1(k, i, r - s)`. Together they describe how an
//! interlaced arithmetic progression evolves under `i` derivations.
//!
//! Exact sums use big integers; matrices modulo `m` are built from an
//! `O(i * k)` recursion on the sum vectors, with the matrix recursion and the
//! big-integer closed form available as independent cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, ModMatrix};
use crate::modring::Modulus;

fn binom_big(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(r))
}

/// Range of `a` with `0 <= a*k + j <= i`.
fn alpha_range(k: usize, i: u64, j: i64) -> (i64, i64) {
    let k = k as i64;
    let lo = Integer::div_ceil(&(-j), &k);
    let hi = Integer::div_floor(&(i as i64 - j), &k);
    (lo, hi)
}

/// Exact `sum_a binom(i, a*k + j)`.
pub fn s0(k: usize, i: u64, j: i64) -> BigInt {
    assert!(k >= 1, "block length must be positive");
    let (lo, hi) = alpha_range(k, i, j);
    (lo..=hi).map(|a| binom_big(i, a * k as i64 + j)).sum()
}

/// Exact `sum_a a * binom(i, a*k + j)`; may be negative when `j >= k`.
pub fn s1(k: usize, i: u64, j: i64) -> BigInt {
    assert!(k >= 1, "block length must be positive");
    let (lo, hi) = alpha_range(k, i, j);
    (lo..=hi).map(|a| BigInt::from(a) * binom_big(i, a * k as i64 + j)).sum()
}

fn big_mod(x: &BigInt, m: Modulus) -> u64 {
    x.mod_floor(&BigInt::from(m.get())).to_u64().expect("residue fits in u64")
}

/// `s0(k, i, j)` and `s1(k, i, j)` modulo `m` for `j` in `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumTable {
    pub k: usize,
    pub i: u64,
    pub m: Modulus,
    pub s0: Vec<u64>,
    pub s1: Vec<u64>,
}

impl SumTable {
    /// Builds the table by stepping `i` from zero, using
    /// `binom(i+1, t) = binom(i, t) + binom(i, t-1)`; the `j = 0` column of
    /// `s1` picks up an extra `s0` term because `t - 1` falls into the
    /// previous block.
    pub fn new(k: usize, i: u64, m: Modulus) -> Self {
        assert!(k >= 1, "block length must be positive");
        let mut s0 = vec![0u64; k];
        let mut s1 = vec![0u64; k];
        s0[0] = m.reduce(1);
        let mut n0 = vec![0u64; k];
        let mut n1 = vec![0u64; k];
        for _ in 0..i {
            n0[0] = m.add(s0[0], s0[k - 1]);
            n1[0] = m.add(m.add(s1[0], s1[k - 1]), s0[k - 1]);
            for j in 1..k {
                n0[j] = m.add(s0[j], s0[j - 1]);
                n1[j] = m.add(s1[j], s1[j - 1]);
            }
            std::mem::swap(&mut s0, &mut n0);
            std::mem::swap(&mut s1, &mut n1);
        }
        SumTable { k, i, m, s0, s1 }
    }

    /// `s0(k, i, d)` for any integer `d` (the sum is `k`-periodic in `d`).
    pub fn s0_at(&self, d: i64) -> u64 {
        self.s0[d.rem_euclid(self.k as i64) as usize]
    }

    /// `s1(k, i, d)` for `-k < d < k`, using `s1(-d) = s1(k-d) + s0(k-d)`.
    pub fn s1_at(&self, d: i64) -> u64 {
        let k = self.k as i64;
        assert!(d > -k && d < k, "offset {d} outside (-k, k)");
        if d >= 0 {
            self.s1[d as usize]
        } else {
            let e = (k + d) as usize;
            self.m.add(self.s1[e], self.s0[e])
        }
    }

    pub fn cmat(&self) -> ModMatrix {
        ModMatrix::from_fn(self.m, self.k, self.k, |r, s| self.s0_at(r as i64 - s as i64) as i64)
    }

    pub fn tmat(&self) -> ModMatrix {
        ModMatrix::from_fn(self.m, self.k, self.k, |r, s| self.s1_at(r as i64 - s as i64) as i64)
    }
}

/// `C_k^i` modulo `m`.
pub fn cmat(k: usize, i: u64, m: Modulus) -> ModMatrix {
    SumTable::new(k, i, m).cmat()
}

/// `T_k^i` modulo `m`.
pub fn tmat(k: usize, i: u64, m: Modulus) -> ModMatrix {
    SumTable::new(k, i, m).tmat()
}

/// `(C_k^i, T_k^i)` from the exact big-integer sums.
pub fn cmat_tmat_closed_form(k: usize, i: u64, m: Modulus) -> (ModMatrix, ModMatrix) {
    let c = ModMatrix::from_fn(m, k, k, |r, s| big_mod(&s0(k, i, r as i64 - s as i64), m) as i64);
    let t = ModMatrix::from_fn(m, k, k, |r, s| big_mod(&s1(k, i, r as i64 - s as i64), m) as i64);
    (c, t)
}

/// `(C_k^i, T_k^i)` from `C^{i+1} = C^i C^1` and `T^{i+1} = T^i C^1 + C^i T^1`.
pub fn cmat_tmat_by_recursion(k: usize, i: u64, m: Modulus) -> (ModMatrix, ModMatrix) {
    let (c1, t1) = cmat_tmat_closed_form(k, 1, m);
    let mut c = ModMatrix::identity(m, k);
    let mut t = ModMatrix::zero(m, k, k);
    for _ in 0..i {
        let nt = t.mul(&c1).and_then(|a| a.add(&c.mul(&t1)?)).expect("square shapes");
        c = c.mul(&c1).expect("square shapes");
        t = nt;
    }
    (c, t)
}

fn sign(p: u64) -> i64 {
    if p % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Wendt-type matrix `W_k^p = C_k^p + (-1)^{p+1} I`.
pub fn wendt(k: usize, p: u64, m: Modulus) -> ModMatrix {
    wendt_from(&cmat(k, p, m), p)
}

fn wendt_from(c: &ModMatrix, p: u64) -> ModMatrix {
    let id = ModMatrix::identity(c.m, c.rows).scale(-sign(p));
    c.add(&id).expect("square shapes")
}

/// `X_k` with entry `(r, s) = [r == s] + [r == k - 1 - s]` (0-indexed), so
/// that `(a, b, c, d) X = (a + d, b + c, c + b, d + a)`.
pub fn xmat(k: usize, m: Modulus) -> ModMatrix {
    ModMatrix::from_fn(m, k, k, |r, s| (r == s) as i64 + (r + s + 1 == k) as i64)
}

/// `M_k^p = W_k^p + X_k T_k^p`.
pub fn mmat(k: usize, p: u64, m: Modulus) -> ModMatrix {
    let tab = SumTable::new(k, p, m);
    mmat_from(&tab)
}

fn mmat_from(tab: &SumTable) -> ModMatrix {
    let w = wendt_from(&tab.cmat(), tab.i);
    let xt = xmat(tab.k, tab.m).mul(&tab.tmat()).expect("square shapes");
    w.add(&xt).expect("square shapes")
}

/// Block matrix `[[W, 0], [T, W]]` acting on the row vector `(A | D)`.
pub fn pmat(k: usize, p: u64, m: Modulus) -> ModMatrix {
    let tab = SumTable::new(k, p, m);
    let w = wendt_from(&tab.cmat(), p);
    let z = ModMatrix::zero(m, k, k);
    let top = w.hstack(&z).expect("shapes");
    let bottom = tab.tmat().hstack(&w).expect("shapes");
    top.vstack(&bottom).expect("shapes")
}

/// Block matrix `[[W^2, 0], [T W, W]]` with `W = W_{k1}^{k2}`, `T = T_{k1}^{k2}`.
pub fn iamat(k1: usize, k2: u64, m: Modulus) -> ModMatrix {
    let tab = SumTable::new(k1, k2, m);
    let w = wendt_from(&tab.cmat(), k2);
    let t = tab.tmat();
    let z = ModMatrix::zero(m, k1, k1);
    let top = w.mul(&w).and_then(|w2| w2.hstack(&z)).expect("shapes");
    let bottom = t.mul(&w).and_then(|tw| tw.hstack(&w)).expect("shapes");
    top.vstack(&bottom).expect("shapes")
}

/// `(M W | X W)` with `M = M_{k1}^{k2}`, `W = W_{k1}^{k2}`.
pub fn aiamat(k1: usize, k2: u64, m: Modulus) -> ModMatrix {
    let tab = SumTable::new(k1, k2, m);
    let w = wendt_from(&tab.cmat(), k2);
    let mm = mmat_from(&tab);
    let x = xmat(k1, m);
    let left = mm.mul(&w).expect("shapes");
    let right = x.mul(&w).expect("shapes");
    left.hstack(&right).expect("shapes")
}

/// Verifies `C^{i+j} = C^i C^j` and `T^{i+j} = T^i C^j + C^i T^j`.
pub fn composition_identities_check(k: usize, i: u64, j: u64, m: Modulus) -> Result<bool> {
    let (ci, ti) = (cmat(k, i, m), tmat(k, i, m));
    let (cj, tj) = (cmat(k, j, m), tmat(k, j, m));
    let (cij, tij) = (cmat(k, i + j, m), tmat(k, i + j, m));
    let c_prod = ci.mul(&cj)?;
    let t_prod = ti.mul(&cj)?.add(&ci.mul(&tj)?)?;
    if c_prod != cij {
        return Err(Error::Contradiction(format!(
            "C^{i} C^{j} != C^{} for k={k}, m={m}",
            i + j
        )));
    }
    if t_prod != tij {
        return Err(Error::Contradiction(format!(
            "T^{i} C^{j} + C^{i} T^{j} != T^{} for k={k}, m={m}",
            i + j
        )));
    }
    Ok(true)
}

/// Strictly upper triangular part.
pub fn sut(a: &ModMatrix) -> Result<ModMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", a.rows, a.cols)));
    }
    Ok(ModMatrix::from_fn(a.m, a.rows, a.cols, |r, s| if r < s { a.get(r, s) as i64 } else { 0 }))
}

/// Circulant with entry `(r, s) = first_row[(s - r) mod k]`.
pub fn circ(first_row: &[i64], m: Modulus) -> ModMatrix {
    circ_int(first_row).to_mod(m)
}

pub fn circ_int(first_row: &[i64]) -> IntMatrix {
    let k = first_row.len();
    IntMatrix::from_fn(k, k, |r, s| first_row[(s + k - r) % k])
}

/// Toeplitz with entry `(r, s) = u[r - s]`, where `first_col = (u_0, ..., u_{k-1})`
/// and `upper = (u_{-1}, ..., u_{-(k-1)})`.
pub fn toepl(first_col: &[i64], upper: &[i64], m: Modulus) -> Result<ModMatrix> {
    Ok(toepl_int(first_col, upper)?.to_mod(m))
}

pub fn toepl_int(first_col: &[i64], upper: &[i64]) -> Result<IntMatrix> {
    let k = first_col.len();
    if upper.len() + 1 != k {
        return Err(Error::LengthMismatch(upper.len(), k.saturating_sub(1)));
    }
    Ok(IntMatrix::from_fn(k, k, |r, s| if r >= s { first_col[r - s] } else { upper[s - r - 1] }))
}

/// Integer version of `X_k`.
pub fn xmat_int(k: usize) -> IntMatrix {
    IntMatrix::from_fn(k, k, |r, s| (r == s) as i64 + (r + s + 1 == k) as i64)
}

// Closed forms for the 24-block matrices after 3 * 2^u derivations.

/// First row of the circulant constant term.
pub const CD0: [i64; 24] = [2, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0];
/// First row of the circulant linear term.
pub const CD1: [i64; 24] = [2, 0, 2, 0, 1, 0, 2, 0, 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 2, 0, 1, 0, 2, 0];
/// Toeplitz constant term: first column and strict upper diagonals.
pub const TD0_COL: [i64; 24] = [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0];
pub const TD0_UPPER: [i64; 23] = [0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 0];
/// Toeplitz linear term: first column and strict upper diagonals.
pub const TD1_COL: [i64; 24] = [3, 0, 0, 0, 4, 0, 0, 0, 3, 0, 4, 0, 6, 0, 4, 0, 4, 0, 4, 0, 6, 0, 4, 0];
pub const TD1_UPPER: [i64; 23] = [0, 0, 0, 4, 0, 0, 0, 2, 0, 4, 0, 2, 0, 4, 0, 1, 0, 4, 0, 2, 0, 4, 0];

fn pow2(u: u32) -> Result<Modulus> {
    if u >= 63 {
        return Err(Error::Precondition(format!("2^{u} does not fit the residue type")));
    }
    Modulus::new(1u64 << u)
}

/// `(3 C_24^{3*2^u}, Cd0 + 2^{u-2} Cd1)` modulo `2^u`; the two agree for `u >= 4`.
pub fn congruence_c24(u: u32) -> Result<(ModMatrix, ModMatrix)> {
    if u < 4 {
        return Err(Error::Precondition(format!("circulant congruence needs u >= 4, got {u}")));
    }
    let m = pow2(u)?;
    let direct = cmat(24, 3 << u, m).scale(3);
    let row: Vec<i64> = (0..24).map(|i| CD0[i] + (1i64 << (u - 2)) * CD1[i]).collect();
    Ok((direct, circ(&row, m)))
}

/// `(9 T_24^{3*2^u}, Td0 + 2^{u-3} Td1)` modulo `2^u`; the two agree for `u >= 5`.
pub fn congruence_t24(u: u32) -> Result<(ModMatrix, ModMatrix)> {
    if u < 5 {
        return Err(Error::Precondition(format!("Toeplitz congruence needs u >= 5, got {u}")));
    }
    let m = pow2(u)?;
    let direct = tmat(24, 3 << u, m).scale(9);
    let f = 1i64 << (u - 3);
    let col: Vec<i64> = (0..24).map(|i| TD0_COL[i] + f * TD1_COL[i]).collect();
    let upper: Vec<i64> = (0..23).map(|i| TD0_UPPER[i] + f * TD1_UPPER[i]).collect();
    Ok((direct, toepl(&col, &upper, m)?))
}

pub fn cd0_int() -> IntMatrix {
    circ_int(&CD0)
}

pub fn cd1_int() -> IntMatrix {
    circ_int(&CD1)
}

pub fn td0_int() -> IntMatrix {
    toepl_int(&TD0_COL, &TD0_UPPER).expect("constant shapes")
}

pub fn td1_int() -> IntMatrix {
    toepl_int(&TD1_COL, &TD1_UPPER).expect("constant shapes")
}

/// `Nd0 = 3 Cd0 - 9 I + X_24 Td0`, the constant term of `9 M_24^{3*2^u}`.
pub fn nd0_int() -> IntMatrix {
    cd0_int().scale(3).sub(&IntMatrix::identity(24).scale(9)).add(&xmat_int(24).mul(&td0_int()))
}

/// `Nd1 = 6 Cd1 + X_24 Td1`, the linear term of `9 M_24^{3*2^u}` (only its
/// class modulo 8 matters).
pub fn nd1_int() -> IntMatrix {
    cd1_int().scale(6).add(&xmat_int(24).mul(&td1_int()))
}

/// `9 M_24^{3*2^u}` and `Nd0 + 2^{u-3} Nd1`, both modulo `2^u`.
pub fn congruence_m24(u: u32) -> Result<(ModMatrix, ModMatrix)> {
    if u < 5 {
        return Err(Error::Precondition(format!("needs u >= 5, got {u}")));
    }
    let m = pow2(u)?;
    let direct = mmat(24, 3 << u, m).scale(9);
    let closed = nd0_int().add(&nd1_int().scale(1i64 << (u - 3))).to_mod(m);
    Ok((direct, closed))
}

/// Constant term `Md0` of `9 (M W | X W)` at `3 * 2^u` derivations, from
/// `3 Md0 = ((X Td0 - 9 I)(Cd0 - 3 I) | 9 X (Cd0 - 3 I))`.
pub fn md0_int() -> Result<IntMatrix> {
    let x = xmat_int(24);
    let i9 = IntMatrix::identity(24).scale(9);
    let c = cd0_int().sub(&IntMatrix::identity(24).scale(3));
    let left = x.mul(&td0_int()).sub(&i9).mul(&c);
    let right = x.mul(&c).scale(9);
    let three_md0 = left.hstack(&right);
    if three_md0.data.iter().any(|v| v % 3 != 0) {
        return Err(Error::Contradiction("3 Md0 is not divisible by 3".into()));
    }
    Ok(IntMatrix { data: three_md0.data.iter().map(|v| v / 3).collect(), ..three_md0 })
}

/// Linear term `Md1` modulo 4, from
/// `6 Md1 = (X (2 Td0 Cd1 + Td1 (Cd0 - 3 I)) | 18 X Cd1)  (mod 8)`.
pub fn md1_mod4() -> Result<ModMatrix> {
    let x = xmat_int(24);
    let c = cd0_int().sub(&IntMatrix::identity(24).scale(3));
    let left = x.mul(&td0_int().scale(2).mul(&cd1_int()).add(&td1_int().mul(&c)));
    let right = x.mul(&cd1_int()).scale(18);
    let six_md1 = left.hstack(&right);
    let m8 = Modulus::new(8)?;
    let reduced = six_md1.to_mod(m8);
    if reduced.data.iter().any(|v| v % 2 != 0) {
        return Err(Error::Contradiction("6 Md1 is odd modulo 8".into()));
    }
    // 6 y = 2 (3 y): halve, then multiply by 3 = 3^{-1} mod 4.
    let m4 = Modulus::new(4)?;
    Ok(ModMatrix::from_fn(m4, reduced.rows, reduced.cols, |r, c| {
        ((reduced.get(r, c) / 2) * 3) as i64
    }))
}

/// `9 (M W | X W)` at `3 * 2^u` derivations and `Md0 + 2^{u-2} Md1`, modulo `2^u`.
pub fn congruence_aia24(u: u32) -> Result<(ModMatrix, ModMatrix)> {
    if u < 5 {
        return Err(Error::Precondition(format!("needs u >= 5, got {u}")));
    }
    let m = pow2(u)?;
    let direct = aiamat(24, 3 << u, m).scale(9);
    let md1 = md1_mod4()?;
    let lin = IntMatrix::from_fn(md1.rows, md1.cols, |r, c| md1.get(r, c) as i64).scale(1i64 << (u - 2));
    let closed = md0_int()?.add(&lin).to_mod(m);
    Ok((direct, closed))
}

/// Recomputes the sum tables against their closed forms and the embedded
/// constants against direct computation. Returns a description of the first
/// disagreement.
pub fn self_check() -> Result<()> {
    let m = Modulus::new(1 << 5)?;
    for (k, i) in [(3usize, 7u64), (24, 13), (5, 21)] {
        let fast = (cmat(k, i, m), tmat(k, i, m));
        if fast != cmat_tmat_closed_form(k, i, m) || fast != cmat_tmat_by_recursion(k, i, m) {
            return Err(Error::Contradiction(format!("sum tables disagree at k={k}, i={i}")));
        }
    }
    let (a, b) = congruence_c24(5)?;
    if a != b {
        return Err(Error::Contradiction("circulant constants disagree at u = 5".into()));
    }
    let (a, b) = congruence_t24(5)?;
    if a != b {
        return Err(Error::Contradiction("Toeplitz constants disagree at u = 5".into()));
    }
    Ok(())
}

/// `binom(n, r)` as a big integer (zero outside `0..=n`).
pub fn binomial(n: u64, r: i64) -> BigInt {
    binom_big(n, r)
}

/// Convenience for tests: whether the exact `s0` equals one.
pub fn is_one(x: &BigInt) -> bool {
    x.is_one()
}
