//! Interlaced doubly arithmetic progressions (IDAP) and the orbits of
//! interlaced progressions that have this structure.
//!
//! A `(k1, k2)`-IDAP is a two-dimensional array `u[i][j]` (`i >= 0`, `j` any
//! integer) with
//! `u[i0 + i*k2][j0 + j*k1] = A[i0][j0] + i * D2[i0][j0] + j * D1[i0][j0]`
//! for `k2 x k1` matrices `A`, `D1` (horizontal differences) and `D2`
//! (vertical differences).

use serde::{Deserialize, Serialize};

use crate::arithtri::ArithTriangle;
use crate::binommat::{aiamat, cmat, iamat, SumTable};
use crate::error::{Error, Result};
use crate::iap::{antisym_diff, iap_eval, iap_window, IapSpec};
use crate::matrix::ModMatrix;
use crate::modring::{ModTuple, Modulus};
use crate::triangle::{derive, LocalRule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdapSpec {
    pub m: Modulus,
    pub k1: usize,
    pub k2: usize,
    pub a: ModMatrix,
    pub d1: ModMatrix,
    pub d2: ModMatrix,
}

impl IdapSpec {
    pub fn new(a: ModMatrix, d1: ModMatrix, d2: ModMatrix) -> Result<Self> {
        let shape = (a.rows, a.cols);
        if (d1.rows, d1.cols) != shape || (d2.rows, d2.cols) != shape {
            return Err(Error::Dimension("A, D1 and D2 must have the same shape".into()));
        }
        if a.m != d1.m || a.m != d2.m {
            return Err(Error::ModulusMismatch(d1.m.get(), d2.m.get()));
        }
        if a.rows == 0 || a.cols == 0 {
            return Err(Error::Dimension("empty block".into()));
        }
        Ok(IdapSpec { m: a.m, k1: a.cols, k2: a.rows, a, d1, d2 })
    }
}

/// Value at row `i >= 0`, column `j`.
pub fn idap_eval(s: &IdapSpec, i: usize, j: i64) -> u64 {
    let m = s.m;
    let (qi, ri) = (i / s.k2, i % s.k2);
    let k1 = s.k1 as i64;
    let (qj, rj) = (j.div_euclid(k1), j.rem_euclid(k1) as usize);
    let base = m.add(s.a.get(ri, rj), m.mul(m.reduce(qi as u64), s.d2.get(ri, rj)));
    m.add(base, m.scale(qj, s.d1.get(ri, rj)))
}

fn ad_vector(a: &ModTuple, d: &ModTuple) -> Result<Vec<u64>> {
    if a.len() != d.len() {
        return Err(Error::LengthMismatch(a.len(), d.len()));
    }
    if a.m != d.m {
        return Err(Error::ModulusMismatch(a.m.get(), d.m.get()));
    }
    let mut v = a.v.clone();
    v.extend_from_slice(&d.v);
    Ok(v)
}

/// Whether the orbit of `<A, D>` is `(k1, k2)`-doubly arithmetic:
/// `(A | D) [[W^2, 0], [T W, W]] = 0` at exponent `k2`.
pub fn idap_orbit_predicate(a: &ModTuple, d: &ModTuple, k2: u64) -> Result<bool> {
    let v = ad_vector(a, d)?;
    Ok(iamat(a.len(), k2, a.m).vec_mul(&v)?.iter().all(|&x| x == 0))
}

/// Same question for `<A, A X_k>`: `A (M W | X W) = 0` at exponent `k2`.
pub fn idap_orbit_antisym_predicate(a: &ModTuple, k2: u64) -> Result<bool> {
    Ok(aiamat(a.len(), k2, a.m).vec_mul(&a.v)?.iter().all(|&x| x == 0))
}

/// Independent test of the doubly arithmetic structure by derivation.
///
/// The rows of the orbit evolve deterministically, so it suffices that the
/// horizontal differences of row `k2` equal those of row 0 and that the
/// leading blocks satisfy `B[2k2] - 2 B[k2] + B[0] = 0`.
pub fn idap_orbit_direct(s: &IapSpec, k2: usize) -> Result<bool> {
    let k1 = s.k;
    let rows = 2 * k2 + 1;
    let width = 2 * k1 + rows;
    let mut cur = iap_window(s, 0, width as i64 - 1)?;
    let mut grid = Vec::with_capacity(rows);
    for _ in 0..rows {
        let next = derive(&cur, LocalRule::Negated);
        grid.push(cur);
        cur = next;
    }
    let m = s.m;
    let diff = |i: usize, j: usize| m.sub(grid[i].v[j + k1], grid[i].v[j]);
    let diffs_periodic = (0..k1).all(|j| diff(k2, j) == diff(0, j));
    let blocks_arith = (0..k1).all(|j| {
        let second = m.add(grid[2 * k2].v[j], grid[0].v[j]);
        second == m.add(grid[k2].v[j], grid[k2].v[j])
    });
    Ok(diffs_periodic && blocks_arith)
}

/// Builds `A`, `D1`, `D2` for the orbit of `<A, D>` from
/// `R_i(A) = (-1)^i (A C^i + D T^i)`, `R_i(D1) = (-1)^i D C^i` and
/// `R_i(D2) = (-1)^{i+k2} (A W + D T^{k2}) C^i`.
pub fn idap_from_orbit(a: &ModTuple, d: &ModTuple, k2: usize) -> Result<IdapSpec> {
    if k2 == 0 {
        return Err(Error::Precondition("vertical block size must be at least 1".into()));
    }
    if !idap_orbit_predicate(a, d, k2 as u64)? {
        return Err(Error::Precondition("orbit is not interlaced doubly arithmetic for this block size".into()));
    }
    let m = a.m;
    let k1 = a.len();
    let top = SumTable::new(k1, k2 as u64, m);
    let w = crate::binommat::wendt(k1, k2 as u64, m);
    let aw = w.vec_mul(&a.v)?;
    let dt = top.tmat().vec_mul(&d.v)?;
    let d2_seed: Vec<u64> = aw.iter().zip(&dt).map(|(&x, &y)| m.add(x, y)).collect();
    let mut am = ModMatrix::zero(m, k2, k1);
    let mut d1m = ModMatrix::zero(m, k2, k1);
    let mut d2m = ModMatrix::zero(m, k2, k1);
    let c1 = cmat(k1, 1, m);
    let mut row = IapSpec::new(a.clone(), d.clone())?;
    let mut seed = d2_seed;
    let sign_k2: i64 = if k2 % 2 == 0 { 1 } else { -1 };
    for i in 0..k2 {
        for j in 0..k1 {
            am.set(i, j, row.a.v[j]);
            d1m.set(i, j, row.d.v[j]);
            d2m.set(i, j, m.scale(sign_k2, seed[j]));
        }
        row = crate::iap::iap_derive(&row);
        seed = c1.vec_mul(&seed)?.into_iter().map(|x| m.neg(x)).collect();
    }
    IdapSpec::new(am, d1m, d2m)
}

/// `k2 x k1` matrix with first row `A` and `R_{i+1} = -R_i C^1`.
pub fn delta_matrix(a: &ModTuple, k2: usize) -> ModMatrix {
    let m = a.m;
    let k1 = a.len();
    let c1 = cmat(k1, 1, m);
    let mut out = ModMatrix::zero(m, k2, k1);
    let mut row = a.v.clone();
    for i in 0..k2 {
        for (j, &x) in row.iter().enumerate() {
            out.set(i, j, x);
        }
        row = c1.vec_mul(&row).expect("shape").into_iter().map(|x| m.neg(x)).collect();
    }
    out
}

/// The same array described with `(mu*k2) x (lambda*k1)` blocks.
pub fn idap_rescale(s: &IdapSpec, lambda: usize, mu: usize) -> Result<IdapSpec> {
    if lambda == 0 || mu == 0 {
        return Err(Error::Precondition("rescaling factors must be positive".into()));
    }
    let (r, c) = (mu * s.k2, lambda * s.k1);
    let m = s.m;
    let a = ModMatrix::from_fn(m, r, c, |i, j| idap_eval(s, i, j as i64) as i64);
    let d1 = ModMatrix::from_fn(m, r, c, |i, j| m.scale(lambda as i64, s.d1.get(i % s.k2, j % s.k1)) as i64);
    let d2 = ModMatrix::from_fn(m, r, c, |i, j| m.scale(mu as i64, s.d2.get(i % s.k2, j % s.k1)) as i64);
    IdapSpec::new(a, d1, d2)
}

/// One of the `k^2` arithmetic subtriangles of an orbit triangle: cells
/// `(r + i*k, s + j*k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithTriangleRef {
    pub origin: (usize, usize),
    pub triangle: ArithTriangle,
}

/// Splits the size-`n` triangle of a square-block IDAP into `k^2`
/// arithmetic triangles; origin `(r, s)` has size `ceil((n - r - s) / k)`
/// (zero when `r + s >= n`).
pub fn decompose_triangle(s: &IdapSpec, n: usize) -> Result<Vec<ArithTriangleRef>> {
    if s.k1 != s.k2 {
        return Err(Error::Dimension(format!("block is {}x{}, not square", s.k2, s.k1)));
    }
    let k = s.k1;
    let mut out = Vec::with_capacity(k * k);
    for r in 0..k {
        for c in 0..k {
            let size = n.saturating_sub(r + c).div_ceil(k);
            out.push(ArithTriangleRef {
                origin: (r, c),
                triangle: ArithTriangle {
                    m: s.m,
                    a: s.a.get(r, c),
                    d1: s.d1.get(r, c),
                    d2: s.d2.get(r, c),
                    n: size,
                },
            });
        }
    }
    Ok(out)
}

/// Whether row `i` of the orbit of `s` agrees with the IDAP on columns
/// `0..cols` for every `i < rows`, using derivations of a finite window.
pub fn orbit_matches_idap(s: &IapSpec, spec: &IdapSpec, rows: usize, cols: usize) -> Result<bool> {
    let mut cur = iap_window(s, 0, (cols + rows) as i64 - 1)?;
    for i in 0..rows {
        if (0..cols).any(|j| cur.v[j] != idap_eval(spec, i, j as i64)) {
            return Ok(false);
        }
        cur = derive(&cur, LocalRule::Negated);
    }
    Ok(true)
}

/// Convenience: the antisymmetric version of [`idap_from_orbit`].
pub fn idap_from_antisym_orbit(a: &ModTuple, k2: usize) -> Result<IdapSpec> {
    idap_from_orbit(a, &antisym_diff(a), k2)
}

/// Value of the orbit of `s` at `(0, j)`; row 0 is the progression itself.
pub fn orbit_first_row(s: &IapSpec, j: i64) -> u64 {
    iap_eval(s, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binommat::circ;

    fn m(x: u64) -> Modulus {
        Modulus::new(x).unwrap()
    }

    fn t(mm: u64, v: &[i64]) -> ModTuple {
        ModTuple::from_signed(m(mm), v)
    }

    #[test]
    fn evaluation() {
        let a = ModMatrix::from_rows(m(4), &[vec![2, 0, 1], vec![3, 2, 2]]).unwrap();
        let d1 = ModMatrix::from_rows(m(4), &[vec![1, 0, 2], vec![2, 3, 1]]).unwrap();
        let d2 = ModMatrix::from_rows(m(4), &[vec![3, 1, 2], vec![0, 3, 1]]).unwrap();
        let s = IdapSpec::new(a, d1, d2).unwrap();
        assert_eq!(idap_eval(&s, 0, 3), 3);
        assert_eq!(idap_eval(&s, 2, 0), 1);
        assert_eq!(idap_eval(&s, 0, -3), 1);
    }

    #[test]
    fn orbit_of_small_progression() {
        let a = t(3, &[0, 2, 1]);
        let d = t(3, &[1, 1, 1]);
        assert!(idap_orbit_predicate(&a, &d, 3).unwrap());
        let s = idap_from_orbit(&a, &d, 3).unwrap();
        assert_eq!(s.a.to_rows(), vec![vec![0, 2, 1], vec![1, 0, 1], vec![2, 2, 0]]);
        assert_eq!(s.d1.to_rows(), vec![vec![1; 3]; 3]);
        assert_eq!(s.d2.to_rows(), vec![vec![2; 3]; 3]);
        let iap = IapSpec::new(a, d).unwrap();
        assert!(orbit_matches_idap(&iap, &s, 9, 9).unwrap());
        assert!(idap_orbit_direct(&iap, 3).unwrap());
    }

    #[test]
    fn odd_basis_tuple_block() {
        for mm in [2, 3, 5, 8, 9] {
            let a = t(mm, &[1, 0, -1]);
            assert!(idap_orbit_predicate(&a, &ModTuple::zeros(m(mm), 3), 3).unwrap());
        }
    }

    #[test]
    fn delta_examples() {
        let d = delta_matrix(&t(3, &[1, 1, 2]), 4);
        assert_eq!(d.to_rows(), vec![vec![1, 1, 2], vec![1, 0, 0], vec![2, 0, 2], vec![1, 1, 2]]);
        assert!(delta_matrix(&ModTuple::zeros(m(5), 4), 3).is_zero());
        for (al, be, lam) in [(1i64, 2i64, 2usize), (3, 5, 3)] {
            let row: Vec<i64> = [al, be, -al - be].repeat(lam);
            let d = delta_matrix(&t(7, &row), 3 * lam);
            assert_eq!(d, circ(&row, m(7)));
        }
    }

    #[test]
    fn rescale_identity_and_pointwise() {
        let s = idap_from_orbit(&t(3, &[0, 2, 1]), &t(3, &[1, 1, 1]), 3).unwrap();
        assert_eq!(idap_rescale(&s, 1, 1).unwrap(), s);
        let r = idap_rescale(&s, 2, 3).unwrap();
        for i in 0..30 {
            for j in -20..20 {
                assert_eq!(idap_eval(&r, i, j), idap_eval(&s, i, j));
            }
        }
    }

    #[test]
    fn decomposition_sizes() {
        let s = idap_from_orbit(&t(3, &[0, 2, 1]), &t(3, &[1, 1, 1]), 3).unwrap();
        let parts = decompose_triangle(&s, 7).unwrap();
        let mut sizes: Vec<usize> = parts.iter().map(|p| p.triangle.n).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2, 2, 2, 2, 2, 2, 3]);
        assert_eq!(parts[0].triangle.n, 3);
        let total: usize = parts.iter().map(|p| p.triangle.n * (p.triangle.n + 1) / 2).sum();
        assert_eq!(total, 28);
    }
}
