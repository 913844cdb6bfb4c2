//! Linear algebra over GF(p) and left kernels over Z/p^uZ by successive
//! lifting.
//!
//! All kernels are *left* kernels: `Lker M = { v | v M = 0 }`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ModMatrix;
use crate::modring::{ModTuple, Modulus};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn field(p: u64) -> Result<Modulus> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Modulus::new(p)
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) for a != 0 mod p.
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Reduce a matrix to GF(p); the matrix modulus must be a multiple of `p`.
fn to_gfp(a: &ModMatrix, p: u64) -> Result<ModMatrix> {
    field(p)?;
    if a.m.get() == p {
        Ok(a.clone())
    } else {
        a.project(p)
    }
}

/// Row-reduces `rows` in place to reduced row echelon form over GF(p) and
/// returns the pivot columns. Pivots are taken leftmost-first, using the
/// lowest-index row that has a nonzero entry in the pivot column.
fn rref(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(r, pr);
        let inv = inv_mod_p(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - (f as u128 * y as u128 % p as u128) as u64) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_gfp(a: &ModMatrix, p: u64) -> Result<usize> {
    let a = to_gfp(a, p)?;
    let mut rows = a.to_rows();
    Ok(rref(&mut rows, p).len())
}

/// A spanning set of a left kernel. Over GF(p) the vectors are independent
/// and in reduced row echelon form, so equal kernels give equal bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub m: Modulus,
    pub vectors: Vec<ModTuple>,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// Every combination of the basis vectors (`p^dim` tuples), in
    /// lexicographic order of coefficient vectors. Fails if the count
    /// exceeds `cap`.
    pub fn span(&self, len: usize, cap: u128) -> Result<Vec<ModTuple>> {
        span_of(&self.vectors, self.m, len, cap)
    }
}

fn span_of(basis: &[ModTuple], m: Modulus, len: usize, cap: u128) -> Result<Vec<ModTuple>> {
    let p = m.get();
    let count = (p as u128)
        .checked_pow(basis.len() as u32)
        .filter(|&c| c <= cap)
        .ok_or(Error::Budget { needed: (p as u128).saturating_pow(basis.len() as u32), cap })?;
    let mut out = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0u64; basis.len()];
    for _ in 0..count {
        let mut v = vec![0u64; len];
        for (c, b) in coeffs.iter().zip(basis) {
            if *c != 0 {
                for (x, &y) in v.iter_mut().zip(&b.v) {
                    *x = m.add(*x, m.mul(*c, y));
                }
            }
        }
        out.push(ModTuple { m, v });
        for c in coeffs.iter_mut().rev() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    Ok(out)
}

/// Left kernel of `a` over GF(p), as a canonical (RREF) basis.
pub fn left_kernel_gfp(a: &ModMatrix, p: u64) -> Result<KernelBasis> {
    let f = field(p)?;
    let a = to_gfp(a, p)?;
    // v a = 0  <=>  a^T v^T = 0: the null space of the transpose.
    let mut rows = a.transpose().to_rows();
    let n = a.rows;
    let pivots = if rows.is_empty() { vec![] } else { rref(&mut rows, p) };
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(rows[i][free]);
        }
        basis.push(v);
    }
    if !basis.is_empty() {
        let r = rref(&mut basis, p).len();
        basis.truncate(r);
    }
    Ok(KernelBasis { m: f, vectors: basis.into_iter().map(|v| ModTuple { m: f, v }).collect() })
}

/// Whether two families of vectors span the same subspace of GF(p)^n.
pub fn span_equal(a: &[ModTuple], b: &[ModTuple], p: u64) -> Result<bool> {
    field(p)?;
    let rank = |vs: &[&ModTuple]| {
        let mut rows: Vec<Vec<u64>> = vs.iter().map(|t| t.v.iter().map(|x| x % p).collect()).collect();
        if rows.is_empty() {
            0
        } else {
            rref(&mut rows, p).len()
        }
    };
    let av: Vec<&ModTuple> = a.iter().collect();
    let bv: Vec<&ModTuple> = b.iter().collect();
    let both: Vec<&ModTuple> = a.iter().chain(b).collect();
    let (ra, rb, rab) = (rank(&av), rank(&bv), rank(&both));
    Ok(ra == rb && rb == rab)
}

/// One solution `y` of `y a = x` over GF(p), or `None`.
pub fn solve_left_gfp(a: &ModMatrix, x: &[u64], p: u64) -> Result<Option<Vec<u64>>> {
    field(p)?;
    let a = to_gfp(a, p)?;
    if x.len() != a.cols {
        return Err(Error::LengthMismatch(x.len(), a.cols));
    }
    let n = a.rows;
    // Augmented system a^T y^T = x^T.
    let t = a.transpose();
    let mut rows: Vec<Vec<u64>> = (0..t.rows)
        .map(|r| {
            let mut row = t.row(r).to_vec();
            row.push(x[r] % p);
            row
        })
        .collect();
    if rows.is_empty() {
        return Ok(Some(vec![0; n]));
    }
    let pivots = rref(&mut rows, p);
    if pivots.contains(&n) {
        return Ok(None);
    }
    let mut y = vec![0u64; n];
    for (i, &pc) in pivots.iter().enumerate() {
        y[pc] = rows[i][n];
    }
    Ok(Some(y))
}

/// The lifts of one solution from `Z/p^u` to `Z/p^{u+1}`: either empty, or
/// `base + p^u * span(translates)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedSolutionSet {
    pub m: Modulus,
    pub base: Option<ModTuple>,
    /// Basis of `Lker_p M` (entries mod p); each is scaled by `p^u` when added.
    pub translates: KernelBasis,
    pub shift: u64,
}

impl LiftedSolutionSet {
    pub fn is_empty(&self) -> bool {
        self.base.is_none()
    }

    pub fn size(&self) -> u128 {
        match self.base {
            None => 0,
            Some(_) => (self.translates.m.get() as u128).pow(self.translates.dimension() as u32),
        }
    }

    pub fn enumerate(&self, cap: u128) -> Result<Vec<ModTuple>> {
        let Some(base) = &self.base else { return Ok(vec![]) };
        let offsets = self.translates.span(base.len(), cap)?;
        Ok(offsets
            .into_iter()
            .map(|z| ModTuple {
                m: self.m,
                v: base.v.iter().zip(&z.v).map(|(&b, &c)| self.m.add(b, self.m.mul(self.shift, c))).collect(),
            })
            .collect())
    }
}

/// Given `a` with `a M = 0 (mod p^u)` where `M` is over `Z/p^{u+1}`, finds
/// every `a~` over `Z/p^{u+1}` with `a~ = a (mod p^u)` and `a~ M = 0`.
pub fn lift_kernel_step(mat: &ModMatrix, p: u64, u: u32, a: &ModTuple) -> Result<LiftedSolutionSet> {
    field(p)?;
    let pu = p.checked_pow(u).ok_or_else(|| Error::Precondition(format!("{p}^{u} overflows")))?;
    let pu1 = pu.checked_mul(p).ok_or_else(|| Error::Precondition(format!("{p}^{} overflows", u + 1)))?;
    if mat.m.get() != pu1 {
        return Err(Error::ModulusMismatch(mat.m.get(), pu1));
    }
    if a.m.get() != pu {
        return Err(Error::ModulusMismatch(a.m.get(), pu));
    }
    let lifted = ModTuple { m: mat.m, v: a.v.clone() };
    let prod = mat.vec_mul(&lifted.v)?;
    if prod.iter().any(|&x| x % pu != 0) {
        return Err(Error::Precondition(format!("tuple {a} is not in the kernel modulo {pu}")));
    }
    let x: Vec<u64> = prod.iter().map(|&v| v / pu).collect();
    let mp = mat.project(p)?;
    let translates = left_kernel_gfp(&mp, p)?;
    let base = solve_left_gfp(&mp, &x, p)?.map(|y| ModTuple {
        m: mat.m,
        v: lifted.v.iter().zip(&y).map(|(&b, &c)| mat.m.sub(b, mat.m.mul(pu, c))).collect(),
    });
    Ok(LiftedSolutionSet { m: mat.m, base, translates, shift: pu })
}

/// Every tuple over `Z/p^u` whose projection to `Z/p^v` lies in the left
/// kernel of `mfun(v)` (a matrix over `Z/p^v`) for each `v = 1..=u`.
///
/// Tuples that cannot be lifted to the next level are dropped. Fails with a
/// budget error naming the level when more than `cap` tuples accumulate.
pub fn left_kernel_prime_power<F>(mfun: F, p: u64, u: u32, cap: u128) -> Result<Vec<ModTuple>>
where
    F: Fn(u32) -> ModMatrix,
{
    field(p)?;
    if u == 0 {
        return Err(Error::Precondition("exponent must be at least 1".into()));
    }
    let m1 = mfun(1);
    let basis = left_kernel_gfp(&m1, p)?;
    let mut sols = basis.span(m1.rows, cap)?;
    for v in 1..u {
        let next = mfun(v + 1);
        let pv = p.pow(v);
        let pieces: Result<Vec<Vec<ModTuple>>> = sols
            .par_iter()
            .filter(|a| {
                // Only tuples already annihilated modulo p^v by the next
                // level's matrix admit lifts.
                let lifted = next.vec_mul(&a.v).expect("shape");
                lifted.iter().all(|&x| x % pv == 0)
            })
            .map(|a| lift_kernel_step(&next, p, v, a)?.enumerate(cap))
            .collect();
        let mut all: Vec<ModTuple> = pieces?.into_iter().flatten().collect();
        if all.len() as u128 > cap {
            return Err(Error::Budget { needed: all.len() as u128, cap });
        }
        all.sort_by(|a, b| a.v.cmp(&b.v));
        sols = all;
    }
    Ok(sols)
}
