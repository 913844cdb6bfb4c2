//! Dense matrices over Z/mZ and over the integers.
//!
//! Vectors act on the left: `v * M` with `v` a row vector, matching the
//! left-kernel conventions used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{ModTuple, Modulus};

/// Dense row-major matrix over Z/mZ with canonical entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMatrix {
    pub m: Modulus,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(m: Modulus, rows: usize, cols: usize) -> Self {
        ModMatrix { m, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(m: Modulus, n: usize) -> Self {
        let mut out = ModMatrix::zero(m, n, n);
        for i in 0..n {
            out.data[i * n + i] = m.reduce(1);
        }
        out
    }

    pub fn from_fn(m: Modulus, rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(m.reduce_i64(f(r, c)));
            }
        }
        ModMatrix { m, rows, cols, data }
    }

    pub fn from_rows(m: Modulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(ModMatrix::from_fn(m, rows.len(), cols, |r, c| rows[r][c]))
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = self.m.reduce(x);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_tuple(&self, r: usize) -> ModTuple {
        ModTuple { m: self.m, v: self.row(r).to_vec() }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_same(&self, o: &ModMatrix) -> Result<()> {
        if self.m != o.m {
            return Err(Error::ModulusMismatch(self.m.get(), o.m.get()));
        }
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &ModMatrix) -> Result<ModMatrix> {
        self.check_same(o)?;
        let m = self.m;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| m.add(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, o: &ModMatrix) -> Result<ModMatrix> {
        self.check_same(o)?;
        let m = self.m;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| m.sub(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, lambda: i64) -> ModMatrix {
        let m = self.m;
        self.with_data(self.data.iter().map(|&a| m.scale(lambda, a)).collect())
    }

    fn with_data(&self, data: Vec<u64>) -> ModMatrix {
        ModMatrix { m: self.m, rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, o: &ModMatrix) -> Result<ModMatrix> {
        if self.m != o.m {
            return Err(Error::ModulusMismatch(self.m.get(), o.m.get()));
        }
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let m = self.m.get() as u128;
        let mut data = vec![0u64; self.rows * o.cols];
        let mut acc = vec![0u128; o.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for t in 0..self.cols {
                let a = self.get(r, t) as u128;
                if a == 0 {
                    continue;
                }
                let orow = o.row(t);
                for (c, &b) in orow.iter().enumerate() {
                    acc[c] = (acc[c] + a * b as u128) % m;
                }
            }
            for c in 0..o.cols {
                data[r * o.cols + c] = acc[c] as u64;
            }
        }
        Ok(ModMatrix { m: self.m, rows: self.rows, cols: o.cols, data })
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch(v.len(), self.rows));
        }
        let m = self.m.get() as u128;
        let mut acc = vec![0u128; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, &b) in self.row(r).iter().enumerate() {
                acc[c] = (acc[c] + a as u128 * b as u128) % m;
            }
        }
        Ok(acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn tuple_mul(&self, v: &ModTuple) -> Result<ModTuple> {
        if v.m != self.m {
            return Err(Error::ModulusMismatch(v.m.get(), self.m.get()));
        }
        Ok(ModTuple { m: self.m, v: self.vec_mul(&v.v)? })
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut out = ModMatrix::zero(self.m, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// Reduce every entry into Z/dZ for a divisor `d` of the modulus.
    pub fn project(&self, d: u64) -> Result<ModMatrix> {
        if d == 0 || self.m.get() % d != 0 {
            return Err(Error::NotADivisor { d, m: self.m.get() });
        }
        let md = Modulus::new(d)?;
        Ok(ModMatrix {
            m: md,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x % d).collect(),
        })
    }

    /// Reinterpret the (canonical) entries modulo another modulus.
    pub fn reinterpret(&self, m: Modulus) -> ModMatrix {
        ModMatrix {
            m,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| m.reduce(x)).collect(),
        }
    }

    /// `[self | o]`.
    pub fn hstack(&self, o: &ModMatrix) -> Result<ModMatrix> {
        if self.rows != o.rows || self.m != o.m {
            return Err(Error::Dimension("hstack needs equal row counts and moduli".into()));
        }
        let cols = self.cols + o.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(o.row(r));
        }
        Ok(ModMatrix { m: self.m, rows: self.rows, cols, data })
    }

    /// `[self ; o]`.
    pub fn vstack(&self, o: &ModMatrix) -> Result<ModMatrix> {
        if self.cols != o.cols || self.m != o.m {
            return Err(Error::Dimension("vstack needs equal column counts and moduli".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Ok(ModMatrix { m: self.m, rows: self.rows + o.rows, cols: self.cols, data })
    }
}

/// Dense row-major integer matrix, used for the integral identities of the
/// 24-tuple families (e.g. the matrix whose left kernel is the set F).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_fn(n, n, |r, c| (r == c) as i64)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn add(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + o.get(r, c))
    }

    pub fn sub(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - o.get(r, c))
    }

    pub fn scale(&self, lambda: i64) -> IntMatrix {
        IntMatrix { data: self.data.iter().map(|&x| x * lambda).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        IntMatrix::from_fn(self.rows, o.cols, |r, c| {
            (0..self.cols).map(|t| self.get(r, t) * o.get(t, c)).sum()
        })
    }

    pub fn vec_mul(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols).map(|c| v.iter().enumerate().map(|(r, &a)| a * self.get(r, c)).sum()).collect()
    }

    pub fn hstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows);
        IntMatrix::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                o.get(r, c - self.cols)
            }
        })
    }

    pub fn to_mod(&self, m: Modulus) -> ModMatrix {
        ModMatrix::from_fn(m, self.rows, self.cols, |r, c| self.get(r, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let m = Modulus::new(7).unwrap();
        let a = ModMatrix::from_rows(m, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = ModMatrix::from_rows(m, &[vec![0, 1], vec![1, 0]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.to_rows(), vec![vec![2, 1], vec![4, 3]]);
        assert_eq!(a.vec_mul(&[1, 1]).unwrap(), vec![4, 6]);
        assert_eq!(a.transpose().to_rows(), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(a.mul(&ModMatrix::identity(m, 2)).unwrap(), a);
    }

    #[test]
    fn shape_errors() {
        let m = Modulus::new(5).unwrap();
        let a = ModMatrix::zero(m, 2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.vec_mul(&[1, 2, 3]).is_err());
        assert!(ModMatrix::from_rows(m, &[vec![1], vec![1, 2]]).is_err());
    }
}
