//! Residue arithmetic over Z/mZ, residue tuples and multiplicity maps.
//!
//! Residues are always stored canonically in `[0, m)`. Signed literals are
//! normalised on construction, so `ModTuple::from_signed(5, &[-1])` holds `4`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus `m >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(m: u64) -> Result<Self> {
        Modulus::new(m)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            Err(Error::InvalidModulus(m))
        } else {
            Ok(Modulus(m))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    /// Multiply a residue by a signed integer scalar.
    #[inline]
    pub fn scale(self, lambda: i64, a: u64) -> u64 {
        self.mul(self.reduce_i64(lambda), a)
    }

    pub fn is_unit(self, x: u64) -> bool {
        x.gcd(&self.0) == 1
    }

    /// The unit group (Z/mZ)*, in increasing order. For `m = 1` this is `[0]`
    /// (the zero ring's only element is its own unit).
    pub fn units(self) -> Vec<u64> {
        if self.0 == 1 {
            return vec![0];
        }
        (1..self.0).filter(|&x| self.is_unit(x)).collect()
    }

    /// Euler's totient of `m`.
    pub fn phi(self) -> u64 {
        self.units().len() as u64
    }

    /// Signed representative in `(-m/2, m/2]`, handy for display.
    pub fn centered(self, x: u64) -> i64 {
        let m = self.0 as i64;
        let x = x as i64;
        if 2 * x > m {
            x - m
        } else {
            x
        }
    }

    fn check_divisor(self, d: u64) -> Result<Modulus> {
        if d == 0 || self.0 % d != 0 {
            return Err(Error::NotADivisor { d, m: self.0 });
        }
        Modulus::new(d)
    }
}

/// A finite sequence of residues sharing one modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModTuple")]
pub struct ModTuple {
    pub m: Modulus,
    pub v: Vec<u64>,
}

#[derive(Deserialize)]
struct RawModTuple {
    m: Modulus,
    v: Vec<u64>,
}

impl TryFrom<RawModTuple> for ModTuple {
    type Error = Error;
    fn try_from(raw: RawModTuple) -> Result<Self> {
        if let Some(&bad) = raw.v.iter().find(|&&x| x >= raw.m.get()) {
            return Err(Error::Parse(format!("{bad} is not a canonical residue mod {}", raw.m)));
        }
        Ok(ModTuple { m: raw.m, v: raw.v })
    }
}

impl ModTuple {
    /// Builds a tuple, reducing every entry modulo `m`.
    pub fn new(m: Modulus, values: impl IntoIterator<Item = u64>) -> Self {
        let v = values.into_iter().map(|x| m.reduce(x)).collect();
        ModTuple { m, v }
    }

    pub fn from_signed(m: Modulus, values: &[i64]) -> Self {
        ModTuple { m, v: values.iter().map(|&x| m.reduce_i64(x)).collect() }
    }

    pub fn zeros(m: Modulus, len: usize) -> Self {
        ModTuple { m, v: vec![0; len] }
    }

    pub fn empty(m: Modulus) -> Self {
        ModTuple { m, v: Vec::new() }
    }

    /// Parses the compact digit-string form (`"22033"`), valid for `m <= 10`.
    pub fn from_digits(m: Modulus, s: &str) -> Result<Self> {
        if m.get() > 10 {
            return Err(Error::Parse(format!("digit strings need m <= 10, got {m}")));
        }
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("not a digit: {c:?}")))? as u64;
            if d >= m.get() {
                return Err(Error::Parse(format!("digit {d} is not a residue mod {m}")));
            }
            v.push(d);
        }
        Ok(ModTuple { m, v })
    }

    /// The compact digit string, or `None` when `m > 10`.
    pub fn to_digits(&self) -> Option<String> {
        if self.m.get() > 10 {
            return None;
        }
        Some(self.v.iter().map(|&d| char::from(b'0' + d as u8)).collect())
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn modulus(&self) -> Modulus {
        self.m
    }

    pub fn values(&self) -> &[u64] {
        &self.v
    }

    fn check_same_shape(&self, other: &ModTuple) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m.get(), other.m.get()));
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(())
    }
}

impl fmt::Display for ModTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_digits() {
            Some(s) => write!(f, "{s}"),
            None => {
                let parts: Vec<String> = self.v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Canonical projection Z/mZ -> Z/dZ applied entrywise.
pub fn project(t: &ModTuple, d: u64) -> Result<ModTuple> {
    let md = t.m.check_divisor(d)?;
    Ok(ModTuple { m: md, v: t.v.iter().map(|&x| x % d).collect() })
}

pub fn tuple_add(a: &ModTuple, b: &ModTuple) -> Result<ModTuple> {
    a.check_same_shape(b)?;
    let m = a.m;
    Ok(ModTuple { m, v: a.v.iter().zip(&b.v).map(|(&x, &y)| m.add(x, y)).collect() })
}

pub fn tuple_sub(a: &ModTuple, b: &ModTuple) -> Result<ModTuple> {
    a.check_same_shape(b)?;
    let m = a.m;
    Ok(ModTuple { m, v: a.v.iter().zip(&b.v).map(|(&x, &y)| m.sub(x, y)).collect() })
}

pub fn tuple_scale(lambda: i64, a: &ModTuple) -> ModTuple {
    let m = a.m;
    ModTuple { m, v: a.v.iter().map(|&x| m.scale(lambda, x)).collect() }
}

pub fn concat(a: &ModTuple, b: &ModTuple) -> Result<ModTuple> {
    if a.m != b.m {
        return Err(Error::ModulusMismatch(a.m.get(), b.m.get()));
    }
    let mut v = a.v.clone();
    v.extend_from_slice(&b.v);
    Ok(ModTuple { m: a.m, v })
}

/// `a` repeated `lambda` times; `repeat(a, 0)` is empty.
pub fn repeat(a: &ModTuple, lambda: usize) -> ModTuple {
    ModTuple { m: a.m, v: a.v.repeat(lambda) }
}

/// `t[n-1-j] + t[j] == 0` for every `j`.
pub fn is_antisymmetric(t: &ModTuple) -> bool {
    let n = t.len();
    (0..n).all(|j| t.m.add(t.v[j], t.v[n - 1 - j]) == 0)
}

/// Sum of the entries modulo `m`.
pub fn sigma(t: &ModTuple) -> u64 {
    t.v.iter().fold(0, |acc, &x| t.m.add(acc, x))
}

/// The multiplicity function of a multiset over Z/mZ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityMap {
    pub m: Modulus,
    pub counts: Vec<u64>,
}

impl MultiplicityMap {
    pub fn new(m: Modulus) -> Self {
        MultiplicityMap { m, counts: vec![0; m.get() as usize] }
    }

    pub fn from_counts(m: Modulus, counts: Vec<u64>) -> Result<Self> {
        if counts.len() as u64 != m.get() {
            return Err(Error::LengthMismatch(counts.len(), m.get() as usize));
        }
        Ok(MultiplicityMap { m, counts })
    }

    pub fn of_values<'a>(m: Modulus, values: impl IntoIterator<Item = &'a u64>) -> Self {
        let mut mm = MultiplicityMap::new(m);
        for &x in values {
            mm.counts[(x % m.get()) as usize] += 1;
        }
        mm
    }

    pub fn count(&self, x: u64) -> u64 {
        self.counts[(x % self.m.get()) as usize]
    }

    /// `|M|`, the sum of all counts.
    pub fn cardinality(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &MultiplicityMap) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m.get(), other.m.get()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// The image multiset under the projection onto Z/dZ.
    pub fn project(&self, d: u64) -> Result<MultiplicityMap> {
        let md = self.m.check_divisor(d)?;
        let mut out = MultiplicityMap::new(md);
        for (x, &c) in self.counts.iter().enumerate() {
            out.counts[x % d as usize] += c;
        }
        Ok(out)
    }

    /// Whether `count(x + shift) == count(x)` for every `x`.
    pub fn is_shift_invariant(&self, shift: u64) -> bool {
        let m = self.m.get() as usize;
        let s = (shift % self.m.get()) as usize;
        (0..m).all(|x| self.counts[(x + s) % m] == self.counts[x])
    }
}

pub fn multiplicity(t: &ModTuple) -> MultiplicityMap {
    MultiplicityMap::of_values(t.m, &t.v)
}

/// Constant multiplicity function.
pub fn is_balanced(mm: &MultiplicityMap) -> bool {
    mm.counts.windows(2).all(|w| w[0] == w[1])
}

/// Every count is `q` or `q + 1` where `q = |M| div m`; when `m` divides
/// `|M|` this coincides with [`is_balanced`].
pub fn is_almost_balanced(mm: &MultiplicityMap) -> bool {
    let q = mm.cardinality() / mm.m.get();
    mm.counts.iter().all(|&c| c == q || c == q + 1)
}
