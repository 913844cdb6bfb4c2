//! Triangles generated from a first row by a local rule, their multiplicity
//! functions, the dihedral action on negated-rule triangles, exhaustive
//! enumeration and periodic orbit windows.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::modring::{self, is_antisymmetric, ModTuple, Modulus, MultiplicityMap};

/// How each cell is obtained from the two cells above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalRule {
    /// `a[i][j] = a[i-1][j] + a[i-1][j+1]` (the Steinhaus/Pascal rule).
    Pascal,
    /// `a[i][j] = -a[i-1][j] - a[i-1][j+1]`.
    Negated,
}

impl FromStr for LocalRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pascal" => Ok(LocalRule::Pascal),
            "negated" => Ok(LocalRule::Negated),
            other => Err(Error::Parse(format!("unknown rule {other:?}"))),
        }
    }
}

impl fmt::Display for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalRule::Pascal => "pascal",
            LocalRule::Negated => "negated",
        })
    }
}

impl LocalRule {
    #[inline]
    pub fn apply(self, m: Modulus, a: u64, b: u64) -> u64 {
        let s = m.add(a, b);
        match self {
            LocalRule::Pascal => s,
            LocalRule::Negated => m.neg(s),
        }
    }
}

/// One derivation step; a sequence of length `<= 1` derives to the empty one.
pub fn derive(s: &ModTuple, rule: LocalRule) -> ModTuple {
    let m = s.m;
    ModTuple { m, v: s.v.windows(2).map(|w| rule.apply(m, w[0], w[1])).collect() }
}

/// Derivation of the periodic extension of `period`, returned as a period.
pub fn derive_periodic(period: &ModTuple, rule: LocalRule) -> ModTuple {
    let m = period.m;
    let p = period.len();
    ModTuple { m, v: (0..p).map(|j| rule.apply(m, period.v[j], period.v[(j + 1) % p])).collect() }
}

/// A down-pointing triangle: row `i` has `n - i` cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub m: Modulus,
    pub rule: LocalRule,
    pub rows: Vec<ModTuple>,
}

impl Triangle {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn cell_count(&self) -> usize {
        let n = self.size();
        n * (n + 1) / 2
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i].v[j]
    }

    /// Builds a triangle of the given size from a cell function `(i, j)`.
    /// The result is not checked against the rule.
    fn from_cells(m: Modulus, rule: LocalRule, n: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        let rows = (0..n).map(|i| ModTuple { m, v: (0..n - i).map(|j| f(i, j)).collect() }).collect();
        Triangle { m, rule, rows }
    }

    /// Whether every row is the derivative of the row above it.
    pub fn is_consistent(&self) -> bool {
        self.rows.windows(2).all(|w| derive(&w[0], self.rule) == w[1])
    }

    pub fn scale(&self, lambda: i64) -> Triangle {
        Triangle {
            m: self.m,
            rule: self.rule,
            rows: self.rows.iter().map(|r| modring::tuple_scale(lambda, r)).collect(),
        }
    }

    /// Centred rows of digits for `m <= 10`, space-separated residues otherwise.
    pub fn render_text(&self) -> String {
        let digits = self.m.get() <= 10;
        let mut out = String::new();
        for (i, row) in self.rows.iter().enumerate() {
            if digits {
                out.push_str(&" ".repeat(i));
            }
            let cells: Vec<String> = row.v.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Plain PGM (P2) raster; pixel value is `residue * floor(255 / (m - 1))`.
    pub fn render_pgm(&self) -> String {
        let n = self.size();
        let m = self.m.get();
        let step = if m > 1 { 255 / (m - 1) } else { 0 };
        let width = 2 * n.max(1) - 1;
        let mut out = format!("P2\n{} {}\n255\n", width, n);
        for (i, row) in self.rows.iter().enumerate() {
            let mut line = vec![255u64; width];
            for (j, &x) in row.v.iter().enumerate() {
                line[i + 2 * j] = x * step;
            }
            let cells: Vec<String> = line.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn build_triangle(first_row: &ModTuple, rule: LocalRule) -> Triangle {
    let mut rows = Vec::with_capacity(first_row.len());
    let mut cur = first_row.clone();
    while !cur.is_empty() {
        let next = derive(&cur, rule);
        rows.push(cur);
        cur = next;
    }
    Triangle { m: first_row.m, rule, rows }
}

pub fn triangle_multiplicity(t: &Triangle) -> MultiplicityMap {
    let mut mm = MultiplicityMap::new(t.m);
    for row in &t.rows {
        for &x in &row.v {
            mm.counts[x as usize] += 1;
        }
    }
    mm
}

pub fn triangle_balanced(t: &Triangle) -> bool {
    modring::is_balanced(&triangle_multiplicity(t))
}

/// Multiplicity function of the triangle generated by `first_row`, computed
/// row by row in place without retaining the triangle.
pub fn streaming_counts(m: Modulus, first_row: &[u64], rule: LocalRule) -> Vec<u64> {
    let mut counts = vec![0u64; m.get() as usize];
    let mut row = first_row.to_vec();
    while !row.is_empty() {
        for &x in &row {
            counts[x as usize] += 1;
        }
        for j in 0..row.len() - 1 {
            row[j] = rule.apply(m, row[j], row[j + 1]);
        }
        row.pop();
    }
    counts
}

/// Balance test that aborts as soon as a residue exceeds its share.
pub fn streaming_balanced(m: Modulus, first_row: &[u64], rule: LocalRule) -> bool {
    let n = first_row.len() as u64;
    let cells = n * (n + 1) / 2;
    if cells % m.get() != 0 {
        return false;
    }
    let share = cells / m.get();
    let mut counts = vec![0u64; m.get() as usize];
    let mut row = first_row.to_vec();
    while !row.is_empty() {
        for &x in &row {
            let c = &mut counts[x as usize];
            *c += 1;
            if *c > share {
                return false;
            }
        }
        for j in 0..row.len() - 1 {
            row[j] = rule.apply(m, row[j], row[j + 1]);
        }
        row.pop();
    }
    true
}

/// Rotation `(i, j) -> a[j][n-i-j-1]`; only defined for the negated rule.
pub fn rotate120(t: &Triangle) -> Result<Triangle> {
    if t.rule != LocalRule::Negated {
        return Err(Error::NotClosedUnderD3);
    }
    let n = t.size();
    Ok(Triangle::from_cells(t.m, t.rule, n, |i, j| t.get(j, n - i - j - 1)))
}

/// Reflection `(i, j) -> a[i][n-i-j-1]`; only defined for the negated rule.
pub fn reflect_h(t: &Triangle) -> Result<Triangle> {
    if t.rule != LocalRule::Negated {
        return Err(Error::NotClosedUnderD3);
    }
    let n = t.size();
    Ok(Triangle::from_cells(t.m, t.rule, n, |i, j| t.get(i, n - i - j - 1)))
}

/// The six images `id, r, r^2, h, hr, hr^2` of a negated-rule triangle.
pub fn d3_orbit(t: &Triangle) -> Result<Vec<Triangle>> {
    let r1 = rotate120(t)?;
    let r2 = rotate120(&r1)?;
    let h0 = reflect_h(t)?;
    let h1 = reflect_h(&r1)?;
    let h2 = reflect_h(&r2)?;
    Ok(vec![t.clone(), r1, r2, h0, h1, h2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    None,
    Horizontal,
    Rotational,
    Dihedral,
}

pub fn classify_symmetry(t: &Triangle) -> Result<Symmetry> {
    let h = reflect_h(t)? == *t;
    let r = rotate120(t)? == *t;
    Ok(match (h, r) {
        (true, true) => Symmetry::Dihedral,
        (true, false) => Symmetry::Horizontal,
        (false, true) => Symmetry::Rotational,
        (false, false) => Symmetry::None,
    })
}

/// For an antisymmetric row, the Pascal triangle is balanced exactly when the
/// negated triangle is. Both sides are computed; a disagreement is reported
/// as a contradiction.
pub fn steinhaus_equiv_check(s: &ModTuple) -> Result<bool> {
    if !is_antisymmetric(s) {
        return Err(Error::NotAntisymmetric);
    }
    let pascal = modring::is_balanced(&MultiplicityMap {
        m: s.m,
        counts: streaming_counts(s.m, &s.v, LocalRule::Pascal),
    });
    let negated = modring::is_balanced(&MultiplicityMap {
        m: s.m,
        counts: streaming_counts(s.m, &s.v, LocalRule::Negated),
    });
    if pascal != negated {
        return Err(Error::Contradiction(format!(
            "antisymmetric row {s}: pascal balanced = {pascal}, negated balanced = {negated}"
        )));
    }
    Ok(pascal)
}

/// Decode index `idx` in `[0, m^n)` as a base-`m` row, most significant digit
/// first, so that increasing indices give lexicographically increasing rows.
pub fn index_to_row(m: u64, n: usize, mut idx: u128, row: &mut [u64]) {
    for j in (0..n).rev() {
        row[j] = (idx % m as u128) as u64;
        idx /= m as u128;
    }
}

/// `m^n` as a wide integer, or `None` on overflow.
pub fn row_space_size(m: u64, n: usize) -> Option<u128> {
    (m as u128).checked_pow(n as u32)
}

/// Visits every triangle of size `n` over Z/mZ (all `m^n` first rows) and
/// folds per-worker accumulators. The visitor sees the first row and the
/// multiplicity counts of its triangle. The fold must be order-independent
/// for the aggregate to be deterministic.
pub fn enumerate_triangles<A, I, F, R>(
    m: Modulus,
    n: usize,
    rule: LocalRule,
    budget: &Budget,
    identity: I,
    fold: F,
    reduce: R,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &[u64], &[u64]) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let total = row_space_size(m.get(), n).ok_or(Error::Budget { needed: u128::MAX, cap: budget.max_cells })?;
    budget.check(total.saturating_mul((n * (n + 1) / 2).max(1) as u128))?;
    let total = total as u64;
    let chunk = 4096u64;
    let chunks = total.div_ceil(chunk);
    let result = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = identity();
            let mut row = vec![0u64; n];
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            for idx in lo..hi {
                index_to_row(m.get(), n, idx as u128, &mut row);
                let counts = streaming_counts(m, &row, rule);
                acc = fold(acc, &row, &counts);
            }
            acc
        })
        .reduce(&identity, &reduce);
    Ok(result)
}

/// Total multiplicity of each residue over all `m^n` triangles of size `n`.
pub fn total_counts(m: Modulus, n: usize, rule: LocalRule, budget: &Budget) -> Result<Vec<u64>> {
    let mlen = m.get() as usize;
    enumerate_triangles(
        m,
        n,
        rule,
        budget,
        || vec![0u64; mlen],
        |mut acc, _row, counts| {
            acc.iter_mut().zip(counts).for_each(|(a, c)| *a += c);
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// `q` consecutive rows of a horizontally periodic orbit, each stored as its
/// first period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWindow {
    pub m: Modulus,
    pub rule: LocalRule,
    pub first_period: ModTuple,
    pub rows: Vec<ModTuple>,
}

pub fn orbit_window(period: &ModTuple, rule: LocalRule, q: usize) -> OrbitWindow {
    let mut rows = Vec::with_capacity(q);
    let mut cur = period.clone();
    for _ in 0..q {
        let next = derive_periodic(&cur, rule);
        rows.push(cur);
        cur = next;
    }
    OrbitWindow { m: period.m, rule, first_period: period.clone(), rows }
}

/// Whether deriving the periodic sequence `p2` times returns it unchanged.
pub fn orbit_is_periodic(period: &ModTuple, rule: LocalRule, p2: usize) -> Result<bool> {
    if p2 == 0 {
        return Err(Error::Precondition("vertical period must be at least 1".into()));
    }
    let mut cur = period.clone();
    for _ in 0..p2 {
        cur = derive_periodic(&cur, rule);
    }
    Ok(cur == *period)
}
