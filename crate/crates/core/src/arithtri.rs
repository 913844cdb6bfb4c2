//! Arithmetic triangles `AT(a, d1, d2, n)`: cell `(i, j)` with `i + j < n`
//! holds `a + i*d2 + j*d1`. Rows have difference `d1`, diagonals `d2` and
//! anti-diagonals `d2 - d1`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{is_balanced, Modulus, MultiplicityMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArithTriangle {
    pub m: Modulus,
    pub a: u64,
    pub d1: u64,
    pub d2: u64,
    pub n: usize,
}

impl ArithTriangle {
    pub fn new(m: Modulus, a: i64, d1: i64, d2: i64, n: usize) -> Self {
        ArithTriangle { m, a: m.reduce_i64(a), d1: m.reduce_i64(d1), d2: m.reduce_i64(d2), n }
    }

    pub fn cell(&self, i: usize, j: usize) -> u64 {
        let m = self.m;
        let row = m.add(self.a, m.mul(m.reduce(i as u64), self.d2));
        m.add(row, m.mul(m.reduce(j as u64), self.d1))
    }

    /// The triangle with its first row removed: `AT(a + d2, d1, d2, n - 1)`.
    pub fn without_first_row(&self) -> Self {
        ArithTriangle { a: self.m.add(self.a, self.d2), n: self.n.saturating_sub(1), ..*self }
    }

    /// The triangle with its first diagonal removed: `AT(a + d1, d1, d2, n - 1)`.
    pub fn without_first_diagonal(&self) -> Self {
        ArithTriangle { a: self.m.add(self.a, self.d1), n: self.n.saturating_sub(1), ..*self }
    }
}

/// Adds the `len` terms `start, start + d, ...` to `counts`, walking the
/// cycle of `d` once and distributing whole laps arithmetically.
fn add_progression(m: Modulus, counts: &mut [u64], start: u64, d: u64, len: u64) {
    if len == 0 {
        return;
    }
    let cycle = m.get() / d.gcd(&m.get()).max(1);
    let cycle = if d == 0 { 1 } else { cycle };
    let (laps, rest) = (len / cycle, len % cycle);
    let mut x = start;
    for t in 0..cycle.min(len) {
        counts[x as usize] += laps + (t < rest) as u64;
        x = m.add(x, d);
    }
}

/// Multiplicity of the arithmetic progression `AP(a, d, n)`.
pub fn ap_multiplicity(m: Modulus, a: u64, d: u64, n: u64) -> MultiplicityMap {
    let mut counts = vec![0u64; m.get() as usize];
    add_progression(m, &mut counts, m.reduce(a), m.reduce(d), n);
    MultiplicityMap { m, counts }
}

pub fn at_multiplicity(t: &ArithTriangle) -> MultiplicityMap {
    let m = t.m;
    let mut counts = vec![0u64; m.get() as usize];
    for i in 0..t.n {
        add_progression(m, &mut counts, t.cell(i, 0), t.d1, (t.n - i) as u64);
    }
    MultiplicityMap { m, counts }
}

fn gcd_m(x: u64, m: Modulus) -> u64 {
    x.gcd(&m.get())
}

/// Checks `mf(x + gcd(d2 - d1, m)) = mf(x)` for every `x`, under the
/// hypotheses `gcd(d1, m) = gcd(d2, m)` and `n = 0 or -1 (mod m / gcd(d1, m))`.
/// A `false` result would contradict the shift theorem.
pub fn shift_invariance_holds(t: &ArithTriangle) -> Result<bool> {
    let m = t.m;
    let g1 = gcd_m(t.d1, m);
    let g2 = gcd_m(t.d2, m);
    if g1 != g2 {
        return Err(Error::Precondition(format!(
            "gcd(d1, m) = {g1} differs from gcd(d2, m) = {g2}"
        )));
    }
    let q = m.get() / g1;
    let r = t.n as u64 % q;
    if r != 0 && r != q - 1 {
        return Err(Error::Precondition(format!("size {} is not 0 or -1 modulo {q}", t.n)));
    }
    let shift = gcd_m(m.sub(t.d2, t.d1), m);
    Ok(at_multiplicity(t).is_shift_invariant(shift))
}

/// For odd `m`, `AT(a, d1, d2, n)` with `d1`, `d2`, `d2 - d1` units and
/// `n = 0 or -1 (mod m)` is balanced. Verifies the hypotheses, computes the
/// multiplicity and reports a contradiction if it is not constant.
pub fn at_balanced_odd(t: &ArithTriangle) -> Result<bool> {
    let m = t.m;
    if m.get() % 2 == 0 {
        return Err(Error::Precondition(format!(
            "no balanced arithmetic triangle exists modulo even m = {m}: d1, d2 and d2 - d1 cannot all be units"
        )));
    }
    for (name, d) in [("d1", t.d1), ("d2", t.d2), ("d2 - d1", m.sub(t.d2, t.d1))] {
        if !m.is_unit(d) {
            return Err(Error::Precondition(format!("{name} = {d} is not a unit modulo {m}")));
        }
    }
    let r = t.n as u64 % m.get();
    if r != 0 && r != m.get() - 1 {
        return Err(Error::Precondition(format!("size {} is not 0 or -1 modulo {m}", t.n)));
    }
    if !is_balanced(&at_multiplicity(t)) {
        return Err(Error::Contradiction(format!("{t:?} is not balanced")));
    }
    Ok(true)
}

/// Contrapositive scan: a balanced arithmetic triangle (with `m >= 2`, `n >= 2`)
/// must have `d1`, `d2` and `d2 - d1` all invertible. Returns `false` only for
/// a counterexample.
pub fn invertibility_necessity_check(t: &ArithTriangle) -> bool {
    let m = t.m;
    if m.get() < 2 || t.n < 2 || !is_balanced(&at_multiplicity(t)) {
        return true;
    }
    m.is_unit(t.d1) && m.is_unit(t.d2) && m.is_unit(m.sub(t.d2, t.d1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(x: u64) -> Modulus {
        Modulus::new(x).unwrap()
    }

    #[test]
    fn small_examples() {
        let t = ArithTriangle::new(m(5), 0, 2, 3, 5);
        assert_eq!(at_multiplicity(&t).counts, vec![3; 5]);
        assert!(at_balanced_odd(&t).unwrap());
        assert!(at_balanced_odd(&ArithTriangle::new(m(5), 0, 2, 3, 4)).unwrap());
        assert_eq!(at_multiplicity(&ArithTriangle::new(m(5), 0, 2, 3, 0)).cardinality(), 0);
        let c = at_multiplicity(&ArithTriangle::new(m(4), 0, 0, 0, 6));
        assert_eq!(c.counts, vec![21, 0, 0, 0]);
    }

    #[test]
    fn even_modulus_rejected() {
        let e = at_balanced_odd(&ArithTriangle::new(m(4), 0, 1, 3, 4)).unwrap_err();
        assert!(e.to_string().contains("no balanced arithmetic triangle"));
    }

    #[test]
    fn brute_force_counts_agree() {
        let t = ArithTriangle::new(m(12), 5, 4, 9, 17);
        let mut counts = vec![0u64; 12];
        for i in 0..17 {
            for j in 0..17 - i {
                counts[((5 + 9 * i + 4 * j) % 12) as usize] += 1;
            }
        }
        assert_eq!(at_multiplicity(&t).counts, counts);
    }

    #[test]
    fn shift_theorem_cases() {
        // Differences 2^{u-2} and 3 * 2^{u-2} modulo 2^u, size a multiple of 4.
        for u in 2..7u32 {
            let q = 1i64 << (u - 2);
            for lam in 1..4 {
                let t = ArithTriangle::new(m(1 << u), 3, q, 3 * q, 4 * lam);
                assert!(shift_invariance_holds(&t).unwrap());
            }
        }
        assert!(shift_invariance_holds(&ArithTriangle::new(m(9), 1, 3, 3, 3)).unwrap());
        assert!(shift_invariance_holds(&ArithTriangle::new(m(8), 0, 2, 1, 4)).is_err());
    }

    #[test]
    fn units_are_necessary_mod_9() {
        for a in 0..9 {
            for d1 in 0..9 {
                for d2 in 0..9 {
                    assert!(invertibility_necessity_check(&ArithTriangle::new(m(9), a, d1, d2, 9)));
                }
            }
        }
    }
}
