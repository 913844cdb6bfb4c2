//! Exhaustive and kernel-guided searches for balanced triangles.
//!
//! [`brute_force_balanced`] walks every first row of a given size in
//! lexicographic order, split into disjoint shards and optionally
//! checkpointed to a JSON state file. [`bset`] computes the sets of
//! `k`-tuples over `Z/2^u` whose antisymmetric interlaced progression has a
//! periodic orbit and balanced triangles at every level `2^v`, `v <= u`, by
//! lifting one level at a time.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binommat::{mmat, xmat};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::iap::{iap_window, IapSpec};
use crate::modlinalg::{left_kernel_gfp, lift_kernel_step};
use crate::modring::{ModTuple, Modulus};
use crate::triangle::{index_to_row, row_space_size, streaming_balanced, streaming_counts, LocalRule};

/// One shard of an exhaustive search over all first rows of size `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchJob {
    pub m: Modulus,
    pub n: usize,
    pub rule: LocalRule,
    pub shard_index: u64,
    pub shard_count: u64,
    /// Keep at most this many witnesses (unit-orbit representatives).
    pub max_witnesses: usize,
}

impl SearchJob {
    pub fn new(m: Modulus, n: usize, rule: LocalRule) -> Self {
        SearchJob { m, n, rule, shard_index: 0, shard_count: 1, max_witnesses: 64 }
    }

    pub fn with_shard(mut self, index: u64, count: u64) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::Precondition(format!("shard {index} of {count} is out of range")));
        }
        self.shard_index = index;
        self.shard_count = count;
        Ok(self)
    }

    /// Index range `[lo, hi)` of the rows handled by this shard.
    pub fn range(&self) -> Result<(u128, u128)> {
        let total = row_space_size(self.m.get(), self.n)
            .ok_or(Error::Budget { needed: u128::MAX, cap: u128::MAX })?;
        let (i, s) = (self.shard_index as u128, self.shard_count as u128);
        Ok((total * i / s, total * (i + 1) / s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub m: u64,
    pub n: usize,
    pub rule: LocalRule,
    pub examined: u128,
    pub balanced: u128,
    /// Number of balanced rows that are the minimum of their unit orbit.
    pub balanced_up_to_units: u128,
    /// Lexicographically first unit-orbit representatives.
    pub witnesses: Vec<ModTuple>,
    pub runtime_ms: u128,
}

impl SearchReport {
    fn empty(job: &SearchJob) -> Self {
        SearchReport {
            m: job.m.get(),
            n: job.n,
            rule: job.rule,
            examined: 0,
            balanced: 0,
            balanced_up_to_units: 0,
            witnesses: vec![],
            runtime_ms: 0,
        }
    }

    /// Combines reports of disjoint shards. Associative and order-independent
    /// apart from `runtime_ms`, which is summed.
    pub fn merge(mut self, other: SearchReport, max_witnesses: usize) -> Result<SearchReport> {
        if (self.m, self.n, self.rule) != (other.m, other.n, other.rule) {
            return Err(Error::Precondition("cannot merge reports of different searches".into()));
        }
        self.examined += other.examined;
        self.balanced += other.balanced;
        self.balanced_up_to_units += other.balanced_up_to_units;
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by(|a, b| a.v.cmp(&b.v));
        self.witnesses.dedup();
        self.witnesses.truncate(max_witnesses);
        self.runtime_ms += other.runtime_ms;
        Ok(self)
    }
}

/// Resumable progress of one shard.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub job: SearchJob,
    /// First index not yet examined.
    pub next: u128,
    pub report: SearchReport,
}

/// Whether `row` is lexicographically minimal among its unit multiples.
fn is_unit_minimal(m: Modulus, row: &[u64], units: &[u64]) -> bool {
    units.iter().all(|&u| {
        let scaled = row.iter().map(|&x| m.mul(u, x));
        scaled.cmp(row.iter().copied()) != std::cmp::Ordering::Less
    })
}

fn scan(job: &SearchJob, lo: u128, hi: u128, units: &[u64]) -> SearchReport {
    const CHUNK: u128 = 1 << 14;
    let m = job.m;
    let n_chunks = (hi - lo).div_ceil(CHUNK);
    let parts: Vec<SearchReport> = (0..n_chunks as u64)
        .into_par_iter()
        .map(|c| {
            let mut rep = SearchReport::empty(job);
            let a = lo + c as u128 * CHUNK;
            let b = (a + CHUNK).min(hi);
            let mut row = vec![0u64; job.n];
            for idx in a..b {
                index_to_row(m.get(), job.n, idx, &mut row);
                rep.examined += 1;
                if streaming_balanced(m, &row, job.rule) {
                    rep.balanced += 1;
                    if is_unit_minimal(m, &row, units) {
                        rep.balanced_up_to_units += 1;
                        if rep.witnesses.len() < job.max_witnesses {
                            rep.witnesses.push(ModTuple { m, v: row.clone() });
                        }
                    }
                }
            }
            rep
        })
        .collect();
    parts
        .into_iter()
        .try_fold(SearchReport::empty(job), |acc, r| acc.merge(r, job.max_witnesses))
        .expect("same job")
}

/// Counts the balanced triangles of size `n` among the rows of one shard.
///
/// When `m` does not divide `n(n+1)/2` no triangle can be balanced and the
/// rows are not visited. With a `checkpoint` path, progress is saved after
/// every `checkpoint_every` rows and an existing file for the same job is
/// resumed from.
pub fn brute_force_balanced(
    job: &SearchJob,
    budget: &Budget,
    checkpoint: Option<&Path>,
    checkpoint_every: u128,
) -> Result<SearchReport> {
    let start = Instant::now();
    let (lo, hi) = job.range()?;
    let cells = (job.n * (job.n + 1) / 2) as u128;
    budget.check((hi - lo).saturating_mul(cells.max(1)))?;
    let mut state = Checkpoint { job: job.clone(), next: lo, report: SearchReport::empty(job) };
    if let Some(path) = checkpoint {
        if path.exists() {
            let saved: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if saved.job != *job {
                return Err(Error::Precondition(format!(
                    "checkpoint {} belongs to a different job",
                    path.display()
                )));
            }
            state = saved;
        }
    }
    if cells % job.m.get() as u128 != 0 {
        state.report.examined = hi - lo;
        state.next = hi;
    }
    let units = job.m.units();
    let step = if checkpoint.is_some() { checkpoint_every.max(1) } else { hi - lo + 1 };
    while state.next < hi {
        let b = (state.next + step).min(hi);
        let part = scan(job, state.next, b, &units);
        state.report = state.report.merge(part, job.max_witnesses)?;
        state.next = b;
        if let Some(path) = checkpoint {
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, serde_json::to_string(&state)?)?;
            std::fs::rename(&tmp, path)?;
        }
    }
    state.report.runtime_ms = start.elapsed().as_millis();
    Ok(state.report)
}

/// Runs all `shards` shards and merges them.
pub fn brute_force_sharded(
    m: Modulus,
    n: usize,
    rule: LocalRule,
    shards: u64,
    budget: &Budget,
) -> Result<SearchReport> {
    let mut total: Option<SearchReport> = None;
    for i in 0..shards {
        let job = SearchJob::new(m, n, rule).with_shard(i, shards)?;
        let rep = brute_force_balanced(&job, budget, None, 0)?;
        total = Some(match total {
            None => rep,
            Some(t) => t.merge(rep, job.max_witnesses)?,
        });
    }
    total.ok_or_else(|| Error::Precondition("at least one shard is required".into()))
}

/// Number of orbits of `elements` under multiplication by units of `Z/m`.
pub fn unit_orbit_count(elements: &[ModTuple], m: Modulus) -> usize {
    let units = m.units();
    let mut canon: Vec<Vec<u64>> = elements
        .iter()
        .map(|t| {
            units
                .iter()
                .map(|&u| t.v.iter().map(|&x| m.mul(u, x)).collect::<Vec<u64>>())
                .min()
                .unwrap_or_else(|| t.v.clone())
        })
        .collect();
    canon.sort();
    canon.dedup();
    canon.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsetLevel {
    pub u: u32,
    /// Lifted candidates examined at this level.
    pub candidates: usize,
    pub total: usize,
    pub up_to_units: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsetReport {
    pub k: usize,
    pub u: u32,
    pub levels: Vec<BsetLevel>,
    pub elements: Vec<ModTuple>,
    pub runtime_ms: u128,
}

impl BsetReport {
    pub fn total(&self) -> usize {
        self.levels.last().map_or(0, |l| l.total)
    }

    pub fn up_to_units(&self) -> usize {
        self.levels.last().map_or(0, |l| l.up_to_units)
    }
}

/// Whether the triangles on the first `L` and `2L` terms of
/// `<A, A X_k>` are balanced, with `L = m k`.
fn both_balanced(a: &ModTuple, x: &crate::matrix::ModMatrix) -> bool {
    let m = a.m;
    let k = a.len();
    let len = m.get() as usize * k;
    let d = x.tuple_mul(a).expect("shape");
    let spec = IapSpec::new(a.clone(), d).expect("same length");
    let row = iap_window(&spec, 0, 2 * len as i64 - 1).expect("window");
    streaming_balanced(m, &row.v[..len], LocalRule::Negated)
        && streaming_balanced(m, &row.v, LocalRule::Negated)
}

/// `B_k` at levels `2^0, ..., 2^u`. The level-`2^0` set is the single empty
/// residue tuple; level 1 filters `Lker_2 M_k^{2k}`; each further level lifts
/// every survivor through `Lker M_k^{2^v k}` and filters by balance.
pub fn bset(k: usize, u: u32, budget: &Budget) -> Result<BsetReport> {
    let start = Instant::now();
    if k == 0 || k % 2 == 1 {
        return Err(Error::Precondition(format!("k must be even and positive, got {k}")));
    }
    let one = Modulus::new(1)?;
    let mut current = vec![ModTuple::zeros(one, k)];
    let mut levels = vec![BsetLevel { u: 0, candidates: 1, total: 1, up_to_units: 1 }];
    for v in 1..=u {
        let mv = Modulus::new(1u64 << v)?;
        let mat = mmat(k, (1u64 << v) * k as u64, mv);
        let lifted: Vec<ModTuple> = if v == 1 {
            let basis = left_kernel_gfp(&mat, 2)?;
            basis.span(k, budget.max_cells)?
        } else {
            let pieces: Result<Vec<Vec<ModTuple>>> = current
                .par_iter()
                .map(|a| {
                    let prev = ModTuple { m: Modulus::new(1u64 << (v - 1))?, v: a.v.clone() };
                    lift_kernel_step(&mat, 2, v - 1, &prev)?.enumerate(budget.max_cells)
                })
                .collect();
            pieces?.into_iter().flatten().collect()
        };
        budget.check(lifted.len() as u128 * ((2 * (1u128 << v) * k as u128).pow(2)))?;
        let x = xmat(k, mv);
        let mut next: Vec<ModTuple> = lifted.par_iter().filter(|a| both_balanced(a, &x)).cloned().collect();
        next.sort_by(|a, b| a.v.cmp(&b.v));
        levels.push(BsetLevel {
            u: v,
            candidates: lifted.len(),
            total: next.len(),
            up_to_units: unit_orbit_count(&next, mv),
        });
        current = next;
    }
    Ok(BsetReport { k, u, levels, elements: current, runtime_ms: start.elapsed().as_millis() })
}

/// Triangle multiplicity of a row under the given rule; re-verification
/// helper for reported witnesses.
pub fn witness_counts(w: &ModTuple, rule: LocalRule) -> Vec<u64> {
    streaming_counts(w.m, &w.v, rule)
}

/// `φ(m)` divides every positive balanced count, since unit scaling acts
/// freely on non-zero rows.
pub fn divisible_by_phi(report: &SearchReport) -> bool {
    let phi = Modulus::new(report.m).map(|m| m.phi()).unwrap_or(1) as u128;
    report.balanced == 0 || report.balanced % phi == 0
}
