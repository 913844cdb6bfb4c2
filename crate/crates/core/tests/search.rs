//! Search machinery: lifting completeness, checkpoint resume and sharding.

use steinhaus_core::binommat::mmat;
use steinhaus_core::modlinalg::left_kernel_prime_power;
use steinhaus_core::search::{
    brute_force_balanced, brute_force_sharded, bset, divisible_by_phi, unit_orbit_count, witness_counts,
    Checkpoint, SearchJob,
};
use steinhaus_core::{Budget, LocalRule, ModTuple, Modulus};

fn m(x: u64) -> Modulus {
    Modulus::new(x).unwrap()
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("steinhaus-{}-{name}.json", std::process::id()))
}

#[test]
fn lifting_matches_brute_force() {
    let k = 6;
    let level = |v: u32| mmat(k, 24, m(1 << v));
    let lifted = left_kernel_prime_power(level, 2, 2, u128::MAX).unwrap();
    let m2 = level(1);
    let m4 = level(2);
    let mut brute = Vec::new();
    for idx in 0..4u64.pow(k as u32) {
        let v: Vec<u64> = (0..k).map(|j| (idx >> (2 * j)) & 3).collect();
        let low: Vec<u64> = v.iter().map(|x| x % 2).collect();
        let ok4 = m4.vec_mul(&v).unwrap().iter().all(|&x| x == 0);
        let ok2 = m2.vec_mul(&low).unwrap().iter().all(|&x| x == 0);
        if ok4 && ok2 {
            brute.push(ModTuple { m: m(4), v });
        }
    }
    brute.sort_by(|a, b| a.v.cmp(&b.v));
    assert!(!brute.is_empty());
    assert_eq!(lifted, brute);
}

#[test]
fn resume_from_checkpoint_matches_single_run() {
    let job = SearchJob::new(m(3), 8, LocalRule::Pascal);
    let full = brute_force_balanced(&job, &Budget::default(), None, 0).unwrap();
    // The first half of the rows is exactly shard 0 of 2.
    let half = brute_force_balanced(&job.clone().with_shard(0, 2).unwrap(), &Budget::default(), None, 0).unwrap();
    let path = temp_path("resume");
    let state = Checkpoint { job: job.clone(), next: 3u128.pow(8) / 2, report: half };
    std::fs::write(&path, serde_json::to_string(&state).unwrap()).unwrap();
    let resumed = brute_force_balanced(&job, &Budget::default(), Some(&path), 1000).unwrap();
    let saved: Checkpoint = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(saved.next, 3u128.pow(8));
    assert!(full.balanced > 0);
    assert_eq!(
        (resumed.examined, resumed.balanced, resumed.balanced_up_to_units, &resumed.witnesses),
        (full.examined, full.balanced, full.balanced_up_to_units, &full.witnesses)
    );
}

#[test]
fn checkpoint_of_other_job_rejected() {
    let path = temp_path("other");
    let job = SearchJob::new(m(3), 8, LocalRule::Pascal);
    brute_force_balanced(&job, &Budget::default(), Some(&path), 1000).unwrap();
    assert!(path.exists());
    let other = SearchJob::new(m(3), 8, LocalRule::Negated);
    assert!(brute_force_balanced(&other, &Budget::default(), Some(&path), 10).is_err());
    std::fs::remove_file(&path).ok();
}

#[test]
fn shard_counts_do_not_change_the_result() {
    let reports: Vec<_> = [1u64, 2, 3, 7]
        .iter()
        .map(|&s| brute_force_sharded(m(3), 8, LocalRule::Negated, s, &Budget::default()).unwrap())
        .collect();
    for r in &reports[1..] {
        assert_eq!(
            (r.examined, r.balanced, r.balanced_up_to_units, &r.witnesses),
            (reports[0].examined, reports[0].balanced, reports[0].balanced_up_to_units, &reports[0].witnesses)
        );
    }
}

#[test]
fn counts_respect_the_unit_action() {
    for (mv, n) in [(5u64, 4usize), (5, 5), (7, 6), (3, 8), (4, 7), (6, 8)] {
        let job = SearchJob { max_witnesses: usize::MAX, ..SearchJob::new(m(mv), n, LocalRule::Pascal) };
        let r = brute_force_balanced(&job, &Budget::default(), None, 0).unwrap();
        assert!(divisible_by_phi(&r), "m = {mv}, n = {n}: {} balanced", r.balanced);
        assert_eq!(r.witnesses.len() as u128, r.balanced_up_to_units);
        for w in &r.witnesses {
            let c = witness_counts(w, LocalRule::Pascal);
            assert!(c.iter().all(|&x| x == c[0]));
        }
    }
}

#[test]
fn empty_solution_sets() {
    for k in [2, 4, 8, 10, 16, 20, 22] {
        assert_eq!(bset(k, 1, &Budget::default()).unwrap().total(), 0, "k = {k}");
    }
    assert!(bset(7, 1, &Budget::default()).is_err());
}

#[test]
fn bset_level_two_orbits_are_free() {
    let r = bset(12, 2, &Budget::default()).unwrap();
    assert_eq!(r.total(), 172);
    assert_eq!(unit_orbit_count(&r.elements, m(4)), 86);
}
