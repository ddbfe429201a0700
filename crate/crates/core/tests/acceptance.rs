//! Acceptance criteria, one test per criterion. Each prints a single
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`) before asserting.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;
use std::time::{Duration, Instant};

use qna_core::djclassifier::DjMode;
use qna_core::grover::{sweep_false_negative_bound, target_rng};
use qna_core::netmodel::{evolve, Edge};
use qna_core::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "[{}] AC-{id:02} {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "AC-{id:02} {name}: {detail}");
}

fn unit_snapshot(codes: Vec<u32>) -> Snapshot {
    Snapshot::new(0, Encoding::default(), codes).unwrap()
}

#[test]
fn ac01_worked_comparator_example() {
    let start = Instant::now();
    let enc = Encoding::default();
    let nu = enc.encode(0.85).unwrap();
    let c = enc.encode(0.5).unwrap();
    let fires = fire_bit(nu, c, enc.bit_width());
    let elapsed = start.elapsed();
    let ok = nu == 0b1010101 && c == 0b0110010 && fires && elapsed < Duration::from_millis(1);
    verdict(
        1,
        "worked example",
        ok,
        format!(
            "encode(0.85)={nu:07b} encode(0.5)={c:07b} fire_bit={} in {elapsed:?}",
            u8::from(fires)
        ),
    );
}

#[test]
fn ac02_encoding_capacity() {
    let enc = Encoding::default();
    let realizable: BTreeSet<u32> = (0..=10_000)
        .map(|i| enc.encode(i as f64 / 10_000.0).unwrap())
        .collect();
    let ok = enc.bit_width() == 7
        && enc.capacity() == 128
        && enc.realizable() == 101
        && realizable.len() == 101
        && realizable.iter().all(|&c| c <= 100);
    verdict(
        2,
        "encoding capacity",
        ok,
        format!(
            "n={} capacity={} realizable={} distinct codes hit={}",
            enc.bit_width(),
            enc.capacity(),
            enc.realizable(),
            realizable.len()
        ),
    );
}

#[test]
fn ac03_dj_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_constant: f64 = 0.0;
    let mut worst_balanced: f64 = 0.0;
    let mut balanced_runs = 0;
    for n in 1..=10u32 {
        for v in [false, true] {
            let r = run_dj(&TruthTable::from_fn(n, |_| v), DjMode::Exact, &mut rng).unwrap();
            worst_constant = worst_constant.max((r.p_zero - 1.0).abs());
        }
        let mut balanced = vec![
            TruthTable::from_fn(n, |x| x.count_ones() % 2 == 1),
            TruthTable::from_fn(n, |x| x >> (n - 1) & 1 == 1),
        ];
        for _ in 0..50 {
            let half = 1usize << (n - 1);
            let mut values: Vec<bool> = (0..2 * half).map(|i| i < half).collect();
            values.shuffle(&mut rng);
            balanced.push(TruthTable::new(n, values).unwrap());
        }
        for g in &balanced {
            assert_eq!(g.ones(), 1 << (n - 1));
            let r = run_dj(g, DjMode::Exact, &mut rng).unwrap();
            worst_balanced = worst_balanced.max(r.p_zero);
            balanced_runs += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_constant <= 1e-12 && worst_balanced <= 1e-12 && elapsed < Duration::from_secs(5);
    verdict(
        3,
        "DJ exactness",
        ok,
        format!(
            "max |p0-1| constant={worst_constant:.2e}, max p0 over {balanced_runs} balanced={worst_balanced:.2e}, {elapsed:?}"
        ),
    );
}

#[test]
fn ac04_grover_closed_form() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for q in 2..=10usize {
        let n = 1usize << q;
        for mu in [1usize, 2, 4] {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let marked: BTreeSet<usize> = idx[..mu].iter().copied().collect();
            let k_max = (FRAC_PI_4 * (n as f64 / mu as f64).sqrt()).ceil() as usize;
            let mut state = StateVector::new_uniform(q).unwrap();
            for k in 0..=k_max {
                if k > 0 {
                    state.apply_phase_flip(|x| marked.contains(&x));
                    state.apply_diffusion();
                }
                let mass: f64 = marked.iter().map(|&x| state.probability(x).unwrap()).sum();
                worst = worst.max((mass - success_probability(n, mu, k)).abs());
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-9 && elapsed < Duration::from_secs(30);
    verdict(
        4,
        "Grover closed form",
        ok,
        format!("{checks} (N, mu, k) points, max deviation {worst:.2e}, {elapsed:?}"),
    );
}

#[test]
fn ac05_iteration_schedule() {
    let a = iteration_count(128, 1).unwrap();
    let b = iteration_count(4, 1).unwrap();
    let full: Vec<usize> = [1usize, 2, 4, 128, 1024]
        .iter()
        .map(|&n| iteration_count(n, n).unwrap())
        .collect();
    let ok = a == 8 && b == 1 && full.iter().all(|&k| k == 0);
    verdict(
        5,
        "iteration schedule",
        ok,
        format!("k(128,1)={a} k(4,1)={b} k(N,N)={full:?}"),
    );
}

fn check_pair(snapshot: &Snapshot, threshold: u32, rng: &mut ChaCha8Rng) -> bool {
    let sets = realized_sets_classical(snapshot);
    let q = classify_quantum(snapshot, threshold, &sets, DjMode::Exact, rng).unwrap();
    let c = classify_classical(snapshot, threshold).unwrap();
    if q.verdict == Verdict::Sustaining {
        let bits = snapshot.bit_width();
        let any_fire = snapshot
            .codes()
            .iter()
            .any(|&s| fire_bit(s, threshold, bits));
        let any_silent = snapshot
            .codes()
            .iter()
            .any(|&s| !fire_bit(s, threshold, bits));
        assert!(
            any_fire && any_silent,
            "sustaining verdict without mixed firing"
        );
    }
    q.verdict == c.verdict
}

#[test]
fn ac06_backend_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut exhaustive = 0usize;
    let mut mismatches = 0usize;
    for n in 1..=4u32 {
        let space = 1u32 << n;
        let enc = Encoding::new(0.0, 1.0, space - 1).unwrap();
        for mask in 1u32..(1u32 << space) {
            let codes: Vec<u32> = (0..space).filter(|c| mask >> c & 1 == 1).collect();
            let snapshot = Snapshot::new(0, enc, codes).unwrap();
            for threshold in 0..space {
                exhaustive += 1;
                if !check_pair(&snapshot, threshold, &mut rng) {
                    mismatches += 1;
                }
            }
        }
    }

    let mut seen = BTreeSet::new();
    for _ in 0..500 {
        let threshold = rng.gen_range(0..=100u32);
        let m = rng.gen_range(1..=64usize);
        // bias a third of the fixtures toward each regime so all verdicts occur
        let codes: Vec<u32> = match rng.gen_range(0..3) {
            0 if threshold > 0 => (0..m).map(|_| rng.gen_range(0..threshold)).collect(),
            1 => (0..m).map(|_| rng.gen_range(threshold..=100)).collect(),
            _ => (0..m).map(|_| rng.gen_range(0..=100)).collect(),
        };
        let snapshot = unit_snapshot(codes);
        seen.insert(classify_classical(&snapshot, threshold).unwrap().verdict);
        if !check_pair(&snapshot, threshold, &mut rng) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && seen.len() == 3 && elapsed < Duration::from_secs(60);
    verdict(
        6,
        "backend equivalence",
        ok,
        format!(
            "{exhaustive} exhaustive + 500 random cases, {mismatches} mismatches, verdicts seen {seen:?}, {elapsed:?}"
        ),
    );
}

fn membership_fixtures() -> Vec<Snapshot> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..100)
        .map(|_| {
            let m = rng.gen_range(1..=64usize);
            unit_snapshot((0..m).map(|_| rng.gen_range(0..=100)).collect())
        })
        .collect()
}

#[test]
fn ac07_membership_equivalence() {
    let start = Instant::now();
    let fixtures = membership_fixtures();
    let config = GroverConfig {
        repetitions: 3,
        seed: 7,
        ..Default::default()
    };
    let mut mismatches = 0;
    let mut bound = 0.0;
    for s in &fixtures {
        let sweep = compute_realized_sets_grover(s, &config).unwrap();
        if sweep.sets != realized_sets_classical(s) {
            mismatches += 1;
        }
        bound += sweep_false_negative_bound(s, &config).unwrap();
    }
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && bound < 1e-6 && elapsed < Duration::from_secs(120);
    verdict(
        7,
        "membership equivalence",
        ok,
        format!(
            "{} snapshots, {mismatches} mismatches, suite false-negative bound {bound:.3e} (limit 1e-6), {elapsed:?}",
            fixtures.len()
        ),
    );
}

#[test]
fn ac08_end_to_end_fixtures() {
    let unit = (0.0, 1.0);
    let enc = Encoding::default();
    let threshold = enc.encode(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let strong = Network::complete(16, 0.6, 0.5, unit).unwrap();
    let epi = evolve(&strong, &FiringState::all_firing(16), 3, &enc).unwrap();
    let epi_q = classify_quantum(
        &epi,
        threshold,
        &realized_sets_classical(&epi),
        DjMode::Exact,
        &mut rng,
    )
    .unwrap();
    let Evidence::Quantum { run_b: epi_b, .. } = &epi_q.evidence else {
        unreachable!()
    };

    let ring: Vec<Edge> = (0..16)
        .map(|i| Edge {
            source: i,
            target: (i + 1) % 16,
            weight: 0.2,
        })
        .collect();
    let weak = Network::new(16, ring, 0.5, unit).unwrap();
    let dead = evolve(&weak, &FiringState::all_firing(16), 3, &enc).unwrap();
    let dead_q = classify_quantum(
        &dead,
        threshold,
        &realized_sets_classical(&dead),
        DjMode::Exact,
        &mut rng,
    )
    .unwrap();
    let Evidence::Quantum { run_a: dead_a, .. } = &dead_q.evidence else {
        unreachable!()
    };

    let ok = epi.codes().iter().all(|&c| c == 100)
        && epi_q.verdict == Verdict::Epileptic
        && (epi_b.p_zero - 1.0).abs() < 1e-12
        && dead.codes().iter().all(|&c| c == 0)
        && dead_q.verdict == Verdict::Quiescent
        && (dead_a.p_zero - 1.0).abs() < 1e-12;
    verdict(
        8,
        "end-to-end fixtures",
        ok,
        format!(
            "epileptic -> {} (run-B p0={:.12}), quiescent -> {} (run-A p0={:.12})",
            epi_q.verdict, epi_b.p_zero, dead_q.verdict, dead_a.p_zero
        ),
    );
}

#[test]
fn ac09_estimator() {
    let start = Instant::now();
    let v = estimate::log10_binomial(1000, 20).unwrap();
    let elapsed = start.elapsed();
    let ok = (41.0..=42.0).contains(&v) && elapsed < Duration::from_millis(1);
    verdict(
        9,
        "estimator",
        ok,
        format!("log10 C(1000,20) = {v:.4} in {elapsed:?}"),
    );
}

#[test]
fn ac10_performance() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let g = TruthTable::from_fn(20, |x| x.count_ones() % 3 == 0);
    let start = Instant::now();
    let dj = run_dj(&g, DjMode::Exact, &mut rng).unwrap();
    let dj_time = start.elapsed();
    let signed: f64 = g.values().iter().map(|&v| if v { -1.0 } else { 1.0 }).sum();
    let direct = (signed / (1u64 << 20) as f64).powi(2);

    let enc = Encoding::new(0.0, 1.0, (1 << 16) - 1).unwrap();
    let snapshot = Snapshot::new(0, enc, vec![12_345, 40_000]).unwrap();
    let config = GroverConfig {
        mode: GroverMode::Domain,
        repetitions: 1,
        ..Default::default()
    };
    let start = Instant::now();
    let entry = run_membership(&snapshot, 12_345, &config, &mut target_rng(0, 12_345)).unwrap();
    let grover_time = start.elapsed();

    let ok = dj_time < Duration::from_secs(1)
        && (dj.p_zero - direct).abs() < 1e-12
        && grover_time < Duration::from_secs(1)
        && entry.iterations == 201;
    verdict(
        10,
        "performance",
        ok,
        format!(
            "DJ n=20 in {dj_time:?}; domain Grover n=16 ({} iterations, present={}) in {grover_time:?}",
            entry.iterations, entry.present
        ),
    );
}
