use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qna_core::djclassifier::{DjMode, DjRunResult};
use qna_core::estimate::{log10_binomial, query_cost, QueryCost};
use qna_core::grover::{sweep_false_negative_bound, Schedule};
use qna_core::netmodel::{self, SnapshotDoc};
use qna_core::{
    classify_classical, classify_quantum, compute_realized_sets_grover, realized_sets_classical,
    Classification, Encoding, Evidence, FiringState, GroverConfig, GroverMode, Network,
    RealizedSets, Snapshot, Verdict,
};

use crate::report::{elapsed_ms, CliError, CliResult, EncodingInfo, InputDigest, RunReport};
use crate::{
    ClassifyArgs, ClassifyBackend, EstimateArgs, EvolveArgs, GenArgs, GroverModeArg, InitState,
    ModeArg, SetsArgs, SetsBackend,
};

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn load_snapshot(path: &Path, range: (f64, f64)) -> CliResult<(Snapshot, InputDigest)> {
    let (text, digest) = InputDigest::read(path)?;
    let doc: SnapshotDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let snapshot = Snapshot::from_doc(doc, range)?;
    Ok((snapshot, digest))
}

pub fn gen(a: GenArgs) -> CliResult<()> {
    if a.nodes == 0 {
        return Err(CliError::Input("--nodes must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let net = Network::random(
        a.nodes,
        a.density,
        (a.weight_min, a.weight_max),
        a.threshold,
        (a.range.range_min, a.range.range_max),
        &mut rng,
    )?;
    emit(&net.to_json(), a.out.as_deref())
}

pub fn evolve(a: EvolveArgs) -> CliResult<()> {
    let (text, _) = InputDigest::read(&a.network)?;
    let net: Network = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.network.display())))?;
    if !(0.0..=1.0).contains(&a.fire_prob) {
        return Err(CliError::Input(format!(
            "--fire-prob {} outside [0, 1]",
            a.fire_prob
        )));
    }
    let (lo, hi) = net.range();
    let encoding = Encoding::new(lo, hi, a.scale)?;
    let n = net.node_count();
    let initial = match a.init {
        InitState::All => FiringState::all_firing(n),
        InitState::None => FiringState::silent(n),
        InitState::Random => {
            FiringState::random(n, a.fire_prob, &mut ChaCha8Rng::seed_from_u64(a.seed))
        }
    };
    let snapshot = netmodel::evolve(&net, &initial, a.steps, &encoding)?;
    emit(&snapshot.to_json(), a.out.as_deref())
}

#[derive(Serialize)]
struct TargetStats {
    target: u32,
    present: bool,
    iterations: usize,
    attempts: usize,
    oracle_calls: usize,
}

#[derive(Serialize)]
struct GroverSummary {
    mode: GroverMode,
    repetitions: usize,
    schedule: Schedule,
    search_space: usize,
    total_oracle_calls: usize,
    oracle_call_bound: usize,
    classical_scan_queries: usize,
    false_negative_bound: f64,
    agrees_with_classical: bool,
    targets: Vec<TargetStats>,
}

#[derive(Serialize)]
struct SetsResult {
    backend: &'static str,
    list_size: usize,
    s_n_size: usize,
    s_n_complement_size: usize,
    s_n: Vec<u32>,
    multiplicities: BTreeMap<u32, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grover: Option<GroverSummary>,
}

fn sets_result(backend: &'static str, snapshot: &Snapshot, sets: &RealizedSets) -> SetsResult {
    SetsResult {
        backend,
        list_size: snapshot.len(),
        s_n_size: sets.present().len(),
        s_n_complement_size: sets.absent().len(),
        s_n: sets.present().iter().copied().collect(),
        multiplicities: sets.multiplicities().clone(),
        grover: None,
    }
}

pub fn sets(a: SetsArgs) -> CliResult<()> {
    let start = Instant::now();
    let (snapshot, digest) = load_snapshot(&a.snapshot, (a.range.range_min, a.range.range_max))?;
    let classical = realized_sets_classical(&snapshot);
    let result = match a.backend {
        SetsBackend::Classical => sets_result("classical", &snapshot, &classical),
        SetsBackend::Grover => {
            let config = GroverConfig {
                mode: match a.grover_mode {
                    GroverModeArg::List => GroverMode::List,
                    GroverModeArg::Domain => GroverMode::Domain,
                },
                repetitions: a.reps,
                iteration_override: a.iterations,
                seed: a.seed,
                schedule: if a.worst_case {
                    Schedule::WorstCase
                } else {
                    Schedule::KnownMultiplicity
                },
            };
            let sweep = compute_realized_sets_grover(&snapshot, &config)?;
            let bound = sweep_false_negative_bound(&snapshot, &config)?;
            let mut result = sets_result("grover", &snapshot, &sweep.sets);
            let r = &sweep.report;
            result.grover = Some(GroverSummary {
                mode: r.mode,
                repetitions: r.repetitions,
                schedule: config.schedule,
                search_space: r.search_space,
                total_oracle_calls: r.total_oracle_calls,
                oracle_call_bound: r.oracle_call_bound,
                classical_scan_queries: r.classical_scan_queries,
                false_negative_bound: bound,
                agrees_with_classical: sweep.sets == classical,
                targets: r
                    .entries
                    .iter()
                    .map(|e| TargetStats {
                        target: e.target,
                        present: e.present,
                        iterations: e.iterations,
                        attempts: e.attempts,
                        oracle_calls: e.oracle_calls,
                    })
                    .collect(),
            });
            result
        }
    };
    RunReport {
        command: "sets",
        inputs: BTreeMap::from([("snapshot".to_string(), digest)]),
        encoding: Some(EncodingInfo::from(snapshot.encoding())),
        seed: (a.backend == SetsBackend::Grover).then_some(a.seed),
        result,
        timing: elapsed_ms(start),
    }
    .print();
    Ok(())
}

#[derive(Serialize)]
struct QuantumSummary {
    verdict: Verdict,
    run_a_p_zero: f64,
    run_b_p_zero: f64,
    run_a: DjRunResult,
    run_b: DjRunResult,
    disambiguation_note: Option<String>,
}

#[derive(Serialize)]
struct ClassicalSummary {
    verdict: Verdict,
    firing: usize,
    silent: usize,
}

#[derive(Serialize)]
struct ClassifyResult {
    threshold: f64,
    threshold_code: u32,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<usize>,
    s_n_size: usize,
    s_n_complement_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum: Option<QuantumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical: Option<ClassicalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    backends_agree: Option<bool>,
}

fn quantum_summary(c: Classification) -> QuantumSummary {
    let Evidence::Quantum { run_a, run_b } = c.evidence else {
        unreachable!("quantum classifier attaches quantum evidence")
    };
    QuantumSummary {
        verdict: c.verdict,
        run_a_p_zero: run_a.p_zero,
        run_b_p_zero: run_b.p_zero,
        run_a,
        run_b,
        disambiguation_note: c.disambiguation_note,
    }
}

fn classical_summary(c: Classification) -> ClassicalSummary {
    let Evidence::Classical { firing, silent } = c.evidence else {
        unreachable!("classical classifier attaches classical evidence")
    };
    ClassicalSummary {
        verdict: c.verdict,
        firing,
        silent,
    }
}

pub fn classify(a: ClassifyArgs) -> CliResult<()> {
    let start = Instant::now();
    let (snapshot, digest) = load_snapshot(&a.snapshot, (a.range.range_min, a.range.range_max))?;
    let threshold_code = snapshot.encoding().encode(a.threshold)?;
    let mode = match a.mode {
        ModeArg::Exact => DjMode::Exact,
        ModeArg::Sampled => DjMode::Sampled { shots: a.shots },
    };
    let sets = realized_sets_classical(&snapshot);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);

    let quantum = match a.backend {
        ClassifyBackend::Quantum | ClassifyBackend::Both => Some(quantum_summary(
            classify_quantum(&snapshot, threshold_code, &sets, mode, &mut rng)?,
        )),
        ClassifyBackend::Classical => None,
    };
    let classical = match a.backend {
        ClassifyBackend::Classical | ClassifyBackend::Both => Some(classical_summary(
            classify_classical(&snapshot, threshold_code)?,
        )),
        ClassifyBackend::Quantum => None,
    };
    let backends_agree = match (&quantum, &classical) {
        (Some(q), Some(c)) => Some(q.verdict == c.verdict),
        _ => None,
    };

    let mismatch = backends_agree == Some(false);
    let detail = match (&quantum, &classical) {
        (Some(q), Some(c)) => format!("quantum {} vs classical {}", q.verdict, c.verdict),
        _ => String::new(),
    };
    RunReport {
        command: "classify",
        inputs: BTreeMap::from([("snapshot".to_string(), digest)]),
        encoding: Some(EncodingInfo::from(snapshot.encoding())),
        seed: Some(a.seed),
        result: ClassifyResult {
            threshold: a.threshold,
            threshold_code,
            mode: mode.name(),
            shots: matches!(mode, DjMode::Sampled { .. }).then_some(a.shots),
            s_n_size: sets.present().len(),
            s_n_complement_size: sets.absent().len(),
            quantum,
            classical,
            backends_agree,
        },
        timing: elapsed_ms(start),
    }
    .print();
    if mismatch {
        return Err(CliError::Disagreement(detail));
    }
    Ok(())
}

#[derive(Serialize)]
struct EstimateResult {
    population: u64,
    active: u64,
    log10_distinct_encodings: f64,
    query_cost: QueryCost,
}

pub fn estimate(a: EstimateArgs) -> CliResult<()> {
    let start = Instant::now();
    let log10 = log10_binomial(a.population, a.active)?;
    let cost = query_cost(a.bits, a.list_size, a.reps)?;
    RunReport {
        command: "estimate",
        inputs: BTreeMap::new(),
        encoding: None,
        seed: None,
        result: EstimateResult {
            population: a.population,
            active: a.active,
            log10_distinct_encodings: log10,
            query_cost: cost,
        },
        timing: elapsed_ms(start),
    }
    .print();
    Ok(())
}
