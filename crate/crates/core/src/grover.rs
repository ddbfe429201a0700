//! Grover membership testing for snapshot codes.
//!
//! Two search spaces are supported. In [`GroverMode::List`] the register
//! indexes positions of the snapshot (padded to a power of two) and a target
//! code is marked wherever it occurs, so the marked count is the code's
//! multiplicity. In [`GroverMode::Domain`] the register spans the whole
//! n-bit code space and at most the target itself is marked.
//!
//! Every measured outcome is checked classically against the snapshot, so a
//! target is never reported present unless it really occurs; misses are only
//! possible in the other direction and shrink geometrically with the number
//! of repetitions.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitsets::RealizedSets;
use crate::error::{Error, Result};
use crate::netmodel::Snapshot;
use crate::statevector::StateVector;

/// Largest code width the full `2^n` sweep accepts.
pub const SWEEP_MAX_BITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroverMode {
    List,
    Domain,
}

/// How the iteration count is chosen when no override is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Use the true marked count (read classically off the snapshot).
    KnownMultiplicity,
    /// Assume a single marked item: `⌊(π/4)·√N⌋` regardless of the target.
    WorstCase,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverConfig {
    pub mode: GroverMode,
    pub repetitions: usize,
    pub iteration_override: Option<usize>,
    pub seed: u64,
    pub schedule: Schedule,
}

impl Default for GroverConfig {
    fn default() -> Self {
        Self {
            mode: GroverMode::List,
            repetitions: 3,
            iteration_override: None,
            seed: 0,
            schedule: Schedule::KnownMultiplicity,
        }
    }
}

impl GroverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::validation("repetitions must be at least 1"));
        }
        Ok(())
    }
}

/// `⌊(π/4)·√(N/μ)⌋` for `μ ≥ 1`; `μ = 0` (absent or unknown) falls back to
/// the single-item worst case `⌊(π/4)·√N⌋`.
pub fn iteration_count(search_space: usize, multiplicity: usize) -> Result<usize> {
    if !search_space.is_power_of_two() {
        return Err(Error::validation(format!(
            "search space {search_space} is not a power of two"
        )));
    }
    if multiplicity > search_space {
        return Err(Error::validation(format!(
            "multiplicity {multiplicity} exceeds search space {search_space}"
        )));
    }
    let ratio = search_space as f64 / multiplicity.max(1) as f64;
    Ok((FRAC_PI_4 * ratio.sqrt()).floor() as usize)
}

/// Probability of measuring a marked item after `k` rounds from the uniform
/// state: `sin²((2k+1)·asin(√(μ/N)))`.
pub fn success_probability(search_space: usize, multiplicity: usize, k: usize) -> f64 {
    if multiplicity == 0 || search_space == 0 {
        return 0.0;
    }
    let theta = (multiplicity as f64 / search_space as f64)
        .sqrt()
        .min(1.0)
        .asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// Phase oracle marking the snapshot positions whose code equals `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListOracle {
    target: u32,
    qubits: usize,
    list_len: usize,
    marked: Vec<bool>,
}

impl ListOracle {
    pub fn target(&self) -> u32 {
        self.target
    }

    /// `⌈log₂ M⌉`; zero for a one-element list.
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn search_space(&self) -> usize {
        1 << self.qubits
    }

    pub fn marks(&self, index: usize) -> bool {
        index < self.list_len && self.marked[index]
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }
}

pub fn build_list_oracle(snapshot: &Snapshot, target: u32) -> ListOracle {
    let list_len = snapshot.len();
    let qubits = list_len.next_power_of_two().trailing_zeros() as usize;
    ListOracle {
        target,
        qubits,
        list_len,
        marked: snapshot.codes().iter().map(|&c| c == target).collect(),
    }
}

/// Phase oracle over the full code space marking `target` iff it is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainOracle {
    target: u32,
    bits: u32,
    realized: bool,
}

impl DomainOracle {
    pub fn new(bits: u32, target: u32, realized: bool) -> Self {
        Self {
            target,
            bits,
            realized,
        }
    }

    pub fn qubits(&self) -> usize {
        self.bits as usize
    }

    pub fn search_space(&self) -> usize {
        1 << self.bits
    }

    pub fn marks(&self, code: usize) -> bool {
        self.realized && code == self.target as usize
    }

    pub fn marked_count(&self) -> usize {
        usize::from(self.realized)
    }
}

pub fn build_domain_oracle(sets: &RealizedSets, target: u32) -> DomainOracle {
    DomainOracle::new(sets.bit_width(), target, sets.contains(target))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    /// Measured basis index of the search register.
    pub index: usize,
    /// The code found at that index (list position or the index itself);
    /// `None` for padding positions.
    pub code: Option<u32>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipEntry {
    pub target: u32,
    pub present: bool,
    pub iterations: usize,
    pub attempts: usize,
    pub oracle_calls: usize,
    pub outcomes: Vec<Outcome>,
}

/// Grover search for one target followed by classical verification of each
/// measured outcome, repeated up to `config.repetitions` times.
pub fn run_membership<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    target: u32,
    config: &GroverConfig,
    rng: &mut R,
) -> Result<MembershipEntry> {
    config.validate()?;
    match config.mode {
        GroverMode::List => {
            let oracle = build_list_oracle(snapshot, target);
            let verify = |index: usize| {
                let code = snapshot.codes().get(index).copied();
                Outcome {
                    index,
                    code,
                    verified: code == Some(target),
                }
            };
            search(
                target,
                oracle.qubits(),
                oracle.marked_count(),
                |x| oracle.marks(x),
                verify,
                config,
                rng,
            )
        }
        GroverMode::Domain => {
            let bits = snapshot.bit_width();
            let realized = snapshot.codes().contains(&target);
            let oracle = DomainOracle::new(bits, target, realized);
            let verify = |index: usize| {
                let code = index as u32;
                Outcome {
                    index,
                    code: Some(code),
                    verified: code == target && snapshot.codes().contains(&code),
                }
            };
            search(
                target,
                oracle.qubits(),
                oracle.marked_count(),
                |x| oracle.marks(x),
                verify,
                config,
                rng,
            )
        }
    }
}

fn search<R, M, V>(
    target: u32,
    qubits: usize,
    marked_count: usize,
    marks: M,
    verify: V,
    config: &GroverConfig,
    rng: &mut R,
) -> Result<MembershipEntry>
where
    R: Rng + ?Sized,
    M: Fn(usize) -> bool + Sync,
    V: Fn(usize) -> Outcome,
{
    let space = 1usize << qubits;
    let mu = match config.schedule {
        Schedule::KnownMultiplicity => marked_count,
        Schedule::WorstCase => 0,
    };
    let iterations = match config.iteration_override {
        Some(k) => k,
        None => iteration_count(space, mu)?,
    };

    let mut entry = MembershipEntry {
        target,
        present: false,
        iterations,
        attempts: 0,
        oracle_calls: 0,
        outcomes: Vec::new(),
    };
    for _ in 0..config.repetitions {
        let index = if qubits == 0 {
            // a one-element register: the single basis state is certain
            0
        } else {
            let mut state = StateVector::new_uniform(qubits)?;
            for _ in 0..iterations {
                state.apply_phase_flip(&marks);
                state.apply_diffusion();
            }
            state.check_norm()?;
            state.measure(rng)
        };
        entry.attempts += 1;
        entry.oracle_calls += iterations;
        let outcome = verify(index);
        let hit = outcome.verified;
        entry.outcomes.push(outcome);
        if hit {
            entry.present = true;
            break;
        }
    }
    Ok(entry)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub mode: GroverMode,
    pub repetitions: usize,
    pub search_space: usize,
    pub entries: Vec<MembershipEntry>,
    pub total_oracle_calls: usize,
    /// `2^n · r · ⌈(π/4)·√N⌉`.
    pub oracle_call_bound: usize,
    /// Cost of answering every membership query by scanning the list: `2^n · M`.
    pub classical_scan_queries: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverSweep {
    pub sets: RealizedSets,
    pub report: MembershipReport,
}

/// Per-target RNG derived from the sweep seed, independent of scheduling.
pub fn target_rng(seed: u64, target: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(target as u64);
    rng
}

fn search_space_for(snapshot: &Snapshot, mode: GroverMode) -> usize {
    match mode {
        GroverMode::List => snapshot.len().next_power_of_two(),
        GroverMode::Domain => 1usize << snapshot.bit_width(),
    }
}

/// Runs [`run_membership`] for every code of the `2^n` space (in parallel,
/// one derived RNG per target) and assembles the partition. Multiplicities
/// of codes found present are counted classically.
pub fn compute_realized_sets_grover(
    snapshot: &Snapshot,
    config: &GroverConfig,
) -> Result<GroverSweep> {
    config.validate()?;
    let bits = snapshot.bit_width();
    if bits > SWEEP_MAX_BITS {
        return Err(Error::validation(format!(
            "sweep over 2^{bits} codes exceeds the 2^{SWEEP_MAX_BITS} ceiling"
        )));
    }
    let codes: Vec<u32> = (0..1u32 << bits).collect();
    let entries = codes
        .par_iter()
        .map(|&target| {
            run_membership(
                snapshot,
                target,
                config,
                &mut target_rng(config.seed, target),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut multiplicities = BTreeMap::new();
    for e in entries.iter().filter(|e| e.present) {
        let count = snapshot.codes().iter().filter(|&&c| c == e.target).count();
        multiplicities.insert(e.target, count);
    }
    let sets = RealizedSets::from_multiplicities(bits, multiplicities);

    let search_space = search_space_for(snapshot, config.mode);
    let per_target_max = (FRAC_PI_4 * (search_space as f64).sqrt()).ceil() as usize;
    let report = MembershipReport {
        mode: config.mode,
        repetitions: config.repetitions,
        search_space,
        total_oracle_calls: entries.iter().map(|e| e.oracle_calls).sum(),
        oracle_call_bound: codes.len() * config.repetitions * per_target_max,
        classical_scan_queries: codes.len() * snapshot.len(),
        entries,
    };
    Ok(GroverSweep { sets, report })
}

/// Union bound on the probability that a sweep misses at least one realized
/// code: `Σ_{s ∈ S_n} (1 − p_s)^r` with `p_s` the per-attempt success
/// probability of the configured schedule.
pub fn sweep_false_negative_bound(snapshot: &Snapshot, config: &GroverConfig) -> Result<f64> {
    config.validate()?;
    let space = search_space_for(snapshot, config.mode);
    let mut counts = BTreeMap::new();
    for &c in snapshot.codes() {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    let mut bound = 0.0;
    for &mult in counts.values() {
        let marked = match config.mode {
            GroverMode::List => mult,
            GroverMode::Domain => 1,
        };
        let scheduled = match config.schedule {
            Schedule::KnownMultiplicity => marked,
            Schedule::WorstCase => 0,
        };
        let k = match config.iteration_override {
            Some(k) => k,
            None => iteration_count(space, scheduled)?,
        };
        let miss = (1.0 - success_probability(space, marked, k)).max(0.0);
        bound += miss.powi(config.repetitions as i32);
    }
    Ok(bound.min(1.0))
}
