//! Three-way activity classification with a two-part Deutsch-Jozsa oracle.
//!
//! The firing function `f(s) = [s ≥ threshold]` is only meaningful on codes
//! realized by the snapshot (`S_n`). The two-part oracle extends it to the
//! whole code space by returning a fixed fill bit on `S_n^c`. Running
//! Deutsch-Jozsa once with fill 0 and once with fill 1 separates:
//!
//! | fill 0 constant | fill 1 constant | verdict    |
//! |-----------------|-----------------|------------|
//! | yes             | no              | Quiescent  |
//! | no              | yes             | Epileptic  |
//! | no              | no              | Sustaining |
//!
//! When `S_n^c` is empty both runs see the same function, and a constant
//! result is resolved with one classical evaluation of `f`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::bitsets::RealizedSets;
use crate::error::{Error, Result};
use crate::netmodel::Snapshot;
use crate::statevector::{StateVector, DEFAULT_MAX_QUBITS};

/// `p_zero` at or above `1 − CONSTANT_TOLERANCE` reads as constant.
pub const CONSTANT_TOLERANCE: f64 = 1e-10;

pub const DEFAULT_SHOTS: usize = 64;

/// Comparator on n-bit codes, scanning from the most significant bit: the
/// first differing bit decides; equal codes fire.
pub fn fire_bit(code: u32, threshold_code: u32, bits: u32) -> bool {
    for pos in (0..bits).rev() {
        let c = code >> pos & 1;
        let t = threshold_code >> pos & 1;
        if c != t {
            return c == 1;
        }
    }
    true
}

/// A total boolean function over `{0,1}^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    bits: u32,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(bits: u32, values: Vec<bool>) -> Result<Self> {
        if values.len() != 1usize << bits {
            return Err(Error::validation(format!(
                "truth table has {} entries, expected 2^{bits}",
                values.len()
            )));
        }
        Ok(Self { bits, values })
    }

    pub fn from_fn(bits: u32, f: impl Fn(u32) -> bool) -> Self {
        Self {
            bits,
            values: (0..1u32 << bits).map(f).collect(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn get(&self, x: u32) -> bool {
        self.values[x as usize]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    pub fn ones(&self) -> usize {
        self.values.iter().filter(|&&v| v).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits,
            values: self.values.iter().map(|v| !v).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TwoPartOracleSpec<'a> {
    pub bit_width: u32,
    pub threshold_code: u32,
    pub realized: &'a RealizedSets,
    pub fill_bit: bool,
}

/// `g(s) = fire_bit(s)` on `S_n`, `g(s) = fill_bit` on `S_n^c`.
pub fn build_two_part_oracle(spec: &TwoPartOracleSpec<'_>) -> Result<TruthTable> {
    if spec.realized.bit_width() != spec.bit_width {
        return Err(Error::validation(format!(
            "realized sets are {}-bit, oracle is {}-bit",
            spec.realized.bit_width(),
            spec.bit_width
        )));
    }
    if spec.threshold_code >= 1 << spec.bit_width {
        return Err(Error::validation(format!(
            "threshold code {} does not fit in {} bits",
            spec.threshold_code, spec.bit_width
        )));
    }
    if !spec.realized.is_valid_partition() {
        return Err(Error::validation(
            "realized sets are not a partition of the code space",
        ));
    }
    let mut values = vec![spec.fill_bit; 1usize << spec.bit_width];
    for &s in spec.realized.present() {
        values[s as usize] = fire_bit(s, spec.threshold_code, spec.bit_width);
    }
    TruthTable::new(spec.bit_width, values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum DjMode {
    Exact,
    Sampled { shots: usize },
}

impl DjMode {
    pub fn name(&self) -> &'static str {
        match self {
            DjMode::Exact => "exact",
            DjMode::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCounts {
    pub shots: usize,
    pub zero_count: usize,
    /// `p_zero^shots`: chance a non-constant function still shows only zeros.
    pub false_constant_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DjRunResult {
    /// Exact probability of the all-zeros outcome.
    pub p_zero: f64,
    pub verdict_constant: bool,
    pub sampled: Option<SampledCounts>,
}

/// Deutsch-Jozsa on the data register: H-layer, phase oracle `(−1)^g`,
/// H-layer, then read the all-zeros outcome.
pub fn run_dj<R: Rng + ?Sized>(g: &TruthTable, mode: DjMode, rng: &mut R) -> Result<DjRunResult> {
    let bits = g.bits() as usize;
    if bits > DEFAULT_MAX_QUBITS {
        return Err(Error::Size {
            requested: bits,
            ceiling: DEFAULT_MAX_QUBITS,
        });
    }
    if let DjMode::Sampled { shots: 0 } = mode {
        return Err(Error::validation("sampled mode needs at least one shot"));
    }
    // H^n|0…0⟩ is the uniform state
    let mut state = StateVector::new_uniform(bits)?;
    state.apply_phase_flip(|x| g.values()[x]);
    state.hadamard_all();
    state.check_norm()?;
    let p_zero = state.probability(0)?.clamp(0.0, 1.0);

    Ok(match mode {
        DjMode::Exact => DjRunResult {
            p_zero,
            verdict_constant: p_zero >= 1.0 - CONSTANT_TOLERANCE,
            sampled: None,
        },
        DjMode::Sampled { shots } => {
            let zero_count = state.sample(shots, rng).iter().filter(|&&x| x == 0).count();
            DjRunResult {
                p_zero,
                verdict_constant: zero_count == shots,
                sampled: Some(SampledCounts {
                    shots,
                    zero_count,
                    false_constant_probability: p_zero.powi(shots as i32),
                }),
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    Quiescent,
    Epileptic,
    Sustaining,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Quiescent => "Quiescent",
            Verdict::Epileptic => "Epileptic",
            Verdict::Sustaining => "Sustaining",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "backend")]
pub enum Evidence {
    Quantum {
        /// Fill bit 0 on `S_n^c`.
        run_a: DjRunResult,
        /// Fill bit 1 on `S_n^c`.
        run_b: DjRunResult,
    },
    Classical {
        firing: usize,
        silent: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub disambiguation_note: Option<String>,
}

fn check_threshold(snapshot: &Snapshot, threshold_code: u32) -> Result<()> {
    let scale = snapshot.encoding().scale();
    if threshold_code > scale {
        return Err(Error::CodeRange {
            code: threshold_code,
            scale,
        });
    }
    Ok(())
}

/// Runs the two Deutsch-Jozsa passes and interprets them.
pub fn classify_quantum<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    threshold_code: u32,
    sets: &RealizedSets,
    mode: DjMode,
    rng: &mut R,
) -> Result<Classification> {
    check_threshold(snapshot, threshold_code)?;
    let bits = snapshot.bit_width();
    if sets.present().is_empty() {
        return Err(Error::validation("realized set is empty"));
    }
    let spec = |fill_bit| TwoPartOracleSpec {
        bit_width: bits,
        threshold_code,
        realized: sets,
        fill_bit,
    };
    let g_a = build_two_part_oracle(&spec(false))?;
    let g_b = build_two_part_oracle(&spec(true))?;
    let run_a = run_dj(&g_a, mode, rng)?;
    let run_b = run_dj(&g_b, mode, rng)?;

    let mut note = None;
    let verdict = if !sets.absent().is_empty() {
        match (run_a.verdict_constant, run_b.verdict_constant) {
            (true, true) => {
                return Err(Error::Invariant(format!(
                    "both fill-bit runs read constant with S_n^c nonempty (p_zero {} / {})",
                    run_a.p_zero, run_b.p_zero
                )))
            }
            (true, false) => Verdict::Quiescent,
            (false, true) => Verdict::Epileptic,
            (false, false) => Verdict::Sustaining,
        }
    } else if run_a.verdict_constant {
        let probe = *sets.present().iter().next().expect("nonempty");
        let fires = fire_bit(probe, threshold_code, bits);
        note = Some(format!(
            "S_n^c is empty so both runs are identical; classical probe fire_bit({probe}) = {}",
            u8::from(fires)
        ));
        if fires {
            Verdict::Epileptic
        } else {
            Verdict::Quiescent
        }
    } else {
        Verdict::Sustaining
    };
    Ok(Classification {
        verdict,
        evidence: Evidence::Quantum { run_a, run_b },
        disambiguation_note: note,
    })
}

/// Reference classifier: evaluates the comparator on every snapshot code.
pub fn classify_classical(snapshot: &Snapshot, threshold_code: u32) -> Result<Classification> {
    check_threshold(snapshot, threshold_code)?;
    let bits = snapshot.bit_width();
    let firing = snapshot
        .codes()
        .iter()
        .filter(|&&c| fire_bit(c, threshold_code, bits))
        .count();
    let silent = snapshot.len() - firing;
    let verdict = match (firing, silent) {
        (_, 0) => Verdict::Epileptic,
        (0, _) => Verdict::Quiescent,
        _ => Verdict::Sustaining,
    };
    Ok(Classification {
        verdict,
        evidence: Evidence::Classical { firing, silent },
        disambiguation_note: None,
    })
}
