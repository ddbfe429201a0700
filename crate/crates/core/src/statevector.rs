//! Dense statevector simulation.
//!
//! Basis index bit `i` is qubit `i` (little-endian). All operations act in
//! place; large registers are updated with rayon, with reductions done over
//! fixed-size chunks so results do not depend on thread scheduling.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default upper bound on register size: 2^24 amplitudes is 256 MiB.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Tolerance on the squared norm after any sequence of operations.
pub const NORM_TOLERANCE: f64 = 1e-10;

const PAR_THRESHOLD: usize = 1 << 14;
const REDUCE_CHUNK: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Uniform superposition over `qubits` qubits, capped at [`DEFAULT_MAX_QUBITS`].
    pub fn new_uniform(qubits: usize) -> Result<Self> {
        Self::new_uniform_with_ceiling(qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn new_uniform_with_ceiling(qubits: usize, ceiling: usize) -> Result<Self> {
        check_size(qubits, ceiling)?;
        let dim = 1usize << qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            qubits,
            amps: vec![a; dim],
        })
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_size(qubits, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::Bounds { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// Wraps caller-supplied amplitudes. The length must be a power of two
    /// (at least 2) and the vector must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::validation(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let qubits = dim.trailing_zeros() as usize;
        check_size(qubits, DEFAULT_MAX_QUBITS)?;
        let state = Self { qubits, amps };
        state.check_norm()?;
        Ok(state)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Negates the amplitude of every basis state the predicate marks.
    pub fn apply_phase_flip<F>(&mut self, marked: F)
    where
        F: Fn(usize) -> bool + Sync,
    {
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(|(x, a)| {
                if marked(x) {
                    *a = -*a;
                }
            });
        } else {
            for (x, a) in self.amps.iter_mut().enumerate() {
                if marked(x) {
                    *a = -*a;
                }
            }
        }
    }

    /// Reflection about the uniform state, `2|σ⟩⟨σ| − I`: every amplitude
    /// `a` becomes `2·mean − a`.
    pub fn apply_diffusion(&mut self) {
        let twice_mean = 2.0 * self.sum() / self.amps.len() as f64;
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().for_each(|a| *a = twice_mean - *a);
        } else {
            for a in &mut self.amps {
                *a = twice_mean - *a;
            }
        }
    }

    /// Walsh-Hadamard transform over the qubits in `register`.
    pub fn hadamard_range(&mut self, register: Range<usize>) -> Result<()> {
        if register.start > register.end || register.end > self.qubits {
            return Err(Error::validation(format!(
                "register {register:?} not within {} qubits",
                self.qubits
            )));
        }
        for qubit in register {
            self.hadamard(qubit);
        }
        Ok(())
    }

    pub fn hadamard_all(&mut self) {
        for qubit in 0..self.qubits {
            self.hadamard(qubit);
        }
    }

    fn hadamard(&mut self, qubit: usize) {
        let stride = 1usize << qubit;
        let butterfly = |lo: &mut Complex64, hi: &mut Complex64| {
            let (a, b) = (*lo, *hi);
            *lo = (a + b) * FRAC_1_SQRT_2;
            *hi = (a - b) * FRAC_1_SQRT_2;
        };
        let pair = |block: &mut [Complex64]| {
            let (lo, hi) = block.split_at_mut(stride);
            for (l, h) in lo.iter_mut().zip(hi.iter_mut()) {
                butterfly(l, h);
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            if self.amps.len() / (2 * stride) >= 64 {
                self.amps.par_chunks_mut(2 * stride).for_each(pair);
            } else {
                for block in self.amps.chunks_mut(2 * stride) {
                    let (lo, hi) = block.split_at_mut(stride);
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .for_each(|(l, h)| butterfly(l, h));
                }
            }
        } else {
            self.amps.chunks_mut(2 * stride).for_each(pair);
        }
    }

    /// `|amplitude[index]|²`.
    pub fn probability(&self, index: usize) -> Result<f64> {
        self.amps
            .get(index)
            .map(|a| a.norm_sqr())
            .ok_or(Error::Bounds {
                index,
                dim: self.amps.len(),
            })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        if self.amps.len() >= PAR_THRESHOLD {
            let partials: Vec<f64> = self
                .amps
                .par_chunks(REDUCE_CHUNK)
                .map(|c| c.iter().map(|a| a.norm_sqr()).sum::<f64>())
                .collect();
            partials.iter().sum()
        } else {
            self.amps.iter().map(|a| a.norm_sqr()).sum()
        }
    }

    pub fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Numeric(format!(
                "squared norm drifted to {n:.15} on {} qubits",
                self.qubits
            )));
        }
        Ok(())
    }

    fn sum(&self) -> Complex64 {
        if self.amps.len() >= PAR_THRESHOLD {
            let partials: Vec<Complex64> = self
                .amps
                .par_chunks(REDUCE_CHUNK)
                .map(|c| c.iter().sum::<Complex64>())
                .collect();
            partials.iter().sum()
        } else {
            self.amps.iter().sum()
        }
    }

    /// Samples one basis index with probability `|a_x|²`. The state is not
    /// collapsed.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.norm_sqr();
        let r = rng.gen::<f64>() * total;
        let mut cum = 0.0;
        let mut last_nonzero = 0;
        for (x, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            cum += p;
            last_nonzero = x;
            if r < cum {
                return x;
            }
        }
        last_nonzero
    }

    /// Draws `shots` independent samples using one cumulative table.
    pub fn sample<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Vec<usize> {
        let mut cum = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cum.push(acc);
        }
        (0..shots)
            .map(|_| {
                let r = rng.gen::<f64>() * acc;
                // first index whose cumulative mass exceeds r; zero-mass entries
                // share their predecessor's value and can never be selected
                let x = cum.partition_point(|&c| c <= r);
                x.min(self.amps.len() - 1)
            })
            .collect()
    }
}

fn check_size(qubits: usize, ceiling: usize) -> Result<()> {
    if qubits == 0 || qubits > ceiling {
        return Err(Error::Size {
            requested: qubits,
            ceiling,
        });
    }
    Ok(())
}

/// Named, contiguous, disjoint qubit ranges covering a whole register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    qubit_count: usize,
    ranges: Vec<(String, Range<usize>)>,
}

impl RegisterLayout {
    pub fn new(qubit_count: usize, ranges: Vec<(String, Range<usize>)>) -> Result<Self> {
        let mut sorted: Vec<&Range<usize>> = ranges.iter().map(|(_, r)| r).collect();
        sorted.sort_by_key(|r| r.start);
        let mut next = 0;
        for r in sorted {
            if r.start != next || r.end <= r.start {
                return Err(Error::validation(format!(
                    "register ranges must be non-empty, disjoint and contiguous; gap or overlap at qubit {next}"
                )));
            }
            next = r.end;
        }
        if next != qubit_count {
            return Err(Error::validation(format!(
                "register ranges cover {next} of {qubit_count} qubits"
            )));
        }
        Ok(Self {
            qubit_count,
            ranges,
        })
    }

    /// Sequential layout built from `(name, width)` pairs.
    pub fn sequential<S: Into<String>>(
        parts: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self> {
        let mut start = 0;
        let mut ranges = Vec::new();
        for (name, width) in parts {
            ranges.push((name.into(), start..start + width));
            start += width;
        }
        Self::new(start, ranges)
    }

    /// The comparator layout: `n` data qubits holding ν, `n` qubits holding
    /// the threshold code, and one ancilla for the comparison result.
    /// Simulation evaluates the comparison directly into oracle phases, so
    /// this layout is descriptive only.
    pub fn comparator(bits: usize) -> Result<Self> {
        Self::sequential([("data", bits), ("threshold", bits), ("ancilla", 1)])
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn get(&self, name: &str) -> Option<Range<usize>> {
        self.ranges
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r.clone())
    }

    pub fn ranges(&self) -> &[(String, Range<usize>)] {
        &self.ranges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, re: f64) -> bool {
        (a.re - re).abs() < 1e-12 && a.im.abs() < 1e-12
    }

    #[test]
    fn uniform_amplitudes() {
        let s = StateVector::new_uniform(3).unwrap();
        assert!(s
            .amplitudes()
            .iter()
            .all(|&a| close(a, 0.353_553_390_593_273_8)));
        let s = StateVector::new_uniform(1).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, FRAC_1_SQRT_2)));
        let s = StateVector::new_uniform(7).unwrap();
        assert_eq!(s.dim(), 128);
        for x in 0..128 {
            assert!((s.probability(x).unwrap() - 1.0 / 128.0).abs() < 1e-15);
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            StateVector::new_uniform(0),
            Err(Error::Size { .. })
        ));
        assert!(matches!(
            StateVector::new_uniform(25),
            Err(Error::Size { .. })
        ));
        assert!(StateVector::new_uniform_with_ceiling(5, 4).is_err());
        assert!(StateVector::new_uniform_with_ceiling(4, 4).is_ok());
    }

    #[test]
    fn phase_flip_single_and_empty() {
        let mut s = StateVector::new_uniform(2).unwrap();
        s.apply_phase_flip(|x| x == 3);
        let a = s.amplitudes();
        assert!(close(a[0], 0.5) && close(a[1], 0.5) && close(a[2], 0.5) && close(a[3], -0.5));

        let before = s.clone();
        s.apply_phase_flip(|_| false);
        assert_eq!(s, before);
    }

    #[test]
    fn one_grover_round_on_four_items_is_exact() {
        let mut s = StateVector::new_uniform(2).unwrap();
        s.apply_phase_flip(|x| x == 3);
        s.apply_diffusion();
        let a = s.amplitudes();
        assert!(close(a[0], 0.0) && close(a[1], 0.0) && close(a[2], 0.0) && close(a[3], 1.0));
        assert!((s.probability(3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diffusion_fixes_uniform() {
        let mut s = StateVector::new_uniform(5).unwrap();
        let before = s.clone();
        s.apply_diffusion();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn hadamard_basics() {
        let mut s = StateVector::basis(3, 0).unwrap();
        s.hadamard_all();
        let u = StateVector::new_uniform(3).unwrap();
        for (a, b) in s.amplitudes().iter().zip(u.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }

        let mut one = StateVector::basis(1, 1).unwrap();
        one.hadamard_all();
        assert!(close(one.amplitudes()[0], FRAC_1_SQRT_2));
        assert!(close(one.amplitudes()[1], -FRAC_1_SQRT_2));
    }

    #[test]
    fn hadamard_range_touches_only_its_qubits() {
        // H on qubit 1 only: |00⟩ -> (|00⟩ + |10⟩)/√2, i.e. indices 0 and 2
        let mut s = StateVector::basis(2, 0).unwrap();
        s.hadamard_range(1..2).unwrap();
        let p = s.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[2] - 0.5).abs() < 1e-12);
        assert!(p[1] < 1e-15 && p[3] < 1e-15);
        assert!(s.hadamard_range(1..3).is_err());
    }

    #[test]
    fn probability_bounds() {
        let s = StateVector::new_uniform(3).unwrap();
        assert!((s.probability(0).unwrap() - 0.125).abs() < 1e-15);
        assert!(matches!(
            s.probability(8),
            Err(Error::Bounds { index: 8, dim: 8 })
        ));
        let z = StateVector::basis(4, 0).unwrap();
        assert_eq!(z.probability(0).unwrap(), 1.0);
    }

    #[test]
    fn measure_one_hot_and_zero_mass() {
        let s = StateVector::basis(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(s.measure(&mut rng), 5);
        }
        assert!(s.sample(1000, &mut rng).iter().all(|&x| x == 5));
    }

    #[test]
    fn measure_frequencies_uniform_qubit() {
        let s = StateVector::new_uniform(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shots = 100_000;
        let zeros = (0..shots).filter(|_| s.measure(&mut rng) == 0).count();
        let f = zeros as f64 / shots as f64;
        assert!((f - 0.5).abs() < 0.01, "frequency {f}");

        let zeros = s
            .sample(shots, &mut rng)
            .iter()
            .filter(|&&x| x == 0)
            .count();
        assert!((zeros as f64 / shots as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn measure_never_returns_unmarked_after_exact_round() {
        let mut s = StateVector::new_uniform(2).unwrap();
        s.apply_phase_flip(|x| x == 1);
        s.apply_diffusion();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(s.sample(100_000, &mut rng).iter().all(|&x| x == 1));
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(matches!(
            StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]),
            Err(Error::Numeric(_))
        ));
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert_eq!(
            StateVector::from_amplitudes(vec![h, -h])
                .unwrap()
                .qubit_count(),
            1
        );
    }

    #[test]
    fn large_register_paths_match_small_semantics() {
        // 2^15 amplitudes takes the rayon branches.
        let mut s = StateVector::basis(15, 0).unwrap();
        s.hadamard_all();
        s.apply_phase_flip(|x| x % 3 == 0);
        s.apply_diffusion();
        s.hadamard_all();
        s.check_norm().unwrap();
        let mut t = s.clone();
        t.hadamard_all();
        t.hadamard_all();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn comparator_layout() {
        let l = RegisterLayout::comparator(7).unwrap();
        assert_eq!(l.qubit_count(), 15);
        assert_eq!(l.get("data"), Some(0..7));
        assert_eq!(l.get("threshold"), Some(7..14));
        assert_eq!(l.get("ancilla"), Some(14..15));
        assert_eq!(l.get("index"), None);
    }

    #[test]
    fn layout_rejects_overlap_and_gaps() {
        let r = |n: &str, x: Range<usize>| (n.to_string(), x);
        assert!(RegisterLayout::new(4, vec![r("a", 0..2), r("b", 1..4)]).is_err());
        assert!(RegisterLayout::new(4, vec![r("a", 0..2), r("b", 3..4)]).is_err());
        assert!(RegisterLayout::new(4, vec![r("a", 0..2)]).is_err());
        assert!(RegisterLayout::new(4, vec![r("b", 2..4), r("a", 0..2)]).is_ok());
    }
}
