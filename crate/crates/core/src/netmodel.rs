//! Threshold network model, synchronous integrate-and-fire evolution and the
//! fixed-point encoding of running sums.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack added before flooring so decimal ties such as 0.285 round up even
/// though their binary representation lands just below the tie.
const ROUND_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Weighted directed graph with a firing threshold. Running sums are clamped
/// into `[range_min, range_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkDoc", into = "NetworkDoc")]
pub struct Network {
    node_count: usize,
    edges: Vec<Edge>,
    threshold: f64,
    range_min: f64,
    range_max: f64,
}

/// On-disk shape: `{"nodes": int, "edges": [[src,dst,weight],...], "threshold": float, "range": [min,max]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub nodes: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub threshold: f64,
    pub range: [f64; 2],
}

impl TryFrom<NetworkDoc> for Network {
    type Error = Error;

    fn try_from(doc: NetworkDoc) -> Result<Self> {
        let edges = doc
            .edges
            .into_iter()
            .map(|(source, target, weight)| Edge {
                source,
                target,
                weight,
            })
            .collect();
        Network::new(
            doc.nodes,
            edges,
            doc.threshold,
            (doc.range[0], doc.range[1]),
        )
    }
}

impl From<Network> for NetworkDoc {
    fn from(n: Network) -> Self {
        NetworkDoc {
            nodes: n.node_count,
            edges: n
                .edges
                .iter()
                .map(|e| (e.source, e.target, e.weight))
                .collect(),
            threshold: n.threshold,
            range: [n.range_min, n.range_max],
        }
    }
}

impl Network {
    pub fn new(
        node_count: usize,
        edges: Vec<Edge>,
        threshold: f64,
        range: (f64, f64),
    ) -> Result<Self> {
        let (range_min, range_max) = range;
        if node_count == 0 {
            return Err(Error::validation("network needs at least one node"));
        }
        if !(range_min.is_finite() && range_max.is_finite() && range_max > range_min) {
            return Err(Error::validation(format!(
                "normalization range [{range_min}, {range_max}] is empty or not finite"
            )));
        }
        if !(range_min..=range_max).contains(&threshold) {
            return Err(Error::Range {
                value: threshold,
                min: range_min,
                max: range_max,
                at: None,
            });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.source >= node_count || e.target >= node_count {
                return Err(Error::validation(format!(
                    "edge {i} ({} -> {}) references a node outside [0, {node_count})",
                    e.source, e.target
                )));
            }
            if !e.weight.is_finite() {
                return Err(Error::validation(format!("edge {i} has non-finite weight")));
            }
            if !seen.insert((e.source, e.target)) {
                return Err(Error::validation(format!(
                    "duplicate edge {} -> {}",
                    e.source, e.target
                )));
            }
        }
        Ok(Self {
            node_count,
            edges,
            threshold,
            range_min,
            range_max,
        })
    }

    /// Seeded random digraph: each ordered pair `(i, j)`, `i != j`, carries an
    /// edge with probability `density`, weight uniform in `weights`.
    pub fn random<R: Rng + ?Sized>(
        node_count: usize,
        density: f64,
        weights: (f64, f64),
        threshold: f64,
        range: (f64, f64),
        rng: &mut R,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::validation(format!(
                "density {density} outside [0, 1]"
            )));
        }
        if !(weights.0.is_finite() && weights.1.is_finite() && weights.0 <= weights.1) {
            return Err(Error::validation(format!(
                "weight range [{}, {}] is invalid",
                weights.0, weights.1
            )));
        }
        let mut edges = Vec::new();
        for source in 0..node_count {
            for target in 0..node_count {
                if source == target {
                    continue;
                }
                if rng.gen::<f64>() < density {
                    let weight = if weights.0 == weights.1 {
                        weights.0
                    } else {
                        rng.gen_range(weights.0..weights.1)
                    };
                    edges.push(Edge {
                        source,
                        target,
                        weight,
                    });
                }
            }
        }
        Self::new(node_count, edges, threshold, range)
    }

    /// Complete digraph (no self loops) with a uniform weight.
    pub fn complete(
        node_count: usize,
        weight: f64,
        threshold: f64,
        range: (f64, f64),
    ) -> Result<Self> {
        let edges = (0..node_count)
            .flat_map(|s| {
                (0..node_count)
                    .filter(move |&t| t != s)
                    .map(move |t| (s, t))
            })
            .map(|(source, target)| Edge {
                source,
                target,
                weight,
            })
            .collect();
        Self::new(node_count, edges, threshold, range)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn range(&self) -> (f64, f64) {
        (self.range_min, self.range_max)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network serializes")
    }

    /// Clamped weighted input `Σ_j w_ji·x_j` for every node.
    pub fn running_sums(&self, state: &FiringState) -> Result<Vec<f64>> {
        if state.len() != self.node_count {
            return Err(Error::validation(format!(
                "firing state has {} entries, network has {} nodes",
                state.len(),
                self.node_count
            )));
        }
        let mut sums = vec![0.0; self.node_count];
        for e in &self.edges {
            if state.0[e.source] {
                sums[e.target] += e.weight;
            }
        }
        for s in &mut sums {
            *s = s.clamp(self.range_min, self.range_max);
        }
        Ok(sums)
    }
}

/// Per-node firing bits at one time step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiringState(pub Vec<bool>);

impl FiringState {
    pub fn silent(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn all_firing(n: usize) -> Self {
        Self(vec![true; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, p_fire: f64, rng: &mut R) -> Self {
        Self((0..n).map(|_| rng.gen::<f64>() < p_fire).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn firing_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// One synchronous update: node `i` fires next iff its clamped running sum
/// reaches the threshold. Returns the new state and the sums that produced it.
pub fn step(network: &Network, state: &FiringState) -> Result<(FiringState, Vec<f64>)> {
    let sums = network.running_sums(state)?;
    let next = FiringState(sums.iter().map(|&s| s >= network.threshold).collect());
    Ok((next, sums))
}

/// Evolves for `horizon` updates and snapshots the running sums of the
/// resulting state. `horizon == 0` snapshots the sums of `initial` itself.
pub fn evolve(
    network: &Network,
    initial: &FiringState,
    horizon: u64,
    encoding: &Encoding,
) -> Result<Snapshot> {
    if encoding.range() != network.range() {
        return Err(Error::validation(format!(
            "encoding range {:?} differs from network range {:?}",
            encoding.range(),
            network.range()
        )));
    }
    let mut state = initial.clone();
    for _ in 0..horizon {
        state = step(network, &state)?.0;
    }
    let sums = network.running_sums(&state)?;
    snapshot_from_values(&sums, encoding, horizon)
}

/// Fixed-point quantization of `[range_min, range_max]` into `scale + 1`
/// evenly spaced codes, stored in `bit_width` bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Encoding {
    range_min: f64,
    range_max: f64,
    scale: u32,
    bit_width: u32,
}

impl Default for Encoding {
    /// `[0, 1]` at two decimal digits: 101 codes in 7 bits.
    fn default() -> Self {
        Self::new(0.0, 1.0, 100).expect("default encoding is valid")
    }
}

impl Encoding {
    pub fn new(range_min: f64, range_max: f64, scale: u32) -> Result<Self> {
        if !(range_min.is_finite() && range_max.is_finite() && range_max > range_min) {
            return Err(Error::validation(format!(
                "encoding range [{range_min}, {range_max}] is empty or not finite"
            )));
        }
        if scale == 0 || scale > (1 << 24) - 1 {
            return Err(Error::validation(format!(
                "scale {scale} outside [1, 2^24 - 1]"
            )));
        }
        Ok(Self {
            range_min,
            range_max,
            scale,
            bit_width: bits_for_scale(scale),
        })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.range_min, self.range_max)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn bit_width(&self) -> u32 {
        self.bit_width
    }

    /// `2^bit_width`, the size of the code space.
    pub fn capacity(&self) -> usize {
        1usize << self.bit_width
    }

    /// Number of codes `encode` can actually produce.
    pub fn realizable(&self) -> usize {
        self.scale as usize + 1
    }

    pub fn step_size(&self) -> f64 {
        (self.range_max - self.range_min) / self.scale as f64
    }

    /// Round-half-up quantization.
    pub fn encode(&self, sigma: f64) -> Result<u32> {
        if !(self.range_min..=self.range_max).contains(&sigma) {
            return Err(Error::Range {
                value: sigma,
                min: self.range_min,
                max: self.range_max,
                at: None,
            });
        }
        let t = (sigma - self.range_min) / (self.range_max - self.range_min);
        let code = (t * self.scale as f64 + 0.5 + ROUND_SLACK).floor() as u32;
        Ok(code.min(self.scale))
    }

    pub fn decode(&self, code: u32) -> Result<f64> {
        if code > self.scale {
            return Err(Error::CodeRange {
                code,
                scale: self.scale,
            });
        }
        Ok(self.range_min + code as f64 / self.scale as f64 * (self.range_max - self.range_min))
    }
}

/// `⌈log₂(scale + 1)⌉`.
pub fn bits_for_scale(scale: u32) -> u32 {
    let levels = scale as u64 + 1;
    64 - (levels - 1).leading_zeros()
}

/// Convenience free functions mirroring [`Encoding::encode`] / [`Encoding::decode`].
pub fn encode(sigma: f64, encoding: &Encoding) -> Result<u32> {
    encoding.encode(sigma)
}

pub fn decode(code: u32, encoding: &Encoding) -> Result<f64> {
    encoding.decode(code)
}

/// Quantized running sums of every node at observation time.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    time: u64,
    encoding: Encoding,
    codes: Vec<u32>,
}

/// On-disk shape: `{"time": int, "scale": int, "bits": int, "codes": [int,...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotDoc {
    pub time: u64,
    pub scale: u32,
    pub bits: u32,
    pub codes: Vec<u32>,
}

impl Snapshot {
    pub fn new(time: u64, encoding: Encoding, codes: Vec<u32>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::validation("snapshot has no codes"));
        }
        if let Some(&code) = codes.iter().find(|&&c| c > encoding.scale) {
            return Err(Error::CodeRange {
                code,
                scale: encoding.scale,
            });
        }
        Ok(Self {
            time,
            encoding,
            codes,
        })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn bit_width(&self) -> u32 {
        self.encoding.bit_width
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn to_doc(&self) -> SnapshotDoc {
        SnapshotDoc {
            time: self.time,
            scale: self.encoding.scale,
            bits: self.encoding.bit_width,
            codes: self.codes.clone(),
        }
    }

    /// The document carries no normalization range; the caller supplies it.
    pub fn from_doc(doc: SnapshotDoc, range: (f64, f64)) -> Result<Self> {
        let encoding = Encoding::new(range.0, range.1, doc.scale)?;
        if doc.bits != encoding.bit_width {
            return Err(Error::validation(format!(
                "bits {} inconsistent with scale {} (expected {})",
                doc.bits, doc.scale, encoding.bit_width
            )));
        }
        Self::new(doc.time, encoding, doc.codes)
    }

    pub fn from_json(s: &str, range: (f64, f64)) -> Result<Self> {
        Self::from_doc(serde_json::from_str(s)?, range)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("snapshot serializes")
    }
}

/// Ingests externally produced running sums.
pub fn snapshot_from_values(values: &[f64], encoding: &Encoding, time: u64) -> Result<Snapshot> {
    if values.is_empty() {
        return Err(Error::validation("no values to encode"));
    }
    let codes = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            encoding.encode(v).map_err(|e| match e {
                Error::Range {
                    value, min, max, ..
                } => Error::Range {
                    value,
                    min,
                    max,
                    at: Some(i),
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Snapshot::new(time, *encoding, codes)
}
