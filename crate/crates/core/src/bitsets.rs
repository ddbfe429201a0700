//! Partition of the n-bit code space into codes realized by a snapshot and
//! codes absent from it, with per-code multiplicities.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::netmodel::Snapshot;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizedSets {
    bit_width: u32,
    present: BTreeSet<u32>,
    absent: BTreeSet<u32>,
    multiplicities: BTreeMap<u32, usize>,
}

impl RealizedSets {
    /// Builds the partition from multiplicities of the realized codes. Every
    /// other code of the `2^bit_width` space goes to the complement.
    pub fn from_multiplicities(bit_width: u32, multiplicities: BTreeMap<u32, usize>) -> Self {
        let present: BTreeSet<u32> = multiplicities.keys().copied().collect();
        let absent = (0..1u32 << bit_width)
            .filter(|c| !present.contains(c))
            .collect();
        Self {
            bit_width,
            present,
            absent,
            multiplicities,
        }
    }

    pub fn bit_width(&self) -> u32 {
        self.bit_width
    }

    /// `S_n`: codes that occur in the snapshot.
    pub fn present(&self) -> &BTreeSet<u32> {
        &self.present
    }

    /// `S_n^c`: codes that do not occur.
    pub fn absent(&self) -> &BTreeSet<u32> {
        &self.absent
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, usize> {
        &self.multiplicities
    }

    pub fn multiplicity(&self, code: u32) -> usize {
        self.multiplicities.get(&code).copied().unwrap_or(0)
    }

    pub fn contains(&self, code: u32) -> bool {
        self.present.contains(&code)
    }

    pub fn total_count(&self) -> usize {
        self.multiplicities.values().sum()
    }

    /// Checks disjointness, coverage of all `2^n` codes, and that
    /// multiplicities are positive and keyed exactly by the present set.
    pub fn is_valid_partition(&self) -> bool {
        let space = 1usize << self.bit_width;
        self.present.len() + self.absent.len() == space
            && self.present.is_disjoint(&self.absent)
            && self
                .present
                .iter()
                .chain(&self.absent)
                .all(|&c| (c as usize) < space)
            && self.multiplicities.values().all(|&m| m >= 1)
            && self.multiplicities.keys().eq(self.present.iter())
    }

    #[cfg(test)]
    pub(crate) fn present_mut(&mut self) -> &mut BTreeSet<u32> {
        &mut self.present
    }
}

/// Exact classical construction: one pass over the snapshot.
pub fn realized_sets_classical(snapshot: &Snapshot) -> RealizedSets {
    let mut multiplicities = BTreeMap::new();
    for &code in snapshot.codes() {
        *multiplicities.entry(code).or_insert(0) += 1;
    }
    RealizedSets::from_multiplicities(snapshot.bit_width(), multiplicities)
}

/// True iff every snapshot code lands in `S_n` and every element of `S_n`
/// is hit by at least one code.
pub fn surjection_check(snapshot: &Snapshot, sets: &RealizedSets) -> bool {
    if !snapshot.codes().iter().all(|c| sets.present().contains(c)) {
        return false;
    }
    let hit: BTreeSet<u32> = snapshot.codes().iter().copied().collect();
    sets.present().iter().all(|c| hit.contains(c))
}
