//! Domain types shared across the toolkit.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitio::Representation;
use crate::error::{Error, Result};

/// Ordered list of non-negative integer symbol IDs. The universal
/// input/output of the codec.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolSequence {
    pub elements: Vec<u64>,
}

impl SymbolSequence {
    pub fn new(elements: Vec<u64>) -> Self {
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Minimal fixed width covering every element, or `None` for an
    /// empty sequence.
    pub fn max_element(&self) -> Option<u64> {
        self.elements.iter().copied().max()
    }
}

impl From<Vec<u64>> for SymbolSequence {
    fn from(elements: Vec<u64>) -> Self {
        Self { elements }
    }
}

/// How a distribution estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionSource {
    FullPass,
    Sampled { sample_size: usize, seed: u64 },
}

/// Per-symbol occurrence counts plus total, yielding empirical
/// probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionEstimate {
    counts: BTreeMap<u64, u64>,
    total: u64,
    source: DistributionSource,
}

impl DistributionEstimate {
    pub fn from_counts(counts: BTreeMap<u64, u64>, source: DistributionSource) -> Self {
        let total = counts.values().sum();
        Self {
            counts,
            total,
            source,
        }
    }

    /// Exact counts over the whole sequence.
    pub fn full_pass(seq: &SymbolSequence) -> Self {
        let mut counts = BTreeMap::new();
        for &x in &seq.elements {
            *counts.entry(x).or_insert(0u64) += 1;
        }
        Self::from_counts(counts, DistributionSource::FullPass)
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, symbol: u64) -> u64 {
        self.counts.get(&symbol).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn source(&self) -> DistributionSource {
        self.source
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn probability(&self, symbol: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(symbol) as f64 / self.total as f64
        }
    }

    /// Symbols present in the estimate, in ascending ID order.
    pub fn symbols(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().copied()
    }
}

/// Which policy decides the suitable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Frequency-threshold selection.
    Ours,
    /// Vanilla RLE: every symbol is treated as suitable.
    VRle,
    /// Only the most dominant symbol.
    DRle,
    /// Two-pass post-hoc selection from the actual run structure.
    Exploratory,
}

impl Mode {
    pub(crate) fn to_flag_bits(self) -> u8 {
        match self {
            Mode::Ours => 0,
            Mode::VRle => 1,
            Mode::DRle => 2,
            Mode::Exploratory => 3,
        }
    }

    pub(crate) fn from_flag_bits(bits: u8) -> Self {
        match bits {
            1 => Mode::VRle,
            2 => Mode::DRle,
            3 => Mode::Exploratory,
            _ => Mode::Ours,
        }
    }
}

/// Run-control width, symbol representation and selection policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecConfig {
    pub b_r: u32,
    pub representation: Representation,
    pub mode: Mode,
}

impl CodecConfig {
    pub fn new(b_r: u32, representation: Representation, mode: Mode) -> Result<Self> {
        if !(1..=8).contains(&b_r) {
            return Err(Error::InvalidArgument(format!(
                "run-control width must be in [1, 8], got {b_r}"
            )));
        }
        if let Representation::BitPacking { width } = representation {
            if !(1..=64).contains(&width) {
                return Err(Error::InvalidArgument(format!(
                    "bit-packing width must be in [1, 64], got {width}"
                )));
            }
        }
        Ok(Self {
            b_r,
            representation,
            mode,
        })
    }

    /// Largest run length one run-control element can express.
    pub fn max_run_len(&self) -> u64 {
        1u64 << self.b_r
    }
}

/// The set of symbol IDs selected for RLE treatment, plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SuitableSet {
    pub members: BTreeSet<u64>,
    pub mode: Mode,
    /// Per-symbol threshold values used; empty for V-RLE/D-RLE.
    pub thresholds: BTreeMap<u64, f64>,
}

impl SuitableSet {
    pub fn new(members: BTreeSet<u64>, mode: Mode) -> Self {
        Self {
            members,
            mode,
            thresholds: BTreeMap::new(),
        }
    }

    pub fn contains(&self, symbol: u64) -> bool {
        self.members.contains(&symbol)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
