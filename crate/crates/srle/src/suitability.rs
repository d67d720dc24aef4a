//! The selection policy: which symbols get RLE treatment.
//!
//! A symbol is worth encoding when its empirical probability reaches
//! b_r / (b_x + b_r). Membership is decided with exact integer
//! arithmetic on counts so that boundary cases never flip on
//! floating-point noise.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::types::{DistributionEstimate, Mode, SuitableSet};

/// The frequency threshold above which RLE cannot inflate symbol `x`
/// in expectation: b_r / (b_x + b_r).
pub fn suitability_threshold(b_x: u32, b_r: u32) -> Result<f64> {
    if b_x == 0 || b_r == 0 {
        return Err(Error::InvalidArgument(
            "bit widths must be at least 1".into(),
        ));
    }
    Ok(f64::from(b_r) / f64::from(b_x + b_r))
}

/// Selects every symbol whose empirical probability meets its
/// threshold. `width_of` supplies the per-symbol bit width (constant
/// under bit-packing, value-dependent under variable-length).
///
/// Membership is decided exactly: count * (b_x + b_r) >= b_r * total.
pub fn build_suitable_set(
    dist: &DistributionEstimate,
    b_r: u32,
    width_of: impl Fn(u64) -> Result<u32>,
) -> Result<SuitableSet> {
    if b_r == 0 {
        return Err(Error::InvalidArgument("b_r must be at least 1".into()));
    }
    let total = dist.total() as u128;
    let mut members = BTreeSet::new();
    let mut thresholds = BTreeMap::new();
    for (&symbol, &count) in dist.counts() {
        let b_x = width_of(symbol)?;
        if b_x == 0 {
            return Err(Error::InvalidArgument("b_x must be at least 1".into()));
        }
        thresholds.insert(symbol, suitability_threshold(b_x, b_r)?);
        if count as u128 * (b_x + b_r) as u128 >= b_r as u128 * total {
            members.insert(symbol);
        }
    }
    Ok(SuitableSet {
        members,
        mode: Mode::Ours,
        thresholds,
    })
}

/// Singleton set containing the highest-count symbol; ties broken by
/// smallest symbol ID. Empty distribution yields the empty set.
pub fn dominant_set(dist: &DistributionEstimate) -> SuitableSet {
    let mut members = BTreeSet::new();
    let mut best: Option<(u64, u64)> = None;
    for (&symbol, &count) in dist.counts() {
        match best {
            Some((_, best_count)) if count <= best_count => {}
            _ => best = Some((symbol, count)),
        }
    }
    if let Some((symbol, _)) = best {
        members.insert(symbol);
    }
    SuitableSet::new(members, Mode::DRle)
}

/// Every observed symbol (vanilla RLE behavior).
pub fn full_set(dist: &DistributionEstimate) -> SuitableSet {
    SuitableSet::new(dist.symbols().collect(), Mode::VRle)
}
