//! Expected-reclaim analysis for i.i.d. inputs.
//!
//! `rx_exact` evaluates the full head/middle/tail summation for the
//! expected number of elements RLE reclaims for a symbol of
//! probability `p` in a sequence of length `n`, with runs split at
//! 2^b_r. `rx_approx` is the O(1) simplification p^2 (n - 1). The rest
//! of the module carries the supporting closed forms, error terms, a
//! Monte-Carlo estimator used as an independent oracle, and the sweep
//! that serializes (exact, approx, epsilon1) grids to CSV.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Validated inputs for the expected-reclaim computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxInputs {
    pub p: f64,
    pub n: u64,
    pub b_r: u32,
}

impl RxInputs {
    pub fn new(p: f64, n: u64, b_r: u32) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "probability must be in (0, 1], got {p}"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidArgument("length must be at least 1".into()));
        }
        if !(1..=8).contains(&b_r) {
            return Err(Error::InvalidArgument(format!(
                "run-control width must be in [1, 8], got {b_r}"
            )));
        }
        Ok(Self { p, n, b_r })
    }
}

/// One grid point of the exact-vs-approximate comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub n: u64,
    pub b_r: u32,
    pub rx_exact: f64,
    pub rx_approx: f64,
    pub epsilon1: f64,
}

/// Elements reclaimed when a run of length `len` is split at 2^b_r:
/// len occurrences collapse to ceil(len / 2^b_r) encoded entries.
fn reclaimed(len: u64, b_r: u32) -> u64 {
    len - len.div_ceil(1u64 << b_r)
}

/// Exact expected reclaimed element count, by direct summation over
/// run lengths. O(n); fine at desk scale.
pub fn rx_exact(inputs: &RxInputs) -> f64 {
    let RxInputs { p, n, b_r } = *inputs;
    let q = 1.0 - p;
    let mut total = 0.0;

    // Runs of length 1..=n-2 can sit at the head, tail, or anywhere in
    // the middle with a non-member on both sides.
    if n >= 3 {
        let mut pw = p; // p^run_len, maintained incrementally
        for run_len in 1..=(n - 2) {
            let w = reclaimed(run_len, b_r) as f64;
            if w > 0.0 {
                let middle = q * q * pw * (n - 1 - run_len) as f64;
                let edges = 2.0 * pw * q;
                total += (middle + edges) * w;
            }
            pw *= p;
            if pw == 0.0 {
                break;
            }
        }
    }

    // Length n-1 fits only at the head or tail.
    if n >= 2 {
        total += 2.0 * p.powi((n - 1) as i32) * q * reclaimed(n - 1, b_r) as f64;
    }

    // Length n: the whole sequence is one run.
    total += p.powi(n as i32) * reclaimed(n, b_r) as f64;

    total
}

/// The O(1) approximation p^2 (n - 1).
pub fn rx_approx(p: f64, n: u64) -> f64 {
    p * p * (n.saturating_sub(1)) as f64
}

/// Bits saved by encoding a symbol with RLE:
/// b_x * N_x - (b_x + b_r) * (N_x - rx).
pub fn expected_savings_bits(n_x: u64, b_x: u32, b_r: u32, rx: f64) -> f64 {
    let n_x = n_x as f64;
    f64::from(b_x) * n_x - f64::from(b_x + b_r) * (n_x - rx)
}

/// The truncation term p^n (n - ceil(n / 2^b_r)). Underflows cleanly
/// to zero for large n.
pub fn epsilon1(p: f64, n: u64, b_r: u32) -> f64 {
    let pw = p.powi(n as i32);
    if pw == 0.0 {
        return 0.0;
    }
    pw * reclaimed(n, b_r) as f64
}

/// Monte-Carlo estimate of the expected reclaim: draws `trials`
/// i.i.d. binary sequences and averages the per-sequence reclaimed
/// count over maximal runs. Deterministic for a fixed seed.
pub fn rx_monte_carlo(p: f64, n: u64, b_r: u32, trials: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0u64;
    for _ in 0..trials {
        let mut run = 0u64;
        for _ in 0..n {
            if rng.gen_bool(p) {
                run += 1;
            } else if run > 0 {
                sum += reclaimed(run, b_r);
                run = 0;
            }
        }
        if run > 0 {
            sum += reclaimed(run, b_r);
        }
    }
    sum as f64 / trials as f64
}

fn check_ratio(a: f64) -> Result<f64> {
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(Error::InvalidArgument(format!(
            "ratio must be in (0, 1), got {a}"
        )))
    }
}

/// Sum of a^n over n >= 0: 1 / (1 - a).
pub fn geometric_sum(a: f64) -> Result<f64> {
    let a = check_ratio(a)?;
    Ok(1.0 / (1.0 - a))
}

/// Sum of n a^n over n >= 0: a / (1 - a)^2.
pub fn geometric_sum_n(a: f64) -> Result<f64> {
    let a = check_ratio(a)?;
    Ok(a / ((1.0 - a) * (1.0 - a)))
}

/// Sum of n^2 a^n over n >= 0: (a^2 + a) / (1 - a)^3.
pub fn geometric_sum_n2(a: f64) -> Result<f64> {
    let a = check_ratio(a)?;
    Ok((a * a + a) / ((1.0 - a) * (1.0 - a) * (1.0 - a)))
}

/// Which weight the truncated series applies to each term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaKind {
    Plain,
    Linear,
    Quadratic,
}

/// Truncated series Sum_{n=0}^{terms} a^n * {1, n, n^2}; converges to
/// the matching closed form from below.
pub fn lemma_partial_sum(kind: LemmaKind, a: f64, terms: u64) -> Result<f64> {
    let a = check_ratio(a)?;
    let mut sum = 0.0;
    let mut pw = 1.0;
    for n in 0..=terms {
        let weight = match kind {
            LemmaKind::Plain => 1.0,
            LemmaKind::Linear => n as f64,
            LemmaKind::Quadratic => (n * n) as f64,
        };
        sum += pw * weight;
        pw *= a;
    }
    Ok(sum)
}

/// Evaluates every (b_r, n, p) grid point, row-major over (b_r, n, p)
/// so output files are stable.
pub fn sweep_rx(p_grid: &[f64], n_grid: &[u64], b_r_grid: &[u32]) -> Result<Vec<SweepRow>> {
    if p_grid.is_empty() || n_grid.is_empty() || b_r_grid.is_empty() {
        return Err(Error::InvalidArgument("sweep grids must be non-empty".into()));
    }
    let mut rows = Vec::with_capacity(p_grid.len() * n_grid.len() * b_r_grid.len());
    for &b_r in b_r_grid {
        for &n in n_grid {
            for &p in p_grid {
                let inputs = RxInputs::new(p, n, b_r)?;
                rows.push(SweepRow {
                    p,
                    n,
                    b_r,
                    rx_exact: rx_exact(&inputs),
                    rx_approx: rx_approx(p, n),
                    epsilon1: epsilon1(p, n, b_r),
                });
            }
        }
    }
    Ok(rows)
}

/// Writes sweep rows as CSV with the stable header
/// `p,N,b_r,rx_exact,rx_approx,epsilon1`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "p,N,b_r,rx_exact,rx_approx,epsilon1")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.p, row.n, row.b_r, row.rx_exact, row.rx_approx, row.epsilon1
        )?;
    }
    Ok(())
}
