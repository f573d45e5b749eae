//! Seeded random ensembles.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`).
//! Dimensions are processed in the order given; each instance draws its `r`
//! matrices in order, each matrix row-major, and each entry as
//! `sqrt(U)·e^{2πiV}` with `U` then `V` uniform on `[0, 1)`, which is uniform
//! on the unit disc. The same seed and arguments give bit-identical output.

use std::f64::consts::TAU;
use std::io::Write;

use jsr_core::{
    eigen_spectral_radius, gsr_lower_estimate, sweep, BoundSequence, Complex64, ComplexMatrix, MatrixSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Common, Format};
use crate::error::{is_budget, CliError};
use crate::report::opt;

pub const BENCH_HEADER: &str = "d,r,n,instances,mean_width_ratio,violations,exhausted";
const SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub d: usize,
    pub r: usize,
    pub n: usize,
    /// Instances with a finite width ratio at this `n`.
    pub instances: usize,
    pub mean_width_ratio: Option<f64>,
    pub violations: usize,
    pub exhausted: usize,
}

pub fn disc_entry(rng: &mut impl Rng) -> Complex64 {
    let radius = rng.random::<f64>().sqrt();
    let theta = TAU * rng.random::<f64>();
    Complex64::from_polar(radius, theta)
}

pub fn random_set(rng: &mut impl Rng, d: usize, r: usize) -> MatrixSet {
    let members = (0..r)
        .map(|_| {
            let data: Vec<Complex64> = (0..d * d).map(|_| disc_entry(rng)).collect();
            ComplexMatrix::new(d, data).expect("d*d entries")
        })
        .collect();
    MatrixSet::new(members).expect("same dimension")
}

/// Per-`n` violation flags for one instance.
fn violations(set: &MatrixSet, seq: &BoundSequence, n_max: usize, common: &Common) -> Vec<bool> {
    let rel = |x: f64| x * (1.0 + SLACK);
    if set.len() == 1 && set.dim() <= jsr_core::eigen::MAX_ORACLE_DIM {
        if let Ok(rho) = eigen_spectral_radius(&set.members()[0]) {
            return seq
                .entries
                .iter()
                .map(|e| e.result.as_ref().is_ok_and(|iv| !iv.contains(rho, SLACK)))
                .collect();
        }
    }
    // without an oracle: every lower must sit below every upper and above no
    // product-based estimate
    let best_upper = seq.best_upper.unwrap_or(f64::INFINITY);
    let gsr = gsr_lower_estimate(set, n_max, &common.options().budget).ok();
    seq.entries
        .iter()
        .map(|e| {
            e.result.as_ref().is_ok_and(|iv| {
                iv.lower > rel(best_upper) || gsr.is_some_and(|g| rel(iv.upper) < g)
            })
        })
        .collect()
}

pub fn run_bench(seed: u64, dims: &[usize], r: usize, size: usize, n_max: usize, common: &Common) -> Vec<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = common.options();
    let mut rows = Vec::new();
    if size == 0 {
        return rows;
    }
    for &d in dims {
        let mut acc: Vec<BenchRow> = (1..=n_max)
            .map(|n| BenchRow {
                d,
                r,
                n,
                instances: 0,
                mean_width_ratio: None,
                violations: 0,
                exhausted: 0,
            })
            .collect();
        let mut sums = vec![0.0f64; n_max];
        for _ in 0..size {
            let set = random_set(&mut rng, d, r);
            let seq = sweep(&set, n_max, &opts);
            let bad = violations(&set, &seq, n_max, common);
            for (i, entry) in seq.entries.iter().enumerate() {
                let row = &mut acc[i];
                row.violations += bad[i] as usize;
                match &entry.result {
                    Ok(iv) => {
                        let w = iv.width_ratio();
                        if w.is_finite() {
                            sums[i] += w;
                            row.instances += 1;
                        }
                    }
                    Err(e) if is_budget(e) => row.exhausted += 1,
                    Err(_) => {}
                }
            }
        }
        for (row, sum) in acc.iter_mut().zip(sums) {
            if row.instances > 0 {
                row.mean_width_ratio = Some(sum / row.instances as f64);
            }
        }
        rows.extend(acc);
    }
    rows
}

pub fn cmd_bench(
    seed: u64,
    dims: &[usize],
    r: usize,
    size: usize,
    n_max: usize,
    common: &Common,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(&d) = dims.iter().find(|&&d| d == 0) {
        return Err(CliError::Rejected(format!("--dims: dimension must be positive, got {d}")));
    }
    let rows = run_bench(seed, dims, r, size, n_max, common);
    match common.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"))?,
        Format::Csv => {
            writeln!(out, "{BENCH_HEADER}")?;
            for b in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    b.d,
                    b.r,
                    b.n,
                    b.instances,
                    opt(b.mean_width_ratio),
                    b.violations,
                    b.exhausted
                )?;
            }
        }
        Format::Human => {
            writeln!(out, "seed = {seed}, size = {size}, norm = {}, mode = {}", common.options().norm, common.options().mode.name())?;
            writeln!(
                out,
                "{:>3} {:>3} {:>5} {:>9} {:>22} {:>10} {:>9}",
                "d", "r", "n", "instances", "mean width ratio", "violations", "exhausted"
            )?;
            for b in &rows {
                writeln!(
                    out,
                    "{:>3} {:>3} {:>5} {:>9} {:>22} {:>10} {:>9}",
                    b.d,
                    b.r,
                    b.n,
                    b.instances,
                    opt(b.mean_width_ratio),
                    b.violations,
                    b.exhausted
                )?;
            }
        }
    }
    let total: usize = rows.iter().map(|b| b.violations).sum();
    if total > 0 {
        let checked = rows.iter().map(|b| b.instances).sum();
        return Err(CliError::VerificationFailed {
            failed: total,
            total: checked,
        });
    }
    Ok(())
}
