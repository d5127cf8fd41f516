//! Wall-clock scaling measurements: single local computations at the worst
//! case n = 6(ℓ−1), the full mod-p pipeline, and least-squares log-log
//! slopes over an ascending ℓ series.

use crate::error::{Error, Result};
use crate::globalphi::modular_poly_mod_p;
use crate::localphi::LocalEngine;
use crate::ssinit::{supersingular_count, supersingular_j};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub ell: u64,
    /// Extension degree used by the timed local computation.
    pub n_used: u32,
    /// Median seconds for one φ_ℓ(x, j) at n = 6(ℓ−1).
    pub local_seconds: f64,
    /// Median seconds for the full φ_ℓ(x, y) mod p pipeline.
    pub pipeline_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub p: u64,
    pub reps: u32,
    pub rows: Vec<BenchRow>,
    /// Fitted slope of ln(local time) against ln ℓ.
    pub local_slope: f64,
    /// Fitted slope of ln(pipeline time) against ln ℓ.
    pub pipeline_slope: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Time the pipeline at each ℓ (ascending) over a fixed prime p, `reps`
/// repetitions each, reporting medians and fitted slopes.
pub fn run_bench(ells: &[u64], p: u64, reps: u32, seed: u64) -> Result<BenchReport> {
    if ells.is_empty() || reps == 0 {
        return Err(Error::InvalidParameter("need at least one l and one repetition".into()));
    }
    if ells.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("l values must be ascending".into()));
    }
    let mut rows = Vec::new();
    for (i, &ell) in ells.iter().enumerate() {
        if p < 12 * ell + 13 || supersingular_count(p) < ell + 1 || p == ell {
            return Err(Error::InvalidParameter(format!("p = {p} is not valid for l = {ell}")));
        }
        let n_used = 6 * (ell as u32 - 1);
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ (i as u64) << 32);
        let j0 = supersingular_j(p, &mut rng)?;

        let mut engine = LocalEngine::new(p, ell)?;
        // warm the extension cache so the timings capture the per-node cost
        engine.local_modular_poly_with_degree(&j0, n_used, &mut rng)?;
        let mut local_times = Vec::with_capacity(reps as usize);
        for _ in 0..reps {
            let t0 = Instant::now();
            engine.local_modular_poly_with_degree(&j0, n_used, &mut rng)?;
            local_times.push(t0.elapsed().as_secs_f64());
        }

        let mut pipeline_times = Vec::with_capacity(reps as usize);
        for _ in 0..reps {
            let t0 = Instant::now();
            modular_poly_mod_p(p, ell, &mut rng)?;
            pipeline_times.push(t0.elapsed().as_secs_f64());
        }

        rows.push(BenchRow {
            ell,
            n_used,
            local_seconds: median(local_times),
            pipeline_seconds: median(pipeline_times),
        });
    }
    let local_pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.ell as f64).ln(), r.local_seconds.ln()))
        .collect();
    let pipeline_pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.ell as f64).ln(), r.pipeline_seconds.ln()))
        .collect();
    Ok(BenchReport {
        p,
        reps,
        rows,
        local_slope: fit_slope(&local_pts),
        pipeline_slope: fit_slope(&pipeline_pts),
    })
}
