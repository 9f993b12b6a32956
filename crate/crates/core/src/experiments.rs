//! The two numerical studies: the detection-fraction sweep over the noisy
//! singlet family `ρ(p, d)` and the classification of Bell-diagonal states on
//! a grid of correlation coordinates. Both are deterministic functions of
//! their configuration.
//!
//! The sweep splits its sample index space into fixed partitions of
//! [`PARTITION_SIZE`] draws. Partition `k` draws its noise matrices from a
//! ChaCha8 stream seeded with the sweep seed and stream number `k`, and every
//! `p` on the grid reuses the same noise draws. The merge sums integer
//! counts in partition order, so the output does not depend on the number of
//! worker threads.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{
    bell_tsallis_from_populations, bell_variance_from_populations, linear_witness_value,
    nonlinear_witness_value,
};
use crate::error::{Error, Result};
use crate::states::{
    bell_populations, in_state_tetrahedron, in_witness_octahedron, is_npt, noisy_singlet,
    sample_noise_ball, werner, BellDiagonalCoords, DensityMatrix, NoiseBallConfig,
};

/// Number of samples per independently seeded partition.
pub const PARTITION_SIZE: usize = 250;

pub const DETECTION_CSV_HEADER: &str = "p,frac_witness,frac_lur,frac_npt,samples,seed";
pub const GEOMETRY_CSV_HEADER: &str =
    "x,y,z,is_state,in_octahedron,sphere_detected,q,tsallis_detected";

/// Detection fractions at one value of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionRow {
    pub p: f64,
    pub fraction_witness: f64,
    pub fraction_lur: f64,
    pub fraction_npt: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Result of a sweep: one row per `p`, plus the per-sample consistency
/// counters gathered while running.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub d: f64,
    pub rows: Vec<DetectionRow>,
    /// Samples where witness ⇒ LUR ⇒ NPT failed.
    pub chain_violations: usize,
    /// PPT samples flagged by the witness or the LUR.
    pub ppt_detections: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    witness: usize,
    lur: usize,
    npt: usize,
}

#[derive(Debug, Clone, Default)]
struct PartitionResult {
    tallies: Vec<Tally>,
    chain_violations: usize,
    ppt_detections: usize,
}

/// Outcome of the three tests on one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleClassification {
    pub witness: bool,
    pub lur: bool,
    pub npt: bool,
}

impl SampleClassification {
    pub fn satisfies_chain(&self) -> bool {
        (!self.witness || self.lur) && (!self.lur || self.npt)
    }

    pub fn ppt_but_detected(&self) -> bool {
        !self.npt && (self.witness || self.lur)
    }
}

pub fn classify(rho: &DensityMatrix) -> Result<SampleClassification> {
    Ok(SampleClassification {
        witness: linear_witness_value(rho)? < 0.0,
        lur: nonlinear_witness_value(rho)?.detected,
        npt: is_npt(rho)?.0,
    })
}

/// `p = 0, 0.05, …, 1`.
pub fn default_p_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

fn partition_stream(seed: u64, partition: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(partition as u64);
    rng
}

fn run_partition(
    config: &NoiseBallConfig,
    p_grid: &[f64],
    partition: usize,
) -> Result<PartitionResult> {
    let start = partition * PARTITION_SIZE;
    let count = PARTITION_SIZE.min(config.samples - start);
    let mut rng = partition_stream(config.seed, partition);
    let mut out = PartitionResult {
        tallies: vec![Tally::default(); p_grid.len()],
        ..Default::default()
    };
    for _ in 0..count {
        let sigma = sample_noise_ball(config.d, &mut rng)?;
        for (tally, &p) in out.tallies.iter_mut().zip(p_grid) {
            let class = classify(&noisy_singlet(p, &sigma)?)?;
            tally.witness += class.witness as usize;
            tally.lur += class.lur as usize;
            tally.npt += class.npt as usize;
            out.chain_violations += !class.satisfies_chain() as usize;
            out.ppt_detections += class.ppt_but_detected() as usize;
        }
    }
    Ok(out)
}

fn validate_sweep(config: &NoiseBallConfig, p_grid: &[f64]) -> Result<()> {
    if config.samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if let Some(p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidWeight(*p));
    }
    if !(config.d.is_finite() && config.d >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise radius {} must be ≥ 0",
            config.d
        )));
    }
    Ok(())
}

/// Runs the sweep on rayon's global pool.
pub fn run_detection_sweep(config: &NoiseBallConfig, p_grid: &[f64]) -> Result<SweepReport> {
    validate_sweep(config, p_grid)?;
    let partitions = config.samples.div_ceil(PARTITION_SIZE);
    let parts = (0..partitions)
        .into_par_iter()
        .map(|k| run_partition(config, p_grid, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(config, p_grid, parts))
}

/// Runs the sweep on a dedicated pool of `workers` threads (1 = serial).
pub fn run_detection_sweep_with_workers(
    config: &NoiseBallConfig,
    p_grid: &[f64],
    workers: usize,
) -> Result<SweepReport> {
    validate_sweep(config, p_grid)?;
    if workers <= 1 {
        let partitions = config.samples.div_ceil(PARTITION_SIZE);
        let parts = (0..partitions)
            .map(|k| run_partition(config, p_grid, k))
            .collect::<Result<Vec<_>>>()?;
        return Ok(merge(config, p_grid, parts));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_detection_sweep(config, p_grid))
}

fn merge(config: &NoiseBallConfig, p_grid: &[f64], parts: Vec<PartitionResult>) -> SweepReport {
    let mut totals = vec![Tally::default(); p_grid.len()];
    let mut chain_violations = 0;
    let mut ppt_detections = 0;
    for part in parts {
        for (t, pt) in totals.iter_mut().zip(&part.tallies) {
            t.witness += pt.witness;
            t.lur += pt.lur;
            t.npt += pt.npt;
        }
        chain_violations += part.chain_violations;
        ppt_detections += part.ppt_detections;
    }
    let n = config.samples as f64;
    let rows = p_grid
        .iter()
        .zip(totals)
        .map(|(&p, t)| DetectionRow {
            p,
            fraction_witness: t.witness as f64 / n,
            fraction_lur: t.lur as f64 / n,
            fraction_npt: t.npt as f64 / n,
            samples: config.samples,
            seed: config.seed,
        })
        .collect();
    SweepReport {
        d: config.d,
        rows,
        chain_violations,
        ppt_detections,
    }
}

/// Formats `x` with nine significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let exponent: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if !(-5..9).contains(&exponent) {
        return sci;
    }
    let decimals = (8 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_detection_csv<W: Write>(rows: &[DetectionRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{DETECTION_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            format_sig9(r.p),
            format_sig9(r.fraction_witness),
            format_sig9(r.fraction_lur),
            format_sig9(r.fraction_npt),
            r.samples,
            r.seed
        )?;
    }
    Ok(())
}

/// Classification of one grid point in correlation coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryCell {
    pub coords: BellDiagonalCoords,
    pub is_state: bool,
    pub in_octahedron: bool,
    /// Detected by the Bell-projector variance criterion (outside the unit sphere).
    pub sphere_detected: bool,
    /// Tsallis detection per `q`, in the order the `q` values were given.
    pub tsallis_detected: Vec<(f64, bool)>,
}

pub fn classify_coords(coords: BellDiagonalCoords, q_values: &[f64]) -> Result<GeometryCell> {
    let is_state = in_state_tetrahedron(coords);
    let in_octahedron = in_witness_octahedron(coords);
    let mut cell = GeometryCell {
        coords,
        is_state,
        in_octahedron,
        sphere_detected: false,
        tsallis_detected: q_values.iter().map(|&q| (q, false)).collect(),
    };
    if is_state {
        let populations = bell_populations(coords).map(|p| p.max(0.0));
        cell.sphere_detected = bell_variance_from_populations(&populations).detected;
        for entry in cell.tsallis_detected.iter_mut() {
            entry.1 = bell_tsallis_from_populations(&populations, entry.0)?.detected;
        }
    }
    Ok(cell)
}

fn grid_coordinate(i: usize, resolution: usize) -> f64 {
    let span = (resolution - 1) as f64;
    (2.0 * i as f64 - span) / span
}

fn validate_scan(resolution: usize, q_values: &[f64]) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} must be ≥ 2"
        )));
    }
    if let Some(q) = q_values.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
        return Err(Error::InvalidParameter(format!("q = {q} must be > 0")));
    }
    Ok(())
}

/// Lazily classifies the `resolution³` grid over `[−1, 1]³`, `z` varying
/// fastest.
pub fn geometry_cells(
    resolution: usize,
    q_values: &[f64],
) -> Result<impl Iterator<Item = Result<GeometryCell>> + '_> {
    validate_scan(resolution, q_values)?;
    let n = resolution;
    Ok((0..n * n * n).map(move |idx| {
        let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
        let coords = BellDiagonalCoords::new(
            grid_coordinate(i, n),
            grid_coordinate(j, n),
            grid_coordinate(k, n),
        );
        classify_coords(coords, q_values)
    }))
}

pub fn run_geometry_scan(resolution: usize, q_values: &[f64]) -> Result<Vec<GeometryCell>> {
    geometry_cells(resolution, q_values)?.collect()
}

/// Writes one CSV row per cell and `q`.
pub fn write_geometry_csv<W, I>(cells: I, mut w: W) -> io::Result<usize>
where
    W: Write,
    I: IntoIterator<Item = GeometryCell>,
{
    writeln!(w, "{GEOMETRY_CSV_HEADER}")?;
    let mut rows = 0;
    for cell in cells {
        let BellDiagonalCoords { x, y, z } = cell.coords;
        for &(q, detected) in &cell.tsallis_detected {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                format_sig9(x),
                format_sig9(y),
                format_sig9(z),
                cell.is_state,
                cell.in_octahedron,
                cell.sphere_detected,
                format_sig9(q),
                detected
            )?;
            rows += 1;
        }
    }
    Ok(rows)
}

/// Bisection tolerance for the Werner thresholds.
pub const WERNER_TOL: f64 = 1e-8;

/// Smallest detected singlet weight along the white-noise (`d = 0`) line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerThresholds {
    pub analytic: f64,
    pub witness: f64,
    pub lur: f64,
    pub npt: f64,
}

fn bisect(mut detected: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    debug_assert!(!detected(lo)? && detected(hi)?);
    while hi - lo > WERNER_TOL {
        let mid = 0.5 * (lo + hi);
        if detected(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn werner_thresholds() -> Result<WernerThresholds> {
    Ok(WernerThresholds {
        analytic: 1.0 / 3.0,
        witness: bisect(|p| Ok(linear_witness_value(&werner(p)?)? < 0.0))?,
        lur: bisect(|p| Ok(nonlinear_witness_value(&werner(p)?)?.detected))?,
        npt: bisect(|p| Ok(is_npt(&werner(p)?)?.0))?,
    })
}
