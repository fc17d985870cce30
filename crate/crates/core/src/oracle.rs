//! Brute-force checks of the sup-inf claims: exhaustive grids over the
//! effective phases and the slopes, worst-case angle search, and
//! Monte-Carlo averages of the phase-dependent term.
//!
//! The burst sum depends on the phases only through pairwise differences,
//! so the first phase of each side is pinned to zero. Grid work is split
//! into fixed chunks evaluated in parallel and reduced in chunk order, which
//! keeps every result independent of the thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{AntennaArray, LinkGains, ScenarioDraw};
use crate::error::{input, Error, Result};
use crate::hybrid::{mrc_burst_unchecked, per_port_optimal_slopes, port_g_bar, PortPartition};
use crate::schemes::{burst_sum_unchecked, decompose, validate_inputs, Scheme, SlopeSet, SystemConfig};
use crate::slopes::Construction;

/// Upper bound on burst-sum evaluations of a single search.
pub const MAX_EVALUATIONS: u128 = 100_000_000;

const CHUNK: u64 = 2048;

/// Lattice sizes for the grid searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points per free phase dimension over `[0, 2π)`.
    pub psi_points: usize,
    /// Points per free slope dimension, endpoints included.
    pub slope_points: usize,
    /// Slope interval in rad/s.
    pub slope_range: [f64; 2],
    /// Azimuth points over `[0, 2π)`.
    pub angle_points: usize,
}

impl GridSpec {
    pub fn new(psi_points: usize, slope_points: usize, slope_range: [f64; 2], angle_points: usize) -> Result<Self> {
        Self {
            psi_points,
            slope_points,
            slope_range,
            angle_points,
        }
        .validated()
    }

    /// Slope lattice `α = 2πq/(K·R·T)` for `q ∈ [0, K·R)`, i.e. the half-period
    /// advances `qπ/(K·R)` covering `[0, π)` with refinement `R`.
    pub fn x_lattice(k: usize, refinement: usize, period: f64, psi_points: usize) -> Result<Self> {
        if k == 0 || refinement == 0 {
            return Err(input("K and refinement must be at least 1"));
        }
        let n = k * refinement;
        let hi = TAU / period * (n as f64 - 1.0) / n as f64;
        Self::new(psi_points, n.max(2), [0.0, hi], 360)
    }

    pub fn validated(self) -> Result<Self> {
        if self.psi_points < 2 || self.slope_points < 2 || self.angle_points < 2 {
            return Err(input("grid counts must be at least 2"));
        }
        let [lo, hi] = self.slope_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(input(format!("slope range [{lo}, {hi}] is not an interval")));
        }
        Ok(self)
    }

    pub fn psi_value(&self, i: usize) -> f64 {
        TAU * i as f64 / self.psi_points as f64
    }

    pub fn slope_value(&self, i: usize) -> f64 {
        let [lo, hi] = self.slope_range;
        lo + (hi - lo) * i as f64 / (self.slope_points - 1) as f64
    }

    pub fn angle_value(&self, i: usize) -> f64 {
        TAU * i as f64 / self.angle_points as f64
    }
}

/// Free phase dimensions `(tx, rx)` that affect the burst sum.
pub fn phase_dims(scheme: Scheme, n_tx: usize, n_rx: usize) -> (usize, usize) {
    let tx = if scheme.uses_tx_phases() { n_tx - 1 } else { 0 };
    (tx, n_rx - 1)
}

fn lattice_size(points: usize, dims: usize) -> u128 {
    (points as u128).checked_pow(dims as u32).unwrap_or(u128::MAX)
}

fn guard(evaluations: u128) -> Result<()> {
    if evaluations > MAX_EVALUATIONS {
        return Err(Error::GridTooLarge {
            evaluations,
            limit: MAX_EVALUATIONS,
        });
    }
    Ok(())
}

/// Writes lattice point `idx` into `out[1..]`, leaving `out[0] = 0`; the
/// tx digits come first, least significant first.
fn decode(
    mut idx: u64,
    points: usize,
    psi_s: &mut [f64],
    n_s: usize,
    psi_r: &mut [f64],
    n_r: usize,
    grid_value: impl Fn(usize) -> f64,
) {
    let p = points as u64;
    for v in psi_s.iter_mut().skip(1).take(n_s) {
        *v = grid_value((idx % p) as usize);
        idx /= p;
    }
    for v in psi_r.iter_mut().skip(1).take(n_r) {
        *v = grid_value((idx % p) as usize);
        idx /= p;
    }
}

/// Sequential minimum over a range of phase-lattice indices; the first
/// minimum wins.
#[allow(clippy::too_many_arguments)]
fn min_over_phase_range<F>(
    grid: &GridSpec,
    n_tx: usize,
    n_rx: usize,
    n_s: usize,
    n_r: usize,
    range: std::ops::Range<u64>,
    eval: &F,
) -> (f64, u64)
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let mut psi_s = vec![0.0; n_tx];
    let mut psi_r = vec![0.0; n_rx];
    let mut best = (f64::INFINITY, range.start);
    for idx in range {
        decode(idx, grid.psi_points, &mut psi_s, n_s, &mut psi_r, n_r, |i| {
            grid.psi_value(i)
        });
        let v = eval(&psi_s, &psi_r);
        if v < best.0 {
            best = (v, idx);
        }
    }
    best
}

fn phase_point(grid: &GridSpec, n_tx: usize, n_rx: usize, n_s: usize, n_r: usize, idx: u64) -> (Vec<f64>, Vec<f64>) {
    let mut psi_s = vec![0.0; n_tx];
    let mut psi_r = vec![0.0; n_rx];
    decode(idx, grid.psi_points, &mut psi_s, n_s, &mut psi_r, n_r, |i| {
        grid.psi_value(i)
    });
    (psi_s, psi_r)
}

/// Minimum burst sum over the phase lattice and where it occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseInf {
    pub value: f64,
    pub psi_s: Vec<f64>,
    pub psi_r: Vec<f64>,
    pub evaluations: u128,
}

fn parallel_phase_inf<F>(grid: &GridSpec, n_tx: usize, n_rx: usize, n_s: usize, n_r: usize, eval: F) -> Result<PhaseInf>
where
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    let total = lattice_size(grid.psi_points, n_s + n_r);
    guard(total)?;
    let total = total as u64;
    let chunks = total.div_ceil(CHUNK);
    let partial: Vec<(f64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(total);
            min_over_phase_range(grid, n_tx, n_rx, n_s, n_r, range, &eval)
        })
        .collect();
    let (value, idx) = partial
        .into_iter()
        .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best });
    let (psi_s, psi_r) = phase_point(grid, n_tx, n_rx, n_s, n_r, idx);
    Ok(PhaseInf {
        value,
        psi_s,
        psi_r,
        evaluations: total as u128,
    })
}

/// Exhaustive minimum of the burst sum over the phase lattice.
pub fn inf_over_phases(
    scheme: Scheme,
    cfg: &SystemConfig,
    slopes: &SlopeSet,
    gains: &LinkGains,
    grid: &GridSpec,
) -> Result<PhaseInf> {
    let grid = grid.validated()?;
    validate_inputs(scheme, cfg, &ScenarioDraw::zero(cfg.n_tx, cfg.n_rx), slopes, gains)?;
    let (n_s, n_r) = phase_dims(scheme, cfg.n_tx, cfg.n_rx);
    parallel_phase_inf(&grid, cfg.n_tx, cfg.n_rx, n_s, n_r, |ps, pr| {
        burst_sum_unchecked(scheme, cfg, ps, pr, slopes, gains)
    })
}

/// [`inf_over_phases`] for the multi-port receiver.
pub fn mrc_inf_over_phases(
    scheme: Scheme,
    cfg: &SystemConfig,
    partition: &PortPartition,
    slopes: &SlopeSet,
    gains: &LinkGains,
    grid: &GridSpec,
) -> Result<PhaseInf> {
    let grid = grid.validated()?;
    check_partition(cfg, partition)?;
    validate_inputs(scheme, cfg, &ScenarioDraw::zero(cfg.n_tx, cfg.n_rx), slopes, gains)?;
    let (n_s, n_r) = phase_dims(scheme, cfg.n_tx, cfg.n_rx);
    parallel_phase_inf(&grid, cfg.n_tx, cfg.n_rx, n_s, n_r, |ps, pr| {
        mrc_burst_unchecked(scheme, cfg, partition, ps, pr, slopes, gains)
    })
}

fn check_partition(cfg: &SystemConfig, partition: &PortPartition) -> Result<()> {
    if partition.n_rx() != cfg.n_rx {
        return Err(input(format!(
            "ports cover {} receive antennas, system has {}",
            partition.n_rx(),
            cfg.n_rx
        )));
    }
    Ok(())
}

/// Best slope set found on the slope lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupInf {
    /// Largest phase-lattice minimum over the slope lattice.
    pub value: f64,
    pub slopes: SlopeSet,
    /// Minimizing phases for the best slopes.
    pub psi_s: Vec<f64>,
    pub psi_r: Vec<f64>,
    /// `K·Ḡ`.
    pub bound: f64,
    pub evaluations: u128,
}

impl SupInf {
    /// `(K·Ḡ − value)/(K·Ḡ)`.
    pub fn relative_gap(&self) -> f64 {
        (self.bound - self.value) / self.bound
    }
}

/// Maximizes the phase-lattice minimum over the slope lattice, with the
/// first slope of each side pinned to zero.
pub fn sup_inf_search(scheme: Scheme, cfg: &SystemConfig, gains: &LinkGains, grid: &GridSpec) -> Result<SupInf> {
    let grid = grid.validated()?;
    let (n_s, n_r) = phase_dims(scheme, cfg.n_tx, cfg.n_rx);
    // Slope dimensions coincide with the phase dimensions.
    let slope_total = lattice_size(grid.slope_points, n_s + n_r);
    let psi_total = lattice_size(grid.psi_points, n_s + n_r);
    let evaluations = slope_total.saturating_mul(psi_total);
    guard(evaluations)?;
    let probe = SlopeSet::zero(cfg.n_tx, cfg.n_rx);
    validate_inputs(scheme, cfg, &ScenarioDraw::zero(cfg.n_tx, cfg.n_rx), &probe, gains)?;

    let slope_at = |idx: u64| {
        let mut set = SlopeSet::zero(cfg.n_tx, cfg.n_rx);
        decode(idx, grid.slope_points, &mut set.tx, n_s, &mut set.rx, n_r, |i| {
            grid.slope_value(i)
        });
        set.provenance = "grid-search".into();
        set
    };
    let per_slope: Vec<(f64, u64)> = (0..slope_total as u64)
        .into_par_iter()
        .map(|si| {
            let slopes = slope_at(si);
            min_over_phase_range(
                &grid,
                cfg.n_tx,
                cfg.n_rx,
                n_s,
                n_r,
                0..psi_total as u64,
                &|ps: &[f64], pr: &[f64]| burst_sum_unchecked(scheme, cfg, ps, pr, &slopes, gains),
            )
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, 0u64, 0u64);
    for (si, (v, pi)) in per_slope.into_iter().enumerate() {
        if v > best.0 {
            best = (v, si as u64, pi);
        }
    }
    let (psi_s, psi_r) = phase_point(&grid, cfg.n_tx, cfg.n_rx, n_s, n_r, best.2);
    Ok(SupInf {
        value: best.0,
        slopes: slope_at(best.1),
        psi_s,
        psi_r,
        bound: cfg.burst_len as f64 * gains.g_bar(),
        evaluations,
    })
}

/// Lowest attainable burst value over the angle grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub phi_r: f64,
    pub phi_s: f64,
    /// `K·Ḡ(φ^r, φ^s)`, or `K·Σ_p Ḡ_p` with ports.
    pub value: f64,
}

/// Grid minimum over `(φ^r, φ^s)` of the optimal burst value. Ties go to the
/// smallest `φ^r`, then the smallest `φ^s`.
pub fn worst_case_angles(
    tx: &AntennaArray,
    rx: &AntennaArray,
    k: usize,
    angle_points: usize,
    partition: Option<&PortPartition>,
) -> Result<WorstCase> {
    if angle_points < 2 || k == 0 {
        return Err(input("need at least 2 angle points and K ≥ 1"));
    }
    let single;
    let partition = match partition {
        Some(p) => {
            if p.n_rx() != rx.len() {
                return Err(input("port partition does not match the receive array"));
            }
            p
        }
        None => {
            single = PortPartition::single(rx.len())?;
            &single
        }
    };
    let angle = |i: usize| TAU * i as f64 / angle_points as f64;
    let tx_mean: Vec<f64> = (0..angle_points)
        .map(|i| crate::channel::mean_power(&tx.gains(angle(i))))
        .collect();
    let rx_sum: Vec<f64> = (0..angle_points)
        .map(|i| port_g_bar(partition, &LinkGains::new(vec![1.0], rx.gains(angle(i)))))
        .collect();
    let kf = k as f64;
    let rows: Vec<(f64, usize)> = rx_sum
        .par_iter()
        .map(|r| {
            let mut best = (f64::INFINITY, 0);
            for (j, t) in tx_mean.iter().enumerate() {
                let v = kf * r * t;
                if v < best.0 {
                    best = (v, j);
                }
            }
            best
        })
        .collect();
    let mut best = (f64::INFINITY, 0, 0);
    for (i, (v, j)) in rows.into_iter().enumerate() {
        if v < best.0 {
            best = (v, i, j);
        }
    }
    Ok(WorstCase {
        phi_r: angle(best.1),
        phi_s: angle(best.2),
        value: best.0,
    })
}

/// Monte-Carlo statistics of the phase-dependent term `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JStats {
    pub samples: usize,
    pub mean: f64,
    /// Sample standard deviation.
    pub std_dev: f64,
    /// `std_dev/√samples`.
    pub std_err: f64,
    pub max_abs: f64,
}

impl JStats {
    /// `|mean| ≤ z·std_err`, with an absolute floor for degenerate samples.
    pub fn mean_within(&self, z: f64) -> bool {
        self.mean.abs() <= z * self.std_err + 1e-12
    }
}

/// Minimum Monte-Carlo sample count for [`average_j`].
pub const MIN_AVERAGE_SAMPLES: usize = 1000;

/// Averages `J` over phases drawn uniformly from `[0, 2π)` on both sides.
///
/// Draws are generated sequentially from `seed`, then evaluated in parallel
/// and reduced in draw order.
pub fn average_j(
    scheme: Scheme,
    cfg: &SystemConfig,
    slopes: &SlopeSet,
    gains: &LinkGains,
    samples: usize,
    seed: u64,
) -> Result<JStats> {
    if samples < MIN_AVERAGE_SAMPLES {
        return Err(input(format!(
            "need at least {MIN_AVERAGE_SAMPLES} samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<ScenarioDraw> = (0..samples)
        .map(|_| {
            let psi_s = (0..cfg.n_tx).map(|_| rng.random::<f64>() * TAU).collect();
            let psi_r = (0..cfg.n_rx).map(|_| rng.random::<f64>() * TAU).collect();
            ScenarioDraw::from_phases(psi_s, psi_r)
        })
        .collect();
    let values: Vec<f64> = draws
        .par_iter()
        .map(|d| decompose(scheme, cfg, d, slopes, gains).map(|x| x.variation))
        .collect::<Result<_>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let std_dev = var.sqrt();
    Ok(JStats {
        samples,
        mean,
        std_dev,
        std_err: std_dev / n.sqrt(),
        max_abs: values.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
    })
}

/// Grid check that per-port optimal slopes reach `K·Σ_p Ḡ_p` for every phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MrcCheck {
    pub attained: f64,
    pub bound: f64,
    pub slopes: SlopeSet,
    pub passed: bool,
}

/// Relative tolerance of [`mrc_bound_check`].
pub const MRC_TOL: f64 = 1e-6;

pub fn mrc_bound_check(
    scheme: Scheme,
    cfg: &SystemConfig,
    partition: &PortPartition,
    gains: &LinkGains,
    grid: &GridSpec,
    variant: Construction,
) -> Result<MrcCheck> {
    check_partition(cfg, partition)?;
    let grid = grid.validated()?;
    let slopes = per_port_optimal_slopes(scheme, partition, cfg.n_tx, cfg.burst_len, cfg.period, variant)?;
    validate_inputs(scheme, cfg, &ScenarioDraw::zero(cfg.n_tx, cfg.n_rx), &slopes, gains)?;
    let (n_s, n_r) = phase_dims(scheme, cfg.n_tx, cfg.n_rx);
    let inf = parallel_phase_inf(&grid, cfg.n_tx, cfg.n_rx, n_s, n_r, |ps, pr| {
        mrc_burst_unchecked(scheme, cfg, partition, ps, pr, &slopes, gains)
    })?;
    let bound = cfg.burst_len as f64 * port_g_bar(partition, gains);
    Ok(MrcCheck {
        attained: inf.value,
        bound,
        passed: (inf.value - bound).abs() <= MRC_TOL * bound,
        slopes,
    })
}
