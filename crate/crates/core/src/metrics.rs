//! Burst error probability, sum-SNR distributions over random angles, and
//! equivalent radiation patterns.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antennas::AntennaPattern;
use crate::channel::{AntennaArray, LinkGains};
use crate::error::{input, write_file, Result};
use crate::hybrid::{mrc_burst_unchecked, PortPartition};
use crate::oracle::{inf_over_phases, mrc_inf_over_phases, GridSpec};
use crate::phase::power_to_db;
use crate::schemes::{burst_sum_unchecked, validate_inputs, Scheme, SlopeSet, SnrTrace, SystemConfig};

/// Exponential packet error model `PEP(γ) = min(1, exp(−c·γ·ρ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PepModel {
    /// `c > 0`.
    pub scale: f64,
    /// `P_r/σ²_n`, turning normalized SNRs into absolute ones.
    pub rho: f64,
}

impl Default for PepModel {
    fn default() -> Self {
        Self { scale: 1.0, rho: 1.0 }
    }
}

impl PepModel {
    pub fn new(scale: f64, rho: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !(rho > 0.0 && rho.is_finite()) {
            return Err(input(format!(
                "PEP scale and rho must be positive, got {scale} and {rho}"
            )));
        }
        Ok(Self { scale, rho })
    }

    pub fn pep(&self, gamma: f64) -> f64 {
        (-self.scale * gamma * self.rho).exp().min(1.0)
    }
}

/// Probability that every packet of the burst is lost, with independent
/// packet errors.
pub fn burst_error_probability(trace: &SnrTrace, model: &PepModel) -> f64 {
    trace.per_packet.iter().map(|g| model.pep(*g)).product()
}

/// Empirical distribution of sum-SNR values in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cdf {
    values_db: Vec<f64>,
}

impl Cdf {
    /// Sorts the samples; the `i`-th smallest gets probability `(i+1)/n`.
    pub fn from_db(mut values_db: Vec<f64>) -> Result<Self> {
        if values_db.is_empty() || values_db.iter().any(|v| v.is_nan()) {
            return Err(input("CDF needs a non-empty set of non-NaN samples"));
        }
        values_db.sort_by(f64::total_cmp);
        Ok(Self { values_db })
    }

    pub fn from_linear(values: &[f64]) -> Result<Self> {
        Self::from_db(values.iter().map(|v| power_to_db(*v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_db.is_empty()
    }

    pub fn values_db(&self) -> &[f64] {
        &self.values_db
    }

    pub fn probability(&self, i: usize) -> f64 {
        (i + 1) as f64 / self.values_db.len() as f64
    }

    /// Smallest sample whose cumulative probability reaches `p`; `p = 0`
    /// gives the minimum.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.values_db.len();
        let p = p.clamp(0.0, 1.0);
        let rank = (p * n as f64).ceil() as usize;
        self.values_db[rank.saturating_sub(1).min(n - 1)]
    }

    /// `snr_db,prob` rows with values rounded to 0.01 dB.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,prob\n");
        for (i, v) in self.values_db.iter().enumerate() {
            let _ = writeln!(out, "{:.2},{:.6}", quantize(*v), self.probability(i));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_csv())
    }
}

fn quantize(db: f64) -> f64 {
    let q = (db * 100.0).round() / 100.0;
    // Avoid printing "-0.00".
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

/// How the effective phases are chosen for each angle sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiPolicy {
    /// Grid minimum over the phases.
    Worst,
    /// Uniform random phases.
    #[default]
    Uniform,
    /// All phases zero.
    Zero,
}

/// Inputs of a sum-SNR distribution run.
#[derive(Debug, Clone)]
pub struct CdfSetup<'a> {
    pub scheme: Scheme,
    pub cfg: SystemConfig,
    pub slopes: &'a SlopeSet,
    pub tx: &'a AntennaArray,
    pub rx: &'a AntennaArray,
    /// Multi-port receiver; `None` combines all antennas on one port.
    pub partition: Option<&'a PortPartition>,
    pub policy: PsiPolicy,
    /// Phase lattice for [`PsiPolicy::Worst`].
    pub grid: GridSpec,
}

/// Minimum number of angle samples for [`sum_snr_samples`].
pub const MIN_CDF_SAMPLES: usize = 100;

/// Linear sum-SNR for `samples` independent uniform `(φ^r, φ^s)` draws.
///
/// Angles come from one ChaCha8 stream and phases from a second stream of
/// the same seed, so the angle sequence does not depend on the scheme.
pub fn sum_snr_samples(setup: &CdfSetup<'_>, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if samples < MIN_CDF_SAMPLES {
        return Err(input(format!(
            "need at least {MIN_CDF_SAMPLES} angle samples, got {samples}"
        )));
    }
    let cfg = &setup.cfg;
    if setup.tx.len() != cfg.n_tx || setup.rx.len() != cfg.n_rx {
        return Err(input(format!(
            "arrays have {}x{} elements, system expects {}x{}",
            setup.rx.len(),
            setup.tx.len(),
            cfg.n_rx,
            cfg.n_tx
        )));
    }
    if let Some(p) = setup.partition {
        if p.n_rx() != cfg.n_rx {
            return Err(input("port partition does not match the receive array"));
        }
    }
    let probe_gains = LinkGains::unit(cfg.n_tx, cfg.n_rx);
    validate_inputs(
        setup.scheme,
        cfg,
        &crate::channel::ScenarioDraw::zero(cfg.n_tx, cfg.n_rx),
        setup.slopes,
        &probe_gains,
    )?;

    let mut angle_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phase_rng = ChaCha8Rng::seed_from_u64(seed);
    phase_rng.set_stream(1);
    struct Draw {
        phi_s: f64,
        phi_r: f64,
        psi_s: Vec<f64>,
        psi_r: Vec<f64>,
    }
    let draws: Vec<Draw> = (0..samples)
        .map(|_| {
            let phi_r = angle_rng.random::<f64>() * TAU;
            let phi_s = angle_rng.random::<f64>() * TAU;
            let (psi_s, psi_r) = match setup.policy {
                PsiPolicy::Uniform => (
                    (0..cfg.n_tx).map(|_| phase_rng.random::<f64>() * TAU).collect(),
                    (0..cfg.n_rx).map(|_| phase_rng.random::<f64>() * TAU).collect(),
                ),
                PsiPolicy::Zero | PsiPolicy::Worst => (vec![0.0; cfg.n_tx], vec![0.0; cfg.n_rx]),
            };
            Draw {
                phi_s,
                phi_r,
                psi_s,
                psi_r,
            }
        })
        .collect();

    draws
        .par_iter()
        .map(|d| {
            let gains = LinkGains::from_arrays(setup.tx, setup.rx, d.phi_s, d.phi_r);
            match (setup.policy, setup.partition) {
                (PsiPolicy::Worst, None) => {
                    Ok(inf_over_phases(setup.scheme, cfg, setup.slopes, &gains, &setup.grid)?.value)
                }
                (PsiPolicy::Worst, Some(p)) => {
                    Ok(mrc_inf_over_phases(setup.scheme, cfg, p, setup.slopes, &gains, &setup.grid)?.value)
                }
                (_, None) => Ok(burst_sum_unchecked(
                    setup.scheme,
                    cfg,
                    &d.psi_s,
                    &d.psi_r,
                    setup.slopes,
                    &gains,
                )),
                (_, Some(p)) => Ok(mrc_burst_unchecked(
                    setup.scheme,
                    cfg,
                    p,
                    &d.psi_s,
                    &d.psi_r,
                    setup.slopes,
                    &gains,
                )),
            }
        })
        .collect()
}

/// Empirical CDF of the sum-SNR in dB over uniform angles.
pub fn snr_cdf(setup: &CdfSetup<'_>, samples: usize, seed: u64) -> Result<Cdf> {
    Cdf::from_linear(&sum_snr_samples(setup, samples, seed)?)
}

/// Mean element power `Σ_m |g_m(φ)|²/L` on a uniform azimuth grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalentPattern {
    pub azimuth: Vec<f64>,
    pub gain: Vec<f64>,
}

impl EquivalentPattern {
    pub fn min(&self) -> f64 {
        self.gain.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.gain.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.gain.iter().sum::<f64>() / self.gain.len() as f64
    }

    /// First azimuth attaining [`Self::min`].
    pub fn argmin(&self) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for (a, g) in self.azimuth.iter().zip(&self.gain) {
            if *g < best.0 {
                best = (*g, *a);
            }
        }
        best.1
    }

    /// `azimuth_deg,gain_linear` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("azimuth_deg,gain_linear\n");
        for (a, g) in self.azimuth.iter().zip(&self.gain) {
            let _ = writeln!(out, "{:.2},{:.9}", a.to_degrees(), g);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_csv())
    }
}

/// Equivalent pattern of a set of elements over `points` azimuths.
pub fn equivalent_pattern(patterns: &[AntennaPattern], points: usize) -> Result<EquivalentPattern> {
    if patterns.is_empty() || points == 0 {
        return Err(input("need at least one pattern and one azimuth point"));
    }
    let n = patterns.len() as f64;
    let azimuth: Vec<f64> = (0..points).map(|i| TAU * i as f64 / points as f64).collect();
    let gain = azimuth
        .iter()
        .map(|&phi| patterns.iter().map(|p| p.gain(phi).powi(2)).sum::<f64>() / n)
        .collect();
    Ok(EquivalentPattern { azimuth, gain })
}

/// Transmit-side equivalent pattern; identical formula on the receive side.
pub fn equivalent_tx_pattern(patterns: &[AntennaPattern], points: usize) -> Result<EquivalentPattern> {
    equivalent_pattern(patterns, points)
}

/// `(p, quantile)` rows at the reported probabilities.
pub const SUMMARY_PROBS: [f64; 4] = [0.0, 0.01, 0.1, 0.5];
