//! Azimuth-plane far-field patterns.
//!
//! Every pattern lives on a uniform grid of [`N_AZ`] samples over `[0, 2π)`.
//! Values between grid nodes are obtained by interpolating magnitude (linear
//! scale) and phase (unwrapped) separately.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::phase::{db_to_power, lattice_distance, wrap_2pi, wrap_pi};

/// Internal grid resolution (0.1°).
pub const N_AZ: usize = 3600;

/// Smallest grid accepted from a file.
pub const MIN_FILE_SAMPLES: usize = 8;

/// Lowest synthesized power gain relative to the pattern peak (-60 dB).
const SYNTH_FLOOR: f64 = 1e-6;

/// Offsets closer than this to a grid node (in units of grid steps) snap to it.
const NODE_SNAP: f64 = 1e-9;

/// Complex azimuth far field `g(φ)` sampled at `φ_n = 2πn/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaPattern {
    samples: Vec<Complex64>,
    label: String,
}

/// Synthetic pattern families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PatternKind {
    /// `|g| ≡ 1`.
    IdealOmni,
    /// `|g(φ)|² ∝ 1 + d·cos(order·φ)` with `d` set by the peak-to-trough depth.
    RippleOmni { depth_db: f64, order: u32 },
    /// Raised-cosine mainlobe pointing at `φ = 0` above a constant floor.
    ///
    /// `beamwidth_deg` is the half-power (-3 dB) full width; the lobe reaches
    /// zero at twice that width.
    Sector { beamwidth_deg: f64, floor_db: f64 },
}

impl AntennaPattern {
    /// Builds a pattern from samples already on a uniform grid.
    pub fn from_samples(samples: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if samples.len() < MIN_FILE_SAMPLES {
            return Err(input(format!(
                "pattern needs at least {MIN_FILE_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(input("pattern samples must be finite"));
        }
        Ok(Self {
            samples,
            label: label.into(),
        })
    }

    pub fn ideal_omni() -> Self {
        Self {
            samples: vec![Complex64::new(1.0, 0.0); N_AZ],
            label: "ideal_omni".into(),
        }
    }

    /// Synthesizes a mean-power-normalized pattern of the given family.
    pub fn synthesize(kind: PatternKind) -> Result<Self> {
        let power: Vec<f64> = match kind {
            PatternKind::IdealOmni => return Ok(Self::ideal_omni()),
            PatternKind::RippleOmni { depth_db, order } => {
                if !depth_db.is_finite() || depth_db < 0.0 {
                    return Err(input(format!("ripple depth must be >= 0 dB, got {depth_db}")));
                }
                if order == 0 || order as usize >= N_AZ / 2 {
                    return Err(input(format!("ripple order must be in 1..{}, got {order}", N_AZ / 2)));
                }
                let ratio = db_to_power(-depth_db);
                let d = (1.0 - ratio) / (1.0 + ratio);
                grid_angles().map(|phi| 1.0 + d * (order as f64 * phi).cos()).collect()
            }
            PatternKind::Sector {
                beamwidth_deg,
                floor_db,
            } => {
                if !(beamwidth_deg > 0.0 && beamwidth_deg < 360.0) {
                    return Err(input(format!(
                        "sector beamwidth must be in (0, 360) degrees, got {beamwidth_deg}"
                    )));
                }
                if !floor_db.is_finite() || floor_db > 0.0 {
                    return Err(input(format!("sector floor must be <= 0 dB, got {floor_db}")));
                }
                let width = beamwidth_deg.to_radians();
                let floor = db_to_power(floor_db);
                grid_angles()
                    .map(|phi| {
                        let off = wrap_pi(phi).abs();
                        let lobe = if off < width {
                            (PI * off / (2.0 * width)).cos().powi(2)
                        } else {
                            0.0
                        };
                        lobe.max(floor)
                    })
                    .collect()
            }
        };
        let peak = power.iter().cloned().fold(0.0, f64::max);
        let samples = power
            .into_iter()
            .map(|p| Complex64::new(p.max(SYNTH_FLOOR * peak).sqrt(), 0.0))
            .collect();
        let label = match kind {
            PatternKind::IdealOmni => unreachable!(),
            PatternKind::RippleOmni { depth_db, order } => format!("ripple_omni({depth_db}dB,M={order})"),
            PatternKind::Sector {
                beamwidth_deg,
                floor_db,
            } => format!("sector({beamwidth_deg}deg,{floor_db}dB)"),
        };
        Ok(Self { samples, label }.normalized())
    }

    /// Reads a `azimuth_deg,gain_db[,phase_deg]` CSV and resamples it onto
    /// the internal grid. The result is not normalized.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::read_csv(file, path, label)
    }

    /// Same as [`AntennaPattern::load`] for an arbitrary reader; `origin`
    /// only appears in error messages.
    pub fn read_csv<R: std::io::Read>(reader: R, origin: &Path, label: String) -> Result<Self> {
        let parse_err = |line: u64, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| parse_err(1, format!("unreadable header: {e}")))?
            .clone();
        let names: Vec<&str> = headers.iter().collect();
        let has_phase = match names.as_slice() {
            ["azimuth_deg", "gain_db"] => false,
            ["azimuth_deg", "gain_db", "phase_deg"] => true,
            _ => {
                return Err(parse_err(
                    1,
                    format!(
                        "expected header `azimuth_deg,gain_db[,phase_deg]`, got `{}`",
                        names.join(",")
                    ),
                ))
            }
        };

        let mut azimuth = Vec::new();
        let mut magnitude = Vec::new();
        let mut phase = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                parse_err(line, format!("malformed row: {e}"))
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let expected = if has_phase { 3 } else { 2 };
            if record.len() != expected {
                return Err(parse_err(
                    line,
                    format!("expected {expected} columns, found {}", record.len()),
                ));
            }
            let field = |i: usize, name: &str| -> Result<f64> {
                let raw = &record[i];
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("{name} `{raw}` is not a finite number")))
            };
            let az = field(0, "azimuth_deg")?;
            let gain = field(1, "gain_db")?;
            let ph = if has_phase { field(2, "phase_deg")? } else { 0.0 };
            if !(0.0..360.0).contains(&az) {
                return Err(parse_err(line, format!("azimuth {az} outside [0, 360)")));
            }
            if let Some(&prev) = azimuth.last() {
                if az <= prev {
                    return Err(parse_err(
                        line,
                        format!("azimuth {az} does not increase (previous {prev})"),
                    ));
                }
            }
            azimuth.push(az.to_radians());
            magnitude.push(10f64.powf(gain / 20.0));
            phase.push(ph.to_radians());
        }
        if azimuth.len() < MIN_FILE_SAMPLES {
            return Err(parse_err(
                (azimuth.len() + 1) as u64,
                format!(
                    "pattern has {} samples, at least {MIN_FILE_SAMPLES} required",
                    azimuth.len()
                ),
            ));
        }
        Ok(Self {
            samples: resample_cyclic(&azimuth, &magnitude, &phase),
            label,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Grid step in radians.
    pub fn step(&self) -> f64 {
        TAU / self.samples.len() as f64
    }

    /// Azimuth of grid node `n`.
    pub fn node_angle(&self, n: usize) -> f64 {
        n as f64 * self.step()
    }

    /// Mean of `|g|²` over the grid.
    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// Copy scaled so that the azimuth mean of `|g|²` is one.
    pub fn normalized(&self) -> Self {
        let mean = self.mean_power();
        if mean <= 0.0 {
            return self.clone();
        }
        let scale = mean.sqrt().recip();
        Self {
            samples: self.samples.iter().map(|s| s * scale).collect(),
            label: self.label.clone(),
        }
    }

    /// Copy with every sample multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * factor).collect(),
            label: self.label.clone(),
        }
    }

    /// Far field at azimuth `phi` (any real, wrapped modulo 2π).
    pub fn value(&self, phi: f64) -> Complex64 {
        let n = self.samples.len();
        let pos = wrap_2pi(phi) / self.step();
        let base = pos.floor();
        let frac = pos - base;
        let i = base as usize % n;
        if frac < NODE_SNAP {
            return self.samples[i];
        }
        let j = (i + 1) % n;
        if 1.0 - frac < NODE_SNAP {
            return self.samples[j];
        }
        interpolate(self.samples[i], self.samples[j], frac)
    }

    /// `|g(phi)|`.
    pub fn gain(&self, phi: f64) -> f64 {
        self.value(phi).norm()
    }

    /// Pattern turned by `offset` radians: `rotated(p, o).value(φ) = p.value(φ - o)`.
    pub fn rotated(&self, offset: f64) -> Self {
        let n = self.samples.len();
        let steps = offset / self.step();
        let samples = if lattice_distance(steps, 1.0) < NODE_SNAP {
            let shift = (steps.round() as i64).rem_euclid(n as i64) as usize;
            (0..n).map(|k| self.samples[(k + n - shift) % n]).collect()
        } else {
            (0..n).map(|k| self.value(self.node_angle(k) - offset)).collect()
        };
        Self {
            samples,
            label: self.label.clone(),
        }
    }
}

fn grid_angles() -> impl Iterator<Item = f64> {
    (0..N_AZ).map(|n| n as f64 * TAU / N_AZ as f64)
}

fn interpolate(a: Complex64, b: Complex64, frac: f64) -> Complex64 {
    let mag = a.norm() + frac * (b.norm() - a.norm());
    let pa = a.arg();
    let phase = pa + frac * wrap_pi(b.arg() - pa);
    Complex64::from_polar(mag, phase)
}

/// Linear resampling of (magnitude, unwrapped phase) from an ascending,
/// non-uniform azimuth list onto the internal grid, wrapping at 2π.
fn resample_cyclic(azimuth: &[f64], magnitude: &[f64], phase: &[f64]) -> Vec<Complex64> {
    let m = azimuth.len();
    grid_angles()
        .map(|phi| {
            let idx = azimuth.partition_point(|&a| a <= phi);
            let (a, b, az_a, az_b) = match idx {
                0 => (m - 1, 0, azimuth[m - 1] - TAU, azimuth[0]),
                i if i == m => (m - 1, 0, azimuth[m - 1], azimuth[0] + TAU),
                i => (i - 1, i, azimuth[i - 1], azimuth[i]),
            };
            let frac = (phi - az_a) / (az_b - az_a);
            let mag = magnitude[a] + frac * (magnitude[b] - magnitude[a]);
            let ph = phase[a] + frac * wrap_pi(phase[b] - phase[a]);
            Complex64::from_polar(mag, ph)
        })
        .collect()
}
