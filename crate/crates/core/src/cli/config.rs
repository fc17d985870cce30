//! Experiment configuration: the JSON schema and its validation.
//!
//! Every validation failure is an [`Error::Config`] whose message starts with
//! the offending field path.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::antennas::{AntennaPattern, PatternKind};
use crate::channel::{AntennaArray, ArrayGeometry, DEFAULT_WAVELENGTH};
use crate::error::{Error, Result};
use crate::hybrid::{per_port_optimal_slopes, PortPartition};
use crate::metrics::{PepModel, PsiPolicy, MIN_CDF_SAMPLES};
use crate::schemes::{Scheme, SlopeSet, SystemConfig};
use crate::slopes::{abn_construct, asn_construct, Construction};

fn cfg_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

/// Top-level experiment description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemSection,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default)]
    pub slopes: SlopeSource,
    #[serde(default)]
    pub antennas: AntennaSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Angles for the fixed-angle claims; the worst-case pair when absent.
    #[serde(default)]
    pub angles: Option<AnglePair>,
    #[serde(default)]
    pub cdf: Vec<CdfVariant>,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub pep: PepSection,
}

fn default_scheme() -> Scheme {
    Scheme::Abn
}
fn default_samples() -> usize {
    10_000
}
fn default_seed() -> u64 {
    1
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    /// Packets per burst.
    pub burst_len: usize,
    /// Broadcast period in seconds.
    pub period: f64,
    #[serde(default)]
    pub message_duration: Option<f64>,
    pub n_tx: usize,
    pub n_rx: usize,
    /// Receive port sizes; one port per antenna when absent.
    #[serde(default)]
    pub ports: Option<Vec<usize>>,
}

/// Where the phase slopes come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SlopeSource {
    /// Optimal construction for the scheme.
    Construct(Construction),
    /// Values in rad/s.
    Explicit {
        #[serde(default)]
        tx: Vec<f64>,
        rx: Vec<f64>,
    },
    /// Best point of the slope lattice.
    Search,
}

impl Default for SlopeSource {
    fn default() -> Self {
        SlopeSource::Construct(Construction::Primary)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaSection {
    /// One entry per transmit element; ideal omni when empty.
    #[serde(default)]
    pub tx: Vec<PatternSpec>,
    #[serde(default)]
    pub rx: Vec<PatternSpec>,
    /// Element positions in metres; half-wavelength line when absent.
    #[serde(default)]
    pub tx_positions: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub rx_positions: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub wavelength: Option<f64>,
}

/// One element pattern: synthesized (`kind`) or loaded (`file`).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub beamwidth_deg: Option<f64>,
    #[serde(default)]
    pub floor_db: Option<f64>,
    #[serde(default)]
    pub depth_db: Option<f64>,
    #[serde(default)]
    pub order: Option<u32>,
    /// Scale loaded files to unit mean power.
    #[serde(default = "yes")]
    pub normalize: bool,
    #[serde(default)]
    pub rotation_deg: f64,
}

fn yes() -> bool {
    true
}

impl PatternSpec {
    /// Synthesized pattern of the given kind.
    pub fn synthetic(kind: PatternKind, rotation_deg: f64) -> Self {
        let mut s = Self {
            normalize: true,
            rotation_deg,
            ..Self::default()
        };
        match kind {
            PatternKind::IdealOmni => s.kind = Some("ideal_omni".into()),
            PatternKind::RippleOmni { depth_db, order } => {
                s.kind = Some("ripple_omni".into());
                s.depth_db = Some(depth_db);
                s.order = Some(order);
            }
            PatternKind::Sector {
                beamwidth_deg,
                floor_db,
            } => {
                s.kind = Some("sector".into());
                s.beamwidth_deg = Some(beamwidth_deg);
                s.floor_db = Some(floor_db);
            }
        }
        s
    }

    fn build(&self, field: &str, base: &Path) -> Result<AntennaPattern> {
        let need =
            |v: Option<f64>, name: &str| v.ok_or_else(|| cfg_err(&format!("{field}.{name}"), "required for this kind"));
        let pattern = match (&self.kind, &self.file) {
            (Some(_), Some(_)) => return Err(cfg_err(field, "give either `kind` or `file`, not both")),
            (None, None) => return Err(cfg_err(field, "one of `kind` or `file` is required")),
            (None, Some(file)) => {
                let path = if file.is_absolute() {
                    file.clone()
                } else {
                    base.join(file)
                };
                let p = AntennaPattern::load(&path)?;
                if self.normalize {
                    p.normalized()
                } else {
                    p
                }
            }
            (Some(kind), None) => {
                let kind = match kind.as_str() {
                    "ideal_omni" => PatternKind::IdealOmni,
                    "ripple_omni" => PatternKind::RippleOmni {
                        depth_db: need(self.depth_db, "depth_db")?,
                        order: self
                            .order
                            .ok_or_else(|| cfg_err(&format!("{field}.order"), "required for this kind"))?,
                    },
                    "sector" => PatternKind::Sector {
                        beamwidth_deg: need(self.beamwidth_deg, "beamwidth_deg")?,
                        floor_db: need(self.floor_db, "floor_db")?,
                    },
                    other => {
                        return Err(cfg_err(
                            &format!("{field}.kind"),
                            format!("unknown pattern kind `{other}` (ideal_omni, ripple_omni, sector)"),
                        ))
                    }
                };
                AntennaPattern::synthesize(kind).map_err(|e| cfg_err(field, e))?
            }
        };
        if !self.rotation_deg.is_finite() {
            return Err(cfg_err(&format!("{field}.rotation_deg"), "must be finite"));
        }
        Ok(if self.rotation_deg == 0.0 {
            pattern
        } else {
            pattern.rotated(self.rotation_deg.to_radians())
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_psi_points")]
    pub psi_points: usize,
    /// Explicit slope lattice; the refined `qπ/(K·R)` lattice when absent.
    #[serde(default)]
    pub slope_points: Option<usize>,
    #[serde(default)]
    pub slope_range: Option<[f64; 2]>,
    #[serde(default = "default_refinement")]
    pub refinement: usize,
    #[serde(default = "default_angle_points")]
    pub angle_points: usize,
}

fn default_psi_points() -> usize {
    16
}
fn default_refinement() -> usize {
    2
}
fn default_angle_points() -> usize {
    360
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            psi_points: default_psi_points(),
            slope_points: None,
            slope_range: None,
            refinement: default_refinement(),
            angle_points: default_angle_points(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglePair {
    pub phi_r_deg: f64,
    pub phi_s_deg: f64,
}

/// One CDF to produce.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdfVariant {
    pub name: String,
    #[serde(default)]
    pub scheme: Option<Scheme>,
    /// Receive port sizes; a single port when absent.
    #[serde(default)]
    pub ports: Option<Vec<usize>>,
    /// Subset of the configured transmit elements; all when absent.
    #[serde(default)]
    pub tx_elements: Option<Vec<usize>>,
    #[serde(default)]
    pub rx_elements: Option<Vec<usize>>,
    #[serde(default)]
    pub psi_policy: PsiPolicy,
    /// Overrides the top-level slope source.
    #[serde(default)]
    pub slopes: Option<SlopeSource>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Transmit slope values between 0 and `max_slope`, inclusive.
    #[serde(default = "default_sweep_points")]
    pub points: usize,
    /// Upper end in rad/s; `2·L_r·2π/(KT)` when absent.
    #[serde(default)]
    pub max_slope: Option<f64>,
    #[serde(default)]
    pub phi_r_deg: f64,
    #[serde(default)]
    pub phi_s_deg: f64,
}

fn default_sweep_points() -> usize {
    65
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            points: default_sweep_points(),
            max_slope: None,
            phi_r_deg: 0.0,
            phi_s_deg: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PepSection {
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default = "one")]
    pub rho: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for PepSection {
    fn default() -> Self {
        Self { scale: 1.0, rho: 1.0 }
    }
}

/// A CDF variant with everything resolved.
#[derive(Debug, Clone)]
pub struct ResolvedVariant {
    pub name: String,
    pub scheme: Scheme,
    pub cfg: SystemConfig,
    pub tx: AntennaArray,
    pub rx: AntennaArray,
    pub partition: Option<PortPartition>,
    pub slopes: SlopeSet,
    pub policy: PsiPolicy,
}

/// Validated configuration ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub raw: ExperimentConfig,
    pub cfg: SystemConfig,
    pub scheme: Scheme,
    pub partition: PortPartition,
    pub tx: AntennaArray,
    pub rx: AntennaArray,
    pub pep: PepModel,
    pub out_dir: PathBuf,
    pub variants: Vec<ResolvedVariant>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Checks every precondition and builds the arrays. Relative pattern
    /// files resolve against `base`.
    pub fn resolve(self, base: &Path) -> Result<Experiment> {
        let s = &self.system;
        let mut cfg = SystemConfig::new(s.burst_len, s.period, s.n_tx, s.n_rx).map_err(|e| cfg_err("system", e))?;
        if let Some(tm) = s.message_duration {
            cfg.message_duration = tm;
            cfg = cfg.validated().map_err(|e| cfg_err("system.message_duration", e))?;
        }
        let partition = match &s.ports {
            Some(sizes) => PortPartition::from_sizes(sizes).map_err(|e| cfg_err("system.ports", e))?,
            None => PortPartition::from_sizes(&vec![1; s.n_rx]).expect("n_rx >= 1"),
        };
        if partition.n_rx() != s.n_rx {
            return Err(cfg_err(
                "system.ports",
                format!("sizes add up to {}, n_rx is {}", partition.n_rx(), s.n_rx),
            ));
        }
        if self.scheme == Scheme::Alamouti && s.n_tx != 2 {
            return Err(cfg_err("scheme", "alamouti needs system.n_tx = 2"));
        }
        let wavelength = self.antennas.wavelength.unwrap_or(DEFAULT_WAVELENGTH);
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(cfg_err("antennas.wavelength", "must be positive"));
        }
        let tx = build_array(
            "antennas.tx",
            &self.antennas.tx,
            self.antennas.tx_positions.as_ref(),
            s.n_tx,
            wavelength,
            base,
        )?;
        let rx = build_array(
            "antennas.rx",
            &self.antennas.rx,
            self.antennas.rx_positions.as_ref(),
            s.n_rx,
            wavelength,
            base,
        )?;

        let g = &self.grid;
        if g.psi_points < 2 {
            return Err(cfg_err("grid.psi_points", "must be at least 2"));
        }
        if g.angle_points < 2 {
            return Err(cfg_err("grid.angle_points", "must be at least 2"));
        }
        if g.refinement == 0 {
            return Err(cfg_err("grid.refinement", "must be at least 1"));
        }
        match (g.slope_points, g.slope_range) {
            (Some(n), Some([lo, hi])) => {
                if n < 2 {
                    return Err(cfg_err("grid.slope_points", "must be at least 2"));
                }
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(cfg_err("grid.slope_range", "must be an interval [lo, hi]"));
                }
            }
            (None, None) => {}
            _ => {
                return Err(cfg_err(
                    "grid.slope_points",
                    "give slope_points and slope_range together",
                ))
            }
        }
        if self.samples < MIN_CDF_SAMPLES {
            return Err(cfg_err("samples", format!("must be at least {MIN_CDF_SAMPLES}")));
        }
        let pep = PepModel::new(self.pep.scale, self.pep.rho).map_err(|e| cfg_err("pep", e))?;
        if self.sweep.points < 2 {
            return Err(cfg_err("sweep.points", "must be at least 2"));
        }
        if let Some(m) = self.sweep.max_slope {
            if !(m.is_finite() && m > 0.0) {
                return Err(cfg_err("sweep.max_slope", "must be positive"));
            }
        }
        if let SlopeSource::Explicit { tx: st, rx: sr } = &self.slopes {
            check_explicit("slopes", st, sr, self.scheme, &cfg)?;
        }
        if let Some(a) = self.angles {
            if !(a.phi_r_deg.is_finite() && a.phi_s_deg.is_finite()) {
                return Err(cfg_err("angles", "must be finite"));
            }
        }

        let mut variants = Vec::with_capacity(self.cdf.len());
        let mut names = std::collections::BTreeSet::new();
        for (i, v) in self.cdf.iter().enumerate() {
            let field = format!("cdf[{i}]");
            if v.name.is_empty()
                || !v
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(cfg_err(&format!("{field}.name"), "use letters, digits, `_` or `-`"));
            }
            if !names.insert(v.name.clone()) {
                return Err(cfg_err(
                    &format!("{field}.name"),
                    format!("duplicate name `{}`", v.name),
                ));
            }
            variants.push(resolve_variant(&field, v, &self, &cfg, &tx, &rx)?);
        }

        let out_dir = if self.out_dir.is_absolute() {
            self.out_dir.clone()
        } else {
            base.join(&self.out_dir)
        };
        Ok(Experiment {
            cfg,
            scheme: self.scheme,
            partition,
            tx,
            rx,
            pep,
            out_dir,
            variants,
            raw: self,
        })
    }
}

impl Experiment {
    /// The variant used when the config lists none: the configured scheme
    /// and slopes over the full arrays.
    pub fn default_variant(&self) -> Result<ResolvedVariant> {
        let v = CdfVariant {
            name: self.scheme.name().to_string(),
            scheme: None,
            ports: None,
            tx_elements: None,
            rx_elements: None,
            psi_policy: PsiPolicy::default(),
            slopes: None,
        };
        resolve_variant("cdf", &v, &self.raw, &self.cfg, &self.tx, &self.rx)
    }

    /// Phase lattice for the fixed-slope minimizations.
    pub fn phase_grid(&self) -> crate::oracle::GridSpec {
        crate::oracle::GridSpec::new(self.raw.grid.psi_points, 2, [0.0, 1.0], self.raw.grid.angle_points)
            .expect("validated")
    }
}

fn check_explicit(field: &str, tx: &[f64], rx: &[f64], scheme: Scheme, cfg: &SystemConfig) -> Result<()> {
    if rx.len() != cfg.n_rx {
        return Err(cfg_err(
            &format!("{field}.explicit.rx"),
            format!("needs {} values", cfg.n_rx),
        ));
    }
    if scheme == Scheme::Abn && tx.len() != cfg.n_tx {
        return Err(cfg_err(
            &format!("{field}.explicit.tx"),
            format!("needs {} values", cfg.n_tx),
        ));
    }
    if tx.iter().chain(rx).any(|v| !v.is_finite()) {
        return Err(cfg_err(&format!("{field}.explicit"), "values must be finite"));
    }
    Ok(())
}

fn build_array(
    field: &str,
    specs: &[PatternSpec],
    positions: Option<&Vec<[f64; 3]>>,
    count: usize,
    wavelength: f64,
    base: &Path,
) -> Result<AntennaArray> {
    let patterns = if specs.is_empty() {
        vec![AntennaPattern::ideal_omni(); count]
    } else {
        if specs.len() != count {
            return Err(cfg_err(
                field,
                format!("{} patterns given, {count} elements configured", specs.len()),
            ));
        }
        specs
            .iter()
            .enumerate()
            .map(|(i, s)| s.build(&format!("{field}[{i}]"), base))
            .collect::<Result<Vec<_>>>()?
    };
    let pos_field = format!("{field}_positions");
    let geometry = match positions {
        Some(p) => {
            if p.len() != count {
                return Err(cfg_err(&pos_field, format!("needs {count} positions")));
            }
            ArrayGeometry::new(p.clone(), wavelength).map_err(|e| cfg_err(&pos_field, e))?
        }
        None => ArrayGeometry::linear(count, wavelength / 2.0, wavelength).map_err(|e| cfg_err(&pos_field, e))?,
    };
    AntennaArray::new(geometry, patterns).map_err(|e| cfg_err(field, e))
}

fn pick(field: &str, idx: &Option<Vec<usize>>, array: &AntennaArray) -> Result<AntennaArray> {
    let Some(idx) = idx else {
        return Ok(array.clone());
    };
    if idx.is_empty() {
        return Err(cfg_err(field, "must list at least one element"));
    }
    let mut positions = Vec::with_capacity(idx.len());
    let mut patterns = Vec::with_capacity(idx.len());
    for &i in idx {
        if i >= array.len() {
            return Err(cfg_err(
                field,
                format!("element {i} out of range (array has {})", array.len()),
            ));
        }
        positions.push(array.geometry.positions()[i]);
        patterns.push(array.patterns[i].clone());
    }
    let geometry = ArrayGeometry::new(positions, array.geometry.wavelength()).map_err(|e| cfg_err(field, e))?;
    AntennaArray::new(geometry, patterns).map_err(|e| cfg_err(field, e))
}

fn resolve_variant(
    field: &str,
    v: &CdfVariant,
    top: &ExperimentConfig,
    base_cfg: &SystemConfig,
    tx_all: &AntennaArray,
    rx_all: &AntennaArray,
) -> Result<ResolvedVariant> {
    let scheme = v.scheme.unwrap_or(top.scheme);
    let tx = pick(&format!("{field}.tx_elements"), &v.tx_elements, tx_all)?;
    let rx = pick(&format!("{field}.rx_elements"), &v.rx_elements, rx_all)?;
    let cfg = base_cfg.with_antennas(tx.len(), rx.len());
    if scheme == Scheme::Alamouti && cfg.n_tx != 2 {
        return Err(cfg_err(
            &format!("{field}.scheme"),
            "alamouti needs exactly 2 transmit elements",
        ));
    }
    let partition = match &v.ports {
        Some(sizes) => {
            let p = PortPartition::from_sizes(sizes).map_err(|e| cfg_err(&format!("{field}.ports"), e))?;
            if p.n_rx() != cfg.n_rx {
                return Err(cfg_err(
                    &format!("{field}.ports"),
                    format!(
                        "sizes add up to {}, variant has {} receive elements",
                        p.n_rx(),
                        cfg.n_rx
                    ),
                ));
            }
            Some(p)
        }
        None => None,
    };
    let source = v.slopes.clone().unwrap_or_else(|| top.slopes.clone());
    let slopes_field = if v.slopes.is_some() {
        format!("{field}.slopes")
    } else {
        "slopes".to_string()
    };
    let slopes = match source {
        SlopeSource::Construct(variant) => {
            let built = match &partition {
                Some(p) => per_port_optimal_slopes(scheme, p, cfg.n_tx, cfg.burst_len, cfg.period, variant),
                None => construct_slopes(scheme, &cfg, variant),
            };
            built.map_err(|e| cfg_err(&slopes_field, e))?
        }
        SlopeSource::Explicit { tx: st, rx: sr } => {
            check_explicit(&slopes_field, &st, &sr, scheme, &cfg)?;
            let st = if scheme == Scheme::Abn { st } else { vec![0.0; cfg.n_tx] };
            SlopeSet::new(st, sr, "explicit")
        }
        SlopeSource::Search => {
            return Err(cfg_err(
                &slopes_field,
                "`search` is not available for CDF variants; use construct or explicit",
            ))
        }
    };
    Ok(ResolvedVariant {
        name: v.name.clone(),
        scheme,
        cfg,
        tx,
        rx,
        partition,
        slopes,
        policy: v.psi_policy,
    })
}

/// Optimal slopes of `scheme` for a single-port receiver.
pub fn construct_slopes(scheme: Scheme, cfg: &SystemConfig, variant: Construction) -> Result<SlopeSet> {
    match scheme {
        Scheme::Abn => abn_construct(cfg.n_rx, cfg.n_tx, cfg.burst_len, cfg.period, variant),
        Scheme::Asn => {
            let mut s = asn_construct(cfg.n_rx, cfg.n_tx, cfg.burst_len, cfg.period)?;
            s.tx = vec![0.0; cfg.n_tx];
            Ok(s)
        }
        Scheme::Alamouti => {
            let mut s = abn_construct(cfg.n_rx, 1, cfg.burst_len, cfg.period, variant)?;
            s.tx = vec![0.0; cfg.n_tx];
            s.provenance = "alamouti-rx".into();
            Ok(s)
        }
    }
}
