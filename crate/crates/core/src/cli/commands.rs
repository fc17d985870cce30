//! The `cdf`, `pattern` and `sweep` commands.

use std::fmt::Write as _;

use serde::Serialize;

use crate::channel::LinkGains;
use crate::error::{write_file, Error, Result};
use crate::metrics::{equivalent_pattern, sum_snr_samples, Cdf, CdfSetup, EquivalentPattern, PsiPolicy, SUMMARY_PROBS};
use crate::oracle::{inf_over_phases, worst_case_angles};
use crate::schemes::{Scheme, SlopeSet};

use super::config::Experiment;

/// One row of `cdf_summary.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct CdfSummary {
    pub name: String,
    pub scheme: Scheme,
    pub n_tx: usize,
    pub n_rx: usize,
    pub ports: Vec<usize>,
    pub psi_policy: PsiPolicy,
    /// Quantiles in dB at [`SUMMARY_PROBS`].
    pub quantiles_db: [f64; 4],
    /// Burst error probability at the median sum-SNR.
    pub brep_median: f64,
}

fn policy_name(p: PsiPolicy) -> &'static str {
    match p {
        PsiPolicy::Worst => "worst",
        PsiPolicy::Uniform => "uniform",
        PsiPolicy::Zero => "zero",
    }
}

/// Writes `cdf_<name>.csv` per variant plus `cdf_summary.csv`.
pub fn run_cdf(e: &Experiment) -> Result<Vec<CdfSummary>> {
    let variants = if e.variants.is_empty() {
        vec![e.default_variant()?]
    } else {
        e.variants.clone()
    };
    let mut rows = Vec::with_capacity(variants.len());
    for v in &variants {
        let setup = CdfSetup {
            scheme: v.scheme,
            cfg: v.cfg,
            slopes: &v.slopes,
            tx: &v.tx,
            rx: &v.rx,
            partition: v.partition.as_ref(),
            policy: v.policy,
            grid: e.phase_grid(),
        };
        let values = sum_snr_samples(&setup, e.raw.samples, e.raw.seed)?;
        let cdf = Cdf::from_linear(&values)?;
        cdf.write_csv(&e.out_dir.join(format!("cdf_{}.csv", v.name)))?;
        let quantiles_db = SUMMARY_PROBS.map(|p| cdf.quantile(p));
        let median = 10f64.powf(quantiles_db[3] / 10.0);
        rows.push(CdfSummary {
            name: v.name.clone(),
            scheme: v.scheme,
            n_tx: v.cfg.n_tx,
            n_rx: v.cfg.n_rx,
            ports: v
                .partition
                .as_ref()
                .map(|p| p.sizes())
                .unwrap_or_else(|| vec![v.cfg.n_rx]),
            psi_policy: v.policy,
            quantiles_db,
            brep_median: (-e.pep.scale * e.pep.rho * median).exp().min(1.0),
        });
    }
    let mut out = String::from("name,scheme,n_tx,n_rx,ports,psi_policy,p0_db,p1_db,p10_db,p50_db,brep_p50\n");
    for r in &rows {
        let ports: Vec<String> = r.ports.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.4},{:.4},{:.4},{:.4},{:.6e}",
            r.name,
            r.scheme,
            r.n_tx,
            r.n_rx,
            ports.join("+"),
            policy_name(r.psi_policy),
            r.quantiles_db[0],
            r.quantiles_db[1],
            r.quantiles_db[2],
            r.quantiles_db[3],
            r.brep_median
        );
    }
    write_file(&e.out_dir.join("cdf_summary.csv"), out)?;
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub argmin_deg: f64,
    /// Minimum power gain of each element on the same grid.
    pub element_min: Vec<f64>,
}

impl PatternStats {
    fn of(eq: &EquivalentPattern, elements: &[crate::antennas::AntennaPattern], points: usize) -> Result<Self> {
        let element_min = elements
            .iter()
            .map(|p| equivalent_pattern(std::slice::from_ref(p), points).map(|e| e.min()))
            .collect::<Result<_>>()?;
        Ok(Self {
            min: eq.min(),
            max: eq.max(),
            mean: eq.mean(),
            argmin_deg: eq.argmin().to_degrees(),
            element_min,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternReport {
    pub burst_len: usize,
    pub angle_points: usize,
    pub worst_phi_r_deg: f64,
    pub worst_phi_s_deg: f64,
    /// `K·Ḡ` at the worst-case angles.
    pub worst_value: f64,
    pub tx: PatternStats,
    pub rx: PatternStats,
}

/// Writes `equivalent_tx.csv`, `equivalent_rx.csv` and `worst_case.json`.
pub fn run_pattern(e: &Experiment) -> Result<PatternReport> {
    let points = e.raw.grid.angle_points;
    let eq_tx = equivalent_pattern(&e.tx.patterns, points)?;
    let eq_rx = equivalent_pattern(&e.rx.patterns, points)?;
    eq_tx.write_csv(&e.out_dir.join("equivalent_tx.csv"))?;
    eq_rx.write_csv(&e.out_dir.join("equivalent_rx.csv"))?;
    let w = worst_case_angles(&e.tx, &e.rx, e.cfg.burst_len, points, None)?;
    let report = PatternReport {
        burst_len: e.cfg.burst_len,
        angle_points: points,
        worst_phi_r_deg: w.phi_r.to_degrees(),
        worst_phi_s_deg: w.phi_s.to_degrees(),
        worst_value: w.value,
        tx: PatternStats::of(&eq_tx, &e.tx.patterns, points)?,
        rx: PatternStats::of(&eq_rx, &e.rx.patterns, points)?,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&e.out_dir.join("worst_case.json"), json + "\n")?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub alpha_s: f64,
    pub abn_inf: f64,
    pub asn_inf: f64,
    pub bound: f64,
}

/// Sensitivity of the worst-case burst sum to the second transmit slope
/// `α^s = [0, α]`, with receive slopes `l·2π/(KT)`. Writes `sweep.csv`.
pub fn run_sweep(e: &Experiment) -> Result<Vec<SweepRow>> {
    let cfg = e.cfg;
    if cfg.n_tx != 2 {
        return Err(Error::Config(format!(
            "system.n_tx: the sweep varies the second of two transmit slopes, got {} transmit antennas",
            cfg.n_tx
        )));
    }
    let s = &e.raw.sweep;
    let unit = cfg.slope_unit();
    let max = s.max_slope.unwrap_or(2.0 * cfg.n_rx as f64 * unit);
    let rx: Vec<f64> = (0..cfg.n_rx).map(|l| l as f64 * unit).collect();
    let gains = LinkGains::from_arrays(&e.tx, &e.rx, s.phi_s_deg.to_radians(), s.phi_r_deg.to_radians());
    let bound = cfg.burst_len as f64 * gains.g_bar();
    let grid = e.phase_grid();
    let asn_slopes = SlopeSet::new(vec![0.0; 2], rx.clone(), "asn-style");
    let asn_inf = inf_over_phases(Scheme::Asn, &cfg, &asn_slopes, &gains, &grid)?.value;
    let mut rows = Vec::with_capacity(s.points);
    let mut out = String::from("alpha_s_rad_s,abn_inf,asn_inf,bound\n");
    for i in 0..s.points {
        let alpha = max * i as f64 / (s.points - 1) as f64;
        let slopes = SlopeSet::new(vec![0.0, alpha], rx.clone(), "sweep");
        let abn_inf = inf_over_phases(Scheme::Abn, &cfg, &slopes, &gains, &grid)?.value;
        let _ = writeln!(out, "{alpha:.9},{abn_inf:.9e},{asn_inf:.9e},{bound:.9e}");
        rows.push(SweepRow {
            alpha_s: alpha,
            abn_inf,
            asn_inf,
            bound,
        });
    }
    write_file(&e.out_dir.join("sweep.csv"), out)?;
    Ok(rows)
}
