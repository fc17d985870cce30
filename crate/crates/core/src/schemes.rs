//! Per-packet SNR and burst sum-SNR for the three transmitter structures,
//! all received through time-linear analog combining.
//!
//! SNRs are normalized by `P_r/σ²_n`. Packet `k` is evaluated at `t = kT`;
//! the channel is taken as constant over the short message duration.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::{g_bar, mean_power, LinkGains, ScenarioDraw};
use crate::error::{input, Error, Result};

/// Burst and array dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Packets per burst (`K`).
    pub burst_len: usize,
    /// Broadcast period `T` in seconds.
    pub period: f64,
    /// Message duration `T_m` in seconds.
    pub message_duration: f64,
    /// Transmit antennas (`L_s`).
    pub n_tx: usize,
    /// Receive antennas (`L_r`).
    pub n_rx: usize,
}

impl SystemConfig {
    /// Default message duration: a 500-byte message at 6 Mbit/s is about 0.67 ms.
    pub const DEFAULT_MESSAGE_DURATION: f64 = 0.5e-3;

    pub fn new(burst_len: usize, period: f64, n_tx: usize, n_rx: usize) -> Result<Self> {
        Self {
            burst_len,
            period,
            message_duration: Self::DEFAULT_MESSAGE_DURATION.min(period / 10.0),
            n_tx,
            n_rx,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.burst_len == 0 {
            return Err(input("burst length K must be at least 1"));
        }
        if self.n_tx == 0 || self.n_rx == 0 {
            return Err(input("antenna counts must be at least 1"));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(input(format!("period must be positive, got {}", self.period)));
        }
        if !(self.message_duration > 0.0 && self.message_duration <= self.period / 10.0) {
            return Err(input(format!(
                "message duration {} must be in (0, T/10] with T = {}",
                self.message_duration, self.period
            )));
        }
        Ok(self)
    }

    /// Same burst with other antenna counts.
    pub fn with_antennas(&self, n_tx: usize, n_rx: usize) -> Self {
        Self { n_tx, n_rx, ..*self }
    }

    /// Start time of packet `k`.
    pub fn packet_time(&self, k: usize) -> f64 {
        k as f64 * self.period
    }

    /// `2π/(KT)`, the slope unit of the optimal constructions.
    pub fn slope_unit(&self) -> f64 {
        std::f64::consts::TAU / (self.burst_len as f64 * self.period)
    }
}

/// Phase slopes in rad/s for transmit (`α^s`) and receive (`α^r`) shifters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeSet {
    pub tx: Vec<f64>,
    pub rx: Vec<f64>,
    /// Construction name or `"explicit"`.
    pub provenance: String,
}

impl SlopeSet {
    pub fn new(tx: Vec<f64>, rx: Vec<f64>, provenance: impl Into<String>) -> Self {
        Self {
            tx,
            rx,
            provenance: provenance.into(),
        }
    }

    /// All-zero slopes.
    pub fn zero(n_tx: usize, n_rx: usize) -> Self {
        Self::new(vec![0.0; n_tx], vec![0.0; n_rx], "zero")
    }

    fn check_finite(&self) -> Result<()> {
        if self.tx.iter().chain(&self.rx).any(|a| !a.is_finite()) {
            return Err(input("phase slopes must be finite"));
        }
        Ok(())
    }
}

/// Transmitter structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Analog beamforming network of phase shifters, power split over all antennas.
    Abn,
    /// Antenna switching: packet `k` uses antenna `rem(k, L_s)` at full power.
    Asn,
    /// Two-antenna Alamouti space-time code.
    Alamouti,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Abn => "abn",
            Scheme::Asn => "asn",
            Scheme::Alamouti => "alamouti",
        }
    }

    /// Whether the transmit phases enter the SNR.
    pub fn uses_tx_phases(self) -> bool {
        matches!(self, Scheme::Abn)
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "abn" => Ok(Scheme::Abn),
            "asn" => Ok(Scheme::Asn),
            "alamouti" => Ok(Scheme::Alamouti),
            other => Err(input(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Normalized per-packet SNRs of one burst and their total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrTrace {
    pub per_packet: Vec<f64>,
    pub sum: f64,
}

impl SnrTrace {
    /// Sums left to right.
    pub fn new(per_packet: Vec<f64>) -> Self {
        let sum = per_packet.iter().fold(0.0, |acc, g| acc + g);
        Self { per_packet, sum }
    }
}

/// `S = K·Ḡ + J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `K·Ḡ`, the part that depends only on the angles.
    pub baseline: f64,
    /// `J`, the part driven by the effective channel phases.
    pub variation: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.baseline + self.variation
    }
}

/// Receive weight `exp(−j(α^r_l t + β^r_l))`.
pub fn acn_weight(l: usize, t: f64, slopes: &[f64], offsets: &[f64]) -> Result<Complex64> {
    match (slopes.get(l), offsets.get(l)) {
        (Some(a), Some(b)) => Ok(Complex64::from_polar(1.0, -(a * t + b))),
        _ => Err(input(format!("combiner index {l} out of range"))),
    }
}

/// `|Σ_i g_i·e^{−j(ψ_i − α_i t)}|²`.
#[inline]
pub(crate) fn array_gain(gains: &[f64], psi: &[f64], slopes: &[f64], t: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for ((g, p), a) in gains.iter().zip(psi).zip(slopes) {
        acc += Complex64::from_polar(*g, a * t - p);
    }
    acc.norm_sqr()
}

/// Same as [`array_gain`] restricted to the listed element indices.
#[inline]
pub(crate) fn array_gain_indexed(indices: &[usize], gains: &[f64], psi: &[f64], slopes: &[f64], t: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &i in indices {
        acc += Complex64::from_polar(gains[i], slopes[i] * t - psi[i]);
    }
    acc.norm_sqr()
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(input(format!("{what} has length {got}, expected {want}")));
    }
    Ok(())
}

fn check_packet(cfg: &SystemConfig, k: usize) -> Result<()> {
    if k >= cfg.burst_len {
        return Err(input(format!(
            "packet index {k} out of range for K = {}",
            cfg.burst_len
        )));
    }
    Ok(())
}

fn check_rx(cfg: &SystemConfig, scenario: &ScenarioDraw, rx_slopes: &[f64], gains: &LinkGains) -> Result<()> {
    check_len("receive phases", scenario.psi_r.len(), cfg.n_rx)?;
    check_len("receive slopes", rx_slopes.len(), cfg.n_rx)?;
    check_len("receive gains", gains.rx.len(), cfg.n_rx)?;
    check_len("transmit gains", gains.tx.len(), cfg.n_tx)?;
    if rx_slopes.iter().any(|a| !a.is_finite()) {
        return Err(input("phase slopes must be finite"));
    }
    Ok(())
}

/// Checks every length and precondition of `scheme` once, so that the
/// unchecked evaluators below can run inside grid searches.
pub fn validate_inputs(
    scheme: Scheme,
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
) -> Result<()> {
    slopes.check_finite()?;
    check_rx(cfg, scenario, &slopes.rx, gains)?;
    match scheme {
        Scheme::Abn => {
            check_len("transmit phases", scenario.psi_s.len(), cfg.n_tx)?;
            check_len("transmit slopes", slopes.tx.len(), cfg.n_tx)?;
        }
        Scheme::Asn => {}
        Scheme::Alamouti => {
            if cfg.n_tx != 2 {
                return Err(input(format!(
                    "Alamouti needs exactly 2 transmit antennas, got {}",
                    cfg.n_tx
                )));
            }
        }
    }
    Ok(())
}

#[inline]
#[allow(clippy::too_many_arguments)]
pub(crate) fn packet_snr_unchecked(
    scheme: Scheme,
    cfg: &SystemConfig,
    psi_s: &[f64],
    psi_r: &[f64],
    slopes: &SlopeSet,
    gains: &LinkGains,
    t: f64,
    k: usize,
) -> f64 {
    let rx = array_gain(&gains.rx, psi_r, &slopes.rx, t) / cfg.n_rx as f64;
    match scheme {
        Scheme::Abn => rx * array_gain(&gains.tx, psi_s, &slopes.tx, t) / cfg.n_tx as f64,
        Scheme::Asn => {
            let g = gains.tx[k % cfg.n_tx];
            rx * g * g
        }
        Scheme::Alamouti => rx * mean_power(&gains.tx),
    }
}

/// Burst sum without allocation or validation; `inputs` must have passed
/// [`validate_inputs`].
#[inline]
pub(crate) fn burst_sum_unchecked(
    scheme: Scheme,
    cfg: &SystemConfig,
    psi_s: &[f64],
    psi_r: &[f64],
    slopes: &SlopeSet,
    gains: &LinkGains,
) -> f64 {
    let mut sum = 0.0;
    for k in 0..cfg.burst_len {
        sum += packet_snr_unchecked(scheme, cfg, psi_s, psi_r, slopes, gains, cfg.packet_time(k), k);
    }
    sum
}

/// Beamforming transmitter:
/// `(1/(L_r L_s))·|Σ_m |g^s_m| e^{−j(ψ^s_m − α^s_m kT)}|²·|Σ_l |g^r_l| e^{−j(ψ^r_l − α^r_l kT)}|²`.
pub fn abn_packet_snr(
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
    k: usize,
) -> Result<f64> {
    validate_inputs(Scheme::Abn, cfg, scenario, slopes, gains)?;
    check_packet(cfg, k)?;
    Ok(packet_snr_unchecked(
        Scheme::Abn,
        cfg,
        &scenario.psi_s,
        &scenario.psi_r,
        slopes,
        gains,
        cfg.packet_time(k),
        k,
    ))
}

/// Switching transmitter: antenna `rem(k, L_s)` at full power.
pub fn asn_packet_snr(
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    rx_slopes: &[f64],
    gains: &LinkGains,
    k: usize,
) -> Result<f64> {
    check_rx(cfg, scenario, rx_slopes, gains)?;
    check_packet(cfg, k)?;
    let t = cfg.packet_time(k);
    let g = gains.tx[k % cfg.n_tx];
    Ok(g * g * array_gain(&gains.rx, &scenario.psi_r, rx_slopes, t) / cfg.n_rx as f64)
}

/// Alamouti transmitter: `(1/L_r)·|Σ_l |g^r_l| e^{−j(ψ^r_l − α^r_l kT)}|²·Σ_m |g^s_m|²/2`.
pub fn alamouti_packet_snr(
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    rx_slopes: &[f64],
    gains: &LinkGains,
    k: usize,
) -> Result<f64> {
    if cfg.n_tx != 2 {
        return Err(input(format!(
            "Alamouti needs exactly 2 transmit antennas, got {}",
            cfg.n_tx
        )));
    }
    check_rx(cfg, scenario, rx_slopes, gains)?;
    check_packet(cfg, k)?;
    let t = cfg.packet_time(k);
    Ok(array_gain(&gains.rx, &scenario.psi_r, rx_slopes, t) / cfg.n_rx as f64 * mean_power(&gains.tx))
}

/// Per-packet SNRs of a whole burst.
pub fn sum_snr(
    scheme: Scheme,
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
) -> Result<SnrTrace> {
    validate_inputs(scheme, cfg, scenario, slopes, gains)?;
    let per_packet = (0..cfg.burst_len)
        .map(|k| {
            packet_snr_unchecked(
                scheme,
                cfg,
                &scenario.psi_s,
                &scenario.psi_r,
                slopes,
                gains,
                cfg.packet_time(k),
                k,
            )
        })
        .collect();
    Ok(SnrTrace::new(per_packet))
}

/// Change of the beamforming per-packet SNR between the start and the end
/// of packet `k`, relative to the coherent peak
/// `(Σ|g^r|)²(Σ|g^s|)²/(L_r L_s)`; small values justify evaluating at `t = kT`.
pub fn packet_drift(
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
    k: usize,
) -> Result<f64> {
    validate_inputs(Scheme::Abn, cfg, scenario, slopes, gains)?;
    check_packet(cfg, k)?;
    let at = |t: f64| packet_snr_unchecked(Scheme::Abn, cfg, &scenario.psi_s, &scenario.psi_r, slopes, gains, t, k);
    let start = at(cfg.packet_time(k));
    let end = at(cfg.packet_time(k) + cfg.message_duration);
    let peak =
        gains.rx.iter().sum::<f64>().powi(2) * gains.tx.iter().sum::<f64>().powi(2) / (cfg.n_rx * cfg.n_tx) as f64;
    Ok(if peak > 0.0 { (end - start).abs() / peak } else { 0.0 })
}

/// Sum over `l < i` of `2|g_l||g_i|/n · Σ_{k∈packets} cos(Δψ_{l,i} − Δα_{l,i}·t_k)`
/// for the given packet times, with `Δx_{l,i} = x_i − x_l`.
fn pair_variation(gains: &[f64], psi: &[f64], slopes: &[f64], times: &[f64]) -> f64 {
    let n = gains.len() as f64;
    let mut total = 0.0;
    for l in 0..gains.len() {
        for i in l + 1..gains.len() {
            let coeff = 2.0 * gains[l] * gains[i] / n;
            let d_psi = psi[i] - psi[l];
            let d_alpha = slopes[i] - slopes[l];
            total += coeff * times.iter().map(|t| (d_psi - d_alpha * t).cos()).sum::<f64>();
        }
    }
    total
}

/// `K·Ḡ` and `J` computed from their explicit index sums.
///
/// For the switching transmitter this requires `K mod L_s = 0`; the burst
/// sum itself is available for any `K` through [`sum_snr`].
pub fn decompose(
    scheme: Scheme,
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
) -> Result<Decomposition> {
    validate_inputs(scheme, cfg, scenario, slopes, gains)?;
    let k_len = cfg.burst_len;
    let baseline = k_len as f64 * g_bar(&gains.tx, &gains.rx);
    let times: Vec<f64> = (0..k_len).map(|k| cfg.packet_time(k)).collect();
    let rx_mean = mean_power(&gains.rx);
    let tx_mean = mean_power(&gains.tx);
    let variation = match scheme {
        Scheme::Abn => {
            let (gr, gs) = (&gains.rx, &gains.tx);
            let (pr, ps) = (&scenario.psi_r, &scenario.psi_s);
            let (ar, as_) = (&slopes.rx, &slopes.tx);
            let (lr, ls) = (gr.len(), gs.len());
            let mut rx_terms = 0.0;
            let mut tx_terms = 0.0;
            let mut cross = 0.0;
            for l in 0..lr {
                for i in l + 1..lr {
                    let c_prime = 2.0 * gr[l] * gr[i] / lr as f64;
                    let c = tx_mean * c_prime;
                    let (dpr, dar) = (pr[i] - pr[l], ar[i] - ar[l]);
                    rx_terms += c * times.iter().map(|t| (dpr - dar * t).cos()).sum::<f64>();
                    for m in 0..ls {
                        for j in m + 1..ls {
                            let d_prime = 2.0 * gs[m] * gs[j] / ls as f64;
                            let (dps, das) = (ps[j] - ps[m], as_[j] - as_[m]);
                            cross += c_prime
                                * d_prime
                                * times
                                    .iter()
                                    .map(|t| (dpr - dar * t).cos() * (dps - das * t).cos())
                                    .sum::<f64>();
                        }
                    }
                }
            }
            for m in 0..ls {
                for j in m + 1..ls {
                    let d = rx_mean * 2.0 * gs[m] * gs[j] / ls as f64;
                    let (dps, das) = (ps[j] - ps[m], as_[j] - as_[m]);
                    tx_terms += d * times.iter().map(|t| (dps - das * t).cos()).sum::<f64>();
                }
            }
            rx_terms + tx_terms + cross
        }
        Scheme::Asn => {
            let ls = cfg.n_tx;
            if k_len % ls != 0 {
                return Err(Error::DecompositionUnavailable(format!(
                    "K = {k_len} is not a multiple of L_s = {ls}; only the numerical burst sum applies"
                )));
            }
            let per_antenna = k_len / ls;
            (0..ls)
                .map(|m| {
                    let packet_times: Vec<f64> = (0..per_antenna).map(|kk| cfg.packet_time(m + kk * ls)).collect();
                    gains.tx[m].powi(2) * pair_variation(&gains.rx, &scenario.psi_r, &slopes.rx, &packet_times)
                })
                .sum()
        }
        Scheme::Alamouti => tx_mean * pair_variation(&gains.rx, &scenario.psi_r, &slopes.rx, &times),
    };
    Ok(Decomposition { baseline, variation })
}

/// Outcome of the symbol-level Alamouti simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct AlamoutiCheck {
    pub decoded_s0: Vec<Complex64>,
    pub decoded_s1: Vec<Complex64>,
    /// Measured `E|s0|²/E|ŝ0 − s0|²`.
    pub snr_s0: f64,
    /// Measured `E|s1|²/E|ŝ1 − s1|²`.
    pub snr_s1: f64,
    /// Both symbol streams pooled.
    pub snr: f64,
}

/// Flat-channel Alamouti encode, noisy transmission through the combiner
/// output and linear decode for packet `k`.
///
/// Each entry of `s0`/`s1` is one symbol pair with its own noise draw. The
/// noise at the combiner output has variance `L_r·noise_power`, with the
/// received signal power normalized to one, so `snr·noise_power` estimates
/// [`alamouti_packet_snr`].
#[allow(clippy::too_many_arguments)]
pub fn alamouti_symbol_check(
    cfg: &SystemConfig,
    scenario: &ScenarioDraw,
    rx_slopes: &[f64],
    gains: &LinkGains,
    k: usize,
    s0: &[Complex64],
    s1: &[Complex64],
    noise_power: f64,
    seed: u64,
) -> Result<AlamoutiCheck> {
    if cfg.n_tx != 2 {
        return Err(input(format!(
            "Alamouti needs exactly 2 transmit antennas, got {}",
            cfg.n_tx
        )));
    }
    check_rx(cfg, scenario, rx_slopes, gains)?;
    check_packet(cfg, k)?;
    check_len("transmit phases", scenario.psi_s.len(), 2)?;
    if s0.len() != s1.len() || s0.is_empty() {
        return Err(input("symbol streams must be non-empty and of equal length"));
    }
    if !(noise_power >= 0.0 && noise_power.is_finite()) {
        return Err(input(format!("noise power must be >= 0, got {noise_power}")));
    }
    let t = cfg.packet_time(k);
    let mut combined = Complex64::new(0.0, 0.0);
    for ((g, a), psi) in gains.rx.iter().zip(rx_slopes).zip(&scenario.psi_r) {
        combined += Complex64::from_polar(*g, a * t - psi);
    }
    let c: [Complex64; 2] =
        std::array::from_fn(|m| Complex64::from_polar(gains.tx[m] * FRAC_1_SQRT_2, -scenario.psi_s[m]) * combined);
    let energy = c[0].norm_sqr() + c[1].norm_sqr();
    if energy == 0.0 {
        return Err(input("effective channel is zero; nothing to decode"));
    }

    let sigma = (cfg.n_rx as f64 * noise_power / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) * sigma
    };

    let mut decoded_s0 = Vec::with_capacity(s0.len());
    let mut decoded_s1 = Vec::with_capacity(s1.len());
    for (&a, &b) in s0.iter().zip(s1) {
        let y0 = c[0] * a + c[1] * b + noise();
        let y1 = -c[0] * b.conj() + c[1] * a.conj() + noise();
        decoded_s0.push((c[0].conj() * y0 + c[1] * y1.conj()) / energy);
        decoded_s1.push((c[1].conj() * y0 - c[0] * y1.conj()) / energy);
    }

    let ratio = |sent: &[Complex64], got: &[Complex64]| {
        let signal: f64 = sent.iter().map(|s| s.norm_sqr()).sum();
        let error: f64 = sent.iter().zip(got).map(|(s, g)| (g - s).norm_sqr()).sum();
        signal / error
    };
    let snr_s0 = ratio(s0, &decoded_s0);
    let snr_s1 = ratio(s1, &decoded_s1);
    let signal: f64 = s0.iter().chain(s1).map(|s| s.norm_sqr()).sum();
    let error: f64 = s0
        .iter()
        .zip(&decoded_s0)
        .chain(s1.iter().zip(&decoded_s1))
        .map(|(s, g)| (g - s).norm_sqr())
        .sum();
    Ok(AlamoutiCheck {
        decoded_s0,
        decoded_s1,
        snr_s0,
        snr_s1,
        snr: signal / error,
    })
}
