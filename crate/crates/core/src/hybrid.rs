//! Sub-connected receiver: the receive array is split into ports, each port
//! combines its antennas with time-linear phase shifters, and the port
//! outputs are merged by maximal-ratio combining.
//!
//! With noise uncorrelated between ports, the normalized per-packet SNR is
//! the sum of the per-port values.

use serde::{Deserialize, Serialize};

use crate::channel::{mean_power, LinkGains, ScenarioDraw};
use crate::error::{input, Error, Result};
use crate::schemes::{array_gain, array_gain_indexed, validate_inputs, Scheme, SlopeSet, SnrTrace, SystemConfig};
use crate::slopes::{abn_construct_multiuser, asn_construct, Construction};

/// Assignment of receive antennas to digital ports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortPartition {
    ports: Vec<Vec<usize>>,
    n_rx: usize,
}

impl PortPartition {
    /// Contiguous ports of the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(input("port sizes must be a non-empty list of positive counts"));
        }
        let mut start = 0;
        let ports = sizes
            .iter()
            .map(|&n| {
                let p: Vec<usize> = (start..start + n).collect();
                start += n;
                p
            })
            .collect();
        Ok(Self { ports, n_rx: start })
    }

    /// Arbitrary assignment; every index in `0..n_rx` must appear exactly once.
    pub fn from_indices(ports: Vec<Vec<usize>>, n_rx: usize) -> Result<Self> {
        if ports.is_empty() || ports.iter().any(Vec::is_empty) {
            return Err(input("every port needs at least one antenna"));
        }
        let mut seen = vec![false; n_rx];
        for &i in ports.iter().flatten() {
            match seen.get_mut(i) {
                None => return Err(input(format!("antenna index {i} out of range for L_r = {n_rx}"))),
                Some(true) => return Err(input(format!("antenna {i} assigned to more than one port"))),
                Some(s) => *s = true,
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(input(format!("antenna {missing} is not assigned to any port")));
        }
        Ok(Self { ports, n_rx })
    }

    /// One port holding the whole array.
    pub fn single(n_rx: usize) -> Result<Self> {
        Self::from_sizes(&[n_rx])
    }

    pub fn ports(&self) -> &[Vec<usize>] {
        &self.ports
    }

    pub fn port_count(&self) -> usize {
        self.ports.len()
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.ports.iter().map(Vec::len).collect()
    }

    pub fn largest(&self) -> usize {
        self.ports.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn check(&self, cfg: &SystemConfig) -> Result<()> {
        if self.n_rx != cfg.n_rx {
            return Err(input(format!(
                "ports cover {} receive antennas, system has {}",
                self.n_rx, cfg.n_rx
            )));
        }
        Ok(())
    }
}

/// `Σ_p Ḡ_p`, the per-packet value reached with per-port optimal slopes.
pub fn port_g_bar(partition: &PortPartition, gains: &LinkGains) -> f64 {
    let tx = mean_power(&gains.tx);
    partition
        .ports
        .iter()
        .map(|p| tx * p.iter().map(|&l| gains.rx[l] * gains.rx[l]).sum::<f64>() / p.len() as f64)
        .sum()
}

#[inline]
#[allow(clippy::too_many_arguments)]
pub(crate) fn mrc_packet_unchecked(
    scheme: Scheme,
    cfg: &SystemConfig,
    partition: &PortPartition,
    psi_s: &[f64],
    psi_r: &[f64],
    slopes: &SlopeSet,
    gains: &LinkGains,
    k: usize,
) -> f64 {
    let t = cfg.packet_time(k);
    let tx = match scheme {
        Scheme::Abn => array_gain(&gains.tx, psi_s, &slopes.tx, t) / cfg.n_tx as f64,
        Scheme::Asn => {
            let g = gains.tx[k % cfg.n_tx];
            g * g
        }
        Scheme::Alamouti => mean_power(&gains.tx),
    };
    let mut rx = 0.0;
    for port in &partition.ports {
        rx += array_gain_indexed(port, &gains.rx, psi_r, &slopes.rx, t) / port.len() as f64;
    }
    tx * rx
}

#[inline]
pub(crate) fn mrc_burst_unchecked(
    scheme: Scheme,
    cfg: &SystemConfig,
    partition: &PortPartition,
    psi_s: &[f64],
    psi_r: &[f64],
    slopes: &SlopeSet,
    gains: &LinkGains,
) -> f64 {
    (0..cfg.burst_len).fold(0.0, |acc, k| {
        acc + mrc_packet_unchecked(scheme, cfg, partition, psi_s, psi_r, slopes, gains, k)
    })
}

/// Normalized per-packet SNR after maximal-ratio combining of the ports.
///
/// `slopes.rx` is indexed by global receive antenna.
pub fn mrc_packet_snr(
    scheme: Scheme,
    cfg: &SystemConfig,
    partition: &PortPartition,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
    k: usize,
) -> Result<f64> {
    partition.check(cfg)?;
    validate_inputs(scheme, cfg, scenario, slopes, gains)?;
    if k >= cfg.burst_len {
        return Err(input(format!(
            "packet index {k} out of range for K = {}",
            cfg.burst_len
        )));
    }
    Ok(mrc_packet_unchecked(
        scheme,
        cfg,
        partition,
        &scenario.psi_s,
        &scenario.psi_r,
        slopes,
        gains,
        k,
    ))
}

/// Burst of [`mrc_packet_snr`] values.
pub fn mrc_sum_snr(
    scheme: Scheme,
    cfg: &SystemConfig,
    partition: &PortPartition,
    scenario: &ScenarioDraw,
    slopes: &SlopeSet,
    gains: &LinkGains,
) -> Result<SnrTrace> {
    partition.check(cfg)?;
    validate_inputs(scheme, cfg, scenario, slopes, gains)?;
    Ok(SnrTrace::new(
        (0..cfg.burst_len)
            .map(|k| {
                mrc_packet_unchecked(
                    scheme,
                    cfg,
                    partition,
                    &scenario.psi_s,
                    &scenario.psi_r,
                    slopes,
                    gains,
                    k,
                )
            })
            .collect(),
    ))
}

/// Per-port optimal slopes: receive slopes are designed for the largest port
/// and cloned by local index onto every port.
pub fn per_port_optimal_slopes(
    scheme: Scheme,
    partition: &PortPartition,
    n_tx: usize,
    k: usize,
    period: f64,
    variant: Construction,
) -> Result<SlopeSet> {
    let largest = partition.largest();
    let design = match scheme {
        Scheme::Abn => abn_construct_multiuser(largest, n_tx, largest, n_tx, k, period, variant)?,
        Scheme::Asn => asn_construct(largest, n_tx, k, period)?,
        Scheme::Alamouti => {
            if n_tx != 2 {
                return Err(Error::Infeasible(format!(
                    "Alamouti needs 2 transmit antennas, got {n_tx}"
                )));
            }
            abn_construct_multiuser(largest, 1, largest, 1, k, period, variant)?
        }
    };
    let mut rx = vec![0.0; partition.n_rx];
    for port in &partition.ports {
        for (local, &global) in port.iter().enumerate() {
            rx[global] = design.rx[local];
        }
    }
    let tx = match scheme {
        Scheme::Abn => design.tx,
        Scheme::Asn | Scheme::Alamouti => vec![0.0; n_tx],
    };
    Ok(SlopeSet::new(tx, rx, format!("{}-per-port", design.provenance)))
}

/// Slopes of the antennas in one port, in local order.
pub fn port_slopes(partition: &PortPartition, port: usize, slopes: &SlopeSet) -> Result<SlopeSet> {
    let p = partition
        .ports
        .get(port)
        .ok_or_else(|| input(format!("port {port} out of range")))?;
    Ok(SlopeSet::new(
        slopes.tx.clone(),
        p.iter().map(|&l| slopes.rx[l]).collect(),
        slopes.provenance.clone(),
    ))
}
