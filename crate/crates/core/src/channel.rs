//! Array geometry and the normalized single-dominant-path channel.
//!
//! The link is restricted to the azimuth plane (`θ = π/2`). Amplitude, delay
//! and noise are factored out: every quantity here is relative to the
//! received power along the dominant path.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antennas::AntennaPattern;
use crate::error::{input, Result};
use crate::phase::wrap_2pi;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Carrier of the 5.9 GHz ITS band.
pub const DEFAULT_CARRIER_HZ: f64 = 5.9e9;

/// Wavelength at [`DEFAULT_CARRIER_HZ`], about 5.08 cm.
pub const DEFAULT_WAVELENGTH: f64 = SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ;

/// Element coordinates (meters) and carrier wavelength. Element 0 is the
/// phase reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    positions: Vec<[f64; 3]>,
    wavelength: f64,
}

impl ArrayGeometry {
    pub fn new(positions: Vec<[f64; 3]>, wavelength: f64) -> Result<Self> {
        if positions.is_empty() {
            return Err(input("array geometry needs at least one element"));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(input(format!("wavelength must be positive, got {wavelength}")));
        }
        if positions.iter().flatten().any(|c| !c.is_finite()) {
            return Err(input("element coordinates must be finite"));
        }
        Ok(Self { positions, wavelength })
    }

    /// `count` elements spaced `spacing` meters apart along the x axis.
    pub fn linear(count: usize, spacing: f64, wavelength: f64) -> Result<Self> {
        Self::new((0..count).map(|i| [i as f64 * spacing, 0.0, 0.0]).collect(), wavelength)
    }

    /// Half-wavelength linear array at the default carrier.
    pub fn half_wave_linear(count: usize) -> Self {
        Self::linear(count, DEFAULT_WAVELENGTH / 2.0, DEFAULT_WAVELENGTH).expect("count checked by caller")
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    /// `⟨k_c(φ, π/2), u_index − u_0⟩` with `k_c = (2π/λ)(cos φ, sin φ, 0)`.
    pub fn relative_phase(&self, index: usize, phi: f64) -> Result<f64> {
        let u = self.positions.get(index).ok_or_else(|| {
            input(format!(
                "element index {index} out of range for {} elements",
                self.positions.len()
            ))
        })?;
        if index == 0 {
            return Ok(0.0);
        }
        let u0 = self.positions[0];
        let k = TAU / self.wavelength;
        Ok(k * (phi.cos() * (u[0] - u0[0]) + phi.sin() * (u[1] - u0[1])))
    }
}

/// One side of the link: geometry plus one pattern per element.
#[derive(Debug, Clone)]
pub struct AntennaArray {
    pub geometry: ArrayGeometry,
    pub patterns: Vec<AntennaPattern>,
}

impl AntennaArray {
    pub fn new(geometry: ArrayGeometry, patterns: Vec<AntennaPattern>) -> Result<Self> {
        if geometry.len() != patterns.len() {
            return Err(input(format!(
                "{} element positions but {} patterns",
                geometry.len(),
                patterns.len()
            )));
        }
        Ok(Self { geometry, patterns })
    }

    /// Half-wavelength linear layout for the given patterns.
    pub fn with_default_layout(patterns: Vec<AntennaPattern>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(input("an array needs at least one pattern"));
        }
        Self::new(ArrayGeometry::half_wave_linear(patterns.len()), patterns)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// `|g_m(φ)|` for every element.
    pub fn gains(&self, phi: f64) -> Vec<f64> {
        self.patterns.iter().map(|p| p.gain(phi)).collect()
    }

    fn relative_phases(&self, phi: f64) -> Vec<f64> {
        (0..self.len())
            .map(|m| self.geometry.relative_phase(m, phi).expect("index in range"))
            .collect()
    }
}

/// Element gain magnitudes at a fixed AOD/AOA pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGains {
    /// `|g^s_m(φ^s)|`, one per transmit element.
    pub tx: Vec<f64>,
    /// `|g^r_l(φ^r)|`, one per receive element.
    pub rx: Vec<f64>,
}

impl LinkGains {
    pub fn new(tx: Vec<f64>, rx: Vec<f64>) -> Self {
        Self { tx, rx }
    }

    pub fn from_arrays(tx: &AntennaArray, rx: &AntennaArray, phi_s: f64, phi_r: f64) -> Self {
        Self {
            tx: tx.gains(phi_s),
            rx: rx.gains(phi_r),
        }
    }

    /// All gains one.
    pub fn unit(n_tx: usize, n_rx: usize) -> Self {
        Self {
            tx: vec![1.0; n_tx],
            rx: vec![1.0; n_rx],
        }
    }

    /// Product of the mean receive power gain and the mean transmit power gain.
    pub fn g_bar(&self) -> f64 {
        g_bar(&self.tx, &self.rx)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            tx: self.tx.iter().map(|g| g * factor).collect(),
            rx: self.rx.iter().map(|g| g * factor).collect(),
        }
    }
}

pub fn mean_power(gains: &[f64]) -> f64 {
    gains.iter().map(|g| g * g).sum::<f64>() / gains.len() as f64
}

/// `(Σ_l |g^r_l|²/L_r)·(Σ_m |g^s_m|²/L_s)`.
pub fn g_bar(tx: &[f64], rx: &[f64]) -> f64 {
    if tx.is_empty() || rx.is_empty() {
        return 0.0;
    }
    mean_power(rx) * mean_power(tx)
}

/// AOD, AOA and the effective channel phases of both arrays, all phases in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDraw {
    pub phi_s: f64,
    pub phi_r: f64,
    pub psi_s: Vec<f64>,
    pub psi_r: Vec<f64>,
}

impl ScenarioDraw {
    /// Wraps every phase into `[0, 2π)`.
    pub fn new(phi_s: f64, phi_r: f64, psi_s: Vec<f64>, psi_r: Vec<f64>) -> Self {
        Self {
            phi_s: wrap_2pi(phi_s),
            phi_r: wrap_2pi(phi_r),
            psi_s: psi_s.into_iter().map(wrap_2pi).collect(),
            psi_r: psi_r.into_iter().map(wrap_2pi).collect(),
        }
    }

    /// Phases only; angles set to zero.
    pub fn from_phases(psi_s: Vec<f64>, psi_r: Vec<f64>) -> Self {
        Self::new(0.0, 0.0, psi_s, psi_r)
    }

    pub fn zero(n_tx: usize, n_rx: usize) -> Self {
        Self::from_phases(vec![0.0; n_tx], vec![0.0; n_rx])
    }
}

/// `[H]_{l,m} = g^s_m(φ^s)·g^r_l(φ^r)·e^{jΩ^s_m}·e^{−jΩ^r_l}`, an `L_r × L_s` matrix.
pub fn channel_matrix(tx: &AntennaArray, rx: &AntennaArray, phi_s: f64, phi_r: f64) -> DMatrix<Complex64> {
    let omega_s = tx.relative_phases(phi_s);
    let omega_r = rx.relative_phases(phi_r);
    let g_s: Vec<Complex64> = tx.patterns.iter().map(|p| p.value(phi_s)).collect();
    let g_r: Vec<Complex64> = rx.patterns.iter().map(|p| p.value(phi_r)).collect();
    DMatrix::from_fn(rx.len(), tx.len(), |l, m| {
        g_s[m] * g_r[l] * Complex64::from_polar(1.0, omega_s[m] - omega_r[l])
    })
}

/// Effective phases for initial shifter offsets `beta_s`, `beta_r`:
/// `ψ^s_m = rem(−Ω^s_m − arg g^s_m(φ^s) − β^s_m, 2π)` and
/// `ψ^r_l = rem(Ω^r_l − arg g^r_l(φ^r) − β^r_l, 2π)`.
pub fn effective_phases(
    tx: &AntennaArray,
    rx: &AntennaArray,
    phi_s: f64,
    phi_r: f64,
    beta_s: &[f64],
    beta_r: &[f64],
) -> Result<ScenarioDraw> {
    if beta_s.len() != tx.len() || beta_r.len() != rx.len() {
        return Err(input(format!(
            "offset lengths ({}, {}) do not match antenna counts ({}, {})",
            beta_s.len(),
            beta_r.len(),
            tx.len(),
            rx.len()
        )));
    }
    let omega_s = tx.relative_phases(phi_s);
    let omega_r = rx.relative_phases(phi_r);
    let psi_s = (0..tx.len())
        .map(|m| -omega_s[m] - tx.patterns[m].value(phi_s).arg() - beta_s[m])
        .collect();
    let psi_r = (0..rx.len())
        .map(|l| omega_r[l] - rx.patterns[l].value(phi_r).arg() - beta_r[l])
        .collect();
    Ok(ScenarioDraw::new(phi_s, phi_r, psi_s, psi_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antennas::PatternKind;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn omni_array(n: usize) -> AntennaArray {
        AntennaArray::with_default_layout(vec![AntennaPattern::ideal_omni(); n]).unwrap()
    }

    fn sector_pair() -> AntennaArray {
        let s = AntennaPattern::synthesize(PatternKind::Sector {
            beamwidth_deg: 120.0,
            floor_db: -20.0,
        })
        .unwrap();
        let geom = ArrayGeometry::new(vec![[0.0, 0.0, 0.0], [0.03, 0.01, 0.0]], DEFAULT_WAVELENGTH).unwrap();
        AntennaArray::new(geom, vec![s.clone(), s.rotated(PI)]).unwrap()
    }

    #[test]
    fn relative_phase_examples() {
        let g = ArrayGeometry::linear(2, 0.5, 1.0).unwrap();
        assert_eq!(g.relative_phase(0, 1.7).unwrap(), 0.0);
        assert!((g.relative_phase(1, 0.0).unwrap() - PI).abs() < 1e-15);
        assert!(g.relative_phase(1, FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!(matches!(g.relative_phase(2, 0.0), Err(crate::Error::Input(_))));
    }

    #[test]
    fn geometry_validation() {
        assert!(ArrayGeometry::new(vec![], 1.0).is_err());
        assert!(ArrayGeometry::new(vec![[0.0; 3]], 0.0).is_err());
        let g = ArrayGeometry::linear(2, 0.01, 0.05).unwrap();
        assert!(AntennaArray::new(g, vec![AntennaPattern::ideal_omni()]).is_err());
    }

    #[test]
    fn one_by_one_omni_is_unity() {
        let h = channel_matrix(&omni_array(1), &omni_array(1), 0.4, 2.0);
        assert_eq!(h.shape(), (1, 1));
        assert!((h[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_rx_half_wave_broadside_phase() {
        let rx = omni_array(2);
        let h = channel_matrix(&omni_array(1), &rx, 0.0, 0.0);
        assert_eq!(h.shape(), (2, 1));
        assert!((h[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 0)] - Complex64::from_polar(1.0, -PI)).norm() < 1e-12);
    }

    #[test]
    fn sector_matrix_matches_scalar_loop() {
        let tx = sector_pair();
        let rx = sector_pair();
        let (phi_s, phi_r) = (0.7, 4.1);
        let h = channel_matrix(&tx, &rx, phi_s, phi_r);
        let k = TAU / DEFAULT_WAVELENGTH;
        let pos = [[0.0, 0.0], [0.03, 0.01]];
        for l in 0..2 {
            for m in 0..2 {
                let om_s = k * (phi_s.cos() * pos[m][0] + phi_s.sin() * pos[m][1]);
                let om_r = k * (phi_r.cos() * pos[l][0] + phi_r.sin() * pos[l][1]);
                let gs = tx.patterns[m].value(phi_s);
                let gr = rx.patterns[l].value(phi_r);
                let expected = gs * gr * Complex64::new(0.0, om_s).exp() * Complex64::new(0.0, -om_r).exp();
                assert!((h[(l, m)] - expected).norm() < 1e-12);
                assert!((h[(l, m)].norm() - gs.norm() * gr.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn effective_phase_examples() {
        let s = effective_phases(&omni_array(1), &omni_array(1), 0.3, 1.1, &[0.0], &[0.0]).unwrap();
        assert_eq!(s.psi_s, vec![0.0]);
        assert_eq!(s.psi_r, vec![0.0]);
        let s = effective_phases(&omni_array(1), &omni_array(1), 0.3, 1.1, &[0.0], &[FRAC_PI_2]).unwrap();
        assert!((s.psi_r[0] - 1.5 * PI).abs() < 1e-15);
        assert!(effective_phases(&omni_array(1), &omni_array(2), 0.0, 0.0, &[0.0], &[0.0]).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn effective_phases_term_by_term() {
        let tx = sector_pair();
        let rx = sector_pair().rotated_patterns(0.4);
        let (phi_s, phi_r) = (2.2, 5.0);
        let beta_s = [0.3, 4.0];
        let beta_r = [6.1, 1.2];
        let s = effective_phases(&tx, &rx, phi_s, phi_r, &beta_s, &beta_r).unwrap();
        for m in 0..2 {
            let om = tx.geometry.relative_phase(m, phi_s).unwrap();
            let want = (-om - tx.patterns[m].value(phi_s).arg() - beta_s[m]).rem_euclid(TAU);
            assert!((s.psi_s[m] - want).abs() < 1e-12);
        }
        for l in 0..2 {
            let om = rx.geometry.relative_phase(l, phi_r).unwrap();
            let want = (om - rx.patterns[l].value(phi_r).arg() - beta_r[l]).rem_euclid(TAU);
            assert!((s.psi_r[l] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn g_bar_examples() {
        assert_eq!(g_bar(&[1.0, 1.0], &[1.0, 1.0, 1.0]), 1.0);
        assert_eq!(g_bar(&[1.0], &[1.0, 0.0]), 0.5);
    }

    impl AntennaArray {
        fn rotated_patterns(mut self, o: f64) -> Self {
            for p in &mut self.patterns {
                *p = p.rotated(o);
            }
            self
        }
    }
}
