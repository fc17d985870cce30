//! The geometric-series kernel `f`, the zero sets `X*`, optimality
//! predicates for slope sets and the optimal constructions.
//!
//! Slopes are handled in rad/s. The kernel works on the half-period phase
//! advance `x = α·T/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::phase::lattice_distance;
use crate::schemes::SlopeSet;

/// Default membership tolerance in radians.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `Σ_{k<K} cos(y − 2kx)` in closed form.
///
/// `f` is `π`-periodic in `x`, so `x` is reduced into `[−π/2, π/2)` first to
/// keep `sin(Kx)/sin(x)` accurate for large arguments.
pub fn f_closed(x: f64, y: f64, k: usize) -> f64 {
    assert!(k >= 1, "K must be at least 1");
    let kf = k as f64;
    let xr = (x + PI / 2.0).rem_euclid(PI) - PI / 2.0;
    let s = xr.sin();
    if s.abs() < 1e-12 {
        // First-order expansion around the pole; the derivative at 0 is K(K−1)·sin y.
        return kf * y.cos() + xr * kf * (kf - 1.0) * y.sin();
    }
    (kf * xr).sin() / s * (y - (kf - 1.0) * xr).cos()
}

/// `Σ_{k<K} cos(y − 2kx)` by direct summation.
pub fn f_direct(x: f64, y: f64, k: usize) -> f64 {
    (0..k).map(|i| (y - 2.0 * i as f64 * x).cos()).sum()
}

/// `x ∈ {qπ/K} \ {nπ}` up to `tol`.
pub fn in_xstar(x: f64, k: usize, tol: f64) -> bool {
    debug_assert!(tol > 0.0);
    lattice_distance(x, PI / k as f64) < tol && lattice_distance(x, PI) >= tol
}

/// Half-period phase advance of a slope.
pub fn slope_to_x(alpha: f64, period: f64) -> f64 {
    alpha * period / 2.0
}

/// Slope in rad/s for a half-period phase advance.
pub fn x_to_slope(x: f64, period: f64) -> f64 {
    2.0 * x / period
}

/// Which side carries the fine slope spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Receive slopes step by `2π/(KT)`, transmit slopes by `L_r·2π/(KT)`.
    #[default]
    Primary,
    /// Transmit slopes step by `2π/(KT)`, receive slopes by `L_s·2π/(KT)`.
    Reciprocal,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Primary => "primary",
            Construction::Reciprocal => "reciprocal",
        }
    }
}

fn check_period(period: f64) -> Result<()> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(input(format!("period must be positive, got {period}")));
    }
    Ok(())
}

fn steps(n: usize, step: f64) -> Vec<f64> {
    (0..n).map(|i| i as f64 * step).collect()
}

/// Optimal beamforming slopes for an `L_r × L_s` link and burst length `K`.
pub fn abn_construct(n_rx: usize, n_tx: usize, k: usize, period: f64, variant: Construction) -> Result<SlopeSet> {
    abn_construct_multiuser(n_rx, n_tx, n_rx, n_tx, k, period, variant)
}

/// Slopes that stay optimal for every link with at most `max_rx` receive and
/// `max_tx` transmit antennas.
pub fn abn_construct_multiuser(
    n_rx: usize,
    n_tx: usize,
    max_rx: usize,
    max_tx: usize,
    k: usize,
    period: f64,
    variant: Construction,
) -> Result<SlopeSet> {
    check_period(period)?;
    if n_rx == 0 || n_tx == 0 || k == 0 {
        return Err(input("antenna counts and K must be at least 1"));
    }
    if n_rx > max_rx || n_tx > max_tx {
        return Err(Error::Infeasible(format!(
            "array {n_rx}x{n_tx} exceeds the design maximum {max_rx}x{max_tx}"
        )));
    }
    if max_rx * max_tx > k {
        return Err(Error::Infeasible(format!(
            "L_r·L_s = {} exceeds K = {k}; no slope set removes the phase dependence",
            max_rx * max_tx
        )));
    }
    let unit = std::f64::consts::TAU / (k as f64 * period);
    let (rx, tx) = match variant {
        Construction::Primary => (steps(n_rx, unit), steps(n_tx, max_rx as f64 * unit)),
        Construction::Reciprocal => (steps(n_rx, max_tx as f64 * unit), steps(n_tx, unit)),
    };
    let name = if max_rx == n_rx && max_tx == n_tx {
        variant.name().to_string()
    } else {
        format!("{}-multiuser", variant.name())
    };
    Ok(SlopeSet::new(tx, rx, name))
}

/// Optimal receive slopes for the switching transmitter; transmit slopes are empty.
pub fn asn_construct(n_rx: usize, n_tx: usize, k: usize, period: f64) -> Result<SlopeSet> {
    check_period(period)?;
    if n_rx == 0 || n_tx == 0 || k == 0 {
        return Err(input("antenna counts and K must be at least 1"));
    }
    if k % n_tx != 0 {
        return Err(Error::Infeasible(format!("K = {k} is not a multiple of L_s = {n_tx}")));
    }
    if n_rx > k / n_tx {
        return Err(Error::Infeasible(format!("L_r = {n_rx} exceeds K/L_s = {}", k / n_tx)));
    }
    let unit = std::f64::consts::TAU / (k as f64 * period);
    Ok(SlopeSet::new(Vec::new(), steps(n_rx, unit), "asn"))
}

/// Family of an optimality condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionClass {
    /// Receive slope difference `Δα^r T/2`.
    RxDifference,
    /// Transmit slope difference `Δα^s T/2`.
    TxDifference,
    /// `(Δα^r + Δα^s)T/2`.
    CrossSum,
    /// `(Δα^r − Δα^s)T/2`.
    CrossDifference,
    /// `L_s·Δα^r T/2` against `X*_{K/L_s}` for the switching transmitter.
    SwitchedRx,
}

impl ConditionClass {
    pub fn name(self) -> &'static str {
        match self {
            ConditionClass::RxDifference => "rx-difference",
            ConditionClass::TxDifference => "tx-difference",
            ConditionClass::CrossSum => "cross-sum",
            ConditionClass::CrossDifference => "cross-difference",
            ConditionClass::SwitchedRx => "switched-rx",
        }
    }
}

/// One failed membership test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub class: ConditionClass,
    /// Receive pair `(l, i)`, if the condition involves one.
    pub rx_pair: Option<(usize, usize)>,
    /// Transmit pair `(m, j)`, if the condition involves one.
    pub tx_pair: Option<(usize, usize)>,
    /// The tested value of `x`.
    pub x: f64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.class.name())?;
        if let Some((l, i)) = self.rx_pair {
            write!(f, " rx({l},{i})")?;
        }
        if let Some((m, j)) = self.tx_pair {
            write!(f, " tx({m},{j})")?;
        }
        write!(f, " x={:.6}", self.x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub optimal: bool,
    pub violations: Vec<Violation>,
}

impl OptimalityReport {
    fn from(violations: Vec<Violation>) -> Self {
        Self {
            optimal: violations.is_empty(),
            violations,
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |l| (l + 1..n).map(move |i| (l, i)))
}

/// Whether the slopes make the beamforming burst sum phase independent.
pub fn check_abn(slopes: &SlopeSet, k: usize, period: f64, tol: f64) -> Result<OptimalityReport> {
    check_period(period)?;
    if k == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(input("K must be at least 1 and tol positive"));
    }
    let dx = |v: &[f64], a: usize, b: usize| slope_to_x(v[b] - v[a], period);
    let mut violations = Vec::new();
    for (l, i) in pairs(slopes.rx.len()) {
        let x = dx(&slopes.rx, l, i);
        if !in_xstar(x, k, tol) {
            violations.push(Violation {
                class: ConditionClass::RxDifference,
                rx_pair: Some((l, i)),
                tx_pair: None,
                x,
            });
        }
    }
    for (m, j) in pairs(slopes.tx.len()) {
        let x = dx(&slopes.tx, m, j);
        if !in_xstar(x, k, tol) {
            violations.push(Violation {
                class: ConditionClass::TxDifference,
                rx_pair: None,
                tx_pair: Some((m, j)),
                x,
            });
        }
    }
    for (l, i) in pairs(slopes.rx.len()) {
        for (m, j) in pairs(slopes.tx.len()) {
            let xr = dx(&slopes.rx, l, i);
            let xs = dx(&slopes.tx, m, j);
            for (class, x) in [
                (ConditionClass::CrossSum, xr + xs),
                (ConditionClass::CrossDifference, xr - xs),
            ] {
                if !in_xstar(x, k, tol) {
                    violations.push(Violation {
                        class,
                        rx_pair: Some((l, i)),
                        tx_pair: Some((m, j)),
                        x,
                    });
                }
            }
        }
    }
    Ok(OptimalityReport::from(violations))
}

/// Whether the receive slopes make the switching burst sum phase independent.
pub fn check_asn(rx_slopes: &[f64], n_tx: usize, k: usize, period: f64, tol: f64) -> Result<OptimalityReport> {
    check_period(period)?;
    if n_tx == 0 || k == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(input("L_s and K must be at least 1 and tol positive"));
    }
    if k % n_tx != 0 {
        return Err(input(format!("K = {k} is not a multiple of L_s = {n_tx}")));
    }
    let k_bar = k / n_tx;
    let violations = pairs(rx_slopes.len())
        .filter_map(|(l, i)| {
            let x = n_tx as f64 * slope_to_x(rx_slopes[i] - rx_slopes[l], period);
            (!in_xstar(x, k_bar, tol)).then_some(Violation {
                class: ConditionClass::SwitchedRx,
                rx_pair: Some((l, i)),
                tx_pair: None,
                x,
            })
        })
        .collect();
    Ok(OptimalityReport::from(violations))
}

/// Exhaustive search over slope sets whose `x` values lie on the `qπ/K`
/// lattice, with the first slope of each side fixed at zero.
///
/// Membership in `X*` only depends on `x` modulo `π`, so `q ∈ [0, K)` covers
/// every lattice set. Returns the first optimal set found, if any.
pub fn find_lattice_solution(n_rx: usize, n_tx: usize, k: usize, period: f64) -> Result<Option<SlopeSet>> {
    check_period(period)?;
    if n_rx == 0 || n_tx == 0 || k == 0 {
        return Err(input("antenna counts and K must be at least 1"));
    }
    let free = n_rx + n_tx - 2;
    let combos = (k as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
    const LIMIT: u128 = 50_000_000;
    if combos > LIMIT {
        return Err(Error::GridTooLarge {
            evaluations: combos,
            limit: LIMIT,
        });
    }
    let to_slope = |q: usize| x_to_slope(q as f64 * PI / k as f64, period);
    let mut digits = vec![0usize; free];
    loop {
        let mut rx = vec![0.0];
        rx.extend(digits[..n_rx - 1].iter().map(|&q| to_slope(q)));
        let mut tx = vec![0.0];
        tx.extend(digits[n_rx - 1..].iter().map(|&q| to_slope(q)));
        let set = SlopeSet::new(tx, rx, "lattice-search");
        if check_abn(&set, k, period, DEFAULT_TOL)?.optimal {
            return Ok(Some(set));
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == free {
                return Ok(None);
            }
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f_closed_examples() {
        assert_eq!(f_closed(0.0, 0.0, 4), 4.0);
        for y in [0.0, 0.3, 1.0, 2.5, -4.0] {
            assert!(f_closed(PI / 4.0, y, 4).abs() < 1e-14);
        }
        assert!((f_closed(0.3, 1.0, 4) - f_direct(0.3, 1.0, 4)).abs() < 1e-12);
        assert!((f_closed(3.0 * PI, 0.7, 5) - 5.0 * 0.7f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn f_closed_near_pole() {
        for x in [1e-13, -3e-13, PI + 2e-13, 1e-10, 1e-7] {
            for y in [0.0, 1.0, -2.0] {
                let d = f_direct(x, y, 7);
                assert!((f_closed(x, y, 7) - d).abs() < 1e-11, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn f_closed_large_arguments() {
        let x = 1e5 + 0.123;
        assert!((f_closed(x, 0.4, 9) - f_direct(x, 0.4, 9)).abs() < 1e-9);
    }

    #[test]
    fn in_xstar_examples() {
        assert!(in_xstar(PI / 4.0, 4, DEFAULT_TOL));
        assert!(!in_xstar(PI, 4, DEFAULT_TOL));
        assert!(!in_xstar(0.0, 4, DEFAULT_TOL));
        assert!(in_xstar(-3.0 * PI / 4.0, 4, DEFAULT_TOL));
        assert!(!in_xstar(PI / 8.0, 4, DEFAULT_TOL));
        assert!(!in_xstar(PI / 3.0, 1, DEFAULT_TOL));
    }

    #[test]
    fn slope_conversion_round_trip() {
        for a in [0.0, 1.0, -20.0 * PI, 1e4] {
            assert_eq!(x_to_slope(slope_to_x(a, 0.1), 0.1), a);
        }
    }

    #[test]
    fn abn_construct_examples() {
        // 2π/(KT) = 5π rad/s for K = 4, T = 0.1 s.
        let s = abn_construct(2, 2, 4, 0.1, Construction::Primary).unwrap();
        assert!((s.rx[1] - 5.0 * PI).abs() < 1e-9);
        assert!((s.tx[1] - 10.0 * PI).abs() < 1e-9);
        assert_eq!(s.rx[0], 0.0);
        let r = abn_construct(2, 2, 4, 0.1, Construction::Reciprocal).unwrap();
        assert!((r.rx[1] - 10.0 * PI).abs() < 1e-9);
        assert!((r.tx[1] - 5.0 * PI).abs() < 1e-9);
        let z = abn_construct(1, 1, 3, 0.1, Construction::Primary).unwrap();
        assert_eq!((z.rx.clone(), z.tx.clone()), (vec![0.0], vec![0.0]));
        assert!(matches!(
            abn_construct(3, 2, 5, 0.1, Construction::Primary),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn constructions_pass_their_predicates() {
        for k in 1..=9 {
            for lr in 1..=k {
                for ls in 1..=k {
                    for v in [Construction::Primary, Construction::Reciprocal] {
                        let r = abn_construct(lr, ls, k, 0.1, v);
                        if lr * ls <= k {
                            let s = r.unwrap();
                            let rep = check_abn(&s, k, 0.1, DEFAULT_TOL).unwrap();
                            assert!(rep.optimal, "{lr}x{ls} K={k} {v:?}: {:?}", rep.violations);
                        } else {
                            assert!(r.is_err());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn multiuser_construction() {
        let s = abn_construct_multiuser(3, 2, 3, 3, 9, 0.1, Construction::Primary).unwrap();
        let unit = std::f64::consts::TAU / 0.9;
        assert!((s.tx[1] - 3.0 * unit).abs() < 1e-9);
        let full = abn_construct_multiuser(3, 3, 3, 3, 9, 0.1, Construction::Primary).unwrap();
        assert_eq!(full, abn_construct(3, 3, 9, 0.1, Construction::Primary).unwrap());
        for lr in 1..=3 {
            for ls in 1..=3 {
                for v in [Construction::Primary, Construction::Reciprocal] {
                    let s = abn_construct_multiuser(lr, ls, 3, 3, 9, 0.1, v).unwrap();
                    assert!(check_abn(&s, 9, 0.1, DEFAULT_TOL).unwrap().optimal);
                }
            }
        }
        assert!(abn_construct_multiuser(4, 1, 3, 3, 9, 0.1, Construction::Primary).is_err());
        assert!(abn_construct_multiuser(1, 1, 3, 4, 9, 0.1, Construction::Primary).is_err());
    }

    #[test]
    fn asn_construct_examples() {
        let s = asn_construct(2, 2, 4, 0.1).unwrap();
        assert!((s.rx[1] - 5.0 * PI).abs() < 1e-9);
        assert!(s.tx.is_empty());
        let p = abn_construct(2, 2, 4, 0.1, Construction::Primary).unwrap();
        assert_eq!(s.rx, p.rx);
        assert!(asn_construct(3, 2, 4, 0.1).is_err());
        assert!(asn_construct(2, 2, 5, 0.1).is_err());
        assert!(check_asn(&s.rx, 2, 4, 0.1, DEFAULT_TOL).unwrap().optimal);
    }

    #[test]
    fn check_abn_reports_cross_difference() {
        let u = std::f64::consts::TAU / 0.4;
        let s = SlopeSet::new(vec![0.0, u], vec![0.0, u], "x");
        let rep = check_abn(&s, 4, 0.1, DEFAULT_TOL).unwrap();
        assert!(!rep.optimal);
        assert_eq!(rep.violations.len(), 1);
        let v = &rep.violations[0];
        assert_eq!(v.class, ConditionClass::CrossDifference);
        assert_eq!((v.rx_pair, v.tx_pair), (Some((0, 1)), Some((0, 1))));
        assert!(v.to_string().starts_with("cross-difference rx(0,1) tx(0,1)"));
    }

    #[test]
    fn check_abn_single_tx_reduces_to_rx_condition() {
        // One transmit antenna: only receive differences matter.
        let k = 4;
        let x = PI / k as f64 * 2.0;
        let s = SlopeSet::new(vec![0.0], vec![0.0, x_to_slope(x, 0.1)], "x");
        let rep = check_abn(&s, k, 0.1, DEFAULT_TOL).unwrap();
        assert_eq!(rep.optimal, in_xstar(x, k, DEFAULT_TOL));
        let s = SlopeSet::new(vec![0.0], vec![0.0, x_to_slope(PI, 0.1)], "x");
        let rep = check_abn(&s, k, 0.1, DEFAULT_TOL).unwrap();
        assert!(!rep.optimal);
        assert_eq!(rep.violations[0].class, ConditionClass::RxDifference);
    }

    #[test]
    fn check_asn_examples() {
        assert!(!check_asn(&[5.0, 5.0], 2, 4, 0.1, DEFAULT_TOL).unwrap().optimal);
        assert!(check_asn(&[0.0, 1.0], 2, 5, 0.1, DEFAULT_TOL).is_err());
        // Any q not a multiple of K̄ works for the pair difference.
        let (k, ls) = (8, 2);
        let k_bar = k / ls;
        for q in 1..(2 * k_bar) {
            let x = q as f64 * PI / k_bar as f64 / ls as f64;
            let rx = [0.0, x_to_slope(x, 0.1)];
            let rep = check_asn(&rx, ls, k, 0.1, DEFAULT_TOL).unwrap();
            assert_eq!(rep.optimal, q % k_bar != 0, "q={q}");
        }
    }

    #[test]
    fn lattice_search_feasibility_boundary() {
        for k in 1..=6 {
            for lr in 1..=3 {
                for ls in 1..=3 {
                    let found = find_lattice_solution(lr, ls, k, 0.1).unwrap();
                    assert_eq!(found.is_some(), lr * ls <= k, "{lr}x{ls} K={k}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn f_closed_matches_direct(x in -50.0f64..50.0, y in -10.0f64..10.0, k in 1usize..=16) {
            prop_assert!((f_closed(x, y, k) - f_direct(x, y, k)).abs() < 1e-12 * (k as f64));
        }

        #[test]
        fn addition_identity(x1 in -5.0f64..5.0, x2 in -5.0f64..5.0, y1 in -5.0f64..5.0, y2 in -5.0f64..5.0, k in 1usize..=16) {
            let lhs: f64 = 2.0 * (0..k).map(|i| {
                let i = i as f64;
                (y1 - 2.0 * i * x1).cos() * (y2 - 2.0 * i * x2).cos()
            }).sum::<f64>();
            let rhs = f_closed(x1 + x2, y1 + y2, k) + f_closed(x1 - x2, y1 - y2, k);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (k as f64).max(1.0) * 4.0);
        }

        #[test]
        fn f_is_pi_periodic(x in -5.0f64..5.0, y in -5.0f64..5.0, k in 1usize..=12, n in -3i32..=3) {
            let shifted = f_closed(x + n as f64 * PI, y, k);
            prop_assert!((shifted - f_closed(x, y, k)).abs() < 1e-10);
        }
    }
}
