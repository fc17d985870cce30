//! Small angle helpers shared by the other modules.

use std::f64::consts::{PI, TAU};

/// Remainder of `x` modulo `2π`, always in `[0, 2π)`.
pub fn wrap_2pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps into `(-π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_2pi(x + PI) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Distance from `x` to the nearest point of the lattice `step·ℤ`.
pub fn lattice_distance(x: f64, step: f64) -> f64 {
    let r = x.rem_euclid(step);
    r.min(step - r).abs()
}

pub fn db_to_power(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn power_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}
