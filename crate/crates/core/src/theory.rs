//! Closed-form convergence bounds for the blind-zone process.
//!
//! All angles are in radians. Each function checks its domain and returns
//! [`Error::Domain`] outside it.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn require_n(n: usize, min: usize) -> Result<f64> {
    if n < min {
        return Err(Error::domain(format!("n must be at least {min}, got {n}")));
    }
    Ok(n as f64)
}

fn require_positive(name: &str, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "{name} must be positive and finite, got {x}"
        )));
    }
    Ok(x)
}

/// Upper bound `pi (1 - 2/n)` on the sharpest interior angle of the convex
/// hull of `n` points.
pub fn sharpest_angle_bound(n: usize) -> Result<f64> {
    let n = require_n(n, 3)?;
    Ok(PI * (1.0 - 2.0 / n))
}

/// Lower bound `1/(2n)` on the probability that the sharpest-corner agent
/// draws a heading in the central half of its free sector.
pub fn move_probability_bound(n: usize) -> Result<f64> {
    let n = require_n(n, 2)?;
    Ok(1.0 / (2.0 * n))
}

/// `(pi/2)(1 - 1/n)` and `pi/(2n)`; they sum to `pi/2`.
pub fn theta_gamma(n: usize) -> Result<(f64, f64)> {
    let nf = require_n(n, 2)?;
    let gamma = PI / (2.0 * nf);
    Ok((FRAC_PI_2 - gamma, gamma))
}

/// Guaranteed travel of the sharpest-corner agent in a successful interval:
/// `min(delta tan(pi/(4n)), 1)`.
pub fn step_min(n: usize, delta: f64) -> Result<f64> {
    let nf = require_n(n, 2)?;
    let delta = require_positive("delta", delta)?;
    Ok((delta * (PI / (4.0 * nf)).tan()).min(1.0))
}

fn check_shrink_args(d: f64, st: f64, theta: f64) -> Result<()> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("distance must be positive, got {d}")));
    }
    if !(st >= 0.0 && st.is_finite()) {
        return Err(Error::domain(format!(
            "step must be non-negative, got {st}"
        )));
    }
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(Error::domain(format!(
            "angle must lie in [0, pi/2), got {theta}"
        )));
    }
    Ok(())
}

/// Decrease of the distance `d` to a stationary agent when the other agent
/// moves `st` along a direction making angle `theta` with the line to it:
/// `d - sqrt(d^2 + st^2 - 2 d st cos theta)`.
pub fn shrink(d: f64, st: f64, theta: f64) -> Result<f64> {
    check_shrink_args(d, st, theta)?;
    Ok(d - remaining_distance(d, st, theta))
}

fn remaining_distance(d: f64, st: f64, theta: f64) -> f64 {
    (d * d + st * st - 2.0 * d * st * theta.cos())
        .max(0.0)
        .sqrt()
}

/// Partial derivatives of [`shrink`] with respect to `d`, `st` and `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkPartials {
    pub d_d: f64,
    pub d_st: f64,
    pub d_theta: f64,
}

/// Closed-form partials of [`shrink`]. Requires `st > 0` and a non-zero
/// remaining distance.
///
/// `d/d st = (d cos theta - st) / sqrt(...)`, which is positive for
/// `st < d cos theta` and negative beyond it.
pub fn shrink_partials(d: f64, st: f64, theta: f64) -> Result<ShrinkPartials> {
    check_shrink_args(d, st, theta)?;
    if st == 0.0 {
        return Err(Error::domain("step must be positive for the partials"));
    }
    let root = remaining_distance(d, st, theta);
    if root == 0.0 {
        return Err(Error::domain("partials are singular where the agents meet"));
    }
    let (sin, cos) = theta.sin_cos();
    Ok(ShrinkPartials {
        d_d: 1.0 - (d - st * cos) / root,
        d_st: -(st - d * cos) / root,
        d_theta: -(d * st * sin) / root,
    })
}

/// Lower bound on the shrink of a pair in a successful interval:
/// `delta (1 - sqrt(1 - tan^2(pi/(4n))))`.
pub fn shrink_min(n: usize, delta: f64) -> Result<f64> {
    let nf = require_n(n, 2)?;
    let delta = require_positive("delta", delta)?;
    Ok(delta * shrink_factor(nf))
}

/// `1 - sqrt(1 - tan^2(pi/(4n)))`, positive for every `n >= 2`.
fn shrink_factor(n: f64) -> f64 {
    let t = (PI / (4.0 * n)).tan();
    1.0 - (1.0 - t * t).sqrt()
}

/// Upper bound on the expected number of unit intervals until confinement:
/// `8 n^3 / (1 - sqrt(1 - tan^2(pi/(4n)))) * d_max0 / delta`.
pub fn expected_time_bound(n: usize, delta: f64, d_max0: f64) -> Result<f64> {
    let nf = require_n(n, 2)?;
    let delta = require_positive("delta", delta)?;
    let d_max0 = require_positive("d_max0", d_max0)?;
    Ok(8.0 * nf.powi(3) / shrink_factor(nf) * d_max0 / delta)
}

/// Every closed-form quantity of the convergence argument for one setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub delta: f64,
    pub d_max0: f64,
    /// `pi (1 - 2/n)`; zero for two agents, whose hull has no corners.
    pub alpha_max: f64,
    pub move_prob_lb: f64,
    pub theta_s_max: f64,
    pub gamma_s_min: f64,
    pub step_min: f64,
    pub shrink_min: f64,
    pub expected_intervals_ub: f64,
}

impl BoundsReport {
    pub fn compute(n: usize, delta: f64, d_max0: f64) -> Result<Self> {
        let nf = require_n(n, 2)?;
        let (theta_s_max, gamma_s_min) = theta_gamma(n)?;
        Ok(BoundsReport {
            n,
            delta,
            d_max0,
            alpha_max: PI * (1.0 - 2.0 / nf),
            move_prob_lb: move_probability_bound(n)?,
            theta_s_max,
            gamma_s_min,
            step_min: step_min(n, delta)?,
            shrink_min: shrink_min(n, delta)?,
            expected_intervals_ub: expected_time_bound(n, delta, d_max0)?,
        })
    }
}
