//! Piecewise-continuous gathering with a blind zone.
//!
//! Headings are redrawn once per unit interval. Within the interval agent `i`
//! moves at unit speed along its heading while no agent `j` with
//! `d_ij > delta` lies in its closed back half-plane, and stops otherwise.
//!
//! The motion is integrated with fixed substeps of length `substep`. At the
//! start of each substep every sensor is read from the same snapshot; agents
//! with an occupied sensor stay put for the whole substep. Inside a substep
//! the integrator also tracks the instants at which a pair that is within the
//! blind zone would leave it: the continuous law stops whichever agent is
//! moving away at that instant (the other agent becomes visible behind it),
//! so the substep is split there and that agent is halted. This keeps pairs
//! within `delta` of each other from ever drifting past `delta`, which the
//! plain fixed-step scheme cannot guarantee.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discrete::{init_constellation, Constellation};
use crate::error::{Error, Result};
use crate::geometry::{min_enclosing_disc, Vec2};
use crate::heading::{HeadingSource, UniformHeadings};
use crate::trace::{Frame, IntervalRecord, RunSummary, Trace};

pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_SUBSTEP: f64 = 1e-3;
pub const DEFAULT_MAX_INTERVALS: u64 = 100_000;

/// Relative width of the band just inside `delta` in which a pair counts as
/// sitting on the blind-zone boundary.
const BOUNDARY_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousConfig {
    pub n: usize,
    /// Blind-zone radius.
    pub delta: f64,
    /// Integration substep; `1 / substep` must be a positive integer.
    pub substep: f64,
    pub spread: f64,
    pub seed: u64,
    pub max_intervals: u64,
    pub record_every: u64,
}

impl ContinuousConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        ContinuousConfig {
            n,
            delta: DEFAULT_DELTA,
            substep: DEFAULT_SUBSTEP,
            spread: 5.0,
            seed,
            max_intervals: DEFAULT_MAX_INTERVALS,
            record_every: 1,
        }
    }

    /// Number of substeps per unit interval.
    pub fn substeps(&self) -> Result<u32> {
        if !(self.substep > 0.0 && self.substep <= 1.0) {
            return Err(Error::config("substep must lie in (0, 1]"));
        }
        let k = 1.0 / self.substep;
        let rounded = k.round();
        if (k - rounded).abs() > 1e-9 * rounded || rounded > u32::MAX as f64 {
            return Err(Error::config(format!(
                "substep {} does not divide the unit interval",
                self.substep
            )));
        }
        Ok(rounded as u32)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::config("n must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::config("delta must be positive"));
        }
        if !(self.spread > 0.0 && self.spread.is_finite()) {
            return Err(Error::config("spread must be positive"));
        }
        if self.max_intervals < 1 {
            return Err(Error::config("max intervals must be at least 1"));
        }
        self.substeps().map(|_| ())
    }
}

/// True iff some agent `j != i` farther than `delta` lies in the closed back
/// half-plane of agent `i`. Agents within `delta` are invisible whatever
/// their direction.
pub fn blind_zone_sensor(i: usize, positions: &[Vec2], heading: Vec2, delta: f64) -> bool {
    debug_assert!(
        (heading.norm() - 1.0).abs() <= 1e-12,
        "heading must be a unit vector"
    );
    let pi = positions[i];
    let delta_sq = delta * delta;
    positions.iter().enumerate().any(|(j, &pj)| {
        let r = pj - pi;
        j != i && heading.dot(r) <= 0.0 && r.norm_sq() > delta_sq
    })
}

/// Earliest time at which the separation `r + w t` reaches length `delta`
/// from inside, or `None` if the relative velocity is zero.
fn exit_time(r: Vec2, w: Vec2, delta: f64) -> Option<f64> {
    let a = w.norm_sq();
    if a == 0.0 {
        return None;
    }
    let b = r.dot(w);
    let c = (r.norm_sq() - delta * delta).min(0.0);
    let disc = (b * b - a * c).sqrt();
    Some(if b > 0.0 {
        -c / (b + disc)
    } else {
        (disc - b) / a
    })
}

/// Advances `positions` through one substep of length `dt` with unit
/// headings `units`. Returns the distance each agent travelled.
pub fn integrate_substep(positions: &mut [Vec2], units: &[Vec2], delta: f64, dt: f64) -> Vec<f64> {
    let n = positions.len();
    let mut travel = vec![0.0; n];
    let mut moving: Vec<bool> = (0..n)
        .map(|i| !blind_zone_sensor(i, positions, units[i], delta))
        .collect();

    let delta_sq = delta * delta;
    let band_sq = (delta * (1.0 - BOUNDARY_BAND)).powi(2);
    let mut remaining = dt;

    // Every pass either finishes the substep or halts at least one agent.
    for _ in 0..=n {
        // Agents moving away from a neighbour that sits on the boundary.
        for i in 0..n {
            for j in (i + 1)..n {
                let r = positions[j] - positions[i];
                let d_sq = r.norm_sq();
                if d_sq < band_sq || d_sq > delta_sq {
                    continue;
                }
                if moving[i] && units[i].dot(r) <= 0.0 {
                    moving[i] = false;
                }
                if moving[j] && units[j].dot(-r) <= 0.0 {
                    moving[j] = false;
                }
            }
        }
        if !moving.iter().any(|&m| m) {
            break;
        }

        let velocity = |k: usize, moving: &[bool]| if moving[k] { units[k] } else { Vec2::ZERO };
        let mut event: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if !(moving[i] || moving[j]) {
                    continue;
                }
                let r = positions[j] - positions[i];
                if r.norm_sq() > delta_sq {
                    continue;
                }
                let w = velocity(j, &moving) - velocity(i, &moving);
                if let Some(t) = exit_time(r, w, delta) {
                    if t < remaining && event.is_none_or(|(best, _, _)| t < best) {
                        event = Some((t, i, j));
                    }
                }
            }
        }

        let Some((t_event, ei, ej)) = event else {
            advance(positions, units, &moving, remaining, &mut travel);
            break;
        };

        // Step to the event, backing off by rounding slack so that no pair
        // inside the blind zone ends up outside it.
        let inside: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| positions[i].distance(positions[j]) <= delta)
            .collect();
        let start = positions.to_vec();
        let mut t = t_event;
        for _ in 0..64 {
            positions.copy_from_slice(&start);
            let mut scratch = travel.clone();
            advance(positions, units, &moving, t, &mut scratch);
            if inside
                .iter()
                .all(|&(i, j)| positions[i].distance(positions[j]) <= delta)
            {
                travel = scratch;
                break;
            }
            t = (t * (1.0 - 1e-12) - 1e-18).max(0.0);
            if t == 0.0 {
                positions.copy_from_slice(&start);
                break;
            }
        }
        remaining -= t;

        // Halt whichever member of the pair is moving away; in a tangential
        // touch neither is strictly moving away and both are halted.
        let r = positions[ej] - positions[ei];
        let away_i = moving[ei] && units[ei].dot(r) <= 0.0;
        let away_j = moving[ej] && units[ej].dot(-r) <= 0.0;
        if away_i || away_j {
            moving[ei] &= !away_i;
            moving[ej] &= !away_j;
        } else {
            moving[ei] = false;
            moving[ej] = false;
        }
        if remaining <= 0.0 {
            break;
        }
    }
    travel
}

fn advance(positions: &mut [Vec2], units: &[Vec2], moving: &[bool], t: f64, travel: &mut [f64]) {
    if t <= 0.0 {
        return;
    }
    for k in 0..positions.len() {
        if moving[k] {
            positions[k] += units[k] * t;
            travel[k] += t;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalOutcome {
    pub state: Constellation,
    /// Distance travelled by each agent during the interval.
    pub travel: Vec<f64>,
}

/// One unit interval: draw headings once, then integrate `substeps` substeps.
pub fn continuous_interval<H: HeadingSource>(
    state: &Constellation,
    delta: f64,
    substeps: u32,
    headings: &mut H,
) -> IntervalOutcome {
    let n = state.n();
    let chi = headings.draw_all(n);
    let units: Vec<Vec2> = chi.iter().map(|&a| Vec2::from_angle(a)).collect();
    let dt = 1.0 / substeps as f64;
    let mut positions = state.positions.clone();
    let mut travel = vec![0.0; n];
    for _ in 0..substeps {
        let step = integrate_substep(&mut positions, &units, delta, dt);
        for (acc, s) in travel.iter_mut().zip(step) {
            *acc += s;
        }
    }
    IntervalOutcome {
        state: Constellation {
            positions,
            headings: chi,
            step_index: state.step_index + 1,
        },
        travel,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovState {
    pub value: f64,
    /// All agents fit in an open disc of radius `delta`.
    pub confined: bool,
}

/// `c * sum_i sum_j l_ij`, where `l_ij` is the pair distance when it exceeds
/// `delta` and zero otherwise (each pair counted in both orders), and `c` is
/// zero exactly when the minimal enclosing disc has radius below `delta`.
pub fn lyapunov_value(positions: &[Vec2], delta: f64) -> Result<LyapunovState> {
    let radius = min_enclosing_disc(positions)?.radius;
    Ok(lyapunov_with_radius(positions, delta, radius))
}

fn lyapunov_with_radius(positions: &[Vec2], delta: f64, radius: f64) -> LyapunovState {
    if radius < delta {
        return LyapunovState {
            value: 0.0,
            confined: true,
        };
    }
    let mut sum = 0.0;
    for (i, &p) in positions.iter().enumerate() {
        for &q in &positions[i + 1..] {
            let d = p.distance(q);
            if d > delta {
                sum += d;
            }
        }
    }
    LyapunovState {
        value: 2.0 * sum,
        confined: false,
    }
}

#[derive(Debug, Clone)]
pub struct ContinuousRun {
    pub trace: Trace,
    /// One record per interval, including interval 0.
    pub series: Vec<IntervalRecord>,
    pub summary: RunSummary,
}

pub fn run_continuous(config: &ContinuousConfig) -> Result<ContinuousRun> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = init_constellation(config.n, config.spread, &mut rng);
    run_continuous_from(config, initial, &mut UniformHeadings::new(rng))
}

/// Iterates intervals from `initial` until the constellation is confined or
/// `max_intervals` is reached.
pub fn run_continuous_from<H: HeadingSource>(
    config: &ContinuousConfig,
    initial: Constellation,
    headings: &mut H,
) -> Result<ContinuousRun> {
    config.validate()?;
    if initial.n() != config.n {
        return Err(Error::config(format!(
            "constellation has {} agents, config says {}",
            initial.n(),
            config.n
        )));
    }
    let substeps = config.substeps()?;
    let n = config.n;
    let mut state = initial;
    let mut trace = Trace::new();
    let mut series = Vec::new();

    let observe = |state: &Constellation| -> Result<(f64, LyapunovState)> {
        let radius = min_enclosing_disc(&state.positions)?.radius;
        Ok((
            radius,
            lyapunov_with_radius(&state.positions, config.delta, radius),
        ))
    };
    let frame = |state: &Constellation, moved: Vec<bool>, radius: f64, lyap: f64| Frame {
        step: state.step_index,
        positions: state.positions.clone(),
        headings: state.headings.clone(),
        moved,
        radius,
        lyapunov: Some(lyap),
    };

    let (mut radius, mut lyap) = observe(&state)?;
    series.push(IntervalRecord {
        interval: 0,
        sec_radius: radius,
        lyapunov: lyap.value,
        confined: lyap.confined,
    });
    trace.push(frame(&state, vec![false; n], radius, lyap.value));

    let mut moved = vec![false; n];
    while !lyap.confined && state.step_index < config.max_intervals {
        let out = continuous_interval(&state, config.delta, substeps, headings);
        state = out.state;
        moved = out.travel.iter().map(|&t| t > 0.0).collect();
        (radius, lyap) = observe(&state)?;
        series.push(IntervalRecord {
            interval: state.step_index,
            sec_radius: radius,
            lyapunov: lyap.value,
            confined: lyap.confined,
        });
        if config.record_every > 0 && state.step_index.is_multiple_of(config.record_every) {
            trace.push(frame(&state, moved.clone(), radius, lyap.value));
        }
    }
    if trace.last().map(|f| f.step) != Some(state.step_index) {
        trace.push(frame(&state, moved, radius, lyap.value));
    }

    Ok(ContinuousRun {
        trace,
        series,
        summary: RunSummary {
            run_id: 0,
            seed: config.seed,
            n,
            spread: config.spread,
            converged_step: lyap.confined.then_some(state.step_index),
            final_radius: radius,
        },
    })
}
