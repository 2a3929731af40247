//! Synchronous discrete jump process.
//!
//! Every step each agent draws a fresh uniform heading and then, if no other
//! agent lies in its closed back half-plane, jumps `step_size` forward. All
//! sensing in a step uses the positions from before any agent moved.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{back_halfplane_occupied, min_enclosing_disc, Vec2};
use crate::heading::{HeadingSource, UniformHeadings};
use crate::trace::{Frame, RunSummary, Trace};

pub const DEFAULT_SPREAD: f64 = 50.0;
pub const DEFAULT_MAX_STEPS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteConfig {
    pub n: usize,
    pub step_size: f64,
    /// Side of the square `[0, spread]^2` the agents start in.
    pub spread: f64,
    pub seed: u64,
    pub max_steps: u64,
    pub convergence_radius: f64,
    /// Keep every `record_every`-th frame in the trace (0 disables recording
    /// beyond the initial and final frames).
    pub record_every: u64,
}

impl DiscreteConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        DiscreteConfig {
            n,
            step_size: 1.0,
            spread: DEFAULT_SPREAD,
            seed,
            max_steps: DEFAULT_MAX_STEPS,
            convergence_radius: 1.0,
            record_every: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::config("n must be at least 1"));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::config("step size must be positive"));
        }
        if !(self.spread > 0.0 && self.spread.is_finite()) {
            return Err(Error::config("spread must be positive"));
        }
        if self.max_steps < 1 {
            return Err(Error::config("max steps must be at least 1"));
        }
        if !(self.convergence_radius > 0.0 && self.convergence_radius.is_finite()) {
            return Err(Error::config("convergence radius must be positive"));
        }
        Ok(())
    }
}

/// Agent positions and headings at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub positions: Vec<Vec2>,
    /// Radians in `[0, 2pi)`.
    pub headings: Vec<f64>,
    pub step_index: u64,
}

impl Constellation {
    /// Constellation at step 0 with all headings zero.
    pub fn from_positions(positions: Vec<Vec2>) -> Self {
        let n = positions.len();
        Constellation {
            positions,
            headings: vec![0.0; n],
            step_index: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn enclosing_radius(&self) -> f64 {
        min_enclosing_disc(&self.positions).map_or(0.0, |d| d.radius)
    }
}

/// Uniform positions in `[0, spread]^2` (x then y per agent), followed by
/// uniform headings, all drawn from `rng` in agent order.
pub fn init_constellation<R: Rng>(n: usize, spread: f64, rng: &mut R) -> Constellation {
    let positions = (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..=spread);
            let y = rng.random_range(0.0..=spread);
            Vec2::new(x, y)
        })
        .collect();
    let headings = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    Constellation {
        positions,
        headings,
        step_index: 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: Constellation,
    pub moved: Vec<bool>,
}

/// One synchronous step: redraw all headings, sense against the pre-move
/// positions, then move every agent whose back half-plane was empty.
pub fn discrete_step<H: HeadingSource>(
    state: &Constellation,
    step_size: f64,
    headings: &mut H,
) -> StepOutcome {
    let n = state.n();
    let chi = headings.draw_all(n);
    let units: Vec<Vec2> = chi.iter().map(|&a| Vec2::from_angle(a)).collect();
    let moved: Vec<bool> = (0..n)
        .map(|i| !back_halfplane_occupied(i, &state.positions, units[i]))
        .collect();
    let positions = state
        .positions
        .iter()
        .zip(&units)
        .zip(&moved)
        .map(|((&p, &u), &m)| if m { p + u * step_size } else { p })
        .collect();
    StepOutcome {
        state: Constellation {
            positions,
            headings: chi,
            step_index: state.step_index + 1,
        },
        moved,
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteRun {
    pub trace: Trace,
    pub summary: RunSummary,
}

/// Runs from a seeded random start until the enclosing radius is at most
/// `convergence_radius` or `max_steps` steps have been taken.
pub fn run_discrete(config: &DiscreteConfig) -> Result<DiscreteRun> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = init_constellation(config.n, config.spread, &mut rng);
    run_discrete_from(config, initial, &mut UniformHeadings::new(rng))
}

/// Like [`run_discrete`] but from a given constellation and heading source.
pub fn run_discrete_from<H: HeadingSource>(
    config: &DiscreteConfig,
    initial: Constellation,
    headings: &mut H,
) -> Result<DiscreteRun> {
    config.validate()?;
    if initial.n() != config.n {
        return Err(Error::config(format!(
            "constellation has {} agents, config says {}",
            initial.n(),
            config.n
        )));
    }
    let n = config.n;
    let mut trace = Trace::new();
    let mut state = initial;
    let mut radius = state.enclosing_radius();
    trace.push(Frame {
        step: state.step_index,
        positions: state.positions.clone(),
        headings: state.headings.clone(),
        moved: vec![false; n],
        radius,
        lyapunov: None,
    });

    let mut converged = (radius <= config.convergence_radius).then_some(state.step_index);
    let mut last_moved = vec![false; n];
    while converged.is_none() && state.step_index < config.max_steps {
        let out = discrete_step(&state, config.step_size, headings);
        state = out.state;
        last_moved = out.moved;
        radius = state.enclosing_radius();
        if radius <= config.convergence_radius {
            converged = Some(state.step_index);
        }
        let keep = config.record_every > 0 && state.step_index.is_multiple_of(config.record_every);
        if keep {
            trace.push(frame_of(&state, &last_moved, radius));
        }
    }
    if trace.last().map(|f| f.step) != Some(state.step_index) {
        trace.push(frame_of(&state, &last_moved, radius));
    }

    Ok(DiscreteRun {
        trace,
        summary: RunSummary {
            run_id: 0,
            seed: config.seed,
            n,
            spread: config.spread,
            converged_step: converged,
            final_radius: radius,
        },
    })
}

fn frame_of(state: &Constellation, moved: &[bool], radius: f64) -> Frame {
    Frame {
        step: state.step_index,
        positions: state.positions.clone(),
        headings: state.headings.clone(),
        moved: moved.to_vec(),
        radius,
        lyapunov: None,
    }
}
