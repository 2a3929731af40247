//! Simulation and analysis of randomized gathering for anonymous, oblivious
//! agents that can only sense whether another agent lies behind them.
//!
//! Two processes are modelled:
//!
//! * [`discrete`]: every unit step each agent draws a uniform heading and
//!   jumps a fixed distance forward iff its closed back half-plane is empty.
//! * [`continuous`]: headings are redrawn once per unit interval; within the
//!   interval an agent moves at unit speed while no agent farther than the
//!   blind-zone radius lies in its back half-plane.
//!
//! [`theory`] evaluates the closed-form convergence bounds for the
//! continuous process, and [`harness`] runs seeded Monte-Carlo sweeps.

pub mod continuous;
pub mod discrete;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod heading;
pub mod theory;
pub mod trace;

pub use error::{Error, Result};
pub use geometry::{Disc, Hull, Vec2};
pub use trace::{Frame, RunSummary, Trace};
