//! Recorded trajectories, per-run summaries and their CSV encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Snapshot of the constellation after a step (discrete) or an interval
/// (continuous). Frame 0 is the initial constellation with all `moved` flags
/// cleared.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub step: u64,
    pub positions: Vec<Vec2>,
    /// Headings (radians) used during the step that produced this frame.
    pub headings: Vec<f64>,
    pub moved: Vec<bool>,
    /// Radius of the minimal enclosing disc.
    pub radius: f64,
    /// Lyapunov value, recorded by the continuous model only.
    pub lyapunov: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    frames: Vec<Frame>,
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    /// Appends a frame. Step indices must be strictly increasing.
    pub fn push(&mut self, frame: Frame) {
        if let Some(last) = self.frames.last() {
            assert!(frame.step > last.step, "trace steps must strictly increase");
        }
        self.frames.push(frame);
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn last(&self) -> Option<&Frame> {
        self.frames.last()
    }

    /// Copy of the first `len` frames.
    pub fn prefix(&self, len: usize) -> Trace {
        Trace {
            frames: self.frames[..len.min(self.frames.len())].to_vec(),
        }
    }

    /// Writes one row per agent per frame:
    /// `step,agent,x,y,heading,moved`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "agent", "x", "y", "heading", "moved"])?;
        for f in &self.frames {
            for (i, p) in f.positions.iter().enumerate() {
                w.write_record([
                    f.step.to_string(),
                    i.to_string(),
                    p.x.to_string(),
                    p.y.to_string(),
                    f.headings[i].to_string(),
                    u8::from(f.moved[i]).to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Discrete,
    Continuous,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Discrete => "discrete",
            Model::Continuous => "continuous",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discrete" => Ok(Model::Discrete),
            "continuous" => Ok(Model::Continuous),
            other => Err(Error::config(format!("unknown model '{other}'"))),
        }
    }
}

/// Outcome of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: u64,
    pub seed: u64,
    pub n: usize,
    pub spread: f64,
    /// First step (or interval) at which the convergence test held.
    pub converged_step: Option<u64>,
    pub final_radius: f64,
}

/// Writes summaries as `run_id,seed,n,spread,converged_step,final_radius`;
/// a run that never converged has an empty `converged_step` field.
pub fn write_summaries_csv<W: Write>(summaries: &[RunSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "run_id",
        "seed",
        "n",
        "spread",
        "converged_step",
        "final_radius",
    ])?;
    for s in summaries {
        w.write_record([
            s.run_id.to_string(),
            s.seed.to_string(),
            s.n.to_string(),
            s.spread.to_string(),
            s.converged_step.map(|k| k.to_string()).unwrap_or_default(),
            s.final_radius.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_summaries_csv<R: std::io::Read>(input: R) -> Result<Vec<RunSummary>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Per-interval observables of the continuous model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub interval: u64,
    pub sec_radius: f64,
    pub lyapunov: f64,
    pub confined: bool,
}

/// Writes `interval,sec_radius,lyapunov,confined`.
pub fn write_series_csv<W: Write>(series: &[IntervalRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["interval", "sec_radius", "lyapunov", "confined"])?;
    for rec in series {
        w.write_record([
            rec.interval.to_string(),
            rec.sec_radius.to_string(),
            rec.lyapunov.to_string(),
            rec.confined.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
