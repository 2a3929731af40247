//! Sources of per-agent headings.
//!
//! Dynamics never touch a random generator directly; they ask a
//! [`HeadingSource`] for one angle per agent, in ascending agent order. The
//! production source draws uniform angles from a seeded ChaCha8 stream (whose
//! output is identical on every platform). Tests substitute scripted angles.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub trait HeadingSource {
    /// Heading in radians for `agent`, in `[0, 2pi)`.
    fn draw(&mut self, agent: usize) -> f64;

    /// Draws one heading per agent, in agent-index order.
    fn draw_all(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|i| self.draw(i)).collect()
    }
}

/// I.i.d. uniform headings from a seeded generator.
#[derive(Debug, Clone)]
pub struct UniformHeadings {
    rng: ChaCha8Rng,
}

impl UniformHeadings {
    pub fn new(rng: ChaCha8Rng) -> Self {
        UniformHeadings { rng }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl HeadingSource for UniformHeadings {
    fn draw(&mut self, _agent: usize) -> f64 {
        self.rng.random_range(0.0..TAU)
    }
}

/// Replays a fixed list of headings, one row per step.
///
/// Each call to [`HeadingSource::draw_all`] consumes one row. Once the rows
/// are exhausted the last row repeats.
#[derive(Debug, Clone)]
pub struct ScriptedHeadings {
    rows: Vec<Vec<f64>>,
    next: usize,
}

impl ScriptedHeadings {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        assert!(!rows.is_empty(), "scripted headings need at least one row");
        ScriptedHeadings { rows, next: 0 }
    }

    /// The same headings every step.
    pub fn constant(headings: Vec<f64>) -> Self {
        Self::new(vec![headings])
    }
}

impl HeadingSource for ScriptedHeadings {
    fn draw(&mut self, agent: usize) -> f64 {
        let row = &self.rows[self.next.min(self.rows.len() - 1)];
        if agent + 1 == row.len() {
            self.next += 1;
        }
        row[agent].rem_euclid(TAU)
    }

    fn draw_all(&mut self, n: usize) -> Vec<f64> {
        let row = &self.rows[self.next.min(self.rows.len() - 1)];
        assert_eq!(
            row.len(),
            n,
            "scripted row length does not match agent count"
        );
        self.next += 1;
        row.iter().map(|h| h.rem_euclid(TAU)).collect()
    }
}

impl<H: HeadingSource + ?Sized> HeadingSource for &mut H {
    fn draw(&mut self, agent: usize) -> f64 {
        (**self).draw(agent)
    }

    fn draw_all(&mut self, n: usize) -> Vec<f64> {
        (**self).draw_all(n)
    }
}
