//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use gathering::geometry::{Disc, Vec2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<Vec2> {
    (0..n)
        .map(|_| Vec2::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect()
}

/// Hull vertices by exhaustive edge test: `(a, b)` is a hull edge iff every
/// other point is strictly to its left.
pub fn brute_force_hull_vertices(points: &[Vec2]) -> Vec<usize> {
    let n = points.len();
    let mut verts = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let edge = points[b] - points[a];
            let valid = (0..n)
                .filter(|&k| k != a && k != b)
                .all(|k| edge.cross(points[k] - points[a]) > 0.0);
            if valid {
                verts.push(a);
                verts.push(b);
            }
        }
    }
    verts.sort_unstable();
    verts.dedup();
    verts
}

fn circumcircle(a: Vec2, b: Vec2, c: Vec2) -> Option<Disc> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-14 {
        return None;
    }
    let (a2, b2, c2) = (a.norm_sq(), b.norm_sq(), c.norm_sq());
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Vec2::new(ux, uy);
    Some(Disc {
        center,
        radius: center.distance(a),
    })
}

/// Smallest radius among all pair-diameter and triple-circumcircle discs
/// that contain every point.
pub fn exhaustive_min_radius(points: &[Vec2]) -> f64 {
    let n = points.len();
    if n == 1 {
        return 0.0;
    }
    let encloses = |d: &Disc| {
        points
            .iter()
            .all(|&p| d.center.distance(p) <= d.radius * (1.0 + 1e-12) + 1e-12)
    };
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let c = (points[i] + points[j]) * 0.5;
            let d = Disc {
                center: c,
                radius: c.distance(points[i]),
            };
            if d.radius < best && encloses(&d) {
                best = d.radius;
            }
            for k in (j + 1)..n {
                if let Some(d) = circumcircle(points[i], points[j], points[k]) {
                    if d.radius < best && encloses(&d) {
                        best = d.radius;
                    }
                }
            }
        }
    }
    best
}
