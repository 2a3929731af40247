//! Planar primitives used by both dynamics engines and the bound checks.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative geometric tolerance, scaled by the extent of the point set.
pub const GEOM_EPS: f64 = 1e-9;

/// Fixed seed for the shuffle inside [`min_enclosing_disc`], so the function
/// stays pure.
const DISC_SHUFFLE_SEED: u64 = 0x5EC0_D15C;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector `(cos angle, sin angle)`.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2 { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product; positive when `other` is
    /// counter-clockwise from `self`.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (other - self).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Angle of the vector in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Vec2,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Vec2, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Disc { center, radius }
    }

    /// Membership with a small multiplicative slack for rounding.
    #[inline]
    pub fn contains(&self, p: Vec2) -> bool {
        self.center.distance(p) <= self.radius * (1.0 + 1e-14) + 1e-300
    }

    fn diameter(a: Vec2, b: Vec2) -> Disc {
        let center = (a + b) * 0.5;
        Disc::new(center, center.distance(a).max(center.distance(b)))
    }

    /// Circle through three points, `None` when they are collinear.
    fn circumscribed(a: Vec2, b: Vec2, c: Vec2) -> Option<Disc> {
        // Work relative to the bounding-box centre for precision.
        let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
        let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
        let o = Vec2::new(ox, oy);
        let (a, b, c) = (a - o, b - o, c - o);
        let d = (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y)) * 2.0;
        if d == 0.0 {
            return None;
        }
        let (a2, b2, c2) = (a.norm_sq(), b.norm_sq(), c.norm_sq());
        let x = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
        let y = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
        let center = Vec2::new(x, y);
        let r = center
            .distance(a)
            .max(center.distance(b))
            .max(center.distance(c));
        Some(Disc::new(center + o, r))
    }
}

/// Convex hull in counter-clockwise order together with the indices of the
/// source points that form its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    pub vertices: Vec<Vec2>,
    pub indices: Vec<usize>,
}

impl Hull {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }
}

fn ensure_finite(points: &[Vec2]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::domain("empty point set"));
    }
    if let Some(k) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::domain(format!("point {k} is not finite")));
    }
    Ok(())
}

/// Diagonal of the axis-aligned bounding box.
pub fn bbox_diagonal(points: &[Vec2]) -> f64 {
    let (mut lo, mut hi) = (Vec2::new(f64::MAX, f64::MAX), Vec2::new(f64::MIN, f64::MIN));
    for p in points {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if points.is_empty() {
        0.0
    } else {
        (hi - lo).norm()
    }
}

/// Monotone-chain convex hull. Collinear and duplicate points are dropped so
/// the result is strictly convex; degenerate sets give 1 or 2 vertices.
pub fn convex_hull(points: &[Vec2]) -> Result<Hull> {
    ensure_finite(points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x)
            .then(p.y.total_cmp(&q.y))
            .then(a.cmp(&b))
    });
    order.dedup_by(|a, b| points[*a] == points[*b]);

    if order.len() == 1 {
        return Ok(Hull {
            vertices: vec![points[order[0]]],
            indices: vec![order[0]],
        });
    }

    let turn = |o: usize, a: usize, b: usize| (points[a] - points[o]).cross(points[b] - points[o]);
    let mut chain: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &k in &order {
        while chain.len() >= 2 && turn(chain[chain.len() - 2], chain[chain.len() - 1], k) <= 0.0 {
            chain.pop();
        }
        chain.push(k);
    }
    let lower_len = chain.len() + 1;
    for &k in order.iter().rev().skip(1) {
        while chain.len() >= lower_len
            && turn(chain[chain.len() - 2], chain[chain.len() - 1], k) <= 0.0
        {
            chain.pop();
        }
        chain.push(k);
    }
    chain.pop();

    Ok(Hull {
        vertices: chain.iter().map(|&k| points[k]).collect(),
        indices: chain,
    })
}

/// Interior angle at each hull vertex, in radians.
pub fn corner_angles(hull: &Hull) -> Result<Vec<f64>> {
    let m = hull.len();
    if m < 3 {
        return Err(Error::domain(format!(
            "corner angles need at least 3 hull vertices, got {m}"
        )));
    }
    Ok((0..m)
        .map(|k| {
            let v = hull.vertices[k];
            let a = hull.vertices[(k + m - 1) % m] - v;
            let b = hull.vertices[(k + 1) % m] - v;
            a.cross(b).abs().atan2(a.dot(b))
        })
        .collect())
}

/// Smallest disc containing every point (randomized incremental construction
/// with a fixed shuffle seed, expected linear time).
pub fn min_enclosing_disc(points: &[Vec2]) -> Result<Disc> {
    ensure_finite(points)?;
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(DISC_SHUFFLE_SEED));

    let mut disc = Disc::new(shuffled[0], 0.0);
    for i in 1..shuffled.len() {
        let p = shuffled[i];
        if !disc.contains(p) {
            disc = disc_with_one(&shuffled[..i], p);
        }
    }
    Ok(disc)
}

fn disc_with_one(points: &[Vec2], p: Vec2) -> Disc {
    let mut disc = Disc::new(p, 0.0);
    for (i, &q) in points.iter().enumerate() {
        if !disc.contains(q) {
            disc = if disc.radius == 0.0 {
                Disc::diameter(p, q)
            } else {
                disc_with_two(&points[..=i], p, q)
            };
        }
    }
    disc
}

fn disc_with_two(points: &[Vec2], p: Vec2, q: Vec2) -> Disc {
    let base = Disc::diameter(p, q);
    let pq = q - p;
    let mut left: Option<Disc> = None;
    let mut right: Option<Disc> = None;
    for &r in points {
        if base.contains(r) {
            continue;
        }
        let side = pq.cross(r - p);
        let Some(c) = Disc::circumscribed(p, q, r) else {
            continue;
        };
        let offset = pq.cross(c.center - p);
        if side > 0.0 {
            if left.is_none_or(|l| offset > pq.cross(l.center - p)) {
                left = Some(c);
            }
        } else if side < 0.0 && right.is_none_or(|rd| offset < pq.cross(rd.center - p)) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

/// True iff some agent `j != i` lies in the closed half-plane behind agent
/// `i`, i.e. `heading . (p_j - p_i) <= 0`. Ties count as occupied.
pub fn back_halfplane_occupied(i: usize, positions: &[Vec2], heading: Vec2) -> bool {
    debug_assert!(
        (heading.norm() - 1.0).abs() <= 1e-12,
        "heading must be a unit vector"
    );
    let pi = positions[i];
    positions
        .iter()
        .enumerate()
        .any(|(j, &pj)| j != i && heading.dot(pj - pi) <= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn hull_excludes_interior_point() {
        let pts = [v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0), v(0.1, 0.1)];
        let hull = convex_hull(&pts).unwrap();
        let mut idx = hull.indices.clone();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
        // counter-clockwise
        let [a, b, c] = [hull.vertices[0], hull.vertices[1], hull.vertices[2]];
        assert!((b - a).cross(c - a) > 0.0);
    }

    #[test]
    fn hull_degenerate_inputs() {
        let single = convex_hull(&[v(0.0, 0.0)]).unwrap();
        assert_eq!(single.vertices, vec![v(0.0, 0.0)]);

        let same = convex_hull(&[v(2.0, 3.0); 5]).unwrap();
        assert_eq!(same.len(), 1);

        let line = convex_hull(&[v(0.0, 0.0), v(2.0, 2.0), v(1.0, 1.0), v(3.0, 3.0)]).unwrap();
        let mut idx = line.indices.clone();
        idx.sort();
        assert_eq!(idx, vec![0, 3]);
    }

    #[test]
    fn hull_drops_collinear_edge_points() {
        let pts = [
            v(0.0, 0.0),
            v(1.0, 0.0),
            v(2.0, 0.0),
            v(2.0, 2.0),
            v(0.0, 2.0),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains_index(1));
    }

    #[test]
    fn empty_and_non_finite_inputs_are_rejected() {
        assert!(matches!(convex_hull(&[]), Err(Error::Domain(_))));
        assert!(matches!(min_enclosing_disc(&[]), Err(Error::Domain(_))));
        assert!(convex_hull(&[v(f64::NAN, 0.0)]).is_err());
        assert!(min_enclosing_disc(&[v(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn square_corner_angles() {
        let hull = convex_hull(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]).unwrap();
        for a in corner_angles(&hull).unwrap() {
            assert!((a - FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn equilateral_corner_angles() {
        let pts: Vec<Vec2> = (0..3)
            .map(|k| Vec2::from_angle(k as f64 * 2.0 * PI / 3.0))
            .collect();
        let angles = corner_angles(&convex_hull(&pts).unwrap()).unwrap();
        for a in &angles {
            assert!((a - FRAC_PI_3).abs() < 1e-12);
        }
        let min = angles.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min - crate::theory::sharpest_angle_bound(3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn corner_angles_need_a_polygon() {
        let hull = convex_hull(&[v(0.0, 0.0), v(1.0, 0.0)]).unwrap();
        assert!(matches!(corner_angles(&hull), Err(Error::Domain(_))));
    }

    #[test]
    fn disc_of_pair_and_triangle() {
        let d = min_enclosing_disc(&[v(0.0, 0.0), v(2.0, 0.0)]).unwrap();
        assert!((d.center.x - 1.0).abs() < 1e-12 && d.center.y.abs() < 1e-12);
        assert!((d.radius - 1.0).abs() < 1e-12);

        let pts: Vec<Vec2> = (0..3)
            .map(|k| Vec2::from_angle(k as f64 * 2.0 * PI / 3.0))
            .collect();
        let d = min_enclosing_disc(&pts).unwrap();
        assert!((d.radius - 1.0).abs() < 1e-12);
        assert!(d.center.norm() < 1e-12);
    }

    #[test]
    fn disc_of_single_and_coincident_points() {
        let d = min_enclosing_disc(&[v(3.0, 4.0)]).unwrap();
        assert_eq!(d.radius, 0.0);
        let d = min_enclosing_disc(&[v(3.0, 4.0); 4]).unwrap();
        assert_eq!(d.radius, 0.0);
        assert_eq!(d.center, v(3.0, 4.0));
    }

    #[test]
    fn back_halfplane_cases() {
        let e = v(1.0, 0.0);
        assert!(!back_halfplane_occupied(0, &[v(0.0, 0.0), v(2.0, 0.0)], e));
        assert!(back_halfplane_occupied(0, &[v(0.0, 0.0), v(-1.0, 0.0)], e));
        // exactly on the boundary line counts as behind
        assert!(back_halfplane_occupied(0, &[v(0.0, 0.0), v(0.0, 5.0)], e));
        // alone: vacuously empty
        assert!(!back_halfplane_occupied(0, &[v(0.0, 0.0)], e));
    }
}
