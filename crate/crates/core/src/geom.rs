use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math::{abs, hypot};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// `det(self, other) = self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        hypot(self.x, self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise.
pub(crate) fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Relative threshold below which a triangle counts as degenerate: twice the
/// area compared against the squared longest edge.
const DEGENERATE_AREA_REL: f64 = 64.0 * f64::EPSILON;

/// A nondegenerate triangle with counterclockwise vertices.
///
/// Construction normalizes the vertex order: counterclockwise, starting at
/// the lexicographically smallest vertex. Two triangles with the same vertex
/// set therefore compare equal and are processed identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    v: [Point; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let det = orient(a, b, c);
        let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
        if det == 0.0 || abs(det) <= DEGENERATE_AREA_REL * longest * longest {
            return Err(Error::DegenerateTriangle);
        }
        let mut v = if det > 0.0 { [a, b, c] } else { [a, c, b] };
        let first = (0..3).min_by(|&i, &j| v[i].x.partial_cmp(&v[j].x).unwrap().then(v[i].y.partial_cmp(&v[j].y).unwrap())).unwrap();
        v.rotate_left(first);
        Ok(Triangle { v })
    }

    pub(crate) fn try_new(a: Point, b: Point, c: Point) -> Option<Self> {
        Triangle::new(a, b, c).ok()
    }

    pub fn vertices(&self) -> [Point; 3] {
        self.v
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.v[i % 3]
    }

    /// Side `i` runs from vertex `i` to vertex `i + 1`.
    pub fn side(&self, i: usize) -> (Point, Point) {
        (self.v[i % 3], self.v[(i + 1) % 3])
    }

    pub fn area(&self) -> f64 {
        0.5 * orient(self.v[0], self.v[1], self.v[2])
    }

    pub fn centroid(&self) -> Point {
        Point::new((self.v[0].x + self.v[1].x + self.v[2].x) / 3.0, (self.v[0].y + self.v[1].y + self.v[2].y) / 3.0)
    }

    pub fn longest_edge(&self) -> f64 {
        (0..3)
            .map(|i| {
                let (p, q) = self.side(i);
                (q - p).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Point with barycentric weights `(w0, w1, w2)` (summing to one).
    pub fn barycentric_point(&self, w: [f64; 3]) -> Point {
        Point::new(
            w[0] * self.v[0].x + w[1] * self.v[1].x + w[2] * self.v[2].x,
            w[0] * self.v[0].y + w[1] * self.v[1].y + w[2] * self.v[2].y,
        )
    }

    /// Closed containment test with a relative tolerance on the edge functions.
    pub fn contains(&self, p: Point, rel_tol: f64) -> bool {
        let scale = 2.0 * self.area();
        (0..3).all(|i| {
            let (a, b) = self.side(i);
            orient(a, b, p) >= -rel_tol * scale
        })
    }
}
