//! Slow reference integrator with a certified error bound.
//!
//! The triangle is bisected along longest edges. On each cell the exact
//! range of the quadratic `f` is computed; cells where `f` keeps one sign are
//! integrated with a six-point rule exact for quartics. On the others `f` is
//! split as `f_lin + q`, its linearization at the centroid plus the pure
//! quadratic remainder, and the exact range `[q₋, q₊]` of `q` over the cell
//! gives the band `−q₊ ≤ f_lin ≤ −q₋` where the sign is uncertain. The cell's
//! uncertainty is `max|g| · area(band)`. The worst cell is refined first
//! until the summed uncertainty drops below `tol`.
//!
//! Only [`Poly2`] evaluation is shared with the engine; clipping and sign logic
//! are local to this module.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::error::{Error, Result};
use crate::geom::{Point, Triangle};
use crate::math::{abs, sqrt, CompensatedSum};
use crate::poly::Poly2;

/// Maximum bisection depth of a cell.
pub const MAX_DEPTH: u32 = 40;
/// Hard cap on the number of cells evaluated.
pub const MAX_CELLS: usize = 1 << 21;

// Per-unit-magnitude allowance for floating-point error in the cell sums.
const ROUNDING: f64 = 16.0 * f64::EPSILON;

/// Estimate with a conservative absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub cells_used: usize,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    v: [Point; 3],
    depth: u32,
    estimate: f64,
    bound: f64,
}

#[derive(Debug, Clone, Copy)]
struct Keyed {
    bound: f64,
    seq: u64,
    /// Index into the cell arena.
    cell: usize,
}

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Keyed {}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound).then(Reverse(self.seq).cmp(&Reverse(other.seq)))
    }
}

struct Quadratic {
    a: [f64; 6],
}

impl Quadratic {
    fn eval(&self, p: Point) -> f64 {
        let [a20, a11, a02, a10, a01, a00] = self.a;
        a20 * p.x * p.x + a11 * p.x * p.y + a02 * p.y * p.y + a10 * p.x + a01 * p.y + a00
    }

    fn grad(&self, p: Point) -> Point {
        let [a20, a11, a02, a10, a01, _] = self.a;
        Point::new(2.0 * a20 * p.x + a11 * p.y + a10, a11 * p.x + 2.0 * a02 * p.y + a01)
    }

    /// Spectral norm of the Hessian `[[2a20, a11], [a11, 2a02]]`.
    fn hessian_norm(&self) -> f64 {
        let [a20, a11, a02, ..] = self.a;
        let mean = a20 + a02;
        let rad = sqrt((a20 - a02) * (a20 - a02) + a11 * a11);
        abs(mean) + rad
    }

    /// Exact minimum and maximum over the closed triangle.
    fn range(&self, v: &[Point; 3]) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut see = |x: f64| {
            lo = lo.min(x);
            hi = hi.max(x);
        };
        let [a20, a11, a02, a10, a01, _] = self.a;
        for i in 0..3 {
            let p = v[i];
            let d = v[(i + 1) % 3] - p;
            see(self.eval(p));
            let qa = a20 * d.x * d.x + a11 * d.x * d.y + a02 * d.y * d.y;
            if qa != 0.0 {
                let t = -self.grad(p).dot(d) / (2.0 * qa);
                if t > 0.0 && t < 1.0 {
                    see(self.eval(p + d * t));
                }
            }
        }
        let det = 4.0 * a20 * a02 - a11 * a11;
        if det != 0.0 {
            let x = (-2.0 * a02 * a10 + a11 * a01) / det;
            let y = (a11 * a10 - 2.0 * a20 * a01) / det;
            let p = Point::new(x, y);
            if inside(v, p) {
                see(self.eval(p));
            }
        }
        (lo, hi)
    }
}

fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn inside(v: &[Point; 3], p: Point) -> bool {
    let s = cross(v[0], v[1], v[2]).signum();
    (0..3).all(|i| cross(v[i], v[(i + 1) % 3], p) * s >= 0.0)
}

/// Convex polygon with at most six vertices: a triangle clipped by three
/// half-planes.
#[derive(Clone, Copy)]
struct Small {
    p: [Point; 6],
    n: usize,
}

impl Small {
    fn triangle(v: &[Point; 3]) -> Small {
        let mut p = [Point::ORIGIN; 6];
        p[..3].copy_from_slice(v);
        Small { p, n: 3 }
    }

    fn points(&self) -> &[Point] {
        &self.p[..self.n]
    }

    /// Keeps the part where `h(p) = n·p + m ≥ 0`.
    fn keep_nonnegative(&self, n: Point, m: f64) -> Small {
        let mut out = Small { p: [Point::ORIGIN; 6], n: 0 };
        let pts = self.points();
        for i in 0..pts.len() {
            let p = pts[i];
            let q = pts[(i + 1) % pts.len()];
            let hp = n.dot(p) + m;
            let hq = n.dot(q) + m;
            if hp >= 0.0 && out.n < 6 {
                out.p[out.n] = p;
                out.n += 1;
            }
            if hp * hq < 0.0 && out.n < 6 {
                out.p[out.n] = p + (q - p) * (hp / (hp - hq));
                out.n += 1;
            }
        }
        out
    }
}

/// Symmetric six-point rule on a triangle, exact through degree 4. Each row
/// is `(w, a, b)`: weight `w` at barycentric `(a, a, b)` and its rotations.
#[allow(clippy::excessive_precision)]
const RULE: [(f64, f64, f64); 2] = [
    (0.223381589678011465944640403679, 0.445948490915964886318329253883, 0.108103018168070227363341492234),
    (0.109951743655321867388693596321, 0.091576213509770743459571463402, 0.816847572980458513080857073197),
];

/// `∬ g` over the triangle `a, b, c`, signed by orientation.
fn triangle_quadrature(g: &Poly2, a: Point, b: Point, c: Point) -> f64 {
    let (u, v) = (b - a, c - a);
    let at = |s: f64, t: f64| g.eval(a + u * s + v * t);
    let mut sum = 0.0;
    for (w, p, q) in RULE {
        sum += w * (at(p, p) + at(p, q) + at(q, p));
    }
    0.5 * u.cross(v) * sum
}

fn fan_integral(g: &Poly2, poly: &[Point]) -> f64 {
    let mut s = 0.0;
    for k in 1..poly.len().saturating_sub(1) {
        s += triangle_quadrature(g, poly[0], poly[k], poly[k + 1]);
    }
    s
}

fn fan_area(poly: &[Point]) -> f64 {
    let mut s = 0.0;
    for k in 1..poly.len().saturating_sub(1) {
        s += 0.5 * cross(poly[0], poly[k], poly[k + 1]);
    }
    abs(s)
}

const BINOMIAL: [[f64; 5]; 5] =
    [[1.0, 0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0, 0.0], [1.0, 3.0, 3.0, 1.0, 0.0], [1.0, 4.0, 6.0, 4.0, 1.0]];

/// `Σ |b'_ij| r^{i+j}` for `g` re-expanded about `center`, which bounds
/// `|g|` on the disc of radius `r` there.
fn abs_bound(g: &Poly2, center: Point, r: f64) -> f64 {
    let mut px = [1.0; 5];
    let mut py = [1.0; 5];
    for m in 1..5 {
        px[m] = px[m - 1] * center.x;
        py[m] = py[m - 1] * center.y;
    }
    let mut shifted = [[0.0f64; 5]; 5];
    for (k, l, b) in g.terms() {
        for i in 0..=k {
            for j in 0..=l {
                shifted[i][j] += b * BINOMIAL[k][i] * BINOMIAL[l][j] * px[k - i] * py[l - j];
            }
        }
    }
    let mut rp = [1.0; 9];
    for m in 1..9 {
        rp[m] = rp[m - 1] * r;
    }
    let mut sum = 0.0;
    for (i, row) in shifted.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            sum += abs(*b) * rp[i + j];
        }
    }
    sum
}

struct Ctx<'a> {
    g: &'a Poly2,
    f: Quadratic,
    /// Quadratic part of `f` alone.
    curvature: Quadratic,
    /// Absorbs rounding in the curvature range, per unit `r²`.
    slack: f64,
}

impl Ctx<'_> {
    fn evaluate(&self, v: [Point; 3], depth: u32) -> (Cell, bool) {
        let (lo, hi) = self.f.range(&v);
        if lo >= 0.0 {
            let est = triangle_quadrature(self.g, v[0], v[1], v[2]);
            return (Cell { v, depth, estimate: est, bound: 0.0 }, true);
        }
        if hi <= 0.0 {
            return (Cell { v, depth, estimate: 0.0, bound: 0.0 }, true);
        }
        let c = Point::new((v[0].x + v[1].x + v[2].x) / 3.0, (v[0].y + v[1].y + v[2].y) / 3.0);
        let r = v.iter().map(|p| (*p - c).norm()).fold(0.0, f64::max);
        let n = self.f.grad(c);
        let m = self.f.eval(c) - n.dot(c);
        // f = f_lin + q with q the quadratic part about c; its exact range
        // over the cell bounds where the sign of f can differ from f_lin's.
        let (q_lo, q_hi) = self.curvature.range(&v.map(|p| p - c));
        let (q_lo, q_hi) = (q_lo - self.slack * r * r, q_hi + self.slack * r * r);
        let poly = Small::triangle(&v);
        let kept = poly.keep_nonnegative(n, m + 0.5 * (q_lo + q_hi));
        let est = if kept.n >= 3 { fan_integral(self.g, kept.points()) } else { 0.0 };
        let band = poly.keep_nonnegative(n, m + q_hi).keep_nonnegative(-n, -m - q_lo);
        let band_area = if band.n >= 3 { fan_area(band.points()) } else { 0.0 };
        let bound = abs_bound(self.g, c, r) * band_area;
        (Cell { v, depth, estimate: est, bound }, false)
    }
}

fn bisect(v: [Point; 3]) -> [[Point; 3]; 2] {
    let len = |i: usize| (v[(i + 1) % 3] - v[i]).norm();
    let mut k = 0;
    for i in 1..3 {
        if len(i) > len(k) {
            k = i;
        }
    }
    let a = v[k];
    let b = v[(k + 1) % 3];
    let c = v[(k + 2) % 3];
    let m = a.midpoint(b);
    [[a, m, c], [m, b, c]]
}

/// `∬_{t ∩ {f ≥ 0}} g` to absolute accuracy `tol` when reachable within
/// the depth and cell caps; otherwise the best estimate with its bound.
pub fn oracle_integrate(g: &Poly2, f: &Poly2, t: &Triangle, tol: f64) -> Result<OracleEstimate> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance);
    }
    if !(g.is_finite() && f.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(d) = f.degree() {
        if d > 2 {
            return Err(Error::DegreeOverflow { degree: d, cap: 2 });
        }
    }
    let fq = Quadratic { a: f.quadratic_coeffs() };
    let [a20, a11, a02, ..] = fq.a;
    let curvature = Quadratic { a: [a20, a11, a02, 0.0, 0.0, 0.0] };
    let ctx = Ctx { g, slack: 8.0 * f64::EPSILON * fq.hessian_norm(), curvature, f: fq };
    let mut resolved = CompensatedSum::default();
    let mut magnitude = 0.0;
    let mut heap = BinaryHeap::new();
    let mut pending_bound = CompensatedSum::default();
    let mut pending_mag = CompensatedSum::default();
    let mut stuck: Vec<Cell> = Vec::new();
    let mut arena: Vec<Cell> = Vec::new();
    let mut seq = 0u64;
    let mut cells = 1usize;

    let (root, done) = ctx.evaluate(t.vertices(), 0);
    if done {
        resolved.add(root.estimate);
        magnitude += abs(root.estimate);
    } else {
        pending_bound.add(root.bound);
        pending_mag.add(abs(root.estimate));
        arena.push(root);
        heap.push(Keyed { bound: root.bound, seq, cell: 0 });
        seq += 1;
    }

    while pending_bound.value() + ROUNDING * (magnitude + pending_mag.value()) > tol && cells + 2 <= MAX_CELLS {
        let Some(Keyed { cell: at, .. }) = heap.peek().copied() else { break };
        let cell = arena[at];
        if cell.bound == 0.0 {
            break;
        }
        heap.pop();
        if cell.depth >= MAX_DEPTH {
            stuck.push(cell);
            continue;
        }
        pending_bound.add(-cell.bound);
        pending_mag.add(-abs(cell.estimate));
        let mut reused = false;
        for child in bisect(cell.v) {
            let (c, done) = ctx.evaluate(child, cell.depth + 1);
            cells += 1;
            if done {
                resolved.add(c.estimate);
                magnitude += abs(c.estimate);
            } else {
                pending_bound.add(c.bound);
                pending_mag.add(abs(c.estimate));
                // The first open child takes over the parent's slot.
                let slot = if !reused {
                    reused = true;
                    arena[at] = c;
                    at
                } else {
                    arena.push(c);
                    arena.len() - 1
                };
                heap.push(Keyed { bound: c.bound, seq, cell: slot });
                seq += 1;
            }
        }
    }

    let mut value = resolved;
    let mut bound = CompensatedSum::default();
    for k in heap.into_iter().map(|k| arena[k.cell]).chain(stuck) {
        value.add(k.estimate);
        magnitude += abs(k.estimate);
        bound.add(k.bound);
    }
    let rounding = ROUNDING * magnitude;
    Ok(OracleEstimate { value: value.value(), error_bound: bound.value().max(0.0) + rounding, cells_used: cells })
}
