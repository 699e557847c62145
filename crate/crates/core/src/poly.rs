//! Bivariate polynomials of degree at most four, affine maps, and the exact
//! integral over a triangle.
//!
//! Coefficients are stored densely in a 15-slot triangular array: the
//! monomial `x^i y^j` lives at slot `d(d+1)/2 + j` with `d = i + j`.

use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::geom::{Point, Triangle};

/// Highest total degree representable.
pub const MAX_DEGREE: usize = 4;
const SLOTS: usize = 15;

#[inline]
const fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// `(i, j)` for each slot.
const EXPONENTS: [(usize, usize); SLOTS] = {
    let mut e = [(0, 0); SLOTS];
    let mut d = 0;
    while d <= MAX_DEGREE {
        let mut j = 0;
        while j <= d {
            e[slot(d - j, j)] = (d - j, j);
            j += 1;
        }
        d += 1;
    }
    e
};

/// Dense bivariate polynomial `Σ b_ij x^i y^j` with `i + j ≤ 4`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Poly2 {
    coeffs: [f64; SLOTS],
}

impl Poly2 {
    pub const fn zero() -> Self {
        Poly2 { coeffs: [0.0; SLOTS] }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly2::zero();
        p.coeffs[0] = c;
        p
    }

    pub fn x() -> Self {
        Poly2::monomial(1, 0, 1.0)
    }

    pub fn y() -> Self {
        Poly2::monomial(0, 1, 1.0)
    }

    /// `c · x^i y^j`. Panics if `i + j > 4`.
    pub fn monomial(i: usize, j: usize, c: f64) -> Self {
        assert!(i + j <= MAX_DEGREE, "monomial degree exceeds {MAX_DEGREE}");
        let mut p = Poly2::zero();
        p.coeffs[slot(i, j)] = c;
        p
    }

    /// Builds a polynomial from `(i, j, b_ij)` triples; repeated exponents add up.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut p = Poly2::zero();
        for &(i, j, b) in terms {
            if i + j > MAX_DEGREE {
                return Err(Error::DegreeOverflow { degree: i + j, cap: MAX_DEGREE });
            }
            if !b.is_finite() {
                return Err(Error::NonFinite);
            }
            p.coeffs[slot(i, j)] += b;
        }
        Ok(p)
    }

    /// The quadratic `a20 x² + a11 xy + a02 y² + a10 x + a01 y + a00`.
    pub fn quadratic(a20: f64, a11: f64, a02: f64, a10: f64, a01: f64, a00: f64) -> Self {
        let mut p = Poly2::zero();
        p.coeffs[slot(2, 0)] = a20;
        p.coeffs[slot(1, 1)] = a11;
        p.coeffs[slot(0, 2)] = a02;
        p.coeffs[slot(1, 0)] = a10;
        p.coeffs[slot(0, 1)] = a01;
        p.coeffs[slot(0, 0)] = a00;
        p
    }

    /// Coefficient of `x^i y^j` (zero outside the supported range).
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > MAX_DEGREE {
            0.0
        } else {
            self.coeffs[slot(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= MAX_DEGREE, "monomial degree exceeds {MAX_DEGREE}");
        self.coeffs[slot(i, j)] = c;
    }

    /// Nonzero terms as `(i, j, b_ij)`, ordered by total degree then by `j`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coeffs.iter().zip(EXPONENTS).filter(|(b, _)| **b != 0.0).map(|(&b, (i, j))| (i, j, b))
    }

    /// Largest `i + j` with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = (0..SLOTS).rev().find(|&k| self.coeffs[k] != 0.0)?;
        (0..=MAX_DEGREE).rev().find(|&d| slot(d, 0) <= top)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner in `x` over Horner-in-`y` inner polynomials.
    pub fn eval(&self, p: Point) -> f64 {
        let mut acc = 0.0;
        for i in (0..=MAX_DEGREE).rev() {
            let mut inner = 0.0;
            for j in (0..=MAX_DEGREE - i).rev() {
                inner = inner * p.y + self.coeffs[slot(i, j)];
            }
            acc = acc * p.x + inner;
        }
        acc
    }

    /// Gradient `(∂/∂x, ∂/∂y)` at `p`.
    pub fn gradient(&self, p: Point) -> Point {
        let mut gx = 0.0;
        let mut gy = 0.0;
        for (i, j, b) in self.terms() {
            if i > 0 {
                gx += b * i as f64 * crate::math::powi(p.x, i as i32 - 1) * crate::math::powi(p.y, j as i32);
            }
            if j > 0 {
                gy += b * j as f64 * crate::math::powi(p.x, i as i32) * crate::math::powi(p.y, j as i32 - 1);
            }
        }
        Point::new(gx, gy)
    }

    /// Product, failing when the result would exceed degree four.
    pub fn try_mul(&self, other: &Poly2) -> Result<Poly2> {
        let da = self.degree().unwrap_or(0);
        let db = other.degree().unwrap_or(0);
        if da + db > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeOverflow { degree: da + db, cap: MAX_DEGREE });
        }
        Ok(self.mul_within_cap(other))
    }

    /// Product assuming the caller has bounded the degrees; higher terms are dropped.
    pub(crate) fn mul_within_cap(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (i1, j1, b1) in self.terms() {
            for (i2, j2, b2) in other.terms() {
                let (i, j) = (i1 + i2, j1 + j2);
                debug_assert!(i + j <= MAX_DEGREE);
                if i + j <= MAX_DEGREE {
                    out.coeffs[slot(i, j)] += b1 * b2;
                }
            }
        }
        out
    }

    /// `self ∘ m`, i.e. the polynomial `v ↦ self(m(v))`.
    pub fn compose_affine(&self, m: &AffineMap2) -> Poly2 {
        let [[l00, l01], [l10, l11]] = m.linear;
        let xs = [l00, l01, m.shift.x];
        let ys = [l10, l11, m.shift.y];
        let deg = self.degree().unwrap_or(0);
        let mut out = Poly2::zero();
        // xp = X^i, then q runs through X^i Y^j for j = 0, 1, ...
        let mut xp = Poly2::constant(1.0);
        for i in 0..=deg {
            let mut q = xp;
            for j in 0..=deg - i {
                let b = self.coeffs[slot(i, j)];
                if b != 0.0 {
                    for d in 0..=i + j {
                        for k in slot(d, 0)..=slot(0, d) {
                            out.coeffs[k] += b * q.coeffs[k];
                        }
                    }
                }
                if j < deg - i {
                    q = q.mul_linear(i + j, ys);
                }
            }
            if i < deg {
                xp = xp.mul_linear(i, xs);
            }
        }
        out
    }

    /// Product with `l[0] x + l[1] y + l[2]` for `self` of degree at most `d < 4`.
    fn mul_linear(&self, d: usize, l: [f64; 3]) -> Poly2 {
        let mut out = Poly2::zero();
        for e in 0..=d {
            for j in 0..=e {
                let b = self.coeffs[slot(e - j, j)];
                out.coeffs[slot(e - j + 1, j)] += l[0] * b;
                out.coeffs[slot(e - j, j + 1)] += l[1] * b;
                out.coeffs[slot(e - j, j)] += l[2] * b;
            }
        }
        out
    }

    /// Restriction of a polynomial of degree ≤ 2 to its quadratic part.
    pub(crate) fn quadratic_coeffs(&self) -> [f64; 6] {
        [self.coeff(2, 0), self.coeff(1, 1), self.coeff(0, 2), self.coeff(1, 0), self.coeff(0, 1), self.coeff(0, 0)]
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(mut self, rhs: Poly2) -> Poly2 {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(mut self, rhs: Poly2) -> Poly2 {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(mut self) -> Poly2 {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul<f64> for Poly2 {
    type Output = Poly2;
    fn mul(mut self, rhs: f64) -> Poly2 {
        for a in self.coeffs.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

/// Product of two polynomials with the degree-four cap enforced.
pub fn poly_mul(p: &Poly2, q: &Poly2) -> Result<Poly2> {
    p.try_mul(q)
}

/// Invertible affine map `v ↦ L v + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap2 {
    linear: [[f64; 2]; 2],
    shift: Point,
}

impl AffineMap2 {
    pub fn new(linear: [[f64; 2]; 2], shift: Point) -> Result<Self> {
        let m = AffineMap2 { linear, shift };
        let det = m.jacobian();
        if det == 0.0 || !det.is_finite() || !shift.is_finite() {
            return Err(Error::SingularMap);
        }
        Ok(m)
    }

    pub const fn identity() -> Self {
        AffineMap2 { linear: [[1.0, 0.0], [0.0, 1.0]], shift: Point::ORIGIN }
    }

    pub fn translation(v: Point) -> Self {
        AffineMap2 { linear: [[1.0, 0.0], [0.0, 1.0]], shift: v }
    }

    /// Counterclockwise rotation by `theta` radians about the origin.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (crate::math::sin(theta), crate::math::cos(theta));
        AffineMap2 { linear: [[c, -s], [s, c]], shift: Point::ORIGIN }
    }

    pub fn linear(&self) -> [[f64; 2]; 2] {
        self.linear
    }

    pub fn shift(&self) -> Point {
        self.shift
    }

    /// Determinant of the linear part.
    pub fn jacobian(&self) -> f64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    pub fn apply(&self, p: Point) -> Point {
        let [[a, b], [c, d]] = self.linear;
        Point::new(a * p.x + b * p.y + self.shift.x, c * p.x + d * p.y + self.shift.y)
    }

    /// Applies only the linear part (for direction vectors).
    pub fn apply_linear(&self, v: Point) -> Point {
        let [[a, b], [c, d]] = self.linear;
        Point::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    pub fn inverse(&self) -> AffineMap2 {
        let [[a, b], [c, d]] = self.linear;
        let det = self.jacobian();
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let s = self.shift;
        AffineMap2 { linear: inv, shift: Point::new(-(inv[0][0] * s.x + inv[0][1] * s.y), -(inv[1][0] * s.x + inv[1][1] * s.y)) }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &AffineMap2) -> AffineMap2 {
        let [[a, b], [c, d]] = self.linear;
        let [[e, f], [g, h]] = inner.linear;
        AffineMap2 { linear: [[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]], shift: self.apply(inner.shift) }
    }

    /// True when the linear part is a proper rotation (to within `tol`).
    pub fn is_rigid(&self, tol: f64) -> bool {
        let [[a, b], [c, d]] = self.linear;
        (a * a + c * c - 1.0).abs() <= tol && (b * b + d * d - 1.0).abs() <= tol && (a * b + c * d).abs() <= tol && self.jacobian() > 0.0
    }
}

/// `∬` over the triangle `(0,0), (1,0), (1,1)`: `Σ b_ij / ((j+1)(i+j+2))`.
pub fn reference_triangle_integral(g: &Poly2) -> f64 {
    let mut sum = crate::math::CompensatedSum::default();
    for (i, j, b) in g.terms() {
        // Keep the division remainder so each term enters exactly.
        let k = ((j + 1) * (i + j + 2)) as f64;
        let q = b / k;
        sum.add(q);
        sum.add(crate::math::fma(-q, k, b) / k);
    }
    sum.value()
}

/// Signed integral over the triangle with vertices `a, b, c`: positive for
/// counterclockwise order, negative for clockwise, zero if degenerate.
pub fn oriented_triangle_integral(g: &Poly2, a: Point, b: Point, c: Point) -> f64 {
    // (u, v) ↦ a + u (b - a) + v (c - b) sends (0,0), (1,0), (1,1) to a, b, c.
    let e1 = b - a;
    let e2 = c - b;
    let map = AffineMap2 { linear: [[e1.x, e2.x], [e1.y, e2.y]], shift: a };
    let jac = map.jacobian();
    if jac == 0.0 {
        return 0.0;
    }
    jac * reference_triangle_integral(&g.compose_affine(&map))
}

/// `∬_t g`.
pub fn triangle_integral(g: &Poly2, t: &Triangle) -> f64 {
    let [a, b, c] = t.vertices();
    oriented_triangle_integral(g, a, b, c)
}
