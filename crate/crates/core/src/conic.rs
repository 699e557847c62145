//! Conics `f = 0` for quadratics `f`: classification, standard frames,
//! segment intersection, tangency points and the barycentric
//! point-in-triangle test.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{Point, Triangle};
use crate::math::{abs, atan2, cos, sin, sqrt};
use crate::poly::{AffineMap2, Poly2};

/// Numerical thresholds shared by classification and intersection code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold on normalized classification invariants.
    pub class: f64,
    /// Root merging and vertex snapping, in segment-parameter units.
    pub param: f64,
    /// Width of the border band in barycentric coordinates.
    pub barycentric: f64,
    /// Relative residual for "point lies on the conic".
    pub on_conic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { class: 1e-10, param: 1e-9, barycentric: 1e-12, on_conic: 1e-9 }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [self.class, self.param, self.barycentric, self.on_conic].iter().all(|t| t.is_finite() && *t >= 0.0 && *t < 0.1)
    }
}

/// The ten classes a polynomial of degree at most two can fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConicClass {
    Ellipse,
    Parabola,
    Hyperbola,
    CrossingLines,
    ParallelLines,
    DoubleLine,
    SingleLine,
    Point,
    Empty,
    ConstantSign,
}

impl ConicClass {
    pub const ALL: [ConicClass; 10] = [
        ConicClass::Ellipse,
        ConicClass::Parabola,
        ConicClass::Hyperbola,
        ConicClass::CrossingLines,
        ConicClass::ParallelLines,
        ConicClass::DoubleLine,
        ConicClass::SingleLine,
        ConicClass::Point,
        ConicClass::Empty,
        ConicClass::ConstantSign,
    ];

    /// Ellipse, parabola or hyperbola.
    pub fn is_nondegenerate(self) -> bool {
        matches!(self, ConicClass::Ellipse | ConicClass::Parabola | ConicClass::Hyperbola)
    }

    pub fn name(self) -> &'static str {
        match self {
            ConicClass::Ellipse => "ellipse",
            ConicClass::Parabola => "parabola",
            ConicClass::Hyperbola => "hyperbola",
            ConicClass::CrossingLines => "crossing-lines",
            ConicClass::ParallelLines => "parallel-lines",
            ConicClass::DoubleLine => "double-line",
            ConicClass::SingleLine => "single-line",
            ConicClass::Point => "point",
            ConicClass::Empty => "empty",
            ConicClass::ConstantSign => "constant-sign",
        }
    }
}

impl core::fmt::Display for ConicClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Member of a standard family, in the coordinates `(X, Y)` produced by
/// [`Conic::to_standard`]. In every case `f(p) = λ · s(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardForm {
    /// `s = X²/a² + Y²/b² − 1`, `a ≥ b > 0`.
    Ellipse { a: f64, b: f64 },
    /// `s = Y − c X²`, `c > 0`.
    Parabola { c: f64 },
    /// `s = X Y − k`, `k > 0`.
    Hyperbola { k: f64 },
    /// `s = X (X − d)`, `d > 0`.
    ParallelLines { d: f64 },
    /// `s = cross(d1, P) · cross(d2, P)` for unit directions `d1`, `d2`.
    CrossingLines { d1: Point, d2: Point },
    /// `s = X²`.
    DoubleLine,
    /// `s = X`.
    SingleLine,
    /// No curve to parameterize: `f` has sign `λ` except possibly at one point.
    Signed,
}

impl StandardForm {
    /// Evaluates `s` at a point given in standard coordinates.
    pub fn eval(&self, q: Point) -> f64 {
        match *self {
            StandardForm::Ellipse { a, b } => (q.x / a) * (q.x / a) + (q.y / b) * (q.y / b) - 1.0,
            StandardForm::Parabola { c } => q.y - c * q.x * q.x,
            StandardForm::Hyperbola { k } => q.x * q.y - k,
            StandardForm::ParallelLines { d } => q.x * (q.x - d),
            StandardForm::CrossingLines { d1, d2 } => d1.cross(q) * d2.cross(q),
            StandardForm::DoubleLine => q.x * q.x,
            StandardForm::SingleLine => q.x,
            StandardForm::Signed => 1.0,
        }
    }
}

/// A quadratic together with its class and standard frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Conic {
    f: Poly2,
    class: ConicClass,
    form: StandardForm,
    to_standard: Option<AffineMap2>,
    lambda: f64,
    margin: f64,
    tol: Tolerances,
}

/// Where a point sits relative to a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Border,
    Outside,
}

/// Intersection of a conic with a segment `p0 + t (p1 − p0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentHit {
    pub point: Point,
    pub param: f64,
    pub multiplicity: u8,
    pub at_vertex: bool,
}

impl Conic {
    /// Classifies `f` with default tolerances.
    pub fn new(f: Poly2) -> Result<Conic> {
        Conic::with_tolerances(f, Tolerances::default())
    }

    pub fn with_tolerances(f: Poly2, tol: Tolerances) -> Result<Conic> {
        if !f.is_finite() {
            return Err(Error::NonFinite);
        }
        if let Some(d) = f.degree() {
            if d > 2 {
                return Err(Error::DegreeOverflow { degree: d, cap: 2 });
            }
        }
        if !tol.is_valid() {
            return Err(Error::InvalidTolerance);
        }
        Ok(classify(f, tol))
    }

    pub fn poly(&self) -> &Poly2 {
        &self.f
    }

    pub fn class(&self) -> ConicClass {
        self.class
    }

    pub fn standard_form(&self) -> StandardForm {
        self.form
    }

    /// Map from world coordinates to the standard frame. Absent for the
    /// classes without a curve (empty, point, constant sign).
    ///
    /// The map is a rotation plus translation, except for hyperbolas whose
    /// asymptotes are not perpendicular: there it is an area-preserving
    /// affine map onto the asymptote frame (Jacobian one).
    pub fn to_standard(&self) -> Option<&AffineMap2> {
        self.to_standard.as_ref()
    }

    /// Proportionality factor `λ` with `f = λ · s ∘ to_standard`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Smallest relative distance of a classification invariant from its
    /// threshold, as a multiple of `ε_class`. Infinite when no test was close.
    pub fn classification_margin(&self) -> f64 {
        self.margin
    }

    /// True when some classification test landed within a factor of ten of
    /// its threshold.
    pub fn near_threshold(&self) -> bool {
        self.margin < 10.0
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.f.eval(p)
    }

    /// The conic of `−f`, sharing the curve and frame.
    pub fn negated(&self) -> Conic {
        let mut c = self.clone();
        c.f = -c.f;
        c.lambda = -c.lambda;
        c
    }

    /// `to_standard` applied to `p`; identity when there is no frame.
    pub fn standard_point(&self, p: Point) -> Point {
        match &self.to_standard {
            Some(m) => m.apply(p),
            None => p,
        }
    }

    /// World point of standard coordinates `q`.
    pub fn world_point(&self, q: Point) -> Point {
        match &self.to_standard {
            Some(m) => m.inverse().apply(q),
            None => q,
        }
    }

    fn quad_value(&self, d: Point) -> f64 {
        let [a20, a11, a02, ..] = self.f.quadratic_coeffs();
        a20 * d.x * d.x + a11 * d.x * d.y + a02 * d.y * d.y
    }

    /// Rounding-aware test for `|f(p)| ≈ 0` at length scale `len`: the
    /// first-order distance to the curve is at most `ε_on · len`.
    pub fn is_on_curve(&self, p: Point, len: f64) -> bool {
        self.within(p, len, self.tol.on_conic)
    }

    fn within(&self, p: Point, len: f64, rel: f64) -> bool {
        let v = self.eval(p);
        let [a20, a11, a02, a10, a01, a00] = self.f.quadratic_coeffs();
        let g = self.f.gradient(p).norm();
        let qn = abs(a20) + abs(a11) + abs(a02);
        let (x, y) = (abs(p.x), abs(p.y));
        let rounding = abs(a20) * x * x + abs(a11) * x * y + abs(a02) * y * y + abs(a10) * x + abs(a01) * y + abs(a00);
        abs(v) <= rel * (g * len + qn * len * len) + 16.0 * f64::EPSILON * rounding
    }

    /// All hits of the conic with the segment `p0 → p1`.
    pub fn segment_intersections(&self, p0: Point, p1: Point) -> Vec<SegmentHit> {
        let len = (p1 - p0).norm();
        let on = [self.is_on_curve(p0, len), self.is_on_curve(p1, len)];
        self.side_hits(p0, p1, len, on)
    }

    /// True iff the conic meets the segment at most at its endpoints.
    pub fn segment_is_free(&self, p0: Point, p1: Point) -> bool {
        self.segment_intersections(p0, p1).iter().all(|h| h.at_vertex)
    }

    /// Intersections with snapping at length scale `snap_len` and with the
    /// endpoint-on-curve decisions supplied by the caller, so that sides
    /// sharing a vertex agree on it.
    pub(crate) fn side_hits(&self, p0: Point, p1: Point, snap_len: f64, on: [bool; 2]) -> Vec<SegmentHit> {
        let d = p1 - p0;
        let dl = d.norm();
        let mut out: Vec<SegmentHit> = Vec::new();
        if dl == 0.0 {
            return out;
        }
        let snap = self.tol.param * snap_len / dl;
        let merge = self.tol.param;
        let a = self.quad_value(d);
        let b = self.f.gradient(p0).dot(d);
        let c = self.eval(p0);
        let mut roots = match on {
            // A line meets the conic at most twice, so a chord between two
            // curve points has nothing in between.
            [true, true] => Roots { t: [(0.0, 1); 2], n: 0 },
            // One root is the vertex; the other follows from the root sum,
            // which stays accurate when the two roots are close.
            [true, false] | [false, true] => {
                let shift = if on[0] { 0.0 } else { 1.0 };
                let mut r = Roots { t: [(0.0, 1); 2], n: 0 };
                if a != 0.0 {
                    let other = -b / a - shift;
                    let m = if (other - shift).abs() <= snap { 2 } else { 1 };
                    r.t[0] = (other, m);
                    r.n = 1;
                }
                r
            }
            [false, false] => solve_quadratic(a, b, c, merge),
        };
        if roots.n == 2 {
            // Two crossings whose midpoint is on the curve up to rounding are
            // a tangency split by the discriminant's cancellation.
            let tm = 0.5 * (roots.t[0].0 + roots.t[1].0);
            if self.within(p0.lerp(p1, tm), dl, TOUCH_REL) {
                roots.t[0] = (tm, 2);
                roots.n = 1;
            }
        }

        let mut mult0 = 1u8;
        let mut mult1 = 1u8;
        for r in roots.iter() {
            let (t, m) = r;
            if on[0] && t.abs() <= snap {
                if m == 2 {
                    mult0 = 2;
                }
                continue;
            }
            if on[1] && (t - 1.0).abs() <= snap {
                if m == 2 {
                    mult1 = 2;
                }
                continue;
            }
            if t <= 0.0 || t >= 1.0 || (on[0] && t <= snap) || (on[1] && t >= 1.0 - snap) {
                continue;
            }
            if out.last().is_some_and(|h: &SegmentHit| (t - h.param).abs() <= merge) {
                let h = out.last_mut().unwrap();
                h.param = 0.5 * (h.param + t);
                h.point = p0.lerp(p1, h.param);
                h.multiplicity = 2;
                continue;
            }
            out.push(SegmentHit { point: p0.lerp(p1, t), param: t, multiplicity: m, at_vertex: false });
        }
        if on[0] {
            out.insert(0, SegmentHit { point: p0, param: 0.0, multiplicity: mult0, at_vertex: true });
        }
        if on[1] {
            out.push(SegmentHit { point: p1, param: 1.0, multiplicity: mult1, at_vertex: true });
        }
        out
    }

    /// Candidate points `P` on the conic, near the arc of `branch_hint`, whose
    /// tangent does not separate `b` from `cpt`. Tried in order: the point
    /// with tangent parallel to `b–cpt`, then the contacts of the tangents
    /// through `b`, then those through `cpt`.
    pub fn tangency_interior_points(&self, branch_hint: Point, b: Point, cpt: Point) -> Result<Vec<Point>> {
        if !self.class.is_nondegenerate() {
            return Err(Error::WrongConicClass("tangency points need an ellipse, parabola or hyperbola"));
        }
        let [a20, a11, a02, a10, a01, a00] = self.f.quadratic_coeffs();
        let len = (cpt - b).norm().max((b - branch_hint).norm()).max((cpt - branch_hint).norm());
        let mut raw: Vec<Point> = Vec::new();

        // Conjugate diameter of the direction b→cpt: (2Qp + ∇ₗ)·d = 0.
        let d = cpt - b;
        let n = Point::new(2.0 * a20 * d.x + a11 * d.y, a11 * d.x + 2.0 * a02 * d.y);
        let m = a10 * d.x + a01 * d.y;
        raw.extend(self.line_points(n, m));

        // Polars of b and cpt.
        for pole in [b, cpt] {
            let n = Point::new(a20 * pole.x + 0.5 * a11 * pole.y + 0.5 * a10, 0.5 * a11 * pole.x + a02 * pole.y + 0.5 * a01);
            let m = 0.5 * a10 * pole.x + 0.5 * a01 * pole.y + a00;
            raw.extend(self.line_points(n, m));
        }

        let branch = self.branch_of(branch_hint);
        let mut out: Vec<Point> = Vec::new();
        for p in raw {
            if !p.is_finite() || !self.is_on_curve(p, len) || self.branch_of(p) != branch {
                continue;
            }
            if !self.same_side_of_tangent(p, b, cpt) || !self.segment_is_free(b, p) || !self.segment_is_free(cpt, p) {
                continue;
            }
            if out.iter().any(|q| (*q - p).norm() <= self.tol.param * len) {
                continue;
            }
            out.push(p);
        }
        if out.is_empty() {
            Err(Error::NoTangencyCandidate)
        } else {
            Ok(out)
        }
    }

    /// True when `q` and `r` lie in one closed half-plane of the tangent
    /// line at the curve point `p`.
    pub(crate) fn same_side_of_tangent(&self, p: Point, q: Point, r: Point) -> bool {
        let n = self.f.gradient(p);
        let (vq, vr) = (q - p, r - p);
        let (lq, lr) = (n.dot(vq), n.dot(vr));
        let sq = 1e-12 * n.norm() * vq.norm();
        let sr = 1e-12 * n.norm() * vr.norm();
        (lq >= -sq && lr >= -sr) || (lq <= sq && lr <= sr)
    }

    /// Intersections of the line `n·p + m = 0` with the conic.
    fn line_points(&self, n: Point, m: f64) -> Vec<Point> {
        let nn = n.dot(n);
        let mut out = Vec::new();
        if nn == 0.0 || !nn.is_finite() {
            return out;
        }
        let p0 = n * (-m / nn);
        let dir = n.perp() * (1.0 / sqrt(nn));
        let a = self.quad_value(dir);
        let b = self.f.gradient(p0).dot(dir);
        let c = self.eval(p0);
        for (t, _) in solve_quadratic(a, b, c, 0.0).iter() {
            out.push(p0 + dir * t);
        }
        out
    }

    /// Parameters `s` (ascending) where `f(p0 + s·dir) = 0` on the whole line.
    pub(crate) fn line_params(&self, p0: Point, dir: Point) -> Vec<f64> {
        let a = self.quad_value(dir);
        let b = self.f.gradient(p0).dot(dir);
        let c = self.eval(p0);
        solve_quadratic(a, b, c, 0.0).iter().map(|(t, _)| t).collect()
    }

    /// Branch label: sign of the standard `X` for hyperbolas, zero otherwise.
    pub(crate) fn branch_of(&self, p: Point) -> i8 {
        match self.form {
            StandardForm::Hyperbola { .. } => {
                if self.standard_point(p).x < 0.0 {
                    -1
                } else {
                    1
                }
            }
            _ => 0,
        }
    }
}

/// Class of `f` under default tolerances; inputs of degree above two or with
/// non-finite coefficients are reported as `ConstantSign`.
pub fn conic_classify(f: &Poly2) -> ConicClass {
    Conic::new(*f).map(|c| c.class()).unwrap_or(ConicClass::ConstantSign)
}

/// Classifies `f` and builds its standard frame.
pub fn normalize_conic(f: &Poly2) -> Result<Conic> {
    Conic::new(*f)
}

/// Free-function form of [`Conic::segment_intersections`].
pub fn conic_segment_intersections(c: &Conic, p0: Point, p1: Point) -> Vec<SegmentHit> {
    c.segment_intersections(p0, p1)
}

/// Free-function form of [`Conic::segment_is_free`].
pub fn segment_is_free(c: &Conic, p0: Point, p1: Point) -> bool {
    c.segment_is_free(p0, p1)
}

/// Barycentric location of `p` in `t`: with `AP = α AB + β AC`, inside iff
/// `α, β > ε` and `α + β < 1 − ε`; border iff within `ε` of a side.
pub fn point_in_triangle(p: Point, t: &Triangle, eps: f64) -> Location {
    let [a, b, c] = t.vertices();
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let det = ab.cross(ac);
    let alpha = ap.cross(ac) / det;
    let beta = ab.cross(ap) / det;
    let s = alpha + beta;
    if alpha > eps && beta > eps && s < 1.0 - eps {
        Location::Inside
    } else if alpha >= -eps && beta >= -eps && s <= 1.0 + eps {
        Location::Border
    } else {
        Location::Outside
    }
}

/// Up to two real roots in increasing order, each with multiplicity.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Roots {
    t: [(f64, u8); 2],
    n: usize,
}

impl Roots {
    pub(crate) fn iter(&self) -> impl Iterator<Item = (f64, u8)> + '_ {
        self.t[..self.n].iter().copied()
    }
}

/// Real roots of `a t² + b t + c`, using the cancellation-free pairing
/// `q = −(b + sign(b)√Δ)/2`, roots `q/a` and `c/q`. Roots closer than
/// `merge` collapse into one double root; a slightly negative discriminant
/// whose complex roots are within `merge` of the real axis does too.
pub(crate) fn solve_quadratic(a: f64, b: f64, c: f64, merge: f64) -> Roots {
    let mut r = Roots { t: [(0.0, 1); 2], n: 0 };
    if a == 0.0 {
        if b != 0.0 {
            r.t[0] = (-c / b, 1);
            r.n = 1;
        }
        return r;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if sqrt(-disc) / (2.0 * abs(a)) <= merge {
            r.t[0] = (-b / (2.0 * a), 2);
            r.n = 1;
        }
        return r;
    }
    let sq = sqrt(disc);
    let q = -0.5 * (b + if b < 0.0 { -sq } else { sq });
    if q == 0.0 {
        r.t[0] = (0.0, 2);
        r.n = 1;
        return r;
    }
    let (mut t1, mut t2) = (q / a, c / q);
    if t1 > t2 {
        core::mem::swap(&mut t1, &mut t2);
    }
    if t2 - t1 <= merge {
        r.t[0] = (0.5 * (t1 + t2), 2);
        r.n = 1;
    } else {
        r.t = [(t1, 1), (t2, 1)];
        r.n = 2;
    }
    r
}

// Relative first-order distance below which a near-double root is a touch.
const TOUCH_REL: f64 = 1e-12;

/// Records how close a normalized test quantity came to its threshold.
struct Margin {
    eps: f64,
    worst: f64,
}

impl Margin {
    fn test(&mut self, value: f64, scale: f64) {
        if scale > 0.0 && self.eps > 0.0 {
            let ratio = abs(value) / (self.eps * scale);
            let dist = if ratio >= 1.0 {
                ratio
            } else if ratio > 0.0 {
                1.0 / ratio
            } else {
                f64::INFINITY
            };
            self.worst = self.worst.min(dist);
        }
    }
}

fn classify(f: Poly2, tol: Tolerances) -> Conic {
    let eps = tol.class;
    let mut margin = Margin { eps, worst: f64::INFINITY };
    let norm = f.max_abs_coeff();
    let signed = |class, lambda: f64, margin: &Margin| Conic {
        f,
        class,
        form: StandardForm::Signed,
        to_standard: None,
        lambda,
        margin: margin.worst,
        tol,
    };
    if norm == 0.0 {
        return signed(ConicClass::ConstantSign, 0.0, &margin);
    }
    let [a20, a11, a02, a10, a01, a00] = f.quadratic_coeffs().map(|v| v / norm);
    let qmax = abs(a20).max(abs(a11)).max(abs(a02));
    margin.test(qmax, 1.0);
    if qmax <= eps {
        let g = Point::new(a10, a01);
        let gn = g.norm();
        margin.test(gn, 1.0);
        if gn <= eps {
            return signed(ConicClass::ConstantSign, a00 * norm, &margin);
        }
        // X = n·p + a00/|g|, n = g/|g|.
        let n = g * (1.0 / gn);
        let m = AffineMap2::new([[n.x, n.y], [-n.y, n.x]], Point::new(a00 / gn, 0.0)).unwrap();
        return Conic {
            f,
            class: ConicClass::SingleLine,
            form: StandardForm::SingleLine,
            to_standard: Some(m),
            lambda: gn * norm,
            margin: margin.worst,
            tol,
        };
    }

    // Rotate to the eigenframe of the quadratic part: p = R(θ)(U, V).
    let mut theta = 0.5 * atan2(a11, a20 - a02);
    let eig = |th: f64| {
        let (s, c) = (sin(th), cos(th));
        (a20 * c * c + a11 * c * s + a02 * s * s, a20 * s * s - a11 * c * s + a02 * c * c, a10 * c + a01 * s, -a10 * s + a01 * c)
    };
    let (mut l1, mut l2, mut d, mut e) = eig(theta);
    if abs(l2) > abs(l1) {
        theta += core::f64::consts::FRAC_PI_2;
        (l1, l2, d, e) = eig(theta);
    }
    let rot = AffineMap2::rotation(-theta);
    let frame = |shift: Point, lin: [[f64; 2]; 2]| AffineMap2::new(lin, shift).unwrap().after(&rot);
    let ident = [[1.0, 0.0], [0.0, 1.0]];

    margin.test(l2, abs(l1));
    if abs(l2) <= eps * abs(l1) {
        // λ1 W² + e V + c' with W = U + d/(2λ1).
        let w0 = d / (2.0 * l1);
        let cp = a00 - d * d / (4.0 * l1);
        margin.test(e, 1.0);
        if abs(e) <= eps {
            let cscale = abs(a00).max(d * d / (4.0 * abs(l1)));
            margin.test(cp, cscale);
            if abs(cp) <= eps * cscale {
                return Conic {
                    f,
                    class: ConicClass::DoubleLine,
                    form: StandardForm::DoubleLine,
                    to_standard: Some(frame(Point::new(w0, 0.0), ident)),
                    lambda: l1 * norm,
                    margin: margin.worst,
                    tol,
                };
            }
            if (cp > 0.0) == (l1 > 0.0) {
                return signed(ConicClass::Empty, l1 * norm, &margin);
            }
            let r = sqrt(-cp / l1);
            return Conic {
                f,
                class: ConicClass::ParallelLines,
                form: StandardForm::ParallelLines { d: 2.0 * r },
                to_standard: Some(frame(Point::new(w0 + r, 0.0), ident)),
                lambda: l1 * norm,
                margin: margin.worst,
                tol,
            };
        }
        // λ1 W² + e V0 with V0 = V + c'/e.
        let v0 = cp / e;
        let (map, lambda, c) = if -l1 / e > 0.0 {
            (frame(Point::new(w0, v0), ident), e, -l1 / e)
        } else {
            (frame(Point::new(-w0, -v0), [[-1.0, 0.0], [0.0, -1.0]]), -e, l1 / e)
        };
        return Conic {
            f,
            class: ConicClass::Parabola,
            form: StandardForm::Parabola { c },
            to_standard: Some(map),
            lambda: lambda * norm,
            margin: margin.worst,
            tol,
        };
    }

    // Central conic: λ1 W² + λ2 Z² + c''.
    let w0 = d / (2.0 * l1);
    let z0 = e / (2.0 * l2);
    let t1 = d * d / (4.0 * l1);
    let t2 = e * e / (4.0 * l2);
    let cpp = a00 - t1 - t2;
    let cscale = abs(a00).max(abs(t1)).max(abs(t2));
    margin.test(cpp, cscale);
    let same_sign = (l1 > 0.0) == (l2 > 0.0);
    let center = Point::new(w0, z0);
    let (alpha, beta) = (sqrt(abs(l1)), sqrt(abs(l2)));
    let sigma = if l1 > 0.0 { 1.0 } else { -1.0 };
    if abs(cpp) <= eps * cscale {
        if same_sign {
            return signed(ConicClass::Point, l1 * norm, &margin);
        }
        let n = hypot2(alpha, beta);
        return Conic {
            f,
            class: ConicClass::CrossingLines,
            form: StandardForm::CrossingLines { d1: Point::new(beta / n, alpha / n), d2: Point::new(-beta / n, alpha / n) },
            to_standard: Some(frame(center, ident)),
            lambda: sigma * (alpha * alpha + beta * beta) * norm,
            margin: margin.worst,
            tol,
        };
    }
    if same_sign {
        if (cpp > 0.0) == (l1 > 0.0) {
            return signed(ConicClass::Empty, l1 * norm, &margin);
        }
        // Semi-axis along Z is the longer one since |λ1| ≥ |λ2|: X = Z, Y = −W.
        let a = sqrt(-cpp / l2);
        let b = sqrt(-cpp / l1);
        return Conic {
            f,
            class: ConicClass::Ellipse,
            form: StandardForm::Ellipse { a, b },
            to_standard: Some(frame(Point::new(z0, -w0), [[0.0, 1.0], [-1.0, 0.0]])),
            lambda: -cpp * norm,
            margin: margin.worst,
            tol,
        };
    }
    // σ(αW − βZ)(αW + βZ) = 2σαβ·XY with X, Y the scaled asymptote coordinates.
    let r = 1.0 / sqrt(2.0 * alpha * beta);
    let mut lin = [[alpha * r, -beta * r], [alpha * r, beta * r]];
    let mut lambda = 2.0 * sigma * alpha * beta;
    let mut k = -cpp / lambda;
    if k < 0.0 {
        lin = [lin[1], [-lin[0][0], -lin[0][1]]];
        lambda = -lambda;
        k = -k;
    }
    let shift = Point::new(lin[0][0] * w0 + lin[0][1] * z0, lin[1][0] * w0 + lin[1][1] * z0);
    Conic {
        f,
        class: ConicClass::Hyperbola,
        form: StandardForm::Hyperbola { k },
        to_standard: Some(frame(shift, lin)),
        lambda: lambda * norm,
        margin: margin.worst,
        tol,
    }
}

fn hypot2(a: f64, b: f64) -> f64 {
    crate::math::hypot(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn quad(a20: f64, a11: f64, a02: f64, a10: f64, a01: f64, a00: f64) -> Poly2 {
        Poly2::quadratic(a20, a11, a02, a10, a01, a00)
    }

    fn residual(c: &Conic, scale: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                let p = Point::new(-scale + 2.0 * scale * i as f64 / 9.0, -scale + 2.0 * scale * j as f64 / 9.0);
                let s = c.standard_form().eval(c.standard_point(p));
                worst = worst.max((c.eval(p) - c.lambda() * s).abs());
            }
        }
        worst
    }

    #[test]
    fn classify_examples() {
        assert_eq!(conic_classify(&quad(1.0, 0.0, 1.0, 0.0, 0.0, -1.0)), ConicClass::Ellipse);
        assert_eq!(conic_classify(&quad(1.0, 0.0, 0.0, -1.0, 0.0, 0.0)), ConicClass::ParallelLines);
        assert_eq!(conic_classify(&quad(0.0, 1.0, 0.0, 0.0, 0.0, 0.0)), ConicClass::CrossingLines);
        assert_eq!(conic_classify(&quad(1.0, 0.0, 1.0, 0.0, 0.0, 1.0)), ConicClass::Empty);
        assert_eq!(conic_classify(&quad(1.0, 0.0, 1.0, 0.0, 0.0, 0.0)), ConicClass::Point);
        assert_eq!(conic_classify(&quad(1.0, 2.0, 1.0, 0.0, 0.0, 0.0)), ConicClass::DoubleLine);
        assert_eq!(conic_classify(&quad(0.0, 0.0, 0.0, 1.0, 2.0, 0.0)), ConicClass::SingleLine);
        assert_eq!(conic_classify(&Poly2::constant(-3.0)), ConicClass::ConstantSign);
        assert_eq!(conic_classify(&quad(1.0, 0.0, -1.0, 0.0, 0.0, -1.0)), ConicClass::Hyperbola);
        assert_eq!(conic_classify(&quad(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0)), ConicClass::Parabola);
    }

    #[test]
    fn normalize_examples() {
        let e = normalize_conic(&quad(4.0, 0.0, 9.0, 0.0, 0.0, -36.0)).unwrap();
        match e.standard_form() {
            StandardForm::Ellipse { a, b } => {
                assert!((a - 3.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        let m = e.to_standard().unwrap();
        assert!(m.is_rigid(1e-14));
        let [[c, s], _] = m.linear();
        assert!((c.abs() - 1.0).abs() < 1e-14 && s.abs() < 1e-14);

        let p = normalize_conic(&quad(1.0, 2.0, 1.0, 1.0, -1.0, 0.0)).unwrap();
        assert_eq!(p.class(), ConicClass::Parabola);
        assert!(p.to_standard().unwrap().is_rigid(1e-14));
        assert!(residual(&p, 3.0) < 1e-12);

        let h = normalize_conic(&quad(1.0, 0.0, -1.0, 0.0, 0.0, -1.0)).unwrap();
        assert_eq!(h.standard_form(), StandardForm::Hyperbola { k: 0.5 });
        let m = h.to_standard().unwrap();
        assert!(m.is_rigid(1e-14));
        let [[c, s], _] = m.linear();
        assert!((c.abs() - 0.5f64.sqrt()).abs() < 1e-15 && (s.abs() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn residuals_across_classes() {
        let cases = [
            quad(2.0, 0.7, 1.0, -0.3, 0.4, -2.0),
            quad(1.0, 2.0, 1.0, 1.0, -1.0, 0.0),
            quad(-0.4, 3.0, 1.2, 0.5, -0.7, 0.2),
            quad(1.0, 0.0, -3.0, 0.0, 0.0, 0.0),
            quad(1.0, 0.0, 0.0, -1.0, 0.0, 0.0),
            quad(1.0, 2.0, 1.0, 0.0, 0.0, 0.0),
            quad(0.0, 0.0, 0.0, 1.0, 2.0, -3.0),
            quad(3.0, -1.0, 0.5, 0.0, 0.0, 1.0),
        ];
        for f in cases {
            let c = Conic::new(f).unwrap();
            if c.to_standard().is_some() {
                assert!(residual(&c, 2.0) <= 1e-12 * f.max_abs_coeff() * 16.0, "{:?}", c.class());
            }
        }
    }

    #[test]
    fn segment_examples() {
        let circle = Conic::new(quad(1.0, 0.0, 1.0, 0.0, 0.0, -1.0)).unwrap();
        let hits = circle.segment_intersections(Point::new(-2.0, 0.0), Point::new(2.0, 0.0));
        assert_eq!(hits.len(), 2);
        assert!((hits[0].param - 0.25).abs() < 1e-15 && (hits[1].param - 0.75).abs() < 1e-15);
        assert!((hits[0].point.x + 1.0).abs() < 1e-15 && (hits[1].point.x - 1.0).abs() < 1e-15);

        let hits = circle.segment_intersections(Point::new(-2.0, 1.0), Point::new(2.0, 1.0));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].multiplicity, 2);
        assert!(hits[0].point.x.abs() < 1e-12 && (hits[0].point.y - 1.0).abs() < 1e-15);

        let h = Conic::new(quad(0.0, 1.0, 0.0, 0.0, 0.0, -1.0)).unwrap();
        let hits = h.segment_intersections(Point::new(1.0, 1.0), Point::new(3.0, 1.0));
        assert_eq!(hits.len(), 1);
        assert!(hits[0].at_vertex && hits[0].point == Point::new(1.0, 1.0));

        assert!(circle.segment_is_free(Point::new(-1.0, 0.0), Point::new(1.0, 0.0)));
        assert!(!circle.segment_is_free(Point::new(-2.0, 0.0), Point::new(2.0, 0.0)));
        assert!(circle.segment_is_free(Point::new(2.0, 0.0), Point::new(3.0, 0.0)));
    }

    #[test]
    fn tangency_examples() {
        let circle = Conic::new(quad(1.0, 0.0, 1.0, 0.0, 0.0, -1.0)).unwrap();
        let b = Point::new(2.0, 0.0);
        let c = Point::new(0.0, 2.0);
        let pts = circle.tangency_interior_points(Point::new(1.0, 0.0), b, c).unwrap();
        let h = 0.5f64.sqrt();
        assert!((pts[0] - Point::new(h, h)).norm() < 1e-15);
        assert!(pts.iter().any(|p| (*p - Point::new(0.5, 0.75f64.sqrt())).norm() < 1e-15));
        for p in &pts {
            assert!(circle.segment_is_free(b, *p) && circle.segment_is_free(c, *p));
        }

        let par = Conic::new(quad(1.0, 0.0, 0.0, 0.0, -1.0, 0.0)).unwrap();
        let pts = par.tangency_interior_points(Point::new(0.5, 0.25), Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        assert!((pts[0] - Point::new(0.5, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn point_in_triangle_examples() {
        let t = Triangle::new(Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.0, 1.0)).unwrap();
        assert_eq!(point_in_triangle(Point::new(0.25, 0.25), &t, 1e-12), Location::Inside);
        assert_eq!(point_in_triangle(Point::new(0.5, 0.5), &t, 1e-12), Location::Border);
        assert_eq!(point_in_triangle(Point::new(2.0, 0.0), &t, 1e-12), Location::Outside);
    }

    #[test]
    fn quadratic_solver() {
        let r: std::vec::Vec<_> = solve_quadratic(1.0, -3.0, 2.0, 1e-9).iter().collect();
        assert_eq!(r, [(1.0, 1), (2.0, 1)]);
        let r: std::vec::Vec<_> = solve_quadratic(1.0, -2.0, 1.0 + 1e-24, 1e-9).iter().collect();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 2);
        assert_eq!(solve_quadratic(1.0, 0.0, 1.0, 1e-9).iter().count(), 0);
        let r: std::vec::Vec<_> = solve_quadratic(1.0, -1e8, 1.0, 0.0).iter().collect();
        assert!((r[0].0 - 1e-8).abs() < 1e-22);
    }

    fn rigid(theta: f64, tx: f64, ty: f64) -> AffineMap2 {
        AffineMap2::translation(Point::new(tx, ty)).after(&AffineMap2::rotation(theta))
    }

    fn arb_quadratic() -> impl Strategy<Value = Poly2> {
        prop::array::uniform6(-3.0f64..3.0).prop_map(|a| quad(a[0], a[1], a[2], a[3], a[4], a[5]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn classification_is_rigid_invariant(f in arb_quadratic(), th in 0.0..(2.0 * PI), tx in -5.0f64..5.0, ty in -5.0f64..5.0) {
            let c = Conic::new(f).unwrap();
            let g = f.compose_affine(&rigid(th, tx, ty));
            let d = Conic::new(g).unwrap();
            prop_assume!(!c.near_threshold() && !d.near_threshold());
            prop_assert_eq!(c.class(), d.class());
        }

        #[test]
        fn standard_residual_is_small(f in arb_quadratic()) {
            let c = Conic::new(f).unwrap();
            if c.to_standard().is_some() {
                prop_assert!(residual(&c, 2.0) <= 1e-9 * f.max_abs_coeff());
            }
        }

        #[test]
        fn intersection_points_lie_on_curve(f in arb_quadratic(), a in prop::array::uniform4(-3.0f64..3.0)) {
            let c = Conic::new(f).unwrap();
            let p0 = Point::new(a[0], a[1]);
            let p1 = Point::new(a[2], a[3]);
            let len = (p1 - p0).norm();
            prop_assume!(len > 1e-3);
            let coords = 1.0 + p0.norm().max(p1.norm());
            for h in c.segment_intersections(p0, p1) {
                prop_assert!(h.param >= 0.0 && h.param <= 1.0);
                if h.multiplicity == 1 {
                    prop_assert!(c.eval(h.point).abs() <= 1e-9 * f.max_abs_coeff() * coords * coords);
                }
            }
        }

        #[test]
        fn point_location_is_cyclic(p in prop::array::uniform2(-2.0f64..2.0), v in prop::array::uniform6(-2.0f64..2.0)) {
            let pts = [Point::new(v[0], v[1]), Point::new(v[2], v[3]), Point::new(v[4], v[5])];
            let q = Point::new(p[0], p[1]);
            if let Ok(t) = Triangle::new(pts[0], pts[1], pts[2]) {
                let u = Triangle::new(pts[1], pts[2], pts[0]).unwrap();
                let w = Triangle::new(pts[2], pts[1], pts[0]).unwrap();
                let l = point_in_triangle(q, &t, 1e-12);
                prop_assert_eq!(l, point_in_triangle(q, &u, 1e-12));
                prop_assert_eq!(l, point_in_triangle(q, &w, 1e-12));
            }
        }

        #[test]
        fn tangency_candidates_keep_segments_free(cx in -0.5f64..0.5, cy in -0.5f64..0.5, r in 0.5f64..2.0, a1 in 0.0..(2.0 * PI), a2 in 0.0..(2.0 * PI), s1 in 1.2f64..3.0, s2 in 1.2f64..3.0) {
            let f = quad(-1.0, 0.0, -1.0, 2.0 * cx, 2.0 * cy, r * r - cx * cx - cy * cy);
            let c = Conic::new(f).unwrap();
            let b = Point::new(cx + s1 * r * a1.cos(), cy + s1 * r * a1.sin());
            let d = Point::new(cx + s2 * r * a2.cos(), cy + s2 * r * a2.sin());
            prop_assume!((b - d).norm() > 1e-2);
            let hint = Point::new(cx + r, cy);
            if let Ok(pts) = c.tangency_interior_points(hint, b, d) {
                for p in pts {
                    let g = c.poly().gradient(p);
                    let (lb, ld) = (g.dot(b - p), g.dot(d - p));
                    prop_assert!(lb * ld >= -1e-12 * g.dot(g) * (b - p).norm() * (d - p).norm());
                    prop_assert!(c.segment_is_free(b, p));
                    prop_assert!(c.segment_is_free(d, p));
                }
            }
        }
    }
}
