//! Closed-form integrals on free triangles and on degenerate conic regions.
//!
//! Chord regions are integrated in the conic's standard frame. Callers pass
//! the integrand already pulled back to that frame (`g ∘ to_standard⁻¹`);
//! the frame maps have unit Jacobian, so no extra factor is needed.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::conic::{point_in_triangle, solve_quadratic, Conic, ConicClass, Location, StandardForm};
use crate::error::{Error, Result};
use crate::geom::{Point, Triangle};
use crate::math::{abs, atan2, cos, exp_m1, ln_1p, powi, sin, sqrt};
use crate::poly::{oriented_triangle_integral, triangle_integral, Poly2};
use crate::subdivide::{analyze, FreeCase};

const TRIG_DEG: usize = 6;
const TRIG_FREQ: usize = 2 * TRIG_DEG + 1;

/// Integer linearization coefficients of `cos^i θ sin^j θ`, `i + j ≤ 6`.
///
/// With `z = e^{iθ}`, `cos^i sin^j = (−i)^j / 2^{i+j} · Σ_n K[i][j][n] z^n`;
/// entry `n + 6` holds `K[i][j][n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigTable {
    k: [[[i32; TRIG_FREQ]; TRIG_DEG + 1]; TRIG_DEG + 1],
}

const fn binom(n: usize, k: usize) -> i32 {
    let mut r: i64 = 1;
    let mut i = 0;
    while i < k {
        r = r * (n - i) as i64 / (i + 1) as i64;
        i += 1;
    }
    r as i32
}

impl TrigTable {
    pub const fn new() -> Self {
        let mut k = [[[0i32; TRIG_FREQ]; TRIG_DEG + 1]; TRIG_DEG + 1];
        let mut i = 0;
        while i <= TRIG_DEG {
            let mut j = 0;
            while i + j <= TRIG_DEG {
                let mut p = 0;
                while p <= i {
                    let mut q = 0;
                    while q <= j {
                        let idx = 2 * p + 2 * q + TRIG_DEG - i - j;
                        let sign = if (j - q) % 2 == 0 { 1 } else { -1 };
                        k[i][j][idx] += sign * binom(i, p) * binom(j, q);
                        q += 1;
                    }
                    p += 1;
                }
                j += 1;
            }
            i += 1;
        }
        TrigTable { k }
    }

    /// A deliberately wrong table for exercising failure reporting.
    #[doc(hidden)]
    pub const fn corrupted() -> Self {
        let mut t = TrigTable::new();
        t.k[0][0][TRIG_DEG] += 1;
        t.k[2][0][TRIG_DEG] += 1;
        t
    }

    /// `∫_{θ̄−Δ/2}^{θ̄+Δ/2} cos^i θ sin^j θ dθ`, evaluated termwise as
    /// `(2/n) cos(nθ̄) sin(nΔ/2)` and `(2/n) sin(nθ̄) sin(nΔ/2)`.
    pub fn arc_moment(&self, i: usize, j: usize, mid: f64, delta: f64) -> f64 {
        assert!(i + j <= TRIG_DEG, "trig moment order exceeds {TRIG_DEG}");
        let row = &self.k[i][j];
        let mut sum = crate::math::CompensatedSum::default();
        for (idx, &kn) in row.iter().enumerate() {
            if kn == 0 {
                continue;
            }
            let n = idx as f64 - TRIG_DEG as f64;
            let kn = kn as f64;
            let term = match j % 4 {
                0 | 2 => {
                    let s = if j.is_multiple_of(4) { kn } else { -kn };
                    if n == 0.0 {
                        s * delta
                    } else {
                        s * (2.0 / n) * cos(n * mid) * sin(n * delta / 2.0)
                    }
                }
                _ => {
                    let s = if j % 4 == 1 { kn } else { -kn };
                    if n == 0.0 {
                        0.0
                    } else {
                        s * (2.0 / n) * sin(n * mid) * sin(n * delta / 2.0)
                    }
                }
            };
            sum.add(term);
        }
        sum.value() / powi(2.0, (i + j) as i32)
    }

    /// `∫_0^{2π} cos^i sin^j` from the constant term alone.
    pub fn full_period(&self, i: usize, j: usize) -> f64 {
        if j % 2 == 1 {
            return 0.0;
        }
        let s = if j.is_multiple_of(4) { 1.0 } else { -1.0 };
        2.0 * PI * s * self.k[i][j][TRIG_DEG] as f64 / powi(2.0, (i + j) as i32)
    }
}

impl Default for TrigTable {
    fn default() -> Self {
        TrigTable::new()
    }
}

/// The table every public entry point uses.
pub static TRIG_TABLE: TrigTable = TrigTable::new();

/// `∫_0^{2π} cos^i θ sin^j θ dθ = 2π (i−1)!! (j−1)!! / (i+j)!!` for even
/// `i, j`, zero otherwise.
pub fn trig_moment(i: usize, j: usize) -> f64 {
    if i % 2 == 1 || j % 2 == 1 {
        return 0.0;
    }
    let dfact = |n: i64| -> f64 {
        let mut r = 1.0;
        let mut k = n;
        while k > 1 {
            r *= k as f64;
            k -= 2;
        }
        r
    };
    2.0 * PI * dfact(i as i64 - 1) * dfact(j as i64 - 1) / dfact((i + j) as i64)
}

/// Relative position of an ellipse and a triangle whose boundary it does
/// not cross.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipsePosition {
    TriangleInsideEllipse,
    EllipseInsideTriangle,
    Disjoint,
}

fn ellipse_axes(e: &Conic) -> Result<(f64, f64)> {
    match e.standard_form() {
        StandardForm::Ellipse { a, b } => Ok((a, b)),
        _ => Err(Error::WrongConicClass("expected an ellipse")),
    }
}

/// Position test on the unit-circle image of the ellipse: a vertex inside
/// means the triangle is inside, the center inside the triangle means the
/// ellipse is inside, otherwise they are disjoint.
pub fn ellipse_triangle_position(e: &Conic, t: &Triangle) -> Result<EllipsePosition> {
    let (a, b) = ellipse_axes(e)?;
    let unit = |p: Point| {
        let q = e.standard_point(p);
        Point::new(q.x / a, q.y / b)
    };
    let [va, vb, vc] = t.vertices().map(unit);
    if va.norm() < 1.0 {
        return Ok(EllipsePosition::TriangleInsideEllipse);
    }
    let image = Triangle::new(va, vb, vc)?;
    if point_in_triangle(Point::ORIGIN, &image, e.tolerances().barycentric) == Location::Inside {
        Ok(EllipsePosition::EllipseInsideTriangle)
    } else {
        Ok(EllipsePosition::Disjoint)
    }
}

fn pullback(g: &Poly2, c: &Conic) -> Result<Poly2> {
    let m = c.to_standard().ok_or(Error::WrongConicClass("conic has no standard frame"))?;
    Ok(g.compose_affine(&m.inverse()))
}

fn ellipse_interior_with(g: &Poly2, e: &Conic, table: &TrigTable) -> Result<f64> {
    let (a, b) = ellipse_axes(e)?;
    let gs = pullback(g, e)?;
    let mut sum = crate::math::CompensatedSum::default();
    for (i, j, coef) in gs.terms() {
        let scale = powi(a, i as i32 + 1) * powi(b, j as i32 + 1);
        sum.add(coef * scale * table.full_period(i, j) / (i + j + 2) as f64);
    }
    Ok(sum.value())
}

/// `∬` of `g` over the interior of the ellipse, in polar coordinates of
/// the axis-scaled frame (Jacobian `a·b·ρ`).
pub fn ellipse_interior_integral(g: &Poly2, e: &Conic) -> Result<f64> {
    ellipse_interior_with(g, e, &TRIG_TABLE)
}

/// Which of the two regions bounded by a chord and an ellipse arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordSide {
    /// Right of the directed chord `p1 → p2`, bounded by the counterclockwise
    /// arc from `p1` to `p2`.
    Right,
    Left,
}

/// Region between a chord and the conic arc joining its endpoints, in
/// standard coordinates. For parabolas and hyperbolas the bounded region is
/// unique and `side` is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordRegion {
    pub form: StandardForm,
    pub p1: Point,
    pub p2: Point,
    pub side: ChordSide,
}

/// Elliptic sector minus the triangle `(O, p1, p2)`, in generalized polar
/// coordinates `X = aρ cos θ`, `Y = bρ sin θ`.
fn ellipse_segment(g: &Poly2, a: f64, b: f64, mut p1: Point, mut p2: Point, side: ChordSide, table: &TrigTable) -> f64 {
    if side == ChordSide::Left {
        core::mem::swap(&mut p1, &mut p2);
    }
    let th1 = atan2(p1.y / b, p1.x / a);
    let th2 = atan2(p2.y / b, p2.x / a);
    let mut delta = th2 - th1;
    while delta <= 0.0 {
        delta += 2.0 * PI;
    }
    while delta > 2.0 * PI {
        delta -= 2.0 * PI;
    }
    let mid = th1 + 0.5 * delta;
    let mut sector = crate::math::CompensatedSum::default();
    for (i, j, coef) in g.terms() {
        let scale = powi(a, i as i32 + 1) * powi(b, j as i32 + 1) / (i + j + 2) as f64;
        sector.add(coef * scale * table.arc_moment(i, j, mid, delta));
    }
    sector.value() - oriented_triangle_integral(g, Point::ORIGIN, p1, p2)
}

fn check_chord(r: &ChordRegion) -> Result<()> {
    if !(r.p1.is_finite() && r.p2.is_finite()) {
        return Err(Error::NonFinite);
    }
    if r.p1 == r.p2 {
        return Err(Error::InvalidChord("endpoints coincide"));
    }
    Ok(())
}

/// Chord region of an ellipse (a circle when `a = b`).
pub fn circle_segment_integral(g: &Poly2, region: &ChordRegion) -> Result<f64> {
    circle_segment_with(g, region, &TRIG_TABLE)
}

fn circle_segment_with(g: &Poly2, region: &ChordRegion, table: &TrigTable) -> Result<f64> {
    check_chord(region)?;
    match region.form {
        StandardForm::Ellipse { a, b } => Ok(ellipse_segment(g, a, b, region.p1, region.p2, region.side, table)),
        _ => Err(Error::WrongConicClass("expected an ellipse chord region")),
    }
}

/// Dense univariate polynomial in `s`, low degree first.
#[derive(Clone, Copy)]
struct Uni {
    c: [f64; 16],
}

impl Uni {
    fn constant(v: f64) -> Uni {
        let mut c = [0.0; 16];
        c[0] = v;
        Uni { c }
    }

    fn linear(a: f64, b: f64) -> Uni {
        let mut u = Uni::constant(a);
        u.c[1] = b;
        u
    }

    fn mul(&self, o: &Uni) -> Uni {
        let mut out = Uni::constant(0.0);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b != 0.0 {
                    debug_assert!(i + j < 16);
                    out.c[i + j] += a * b;
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, o: &Uni, s: f64) {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a += s * b;
        }
    }

    fn pow(&self, n: usize) -> Uni {
        let mut r = Uni::constant(1.0);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// `∫_0^1`.
    fn integral01(&self) -> f64 {
        let mut sum = crate::math::CompensatedSum::default();
        for (k, &c) in self.c.iter().enumerate() {
            sum.add(c / (k + 1) as f64);
        }
        sum.value()
    }
}

/// Region between the chord and the arc of `Y = cX²`, integrated in
/// `s ∈ [0, 1]` with `X = a1 + h s` and the exact factor
/// `l − cX² = c h² s (1 − s)`.
pub fn parabola_chord_integral(g: &Poly2, region: &ChordRegion) -> Result<f64> {
    check_chord(region)?;
    let c = match region.form {
        StandardForm::Parabola { c } => c,
        _ => return Err(Error::WrongConicClass("expected a parabola chord region")),
    };
    let (mut a1, mut b1) = (region.p1.x, region.p2.x);
    if a1 > b1 {
        core::mem::swap(&mut a1, &mut b1);
    }
    let h = b1 - a1;
    if h == 0.0 {
        return Err(Error::InvalidChord("endpoints share an abscissa"));
    }
    let x = Uni::linear(a1, h);
    let q = x.mul(&x).mul(&Uni::constant(c));
    let (y1, y2) = (c * a1 * a1, c * b1 * b1);
    let l = Uni::linear(y1, y2 - y1);
    let gap = Uni {
        c: {
            let mut v = [0.0; 16];
            v[1] = c * h * h;
            v[2] = -c * h * h;
            v
        },
    };
    let mut total = Uni::constant(0.0);
    for (i, j, coef) in g.terms() {
        let mut sum = Uni::constant(0.0);
        for m in 0..=j {
            sum.add_scaled(&l.pow(m).mul(&q.pow(j - m)), 1.0);
        }
        let term = x.pow(i).mul(&gap).mul(&sum);
        total.add_scaled(&term, coef * h / (j + 1) as f64);
    }
    Ok(total.integral01())
}

const LAURENT_OFF: usize = 8;

/// Laurent polynomial in `X` with exponents in `−8..=8`.
#[derive(Clone, Copy)]
struct Laurent {
    c: [f64; 2 * LAURENT_OFF + 1],
}

impl Laurent {
    fn monomial(e: i32, v: f64) -> Laurent {
        let mut c = [0.0; 2 * LAURENT_OFF + 1];
        c[(e + LAURENT_OFF as i32) as usize] = v;
        Laurent { c }
    }

    fn mul(&self, o: &Laurent) -> Laurent {
        let mut out = Laurent::monomial(0, 0.0);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b != 0.0 {
                    let k = i + j - LAURENT_OFF;
                    debug_assert!(k < out.c.len());
                    out.c[k] += a * b;
                }
            }
        }
        out
    }

    fn add(&mut self, o: &Laurent, s: f64) {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a += s * b;
        }
    }

    /// `∫_{a1}^{a1+h} X^e dX` for `a1 > 0`, via `expm1` and `ln1p`.
    fn integral(&self, a1: f64, h: f64) -> f64 {
        let lr = ln_1p(h / a1);
        let mut sum = crate::math::CompensatedSum::default();
        for (idx, &c) in self.c.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let e = idx as i32 - LAURENT_OFF as i32;
            let v = if e == -1 {
                lr
            } else {
                let p = (e + 1) as f64;
                powi(a1, e + 1) * exp_m1(p * lr) / p
            };
            sum.add(c * v);
        }
        sum.value()
    }
}

/// Region between the chord and the arc of one branch of `XY = k`, using
/// `l − k/X = k (X − a1)(b1 − X) / (a1 b1 X)`. The branch `X < 0` is mapped
/// onto `X > 0` by the central symmetry.
pub fn hyperbola_chord_integral(g: &Poly2, region: &ChordRegion) -> Result<f64> {
    check_chord(region)?;
    let k = match region.form {
        StandardForm::Hyperbola { k } => k,
        _ => return Err(Error::WrongConicClass("expected a hyperbola chord region")),
    };
    let (mut a1, mut b1) = (region.p1.x, region.p2.x);
    if a1 * b1 <= 0.0 {
        return Err(Error::InvalidChord("endpoints on different branches"));
    }
    let mut g = *g;
    if a1 < 0.0 {
        a1 = -a1;
        b1 = -b1;
        let mut flipped = Poly2::zero();
        for (i, j, c) in g.terms() {
            flipped.set_coeff(i, j, if (i + j) % 2 == 0 { c } else { -c });
        }
        g = flipped;
    }
    if a1 > b1 {
        core::mem::swap(&mut a1, &mut b1);
    }
    let h = b1 - a1;
    if h == 0.0 {
        return Err(Error::InvalidChord("endpoints coincide"));
    }
    let s = a1 + b1;
    let ab = a1 * b1;
    // k (X − a1)(b1 − X) / (a1 b1 X)
    let mut gap = Laurent::monomial(1, -1.0);
    gap.add(&Laurent::monomial(0, s), 1.0);
    gap.add(&Laurent::monomial(-1, -ab), 1.0);
    let gap = gap.mul(&Laurent::monomial(0, k / ab));
    // l = (k / (a1 b1)) (S − X)
    let mut l = Laurent::monomial(0, s * k / ab);
    l.add(&Laurent::monomial(1, -k / ab), 1.0);
    let r = Laurent::monomial(-1, k);
    let pow = |p: &Laurent, n: usize| {
        let mut out = Laurent::monomial(0, 1.0);
        for _ in 0..n {
            out = out.mul(p);
        }
        out
    };
    let mut total = Laurent::monomial(0, 0.0);
    for (i, j, coef) in g.terms() {
        let mut sum = Laurent::monomial(0, 0.0);
        for m in 0..=j {
            sum.add(&pow(&l, m).mul(&pow(&r, j - m)), 1.0);
        }
        let term = Laurent::monomial(i as i32, 1.0).mul(&gap).mul(&sum);
        total.add(&term, coef / (j + 1) as f64);
    }
    Ok(total.integral(a1, h))
}

/// Dispatches on the region's standard family.
pub fn chord_region_integral(g: &Poly2, region: &ChordRegion) -> Result<f64> {
    chord_region_with(g, region, &TRIG_TABLE)
}

fn chord_region_with(g: &Poly2, region: &ChordRegion, table: &TrigTable) -> Result<f64> {
    match region.form {
        StandardForm::Ellipse { .. } => circle_segment_with(g, region, table),
        StandardForm::Parabola { .. } => parabola_chord_integral(g, region),
        StandardForm::Hyperbola { .. } => hyperbola_chord_integral(g, region),
        _ => Err(Error::WrongConicClass("chord regions need an ellipse, parabola or hyperbola")),
    }
}

/// Value of a free piece together with the operands when it was formed as
/// a difference `total − part`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PieceValue {
    pub value: f64,
    pub difference_of: Option<(f64, f64)>,
}

impl PieceValue {
    fn direct(value: f64) -> Self {
        PieceValue { value, difference_of: None }
    }

    fn complement(total: f64, part: f64) -> Self {
        PieceValue { value: total - part, difference_of: Some((total, part)) }
    }
}

/// Sign of `f` on the interior of `t`, from the probe point with the
/// largest `|f|` among the centroid and three points near the vertices.
fn probe_sign(c: &Conic, t: &Triangle) -> f64 {
    let probes = [
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
    ];
    let mut best = 0.0;
    for w in probes {
        let v = c.eval(t.barycentric_point(w));
        if abs(v) > abs(best) {
            best = v;
        }
    }
    if best >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn by_sign(g: &Poly2, t: &Triangle, sign: f64) -> PieceValue {
    PieceValue::direct(if sign > 0.0 { triangle_integral(g, t) } else { 0.0 })
}

/// Sign of `f` on the bounded region between a chord and the arc.
fn chord_region_sign(c: &Conic) -> f64 {
    match c.standard_form() {
        StandardForm::Ellipse { .. } => -c.lambda(),
        _ => c.lambda(),
    }
}

/// Chord `vi–vj` with both ends on the conic, third vertex `vk`.
#[allow(clippy::too_many_arguments)]
fn two_vertex_case(
    g: &Poly2,
    c: &Conic,
    t: &Triangle,
    vi: Point,
    vj: Point,
    vk: Point,
    table: &TrigTable,
    crossing_known: bool,
) -> Result<PieceValue> {
    if c.branch_of(vi) != c.branch_of(vj) {
        return Ok(by_sign(g, t, probe_sign(c, t)));
    }
    if !crossing_known {
        let mid = vi.midpoint(vj);
        let eps = c.tolerances().param;
        let crossings = c.line_params(vk, mid - vk).into_iter().filter(|&s| s > eps && s <= 1.0).count();
        if crossings == 0 {
            return Ok(by_sign(g, t, probe_sign(c, t)));
        }
    }
    if let Some(r) = thin_chord_region(g, c.poly(), vi, vj, vk) {
        return Ok(if chord_region_sign(c) > 0.0 { PieceValue::direct(r) } else { PieceValue::complement(triangle_integral(g, t), r) });
    }
    let (mut p1, mut p2) = (c.standard_point(vi), c.standard_point(vj));
    let pk = c.standard_point(vk);
    if (p2 - p1).cross(pk - p1) > 0.0 {
        core::mem::swap(&mut p1, &mut p2);
    }
    let region = ChordRegion { form: c.standard_form(), p1, p2, side: ChordSide::Right };
    let gs = pullback(g, c)?;
    let r = chord_region_with(&gs, &region, table)?;
    if chord_region_sign(c) > 0.0 {
        Ok(PieceValue::direct(r))
    } else {
        Ok(PieceValue::complement(triangle_integral(g, t), r))
    }
}

// Chord regions far from the conic's center are thin, and the closed forms
// above lose most of their digits: the sector and triangle terms are large
// and nearly cancel, and the integrand's coefficients blow up when moved to
// a distant center. For those we integrate in a frame at the chord's
// midpoint instead, over `u` along the chord with the arc as a graph
// `w = h(u)`. `h` is analytic on a Bernstein ellipse of parameter `ρ` around
// the chord, so Gauss–Legendre with `n` nodes has error `O(ρ^{-2n})`; `n` is
// picked to push that below rounding. Arcs too curved for that are split
// at the point above the chord midpoint: the region is the inscribed
// triangle plus two flatter chord regions.

const THIN_RHO_MIN: f64 = 1.5;
const THIN_TARGET_LN: f64 = 46.0; // ln(1e20)
const THIN_MAX_NODES: usize = 64;
const THIN_MAX_SPLITS: u32 = 6;

/// `∬ g` over the region between chord `vi–vj` and the conic arc on the side
/// of `vk`, when that arc is a well-conditioned graph over the chord.
fn thin_chord_region(g: &Poly2, f: &Poly2, vi: Point, vj: Point, vk: Point) -> Option<f64> {
    chord_graph_integral(g, f, vi, vj, vk, 0)
}

fn chord_graph_integral(g: &Poly2, f: &Poly2, vi: Point, vj: Point, vk: Point, depth: u32) -> Option<f64> {
    let d = vj - vi;
    let len = d.norm();
    if len == 0.0 || !len.is_finite() {
        return None;
    }
    let e = d * (1.0 / len);
    let n = e.perp();
    let frame = crate::poly::AffineMap2::new([[e.x, n.x], [e.y, n.y]], vi.midpoint(vj)).ok()?;
    let q = f.compose_affine(&frame);
    let (a, b1, b0, c2) = (q.coeff(0, 2), q.coeff(1, 1), q.coeff(0, 1), q.coeff(2, 0));
    let half = 0.5 * len;
    // Along the chord q(u, 0) vanishes at ±half: c2 (u² − half²).
    if c2 == 0.0 {
        return None;
    }
    let bulge_up = (vk - vi).dot(n) > 0.0;
    let (bl, br) = (b0 - b1 * half, b0 + b1 * half);
    let graph = bl != 0.0 && br != 0.0 && (bl > 0.0) == (br > 0.0);
    let s = if br > 0.0 { 1.0 } else { -1.0 };
    // D(u) = B² − 4AC in the scaled variable z = u / half.
    let d2 = (b1 * half) * (b1 * half) - 4.0 * a * c2 * half * half;
    let d1 = 2.0 * b1 * half * b0;
    let d0 = b0 * b0 + 4.0 * a * c2 * half * half;
    let rho = if graph { bernstein_rho(d2, d1, d0) } else { 0.0 };
    let h = |u: f64| {
        let bu = b0 + b1 * u;
        let cu = c2 * (u - half) * (u + half);
        let disc = bu * bu - 4.0 * a * cu;
        2.0 * cu / (-bu - s * sqrt(disc.max(0.0)))
    };
    let mid = h(0.0);
    let usable = graph && mid != 0.0 && mid.is_finite() && (mid > 0.0) == bulge_up;
    if !usable || rho < THIN_RHO_MIN {
        if depth >= THIN_MAX_SPLITS {
            return None;
        }
        // Split at the arc point whose tangent is parallel to the chord:
        // on the line 2 c2 u + b1 w = 0, so q there is a quadratic in w.
        let kappa = -b1 / (2.0 * c2);
        let qa = c2 * kappa * kappa + b1 * kappa + a;
        let w = solve_quadratic(qa, b0, -c2 * half * half, 0.0)
            .iter()
            .map(|(w, _)| w)
            .filter(|&w| w != 0.0 && w.is_finite() && (w > 0.0) == bulge_up)
            .min_by(|x, y| abs(*x).total_cmp(&abs(*y)))?;
        let apex = frame.apply(Point::new(kappa * w, w));
        let inscribed = triangle_integral(g, &Triangle::new(vi, apex, vj).ok()?);
        // Reflect the far vertex so it lands on the bulge side of each sub-chord.
        let left = chord_graph_integral(g, f, vi, apex, vi + apex - vj, depth + 1)?;
        let right = chord_graph_integral(g, f, apex, vj, apex + vj - vi, depth + 1)?;
        return Some(inscribed + left + right);
    }
    let gl = g.compose_affine(&frame);
    let nodes = ((THIN_TARGET_LN / (2.0 * ln_1p(rho - 1.0))) as usize + 1).clamp(4, THIN_MAX_NODES);
    let mut sum = crate::math::CompensatedSum::default();
    for (x, w) in GaussLegendre::new(nodes) {
        let u = half * x;
        let hu = h(u);
        let mut col = 0.0;
        for (i, j, coef) in gl.terms() {
            col += coef * powi(u, i as i32) * powi(hu, j as i32 + 1) / (j + 1) as f64;
        }
        sum.add(w * col);
    }
    let r = half * sum.value();
    Some(if mid > 0.0 { r } else { -r })
}

/// Smallest Bernstein-ellipse parameter among the zeros of
/// `d2 z² + d1 z + d0`; infinite when there are none.
fn bernstein_rho(d2: f64, d1: f64, d0: f64) -> f64 {
    let rho_at = |x: f64, y: f64| {
        let semi = 0.5 * (crate::math::hypot(x - 1.0, y) + crate::math::hypot(x + 1.0, y));
        semi + sqrt((semi * semi - 1.0).max(0.0))
    };
    if d2 == 0.0 {
        return if d1 == 0.0 { f64::INFINITY } else { rho_at(-d0 / d1, 0.0) };
    }
    let disc = d1 * d1 - 4.0 * d2 * d0;
    if disc >= 0.0 {
        let sq = sqrt(disc);
        let qq = -0.5 * (d1 + if d1 < 0.0 { -sq } else { sq });
        let mut best = f64::INFINITY;
        if qq != 0.0 {
            best = best.min(rho_at(qq / d2, 0.0)).min(rho_at(d0 / qq, 0.0));
        } else {
            best = best.min(rho_at(0.0, 0.0));
        }
        best
    } else {
        let re = -d1 / (2.0 * d2);
        let im = sqrt(-disc) / (2.0 * abs(d2));
        rho_at(re, im)
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on
/// the three-term recurrence.
struct GaussLegendre {
    n: usize,
    k: usize,
}

impl GaussLegendre {
    fn new(n: usize) -> Self {
        GaussLegendre { n, k: 0 }
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for m in 2..=n {
        let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

impl Iterator for GaussLegendre {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        if self.k >= self.n {
            return None;
        }
        let n = self.n;
        let mut x = cos(PI * (self.k as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if abs(step) <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        self.k += 1;
        Some((x, 2.0 / ((1.0 - x * x) * dp * dp)))
    }
}

pub(crate) fn free_triangle_with(g: &Poly2, c: &Conic, t: &Triangle, case: FreeCase, table: &TrigTable) -> Result<PieceValue> {
    if !c.class().is_nondegenerate() {
        return Err(Error::WrongConicClass("free-triangle integration needs an ellipse, parabola or hyperbola"));
    }
    let an = analyze(c, t);
    let on = an.vertex_on;
    let recount = an.vertex_hits();
    match case {
        FreeCase::AllSidesFree { vertex_hits } if vertex_hits != recount => {
            return Err(Error::Internal("free case does not match the boundary recount"));
        }
        _ => {}
    }
    match (case, recount) {
        (FreeCase::OneSideTouch, _) | (_, 0) => {
            if c.class() == ConicClass::Ellipse {
                let inside = -c.lambda();
                match ellipse_triangle_position(c, t)? {
                    EllipsePosition::TriangleInsideEllipse => Ok(by_sign(g, t, inside)),
                    EllipsePosition::Disjoint => Ok(by_sign(g, t, -inside)),
                    EllipsePosition::EllipseInsideTriangle => {
                        let e = ellipse_interior_with(g, c, table)?;
                        if inside > 0.0 {
                            Ok(PieceValue::direct(e))
                        } else {
                            Ok(PieceValue::complement(triangle_integral(g, t), e))
                        }
                    }
                }
            } else {
                Ok(by_sign(g, t, probe_sign(c, t)))
            }
        }
        (_, 1) => Ok(by_sign(g, t, probe_sign(c, t))),
        (_, 2) => {
            let k = on.iter().position(|&b| !b).unwrap();
            two_vertex_case(g, c, t, t.vertex(k + 1), t.vertex(k + 2), t.vertex(k), table, false)
        }
        _ => {
            if c.class() != ConicClass::Hyperbola {
                return Ok(by_sign(g, t, probe_sign(c, t)));
            }
            let br = [0, 1, 2].map(|i| c.branch_of(t.vertex(i)));
            if br[0] == br[1] && br[1] == br[2] {
                return Ok(by_sign(g, t, probe_sign(c, t)));
            }
            let k = (0..3).find(|&k| br[(k + 1) % 3] == br[(k + 2) % 3]).unwrap();
            two_vertex_case(g, c, t, t.vertex(k + 1), t.vertex(k + 2), t.vertex(k), table, true)
        }
    }
}

/// `∬_{t ∩ {f ≥ 0}} g` for a triangle certified free with case `case`.
pub fn integrate_free_triangle(g: &Poly2, c: &Conic, t: &Triangle, case: FreeCase) -> Result<f64> {
    free_triangle_with(g, c, t, case, &TRIG_TABLE).map(|v| v.value)
}

/// Half-plane `n·p + m ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct HalfPlane {
    n: Point,
    m: f64,
}

impl HalfPlane {
    fn value(&self, p: Point) -> f64 {
        self.n.dot(p) + self.m
    }

    fn flip(self) -> HalfPlane {
        HalfPlane { n: -self.n, m: -self.m }
    }
}

/// Convex polygon clipped to a half-plane.
fn clip(poly: &[Point], h: HalfPlane) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (idx, &p) in poly.iter().enumerate() {
        let q = poly[(idx + 1) % poly.len()];
        let (hp, hq) = (h.value(p), h.value(q));
        if hp >= 0.0 {
            out.push(p);
        }
        if (hp > 0.0 && hq < 0.0) || (hp < 0.0 && hq > 0.0) {
            out.push(p + (q - p) * (hp / (hp - hq)));
        }
    }
    out
}

fn polygon_integral(g: &Poly2, poly: &[Point]) -> f64 {
    let mut sum = crate::math::CompensatedSum::default();
    for k in 1..poly.len().saturating_sub(1) {
        sum.add(oriented_triangle_integral(g, poly[0], poly[k], poly[k + 1]));
    }
    sum.value()
}

/// One convex piece of a degenerate region: the triangle clipped to the
/// listed half-planes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedPiece {
    pub polygon: Vec<Point>,
    pub value: f64,
}

/// Integral over a degenerate region, its convex pieces, and a layout label.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateResult {
    pub value: f64,
    pub pieces: Vec<ClippedPiece>,
    pub layout: &'static str,
}

/// Linear form of the standard `X` (or of `cross(d, P)`) in world coordinates.
fn world_linear(c: &Conic, coeffs: Point) -> HalfPlane {
    let m = c.to_standard().expect("line classes carry a frame");
    let [[l00, l01], [l10, l11]] = m.linear();
    let s = m.shift();
    HalfPlane { n: Point::new(coeffs.x * l00 + coeffs.y * l10, coeffs.x * l01 + coeffs.y * l11), m: coeffs.x * s.x + coeffs.y * s.y }
}

/// `{f ≥ 0} ∩ t` for the degenerate classes, as a union of convex pieces
/// with disjoint interiors, each the triangle clipped to half-planes.
pub fn degenerate_pieces(g: &Poly2, c: &Conic, t: &Triangle) -> Result<DegenerateResult> {
    let tri: Vec<Point> = t.vertices().to_vec();
    let lam = c.lambda();
    let full = |layout| DegenerateResult {
        value: triangle_integral(g, t),
        pieces: alloc::vec![ClippedPiece { polygon: tri.clone(), value: triangle_integral(g, t) }],
        layout,
    };
    let none = |layout| DegenerateResult { value: 0.0, pieces: Vec::new(), layout };
    let regions: Vec<Vec<HalfPlane>>;
    let layout;
    match (c.class(), c.standard_form()) {
        (ConicClass::ConstantSign, _) | (ConicClass::Empty, _) | (ConicClass::Point, _) | (ConicClass::DoubleLine, _) => {
            return Ok(if lam >= 0.0 { full("whole-triangle") } else { none("empty") });
        }
        (ConicClass::SingleLine, _) => {
            let x = world_linear(c, Point::new(1.0, 0.0));
            let h = if lam > 0.0 { x } else { x.flip() };
            regions = alloc::vec![alloc::vec![h]];
            layout = "half-plane";
        }
        (ConicClass::ParallelLines, StandardForm::ParallelLines { d }) => {
            let x = world_linear(c, Point::new(1.0, 0.0));
            let lower = x.flip();
            let upper = HalfPlane { n: x.n, m: x.m - d };
            regions =
                if lam > 0.0 { alloc::vec![alloc::vec![lower], alloc::vec![upper]] } else { alloc::vec![alloc::vec![x, upper.flip()]] };
            let count = t.vertices().iter().filter(|&&p| x.value(p) > 0.0 && upper.value(p) < 0.0).count();
            layout = match count {
                0 => "strip-no-vertex",
                1 => "strip-one-vertex",
                2 => "strip-two-vertices",
                _ => "strip-all-vertices",
            };
        }
        (ConicClass::CrossingLines, StandardForm::CrossingLines { d1, d2 }) => {
            // cross(d, P) = d.x·Y − d.y·X.
            let h1 = world_linear(c, Point::new(-d1.y, d1.x));
            let h2 = world_linear(c, Point::new(-d2.y, d2.x));
            regions = if lam > 0.0 {
                alloc::vec![alloc::vec![h1, h2], alloc::vec![h1.flip(), h2.flip()]]
            } else {
                alloc::vec![alloc::vec![h1, h2.flip()], alloc::vec![h1.flip(), h2]]
            };
            let center = c.world_point(Point::ORIGIN);
            layout = match point_in_triangle(center, t, c.tolerances().barycentric) {
                Location::Inside => "center-inside",
                Location::Border => "center-on-border",
                Location::Outside => "center-outside",
            };
        }
        _ => return Err(Error::WrongConicClass("not a degenerate conic")),
    }
    let mut pieces = Vec::new();
    let mut total = crate::math::CompensatedSum::default();
    for hs in regions {
        let mut poly = tri.clone();
        for h in hs {
            poly = clip(&poly, h);
            if poly.len() < 3 {
                break;
            }
        }
        if poly.len() < 3 {
            continue;
        }
        let v = polygon_integral(g, &poly);
        total.add(v);
        pieces.push(ClippedPiece { polygon: poly, value: v });
    }
    Ok(DegenerateResult { value: total.value(), pieces, layout })
}

/// `∬_{t ∩ {f ≥ 0}} g` for line pairs, single lines, points, empty sets
/// and constant-sign `f`.
pub fn degenerate_integral(g: &Poly2, c: &Conic, t: &Triangle) -> Result<f64> {
    degenerate_pieces(g, c, t).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::AffineMap2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    fn quad(a20: f64, a11: f64, a02: f64, a10: f64, a01: f64, a00: f64) -> Conic {
        Conic::new(Poly2::quadratic(a20, a11, a02, a10, a01, a00)).unwrap()
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
        for n in [4, 17, 64] {
            let nodes: std::vec::Vec<_> = GaussLegendre::new(n).collect();
            let w: f64 = nodes.iter().map(|&(_, w)| w).sum();
            assert!((w - 2.0).abs() < 1e-14);
            let deg = 2 * n - 2;
            let m: f64 = nodes.iter().map(|&(x, w)| w * powi(x, deg as i32)).sum();
            assert!((m - 2.0 / (deg + 1) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn thin_path_matches_closed_form_on_a_circle() {
        // Segment of the unit circle cut by y = cos δ, on the far side of the chord from the origin.
        let f = Poly2::quadratic(-1.0, 0.0, -1.0, 0.0, 0.0, 1.0);
        let g = Poly2::from_terms(&[(0, 0, 1.0), (1, 1, 0.5), (0, 4, 2.0)]).unwrap();
        for delta in [0.05f64, 0.3, 0.7] {
            let (s, c) = (delta.sin(), delta.cos());
            let (p1, p2, apex) = (Point::new(s, c), Point::new(-s, c), Point::new(0.0, 2.0));
            let thin = thin_chord_region(&g, &f, p1, p2, apex).unwrap();
            let closed = ellipse_segment(&g, 1.0, 1.0, p1, p2, ChordSide::Right, &TRIG_TABLE);
            assert!(close(thin, closed, 1e-9), "{delta}: {thin} {closed}");
        }
        // The chord region of a nearly flat arc is the thin segment area 2δ³/3 to leading order.
        let delta = 1e-3f64;
        let (s, c) = (delta.sin(), delta.cos());
        let area = thin_chord_region(&Poly2::constant(1.0), &f, Point::new(s, c), Point::new(-s, c), Point::new(0.0, 2.0)).unwrap();
        let exact = 2.0 * delta.powi(3) / 3.0 - 2.0 * delta.powi(5) / 15.0 + 4.0 * delta.powi(7) / 315.0;
        assert!(close(area, exact, 1e-12), "{area} {exact}");
    }

    fn tri(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Triangle {
        Triangle::new(a.into(), b.into(), c.into()).unwrap()
    }

    #[test]
    fn trig_moments() {
        assert!(close(trig_moment(0, 0), 2.0 * PI, 1e-15));
        assert_eq!(trig_moment(1, 0), 0.0);
        assert!(close(trig_moment(2, 2), PI / 4.0, 1e-15));
        for i in 0..=6 {
            for j in 0..=(6 - i) {
                let full = TRIG_TABLE.full_period(i, j);
                let arc = TRIG_TABLE.arc_moment(i, j, 0.3, 2.0 * PI);
                assert!((full - trig_moment(i, j)).abs() < 1e-14, "{i} {j}");
                assert!((arc - trig_moment(i, j)).abs() < 1e-14, "{i} {j}");
            }
        }
    }

    #[test]
    fn arc_moment_matches_quadrature() {
        let (a, b) = (0.4, 1.9);
        for i in 0..=4 {
            for j in 0..=(4 - i) {
                let n = 20000;
                let h = (b - a) / n as f64;
                let mut s = 0.0;
                for k in 0..n {
                    let th = a + (k as f64 + 0.5) * h;
                    s += th.cos().powi(i as i32) * th.sin().powi(j as i32);
                }
                s *= h;
                let v = TRIG_TABLE.arc_moment(i, j, 0.5 * (a + b), b - a);
                assert!((v - s).abs() < 1e-8, "{i} {j}: {v} vs {s}");
            }
        }
    }

    #[test]
    fn ellipse_interior_examples() {
        let unit = quad(1.0, 0.0, 1.0, 0.0, 0.0, -1.0);
        assert!(close(ellipse_interior_integral(&Poly2::constant(1.0), &unit).unwrap(), PI, 1e-15));
        assert!(close(ellipse_interior_integral(&Poly2::monomial(2, 0, 1.0), &unit).unwrap(), PI / 4.0, 1e-15));
        let e = quad(1.0 / 9.0, 0.0, 0.25, 0.0, 0.0, -1.0);
        assert!(close(ellipse_interior_integral(&Poly2::constant(1.0), &e).unwrap(), 6.0 * PI, 1e-15));
    }

    #[test]
    fn position_examples() {
        let unit = quad(1.0, 0.0, 1.0, 0.0, 0.0, -1.0);
        let p = |t| ellipse_triangle_position(&unit, &t).unwrap();
        assert_eq!(p(tri((-0.1, -0.1), (0.1, -0.1), (0.0, 0.1))), EllipsePosition::TriangleInsideEllipse);
        assert_eq!(p(tri((-5.0, -5.0), (5.0, -5.0), (0.0, 7.0))), EllipsePosition::EllipseInsideTriangle);
        assert_eq!(p(tri((2.0, 0.0), (3.0, 0.0), (2.0, 1.0))), EllipsePosition::Disjoint);
    }

    fn circle_region(p1: (f64, f64), p2: (f64, f64), side: ChordSide) -> ChordRegion {
        ChordRegion { form: StandardForm::Ellipse { a: 1.0, b: 1.0 }, p1: p1.into(), p2: p2.into(), side }
    }

    #[test]
    fn circle_segment_examples() {
        let one = Poly2::constant(1.0);
        let minor = circle_segment_integral(&one, &circle_region((1.0, 0.0), (0.0, 1.0), ChordSide::Right)).unwrap();
        assert!(close(minor, PI / 4.0 - 0.5, 1e-14));
        let half = circle_segment_integral(&one, &circle_region((-1.0, 0.0), (1.0, 0.0), ChordSide::Right)).unwrap();
        assert!(close(half, PI / 2.0, 1e-15));
        let upper = circle_segment_integral(&Poly2::y(), &circle_region((-1.0, 0.0), (1.0, 0.0), ChordSide::Left)).unwrap();
        assert!(close(upper, 2.0 / 3.0, 1e-15));
        let major = circle_segment_integral(&one, &circle_region((1.0, 0.0), (0.0, 1.0), ChordSide::Left)).unwrap();
        assert!(close(minor + major, PI, 1e-15));
        let reversed = circle_segment_integral(&one, &circle_region((0.0, 1.0), (1.0, 0.0), ChordSide::Left)).unwrap();
        assert!(close(reversed, minor, 1e-15));
        assert!(circle_segment_integral(&one, &circle_region((1.0, 0.0), (1.0, 0.0), ChordSide::Right)).is_err());
    }

    #[test]
    fn parabola_chord_examples() {
        let form = StandardForm::Parabola { c: 1.0 };
        let r = |p1: (f64, f64), p2: (f64, f64)| ChordRegion { form, p1: p1.into(), p2: p2.into(), side: ChordSide::Right };
        let one = Poly2::constant(1.0);
        assert!(close(parabola_chord_integral(&one, &r((-1.0, 1.0), (1.0, 1.0))).unwrap(), 4.0 / 3.0, 1e-15));
        assert!(close(parabola_chord_integral(&one, &r((0.0, 0.0), (1.0, 1.0))).unwrap(), 1.0 / 6.0, 1e-15));
        assert!(parabola_chord_integral(&Poly2::x(), &r((-1.0, 1.0), (1.0, 1.0))).unwrap().abs() < 1e-16);
        // ∬ y over {x² ≤ y ≤ 1} = ∫ (1 − x⁴)/2 = 4/5.
        assert!(close(parabola_chord_integral(&Poly2::y(), &r((-1.0, 1.0), (1.0, 1.0))).unwrap(), 0.8, 1e-15));
    }

    #[test]
    fn hyperbola_chord_examples() {
        let form = StandardForm::Hyperbola { k: 1.0 };
        let r = |p1: (f64, f64), p2: (f64, f64)| ChordRegion { form, p1: p1.into(), p2: p2.into(), side: ChordSide::Right };
        let one = Poly2::constant(1.0);
        let want = 0.75 - 2.0f64.ln();
        let v = hyperbola_chord_integral(&one, &r((1.0, 1.0), (2.0, 0.5))).unwrap();
        assert!(close(v, want, 1e-14), "{v} vs {want}");
        let w = hyperbola_chord_integral(&one, &r((-2.0, -0.5), (-1.0, -1.0))).unwrap();
        assert!(close(w, want, 1e-14));
        assert!(hyperbola_chord_integral(&one, &r((1.0, 1.0), (1.0, 1.0))).is_err());
        assert!(hyperbola_chord_integral(&one, &r((1.0, 1.0), (-1.0, -1.0))).is_err());
        // ∬ x y over the same region: ∫₁² x (l² − x⁻²)/2 dx with l = (3 − x)/2.
        let n = 200000;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for k in 0..n {
            let x = 1.0 + (k as f64 + 0.5) * h;
            let l = (3.0 - x) / 2.0;
            s += x * (l * l - 1.0 / (x * x)) / 2.0;
        }
        s *= h;
        let v = hyperbola_chord_integral(&Poly2::monomial(1, 1, 1.0), &r((1.0, 1.0), (2.0, 0.5))).unwrap();
        assert!((v - s).abs() < 1e-10, "{v} vs {s}");
    }

    #[test]
    fn free_triangle_examples() {
        let one = Poly2::constant(1.0);
        let outside = quad(1.0, 0.0, 1.0, 0.0, 0.0, -1.0);
        let t = tri((2.0, 0.0), (3.0, 0.0), (2.0, 1.0));
        let v = integrate_free_triangle(&one, &outside, &t, FreeCase::AllSidesFree { vertex_hits: 0 }).unwrap();
        assert!(close(v, 0.5, 1e-15));

        let inside = quad(-1.0, 0.0, -1.0, 0.0, 0.0, 1.0);
        let t = tri((1.0, 0.0), (0.0, 1.0), (1.0, 1.0));
        let v = integrate_free_triangle(&one, &inside, &t, FreeCase::AllSidesFree { vertex_hits: 2 }).unwrap();
        assert!(close(v, PI / 4.0 - 0.5, 1e-13), "{v}");

        let t = tri((-5.0, -5.0), (5.0, -5.0), (0.0, 7.0));
        let v = integrate_free_triangle(&one, &inside, &t, FreeCase::AllSidesFree { vertex_hits: 0 }).unwrap();
        assert!(close(v, PI, 1e-15));
        let v = integrate_free_triangle(&one, &outside, &t, FreeCase::AllSidesFree { vertex_hits: 0 }).unwrap();
        assert!(close(v, t.area() - PI, 1e-15));
    }

    #[test]
    fn degenerate_examples() {
        let one = Poly2::constant(1.0);
        let t = tri((-1.0, 3.0), (-1.0, -1.0), (3.0, -1.0));
        assert_eq!(degenerate_integral(&one, &quad(-1.0, 0.0, -1.0, 0.0, 0.0, -1.0), &t).unwrap(), 0.0);
        assert!(close(degenerate_integral(&one, &quad(1.0, 0.0, 0.0, 0.0, 0.0, 0.0), &t).unwrap(), t.area(), 1e-15));
        // xy ≥ 0 on the triangle with legs on x = −1 and y = −1: the third
        // quadrant square [−1,0]² plus the first-quadrant corner triangle
        // with legs 2 (hypotenuse x + y = 2).
        let v = degenerate_integral(&one, &quad(0.0, 1.0, 0.0, 0.0, 0.0, 0.0), &t).unwrap();
        assert!(close(v, 1.0 + 2.0, 1e-15), "{v}");
        // Strip 0 < x < 1 removed from a right triangle.
        let t = tri((-1.0, 0.0), (2.0, 0.0), (-1.0, 3.0));
        let v = degenerate_integral(&one, &quad(1.0, 0.0, 0.0, -1.0, 0.0, 0.0), &t).unwrap();
        // Strip piece: ∫₀¹ (2 − x) dx = 3/2.
        assert!(close(v, t.area() - 1.5, 1e-15), "{v}");
        let w = degenerate_integral(&one, &quad(-1.0, 0.0, 0.0, 1.0, 0.0, 0.0), &t).unwrap();
        assert!(close(w, 1.5, 1e-15));
    }

    #[test]
    fn inclusion_exclusion_identity_for_crossing_lines() {
        // Four quadrant pieces α (II), β (III), γ (IV), δ (I) of a triangle
        // around the origin, with α + γ = total − (β+γ) − (δ+γ) + 2γ.
        let g = Poly2::quadratic(0.3, -0.2, 1.0, 0.5, 0.1, 2.0);
        let t = tri((-1.1, 0.3), (0.7, 0.5), (0.4, -0.8));
        let total = triangle_integral(&g, &t);
        let part = |f: Conic| degenerate_integral(&g, &f, &t).unwrap();
        let alpha_gamma = part(quad(0.0, -1.0, 0.0, 0.0, 0.0, 0.0));
        let beta_gamma = part(quad(0.0, 0.0, 0.0, 0.0, -1.0, 0.0));
        let delta_gamma = part(quad(0.0, 0.0, 0.0, 1.0, 0.0, 0.0));
        let gamma = {
            let tri_pts = t.vertices().to_vec();
            let q = clip(&clip(&tri_pts, HalfPlane { n: Point::new(1.0, 0.0), m: 0.0 }), HalfPlane { n: Point::new(0.0, -1.0), m: 0.0 });
            polygon_integral(&g, &q)
        };
        let rhs = total - beta_gamma - delta_gamma + 2.0 * gamma;
        assert!((alpha_gamma - rhs).abs() < 1e-14 * total.abs(), "{alpha_gamma} vs {rhs}");
    }

    #[test]
    fn chord_pullback_is_rigid() {
        let m = AffineMap2::translation(Point::new(0.3, -0.2)).after(&AffineMap2::rotation(0.7));
        let f = Poly2::quadratic(-1.0, 0.0, -1.0, 0.0, 0.0, 1.0).compose_affine(&m.inverse());
        let c = Conic::new(f).unwrap();
        let t = tri((1.0, 0.0), (0.0, 1.0), (1.0, 1.0));
        let t = Triangle::new(m.apply(t.vertex(0)), m.apply(t.vertex(1)), m.apply(t.vertex(2))).unwrap();
        let v = integrate_free_triangle(&Poly2::constant(1.0), &c, &t, FreeCase::AllSidesFree { vertex_hits: 2 }).unwrap();
        assert!(close(v, PI / 4.0 - 0.5, 1e-12), "{v}");
    }
}
