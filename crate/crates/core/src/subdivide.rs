//! Cutting a triangle into free pieces with respect to a nondegenerate conic.
//!
//! A segment is *free* when the conic meets it at most at its endpoints. A
//! triangle is free when all three sides are free, or when the only contact
//! between its boundary and the conic is a single non-vertex point. A
//! triangle is *almost free* when exactly one side is not free and that side
//! carries exactly one interior hit.
//!
//! [`decompose`] classifies the input, applies the matching construction
//! (no free side, one free side, two free sides), resolves every almost-free
//! piece, and certifies the result before returning it.

use alloc::vec::Vec;

use crate::conic::{point_in_triangle, Conic, Location, SegmentHit};
use crate::error::{Error, Result};
use crate::geom::{Point, Triangle};

/// The free configurations, which select the base-case formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FreeCase {
    /// Every side is free; the conic passes through `vertex_hits` vertices.
    AllSidesFree { vertex_hits: u8 },
    /// The conic touches the boundary at one non-vertex point only.
    OneSideTouch,
}

impl FreeCase {
    pub fn label(self) -> &'static str {
        match self {
            FreeCase::AllSidesFree { vertex_hits: 0 } => "free-0",
            FreeCase::AllSidesFree { vertex_hits: 1 } => "free-1",
            FreeCase::AllSidesFree { vertex_hits: 2 } => "free-2",
            FreeCase::AllSidesFree { .. } => "free-3",
            FreeCase::OneSideTouch => "touch",
        }
    }
}

/// Result of the freedom test.
#[derive(Debug, Clone, PartialEq)]
pub enum FreeStatus {
    Free(FreeCase),
    /// Side `side` (from vertex `side` to `side + 1`) has the single interior `hit`.
    AlmostFree {
        side: usize,
        hit: SegmentHit,
    },
    /// Interior hits per side.
    NotFree {
        hits: [Vec<SegmentHit>; 3],
    },
}

/// Which construction produced a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// The input triangle was already free.
    Input,
    /// Corner or fan piece from the construction for no free side.
    NoFreeSideCut,
    /// Piece from the construction for exactly one free side.
    OneFreeSideCut,
    /// Piece from the construction for exactly two free sides.
    TwoFreeSidesCut,
    /// Half of an almost-free triangle split through its interior hit.
    AlmostFreeSplit,
    /// Quarter of an almost-free triangle split through a tangency point.
    TangentPointCut,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Input => "input",
            Provenance::NoFreeSideCut => "no-free-side",
            Provenance::OneFreeSideCut => "one-free-side",
            Provenance::TwoFreeSidesCut => "two-free-sides",
            Provenance::AlmostFreeSplit => "almost-free-split",
            Provenance::TangentPointCut => "tangent-point",
        }
    }
}

/// One certified free piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub triangle: Triangle,
    pub case: FreeCase,
    pub provenance: Provenance,
}

/// Certified decomposition of `original` into free pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTrace {
    pub original: Triangle,
    pub pieces: Vec<Piece>,
    /// Piece edges that are not part of the original boundary, deduplicated.
    pub internal_edges: Vec<(Point, Point)>,
}

/// Upper bound on the number of free pieces.
pub const MAX_PIECES: usize = 11;

/// Vertex flags and interior hits per side.
#[derive(Debug, Clone)]
pub(crate) struct Analysis {
    pub vertex_on: [bool; 3],
    pub interior: [Vec<SegmentHit>; 3],
}

impl Analysis {
    pub(crate) fn vertex_hits(&self) -> u8 {
        self.vertex_on.iter().filter(|&&b| b).count() as u8
    }

    fn status(&self) -> FreeStatus {
        let counts = [0, 1, 2].map(|i| self.interior[i].len());
        let total: usize = counts.iter().sum();
        if total == 0 {
            return FreeStatus::Free(FreeCase::AllSidesFree { vertex_hits: self.vertex_hits() });
        }
        if total == 1 && self.vertex_hits() == 0 {
            return FreeStatus::Free(FreeCase::OneSideTouch);
        }
        if total == 1 {
            let side = counts.iter().position(|&n| n == 1).unwrap();
            return FreeStatus::AlmostFree { side, hit: self.interior[side][0] };
        }
        FreeStatus::NotFree { hits: self.interior.clone() }
    }
}

/// Per-side hits with vertex decisions shared by adjacent sides.
pub(crate) fn analyze(c: &Conic, t: &Triangle) -> Analysis {
    let len = t.longest_edge();
    let on = [0, 1, 2].map(|i| c.is_on_curve(t.vertex(i), len));
    let interior = [0, 1, 2].map(|i| {
        let (p, q) = t.side(i);
        c.side_hits(p, q, len, [on[i], on[(i + 1) % 3]]).into_iter().filter(|h| !h.at_vertex).collect::<Vec<_>>()
    });
    Analysis { vertex_on: on, interior }
}

/// Freedom status of `t` with respect to `c`.
pub fn triangle_freedom(c: &Conic, t: &Triangle) -> FreeStatus {
    analyze(c, t).status()
}

type Cut = Vec<(Triangle, Provenance)>;

fn push(out: &mut Cut, a: Point, b: Point, c: Point, prov: Provenance) {
    if let Some(t) = Triangle::try_new(a, b, c) {
        out.push((t, prov));
    }
}

/// Fan over a convex chain of conic points; zero-area fans are skipped.
fn fan(out: &mut Cut, pts: &[Point], prov: Provenance) {
    for k in 1..pts.len().saturating_sub(1) {
        push(out, pts[0], pts[k], pts[k + 1], prov);
    }
}

fn failure(t: &Triangle, reason: &'static str) -> Error {
    Error::SubdivisionFailure { triangle: *t, reason }
}

fn require_nondegenerate(c: &Conic) -> Result<()> {
    if c.class().is_nondegenerate() {
        Ok(())
    } else {
        Err(Error::WrongConicClass("subdivision needs an ellipse, parabola or hyperbola"))
    }
}

fn free_sides(a: &Analysis) -> usize {
    a.interior.iter().filter(|h| h.is_empty()).count()
}

fn cut_none_free(t: &Triangle, an: &Analysis) -> Cut {
    let mut out = Cut::new();
    let hits = |i: usize| an.interior[i % 3].iter().map(|h| h.point);
    for i in 0..3 {
        let prev = an.interior[(i + 2) % 3].last().unwrap().point;
        let next = an.interior[i].first().unwrap().point;
        push(&mut out, prev, t.vertex(i), next, Provenance::NoFreeSideCut);
    }
    let ring: Vec<Point> = (0..3).flat_map(hits).collect();
    fan(&mut out, &ring, Provenance::NoFreeSideCut);
    out
}

fn cut_one_free(t: &Triangle, an: &Analysis) -> Cut {
    let i = an.interior.iter().position(|h| h.is_empty()).unwrap();
    let (a, b, c) = (t.vertex(i), t.vertex(i + 1), t.vertex(i + 2));
    let q: Vec<Point> = an.interior[(i + 1) % 3].iter().map(|h| h.point).collect();
    let r: Vec<Point> = an.interior[(i + 2) % 3].iter().map(|h| h.point).collect();
    let (q1, q_last) = (q[0], *q.last().unwrap());
    let (r_first, r_last) = (r[0], *r.last().unwrap());
    let prov = Provenance::OneFreeSideCut;
    let mut out = Cut::new();
    push(&mut out, q_last, c, r_first, prov);
    let chain: Vec<Point> = q.iter().chain(r.iter()).copied().collect();
    fan(&mut out, &chain, prov);
    push(&mut out, b, q1, r_last, prov);
    push(&mut out, a, b, r_last, prov);
    out
}

fn cut_two_free(c: &Conic, t: &Triangle, an: &Analysis) -> Cut {
    let i = an.interior.iter().position(|h| !h.is_empty()).unwrap();
    let (a, b, apex) = (t.vertex(i), t.vertex(i + 1), t.vertex(i + 2));
    let hits = &an.interior[i];
    let prov = Provenance::TwoFreeSidesCut;
    let mut out = Cut::new();
    if hits.len() == 1 {
        push(&mut out, a, b, apex, prov);
        return out;
    }
    let (p1, p2) = (hits[0].point, hits[1].point);
    push(&mut out, a, p1, apex, prov);
    push(&mut out, p2, b, apex, prov);
    let x1 = interior_hit(c, p1, apex);
    let x2 = interior_hit(c, p2, apex);
    match (x1, x2) {
        (Some(x1), Some(_)) => {
            push(&mut out, p1, p2, x1, prov);
            push(&mut out, x1, p2, apex, prov);
        }
        _ => push(&mut out, p1, p2, apex, prov),
    }
    out
}

/// Interior hit of a segment whose start lies on the conic, if any.
fn interior_hit(c: &Conic, from: Point, to: Point) -> Option<Point> {
    let len = (to - from).norm();
    let on = [true, c.is_on_curve(to, len)];
    c.side_hits(from, to, len, on).into_iter().find(|h| !h.at_vertex).map(|h| h.point)
}

/// Splits an almost-free triangle into free pieces.
fn resolve(c: &Conic, t: &Triangle, an: &Analysis, side: usize, hit: &SegmentHit) -> Result<Cut> {
    let mut out = Cut::new();
    if an.vertex_hits() == 0 {
        out.push((*t, Provenance::Input));
        return Ok(out);
    }
    let (a, b, apex) = (t.vertex(side), t.vertex(side + 1), t.vertex(side + 2));
    let d = hit.point;
    let split = |out: &mut Cut| {
        push(out, a, d, apex, Provenance::AlmostFreeSplit);
        push(out, d, b, apex, Provenance::AlmostFreeSplit);
    };
    if an.vertex_on[(side + 2) % 3] || c.segment_is_free(apex, d) {
        split(&mut out);
        return Ok(out);
    }
    let (on_v, off_v) = if an.vertex_on[side] { (a, b) } else { (b, a) };
    let mut candidates = c.tangency_interior_points(d, off_v, apex).unwrap_or_default();
    candidates.extend(ray_candidates(c, t, side, d, on_v));
    for p in candidates {
        if point_in_triangle(p, t, c.tolerances().barycentric) != Location::Inside {
            continue;
        }
        if !(c.segment_is_free(off_v, p) && c.segment_is_free(apex, p) && c.segment_is_free(on_v, p) && c.segment_is_free(d, p)) {
            continue;
        }
        let mut pieces = Cut::new();
        for (u, v) in [(on_v, d), (d, off_v), (off_v, apex), (apex, on_v)] {
            push(&mut pieces, u, v, p, Provenance::TangentPointCut);
        }
        if pieces.iter().all(|(q, _)| matches!(analyze(c, q).status(), FreeStatus::Free(_))) {
            return Ok(pieces);
        }
    }
    Err(failure(t, "no interior conic point gives four free pieces"))
}

/// Conic points reached by walking from the chord between `d` and the
/// on-conic vertex along the inward normal of the side.
fn ray_candidates(c: &Conic, t: &Triangle, side: usize, d: Point, on_v: Point) -> Vec<Point> {
    let (a, b) = t.side(side);
    let apex = t.vertex(side + 2);
    let mut n = (b - a).perp();
    if n.dot(apex - a) < 0.0 {
        n = -n;
    }
    let mut out = Vec::new();
    for frac in [0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875] {
        let q = d.lerp(on_v, frac);
        if let Some(s) = c.line_params(q, n).into_iter().find(|&s| s > 0.0) {
            out.push(q + n * s);
        }
    }
    out
}

fn pieces_for(c: &Conic, t: &Triangle, an: &Analysis) -> Result<Cut> {
    match an.status() {
        FreeStatus::Free(_) => Ok(alloc::vec![(*t, Provenance::Input)]),
        FreeStatus::AlmostFree { side, hit } => resolve(c, t, an, side, &hit),
        FreeStatus::NotFree { .. } => Ok(match free_sides(an) {
            0 => cut_none_free(t, an),
            1 => cut_one_free(t, an),
            _ => cut_two_free(c, t, an),
        }),
    }
}

fn construct(c: &Conic, t: &Triangle) -> Result<Cut> {
    let an = analyze(c, t);
    let first = pieces_for(c, t, &an)?;
    let mut out = Cut::new();
    for (piece, prov) in first {
        let pa = analyze(c, &piece);
        match pa.status() {
            FreeStatus::Free(_) => out.push((piece, prov)),
            FreeStatus::AlmostFree { side, hit } => out.extend(resolve(c, &piece, &pa, side, &hit)?),
            FreeStatus::NotFree { .. } => return Err(failure(&piece, "cut produced a piece that is not free")),
        }
    }
    Ok(out)
}

/// Checks that `p` lies on the boundary of `t` (within rounding).
fn on_boundary(t: &Triangle, p: Point, q: Point) -> bool {
    let scale = t.longest_edge();
    (0..3).any(|i| {
        let (a, b) = t.side(i);
        let e = b - a;
        let tol = 1e-12 * scale * e.norm();
        e.cross(p - a).abs() <= tol && e.cross(q - a).abs() <= tol
    })
}

fn certify(c: &Conic, t: &Triangle, cut: Cut) -> Result<DecompositionTrace> {
    if cut.len() > MAX_PIECES {
        return Err(failure(t, "more than eleven pieces"));
    }
    let mut pieces = Vec::with_capacity(cut.len());
    let mut area = crate::math::CompensatedSum::default();
    for (tri, provenance) in cut {
        let case = match triangle_freedom(c, &tri) {
            FreeStatus::Free(case) => case,
            _ => return Err(failure(&tri, "piece failed the freedom check")),
        };
        area.add(tri.area());
        pieces.push(Piece { triangle: tri, case, provenance });
    }
    if (area.value() - t.area()).abs() > 1e-12 * t.area() {
        return Err(failure(t, "pieces do not tile the triangle"));
    }
    let mut internal_edges: Vec<(Point, Point)> = Vec::new();
    for piece in &pieces {
        // Same vertex decisions as the freedom check, so slivers agree with it.
        let an = analyze(c, &piece.triangle);
        for i in 0..3 {
            let (p, q) = piece.triangle.side(i);
            if on_boundary(t, p, q) {
                continue;
            }
            if internal_edges.iter().any(|&(u, v)| (u == p && v == q) || (u == q && v == p)) {
                continue;
            }
            let touch_only = piece.case == FreeCase::OneSideTouch || an.interior[i].iter().all(|h| h.multiplicity == 2);
            if !touch_only {
                return Err(failure(&piece.triangle, "internal edge is not free"));
            }
            internal_edges.push((p, q));
        }
    }
    Ok(DecompositionTrace { original: *t, pieces, internal_edges })
}

/// Cuts `t` into at most eleven certified free pieces.
pub fn decompose(c: &Conic, t: &Triangle) -> Result<DecompositionTrace> {
    require_nondegenerate(c)?;
    let cut = construct(c, t)?;
    certify(c, t, cut)
}

/// The construction for a triangle none of whose sides is free.
pub fn cut_no_free_sides(c: &Conic, t: &Triangle) -> Result<Vec<Triangle>> {
    require_nondegenerate(c)?;
    let an = analyze(c, t);
    if free_sides(&an) != 0 {
        return Err(Error::Internal("triangle has a free side"));
    }
    Ok(cut_none_free(t, &an).into_iter().map(|(t, _)| t).collect())
}

/// The construction for a triangle with exactly one free side; pieces are
/// free or almost free.
pub fn cut_one_free_side(c: &Conic, t: &Triangle) -> Result<Vec<Triangle>> {
    require_nondegenerate(c)?;
    let an = analyze(c, t);
    if free_sides(&an) != 1 {
        return Err(Error::Internal("triangle does not have exactly one free side"));
    }
    Ok(cut_one_free(t, &an).into_iter().map(|(t, _)| t).collect())
}

/// The construction for a triangle with exactly two free sides; pieces are
/// free or almost free.
pub fn cut_two_free_sides(c: &Conic, t: &Triangle) -> Result<Vec<Triangle>> {
    require_nondegenerate(c)?;
    let an = analyze(c, t);
    if free_sides(&an) != 2 {
        return Err(Error::Internal("triangle does not have exactly two free sides"));
    }
    Ok(cut_two_free(c, t, &an).into_iter().map(|(t, _)| t).collect())
}

/// Cuts an almost-free triangle into at most four free pieces.
pub fn resolve_almost_free(c: &Conic, t: &Triangle) -> Result<Vec<Triangle>> {
    require_nondegenerate(c)?;
    let an = analyze(c, t);
    match an.status() {
        FreeStatus::AlmostFree { side, hit } => Ok(resolve(c, t, &an, side, &hit)?.into_iter().map(|(t, _)| t).collect()),
        FreeStatus::Free(_) => Ok(alloc::vec![*t]),
        FreeStatus::NotFree { .. } => Err(Error::Internal("triangle is not almost free")),
    }
}
