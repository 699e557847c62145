//! Top-level integration: classify, decompose, integrate each free piece.

use alloc::vec::Vec;

use crate::basecase::{degenerate_pieces, free_triangle_with, TrigTable, TRIG_TABLE};
use crate::conic::{Conic, ConicClass, Tolerances};
use crate::error::{Error, Result};
use crate::geom::{Point, Triangle};
use crate::math::{abs, CompensatedSum};
use crate::poly::{poly_mul, triangle_integral, Poly2};
use crate::subdivide::{decompose, FreeCase, Provenance};

/// Ratio of operand size to result size above which a difference is flagged.
pub const CANCELLATION_RATIO: f64 = 1e3;

static CORRUPTED_TRIG_TABLE: TrigTable = TrigTable::corrupted();

/// Conditions worth reporting alongside a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// A value was formed as `total − part` with operands much larger than it.
    Cancellation { total: f64, part: f64, result: f64 },
    /// A classification test landed within a factor of ten of its threshold.
    NearThreshold { class: ConicClass, margin: f64 },
}

/// How a piece was integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceKind {
    /// A free triangle integrated by its base case.
    Free(FreeCase),
    /// A convex piece of a degenerate region; the label names the layout.
    Clipped(&'static str),
}

/// One piece of the result and its contribution to the value.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceRecord {
    /// Vertices in counterclockwise order (three for free pieces).
    pub polygon: Vec<Point>,
    pub kind: PieceKind,
    pub provenance: Option<Provenance>,
    pub contribution: f64,
}

/// Value of `∬_{T ∩ {f ≥ 0}} g` with the pieces that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub class: ConicClass,
    pub pieces: Vec<PieceRecord>,
    pub warnings: Vec<Warning>,
}

/// Two-sided constraint `f_a ≤ −p/α ≤ f_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    pub p: Poly2,
    pub alpha: f64,
    pub fa: f64,
    pub fb: f64,
}

impl BandSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.alpha.is_finite() && self.fa.is_finite() && self.fb.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(d) = self.p.degree() {
            if d > 2 {
                return Err(Error::DegreeOverflow { degree: d, cap: 2 });
            }
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidBand("alpha must be positive"));
        }
        if self.fa > self.fb {
            return Err(Error::InvalidBand("fa must not exceed fb"));
        }
        Ok(())
    }

    /// `f₁ = −p/α − f_a` and `f₂ = f_b + p/α`.
    pub fn split(&self) -> (Poly2, Poly2) {
        let q = self.p * (1.0 / self.alpha);
        (-q - Poly2::constant(self.fa), q + Poly2::constant(self.fb))
    }
}

/// Integration entry point carrying the numerical tolerances.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    tol: Tolerances,
    trig: &'static TrigTable,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::new()
    }
}

impl Integrator {
    pub fn new() -> Self {
        Integrator { tol: Tolerances::default(), trig: &TRIG_TABLE }
    }

    pub fn with_tolerances(tol: Tolerances) -> Result<Self> {
        if !tol.is_valid() {
            return Err(Error::InvalidTolerance);
        }
        Ok(Integrator { tol, trig: &TRIG_TABLE })
    }

    /// Uses a wrong trigonometric table, so that test drivers can check that
    /// failures are reported.
    #[doc(hidden)]
    pub fn with_corrupted_trig_table(self) -> Self {
        Integrator { trig: &CORRUPTED_TRIG_TABLE, ..self }
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn conic(&self, f: &Poly2) -> Result<Conic> {
        Conic::with_tolerances(*f, self.tol)
    }

    /// `∬_{t ∩ {f ≥ 0}} g`.
    pub fn integrate_region(&self, g: &Poly2, f: &Poly2, t: &Triangle) -> Result<IntegralResult> {
        if !g.is_finite() {
            return Err(Error::NonFinite);
        }
        let c = self.conic(f)?;
        let mut warnings = Vec::new();
        if c.near_threshold() {
            warnings.push(Warning::NearThreshold { class: c.class(), margin: c.classification_margin() });
        }
        let mut sum = CompensatedSum::default();
        let mut pieces = Vec::new();
        if c.class().is_nondegenerate() {
            let trace = decompose(&c, t)?;
            for piece in &trace.pieces {
                let pv = free_triangle_with(g, &c, &piece.triangle, piece.case, self.trig)?;
                if let Some((total, part)) = pv.difference_of {
                    if abs(total).max(abs(part)) > CANCELLATION_RATIO * abs(pv.value) {
                        warnings.push(Warning::Cancellation { total, part, result: pv.value });
                    }
                }
                sum.add(pv.value);
                pieces.push(PieceRecord {
                    polygon: piece.triangle.vertices().to_vec(),
                    kind: PieceKind::Free(piece.case),
                    provenance: Some(piece.provenance),
                    contribution: pv.value,
                });
            }
        } else {
            let r = degenerate_pieces(g, &c, t)?;
            for p in r.pieces {
                sum.add(p.value);
                pieces.push(PieceRecord {
                    polygon: p.polygon,
                    kind: PieceKind::Clipped(r.layout),
                    provenance: None,
                    contribution: p.value,
                });
            }
        }
        Ok(IntegralResult { value: sum.value(), class: c.class(), pieces, warnings })
    }

    /// `∬_{t ∩ {f_a ≤ −p/α ≤ f_b}} v` as `I(f₁) + I(f₂) − ∬_t v`, valid
    /// because `{f₂ < 0} ⊆ {f₁ ≥ 0}`.
    pub fn integrate_band(&self, v: &Poly2, band: &BandSpec, t: &Triangle) -> Result<IntegralResult> {
        band.validate()?;
        let (f1, f2) = band.split();
        let r1 = self.integrate_region(v, &f1, t)?;
        let r2 = self.integrate_region(v, &f2, t)?;
        let whole = triangle_integral(v, t);
        let mut sum = CompensatedSum::default();
        sum.add(r1.value);
        sum.add(r2.value);
        sum.add(-whole);
        let value = sum.value();
        let mut warnings = r1.warnings;
        warnings.extend(r2.warnings);
        let big = abs(r1.value).max(abs(r2.value)).max(abs(whole));
        if big > CANCELLATION_RATIO * abs(value) {
            warnings.push(Warning::Cancellation { total: r1.value + r2.value, part: whole, result: value });
        }
        let mut pieces = r1.pieces;
        pieces.extend(r2.pieces);
        Ok(IntegralResult { value, class: r1.class, pieces, warnings })
    }
}

/// [`Integrator::integrate_region`] with default tolerances.
pub fn integrate_region(g: &Poly2, f: &Poly2, t: &Triangle) -> Result<IntegralResult> {
    Integrator::new().integrate_region(g, f, t)
}

/// [`Integrator::integrate_band`] with default tolerances, value only.
pub fn integrate_band(v: &Poly2, band: &BandSpec, t: &Triangle) -> Result<f64> {
    Integrator::new().integrate_band(v, band, t).map(|r| r.value)
}

/// The integrand `φ₁ · φ₂` for two quadratic shape functions.
pub fn projection_integrand(phi1: &Poly2, phi2: &Poly2) -> Result<Poly2> {
    poly_mul(phi1, phi2)
}
