//! Exact integration of polynomials over the part of a triangle where a
//! quadratic is nonnegative.
//!
//! Given a triangle `T`, a polynomial `f` of degree at most two and an
//! integrand `g` of degree at most four, [`integrate_region`] computes
//!
//! ```text
//!     ∬_{T ∩ {f ≥ 0}} g(x, y) dx dy
//! ```
//!
//! in closed form (up to floating-point rounding). The triangle is cut into
//! *free* pieces, triangles whose boundary meets the conic `f = 0` only in a
//! few controlled ways, and each piece is integrated with an elementary
//! formula: the full-triangle moment formula, polar moments of an ellipse,
//! or a chord/arc region in a standard conic frame. Degenerate conics
//! (line pairs, points, empty sets) are handled by half-plane clipping.
//!
//! The crate is `no_std` and only needs `alloc`. An independent adaptive
//! integrator with a certified error bound lives in [`oracle`] and is used
//! to cross-check the engine.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basecase;
pub mod conic;
pub mod engine;
mod error;
mod geom;
mod math;
pub mod oracle;
pub mod poly;
pub mod subdivide;

pub use conic::{Conic, ConicClass, StandardForm, Tolerances};
pub use engine::{
    integrate_band, integrate_region, projection_integrand, BandSpec, IntegralResult, Integrator, PieceKind, PieceRecord, Warning,
};
pub use error::{Error, Result};
pub use geom::{Point, Triangle};
pub use oracle::{oracle_integrate, OracleEstimate};
pub use poly::{AffineMap2, Poly2};
pub use subdivide::{decompose, DecompositionTrace, FreeCase, FreeStatus, Provenance};
