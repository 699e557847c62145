//! Job files: one JSON document naming a triangle, a region and an integrand.
//!
//! ```json
//! {
//!   "triangle": [[-3, -3], [3, -3], [0, 4]],
//!   "f": { "a20": -1, "a02": -1, "a00": 1 },
//!   "g": [[0, 0, 1]]
//! }
//! ```
//!
//! The region is `f ≥ 0` or a `band`; the integrand is `g` (terms
//! `[i, j, b]` for `b xⁱ yʲ`) or the product `phi1 · phi2`. Missing conic
//! coefficients are zero.

use std::fmt;

use serde::{Deserialize, Serialize};
use triconic::{projection_integrand, BandSpec, Point, Poly2, Triangle};

/// Coefficients of `a20 x² + a11 xy + a02 y² + a10 x + a01 y + a00`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quadratic {
    pub a20: f64,
    pub a11: f64,
    pub a02: f64,
    pub a10: f64,
    pub a01: f64,
    pub a00: f64,
}

impl Quadratic {
    pub fn poly(&self) -> Poly2 {
        Poly2::quadratic(self.a20, self.a11, self.a02, self.a10, self.a01, self.a00)
    }

    pub fn from_poly(p: &Poly2) -> Self {
        Quadratic { a20: p.coeff(2, 0), a11: p.coeff(1, 1), a02: p.coeff(0, 2), a10: p.coeff(1, 0), a01: p.coeff(0, 1), a00: p.coeff(0, 0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandFields {
    pub p: Quadratic,
    pub alpha: f64,
    pub fa: f64,
    pub fb: f64,
}

/// The document as written, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub triangle: [[f64; 2]; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Quadratic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<BandFields>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi1: Option<Quadratic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi2: Option<Quadratic>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Conic(Poly2),
    Band(BandSpec),
}

/// A validated job.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub file: JobFile,
    pub triangle: Triangle,
    pub region: Region,
    pub integrand: Poly2,
}

/// Parse or validation failure, with a location a user can act on.
#[derive(Debug, Clone, PartialEq)]
pub enum JobError {
    Syntax { line: usize, column: usize, message: String },
    Field { field: String, message: String },
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JobError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            JobError::Field { field, message } => write!(f, "field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for JobError {}

fn field(name: impl Into<String>, message: impl fmt::Display) -> JobError {
    JobError::Field { field: name.into(), message: message.to_string() }
}

impl Job {
    pub fn parse(text: &str) -> Result<Job, JobError> {
        let file: JobFile =
            serde_json::from_str(text).map_err(|e| JobError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
        Job::from_file(file)
    }

    pub fn from_file(file: JobFile) -> Result<Job, JobError> {
        let [a, b, c] = file.triangle.map(|[x, y]| Point::new(x, y));
        let triangle = Triangle::new(a, b, c).map_err(|e| field("triangle", e))?;
        let region = match (&file.f, &file.band) {
            (Some(q), None) => Region::Conic(q.poly()),
            (None, Some(b)) => {
                let band = BandSpec { p: b.p.poly(), alpha: b.alpha, fa: b.fa, fb: b.fb };
                band.validate().map_err(|e| field("band", e))?;
                Region::Band(band)
            }
            (Some(_), Some(_)) => return Err(field("f", "give either `f` or `band`, not both")),
            (None, None) => return Err(field("f", "one of `f` or `band` is required")),
        };
        let integrand = match (&file.g, &file.phi1, &file.phi2) {
            (Some(terms), None, None) => {
                for (k, &(i, j, _)) in terms.iter().enumerate() {
                    if i + j > triconic::poly::MAX_DEGREE {
                        return Err(field(format!("g[{k}]"), format!("degree {} exceeds 4", i + j)));
                    }
                }
                Poly2::from_terms(terms).map_err(|e| field("g", e))?
            }
            (None, Some(p1), Some(p2)) => projection_integrand(&p1.poly(), &p2.poly()).map_err(|e| field("phi1", e))?,
            (None, Some(_), None) => return Err(field("phi2", "`phi1` needs `phi2`")),
            (None, None, Some(_)) => return Err(field("phi1", "`phi2` needs `phi1`")),
            (Some(_), _, _) => return Err(field("g", "give either `g` or `phi1`/`phi2`, not both")),
            (None, None, None) => return Err(field("g", "one of `g` or `phi1`/`phi2` is required")),
        };
        Ok(Job { file, triangle, region, integrand })
    }

    /// Canonical JSON; re-parsing it yields an identical job.
    pub fn dump(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("job files serialize");
        s.push('\n');
        s
    }

    pub fn is_band(&self) -> bool {
        matches!(self.region, Region::Band(_))
    }
}
