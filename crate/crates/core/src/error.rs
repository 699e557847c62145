use core::fmt;

use crate::geom::Triangle;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A product or input polynomial exceeds the supported degree.
    DegreeOverflow { degree: usize, cap: usize },
    /// Triangle vertices are collinear (or nearly so) or not finite.
    DegenerateTriangle,
    /// A coefficient or coordinate is NaN or infinite.
    NonFinite,
    /// An affine map with zero Jacobian was requested.
    SingularMap,
    /// The operation needs a conic of a different class.
    WrongConicClass(&'static str),
    /// No tangency point on the required arc was found.
    NoTangencyCandidate,
    /// The subdivision could not certify a piece as free.
    SubdivisionFailure { triangle: Triangle, reason: &'static str },
    /// Chord endpoints coincide or lie on different branches.
    InvalidChord(&'static str),
    /// Band bounds out of order or non-positive regularization weight.
    InvalidBand(&'static str),
    /// Oracle tolerance must be finite and positive.
    InvalidTolerance,
    /// A case that the construction rules out was reached.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeOverflow { degree, cap } => {
                write!(f, "polynomial degree {degree} exceeds cap {cap}")
            }
            Error::DegenerateTriangle => f.write_str("triangle has zero area"),
            Error::NonFinite => f.write_str("non-finite coefficient or coordinate"),
            Error::SingularMap => f.write_str("affine map is singular"),
            Error::WrongConicClass(what) => write!(f, "wrong conic class: {what}"),
            Error::NoTangencyCandidate => f.write_str("no tangency point on the required arc"),
            Error::SubdivisionFailure { triangle, reason } => {
                let [a, b, c] = triangle.vertices();
                write!(f, "subdivision failed on triangle ({}, {}), ({}, {}), ({}, {}): {reason}", a.x, a.y, b.x, b.y, c.x, c.y)
            }
            Error::InvalidChord(what) => write!(f, "invalid chord: {what}"),
            Error::InvalidBand(what) => write!(f, "invalid band: {what}"),
            Error::InvalidTolerance => f.write_str("tolerance must be finite and positive"),
            Error::Internal(what) => write!(f, "internal error: {what}"),
        }
    }
}

impl core::error::Error for Error {}
