//! Job execution shared by the commands and the battery.

use std::fmt;

use triconic::poly::triangle_integral;
use triconic::{oracle_integrate, Conic, IntegralResult, Integrator, Tolerances, Warning};

use crate::battery::envelope;
use crate::job::{Job, JobError, Region};
use crate::svg;

/// Failures mapped to process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    /// Bad arguments, unreadable or invalid job file, bad environment: exit 2.
    Input(String),
    /// The engine could not certify a decomposition: exit 3.
    Subdivision(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 2,
            RunError::Subdivision(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Input(m) => write!(f, "input error: {m}"),
            RunError::Subdivision(m) => write!(f, "subdivision failure: {m}"),
        }
    }
}

impl From<JobError> for RunError {
    fn from(e: JobError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<triconic::Error> for RunError {
    fn from(e: triconic::Error) -> Self {
        use triconic::Error as E;
        match e {
            E::SubdivisionFailure { .. } | E::NoTangencyCandidate | E::InvalidChord(_) | E::Internal(_) => {
                RunError::Subdivision(e.to_string())
            }
            _ => RunError::Input(e.to_string()),
        }
    }
}

/// Environment variable with tolerance overrides, e.g. `class=1e-8,on_conic=1e-10`.
pub const EPS_OVERRIDES: &str = "CONIC_QUAD_EPS_OVERRIDES";

/// Default tolerances with the `key=value` overrides in `text` applied.
pub fn parse_overrides(text: &str) -> Result<Tolerances, RunError> {
    let mut tol = Tolerances::default();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) =
            item.split_once('=').ok_or_else(|| RunError::Input(format!("{EPS_OVERRIDES}: expected key=value, got `{item}`")))?;
        let v: f64 = value.trim().parse().map_err(|_| RunError::Input(format!("{EPS_OVERRIDES}: `{value}` is not a number")))?;
        match key.trim() {
            "class" => tol.class = v,
            "param" => tol.param = v,
            "barycentric" => tol.barycentric = v,
            "on_conic" => tol.on_conic = v,
            other => return Err(RunError::Input(format!("{EPS_OVERRIDES}: unknown key `{other}`"))),
        }
    }
    if !tol.is_valid() {
        return Err(RunError::Input(format!("{EPS_OVERRIDES}: tolerances must be finite and positive")));
    }
    Ok(tol)
}

/// The integrator configured from the environment.
pub fn integrator_from_env() -> Result<Integrator, RunError> {
    match std::env::var(EPS_OVERRIDES) {
        Ok(text) => Ok(Integrator::with_tolerances(parse_overrides(&text)?)?),
        Err(std::env::VarError::NotPresent) => Ok(Integrator::new()),
        Err(e) => Err(RunError::Input(format!("{EPS_OVERRIDES}: {e}"))),
    }
}

/// Value of a job together with the per-side results behind it.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: f64,
    /// One side for `f`, two for a band (`f₁`, then `f₂`).
    pub sides: Vec<(Conic, IntegralResult)>,
    pub warnings: Vec<Warning>,
}

impl Evaluation {
    pub fn piece_count(&self) -> usize {
        self.sides.iter().map(|(_, r)| r.pieces.len()).sum()
    }
}

pub fn evaluate(integ: &Integrator, job: &Job) -> Result<Evaluation, RunError> {
    let g = &job.integrand;
    let t = &job.triangle;
    match &job.region {
        Region::Conic(f) => {
            let r = integ.integrate_region(g, f, t)?;
            Ok(Evaluation { value: r.value, warnings: r.warnings.clone(), sides: vec![(integ.conic(f)?, r)] })
        }
        Region::Band(band) => {
            let total = integ.integrate_band(g, band, t)?;
            let (f1, f2) = band.split();
            let sides =
                vec![(integ.conic(&f1)?, integ.integrate_region(g, &f1, t)?), (integ.conic(&f2)?, integ.integrate_region(g, &f2, t)?)];
            Ok(Evaluation { value: total.value, warnings: total.warnings, sides })
        }
    }
}

pub fn subdivide_svg(integ: &Integrator, job: &Job) -> Result<String, RunError> {
    let ev = evaluate(integ, job)?;
    let sides: Vec<svg::Side<'_>> = ev.sides.iter().map(|(c, r)| svg::Side { conic: c, result: r }).collect();
    Ok(svg::render(job.triangle.vertices(), &sides))
}

/// Engine and oracle values for one job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub engine: f64,
    pub oracle: f64,
    pub bound: f64,
    pub cells: usize,
    /// `|engine − oracle| / max(|oracle|, 1e-6 · envelope)`.
    pub gap: f64,
    pub passed: bool,
}

/// Runs the oracle tightly enough that a gap above `tol` is the engine's.
pub fn check(integ: &Integrator, job: &Job, tol: f64) -> Result<CheckOutcome, RunError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(RunError::Input("--tol must be finite and positive".into()));
    }
    let engine = evaluate(integ, job)?.value;
    let g = &job.integrand;
    let t = &job.triangle;
    let floor = 1e-6 * envelope(g, t);
    let oracle_tol = (0.1 * tol * engine.abs().max(floor)).max(1e-13 * envelope(g, t)).max(f64::MIN_POSITIVE);
    let (oracle, bound, cells) = match &job.region {
        Region::Conic(f) => {
            let o = oracle_integrate(g, f, t, oracle_tol)?;
            (o.value, o.error_bound, o.cells_used)
        }
        Region::Band(band) => {
            let (f1, f2) = band.split();
            let o1 = oracle_integrate(g, &f1, t, 0.5 * oracle_tol)?;
            let o2 = oracle_integrate(g, &f2, t, 0.5 * oracle_tol)?;
            (o1.value + o2.value - triangle_integral(g, t), o1.error_bound + o2.error_bound, o1.cells_used + o2.cells_used)
        }
    };
    let denom = oracle.abs().max(floor);
    let diff = (engine - oracle).abs();
    let gap = if diff == 0.0 { 0.0 } else { diff / denom };
    Ok(CheckOutcome { engine, oracle, bound, cells, gap, passed: gap <= tol })
}
