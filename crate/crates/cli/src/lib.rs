//! Command-line front end for `triconic`: job files, classification,
//! subdivision SVGs, oracle cross-checks and the self-test battery.
//!
//! Exit codes: 0 success, 1 a check failed, 2 input error (including no
//! arguments), 3 the engine could not certify a subdivision.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use triconic::{PieceKind, StandardForm, Warning};

pub mod battery;
pub mod corpus;
pub mod job;
pub mod run;
pub mod svg;

use job::{Job, Region};
use run::RunError;

#[derive(Debug, Parser)]
#[command(name = "triconic", version, about = "Integrate polynomials over a triangle cut by a conic", arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a job and print the value.
    Integrate {
        job: PathBuf,
        /// Print one row per piece.
        #[arg(long)]
        trace: bool,
        /// Print the parsed job as canonical JSON instead of integrating.
        #[arg(long)]
        dump_job: bool,
        /// Append the wall-clock time.
        #[arg(long)]
        timing: bool,
    },
    /// Write an SVG of the triangle, the conic and the free pieces.
    Subdivide {
        job: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Print the class and standard form of the job's conic.
    Classify { job: PathBuf },
    /// Compare the engine with the oracle on a job or on random instances.
    Check {
        job: Option<PathBuf>,
        /// Largest accepted relative gap.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Number of random instances (instead of a job).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timing: bool,
    },
    /// Run the acceptance battery and print a pass/fail table.
    Selftest {
        /// Deliberately break a component to see the battery fail.
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Wrong trigonometric moment table.
    TrigTable,
}

/// Formats `v` with 17 significant digits, positionally when that is short.
pub fn sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if (-5..17).contains(&e) {
        format!("{:.*}", (16 - e) as usize, v)
    } else {
        format!("{v:.16e}")
    }
}

fn read_job(path: &Path) -> Result<Job, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    Job::parse(&text).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

fn io(e: std::io::Error) -> RunError {
    RunError::Input(format!("write failed: {e}"))
}

fn warning_text(w: &Warning) -> String {
    match w {
        Warning::Cancellation { total, part, result } => {
            format!("cancellation: {} - {} = {}", sig17(*total), sig17(*part), sig17(*result))
        }
        Warning::NearThreshold { class, margin } => format!("classified {class} with margin {margin:.3e}"),
    }
}

fn kind_text(kind: &PieceKind) -> &'static str {
    svg::kind_label(kind)
}

fn point_text(p: &triconic::Point) -> String {
    format!("({}, {})", sig17(p.x), sig17(p.y))
}

fn integrate(out: &mut dyn Write, path: &Path, trace: bool, dump: bool, timing: bool) -> Result<i32, RunError> {
    let job = read_job(path)?;
    if dump {
        out.write_all(job.dump().as_bytes()).map_err(io)?;
        return Ok(0);
    }
    let integ = run::integrator_from_env()?;
    let start = Instant::now();
    let ev = run::evaluate(&integ, &job)?;
    let elapsed = start.elapsed();
    let classes: Vec<&str> = ev.sides.iter().map(|(_, r)| r.class.name()).collect();
    writeln!(out, "class: {}", classes.join(" / ")).map_err(io)?;
    writeln!(out, "value: {}", sig17(ev.value)).map_err(io)?;
    writeln!(out, "pieces: {}", ev.piece_count()).map_err(io)?;
    for w in &ev.warnings {
        writeln!(out, "warning: {}", warning_text(w)).map_err(io)?;
    }
    if trace {
        writeln!(out, "{:>4}  {:<4}  {:<20}  {:<18}  {:<24}  vertices", "#", "side", "case", "provenance", "contribution").map_err(io)?;
        let mut k = 0;
        for (s, (_, r)) in ev.sides.iter().enumerate() {
            for p in &r.pieces {
                let prov = p.provenance.map_or("clip", |q| q.label());
                let verts: Vec<String> = p.polygon.iter().map(point_text).collect();
                writeln!(
                    out,
                    "{k:>4}  {:<4}  {:<20}  {prov:<18}  {:<24}  {}",
                    s + 1,
                    kind_text(&p.kind),
                    sig17(p.contribution),
                    verts.join(" ")
                )
                .map_err(io)?;
                k += 1;
            }
        }
    }
    if timing {
        writeln!(out, "time: {:.3} ms", elapsed.as_secs_f64() * 1e3).map_err(io)?;
    }
    Ok(0)
}

fn subdivide(out: &mut dyn Write, path: &Path, svg_path: &Path) -> Result<i32, RunError> {
    let job = read_job(path)?;
    let integ = run::integrator_from_env()?;
    let doc = run::subdivide_svg(&integ, &job)?;
    std::fs::write(svg_path, doc).map_err(|e| RunError::Input(format!("{}: {e}", svg_path.display())))?;
    let ev = run::evaluate(&integ, &job)?;
    writeln!(out, "wrote {} ({} pieces)", svg_path.display(), ev.piece_count()).map_err(io)?;
    Ok(0)
}

fn form_text(form: StandardForm) -> String {
    match form {
        StandardForm::Ellipse { a, b } => format!("X²/a² + Y²/b² - 1, a = {}, b = {}", sig17(a), sig17(b)),
        StandardForm::Parabola { c } => format!("Y - c X², c = {}", sig17(c)),
        StandardForm::Hyperbola { k } => format!("X Y - k, k = {}", sig17(k)),
        StandardForm::ParallelLines { d } => format!("X (X - d), d = {}", sig17(d)),
        StandardForm::CrossingLines { d1, d2 } => format!("cross(d1, P) cross(d2, P), d1 = {}, d2 = {}", point_text(&d1), point_text(&d2)),
        StandardForm::DoubleLine => "X²".into(),
        StandardForm::SingleLine => "X".into(),
        StandardForm::Signed => "constant sign".into(),
    }
}

fn classify(out: &mut dyn Write, path: &Path) -> Result<i32, RunError> {
    let job = read_job(path)?;
    let integ = run::integrator_from_env()?;
    let polys = match job.region {
        Region::Conic(f) => vec![("f", f)],
        Region::Band(b) => {
            let (f1, f2) = b.split();
            vec![("f1", f1), ("f2", f2)]
        }
    };
    for (name, f) in polys {
        let c = integ.conic(&f)?;
        writeln!(out, "{name}: {}", c.class()).map_err(io)?;
        writeln!(out, "  standard form: {}", form_text(c.standard_form())).map_err(io)?;
        writeln!(out, "  lambda: {}", sig17(c.lambda())).map_err(io)?;
        writeln!(out, "  margin: {:.3e}{}", c.classification_margin(), if c.near_threshold() { " (near threshold)" } else { "" })
            .map_err(io)?;
    }
    Ok(0)
}

fn check(out: &mut dyn Write, path: Option<&Path>, tol: f64, n: Option<usize>, seed: u64, timing: bool) -> Result<i32, RunError> {
    let integ = run::integrator_from_env()?;
    let start = Instant::now();
    let code = match (path, n) {
        (Some(p), _) => {
            let job = read_job(p)?;
            let c = run::check(&integ, &job, tol)?;
            writeln!(out, "engine: {}", sig17(c.engine)).map_err(io)?;
            writeln!(out, "oracle: {} ± {:.3e} ({} cells)", sig17(c.oracle), c.bound, c.cells).map_err(io)?;
            writeln!(out, "gap: {:.3e} (tol {tol:.1e})", c.gap).map_err(io)?;
            writeln!(out, "result: {}", if c.passed { "pass" } else { "FAIL" }).map_err(io)?;
            i32::from(!c.passed)
        }
        (None, Some(n)) => {
            let mut rng = battery::rng(seed);
            let mut failed = 0;
            for k in 0..n {
                let f = battery::random_nondegenerate(k, &mut rng);
                let g = battery::random_quartic(&mut rng);
                let t = battery::random_triangle(&mut rng);
                let file = job::JobFile {
                    triangle: t.vertices().map(|p| [p.x, p.y]),
                    f: Some(job::Quadratic::from_poly(&f)),
                    band: None,
                    g: Some(g.terms().collect()),
                    phi1: None,
                    phi2: None,
                };
                let j = Job::from_file(file)?;
                let c = run::check(&integ, &j, tol)?;
                failed += usize::from(!c.passed);
                writeln!(
                    out,
                    "{k:>4}  {:<10} engine {:<24} oracle {:<24} gap {:.3e}  {}",
                    triconic::conic::conic_classify(&f).name(),
                    sig17(c.engine),
                    sig17(c.oracle),
                    c.gap,
                    if c.passed { "pass" } else { "FAIL" }
                )
                .map_err(io)?;
            }
            writeln!(out, "summary: {}/{n} passed (seed {seed}, tol {tol:.1e})", n - failed).map_err(io)?;
            i32::from(failed > 0)
        }
        (None, None) => return Err(RunError::Input("check needs a job file or --n".into())),
    };
    if timing {
        writeln!(out, "time: {:.3} ms", start.elapsed().as_secs_f64() * 1e3).map_err(io)?;
    }
    Ok(code)
}

fn selftest(out: &mut dyn Write, fault: Option<Fault>) -> Result<i32, RunError> {
    let mut integ = run::integrator_from_env()?;
    if fault == Some(Fault::TrigTable) {
        integ = integ.with_corrupted_trig_table();
    }
    let mut failed = 0;
    let mut res = Ok(());
    let results = battery::run_each(&integ, |c| {
        failed += usize::from(!c.passed);
        if res.is_ok() {
            res = writeln!(
                out,
                "{}  {:<26} {:>7.2} s  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.elapsed.as_secs_f64(),
                c.detail
            );
        }
    });
    res.map_err(io)?;
    writeln!(out, "{}/{} criteria passed", results.len() - failed, results.len()).map_err(io)?;
    Ok(i32::from(failed > 0))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Integrate { job, trace, dump_job, timing } => integrate(out, job, *trace, *dump_job, *timing),
        Command::Subdivide { job, svg } => subdivide(out, job, svg),
        Command::Classify { job } => classify(out, job),
        Command::Check { job, tol, n, seed, timing } => check(out, job.as_deref(), *tol, *n, *seed, *timing),
        Command::Selftest { inject_fault } => selftest(out, *inject_fault),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
