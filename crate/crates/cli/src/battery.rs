//! The acceptance battery: seeded random instances and the checks run by
//! `selftest` and by the acceptance test.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triconic::poly::{reference_triangle_integral, triangle_integral};
use triconic::subdivide::{triangle_freedom, MAX_PIECES};
use triconic::{oracle_integrate, AffineMap2, ConicClass, FreeStatus, Integrator, Point, Poly2, Triangle};

use crate::corpus;
use crate::job::Job;
use crate::run;

/// Seed for every randomized criterion.
pub const SEED: u64 = 0x7a11_c0de;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vertices in `[-2, 2]²` with area above 0.05.
pub fn random_triangle(rng: &mut impl Rng) -> Triangle {
    loop {
        let mut p = || Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if let Ok(t) = Triangle::new(p(), p(), p()) {
            if t.area() > 0.05 {
                return t;
            }
        }
    }
}

pub fn random_quadratic(rng: &mut impl Rng) -> Poly2 {
    let mut c = [0.0; 6];
    c.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
    Poly2::quadratic(c[0], c[1], c[2], c[3], c[4], c[5])
}

/// All fifteen coefficients uniform in `[-1, 1]`.
pub fn random_quartic(rng: &mut impl Rng) -> Poly2 {
    let mut g = Poly2::zero();
    for d in 0..=4 {
        for j in 0..=d {
            g.set_coeff(d - j, j, rng.gen_range(-1.0..1.0));
        }
    }
    g
}

fn linear(a: f64, b: f64, c: f64) -> Poly2 {
    Poly2::quadratic(0.0, 0.0, 0.0, a, b, c)
}

fn mul(p: &Poly2, q: &Poly2) -> Poly2 {
    p.try_mul(q).expect("quadratic product")
}

/// A quadratic of the requested class: a standard member with random
/// parameters, moved by a random rotation and a shift within `[-1, 1]²`,
/// and scaled by a random nonzero factor.
pub fn conic_of_class(class: ConicClass, rng: &mut impl Rng) -> Poly2 {
    loop {
        let a = rng.gen_range(0.3..2.0);
        let b = rng.gen_range(0.3..2.0);
        let slope: f64 = rng.gen_range(-1.5..1.5);
        let (x, y) = (Poly2::x(), Poly2::y());
        let one = Poly2::constant(1.0);
        let s = match class {
            ConicClass::Ellipse => mul(&x, &x) * (1.0 / (a * a)) + mul(&y, &y) * (1.0 / (b * b)) - one,
            ConicClass::Hyperbola => mul(&x, &x) * (1.0 / (a * a)) - mul(&y, &y) * (1.0 / (b * b)) - one,
            ConicClass::Parabola => y - mul(&x, &x) * a,
            ConicClass::CrossingLines => mul(&x, &linear(slope, 1.0, 0.0)),
            ConicClass::ParallelLines => mul(&x, &linear(1.0, 0.0, -a)),
            ConicClass::DoubleLine => mul(&x, &x),
            ConicClass::SingleLine => x,
            ConicClass::Point => mul(&x, &x) + mul(&y, &y) * (b * b),
            ConicClass::Empty => mul(&x, &x) + mul(&y, &y) + Poly2::constant(a),
            ConicClass::ConstantSign => one,
        };
        let m = AffineMap2::translation(Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .after(&AffineMap2::rotation(rng.gen_range(-3.2..3.2)));
        let scale = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let f = s.compose_affine(&m.inverse()) * scale;
        if triconic::conic::conic_classify(&f) == class {
            return f;
        }
    }
}

/// Alternates class-built ellipses, parabolas and hyperbolas with raw
/// random quadratics that classify as nondegenerate.
pub fn random_nondegenerate(k: usize, rng: &mut impl Rng) -> Poly2 {
    if k.is_multiple_of(2) {
        let class = [ConicClass::Ellipse, ConicClass::Parabola, ConicClass::Hyperbola][(k / 2) % 3];
        return conic_of_class(class, rng);
    }
    loop {
        let f = random_quadratic(rng);
        if triconic::conic::conic_classify(&f).is_nondegenerate() {
            return f;
        }
    }
}

/// A size for `∬_t g` that does not cancel: area times the coefficient
/// envelope of `g` over the triangle's bounding box.
pub fn envelope(g: &Poly2, t: &Triangle) -> f64 {
    let r = t.vertices().iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(1.0);
    let e: f64 = g.terms().map(|(i, j, b)| b.abs() * r.powi((i + j) as i32)).sum();
    t.area() * e
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn timed(name: &'static str, body: impl FnOnce() -> (bool, String)) -> Criterion {
    let start = Instant::now();
    let (passed, detail) = body();
    Criterion { name, passed, detail, elapsed: start.elapsed() }
}

fn exact_reference(g: &Poly2) -> BigRational {
    g.terms().fold(BigRational::zero(), |acc, (i, j, b)| {
        acc + BigRational::from_float(b).expect("finite") / BigRational::from_integer(BigInt::from((j + 1) * (i + j + 2)))
    })
}

/// Reference-triangle moments: exact per monomial, and against rational
/// arithmetic on random quartics.
pub fn moment_exactness() -> Criterion {
    timed("moment-exactness", || {
        let mut worst_mono = 0.0f64;
        for d in 0..=4usize {
            for j in 0..=d {
                let want = 1.0 / ((j + 1) * (d + 2)) as f64;
                let got = reference_triangle_integral(&Poly2::monomial(d - j, j, 1.0));
                worst_mono = worst_mono.max((got - want).abs() / want);
            }
        }
        let mut r = rng(SEED);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let g = random_quartic(&mut r);
            let exact = exact_reference(&g);
            let got = BigRational::from_float(reference_triangle_integral(&g)).expect("finite");
            let err = ((got - &exact).abs() / exact.abs()).to_f64().unwrap_or(f64::INFINITY);
            worst = worst.max(err);
        }
        let passed = worst_mono <= f64::EPSILON && worst <= 1e-15;
        (passed, format!("15 monomials max rel err {worst_mono:.1e}; 1000 quartics max rel err {worst:.1e} (limit 1e-15)"))
    })
}

/// Regions with closed-form areas, run as job files.
pub fn analytic_regions(integ: &Integrator) -> Criterion {
    use std::f64::consts::PI;
    timed("analytic-regions", || {
        let cases = [
            ("disc", corpus::DISC, PI, 1e-10),
            ("half-disc", corpus::HALF_DISC, PI / 2.0, 1e-10),
            ("segment", corpus::SEGMENT, PI / 4.0 - 0.5, 1e-10),
            ("annulus", corpus::ANNULUS, 3.0 * PI, 1e-9),
        ];
        let mut passed = true;
        let mut parts = Vec::new();
        for (name, text, want, tol) in cases {
            let job = Job::parse(text).expect("corpus job parses");
            match run::evaluate(integ, &job) {
                Ok(ev) => {
                    let err = (ev.value - want).abs();
                    passed &= err <= tol;
                    parts.push(format!("{name} {err:.1e}"));
                }
                Err(e) => {
                    passed = false;
                    parts.push(format!("{name} error: {e}"));
                }
            }
        }
        (passed, format!("abs errors: {}", parts.join(", ")))
    })
}

/// `I(g, f) + I(g, −f) = ∬_t g` on 50 instances of each class.
pub fn complement_identity(integ: &Integrator) -> Criterion {
    timed("complement-identity", || {
        let mut r = rng(SEED ^ 1);
        let mut worst = 0.0f64;
        let mut failures = 0;
        let mut errors = Vec::new();
        for class in ConicClass::ALL {
            for _ in 0..50 {
                let f = conic_of_class(class, &mut r);
                let g = random_quartic(&mut r);
                let t = random_triangle(&mut r);
                let pos = integ.integrate_region(&g, &f, &t);
                let neg = integ.integrate_region(&g, &(-f), &t);
                match (pos, neg) {
                    (Ok(p), Ok(n)) => {
                        let whole = triangle_integral(&g, &t);
                        let rel = (p.value + n.value - whole).abs() / whole.abs().max(envelope(&g, &t) * 1e-3);
                        worst = worst.max(rel);
                        if rel > 1e-10 {
                            failures += 1;
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => errors.push(format!("{class}: {e}")),
                }
            }
        }
        let passed = failures == 0 && errors.is_empty();
        let mut detail = format!("500 instances, max rel err {worst:.1e} (limit 1e-10), {failures} over");
        if let Some(e) = errors.first() {
            detail.push_str(&format!(", {} errors, first: {e}", errors.len()));
        }
        (passed, detail)
    })
}

/// Engine against the certified oracle at tolerance 1e-8.
pub fn oracle_equivalence(integ: &Integrator) -> Criterion {
    timed("oracle-equivalence", || {
        let mut r = rng(SEED ^ 2);
        let mut failures = Vec::new();
        let mut worst = 0.0f64;
        for k in 0..200 {
            let f = random_nondegenerate(k, &mut r);
            let g = random_quartic(&mut r);
            let t = random_triangle(&mut r);
            let engine = match integ.integrate_region(&g, &f, &t) {
                Ok(v) => v.value,
                Err(e) => {
                    failures.push(format!("#{k}: {e}"));
                    continue;
                }
            };
            let o = oracle_integrate(&g, &f, &t, 1e-8).expect("valid oracle input");
            let gap = (engine - o.value).abs();
            let rel = gap / o.value.abs();
            worst = worst.max(if gap == 0.0 { 0.0 } else { rel });
            if !(rel <= 1e-7 || gap <= o.error_bound) {
                failures.push(format!("#{k}: gap {gap:.2e}, bound {:.2e}", o.error_bound));
            }
        }
        let mut detail = format!("200 instances, max rel gap {worst:.1e}, {} outside 1e-7 and bound", failures.len());
        if let Some(e) = failures.first() {
            detail.push_str(&format!(", first: {e}"));
        }
        (failures.is_empty(), detail)
    })
}

/// Decompositions are small, free, tile the triangle and have free internal edges.
pub fn subdivision_certification(integ: &Integrator) -> Criterion {
    timed("subdivision-certification", || {
        let mut r = rng(SEED ^ 3);
        let mut failures = Vec::new();
        let mut most = 0;
        let mut worst_tiling = 0.0f64;
        let mut edges = 0;
        for k in 0..300 {
            let f = random_nondegenerate(k, &mut r);
            let t = random_triangle(&mut r);
            let c = integ.conic(&f).expect("finite quadratic");
            let trace = match triconic::decompose(&c, &t) {
                Ok(tr) => tr,
                Err(e) => {
                    failures.push(format!("#{k}: {e}"));
                    continue;
                }
            };
            most = most.max(trace.pieces.len());
            let area: f64 = trace.pieces.iter().map(|p| p.triangle.area()).sum();
            let tiling = (area - t.area()).abs() / t.area();
            worst_tiling = worst_tiling.max(tiling);
            edges += trace.internal_edges.len();
            if trace.pieces.len() > MAX_PIECES {
                failures.push(format!("#{k}: {} pieces", trace.pieces.len()));
            }
            if tiling > 1e-12 {
                failures.push(format!("#{k}: tiling defect {tiling:.1e}"));
            }
            if !trace.pieces.iter().all(|p| matches!(triangle_freedom(&c, &p.triangle), FreeStatus::Free(_))) {
                failures.push(format!("#{k}: a piece is not free"));
            }
            if !trace.internal_edges.iter().all(|&(p, q)| c.segment_is_free(p, q)) {
                failures.push(format!("#{k}: an internal edge is not free"));
            }
        }
        let mut detail = format!(
            "300 instances, max {most} pieces, max tiling defect {worst_tiling:.1e}, {edges} internal edges, {} failures",
            failures.len()
        );
        if let Some(e) = failures.first() {
            detail.push_str(&format!(", first: {e}"));
        }
        (failures.is_empty(), detail)
    })
}

/// Values are unchanged when `(g, f, t)` move together by a rigid map.
pub fn rigid_equivariance(integ: &Integrator) -> Criterion {
    timed("rigid-equivariance", || {
        let mut r = rng(SEED ^ 4);
        let mut worst = 0.0f64;
        let mut failures = Vec::new();
        for k in 0..100 {
            let f = conic_of_class(ConicClass::ALL[k % 10], &mut r);
            let g = random_quartic(&mut r);
            let t = random_triangle(&mut r);
            let base = match integ.integrate_region(&g, &f, &t) {
                Ok(v) => v.value,
                Err(e) => {
                    failures.push(format!("#{k}: {e}"));
                    continue;
                }
            };
            let size = base.abs().max(envelope(&g, &t) * 1e-3);
            for _ in 0..5 {
                let m = AffineMap2::translation(Point::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0)))
                    .after(&AffineMap2::rotation(r.gen_range(-3.2..3.2)));
                let inv = m.inverse();
                let [a, b, c] = t.vertices();
                let moved = Triangle::new(m.apply(a), m.apply(b), m.apply(c)).expect("rigid image");
                match integ.integrate_region(&g.compose_affine(&inv), &f.compose_affine(&inv), &moved) {
                    Ok(v) => {
                        let drift = (v.value - base).abs() / size;
                        worst = worst.max(drift);
                        if drift > 1e-9 {
                            failures.push(format!("#{k}: drift {drift:.1e}"));
                        }
                    }
                    Err(e) => failures.push(format!("#{k}: {e}")),
                }
            }
        }
        let mut detail = format!("100 x 5 motions, max rel drift {worst:.1e} (limit 1e-9), {} failures", failures.len());
        if let Some(e) = failures.first() {
            detail.push_str(&format!(", first: {e}"));
        }
        (failures.is_empty(), detail)
    })
}

/// Hand-built line-pair layouts: the three strip layouts of a parallel
/// pair and four arrangements of a crossing pair.
pub fn degenerate_instances() -> Vec<(&'static str, Poly2, Triangle)> {
    let tri = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| Triangle::new(a.into(), b.into(), c.into()).expect("valid");
    let strip = Poly2::quadratic(1.0, 0.0, 0.0, -0.12, 0.0, 0.0);
    let cross = Poly2::monomial(1, 1, 1.0);
    let base = vec![
        ("strip, two vertices inside", strip, tri((-0.08, 0.15), (0.08, 0.05), (0.10, 0.25))),
        ("strip, no vertex inside", strip, tri((-0.08, 0.10), (0.15, 0.05), (0.18, 0.25))),
        ("strip, one vertex inside", strip, tri((-0.08, 0.10), (0.08, 0.05), (0.18, 0.25))),
        ("cross, center inside", cross, tri((-0.8, 1.0), (0.8, 0.6), (1.0, -0.6))),
        ("cross, center outside", cross, tri((-0.4, -1.0), (-0.6, -0.6), (1.0, 0.5))),
        ("cross, opposite quadrants", cross, tri((-1.1, 0.3), (0.7, 0.5), (0.4, -0.8))),
        ("cross, three quadrants", cross, tri((-0.2, -0.8), (-0.9, -0.2), (0.9, 0.7))),
    ];
    let m = AffineMap2::translation(Point::new(0.3, -0.4)).after(&AffineMap2::rotation(0.7));
    let inv = m.inverse();
    let mut out = base.clone();
    for (name, f, t) in base {
        let [a, b, c] = t.vertices();
        let moved = Triangle::new(m.apply(a), m.apply(b), m.apply(c)).expect("rigid image");
        out.push((name, f.compose_affine(&inv), moved));
    }
    out
}

/// Each degenerate instance against the oracle at 1e-8 relative, with the
/// oracle's own bound charged to the engine.
pub fn degenerate_battery(integ: &Integrator) -> Criterion {
    timed("degenerate-battery", || {
        let g = Poly2::from_terms(&[(0, 0, 1.0), (1, 0, 0.3), (1, 1, -0.7), (0, 2, 0.4), (2, 2, 1.5)]).expect("quartic");
        let mut worst = 0.0f64;
        let mut failures = Vec::new();
        let mut layouts = std::collections::BTreeSet::new();
        for (k, (name, f, t)) in degenerate_instances().into_iter().enumerate() {
            match integ.integrate_region(&g, &f, &t) {
                Ok(v) => {
                    if let Some(triconic::PieceKind::Clipped(l)) = v.pieces.first().map(|p| p.kind) {
                        layouts.insert(l);
                    }
                    // The oracle's certified bound counts against the engine, so a
                    // pass means the true relative error is at most 1e-8.
                    let tol = 4e-9 * v.value.abs().max(1e-3 * envelope(&g, &t));
                    let o = oracle_integrate(&g, &f, &t, tol).expect("valid oracle input");
                    let rel = ((v.value - o.value).abs() + o.error_bound) / o.value.abs();
                    worst = worst.max(rel);
                    if rel.is_nan() || rel > 1e-8 {
                        failures.push(format!("#{k} {name}: rel gap plus bound {rel:.1e}"));
                    }
                }
                Err(e) => failures.push(format!("#{k} {name}: {e}")),
            }
        }
        let want = ["strip-no-vertex", "strip-one-vertex", "strip-two-vertices", "center-inside", "center-outside"];
        let missing: Vec<&str> = want.iter().copied().filter(|l| !layouts.contains(l)).collect();
        if !missing.is_empty() {
            failures.push(format!("layouts not reached: {}", missing.join(", ")));
        }
        let mut detail = format!(
            "{} instances, max rel gap plus oracle bound {worst:.1e} (limit 1e-8), layouts {}",
            degenerate_instances().len(),
            layouts.into_iter().collect::<Vec<_>>().join(" ")
        );
        if let Some(e) = failures.first() {
            detail.push_str(&format!(", first failure: {e}"));
        }
        (failures.is_empty(), detail)
    })
}

/// Subdivision SVGs of the canonical jobs equal the checked-in goldens.
pub fn golden_files(integ: &Integrator) -> Criterion {
    timed("golden-files", || {
        let mut mismatched = Vec::new();
        for (name, job, golden) in corpus::GOLDEN {
            let job = Job::parse(job).expect("corpus job parses");
            match run::subdivide_svg(integ, &job) {
                Ok(svg) if svg == golden => {}
                Ok(_) => mismatched.push(name.to_string()),
                Err(e) => mismatched.push(format!("{name} ({e})")),
            }
        }
        let detail = if mismatched.is_empty() {
            format!("{} SVGs byte-identical", corpus::GOLDEN.len())
        } else {
            format!("mismatch: {}", mismatched.join(", "))
        };
        (mismatched.is_empty(), detail)
    })
}

/// Every criterion in order, reporting each as it completes.
pub fn run_each(integ: &Integrator, mut done: impl FnMut(&Criterion)) -> Vec<Criterion> {
    let checks: [&dyn Fn() -> Criterion; 8] = [
        &moment_exactness,
        &|| analytic_regions(integ),
        &|| complement_identity(integ),
        &|| oracle_equivalence(integ),
        &|| subdivision_certification(integ),
        &|| rigid_equivariance(integ),
        &|| degenerate_battery(integ),
        &|| golden_files(integ),
    ];
    checks
        .iter()
        .map(|check| {
            let c = check();
            done(&c);
            c
        })
        .collect()
}

pub fn run_all(integ: &Integrator) -> Vec<Criterion> {
    run_each(integ, |_| {})
}
