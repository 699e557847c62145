//! Regions with known areas or moments, checked through the public API.

use std::f64::consts::PI;

use triconic::poly::triangle_integral;
use triconic::{integrate_band, integrate_region, oracle_integrate, BandSpec, ConicClass, Point, Poly2, Triangle};

fn tri(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Triangle {
    Triangle::new(Point::new(a.0, a.1), Point::new(b.0, b.1), Point::new(c.0, c.1)).unwrap()
}

fn disc() -> Poly2 {
    Poly2::quadratic(-1.0, 0.0, -1.0, 0.0, 0.0, 1.0)
}

#[test]
fn disc_inside_triangle() {
    let r = integrate_region(&Poly2::constant(1.0), &disc(), &tri((-3.0, -3.0), (3.0, -3.0), (0.0, 4.0))).unwrap();
    assert_eq!(r.class, ConicClass::Ellipse);
    assert!((r.value - PI).abs() <= 1e-13);
}

#[test]
fn half_disc() {
    let v = integrate_region(&Poly2::constant(1.0), &disc(), &tri((-2.0, 0.0), (2.0, 0.0), (0.0, 2.0))).unwrap().value;
    assert!((v - PI / 2.0).abs() <= 1e-13);
}

#[test]
fn circular_segment() {
    let v = integrate_region(&Poly2::constant(1.0), &disc(), &tri((1.0, 0.0), (0.0, 1.0), (1.0, 1.0))).unwrap().value;
    assert!((v - (PI / 4.0 - 0.5)).abs() <= 1e-13);
    // The complement inside the same triangle is the corner outside the disc.
    let w = integrate_region(&Poly2::constant(1.0), &(-disc()), &tri((1.0, 0.0), (0.0, 1.0), (1.0, 1.0))).unwrap().value;
    assert!((w - (1.0 - PI / 4.0)).abs() <= 1e-13);
}

#[test]
fn second_moment_of_the_disc() {
    // ∬_{r ≤ 1} (x² + y²) = π/2.
    let g = Poly2::quadratic(1.0, 0.0, 1.0, 0.0, 0.0, 0.0);
    let v = integrate_region(&g, &disc(), &tri((-3.0, -3.0), (3.0, -3.0), (0.0, 4.0))).unwrap().value;
    assert!((v - PI / 2.0).abs() <= 1e-13);
    // ∬ x⁴ = π/8 and ∬ x²y² = π/24.
    let v = integrate_region(&Poly2::monomial(4, 0, 1.0), &disc(), &tri((-3.0, -3.0), (3.0, -3.0), (0.0, 4.0))).unwrap().value;
    assert!((v - PI / 8.0).abs() <= 1e-13);
    let v = integrate_region(&Poly2::monomial(2, 2, 1.0), &disc(), &tri((-3.0, -3.0), (3.0, -3.0), (0.0, 4.0))).unwrap().value;
    assert!((v - PI / 24.0).abs() <= 1e-13);
}

#[test]
fn ellipse_area() {
    // x²/4 + y² ≤ 1 has area 2π; shifted and rotated by 30°.
    let (s, c) = (0.5f64, 0.75f64.sqrt());
    let (cx, cy) = (0.3, -0.2);
    // Rotated coordinates u = c(x−cx) + s(y−cy), v = −s(x−cx) + c(y−cy).
    let u = [c, s, -(c * cx + s * cy)];
    let w = [-s, c, s * cx - c * cy];
    let sq = |l: [f64; 3]| Poly2::quadratic(l[0] * l[0], 2.0 * l[0] * l[1], l[1] * l[1], 2.0 * l[0] * l[2], 2.0 * l[1] * l[2], l[2] * l[2]);
    let f = Poly2::constant(1.0) - sq(u) * 0.25 - sq(w);
    let v = integrate_region(&Poly2::constant(1.0), &f, &tri((-6.0, -6.0), (6.0, -6.0), (0.0, 8.0))).unwrap().value;
    assert!((v - 2.0 * PI).abs() <= 1e-12);
}

#[test]
fn parabola_cap() {
    // {y ≥ x²} ∩ {y ≤ 1} has area 4/3 and lies inside this triangle.
    let f = Poly2::quadratic(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let t = tri((-2.0, 1.0), (2.0, 1.0), (0.0, -3.0));
    let r = integrate_region(&Poly2::constant(1.0), &f, &t).unwrap();
    assert_eq!(r.class, ConicClass::Parabola);
    assert!((r.value - 4.0 / 3.0).abs() <= 1e-13);
    // First moment in y: ∫_{-1}^{1} (1 − x⁴)/2 dx = 4/5.
    let r = integrate_region(&Poly2::y(), &f, &t).unwrap();
    assert!((r.value - 0.8).abs() <= 1e-13);
}

#[test]
fn hyperbola_region() {
    // 1/x is convex, so the triangle above the chord (1,1)–(2,½) lies in xy ≥ 1.
    let f = Poly2::quadratic(0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
    let t = tri((1.0, 1.0), (2.0, 0.5), (2.0, 1.0));
    let r = integrate_region(&Poly2::constant(1.0), &f, &t).unwrap();
    assert_eq!(r.class, ConicClass::Hyperbola);
    let above = t.area();
    assert!((r.value - above).abs() <= 1e-13);
    // Below the chord, xy ≥ 1 is the sliver ∫_1^2 ((3 − x)/2 − 1/x) dx.
    let t = tri((1.0, 1.0), (2.0, 0.5), (1.0, 0.5));
    let v = integrate_region(&Poly2::constant(1.0), &f, &t).unwrap().value;
    assert!((v - (0.75 - 2f64.ln())).abs() <= 1e-13, "{v}");
}

#[test]
fn annulus_band() {
    let band = BandSpec { p: Poly2::quadratic(1.0, 0.0, 1.0, 0.0, 0.0, 0.0), alpha: 1.0, fa: -4.0, fb: -1.0 };
    let v = integrate_band(&Poly2::constant(1.0), &band, &tri((-6.0, -6.0), (6.0, -6.0), (0.0, 8.0))).unwrap();
    assert!((v - 3.0 * PI).abs() <= 1e-12);
}

#[test]
fn band_trivial_cases() {
    let t = tri((-1.0, -1.0), (2.0, 0.0), (0.0, 1.5));
    let v = Poly2::from_terms(&[(0, 0, 1.0), (2, 2, 0.5), (1, 0, -0.3)]).unwrap();
    let all = BandSpec { p: Poly2::zero(), alpha: 1.0, fa: -1.0, fb: 1.0 };
    assert!((integrate_band(&v, &all, &t).unwrap() - triangle_integral(&v, &t)).abs() <= 1e-14);
    let thin = BandSpec { p: Poly2::x(), alpha: 1.0, fa: 0.0, fb: 0.0 };
    assert!(integrate_band(&v, &thin, &t).unwrap().abs() <= 1e-14);
}

#[test]
fn band_matches_oracle_inclusion_exclusion() {
    // The band as two one-sided regions combined against the oracle on each side.
    let t = tri((-1.5, -1.0), (1.7, -0.6), (0.2, 1.8));
    let p = Poly2::quadratic(0.8, -0.3, 1.1, 0.2, -0.4, -0.1);
    let band = BandSpec { p, alpha: 2.0, fa: -0.4, fb: 0.1 };
    let v = Poly2::from_terms(&[(0, 0, 1.0), (1, 1, 0.7), (0, 2, -0.2)]).unwrap();
    let engine = integrate_band(&v, &band, &t).unwrap();
    let (f1, f2) = band.split();
    let o1 = oracle_integrate(&v, &f1, &t, 1e-9).unwrap();
    let o2 = oracle_integrate(&v, &f2, &t, 1e-9).unwrap();
    let oracle = o1.value + o2.value - triangle_integral(&v, &t);
    assert!((engine - oracle).abs() <= o1.error_bound + o2.error_bound + 1e-12);
}

#[test]
fn parallel_lines_against_oracle() {
    let f = Poly2::quadratic(1.0, 0.0, 0.0, -1.0, 0.0, 0.0);
    let t = tri((-1.0, 0.0), (2.0, 0.0), (-1.0, 3.0));
    let r = integrate_region(&Poly2::constant(1.0), &f, &t).unwrap();
    assert_eq!(r.class, ConicClass::ParallelLines);
    // Under the hypotenuse y = 2 − x the strip 0 < x < 1 has area 3/2 of 9/2.
    assert!((r.value - 3.0).abs() <= 1e-14);
    let o = oracle_integrate(&Poly2::constant(1.0), &f, &t, 1e-10).unwrap();
    assert!((r.value - o.value).abs() <= o.error_bound + 1e-12);
}

#[test]
fn crossing_lines_quadrants() {
    // f = xy ≥ 0 on the first and third quadrants.
    let f = Poly2::monomial(1, 1, 1.0);
    let t = tri((-1.0, -1.0), (1.0, -1.0), (1.0, 1.0));
    let r = integrate_region(&Poly2::constant(1.0), &f, &t).unwrap();
    assert_eq!(r.class, ConicClass::CrossingLines);
    // Below the diagonal: (0,0),(1,0),(1,1) and (−1,−1),(0,−1),(0,0), area ½ each.
    assert!((r.value - 1.0).abs() <= 1e-14);
}
