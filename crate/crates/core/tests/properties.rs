//! Structural properties of the integrator on random inputs of every class.

use proptest::prelude::*;
use triconic::poly::triangle_integral;
use triconic::{decompose, integrate_region, oracle_integrate, AffineMap2, Conic, ConicClass, FreeStatus, Point, Poly2, Triangle};

/// `(l0 x + l1 y + l2)`.
fn linear(l: [f64; 3]) -> Poly2 {
    Poly2::quadratic(0.0, 0.0, 0.0, l[0], l[1], l[2])
}

/// A member of `class` in standard position, then moved by a rigid map.
fn conic_of(class: ConicClass, p: [f64; 6]) -> Poly2 {
    let (a, b) = (0.3 + p[0].abs() * 1.7, 0.3 + p[1].abs() * 1.7);
    let lam = if p[2] >= 0.0 { 1.0 + p[2] } else { p[2] - 1.0 };
    let x = Poly2::x();
    let y = Poly2::y();
    let s = match class {
        ConicClass::Ellipse => x.try_mul(&x).unwrap() * (1.0 / (a * a)) + y.try_mul(&y).unwrap() * (1.0 / (b * b)) - Poly2::constant(1.0),
        ConicClass::Hyperbola => x.try_mul(&x).unwrap() * (1.0 / (a * a)) - y.try_mul(&y).unwrap() * (1.0 / (b * b)) - Poly2::constant(1.0),
        ConicClass::Parabola => y - x.try_mul(&x).unwrap() * (a - 0.2),
        ConicClass::CrossingLines => linear([1.0, 0.0, 0.0]).try_mul(&linear([p[3], 1.0, 0.0])).unwrap(),
        ConicClass::ParallelLines => linear([1.0, 0.0, 0.0]).try_mul(&linear([1.0, 0.0, -a])).unwrap(),
        ConicClass::DoubleLine => x.try_mul(&x).unwrap(),
        ConicClass::SingleLine => linear([1.0, 0.5 * p[3], 0.0]),
        ConicClass::Point => x.try_mul(&x).unwrap() + y.try_mul(&y).unwrap() * (b * b),
        ConicClass::Empty => x.try_mul(&x).unwrap() + y.try_mul(&y).unwrap() + Poly2::constant(a),
        ConicClass::ConstantSign => Poly2::constant(1.0),
    };
    let m = AffineMap2::translation(Point::new(p[4], p[5])).after(&AffineMap2::rotation(p[3] * 3.0));
    s.compose_affine(&m.inverse()) * lam
}

fn arb_class() -> impl Strategy<Value = ConicClass> {
    (0usize..10).prop_map(|k| ConicClass::ALL[k])
}

fn arb_conic() -> impl Strategy<Value = (ConicClass, Poly2)> {
    (arb_class(), prop::array::uniform6(-1.0f64..1.0)).prop_map(|(c, p)| (c, conic_of(c, p)))
}

fn arb_quadratic() -> impl Strategy<Value = Poly2> {
    prop::array::uniform6(-1.0f64..1.0).prop_map(|a| Poly2::quadratic(a[0], a[1], a[2], a[3], a[4], a[5]))
}

fn arb_integrand() -> impl Strategy<Value = Poly2> {
    (arb_quadratic(), arb_quadratic()).prop_map(|(p, q)| p.try_mul(&q).unwrap())
}

fn arb_triangle() -> impl Strategy<Value = Triangle> {
    prop::array::uniform6(-2.0f64..2.0).prop_filter_map("thin", |v| {
        let t = Triangle::new(Point::new(v[0], v[1]), Point::new(v[2], v[3]), Point::new(v[4], v[5])).ok()?;
        (t.area() > 0.05).then_some(t)
    })
}

/// `|∫_T g|` or, when that cancels, the size of `g` times the area.
fn scale(g: &Poly2, t: &Triangle) -> f64 {
    let peak = t.vertices().iter().chain(core::iter::once(&t.centroid())).map(|&p| g.eval(p).abs()).fold(0.0, f64::max);
    triangle_integral(g, t).abs().max(peak * t.area())
}

#[test]
fn generators_hit_their_class() {
    for (k, class) in ConicClass::ALL.iter().enumerate() {
        let p = [0.4, -0.7, 0.3 - 0.1 * k as f64, 0.25, 0.1, -0.2];
        assert_eq!(Conic::new(conic_of(*class, p)).unwrap().class(), *class);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn complement_sums_to_the_triangle((class, f) in arb_conic(), g in arb_integrand(), t in arb_triangle()) {
        prop_assume!(Conic::new(f).unwrap().class() == class);
        let pos = integrate_region(&g, &f, &t).unwrap().value;
        let neg = integrate_region(&g, &(-f), &t).unwrap().value;
        prop_assert!((pos + neg - triangle_integral(&g, &t)).abs() <= 1e-10 * scale(&g, &t));
    }

    #[test]
    fn relabeling_vertices_changes_nothing((_c, f) in arb_conic(), g in arb_integrand(), t in arb_triangle()) {
        let [a, b, c] = t.vertices();
        let base = integrate_region(&g, &f, &t).unwrap().value;
        let flipped = integrate_region(&g, &f, &Triangle::new(b, a, c).unwrap()).unwrap().value;
        prop_assert!((base - flipped).abs() <= 1e-10 * scale(&g, &t));
    }

    #[test]
    fn split_at_an_interior_point_is_additive((_c, f) in arb_conic(), g in arb_integrand(), t in arb_triangle(), w in prop::array::uniform3(0.05f64..1.0)) {
        let s = w[0] + w[1] + w[2];
        let p = t.barycentric_point([w[0] / s, w[1] / s, w[2] / s]);
        let [a, b, c] = t.vertices();
        let mut parts = 0.0;
        for (u, v) in [(a, b), (b, c), (c, a)] {
            if let Ok(sub) = Triangle::new(u, v, p) {
                parts += integrate_region(&g, &f, &sub).unwrap().value;
            }
        }
        let whole = integrate_region(&g, &f, &t).unwrap().value;
        prop_assert!((parts - whole).abs() <= 1e-10 * scale(&g, &t));
    }

    #[test]
    fn squares_integrate_nonnegative((_c, f) in arb_conic(), q in arb_quadratic(), t in arb_triangle()) {
        let g = q.try_mul(&q).unwrap();
        prop_assert!(integrate_region(&g, &f, &t).unwrap().value >= -1e-12);
    }

    #[test]
    fn rigid_motion_is_equivariant((_c, f) in arb_conic(), g in arb_integrand(), t in arb_triangle(), theta in -3.2f64..3.2, dx in -3.0f64..3.0, dy in -3.0f64..3.0) {
        let m = AffineMap2::translation(Point::new(dx, dy)).after(&AffineMap2::rotation(theta));
        let inv = m.inverse();
        let [a, b, c] = t.vertices();
        let moved = Triangle::new(m.apply(a), m.apply(b), m.apply(c)).unwrap();
        let base = integrate_region(&g, &f, &t).unwrap().value;
        let after = integrate_region(&g.compose_affine(&inv), &f.compose_affine(&inv), &moved).unwrap().value;
        prop_assert!((base - after).abs() <= 1e-9 * scale(&g, &t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decompositions_are_certified(f in arb_quadratic(), t in arb_triangle()) {
        let c = Conic::new(f).unwrap();
        prop_assume!(c.class().is_nondegenerate());
        let trace = decompose(&c, &t).unwrap();
        prop_assert!(trace.pieces.len() <= 11);
        let area: f64 = trace.pieces.iter().map(|p| p.triangle.area()).sum();
        prop_assert!((area - t.area()).abs() <= 1e-12 * t.area());
        for p in &trace.pieces {
            prop_assert!(matches!(triconic::subdivide::triangle_freedom(&c, &p.triangle), FreeStatus::Free(_)));
        }
        // Internal edges may touch the conic but never cross it.
        let snap = 1e-9 * t.longest_edge();
        for &(p, q) in &trace.internal_edges {
            let crossing = c.segment_intersections(p, q).iter().any(|h| {
                h.multiplicity == 1 && (h.point - p).norm() > snap && (h.point - q).norm() > snap
            });
            prop_assert!(!crossing);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn agrees_with_the_oracle(f in arb_quadratic(), g in arb_integrand(), t in arb_triangle()) {
        let c = Conic::new(f).unwrap();
        prop_assume!(c.class().is_nondegenerate());
        let engine = integrate_region(&g, &f, &t).unwrap().value;
        let o = oracle_integrate(&g, &f, &t, 1e-8).unwrap();
        prop_assert!((engine - o.value).abs() <= (1e-7 * o.value.abs()).max(o.error_bound + 1e-9));
    }
}
