//! SVG 1.1 rendering of a decomposition: triangle, conic, labeled pieces.
//!
//! The canvas is 800 units wide and fitted to the triangle's bounding box
//! with a 10% margin on each axis; `y` points up in the drawing. All numbers
//! are printed with three decimals so output is byte-stable.

use std::fmt::Write;

use triconic::{Conic, IntegralResult, PieceKind, Point, StandardForm};

pub const WIDTH: f64 = 800.0;

// Largest allowed deviation of the polyline from the curve, in canvas units.
const FLATNESS: f64 = 0.25;
const MAX_REFINE: u32 = 12;
const START_SEGMENTS: usize = 32;

/// World-to-canvas map.
#[derive(Debug, Clone, Copy)]
struct View {
    x0: f64,
    y1: f64,
    scale: f64,
    height: f64,
}

impl View {
    fn fit(vertices: &[Point]) -> View {
        let (mut lo, mut hi) = (vertices[0], vertices[0]);
        for p in vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let scale = WIDTH / (1.2 * w);
        View { x0: lo.x - 0.1 * w, y1: hi.y + 0.1 * h, scale, height: 1.2 * h * scale }
    }

    fn map(&self, p: Point) -> Point {
        Point::new((p.x - self.x0) * self.scale, (self.y1 - p.y) * self.scale)
    }

    fn corners(&self) -> [Point; 4] {
        let (x1, y0) = (self.x0 + WIDTH / self.scale, self.y1 - self.height / self.scale);
        [Point::new(self.x0, y0), Point::new(x1, y0), Point::new(x1, self.y1), Point::new(self.x0, self.y1)]
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn points_attr(view: &View, pts: &[Point]) -> String {
    let mut s = String::new();
    for (k, p) in pts.iter().enumerate() {
        let q = view.map(*p);
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", num(q.x), num(q.y));
    }
    s
}

pub fn fill_color(kind: &PieceKind) -> &'static str {
    match kind {
        PieceKind::Free(case) => match case.label() {
            "free-0" => "#9ecae1",
            "free-1" => "#a1d99b",
            "free-2" => "#fdd0a2",
            "free-3" => "#fcbba1",
            _ => "#dadaeb",
        },
        PieceKind::Clipped(_) => "#d9d9d9",
    }
}

pub fn kind_label(kind: &PieceKind) -> &'static str {
    match kind {
        PieceKind::Free(case) => case.label(),
        PieceKind::Clipped(layout) => layout,
    }
}

type Curve = Box<dyn Fn(f64) -> Point>;

/// Parameterized pieces of the zero set in standard coordinates, long
/// enough to leave a disc of radius `r` about the standard origin.
fn standard_curves(form: StandardForm, r: f64) -> Vec<(Curve, f64, f64)> {
    let line = |d: Point, base: Point| -> (Curve, f64, f64) { (Box::new(move |t| base + d * t), -r, r) };
    match form {
        StandardForm::Ellipse { a, b } => {
            vec![(Box::new(move |t: f64| Point::new(a * t.cos(), b * t.sin())), 0.0, 2.0 * std::f64::consts::PI)]
        }
        StandardForm::Parabola { c } => {
            let x = r.min((r / c).sqrt());
            vec![(Box::new(move |t: f64| Point::new(t, c * t * t)), -x, x)]
        }
        StandardForm::Hyperbola { k } => {
            let s = k.sqrt();
            if r <= s {
                return Vec::new();
            }
            let top = (r / s).ln();
            vec![
                (Box::new(move |t: f64| Point::new(s * t.exp(), s * (-t).exp())), -top, top),
                (Box::new(move |t: f64| Point::new(-s * t.exp(), -s * (-t).exp())), -top, top),
            ]
        }
        StandardForm::ParallelLines { d } => {
            vec![line(Point::new(0.0, 1.0), Point::ORIGIN), line(Point::new(0.0, 1.0), Point::new(d, 0.0))]
        }
        StandardForm::CrossingLines { d1, d2 } => vec![line(d1, Point::ORIGIN), line(d2, Point::ORIGIN)],
        StandardForm::DoubleLine | StandardForm::SingleLine => vec![line(Point::new(0.0, 1.0), Point::ORIGIN)],
        StandardForm::Signed => Vec::new(),
    }
}

fn sample(view: &View, curve: &dyn Fn(f64) -> Point, t0: f64, t1: f64, out: &mut Vec<Point>) {
    fn refine(view: &View, curve: &dyn Fn(f64) -> Point, t0: f64, t1: f64, depth: u32, out: &mut Vec<Point>) {
        let (a, b) = (view.map(curve(t0)), view.map(curve(t1)));
        let tm = 0.5 * (t0 + t1);
        let m = view.map(curve(tm));
        let chord = b - a;
        let len = chord.norm();
        let dev = if len > 0.0 { chord.cross(m - a).abs() / len } else { (m - a).norm() };
        if depth < MAX_REFINE && dev > FLATNESS {
            refine(view, curve, t0, tm, depth + 1, out);
            refine(view, curve, tm, t1, depth + 1, out);
        } else {
            out.push(curve(t1));
        }
    }
    out.push(curve(t0));
    for k in 0..START_SEGMENTS {
        let a = t0 + (t1 - t0) * k as f64 / START_SEGMENTS as f64;
        let b = t0 + (t1 - t0) * (k + 1) as f64 / START_SEGMENTS as f64;
        refine(view, curve, a, b, 0, out);
    }
}

fn conic_polylines(view: &View, c: &Conic) -> Vec<Vec<Point>> {
    if c.to_standard().is_none() {
        return Vec::new();
    }
    let r = view.corners().iter().map(|&p| c.standard_point(p).norm()).fold(0.0, f64::max) * 1.05;
    standard_curves(c.standard_form(), r)
        .into_iter()
        .map(|(curve, t0, t1)| {
            let mut pts = Vec::new();
            let world = |t: f64| c.world_point(curve(t));
            sample(view, &world, t0, t1, &mut pts);
            pts
        })
        .collect()
}

/// One side of the region: its conic and the engine's pieces for it.
pub struct Side<'a> {
    pub conic: &'a Conic,
    pub result: &'a IntegralResult,
}

/// The SVG document. Pieces of the first side are filled by case; pieces of
/// later sides (band jobs) are outlined with dashes. Labels number pieces
/// in trace order across sides.
pub fn render(triangle: [Point; 3], sides: &[Side<'_>]) -> String {
    let view = View::fit(&triangle);
    let (w, h) = (num(WIDTH), num(view.height));
    let mut s = String::new();
    let pieces: usize = sides.iter().map(|sd| sd.result.pieces.len()).sum();
    let classes: Vec<&str> = sides.iter().map(|sd| sd.result.class.name()).collect();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">");
    let _ = writeln!(s, "<title>{}, {pieces} pieces</title>", classes.join(" / "));
    let _ = writeln!(s, "<defs><clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\"/></clipPath></defs>");
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>");

    s.push_str("<g id=\"pieces\" stroke=\"#636363\" stroke-width=\"1\" stroke-linejoin=\"round\">\n");
    let mut labels = Vec::new();
    for (k, side) in sides.iter().enumerate() {
        for piece in &side.result.pieces {
            let style =
                if k == 0 { format!("fill=\"{}\"", fill_color(&piece.kind)) } else { "fill=\"none\" stroke-dasharray=\"6 4\"".to_string() };
            let _ =
                writeln!(s, "<polygon class=\"{}\" {style} points=\"{}\"/>", kind_label(&piece.kind), points_attr(&view, &piece.polygon));
            let n = piece.polygon.len() as f64;
            let c = piece.polygon.iter().fold(Point::ORIGIN, |acc, &p| acc + p) * (1.0 / n);
            labels.push((view.map(c), format!("{} {}", labels.len(), kind_label(&piece.kind))));
        }
    }
    s.push_str("</g>\n");

    let _ = writeln!(
        s,
        "<polygon id=\"triangle\" fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"{}\"/>",
        points_attr(&view, &triangle)
    );

    s.push_str("<g id=\"conic\" clip-path=\"url(#view)\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\">\n");
    for side in sides {
        for line in conic_polylines(&view, side.conic) {
            let _ = writeln!(s, "<polyline points=\"{}\"/>", points_attr(&view, &line));
        }
    }
    s.push_str("</g>\n");

    s.push_str("<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n");
    for (p, text) in labels {
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\">{text}</text>", num(p.x), num(p.y));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use triconic::{Integrator, Poly2, Triangle};

    #[test]
    fn zero_is_unsigned() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(2.5), "2.500");
    }

    #[test]
    fn view_has_ten_percent_margin() {
        let v = View::fit(&[Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(0.0, 5.0)]);
        let a = v.map(Point::new(0.0, 5.0));
        assert!((a.x - WIDTH / 12.0).abs() < 1e-9 && (a.y - 0.5 * v.scale).abs() < 1e-9);
        assert!((v.height - 6.0 * v.scale).abs() < 1e-9);
    }

    #[test]
    fn ellipse_polyline_stays_on_the_curve() {
        let f = Poly2::quadratic(-0.25, 0.0, -1.0, 0.0, 0.0, 1.0);
        let c = Conic::new(f).unwrap();
        let view = View::fit(&[Point::new(-3.0, -3.0), Point::new(3.0, -3.0), Point::new(0.0, 4.0)]);
        let lines = conic_polylines(&view, &c);
        assert_eq!(lines.len(), 1);
        for p in &lines[0] {
            assert!(f.eval(*p).abs() < 1e-12);
        }
    }

    #[test]
    fn labels_follow_the_trace() {
        let t = Triangle::new(Point::new(-3.0, -3.0), Point::new(3.0, -3.0), Point::new(0.0, 4.0)).unwrap();
        let f = Poly2::quadratic(-1.0, 0.0, -1.0, 0.0, 0.0, 1.0);
        let r = Integrator::new().integrate_region(&Poly2::constant(1.0), &f, &t).unwrap();
        let c = Conic::new(f).unwrap();
        let svg = render(t.vertices(), &[Side { conic: &c, result: &r }]);
        assert_eq!(svg.matches("<text ").count(), r.pieces.len());
        assert_eq!(svg, render(t.vertices(), &[Side { conic: &c, result: &r }]));
    }
}
