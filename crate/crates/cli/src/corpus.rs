//! Canonical job files and the checked-in subdivision SVGs.

pub const DISC: &str = include_str!("../jobs/disc.json");
pub const HALF_DISC: &str = include_str!("../jobs/half_disc.json");
pub const SEGMENT: &str = include_str!("../jobs/segment.json");
pub const ANNULUS: &str = include_str!("../jobs/annulus.json");
pub const DISJOINT: &str = include_str!("../jobs/disjoint.json");
pub const SEVEN_PIECES: &str = include_str!("../jobs/seven_pieces.json");
pub const CROSSING_LINES: &str = include_str!("../jobs/crossing_lines.json");
pub const PARABOLA_CAP: &str = include_str!("../jobs/parabola_cap.json");

/// `(name, job, expected SVG)`; the SVG lives in `tests/golden/<name>.svg`.
pub const GOLDEN: [(&str, &str, &str); 5] = [
    ("disjoint", DISJOINT, include_str!("../tests/golden/disjoint.svg")),
    ("seven_pieces", SEVEN_PIECES, include_str!("../tests/golden/seven_pieces.svg")),
    ("crossing_lines", CROSSING_LINES, include_str!("../tests/golden/crossing_lines.svg")),
    ("disc", DISC, include_str!("../tests/golden/disc.svg")),
    ("parabola_cap", PARABOLA_CAP, include_str!("../tests/golden/parabola_cap.svg")),
];
