//! Example programs bundled with the library: worked designs from the
//! rocket-game course material and deliberately broken variants of them.

pub const RECT_AREA: &str = include_str!("../../../corpus/rect-area.rkt");
/// `rect-area` with an extra test whose arguments disagree with its sample.
pub const RECT_AREA_BAD_TEST: &str = include_str!("../../../corpus/rect-area-bad-test.rkt");
pub const AREA_SAMPLES: &str = include_str!("../../../corpus/area-samples.rkt");
pub const CONSUMED: &str = include_str!("../../../corpus/consumed.rkt");
/// Tests name the function `eaten?` while the definition says `consumed?`.
pub const EATEN_RAW: &str = include_str!("../../../corpus/eaten-raw.rkt");
pub const MOVE_ROCKET: &str = include_str!("../../../corpus/move-rocket.rkt");
/// `move-rocket` without any test moving left.
pub const MOVE_ROCKET_MISSING_LEFT: &str = include_str!("../../../corpus/move-rocket-missing-left.rkt");
/// Samples referring to an unbound `a-rocket`, and a "down" test expecting
/// the rocket to move up.
pub const MOVE_ROCKET_RAW: &str = include_str!("../../../corpus/move-rocket-raw.rkt");
pub const PIECEWISE: &str = include_str!("../../../corpus/piecewise.rkt");
/// Calls drawing helpers that are not defined and applies `world-bfuel` twice.
pub const DRAW_WORLD_RAW: &str = include_str!("../../../corpus/draw-world-raw.rkt");

pub const ALL: &[(&str, &str)] = &[
    ("rect-area.rkt", RECT_AREA),
    ("rect-area-bad-test.rkt", RECT_AREA_BAD_TEST),
    ("area-samples.rkt", AREA_SAMPLES),
    ("consumed.rkt", CONSUMED),
    ("eaten-raw.rkt", EATEN_RAW),
    ("move-rocket.rkt", MOVE_ROCKET),
    ("move-rocket-missing-left.rkt", MOVE_ROCKET_MISSING_LEFT),
    ("move-rocket-raw.rkt", MOVE_ROCKET_RAW),
    ("piecewise.rkt", PIECEWISE),
    ("draw-world-raw.rkt", DRAW_WORLD_RAW),
];
