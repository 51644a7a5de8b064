use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::number::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Posn {
    pub x: Rational,
    pub y: Rational,
}

impl Posn {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self { x: number::int(x), y: number::int(y) }
    }
}

impl fmt::Display for Posn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(make-posn {} {})", number::format_literal(&self.x), number::format_literal(&self.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Solid,
    Outline,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "solid" => Some(Mode::Solid),
            "outline" => Some(Mode::Outline),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Solid => "solid",
            Mode::Outline => "outline",
        }
    }
}

/// Images are kept as the expression that built them; nothing is rasterized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ImageExpr {
    EmptyScene { width: Rational, height: Rational },
    Rect { width: Rational, height: Rational, mode: Mode, color: String },
    Circ { radius: Rational, mode: Mode, color: String },
    Rotate { degrees: Rational, image: Box<ImageExpr> },
    Place { image: Box<ImageExpr>, x: Rational, y: Rational, base: Box<ImageExpr> },
}

impl ImageExpr {
    pub fn width(&self) -> Rational {
        self.dims().0
    }

    pub fn height(&self) -> Rational {
        self.dims().1
    }

    /// Bounding-box dimensions. Right-angle rotations are exact; any other
    /// angle rounds the rotated bounding box to whole pixels.
    pub fn dims(&self) -> (Rational, Rational) {
        match self {
            ImageExpr::EmptyScene { width, height } | ImageExpr::Rect { width, height, .. } => {
                (width.clone(), height.clone())
            }
            ImageExpr::Circ { radius, .. } => {
                let d = radius * number::int(2);
                (d.clone(), d)
            }
            ImageExpr::Rotate { degrees, image } => {
                let (w, h) = image.dims();
                let turn = degrees % number::int(360);
                let turn = if turn.is_negative() { turn + number::int(360) } else { turn };
                if turn.is_zero() || turn == number::int(180) {
                    (w, h)
                } else if turn == number::int(90) || turn == number::int(270) {
                    (h, w)
                } else {
                    let rad = number::to_f64(&turn).to_radians();
                    let (wf, hf) = (number::to_f64(&w), number::to_f64(&h));
                    let bw = wf * rad.cos().abs() + hf * rad.sin().abs();
                    let bh = wf * rad.sin().abs() + hf * rad.cos().abs();
                    (number::int(bw.round() as i64), number::int(bh.round() as i64))
                }
            }
            ImageExpr::Place { base, .. } => base.dims(),
        }
    }
}

impl ImageExpr {
    /// Nested `{op, …}` objects mirroring the constructors.
    pub fn to_json(&self) -> serde_json::Value {
        let n = number::to_json;
        match self {
            ImageExpr::EmptyScene { width, height } => {
                serde_json::json!({ "op": "empty", "width": n(width), "height": n(height) })
            }
            ImageExpr::Rect { width, height, mode, color } => serde_json::json!({
                "op": "rect", "width": n(width), "height": n(height), "mode": mode, "color": color,
            }),
            ImageExpr::Circ { radius, mode, color } => {
                serde_json::json!({ "op": "circ", "radius": n(radius), "mode": mode, "color": color })
            }
            ImageExpr::Rotate { degrees, image } => {
                serde_json::json!({ "op": "rotate", "degrees": n(degrees), "image": image.to_json() })
            }
            ImageExpr::Place { image, x, y, base } => serde_json::json!({
                "op": "place", "image": image.to_json(), "x": n(x), "y": n(y), "base": base.to_json(),
            }),
        }
    }
}

impl fmt::Display for ImageExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = number::format_literal;
        match self {
            ImageExpr::EmptyScene { width, height } => write!(f, "(empty-scene {} {})", n(width), n(height)),
            ImageExpr::Rect { width, height, mode, color } => {
                write!(f, "(rectangle {} {} \"{}\" \"{}\")", n(width), n(height), mode.as_str(), color)
            }
            ImageExpr::Circ { radius, mode, color } => {
                write!(f, "(circle {} \"{}\" \"{}\")", n(radius), mode.as_str(), color)
            }
            ImageExpr::Rotate { degrees, image } => write!(f, "(rotate {} {})", n(degrees), image),
            ImageExpr::Place { image, x, y, base } => {
                write!(f, "(place-image {} {} {} {})", image, n(x), n(y), base)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Num(Rational),
    Str(String),
    Bool(bool),
    Posn(Posn),
    Image(Box<ImageExpr>),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Num(number::int(n))
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Str(_) => "string",
            Value::Bool(_) => "boolean",
            Value::Posn(_) => "posn",
            Value::Image(_) => "image",
        }
    }

    /// Numeric comparison with tolerance at every numeric leaf; all other
    /// structure must match exactly.
    pub fn within(&self, other: &Value, tol: &Rational) -> bool {
        let close = |a: &Rational, b: &Rational| (a - b).abs() <= *tol;
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => close(a, b),
            (Value::Posn(a), Value::Posn(b)) => close(&a.x, &b.x) && close(&a.y, &b.y),
            (Value::Image(a), Value::Image(b)) => image_within(a, b, &close),
            (a, b) => a == b,
        }
    }
}

fn image_within(a: &ImageExpr, b: &ImageExpr, close: &impl Fn(&Rational, &Rational) -> bool) -> bool {
    use ImageExpr::*;
    match (a, b) {
        (EmptyScene { width: w1, height: h1 }, EmptyScene { width: w2, height: h2 }) => close(w1, w2) && close(h1, h2),
        (
            Rect { width: w1, height: h1, mode: m1, color: c1 },
            Rect { width: w2, height: h2, mode: m2, color: c2 },
        ) => close(w1, w2) && close(h1, h2) && m1 == m2 && c1 == c2,
        (Circ { radius: r1, mode: m1, color: c1 }, Circ { radius: r2, mode: m2, color: c2 }) => {
            close(r1, r2) && m1 == m2 && c1 == c2
        }
        (Rotate { degrees: d1, image: i1 }, Rotate { degrees: d2, image: i2 }) => {
            close(d1, d2) && image_within(i1, i2, close)
        }
        (Place { image: i1, x: x1, y: y1, base: b1 }, Place { image: i2, x: x2, y: y2, base: b2 }) => {
            close(x1, x2) && close(y1, y2) && image_within(i1, i2, close) && image_within(b1, b2, close)
        }
        _ => false,
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(n) => f.write_str(&number::format_literal(n)),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Bool(b) => f.write_str(if *b { "#true" } else { "#false" }),
            Value::Posn(p) => p.fmt(f),
            Value::Image(i) => i.fmt(f),
        }
    }
}
