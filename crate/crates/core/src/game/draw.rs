use super::config::GameConfig;
use super::world::{Dir, World};
use crate::eval::{ImageExpr, Mode, Posn};
use crate::number::{self, Rational};

fn px(n: u32) -> Rational {
    number::int(n as i64)
}

fn place(image: ImageExpr, at: &Posn, base: ImageExpr) -> ImageExpr {
    ImageExpr::Place { image: Box::new(image), x: at.x.clone(), y: at.y.clone(), base: Box::new(base) }
}

/// Counter-clockwise degrees that turn the upright rocket to face `dir`.
pub fn rocket_rotation(dir: Dir) -> i64 {
    match dir {
        Dir::Up => 0,
        Dir::Left => 90,
        Dir::Down => 180,
        Dir::Right => 270,
    }
}

pub fn rocket_image(dir: Dir, cfg: &GameConfig) -> ImageExpr {
    let body = ImageExpr::Rect {
        width: px(cfg.rocket_img_w),
        height: px(cfg.rocket_img_h),
        mode: Mode::Solid,
        color: "gray".into(),
    };
    ImageExpr::Rotate { degrees: number::int(rocket_rotation(dir)), image: Box::new(body) }
}

pub fn gfuel_image(cfg: &GameConfig) -> ImageExpr {
    ImageExpr::Rect { width: px(cfg.gfuel_img_w), height: px(cfg.gfuel_img_h), mode: Mode::Solid, color: "green".into() }
}

/// A circle as wide as the configured bad-fuel image.
pub fn bfuel_image(cfg: &GameConfig) -> ImageExpr {
    ImageExpr::Circ { radius: number::ratio(cfg.bfuel_img_w as i64, 2), mode: Mode::Solid, color: "red".into() }
}

/// Purple bar ten pixels wide per unit of fuel.
pub fn flevel_bar(flevel: &Rational) -> ImageExpr {
    ImageExpr::Rect { width: flevel * number::int(10), height: number::int(35), mode: Mode::Solid, color: "purple".into() }
}

pub fn flevel_position(cfg: &GameConfig) -> Posn {
    Posn::new(px(cfg.width) - number::int(100), number::int(50))
}

pub fn draw_rocket(w: &World, cfg: &GameConfig, base: ImageExpr) -> ImageExpr {
    place(rocket_image(w.dir, cfg), &w.rocket, base)
}

pub fn draw_flevel(flevel: &Rational, cfg: &GameConfig, base: ImageExpr) -> ImageExpr {
    place(flevel_bar(flevel), &flevel_position(cfg), base)
}

pub fn draw_gfuel(at: &Posn, cfg: &GameConfig, base: ImageExpr) -> ImageExpr {
    place(gfuel_image(cfg), at, base)
}

pub fn draw_bfuel(at: &Posn, cfg: &GameConfig, base: ImageExpr) -> ImageExpr {
    place(bfuel_image(cfg), at, base)
}

pub fn background(cfg: &GameConfig) -> ImageExpr {
    ImageExpr::EmptyScene { width: px(cfg.width), height: px(cfg.height) }
}

/// The world drawn over the empty background: rocket first, then the fuel
/// level, the good fuel and the bad fuel on top.
pub fn draw_world(w: &World, cfg: &GameConfig) -> ImageExpr {
    draw_bfuel(
        &w.bfuel,
        cfg,
        draw_gfuel(&w.gfuel, cfg, draw_flevel(&w.flevel, cfg, draw_rocket(w, cfg, background(cfg)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> World {
        World {
            rocket: Posn::ints(10, 10),
            dir: Dir::Right,
            flevel: number::int(8),
            gfuel: Posn::ints(110, 120),
            bfuel: Posn::ints(340, 170),
        }
    }

    #[test]
    fn nesting_order() {
        let cfg = GameConfig::default();
        let scene = draw_world(&sample(), &cfg);
        let ImageExpr::Place { image, x, base, .. } = &scene else { panic!() };
        assert!(matches!(**image, ImageExpr::Circ { .. }));
        assert_eq!(*x, number::int(340));
        let ImageExpr::Place { image, base, .. } = &**base else { panic!() };
        assert!(matches!(&**image, ImageExpr::Rect { color, .. } if color == "green"));
        let ImageExpr::Place { image, x, base, .. } = &**base else { panic!() };
        assert_eq!(**image, flevel_bar(&number::int(8)));
        assert_eq!(*x, number::int(400));
        let ImageExpr::Place { image, base, .. } = &**base else { panic!() };
        assert!(matches!(&**image, ImageExpr::Rotate { degrees, .. } if *degrees == number::int(270)));
        assert_eq!(**base, background(&cfg));
    }

    #[test]
    fn empty_tank_bar() {
        assert_eq!(flevel_bar(&number::int(0)).width(), number::int(0));
        assert_eq!(flevel_bar(&number::ratio(99, 10)).width(), number::int(99));
    }

    #[test]
    fn pure() {
        let cfg = GameConfig::default();
        assert_eq!(draw_world(&sample(), &cfg), draw_world(&sample().clone(), &cfg));
        assert_eq!(draw_world(&sample(), &cfg).dims(), (number::int(500), number::int(500)));
    }
}
