use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::GameConfig;
use crate::eval::{Posn, RngState};
use crate::number::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Up,
    Down,
    Left,
    Right,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Up, Dir::Down, Dir::Left, Dir::Right];

    /// Arrow key names; anything else is not a direction.
    pub fn from_key(key: &str) -> Option<Dir> {
        match key {
            "up" => Some(Dir::Up),
            "down" => Some(Dir::Down),
            "left" => Some(Dir::Left),
            "right" => Some(Dir::Right),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dir::Up => "up",
            Dir::Down => "down",
            Dir::Left => "left",
            Dir::Right => "right",
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    pub rocket: Posn,
    pub dir: Dir,
    pub flevel: Rational,
    pub gfuel: Posn,
    pub bfuel: Posn,
}

impl World {
    /// Rocket centered and pointing up with a full tank; good then bad fuel
    /// placed by two draws each from `rng`.
    pub fn initial(cfg: &GameConfig, rng: &mut RngState) -> World {
        let rocket = Posn::new(number::ratio(cfg.width as i64, 2), number::ratio(cfg.height as i64, 2));
        let gfuel = respawn(cfg, rng);
        let bfuel = respawn(cfg, rng);
        World { rocket, dir: Dir::Up, flevel: cfg.max_fuel.clone(), gfuel, bfuel }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rocket": posn_json(&self.rocket),
            "dir": self.dir,
            "flevel": number::to_json(&self.flevel),
            "gfuel": posn_json(&self.gfuel),
            "bfuel": posn_json(&self.bfuel),
            "over": game_over(self),
        })
    }
}

pub fn posn_json(p: &Posn) -> serde_json::Value {
    json!({ "x": number::to_json(&p.x), "y": number::to_json(&p.y) })
}

fn clamp(v: Rational, hi: u32) -> Rational {
    let hi = number::int(hi as i64);
    if v.is_negative() {
        number::int(0)
    } else if v > hi {
        hi
    } else {
        v
    }
}

fn clamped(x: Rational, y: Rational, cfg: &GameConfig) -> Posn {
    Posn::new(clamp(x, cfg.width), clamp(y, cfg.height))
}

pub fn move_rocket_up(r: &Posn, cfg: &GameConfig) -> Posn {
    clamped(r.x.clone(), &r.y - &cfg.delta, cfg)
}

pub fn move_rocket_down(r: &Posn, cfg: &GameConfig) -> Posn {
    clamped(r.x.clone(), &r.y + &cfg.delta, cfg)
}

pub fn move_rocket_left(r: &Posn, cfg: &GameConfig) -> Posn {
    clamped(&r.x - &cfg.delta, r.y.clone(), cfg)
}

pub fn move_rocket_right(r: &Posn, cfg: &GameConfig) -> Posn {
    clamped(&r.x + &cfg.delta, r.y.clone(), cfg)
}

pub fn move_rocket(r: &Posn, dir: Dir, cfg: &GameConfig) -> Posn {
    match dir {
        Dir::Up => move_rocket_up(r, cfg),
        Dir::Down => move_rocket_down(r, cfg),
        Dir::Left => move_rocket_left(r, cfg),
        Dir::Right => move_rocket_right(r, cfg),
    }
}

pub fn distance_on_x(a: &Posn, b: &Posn) -> Rational {
    (&a.x - &b.x).abs()
}

pub fn distance_on_y(a: &Posn, b: &Posn) -> Rational {
    (&a.y - &b.y).abs()
}

/// The rocket has consumed the fuel when it lies within half the fuel
/// image's width and height of it, boundary included.
pub fn consumed(rocket: &Posn, fuel: &Posn, img_w: u32, img_h: u32) -> bool {
    distance_on_x(rocket, fuel) <= number::ratio(img_w as i64, 2)
        && distance_on_y(rocket, fuel) <= number::ratio(img_h as i64, 2)
}

pub fn respawn(cfg: &GameConfig, rng: &mut RngState) -> Posn {
    let x = rng.below_u64(cfg.width as u64);
    let y = rng.below_u64(cfg.height as u64);
    Posn::ints(x as i64, y as i64)
}

/// Arrow keys turn the rocket; every other key is ignored.
pub fn handle_key(w: &World, key: &str) -> World {
    match Dir::from_key(key) {
        Some(dir) => World { dir, ..w.clone() },
        None => w.clone(),
    }
}

/// One clock tick: move, burn fuel, then collect good fuel and hit bad fuel
/// at the new position. Consumed fuel reappears at a random place. A world
/// whose tank is empty no longer changes.
pub fn tick(w: &World, cfg: &GameConfig, rng: RngState) -> (World, RngState) {
    if game_over(w) {
        return (w.clone(), rng);
    }
    let mut rng = rng;
    let zero = number::int(0);
    let rocket = move_rocket(&w.rocket, w.dir, cfg);
    let mut flevel = (&w.flevel - &cfg.tick_dec).max(zero.clone());
    let mut gfuel = w.gfuel.clone();
    let mut bfuel = w.bfuel.clone();
    if consumed(&rocket, &gfuel, cfg.gfuel_img_w, cfg.gfuel_img_h) {
        flevel = (flevel + &cfg.good_inc).min(cfg.max_fuel.clone());
        gfuel = respawn(cfg, &mut rng);
    }
    if consumed(&rocket, &bfuel, cfg.bfuel_img_w, cfg.bfuel_img_h) {
        flevel = (flevel - &cfg.bad_dec).max(zero);
        bfuel = respawn(cfg, &mut rng);
    }
    (World { rocket, dir: w.dir, flevel, gfuel, bfuel }, rng)
}

pub fn game_over(w: &World) -> bool {
    w.flevel <= number::int(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> GameConfig {
        GameConfig::default()
    }

    fn world(rocket: (i64, i64), dir: Dir, flevel: Rational, g: (i64, i64), b: (i64, i64)) -> World {
        World { rocket: Posn::ints(rocket.0, rocket.1), dir, flevel, gfuel: Posn::ints(g.0, g.1), bfuel: Posn::ints(b.0, b.1) }
    }

    #[test]
    fn moves() {
        let c = cfg();
        assert_eq!(move_rocket_up(&Posn::ints(5, 15), &c), Posn::ints(5, 10));
        assert_eq!(move_rocket_left(&Posn::ints(32, 51), &c), Posn::ints(27, 51));
        assert_eq!(move_rocket_up(&Posn::ints(10, 2), &c), Posn::ints(10, 0));
        assert_eq!(move_rocket(&Posn::ints(45, 18), Dir::Right, &c), Posn::ints(50, 18));
        assert_eq!(move_rocket(&Posn::ints(98, 98), Dir::Left, &c), Posn::ints(93, 98));
        assert_eq!(move_rocket(&Posn::ints(100, 80), Dir::Down, &c), Posn::ints(100, 85));
        assert_eq!(move_rocket(&Posn::ints(498, 80), Dir::Right, &c), Posn::ints(500, 80));
    }

    #[test]
    fn distances_and_consumption() {
        let (a, b) = (Posn::ints(100, 340), Posn::ints(105, 335));
        assert_eq!((distance_on_x(&a, &b), distance_on_y(&a, &b)), (number::int(5), number::int(5)));
        let (a, b) = (Posn::ints(25, 10), Posn::ints(500, 450));
        assert_eq!((distance_on_x(&a, &b), distance_on_y(&a, &b)), (number::int(475), number::int(440)));
        assert_eq!(distance_on_x(&a, &a), number::int(0));
        assert!(consumed(&Posn::ints(5, 20), &Posn::ints(4, 20), 20, 20));
        assert!(!consumed(&Posn::ints(25, 10), &Posn::ints(320, 450), 20, 20));
        assert!(consumed(&Posn::ints(10, 0), &Posn::ints(0, 0), 20, 20));
        assert!(!consumed(&Posn::ints(11, 0), &Posn::ints(0, 0), 20, 20));
    }

    #[test]
    fn keys() {
        let w = world((1, 1), Dir::Up, number::int(10), (0, 0), (0, 0));
        assert_eq!(handle_key(&w, "left").dir, Dir::Left);
        assert_eq!(handle_key(&w, "left").rocket, w.rocket);
        assert_eq!(handle_key(&w, "a"), w);
        let left = handle_key(&w, "left");
        assert_eq!(handle_key(&left, "left"), left);
    }

    #[test]
    fn plain_tick() {
        let w = world((100, 100), Dir::Up, number::int(10), (400, 400), (50, 400));
        let (next, rng) = tick(&w, &cfg(), RngState::seeded(1));
        assert_eq!(next, world((100, 95), Dir::Up, number::ratio(99, 10), (400, 400), (50, 400)));
        assert_eq!(rng, RngState::seeded(1));
    }

    #[test]
    fn last_drop() {
        let w = world((100, 100), Dir::Up, number::ratio(1, 10), (400, 400), (50, 400));
        let (next, _) = tick(&w, &cfg(), RngState::seeded(1));
        assert_eq!(next.flevel, number::int(0));
        assert!(game_over(&next));
        assert_eq!(tick(&next, &cfg(), RngState::seeded(1)).0, next);
        assert!(!game_over(&w));
    }

    #[test]
    fn good_fuel_clamps_and_respawns() {
        let w = world((100, 105), Dir::Up, number::ratio(95, 10), (100, 100), (400, 400));
        let (next, _) = tick(&w, &cfg(), RngState::seeded(42));
        assert_eq!(next.flevel, number::int(10));
        assert_eq!(next.gfuel, Posn::ints(284, 112));
        assert_eq!(next.bfuel, w.bfuel);
    }

    #[test]
    fn both_fuels_in_one_tick() {
        let w = world((100, 105), Dir::Up, number::int(5), (100, 100), (104, 98));
        let (next, _) = tick(&w, &cfg(), RngState::seeded(42));
        assert_eq!(next.flevel, number::ratio(49, 10));
        assert_eq!(next.gfuel, Posn::ints(284, 112));
        assert_eq!(next.bfuel, Posn::ints(206, 315));
    }

    #[test]
    fn initial_world() {
        let mut rng = RngState::seeded(42);
        let w = World::initial(&cfg(), &mut rng);
        assert_eq!(w, world((250, 250), Dir::Up, number::int(10), (284, 112), (206, 315)));
        let j = w.to_json();
        assert_eq!(j["flevel"], 10);
        assert_eq!(j["dir"], "up");
        assert_eq!(j["over"], false);
        assert_eq!(j["gfuel"]["x"], 284);
    }
}
