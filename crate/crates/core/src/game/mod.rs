//! The rocket game: a world of rocket, direction, fuel level and two fuel
//! cells, advanced by key presses and clock ticks and drawn as an image
//! expression.

mod config;
mod draw;
mod world;

pub use config::{ConfigError, GameConfig};
pub use draw::{
    background, bfuel_image, draw_bfuel, draw_flevel, draw_gfuel, draw_rocket, draw_world, flevel_bar,
    flevel_position, gfuel_image, rocket_image, rocket_rotation,
};
pub use world::{
    consumed, distance_on_x, distance_on_y, game_over, handle_key, move_rocket, move_rocket_down, move_rocket_left,
    move_rocket_right, move_rocket_up, posn_json, respawn, tick, Dir, World,
};

use crate::eval::{ImageExpr, RngState};

/// A running game: the world together with its configuration, random
/// stream and tick counter.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    pub config: GameConfig,
    pub world: World,
    pub rng: RngState,
    pub ticks: u64,
}

impl Game {
    pub fn new(seed: u64, config: GameConfig) -> Result<Game, ConfigError> {
        config.validate()?;
        let mut rng = RngState::seeded(seed);
        let world = World::initial(&config, &mut rng);
        Ok(Game { config, world, rng, ticks: 0 })
    }

    pub fn over(&self) -> bool {
        game_over(&self.world)
    }

    /// Applies a key press; finished games ignore it.
    pub fn key(&mut self, key: &str) {
        if !self.over() {
            self.world = handle_key(&self.world, key);
        }
    }

    /// Advances one tick; finished games stay as they are.
    pub fn tick(&mut self) {
        if self.over() {
            return;
        }
        let (world, rng) = tick(&self.world, &self.config, self.rng);
        self.world = world;
        self.rng = rng;
        self.ticks += 1;
    }

    pub fn scene(&self) -> ImageExpr {
        draw_world(&self.world, &self.config)
    }
}
