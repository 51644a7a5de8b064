use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::number::{self, serde_rational, Rational};

/// Tunable game constants. Pixel sizes are whole numbers; fuel amounts and
/// the step size are exact rationals. Deserializing a partial object fills
/// the rest from the defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct GameConfig {
    pub width: u32,
    pub height: u32,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    #[serde(with = "serde_rational")]
    pub tick_dec: Rational,
    #[serde(with = "serde_rational")]
    pub good_inc: Rational,
    #[serde(with = "serde_rational")]
    pub bad_dec: Rational,
    #[serde(with = "serde_rational")]
    pub max_fuel: Rational,
    pub gfuel_img_w: u32,
    pub gfuel_img_h: u32,
    pub bfuel_img_w: u32,
    pub bfuel_img_h: u32,
    pub rocket_img_w: u32,
    pub rocket_img_h: u32,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            width: 500,
            height: 500,
            delta: number::int(5),
            tick_dec: number::ratio(1, 10),
            good_inc: number::int(2),
            bad_dec: number::int(2),
            max_fuel: number::int(10),
            gfuel_img_w: 20,
            gfuel_img_h: 20,
            bfuel_img_w: 20,
            bfuel_img_h: 20,
            rocket_img_w: 30,
            rocket_img_h: 45,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid game configuration: {field} must be positive")]
pub struct ConfigError {
    pub field: &'static str,
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let pixels = [
            ("width", self.width),
            ("height", self.height),
            ("gfuel-img-w", self.gfuel_img_w),
            ("gfuel-img-h", self.gfuel_img_h),
            ("bfuel-img-w", self.bfuel_img_w),
            ("bfuel-img-h", self.bfuel_img_h),
            ("rocket-img-w", self.rocket_img_w),
            ("rocket-img-h", self.rocket_img_h),
        ];
        if let Some((field, _)) = pixels.iter().find(|(_, v)| *v == 0) {
            return Err(ConfigError { field });
        }
        let amounts = [
            ("delta", &self.delta),
            ("tick-dec", &self.tick_dec),
            ("good-inc", &self.good_inc),
            ("bad-dec", &self.bad_dec),
            ("max-fuel", &self.max_fuel),
        ];
        match amounts.iter().find(|(_, v)| **v <= number::int(0)) {
            Some((field, _)) => Err(ConfigError { field }),
            None => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let cfg: GameConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_overrides() {
        let cfg = GameConfig::from_json(r#"{"width": 300, "tick-dec": "1/4"}"#).unwrap();
        assert_eq!(cfg.width, 300);
        assert_eq!(cfg.tick_dec, number::ratio(1, 4));
        assert_eq!(cfg.height, 500);
    }

    #[test]
    fn invalid() {
        assert!(GameConfig::from_json(r#"{"width": 0}"#).unwrap_err().contains("width"));
        assert!(GameConfig::from_json(r#"{"delta": -1}"#).unwrap_err().contains("delta"));
        assert!(GameConfig::from_json(r#"{"height": -3}"#).is_err());
        assert!(GameConfig::from_json(r#"{"colour": 1}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = GameConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains(r#""tick-dec":"1/10""#), "{text}");
        assert_eq!(GameConfig::from_json(&text).unwrap(), cfg);
    }
}
