use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

/// 64-bit linear congruential generator. The constants and the output
/// function are fixed so that every implementation replays the same games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState(pub u64);

impl RngState {
    pub fn seeded(seed: u64) -> Self {
        RngState(seed)
    }

    /// Advances the state and returns its high 32 bits.
    pub fn next_u32(&mut self) -> u32 {
        self.0 = self.0.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        (self.0 >> 32) as u32
    }

    /// Uniform draw from `[0, n)`: `floor(output32 * n / 2^32)`.
    pub fn below(&mut self, n: &BigInt) -> BigInt {
        let out = BigInt::from(self.next_u32());
        (out * n) >> 32u32
    }

    pub fn below_u64(&mut self, n: u64) -> u64 {
        ((self.next_u32() as u128 * n as u128) >> 32) as u64
    }
}
