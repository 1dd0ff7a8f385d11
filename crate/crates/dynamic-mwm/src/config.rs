use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::EngineError;

/// Level-partition mode: plain geometric levels, or levels shifted by a
/// random offset `r` with every edge accounted at its rounded weight
/// `alpha^(level + r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Rounded,
}

/// Immutable per-engine configuration. In rounded mode `r` is either supplied
/// by the caller or drawn once from the seeded generator; it never changes
/// over the engine's lifetime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundingConfig {
    pub alpha: f64,
    pub mode: Mode,
    /// Offset in (0,1]; meaningful only in rounded mode.
    pub r: f64,
    pub seed: u64,
}

impl RoundingConfig {
    pub fn plain(alpha: f64) -> Result<Self, EngineError> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(EngineError::InvalidConfig(format!(
                "alpha must be a finite number > 1, got {alpha}"
            )));
        }
        Ok(RoundingConfig {
            alpha,
            mode: Mode::Plain,
            r: 0.0,
            seed: 0,
        })
    }

    /// Rounded-mode config. `r = None` draws the offset uniformly from (0,1]
    /// using `seed`.
    pub fn rounded(alpha: f64, r: Option<f64>, seed: u64) -> Result<Self, EngineError> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(EngineError::InvalidConfig(format!(
                "alpha must be a finite number > 1, got {alpha}"
            )));
        }
        let r = match r {
            Some(r) => {
                if !(r > 0.0 && r <= 1.0) {
                    return Err(EngineError::InvalidConfig(format!(
                        "r must lie in (0,1], got {r}"
                    )));
                }
                r
            }
            None => draw_offset(seed),
        };
        Ok(RoundingConfig {
            alpha,
            mode: Mode::Rounded,
            r,
            seed,
        })
    }

    /// Level offset: 0 in plain mode, `r` in rounded mode.
    pub fn offset(&self) -> f64 {
        match self.mode {
            Mode::Plain => 0.0,
            Mode::Rounded => self.r,
        }
    }
}

/// Uniform draw from (0,1].
pub fn draw_offset(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    1.0 - rng.gen::<f64>()
}
