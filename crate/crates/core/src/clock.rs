//! Simulation clock with time scaling.
//!
//! Game time advances as `real_elapsed * time_scale`; a scale of 8 plays one
//! real minute as eight game minutes. Both accumulators are f64 seconds since
//! scenario start.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameClock {
    pub real_elapsed: f64,
    pub game_time: f64,
    pub time_scale: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ClockError {
    #[error("clock step must be non-negative, got {0}")]
    NegativeStep(f64),
}

impl GameClock {
    pub fn new(time_scale: f64) -> GameClock {
        assert!(time_scale > 0.0, "time_scale must be positive");
        GameClock { real_elapsed: 0.0, game_time: 0.0, time_scale }
    }

    /// Advance by `real_dt` wall-clock seconds.
    pub fn advance(&mut self, real_dt: f64) -> Result<(), ClockError> {
        if real_dt < 0.0 || real_dt.is_nan() {
            return Err(ClockError::NegativeStep(real_dt));
        }
        self.real_elapsed += real_dt;
        self.game_time += real_dt * self.time_scale;
        Ok(())
    }

    /// Game seconds that one step of `real_dt` adds.
    pub fn game_dt(&self, real_dt: f64) -> f64 {
        real_dt * self.time_scale
    }
}
