//! Congestion window arithmetic.
//!
//! The window is measured in MSS units with 16 fractional bits so window
//! math is exact integer arithmetic, identical on every platform. Floating
//! point is kept out of the sender.

use std::fmt;

pub const FRAC_BITS: u32 = 16;
const ONE_RAW: u64 = 1 << FRAC_BITS;

/// A window size in MSS units, fixed point with 16 fractional bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WindowSize(u64);

impl WindowSize {
    pub const ONE: WindowSize = WindowSize(ONE_RAW);

    pub fn from_mss(mss_units: u64) -> Self {
        WindowSize(mss_units << FRAC_BITS)
    }

    pub fn from_raw(raw: u64) -> Self {
        WindowSize(raw)
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    /// Whole-MSS part, which is what send eligibility compares against.
    pub fn floor_mss(self) -> u64 {
        self.0 >> FRAC_BITS
    }

    /// Half the window, rounded down to whole MSS. Used for ssthresh.
    pub fn half_floor_mss(self) -> u64 {
        self.floor_mss() / 2
    }

    pub fn add_mss(self, mss_units: u64) -> Self {
        WindowSize(self.0 + (mss_units << FRAC_BITS))
    }

    pub fn min(self, other: WindowSize) -> Self {
        WindowSize(self.0.min(other.0))
    }

    /// Exact floating-point value; raw windows stay far below 2^53.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / ONE_RAW as f64
    }
}

impl fmt::Display for WindowSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}
