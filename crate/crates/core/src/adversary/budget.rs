//! Leaky-bucket injection budget.
//!
//! A `(rho, sigma)` budget holds at most `sigma` tokens and refills at `rho`
//! tokens per virtual second; each injected packet costs one token. Over any
//! interval of length `d` the adversary can therefore spend at most
//! `rho * d + sigma` tokens, which is the stealth envelope the analysis
//! assumes.
//!
//! Tokens are stored in units of 1e-12 so that `rate * elapsed_microseconds`
//! is exact integer arithmetic: refill never drifts and never rounds up.

use crate::sim::SimTime;

const TOKEN_SCALE: u128 = 1_000_000_000_000;

#[derive(Debug, Clone)]
pub struct LeakyBucket {
    tokens: u128,
    capacity: u128,
    /// Refill rate in micro-tokens per second.
    rate_micro: u64,
    last_refill: SimTime,
}

impl LeakyBucket {
    /// Starts full. `rho_per_sec` is quantized to a millionth of a token.
    pub fn new(rho_per_sec: f64, sigma: u32) -> Self {
        assert!(rho_per_sec > 0.0, "refill rate must be positive");
        let capacity = sigma as u128 * TOKEN_SCALE;
        LeakyBucket {
            tokens: capacity,
            capacity,
            rate_micro: (rho_per_sec * 1e6).round() as u64,
            last_refill: SimTime::ZERO,
        }
    }

    fn refill(&mut self, now: SimTime) {
        let elapsed = now
            .checked_sub(self.last_refill)
            .expect("budget clock moved backwards");
        // micro-tokens/second times microseconds is exactly 1e-12 tokens.
        let gained = self.rate_micro as u128 * elapsed.as_micros() as u128;
        self.tokens = (self.tokens + gained).min(self.capacity);
        self.last_refill = now;
    }

    /// Spends `n` tokens if the refilled balance covers them. A denied
    /// request changes nothing, so the balance keeps accumulating.
    pub fn admit(&mut self, now: SimTime, n: u32) -> bool {
        self.refill(now);
        let cost = n as u128 * TOKEN_SCALE;
        if self.tokens >= cost {
            self.tokens -= cost;
            true
        } else {
            false
        }
    }

    /// Current balance in tokens, for inspection.
    pub fn tokens(&self) -> f64 {
        self.tokens as f64 / TOKEN_SCALE as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burst_then_slow_recovery() {
        let mut b = LeakyBucket::new(0.3, 3);
        assert!(b.admit(SimTime::ZERO, 3));
        assert_eq!(b.tokens(), 0.0);

        // 0.3 tokens/s for 5 s is 1.5 tokens: not enough for another burst.
        assert!(!b.admit(SimTime::from_secs(5), 3));
        assert_eq!(b.tokens(), 1.5);

        assert!(b.admit(SimTime::from_secs(10), 3));
        assert_eq!(b.tokens(), 0.0);
    }

    #[test]
    fn balance_caps_at_sigma() {
        let mut b = LeakyBucket::new(10.0, 3);
        assert!(!b.admit(SimTime::from_secs(100), 4));
        assert_eq!(b.tokens(), 3.0);
    }

    #[test]
    fn single_token_spends_are_exact() {
        let mut b = LeakyBucket::new(1.0, 1);
        assert!(b.admit(SimTime::ZERO, 1));
        assert!(!b.admit(SimTime::from_micros(999_999), 1));
        assert!(b.admit(SimTime::from_micros(1_000_000), 1));
    }

    #[test]
    fn fractional_rates_accumulate_exactly() {
        let mut b = LeakyBucket::new(0.3, 3);
        assert!(b.admit(SimTime::ZERO, 3));
        let mut t = SimTime::ZERO;
        // 333 steps of 10 ms each accrue 0.999 tokens with no rounding loss.
        for _ in 0..333 {
            t += SimTime::from_millis(10);
            assert!(!b.admit(t, 1));
        }
        assert_eq!(b.tokens(), 0.999);
    }
}
