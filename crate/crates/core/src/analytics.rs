//! Closed-form predictions for a periodically attacked Reno flow.
//!
//! A sender that loses one segment to fast retransmit every `epoch` seconds
//! settles into a sawtooth: the window is halved at each hit and regrows by
//! one segment per round trip in between. At equilibrium the regrowth equals
//! the halving, which pins the peak window and the average throughput to
//! quantities depending only on the epoch, the round-trip time, and the
//! segment size. These functions compute those fixed points, the number of
//! epochs needed to fall from a given starting window to the sawtooth, and
//! the replay-window sizing that decides which attacks are possible at all.
//!
//! Everything here is generic over the float scalar; the crate root exports
//! [`crate::Real`] as the default concrete choice. Quantities are in base SI
//! units: seconds, bytes, bytes per second. Windows count whole segments.

use num_traits::Float;

use crate::sim::SimTime;

/// Raised when a prediction is asked for outside its region of validity.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error(
        "initial window {initial_cwnd} is within two segments of the steady ceiling \
         {steady_cwnd}; there is no decay phase to count"
    )]
    NoDecayPhase { initial_cwnd: f64, steady_cwnd: f64 },
}

fn positive<F: Float>(name: &'static str, value: F) -> Result<F, AnalyticsError> {
    if value <= F::zero() {
        Err(AnalyticsError::NonPositive {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    } else {
        Ok(value)
    }
}

fn two<F: Float>() -> F {
    F::one() + F::one()
}

/// Peak of the steady sawtooth in segments: the window regrows by one
/// segment per round trip for `epoch / rtt` round trips, then is halved,
/// so the peak `c` satisfies `c / 2 + epoch / rtt = c`.
pub fn steady_state_cwnd_max<F: Float>(epoch: F, rtt: F) -> Result<F, AnalyticsError> {
    let epoch = positive("epoch", epoch)?;
    let rtt = positive("rtt", rtt)?;
    Ok(two::<F>() * epoch / rtt)
}

/// Mean steady throughput in bytes per second. Over one epoch the window
/// ramps linearly from half the peak to the peak, so the mean window is
/// three quarters of the peak and the flow moves that many segments per
/// round trip.
pub fn steady_state_throughput<F: Float>(
    epoch: F,
    rtt: F,
    mss_bytes: F,
) -> Result<F, AnalyticsError> {
    let epoch = positive("epoch", epoch)?;
    let rtt = positive("rtt", rtt)?;
    let mss = positive("mss_bytes", mss_bytes)?;
    let three = two::<F>() + F::one();
    Ok(three * epoch * mss / (two::<F>() * rtt * rtt))
}

/// Mean of the steady sawtooth in segments: the window ramps linearly from
/// half the peak to the peak, so the mean is three quarters of `2T/rtt`.
pub fn steady_state_cwnd_avg<F: Float>(epoch: F, rtt: F) -> Result<F, AnalyticsError> {
    let peak = steady_state_cwnd_max(epoch, rtt)?;
    let three = two::<F>() + F::one();
    Ok(three * peak / (two::<F>() * two::<F>()))
}

/// Throughput at the top of the sawtooth, just before a hit lands. This is
/// the ceiling the mean never reaches; comparisons against link capacity
/// should use it rather than the mean.
pub fn steady_state_throughput_peak<F: Float>(
    epoch: F,
    rtt: F,
    mss_bytes: F,
) -> Result<F, AnalyticsError> {
    let cwnd = steady_state_cwnd_max(epoch, rtt)?;
    let mss = positive("mss_bytes", mss_bytes)?;
    Ok(cwnd * mss / rtt)
}

/// Number of epochs for the window to fall from `initial_cwnd` to the
/// steady sawtooth. Each hit roughly halves the gap above the steady peak,
/// so the count is logarithmic in the starting excess. The excess must be
/// more than one segment; below that the flow starts inside the sawtooth.
pub fn epochs_to_steady_state<F: Float>(
    initial_cwnd: F,
    epoch: F,
    rtt: F,
) -> Result<u32, AnalyticsError> {
    let initial = positive("initial_cwnd", initial_cwnd)?;
    let steady = steady_state_cwnd_max(epoch, rtt)?;
    let excess = initial - steady - two::<F>();
    if excess <= F::one() {
        return Err(AnalyticsError::NoDecayPhase {
            initial_cwnd: initial.to_f64().unwrap_or(f64::NAN),
            steady_cwnd: steady.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = (excess.log2() - F::one()).ceil();
    Ok(n.max(F::zero()).to_u32().unwrap_or(0))
}

/// Whether displacing the oldest in-flight packet during fast recovery
/// forces a retransmission timeout. Recovery from window `cwnd_mss` emits
/// `cwnd/2 - 1` new segments behind the retransmission; when that burst
/// exceeds the replay window, the raced copies push the retransmission's
/// sequence number out of the window and the receiver never sees it.
pub fn displacement_causes_timeout(cwnd_mss: u64, replay_window: u64) -> bool {
    (cwnd_mss / 2).saturating_sub(1) > replay_window
}

/// Smallest replay window that never rejects honest traffic: the window
/// must cover every packet the link can hold over one path delay, rounded
/// up to whole segments.
pub fn required_window_size(rate_bps: u64, path_delay: SimTime, mss_bytes: u64) -> u64 {
    assert!(mss_bytes > 0, "segment size must be positive");
    let bytes_in_flight = rate_bps as u128 * path_delay.as_micros() as u128;
    let denom = 1_000_000u128 * mss_bytes as u128;
    (bytes_in_flight.div_ceil(denom)) as u64
}

/// One step of the settling test: the window at the next hit must not sit
/// more than a whole segment below the current one.
pub fn window_not_collapsing<F: Float>(current: F, next: F) -> bool {
    current < next + F::one()
}

/// First epoch index from which `consecutive` successive window samples
/// all pass the settling test. `samples[i]` is the window observed at hit
/// `i`; the answer needs `consecutive` pairs beyond the returned index.
pub fn first_steady_epoch<F: Float>(samples: &[F], consecutive: usize) -> Option<usize> {
    if consecutive == 0 {
        return Some(0);
    }
    'outer: for start in 0..samples.len().saturating_sub(consecutive) {
        for j in start..start + consecutive {
            if !window_not_collapsing(samples[j], samples[j + 1]) {
                continue 'outer;
            }
        }
        return Some(start);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steady_window_for_matched_epoch_is_two_segments() {
        let c = steady_state_cwnd_max(0.1_f64, 0.1).unwrap();
        assert_eq!(c, 2.0);
    }

    #[test]
    fn steady_window_scales_with_the_epoch() {
        let c = steady_state_cwnd_max(0.5_f64, 0.1).unwrap();
        assert!((c - 10.0).abs() < 1e-12);
        // Only the ratio matters.
        let scaled = steady_state_cwnd_max(5.0_f64, 1.0).unwrap();
        assert_eq!(c, scaled);
    }

    #[test]
    fn steady_window_works_in_single_precision() {
        let c = steady_state_cwnd_max(0.5_f32, 0.1).unwrap();
        assert!((c - 10.0).abs() < 1e-5);
    }

    #[test]
    fn mean_throughput_for_matched_epoch() {
        let bw = steady_state_throughput(0.1_f64, 0.1, 1000.0).unwrap();
        assert!((bw - 15_000.0).abs() < 1e-9);
    }

    #[test]
    fn mean_window_is_three_quarters_of_the_peak() {
        let avg = steady_state_cwnd_avg(0.1_f64, 0.1).unwrap();
        assert_eq!(avg, 1.5);
        let avg = steady_state_cwnd_avg(1.0_f64, 0.1).unwrap();
        assert!((avg - 15.0).abs() < 1e-12);
    }

    #[test]
    fn peak_throughput_exceeds_the_mean_by_a_third() {
        let mean = steady_state_throughput(0.1_f64, 0.1, 1000.0).unwrap();
        let peak = steady_state_throughput_peak(0.1_f64, 0.1, 1000.0).unwrap();
        assert!((peak - 20_000.0).abs() < 1e-9);
        assert!((peak / mean - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn throughput_is_linear_in_segment_size_and_epoch() {
        let base = steady_state_throughput(0.2_f64, 0.1, 1000.0).unwrap();
        let double_mss = steady_state_throughput(0.2_f64, 0.1, 2000.0).unwrap();
        let double_epoch = steady_state_throughput(0.4_f64, 0.1, 1000.0).unwrap();
        assert!((double_mss - 2.0 * base).abs() < 1e-9);
        assert!((double_epoch - 2.0 * base).abs() < 1e-9);
    }

    #[test]
    fn settling_time_from_a_large_window() {
        // Excess over the sawtooth: 64 - 2 - 2 = 60, and ceil(log2(60) - 1)
        // is 5 halvings.
        assert_eq!(epochs_to_steady_state(64.0_f64, 0.1, 0.1).unwrap(), 5);
        assert_eq!(epochs_to_steady_state(10.0_f64, 0.1, 0.1).unwrap(), 2);
    }

    #[test]
    fn settling_time_just_above_the_sawtooth_is_zero() {
        // Excess 1.5 needs no halving at all, only the first hit.
        assert_eq!(epochs_to_steady_state(5.5_f64, 0.1, 0.1).unwrap(), 0);
    }

    #[test]
    fn settling_time_rejects_windows_already_inside_the_sawtooth() {
        let err = epochs_to_steady_state(4.5_f64, 0.1, 0.1).unwrap_err();
        assert!(matches!(err, AnalyticsError::NoDecayPhase { .. }));
    }

    #[test]
    fn nonpositive_inputs_are_rejected() {
        assert!(steady_state_cwnd_max(0.0_f64, 0.1).is_err());
        assert!(steady_state_cwnd_max(0.1_f64, -1.0).is_err());
        assert!(steady_state_throughput(0.1_f64, 0.1, 0.0).is_err());
    }

    #[test]
    fn displacement_timeout_threshold() {
        // Window 20 puts 9 new segments behind the retransmission; a replay
        // window of 8 cannot cover them.
        assert!(displacement_causes_timeout(20, 8));
        assert!(!displacement_causes_timeout(18, 8));
        assert!(!displacement_causes_timeout(20, 1_000_000));
        assert!(!displacement_causes_timeout(0, 0));
    }

    #[test]
    fn window_sizing_covers_the_bandwidth_delay_product() {
        let sec = SimTime::from_secs(1);
        assert_eq!(required_window_size(10_000_000, sec, 1000), 10_000);
        assert_eq!(required_window_size(5_000_000, sec, 1000), 5_000);
        // Any fractional segment rounds up.
        assert_eq!(required_window_size(10_000_001, sec, 1000), 10_001);
        assert_eq!(
            required_window_size(1_000_000_000, SimTime::from_millis(100), 1000),
            100_000
        );
    }

    #[test]
    fn settling_detector_finds_the_first_stable_run() {
        let samples = [64.0_f64, 32.0, 16.0, 8.0, 4.0, 2.0, 2.0, 2.0, 2.0];
        assert_eq!(first_steady_epoch(&samples, 3), Some(5));
        assert_eq!(first_steady_epoch(&samples[..5], 3), None);
        // A regrowing window also counts as settled.
        let growing = [5.0_f64, 3.5, 3.5, 4.0, 4.5];
        assert_eq!(first_steady_epoch(&growing, 3), Some(1));
    }
}
