//! Measured results of one simulation run.
//!
//! `RunMetrics` is pure measurement: it echoes nothing from the scenario
//! file, so two runs that behave identically serialize identically even if
//! their configurations differ. That property is itself an assertion tool:
//! a defense is transparent exactly when enabling it changes no byte of the
//! metrics of an attack-free run.
//!
//! Serialization order is struct declaration order and all maps are sorted,
//! so the JSON form is byte-stable across runs and platforms.

use serde::{Deserialize, Serialize};

use crate::rttp::RttpCounters;

/// Congestion window observed at the instant an attack epoch fired, before
/// any of that epoch's clones land.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct EpochSample {
    pub epoch: u64,
    pub at_us: u64,
    pub cwnd_mss: f64,
    /// Cumulative in-order segments the client had received at the sample.
    pub segments_delivered: u64,
}

/// One injected clone, in decision order.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct InjectionRecord {
    pub decided_at_us: u64,
    pub deliver_at_us: u64,
    pub epoch: u64,
}

/// Per-direction tunnel accounting at the receiving gateway.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq)]
pub struct DirMetrics {
    pub sent: u64,
    pub honest_arrivals: u64,
    pub injected_arrivals: u64,
    pub accepted_advance: u64,
    pub accepted_in_window: u64,
    pub rejected_duplicate: u64,
    pub rejected_left_of_window: u64,
    pub scripted_drops: u64,
}

impl DirMetrics {
    /// Every arrival was classified exactly once, and nothing arrived that
    /// was never sent. Packets still on the wire at the end are the gap
    /// between `sent` and `honest_arrivals`.
    pub fn is_conserved(&self) -> bool {
        let classified = self.accepted_advance
            + self.accepted_in_window
            + self.rejected_duplicate
            + self.rejected_left_of_window
            + self.scripted_drops;
        classified == self.honest_arrivals + self.injected_arrivals
            && self.honest_arrivals <= self.sent
    }

    pub fn honest_rejections(&self) -> u64 {
        // Scripted drops are the harness removing packets, not the window
        // misjudging them; they are counted separately.
        self.rejected_duplicate + self.rejected_left_of_window
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TcpMetrics {
    pub fast_retransmits: u64,
    pub rto_count: u64,
    pub retransmissions: u64,
    pub duplicate_data_at_receiver: u64,
    pub final_cwnd_mss: f64,
    pub final_phase: String,
    pub transfer_completed_at_us: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AttackMetrics {
    pub first_injection_us: u64,
    pub clones_delivered: u64,
    pub epochs_fired: u64,
    pub epochs_skipped_budget: u64,
    /// Goodput from the first injection to the end of the run.
    pub post_attack_throughput_bps: f64,
    pub injection_log: Vec<InjectionRecord>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq)]
pub struct RttpMetrics {
    pub acks_held: u64,
    pub acks_released_by_timer: u64,
    pub acks_discarded: u64,
    pub data_buffered: u64,
    pub alerts: u64,
    pub alert_collisions: u64,
    pub fail_opens: u64,
    pub max_hold_us: u64,
}

impl From<RttpCounters> for RttpMetrics {
    fn from(c: RttpCounters) -> Self {
        RttpMetrics {
            acks_held: c.acks_held,
            acks_released_by_timer: c.acks_released_by_timer,
            acks_discarded: c.acks_discarded,
            data_buffered: c.data_buffered,
            alerts: c.alerts,
            alert_collisions: c.alert_collisions,
            fail_opens: c.fail_opens,
            max_hold_us: c.max_hold_us,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunMetrics {
    pub duration_us: u64,
    pub segments_delivered: u64,
    pub bytes_delivered: u64,
    /// Goodput over the whole run, bytes per second.
    pub throughput_bps: f64,
    pub tcp: TcpMetrics,
    pub tunnel_data: DirMetrics,
    pub tunnel_ack: DirMetrics,
    pub cwnd_samples: Vec<EpochSample>,
    /// First sample index from which the window stopped collapsing for
    /// three consecutive epochs.
    pub steady_state_epoch: Option<u64>,
    /// Goodput from the steady-state sample to the end of the run.
    pub steady_throughput_bps: Option<f64>,
    /// Time-weighted mean window from the steady-state sample to the end of
    /// the run, in segments.
    pub steady_cwnd_time_avg_mss: Option<f64>,
    pub attack: Option<AttackMetrics>,
    pub rttp: RttpMetrics,
}

impl RunMetrics {
    /// Byte-stable pretty JSON, trailing newline included.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metrics serialize");
        s.push('\n');
        s
    }
}

/// Verifies the injection log against a leaky-bucket envelope: over every
/// closed interval of decision instants, the number of clones decided must
/// not exceed the burst size plus the refill. The log must be in decision
/// order. Quadratic in log length, which measurement-sized logs tolerate.
pub fn injections_within_budget(
    log: &[InjectionRecord],
    rho_per_sec: f64,
    sigma: u32,
) -> bool {
    for i in 0..log.len() {
        for j in i..log.len() {
            debug_assert!(log[j].decided_at_us >= log[i].decided_at_us, "log unsorted");
            let count = (j - i + 1) as f64;
            let span_s = (log[j].decided_at_us - log[i].decided_at_us) as f64 / 1e6;
            if count > sigma as f64 + rho_per_sec * span_s + 1e-9 {
                return false;
            }
        }
    }
    true
}
