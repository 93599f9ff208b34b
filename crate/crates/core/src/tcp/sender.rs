//! Reno-style sender congestion control.
//!
//! The sender walks three phases: slow start, congestion avoidance, and fast
//! recovery. Avoidance grows the window by exactly one segment per window of
//! ACKs. The third duplicate ACK triggers fast retransmit and halves the
//! window; further duplicates inflate it one MSS each; the next ACK covering
//! new data deflates to ssthresh. While recovery is in progress the
//! retransmitted segment counts against the window alongside the unacked
//! pipe. A retransmission timeout collapses the window to one MSS and
//! returns to slow start with exponential backoff.
//!
//! Sequence numbers count whole segments starting at 1. Receiver flow
//! control is not modeled; only cwnd (and an optional cap) limits sending.

use thiserror::Error;

use crate::sim::SimTime;

use super::segment::{FlowId, Segment};
use super::window::WindowSize;

pub const DUP_ACK_THRESHOLD: u32 = 3;
const MIN_SSTHRESH_MSS: u64 = 2;
const MAX_RTO_BACKOFF: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    SlowStart,
    CongestionAvoidance,
    FastRecovery,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::SlowStart => "slow_start",
            Phase::CongestionAvoidance => "congestion_avoidance",
            Phase::FastRecovery => "fast_recovery",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TcpError {
    /// An ACK acknowledging data that was never transmitted means the peer
    /// (or the harness wiring) is broken; the run must not continue.
    #[error("ACK {ack_num} exceeds highest transmitted sequence {next_seq}")]
    AckBeyondSent { ack_num: u64, next_seq: u64 },
}

/// How an incoming ACK was classified, for tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AckClass {
    /// Advanced the cumulative acknowledgement point.
    NewData,
    /// Matched the current acknowledgement point exactly.
    Duplicate,
    /// Below the acknowledgement point; carries no information.
    Stale,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SenderAction {
    Send(Segment),
    Retransmit(Segment),
}

/// What a sender call produced. `restart_rto` asks the harness to re-arm the
/// retransmission timer at `now + rto_interval()`.
#[derive(Debug, Default, PartialEq, Eq)]
#[must_use]
pub struct SenderOutput {
    pub actions: Vec<SenderAction>,
    pub restart_rto: bool,
}

#[derive(Debug, Clone)]
pub struct SenderConfig {
    pub flow: FlowId,
    pub initial_cwnd: WindowSize,
    pub initial_ssthresh: WindowSize,
    /// Hard ceiling on cwnd, including fast-recovery inflation. Models a
    /// bounded send buffer; `None` leaves the window unconstrained.
    pub cwnd_cap: Option<WindowSize>,
    /// Base retransmission timeout; doubles on consecutive timeouts.
    pub rto_interval: SimTime,
    /// Total segments to transfer; `None` sends forever.
    pub transfer_segments: Option<u64>,
}

#[derive(Debug)]
pub struct TcpSender {
    cfg: SenderConfig,
    phase: Phase,
    cwnd: WindowSize,
    ssthresh: WindowSize,
    /// Next never-sent sequence number.
    next_seq: u64,
    /// Cumulative acknowledgement point: everything below is acknowledged,
    /// and this is the sequence a retransmission resends.
    highest_acked: u64,
    /// New-data ACKs counted toward the next one-MSS avoidance increment.
    ca_acked: u64,
    dup_acks: u32,
    rto_backoff: u32,
    retransmissions: u64,
    rto_count: u64,
    fast_retransmits: u64,
}

impl TcpSender {
    pub fn new(cfg: SenderConfig) -> Self {
        let phase = if cfg.initial_cwnd >= cfg.initial_ssthresh {
            Phase::CongestionAvoidance
        } else {
            Phase::SlowStart
        };
        // The ceiling binds the starting point too, not just later growth.
        let cwnd = match cfg.cwnd_cap {
            Some(cap) => cfg.initial_cwnd.min(cap),
            None => cfg.initial_cwnd,
        };
        let ssthresh = cfg.initial_ssthresh;
        TcpSender {
            cfg,
            phase,
            cwnd,
            ssthresh,
            next_seq: 1,
            highest_acked: 1,
            ca_acked: 0,
            dup_acks: 0,
            rto_backoff: 1,
            retransmissions: 0,
            rto_count: 0,
            fast_retransmits: 0,
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn cwnd(&self) -> WindowSize {
        self.cwnd
    }

    pub fn ssthresh(&self) -> WindowSize {
        self.ssthresh
    }

    pub fn highest_acked(&self) -> u64 {
        self.highest_acked
    }

    pub fn next_seq(&self) -> u64 {
        self.next_seq
    }

    pub fn dup_acks(&self) -> u32 {
        self.dup_acks
    }

    /// Segments transmitted but not yet cumulatively acknowledged.
    pub fn pending(&self) -> u64 {
        self.next_seq - self.highest_acked
    }

    /// Segments occupying the network. During fast recovery the outstanding
    /// retransmission flies without advancing `next_seq`, so it claims one
    /// slot on top of `pending`.
    fn in_flight(&self) -> u64 {
        let retransmit_slot = (self.phase == Phase::FastRecovery) as u64;
        self.pending() + retransmit_slot
    }

    pub fn rto_count(&self) -> u64 {
        self.rto_count
    }

    pub fn fast_retransmits(&self) -> u64 {
        self.fast_retransmits
    }

    pub fn retransmissions(&self) -> u64 {
        self.retransmissions
    }

    /// Current timeout span, including backoff.
    pub fn rto_interval(&self) -> SimTime {
        self.cfg.rto_interval * self.rto_backoff as u64
    }

    /// True once every segment of a bounded transfer is acknowledged.
    pub fn transfer_complete(&self) -> bool {
        match self.cfg.transfer_segments {
            Some(n) => self.highest_acked > n,
            None => false,
        }
    }

    fn clamp(&self, w: WindowSize) -> WindowSize {
        match self.cfg.cwnd_cap {
            Some(cap) => w.min(cap),
            None => w,
        }
    }

    fn retransmit_lowest(&mut self, now: SimTime) -> SenderAction {
        self.retransmissions += 1;
        SenderAction::Retransmit(Segment::data(self.cfg.flow, self.highest_acked, now))
    }

    /// Emits new segments while the window has room. Also used to open the
    /// flow at simulation start.
    pub fn try_send(&mut self, now: SimTime) -> SenderOutput {
        let mut out = SenderOutput::default();
        self.fill_window(now, &mut out.actions);
        out
    }

    fn fill_window(&mut self, now: SimTime, actions: &mut Vec<SenderAction>) {
        while self.in_flight() < self.cwnd.floor_mss() {
            if let Some(limit) = self.cfg.transfer_segments {
                if self.next_seq > limit {
                    break;
                }
            }
            actions.push(SenderAction::Send(Segment::data(
                self.cfg.flow,
                self.next_seq,
                now,
            )));
            self.next_seq += 1;
        }
    }

    /// Processes one cumulative acknowledgement.
    pub fn on_ack(&mut self, ack_num: u64, now: SimTime) -> Result<(AckClass, SenderOutput), TcpError> {
        if ack_num > self.next_seq {
            return Err(TcpError::AckBeyondSent {
                ack_num,
                next_seq: self.next_seq,
            });
        }
        if ack_num < self.highest_acked {
            return Ok((AckClass::Stale, SenderOutput::default()));
        }
        let mut out = SenderOutput::default();
        if ack_num == self.highest_acked {
            self.on_duplicate(now, &mut out);
            return Ok((AckClass::Duplicate, out));
        }

        self.highest_acked = ack_num;
        self.dup_acks = 0;
        self.rto_backoff = 1;
        match self.phase {
            Phase::SlowStart => {
                self.cwnd = self.clamp(self.cwnd.add_mss(1));
                if self.cwnd >= self.ssthresh {
                    self.phase = Phase::CongestionAvoidance;
                    self.ca_acked = 0;
                }
            }
            Phase::CongestionAvoidance => {
                // One whole window of ACKs buys one MSS, so the window grows
                // by exactly one segment per round trip.
                self.ca_acked += 1;
                if self.ca_acked >= self.cwnd.floor_mss() {
                    self.ca_acked = 0;
                    self.cwnd = self.clamp(self.cwnd.add_mss(1));
                }
            }
            Phase::FastRecovery => {
                // Deflation: the recovery ACK returns the window to the
                // halved value instead of keeping the inflation credit.
                self.cwnd = self.clamp(self.ssthresh);
                self.phase = Phase::CongestionAvoidance;
                self.ca_acked = 0;
            }
        }
        self.fill_window(now, &mut out.actions);
        out.restart_rto = self.pending() > 0;
        Ok((AckClass::NewData, out))
    }

    fn on_duplicate(&mut self, now: SimTime, out: &mut SenderOutput) {
        match self.phase {
            Phase::FastRecovery => {
                self.cwnd = self.clamp(self.cwnd.add_mss(1));
                self.fill_window(now, &mut out.actions);
            }
            Phase::SlowStart | Phase::CongestionAvoidance => {
                self.dup_acks += 1;
                if self.dup_acks == DUP_ACK_THRESHOLD {
                    self.enter_fast_recovery(now, out);
                }
            }
        }
    }

    fn enter_fast_recovery(&mut self, now: SimTime, out: &mut SenderOutput) {
        self.fast_retransmits += 1;
        self.ssthresh = WindowSize::from_mss(self.cwnd.half_floor_mss().max(MIN_SSTHRESH_MSS));
        self.cwnd = self.clamp(self.ssthresh.add_mss(DUP_ACK_THRESHOLD as u64));
        self.phase = Phase::FastRecovery;
        self.ca_acked = 0;
        out.actions.push(self.retransmit_lowest(now));
        self.fill_window(now, &mut out.actions);
    }

    /// Handles a fired retransmission timer. A timeout with nothing pending
    /// is a stale timer and does nothing.
    pub fn on_rto(&mut self, now: SimTime) -> SenderOutput {
        let mut out = SenderOutput::default();
        if self.pending() == 0 {
            return out;
        }
        self.rto_count += 1;
        self.ssthresh = WindowSize::from_mss(self.cwnd.half_floor_mss().max(MIN_SSTHRESH_MSS));
        self.cwnd = WindowSize::ONE;
        self.phase = Phase::SlowStart;
        self.ca_acked = 0;
        self.dup_acks = 0;
        self.rto_backoff = (self.rto_backoff * 2).min(MAX_RTO_BACKOFF);
        out.actions.push(self.retransmit_lowest(now));
        out.restart_rto = true;
        out
    }
}
