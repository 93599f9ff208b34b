//! Round-trip-time-preserving gateway logic.
//!
//! The receiving gateway knows two things an end host does not: each
//! packet's authenticated encapsulation timestamp, and the typical one-way
//! delay of the tunnel. A data packet that arrives much faster than typical
//! and ahead of its turn is treated as a raced duplicate. In the default
//! mode the gateway lets the data through but briefly holds the duplicate
//! ACKs it provokes: if the overtaken packet shows up in time, the held
//! duplicates are discarded and the sender never sees a loss signal; if it
//! does not, a timer releases them so genuine loss recovery still happens,
//! just delayed by at most one typical delay. The alternative mode buffers
//! the suspicious data itself and re-releases it in order.
//!
//! Every decision here is per flow and per direction; nothing is dropped,
//! only reordered in time, so the gateway stays transparent when no attack
//! is running.

use std::collections::{BTreeMap, VecDeque};

use crate::sim::SimTime;
use crate::tcp::{FlowId, Segment};

/// Exponentially weighted delay tracker, weight 1/8 on the newest sample.
#[derive(Debug, Clone)]
pub struct DelayEstimator {
    srtt: Option<SimTime>,
}

impl DelayEstimator {
    pub fn new(initial: Option<SimTime>) -> Self {
        DelayEstimator { srtt: initial }
    }

    pub fn typical(&self) -> Option<SimTime> {
        self.srtt
    }

    /// Folds in one honest delay sample. The first sample initializes the
    /// estimate; callers must not feed samples from suspicious packets.
    pub fn update(&mut self, sample: SimTime) {
        self.srtt = Some(match self.srtt {
            None => sample,
            Some(cur) => SimTime::from_micros((7 * cur.as_micros() + sample.as_micros()) / 8),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RttpMode {
    /// Hold duplicate ACKs provoked by suspiciously fast data.
    HoldAcks,
    /// Buffer the suspiciously fast data itself and release it in order.
    BufferData,
}

#[derive(Debug, Clone)]
pub struct RttpConfig {
    pub mode: RttpMode,
    /// Suspicion threshold as a percentage of the typical delay. A packet is
    /// suspicious only when faster than this fraction, leaving harmless
    /// jitter alone.
    pub guard_pct: u64,
    /// Maximum duplicate ACKs held at once; beyond it the gateway fails open.
    pub capacity: usize,
    /// Known typical delay, if provisioned; otherwise learned from traffic.
    pub typical_init: Option<SimTime>,
}

impl Default for RttpConfig {
    fn default() -> Self {
        RttpConfig {
            mode: RttpMode::HoldAcks,
            guard_pct: 85,
            capacity: 64,
            typical_init: None,
        }
    }
}

/// Mirror of the downstream receiver's reassembly point, fed by what the
/// gateway has forwarded.
#[derive(Debug, Default)]
struct SeqMirror {
    next: u64,
    ahead: std::collections::BTreeSet<u64>,
}

impl SeqMirror {
    fn new() -> Self {
        SeqMirror {
            next: 1,
            ahead: Default::default(),
        }
    }

    fn advance(&mut self, seq: u64) {
        if seq == self.next {
            self.next += 1;
            while self.ahead.remove(&self.next) {
                self.next += 1;
            }
        } else if seq > self.next {
            self.ahead.insert(seq);
        }
    }
}

/// What to do with an arriving data packet and anything it unblocked.
#[derive(Debug, Default)]
#[must_use]
pub struct DataOutcome {
    /// Segments to deliver toward the client now, in order.
    pub forward: Vec<Segment>,
    /// Set when the arriving packet was buffered instead of forwarded; the
    /// caller must schedule a release at this instant.
    pub buffered_until: Option<SimTime>,
    /// Held duplicate ACKs discarded because the overtaken packet arrived.
    pub discarded_held: usize,
    /// The hold timer is obsolete and must be cancelled.
    pub cancel_timer: bool,
    pub alert_raised: bool,
    pub alert_collision: bool,
    /// The packet's delay sample was excluded from the estimator.
    pub suspicious: bool,
}

/// What to do with an ACK leaving toward the sender.
#[derive(Debug, Default)]
#[must_use]
pub struct AckOutcome {
    /// ACKs to send now, in order (flushed holds first on fail-open).
    pub forward: Vec<Segment>,
    /// The ACK was held back.
    pub held: bool,
    /// Arm the release timer at this instant (first hold only).
    pub arm_timer_at: Option<SimTime>,
    /// Capacity was exceeded; protection disengaged and everything flushed.
    pub failed_open: bool,
}

#[derive(Debug)]
struct FlowState {
    estimator: DelayEstimator,
    mirror: SeqMirror,
    /// Suspicion latch: sequence and arrival instant of the fast packet.
    alert: bool,
    pkt_sn: u64,
    rcpt_time: SimTime,
    /// Duplicate-ACK tracking on the outgoing side.
    ack_sn: u64,
    dup_ack_cnt: u32,
    held_acks: VecDeque<Segment>,
    timer_armed: bool,
    /// Buffer-mode storage: suspicious data waiting for its turn.
    buffered: BTreeMap<u64, Segment>,
}

impl FlowState {
    fn new(typical_init: Option<SimTime>) -> Self {
        FlowState {
            estimator: DelayEstimator::new(typical_init),
            mirror: SeqMirror::new(),
            alert: false,
            pkt_sn: 0,
            rcpt_time: SimTime::ZERO,
            ack_sn: 0,
            dup_ack_cnt: 0,
            held_acks: VecDeque::new(),
            timer_armed: false,
            buffered: BTreeMap::new(),
        }
    }
}

/// Counters the harness rolls into run metrics.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct RttpCounters {
    pub acks_held: u64,
    pub acks_released_by_timer: u64,
    pub acks_discarded: u64,
    pub data_buffered: u64,
    pub alerts: u64,
    pub alert_collisions: u64,
    pub fail_opens: u64,
    pub max_hold_us: u64,
}

/// Per-gateway protection state across flows.
#[derive(Debug)]
pub struct RttpGateway {
    cfg: RttpConfig,
    flows: BTreeMap<FlowId, FlowState>,
    counters: RttpCounters,
}

impl RttpGateway {
    pub fn new(cfg: RttpConfig) -> Self {
        RttpGateway {
            cfg,
            flows: BTreeMap::new(),
            counters: RttpCounters::default(),
        }
    }

    pub fn counters(&self) -> RttpCounters {
        self.counters
    }

    pub fn typical(&self, flow: FlowId) -> Option<SimTime> {
        self.flows.get(&flow).and_then(|f| f.estimator.typical())
    }

    fn flow(&mut self, flow: FlowId) -> &mut FlowState {
        let init = self.cfg.typical_init;
        self.flows.entry(flow).or_insert_with(|| FlowState::new(init))
    }

    /// Processes a decapsulated data segment arriving from the tunnel.
    /// `delay` is arrival time minus the authenticated timestamp.
    pub fn on_incoming_data(
        &mut self,
        seg: Segment,
        delay: SimTime,
        now: SimTime,
    ) -> DataOutcome {
        let mode = self.cfg.mode;
        let guard_pct = self.cfg.guard_pct;
        let flow = self.flow(seg.flow);
        let seq = seg.data_seq().expect("data segment");
        let mut out = DataOutcome::default();

        // The packet a raced duplicate overtook has arrived: the loss signal
        // being held back was false, so drop it and stand down.
        if mode == RttpMode::HoldAcks && !flow.held_acks.is_empty() && seq == flow.ack_sn {
            out.discarded_held = flow.held_acks.len();
            flow.held_acks.clear();
            flow.alert = false;
            flow.timer_armed = false;
            out.cancel_timer = true;
        }

        let typical = flow.estimator.typical();
        let suspicious = match typical {
            Some(typical) => delay < typical.scale_pct(guard_pct) && seq > flow.mirror.next,
            None => false,
        };
        out.suspicious = suspicious;

        if suspicious {
            match mode {
                RttpMode::HoldAcks => {
                    if flow.alert {
                        out.alert_collision = true;
                    }
                    flow.alert = true;
                    flow.pkt_sn = seq;
                    flow.rcpt_time = now;
                    out.alert_raised = true;
                }
                RttpMode::BufferData => {
                    // Park the packet until the instant it would have arrived
                    // at typical speed; an in-order arrival releases it early.
                    let typical = typical.expect("suspicion implies a known typical delay");
                    let release_at = (seg.sent_at + typical).max(now);
                    flow.buffered.insert(seq, seg);
                    out.buffered_until = Some(release_at);
                    out.alert_raised = true;
                }
            }
        } else {
            flow.estimator.update(delay);
        }

        if suspicious && mode == RttpMode::BufferData {
            self.counters.alerts += 1;
            self.counters.data_buffered += 1;
            return out;
        }
        if out.alert_raised {
            self.counters.alerts += 1;
        }
        self.counters.alert_collisions += out.alert_collision as u64;
        self.counters.acks_discarded += out.discarded_held as u64;

        let flow = self.flows.get_mut(&seg.flow).expect("just touched");
        flow.mirror.advance(seq);
        out.forward.push(seg);
        // In buffer mode an in-order arrival may unblock parked successors.
        while let Some((&bseq, _)) = flow.buffered.first_key_value() {
            if bseq < flow.mirror.next {
                // Already covered by what the client has; obsolete copy.
                flow.buffered.pop_first();
            } else if bseq == flow.mirror.next {
                let (_, bseg) = flow.buffered.pop_first().expect("nonempty");
                flow.mirror.advance(bseq);
                out.forward.push(bseg);
            } else {
                break;
            }
        }
        out
    }

    /// Processes an ACK heading from the protected site into the tunnel.
    pub fn on_outgoing_ack(&mut self, seg: Segment, _now: SimTime) -> AckOutcome {
        let capacity = self.cfg.capacity;
        let flow = self.flow(seg.flow);
        let typical = flow.estimator.typical();
        let ack_num = seg.ack_num().expect("ack segment");
        let mut out = AckOutcome::default();

        if ack_num == flow.ack_sn {
            flow.dup_ack_cnt += 1;
            if flow.alert {
                if flow.held_acks.len() >= capacity {
                    // Fail open: protecting further would block real
                    // recovery indefinitely, so flush and stand down.
                    out.forward.extend(flow.held_acks.drain(..));
                    out.forward.push(seg);
                    flow.alert = false;
                    flow.timer_armed = false;
                    out.failed_open = true;
                    self.counters.fail_opens += 1;
                    return out;
                }
                flow.held_acks.push_back(seg);
                out.held = true;
                if !flow.timer_armed {
                    flow.timer_armed = true;
                    let typical = typical.expect("alert implies a known typical delay");
                    out.arm_timer_at = Some(flow.rcpt_time + typical);
                }
                self.counters.acks_held += 1;
                return out;
            }
            out.forward.push(seg);
        } else {
            flow.ack_sn = ack_num;
            flow.dup_ack_cnt = 0;
            out.forward.push(seg);
        }
        out
    }

    /// Release timer fired: the overtaken packet never arrived, so the held
    /// loss signal was genuine. Returns the ACKs to send, oldest first.
    pub fn on_hold_timer(&mut self, flow_id: FlowId, now: SimTime) -> Vec<Segment> {
        let flow = self.flow(flow_id);
        if !flow.timer_armed {
            return Vec::new();
        }
        flow.timer_armed = false;
        flow.alert = false;
        let released: Vec<Segment> = flow.held_acks.drain(..).collect();
        let waited = now.saturating_sub(flow.rcpt_time).as_micros();
        self.counters.acks_released_by_timer += released.len() as u64;
        self.counters.max_hold_us = self.counters.max_hold_us.max(waited);
        released
    }

    /// Buffer-mode release timer for one parked data segment. A no-op if a
    /// gap fill already let it through.
    pub fn on_buffer_timer(&mut self, flow_id: FlowId, seq: u64) -> Option<Segment> {
        let flow = self.flow(flow_id);
        let seg = flow.buffered.remove(&seq)?;
        flow.mirror.advance(seq);
        Some(seg)
    }

    /// Sum of ACKs currently held across flows.
    pub fn held_count(&self) -> usize {
        self.flows.values().map(|f| f.held_acks.len()).sum()
    }
}
