//! The on-path observer that duplicates traffic.
//!
//! The adversary taps one direction of the inter-gateway wire. It reads
//! nothing it should not: encapsulated packets are opaque blobs with a size,
//! unless `Visibility::Transparent` is selected for experiments. It cannot
//! drop, delay, corrupt, or forge packets; its whole arsenal is cloning an
//! observed packet and delivering the clone, possibly over a faster path.
//! Injection volume is bounded by a leaky-bucket budget, and attacks fire at
//! most once per epoch.
//!
//! Strategies:
//! * `AckDuplicator` re-delivers the most recent ACK three times, which the
//!   sender reads as packet loss.
//! * `DataDuplicator` is the same trick on the data direction.
//! * `SpeedupSingle` races one data packet far enough ahead of the flight
//!   that the replay window slides past the flight's oldest packet.
//! * `SpeedupMulti` races the last three packets of the flight ahead of the
//!   first, forcing duplicate ACKs without any packet being dropped.

mod budget;

use std::collections::VecDeque;

pub use budget::LeakyBucket;

use crate::sim::SimTime;
use crate::tunnel::EspPacket;

/// Packets smaller than this read as bare acknowledgements to an observer
/// that only sees ciphertext length.
pub const SMALL_PACKET_BYTES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    AckDuplicator,
    DataDuplicator,
    SpeedupSingle,
    SpeedupMulti,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::AckDuplicator => "ack_duplicator",
            Strategy::DataDuplicator => "data_duplicator",
            Strategy::SpeedupSingle => "speedup_single",
            Strategy::SpeedupMulti => "speedup_multi",
        }
    }

    /// Tokens one attack epoch costs.
    pub fn epoch_cost(self, dup_count: u32) -> u32 {
        match self {
            Strategy::AckDuplicator | Strategy::DataDuplicator | Strategy::SpeedupMulti => {
                dup_count
            }
            Strategy::SpeedupSingle => 1,
        }
    }

    /// Whether the strategy watches the data direction (toward the client)
    /// or the ACK direction (toward the server).
    pub fn taps_data_direction(self) -> bool {
        !matches!(self, Strategy::AckDuplicator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    /// Only sizes and ESP headers are visible (deployed reality).
    Opaque,
    /// Inner segments readable, for controlled experiments.
    Transparent,
}

#[derive(Debug, Clone)]
pub struct AdversaryConfig {
    pub strategy: Strategy,
    /// Budget refill rate, tokens per second.
    pub rho_per_sec: f64,
    /// Budget burst capacity.
    pub sigma: u32,
    /// Epoch period between attacks.
    pub epoch: SimTime,
    /// No attack before this instant (multiples of `epoch` count from here).
    pub start_at: SimTime,
    /// How much earlier than the honest path a raced clone arrives.
    pub speedup: SimTime,
    /// Clones per duplication epoch.
    pub dup_count: u32,
    pub visibility: Visibility,
    /// Replay-window width of the victim gateway; the speedup attacks pick
    /// their target sequence relative to it.
    pub victim_window: u64,
}

/// One clone to place on the wire.
#[derive(Debug, Clone)]
pub struct Injection {
    pub pkt: EspPacket,
    pub decided_at: SimTime,
    pub deliver_at: SimTime,
    pub epoch_index: u64,
    /// ESP sequence of the flight head the clone is raced ahead of, when
    /// the strategy targets one.
    pub raced_head: Option<u64>,
}

#[derive(Debug)]
pub struct Adversary {
    cfg: AdversaryConfig,
    bucket: LeakyBucket,
    next_epoch_at: SimTime,
    epochs_fired: u64,
    epochs_skipped: u64,
    /// Observed packets whose honest copy has not yet reached the far
    /// gateway: (esp_seq, honest arrival).
    in_flight: VecDeque<(u64, SimTime)>,
    /// The last few data packets seen, newest last, for the multi race.
    recent: VecDeque<(EspPacket, SimTime)>,
}

impl Adversary {
    pub fn new(cfg: AdversaryConfig) -> Self {
        let bucket = LeakyBucket::new(cfg.rho_per_sec, cfg.sigma);
        let next_epoch_at = cfg.start_at;
        Adversary {
            cfg,
            bucket,
            next_epoch_at,
            epochs_fired: 0,
            epochs_skipped: 0,
            in_flight: VecDeque::new(),
            recent: VecDeque::new(),
        }
    }

    pub fn config(&self) -> &AdversaryConfig {
        &self.cfg
    }

    pub fn epochs_fired(&self) -> u64 {
        self.epochs_fired
    }

    pub fn epochs_skipped(&self) -> u64 {
        self.epochs_skipped
    }

    fn classifies_as_data(&self, pkt: &EspPacket) -> bool {
        match self.cfg.visibility {
            Visibility::Transparent => pkt.inner().is_data(),
            Visibility::Opaque => pkt.wire_bytes() >= SMALL_PACKET_BYTES,
        }
    }

    fn epoch_due(&self, now: SimTime) -> bool {
        now >= self.cfg.start_at && now >= self.next_epoch_at
    }

    /// Moves the epoch pointer past `now` to the next multiple of the period.
    fn advance_epoch(&mut self, now: SimTime) {
        let elapsed = (now - self.cfg.start_at).as_micros();
        let period = self.cfg.epoch.as_micros().max(1);
        let next = (elapsed / period + 1) * period;
        self.next_epoch_at = self.cfg.start_at + SimTime::from_micros(next);
    }

    /// Spends the epoch's budget or records the epoch as skipped.
    fn try_fire(&mut self, now: SimTime, cost: u32) -> bool {
        if self.bucket.admit(now, cost) {
            self.epochs_fired += 1;
            self.advance_epoch(now);
            true
        } else {
            self.epochs_skipped += 1;
            self.advance_epoch(now);
            false
        }
    }

    /// Feeds one tapped packet to the adversary. `now` is when the packet
    /// passes the tap; `honest_arrival` is when the genuine copy will reach
    /// the far gateway, which the adversary knows because path latency is
    /// fixed and public.
    pub fn observe(
        &mut self,
        pkt: &EspPacket,
        now: SimTime,
        honest_arrival: SimTime,
    ) -> Vec<Injection> {
        match self.cfg.strategy {
            Strategy::AckDuplicator => self.observe_for_duplication(pkt, now, honest_arrival, false),
            Strategy::DataDuplicator => self.observe_for_duplication(pkt, now, honest_arrival, true),
            Strategy::SpeedupSingle => self.observe_for_single_race(pkt, now, honest_arrival),
            Strategy::SpeedupMulti => self.observe_for_multi_race(pkt, now, honest_arrival),
        }
    }

    fn observe_for_duplication(
        &mut self,
        pkt: &EspPacket,
        now: SimTime,
        honest_arrival: SimTime,
        want_data: bool,
    ) -> Vec<Injection> {
        if self.classifies_as_data(pkt) != want_data || !self.epoch_due(now) {
            return Vec::new();
        }
        let copies = self.cfg.dup_count;
        if !self.try_fire(now, copies) {
            return Vec::new();
        }
        let epoch_index = self.epochs_fired;
        // Clones travel a same-speed path from the tap, so they land at the
        // original's arrival instant, queued right behind it and ahead of
        // whatever the sender emits next.
        (0..copies)
            .map(|_| Injection {
                pkt: pkt.clone(),
                decided_at: now,
                deliver_at: honest_arrival,
                epoch_index,
                raced_head: None,
            })
            .collect()
    }

    fn prune_arrived(&mut self, by: SimTime) {
        while let Some(&(_, arrival)) = self.in_flight.front() {
            if arrival <= by {
                self.in_flight.pop_front();
            } else {
                break;
            }
        }
    }

    fn observe_for_single_race(
        &mut self,
        pkt: &EspPacket,
        now: SimTime,
        honest_arrival: SimTime,
    ) -> Vec<Injection> {
        if !self.classifies_as_data(pkt) {
            return Vec::new();
        }
        let deliver_at = honest_arrival.saturating_sub(self.cfg.speedup);
        debug_assert!(deliver_at > now, "race must not outrun the observation");
        self.prune_arrived(deliver_at);
        let head = self.in_flight.front().copied();
        self.in_flight.push_back((pkt.esp_seq(), honest_arrival));

        let Some((head_seq, _)) = head else {
            return Vec::new();
        };
        // Sliding the window to this packet's sequence expels the flight
        // head if the gap is at least the window width.
        let displaces_head =
            pkt.esp_seq() > head_seq && pkt.esp_seq() - head_seq >= self.cfg.victim_window;
        if !displaces_head || !self.epoch_due(now) {
            return Vec::new();
        }
        if !self.try_fire(now, 1) {
            return Vec::new();
        }
        vec![Injection {
            pkt: pkt.clone(),
            decided_at: now,
            deliver_at,
            epoch_index: self.epochs_fired,
            raced_head: Some(head_seq),
        }]
    }

    fn observe_for_multi_race(
        &mut self,
        pkt: &EspPacket,
        now: SimTime,
        honest_arrival: SimTime,
    ) -> Vec<Injection> {
        if !self.classifies_as_data(pkt) {
            return Vec::new();
        }
        self.prune_arrived(now);
        self.in_flight.push_back((pkt.esp_seq(), honest_arrival));
        self.recent.push_back((pkt.clone(), honest_arrival));
        if self.recent.len() > self.cfg.dup_count as usize {
            self.recent.pop_front();
        }

        if !self.epoch_due(now) || self.recent.len() < self.cfg.dup_count as usize {
            return Vec::new();
        }
        // The raced trio must all overtake the flight head, and the head must
        // not be part of the trio, so the flight needs at least four packets.
        let trio_min_seq = self.recent.front().expect("nonempty").0.esp_seq();
        let latest_delivery = honest_arrival.saturating_sub(self.cfg.speedup);
        let Some(&(head_seq, head_arrival)) = self.in_flight.front() else {
            return Vec::new();
        };
        if head_seq >= trio_min_seq || head_arrival <= latest_delivery {
            return Vec::new();
        }
        if !self.try_fire(now, self.cfg.dup_count) {
            return Vec::new();
        }
        let epoch_index = self.epochs_fired;
        self.recent
            .iter()
            .map(|(p, arrival)| Injection {
                pkt: p.clone(),
                decided_at: now,
                deliver_at: arrival.saturating_sub(self.cfg.speedup),
                epoch_index,
                raced_head: Some(head_seq),
            })
            .collect()
    }
}
