//! ESP-style encapsulation with authenticated headers.
//!
//! Only a security association can mint packets, and a packet's fields
//! cannot be modified afterwards. That is the integrity guarantee the model
//! leans on: an on-path observer may clone a packet it has seen (replay or
//! reorder it), but it can never forge a sequence number, a timestamp, or
//! payload it did not observe. `Clone` is therefore exactly the adversary's
//! capability, nothing more.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::sim::SimTime;
use crate::tcp::{FlowId, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SaId(pub u32);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TunnelError {
    /// Sequence numbers are never reused; running out ends the association.
    #[error("ESP sequence space exhausted on SA {0:?}")]
    SeqExhausted(SaId),
}

/// An encapsulated segment in flight between gateways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EspPacket {
    sa: SaId,
    esp_seq: u64,
    inner: Segment,
    /// Encapsulation instant, carried under authentication. Receivers trust
    /// it for one-way delay measurement.
    stamped_at: SimTime,
    wire_bytes: u64,
}

impl EspPacket {
    pub fn sa(&self) -> SaId {
        self.sa
    }

    pub fn esp_seq(&self) -> u64 {
        self.esp_seq
    }

    pub fn inner(&self) -> &Segment {
        &self.inner
    }

    pub fn stamped_at(&self) -> SimTime {
        self.stamped_at
    }

    pub fn wire_bytes(&self) -> u64 {
        self.wire_bytes
    }
}

/// Outbound state of one security association: the sequence counter.
#[derive(Debug)]
pub struct SaState {
    id: SaId,
    last_seq: u64,
}

impl SaState {
    pub fn new(id: SaId) -> Self {
        SaState { id, last_seq: 0 }
    }

    pub fn id(&self) -> SaId {
        self.id
    }

    pub fn last_seq(&self) -> u64 {
        self.last_seq
    }

    pub fn encapsulate(
        &mut self,
        inner: Segment,
        now: SimTime,
        wire_bytes: u64,
    ) -> Result<EspPacket, TunnelError> {
        self.last_seq = self
            .last_seq
            .checked_add(1)
            .ok_or(TunnelError::SeqExhausted(self.id))?;
        Ok(EspPacket {
            sa: self.id,
            esp_seq: self.last_seq,
            inner,
            stamped_at: now,
            wire_bytes,
        })
    }
}

/// Whether flows share one association or get one each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaPolicy {
    Single,
    PerFlow,
}

/// Outbound associations of one gateway for one direction.
#[derive(Debug)]
pub struct SaTable {
    policy: SaPolicy,
    /// SA identifiers are `base_id` (single) or `base_id + flow` (per flow),
    /// so both gateways derive the same ids without negotiation.
    base_id: u32,
    states: BTreeMap<SaId, SaState>,
}

impl SaTable {
    pub fn new(policy: SaPolicy, base_id: u32) -> Self {
        SaTable {
            policy,
            base_id,
            states: BTreeMap::new(),
        }
    }

    pub fn sa_id_for(&self, flow: FlowId) -> SaId {
        match self.policy {
            SaPolicy::Single => SaId(self.base_id),
            SaPolicy::PerFlow => SaId(self.base_id + flow.0),
        }
    }

    pub fn encapsulate(
        &mut self,
        inner: Segment,
        now: SimTime,
        wire_bytes: u64,
    ) -> Result<EspPacket, TunnelError> {
        let id = self.sa_id_for(inner.flow);
        self.states
            .entry(id)
            .or_insert_with(|| SaState::new(id))
            .encapsulate(inner, now, wire_bytes)
    }

    /// Associations that have sent at least one packet.
    pub fn active(&self) -> impl Iterator<Item = &SaState> {
        self.states.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tcp::Segment;

    fn seg(flow: u32, seq: u64) -> Segment {
        Segment::data(FlowId(flow), seq, SimTime::ZERO)
    }

    #[test]
    fn sequence_numbers_start_at_one_and_increase() {
        let mut sa = SaState::new(SaId(7));
        let a = sa.encapsulate(seg(1, 1), SimTime::ZERO, 1000).unwrap();
        let b = sa.encapsulate(seg(1, 2), SimTime::ZERO, 1000).unwrap();
        assert_eq!(a.esp_seq(), 1);
        assert_eq!(b.esp_seq(), 2);
        assert_eq!(a.sa(), SaId(7));
    }

    #[test]
    fn single_policy_shares_one_counter_across_flows() {
        let mut table = SaTable::new(SaPolicy::Single, 1);
        let a = table.encapsulate(seg(1, 1), SimTime::ZERO, 1000).unwrap();
        let b = table.encapsulate(seg(2, 1), SimTime::ZERO, 1000).unwrap();
        let c = table.encapsulate(seg(1, 2), SimTime::ZERO, 1000).unwrap();
        assert_eq!(
            (a.esp_seq(), b.esp_seq(), c.esp_seq()),
            (1, 2, 3),
            "interleaved flows must share the counter"
        );
        assert_eq!(a.sa(), b.sa());
    }

    #[test]
    fn per_flow_policy_gives_independent_counters() {
        let mut table = SaTable::new(SaPolicy::PerFlow, 100);
        let a = table.encapsulate(seg(1, 1), SimTime::ZERO, 1000).unwrap();
        let b = table.encapsulate(seg(2, 1), SimTime::ZERO, 1000).unwrap();
        assert_eq!(a.esp_seq(), 1);
        assert_eq!(b.esp_seq(), 1);
        assert_ne!(a.sa(), b.sa());
    }

    #[test]
    fn timestamp_is_the_encapsulation_instant() {
        let mut sa = SaState::new(SaId(1));
        let t = SimTime::from_millis(123);
        let p = sa.encapsulate(seg(1, 1), t, 1000).unwrap();
        assert_eq!(p.stamped_at(), t);
    }

    #[test]
    fn cloning_preserves_every_field() {
        // A duplicate on the wire is indistinguishable from the original.
        let mut sa = SaState::new(SaId(1));
        let p = sa.encapsulate(seg(1, 4), SimTime::from_millis(5), 1000).unwrap();
        let copy = p.clone();
        assert_eq!(copy, p);
    }
}
