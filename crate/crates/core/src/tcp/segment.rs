//! Transport segments.
//!
//! Sequence and acknowledgement numbers count whole segments (MSS units),
//! not bytes. Data segments carry a sequence number; ACKs carry the
//! cumulative acknowledgement number and nothing else.

use crate::sim::SimTime;

/// Identifies a TCP flow within a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentBody {
    Data { seq: u64 },
    Ack { ack_num: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub flow: FlowId,
    pub body: SegmentBody,
    pub sent_at: SimTime,
}

impl Segment {
    pub fn data(flow: FlowId, seq: u64, sent_at: SimTime) -> Self {
        Segment {
            flow,
            body: SegmentBody::Data { seq },
            sent_at,
        }
    }

    pub fn ack(flow: FlowId, ack_num: u64, sent_at: SimTime) -> Self {
        Segment {
            flow,
            body: SegmentBody::Ack { ack_num },
            sent_at,
        }
    }

    pub fn is_data(&self) -> bool {
        matches!(self.body, SegmentBody::Data { .. })
    }

    pub fn data_seq(&self) -> Option<u64> {
        match self.body {
            SegmentBody::Data { seq } => Some(seq),
            SegmentBody::Ack { .. } => None,
        }
    }

    pub fn ack_num(&self) -> Option<u64> {
        match self.body {
            SegmentBody::Ack { ack_num } => Some(ack_num),
            SegmentBody::Data { .. } => None,
        }
    }
}
