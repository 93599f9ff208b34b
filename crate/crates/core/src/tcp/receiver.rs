//! Receiver-side reassembly and acknowledgement.
//!
//! Every data segment is acknowledged immediately (no delayed ACKs) with the
//! cumulative next-expected sequence. Out-of-order segments are buffered, so
//! filling a gap advances the acknowledgement past everything contiguous.

use std::collections::BTreeSet;

use super::segment::FlowId;

#[derive(Debug)]
pub struct TcpReceiver {
    flow: FlowId,
    next_expected: u64,
    buffered: BTreeSet<u64>,
    duplicate_data: u64,
}

impl TcpReceiver {
    pub fn new(flow: FlowId) -> Self {
        TcpReceiver {
            flow,
            next_expected: 1,
            buffered: BTreeSet::new(),
            duplicate_data: 0,
        }
    }

    pub fn flow(&self) -> FlowId {
        self.flow
    }

    pub fn next_expected(&self) -> u64 {
        self.next_expected
    }

    /// Count of data segments received that carried nothing new.
    pub fn duplicate_data(&self) -> u64 {
        self.duplicate_data
    }

    /// Highest contiguous prefix delivered, in segments.
    pub fn delivered_segments(&self) -> u64 {
        self.next_expected - 1
    }

    /// Accepts one data segment and returns the acknowledgement number to
    /// send back. An ACK goes out for every segment, so a repeat of the
    /// current expectation shows up at the sender as a duplicate ACK.
    pub fn on_data(&mut self, seq: u64) -> u64 {
        if seq == self.next_expected {
            self.next_expected += 1;
            while self.buffered.remove(&self.next_expected) {
                self.next_expected += 1;
            }
        } else if seq > self.next_expected {
            if !self.buffered.insert(seq) {
                self.duplicate_data += 1;
            }
        } else {
            self.duplicate_data += 1;
        }
        self.next_expected
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn in_order_data_advances_the_ack() {
        let mut r = TcpReceiver::new(FlowId(1));
        assert_eq!(r.on_data(1), 2);
        assert_eq!(r.on_data(2), 3);
        assert_eq!(r.delivered_segments(), 2);
    }

    #[test]
    fn gap_produces_duplicate_acks() {
        let mut r = TcpReceiver::new(FlowId(1));
        for seq in 1..10 {
            r.on_data(seq);
        }
        assert_eq!(r.next_expected(), 10);
        assert_eq!(r.on_data(13), 10);
        assert_eq!(r.on_data(14), 10);
        assert_eq!(r.on_data(11), 10);
    }

    #[test]
    fn filling_the_gap_acknowledges_everything_buffered() {
        let mut r = TcpReceiver::new(FlowId(1));
        for seq in 1..10 {
            r.on_data(seq);
        }
        r.on_data(11);
        r.on_data(12);
        assert_eq!(r.on_data(10), 13);
    }

    #[test]
    fn repeated_data_is_counted_and_reacknowledged() {
        let mut r = TcpReceiver::new(FlowId(1));
        r.on_data(1);
        assert_eq!(r.on_data(1), 2);
        assert_eq!(r.duplicate_data(), 1);
        r.on_data(5);
        assert_eq!(r.on_data(5), 2);
        assert_eq!(r.duplicate_data(), 2);
    }
}
