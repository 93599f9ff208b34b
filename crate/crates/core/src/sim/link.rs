//! Point-to-point links with constant propagation delay.
//!
//! A link is unidirectional and lossless. Delivery time is transmission time
//! (store-and-forward, packet size over link rate) plus propagation delay.
//! Consecutive packets serialize: a packet never overtakes one handed to the
//! link before it, so send order equals arrival order.

use super::event::SimError;
use super::time::SimTime;

#[derive(Debug, Clone)]
pub struct Link {
    propagation: SimTime,
    /// Link rate in bytes per virtual second.
    rate_bps: u64,
    /// Arrival instant of the most recently accepted packet.
    fifo_head: SimTime,
}

impl Link {
    pub fn new(propagation: SimTime, rate_bytes_per_sec: u64) -> Self {
        assert!(
            propagation > SimTime::ZERO,
            "link propagation delay must be positive"
        );
        assert!(rate_bytes_per_sec > 0, "link rate must be positive");
        Link {
            propagation,
            rate_bps: rate_bytes_per_sec,
            fifo_head: SimTime::ZERO,
        }
    }

    pub fn propagation(&self) -> SimTime {
        self.propagation
    }

    /// Serialization delay for `size_bytes`, rounded up to a whole microsecond
    /// so distinct packets get distinct arrival instants on a drained link.
    pub fn transmission(&self, size_bytes: u64) -> SimTime {
        let us = (size_bytes as u128 * 1_000_000).div_ceil(self.rate_bps as u128);
        SimTime::from_micros(us as u64)
    }

    /// Computes and records the arrival instant for a packet handed to the
    /// link at `sent_at`.
    pub fn deliver(&mut self, size_bytes: u64, sent_at: SimTime) -> Result<SimTime, SimError> {
        if size_bytes == 0 {
            return Err(SimError::ZeroPacketSize);
        }
        let tx = self.transmission(size_bytes);
        let unqueued = sent_at + tx + self.propagation;
        let arrival = unqueued.max(self.fifo_head + tx);
        self.fifo_head = arrival;
        Ok(arrival)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delivery_is_transmission_plus_propagation() {
        // 1000 B at 1 MB/s is 1000 us on the wire, plus 50 ms of flight.
        let mut link = Link::new(SimTime::from_millis(50), 1_000_000);
        let arrival = link.deliver(1000, SimTime::ZERO).unwrap();
        assert_eq!(arrival.as_micros(), 51_000);
    }

    #[test]
    fn back_to_back_sends_arrive_in_order_and_spaced() {
        let mut link = Link::new(SimTime::from_millis(50), 1_000_000);
        let a = link.deliver(1000, SimTime::ZERO).unwrap();
        let b = link.deliver(1000, SimTime::ZERO).unwrap();
        let c = link.deliver(1000, SimTime::ZERO).unwrap();
        assert_eq!(a.as_micros(), 51_000);
        assert_eq!(b.as_micros(), 52_000);
        assert_eq!(c.as_micros(), 53_000);
    }

    #[test]
    fn small_packet_cannot_overtake_large_one() {
        let mut link = Link::new(SimTime::from_millis(1), 1_000_000);
        let big = link.deliver(100_000, SimTime::ZERO).unwrap();
        let small = link.deliver(40, SimTime::from_micros(10)).unwrap();
        assert!(small > big);
    }

    #[test]
    fn gap_longer_than_transmission_resets_spacing() {
        let mut link = Link::new(SimTime::from_millis(1), 1_000_000);
        let a = link.deliver(1000, SimTime::ZERO).unwrap();
        let b = link.deliver(1000, SimTime::from_millis(10)).unwrap();
        assert_eq!(a.as_micros(), 2_000);
        assert_eq!(b.as_micros(), 12_000);
    }

    #[test]
    fn tiny_packets_still_take_a_microsecond() {
        let mut link = Link::new(SimTime::from_millis(1), 1_000_000_000);
        let a = link.deliver(40, SimTime::ZERO).unwrap();
        assert_eq!(a.as_micros(), 1_001);
    }

    #[test]
    fn zero_size_is_rejected() {
        let mut link = Link::new(SimTime::from_millis(1), 1_000_000);
        assert_eq!(link.deliver(0, SimTime::ZERO), Err(SimError::ZeroPacketSize));
    }
}
