//! Deterministic event queue.
//!
//! Events are dispatched in lexicographic `(fire_at, seq_no)` order. The
//! sequence number is a global insertion counter, so events scheduled for the
//! same instant dispatch in FIFO order. Given identical schedules, dispatch
//! order is identical on every run.

use std::collections::BTreeMap;

use thiserror::Error;

use super::time::SimTime;

/// Identifies the actor an event is addressed to. The kernel does not
/// interpret it; routing is the dispatcher's job.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndpointId(pub u16);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    /// Scheduling behind the clock means some component computed a stale
    /// timestamp; the run is not trustworthy past this point.
    #[error("cannot schedule event at {at} before current time {now}")]
    SchedulePast { at: SimTime, now: SimTime },
    #[error("packet size must be positive")]
    ZeroPacketSize,
}

/// Total order for pending events: fire time first, insertion order second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct EventKey {
    fire_at: SimTime,
    seq_no: u64,
}

/// Token for cancelling a scheduled event before it fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventHandle(EventKey);

/// A dispatched event, as handed to the dispatcher callback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event<P> {
    pub fire_at: SimTime,
    pub seq_no: u64,
    pub target: EndpointId,
    pub payload: P,
}

/// Pending-event store plus the virtual clock.
///
/// A `BTreeMap` keyed by `(fire_at, seq_no)` gives ordered pops and `O(log n)`
/// cancellation without tombstones.
#[derive(Debug)]
pub struct EventQueue<P> {
    now: SimTime,
    next_seq: u64,
    pending: BTreeMap<EventKey, (EndpointId, P)>,
    dispatched: u64,
}

impl<P> Default for EventQueue<P> {
    fn default() -> Self {
        Self::new()
    }
}

impl<P> EventQueue<P> {
    pub fn new() -> Self {
        EventQueue {
            now: SimTime::ZERO,
            next_seq: 0,
            pending: BTreeMap::new(),
            dispatched: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    pub fn dispatched(&self) -> u64 {
        self.dispatched
    }

    /// Schedules `payload` for `target` at instant `at` (may equal `now`).
    pub fn schedule(
        &mut self,
        at: SimTime,
        target: EndpointId,
        payload: P,
    ) -> Result<EventHandle, SimError> {
        if at < self.now {
            return Err(SimError::SchedulePast { at, now: self.now });
        }
        let key = EventKey {
            fire_at: at,
            seq_no: self.next_seq,
        };
        self.next_seq += 1;
        self.pending.insert(key, (target, payload));
        Ok(EventHandle(key))
    }

    /// Removes a not-yet-dispatched event. Returns whether it was present.
    pub fn cancel(&mut self, handle: EventHandle) -> bool {
        self.pending.remove(&handle.0).is_some()
    }

    fn pop_due(&mut self, t_end: SimTime) -> Option<Event<P>> {
        let key = *self.pending.keys().next()?;
        if key.fire_at > t_end {
            return None;
        }
        let (target, payload) = self.pending.remove(&key).expect("key just observed");
        self.now = key.fire_at;
        self.dispatched += 1;
        Some(Event {
            fire_at: key.fire_at,
            seq_no: key.seq_no,
            target,
            payload,
        })
    }

    /// Dispatches every event with `fire_at <= t_end` in order, advancing the
    /// clock to each event's instant and finally to `t_end`. The callback may
    /// schedule and cancel further events. Returns the dispatch count.
    pub fn run_until<F>(&mut self, t_end: SimTime, mut dispatch: F) -> u64
    where
        F: FnMut(&mut EventQueue<P>, Event<P>),
    {
        let before = self.dispatched;
        while let Some(ev) = self.pop_due(t_end) {
            dispatch(self, ev);
        }
        if self.now < t_end {
            self.now = t_end;
        }
        self.dispatched - before
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: EndpointId = EndpointId(0);

    fn at(us: u64) -> SimTime {
        SimTime::from_micros(us)
    }

    #[test]
    fn same_instant_dispatches_fifo() {
        let mut q = EventQueue::new();
        q.schedule(at(10), A, "first").unwrap();
        q.schedule(at(10), A, "second").unwrap();
        let mut seen = Vec::new();
        q.run_until(at(10), |_, ev| seen.push(ev.payload));
        assert_eq!(seen, ["first", "second"]);
    }

    #[test]
    fn dispatch_order_ignores_insertion_order_across_times() {
        let mut q = EventQueue::new();
        q.schedule(at(30), A, 30).unwrap();
        q.schedule(at(10), A, 10).unwrap();
        q.schedule(at(20), A, 20).unwrap();
        let mut seen = Vec::new();
        q.run_until(at(100), |_, ev| seen.push(ev.payload));
        assert_eq!(seen, [10, 20, 30]);
    }

    #[test]
    fn cancelled_event_never_fires() {
        let mut q = EventQueue::new();
        let h = q.schedule(at(5), A, "doomed").unwrap();
        q.schedule(at(6), A, "kept").unwrap();
        assert!(q.cancel(h));
        assert!(!q.cancel(h));
        let mut seen = Vec::new();
        q.run_until(at(10), |_, ev| seen.push(ev.payload));
        assert_eq!(seen, ["kept"]);
    }

    #[test]
    fn run_until_is_inclusive_of_the_boundary() {
        let mut q = EventQueue::new();
        q.schedule(at(3), A, ()).unwrap();
        q.schedule(at(5), A, ()).unwrap();
        q.schedule(at(5), A, ()).unwrap();
        q.schedule(at(7), A, ()).unwrap();
        let n = q.run_until(at(5), |_, _| {});
        assert_eq!(n, 3);
        assert_eq!(q.pending_len(), 1);
        assert_eq!(q.now(), at(5));
    }

    #[test]
    fn empty_queue_advances_clock_to_t_end() {
        let mut q: EventQueue<()> = EventQueue::new();
        let n = q.run_until(at(42), |_, _| {});
        assert_eq!(n, 0);
        assert_eq!(q.now(), at(42));
    }

    #[test]
    fn handler_may_schedule_cascading_events() {
        let mut q = EventQueue::new();
        q.schedule(at(1), A, 3u32).unwrap();
        let mut fired = Vec::new();
        q.run_until(at(100), |q, ev| {
            fired.push((ev.fire_at.as_micros(), ev.payload));
            if ev.payload > 0 {
                q.schedule(ev.fire_at + at(2), A, ev.payload - 1).unwrap();
            }
        });
        assert_eq!(fired, [(1, 3), (3, 2), (5, 1), (7, 0)]);
    }

    #[test]
    fn scheduling_in_the_past_is_rejected() {
        let mut q = EventQueue::new();
        q.schedule(at(10), A, ()).unwrap();
        q.run_until(at(10), |_, _| {});
        let err = q.schedule(at(9), A, ()).unwrap_err();
        assert_eq!(
            err,
            SimError::SchedulePast {
                at: at(9),
                now: at(10)
            }
        );
    }

    #[test]
    fn scheduling_at_now_is_allowed() {
        let mut q = EventQueue::new();
        q.schedule(at(10), A, "outer").unwrap();
        let mut seen = Vec::new();
        q.run_until(at(10), |q, ev| {
            seen.push(ev.payload);
            if ev.payload == "outer" {
                q.schedule(at(10), A, "inner").unwrap();
            }
        });
        assert_eq!(seen, ["outer", "inner"]);
    }
}
