//! Property tests for the building blocks: scheduler ordering, link FIFO
//! discipline, congestion-control bookkeeping, rate-limiter envelopes, and
//! parser robustness.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use stealthsim_core::adversary::LeakyBucket;
use stealthsim_core::metrics::{injections_within_budget, InjectionRecord};
use stealthsim_core::scenario::parse_scenario;
use stealthsim_core::sim::{EndpointId, EventQueue, Link, SimTime};
use stealthsim_core::tcp::{
    AckClass, FlowId, SenderAction, SenderConfig, TcpSender, WindowSize,
};
use stealthsim_core::tunnel::{AntiReplayWindow, ReplayOutcome};

#[derive(Debug, Clone)]
enum SenderOp {
    /// Ask the window for permission to transmit.
    Fill,
    /// Acknowledge some new data, capped at what was actually sent.
    AckNew(u8),
    /// Repeat the last acknowledgment.
    AckDup,
    /// Fire the retransmission timer.
    Rto,
}

fn sender_ops() -> impl Strategy<Value = Vec<SenderOp>> {
    prop::collection::vec(
        prop_oneof![
            3 => Just(SenderOp::Fill),
            4 => (1u8..8).prop_map(SenderOp::AckNew),
            3 => Just(SenderOp::AckDup),
            1 => Just(SenderOp::Rto),
        ],
        1..120,
    )
}

proptest! {
    /// All dispatches come out in time order, and equal times preserve
    /// scheduling order.
    #[test]
    fn queue_orders_by_time_then_by_insertion(
        offsets in prop::collection::vec(0u64..500, 1..150)
    ) {
        let mut q: EventQueue<usize> = EventQueue::new();
        for (idx, &off) in offsets.iter().enumerate() {
            q.schedule(SimTime::from_micros(off), EndpointId(0), idx).unwrap();
        }
        let mut seen: Vec<(u64, usize)> = Vec::new();
        q.run_until(SimTime::from_micros(1000), |_, ev| {
            seen.push((ev.fire_at.as_micros(), ev.payload));
        });
        prop_assert_eq!(seen.len(), offsets.len());
        for pair in seen.windows(2) {
            let (t0, i0) = pair[0];
            let (t1, i1) = pair[1];
            prop_assert!(t0 <= t1);
            if t0 == t1 {
                prop_assert!(i0 < i1, "same-instant events left in order {i0} then {i1}");
            }
        }
    }

    /// Cancelled events never fire; everything else does, exactly once.
    #[test]
    fn cancel_removes_exactly_the_cancelled_events(
        offsets in prop::collection::vec(0u64..500, 1..100),
        cancel_mask in prop::collection::vec(any::<bool>(), 100)
    ) {
        let mut q: EventQueue<usize> = EventQueue::new();
        let mut cancelled = Vec::new();
        for (idx, &off) in offsets.iter().enumerate() {
            let handle = q.schedule(SimTime::from_micros(off), EndpointId(0), idx).unwrap();
            if cancel_mask[idx] {
                prop_assert!(q.cancel(handle));
                cancelled.push(idx);
            }
        }
        let mut fired = Vec::new();
        q.run_until(SimTime::from_micros(1000), |_, ev| fired.push(ev.payload));
        prop_assert_eq!(fired.len(), offsets.len() - cancelled.len());
        for idx in cancelled {
            prop_assert!(!fired.contains(&idx));
        }
    }

    /// A link is a FIFO pipe: later sends never overtake earlier ones, and
    /// nothing arrives before its own serialization plus propagation.
    #[test]
    fn links_never_reorder_and_never_teleport(
        sends in prop::collection::vec((1u64..2000, 0u64..200), 1..100)
    ) {
        let rate = 1_000_000_000u64;
        let mut link = Link::new(SimTime::from_millis(1), rate);
        let mut sent_at = SimTime::ZERO;
        let mut last_arrival = SimTime::ZERO;
        for &(size, gap) in &sends {
            sent_at += SimTime::from_micros(gap);
            let arrival = link.deliver(size, sent_at).unwrap();
            let floor = sent_at + link.transmission(size) + link.propagation();
            prop_assert!(arrival >= floor);
            prop_assert!(arrival > last_arrival, "arrivals must strictly increase");
            last_arrival = arrival;
        }
    }

    /// Congestion-control bookkeeping stays consistent under arbitrary but
    /// well-formed ACK and timer interleavings.
    #[test]
    fn sender_state_stays_consistent(
        cwnd0 in 1u64..32,
        ssthresh0 in 2u64..64,
        cap in prop::option::of(4u64..40),
        ops in sender_ops()
    ) {
        let mut sender = TcpSender::new(SenderConfig {
            flow: FlowId(1),
            initial_cwnd: WindowSize::from_mss(cwnd0),
            initial_ssthresh: WindowSize::from_mss(ssthresh0),
            cwnd_cap: cap.map(WindowSize::from_mss),
            rto_interval: SimTime::from_millis(400),
            transfer_segments: None,
        });
        let mut now = SimTime::ZERO;
        let check = |sender: &TcpSender| {
            prop_assert!(sender.highest_acked() <= sender.next_seq());
            prop_assert_eq!(sender.pending(), sender.next_seq() - sender.highest_acked());
            prop_assert!(sender.cwnd() >= WindowSize::ONE, "window collapsed below one segment");
            prop_assert!(sender.ssthresh().floor_mss() >= 2);
            if let Some(c) = cap {
                prop_assert!(sender.cwnd() <= WindowSize::from_mss(c));
            }
            Ok(())
        };
        check(&sender)?;
        for op in ops {
            now += SimTime::from_millis(1);
            match op {
                SenderOp::Fill => {
                    let out = sender.try_send(now);
                    for action in &out.actions {
                        let SenderAction::Send(seg) = action else {
                            return Err(TestCaseError::fail("filling never retransmits"));
                        };
                        prop_assert!(seg.data_seq().unwrap() < sender.next_seq());
                    }
                }
                SenderOp::AckNew(k) => {
                    if sender.pending() == 0 {
                        continue;
                    }
                    let ack = (sender.highest_acked() + k as u64).min(sender.next_seq());
                    let (class, _) = sender.on_ack(ack, now).unwrap();
                    prop_assert_eq!(class, AckClass::NewData);
                    prop_assert_eq!(sender.dup_acks(), 0, "new data resets the dup counter");
                    prop_assert_eq!(sender.highest_acked(), ack);
                }
                SenderOp::AckDup => {
                    if sender.highest_acked() == 0 || sender.pending() == 0 {
                        continue;
                    }
                    let before = sender.highest_acked();
                    let (class, out) = sender.on_ack(before, now).unwrap();
                    prop_assert_eq!(class, AckClass::Duplicate);
                    prop_assert_eq!(sender.highest_acked(), before);
                    for action in &out.actions {
                        if let SenderAction::Retransmit(seg) = action {
                            prop_assert_eq!(seg.data_seq().unwrap(), before);
                        }
                    }
                }
                SenderOp::Rto => {
                    let pending_before = sender.pending();
                    let out = sender.on_rto(now);
                    if pending_before == 0 {
                        prop_assert!(out.actions.is_empty());
                    } else {
                        prop_assert_eq!(sender.cwnd(), WindowSize::ONE);
                    }
                }
            }
            check(&sender)?;
        }
    }

    /// Whatever the bucket admits satisfies the arrival-curve bound that the
    /// analyzer checks, for every pair of instants.
    #[test]
    fn leaky_bucket_admissions_satisfy_their_own_envelope(
        rho in 0.1f64..10.0,
        sigma in 1u32..8,
        tries in prop::collection::vec((0u64..2_000_000, 1u32..4), 0..80)
    ) {
        let mut bucket = LeakyBucket::new(rho, sigma);
        let mut now = SimTime::ZERO;
        let mut log = Vec::new();
        for &(gap, n) in &tries {
            now += SimTime::from_micros(gap);
            if bucket.admit(now, n) {
                for _ in 0..n {
                    log.push(InjectionRecord {
                        decided_at_us: now.as_micros(),
                        deliver_at_us: now.as_micros(),
                        epoch: 0,
                    });
                }
            }
        }
        prop_assert!(injections_within_budget(&log, rho, sigma));
    }

    /// The replay window's right edge only ever moves forward, and only an
    /// out-of-window-high sequence moves it.
    #[test]
    fn replay_edge_is_monotone(
        width in 0u64..200,
        seqs in prop::collection::vec(0u64..10_000, 1..300)
    ) {
        let mut w = AntiReplayWindow::new(width);
        for &seq in &seqs {
            let edge_before = w.right_edge();
            let outcome = w.check(seq);
            prop_assert!(w.right_edge() >= edge_before);
            if outcome == ReplayOutcome::AcceptAdvance && width > 0 {
                prop_assert!(seq > edge_before);
                prop_assert_eq!(w.right_edge(), seq);
            } else if width > 0 {
                prop_assert_eq!(w.right_edge(), edge_before);
            }
        }
    }

    /// Fixed-point windows carry whole segments exactly.
    #[test]
    fn window_size_arithmetic_is_exact_on_whole_segments(
        n in 1u64..10_000,
        k in 0u64..100
    ) {
        let w = WindowSize::from_mss(n);
        prop_assert_eq!(w.floor_mss(), n);
        prop_assert_eq!(w.half_floor_mss(), n / 2);
        prop_assert_eq!(w.add_mss(k).floor_mss(), n + k);
        prop_assert!((w.as_f64() - n as f64).abs() < 1e-9);
    }

    /// No input text can panic the scenario parser.
    #[test]
    fn scenario_parser_never_panics(text in "\\PC*") {
        let _ = parse_scenario(&text);
    }

    /// Structured junk with plausible shapes must come back as errors, not
    /// panics or silent acceptance of unknown keys.
    #[test]
    fn unknown_keys_are_always_rejected(
        key in "[a-z]{1,12}\\.[a-z]{1,12}",
        value in "[a-z0-9]{1,8}"
    ) {
        prop_assume!(!stealthsim_core::scenario::KNOWN_KEYS.contains(&key.as_str()));
        let text = format!("{key} = {value}\n");
        prop_assert!(parse_scenario(&text).is_err());
    }
}
