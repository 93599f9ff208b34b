//! Differential check of the sliding replay window against a brute-force
//! model that remembers every accepted sequence number in a set.
//!
//! The production window stores seen-bits in a recycled ring of 64-bit
//! blocks, so the bug class to catch is stale bits surviving a slide and
//! aliasing into the live window. The set model cannot alias by
//! construction, which makes it a trustworthy reference for every outcome,
//! not just accept/reject.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stealthsim_core::tunnel::{AntiReplayWindow, ReplayOutcome};

struct SetModel {
    width: u64,
    right: u64,
    seen: BTreeSet<u64>,
}

impl SetModel {
    fn new(width: u64) -> Self {
        SetModel { width, right: 0, seen: BTreeSet::new() }
    }

    fn check(&mut self, seq: u64) -> ReplayOutcome {
        if self.width == 0 {
            self.right = self.right.max(seq);
            return ReplayOutcome::AcceptAdvance;
        }
        if seq > self.right {
            self.right = seq;
            self.seen.insert(seq);
            return ReplayOutcome::AcceptAdvance;
        }
        if self.right - seq >= self.width {
            return ReplayOutcome::RejectLeftOfWindow;
        }
        if self.seen.contains(&seq) {
            return ReplayOutcome::RejectDuplicate;
        }
        self.seen.insert(seq);
        ReplayOutcome::AcceptInWindow
    }
}

/// Runs one stream through both implementations, insisting on identical
/// outcomes and identical window edges after every single decision.
fn drive(width: u64, seqs: &[u64]) -> u64 {
    let mut real = AntiReplayWindow::new(width);
    let mut model = SetModel::new(width);
    for &seq in seqs {
        let got = real.check(seq);
        let want = model.check(seq);
        assert_eq!(got, want, "width {width}, seq {seq}");
        assert_eq!(real.right_edge(), model.right, "width {width}, seq {seq}");
    }
    seqs.len() as u64
}

/// A mix of edge advances, in-window revisits, replays of past traffic,
/// deep-past probes, and occasional long jumps.
fn mixed_stream(rng: &mut ChaCha8Rng, width: u64, len: usize) -> Vec<u64> {
    let spread = width.max(64);
    let mut cursor: u64 = 1;
    let mut history: Vec<u64> = Vec::new();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let seq = match rng.gen_range(0..100) {
            0..=44 => {
                cursor += rng.gen_range(1..=3);
                cursor
            }
            45..=69 => cursor.saturating_sub(rng.gen_range(0..=spread)).max(1),
            70..=89 => *history.choose(rng).unwrap_or(&cursor),
            90..=94 => cursor.saturating_sub(spread + rng.gen_range(1..=spread)).max(1),
            _ => {
                cursor += spread * rng.gen_range(1..=3);
                cursor
            }
        };
        history.push(seq);
        out.push(seq);
    }
    out
}

#[test]
fn ring_window_matches_set_model_across_one_hundred_thousand_decisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let widths = [0u64, 1, 3, 64, 65, 100, 128, 1000, 1_000_000];
    let mut decisions = 0u64;

    for &width in &widths {
        let stream = mixed_stream(&mut rng, width, 11_000);
        decisions += drive(width, &stream);
    }

    // Handcrafted orderings that target the ring's block recycling.
    for &width in &[1u64, 64, 65, 128] {
        let mut stream = Vec::new();
        // Ascend in steps of exactly one window so every accept slides a
        // whole window's worth of blocks.
        for k in 1..=200u64 {
            stream.push(k * width.max(1));
        }
        // Then descend back through everything just accepted.
        for k in (1..=200u64).rev() {
            stream.push(k * width.max(1));
        }
        // Alternate far-future, far-past, and the never-sent sequence 0.
        for k in 1..=100u64 {
            stream.push(100_000 + k);
            stream.push(k);
            stream.push(0);
        }
        decisions += drive(width, &stream);
    }

    assert!(
        decisions >= 100_000,
        "corpus shrank below the contract: {decisions} decisions"
    );
}
