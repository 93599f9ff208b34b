//! Sliding-window replay protection.
//!
//! The window covers the `width` sequence numbers up to and including the
//! highest accepted one (`right_edge`). A packet beyond the edge slides the
//! window forward; a packet inside the window is accepted once and rejected
//! as a duplicate afterwards; a packet at or below `right_edge - width` is
//! rejected outright. Rejections are silent drops and never move the window.
//!
//! The seen-set is a ring of 64-bit blocks with one spare block, so sliding
//! clears whole blocks instead of shifting bits.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplayOutcome {
    /// Beyond the right edge: accepted, window slid forward.
    AcceptAdvance,
    /// Inside the window and not seen before.
    AcceptInWindow,
    RejectDuplicate,
    RejectLeftOfWindow,
}

impl ReplayOutcome {
    pub fn accepted(self) -> bool {
        matches!(self, ReplayOutcome::AcceptAdvance | ReplayOutcome::AcceptInWindow)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReplayOutcome::AcceptAdvance => "accept_advance",
            ReplayOutcome::AcceptInWindow => "accept_in_window",
            ReplayOutcome::RejectDuplicate => "reject_duplicate",
            ReplayOutcome::RejectLeftOfWindow => "reject_left_of_window",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AntiReplayWindow {
    /// Window width in sequence numbers; 0 disables replay protection.
    width: u64,
    /// Highest sequence number accepted so far. Sequence numbers start at 1,
    /// so 0 means nothing received yet.
    right_edge: u64,
    blocks: Vec<u64>,
}

impl AntiReplayWindow {
    pub fn new(width: u64) -> Self {
        let nblocks = if width == 0 {
            0
        } else {
            // One spare block keeps live bits clear of the block that gets
            // recycled when the edge crosses a block boundary.
            (width as usize).div_ceil(64) + 1
        };
        AntiReplayWindow {
            width,
            right_edge: 0,
            blocks: vec![0; nblocks],
        }
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn right_edge(&self) -> u64 {
        self.right_edge
    }

    pub fn disabled(&self) -> bool {
        self.width == 0
    }

    fn bit_is_set(&self, seq: u64) -> bool {
        let nblocks = self.blocks.len() as u64;
        let block = (seq / 64) % nblocks;
        self.blocks[block as usize] & (1 << (seq % 64)) != 0
    }

    fn set_bit(&mut self, seq: u64) {
        let nblocks = self.blocks.len() as u64;
        let block = (seq / 64) % nblocks;
        self.blocks[block as usize] |= 1 << (seq % 64);
    }

    /// Checks a sequence number and commits the result.
    pub fn check(&mut self, seq: u64) -> ReplayOutcome {
        if self.width == 0 {
            self.right_edge = self.right_edge.max(seq);
            return ReplayOutcome::AcceptAdvance;
        }
        if seq > self.right_edge {
            let nblocks = self.blocks.len() as u64;
            let cur_block = self.right_edge / 64;
            let new_block = seq / 64;
            let distance = (new_block - cur_block).min(nblocks);
            for i in 1..=distance {
                let idx = ((cur_block + i) % nblocks) as usize;
                self.blocks[idx] = 0;
            }
            self.right_edge = seq;
            self.set_bit(seq);
            return ReplayOutcome::AcceptAdvance;
        }
        if self.right_edge - seq >= self.width {
            return ReplayOutcome::RejectLeftOfWindow;
        }
        if self.bit_is_set(seq) {
            return ReplayOutcome::RejectDuplicate;
        }
        self.set_bit(seq);
        ReplayOutcome::AcceptInWindow
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReplayOutcome::*;

    fn window_at(width: u64, edge: u64) -> AntiReplayWindow {
        let mut w = AntiReplayWindow::new(width);
        if edge > 0 {
            assert_eq!(w.check(edge), AcceptAdvance);
        }
        w
    }

    #[test]
    fn packet_beyond_the_edge_slides_the_window() {
        let mut w = window_at(64, 200);
        assert_eq!(w.check(201), AcceptAdvance);
        assert_eq!(w.right_edge(), 201);
    }

    #[test]
    fn replayed_sequence_is_rejected_as_duplicate() {
        let mut w = window_at(64, 200);
        assert_eq!(w.check(200), RejectDuplicate);
        assert_eq!(w.right_edge(), 200);
    }

    #[test]
    fn edge_minus_width_falls_outside() {
        // Window [138, 201]: 137 is one too old, 138 is the oldest slot.
        let mut w = window_at(64, 201);
        assert_eq!(w.check(137), RejectLeftOfWindow);
        assert_eq!(w.check(138), AcceptInWindow);
        assert_eq!(w.check(138), RejectDuplicate);
        assert_eq!(w.right_edge(), 201);
    }

    #[test]
    fn zero_width_accepts_everything() {
        let mut w = AntiReplayWindow::new(0);
        assert_eq!(w.check(5), AcceptAdvance);
        assert_eq!(w.check(5), AcceptAdvance);
        assert_eq!(w.check(1), AcceptAdvance);
        assert_eq!(w.right_edge(), 5);
    }

    #[test]
    fn long_jump_clears_stale_state() {
        let mut w = AntiReplayWindow::new(64);
        for seq in 1..=10 {
            w.check(seq);
        }
        assert_eq!(w.check(10_000), AcceptAdvance);
        // Everything in the new window is unseen despite ring reuse.
        assert_eq!(w.check(9_990), AcceptInWindow);
        assert_eq!(w.check(9_937), AcceptInWindow);
        assert_eq!(w.check(9_936), RejectLeftOfWindow);
        assert_eq!(w.check(10), RejectLeftOfWindow);
    }

    #[test]
    fn rejects_do_not_move_the_window() {
        let mut w = window_at(8, 100);
        assert_eq!(w.check(50), RejectLeftOfWindow);
        assert_eq!(w.check(100), RejectDuplicate);
        assert_eq!(w.right_edge(), 100);
        // The oldest in-window slot is still usable.
        assert_eq!(w.check(93), AcceptInWindow);
    }

    #[test]
    fn width_one_accepts_only_fresh_maxima() {
        let mut w = AntiReplayWindow::new(1);
        assert_eq!(w.check(1), AcceptAdvance);
        assert_eq!(w.check(2), AcceptAdvance);
        assert_eq!(w.check(2), RejectDuplicate);
        assert_eq!(w.check(1), RejectLeftOfWindow);
    }

    #[test]
    fn million_wide_window_tracks_distant_history() {
        let mut w = AntiReplayWindow::new(1_000_000);
        assert_eq!(w.check(1_000_000), AcceptAdvance);
        assert_eq!(w.check(1), AcceptInWindow);
        assert_eq!(w.check(1), RejectDuplicate);
        assert_eq!(w.check(1_000_001), AcceptAdvance);
        assert_eq!(w.check(1), RejectLeftOfWindow);
    }
}
