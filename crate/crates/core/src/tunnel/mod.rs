//! IPsec-style tunnel between the two gateways: authenticated encapsulation
//! with per-SA sequence numbers, and sliding-window replay protection on the
//! receiving side.

mod antireplay;
mod esp;

pub use antireplay::{AntiReplayWindow, ReplayOutcome};
pub use esp::{EspPacket, SaId, SaPolicy, SaState, SaTable, TunnelError};
