//! Segment-granularity TCP model: Reno congestion control on the sender,
//! cumulative acknowledgements with out-of-order buffering on the receiver.

mod receiver;
mod segment;
mod sender;
mod window;

pub use receiver::TcpReceiver;
pub use segment::{FlowId, Segment, SegmentBody};
pub use sender::{
    AckClass, Phase, SenderAction, SenderConfig, SenderOutput, TcpError, TcpSender,
    DUP_ACK_THRESHOLD,
};
pub use window::{WindowSize, FRAC_BITS};
