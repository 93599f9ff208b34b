//! Discrete-event simulation kernel: virtual clock, ordered event queue,
//! and constant-delay links.

mod event;
mod link;
mod time;

pub use event::{EndpointId, Event, EventHandle, EventQueue, SimError};
pub use link::Link;
pub use time::SimTime;
