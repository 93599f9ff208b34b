//! Trace output: what gets written, and how much.
//!
//! The level comes from the `STEALTHSIM_TRACE_LEVEL` environment variable
//! unless a caller overrides it. `summary` writes the metrics JSON only;
//! `full` adds a congestion-window CSV with one row per sender event. All
//! emitters are string builders so callers control file placement, and the
//! bytes are a pure function of the rows.

use std::fmt::Write as _;

use crate::metrics::RunMetrics;

pub const ENV_TRACE_LEVEL: &str = "STEALTHSIM_TRACE_LEVEL";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceLevel {
    Off,
    Summary,
    Full,
}

impl TraceLevel {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(TraceLevel::Off),
            "summary" => Ok(TraceLevel::Summary),
            "full" => Ok(TraceLevel::Full),
            other => Err(format!(
                "`{other}` is not a trace level (off, summary, full)"
            )),
        }
    }

    /// Reads the environment; an unset variable means `summary`.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(ENV_TRACE_LEVEL) {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(TraceLevel::Summary),
        }
    }

    pub fn wants_full(self) -> bool {
        self == TraceLevel::Full
    }

    pub fn wants_summary(self) -> bool {
        self != TraceLevel::Off
    }
}

/// One congestion-window transition at the sender.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwndRow {
    pub time_us: u64,
    pub cwnd_mss: f64,
    pub phase: &'static str,
    pub event: &'static str,
}

/// Renders the window trace. Floats print in shortest round-trip form, so
/// equal traces are equal bytes.
pub fn cwnd_csv(rows: &[CwndRow]) -> String {
    let mut out = String::from("time_us,cwnd_mss,phase,event\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.time_us, r.cwnd_mss, r.phase, r.event)
            .expect("string write");
    }
    out
}

pub fn metrics_json(m: &RunMetrics) -> String {
    m.to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_parse_and_reject() {
        assert_eq!(TraceLevel::parse("off"), Ok(TraceLevel::Off));
        assert_eq!(TraceLevel::parse("full"), Ok(TraceLevel::Full));
        assert!(TraceLevel::parse("loud").is_err());
    }

    #[test]
    fn csv_has_header_and_exact_rows() {
        let rows = [
            CwndRow {
                time_us: 100,
                cwnd_mss: 2.0,
                phase: "slow_start",
                event: "ack",
            },
            CwndRow {
                time_us: 250,
                cwnd_mss: 5.5,
                phase: "fast_recovery",
                event: "fast_retransmit",
            },
        ];
        assert_eq!(
            cwnd_csv(&rows),
            "time_us,cwnd_mss,phase,event\n\
             100,2,slow_start,ack\n\
             250,5.5,fast_recovery,fast_retransmit\n"
        );
    }

    #[test]
    fn empty_trace_is_just_the_header() {
        assert_eq!(cwnd_csv(&[]), "time_us,cwnd_mss,phase,event\n");
    }
}
