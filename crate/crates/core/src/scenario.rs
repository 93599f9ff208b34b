//! Scenario files: flat `key = value` text describing one experiment.
//!
//! Values carry units: durations (`us`, `ms`, `s`), byte counts (`B`, `KB`,
//! `MB`), and rates (`Bps` through `GBps`). Durations additionally accept
//! `rtt` and `owd` suffixes, multiples of the nominal round-trip time and
//! the nominal one-way tunnel delay computed from the link parameters, so a
//! file can pin an attack period to the path it runs on without copying
//! numbers. Unknown keys and malformed values are errors; missing keys fall
//! back to defaults. Everything is resolved to concrete integers at parse
//! time, so two processes reading the same file simulate the same world.

use std::collections::BTreeMap;

use crate::adversary::{AdversaryConfig, Strategy, Visibility};
use crate::rttp::{RttpConfig, RttpMode};
use crate::sim::SimTime;
use crate::tunnel::SaPolicy;

/// Bytes of transport and network header carried inside the tunnel.
pub const INNER_HEADER_BYTES: u64 = 40;
/// Bytes the encapsulation adds on the tunneled hop.
pub const ESP_OVERHEAD_BYTES: u64 = 40;
/// Segments below this size cannot be told apart from ACKs by wire size.
pub const MIN_MSS_BYTES: u64 = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("key `{key}`: {msg}")]
    BadValue { key: String, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Which honest packets a scripted drop removes at the receiving gateway.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropRacedHead {
    /// The overtaken flight head of every race.
    All,
    /// Only the head displaced by the race with this epoch index.
    Epoch(u64),
}

#[derive(Debug, Clone)]
pub struct AdversaryScenario {
    pub strategy: Strategy,
    pub rho_per_sec: f64,
    pub sigma: u32,
    pub epoch: SimTime,
    pub start_at: SimTime,
    pub speedup: SimTime,
    pub dup_count: u32,
    pub visibility: Visibility,
    /// Where along the tunneled hop the tap sits, percent of propagation
    /// already covered when a packet is observed.
    pub tap_pct: u64,
    pub victim_window: u64,
}

#[derive(Debug, Clone)]
pub struct RttpScenario {
    pub mode: RttpMode,
    /// Provisioned typical delay; `None` learns it from traffic.
    pub typical_delay: Option<SimTime>,
    pub guard_pct: u64,
    pub capacity: usize,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub t_end: SimTime,
    /// Reserved for randomized variants; the simulation itself is fully
    /// deterministic and never draws from it.
    pub seed: u64,
    pub mss_bytes: u64,
    pub transfer_segments: Option<u64>,
    pub lan_delay: SimTime,
    pub wan_delay: SimTime,
    pub rate_bps: u64,
    pub replay_window: u64,
    pub sa_policy: SaPolicy,
    pub cwnd0: u64,
    pub ssthresh0: u64,
    pub rto: SimTime,
    pub cwnd_cap: Option<u64>,
    pub adversary: Option<AdversaryScenario>,
    pub rttp: Option<RttpScenario>,
    pub drop_raced_head: Option<DropRacedHead>,
}

impl Scenario {
    /// Wire size of a data packet on the plain hops.
    pub fn data_lan_bytes(&self) -> u64 {
        self.mss_bytes + INNER_HEADER_BYTES
    }

    /// Wire size of a data packet on the tunneled hop.
    pub fn data_wan_bytes(&self) -> u64 {
        self.mss_bytes + INNER_HEADER_BYTES + ESP_OVERHEAD_BYTES
    }

    pub fn ack_lan_bytes(&self) -> u64 {
        INNER_HEADER_BYTES
    }

    pub fn ack_wan_bytes(&self) -> u64 {
        INNER_HEADER_BYTES + ESP_OVERHEAD_BYTES
    }

    fn tx(&self, bytes: u64) -> u64 {
        (bytes as u128 * 1_000_000).div_ceil(self.rate_bps as u128) as u64
    }

    /// Nominal tunnel traversal of a data packet: serialization onto the
    /// tunneled hop plus its propagation. This is the delay the receiving
    /// gateway sees against the encapsulation timestamp when queues are
    /// empty.
    pub fn nominal_tunnel_delay(&self) -> SimTime {
        SimTime::from_micros(self.tx(self.data_wan_bytes()) + self.wan_delay.as_micros())
    }

    /// Nominal round-trip time of one data segment and its ACK through all
    /// six hops with empty queues.
    pub fn nominal_rtt(&self) -> SimTime {
        let data = self.tx(self.data_lan_bytes()) + self.lan_delay.as_micros()
            + self.tx(self.data_wan_bytes()) + self.wan_delay.as_micros()
            + self.tx(self.data_lan_bytes()) + self.lan_delay.as_micros();
        let ack = self.tx(self.ack_lan_bytes()) + self.lan_delay.as_micros()
            + self.tx(self.ack_wan_bytes()) + self.wan_delay.as_micros()
            + self.tx(self.ack_lan_bytes()) + self.lan_delay.as_micros();
        SimTime::from_micros(data + ack)
    }

    /// Tunnel propagation remaining downstream of the adversary's tap.
    pub fn remaining_after_tap(&self) -> SimTime {
        match &self.adversary {
            Some(adv) => self.wan_delay.scale_pct(100 - adv.tap_pct),
            None => SimTime::ZERO,
        }
    }

    /// Adversary configuration in the form the attack engine consumes.
    pub fn adversary_config(&self) -> Option<AdversaryConfig> {
        self.adversary.as_ref().map(|a| AdversaryConfig {
            strategy: a.strategy,
            rho_per_sec: a.rho_per_sec,
            sigma: a.sigma,
            epoch: a.epoch,
            start_at: a.start_at,
            speedup: a.speedup,
            dup_count: a.dup_count,
            visibility: a.visibility,
            victim_window: a.victim_window,
        })
    }

    pub fn rttp_config(&self) -> Option<RttpConfig> {
        self.rttp.as_ref().map(|r| RttpConfig {
            mode: r.mode,
            guard_pct: r.guard_pct,
            capacity: r.capacity,
            typical_init: r.typical_delay,
        })
    }
}

/// Raw values survive lexing untyped because durations can only be resolved
/// once the link geometry is known.
struct Raw {
    map: BTreeMap<String, String>,
}

impl Raw {
    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }
}

/// Every key the format accepts; anything else is an error, not a warning.
pub const KNOWN_KEYS: &[&str] = &[
    "t_end",
    "seed",
    "mss",
    "transfer.segments",
    "link.lan_delay",
    "link.wan_delay",
    "link.rate",
    "tunnel.window",
    "tunnel.sa_policy",
    "tcp.cwnd0",
    "tcp.ssthresh0",
    "tcp.rto",
    "tcp.cwnd_cap",
    "adversary.strategy",
    "adversary.rho",
    "adversary.sigma",
    "adversary.epoch",
    "adversary.start",
    "adversary.speedup",
    "adversary.dup_count",
    "adversary.visibility",
    "adversary.tap_pct",
    "rttp.enabled",
    "rttp.mode",
    "rttp.typical_delay",
    "rttp.guard_pct",
    "rttp.capacity",
    "script.drop_raced_head",
];

fn lex(text: &str) -> Result<Raw, ScenarioError> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw_line.split_once('#') {
            Some((before, _)) => before,
            None => raw_line,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ScenarioError::Syntax {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if value.is_empty() {
            return Err(ScenarioError::Syntax {
                line,
                msg: format!("key `{key}` has no value"),
            });
        }
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ScenarioError::UnknownKey { line, key });
        }
        if map.contains_key(&key) {
            return Err(ScenarioError::DuplicateKey { line, key });
        }
        map.insert(key, value);
    }
    Ok(Raw { map })
}

fn bad(key: &str, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::BadValue {
        key: key.to_string(),
        msg: msg.into(),
    }
}

/// Splits `12ms` style values into the numeric part and the suffix.
fn split_suffix(value: &str) -> (&str, &str) {
    let split = value
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_digit() || *c == '.'))
        .map(|(i, _)| i)
        .unwrap_or(value.len());
    (&value[..split], &value[split..])
}

fn parse_scaled(key: &str, value: &str, scale: f64) -> Result<u64, ScenarioError> {
    let number: f64 = value
        .parse()
        .map_err(|_| bad(key, format!("`{value}` is not a number")))?;
    if number < 0.0 {
        return Err(bad(key, "must not be negative"));
    }
    Ok((number * scale).round() as u64)
}

/// A duration whose `rtt`/`owd` suffixes still need the link parameters.
#[derive(Debug, Clone, Copy)]
enum DurationSpec {
    Micros(u64),
    Rtt(f64),
    TunnelDelay(f64),
}

impl DurationSpec {
    fn resolve(self, rtt: SimTime, tunnel: SimTime) -> SimTime {
        match self {
            DurationSpec::Micros(us) => SimTime::from_micros(us),
            DurationSpec::Rtt(m) => SimTime::from_micros((m * rtt.as_micros() as f64).round() as u64),
            DurationSpec::TunnelDelay(m) => {
                SimTime::from_micros((m * tunnel.as_micros() as f64).round() as u64)
            }
        }
    }
}

fn parse_duration_spec(key: &str, value: &str) -> Result<DurationSpec, ScenarioError> {
    let (num, suffix) = split_suffix(value);
    match suffix {
        "us" => Ok(DurationSpec::Micros(parse_scaled(key, num, 1.0)?)),
        "ms" => Ok(DurationSpec::Micros(parse_scaled(key, num, 1e3)?)),
        "s" => Ok(DurationSpec::Micros(parse_scaled(key, num, 1e6)?)),
        "rtt" | "owd" => {
            let m: f64 = num
                .parse()
                .map_err(|_| bad(key, format!("`{value}` is not a number")))?;
            if m <= 0.0 {
                return Err(bad(key, "multiplier must be positive"));
            }
            Ok(if suffix == "rtt" {
                DurationSpec::Rtt(m)
            } else {
                DurationSpec::TunnelDelay(m)
            })
        }
        _ => Err(bad(
            key,
            format!("`{value}` needs a duration unit (us, ms, s, rtt, owd)"),
        )),
    }
}

/// Parses a byte count with a mandatory B, KB, or MB suffix.
pub fn parse_byte_count(key: &str, value: &str) -> Result<u64, ScenarioError> {
    let (num, suffix) = split_suffix(value);
    let scale = match suffix {
        "B" => 1.0,
        "KB" => 1e3,
        "MB" => 1e6,
        _ => return Err(bad(key, format!("`{value}` needs a size unit (B, KB, MB)"))),
    };
    parse_scaled(key, num, scale)
}

/// Parses a link rate with a mandatory Bps, KBps, MBps, or GBps suffix.
pub fn parse_rate(key: &str, value: &str) -> Result<u64, ScenarioError> {
    let (num, suffix) = split_suffix(value);
    let scale = match suffix {
        "Bps" => 1.0,
        "KBps" => 1e3,
        "MBps" => 1e6,
        "GBps" => 1e9,
        _ => {
            return Err(bad(
                key,
                format!("`{value}` needs a rate unit (Bps, KBps, MBps, GBps)"),
            ))
        }
    };
    parse_scaled(key, num, scale)
}

/// Parses a duration with a mandatory us, ms, or s suffix. The relative
/// `rtt` and `owd` forms are scenario-file-only and rejected here.
pub fn parse_absolute_duration(key: &str, value: &str) -> Result<SimTime, ScenarioError> {
    match parse_duration_spec(key, value)? {
        DurationSpec::Micros(us) => Ok(SimTime::from_micros(us)),
        _ => Err(bad(key, "must be an absolute duration (us, ms, s)")),
    }
}

fn parse_u64(key: &str, value: &str) -> Result<u64, ScenarioError> {
    value
        .parse()
        .map_err(|_| bad(key, format!("`{value}` is not a whole number")))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ScenarioError> {
    value
        .parse()
        .map_err(|_| bad(key, format!("`{value}` is not a number")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ScenarioError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, format!("`{value}` is not `true` or `false`"))),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut raw = lex(text)?;

    let mut take_with = |key: &str| raw.take(key);

    // Link geometry first: the derived clocks anchor every relative duration.
    let mss_bytes = match take_with("mss") {
        Some(v) => parse_byte_count("mss", &v)?,
        None => 1000,
    };
    let lan_delay = match take_with("link.lan_delay") {
        Some(v) => match parse_duration_spec("link.lan_delay", &v)? {
            DurationSpec::Micros(us) => SimTime::from_micros(us),
            _ => return Err(bad("link.lan_delay", "must be an absolute duration")),
        },
        None => SimTime::from_millis(1),
    };
    let wan_delay = match take_with("link.wan_delay") {
        Some(v) => match parse_duration_spec("link.wan_delay", &v)? {
            DurationSpec::Micros(us) => SimTime::from_micros(us),
            _ => return Err(bad("link.wan_delay", "must be an absolute duration")),
        },
        None => SimTime::from_millis(48),
    };
    let rate_bps = match take_with("link.rate") {
        Some(v) => parse_rate("link.rate", &v)?,
        None => 1_000_000_000,
    };
    if mss_bytes < MIN_MSS_BYTES {
        return Err(bad(
            "mss",
            format!("must be at least {MIN_MSS_BYTES} bytes so data dwarfs ACKs on the wire"),
        ));
    }
    if lan_delay == SimTime::ZERO || wan_delay == SimTime::ZERO {
        return Err(ScenarioError::Invalid(
            "link delays must be positive".into(),
        ));
    }
    if rate_bps == 0 {
        return Err(bad("link.rate", "must be positive"));
    }

    // A throwaway scenario carries the link fields so the nominal clocks can
    // be derived before the remaining durations resolve against them.
    let probe = Scenario {
        t_end: SimTime::ZERO,
        seed: 0,
        mss_bytes,
        transfer_segments: None,
        lan_delay,
        wan_delay,
        rate_bps,
        replay_window: 0,
        sa_policy: SaPolicy::Single,
        cwnd0: 1,
        ssthresh0: 2,
        rto: SimTime::ZERO,
        cwnd_cap: None,
        adversary: None,
        rttp: None,
        drop_raced_head: None,
    };
    let rtt = probe.nominal_rtt();
    let tunnel_delay = probe.nominal_tunnel_delay();
    let resolve = |spec: DurationSpec| spec.resolve(rtt, tunnel_delay);

    let t_end = match take_with("t_end") {
        Some(v) => resolve(parse_duration_spec("t_end", &v)?),
        None => SimTime::from_secs(60),
    };
    if t_end == SimTime::ZERO {
        return Err(bad("t_end", "must be positive"));
    }
    let seed = match take_with("seed") {
        Some(v) => parse_u64("seed", &v)?,
        None => 0,
    };
    let transfer_segments = match take_with("transfer.segments") {
        Some(v) => Some(parse_u64("transfer.segments", &v)?),
        None => None,
    };
    let replay_window = match take_with("tunnel.window") {
        Some(v) => parse_u64("tunnel.window", &v)?,
        None => 64,
    };
    let sa_policy = match take_with("tunnel.sa_policy").as_deref() {
        Some("single") | None => SaPolicy::Single,
        Some("per_flow") => SaPolicy::PerFlow,
        Some(other) => {
            return Err(bad(
                "tunnel.sa_policy",
                format!("`{other}` is not `single` or `per_flow`"),
            ))
        }
    };
    let cwnd0 = match take_with("tcp.cwnd0") {
        Some(v) => parse_u64("tcp.cwnd0", &v)?,
        None => 1,
    };
    let ssthresh0 = match take_with("tcp.ssthresh0") {
        Some(v) => parse_u64("tcp.ssthresh0", &v)?,
        None => 64,
    };
    if cwnd0 == 0 {
        return Err(bad("tcp.cwnd0", "must be at least 1"));
    }
    if ssthresh0 < 2 {
        return Err(bad("tcp.ssthresh0", "must be at least 2"));
    }
    let rto = match take_with("tcp.rto") {
        Some(v) if v == "auto" => rtt * 4,
        Some(v) => resolve(parse_duration_spec("tcp.rto", &v)?),
        None => rtt * 4,
    };
    if rto <= rtt {
        return Err(bad(
            "tcp.rto",
            "must exceed the nominal round-trip time or every window times out",
        ));
    }
    let cwnd_cap = match take_with("tcp.cwnd_cap") {
        Some(v) => {
            let cap = parse_u64("tcp.cwnd_cap", &v)?;
            if cap == 0 {
                return Err(bad("tcp.cwnd_cap", "must be at least 1"));
            }
            Some(cap)
        }
        None => None,
    };

    let strategy = match take_with("adversary.strategy").as_deref() {
        None | Some("none") => None,
        Some("ack_duplicator") => Some(Strategy::AckDuplicator),
        Some("data_duplicator") => Some(Strategy::DataDuplicator),
        Some("speedup_single") => Some(Strategy::SpeedupSingle),
        Some("speedup_multi") => Some(Strategy::SpeedupMulti),
        Some(other) => {
            return Err(bad(
                "adversary.strategy",
                format!("`{other}` is not a known strategy"),
            ))
        }
    };

    let rho = take_with("adversary.rho");
    let sigma = take_with("adversary.sigma");
    let epoch = take_with("adversary.epoch");
    let start = take_with("adversary.start");
    let speedup = take_with("adversary.speedup");
    let dup_count = take_with("adversary.dup_count");
    let visibility = take_with("adversary.visibility");
    let tap_pct = take_with("adversary.tap_pct");

    let adversary = match strategy {
        None => {
            for (name, value) in [
                ("adversary.rho", &rho),
                ("adversary.sigma", &sigma),
                ("adversary.epoch", &epoch),
                ("adversary.speedup", &speedup),
            ] {
                if value.is_some() {
                    return Err(bad(name, "set but adversary.strategy is `none`"));
                }
            }
            None
        }
        Some(strategy) => {
            let rho_per_sec = match rho {
                Some(v) => parse_f64("adversary.rho", &v)?,
                None => return Err(bad("adversary.rho", "required when a strategy is set")),
            };
            if rho_per_sec <= 0.0 {
                return Err(bad("adversary.rho", "must be positive"));
            }
            let sigma = match sigma {
                Some(v) => parse_u64("adversary.sigma", &v)? as u32,
                None => return Err(bad("adversary.sigma", "required when a strategy is set")),
            };
            if sigma == 0 {
                return Err(bad("adversary.sigma", "must be at least 1"));
            }
            let dup_count = match dup_count {
                Some(v) => parse_u64("adversary.dup_count", &v)? as u32,
                None => 3,
            };
            if dup_count == 0 {
                return Err(bad("adversary.dup_count", "must be at least 1"));
            }
            let epoch = match epoch.as_deref() {
                Some("auto") | None => {
                    // The longest sustainable period: one volley per refill.
                    let cost = strategy.epoch_cost(dup_count) as f64;
                    SimTime::from_micros((cost / rho_per_sec * 1e6).round() as u64)
                }
                Some(v) => resolve(parse_duration_spec("adversary.epoch", v)?),
            };
            if epoch == SimTime::ZERO {
                return Err(bad("adversary.epoch", "must be positive"));
            }
            let start_at = match start {
                Some(v) => resolve(parse_duration_spec("adversary.start", &v)?),
                None => SimTime::ZERO,
            };
            let speedup = match speedup {
                Some(v) => resolve(parse_duration_spec("adversary.speedup", &v)?),
                None => SimTime::ZERO,
            };
            let visibility = match visibility.as_deref() {
                Some("opaque") | None => Visibility::Opaque,
                Some("transparent") => Visibility::Transparent,
                Some(other) => {
                    return Err(bad(
                        "adversary.visibility",
                        format!("`{other}` is not `opaque` or `transparent`"),
                    ))
                }
            };
            let tap_pct = match tap_pct {
                Some(v) => parse_u64("adversary.tap_pct", &v)?,
                None => 50,
            };
            if !(1..=99).contains(&tap_pct) {
                return Err(bad("adversary.tap_pct", "must be between 1 and 99"));
            }
            let needs_speedup =
                matches!(strategy, Strategy::SpeedupSingle | Strategy::SpeedupMulti);
            if needs_speedup {
                if speedup == SimTime::ZERO {
                    return Err(bad(
                        "adversary.speedup",
                        "required for the speedup strategies",
                    ));
                }
                let remaining = wan_delay.scale_pct(100 - tap_pct);
                if speedup >= remaining {
                    return Err(bad(
                        "adversary.speedup",
                        format!(
                            "copies cannot reach the gateway before they are observed: \
                             speedup {speedup} >= remaining propagation {remaining}"
                        ),
                    ));
                }
            }
            Some(AdversaryScenario {
                strategy,
                rho_per_sec,
                sigma,
                epoch,
                start_at,
                speedup,
                dup_count,
                visibility,
                tap_pct,
                victim_window: replay_window,
            })
        }
    };

    let rttp_enabled = match take_with("rttp.enabled") {
        Some(v) => parse_bool("rttp.enabled", &v)?,
        None => false,
    };
    let rttp_mode = take_with("rttp.mode");
    let rttp_typical = take_with("rttp.typical_delay");
    let rttp_guard = take_with("rttp.guard_pct");
    let rttp_capacity = take_with("rttp.capacity");
    let rttp = if rttp_enabled {
        let mode = match rttp_mode.as_deref() {
            Some("hold_acks") | None => RttpMode::HoldAcks,
            Some("buffer_data") => RttpMode::BufferData,
            Some(other) => {
                return Err(bad(
                    "rttp.mode",
                    format!("`{other}` is not `hold_acks` or `buffer_data`"),
                ))
            }
        };
        let typical_delay = match rttp_typical.as_deref() {
            Some("auto") | None => None,
            Some(v) => Some(resolve(parse_duration_spec("rttp.typical_delay", v)?)),
        };
        let guard_pct = match rttp_guard {
            Some(v) => parse_u64("rttp.guard_pct", &v)?,
            None => 85,
        };
        if !(1..=100).contains(&guard_pct) {
            return Err(bad("rttp.guard_pct", "must be between 1 and 100"));
        }
        let capacity = match rttp_capacity {
            Some(v) => parse_u64("rttp.capacity", &v)? as usize,
            None => 64,
        };
        if capacity == 0 {
            return Err(bad("rttp.capacity", "must be at least 1"));
        }
        Some(RttpScenario {
            mode,
            typical_delay,
            guard_pct,
            capacity,
        })
    } else {
        for (name, value) in [
            ("rttp.mode", &rttp_mode),
            ("rttp.typical_delay", &rttp_typical),
            ("rttp.guard_pct", &rttp_guard),
            ("rttp.capacity", &rttp_capacity),
        ] {
            if value.is_some() {
                return Err(bad(name, "set but rttp.enabled is false"));
            }
        }
        None
    };

    let drop_raced_head = match take_with("script.drop_raced_head").as_deref() {
        None => None,
        Some("all") => Some(DropRacedHead::All),
        Some(v) => Some(DropRacedHead::Epoch(parse_u64(
            "script.drop_raced_head",
            v,
        )?)),
    };
    if drop_raced_head.is_some()
        && !matches!(
            adversary.as_ref().map(|a| a.strategy),
            Some(Strategy::SpeedupSingle) | Some(Strategy::SpeedupMulti)
        )
    {
        return Err(ScenarioError::Invalid(
            "script.drop_raced_head needs a speedup strategy that races a head packet".into(),
        ));
    }

    debug_assert!(raw.map.is_empty(), "all known keys consumed");

    Ok(Scenario {
        t_end,
        seed,
        mss_bytes,
        transfer_segments,
        lan_delay,
        wan_delay,
        rate_bps,
        replay_window,
        sa_policy,
        cwnd0,
        ssthresh0,
        rto,
        cwnd_cap,
        adversary,
        rttp,
        drop_raced_head,
    })
}
