//! The assembled experiment: endpoints, links, tunnel, attacker, defense.
//!
//! Topology, fixed; parameters come from the scenario:
//!
//! ```text
//! server --lan-- gw_server ==wan/tunnel== gw_client --lan-- client
//!                              ^ tap
//! ```
//!
//! The server runs the sending side of one TCP flow; the client
//! acknowledges. The server-side gateway encapsulates data packets and
//! checks ACK packets against its replay window; the client-side gateway
//! does the reverse and optionally runs the delay-preserving defense. The
//! adversary taps the tunneled hop partway along its propagation and may
//! schedule clone deliveries at either gateway.
//!
//! Every handler is a pure function of simulator state, so a scenario fully
//! determines the event sequence and all outputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::adversary::Adversary;
use crate::analytics;
use crate::metrics::{
    AttackMetrics, DirMetrics, EpochSample, InjectionRecord, RunMetrics, TcpMetrics,
};
use crate::rttp::RttpGateway;
use crate::scenario::{DropRacedHead, Scenario};
use crate::sim::{EndpointId, Event, EventHandle, EventQueue, Link, SimError, SimTime};
use crate::tcp::{
    AckClass, FlowId, Phase, Segment, SenderAction, SenderConfig, SenderOutput, TcpError,
    TcpReceiver, TcpSender, WindowSize,
};
use crate::trace::{CwndRow, TraceLevel};
use crate::tunnel::{AntiReplayWindow, EspPacket, ReplayOutcome, SaId, SaTable, TunnelError};

pub const CLIENT: EndpointId = EndpointId(0);
pub const GW_CLIENT: EndpointId = EndpointId(1);
pub const GW_SERVER: EndpointId = EndpointId(2);
pub const SERVER: EndpointId = EndpointId(3);
pub const ADVERSARY: EndpointId = EndpointId(4);

const FLOW: FlowId = FlowId(1);

#[derive(Debug, thiserror::Error)]
pub enum WorldError {
    #[error("transport failure at {at_us}us: {source}")]
    Tcp { at_us: u64, source: TcpError },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Tunnel(#[from] TunnelError),
}

/// Everything a run produces. The window rows are empty below `full` trace.
#[derive(Debug)]
pub struct RunReport {
    pub metrics: RunMetrics,
    pub cwnd_rows: Vec<CwndRow>,
}

enum Payload {
    /// Data segment reaching the server-side gateway.
    DataFromServer(Segment),
    /// Tunneled data packet reaching the client-side gateway.
    TunnelData { pkt: EspPacket, injected: bool },
    /// Decapsulated data segment reaching the client.
    DataToClient(Segment),
    /// ACK segment reaching the client-side gateway.
    AckFromClient(Segment),
    /// Tunneled ACK packet reaching the server-side gateway.
    TunnelAck { pkt: EspPacket, injected: bool },
    /// Decapsulated ACK reaching the server.
    AckToServer(Segment),
    /// A packet passing the adversary's tap.
    Tap { pkt: EspPacket, honest_arrival: SimTime },
    Rto { generation: u64 },
    HoldRelease { generation: u64 },
    BufferRelease { seq: u64 },
}

struct World<'s> {
    scn: &'s Scenario,
    level: TraceLevel,

    srv_to_gw: Link,
    wan_data: Link,
    gw_to_cli: Link,
    cli_to_gw: Link,
    wan_ack: Link,
    gw_to_srv: Link,

    sender: TcpSender,
    receiver: TcpReceiver,
    sa_data: SaTable,
    sa_ack: SaTable,
    replay_data: BTreeMap<SaId, AntiReplayWindow>,
    replay_ack: BTreeMap<SaId, AntiReplayWindow>,
    rttp: Option<RttpGateway>,
    adversary: Option<Adversary>,

    rto_gen: u64,
    rto_handle: Option<EventHandle>,
    hold_gen: u64,
    hold_handle: Option<EventHandle>,

    /// Honest ESP sequences to remove on arrival, fed by the drop script.
    drop_set: BTreeSet<u64>,

    m_data: DirMetrics,
    m_ack: DirMetrics,
    epoch_samples: Vec<EpochSample>,
    /// Running integral of cwnd over time in MSS-microseconds, with one
    /// snapshot per epoch sample so steady-state averages can be recovered.
    cwnd_integral: f64,
    cwnd_accrued_to: SimTime,
    integral_snapshots: Vec<f64>,
    injection_log: Vec<InjectionRecord>,
    first_injection: Option<(SimTime, u64)>,
    transfer_completed_at: Option<SimTime>,
    cwnd_rows: Vec<CwndRow>,
    fatal: Option<WorldError>,
}

pub fn run_scenario(scn: &Scenario, level: TraceLevel) -> Result<RunReport, WorldError> {
    let mut queue: EventQueue<Payload> = EventQueue::new();
    let mut world = World::new(scn, level);
    world.bootstrap(&mut queue)?;
    queue.run_until(scn.t_end, |q, ev| world.dispatch(q, ev));
    if let Some(err) = world.fatal.take() {
        return Err(err);
    }
    Ok(world.finish())
}

impl<'s> World<'s> {
    fn new(scn: &'s Scenario, level: TraceLevel) -> Self {
        let sender = TcpSender::new(SenderConfig {
            flow: FLOW,
            initial_cwnd: WindowSize::from_mss(scn.cwnd0),
            initial_ssthresh: WindowSize::from_mss(scn.ssthresh0),
            cwnd_cap: scn.cwnd_cap.map(WindowSize::from_mss),
            rto_interval: scn.rto,
            transfer_segments: scn.transfer_segments,
        });
        World {
            scn,
            level,
            srv_to_gw: Link::new(scn.lan_delay, scn.rate_bps),
            wan_data: Link::new(scn.wan_delay, scn.rate_bps),
            gw_to_cli: Link::new(scn.lan_delay, scn.rate_bps),
            cli_to_gw: Link::new(scn.lan_delay, scn.rate_bps),
            wan_ack: Link::new(scn.wan_delay, scn.rate_bps),
            gw_to_srv: Link::new(scn.lan_delay, scn.rate_bps),
            sender,
            receiver: TcpReceiver::new(FLOW),
            sa_data: SaTable::new(scn.sa_policy, 1),
            sa_ack: SaTable::new(scn.sa_policy, 1),
            replay_data: BTreeMap::new(),
            replay_ack: BTreeMap::new(),
            rttp: scn.rttp_config().map(RttpGateway::new),
            adversary: scn.adversary_config().map(Adversary::new),
            rto_gen: 0,
            rto_handle: None,
            hold_gen: 0,
            hold_handle: None,
            drop_set: BTreeSet::new(),
            m_data: DirMetrics::default(),
            m_ack: DirMetrics::default(),
            epoch_samples: Vec::new(),
            cwnd_integral: 0.0,
            cwnd_accrued_to: SimTime::ZERO,
            integral_snapshots: Vec::new(),
            injection_log: Vec::new(),
            first_injection: None,
            transfer_completed_at: None,
            cwnd_rows: Vec::new(),
            fatal: None,
        }
    }

    fn bootstrap(&mut self, q: &mut EventQueue<Payload>) -> Result<(), WorldError> {
        let out = self.sender.try_send(SimTime::ZERO);
        self.apply_sender_output(q, out, SimTime::ZERO)
    }

    fn dispatch(&mut self, q: &mut EventQueue<Payload>, ev: Event<Payload>) {
        if self.fatal.is_some() {
            return;
        }
        let now = ev.fire_at;
        let result = match ev.payload {
            Payload::DataFromServer(seg) => self.on_data_from_server(q, seg, now),
            Payload::TunnelData { pkt, injected } => self.on_tunnel_data(q, pkt, injected, now),
            Payload::DataToClient(seg) => self.on_data_to_client(q, seg, now),
            Payload::AckFromClient(seg) => self.on_ack_from_client(q, seg, now),
            Payload::TunnelAck { pkt, injected } => self.on_tunnel_ack(q, pkt, injected, now),
            Payload::AckToServer(seg) => self.on_ack_to_server(q, seg, now),
            Payload::Tap { pkt, honest_arrival } => self.on_tap(q, pkt, honest_arrival, now),
            Payload::Rto { generation } => self.on_rto_fire(q, generation, now),
            Payload::HoldRelease { generation } => self.on_hold_release(q, generation, now),
            Payload::BufferRelease { seq } => self.on_buffer_release(q, seq, now),
        };
        if let Err(err) = result {
            self.fatal = Some(err);
        }
    }

    // ---- sender side -----------------------------------------------------

    fn apply_sender_output(
        &mut self,
        q: &mut EventQueue<Payload>,
        out: SenderOutput,
        now: SimTime,
    ) -> Result<(), WorldError> {
        for action in out.actions {
            let seg = match action {
                SenderAction::Send(seg) | SenderAction::Retransmit(seg) => seg,
            };
            let at = self.srv_to_gw.deliver(self.scn.data_lan_bytes(), now)?;
            q.schedule(at, GW_SERVER, Payload::DataFromServer(seg))?;
        }
        if out.restart_rto {
            self.restart_rto(q, now)?;
        } else if self.sender.pending() == 0 {
            self.cancel_rto(q);
        } else if self.rto_handle.is_none() {
            self.restart_rto(q, now)?;
        }
        Ok(())
    }

    fn restart_rto(&mut self, q: &mut EventQueue<Payload>, now: SimTime) -> Result<(), WorldError> {
        self.cancel_rto(q);
        let at = now + self.sender.rto_interval();
        self.rto_gen += 1;
        let handle = q.schedule(at, SERVER, Payload::Rto { generation: self.rto_gen })?;
        self.rto_handle = Some(handle);
        Ok(())
    }

    fn cancel_rto(&mut self, q: &mut EventQueue<Payload>) {
        if let Some(handle) = self.rto_handle.take() {
            q.cancel(handle);
            self.rto_gen += 1;
        }
    }

    fn on_rto_fire(
        &mut self,
        q: &mut EventQueue<Payload>,
        generation: u64,
        now: SimTime,
    ) -> Result<(), WorldError> {
        if generation != self.rto_gen {
            return Ok(());
        }
        self.rto_handle = None;
        self.accrue_cwnd(now);
        let out = self.sender.on_rto(now);
        if !out.actions.is_empty() {
            self.trace_sender(now, "rto");
        }
        self.apply_sender_output(q, out, now)
    }

    fn on_ack_to_server(
        &mut self,
        q: &mut EventQueue<Payload>,
        seg: Segment,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let ack_num = seg.ack_num().expect("ack segment");
        self.accrue_cwnd(now);
        let was_phase = self.sender.phase();
        let frs_before = self.sender.fast_retransmits();
        let (class, out) = self
            .sender
            .on_ack(ack_num, now)
            .map_err(|source| WorldError::Tcp { at_us: now.as_micros(), source })?;
        let event = match class {
            AckClass::NewData if was_phase == Phase::FastRecovery => "fr_exit",
            AckClass::NewData => "ack",
            AckClass::Duplicate if self.sender.fast_retransmits() > frs_before => {
                "fast_retransmit"
            }
            AckClass::Duplicate => "dup_ack",
            AckClass::Stale => "stale_ack",
        };
        self.trace_sender(now, event);
        if self.sender.transfer_complete() && self.transfer_completed_at.is_none() {
            self.transfer_completed_at = Some(now);
        }
        self.apply_sender_output(q, out, now)
    }

    /// Extends the cwnd-over-time integral up to `now`. Must run before any
    /// event that can change the window.
    fn accrue_cwnd(&mut self, now: SimTime) {
        let span = now.saturating_sub(self.cwnd_accrued_to);
        self.cwnd_integral += self.sender.cwnd().as_f64() * span.as_micros() as f64;
        self.cwnd_accrued_to = now;
    }

    fn trace_sender(&mut self, now: SimTime, event: &'static str) {
        if self.level.wants_full() {
            self.cwnd_rows.push(CwndRow {
                time_us: now.as_micros(),
                cwnd_mss: self.sender.cwnd().as_f64(),
                phase: self.sender.phase().as_str(),
                event,
            });
        }
    }

    // ---- data direction --------------------------------------------------

    fn on_data_from_server(
        &mut self,
        q: &mut EventQueue<Payload>,
        seg: Segment,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let wire = self.scn.data_wan_bytes();
        let pkt = self.sa_data.encapsulate(seg, now, wire)?;
        self.m_data.sent += 1;
        let arrival = self.wan_data.deliver(wire, now)?;
        self.schedule_tap(q, &pkt, arrival, true)?;
        q.schedule(arrival, GW_CLIENT, Payload::TunnelData { pkt, injected: false })?;
        Ok(())
    }

    fn on_tunnel_data(
        &mut self,
        q: &mut EventQueue<Payload>,
        pkt: EspPacket,
        injected: bool,
        now: SimTime,
    ) -> Result<(), WorldError> {
        if injected {
            self.m_data.injected_arrivals += 1;
        } else {
            self.m_data.honest_arrivals += 1;
        }
        if !injected && self.drop_set.remove(&pkt.esp_seq()) {
            self.m_data.scripted_drops += 1;
            return Ok(());
        }
        let window = self
            .replay_data
            .entry(pkt.sa())
            .or_insert_with(|| AntiReplayWindow::new(self.scn.replay_window));
        let outcome = window.check(pkt.esp_seq());
        match outcome {
            ReplayOutcome::AcceptAdvance => self.m_data.accepted_advance += 1,
            ReplayOutcome::AcceptInWindow => self.m_data.accepted_in_window += 1,
            ReplayOutcome::RejectDuplicate => {
                self.m_data.rejected_duplicate += 1;
                return Ok(());
            }
            ReplayOutcome::RejectLeftOfWindow => {
                self.m_data.rejected_left_of_window += 1;
                return Ok(());
            }
        }
        let seg = *pkt.inner();
        match self.rttp.as_mut() {
            None => self.forward_data_to_client(q, seg, now),
            Some(gw) => {
                let delay = now - pkt.stamped_at();
                let out = gw.on_incoming_data(seg, delay, now);
                if out.cancel_timer {
                    self.cancel_hold(q);
                }
                if let Some(release_at) = out.buffered_until {
                    let seq = seg.data_seq().expect("buffered data");
                    q.schedule(release_at, GW_CLIENT, Payload::BufferRelease { seq })?;
                }
                for fwd in out.forward {
                    self.forward_data_to_client(q, fwd, now)?;
                }
                Ok(())
            }
        }
    }

    fn forward_data_to_client(
        &mut self,
        q: &mut EventQueue<Payload>,
        seg: Segment,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let at = self.gw_to_cli.deliver(self.scn.data_lan_bytes(), now)?;
        q.schedule(at, CLIENT, Payload::DataToClient(seg))?;
        Ok(())
    }

    fn on_data_to_client(
        &mut self,
        q: &mut EventQueue<Payload>,
        seg: Segment,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let ack_num = self.receiver.on_data(seg.data_seq().expect("data segment"));
        let ack = Segment::ack(FLOW, ack_num, now);
        let at = self.cli_to_gw.deliver(self.scn.ack_lan_bytes(), now)?;
        q.schedule(at, GW_CLIENT, Payload::AckFromClient(ack))?;
        Ok(())
    }

    // ---- ack direction ---------------------------------------------------

    fn on_ack_from_client(
        &mut self,
        q: &mut EventQueue<Payload>,
        seg: Segment,
        now: SimTime,
    ) -> Result<(), WorldError> {
        match self.rttp.as_mut() {
            None => self.send_ack_into_tunnel(q, seg, now),
            Some(gw) => {
                let out = gw.on_outgoing_ack(seg, now);
                if let Some(at) = out.arm_timer_at {
                    self.arm_hold(q, at.max(now))?;
                }
                for fwd in out.forward {
                    self.send_ack_into_tunnel(q, fwd, now)?;
                }
                Ok(())
            }
        }
    }

    fn send_ack_into_tunnel(
        &mut self,
        q: &mut EventQueue<Payload>,
        seg: Segment,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let wire = self.scn.ack_wan_bytes();
        let pkt = self.sa_ack.encapsulate(seg, now, wire)?;
        self.m_ack.sent += 1;
        let arrival = self.wan_ack.deliver(wire, now)?;
        self.schedule_tap(q, &pkt, arrival, false)?;
        q.schedule(arrival, GW_SERVER, Payload::TunnelAck { pkt, injected: false })?;
        Ok(())
    }

    fn on_tunnel_ack(
        &mut self,
        q: &mut EventQueue<Payload>,
        pkt: EspPacket,
        injected: bool,
        now: SimTime,
    ) -> Result<(), WorldError> {
        if injected {
            self.m_ack.injected_arrivals += 1;
        } else {
            self.m_ack.honest_arrivals += 1;
        }
        let window = self
            .replay_ack
            .entry(pkt.sa())
            .or_insert_with(|| AntiReplayWindow::new(self.scn.replay_window));
        let outcome = window.check(pkt.esp_seq());
        match outcome {
            ReplayOutcome::AcceptAdvance => self.m_ack.accepted_advance += 1,
            ReplayOutcome::AcceptInWindow => self.m_ack.accepted_in_window += 1,
            ReplayOutcome::RejectDuplicate => {
                self.m_ack.rejected_duplicate += 1;
                return Ok(());
            }
            ReplayOutcome::RejectLeftOfWindow => {
                self.m_ack.rejected_left_of_window += 1;
                return Ok(());
            }
        }
        let seg = *pkt.inner();
        let at = self.gw_to_srv.deliver(self.scn.ack_lan_bytes(), now)?;
        q.schedule(at, SERVER, Payload::AckToServer(seg))?;
        Ok(())
    }

    // ---- adversary -------------------------------------------------------

    /// Schedules the tap observation for a packet entering the tunneled hop,
    /// if an adversary watches this direction.
    fn schedule_tap(
        &mut self,
        q: &mut EventQueue<Payload>,
        pkt: &EspPacket,
        arrival: SimTime,
        data_direction: bool,
    ) -> Result<(), WorldError> {
        let Some(adv) = self.adversary.as_ref() else {
            return Ok(());
        };
        if adv.config().strategy.taps_data_direction() != data_direction {
            return Ok(());
        }
        let observe_at = arrival - self.scn.remaining_after_tap();
        q.schedule(
            observe_at,
            ADVERSARY,
            Payload::Tap { pkt: pkt.clone(), honest_arrival: arrival },
        )?;
        Ok(())
    }

    fn on_tap(
        &mut self,
        q: &mut EventQueue<Payload>,
        pkt: EspPacket,
        honest_arrival: SimTime,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let adv = self.adversary.as_mut().expect("tap without adversary");
        let to_data_gateway = adv.config().strategy.taps_data_direction();
        let injections = adv.observe(&pkt, now, honest_arrival);
        let Some(first) = injections.first() else {
            return Ok(());
        };

        // The window the volley is reacting to, sampled before any clone
        // lands.
        let epoch = first.epoch_index - 1;
        self.accrue_cwnd(now);
        self.epoch_samples.push(EpochSample {
            epoch,
            at_us: now.as_micros(),
            cwnd_mss: self.sender.cwnd().as_f64(),
            segments_delivered: self.receiver.delivered_segments(),
        });
        self.integral_snapshots.push(self.cwnd_integral);
        if self.first_injection.is_none() {
            self.first_injection = Some((now, self.receiver.delivered_segments()));
        }

        let drop_head = match self.scn.drop_raced_head {
            Some(DropRacedHead::All) => true,
            Some(DropRacedHead::Epoch(e)) => e == epoch,
            None => false,
        };
        for inj in injections {
            self.injection_log.push(InjectionRecord {
                decided_at_us: inj.decided_at.as_micros(),
                deliver_at_us: inj.deliver_at.as_micros(),
                epoch,
            });
            if drop_head {
                if let Some(head) = inj.raced_head {
                    self.drop_set.insert(head);
                }
            }
            if to_data_gateway {
                q.schedule(
                    inj.deliver_at,
                    GW_CLIENT,
                    Payload::TunnelData { pkt: inj.pkt, injected: true },
                )?;
            } else {
                q.schedule(
                    inj.deliver_at,
                    GW_SERVER,
                    Payload::TunnelAck { pkt: inj.pkt, injected: true },
                )?;
            }
        }
        Ok(())
    }

    // ---- defense timers --------------------------------------------------

    fn arm_hold(&mut self, q: &mut EventQueue<Payload>, at: SimTime) -> Result<(), WorldError> {
        self.cancel_hold(q);
        self.hold_gen += 1;
        let handle = q.schedule(at, GW_CLIENT, Payload::HoldRelease { generation: self.hold_gen })?;
        self.hold_handle = Some(handle);
        Ok(())
    }

    fn cancel_hold(&mut self, q: &mut EventQueue<Payload>) {
        if let Some(handle) = self.hold_handle.take() {
            q.cancel(handle);
            self.hold_gen += 1;
        }
    }

    fn on_hold_release(
        &mut self,
        q: &mut EventQueue<Payload>,
        generation: u64,
        now: SimTime,
    ) -> Result<(), WorldError> {
        if generation != self.hold_gen {
            return Ok(());
        }
        self.hold_handle = None;
        let gw = self.rttp.as_mut().expect("hold timer without defense");
        let released = gw.on_hold_timer(FLOW, now);
        for seg in released {
            self.send_ack_into_tunnel(q, seg, now)?;
        }
        Ok(())
    }

    fn on_buffer_release(
        &mut self,
        q: &mut EventQueue<Payload>,
        seq: u64,
        now: SimTime,
    ) -> Result<(), WorldError> {
        let gw = self.rttp.as_mut().expect("buffer timer without defense");
        if let Some(seg) = gw.on_buffer_timer(FLOW, seq) {
            self.forward_data_to_client(q, seg, now)?;
        }
        Ok(())
    }

    // ---- results ---------------------------------------------------------

    fn finish(mut self) -> RunReport {
        assert!(self.m_data.is_conserved(), "data direction leaks packets");
        assert!(self.m_ack.is_conserved(), "ack direction leaks packets");

        self.accrue_cwnd(self.scn.t_end);
        let duration_us = self.scn.t_end.as_micros();
        let segments_delivered = self.receiver.delivered_segments();
        let bytes_delivered = segments_delivered * self.scn.mss_bytes;
        let throughput_bps = bytes_delivered as f64 * 1e6 / duration_us as f64;

        let cwnds: Vec<f64> = self.epoch_samples.iter().map(|s| s.cwnd_mss).collect();
        let steady_idx = analytics::first_steady_epoch(&cwnds, 3);
        let steady_state_epoch = steady_idx.map(|i| self.epoch_samples[i].epoch);
        let steady_throughput_bps = steady_idx.and_then(|i| {
            let s = &self.epoch_samples[i];
            let span_us = duration_us.checked_sub(s.at_us)?;
            if span_us == 0 {
                return None;
            }
            let bytes = (segments_delivered - s.segments_delivered) * self.scn.mss_bytes;
            Some(bytes as f64 * 1e6 / span_us as f64)
        });
        let steady_cwnd_time_avg_mss = steady_idx.and_then(|i| {
            let s = &self.epoch_samples[i];
            let span_us = duration_us.checked_sub(s.at_us)?;
            if span_us == 0 {
                return None;
            }
            Some((self.cwnd_integral - self.integral_snapshots[i]) / span_us as f64)
        });

        let attack = self.first_injection.map(|(at, delivered_then)| {
            let span_us = duration_us.saturating_sub(at.as_micros()).max(1);
            let bytes = (segments_delivered - delivered_then) * self.scn.mss_bytes;
            let adv = self.adversary.as_ref().expect("injections imply adversary");
            AttackMetrics {
                first_injection_us: at.as_micros(),
                clones_delivered: self.m_data.injected_arrivals + self.m_ack.injected_arrivals,
                epochs_fired: adv.epochs_fired(),
                epochs_skipped_budget: adv.epochs_skipped(),
                post_attack_throughput_bps: bytes as f64 * 1e6 / span_us as f64,
                injection_log: self.injection_log,
            }
        });

        let metrics = RunMetrics {
            duration_us,
            segments_delivered,
            bytes_delivered,
            throughput_bps,
            tcp: TcpMetrics {
                fast_retransmits: self.sender.fast_retransmits(),
                rto_count: self.sender.rto_count(),
                retransmissions: self.sender.retransmissions(),
                duplicate_data_at_receiver: self.receiver.duplicate_data(),
                final_cwnd_mss: self.sender.cwnd().as_f64(),
                final_phase: self.sender.phase().as_str().to_string(),
                transfer_completed_at_us: self.transfer_completed_at.map(|t| t.as_micros()),
            },
            tunnel_data: self.m_data,
            tunnel_ack: self.m_ack,
            cwnd_samples: self.epoch_samples,
            steady_state_epoch,
            steady_throughput_bps,
            steady_cwnd_time_avg_mss,
            attack,
            rttp: self
                .rttp
                .as_ref()
                .map(|gw| gw.counters().into())
                .unwrap_or_default(),
        };
        RunReport { metrics, cwnd_rows: self.cwnd_rows }
    }
}
