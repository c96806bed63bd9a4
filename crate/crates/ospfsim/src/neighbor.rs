//! Neighbor discovery and adjacency maintenance: a deliberately collapsed
//! version of the OSPF neighbor state machine.
//!
//! Only the states that matter for reasoning about authentication survive:
//! `Down`, `Init` (their Hello reached us), `TwoWay` (their Hello lists us)
//! and `Full`. Database exchange is skipped entirely, so `TwoWay` promotes to
//! `Full` immediately and exists mostly so that timelines show the classic
//! progression.
//!
//! The authentication verdict is computed *before* any state is touched: a
//! rejected frame has no FSM effect at all, and no neighbor record is created
//! for senders that cannot authenticate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::auth::{
    self, AuthConfig, RejectReason, SeqState, SeqVerdict, UnixTime, Verdict,
};
use crate::wire::{Auth, Body, DecodeError, Frame, HelloBody, Packet, RouterId};

/// Default Hello period in seconds.
pub const DEFAULT_HELLO_INTERVAL_S: u32 = 10;
/// Default dead interval: four Hello periods.
pub const DEFAULT_DEAD_INTERVAL_S: u32 = 40;
/// Default period for the opaque Link State Update traffic.
pub const DEFAULT_LSU_INTERVAL_S: u32 = 30;

/// Adjacency state toward one neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NeighborState {
    Down,
    Init,
    TwoWay,
    Full,
}

impl NeighborState {
    /// Stable label used in timelines and reports.
    pub fn label(self) -> &'static str {
        match self {
            NeighborState::Down => "down",
            NeighborState::Init => "init",
            NeighborState::TwoWay => "two-way",
            NeighborState::Full => "full",
        }
    }
}

impl fmt::Display for NeighborState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Why a state change happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeCause {
    /// Progression driven by an accepted Hello.
    HelloReceived,
    /// An accepted Hello stopped listing us: the neighbor restarted.
    OneWay,
    /// Nothing heard for a whole dead interval.
    Timeout,
    /// Too many out-of-order sequence numbers; state torn down defensively.
    DisorderTeardown,
}

impl ChangeCause {
    pub fn label(self) -> &'static str {
        match self {
            ChangeCause::HelloReceived => "hello",
            ChangeCause::OneWay => "one-way",
            ChangeCause::Timeout => "timeout",
            ChangeCause::DisorderTeardown => "disorder-teardown",
        }
    }
}

/// One adjacency transition, reported upward for the timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateChange {
    pub neighbor: RouterId,
    pub from: NeighborState,
    pub to: NeighborState,
    pub cause: ChangeCause,
}

/// Book-keeping for one neighbor.
#[derive(Debug, Clone, Default)]
pub struct NeighborRecord {
    state: NeighborState,
    last_heard_us: Option<u64>,
    /// Receive-side sequence state per key id (Cryptographic mode only).
    seq: BTreeMap<u8, SeqState>,
}

impl Default for NeighborState {
    fn default() -> NeighborState {
        NeighborState::Down
    }
}

impl NeighborRecord {
    pub fn state(&self) -> NeighborState {
        self.state
    }

    pub fn last_heard_us(&self) -> Option<u64> {
        self.last_heard_us
    }
}

/// A network this router advertises, `address/prefix_len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Network {
    pub address: u32,
    pub prefix_len: u8,
}

impl Network {
    pub fn mask(&self) -> u32 {
        if self.prefix_len == 0 {
            0
        } else {
            !0u32 << (32 - u32::from(self.prefix_len.min(32)))
        }
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", std::net::Ipv4Addr::from(self.address), self.prefix_len)
    }
}

impl std::str::FromStr for Network {
    type Err = String;

    fn from_str(s: &str) -> Result<Network, String> {
        let (addr, len) = s
            .split_once('/')
            .ok_or_else(|| format!("network {:?} is not address/prefix", s))?;
        let address: std::net::Ipv4Addr =
            addr.parse().map_err(|e| format!("network {:?}: {}", s, e))?;
        let prefix_len: u8 = len.parse().map_err(|e| format!("network {:?}: {}", s, e))?;
        if prefix_len > 32 {
            return Err(format!("network {:?}: prefix length over 32", s));
        }
        Ok(Network {
            address: u32::from(address),
            prefix_len,
        })
    }
}

/// Static configuration of one simulated router.
#[derive(Debug, Clone)]
pub struct RouterConfig {
    pub router_id: RouterId,
    pub area_id: u32,
    pub auth: AuthConfig,
    pub networks: Vec<Network>,
    pub hello_interval_s: u32,
    pub dead_interval_s: u32,
    pub lsu_interval_s: u32,
    /// Static offset of this router's clock from simulation time, seconds.
    pub skew_s: i64,
}

impl RouterConfig {
    /// A router with protocol defaults: Hello every 10 s, dead interval 40 s.
    pub fn new(router_id: RouterId, auth: AuthConfig) -> RouterConfig {
        RouterConfig {
            router_id,
            area_id: 0,
            auth,
            networks: Vec::new(),
            hello_interval_s: DEFAULT_HELLO_INTERVAL_S,
            dead_interval_s: DEFAULT_DEAD_INTERVAL_S,
            lsu_interval_s: DEFAULT_LSU_INTERVAL_S,
            skew_s: 0,
        }
    }
}

/// Outcome of processing one delivered frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RxOutcome {
    /// The buffer does not parse as an OSPFv2 frame.
    Malformed(DecodeError),
    /// The frame claims our own router id; looped or forged, discarded.
    SelfOrigin,
    /// Authentication or sequence admission refused the frame.
    Rejected(RejectReason),
    /// Frame admitted; any adjacency transitions it caused are listed.
    Accepted {
        packet: Packet,
        state_changes: Vec<StateChange>,
    },
}

/// What a router wants to do after a timer tick.
#[derive(Debug, Clone, Default)]
pub struct TickOutput {
    pub send_hello: bool,
    pub send_lsu: bool,
    pub state_changes: Vec<StateChange>,
}

/// Live state of one simulated router.
#[derive(Debug, Clone)]
pub struct Router {
    pub config: RouterConfig,
    neighbors: BTreeMap<RouterId, NeighborRecord>,
    send_sequence: u32,
    next_hello_due_us: u64,
    next_lsu_due_us: u64,
    teardown_pending: BTreeSet<RouterId>,
}

impl Router {
    pub fn new(config: RouterConfig) -> Router {
        let first_lsu = u64::from(config.lsu_interval_s) * 1_000_000;
        Router {
            config,
            neighbors: BTreeMap::new(),
            send_sequence: 0,
            next_hello_due_us: 0,
            next_lsu_due_us: first_lsu,
            teardown_pending: BTreeSet::new(),
        }
    }

    pub fn neighbors(&self) -> &BTreeMap<RouterId, NeighborRecord> {
        &self.neighbors
    }

    pub fn neighbor_state(&self, id: RouterId) -> NeighborState {
        self.neighbors
            .get(&id)
            .map(|r| r.state)
            .unwrap_or(NeighborState::Down)
    }

    /// Next value of the cryptographic sequence counter (strictly increasing
    /// per sent packet).
    pub fn next_send_sequence(&mut self) -> u32 {
        self.send_sequence += 1;
        self.send_sequence
    }

    /// The Hello this router would send right now: neighbor list holds every
    /// neighbor we have heard from (state Init or better).
    pub fn build_hello(&self) -> Packet {
        let neighbors = self
            .neighbors
            .iter()
            .filter(|(_, rec)| rec.state >= NeighborState::Init)
            .map(|(id, _)| *id)
            .collect();
        Packet {
            router_id: self.config.router_id,
            area_id: self.config.area_id,
            auth: Auth::Null, // replaced when the frame is signed
            body: Body::Hello(HelloBody {
                network_mask: self.config.networks.first().map(|n| n.mask()).unwrap_or(0),
                hello_interval: self.config.hello_interval_s as u16,
                router_priority: 1,
                dead_interval: self.config.dead_interval_s,
                designated_router: RouterId(0),
                backup_designated_router: RouterId(0),
                neighbors,
            }),
        }
    }

    /// The periodic Link State Update: advertised networks as an opaque
    /// payload. Content is irrelevant to the simulator; what matters is that
    /// authenticated non-Hello traffic exists on the links.
    pub fn build_lsu(&self) -> Packet {
        let mut payload = Vec::with_capacity(8 * self.config.networks.len().max(1));
        for network in &self.config.networks {
            payload.extend_from_slice(&network.address.to_be_bytes());
            payload.extend_from_slice(&network.mask().to_be_bytes());
        }
        if payload.is_empty() {
            payload.extend_from_slice(&self.config.router_id.to_be_bytes());
            payload.extend_from_slice(&[0u8; 4]);
        }
        Packet {
            router_id: self.config.router_id,
            area_id: self.config.area_id,
            auth: Auth::Null,
            body: Body::LsUpdate(payload),
        }
    }

    /// Process one delivered frame. `now_us` is simulation time, `local_time`
    /// this router's skewed wall clock (used for key validity windows).
    pub fn on_receive(&mut self, bytes: &[u8], now_us: u64, local_time: UnixTime) -> RxOutcome {
        let frame = match Frame::from_wire(bytes) {
            Ok(f) => f,
            Err(e) => return RxOutcome::Malformed(e),
        };
        let packet = match frame.decode() {
            Ok(p) => p,
            Err(e) => return RxOutcome::Malformed(e),
        };
        if packet.router_id == self.config.router_id {
            return RxOutcome::SelfOrigin;
        }
        // Authentication first; a frame that fails it must leave no trace in
        // the neighbor table.
        match auth::verify_frame(&frame, &packet, &self.config.auth, local_time) {
            Verdict::Accept => {}
            Verdict::Reject(reason) => return RxOutcome::Rejected(reason),
        }
        // Sequence admission, per neighbor and key id.
        if let Auth::Cryptographic { key_id, sequence, .. } = packet.auth {
            let record = self.neighbors.entry(packet.router_id).or_default();
            let seq_state = record.seq.entry(key_id).or_default();
            match seq_state.check(sequence, now_us) {
                SeqVerdict::Accept => {}
                SeqVerdict::Replay => {
                    return RxOutcome::Rejected(RejectReason::Replay { key_id, sequence })
                }
                SeqVerdict::Disorder => {
                    if seq_state.disorder_breach() {
                        self.teardown_pending.insert(packet.router_id);
                    }
                    return RxOutcome::Rejected(RejectReason::Disorder { key_id, sequence })
                }
            }
        }
        let state_changes = self.admit(&packet, now_us);
        RxOutcome::Accepted {
            packet,
            state_changes,
        }
    }

    /// FSM effects of an admitted packet.
    fn admit(&mut self, packet: &Packet, now_us: u64) -> Vec<StateChange> {
        let mut changes = Vec::new();
        match &packet.body {
            Body::Hello(hello) => {
                let my_id = self.config.router_id;
                let record = self.neighbors.entry(packet.router_id).or_default();
                record.last_heard_us = Some(now_us);
                let mut push = |record: &mut NeighborRecord, to, cause| {
                    changes.push(StateChange {
                        neighbor: packet.router_id,
                        from: record.state,
                        to,
                        cause,
                    });
                    record.state = to;
                };
                if record.state == NeighborState::Down {
                    push(record, NeighborState::Init, ChangeCause::HelloReceived);
                }
                if hello.neighbors.contains(&my_id) {
                    if record.state == NeighborState::Init {
                        // Database exchange is collapsed: TwoWay is recorded
                        // for the timeline and promoted immediately.
                        push(record, NeighborState::TwoWay, ChangeCause::HelloReceived);
                        push(record, NeighborState::Full, ChangeCause::HelloReceived);
                    }
                } else if record.state > NeighborState::Init {
                    // The neighbor no longer hears us: fall back and restart.
                    push(record, NeighborState::Init, ChangeCause::OneWay);
                }
            }
            Body::LsUpdate(_) => {
                // Accepted and, in this model, otherwise inert: the
                // inactivity timer is driven by Hellos alone (RFC 2328
                // declares a neighbor dead when no *Hello* has been seen for
                // the dead interval, however chatty its updates are).
                let _ = now_us;
            }
        }
        changes
    }

    /// Periodic bookkeeping: Hello/LSU emission cadence, pending teardowns,
    /// dead-interval expiry. Call once per simulated second.
    pub fn on_tick(&mut self, now_us: u64) -> TickOutput {
        let mut out = TickOutput::default();
        if now_us >= self.next_hello_due_us {
            out.send_hello = true;
            self.next_hello_due_us += u64::from(self.config.hello_interval_s) * 1_000_000;
        }
        if now_us >= self.next_lsu_due_us {
            if self
                .neighbors
                .values()
                .any(|r| r.state == NeighborState::Full)
            {
                out.send_lsu = true;
            }
            self.next_lsu_due_us += u64::from(self.config.lsu_interval_s) * 1_000_000;
        }
        for neighbor in std::mem::take(&mut self.teardown_pending) {
            if let Some(record) = self.neighbors.get_mut(&neighbor) {
                if record.state > NeighborState::Down {
                    out.state_changes.push(StateChange {
                        neighbor,
                        from: record.state,
                        to: NeighborState::Down,
                        cause: ChangeCause::DisorderTeardown,
                    });
                    record.state = NeighborState::Down;
                    record.seq.clear();
                }
            }
        }
        let dead_us = u64::from(self.config.dead_interval_s) * 1_000_000;
        for (id, record) in self.neighbors.iter_mut() {
            if record.state > NeighborState::Down {
                let deadline = record.last_heard_us.unwrap_or(0) + dead_us;
                if now_us > deadline {
                    out.state_changes.push(StateChange {
                        neighbor: *id,
                        from: record.state,
                        to: NeighborState::Down,
                        cause: ChangeCause::Timeout,
                    });
                    record.state = NeighborState::Down;
                    record.seq.clear();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auth::{sign_md5, sign_simple, simple_password, AuthKey, KeyChain};
    use crate::wire;

    const SECOND: u64 = 1_000_000;

    fn rid(s: &str) -> RouterId {
        s.parse().unwrap()
    }

    fn hello_from(sender: &str, listing: &[&str]) -> Packet {
        Packet {
            router_id: rid(sender),
            area_id: 0,
            auth: Auth::Null,
            body: Body::Hello(HelloBody {
                network_mask: 0xFFFFFF00,
                hello_interval: 10,
                router_priority: 1,
                dead_interval: 40,
                designated_router: RouterId(0),
                backup_designated_router: RouterId(0),
                neighbors: listing.iter().map(|s| rid(s)).collect(),
            }),
        }
    }

    fn null_router(id: &str) -> Router {
        Router::new(RouterConfig::new(rid(id), AuthConfig::None))
    }

    fn deliver(router: &mut Router, packet: &Packet, now_us: u64) -> RxOutcome {
        let bytes = wire::encode(packet).unwrap().wire_bytes();
        router.on_receive(&bytes, now_us, (now_us / SECOND) as i64)
    }

    #[test]
    fn hello_not_listing_us_reaches_init() {
        let mut r = null_router("10.0.0.1");
        let outcome = deliver(&mut r, &hello_from("10.0.0.2", &[]), SECOND);
        match outcome {
            RxOutcome::Accepted { state_changes, .. } => {
                assert_eq!(state_changes.len(), 1);
                assert_eq!(state_changes[0].to, NeighborState::Init);
            }
            other => panic!("unexpected outcome {:?}", other),
        }
        assert_eq!(r.neighbor_state(rid("10.0.0.2")), NeighborState::Init);
    }

    #[test]
    fn hello_listing_us_walks_to_full_via_two_way() {
        let mut r = null_router("10.0.0.1");
        let outcome = deliver(&mut r, &hello_from("10.0.0.2", &["10.0.0.1"]), SECOND);
        match outcome {
            RxOutcome::Accepted { state_changes, .. } => {
                let states: Vec<_> = state_changes.iter().map(|c| c.to).collect();
                assert_eq!(
                    states,
                    [
                        NeighborState::Init,
                        NeighborState::TwoWay,
                        NeighborState::Full
                    ]
                );
            }
            other => panic!("unexpected outcome {:?}", other),
        }
        assert_eq!(r.neighbor_state(rid("10.0.0.2")), NeighborState::Full);
    }

    #[test]
    fn rejected_frame_has_no_fsm_effect() {
        let (pw, _) = simple_password(b"nekasifra").unwrap();
        let mut r = Router::new(RouterConfig::new(rid("10.0.0.1"), AuthConfig::Simple(pw)));
        // Unauthenticated Hello into a password-protected router.
        let outcome = deliver(&mut r, &hello_from("10.0.0.9", &["10.0.0.1"]), SECOND);
        assert!(matches!(
            outcome,
            RxOutcome::Rejected(RejectReason::AuthTypeMismatch { .. })
        ));
        assert!(r.neighbors().is_empty());

        // Wrong password: same story.
        let (wrong, _) = simple_password(b"drugasifra").unwrap();
        let forged = sign_simple(hello_from("10.0.0.9", &["10.0.0.1"]), &wrong);
        let outcome = deliver(&mut r, &forged, SECOND);
        assert!(matches!(
            outcome,
            RxOutcome::Rejected(RejectReason::PasswordMismatch)
        ));
        assert!(r.neighbors().is_empty());
    }

    #[test]
    fn own_router_id_is_discarded() {
        let mut r = null_router("10.0.0.1");
        let outcome = deliver(&mut r, &hello_from("10.0.0.1", &[]), SECOND);
        assert_eq!(outcome, RxOutcome::SelfOrigin);
        assert!(r.neighbors().is_empty());
    }

    #[test]
    fn full_falls_back_to_init_when_no_longer_listed() {
        let mut r = null_router("10.0.0.1");
        deliver(&mut r, &hello_from("10.0.0.2", &["10.0.0.1"]), SECOND);
        assert_eq!(r.neighbor_state(rid("10.0.0.2")), NeighborState::Full);
        let outcome = deliver(&mut r, &hello_from("10.0.0.2", &[]), 2 * SECOND);
        match outcome {
            RxOutcome::Accepted { state_changes, .. } => {
                assert_eq!(state_changes.len(), 1);
                assert_eq!(state_changes[0].to, NeighborState::Init);
                assert_eq!(state_changes[0].cause, ChangeCause::OneWay);
            }
            other => panic!("unexpected outcome {:?}", other),
        }
    }

    #[test]
    fn dead_interval_times_the_neighbor_out() {
        let mut r = null_router("10.0.0.1");
        deliver(&mut r, &hello_from("10.0.0.2", &["10.0.0.1"]), SECOND);
        // 40 s after last_heard the deadline has not yet passed.
        let out = r.on_tick(41 * SECOND);
        assert!(out.state_changes.is_empty());
        let out = r.on_tick(41 * SECOND + 1);
        assert_eq!(out.state_changes.len(), 1);
        assert_eq!(out.state_changes[0].to, NeighborState::Down);
        assert_eq!(out.state_changes[0].cause, ChangeCause::Timeout);
        // Down neighbors are no longer advertised in our Hello.
        if let Body::Hello(h) = &r.build_hello().body {
            assert!(h.neighbors.is_empty());
        }
    }

    #[test]
    fn hello_cadence_is_exact() {
        let mut r = null_router("10.0.0.1");
        let mut hellos = 0;
        for second in 0..=60u64 {
            if r.on_tick(second * SECOND).send_hello {
                hellos += 1;
            }
        }
        // t = 0, 10, 20, 30, 40, 50, 60.
        assert_eq!(hellos, 7);
    }

    #[test]
    fn lsu_flows_only_with_a_full_neighbor() {
        let mut r = null_router("10.0.0.1");
        // Nothing at 30 s: no Full neighbor yet.
        assert!(!r.on_tick(30 * SECOND).send_lsu);
        deliver(&mut r, &hello_from("10.0.0.2", &["10.0.0.1"]), 31 * SECOND);
        assert!(r.on_tick(60 * SECOND).send_lsu);
    }

    #[test]
    fn replayed_sequence_is_rejected_without_fsm_effect() {
        let chain = KeyChain::new(
            vec![AuthKey {
                key_id: 16,
                secret: b"ovojesifra".to_vec(),
                valid_from: 0,
                valid_until: 1 << 40,
            }],
            5,
        )
        .unwrap();
        let mut r = Router::new(RouterConfig::new(
            rid("10.0.0.1"),
            AuthConfig::Cryptographic(chain.clone()),
        ));
        let key = chain.key(16).unwrap();
        let frame = sign_md5(&hello_from("10.0.0.2", &["10.0.0.1"]), key, 5).unwrap();
        let bytes = frame.wire_bytes();
        assert!(matches!(
            r.on_receive(&bytes, SECOND, 1),
            RxOutcome::Accepted { .. }
        ));
        assert_eq!(r.neighbor_state(rid("10.0.0.2")), NeighborState::Full);
        // The identical bytes again: replay, and the adjacency is untouched.
        assert_eq!(
            r.on_receive(&bytes, 2 * SECOND, 2),
            RxOutcome::Rejected(RejectReason::Replay {
                key_id: 16,
                sequence: 5
            })
        );
        assert_eq!(r.neighbor_state(rid("10.0.0.2")), NeighborState::Full);
    }

    #[test]
    fn disorder_burst_tears_down_and_resets_sequence_state() {
        let chain = KeyChain::new(
            vec![AuthKey {
                key_id: 16,
                secret: b"ovojesifra".to_vec(),
                valid_from: 0,
                valid_until: 1 << 40,
            }],
            5,
        )
        .unwrap();
        let mut r = Router::new(RouterConfig::new(
            rid("10.0.0.1"),
            AuthConfig::Cryptographic(chain.clone()),
        ));
        let key = chain.key(16).unwrap();
        let old = sign_md5(&hello_from("10.0.0.2", &["10.0.0.1"]), key, 3).unwrap();
        let fresh = sign_md5(&hello_from("10.0.0.2", &["10.0.0.1"]), key, 50).unwrap();
        assert!(matches!(
            r.on_receive(&fresh.wire_bytes(), SECOND, 1),
            RxOutcome::Accepted { .. }
        ));
        for i in 0..3u64 {
            let at = (2 + i) * SECOND;
            assert_eq!(
                r.on_receive(&old.wire_bytes(), at, (at / SECOND) as i64),
                RxOutcome::Rejected(RejectReason::Disorder {
                    key_id: 16,
                    sequence: 3
                })
            );
        }
        // The breach surfaces on the next tick as a teardown.
        let out = r.on_tick(5 * SECOND);
        assert_eq!(out.state_changes.len(), 1);
        assert_eq!(out.state_changes[0].cause, ChangeCause::DisorderTeardown);
        assert_eq!(out.state_changes[0].to, NeighborState::Down);
        // Sequence state was reset: an otherwise "old" number is fresh again.
        let restart = sign_md5(&hello_from("10.0.0.2", &["10.0.0.1"]), key, 51).unwrap();
        assert!(matches!(
            r.on_receive(&restart.wire_bytes(), 6 * SECOND, 6),
            RxOutcome::Accepted { .. }
        ));
        assert_eq!(r.neighbor_state(rid("10.0.0.2")), NeighborState::Full);
    }

    #[test]
    fn network_parsing_and_mask() {
        let n: Network = "192.168.1.4/30".parse().unwrap();
        assert_eq!(n.mask(), 0xFFFFFFFC);
        assert_eq!(n.to_string(), "192.168.1.4/30");
        assert!("192.168.1.4".parse::<Network>().is_err());
        assert!("192.168.1.4/33".parse::<Network>().is_err());
        let all: Network = "0.0.0.0/0".parse().unwrap();
        assert_eq!(all.mask(), 0);
    }
}
