//! Deterministic discrete-event simulation of routers on point-to-point
//! links.
//!
//! Three event kinds exist: per-router timer ticks (every simulated second),
//! frame deliveries (send time plus link latency), and adversary actions.
//! Events fire in `(time, insertion order)` order, so two runs of the same
//! world with the same seed replay the exact same history — captures and
//! reports are byte-identical. All randomness (and there is none outside
//! adversary behavior) flows from a single seeded ChaCha stream.
//!
//! Every router has a static clock skew and sees `start_epoch + now + skew`
//! as its wall clock, which is what key validity windows are checked against.
//! The receive path for a delivered frame is, in order: guard enforcement and
//! rate counting (when enabled), the verification-budget meter, and only then
//! decode, authentication, sequence admission and the neighbor FSM. Frames
//! arriving faster than the router can verify (`verify_budget_pps`, a crude
//! model of a CPU saturated by digest checks) are dropped before
//! authentication with the `reject:overload` verdict.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};
use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auth::{self, AuthConfig, UnixTime};
use crate::guard::{GuardConfig, GuardState};
use crate::neighbor::{NeighborState, Router, RouterConfig, RxOutcome, StateChange};
use crate::wire::{self, Packet, RouterId};

/// Default one-way link latency.
pub const DEFAULT_LINK_LATENCY_US: u64 = 1000;
/// Default number of frames a router can authenticate per simulated second.
pub const DEFAULT_VERIFY_BUDGET_PPS: u32 = 500;

/// A point-to-point link. Multi-access segments are modeled as a full mesh of
/// these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub a: RouterId,
    pub b: RouterId,
    pub latency_us: u64,
}

impl Link {
    /// The endpoint opposite `from`, if `from` is on this link.
    pub fn opposite(&self, from: RouterId) -> Option<RouterId> {
        if from == self.a {
            Some(self.b)
        } else if from == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

/// One line of the capture file. `src_router` is the link-level origin of the
/// frame (the attacker's id for injected frames, whatever the header claims).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaptureRecord {
    pub time_us: u64,
    pub link_id: usize,
    pub src_router: RouterId,
    pub frame_hex: String,
    pub verdict: String,
}

/// One adjacency transition with its timestamp, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub time_us: u64,
    pub router: RouterId,
    pub neighbor: RouterId,
    pub state: String,
    pub cause: String,
}

/// What an interposer does with one in-flight frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TapDecision {
    /// Forward untouched.
    Pass,
    /// Swallow the frame; it never arrives.
    Drop,
    /// Forward different bytes instead (re-originated by the adversary).
    Replace(Vec<u8>),
    /// Forward untouched, but this much later.
    Delay(u64),
    /// Forward untouched and also deliver an adversary-originated copy.
    Duplicate,
}

/// The frame an interposer is looking at.
#[derive(Debug)]
pub struct TapContext<'a> {
    pub time_us: u64,
    pub link_id: usize,
    pub from: RouterId,
    pub to: RouterId,
    pub bytes: &'a [u8],
}

/// A frame an interposer wants to put on its link during an action.
#[derive(Debug, Clone)]
pub struct Emission {
    pub to: RouterId,
    pub bytes: Vec<u8>,
    /// Added on top of the link latency.
    pub extra_delay_us: u64,
}

/// A wiretap-with-hands on one link: sees every frame crossing it and may
/// also originate frames at scheduled action times.
pub trait Interposer {
    /// The link-level identity of frames this interposer originates.
    fn origin_id(&self) -> RouterId;

    /// Called for every honest frame entering the link.
    fn on_frame(&mut self, _ctx: &TapContext<'_>) -> TapDecision {
        TapDecision::Pass
    }

    /// Called at times scheduled via [`SimWorld::schedule_adversary_action`].
    fn on_action(&mut self, _now_us: u64, _rng: &mut dyn RngCore) -> Vec<Emission> {
        Vec::new()
    }
}

#[derive(Debug)]
enum EventKind {
    Tick(RouterId),
    Deliver {
        link_id: usize,
        origin: RouterId,
        to: RouterId,
        bytes: Vec<u8>,
    },
    AdversaryAction {
        link_id: usize,
    },
}

struct Event {
    time_us: u64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.time_us == other.time_us && self.seq == other.seq
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert so the earliest (time, seq) pops
        // first. Equal timestamps resolve in insertion order.
        (other.time_us, other.seq).cmp(&(self.time_us, self.seq))
    }
}

/// Trailing-window rate meter for the verification budget.
#[derive(Debug, Default)]
struct RateMeter {
    times: VecDeque<u64>,
}

impl RateMeter {
    /// Record an arrival and return how many landed in the trailing second.
    fn observe(&mut self, now_us: u64) -> usize {
        self.times.push_back(now_us);
        while let Some(&front) = self.times.front() {
            if now_us.saturating_sub(front) > 1_000_000 {
                self.times.pop_front();
            } else {
                break;
            }
        }
        self.times.len()
    }
}

/// Static description of a world to simulate.
#[derive(Debug, Clone)]
pub struct WorldConfig {
    pub routers: Vec<RouterConfig>,
    pub links: Vec<Link>,
    /// Applied to every router when `enabled`.
    pub guard: GuardConfig,
    pub verify_budget_pps: u32,
    /// Wall-clock second that simulation time zero corresponds to.
    pub start_epoch: UnixTime,
    pub seed: u64,
    pub duration_s: u64,
}

impl WorldConfig {
    pub fn new(routers: Vec<RouterConfig>, links: Vec<Link>, duration_s: u64) -> WorldConfig {
        WorldConfig {
            routers,
            links,
            guard: GuardConfig::default(),
            verify_budget_pps: DEFAULT_VERIFY_BUDGET_PPS,
            start_epoch: 0,
            seed: 0,
            duration_s,
        }
    }
}

/// Errors detected while assembling a world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorldError {
    DuplicateRouterId(RouterId),
    UnknownLinkEndpoint { link_index: usize, id: RouterId },
    SelfLink { link_index: usize },
    BadIntervals { router: RouterId },
}

impl fmt::Display for WorldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldError::DuplicateRouterId(id) => write!(f, "duplicate router id {}", id),
            WorldError::UnknownLinkEndpoint { link_index, id } => {
                write!(f, "link {} references unknown router {}", link_index, id)
            }
            WorldError::SelfLink { link_index } => {
                write!(f, "link {} connects a router to itself", link_index)
            }
            WorldError::BadIntervals { router } => write!(
                f,
                "router {}: dead interval must exceed the hello interval",
                router
            ),
        }
    }
}

impl std::error::Error for WorldError {}

/// The simulation itself.
pub struct SimWorld {
    now_us: u64,
    duration_us: u64,
    start_epoch: UnixTime,
    routers: BTreeMap<RouterId, Router>,
    links: Vec<Link>,
    queue: BinaryHeap<Event>,
    next_seq: u64,
    guards: BTreeMap<RouterId, GuardState>,
    meters: BTreeMap<RouterId, RateMeter>,
    verify_budget_pps: u32,
    rng: ChaCha8Rng,
    interposers: BTreeMap<usize, Box<dyn Interposer>>,
    pub capture: Vec<CaptureRecord>,
    pub timeline: Vec<TimelineEntry>,
}

impl SimWorld {
    pub fn new(config: WorldConfig) -> Result<SimWorld, WorldError> {
        let mut routers = BTreeMap::new();
        for rc in config.routers {
            if rc.dead_interval_s <= rc.hello_interval_s {
                return Err(WorldError::BadIntervals {
                    router: rc.router_id,
                });
            }
            let id = rc.router_id;
            if routers.insert(id, Router::new(rc)).is_some() {
                return Err(WorldError::DuplicateRouterId(id));
            }
        }
        for (link_index, link) in config.links.iter().enumerate() {
            if link.a == link.b {
                return Err(WorldError::SelfLink { link_index });
            }
            for id in [link.a, link.b] {
                if !routers.contains_key(&id) {
                    return Err(WorldError::UnknownLinkEndpoint { link_index, id });
                }
            }
        }
        let guards = if config.guard.enabled {
            routers
                .keys()
                .map(|id| (*id, GuardState::new(config.guard)))
                .collect()
        } else {
            BTreeMap::new()
        };
        let mut world = SimWorld {
            now_us: 0,
            duration_us: config.duration_s * 1_000_000,
            start_epoch: config.start_epoch,
            guards,
            meters: routers.keys().map(|id| (*id, RateMeter::default())).collect(),
            routers,
            links: config.links,
            queue: BinaryHeap::new(),
            next_seq: 0,
            verify_budget_pps: config.verify_budget_pps,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            interposers: BTreeMap::new(),
            capture: Vec::new(),
            timeline: Vec::new(),
        };
        let ids: Vec<RouterId> = world.routers.keys().copied().collect();
        for id in ids {
            world.push_event(0, EventKind::Tick(id));
        }
        Ok(world)
    }

    /// This router's wall clock right now: epoch anchor plus simulation time
    /// plus its configured skew.
    pub fn local_time(&self, router: RouterId) -> UnixTime {
        let skew = self
            .routers
            .get(&router)
            .map(|r| r.config.skew_s)
            .unwrap_or(0);
        self.start_epoch + (self.now_us / 1_000_000) as UnixTime + skew
    }

    pub fn now_us(&self) -> u64 {
        self.now_us
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn routers(&self) -> &BTreeMap<RouterId, Router> {
        &self.routers
    }

    /// Put an interposer on a link. At most one per link; a second attachment
    /// replaces the first.
    pub fn attach_interposer(&mut self, link_id: usize, interposer: Box<dyn Interposer>) {
        self.interposers.insert(link_id, interposer);
    }

    /// Schedule a call to the link's interposer [`Interposer::on_action`].
    pub fn schedule_adversary_action(&mut self, time_us: u64, link_id: usize) {
        self.push_event(time_us, EventKind::AdversaryAction { link_id });
    }

    /// Current adjacency state for every (router, neighbor) pair that has a
    /// record.
    pub fn adjacency_matrix(&self) -> BTreeMap<(RouterId, RouterId), NeighborState> {
        let mut out = BTreeMap::new();
        for (id, router) in &self.routers {
            for (neighbor, record) in router.neighbors() {
                out.insert((*id, *neighbor), record.state());
            }
        }
        out
    }

    /// Run the event loop to the configured duration.
    pub fn run(&mut self) {
        while let Some(event) = self.queue.pop() {
            if event.time_us > self.duration_us {
                break;
            }
            self.now_us = event.time_us;
            match event.kind {
                EventKind::Tick(router_id) => self.handle_tick(router_id),
                EventKind::Deliver {
                    link_id,
                    origin,
                    to,
                    bytes,
                } => self.handle_deliver(link_id, origin, to, &bytes),
                EventKind::AdversaryAction { link_id } => self.handle_adversary_action(link_id),
            }
        }
    }

    fn push_event(&mut self, time_us: u64, kind: EventKind) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queue.push(Event { time_us, seq, kind });
    }

    fn handle_tick(&mut self, router_id: RouterId) {
        let now = self.now_us;
        let (output, hello, lsu) = {
            let router = match self.routers.get_mut(&router_id) {
                Some(r) => r,
                None => return,
            };
            let output = router.on_tick(now);
            let hello = output.send_hello.then(|| router.build_hello());
            let lsu = output.send_lsu.then(|| router.build_lsu());
            (output, hello, lsu)
        };
        self.note_state_changes(router_id, &output.state_changes);
        if let Some(packet) = hello {
            self.send_from(router_id, packet);
        }
        if let Some(packet) = lsu {
            self.send_from(router_id, packet);
        }
        let next = now + 1_000_000;
        if next <= self.duration_us {
            self.push_event(next, EventKind::Tick(router_id));
        }
    }

    /// Sign and transmit one packet from `router_id` over each of its links.
    fn send_from(&mut self, router_id: RouterId, packet: Packet) {
        let local = self.local_time(router_id);
        let outgoing: Vec<(usize, RouterId, u64)> = self
            .links
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.opposite(router_id).map(|to| (i, to, l.latency_us)))
            .collect();
        for (link_id, to, _latency) in outgoing {
            let bytes = {
                let router = self.routers.get_mut(&router_id).expect("sender exists");
                match router.config.auth.clone() {
                    AuthConfig::None => match wire::encode(&packet) {
                        Ok(f) => f.wire_bytes(),
                        Err(_) => continue,
                    },
                    AuthConfig::Simple(pw) => {
                        let signed = auth::sign_simple(packet.clone(), &pw);
                        match wire::encode(&signed) {
                            Ok(f) => f.wire_bytes(),
                            Err(_) => continue,
                        }
                    }
                    AuthConfig::Cryptographic(chain) => {
                        // No key valid for sending means no frame at all.
                        let key = match chain.select_send_key(local) {
                            Ok(k) => k.clone(),
                            Err(_) => continue,
                        };
                        let sequence = router.next_send_sequence();
                        match auth::sign_md5(&packet, &key, sequence) {
                            Ok(f) => f.wire_bytes(),
                            Err(_) => continue,
                        }
                    }
                }
            };
            self.transmit_honest(link_id, router_id, to, bytes);
        }
    }

    /// Record and deliver an honest frame, routing it through the link's
    /// interposer if one is attached.
    fn transmit_honest(&mut self, link_id: usize, from: RouterId, to: RouterId, bytes: Vec<u8>) {
        let now = self.now_us;
        let latency = self.links[link_id].latency_us;
        self.capture.push(CaptureRecord {
            time_us: now,
            link_id,
            src_router: from,
            frame_hex: hex::encode(&bytes),
            verdict: "sent".to_string(),
        });
        let decision = match self.interposers.get_mut(&link_id) {
            Some(tap) => {
                let ctx = TapContext {
                    time_us: now,
                    link_id,
                    from,
                    to,
                    bytes: &bytes,
                };
                Some((tap.on_frame(&ctx), tap.origin_id()))
            }
            None => None,
        };
        match decision {
            None | Some((TapDecision::Pass, _)) => {
                self.schedule_delivery(now + latency, link_id, from, to, bytes);
            }
            Some((TapDecision::Drop, _)) => {}
            Some((TapDecision::Delay(extra), _)) => {
                self.schedule_delivery(now + latency + extra, link_id, from, to, bytes);
            }
            Some((TapDecision::Replace(forged), attacker)) => {
                self.capture.push(CaptureRecord {
                    time_us: now,
                    link_id,
                    src_router: attacker,
                    frame_hex: hex::encode(&forged),
                    verdict: "injected".to_string(),
                });
                self.schedule_delivery(now + latency, link_id, attacker, to, forged);
            }
            Some((TapDecision::Duplicate, attacker)) => {
                self.capture.push(CaptureRecord {
                    time_us: now,
                    link_id,
                    src_router: attacker,
                    frame_hex: hex::encode(&bytes),
                    verdict: "injected".to_string(),
                });
                self.schedule_delivery(now + latency, link_id, from, to, bytes.clone());
                // Same arrival instant, later insertion order: the copy is
                // processed right after the original.
                self.schedule_delivery(now + latency, link_id, attacker, to, bytes);
            }
        }
    }

    fn schedule_delivery(
        &mut self,
        time_us: u64,
        link_id: usize,
        origin: RouterId,
        to: RouterId,
        bytes: Vec<u8>,
    ) {
        self.push_event(
            time_us,
            EventKind::Deliver {
                link_id,
                origin,
                to,
                bytes,
            },
        );
    }

    fn handle_adversary_action(&mut self, link_id: usize) {
        let now = self.now_us;
        let latency = match self.links.get(link_id) {
            Some(l) => l.latency_us,
            None => return,
        };
        // Take the interposer out so it can borrow the RNG while we record
        // and schedule its emissions.
        let mut tap = match self.interposers.remove(&link_id) {
            Some(t) => t,
            None => return,
        };
        let emissions = tap.on_action(now, &mut self.rng);
        let attacker = tap.origin_id();
        self.interposers.insert(link_id, tap);
        for emission in emissions {
            self.capture.push(CaptureRecord {
                time_us: now,
                link_id,
                src_router: attacker,
                frame_hex: hex::encode(&emission.bytes),
                verdict: "injected".to_string(),
            });
            self.schedule_delivery(
                now + latency + emission.extra_delay_us,
                link_id,
                attacker,
                emission.to,
                emission.bytes,
            );
        }
    }

    fn handle_deliver(&mut self, link_id: usize, origin: RouterId, to: RouterId, bytes: &[u8]) {
        let now = self.now_us;
        // 1. Guard: cheap filtering in front of everything else.
        if let Some(guard) = self.guards.get_mut(&to) {
            if guard.enforce(origin, now) {
                self.push_capture(link_id, origin, bytes, "blocked".to_string());
                return;
            }
            guard.observe(origin, now);
        }
        // 2. Verification budget: frames beyond the trailing-second budget
        // are lost before authentication ever runs.
        let rate = self
            .meters
            .get_mut(&to)
            .map(|m| m.observe(now))
            .unwrap_or(0);
        if rate > self.verify_budget_pps as usize {
            self.push_capture(link_id, origin, bytes, "reject:overload".to_string());
            return;
        }
        // 3. Decode, authenticate, admit.
        let local = self.local_time(to);
        let outcome = match self.routers.get_mut(&to) {
            Some(router) => router.on_receive(bytes, now, local),
            None => return,
        };
        let verdict = match &outcome {
            RxOutcome::Accepted { .. } => "accept".to_string(),
            RxOutcome::Rejected(reason) => format!("reject:{}", reason.label()),
            RxOutcome::Malformed(_) => "reject:malformed".to_string(),
            RxOutcome::SelfOrigin => "reject:self-origin".to_string(),
        };
        if let RxOutcome::Accepted { state_changes, .. } = &outcome {
            self.note_state_changes(to, state_changes);
        }
        self.push_capture(link_id, origin, bytes, verdict);
    }

    fn push_capture(&mut self, link_id: usize, src: RouterId, bytes: &[u8], verdict: String) {
        self.capture.push(CaptureRecord {
            time_us: self.now_us,
            link_id,
            src_router: src,
            frame_hex: hex::encode(bytes),
            verdict,
        });
    }

    fn note_state_changes(&mut self, router: RouterId, changes: &[StateChange]) {
        for change in changes {
            self.timeline.push(TimelineEntry {
                time_us: self.now_us,
                router,
                neighbor: change.neighbor,
                state: change.to.label().to_string(),
                cause: change.cause.label().to_string(),
            });
        }
    }
}
