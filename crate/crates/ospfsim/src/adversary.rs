//! The seven attack techniques, implemented as interposer programs, and the
//! assessment pass that grades each attack after the fact.
//!
//! A design rule worth stating twice: attack code never declares victory.
//! Taps drop, mutate, replay, forge and flood — that's all. Whether an attack
//! *succeeded* is decided afterwards by [`assess`], purely from the capture
//! (verdicts on adversary-originated frames) and the adjacency timeline. The
//! adversary also never receives configured secrets: everything it knows —
//! passwords, key ids, sequence numbers, hello parameters, topology — is
//! learned by parsing frames it observed on the link.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::sim::{
    CaptureRecord, Emission, Interposer, TapContext, TapDecision, TimelineEntry,
};
use crate::wire::{self, Auth, Body, HelloBody, Packet, RouterId};

/// The attack taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    Eavesdrop,
    Replay,
    Inject,
    Delete,
    Modify,
    #[serde(rename = "mitm")]
    MitM,
    DosFlood,
}

impl Technique {
    pub fn label(self) -> &'static str {
        match self {
            Technique::Eavesdrop => "eavesdrop",
            Technique::Replay => "replay",
            Technique::Inject => "inject",
            Technique::Delete => "delete",
            Technique::Modify => "modify",
            Technique::MitM => "mitm",
            Technique::DosFlood => "dos-flood",
        }
    }

    pub fn all() -> [Technique; 7] {
        [
            Technique::Eavesdrop,
            Technique::Replay,
            Technique::Inject,
            Technique::Delete,
            Technique::Modify,
            Technique::MitM,
            Technique::DosFlood,
        ]
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which frames a deletion attack swallows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DeletePredicate {
    #[default]
    Hello,
    Lsu,
    All,
    None,
}

impl DeletePredicate {
    fn matches(self, bytes: &[u8]) -> bool {
        let packet_type = bytes.get(1).copied().unwrap_or(0);
        match self {
            DeletePredicate::Hello => packet_type == wire::PACKET_TYPE_HELLO,
            DeletePredicate::Lsu => packet_type == wire::PACKET_TYPE_LS_UPDATE,
            DeletePredicate::All => true,
            DeletePredicate::None => false,
        }
    }
}

/// What a flood attack's bogus frames look like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PayloadKind {
    /// Well-formed Hellos from random router ids carrying garbage
    /// credentials. Rejected under every honest configuration, but each one
    /// still costs a verification.
    #[default]
    JunkHello,
    /// Unparseable noise.
    RandomBytes,
}

/// Technique-specific knobs. Anything omitted in the scenario file falls back
/// to a sensible default for the technique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttackParams {
    /// Which previously observed frame a replay re-sends. Negative counts
    /// from the end of the observation log (-1 = most recent).
    pub capture_index: i64,
    /// Extra delay applied to replayed frames.
    pub delay_ms: u64,
    /// How many actions (replays, forgeries) to perform.
    pub count: Option<u32>,
    /// Seconds between consecutive actions.
    pub interval_s: u64,
    /// Byte offset a modification flips. Defaults to the Hello's
    /// router-priority byte.
    pub offset: Option<usize>,
    /// Mask XORed into the targeted byte.
    pub xor_mask: u8,
    /// Frame filter for deletions.
    pub predicate: DeletePredicate,
    /// Flood intensity, frames per second per victim.
    pub rate_pps: u32,
    /// Flood frame shape.
    pub payload_kind: PayloadKind,
    /// How long deletions, modifications and floods stay active.
    pub duration_s: Option<u64>,
}

impl Default for AttackParams {
    fn default() -> AttackParams {
        AttackParams {
            capture_index: -1,
            delay_ms: 100,
            count: None,
            interval_s: 1,
            offset: None,
            xor_mask: 0x55,
            predicate: DeletePredicate::default(),
            rate_pps: 1000,
            payload_kind: PayloadKind::default(),
            duration_s: None,
        }
    }
}

fn default_start_s() -> u64 {
    15
}

fn default_attacker() -> RouterId {
    "66.66.66.66".parse().expect("static id parses")
}

/// One attack, as declared in a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSpec {
    pub technique: Technique,
    /// Index of the tapped link.
    #[serde(default)]
    pub link: usize,
    #[serde(default = "default_start_s")]
    pub start_s: u64,
    #[serde(default)]
    pub stop_s: Option<u64>,
    /// Identity adversary-originated frames carry at the link level.
    #[serde(default = "default_attacker")]
    pub attacker_id: RouterId,
    #[serde(default)]
    pub params: AttackParams,
}

impl AttackSpec {
    pub fn new(technique: Technique) -> AttackSpec {
        AttackSpec {
            technique,
            link: 0,
            start_s: default_start_s(),
            stop_s: None,
            attacker_id: default_attacker(),
            params: AttackParams::default(),
        }
    }

    fn effective_count(&self) -> u32 {
        self.params.count.unwrap_or(match self.technique {
            Technique::Replay | Technique::Inject => 3,
            Technique::MitM => 12,
            _ => 1,
        })
    }

    fn effective_duration_s(&self) -> u64 {
        self.params.duration_s.unwrap_or(match self.technique {
            Technique::Modify => 10,
            _ => 45,
        })
    }

    /// Active window in simulation microseconds.
    pub fn window(&self) -> (u64, u64) {
        let start = self.start_s * 1_000_000;
        let stop = self
            .stop_s
            .map(|s| s * 1_000_000)
            .unwrap_or(start + self.effective_duration_s() * 1_000_000);
        (start, stop)
    }

    /// When the simulator should call the tap's `on_action`.
    pub fn action_times(&self) -> Vec<u64> {
        let start = self.start_s * 1_000_000;
        let interval = self.params.interval_s.max(1) * 1_000_000;
        match self.technique {
            Technique::Replay | Technique::Inject | Technique::MitM => (0..self
                .effective_count() as u64)
                .map(|k| start + k * interval)
                .collect(),
            Technique::DosFlood => {
                // One action per second; each action spreads `rate_pps`
                // frames per victim across its second.
                (0..self.effective_duration_s())
                    .map(|k| start + k * 1_000_000)
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Instantiate the interposer for this attack. `victims` are the tapped
    /// link's endpoints.
    pub fn build_tap(&self, victims: (RouterId, RouterId)) -> Box<dyn Interposer> {
        let (start_us, stop_us) = self.window();
        match self.technique {
            Technique::Eavesdrop => Box::new(PassiveTap {
                attacker: self.attacker_id,
            }),
            Technique::Delete => Box::new(DeleteTap {
                attacker: self.attacker_id,
                start_us,
                stop_us,
                predicate: self.params.predicate,
            }),
            Technique::Modify => Box::new(ModifyTap {
                attacker: self.attacker_id,
                start_us,
                stop_us,
                offset: self.params.offset,
                xor_mask: self.params.xor_mask,
            }),
            Technique::Replay => Box::new(ReplayTap {
                attacker: self.attacker_id,
                capture_index: self.params.capture_index,
                extra_delay_us: self.params.delay_ms * 1000,
                seen: Vec::new(),
            }),
            Technique::Inject | Technique::MitM => Box::new(ForgeTap {
                attacker: self.attacker_id,
                victims,
                intel: LinkIntel::default(),
                forged: 0,
            }),
            Technique::DosFlood => Box::new(FloodTap {
                attacker: self.attacker_id,
                target: victims.1,
                rate_pps: self.params.rate_pps,
                payload_kind: self.params.payload_kind,
            }),
        }
    }
}

/// Everything the adversary has gleaned from watching the link. Populated
/// exclusively from observed wire bytes — configuration secrets are out of
/// reach by construction.
#[derive(Debug, Default)]
struct LinkIntel {
    au_type: Option<u16>,
    password: Option<[u8; 8]>,
    key_id: Option<u8>,
    max_sequence: u32,
    area_id: Option<u32>,
    network_mask: Option<u32>,
    hello_interval: Option<u16>,
    dead_interval: Option<u32>,
}

impl LinkIntel {
    fn observe(&mut self, bytes: &[u8]) {
        let packet = match wire::decode(bytes) {
            Ok(p) => p,
            Err(_) => return,
        };
        self.area_id = Some(packet.area_id);
        match packet.auth {
            Auth::Null => self.au_type = Some(wire::AU_TYPE_NULL),
            Auth::Simple(pw) => {
                self.au_type = Some(wire::AU_TYPE_SIMPLE);
                self.password = Some(pw);
            }
            Auth::Cryptographic {
                key_id, sequence, ..
            } => {
                self.au_type = Some(wire::AU_TYPE_CRYPTOGRAPHIC);
                self.key_id = Some(key_id);
                self.max_sequence = self.max_sequence.max(sequence);
            }
        }
        if let Body::Hello(hello) = packet.body {
            self.network_mask = Some(hello.network_mask);
            self.hello_interval = Some(hello.hello_interval);
            self.dead_interval = Some(hello.dead_interval);
        }
    }

    /// Forge a Hello from `claimed` listing `neighbors`, dressed in the best
    /// credentials observation afforded. Returns wire bytes.
    fn forge_hello(
        &self,
        claimed: RouterId,
        neighbors: Vec<RouterId>,
        forged_so_far: u32,
        rng: &mut dyn RngCore,
    ) -> Option<Vec<u8>> {
        let auth = match self.au_type {
            Some(wire::AU_TYPE_SIMPLE) => Auth::Simple(self.password.unwrap_or([0; 8])),
            Some(wire::AU_TYPE_CRYPTOGRAPHIC) => {
                // Key id and a plausible sequence are public on the wire; the
                // digest is the one thing that has to be guessed.
                let mut digest = [0u8; 16];
                rng.fill_bytes(&mut digest);
                Auth::Cryptographic {
                    key_id: self.key_id.unwrap_or(1),
                    sequence: self.max_sequence + 1000 + forged_so_far,
                    digest,
                }
            }
            _ => Auth::Null,
        };
        let packet = Packet {
            router_id: claimed,
            area_id: self.area_id.unwrap_or(0),
            auth,
            body: Body::Hello(HelloBody {
                network_mask: self.network_mask.unwrap_or(0xFFFF_FFFC),
                hello_interval: self.hello_interval.unwrap_or(10),
                router_priority: 1,
                dead_interval: self.dead_interval.unwrap_or(40),
                designated_router: RouterId(0),
                backup_designated_router: RouterId(0),
                neighbors,
            }),
        };
        wire::encode(&packet).ok().map(|f| f.wire_bytes())
    }
}

/// Eavesdropping: watch, never touch. Findings are recovered from the capture
/// afterwards by [`eavesdrop_scan`].
struct PassiveTap {
    attacker: RouterId,
}

impl Interposer for PassiveTap {
    fn origin_id(&self) -> RouterId {
        self.attacker
    }
}

/// Deletion: swallow matching frames while the window is open.
struct DeleteTap {
    attacker: RouterId,
    start_us: u64,
    stop_us: u64,
    predicate: DeletePredicate,
}

impl Interposer for DeleteTap {
    fn origin_id(&self) -> RouterId {
        self.attacker
    }

    fn on_frame(&mut self, ctx: &TapContext<'_>) -> TapDecision {
        if ctx.time_us >= self.start_us
            && ctx.time_us < self.stop_us
            && self.predicate.matches(ctx.bytes)
        {
            TapDecision::Drop
        } else {
            TapDecision::Pass
        }
    }
}

/// Modification: flip one body byte of in-flight Hellos, repair the checksum
/// where the attacker can (Null, Simple), forward.
struct ModifyTap {
    attacker: RouterId,
    start_us: u64,
    stop_us: u64,
    offset: Option<usize>,
    xor_mask: u8,
}

/// Offset of the router-priority byte in a Hello packet.
const HELLO_PRIORITY_OFFSET: usize = wire::HEADER_LEN + 7;

impl Interposer for ModifyTap {
    fn origin_id(&self) -> RouterId {
        self.attacker
    }

    fn on_frame(&mut self, ctx: &TapContext<'_>) -> TapDecision {
        if ctx.time_us < self.start_us || ctx.time_us >= self.stop_us {
            return TapDecision::Pass;
        }
        if ctx.bytes.get(1).copied() != Some(wire::PACKET_TYPE_HELLO) {
            return TapDecision::Pass;
        }
        let mut bytes = ctx.bytes.to_vec();
        if bytes.len() < wire::HEADER_LEN + 4 {
            return TapDecision::Pass;
        }
        let declared = u16::from_be_bytes([bytes[2], bytes[3]]) as usize;
        let offset = self.offset.unwrap_or(HELLO_PRIORITY_OFFSET);
        // Stay inside the packet body: mutating the header would change the
        // claim under test, and mutating the digest trailer is pointless.
        if offset < wire::HEADER_LEN || offset >= declared || offset >= bytes.len() {
            return TapDecision::Pass;
        }
        bytes[offset] ^= self.xor_mask;
        let au_type = u16::from_be_bytes([bytes[16], bytes[17]]);
        if au_type != wire::AU_TYPE_CRYPTOGRAPHIC {
            // The checksum is not a secret; a link attacker recomputes it.
            let checksum = wire::compute_checksum(&bytes[..declared]);
            bytes[12..14].copy_from_slice(&checksum.to_be_bytes());
        }
        TapDecision::Replace(bytes)
    }
}

/// Replay: record everything, re-send a chosen observation verbatim when the
/// action fires.
struct ReplayTap {
    attacker: RouterId,
    capture_index: i64,
    extra_delay_us: u64,
    seen: Vec<(RouterId, Vec<u8>)>,
}

impl Interposer for ReplayTap {
    fn origin_id(&self) -> RouterId {
        self.attacker
    }

    fn on_frame(&mut self, ctx: &TapContext<'_>) -> TapDecision {
        self.seen.push((ctx.to, ctx.bytes.to_vec()));
        TapDecision::Pass
    }

    fn on_action(&mut self, _now_us: u64, _rng: &mut dyn RngCore) -> Vec<Emission> {
        let len = self.seen.len() as i64;
        let index = if self.capture_index < 0 {
            len + self.capture_index
        } else {
            self.capture_index
        };
        if index < 0 || index >= len {
            return Vec::new();
        }
        let (to, bytes) = self.seen[index as usize].clone();
        vec![Emission {
            to,
            bytes,
            extra_delay_us: self.extra_delay_us,
        }]
    }
}

/// Insertion and man-in-the-middle: learn the link's dialect, then originate
/// Hellos claiming adjacency with both victims. The two techniques share the
/// tap; they differ in cadence and in how success is judged.
struct ForgeTap {
    attacker: RouterId,
    victims: (RouterId, RouterId),
    intel: LinkIntel,
    forged: u32,
}

impl Interposer for ForgeTap {
    fn origin_id(&self) -> RouterId {
        self.attacker
    }

    fn on_frame(&mut self, ctx: &TapContext<'_>) -> TapDecision {
        self.intel.observe(ctx.bytes);
        TapDecision::Pass
    }

    fn on_action(&mut self, _now_us: u64, rng: &mut dyn RngCore) -> Vec<Emission> {
        let mut out = Vec::new();
        for to in [self.victims.0, self.victims.1] {
            self.forged += 1;
            if let Some(bytes) = self.intel.forge_hello(
                self.attacker,
                vec![self.victims.0, self.victims.1],
                self.forged,
                rng,
            ) {
                out.push(Emission {
                    to,
                    bytes,
                    extra_delay_us: 0,
                });
            }
        }
        out
    }
}

/// Denial of service: shovel bogus frames at one victim's receive path,
/// `rate_pps` of them spread evenly across every second of the flood. The
/// junk never authenticates — the damage is the verification work and queue
/// pressure itself, which starves the legitimate frames arriving alongside.
struct FloodTap {
    attacker: RouterId,
    target: RouterId,
    rate_pps: u32,
    payload_kind: PayloadKind,
}

impl FloodTap {
    fn junk_frame(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        match self.payload_kind {
            PayloadKind::JunkHello => {
                let mut digest = [0u8; 16];
                rng.fill_bytes(&mut digest);
                let packet = Packet {
                    router_id: RouterId(rng.next_u32()),
                    area_id: 0,
                    auth: Auth::Cryptographic {
                        key_id: 0xFF,
                        sequence: rng.next_u32(),
                        digest,
                    },
                    body: Body::Hello(HelloBody {
                        network_mask: 0,
                        hello_interval: 10,
                        router_priority: 0,
                        dead_interval: 40,
                        designated_router: RouterId(0),
                        backup_designated_router: RouterId(0),
                        neighbors: Vec::new(),
                    }),
                };
                wire::encode(&packet)
                    .map(|f| f.wire_bytes())
                    .unwrap_or_default()
            }
            PayloadKind::RandomBytes => {
                let mut bytes = vec![0u8; 44];
                rng.fill_bytes(&mut bytes);
                bytes
            }
        }
    }
}

impl Interposer for FloodTap {
    fn origin_id(&self) -> RouterId {
        self.attacker
    }

    fn on_action(&mut self, _now_us: u64, rng: &mut dyn RngCore) -> Vec<Emission> {
        let rate = self.rate_pps.max(1) as u64;
        let spacing = 1_000_000 / rate;
        let mut out = Vec::with_capacity(rate as usize);
        for j in 0..rate {
            out.push(Emission {
                to: self.target,
                bytes: self.junk_frame(rng),
                extra_delay_us: j * spacing,
            });
        }
        out
    }
}

/// What eavesdropping recovered from honest traffic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EavesdropFindings {
    pub passwords_recovered: Vec<String>,
    pub topology_recovered: BTreeSet<(RouterId, RouterId)>,
    /// Capture indices the findings rest on.
    pub evidence: Vec<usize>,
}

/// Scan honest (`sent`) frames on one link for cleartext passwords and for
/// the neighbor graph implied by Hello neighbor lists.
pub fn eavesdrop_scan(capture: &[CaptureRecord], link_id: usize) -> EavesdropFindings {
    let mut passwords = BTreeSet::new();
    let mut password_evidence = Vec::new();
    let mut topology = BTreeSet::new();
    let mut topology_evidence = Vec::new();
    for (index, record) in capture.iter().enumerate() {
        if record.verdict != "sent" || record.link_id != link_id {
            continue;
        }
        let bytes = match hex::decode(&record.frame_hex) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let packet = match wire::decode(&bytes) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if let Auth::Simple(pw) = packet.auth {
            let trimmed: Vec<u8> = pw.iter().copied().take_while(|&b| b != 0).collect();
            if passwords.insert(String::from_utf8_lossy(&trimmed).into_owned()) {
                password_evidence.push(index);
            }
        }
        if let Body::Hello(hello) = &packet.body {
            for neighbor in &hello.neighbors {
                if topology.insert((packet.router_id, *neighbor)) {
                    topology_evidence.push(index);
                }
            }
        }
    }
    let evidence = if password_evidence.is_empty() {
        topology_evidence
    } else {
        password_evidence
    };
    EavesdropFindings {
        passwords_recovered: passwords.into_iter().collect(),
        topology_recovered: topology,
        evidence,
    }
}

/// The verdict on one attack run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub technique: Technique,
    pub auth_mode: String,
    pub succeeded: bool,
    /// Capture indices backing the verdict.
    pub evidence: Vec<usize>,
    pub detail: String,
    /// Technique-specific findings (recovered passwords, drop counts, ...).
    pub data: serde_json::Value,
}

/// One finished run, as the assessor sees it.
pub struct RunView<'a> {
    pub capture: &'a [CaptureRecord],
    pub timeline: &'a [TimelineEntry],
    pub auth_mode: &'a str,
    pub attacker: RouterId,
    pub victims: (RouterId, RouterId),
    pub link_id: usize,
}

const EVIDENCE_CAP: usize = 8;

fn cap(mut indices: Vec<usize>) -> Vec<usize> {
    indices.truncate(EVIDENCE_CAP);
    indices
}

/// Deliveries of adversary-originated frames: the receiving side's verdict on
/// everything the attacker put on the wire.
fn adversary_deliveries<'a>(view: &'a RunView<'a>) -> Vec<(usize, &'a CaptureRecord)> {
    view.capture
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            r.src_router == view.attacker && r.verdict != "sent" && r.verdict != "injected"
        })
        .collect()
}

fn reject_histogram(deliveries: &[(usize, &CaptureRecord)]) -> BTreeMap<String, usize> {
    let mut histogram = BTreeMap::new();
    for (_, record) in deliveries {
        if record.verdict != "accept" {
            *histogram.entry(record.verdict.clone()).or_insert(0) += 1;
        }
    }
    histogram
}

fn is_victim(view: &RunView<'_>, id: RouterId) -> bool {
    id == view.victims.0 || id == view.victims.1
}

/// Timeline entries where a victim lost its adjacency to the other victim.
fn victim_down_events<'a>(view: &'a RunView<'a>, from_us: u64) -> Vec<&'a TimelineEntry> {
    view.timeline
        .iter()
        .filter(|e| {
            e.time_us >= from_us
                && e.state == "down"
                && is_victim(view, e.router)
                && is_victim(view, e.neighbor)
        })
        .collect()
}

fn down_events_json(events: &[&TimelineEntry]) -> serde_json::Value {
    json!(events
        .iter()
        .map(|e| json!({
            "time_us": e.time_us,
            "router": e.router.to_string(),
            "neighbor": e.neighbor.to_string(),
            "cause": e.cause,
        }))
        .collect::<Vec<_>>())
}

/// Grade one attack run from its capture and timeline.
pub fn assess(spec: &AttackSpec, view: &RunView<'_>) -> AttackOutcome {
    match spec.technique {
        Technique::Eavesdrop => assess_eavesdrop(spec, view),
        Technique::Replay | Technique::Inject | Technique::Modify => {
            assess_acceptance_attack(spec, view)
        }
        Technique::MitM => assess_mitm(spec, view),
        Technique::Delete => assess_delete(spec, view),
        Technique::DosFlood => assess_dos(spec, view),
    }
}

fn assess_eavesdrop(spec: &AttackSpec, view: &RunView<'_>) -> AttackOutcome {
    let findings = eavesdrop_scan(view.capture, view.link_id);
    let succeeded =
        !findings.passwords_recovered.is_empty() || !findings.topology_recovered.is_empty();
    let detail = format!(
        "recovered {} password(s) and {} adjacency edge(s) from passive observation",
        findings.passwords_recovered.len(),
        findings.topology_recovered.len()
    );
    let edges: Vec<[String; 2]> = findings
        .topology_recovered
        .iter()
        .map(|(a, b)| [a.to_string(), b.to_string()])
        .collect();
    AttackOutcome {
        technique: spec.technique,
        auth_mode: view.auth_mode.to_string(),
        succeeded,
        evidence: cap(findings.evidence),
        detail,
        data: json!({
            "passwords_recovered": findings.passwords_recovered,
            "topology_recovered": edges,
        }),
    }
}

/// Replay, inject and modify all stand or fall on one question: did any
/// victim *accept* an adversary-originated frame?
fn assess_acceptance_attack(spec: &AttackSpec, view: &RunView<'_>) -> AttackOutcome {
    let deliveries = adversary_deliveries(view);
    let accepted: Vec<usize> = deliveries
        .iter()
        .filter(|(_, r)| r.verdict == "accept")
        .map(|(i, _)| *i)
        .collect();
    let rejected = reject_histogram(&deliveries);
    let succeeded = !accepted.is_empty();
    let detail = if deliveries.is_empty() {
        "no adversary frames reached a victim".to_string()
    } else if succeeded {
        format!(
            "{} of {} adversary frame(s) accepted by a victim",
            accepted.len(),
            deliveries.len()
        )
    } else {
        let reasons: Vec<String> = rejected
            .iter()
            .map(|(verdict, n)| format!("{}x{}", n, verdict))
            .collect();
        format!(
            "all {} adversary frame(s) rejected ({})",
            deliveries.len(),
            reasons.join(", ")
        )
    };
    let evidence = if succeeded {
        cap(accepted.clone())
    } else {
        cap(deliveries.iter().map(|(i, _)| *i).collect())
    };
    AttackOutcome {
        technique: spec.technique,
        auth_mode: view.auth_mode.to_string(),
        succeeded,
        evidence,
        detail,
        data: json!({
            "accepted": accepted.len(),
            "rejected": rejected,
        }),
    }
}

fn assess_mitm(spec: &AttackSpec, view: &RunView<'_>) -> AttackOutcome {
    // Success means a victim's own neighbor table reached Full for the
    // attacker's identity.
    let full_claims: Vec<&TimelineEntry> = view
        .timeline
        .iter()
        .filter(|e| e.neighbor == view.attacker && e.state == "full" && is_victim(view, e.router))
        .collect();
    let believers: BTreeSet<String> = full_claims.iter().map(|e| e.router.to_string()).collect();
    let deliveries = adversary_deliveries(view);
    let accepted: Vec<usize> = deliveries
        .iter()
        .filter(|(_, r)| r.verdict == "accept")
        .map(|(i, _)| *i)
        .collect();
    let rejected = reject_histogram(&deliveries);
    let succeeded = !full_claims.is_empty();
    let detail = if succeeded {
        format!(
            "attacker reached Full in the neighbor table(s) of: {}",
            believers.iter().cloned().collect::<Vec<_>>().join(", ")
        )
    } else {
        format!(
            "attacker never appeared in any victim's neighbor table ({} frame(s) rejected)",
            deliveries.len() - accepted.len()
        )
    };
    let evidence = if succeeded {
        cap(accepted.clone())
    } else {
        cap(deliveries.iter().map(|(i, _)| *i).collect())
    };
    AttackOutcome {
        technique: spec.technique,
        auth_mode: view.auth_mode.to_string(),
        succeeded,
        evidence,
        detail,
        data: json!({
            "victims_believing_attacker": believers,
            "accepted": accepted.len(),
            "rejected": rejected,
        }),
    }
}

fn assess_delete(spec: &AttackSpec, view: &RunView<'_>) -> AttackOutcome {
    let (start_us, stop_us) = spec.window();
    let down = victim_down_events(view, start_us);
    let deleted: Vec<usize> = view
        .capture
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            r.verdict == "sent"
                && r.link_id == view.link_id
                && r.time_us >= start_us
                && r.time_us < stop_us
                && hex::decode(&r.frame_hex)
                    .map(|b| spec.params.predicate.matches(&b))
                    .unwrap_or(false)
        })
        .map(|(i, _)| i)
        .collect();
    let succeeded = !down.is_empty();
    let detail = if succeeded {
        format!(
            "{} frame(s) deleted; victim adjacency declared Down at t={}s",
            deleted.len(),
            down[0].time_us / 1_000_000
        )
    } else {
        format!(
            "{} frame(s) deleted; adjacency survived the deletion window",
            deleted.len()
        )
    };
    AttackOutcome {
        technique: spec.technique,
        auth_mode: view.auth_mode.to_string(),
        succeeded,
        evidence: cap(deleted.clone()),
        detail,
        data: json!({
            "frames_deleted": deleted.len(),
            "down_events": down_events_json(&down),
        }),
    }
}

fn assess_dos(spec: &AttackSpec, view: &RunView<'_>) -> AttackOutcome {
    let (start_us, _) = spec.window();
    let down = victim_down_events(view, start_us);
    let overloaded: Vec<usize> = view
        .capture
        .iter()
        .enumerate()
        .filter(|(_, r)| r.verdict == "reject:overload" && is_victim(view, r.src_router))
        .map(|(i, _)| i)
        .collect();
    let blocked: Vec<usize> = view
        .capture
        .iter()
        .enumerate()
        .filter(|(_, r)| r.verdict == "blocked" && r.src_router == view.attacker)
        .map(|(i, _)| i)
        .collect();
    let emitted = view
        .capture
        .iter()
        .filter(|r| r.verdict == "injected" && r.src_router == view.attacker)
        .count();
    let succeeded = !down.is_empty();
    let detail = if succeeded {
        format!(
            "victim adjacency lost at t={}s; {} legitimate frame(s) drowned by the flood",
            down[0].time_us / 1_000_000,
            overloaded.len()
        )
    } else if !blocked.is_empty() {
        format!(
            "guard blocked {} of {} flood frame(s); adjacency held",
            blocked.len(),
            emitted
        )
    } else {
        "flood stayed under the verification budget; adjacency held".to_string()
    };
    let evidence = if succeeded {
        cap(overloaded.clone())
    } else {
        cap(blocked.clone())
    };
    AttackOutcome {
        technique: spec.technique,
        auth_mode: view.auth_mode.to_string(),
        succeeded,
        evidence,
        detail,
        data: json!({
            "flood_frames_emitted": emitted,
            "legitimate_frames_overloaded": overloaded.len(),
            "flood_frames_blocked": blocked.len(),
            "down_events": down_events_json(&down),
        }),
    }
}
