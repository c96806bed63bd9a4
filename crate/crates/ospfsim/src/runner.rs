//! Scenario files, matrix expansion, execution, and offline capture
//! verification.
//!
//! A scenario is one JSON document describing topology, authentication, an
//! optional adversary, and an optional *matrix* block. The matrix block
//! replays the same topology once per (auth mode × attack) combination —
//! plus guard-enabled contrast runs — each as an isolated world with the
//! same seed, so the resulting outcome matrix compares defenses and nothing
//! else. Captures from all runs are concatenated (evidence indices are
//! global) and every run is listed in the report with its capture slice.
//!
//! [`verify_capture`] re-applies authentication to a finished capture: each
//! delivered frame is checked again from nothing but its bytes, a key chain,
//! and the receive timestamp. Cleartext passwords are not re-checked (a
//! capture plus key chain does not say which password each router expected);
//! checksums and the full cryptographic path — key lookup, validity window,
//! digest, sequence admission — are.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adversary::{assess, AttackSpec, RunView, Technique};
use crate::auth::{
    self, simple_password, AuthConfig, KeyChain, KeyChainSpec, SeqState, SeqVerdict, UnixTime,
    Verdict,
};
use crate::guard::GuardConfig;
use crate::neighbor::{Network, RouterConfig};
use crate::report::{RunSlice, RunTimelineEntry, ScenarioReport};
use crate::sim::{
    CaptureRecord, Link, SimWorld, WorldConfig, DEFAULT_LINK_LATENCY_US, DEFAULT_VERIFY_BUDGET_PPS,
};
use crate::wire::{self, Auth, Frame, RouterId};

/// Errors from loading, validating, running, or verifying.
#[derive(Debug)]
pub enum RunnerError {
    /// File could not be read or written.
    Io {
        path: String,
        source: std::io::Error,
    },
    /// The file exists but does not match the schema; `detail` carries
    /// serde's field/line/column message.
    Schema { context: String, detail: String },
    /// Structurally valid but semantically impossible.
    Invalid(String),
}

impl RunnerError {
    /// Stable CLI contract: 2 for configuration problems, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Io { .. } => 3,
            RunnerError::Schema { .. } | RunnerError::Invalid(_) => 2,
        }
    }
}

impl fmt::Display for RunnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunnerError::Io { path, source } => write!(f, "{}: {}", path, source),
            RunnerError::Schema { context, detail } => write!(f, "{}: {}", context, detail),
            RunnerError::Invalid(msg) => write!(f, "invalid scenario: {}", msg),
        }
    }
}

impl std::error::Error for RunnerError {}

// ---------------------------------------------------------------- schema --

/// Authentication as written in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AuthSpec {
    Null,
    Simple(SimpleAuthSpec),
    Cryptographic(KeyChainSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleAuthSpec {
    pub password: String,
}

impl AuthSpec {
    /// Build the runtime configuration, collecting any password-truncation
    /// warning into `warnings`.
    pub fn to_auth_config(&self, warnings: &mut BTreeSet<String>) -> Result<AuthConfig, RunnerError> {
        match self {
            AuthSpec::Null => Ok(AuthConfig::None),
            AuthSpec::Simple(spec) => {
                let (password, warning) = simple_password(spec.password.as_bytes())
                    .map_err(|e| RunnerError::Invalid(format!("simple password: {}", e)))?;
                if let Some(w) = warning {
                    warnings.insert(w.to_string());
                }
                Ok(AuthConfig::Simple(password))
            }
            AuthSpec::Cryptographic(spec) => {
                let chain = KeyChain::try_from(spec.clone())
                    .map_err(|e| RunnerError::Invalid(format!("key chain: {}", e)))?;
                Ok(AuthConfig::Cryptographic(chain))
            }
        }
    }
}

fn default_hello_interval() -> u32 {
    crate::neighbor::DEFAULT_HELLO_INTERVAL_S
}

fn default_dead_interval() -> u32 {
    crate::neighbor::DEFAULT_DEAD_INTERVAL_S
}

fn default_lsu_interval() -> u32 {
    crate::neighbor::DEFAULT_LSU_INTERVAL_S
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouterSpec {
    pub id: RouterId,
    #[serde(default)]
    pub area: u32,
    pub auth: AuthSpec,
    #[serde(default)]
    pub skew_s: i64,
    /// Networks this router advertises, as "address/prefix" strings.
    #[serde(default)]
    pub networks: Vec<String>,
    #[serde(default = "default_hello_interval")]
    pub hello_interval_s: u32,
    #[serde(default = "default_dead_interval")]
    pub dead_interval_s: u32,
    #[serde(default = "default_lsu_interval")]
    pub lsu_interval_s: u32,
}

fn default_latency() -> u64 {
    DEFAULT_LINK_LATENCY_US
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub a: RouterId,
    pub b: RouterId,
    #[serde(default = "default_latency")]
    pub latency_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AdversaryBlock {
    #[serde(default)]
    pub attacks: Vec<AttackSpec>,
}

/// One column of the matrix: a label and the auth configuration every router
/// uses in that column's runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuthModeSpec {
    pub label: String,
    pub auth: AuthSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub auth_modes: Vec<AuthModeSpec>,
    pub attacks: Vec<AttackSpec>,
    /// Techniques re-run with the guard enabled, once per auth mode, labeled
    /// "<mode>+guard".
    #[serde(default)]
    pub guard_runs: Vec<Technique>,
}

fn default_budget() -> u32 {
    DEFAULT_VERIFY_BUDGET_PPS
}

/// A scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub duration_s: u64,
    /// Wall-clock anchor for simulation time zero (ISO-8601, UTC). Key
    /// validity windows are judged against this clock. Default: epoch.
    #[serde(default)]
    pub start_time: Option<String>,
    #[serde(default = "default_budget")]
    pub verify_budget_pps: u32,
    #[serde(default)]
    pub guard: GuardConfig,
    pub routers: Vec<RouterSpec>,
    #[serde(default)]
    pub links: Vec<LinkSpec>,
    #[serde(default)]
    pub adversary: Option<AdversaryBlock>,
    #[serde(default)]
    pub matrix: Option<MatrixSpec>,
}

/// Read and parse a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, RunnerError> {
    let text = fs::read_to_string(path).map_err(|source| RunnerError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| RunnerError::Schema {
        context: path.display().to_string(),
        detail: e.to_string(),
    })
}

// ------------------------------------------------------------- execution --

/// Everything a scenario run produces.
pub struct RunArtifacts {
    pub report: ScenarioReport,
    pub capture: Vec<CaptureRecord>,
}

/// One world to build and run.
struct PlannedRun {
    label: String,
    auth: Vec<AuthConfig>,
    attacks: Vec<AttackSpec>,
    guard: GuardConfig,
}

fn parse_networks(spec: &RouterSpec) -> Result<Vec<Network>, RunnerError> {
    spec.networks
        .iter()
        .map(|s| {
            s.parse().map_err(|e: String| {
                RunnerError::Invalid(format!("router {}: {}", spec.id, e))
            })
        })
        .collect()
}

fn resolve_start_epoch(scenario: &Scenario) -> Result<UnixTime, RunnerError> {
    match &scenario.start_time {
        None => Ok(0),
        Some(text) => auth::parse_timestamp(text).map_err(|_| {
            RunnerError::Invalid(format!("start_time {:?} is not an ISO-8601 UTC timestamp", text))
        }),
    }
}

fn validate_attack(scenario: &Scenario, attack: &AttackSpec) -> Result<(), RunnerError> {
    if attack.link >= scenario.links.len() {
        return Err(RunnerError::Invalid(format!(
            "attack {} targets link {} but the scenario has {} link(s)",
            attack.technique,
            attack.link,
            scenario.links.len()
        )));
    }
    if attack.start_s > scenario.duration_s {
        return Err(RunnerError::Invalid(format!(
            "attack {} starts at {} s, after the scenario ends ({} s)",
            attack.technique, attack.start_s, scenario.duration_s
        )));
    }
    Ok(())
}

fn plan_runs(
    scenario: &Scenario,
    warnings: &mut BTreeSet<String>,
) -> Result<Vec<PlannedRun>, RunnerError> {
    if let Some(matrix) = &scenario.matrix {
        if scenario.adversary.is_some() {
            return Err(RunnerError::Invalid(
                "declare either an adversary block or a matrix block, not both".to_string(),
            ));
        }
        if matrix.auth_modes.is_empty() {
            return Err(RunnerError::Invalid(
                "matrix.auth_modes must not be empty".to_string(),
            ));
        }
        let mut labels = BTreeSet::new();
        for mode in &matrix.auth_modes {
            if !labels.insert(&mode.label) {
                return Err(RunnerError::Invalid(format!(
                    "matrix auth mode label {:?} appears twice",
                    mode.label
                )));
            }
        }
        for technique in &matrix.guard_runs {
            if !matrix.attacks.iter().any(|a| a.technique == *technique) {
                return Err(RunnerError::Invalid(format!(
                    "guard_runs names {} but no such attack is declared",
                    technique
                )));
            }
        }
        for attack in &matrix.attacks {
            validate_attack(scenario, attack)?;
        }
        let mut runs = Vec::new();
        for mode in &matrix.auth_modes {
            let auth = mode.auth.to_auth_config(warnings)?;
            for attack in &matrix.attacks {
                runs.push(PlannedRun {
                    label: mode.label.clone(),
                    auth: vec![auth.clone(); scenario.routers.len()],
                    attacks: vec![attack.clone()],
                    guard: scenario.guard,
                });
            }
        }
        for mode in &matrix.auth_modes {
            let auth = mode.auth.to_auth_config(warnings)?;
            for attack in &matrix.attacks {
                if matrix.guard_runs.contains(&attack.technique) {
                    runs.push(PlannedRun {
                        label: format!("{}+guard", mode.label),
                        auth: vec![auth.clone(); scenario.routers.len()],
                        attacks: vec![attack.clone()],
                        guard: GuardConfig {
                            enabled: true,
                            ..scenario.guard
                        },
                    });
                }
            }
        }
        Ok(runs)
    } else {
        let attacks = scenario
            .adversary
            .as_ref()
            .map(|a| a.attacks.clone())
            .unwrap_or_default();
        let mut tapped_links = BTreeSet::new();
        for attack in &attacks {
            validate_attack(scenario, attack)?;
            if !tapped_links.insert(attack.link) {
                return Err(RunnerError::Invalid(format!(
                    "two attacks share link {}; a link carries at most one interposer",
                    attack.link
                )));
            }
        }
        let auth: Vec<AuthConfig> = scenario
            .routers
            .iter()
            .map(|r| r.auth.to_auth_config(warnings))
            .collect::<Result<_, _>>()?;
        let labels: BTreeSet<&str> = auth.iter().map(|a| a.mode_label()).collect();
        let label = if labels.len() == 1 {
            labels.iter().next().unwrap().to_string()
        } else {
            "mixed".to_string()
        };
        Ok(vec![PlannedRun {
            label,
            auth,
            attacks,
            guard: scenario.guard,
        }])
    }
}

/// Execute a parsed scenario. `seed_override` replaces the file's seed.
pub fn run_scenario(
    scenario: &Scenario,
    seed_override: Option<u64>,
) -> Result<RunArtifacts, RunnerError> {
    let seed = seed_override.unwrap_or(scenario.seed);
    let start_epoch = resolve_start_epoch(scenario)?;
    let networks: Vec<Vec<Network>> = scenario
        .routers
        .iter()
        .map(parse_networks)
        .collect::<Result<_, _>>()?;
    let links: Vec<Link> = scenario
        .links
        .iter()
        .map(|l| Link {
            a: l.a,
            b: l.b,
            latency_us: l.latency_us,
        })
        .collect();

    let mut warnings = BTreeSet::new();
    let runs = plan_runs(scenario, &mut warnings)?;

    let mut capture = Vec::new();
    let mut outcomes = Vec::new();
    let mut timeline = Vec::new();
    let mut slices = Vec::new();

    for run in &runs {
        let router_configs: Vec<RouterConfig> = scenario
            .routers
            .iter()
            .zip(&run.auth)
            .zip(&networks)
            .map(|((spec, auth), networks)| RouterConfig {
                router_id: spec.id,
                area_id: spec.area,
                auth: auth.clone(),
                networks: networks.clone(),
                hello_interval_s: spec.hello_interval_s,
                dead_interval_s: spec.dead_interval_s,
                lsu_interval_s: spec.lsu_interval_s,
                skew_s: spec.skew_s,
            })
            .collect();
        let mut config = WorldConfig::new(router_configs, links.clone(), scenario.duration_s);
        config.guard = run.guard;
        config.verify_budget_pps = scenario.verify_budget_pps;
        config.start_epoch = start_epoch;
        config.seed = seed;
        let mut world =
            SimWorld::new(config).map_err(|e| RunnerError::Invalid(e.to_string()))?;
        for attack in &run.attacks {
            let link = links[attack.link];
            world.attach_interposer(attack.link, attack.build_tap((link.a, link.b)));
            for time_us in attack.action_times() {
                world.schedule_adversary_action(time_us, attack.link);
            }
        }
        world.run();

        let offset = capture.len();
        for attack in &run.attacks {
            let link = links[attack.link];
            let mut outcome = assess(
                attack,
                &RunView {
                    capture: &world.capture,
                    timeline: &world.timeline,
                    auth_mode: &run.label,
                    attacker: attack.attacker_id,
                    victims: (link.a, link.b),
                    link_id: attack.link,
                },
            );
            for index in &mut outcome.evidence {
                *index += offset;
            }
            outcomes.push(outcome);
        }
        for entry in &world.timeline {
            timeline.push(RunTimelineEntry::new(&run.label, entry));
        }
        slices.push(RunSlice {
            run: run.label.clone(),
            technique: run.attacks.first().map(|a| a.technique),
            capture_start: offset,
            capture_len: world.capture.len(),
        });
        capture.extend(world.capture);
    }

    let report = ScenarioReport {
        seed,
        duration_s: scenario.duration_s,
        capture_path: None,
        warnings: warnings.into_iter().collect(),
        runs: slices,
        outcomes,
        adjacency_timeline: timeline,
    };
    Ok(RunArtifacts { report, capture })
}

/// Load and execute a scenario file.
pub fn run_scenario_file(
    path: &Path,
    seed_override: Option<u64>,
) -> Result<RunArtifacts, RunnerError> {
    let scenario = load_scenario(path)?;
    run_scenario(&scenario, seed_override)
}

// ----------------------------------------------------------- capture I/O --

/// Render a capture as JSON Lines: one record per line, stable field order.
pub fn capture_to_jsonl(capture: &[CaptureRecord]) -> String {
    let mut out = String::new();
    for record in capture {
        out.push_str(&serde_json::to_string(record).expect("capture record serializes"));
        out.push('\n');
    }
    out
}

/// Parse a JSON Lines capture.
pub fn parse_capture(text: &str) -> Result<Vec<CaptureRecord>, RunnerError> {
    let mut records = Vec::new();
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| RunnerError::Schema {
            context: format!("capture line {}", number + 1),
            detail: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

// ------------------------------------------------------------ re-verify --

/// Counts from re-authenticating a capture offline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub frames_checked: usize,
    pub accepted: usize,
    pub rejected: BTreeMap<String, usize>,
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frames checked: {}", self.frames_checked)?;
        writeln!(f, "accepted:       {}", self.accepted)?;
        if self.rejected.is_empty() {
            write!(f, "rejected:       none")?;
        } else {
            write!(f, "rejected:")?;
            for (reason, count) in &self.rejected {
                write!(f, "\n  {:<20} {}", reason, count)?;
            }
        }
        Ok(())
    }
}

/// Re-apply authentication to every *delivered* frame of a capture.
///
/// Delivered means the record's verdict is `accept` or `reject:...` — each
/// such frame reached some router's receive path once, so it is re-checked
/// exactly once here. `sent`/`injected` records are transmissions of those
/// same bytes and `blocked` frames never reached verification; re-checking
/// them would double-count every frame and misreport replays.
pub fn verify_capture(
    capture: &[CaptureRecord],
    chain: &KeyChain,
    start_epoch: UnixTime,
) -> VerifySummary {
    let mut summary = VerifySummary {
        frames_checked: 0,
        accepted: 0,
        rejected: BTreeMap::new(),
    };
    let reject = |summary: &mut VerifySummary, label: &str| {
        *summary.rejected.entry(label.to_string()).or_insert(0) += 1;
    };
    // Sequence admission replayed per (claimed sender, key id), in capture
    // order — the same discipline receivers applied live.
    let mut sequences: BTreeMap<(RouterId, u8), SeqState> = BTreeMap::new();
    for record in capture {
        if record.verdict != "accept" && !record.verdict.starts_with("reject:") {
            continue;
        }
        summary.frames_checked += 1;
        let bytes = match hex::decode(&record.frame_hex) {
            Ok(b) => b,
            Err(_) => {
                reject(&mut summary, "malformed");
                continue;
            }
        };
        let frame = match Frame::from_wire(&bytes) {
            Ok(f) => f,
            Err(_) => {
                reject(&mut summary, "malformed");
                continue;
            }
        };
        let packet = match frame.decode() {
            Ok(p) => p,
            Err(_) => {
                reject(&mut summary, "malformed");
                continue;
            }
        };
        match packet.auth {
            Auth::Null | Auth::Simple(_) => {
                if wire::verify_checksum(&frame.packet_bytes) {
                    summary.accepted += 1;
                } else {
                    reject(&mut summary, "bad-checksum");
                }
            }
            Auth::Cryptographic {
                key_id, sequence, ..
            } => {
                let now = start_epoch + (record.time_us / 1_000_000) as UnixTime;
                match auth::verify_md5(&frame, &packet, chain, now) {
                    Verdict::Reject(reason) => reject(&mut summary, reason.label()),
                    Verdict::Accept => {
                        let state = sequences.entry((packet.router_id, key_id)).or_default();
                        match state.check(sequence, record.time_us) {
                            SeqVerdict::Accept => summary.accepted += 1,
                            SeqVerdict::Replay => reject(&mut summary, "replay"),
                            SeqVerdict::Disorder => reject(&mut summary, "disorder"),
                        }
                    }
                }
            }
        }
    }
    summary
}

/// File-level wrapper for the CLI `verify` subcommand.
pub fn verify_capture_file(
    capture_path: &Path,
    keys_path: &Path,
    start_time: Option<&str>,
) -> Result<VerifySummary, RunnerError> {
    let capture_text = fs::read_to_string(capture_path).map_err(|source| RunnerError::Io {
        path: capture_path.display().to_string(),
        source,
    })?;
    let capture = parse_capture(&capture_text)?;
    let keys_text = fs::read_to_string(keys_path).map_err(|source| RunnerError::Io {
        path: keys_path.display().to_string(),
        source,
    })?;
    let chain = KeyChain::from_json(&keys_text).map_err(|e| RunnerError::Schema {
        context: keys_path.display().to_string(),
        detail: e.to_string(),
    })?;
    let start_epoch = match start_time {
        None => 0,
        Some(text) => auth::parse_timestamp(text).map_err(|_| {
            RunnerError::Invalid(format!("start time {:?} is not an ISO-8601 UTC timestamp", text))
        })?,
    };
    Ok(verify_capture(&capture, &chain, start_epoch))
}
