//! The three OSPFv2 authentication schemes and the receive-side admission
//! rules that go with them.
//!
//! * **Null** — no credential at all; only the packet checksum is verified.
//! * **Simple** — a plaintext password of at most 8 bytes carried verbatim in
//!   the authentication field of every packet. Anyone who can read a link can
//!   read the password.
//! * **Cryptographic** — a keyed-MD5 digest over the packet plus a shared
//!   secret that never travels on the wire, with key chains for rotation and
//!   a cryptographic sequence number that makes recorded packets worthless to
//!   an attacker.
//!
//! Verification order for the cryptographic scheme: key lookup, key validity
//! window (widened by the configured clock-drift tolerance on receive, exact
//! on send), digest comparison, and finally sequence admission, which is
//! per-neighbor-per-key state kept by the caller in a [`SeqState`].

use std::collections::VecDeque;
use std::fmt;

use md5::{Digest, Md5};
use serde::{Deserialize, Serialize};

use crate::wire::{self, Auth, Frame, Packet, AU_TYPE_CRYPTOGRAPHIC, AU_TYPE_NULL, AU_TYPE_SIMPLE};

/// Seconds since the Unix epoch, UTC.
pub type UnixTime = i64;

/// The authentication field holds at most 8 password bytes.
pub const MAX_SIMPLE_PASSWORD_LEN: usize = 8;
/// Secrets are zero-padded to this length before digesting.
pub const MAX_MD5_SECRET_LEN: usize = 16;
/// Number of out-of-order packets within [`DISORDER_WINDOW_US`] that tears a
/// neighbor down for re-initialization.
pub const DISORDER_TEARDOWN_COUNT: usize = 3;
/// Window for counting out-of-order packets, in simulated microseconds.
pub const DISORDER_WINDOW_US: u64 = 10_000_000;
/// Clock drift tolerance applied to key receive windows when a chain does not
/// configure one explicitly.
pub const DEFAULT_MAX_TIME_DRIFT: i64 = 5;

/// One key of a key chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthKey {
    pub key_id: u8,
    /// 1..=16 secret bytes; never serialized onto the wire.
    pub secret: Vec<u8>,
    /// First second (inclusive) at which the key may be used for sending.
    pub valid_from: UnixTime,
    /// First second at which the key may no longer be used for sending.
    pub valid_until: UnixTime,
}

impl AuthKey {
    /// Send eligibility: `valid_from <= now < valid_until`, no tolerance.
    pub fn send_window_contains(&self, now: UnixTime) -> bool {
        self.valid_from <= now && now < self.valid_until
    }

    /// Receive eligibility: the send window widened by `drift` seconds on
    /// both ends, inclusive, so that peers with slightly wrong clocks are
    /// still understood across a key rollover.
    pub fn receive_window_contains(&self, now: UnixTime, drift: i64) -> bool {
        self.valid_from - drift <= now && now <= self.valid_until + drift
    }
}

/// An ordered set of keys plus the drift tolerance used on receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyChain {
    keys: Vec<AuthKey>,
    pub max_time_drift: i64,
}

impl KeyChain {
    /// Build a chain, enforcing unique key ids, non-empty secrets of at most
    /// 16 bytes, and well-formed validity windows.
    pub fn new(keys: Vec<AuthKey>, max_time_drift: i64) -> Result<KeyChain, KeyChainError> {
        if keys.is_empty() {
            return Err(KeyChainError::NoKeys);
        }
        for (i, key) in keys.iter().enumerate() {
            if key.secret.is_empty() {
                return Err(KeyChainError::EmptySecret { key_id: key.key_id });
            }
            if key.secret.len() > MAX_MD5_SECRET_LEN {
                return Err(KeyChainError::SecretTooLong {
                    key_id: key.key_id,
                    len: key.secret.len(),
                });
            }
            if key.valid_from >= key.valid_until {
                return Err(KeyChainError::EmptyWindow { key_id: key.key_id });
            }
            if keys[..i].iter().any(|k| k.key_id == key.key_id) {
                return Err(KeyChainError::DuplicateKeyId(key.key_id));
            }
        }
        Ok(KeyChain {
            keys,
            max_time_drift,
        })
    }

    /// Parse the key chain JSON file format.
    pub fn from_json(text: &str) -> Result<KeyChain, KeyChainError> {
        let spec: KeyChainSpec =
            serde_json::from_str(text).map_err(|e| KeyChainError::Json(e.to_string()))?;
        KeyChain::try_from(spec)
    }

    pub fn key(&self, key_id: u8) -> Option<&AuthKey> {
        self.keys.iter().find(|k| k.key_id == key_id)
    }

    pub fn keys(&self) -> &[AuthKey] {
        &self.keys
    }

    /// Pick the key for outgoing packets: among keys whose send window
    /// contains `now`, the one that became valid most recently, with the
    /// highest key id breaking ties.
    pub fn select_send_key(&self, now: UnixTime) -> Result<&AuthKey, NoValidKey> {
        self.keys
            .iter()
            .filter(|k| k.send_window_contains(now))
            .max_by_key(|k| (k.valid_from, k.key_id))
            .ok_or(NoValidKey { at: now })
    }
}

/// Serde shape of the key chain JSON file: ISO-8601 UTC timestamps, secrets
/// as UTF-8 strings, drift in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyChainSpec {
    pub keys: Vec<KeySpec>,
    #[serde(default = "default_drift")]
    pub max_time_drift: i64,
}

/// One key entry of [`KeyChainSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeySpec {
    pub key_id: u8,
    pub secret: String,
    pub valid_from: String,
    pub valid_until: String,
}

fn default_drift() -> i64 {
    DEFAULT_MAX_TIME_DRIFT
}

/// Parse an ISO-8601 UTC timestamp ("2010-02-20T10:00:00Z") to epoch seconds.
pub fn parse_timestamp(text: &str) -> Result<UnixTime, ()> {
    chrono::DateTime::parse_from_rfc3339(text)
        .map(|t| t.timestamp())
        .map_err(|_| ())
}

impl TryFrom<KeyChainSpec> for KeyChain {
    type Error = KeyChainError;

    fn try_from(spec: KeyChainSpec) -> Result<KeyChain, KeyChainError> {
        let mut keys = Vec::with_capacity(spec.keys.len());
        for entry in spec.keys {
            let ts = |text: &str| {
                parse_timestamp(text).map_err(|_| KeyChainError::BadTimestamp {
                    key_id: entry.key_id,
                    value: text.to_string(),
                })
            };
            keys.push(AuthKey {
                key_id: entry.key_id,
                secret: entry.secret.into_bytes(),
                valid_from: ts(&entry.valid_from)?,
                valid_until: ts(&entry.valid_until)?,
            });
        }
        KeyChain::new(keys, spec.max_time_drift)
    }
}

/// Per-router authentication configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuthConfig {
    /// `au_type` 0: no authentication.
    None,
    /// `au_type` 1: the padded password every packet must carry.
    Simple([u8; 8]),
    /// `au_type` 2: keyed digests from a key chain.
    Cryptographic(KeyChain),
}

impl AuthConfig {
    pub fn au_type(&self) -> u16 {
        match self {
            AuthConfig::None => AU_TYPE_NULL,
            AuthConfig::Simple(_) => AU_TYPE_SIMPLE,
            AuthConfig::Cryptographic(_) => AU_TYPE_CRYPTOGRAPHIC,
        }
    }

    /// Stable label used in reports and the attack matrix.
    pub fn mode_label(&self) -> &'static str {
        match self {
            AuthConfig::None => "null",
            AuthConfig::Simple(_) => "simple",
            AuthConfig::Cryptographic(_) => "cryptographic",
        }
    }
}

/// Normalize a configured password to the 8 bytes the wire field can hold:
/// shorter passwords are zero-padded, longer ones are truncated with a
/// warning the caller is expected to surface.
pub fn simple_password(bytes: &[u8]) -> Result<([u8; 8], Option<AuthWarning>), PasswordError> {
    if bytes.is_empty() {
        return Err(PasswordError::Empty);
    }
    let mut padded = [0u8; 8];
    if bytes.len() > MAX_SIMPLE_PASSWORD_LEN {
        padded.copy_from_slice(&bytes[..MAX_SIMPLE_PASSWORD_LEN]);
        Ok((
            padded,
            Some(AuthWarning::PasswordTruncated {
                original_len: bytes.len(),
                kept: padded,
            }),
        ))
    } else {
        padded[..bytes.len()].copy_from_slice(bytes);
        Ok((padded, None))
    }
}

/// Stamp a packet with Simple authentication. The checksum is recomputed on
/// encode and covers everything except the password field itself.
pub fn sign_simple(mut packet: Packet, password: &[u8; 8]) -> Packet {
    packet.auth = Auth::Simple(*password);
    packet
}

/// Zero-pad a secret to the 16 bytes the digest procedure consumes.
pub fn padded_secret(secret: &[u8]) -> [u8; MAX_MD5_SECRET_LEN] {
    let mut out = [0u8; MAX_MD5_SECRET_LEN];
    out[..secret.len()].copy_from_slice(secret);
    out
}

/// The keyed digest itself: MD5 over the encoded packet bytes followed by the
/// zero-padded secret. The secret is input to the hash, never output.
pub fn keyed_digest(packet_bytes: &[u8], secret: &[u8]) -> [u8; 16] {
    let mut hasher = Md5::new();
    hasher.update(packet_bytes);
    hasher.update(padded_secret(secret));
    hasher.finalize().into()
}

/// Produce a cryptographically authenticated frame: the authentication field
/// carries `(key id, digest length 16, sequence)`, the checksum field is
/// transmitted as zero, and the digest over packet-plus-secret trails the
/// packet.
pub fn sign_md5(
    packet: &Packet,
    key: &AuthKey,
    sequence: u32,
) -> Result<Frame, wire::EncodeError> {
    let mut signed = packet.clone();
    signed.auth = Auth::Cryptographic {
        key_id: key.key_id,
        sequence,
        digest: [0u8; 16],
    };
    let mut frame = wire::encode(&signed)?;
    frame.digest = Some(keyed_digest(&frame.packet_bytes, &key.secret));
    Ok(frame)
}

/// Outcome of verifying one received frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

/// Why a frame was refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// The packet's `au_type` is not the receiver's configured scheme.
    AuthTypeMismatch { expected: u16, got: u16 },
    /// One's-complement checksum identity failed (Null/Simple only).
    BadChecksum,
    /// Password bytes differ from the configured password.
    PasswordMismatch,
    /// No key with this id in the receiver's chain.
    UnknownKeyId(u8),
    /// Key exists but `now` is outside its drift-widened receive window.
    KeyExpired { key_id: u8 },
    /// Recomputed digest differs from the received trailer.
    DigestMismatch { key_id: u8 },
    /// Sequence number equal to the last accepted one: a recording played
    /// back verbatim.
    Replay { key_id: u8, sequence: u32 },
    /// Sequence number below the last accepted one.
    Disorder { key_id: u8, sequence: u32 },
}

impl RejectReason {
    /// Stable kebab-case label used in capture files.
    pub fn label(&self) -> &'static str {
        match self {
            RejectReason::AuthTypeMismatch { .. } => "auth-type-mismatch",
            RejectReason::BadChecksum => "bad-checksum",
            RejectReason::PasswordMismatch => "password-mismatch",
            RejectReason::UnknownKeyId(_) => "unknown-key-id",
            RejectReason::KeyExpired { .. } => "key-expired",
            RejectReason::DigestMismatch { .. } => "digest-mismatch",
            RejectReason::Replay { .. } => "replay",
            RejectReason::Disorder { .. } => "disorder",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Verify a Null-authenticated frame: type match plus checksum identity.
pub fn verify_null(frame: &Frame, packet: &Packet) -> Verdict {
    if packet.auth.au_type() != AU_TYPE_NULL {
        return Verdict::Reject(RejectReason::AuthTypeMismatch {
            expected: AU_TYPE_NULL,
            got: packet.auth.au_type(),
        });
    }
    if !wire::verify_checksum(&frame.packet_bytes) {
        return Verdict::Reject(RejectReason::BadChecksum);
    }
    Verdict::Accept
}

/// Verify a Simple-authenticated frame: type match, checksum identity, then
/// byte equality of the padded passwords.
pub fn verify_simple(frame: &Frame, packet: &Packet, expected: &[u8; 8]) -> Verdict {
    match &packet.auth {
        Auth::Simple(pw) => {
            if !wire::verify_checksum(&frame.packet_bytes) {
                Verdict::Reject(RejectReason::BadChecksum)
            } else if pw != expected {
                Verdict::Reject(RejectReason::PasswordMismatch)
            } else {
                Verdict::Accept
            }
        }
        other => Verdict::Reject(RejectReason::AuthTypeMismatch {
            expected: AU_TYPE_SIMPLE,
            got: other.au_type(),
        }),
    }
}

/// Verify a cryptographically authenticated frame against a key chain at the
/// receiver's local time: key lookup, receive window, digest comparison.
/// Sequence admission is separate ([`SeqState::check`]) because it needs
/// per-neighbor state.
pub fn verify_md5(frame: &Frame, packet: &Packet, chain: &KeyChain, now: UnixTime) -> Verdict {
    let key_id = match &packet.auth {
        Auth::Cryptographic { key_id, .. } => *key_id,
        other => {
            return Verdict::Reject(RejectReason::AuthTypeMismatch {
                expected: AU_TYPE_CRYPTOGRAPHIC,
                got: other.au_type(),
            })
        }
    };
    let key = match chain.key(key_id) {
        Some(k) => k,
        None => return Verdict::Reject(RejectReason::UnknownKeyId(key_id)),
    };
    if !key.receive_window_contains(now, chain.max_time_drift) {
        return Verdict::Reject(RejectReason::KeyExpired { key_id });
    }
    let expected = keyed_digest(&frame.packet_bytes, &key.secret);
    if frame.digest != Some(expected) {
        return Verdict::Reject(RejectReason::DigestMismatch { key_id });
    }
    Verdict::Accept
}

/// Dispatch to the verifier matching the receiver's configuration.
pub fn verify_frame(frame: &Frame, packet: &Packet, config: &AuthConfig, now: UnixTime) -> Verdict {
    match config {
        AuthConfig::None => verify_null(frame, packet),
        AuthConfig::Simple(pw) => verify_simple(frame, packet, pw),
        AuthConfig::Cryptographic(chain) => verify_md5(frame, packet, chain, now),
    }
}

/// Sequence admission outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqVerdict {
    Accept,
    Replay,
    Disorder,
}

/// Receive-side sequence state for one `(neighbor, key id)` pair.
///
/// Only strictly increasing sequence numbers are accepted: an equal number is
/// a replay, a smaller one is disorder. Repeated disorder within
/// [`DISORDER_WINDOW_US`] marks the state for neighbor re-initialization.
#[derive(Debug, Clone, Default)]
pub struct SeqState {
    last_accepted: Option<u32>,
    disorder_times: VecDeque<u64>,
}

impl SeqState {
    pub fn new() -> SeqState {
        SeqState::default()
    }

    /// The highest sequence number accepted so far, if any.
    pub fn last_accepted(&self) -> Option<u32> {
        self.last_accepted
    }

    /// Admit or refuse a sequence number at monotonic time `now_us`.
    pub fn check(&mut self, sequence: u32, now_us: u64) -> SeqVerdict {
        match self.last_accepted {
            Some(last) if sequence == last => SeqVerdict::Replay,
            Some(last) if sequence < last => {
                self.disorder_times.push_back(now_us);
                while let Some(&front) = self.disorder_times.front() {
                    if now_us.saturating_sub(front) > DISORDER_WINDOW_US {
                        self.disorder_times.pop_front();
                    } else {
                        break;
                    }
                }
                SeqVerdict::Disorder
            }
            _ => {
                self.last_accepted = Some(sequence);
                SeqVerdict::Accept
            }
        }
    }

    /// True once [`DISORDER_TEARDOWN_COUNT`] disorders landed within the
    /// window; the caller is expected to tear the neighbor down and
    /// [`SeqState::reset`] (or drop) this state.
    pub fn disorder_breach(&self) -> bool {
        self.disorder_times.len() >= DISORDER_TEARDOWN_COUNT
    }

    pub fn reset(&mut self) {
        self.last_accepted = None;
        self.disorder_times.clear();
    }
}

/// Warnings produced while loading authentication configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuthWarning {
    /// A configured password was longer than the field; only `kept` is used.
    PasswordTruncated { original_len: usize, kept: [u8; 8] },
}

impl fmt::Display for AuthWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuthWarning::PasswordTruncated { original_len, kept } => write!(
                f,
                "simple password is {} bytes but the authentication field holds 8; \
                 truncated to \"{}\"",
                original_len,
                String::from_utf8_lossy(kept)
            ),
        }
    }
}

/// Errors from password normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PasswordError {
    Empty,
}

impl fmt::Display for PasswordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PasswordError::Empty => f.write_str("simple password must not be empty"),
        }
    }
}

impl std::error::Error for PasswordError {}

/// Errors from building or parsing a key chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyChainError {
    Json(String),
    NoKeys,
    DuplicateKeyId(u8),
    EmptySecret { key_id: u8 },
    SecretTooLong { key_id: u8, len: usize },
    EmptyWindow { key_id: u8 },
    BadTimestamp { key_id: u8, value: String },
}

impl fmt::Display for KeyChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyChainError::Json(e) => write!(f, "key chain JSON: {}", e),
            KeyChainError::NoKeys => f.write_str("key chain has no keys"),
            KeyChainError::DuplicateKeyId(id) => write!(f, "duplicate key id {}", id),
            KeyChainError::EmptySecret { key_id } => write!(f, "key {} has an empty secret", key_id),
            KeyChainError::SecretTooLong { key_id, len } => write!(
                f,
                "key {} secret is {} bytes (at most {} are usable)",
                key_id, len, MAX_MD5_SECRET_LEN
            ),
            KeyChainError::EmptyWindow { key_id } => {
                write!(f, "key {} validity window is empty or inverted", key_id)
            }
            KeyChainError::BadTimestamp { key_id, value } => {
                write!(f, "key {}: unparseable ISO-8601 timestamp {:?}", key_id, value)
            }
        }
    }
}

impl std::error::Error for KeyChainError {}

/// No key in the chain is currently eligible for sending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoValidKey {
    pub at: UnixTime,
}

impl fmt::Display for NoValidKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no key is valid for sending at t={}", self.at)
    }
}

impl std::error::Error for NoValidKey {}
