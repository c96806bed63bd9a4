//! Deterministic simulator for OSPFv2 packet authentication.
//!
//! OSPFv2 (RFC 2328, appendix D) ships three authentication schemes: none,
//! a cleartext password, and a keyed-MD5 digest with per-sender sequence
//! numbers. This crate models routers exchanging Hello and Link State
//! Update packets over point-to-point links, an adversary wired into a link
//! as a programmable tap, and an optional rate-based flood guard — all
//! driven by a single seeded event queue, so every run is reproducible
//! byte for byte.
//!
//! The modules layer bottom-up:
//!
//! - [`wire`] — packet encode/decode and the RFC 1071 checksum;
//! - [`auth`] — the three schemes, key chains, and sequence admission;
//! - [`neighbor`] — a collapsed Hello adjacency state machine;
//! - [`guard`] — source-pinning flood containment in front of verification;
//! - [`sim`] — the event-driven world: routers, links, taps, capture;
//! - [`adversary`] — seven wire-level attack techniques and their assessment;
//! - [`report`] — the per-mode × per-technique outcome matrix;
//! - [`runner`] — scenario files, matrix expansion, offline re-verification.
//!
//! The `examples/` directory walks each layer; `ospfsim run scenario.json`
//! executes a scenario file end to end.

pub mod adversary;
pub mod auth;
pub mod guard;
pub mod neighbor;
pub mod report;
pub mod runner;
pub mod sim;
pub mod wire;
