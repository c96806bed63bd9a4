//! Rate-based intrusion detection and prevention for the receive path.
//!
//! The guard counts OSPF frames per source over a short sliding window and,
//! when a source exceeds the configured packets-per-second threshold, installs
//! a temporary block rule against it. It sits *in front of* authentication:
//! blocked frames are discarded before any digest is computed, which is what
//! protects the verification budget of the router during a flood.
//!
//! Source identity is the simulator's link-level origin id (who put the frame
//! on the wire), not whatever router id the frame claims in its header, so a
//! flood cannot get a legitimate neighbor blocked by forging headers.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::wire::RouterId;

/// Guard configuration as it appears in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GuardConfig {
    pub enabled: bool,
    /// A source exceeding this many frames per window raises an alarm
    /// (strictly greater; exactly the threshold is still quiet).
    pub threshold_pps: u32,
    /// Sliding window length in seconds.
    pub window_s: u32,
    /// How long an installed block rule lives, in seconds. Zero means the
    /// rule never expires.
    pub rule_lifetime_s: u64,
}

impl Default for GuardConfig {
    fn default() -> GuardConfig {
        GuardConfig {
            enabled: false,
            threshold_pps: 200,
            window_s: 1,
            rule_lifetime_s: 60,
        }
    }
}

/// An installed block against one source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRule {
    pub source: RouterId,
    pub installed_at_us: u64,
    /// Absent for permanent rules (`rule_lifetime_s = 0`).
    pub expires_at_us: Option<u64>,
}

/// Result of counting one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Quiet,
    /// The source crossed the threshold; a block rule was installed.
    Alarm,
}

/// Per-router guard state: sliding counters and active rules.
#[derive(Debug, Clone)]
pub struct GuardState {
    config: GuardConfig,
    counts: BTreeMap<RouterId, VecDeque<u64>>,
    rules: BTreeMap<RouterId, BlockRule>,
}

impl GuardState {
    pub fn new(config: GuardConfig) -> GuardState {
        GuardState {
            config,
            counts: BTreeMap::new(),
            rules: BTreeMap::new(),
        }
    }

    pub fn config(&self) -> &GuardConfig {
        &self.config
    }

    /// Should this frame be discarded? Called first for every received frame;
    /// expired rules are dropped here.
    pub fn enforce(&mut self, source: RouterId, now_us: u64) -> bool {
        if let Some(rule) = self.rules.get(&source) {
            match rule.expires_at_us {
                Some(expiry) if now_us >= expiry => {
                    self.rules.remove(&source);
                    false
                }
                _ => true,
            }
        } else {
            false
        }
    }

    /// Count a frame that passed [`GuardState::enforce`]. Crossing the
    /// threshold installs (or refreshes) a block rule for the source.
    pub fn observe(&mut self, source: RouterId, now_us: u64) -> Observation {
        let window_us = u64::from(self.config.window_s) * 1_000_000;
        let times = self.counts.entry(source).or_default();
        times.push_back(now_us);
        while let Some(&front) = times.front() {
            if now_us.saturating_sub(front) > window_us {
                times.pop_front();
            } else {
                break;
            }
        }
        if times.len() as u64 > u64::from(self.config.threshold_pps) {
            self.rules.insert(
                source,
                BlockRule {
                    source,
                    installed_at_us: now_us,
                    expires_at_us: if self.config.rule_lifetime_s == 0 {
                        None
                    } else {
                        Some(now_us + self.config.rule_lifetime_s * 1_000_000)
                    },
                },
            );
            Observation::Alarm
        } else {
            Observation::Quiet
        }
    }

    /// Rules currently installed (possibly including some past expiry that no
    /// frame has touched yet).
    pub fn active_rules(&self) -> impl Iterator<Item = &BlockRule> {
        self.rules.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SECOND: u64 = 1_000_000;

    fn src(n: u32) -> RouterId {
        RouterId(n)
    }

    fn guard() -> GuardState {
        GuardState::new(GuardConfig {
            enabled: true,
            ..GuardConfig::default()
        })
    }

    #[test]
    fn threshold_is_strictly_greater() {
        // 200 frames inside one second: still quiet.
        let mut g = guard();
        for i in 0..200u64 {
            assert_eq!(g.observe(src(1), i * 1_000), Observation::Quiet);
        }
        // The 201st crosses the line.
        assert_eq!(g.observe(src(1), 200_500), Observation::Alarm);
        assert!(g.enforce(src(1), 201_000));
    }

    #[test]
    fn same_count_spread_wider_stays_quiet() {
        // 201 frames spread evenly over two seconds never fill the window.
        let mut g = guard();
        for i in 0..201u64 {
            assert_eq!(g.observe(src(1), i * 10_000), Observation::Quiet);
        }
        assert!(!g.enforce(src(1), 2 * SECOND));
    }

    #[test]
    fn counters_are_per_source() {
        let mut g = guard();
        for i in 0..300u64 {
            g.observe(src(1), i * 1_000);
            // The second source sends two orders of magnitude slower.
            if i % 100 == 0 {
                assert_eq!(g.observe(src(2), i * 1_000), Observation::Quiet);
            }
        }
        assert!(g.enforce(src(1), 300_000));
        assert!(!g.enforce(src(2), 300_000));
    }

    #[test]
    fn rules_expire_after_their_lifetime() {
        let mut g = guard();
        for i in 0..=200u64 {
            g.observe(src(1), i * 1_000);
        }
        let installed = 200_000;
        assert!(g.enforce(src(1), installed + 1));
        // One microsecond before expiry the rule still holds.
        assert!(g.enforce(src(1), installed + 60 * SECOND - 1));
        // At expiry it is gone.
        assert!(!g.enforce(src(1), installed + 60 * SECOND));
        assert_eq!(g.active_rules().count(), 0);
    }

    #[test]
    fn zero_lifetime_means_permanent() {
        let mut g = GuardState::new(GuardConfig {
            enabled: true,
            rule_lifetime_s: 0,
            ..GuardConfig::default()
        });
        for i in 0..=200u64 {
            g.observe(src(1), i * 1_000);
        }
        assert!(g.enforce(src(1), 10_000 * SECOND));
        assert_eq!(g.active_rules().next().unwrap().expires_at_us, None);
    }

    #[test]
    fn config_json_defaults_and_strictness() {
        let cfg: GuardConfig = serde_json::from_str(r#"{"enabled": true}"#).unwrap();
        assert_eq!(
            cfg,
            GuardConfig {
                enabled: true,
                threshold_pps: 200,
                window_s: 1,
                rule_lifetime_s: 60,
            }
        );
        assert!(serde_json::from_str::<GuardConfig>(r#"{"threshhold": 1}"#).is_err());
    }
}
