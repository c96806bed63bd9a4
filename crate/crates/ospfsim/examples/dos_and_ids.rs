//! Flooding the verifier, and the guard that contains it.
//!
//! Strong authentication has a cost: every received frame must be checked,
//! and checking is work. An adversary who pumps 1000 junk frames per second
//! at a router doesn't need a single one accepted — saturating the victim's
//! verification budget (500 frames/s here) is enough. Legitimate Hellos
//! drown in the queue as `reject:overload`, the dead interval expires, and
//! the adjacency collapses. Keyed MD5 cannot help; it is the thing being
//! exhausted. This run demonstrates the collapse, then enables a simple
//! rate-based guard — pin noisy sources at 200 frames/s, block them for
//! 60 s — and shows the same flood bouncing off while the adjacency holds.
//! A trickle flood under every threshold shows the other side of the coin:
//! rate-based containment only triggers on rates worth containing.
//!
//! Run with: `cargo run --example dos_and_ids`

use ospfsim::adversary::{assess, AttackSpec, RunView, Technique};
use ospfsim::auth::{AuthConfig, KeyChain, KeyChainSpec, KeySpec};
use ospfsim::guard::GuardConfig;
use ospfsim::neighbor::RouterConfig;
use ospfsim::sim::{Link, SimWorld, WorldConfig};
use ospfsim::wire::RouterId;

fn chain() -> KeyChain {
    KeyChain::try_from(KeyChainSpec {
        keys: vec![KeySpec {
            key_id: 16,
            secret: "ovojesifra".to_string(),
            valid_from: "1970-01-01T00:00:00Z".to_string(),
            valid_until: "2100-01-01T00:00:00Z".to_string(),
        }],
        max_time_drift: 5,
    })
    .unwrap()
}

fn run_flood(label: &str, rate_pps: u32, guard_enabled: bool) {
    let a: RouterId = "192.168.1.5".parse().unwrap();
    let b: RouterId = "192.168.1.6".parse().unwrap();
    let mut ca = RouterConfig::new(a, AuthConfig::Cryptographic(chain()));
    ca.networks = vec!["192.168.1.4/30".parse().unwrap()];
    let mut cb = ca.clone();
    cb.router_id = b;

    let mut spec = AttackSpec::new(Technique::DosFlood);
    spec.params.rate_pps = rate_pps;

    let mut config = WorldConfig::new(
        vec![ca, cb],
        vec![Link { a, b, latency_us: 1_000 }],
        70,
    );
    config.guard = GuardConfig {
        enabled: guard_enabled,
        ..GuardConfig::default()
    };
    let mut world = SimWorld::new(config).unwrap();
    world.attach_interposer(0, spec.build_tap((a, b)));
    for t in spec.action_times() {
        world.schedule_adversary_action(t, 0);
    }
    world.run();

    println!("== {} ==\n", label);
    let mut injected = 0usize;
    let mut blocked = 0usize;
    let mut junk_rejected = 0usize;
    let mut overloaded = 0usize;
    for record in &world.capture {
        match (record.src_router == spec.attacker_id, record.verdict.as_str()) {
            (true, "injected") => injected += 1,
            (true, "blocked") => blocked += 1,
            (true, v) if v.starts_with("reject:") => junk_rejected += 1,
            (false, "reject:overload") => overloaded += 1,
            _ => {}
        }
    }
    println!("  flood frames injected        {:>6}", injected);
    println!("  ...blocked by the guard      {:>6}", blocked);
    println!("  ...reaching verification     {:>6}", junk_rejected);
    println!("  legitimate frames overloaded {:>6}", overloaded);

    let outcome = assess(
        &spec,
        &RunView {
            capture: &world.capture,
            timeline: &world.timeline,
            auth_mode: label,
            attacker: spec.attacker_id,
            victims: (a, b),
            link_id: 0,
        },
    );
    println!(
        "  attack verdict: {} — {}",
        if outcome.succeeded { "SUCCEEDED" } else { "PREVENTED" },
        outcome.detail
    );
    let downs: Vec<String> = world
        .timeline
        .iter()
        .filter(|e| e.state == "down")
        .map(|e| format!("t={:.0}s {} lost {}", e.time_us as f64 / 1e6, e.router, e.neighbor))
        .collect();
    if downs.is_empty() {
        println!("  adjacency: held for the whole run\n");
    } else {
        println!("  adjacency: {}\n", downs.join("; "));
    }
}

fn main() {
    println!("Junk frames claim key id 255 with a random digest, so none can ever");
    println!("authenticate — the attack is aimed at the verifier's clock cycles,");
    println!("not its key chain. The victim's budget is 500 verifications/s.\n");

    run_flood("1000 pps, no guard", 1_000, false);
    run_flood("1000 pps, guard enabled (pin sources above 200 pps)", 1_000, true);
    run_flood("10 pps trickle, no guard", 10, false);

    println!("The guard watches per-source arrival rates in front of the verifier;");
    println!("one noisy source gets pinned within the first second of the flood and");
    println!("its frames are dropped before they can burn any verification budget.");
}
