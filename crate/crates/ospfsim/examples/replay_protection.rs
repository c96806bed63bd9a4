//! Replay: record a legitimate packet, play it back, see who falls for it.
//!
//! The adversary taps the link from t=0, keeps the most recent frame it has
//! seen, and retransmits it verbatim three times starting at t=21. Under a
//! cleartext password the copies are indistinguishable from the original —
//! the receiver happily accepts all three. Under keyed MD5 the copies still
//! carry a *valid digest* (the adversary replayed honest bytes, after all),
//! but their cryptographic sequence number equals one the receiver has
//! already accepted, so every copy bounces with `reject:replay`.
//!
//! The second act replays a *stale* recording — the very first frame of the
//! run — three times in a row. Those arrive with a sequence number far
//! below the current one ("disorder"), and three disorders inside ten
//! seconds make the receiver tear the neighbor down defensively and
//! re-initialize. A hello interval later the adjacency is back: annoying,
//! contained, and visible in the timeline.
//!
//! Run with: `cargo run --example replay_protection`

use ospfsim::adversary::{assess, AttackSpec, RunView, Technique};
use ospfsim::auth::{AuthConfig, KeyChain, KeyChainSpec, KeySpec};
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

fn run_replay(label: &str, auth: AuthConfig, spec: &AttackSpec) -> SimWorld {
    let a: RouterId = "192.168.1.5".parse().unwrap();
    let b: RouterId = "192.168.1.6".parse().unwrap();
    let mut ca = RouterConfig::new(a, auth.clone());
    ca.networks = vec!["192.168.1.4/30".parse().unwrap()];
    let mut cb = RouterConfig::new(b, auth);
    cb.networks = vec!["192.168.1.4/30".parse().unwrap()];

    let mut world = SimWorld::new(WorldConfig::new(
        vec![ca, cb],
        vec![Link { a, b, latency_us: 1_000 }],
        60,
    ))
    .unwrap();
    world.attach_interposer(0, spec.build_tap((a, b)));
    for t in spec.action_times() {
        world.schedule_adversary_action(t, 0);
    }
    world.run();

    println!("== {} ==\n", label);
    for record in world
        .capture
        .iter()
        .filter(|r| r.src_router == spec.attacker_id)
    {
        println!(
            "  t={:<8.3} {:<10} {}",
            record.time_us as f64 / 1e6,
            record.verdict,
            if record.verdict == "injected" {
                "adversary puts a recorded frame back on the wire"
            } else {
                "victim's verdict on that frame"
            }
        );
    }
    let outcome = assess(
        spec,
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
        "\n  verdict: {} — {}\n",
        if outcome.succeeded { "SUCCEEDED" } else { "PREVENTED" },
        outcome.detail
    );
    world
}

fn main() {
    let (password, _) = ospfsim::auth::simple_password(b"nekasifra").unwrap();

    println!("--- Act 1: replay the freshest recording three times ---\n");
    let spec = AttackSpec::new(Technique::Replay);
    run_replay("simple password", AuthConfig::Simple(password), &spec);
    run_replay("cryptographic (keyed MD5)", AuthConfig::Cryptographic(chain()), &spec);

    println!("--- Act 2: replay a stale recording until the receiver snaps ---\n");
    let mut stale = AttackSpec::new(Technique::Replay);
    stale.start_s = 30;
    stale.params.capture_index = 0; // the first frame ever seen
    stale.params.delay_ms = 0;
    let world = run_replay("cryptographic, stale frame", AuthConfig::Cryptographic(chain()), &stale);

    println!("  timeline around the teardown:");
    for entry in &world.timeline {
        if entry.time_us >= 30_000_000 {
            println!(
                "    t={:<8.3} {} -> {}: {} ({})",
                entry.time_us as f64 / 1e6,
                entry.router,
                entry.neighbor,
                entry.state,
                entry.cause
            );
        }
    }
    println!("\n  Three disorder rejects inside ten seconds tripped the defensive");
    println!("  teardown; the next Hello exchange rebuilt the adjacency.");
}
