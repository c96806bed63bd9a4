//! The life of an adjacency, tick by tick.
//!
//! Two routers share a point-to-point link and nothing bothers them. Watch
//! the collapsed neighbor state machine walk Down → Init → TwoWay → Full:
//! the first Hello teaches each router the other exists (Init); the next
//! round of Hellos lists the hearer, proving two-way visibility (TwoWay),
//! which this simulator promotes straight to Full. After convergence the
//! periodic Hellos merely refresh the inactivity timer.
//!
//! Run with: `cargo run --example adjacency_lifecycle`

use ospfsim::auth::AuthConfig;
use ospfsim::neighbor::RouterConfig;
use ospfsim::sim::{Link, SimWorld, WorldConfig};

fn main() {
    let a = "10.0.0.1".parse().unwrap();
    let b = "10.0.0.2".parse().unwrap();
    let mut config_a = RouterConfig::new(a, AuthConfig::None);
    config_a.networks = vec!["10.0.0.0/30".parse().unwrap()];
    let mut config_b = RouterConfig::new(b, AuthConfig::None);
    config_b.networks = vec!["10.0.0.0/30".parse().unwrap()];

    let link = Link {
        a,
        b,
        latency_us: 1_000,
    };
    let mut world = SimWorld::new(WorldConfig::new(
        vec![config_a, config_b],
        vec![link],
        45,
    ))
    .unwrap();
    world.run();

    println!("== Adjacency timeline ==\n");
    println!("{:>10}  {:<12} {:<12} {:<8} {}", "t (s)", "router", "neighbor", "state", "cause");
    for entry in &world.timeline {
        println!(
            "{:>10.3}  {:<12} {:<12} {:<8} {}",
            entry.time_us as f64 / 1e6,
            entry.router.to_string(),
            entry.neighbor.to_string(),
            entry.state,
            entry.cause
        );
    }

    println!("\n== What actually crossed the link (first six records) ==\n");
    for record in world.capture.iter().take(6) {
        let body = match record.frame_hex.get(2..4) {
            Some("01") => "hello",
            Some("04") => "lsu",
            _ => "?",
        };
        println!(
            "  t={:<8.3} {} {:<26} {} bytes of {}",
            record.time_us as f64 / 1e6,
            record.src_router,
            format!("verdict={}", record.verdict),
            record.frame_hex.len() / 2,
            body
        );
    }

    println!("\n== Where things settled ==\n");
    for ((router, neighbor), state) in world.adjacency_matrix() {
        println!("  {} sees {} as {}", router, neighbor, state);
    }

    let hellos = world
        .capture
        .iter()
        .filter(|r| r.verdict == "sent" && r.src_router == a)
        .count();
    println!(
        "\n{} sent {} packets in 45 s (Hello every 10 s, LSU every 30 s);",
        a, hellos
    );
    println!("after the t=10 s Hellos crossed, both ends reached Full and stayed there.");
}
