//! Anatomy of an authenticated OSPFv2 packet.
//!
//! Builds the same minimal Hello three times — unauthenticated, with a
//! cleartext password, and with a keyed-MD5 digest — and dissects the bytes
//! each one puts on the wire:
//!
//! - where the 24-byte header ends and the Hello body begins;
//! - how the 64-bit authentication field is reinterpreted per scheme
//!   (zeros, password bytes, or key-id/digest-length/sequence);
//! - why the checksum field reads zero for cryptographic packets and how
//!   the digest trailer rides *outside* the declared packet length.
//!
//! Run with: `cargo run --example packet_anatomy`

use ospfsim::auth::{keyed_digest, sign_md5, sign_simple, simple_password, AuthKey};
use ospfsim::wire::{
    self, Auth, Body, Frame, HelloBody, Packet, RouterId, HEADER_LEN,
};

fn hexdump(bytes: &[u8]) {
    for (row, chunk) in bytes.chunks(8).enumerate() {
        let hex: Vec<String> = chunk.iter().map(|b| format!("{:02x}", b)).collect();
        println!("    {:>3}  {}", row * 8, hex.join(" "));
    }
}

fn minimal_hello(router_id: RouterId) -> Packet {
    Packet {
        router_id,
        area_id: 0,
        auth: Auth::Null,
        body: Body::Hello(HelloBody {
            network_mask: 0xFFFF_FFFC,
            hello_interval: 10,
            router_priority: 1,
            dead_interval: 40,
            designated_router: RouterId(0),
            backup_designated_router: RouterId(0),
            neighbors: Vec::new(),
        }),
    }
}

fn main() {
    let router: RouterId = "192.168.1.5".parse().unwrap();
    let packet = minimal_hello(router);

    println!("== 1. Null authentication ==\n");
    let frame = wire::encode(&packet).unwrap();
    let bytes = frame.wire_bytes();
    println!("  {} bytes on the wire ({}-byte header + 20-byte Hello body):", bytes.len(), HEADER_LEN);
    hexdump(&bytes);
    println!();
    println!("  version/type/length   {:02x} {:02x} {:02x}{:02x}", bytes[0], bytes[1], bytes[2], bytes[3]);
    println!("  router id             {}.{}.{}.{}", bytes[4], bytes[5], bytes[6], bytes[7]);
    println!("  checksum              {:02x}{:02x}  (offset 12)", bytes[12], bytes[13]);
    println!("  au_type               {:02x}{:02x}  (offset 14; 0 = none)", bytes[14], bytes[15]);
    println!("  auth field            {:02x?} — transmitted as zeros", &bytes[HEADER_LEN - 8..HEADER_LEN]);
    println!(
        "  checksum identity holds: {}\n",
        wire::verify_checksum(&frame.packet_bytes)
    );

    println!("== 2. Simple password ==\n");
    let (password, warning) = simple_password(b"nekasifra").unwrap();
    if let Some(w) = warning {
        println!("  note: {}", w);
    }
    let frame = wire::encode(&sign_simple(packet.clone(), &password)).unwrap();
    let bytes = frame.wire_bytes();
    println!("  au_type               {:02x}{:02x}  (offset 14; 1 = simple)", bytes[14], bytes[15]);
    print!("  auth field            ");
    for b in &bytes[16..24] {
        print!("{:02x} ", b);
    }
    println!();
    println!(
        "  ...which is literally {:?} — anyone on the link reads it",
        String::from_utf8_lossy(&bytes[16..24])
    );
    println!(
        "  checksum skips the password bytes, so it still verifies: {}\n",
        wire::verify_checksum(&frame.packet_bytes)
    );

    println!("== 3. Cryptographic (keyed MD5) ==\n");
    let key = AuthKey {
        key_id: 16,
        secret: b"ovojesifra".to_vec(),
        valid_from: 0,
        valid_until: i64::MAX,
    };
    let frame = sign_md5(&packet, &key, 1).unwrap();
    let bytes = frame.wire_bytes();
    println!(
        "  {} bytes: {} declared + 16-byte digest trailer outside packet_length",
        bytes.len(),
        frame.packet_bytes.len()
    );
    hexdump(&bytes);
    println!();
    println!("  checksum              {:02x}{:02x}  (transmitted as zero in this mode)", bytes[12], bytes[13]);
    println!("  key id                {}     (offset 18)", bytes[18]);
    println!("  digest length         {}    (offset 19)", bytes[19]);
    println!(
        "  crypto sequence       {}     (offset 20..24, strictly increasing per sender)",
        u32::from_be_bytes([bytes[20], bytes[21], bytes[22], bytes[23]])
    );

    let recomputed = keyed_digest(&frame.packet_bytes, &key.secret);
    println!("  digest (trailer)      {}", hex::encode(frame.digest.unwrap()));
    println!("  digest (recomputed)   {}", hex::encode(recomputed));
    println!();
    println!("  The digest is MD5 over the packet bytes followed by the secret,");
    println!("  zero-padded to 16 bytes. The secret itself never leaves the router —");
    println!("  scan the dump above: {:?} appears nowhere in it.", "ovojesifra");

    // Round-trip sanity: what we dissected is what a decoder sees.
    let reparsed = Frame::from_wire(&bytes).unwrap();
    assert_eq!(reparsed, frame);
    assert_eq!(reparsed.decode().unwrap().router_id, router);
    println!("\n  round-trip decode OK");
}
