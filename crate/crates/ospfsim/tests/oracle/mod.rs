//! Independent reference implementations used only by tests.
//!
//! The library computes digests with the `md-5` crate and checksums with its
//! own optimized routine; the tests must not trust either blindly. This
//! module re-implements both from their specifications — MD5 straight from
//! RFC 1321, the one's-complement checksum as the naive textbook word sum —
//! so that conformance tests compare two genuinely independent derivations.
//! The oracles themselves are anchored by published reference vectors (see
//! `self_checks` below) before anything else relies on them.
//!
//! Shared by several test targets, each of which uses a different subset of
//! the helpers — hence the blanket dead-code allowance.
#![allow(dead_code)]

/// Per-round left-rotation amounts, RFC 1321 section 3.4.
const S: [u32; 64] = [
    7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, //
    5, 9, 14, 20, 5, 9, 14, 20, 5, 9, 14, 20, 5, 9, 14, 20, //
    4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, //
    6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21,
];

/// Sine-derived round constants, RFC 1321: `K[i] = floor(2^32 * |sin(i+1)|)`.
/// `self_checks::sine_table_matches_its_definition` recomputes every entry.
const K: [u32; 64] = [
    0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, //
    0xf57c0faf, 0x4787c62a, 0xa8304613, 0xfd469501, //
    0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, //
    0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821, //
    0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, //
    0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8, //
    0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed, //
    0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a, //
    0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c, //
    0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70, //
    0x289b7ec6, 0xeaa127fa, 0xd4ef3085, 0x04881d05, //
    0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665, //
    0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039, //
    0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1, //
    0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, //
    0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391,
];

/// MD5 of `message`, computed per RFC 1321 with no shortcuts.
pub fn md5(message: &[u8]) -> [u8; 16] {
    let mut state: [u32; 4] = [0x67452301, 0xefcdab89, 0x98badcfe, 0x10325476];

    // Padding: a single 1 bit, zeros to 56 mod 64, then the original length
    // in bits as a little-endian u64.
    let mut data = message.to_vec();
    let bit_len = (message.len() as u64).wrapping_mul(8);
    data.push(0x80);
    while data.len() % 64 != 56 {
        data.push(0);
    }
    data.extend_from_slice(&bit_len.to_le_bytes());

    for chunk in data.chunks_exact(64) {
        let mut m = [0u32; 16];
        for (i, word) in m.iter_mut().enumerate() {
            *word = u32::from_le_bytes([
                chunk[4 * i],
                chunk[4 * i + 1],
                chunk[4 * i + 2],
                chunk[4 * i + 3],
            ]);
        }
        let [mut a, mut b, mut c, mut d] = state;
        for i in 0..64 {
            let (f, g) = match i / 16 {
                0 => ((b & c) | (!b & d), i),
                1 => ((d & b) | (!d & c), (5 * i + 1) % 16),
                2 => (b ^ c ^ d, (3 * i + 5) % 16),
                _ => (c ^ (b | !d), (7 * i) % 16),
            };
            let rotated = a
                .wrapping_add(f)
                .wrapping_add(K[i])
                .wrapping_add(m[g])
                .rotate_left(S[i]);
            (a, b, c, d) = (d, b.wrapping_add(rotated), b, c);
        }
        state[0] = state[0].wrapping_add(a);
        state[1] = state[1].wrapping_add(b);
        state[2] = state[2].wrapping_add(c);
        state[3] = state[3].wrapping_add(d);
    }

    let mut out = [0u8; 16];
    for (i, word) in state.iter().enumerate() {
        out[4 * i..4 * i + 4].copy_from_slice(&word.to_le_bytes());
    }
    out
}

/// The keyed digest exactly as the protocol defines it: MD5 over the packet
/// bytes followed by the secret zero-padded to 16 bytes.
pub fn keyed_md5(packet_bytes: &[u8], secret: &[u8]) -> [u8; 16] {
    assert!(secret.len() <= 16, "oracle secrets are at most 16 bytes");
    let mut input = packet_bytes.to_vec();
    input.extend_from_slice(secret);
    input.resize(packet_bytes.len() + 16, 0);
    md5(&input)
}

/// Naive RFC 1071 one's-complement checksum: sum big-endian 16-bit words
/// (odd trailing byte padded with zero), fold the carries, complement.
pub fn ones_complement_checksum(bytes: &[u8]) -> u16 {
    let mut sum: u32 = 0;
    let mut chunks = bytes.chunks_exact(2);
    for pair in &mut chunks {
        sum += u32::from(u16::from_be_bytes([pair[0], pair[1]]));
    }
    if let [last] = chunks.remainder() {
        sum += u32::from(u16::from_be_bytes([*last, 0]));
    }
    while sum > 0xFFFF {
        sum = (sum & 0xFFFF) + (sum >> 16);
    }
    !(sum as u16)
}

/// The checksum as OSPFv2 applies it: over the packet with the checksum
/// field (offset 12..14) and the 8-byte authentication field (offset 16..24)
/// treated as zero.
pub fn ospf_checksum(packet_bytes: &[u8]) -> u16 {
    let mut copy = packet_bytes.to_vec();
    for i in 12..14 {
        if let Some(b) = copy.get_mut(i) {
            *b = 0;
        }
    }
    for i in 16..24 {
        if let Some(b) = copy.get_mut(i) {
            *b = 0;
        }
    }
    ones_complement_checksum(&copy)
}

#[cfg(test)]
mod self_checks {
    use super::*;

    /// RFC 1321 appendix A.5 test suite (subset) plus the classic pangram.
    #[test]
    fn md5_reference_vectors() {
        let cases: [(&[u8], &str); 4] = [
            (b"", "d41d8cd98f00b204e9800998ecf8427e"),
            (b"abc", "900150983cd24fb0d6963f7d28e17f72"),
            (
                b"The quick brown fox jumps over the lazy dog",
                "9e107d9d372bb6826bd81d3542a419d6",
            ),
            (
                b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789",
                "d174ab98d277d9f5a5611c2c9f419d9f",
            ),
        ];
        for (input, expected) in cases {
            assert_eq!(hex::encode(md5(input)), expected);
        }
    }

    /// Padding edge cases: lengths that straddle the 56-byte threshold where
    /// the length word spills into a second block.
    #[test]
    fn md5_block_boundaries() {
        // 55, 56, 64 bytes of 'a' — values cross-checked once against the
        // ubiquitous md5sum tool.
        let known = [
            (55, "ef1772b6dff9a122358552954ad0df65"),
            (56, "3b0c8ac703f828b04c6c197006d17218"),
            (64, "014842d480b571495a4a0363793f7367"),
        ];
        for (len, expected) in known {
            assert_eq!(hex::encode(md5(&vec![b'a'; len])), expected);
        }
    }

    /// The K table really is `floor(2^32 * |sin(i+1)|)`.
    #[test]
    fn sine_table_matches_its_definition() {
        for (i, &k) in K.iter().enumerate() {
            let derived = (((i as f64) + 1.0).sin().abs() * 4294967296.0) as u64 as u32;
            assert_eq!(k, derived, "K[{}]", i);
        }
    }

    #[test]
    fn checksum_reference_behavior() {
        // All zeros sum to zero; complement is all ones.
        assert_eq!(ones_complement_checksum(&[0u8; 24]), 0xFFFF);
        // A sum that overflows must wrap around (end-around carry).
        assert_eq!(ones_complement_checksum(&[0xFF, 0xFF, 0x00, 0x01]), 0xFFFE);
        // Odd length: trailing byte is the high half of a padded word.
        assert_eq!(
            ones_complement_checksum(&[0x12, 0x34, 0x56]),
            ones_complement_checksum(&[0x12, 0x34, 0x56, 0x00])
        );
        // Inserting the computed checksum makes the words re-sum to 0xFFFF,
        // so the complemented re-sum of a valid codeword is zero.
        let data = [0x02, 0x01, 0x00, 0x2c, 0xc0, 0xa8, 0x01, 0x05];
        let sum = ones_complement_checksum(&data);
        let mut with = data.to_vec();
        with.extend_from_slice(&sum.to_be_bytes());
        assert_eq!(ones_complement_checksum(&with), 0);
    }
}
