//! OSPFv2 wire format: the 24-byte packet header, Hello and Link State Update
//! bodies, the standard one's-complement checksum, and the framing rules for
//! the three authentication types (RFC 2328 appendices A.3 and D).
//!
//! Only the packet kinds the simulator exchanges are modeled: Hello (type 1)
//! and Link State Update (type 4, carried as an opaque payload). Everything is
//! big-endian on the wire.
//!
//! Framing depends on the authentication type. For Null and Simple
//! authentication a frame is exactly `packet_length` bytes. For Cryptographic
//! authentication the 64-bit authentication field carries key id, digest
//! length and the cryptographic sequence number, and a 16-byte keyed-MD5
//! digest follows the packet as a trailer that is *not* counted by
//! `packet_length` and *not* covered by the checksum (the checksum field is
//! transmitted as zero in that mode).

use std::fmt;
use std::net::Ipv4Addr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Length of the fixed OSPFv2 packet header.
pub const HEADER_LEN: usize = 24;
/// Length of a Hello body with an empty neighbor list.
pub const HELLO_FIXED_LEN: usize = 20;
/// Length of the keyed-MD5 digest trailer.
pub const DIGEST_LEN: usize = 16;
/// The only protocol version this crate speaks.
pub const OSPF_VERSION: u8 = 2;

/// Packet type byte for Hello packets.
pub const PACKET_TYPE_HELLO: u8 = 1;
/// Packet type byte for Link State Update packets.
pub const PACKET_TYPE_LS_UPDATE: u8 = 4;

/// `au_type` value for unauthenticated packets.
pub const AU_TYPE_NULL: u16 = 0;
/// `au_type` value for plaintext-password packets.
pub const AU_TYPE_SIMPLE: u16 = 1;
/// `au_type` value for keyed-digest packets.
pub const AU_TYPE_CRYPTOGRAPHIC: u16 = 2;

/// A 32-bit router identifier, written and parsed in dotted-quad form.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RouterId(pub u32);

impl RouterId {
    /// Byte representation used in headers and neighbor lists.
    pub fn to_be_bytes(self) -> [u8; 4] {
        self.0.to_be_bytes()
    }
}

impl fmt::Display for RouterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Ipv4Addr::from(self.0))
    }
}

impl fmt::Debug for RouterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RouterId({})", self)
    }
}

impl std::str::FromStr for RouterId {
    type Err = std::net::AddrParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(RouterId(u32::from(s.parse::<Ipv4Addr>()?)))
    }
}

impl Serialize for RouterId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RouterId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Authentication data carried in the header's 64-bit authentication field.
///
/// The `Cryptographic` variant also carries the digest trailer bytes so that a
/// decoded packet can be re-encoded to the identical frame. Computing a fresh
/// digest is the authentication engine's job, not the codec's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Auth {
    /// No authentication; the field is transmitted as zeros.
    Null,
    /// Plaintext password, zero-padded to the 8 bytes the field can hold.
    Simple([u8; 8]),
    /// Keyed-MD5: the field holds key id, digest length and sequence number,
    /// and the digest itself trails the packet.
    Cryptographic {
        key_id: u8,
        sequence: u32,
        digest: [u8; DIGEST_LEN],
    },
}

impl Auth {
    /// The `au_type` header value for this variant.
    pub fn au_type(&self) -> u16 {
        match self {
            Auth::Null => AU_TYPE_NULL,
            Auth::Simple(_) => AU_TYPE_SIMPLE,
            Auth::Cryptographic { .. } => AU_TYPE_CRYPTOGRAPHIC,
        }
    }
}

/// Hello packet body. The layout is the RFC 2328 one: network mask, hello
/// interval, options (always sent as zero here), router priority, dead
/// interval, DR, BDR, then one 32-bit id per known neighbor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelloBody {
    pub network_mask: u32,
    pub hello_interval: u16,
    pub router_priority: u8,
    pub dead_interval: u32,
    pub designated_router: RouterId,
    pub backup_designated_router: RouterId,
    pub neighbors: Vec<RouterId>,
}

impl HelloBody {
    fn encoded_len(&self) -> usize {
        HELLO_FIXED_LEN + 4 * self.neighbors.len()
    }
}

/// Packet body, by packet type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Hello(HelloBody),
    /// Link State Update contents are opaque to this simulator; they exist so
    /// that authenticated non-Hello traffic flows over the links.
    LsUpdate(Vec<u8>),
}

/// A decoded OSPFv2 packet. The checksum is not stored: it is recomputed on
/// encode and checked against the raw bytes with [`verify_checksum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub router_id: RouterId,
    pub area_id: u32,
    pub auth: Auth,
    pub body: Body,
}

impl Packet {
    /// The packet type byte implied by the body.
    pub fn packet_type(&self) -> u8 {
        match self.body {
            Body::Hello(_) => PACKET_TYPE_HELLO,
            Body::LsUpdate(_) => PACKET_TYPE_LS_UPDATE,
        }
    }

    /// Value of the `packet_length` header field: header plus body, never the
    /// digest trailer.
    pub fn packet_length(&self) -> usize {
        HEADER_LEN
            + match &self.body {
                Body::Hello(h) => h.encoded_len(),
                Body::LsUpdate(p) => p.len(),
            }
    }
}

/// An encoded frame as it travels over a link: `packet_length` bytes of
/// packet, plus the digest trailer when the packet is cryptographically
/// authenticated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub packet_bytes: Vec<u8>,
    pub digest: Option<[u8; DIGEST_LEN]>,
}

impl Frame {
    /// Split a raw buffer into packet bytes and digest trailer, validating the
    /// header prefix (version, type, lengths, authentication type) on the way.
    pub fn from_wire(bytes: &[u8]) -> Result<Frame, DecodeError> {
        if bytes.len() < HEADER_LEN {
            return Err(DecodeError::Truncated {
                need: HEADER_LEN,
                have: bytes.len(),
            });
        }
        if bytes[0] != OSPF_VERSION {
            return Err(DecodeError::BadVersion(bytes[0]));
        }
        let ptype = bytes[1];
        if ptype != PACKET_TYPE_HELLO && ptype != PACKET_TYPE_LS_UPDATE {
            return Err(DecodeError::UnknownType(ptype));
        }
        let declared = u16::from_be_bytes([bytes[2], bytes[3]]) as usize;
        if declared < HEADER_LEN {
            return Err(DecodeError::LengthMismatch {
                declared,
                buffer: bytes.len(),
            });
        }
        let au_type = u16::from_be_bytes([bytes[14], bytes[15]]);
        let trailer = match au_type {
            AU_TYPE_NULL | AU_TYPE_SIMPLE => 0,
            AU_TYPE_CRYPTOGRAPHIC => {
                let auth_data_length = bytes[19];
                if auth_data_length as usize != DIGEST_LEN {
                    return Err(DecodeError::BadAuthDataLength(auth_data_length));
                }
                DIGEST_LEN
            }
            other => return Err(DecodeError::UnknownAuthType(other)),
        };
        let total = declared + trailer;
        if bytes.len() < total {
            return Err(DecodeError::Truncated {
                need: total,
                have: bytes.len(),
            });
        }
        if bytes.len() > total {
            return Err(DecodeError::LengthMismatch {
                declared,
                buffer: bytes.len(),
            });
        }
        let digest = if trailer == DIGEST_LEN {
            let mut d = [0u8; DIGEST_LEN];
            d.copy_from_slice(&bytes[declared..total]);
            Some(d)
        } else {
            None
        };
        Ok(Frame {
            packet_bytes: bytes[..declared].to_vec(),
            digest,
        })
    }

    /// Full parse of the packet bytes.
    pub fn decode(&self) -> Result<Packet, DecodeError> {
        let b = &self.packet_bytes;
        // Re-validate the prefix so hand-built frames get the same checks as
        // buffers arriving through `from_wire`.
        if b.len() < HEADER_LEN {
            return Err(DecodeError::Truncated {
                need: HEADER_LEN,
                have: b.len(),
            });
        }
        if b[0] != OSPF_VERSION {
            return Err(DecodeError::BadVersion(b[0]));
        }
        let declared = u16::from_be_bytes([b[2], b[3]]) as usize;
        if declared != b.len() || declared < HEADER_LEN {
            return Err(DecodeError::LengthMismatch {
                declared,
                buffer: b.len(),
            });
        }
        let router_id = RouterId(u32::from_be_bytes([b[4], b[5], b[6], b[7]]));
        let area_id = u32::from_be_bytes([b[8], b[9], b[10], b[11]]);
        let au_type = u16::from_be_bytes([b[14], b[15]]);
        let auth = match au_type {
            AU_TYPE_NULL => Auth::Null,
            AU_TYPE_SIMPLE => {
                let mut pw = [0u8; 8];
                pw.copy_from_slice(&b[16..24]);
                Auth::Simple(pw)
            }
            AU_TYPE_CRYPTOGRAPHIC => {
                let auth_data_length = b[19];
                if auth_data_length as usize != DIGEST_LEN {
                    return Err(DecodeError::BadAuthDataLength(auth_data_length));
                }
                Auth::Cryptographic {
                    key_id: b[18],
                    sequence: u32::from_be_bytes([b[20], b[21], b[22], b[23]]),
                    digest: self.digest.unwrap_or([0u8; DIGEST_LEN]),
                }
            }
            other => return Err(DecodeError::UnknownAuthType(other)),
        };
        let body_bytes = &b[HEADER_LEN..];
        let body = match b[1] {
            PACKET_TYPE_HELLO => Body::Hello(parse_hello(body_bytes, declared, b.len())?),
            PACKET_TYPE_LS_UPDATE => Body::LsUpdate(body_bytes.to_vec()),
            other => return Err(DecodeError::UnknownType(other)),
        };
        Ok(Packet {
            router_id,
            area_id,
            auth,
            body,
        })
    }

    /// The bytes that travel over a link: packet, then digest trailer if any.
    pub fn wire_bytes(&self) -> Vec<u8> {
        let mut out = self.packet_bytes.clone();
        if let Some(d) = &self.digest {
            out.extend_from_slice(d);
        }
        out
    }
}

fn parse_hello(body: &[u8], declared: usize, buffer: usize) -> Result<HelloBody, DecodeError> {
    if body.len() < HELLO_FIXED_LEN || (body.len() - HELLO_FIXED_LEN) % 4 != 0 {
        return Err(DecodeError::LengthMismatch { declared, buffer });
    }
    let word = |i: usize| u32::from_be_bytes([body[i], body[i + 1], body[i + 2], body[i + 3]]);
    let mut neighbors = Vec::with_capacity((body.len() - HELLO_FIXED_LEN) / 4);
    let mut i = HELLO_FIXED_LEN;
    while i < body.len() {
        neighbors.push(RouterId(word(i)));
        i += 4;
    }
    Ok(HelloBody {
        network_mask: word(0),
        hello_interval: u16::from_be_bytes([body[4], body[5]]),
        // body[6] is the options byte; it is transmitted as zero and carries
        // no meaning in this simulator, so it is skipped on parse.
        router_priority: body[7],
        dead_interval: word(8),
        designated_router: RouterId(word(12)),
        backup_designated_router: RouterId(word(16)),
        neighbors,
    })
}

/// Decode a raw buffer into a packet. Strict: the buffer must be exactly one
/// well-formed frame, trailing bytes are an error.
pub fn decode(bytes: &[u8]) -> Result<Packet, DecodeError> {
    Frame::from_wire(bytes)?.decode()
}

/// Encode a packet into a frame. The checksum is computed here for Null and
/// Simple authentication and transmitted as zero for Cryptographic
/// authentication, where the digest trailer protects the packet instead.
pub fn encode(packet: &Packet) -> Result<Frame, EncodeError> {
    let packet_length = packet.packet_length();
    if packet_length > u16::MAX as usize {
        return Err(EncodeError::BodyTooLarge {
            length: packet_length,
        });
    }
    let mut b = Vec::with_capacity(packet_length);
    b.push(OSPF_VERSION);
    b.push(packet.packet_type());
    b.extend_from_slice(&(packet_length as u16).to_be_bytes());
    b.extend_from_slice(&packet.router_id.to_be_bytes());
    b.extend_from_slice(&packet.area_id.to_be_bytes());
    b.extend_from_slice(&[0, 0]); // checksum, filled in below
    b.extend_from_slice(&packet.auth.au_type().to_be_bytes());
    let mut digest = None;
    match &packet.auth {
        Auth::Null => b.extend_from_slice(&[0u8; 8]),
        Auth::Simple(pw) => b.extend_from_slice(pw),
        Auth::Cryptographic {
            key_id,
            sequence,
            digest: d,
        } => {
            b.extend_from_slice(&[0, 0]); // reserved
            b.push(*key_id);
            b.push(DIGEST_LEN as u8);
            b.extend_from_slice(&sequence.to_be_bytes());
            digest = Some(*d);
        }
    }
    match &packet.body {
        Body::Hello(h) => {
            b.extend_from_slice(&h.network_mask.to_be_bytes());
            b.extend_from_slice(&h.hello_interval.to_be_bytes());
            b.push(0); // options
            b.push(h.router_priority);
            b.extend_from_slice(&h.dead_interval.to_be_bytes());
            b.extend_from_slice(&h.designated_router.to_be_bytes());
            b.extend_from_slice(&h.backup_designated_router.to_be_bytes());
            for n in &h.neighbors {
                b.extend_from_slice(&n.to_be_bytes());
            }
        }
        Body::LsUpdate(p) => b.extend_from_slice(p),
    }
    if digest.is_none() {
        let ck = compute_checksum(&b);
        b[12..14].copy_from_slice(&ck.to_be_bytes());
    }
    Ok(Frame {
        packet_bytes: b,
        digest,
    })
}

/// One's-complement sum of the buffer as big-endian 16-bit words (odd trailing
/// byte padded with zero), with the 64-bit authentication field always treated
/// as zero and the checksum field optionally so.
fn ones_complement_sum(bytes: &[u8], zero_checksum_field: bool) -> u16 {
    let masked = |i: usize| -> u8 {
        if (16..24).contains(&i) || (zero_checksum_field && (12..14).contains(&i)) {
            0
        } else {
            bytes[i]
        }
    };
    let mut sum: u32 = 0;
    let mut i = 0;
    while i < bytes.len() {
        let hi = masked(i);
        let lo = if i + 1 < bytes.len() { masked(i + 1) } else { 0 };
        sum += u32::from(u16::from_be_bytes([hi, lo]));
        i += 2;
    }
    while sum >> 16 != 0 {
        sum = (sum & 0xFFFF) + (sum >> 16);
    }
    sum as u16
}

/// RFC 1071-style checksum over the packet bytes with the checksum field and
/// the authentication field treated as zero.
pub fn compute_checksum(packet_bytes: &[u8]) -> u16 {
    !ones_complement_sum(packet_bytes, true)
}

/// Checksum verification identity: summing the packet *including* the stored
/// checksum (authentication field still excluded) must give `0xFFFF`.
pub fn verify_checksum(packet_bytes: &[u8]) -> bool {
    ones_complement_sum(packet_bytes, false) == 0xFFFF
}

/// Errors from [`decode`] and [`Frame::from_wire`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeError {
    /// Fewer bytes than a header, or than the declared lengths require.
    Truncated { need: usize, have: usize },
    /// Version byte is not 2.
    BadVersion(u8),
    /// Packet type is neither Hello nor Link State Update.
    UnknownType(u8),
    /// `au_type` is not Null, Simple or Cryptographic.
    UnknownAuthType(u16),
    /// Cryptographic authentication with a digest length other than 16.
    BadAuthDataLength(u8),
    /// `packet_length` inconsistent with the buffer or the body layout.
    LengthMismatch { declared: usize, buffer: usize },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::Truncated { need, have } => {
                write!(f, "truncated frame: need {} bytes, have {}", need, have)
            }
            DecodeError::BadVersion(v) => write!(f, "unsupported OSPF version {}", v),
            DecodeError::UnknownType(t) => write!(f, "unknown packet type {}", t),
            DecodeError::UnknownAuthType(t) => write!(f, "unknown authentication type {}", t),
            DecodeError::BadAuthDataLength(n) => {
                write!(f, "authentication data length {} (expected 16)", n)
            }
            DecodeError::LengthMismatch { declared, buffer } => write!(
                f,
                "declared packet length {} inconsistent with {}-byte buffer or body layout",
                declared, buffer
            ),
        }
    }
}

impl std::error::Error for DecodeError {}

/// Errors from [`encode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodeError {
    /// Body pushes `packet_length` past what its 16-bit field can carry.
    BodyTooLarge { length: usize },
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::BodyTooLarge { length } => {
                write!(f, "packet length {} exceeds the 16-bit length field", length)
            }
        }
    }
}

impl std::error::Error for EncodeError {}
