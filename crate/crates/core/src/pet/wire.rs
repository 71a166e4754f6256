//! Packet wire format.
//!
//! ```text
//! 0      2        3       4    5              9
//! +------+--------+-------+----+--------------+-----------------+
//! | "PE" | version | index | N  | Γ (u32, BE)  | Γ payload bytes |
//! +------+--------+-------+----+--------------+-----------------+
//! ```

use alloc::vec::Vec;

use thiserror::Error;

use super::PetPacket;

pub const MAGIC: [u8; 2] = [0x50, 0x45];
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("buffer holds {got} bytes, need at least {need}")]
    Truncated { need: usize, got: usize },
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 2]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("packet index {index} is not below N = {n}")]
    IndexOutOfRange { index: u8, n: u8 },
    #[error("packet does not fit the header fields: {0}")]
    Unrepresentable(&'static str),
}

/// A packet together with the codeword length it was sent with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WirePacket {
    pub n_packets: usize,
    pub packet: PetPacket,
}

/// Serializes `packet`, tagging it with the codeword length `n_packets`.
pub fn write_packet(packet: &PetPacket, n_packets: usize) -> Result<Vec<u8>, WireError> {
    let n = u8::try_from(n_packets).map_err(|_| WireError::Unrepresentable("N"))?;
    let index = u8::try_from(packet.index).map_err(|_| WireError::Unrepresentable("index"))?;
    if index >= n {
        return Err(WireError::IndexOutOfRange { index, n });
    }
    let gamma = u32::try_from(packet.payload.len()).map_err(|_| WireError::Unrepresentable("gamma"))?;
    let mut out = Vec::with_capacity(HEADER_LEN + packet.payload.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(index);
    out.push(n);
    out.extend_from_slice(&gamma.to_be_bytes());
    out.extend_from_slice(&packet.payload);
    Ok(out)
}

/// Parses one packet from the front of `buf`; returns it and the bytes used.
pub fn read_packet(buf: &[u8]) -> Result<(WirePacket, usize), WireError> {
    if buf.len() < HEADER_LEN {
        return Err(WireError::Truncated { need: HEADER_LEN, got: buf.len() });
    }
    if buf[0..2] != MAGIC {
        return Err(WireError::BadMagic([buf[0], buf[1]]));
    }
    if buf[2] != VERSION {
        return Err(WireError::UnsupportedVersion(buf[2]));
    }
    let (index, n) = (buf[3], buf[4]);
    if index >= n {
        return Err(WireError::IndexOutOfRange { index, n });
    }
    let gamma = u32::from_be_bytes([buf[5], buf[6], buf[7], buf[8]]) as usize;
    let total = HEADER_LEN + gamma;
    if buf.len() < total {
        return Err(WireError::Truncated { need: total, got: buf.len() });
    }
    let packet = PetPacket { index: index as usize, payload: buf[HEADER_LEN..total].to_vec() };
    Ok((WirePacket { n_packets: n as usize, packet }, total))
}
