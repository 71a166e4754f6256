//! Priority encoding transmission (PET).
//!
//! `L` prioritized segments are spread over `N` packets of `Γ` byte-symbols
//! each. Segment `l` has a priority `ρ_l ∈ (0, 1]` and a decoding threshold
//! `k_l = ⌈ρ_l·N⌉`: any `k_l` distinct packets recover it, fewer never do.
//!
//! Segment `l` is cut into blocks of `k_l` symbols (zero padded). Each block
//! is expanded by a systematic MDS code to `N` symbols, symbol `j` going to
//! packet `j`. A segment with `b_l` blocks owns `b_l` consecutive symbol slots
//! in every packet, so `Γ = Σ_l ⌈symbols_l / k_l⌉`.

use alloc::vec::Vec;

use thiserror::Error;

mod codec;
mod layout;
mod mds;
mod priority;
pub mod wire;

pub use codec::{pet_decode, pet_encode, SegmentOutcome};
pub use layout::{pet_feasible, plan_layout, threshold};
pub use priority::assign_priorities;

/// Largest packet count the GF(2^8) code supports.
pub const MAX_PACKETS: usize = 255;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PetError {
    #[error("priority {value} of segment {segment} is outside (0, 1]")]
    BadPriority { segment: usize, value: f64 },
    #[error("{0} packets exceeds the field limit of {MAX_PACKETS}")]
    FieldLimit(usize),
    #[error("packet count must be at least 1")]
    NoPackets,
    #[error("no segments to encode")]
    NoSegments,
    #[error("segment {0} is empty")]
    EmptySegment(usize),
    #[error("{priorities} priorities given for {segments} segments")]
    ProfileMismatch { priorities: usize, segments: usize },
    #[error("segment {segment} needs {k} packets but only {n} exist")]
    Infeasible { segment: usize, k: usize, n: usize },
    #[error("packet payload too large: {0} symbols")]
    PacketTooLarge(u64),
    #[error("packet {index} carries {got} symbols, layout expects {expected}")]
    CorruptPacket { index: usize, expected: usize, got: usize },
    #[error("packet index {0} appears more than once")]
    DuplicateIndex(usize),
    #[error("packet index {index} is out of range for {n} packets")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid layout: {0}")]
    BadLayout(&'static str),
    #[error("invalid popularity distribution: {0}")]
    BadDistribution(&'static str),
    #[error("priority floor {0} is outside (0, 1]")]
    BadFloor(f64),
}

/// One priority per segment, each in `(0, 1]`. Smaller means decodable
/// from fewer packets.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct PriorityProfile {
    rhos: Vec<f64>,
}

impl PriorityProfile {
    pub fn new(rhos: Vec<f64>) -> Result<Self, PetError> {
        for (segment, &value) in rhos.iter().enumerate() {
            if !(value > 0.0 && value <= 1.0) {
                return Err(PetError::BadPriority { segment, value });
            }
        }
        Ok(Self { rhos })
    }

    /// Every segment at `ρ = 1`: decodable only from all packets.
    pub fn uniform(segments: usize) -> Self {
        Self { rhos: alloc::vec![1.0; segments] }
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }
}

impl TryFrom<Vec<f64>> for PriorityProfile {
    type Error = PetError;

    fn try_from(rhos: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(rhos)
    }
}

impl From<PriorityProfile> for Vec<f64> {
    fn from(p: PriorityProfile) -> Self {
        p.rhos
    }
}

/// Placement of one segment inside the packets.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SegmentLayout {
    pub id: u32,
    /// True segment length; decoding strips the symbol padding.
    pub size_bits: u64,
    /// Decoding threshold `⌈ρ·N⌉`.
    pub k: usize,
    /// First symbol slot of this segment inside every packet.
    pub slots_offset: usize,
    /// Number of slots, equal to the number of `k`-symbol source blocks.
    pub slots_len: usize,
}

impl SegmentLayout {
    /// Segment length in whole symbols.
    pub fn symbols(&self) -> usize {
        self.size_bits.div_ceil(8) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PetLayout {
    #[cfg_attr(feature = "serde", serde(rename = "n"))]
    pub n_packets: usize,
    /// `Γ`, in symbols (bytes).
    #[cfg_attr(feature = "serde", serde(rename = "gamma"))]
    pub packet_symbols: usize,
    pub segments: Vec<SegmentLayout>,
}

impl PetLayout {
    /// Re-derives every structural invariant. Layouts read from disk go
    /// through this before decoding.
    pub fn validate(&self) -> Result<(), PetError> {
        if self.n_packets == 0 {
            return Err(PetError::NoPackets);
        }
        if self.n_packets > MAX_PACKETS {
            return Err(PetError::FieldLimit(self.n_packets));
        }
        if self.segments.is_empty() {
            return Err(PetError::NoSegments);
        }
        let mut spans: Vec<(usize, usize)> = Vec::with_capacity(self.segments.len());
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.size_bits == 0 {
                return Err(PetError::EmptySegment(i));
            }
            if seg.k == 0 || seg.k > self.n_packets {
                return Err(PetError::Infeasible { segment: i, k: seg.k, n: self.n_packets });
            }
            if seg.slots_len != seg.symbols().div_ceil(seg.k) {
                return Err(PetError::BadLayout("slot count does not match segment size and threshold"));
            }
            spans.push((seg.slots_offset, seg.slots_offset + seg.slots_len));
        }
        spans.sort_unstable();
        if spans.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(PetError::BadLayout("segment slot ranges overlap"));
        }
        if spans.last().map_or(0, |s| s.1) > self.packet_symbols {
            return Err(PetError::BadLayout("slots exceed packet capacity"));
        }
        Ok(())
    }

    /// Total encoded size `N·Γ` in symbols.
    pub fn encoded_symbols(&self) -> usize {
        self.n_packets * self.packet_symbols
    }
}

/// One encoded packet: position `index` in the codeword and `Γ` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PetPacket {
    pub index: usize,
    pub payload: Vec<u8>,
}
