use alloc::vec::Vec;

use super::{PetError, PetLayout, PriorityProfile, SegmentLayout, MAX_PACKETS};
use crate::num::ceil_fraction;

/// Decoding threshold `⌈ρ·N⌉`.
pub fn threshold(rho: f64, n_packets: usize) -> usize {
    ceil_fraction(rho, n_packets).max(1)
}

/// Computes the packet layout for segments of the given bit sizes.
///
/// Segment ids are their positions in `segment_sizes_bits`. The returned
/// `packet_symbols` is the smallest `Γ` that fits every segment.
pub fn plan_layout(
    segment_sizes_bits: &[u64],
    profile: &PriorityProfile,
    n_packets: usize,
) -> Result<PetLayout, PetError> {
    if n_packets == 0 {
        return Err(PetError::NoPackets);
    }
    if n_packets > MAX_PACKETS {
        return Err(PetError::FieldLimit(n_packets));
    }
    if segment_sizes_bits.is_empty() {
        return Err(PetError::NoSegments);
    }
    if profile.len() != segment_sizes_bits.len() {
        return Err(PetError::ProfileMismatch {
            priorities: profile.len(),
            segments: segment_sizes_bits.len(),
        });
    }

    let mut offset = 0usize;
    let mut segments = Vec::with_capacity(segment_sizes_bits.len());
    for (i, (&bits, &rho)) in segment_sizes_bits.iter().zip(profile.rhos()).enumerate() {
        if bits == 0 {
            return Err(PetError::EmptySegment(i));
        }
        let k = threshold(rho, n_packets);
        if k > n_packets {
            return Err(PetError::Infeasible { segment: i, k, n: n_packets });
        }
        let symbols = bits.div_ceil(8);
        let slots = symbols.div_ceil(k as u64);
        let slots = usize::try_from(slots).map_err(|_| PetError::PacketTooLarge(slots))?;
        segments.push(SegmentLayout {
            id: i as u32,
            size_bits: bits,
            k,
            slots_offset: offset,
            slots_len: slots,
        });
        offset = offset
            .checked_add(slots)
            .ok_or(PetError::PacketTooLarge(u64::MAX))?;
    }
    if offset as u64 > u64::from(u32::MAX) {
        // Γ travels as a 32-bit field on the wire.
        return Err(PetError::PacketTooLarge(offset as u64));
    }
    Ok(PetLayout { n_packets, packet_symbols: offset, segments })
}

/// Minimal packet size `Γ` (in symbols) for which a priority encoding exists.
pub fn pet_feasible(
    segment_sizes_bits: &[u64],
    profile: &PriorityProfile,
    n_packets: usize,
) -> Result<usize, PetError> {
    plan_layout(segment_sizes_bits, profile, n_packets).map(|l| l.packet_symbols)
}
