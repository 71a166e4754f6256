use alloc::vec;
use alloc::vec::Vec;

use super::mds::SystematicCode;
use super::{plan_layout, PetError, PetLayout, PetPacket, PriorityProfile};

/// Result of decoding one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentOutcome {
    Decoded(Vec<u8>),
    /// Fewer than `need` distinct packets were supplied.
    NotYetDecodable { have: usize, need: usize },
}

impl SegmentOutcome {
    pub fn bytes(&self) -> Option<&[u8]> {
        match self {
            SegmentOutcome::Decoded(b) => Some(b),
            SegmentOutcome::NotYetDecodable { .. } => None,
        }
    }
}

/// Encodes byte segments into `n_packets` packets.
pub fn pet_encode(
    segments: &[&[u8]],
    profile: &PriorityProfile,
    n_packets: usize,
) -> Result<(PetLayout, Vec<PetPacket>), PetError> {
    let sizes: Vec<u64> = segments.iter().map(|s| s.len() as u64 * 8).collect();
    let layout = plan_layout(&sizes, profile, n_packets)?;
    let gamma = layout.packet_symbols;
    let mut payloads = vec![vec![0u8; gamma]; n_packets];

    for (seg, data) in layout.segments.iter().zip(segments) {
        let (k, blocks) = (seg.k, seg.slots_len);
        // columns[i][b] = symbol i of block b
        let columns: Vec<Vec<u8>> = (0..k)
            .map(|i| (0..blocks).map(|b| data.get(b * k + i).copied().unwrap_or(0)).collect())
            .collect();
        let mut coded = vec![vec![0u8; blocks]; n_packets];
        SystematicCode::new(k, n_packets).encode_columns(&columns, &mut coded);
        for (payload, col) in payloads.iter_mut().zip(coded) {
            payload[seg.slots_offset..seg.slots_offset + blocks].copy_from_slice(&col);
        }
    }

    let packets = payloads
        .into_iter()
        .enumerate()
        .map(|(index, payload)| PetPacket { index, payload })
        .collect();
    Ok((layout, packets))
}

/// Decodes every segment reachable from `packets`.
///
/// Segment `l` decodes iff at least `k_l` distinct packets are present.
/// Packet order is irrelevant.
pub fn pet_decode(layout: &PetLayout, packets: &[PetPacket]) -> Result<Vec<SegmentOutcome>, PetError> {
    layout.validate()?;
    let n = layout.n_packets;
    let mut seen = vec![false; n];
    for p in packets {
        if p.index >= n {
            return Err(PetError::IndexOutOfRange { index: p.index, n });
        }
        if p.payload.len() != layout.packet_symbols {
            return Err(PetError::CorruptPacket {
                index: p.index,
                expected: layout.packet_symbols,
                got: p.payload.len(),
            });
        }
        if core::mem::replace(&mut seen[p.index], true) {
            return Err(PetError::DuplicateIndex(p.index));
        }
    }

    let mut sorted: Vec<&PetPacket> = packets.iter().collect();
    sorted.sort_unstable_by_key(|p| p.index);

    let outcomes = layout
        .segments
        .iter()
        .map(|seg| {
            if sorted.len() < seg.k {
                return SegmentOutcome::NotYetDecodable { have: sorted.len(), need: seg.k };
            }
            let span = seg.slots_offset..seg.slots_offset + seg.slots_len;
            let received: Vec<(u8, &[u8])> = sorted[..seg.k]
                .iter()
                .map(|p| (p.index as u8, &p.payload[span.clone()]))
                .collect();
            let columns = SystematicCode::new(seg.k, n).decode_columns(&received);
            let len = seg.symbols();
            let mut out = vec![0u8; len];
            for (i, col) in columns.iter().enumerate() {
                for (b, &sym) in col.iter().enumerate() {
                    if let Some(slot) = out.get_mut(b * seg.k + i) {
                        *slot = sym;
                    }
                }
            }
            SegmentOutcome::Decoded(out)
        })
        .collect();
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn profile(r: &[f64]) -> PriorityProfile {
        PriorityProfile::new(r.to_vec()).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let (layout, packets) = pet_encode(&[&[0u8; 4], &[0u8; 8]], &profile(&[0.5, 1.0]), 4).unwrap();
        assert_eq!(layout.packet_symbols, 4);
        assert!(packets.iter().all(|p| p.payload.iter().all(|&b| b == 0)));
    }

    #[test]
    fn two_segment_every_pair_decodes_first() {
        let a = [0x11u8, 0xA2, 0x37, 0xF4];
        let b = [9u8, 8, 7, 6, 5, 4, 3, 2];
        let (layout, packets) = pet_encode(&[&a, &b], &profile(&[0.5, 1.0]), 4).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let subset = [packets[i].clone(), packets[j].clone()];
                let out = pet_decode(&layout, &subset).unwrap();
                assert_eq!(out[0].bytes(), Some(&a[..]), "pair {i},{j}");
                assert_eq!(out[1], SegmentOutcome::NotYetDecodable { have: 2, need: 4 });
            }
        }
        let out = pet_decode(&layout, &packets).unwrap();
        assert_eq!(out[1].bytes(), Some(&b[..]));
    }

    #[test]
    fn full_priority_needs_every_packet() {
        let (layout, packets) =
            pet_encode(&[&[1u8, 2, 3], &[4u8; 7]], &profile(&[1.0, 1.0]), 5).unwrap();
        for drop in 0..5 {
            let rest: Vec<_> = packets.iter().filter(|p| p.index != drop).cloned().collect();
            let out = pet_decode(&layout, &rest).unwrap();
            assert!(out.iter().all(|o| o.bytes().is_none()));
        }
    }

    #[test]
    fn empty_packet_list() {
        let (layout, _) = pet_encode(&[&[1u8, 2, 3]], &profile(&[0.4]), 5).unwrap();
        let out = pet_decode(&layout, &[]).unwrap();
        assert_eq!(out, std::vec![SegmentOutcome::NotYetDecodable { have: 0, need: 2 }]);
    }

    #[test]
    fn rejects_bad_packets() {
        let (layout, packets) = pet_encode(&[&[1u8, 2, 3]], &profile(&[0.4]), 5).unwrap();
        let mut short = packets[1].clone();
        short.payload.pop();
        assert!(matches!(pet_decode(&layout, &[short]), Err(PetError::CorruptPacket { .. })));
        let dup = [packets[2].clone(), packets[2].clone()];
        assert_eq!(pet_decode(&layout, &dup), Err(PetError::DuplicateIndex(2)));
        let mut far = packets[0].clone();
        far.index = 9;
        assert!(matches!(pet_decode(&layout, &[far]), Err(PetError::IndexOutOfRange { .. })));
    }
}
