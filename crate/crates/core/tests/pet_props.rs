use contentcast_core::pet::{
    assign_priorities, pet_decode, pet_encode, pet_feasible, threshold, SegmentOutcome,
};
use contentcast_core::{PetPacket, PriorityProfile};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<f64>, usize)> {
    (1usize..=4, 2usize..=8).prop_flat_map(|(l, n)| {
        (
            prop::collection::vec(prop::collection::vec(any::<u8>(), 1..=32), l),
            prop::collection::vec(0.01f64..=1.0, l),
            Just(n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_subsets_respect_thresholds((segs, rhos, n) in instance(), mask in any::<u32>()) {
        let refs: Vec<&[u8]> = segs.iter().map(|s| s.as_slice()).collect();
        let profile = PriorityProfile::new(rhos.clone()).unwrap();
        let (layout, packets) = pet_encode(&refs, &profile, n).unwrap();
        let kept: Vec<PetPacket> = packets.into_iter().filter(|p| mask & (1 << p.index) != 0).collect();
        let out = pet_decode(&layout, &kept).unwrap();
        for (l, o) in out.iter().enumerate() {
            let k = threshold(rhos[l], n);
            match o {
                SegmentOutcome::Decoded(b) => {
                    prop_assert!(kept.len() >= k);
                    prop_assert_eq!(b, &segs[l]);
                }
                SegmentOutcome::NotYetDecodable { have, need } => {
                    prop_assert!(kept.len() < k);
                    prop_assert_eq!((*have, *need), (kept.len(), k));
                }
            }
        }
    }

    #[test]
    fn encoding_is_linear((segs, rhos, n) in instance(), seed in any::<u64>()) {
        let other: Vec<Vec<u8>> = segs
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().enumerate().map(|(j, _)| (seed >> ((i * 7 + j) % 57)) as u8).collect())
            .collect();
        let xored: Vec<Vec<u8>> = segs
            .iter()
            .zip(&other)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x ^ y).collect())
            .collect();
        let profile = PriorityProfile::new(rhos).unwrap();
        let enc = |v: &Vec<Vec<u8>>| {
            let refs: Vec<&[u8]> = v.iter().map(|s| s.as_slice()).collect();
            pet_encode(&refs, &profile, n).unwrap().1
        };
        let (pa, pb, px) = (enc(&segs), enc(&other), enc(&xored));
        for ((a, b), x) in pa.iter().zip(&pb).zip(&px) {
            let sum: Vec<u8> = a.payload.iter().zip(&b.payload).map(|(p, q)| p ^ q).collect();
            prop_assert_eq!(&sum, &x.payload);
        }
    }

    #[test]
    fn code_never_compresses(sizes in prop::collection::vec(1u64..=512, 1..=6), rhos in prop::collection::vec(0.01f64..=1.0, 6), n in 1usize..=255) {
        let rhos = rhos[..sizes.len()].to_vec();
        let gamma = pet_feasible(&sizes, &PriorityProfile::new(rhos.clone()).unwrap(), n).unwrap();
        let symbols: u64 = sizes.iter().map(|b| b.div_ceil(8)).sum();
        let encoded = (n * gamma) as u64;
        prop_assert!(encoded >= symbols);
        let exact = sizes
            .iter()
            .zip(&rhos)
            .all(|(b, r)| threshold(*r, n) == n && b.div_ceil(8) % n as u64 == 0);
        prop_assert_eq!(encoded == symbols, exact);
    }

    #[test]
    fn priority_order_reverses_popularity(raw in prop::collection::vec(0u32..20, 1..10), floor in 0.01f64..=1.0) {
        let total: u32 = raw.iter().sum();
        prop_assume!(total > 0);
        let pops: Vec<f64> = raw.iter().map(|&r| r as f64 / total as f64).collect();
        let rhos = assign_priorities(&pops, floor).unwrap();
        for i in 0..pops.len() {
            prop_assert!(rhos.rhos()[i] >= floor - 1e-12 && rhos.rhos()[i] <= 1.0);
            for j in 0..pops.len() {
                if raw[i] > raw[j] {
                    prop_assert!(rhos.rhos()[i] < rhos.rhos()[j]);
                } else if raw[i] == raw[j] {
                    prop_assert_eq!(rhos.rhos()[i], rhos.rhos()[j]);
                }
            }
        }
    }
}

#[test]
fn smallest_threshold_boundary() {
    // Exactly k_min packets decode the most robust segment and nothing else.
    let segs: [&[u8]; 3] = [b"abcdefgh", b"ijklmnopqr", b"stuv"];
    let profile = PriorityProfile::new(vec![0.25, 0.5, 1.0]).unwrap();
    let (layout, packets) = pet_encode(&segs, &profile, 8).unwrap();
    let out = pet_decode(&layout, &packets[5..7]).unwrap();
    assert_eq!(out[0].bytes(), Some(&b"abcdefgh"[..]));
    assert!(out[1].bytes().is_none() && out[2].bytes().is_none());
}
