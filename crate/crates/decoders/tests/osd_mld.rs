//! OSD-0 against brute-force maximum-likelihood decoding on small random codes.

use proptest::prelude::*;
use qldpc_core::{BitMatrix, BitVector};
use qldpc_decoders::{osd_postprocess, OsdConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    h: BitMatrix,
    priors: Vec<f64>,
}

fn random_instance(rows: usize, cols: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            h.set(r, c, rng.random_bool(0.5));
        }
    }
    let priors = (0..cols).map(|_| rng.random_range(0.01..0.1)).collect();
    Instance { h, priors }
}

fn pattern(bits: u32, n: usize) -> BitVector {
    BitVector::from_bools((0..n).map(|i| bits >> i & 1 == 1))
}

fn likelihood(e: &BitVector, priors: &[f64]) -> f64 {
    priors
        .iter()
        .enumerate()
        .map(|(i, &p)| if e.get(i) { p } else { 1.0 - p })
        .product()
}

/// Every coset of the syndrome map, enumerated once: its MAP member, the MAP
/// member's share of the coset mass, and the exact bitwise posteriors.
struct Coset {
    syndrome: BitVector,
    map: BitVector,
    map_share: f64,
    marginals: Vec<f64>,
}

fn cosets(inst: &Instance) -> Vec<Coset> {
    let n = inst.h.cols();
    let mut by_syndrome: std::collections::BTreeMap<Vec<bool>, Vec<BitVector>> = Default::default();
    for bits in 0u32..(1 << n) {
        let e = pattern(bits, n);
        let s = inst.h.mul(&e).unwrap();
        by_syndrome.entry(s.iter().collect()).or_default().push(e);
    }
    by_syndrome
        .into_values()
        .map(|members| {
            let weights: Vec<f64> = members
                .iter()
                .map(|e| likelihood(e, &inst.priors))
                .collect();
            let total: f64 = weights.iter().sum();
            let best = (0..members.len())
                .max_by(|&a, &b| weights[a].total_cmp(&weights[b]))
                .unwrap();
            let mut marginals = vec![0.0; n];
            for (e, w) in members.iter().zip(&weights) {
                for i in e.iter_ones() {
                    marginals[i] += w / total;
                }
            }
            Coset {
                syndrome: inst.h.mul(&members[best]).unwrap(),
                map: members[best].clone(),
                map_share: weights[best] / total,
                marginals,
            }
        })
        .collect()
}

/// When the MAP pattern carries more than half of its coset's mass, its
/// support is exactly the set of bits with posterior above 1/2, so it sits
/// inside the most reliable columns and OSD-0 recovers it.
#[test]
fn osd0_recovers_map_whenever_it_dominates_its_coset() {
    let mut dominant = 0;
    for seed in 0..60 {
        let inst = random_instance(5, 10, seed);
        for c in cosets(&inst) {
            let out = osd_postprocess(&inst.h, &c.syndrome, &c.marginals, &OsdConfig { order: 0 })
                .unwrap();
            assert_eq!(inst.h.mul(&out).unwrap(), c.syndrome);
            if c.map_share > 0.5 {
                dominant += 1;
                assert_eq!(out, c.map, "seed {seed}");
            }
        }
    }
    assert!(dominant > 500);
}

#[test]
fn exhaustive_osd_on_priors_is_maximum_likelihood() {
    // With order equal to the number of free columns OSD searches the whole
    // coset, and its cost on the priors is the negative log-likelihood.
    for seed in 0..10 {
        let inst = random_instance(5, 10, seed);
        let free = 10 - inst.h.rank();
        for c in cosets(&inst) {
            let out = osd_postprocess(
                &inst.h,
                &c.syndrome,
                &inst.priors,
                &OsdConfig { order: free },
            )
            .unwrap();
            assert_eq!(out, c.map, "seed {seed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn osd0_matches_map_on_dominant_cosets(seed in any::<u64>(), rows in 3usize..7) {
        let inst = random_instance(rows, 9, seed);
        for c in cosets(&inst).into_iter().filter(|c| c.map_share > 0.5) {
            let out = osd_postprocess(&inst.h, &c.syndrome, &c.marginals, &OsdConfig { order: 0 }).unwrap();
            prop_assert_eq!(out, c.map);
        }
    }
}
