use proptest::prelude::*;
use qldpc_core::{
    BitMatrix, BitVector, ChannelConfig, ClassicalCode, CssCode, Decoder, NoiseModel,
};
use qldpc_decoders::{BpConfig, CssBp};
use qldpc_eval::{
    measure_ler, measure_ler_with, FailureMode, LerConfig, LogicalClassifier, Residual,
};

fn rep_code() -> CssCode {
    CssCode::hypergraph_product(&ClassicalCode::repetition(3), &ClassicalCode::repetition(3))
}

fn big_code() -> CssCode {
    CssCode::hypergraph_product(&ClassicalCode::hamming7(), &ClassicalCode::bch15_7())
}

struct ZeroDecoder(usize);

impl Decoder for ZeroDecoder {
    fn name(&self) -> &str {
        "zero"
    }

    fn decode(&self, _: &BitVector) -> BitVector {
        BitVector::zeros(self.0)
    }
}

fn rowspace(h: &BitMatrix) -> Vec<BitVector> {
    let ech = h.row_reduce();
    let basis: Vec<BitVector> = (0..ech.rank).map(|r| ech.reduced.row(r)).collect();
    (0u64..1 << basis.len())
        .map(|mask| {
            let mut v = BitVector::zeros(h.cols());
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            v
        })
        .collect()
}

/// Probability that a depolarizing error is itself a stabilizer, by summing
/// over every element of the stabilizer group.
fn stabilizer_mass(code: &CssCode, p: f64) -> f64 {
    let xs = rowspace(code.hx());
    let zs = rowspace(code.hz());
    let mut total = 0.0;
    for a in &xs {
        for b in &zs {
            total += (0..code.n())
                .map(|q| match (a.get(q), b.get(q)) {
                    (false, false) => 1.0 - p,
                    _ => p / 3.0,
                })
                .product::<f64>();
        }
    }
    total
}

#[test]
fn oracle_decoder_never_fails() {
    let code = rep_code();
    for seed in 0..3 {
        let cfg = LerConfig::new(ChannelConfig::new(0.05, seed).unwrap(), 9000);
        let pt = measure_ler_with(&code, &cfg, |batch| {
            batch.iter().map(|s| s.error.clone()).collect()
        })
        .unwrap();
        assert_eq!(pt.failures, 0);
        assert_eq!(pt.ler, 0.0);
    }
}

#[test]
fn identity_decoder_matches_enumerated_stabilizer_mass() {
    let code = rep_code();
    let p = 0.01;
    let expected = 1.0 - stabilizer_mass(&code, p);
    let cfg = LerConfig::new(ChannelConfig::new(p, 11).unwrap(), 200_000);
    let pt = measure_ler(&code, &ZeroDecoder(26), &cfg).unwrap();
    let sigma = (expected * (1.0 - expected) / pt.trials as f64).sqrt();
    assert!(
        (pt.ler - expected).abs() < 4.0 * sigma,
        "{} vs {expected}",
        pt.ler
    );
    assert!(pt.ci_low < expected && expected < pt.ci_high);
}

#[test]
fn worker_count_does_not_change_the_result() {
    let code = rep_code();
    let bp = CssBp::new(&code, 0.03, NoiseModel::Depolarizing, BpConfig::default()).unwrap();
    let mut cfg = LerConfig::new(ChannelConfig::new(0.03, 5).unwrap(), 3 * 4096 + 17);
    let one = measure_ler(&code, &bp, &cfg).unwrap();
    cfg.workers = 3;
    cfg.batch = 100;
    let three = measure_ler(&code, &bp, &cfg).unwrap();
    assert_eq!(one, three);
    assert_eq!(one, measure_ler(&code, &bp, &cfg).unwrap());
}

#[test]
fn bp_beats_doing_nothing() {
    let code = rep_code();
    let p = 0.01;
    let bp = CssBp::new(&code, p, NoiseModel::Depolarizing, BpConfig::default()).unwrap();
    let cfg = LerConfig::new(ChannelConfig::new(p, 2).unwrap(), 20_000);
    let with_bp = measure_ler(&code, &bp, &cfg).unwrap();
    let without = measure_ler(&code, &ZeroDecoder(26), &cfg).unwrap();
    assert!(with_bp.separated_from(&without) && with_bp.ler < without.ler);
}

#[test]
fn per_qubit_counts_scale_trials_by_k() {
    let code = big_code();
    let mut cfg = LerConfig::new(ChannelConfig::new(0.002, 1).unwrap(), 500);
    cfg.mode = FailureMode::PerQubit;
    let pt = measure_ler(&code, &ZeroDecoder(258), &cfg).unwrap();
    assert_eq!(pt.trials, 500 * 28);
    cfg.mode = FailureMode::Block;
    let block = measure_ler(&code, &ZeroDecoder(258), &cfg).unwrap();
    assert!(pt.failures >= block.failures);
}

#[test]
fn rejects_zero_trials() {
    let cfg = LerConfig::new(ChannelConfig::new(0.01, 0).unwrap(), 0);
    assert!(measure_ler(&rep_code(), &ZeroDecoder(26), &cfg).is_err());
}

#[test]
fn generator_rows_classify_exhaustively() {
    for code in [rep_code(), big_code()] {
        let c = LogicalClassifier::new(&code);
        let n = code.n();
        let zero = BitVector::zeros(2 * n);
        let x = |v: BitVector| v.concat(&BitVector::zeros(n));
        let z = |v: BitVector| BitVector::zeros(n).concat(&v);
        for r in 0..code.hx().rows() {
            assert_eq!(
                c.classify(&zero, &x(code.hx().row(r))).unwrap(),
                Residual::Stabilizer
            );
        }
        for r in 0..code.hz().rows() {
            assert_eq!(
                c.classify(&zero, &z(code.hz().row(r))).unwrap(),
                Residual::Stabilizer
            );
        }
        for q in 0..code.k() {
            let mut expect = vec![false; code.k()];
            expect[q] = true;
            let lx = x(code.lx().row(q));
            let lz = z(code.lz().row(q));
            assert_eq!(
                c.classify(&zero, &lx).unwrap(),
                Residual::Logical {
                    flipped: expect.clone()
                }
            );
            assert_eq!(
                c.classify(&zero, &lz).unwrap(),
                Residual::Logical { flipped: expect }
            );
            // Independent confirmation: the logical pairs anticommute, stabilizers do not.
            assert!(code.lx().row(q).dot(&code.lz().row(q)));
            assert!(!code.hx().in_rowspace(&code.lx().row(q)).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_a_class_function(
        support in proptest::collection::vec(0usize..258, 0..8),
        est in proptest::collection::vec(0usize..258, 0..8),
        stab in proptest::collection::vec(0usize..101, 0..6),
    ) {
        let code = big_code();
        let c = LogicalClassifier::new(&code);
        let n = code.n();
        let e = BitVector::from_support(2 * n, &support);
        let est = BitVector::from_support(2 * n, &est);
        let mut shifted = est.clone();
        for r in stab {
            let row = if r < code.m_x() {
                code.hx().row(r).concat(&BitVector::zeros(n))
            } else {
                BitVector::zeros(n).concat(&code.hz().row(r - code.m_x()))
            };
            shifted.xor_assign(&row);
        }
        prop_assert_eq!(c.classify(&e, &est).unwrap(), c.classify(&e, &shifted).unwrap());
    }

    #[test]
    fn zero_syndrome_residuals_are_stabilizers_iff_they_commute_with_logicals(
        coeffs in proptest::collection::vec(any::<bool>(), 45 + 56 + 56),
    ) {
        // Random element of ker: stabilizers plus a random combination of logicals.
        let code = big_code();
        let n = code.n();
        let mut rx = BitVector::zeros(n);
        let mut rz = BitVector::zeros(n);
        let mut it = coeffs.into_iter();
        for r in 0..code.m_x() {
            if it.next().unwrap() { rx.xor_assign(&code.hx().row(r)); }
        }
        for r in 0..code.m_z() {
            if it.next().unwrap() { rz.xor_assign(&code.hz().row(r)); }
        }
        for q in 0..code.k() {
            if it.next().unwrap() { rx.xor_assign(&code.lx().row(q)); }
            if it.next().unwrap() { rz.xor_assign(&code.lz().row(q)); }
        }
        let r = LogicalClassifier::new(&code).classify(&BitVector::zeros(2 * n), &rx.concat(&rz)).unwrap();
        let stabilizer = code.hx().in_rowspace(&rx).unwrap() && code.hz().in_rowspace(&rz).unwrap();
        prop_assert_ne!(r == Residual::SyndromeMismatch, true);
        prop_assert_eq!(r == Residual::Stabilizer, stabilizer);
    }
}
