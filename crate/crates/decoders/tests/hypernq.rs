use qldpc_core::channel::{gen_training_set, sample_iid, syndrome};
use qldpc_core::{BitVector, ClassicalCode, CssCode, Hypergraph, NoiseModel, TrainDistConfig};
use qldpc_decoders::hypernq::HyperNq;
use qldpc_decoders::neural::{hyperedge_parities, FeatureEncoder, NeuralModel};
use qldpc_decoders::reference::dense_layer;
use qldpc_tensor::{ParamSet, Tape, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rep_code() -> CssCode {
    CssCode::hypergraph_product(&ClassicalCode::repetition(3), &ClassicalCode::repetition(3))
}

fn model(code: &CssCode, hidden: usize, seed: u64) -> HyperNq<f64> {
    let g = Hypergraph::from_css(code);
    HyperNq::new(g, FeatureEncoder::new(2 * code.n()), hidden, seed).unwrap()
}

/// Replaces every parameter (biases included) with uniform noise so no block is trivially zero.
fn randomize(ps: &mut ParamSet<f64>, rng: &mut ChaCha8Rng) {
    for id in ps.ids().collect::<Vec<_>>() {
        let (r, c) = ps.value(id).shape();
        ps.set_value(id, Tensor::uniform(r, c, -0.5, 0.5, rng))
            .unwrap();
    }
}

fn random_syndromes(code: &CssCode, count: usize, rng: &mut ChaCha8Rng) -> Vec<BitVector> {
    (0..count)
        .map(|_| sample_iid(code, 0.15, NoiseModel::Depolarizing, rng).syndrome)
        .collect()
}

#[test]
fn vectorized_layer_matches_dense_loops() {
    let code = rep_code();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut net = model(&code, 8, 3);
    let syndromes = random_syndromes(&code, 4, &mut rng);
    let refs: Vec<&BitVector> = syndromes.iter().collect();
    for _ in 0..5 {
        randomize(net.params_mut(), &mut rng);
        let mut tape = Tape::new();
        let out = net.forward_layer(&mut tape, &refs).unwrap();
        let g = net.graph().clone();
        let (n, m, nnz) = (g.num_nodes(), g.num_edges(), g.nnz());
        for (b, s) in syndromes.iter().enumerate() {
            let dense = dense_layer(&net, s);
            for p in 0..nnz {
                let (i, j) = (g.pair_nodes()[p], g.pair_edges()[p]);
                let k = g.node_edges(i).position(|e| e == j).unwrap();
                let a = tape.value(out.alpha).data()[b * nnz + p];
                let bt = tape.value(out.beta).data()[b * nnz + p];
                assert!((a - dense.alpha[i][k]).abs() < 1e-9);
                assert!((bt - dense.beta[i][k]).abs() < 1e-9);
            }
            for j in 0..m {
                let row = tape.value(out.edge_features).row(b * m + j);
                for (x, y) in row.iter().zip(&dense.edge_features[j]) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
            for i in 0..n {
                let row = tape.value(out.node_features).row(b * n + i);
                for (x, y) in row.iter().zip(&dense.node_features[i]) {
                    assert!((x - y).abs() < 1e-9);
                }
                assert!((tape.value(out.probs).data()[b * n + i] - dense.probs[i]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn attention_sums_to_one_per_node() {
    let code =
        CssCode::hypergraph_product(&ClassicalCode::hamming7(), &ClassicalCode::repetition(4));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let net = model(&code, 16, 4);
    let syndromes = random_syndromes(&code, 3, &mut rng);
    let refs: Vec<&BitVector> = syndromes.iter().collect();
    let mut tape = Tape::new();
    let out = net.forward_layer(&mut tape, &refs).unwrap();
    let g = net.graph();
    let (n, nnz) = (g.num_nodes(), g.nnz());
    for att in [out.alpha, out.beta] {
        let mut sums = vec![0.0; 3 * n];
        for b in 0..3 {
            for p in 0..nnz {
                sums[b * n + g.pair_nodes()[p]] += tape.value(att).data()[b * nnz + p];
            }
        }
        assert!(sums.iter().all(|s| (s - 1.0).abs() < 1e-12));
    }
}

/// Two hypergraphs over the same feature rows where hyperedge 0 holds node 0
/// alone, or node 0 plus an identical copy of it.
#[test]
fn duplicate_identical_nodes_leave_the_hyperedge_message_unchanged() {
    let single = Hypergraph::new(2, &[vec![0], vec![0, 1], vec![1]]).unwrap();
    let doubled = Hypergraph::new(3, &[vec![0, 2], vec![0, 1, 2], vec![1]]).unwrap();
    let enc = |nodes| FeatureEncoder {
        num_nodes: nodes,
        index_bits: 3,
        llr: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut a = HyperNq::<f64>::new(single, enc(2), 6, 1).unwrap();
    let mut b = HyperNq::<f64>::new(doubled, enc(3), 6, 1).unwrap();
    randomize(a.params_mut(), &mut rng);
    for id in a.params().ids().collect::<Vec<_>>() {
        b.params_mut()
            .set_value(id, a.params().value(id).clone())
            .unwrap();
    }
    let x = Tensor::uniform(2, 4, -1.0, 1.0, &mut rng);
    let mut x3 = x.data().to_vec();
    x3.extend_from_slice(x.row(0));
    a.set_node_features(x).unwrap();
    b.set_node_features(Tensor::from_vec(3, 4, x3).unwrap())
        .unwrap();
    for s in ["000", "100", "110", "111"] {
        let s = BitVector::parse(s).unwrap();
        let mut ta = Tape::new();
        let oa = a.forward_layer(&mut ta, &[&s]).unwrap();
        let mut tb = Tape::new();
        let ob = b.forward_layer(&mut tb, &[&s]).unwrap();
        let ya = ta.value(oa.edge_features).row(0).to_vec();
        let yb = tb.value(ob.edge_features).row(0).to_vec();
        for (p, q) in ya.iter().zip(&yb) {
            assert!((p - q).abs() < 1e-12, "{s}");
        }
        let ma = dense_layer(&a, &s).edge_messages[0].clone();
        let mb = dense_layer(&b, &s).edge_messages[0].clone();
        for (p, q) in ma.iter().zip(&mb) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}

#[test]
fn singleton_hyperedge_message_is_weighted_node_transform() {
    // Node 0 belongs only to hyperedge 0, which holds nothing else: α = 1, B = 1.
    let g = Hypergraph::new(3, &[vec![0], vec![1, 2], vec![2]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut net = HyperNq::<f64>::new(g, FeatureEncoder::new(3), 5, 2).unwrap();
    randomize(net.params_mut(), &mut rng);
    for (s, w) in [("000", 1.0), ("100", 2.0)] {
        let s = BitVector::parse(s).unwrap();
        let dense = dense_layer(&net, &s);
        assert_eq!(dense.alpha[0], vec![1.0]);
        assert_eq!(dense.beta[0], vec![1.0]);
        let f = net
            .node_features()
            .matmul(net.params().value(net.ids().node_embed))
            .unwrap();
        for (c, v) in dense.edge_messages[0].iter().enumerate() {
            assert!((v - w * f.get(0, c)).abs() < 1e-12);
        }
        // D(0) = w_0, so the node message is g_0 itself.
        let g0 = Tensor::from_vec(1, 5, dense.edge_features[0].clone())
            .unwrap()
            .matmul(net.params().value(net.ids().edge_transform))
            .unwrap();
        for (c, v) in dense.node_messages[0].iter().enumerate() {
            assert!((v - g0.data()[c]).abs() < 1e-12);
        }
        let mut tape = Tape::new();
        let out = net.forward_layer(&mut tape, &[&s]).unwrap();
        assert_eq!(tape.value(out.alpha).data()[0], 1.0);
    }
}

#[test]
fn zero_weights_give_the_readout_bias() {
    let code = rep_code();
    let mut net = model(&code, 8, 1);
    let ps = net.params_mut();
    for id in ps.ids().collect::<Vec<_>>() {
        let (r, c) = ps.value(id).shape();
        ps.set_value(id, Tensor::zeros(r, c)).unwrap();
    }
    let b = net.ids().readout_b;
    net.params_mut().set_value(b, Tensor::scalar(0.3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = random_syndromes(&code, 1, &mut rng).pop().unwrap();
    let probs = &net.predict(&[&s]).unwrap()[0];
    let expect = 1.0 / (1.0 + (-0.3f64).exp());
    assert!(probs.iter().all(|p| (p - expect).abs() < 1e-15));
}

#[test]
fn forward_is_pure_and_batch_independent() {
    let code = rep_code();
    let net = model(&code, 16, 9).cast::<f32>();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let syndromes = random_syndromes(&code, 5, &mut rng);
    let refs: Vec<&BitVector> = syndromes.iter().collect();
    let batched = net.predict(&refs).unwrap();
    assert_eq!(batched, net.predict(&refs).unwrap());
    for (s, p) in syndromes.iter().zip(&batched) {
        let single = net.predict(&[s]).unwrap().pop().unwrap();
        let r1 = net.decode_one(s).unwrap();
        assert_eq!(r1, net.decode_one(s).unwrap());
        for (a, b) in single.iter().zip(p) {
            assert!((a - b).abs() < 1e-6);
        }
        assert_eq!(
            r1.syndrome_matched,
            hyperedge_parities(net.graph(), &r1.error) == *s
        );
    }
}

#[test]
fn hyperedge_parities_equal_the_code_syndrome() {
    let code = rep_code();
    let g = Hypergraph::from_css(&code);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let e = BitVector::from_bools((0..2 * code.n()).map(|_| rng.random_bool(0.3)));
        assert_eq!(hyperedge_parities(&g, &e), syndrome(&code, &e).unwrap());
    }
}

#[test]
fn permuting_nodes_permutes_probabilities() {
    let code = rep_code();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut net = model(&code, 8, 11);
    randomize(net.params_mut(), &mut rng);
    let g = net.graph().clone();
    let n = g.num_nodes();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let edges: Vec<Vec<usize>> = (0..g.num_edges())
        .map(|j| g.edge_nodes(j).iter().map(|&i| perm[i]).collect())
        .collect();
    let pg = Hypergraph::new(n, &edges).unwrap();
    let mut permuted = HyperNq::<f64>::new(pg, FeatureEncoder::new(n), 8, 11).unwrap();
    for id in net.params().ids().collect::<Vec<_>>() {
        permuted
            .params_mut()
            .set_value(id, net.params().value(id).clone())
            .unwrap();
    }
    let x = net.node_features();
    let mut px = Tensor::zeros(n, x.cols());
    for i in 0..n {
        px.row_mut(perm[i]).copy_from_slice(x.row(i));
    }
    permuted.set_node_features(px).unwrap();
    for s in random_syndromes(&code, 5, &mut rng) {
        let a = &net.predict(&[&s]).unwrap()[0];
        let b = &permuted.predict(&[&s]).unwrap()[0];
        for i in 0..n {
            assert!((a[i] - b[perm[i]]).abs() < 1e-12);
        }
    }
}

#[test]
fn end_to_end_gradients_match_finite_differences() {
    let code = rep_code();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut net = model(&code, 6, 13);
    randomize(net.params_mut(), &mut rng);
    let samples: Vec<_> = (0..3)
        .map(|_| sample_iid(&code, 0.2, NoiseModel::Depolarizing, &mut rng))
        .collect();
    let refs: Vec<&BitVector> = samples.iter().map(|s| &s.syndrome).collect();
    let target: std::sync::Arc<[f64]> = samples
        .iter()
        .flat_map(|s| s.error.iter().map(|b| if b { 1.0 } else { 0.0 }))
        .collect::<Vec<_>>()
        .into();
    let loss_of = |net: &HyperNq<f64>| {
        let mut tape = Tape::new();
        let probs = net.forward(&mut tape, &refs).unwrap();
        let l = tape.bce_loss(probs, target.clone()).unwrap();
        tape.value(l).data()[0]
    };
    let mut tape = Tape::checked();
    let probs = net.forward(&mut tape, &refs).unwrap();
    let l = tape.bce_loss(probs, target.clone()).unwrap();
    let mut grads = net.params().clone();
    grads.zero_grad();
    tape.backward(l, &mut grads).unwrap();

    let h = 1e-6;
    for id in net.params().ids().collect::<Vec<_>>() {
        let name = net.params().get(id).name.clone();
        for k in 0..net.params().value(id).len() {
            let mut plus = net.clone();
            plus.params_mut().get_mut(id).value.data_mut()[k] += h;
            let mut minus = net.clone();
            minus.params_mut().get_mut(id).value.data_mut()[k] -= h;
            let numeric = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
            let exact = grads.grad(id).data()[k];
            let scale = numeric.abs().max(exact.abs()).max(1e-5);
            assert!(
                (numeric - exact).abs() / scale < 1e-3,
                "{name}[{k}]: {exact} vs {numeric}"
            );
        }
    }
}

/// Glorot-initialized readouts over non-negative ReLU features shift the
/// initial logits per draw, so the ln 2 estimate holds on average over seeds
/// rather than for every seed.
#[test]
fn untrained_loss_is_near_ln2_on_average() {
    let code = CssCode::hypergraph_product(&ClassicalCode::hamming7(), &ClassicalCode::bch15_7());
    let data = gen_training_set(&code, &TrainDistConfig::new(3), 400).unwrap();
    let idx: Vec<usize> = (0..data.len()).collect();
    let graph = Hypergraph::from_css(&code);
    let seeds = 0..5u64;
    let mean: f64 = seeds
        .clone()
        .map(|seed| {
            let net =
                HyperNq::<f32>::new(graph.clone(), FeatureEncoder::new(258), 128, seed).unwrap();
            qldpc_decoders::train::mean_loss(&net, &data, &idx).unwrap()
        })
        .sum::<f64>()
        / seeds.count() as f64;
    assert!((mean - std::f64::consts::LN_2).abs() < 0.2, "{mean}");
}

#[test]
fn zero_readout_gives_exactly_ln2() {
    let code = rep_code();
    let mut net = model(&code, 8, 0);
    let id = net.ids().readout_w;
    net.params_mut().set_value(id, Tensor::zeros(8, 1)).unwrap();
    let data = gen_training_set(&code, &TrainDistConfig::new(1), 40).unwrap();
    let idx: Vec<usize> = (0..data.len()).collect();
    let loss = qldpc_decoders::train::mean_loss(&net, &data, &idx).unwrap();
    assert!((loss - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn rejects_wrong_syndrome_length() {
    let code = rep_code();
    let net = model(&code, 4, 0);
    assert!(net.predict(&[&BitVector::zeros(5)]).is_err());
}
