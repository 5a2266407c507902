//! A logistic regression trained through the public tape and optimizer.

use std::sync::Arc;

use qldpc_tensor::{Adam, Checkpoint, CheckpointHeader, ParamSet, Tape, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn separable(count: usize, rng: &mut ChaCha8Rng) -> (Tensor<f64>, Arc<[f64]>) {
    let truth = [2.0, -3.0, 0.5];
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..count {
        let row: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let margin: f64 = row.iter().zip(truth).map(|(a, b)| a * b).sum::<f64>() + 0.2;
        y.push(if margin > 0.0 { 1.0 } else { 0.0 });
        x.extend(row);
    }
    (Tensor::from_vec(count, 3, x).unwrap(), y.into())
}

#[test]
fn adam_fits_a_separable_problem_and_survives_a_checkpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (x, y) = separable(256, &mut rng);
    let mut ps = ParamSet::new();
    let w = ps.add_weight("w", 3, 1, &mut rng);
    let b = ps.add_bias("b", 1);
    let opt = Adam {
        lr: 0.05,
        weight_decay: 0.0,
        ..Adam::default()
    };
    let loss = |ps: &ParamSet<f64>, backward: bool| {
        let mut ps = ps.clone();
        let mut tape = Tape::checked();
        let input = tape.constant(x.clone());
        let (wv, bv) = (tape.param(&ps, w), tape.param(&ps, b));
        let z = tape.matmul(input, wv).unwrap();
        let z = tape.add_row(z, bv).unwrap();
        let p = tape.sigmoid(z).unwrap();
        let l = tape.bce_loss(p, y.clone()).unwrap();
        if backward {
            ps.zero_grad();
            tape.backward(l, &mut ps).unwrap();
        }
        (tape.value(l).data()[0], ps)
    };
    let start = loss(&ps, false).0;
    for _ in 0..1000 {
        let (_, mut with_grads) = loss(&ps, true);
        opt.step(&mut with_grads);
        ps = with_grads;
    }
    let end = loss(&ps, false).0;
    assert!(start > 0.4 && end < 0.1, "{start} -> {end}");

    let header = CheckpointHeader {
        arch: "logistic".into(),
        c1: 0,
        c2: 0,
        d: 3,
        seed: 1,
        metadata: Default::default(),
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.qnet");
    Checkpoint::from_params(header.clone(), &ps).save(&path).unwrap();
    let loaded = Checkpoint::<f64>::load(&path).unwrap();
    assert_eq!(loaded.header, header);
    let mut fresh = ParamSet::new();
    fresh.add("w", Tensor::zeros(3, 1));
    fresh.add("b", Tensor::zeros(1, 1));
    loaded.load_into(&mut fresh).unwrap();
    assert_eq!(loss(&fresh, false).0, end);
}
