//! Minibatch training of the neural decoders.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use qldpc_core::{BitVector, Dataset};
use qldpc_tensor::{Adam, Checkpoint, ParamSet, Real, Tape};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DecoderError, Result};
use crate::neural::{NeuralModel, INFERENCE_BATCH};

/// RNG stream for shuffling, distinct from the one used for initialization.
const SHUFFLE_STREAM: u64 = 7;

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: Adam,
    pub seed: u64,
    /// Fraction of samples held out for early stopping; 0 trains on everything.
    pub val_fraction: f64,
    /// Epochs without validation improvement before stopping.
    pub patience: Option<usize>,
    /// Written whenever the tracked model improves.
    pub checkpoint: Option<PathBuf>,
    /// CSV of `epoch,train_loss,val_loss,wall_time_s`.
    pub log: Option<PathBuf>,
    /// Record real wall time in the log. Off by default so logs are reproducible.
    pub timing: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 300,
            batch_size: 64,
            optimizer: Adam::default(),
            seed: 0,
            val_fraction: 0.1,
            patience: Some(30),
            checkpoint: None,
            log: None,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: Option<f64>,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    pub epochs: Vec<EpochStats>,
    /// Epoch whose weights the model holds on return (1-based).
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl TrainReport {
    pub fn final_train_loss(&self) -> f64 {
        self.epochs.last().map_or(f64::NAN, |e| e.train_loss)
    }
}

/// Mean per-node BCE of `model` over `samples`.
pub fn mean_loss<T: Real, M: NeuralModel<T>>(
    model: &M,
    data: &Dataset,
    samples: &[usize],
) -> Result<f64> {
    if samples.is_empty() {
        return Ok(f64::NAN);
    }
    let mut total = 0.0;
    for chunk in samples.chunks(INFERENCE_BATCH) {
        let syndromes: Vec<&BitVector> = chunk.iter().map(|&k| &data.samples[k].syndrome).collect();
        let mut tape = Tape::new();
        let probs = model.forward(&mut tape, &syndromes)?;
        let target = targets::<T>(data, chunk);
        let loss = tape.bce_loss(probs, target)?;
        total += tape.value(loss).data()[0].as_f64() * chunk.len() as f64;
    }
    Ok(total / samples.len() as f64)
}

fn targets<T: Real>(data: &Dataset, chunk: &[usize]) -> Arc<[T]> {
    chunk
        .iter()
        .flat_map(|&k| {
            data.samples[k]
                .error
                .iter()
                .map(|b| if b { T::one() } else { T::zero() })
        })
        .collect::<Vec<_>>()
        .into()
}

/// Deterministic train/validation split of sample indices.
pub fn split(len: usize, val_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..len).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SHUFFLE_STREAM);
    idx.shuffle(&mut rng);
    let val = ((len as f64) * val_fraction).round() as usize;
    let val = val.min(len.saturating_sub(1));
    let train = idx.split_off(val);
    let mut val_idx = idx;
    val_idx.sort_unstable();
    (train, val_idx)
}

/// Trains `model` in place. On return the model holds the weights of the best
/// validation epoch (or of the last epoch without validation).
pub fn train<T: Real, M: NeuralModel<T>>(
    model: &mut M,
    data: &Dataset,
    cfg: &TrainConfig,
) -> Result<TrainReport> {
    if data.num_nodes != model.num_nodes() || data.num_checks != model.graph().num_edges() {
        return Err(DecoderError::Config(format!(
            "dataset is for {} nodes / {} checks, model expects {} / {}",
            data.num_nodes,
            data.num_checks,
            model.num_nodes(),
            model.graph().num_edges()
        )));
    }
    if data.is_empty() {
        return Err(DecoderError::Config("empty training set".into()));
    }
    if cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(DecoderError::Config(
            "epochs and batch size must be positive".into(),
        ));
    }
    if !(0.0..1.0).contains(&cfg.val_fraction) {
        return Err(DecoderError::Config(format!(
            "validation fraction {} is outside [0, 1)",
            cfg.val_fraction
        )));
    }
    let (mut train_idx, val_idx) = split(data.len(), cfg.val_fraction, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(SHUFFLE_STREAM + 1);

    let mut log = match &cfg.log {
        Some(path) => {
            let mut f = std::io::BufWriter::new(
                std::fs::File::create(path).map_err(qldpc_core::Error::from)?,
            );
            writeln!(f, "epoch,train_loss,val_loss,wall_time_s")
                .map_err(qldpc_core::Error::from)?;
            Some(f)
        }
        None => None,
    };

    let start = Instant::now();
    let mut report = TrainReport {
        epochs: Vec::new(),
        best_epoch: 0,
        stopped_early: false,
    };
    let mut best: Option<(f64, ParamSet<T>)> = None;
    let mut since_best = 0;
    for epoch in 1..=cfg.epochs {
        train_idx.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in train_idx.chunks(cfg.batch_size) {
            let syndromes: Vec<&BitVector> =
                chunk.iter().map(|&k| &data.samples[k].syndrome).collect();
            let mut tape = Tape::checked();
            let probs = model.forward(&mut tape, &syndromes)?;
            let loss = tape.bce_loss(probs, targets::<T>(data, chunk))?;
            total += tape.value(loss).data()[0].as_f64() * chunk.len() as f64;
            let params = model.params_mut();
            params.zero_grad();
            tape.backward(loss, params)?;
            cfg.optimizer.step(params);
        }
        let train_loss = total / train_idx.len() as f64;
        let val_loss = if val_idx.is_empty() {
            None
        } else {
            Some(mean_loss(model, data, &val_idx)?)
        };
        let wall_time_s = if cfg.timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        };
        if let Some(f) = log.as_mut() {
            let val = val_loss.map_or(String::new(), |v| format!("{v:.8}"));
            writeln!(f, "{epoch},{train_loss:.8},{val},{wall_time_s:.3}")
                .map_err(qldpc_core::Error::from)?;
            f.flush().map_err(qldpc_core::Error::from)?;
        }
        report.epochs.push(EpochStats {
            epoch,
            train_loss,
            val_loss,
            wall_time_s,
        });

        let tracked = val_loss.unwrap_or(train_loss);
        let improved = val_loss.is_none() || best.as_ref().is_none_or(|(b, _)| tracked < *b);
        if improved {
            best = Some((tracked, model.params().clone()));
            report.best_epoch = epoch;
            since_best = 0;
            if let Some(path) = &cfg.checkpoint {
                Checkpoint::from_params(model.checkpoint_header(), model.params()).save(path)?;
            }
        } else {
            since_best += 1;
            if cfg.patience.is_some_and(|p| since_best >= p) {
                report.stopped_early = true;
                break;
            }
        }
    }
    if let Some((_, params)) = best {
        let target = model.params_mut();
        for id in params.ids().collect::<Vec<_>>() {
            target.set_value(id, params.value(id).clone())?;
        }
    }
    Ok(report)
}
