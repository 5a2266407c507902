//! Monte Carlo logical error rate measurement.

use rayon::prelude::*;

use qldpc_core::channel::{EvalStream, EVAL_CHUNK};
use qldpc_core::{BitVector, ChannelConfig, CssCode, Decoder, Sample};

use crate::error::{EvalError, Result};
use crate::logical::LogicalClassifier;
use crate::stats::LerPoint;

/// What counts as one failure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FailureMode {
    /// One failure per trial whose residual is not a stabilizer.
    #[default]
    Block,
    /// One failure per damaged logical qubit; trials are counted as `trials·k`.
    PerQubit,
}

#[derive(Clone, Copy, Debug)]
pub struct LerConfig {
    pub channel: ChannelConfig,
    pub trials: usize,
    /// Worker threads. Results do not depend on this.
    pub workers: usize,
    pub mode: FailureMode,
    /// Syndromes handed to the decoder per call.
    pub batch: usize,
}

impl LerConfig {
    pub fn new(channel: ChannelConfig, trials: usize) -> Self {
        Self {
            channel,
            trials,
            workers: 1,
            mode: FailureMode::Block,
            batch: 256,
        }
    }
}

/// Measures the LER of an arbitrary batch decoding function. `decode` sees the
/// full samples so that oracle decoders can be expressed; real decoders must
/// only read the syndromes.
pub fn measure_ler_with<F>(code: &CssCode, cfg: &LerConfig, decode: F) -> Result<LerPoint>
where
    F: Fn(&[Sample]) -> Vec<BitVector> + Sync,
{
    if cfg.trials == 0 {
        return Err(EvalError::Config("trials must be at least 1".into()));
    }
    if cfg.workers == 0 || cfg.batch == 0 {
        return Err(EvalError::Config(
            "workers and batch size must be positive".into(),
        ));
    }
    let classifier = LogicalClassifier::new(code);
    let k = classifier.k();
    if cfg.mode == FailureMode::PerQubit && k == 0 {
        return Err(EvalError::Config("per-qubit counting needs k >= 1".into()));
    }
    let chunks = cfg.trials.div_ceil(EVAL_CHUNK);
    let run_chunk = |c: usize| -> Result<u64> {
        let count = EVAL_CHUNK.min(cfg.trials - c * EVAL_CHUNK);
        let samples: Vec<Sample> = EvalStream::starting_at(code, cfg.channel, c, count)?.collect();
        let mut failures = 0u64;
        for batch in samples.chunks(cfg.batch) {
            let estimates = decode(batch);
            if estimates.len() != batch.len() {
                return Err(EvalError::Length {
                    what: "decoded batch",
                    expected: batch.len(),
                    found: estimates.len(),
                });
            }
            for (s, est) in batch.iter().zip(&estimates) {
                let r = classifier.classify(&s.error, est)?;
                failures += match cfg.mode {
                    FailureMode::Block => u64::from(r.is_failure()),
                    FailureMode::PerQubit => r.failed_qubits(k) as u64,
                };
            }
        }
        Ok(failures)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EvalError::Config(format!("thread pool: {e}")))?;
    // Integer counts summed per chunk: the total is independent of scheduling.
    let per_chunk: Vec<u64> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(run_chunk)
            .collect::<Result<_>>()
    })?;
    let failures: u64 = per_chunk.iter().sum();
    let trials = match cfg.mode {
        FailureMode::Block => cfg.trials as u64,
        FailureMode::PerQubit => (cfg.trials * k) as u64,
    };
    Ok(LerPoint::from_counts(cfg.channel.p, trials, failures))
}

pub fn measure_ler(code: &CssCode, decoder: &dyn Decoder, cfg: &LerConfig) -> Result<LerPoint> {
    measure_ler_with(code, cfg, |batch| {
        let syndromes: Vec<BitVector> = batch.iter().map(|s| s.syndrome.clone()).collect();
        decoder.decode_batch(&syndromes)
    })
}
