//! Pauli error sampling, syndromes, and syndrome–error datasets.
//!
//! An error on `n` qubits is a `2n`-bit vector `(e_X ‖ e_Z)`. Syndromes are
//! ordered like the hypergraph's hyperedges: `H_X·e_Z` (X checks) first, then
//! `H_Z·e_X` (Z checks).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::CssCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

const MAGIC: &[u8; 4] = b"QSYN";
const VERSION: u16 = 1;

/// ChaCha stream id reserved for training-set generation.
const TRAIN_STREAM: u64 = 1;
/// Evaluation chunk `c` draws from stream `EVAL_STREAM_BASE + c`.
const EVAL_STREAM_BASE: u64 = 1 << 32;
/// Number of evaluation samples drawn from one RNG substream.
pub const EVAL_CHUNK: usize = 4096;

/// One syndrome–error pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub error: BitVector,
    pub syndrome: BitVector,
}

/// Computes `[H_X·e_Z ‖ H_Z·e_X]`.
pub fn syndrome(code: &CssCode, error: &BitVector) -> Result<BitVector> {
    let n = code.n();
    if error.len() != 2 * n {
        return Err(Error::Dimension {
            op: "syndrome",
            expected: 2 * n,
            found: error.len(),
        });
    }
    let ex = error.slice(0, n);
    let ez = error.slice(n, n);
    Ok(code.hx().mul(&ez)?.concat(&code.hz().mul(&ex)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseModel {
    /// X, Y or Z each with probability `p/3`.
    Depolarizing,
    /// Independent X and Z flips, each with probability `p`.
    IndependentXz,
}

impl NoiseModel {
    fn tag(self) -> u8 {
        match self {
            NoiseModel::Depolarizing => 1,
            NoiseModel::IndependentXz => 2,
        }
    }

    /// Marginal probability that one component (X or Z) of a qubit is flipped.
    pub fn component_rate(self, p: f64) -> f64 {
        match self {
            NoiseModel::Depolarizing => 2.0 * p / 3.0,
            NoiseModel::IndependentXz => p,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseModel::Depolarizing => "depolarizing",
            NoiseModel::IndependentXz => "independent-xz",
        }
    }
}

impl std::str::FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarizing" | "iid_xz" => Ok(NoiseModel::Depolarizing),
            "independent-xz" => Ok(NoiseModel::IndependentXz),
            _ => Err(Error::Config(format!("unknown noise model {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub p: f64,
    pub model: NoiseModel,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        let cfg = Self {
            p,
            model: NoiseModel::Depolarizing,
            seed,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Config(format!(
                "physical error rate must lie in (0, 1), got {}",
                self.p
            )));
        }
        Ok(())
    }
}

/// Draws one i.i.d. Pauli error and its syndrome.
pub fn sample_iid<R: Rng + ?Sized>(
    code: &CssCode,
    p: f64,
    model: NoiseModel,
    rng: &mut R,
) -> Sample {
    let n = code.n();
    let mut error = BitVector::zeros(2 * n);
    for q in 0..n {
        match model {
            NoiseModel::Depolarizing => {
                let u: f64 = rng.random();
                if u < p {
                    match (3.0 * u / p) as usize {
                        0 => error.set(q, true),
                        1 => error.set(n + q, true),
                        _ => {
                            error.set(q, true);
                            error.set(n + q, true);
                        }
                    }
                }
            }
            NoiseModel::IndependentXz => {
                if rng.random::<f64>() < p {
                    error.set(q, true);
                }
                if rng.random::<f64>() < p {
                    error.set(n + q, true);
                }
            }
        }
    }
    let syndrome = syndrome(code, &error).expect("error length is 2n");
    Sample { error, syndrome }
}

/// RNG for evaluation chunk `chunk` of `seed`. Disjoint from the training stream.
pub fn eval_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(EVAL_STREAM_BASE + chunk);
    rng
}

/// Lazily yields i.i.d. evaluation samples.
///
/// Sample `t` always comes from chunk `t / EVAL_CHUNK`, so workers that start
/// at a chunk boundary reproduce exactly the same samples as a sequential scan.
pub struct EvalStream<'a> {
    code: &'a CssCode,
    cfg: ChannelConfig,
    remaining: usize,
    produced: usize,
    rng: ChaCha8Rng,
}

impl<'a> EvalStream<'a> {
    /// Stream of `count` samples beginning at chunk `first_chunk`.
    pub fn starting_at(
        code: &'a CssCode,
        cfg: ChannelConfig,
        first_chunk: usize,
        count: usize,
    ) -> Result<Self> {
        cfg.check()?;
        if count == 0 {
            return Err(Error::Config("evaluation stream needs count >= 1".into()));
        }
        Ok(Self {
            code,
            cfg,
            remaining: count,
            produced: first_chunk * EVAL_CHUNK,
            rng: eval_rng(cfg.seed, first_chunk as u64),
        })
    }
}

impl Iterator for EvalStream<'_> {
    type Item = Sample;

    fn next(&mut self) -> Option<Sample> {
        if self.remaining == 0 {
            return None;
        }
        if self.produced.is_multiple_of(EVAL_CHUNK) {
            self.rng = eval_rng(self.cfg.seed, (self.produced / EVAL_CHUNK) as u64);
        }
        self.remaining -= 1;
        self.produced += 1;
        Some(sample_iid(
            self.code,
            self.cfg.p,
            self.cfg.model,
            &mut self.rng,
        ))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

pub fn gen_eval_stream(code: &CssCode, cfg: ChannelConfig, count: usize) -> Result<EvalStream<'_>> {
    EvalStream::starting_at(code, cfg, 0, count)
}

/// Mixture used for training: the zero error, every single-component flip,
/// and random errors whose weight `t ≥ 1` has probability `∝ exp(-decay·t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainDistConfig {
    pub decay: f64,
    pub include_zero: bool,
    pub include_singletons: bool,
    pub seed: u64,
}

impl TrainDistConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            decay: 1.0,
            include_zero: true,
            include_singletons: true,
            seed,
        }
    }

    /// How many deterministic samples precede the random block.
    pub fn num_fixed(&self, num_nodes: usize) -> usize {
        self.include_zero as usize
            + if self.include_singletons {
                num_nodes
            } else {
                0
            }
    }

    /// Size of the random block for a dataset of `size` samples.
    pub fn num_random(&self, size: usize, num_nodes: usize) -> usize {
        size.saturating_sub(self.num_fixed(num_nodes))
    }

    /// Normalized `P(t)` for `t = 1..=max_weight`.
    pub fn weight_distribution(&self, max_weight: usize) -> Vec<f64> {
        let raw: Vec<f64> = (1..=max_weight)
            .map(|t| (-self.decay * t as f64).exp())
            .collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / z).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetKind {
    Train,
    Eval(NoiseModel),
}

impl DatasetKind {
    fn tag(self) -> u8 {
        match self {
            DatasetKind::Train => 0,
            DatasetKind::Eval(m) => m.tag(),
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(DatasetKind::Train),
            1 => Ok(DatasetKind::Eval(NoiseModel::Depolarizing)),
            2 => Ok(DatasetKind::Eval(NoiseModel::IndependentXz)),
            t => Err(Error::Format(format!("unknown model tag {t}"))),
        }
    }
}

/// A collection of samples with its generation metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub num_nodes: usize,
    pub num_checks: usize,
    pub seed: u64,
    pub kind: DatasetKind,
    pub samples: Vec<Sample>,
}

pub fn gen_training_set(code: &CssCode, cfg: &TrainDistConfig, size: usize) -> Result<Dataset> {
    let num_nodes = 2 * code.n();
    if size < cfg.num_fixed(num_nodes) || size == 0 {
        return Err(Error::Config(format!(
            "training set of {size} cannot hold the {} deterministic samples",
            cfg.num_fixed(num_nodes)
        )));
    }
    if cfg.decay.is_nan() || cfg.decay <= 0.0 {
        return Err(Error::Config("weight decay rate must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(TRAIN_STREAM);

    let mut errors = Vec::with_capacity(size);
    if cfg.include_zero {
        errors.push(BitVector::zeros(num_nodes));
    }
    if cfg.include_singletons {
        errors.extend((0..num_nodes).map(|i| BitVector::from_support(num_nodes, &[i])));
    }
    let cdf: Vec<f64> = cfg
        .weight_distribution(num_nodes)
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    for _ in 0..cfg.num_random(size, num_nodes) {
        let u: f64 = rng.random();
        let t = cdf.partition_point(|&c| c < u).min(num_nodes - 1) + 1;
        let support = index::sample(&mut rng, num_nodes, t).into_vec();
        errors.push(BitVector::from_support(num_nodes, &support));
    }
    let samples = errors
        .into_iter()
        .map(|error| {
            let syndrome = syndrome(code, &error)?;
            Ok(Sample { error, syndrome })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        num_nodes,
        num_checks: code.m(),
        seed: cfg.seed,
        kind: DatasetKind::Train,
        samples,
    })
}

impl Dataset {
    /// Materializes `count` evaluation samples.
    pub fn eval(code: &CssCode, cfg: ChannelConfig, count: usize) -> Result<Self> {
        let samples = gen_eval_stream(code, cfg, count)?.collect();
        Ok(Self {
            num_nodes: 2 * code.n(),
            num_checks: code.m(),
            seed: cfg.seed,
            kind: DatasetKind::Eval(cfg.model),
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Checks dimensions against `code` and recomputes every syndrome.
    pub fn validate(&self, code: &CssCode) -> Result<()> {
        if self.num_nodes != 2 * code.n() || self.num_checks != code.m() {
            return Err(Error::Format(format!(
                "dataset is {}x{} but code needs {}x{}",
                self.num_nodes,
                self.num_checks,
                2 * code.n(),
                code.m()
            )));
        }
        for (i, s) in self.samples.iter().enumerate() {
            if syndrome(code, &s.error)? != s.syndrome {
                return Err(Error::Format(format!(
                    "sample {i}: stored syndrome is stale"
                )));
            }
        }
        Ok(())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&[self.kind.tag(), 0])?;
        w.write_all(&(self.num_nodes as u32).to_le_bytes())?;
        w.write_all(&(self.num_checks as u32).to_le_bytes())?;
        w.write_all(&(self.samples.len() as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for s in &self.samples {
            w.write_all(&s.error.to_bytes())?;
            w.write_all(&s.syndrome.to_bytes())?;
        }
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(&mut BufReader::new(File::open(path)?))
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut header = [0u8; 32];
        r.read_exact(&mut header)
            .map_err(|_| Error::Format("truncated header".into()))?;
        if &header[..4] != MAGIC {
            return Err(Error::Format("bad magic, not a QSYN dataset".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let kind = DatasetKind::from_tag(header[6])?;
        let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as usize;
        let u64_at = |o: usize| u64::from_le_bytes(header[o..o + 8].try_into().unwrap());
        let num_nodes = u32_at(8);
        let num_checks = u32_at(12);
        let count = u64_at(16) as usize;
        let seed = u64_at(24);
        let (eb, sb) = (num_nodes.div_ceil(8), num_checks.div_ceil(8));
        let mut samples = Vec::with_capacity(count.min(1 << 24));
        let mut ebuf = vec![0u8; eb];
        let mut sbuf = vec![0u8; sb];
        for i in 0..count {
            r.read_exact(&mut ebuf)
                .and_then(|_| r.read_exact(&mut sbuf))
                .map_err(|_| Error::Format(format!("truncated at sample {i} of {count}")))?;
            samples.push(Sample {
                error: BitVector::from_bytes(num_nodes, &ebuf)?,
                syndrome: BitVector::from_bytes(num_checks, &sbuf)?,
            });
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after last sample".into()));
        }
        Ok(Self {
            num_nodes,
            num_checks,
            seed,
            kind,
            samples,
        })
    }

    /// Human-readable export: `index,error,syndrome` with bit strings.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "index,error,syndrome")?;
        for (i, s) in self.samples.iter().enumerate() {
            writeln!(w, "{i},{},{}", s.error, s.syndrome)?;
        }
        w.flush()?;
        Ok(())
    }
}
