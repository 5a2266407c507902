use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qldpc", version, about = "Quantum LDPC decoding experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Hypergraph product of two classical codes given as alist files.
    BuildCode(BuildCodeArgs),
    /// Training mixture or i.i.d. evaluation samples.
    GenData(GenDataArgs),
    /// Trains a neural decoder and writes its checkpoint and loss log.
    Train(TrainArgs),
    /// Logical error rate sweep over physical error rates.
    Sweep(SweepArgs),
    /// Re-executes a run from its manifest and compares every output file.
    Replay(ReplayArgs),
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct BuildCodeArgs {
    #[arg(long)]
    pub h1: PathBuf,
    #[arg(long)]
    pub h2: PathBuf,
    /// Output directory for `hx.alist`, `hz.alist` and `meta.txt`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    Train,
    Eval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    Depolarizing,
    IndependentXz,
}

impl From<Noise> for qldpc_core::NoiseModel {
    fn from(n: Noise) -> Self {
        match n {
            Noise::Depolarizing => qldpc_core::NoiseModel::Depolarizing,
            Noise::IndependentXz => qldpc_core::NoiseModel::IndependentXz,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GenDataArgs {
    /// Code directory written by `build-code`.
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum)]
    pub kind: DataKind,
    /// Physical error rate; required for `--kind eval`.
    #[arg(long)]
    pub pf: Option<f64>,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Noise::Depolarizing)]
    pub noise: Noise,
    /// Weight decay rate of the random part of the training mixture.
    #[arg(long, default_value_t = 1.0)]
    pub decay: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a human-readable CSV next to the binary file.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeuralKind {
    Hypernq,
    Gnn,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = NeuralKind::Hypernq)]
    pub decoder: NeuralKind,
    #[arg(long, default_value_t = 300)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Checkpoint path.
    #[arg(long)]
    pub out: PathBuf,
    /// Loss CSV; defaults to the checkpoint path with a `.loss.csv` suffix.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, default_value_t = 5e-5)]
    pub lr: f64,
    #[arg(long, default_value_t = 5e-4)]
    pub wd: f64,
    #[arg(long, default_value_t = 64)]
    pub batch: usize,
    #[arg(long, default_value_t = 128)]
    pub hidden: usize,
    /// GNN depth (ignored for HyperNQ, which has a single layer).
    #[arg(long, default_value_t = 6)]
    pub layers: usize,
    #[arg(long, default_value_t = 0.1)]
    pub val_fraction: f64,
    /// Early-stopping patience in epochs; 0 disables early stopping.
    #[arg(long, default_value_t = 30)]
    pub patience: usize,
    /// Append the channel LLR for this physical error rate to the node features.
    #[arg(long)]
    pub llr_pf: Option<f64>,
    /// Record real wall time in the loss log (makes the log non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepDecoder {
    Bp,
    BpOsd0,
    BpOsd4,
    Gnn,
    Hypernq,
}

impl SweepDecoder {
    pub fn is_neural(self) -> bool {
        matches!(self, SweepDecoder::Gnn | SweepDecoder::Hypernq)
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum)]
    pub decoder: SweepDecoder,
    /// Checkpoint, required for neural decoders.
    #[arg(long)]
    pub ckpt: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = qldpc_eval::report::DEFAULT_PF_LIST)]
    pub pf_list: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Noise::Depolarizing)]
    pub noise: Noise,
    #[arg(long, default_value_t = 32)]
    pub max_iters: usize,
    /// Count failed logical qubits instead of failed blocks.
    #[arg(long)]
    pub per_qubit: bool,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    #[serde(skip, default = "one")]
    pub workers: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Gnuplot data file; defaults to the CSV path with a `.dat` extension.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Where the re-executed outputs go; a temporary directory by default.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
