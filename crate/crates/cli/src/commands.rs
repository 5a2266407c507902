use std::path::{Path, PathBuf};
use std::time::Instant;

use qldpc_core::channel::gen_training_set;
use qldpc_core::{
    ChannelConfig, ClassicalCode, CssCode, Dataset, Decoder, Hypergraph, NoiseModel,
    TrainDistConfig,
};
use qldpc_decoders::{
    BpConfig, BpOsd, CssBp, FeatureEncoder, HyperNq, NeuralModel, OsdConfig, TannerGnn, TrainConfig,
};
use qldpc_eval::{measure_ler, write_csv, write_gnuplot, FailureMode, LerConfig, SweepReport};
use qldpc_tensor::{Adam, Checkpoint};

use crate::args::{
    BuildCodeArgs, DataKind, GenDataArgs, NeuralKind, SweepArgs, SweepDecoder, TrainArgs,
};
use crate::error::{CliError, Result};

/// What a command read, wrote and has to say.
#[derive(Debug, Default)]
pub struct Outcome {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<(String, PathBuf)>,
    pub summary: Vec<String>,
}

pub const CODE_FILES: [&str; 3] = ["hx.alist", "hz.alist", "meta.txt"];

fn code_inputs(dir: &Path) -> Vec<PathBuf> {
    CODE_FILES.iter().map(|f| dir.join(f)).collect()
}

fn load_code(dir: &Path) -> Result<CssCode> {
    CssCode::load_dir(dir).map_err(|e| CliError::input(dir, e))
}

pub fn default_log_path(out: &Path) -> PathBuf {
    out.with_extension("loss.csv")
}

pub fn default_plot_path(out: &Path) -> PathBuf {
    out.with_extension("dat")
}

pub fn data_csv_path(out: &Path) -> PathBuf {
    out.with_extension("csv")
}

pub fn build_code(a: &BuildCodeArgs) -> Result<Outcome> {
    let h1 = ClassicalCode::load_alist(&a.h1).map_err(|e| CliError::input(&a.h1, e))?;
    let h2 = ClassicalCode::load_alist(&a.h2).map_err(|e| CliError::input(&a.h2, e))?;
    let code = CssCode::hypergraph_product(&h1, &h2);
    let report = code.validate();
    if !report.passed() {
        return Err(CliError::Input(format!("not a valid CSS code\n{report}")));
    }
    code.save_dir(&a.out)?;
    Ok(Outcome {
        inputs: vec![a.h1.clone(), a.h2.clone()],
        outputs: CODE_FILES
            .iter()
            .map(|f| (f.to_string(), a.out.join(f)))
            .collect(),
        summary: report.to_string().lines().map(String::from).collect(),
    })
}

pub fn gen_data(a: &GenDataArgs) -> Result<Outcome> {
    if a.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let code = load_code(&a.code)?;
    let usage = |e: qldpc_core::Error| CliError::Usage(e.to_string());
    let (data, what) = match a.kind {
        DataKind::Train => {
            if a.pf.is_some() {
                return Err(CliError::Usage("--pf applies to --kind eval only".into()));
            }
            let cfg = TrainDistConfig {
                decay: a.decay,
                include_zero: true,
                include_singletons: true,
                seed: a.seed,
            };
            let data = gen_training_set(&code, &cfg, a.count).map_err(usage)?;
            (data, format!("training mixture (decay {})", a.decay))
        }
        DataKind::Eval => {
            let p =
                a.pf.ok_or_else(|| CliError::Usage("--kind eval needs --pf".into()))?;
            let channel = ChannelConfig {
                p,
                model: a.noise.into(),
                seed: a.seed,
            };
            let data = Dataset::eval(&code, channel, a.count).map_err(usage)?;
            (
                data,
                format!(
                    "i.i.d. {} samples at p_f = {p}",
                    NoiseModel::from(a.noise).as_str()
                ),
            )
        }
    };
    data.write(&a.out)?;
    let mut outputs = vec![("dataset".to_string(), a.out.clone())];
    if a.csv {
        let csv = data_csv_path(&a.out);
        data.write_csv(&csv)?;
        outputs.push(("dataset_csv".into(), csv));
    }
    Ok(Outcome {
        inputs: code_inputs(&a.code),
        outputs,
        summary: vec![format!(
            "wrote {} {what} for {} to {}",
            data.len(),
            code.name(),
            a.out.display()
        )],
    })
}

pub fn train(a: &TrainArgs) -> Result<Outcome> {
    let code = load_code(&a.code)?;
    let data = Dataset::read(&a.data).map_err(|e| CliError::input(&a.data, e))?;
    data.validate(&code)
        .map_err(|e| CliError::input(&a.data, e))?;
    let graph = Hypergraph::from_css(&code);
    let mut encoder = FeatureEncoder::new(graph.num_nodes());
    if let Some(p) = a.llr_pf {
        encoder = encoder
            .with_llr(NoiseModel::Depolarizing.component_rate(p))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let log = a.log.clone().unwrap_or_else(|| default_log_path(&a.out));
    let cfg = TrainConfig {
        epochs: a.epochs,
        batch_size: a.batch,
        optimizer: Adam {
            lr: a.lr,
            weight_decay: a.wd,
            ..Adam::default()
        },
        seed: a.seed,
        val_fraction: a.val_fraction,
        patience: (a.patience > 0).then_some(a.patience),
        checkpoint: Some(a.out.clone()),
        log: Some(log.clone()),
        timing: a.timing,
    };
    let decoder = match a.decoder {
        NeuralKind::Hypernq => "hypernq",
        NeuralKind::Gnn => "gnn",
    };
    let mut summary = vec![format!(
        "decoder={decoder} lr={:e} wd={:e} batch={} hidden={} epochs={} seed={}",
        a.lr, a.wd, a.batch, a.hidden, a.epochs, a.seed
    )];
    let config_error = |e: qldpc_decoders::DecoderError| CliError::Usage(e.to_string());
    let report = match a.decoder {
        NeuralKind::Hypernq => {
            let mut model =
                HyperNq::<f32>::new(graph, encoder, a.hidden, a.seed).map_err(config_error)?;
            let report = qldpc_decoders::train(&mut model, &data, &cfg).map_err(config_error)?;
            Checkpoint::from_params(model.checkpoint_header(), model.params()).save(&a.out)?;
            report
        }
        NeuralKind::Gnn => {
            let mut model = TannerGnn::<f32>::new(graph, encoder, a.hidden, a.layers, a.seed)
                .map_err(config_error)?;
            let report = qldpc_decoders::train(&mut model, &data, &cfg).map_err(config_error)?;
            Checkpoint::from_params(model.checkpoint_header(), model.params()).save(&a.out)?;
            report
        }
    };
    let best = &report.epochs[report.best_epoch - 1];
    summary.push(format!(
        "{} epochs{}, best epoch {} (train loss {:.6}{})",
        report.epochs.len(),
        if report.stopped_early {
            " (early stop)"
        } else {
            ""
        },
        report.best_epoch,
        best.train_loss,
        best.val_loss
            .map_or(String::new(), |v| format!(", val loss {v:.6}")),
    ));
    summary.push(format!("checkpoint {}", a.out.display()));
    let mut inputs = code_inputs(&a.code);
    inputs.push(a.data.clone());
    Ok(Outcome {
        inputs,
        outputs: vec![
            ("checkpoint".into(), a.out.clone()),
            ("loss_log".into(), log),
        ],
        summary,
    })
}

fn neural_decoder(a: &SweepArgs, code: &CssCode) -> Result<Box<dyn Decoder>> {
    let path = a
        .ckpt
        .as_ref()
        .ok_or_else(|| CliError::Usage("--ckpt is required for neural decoders".into()))?;
    let ck = Checkpoint::<f32>::load(path).map_err(|e| CliError::input(path, e))?;
    let graph = Hypergraph::from_css(code);
    let input = |e: qldpc_decoders::DecoderError| CliError::input(path, e);
    Ok(match a.decoder {
        SweepDecoder::Hypernq => Box::new(HyperNq::from_checkpoint(graph, &ck).map_err(input)?),
        _ => Box::new(TannerGnn::from_checkpoint(graph, &ck).map_err(input)?),
    })
}

fn classical_decoder(a: &SweepArgs, code: &CssCode, p: f64) -> Result<Box<dyn Decoder>> {
    let bp = BpConfig {
        max_iters: a.max_iters,
        ..BpConfig::default()
    };
    let model = a.noise.into();
    let usage = |e: qldpc_decoders::DecoderError| CliError::Usage(e.to_string());
    Ok(match a.decoder {
        SweepDecoder::Bp => Box::new(CssBp::new(code, p, model, bp).map_err(usage)?),
        SweepDecoder::BpOsd0 => {
            Box::new(BpOsd::new(code, p, model, bp, OsdConfig { order: 0 }).map_err(usage)?)
        }
        SweepDecoder::BpOsd4 => {
            Box::new(BpOsd::new(code, p, model, bp, OsdConfig { order: 4 }).map_err(usage)?)
        }
        _ => unreachable!("neural decoders are loaded from checkpoints"),
    })
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome> {
    if a.pf_list.is_empty() || a.pf_list.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(CliError::Usage("--pf-list needs rates in (0, 1)".into()));
    }
    if a.trials == 0 || a.workers == 0 {
        return Err(CliError::Usage(
            "--trials and --workers must be positive".into(),
        ));
    }
    if !a.decoder.is_neural() && a.ckpt.is_some() {
        return Err(CliError::Usage(
            "--ckpt only applies to neural decoders".into(),
        ));
    }
    let code = load_code(&a.code)?;
    let neural = if a.decoder.is_neural() {
        Some(neural_decoder(a, &code)?)
    } else {
        None
    };
    let mut summary = Vec::new();
    let mut points = Vec::new();
    let mut name = String::new();
    for &p in &a.pf_list {
        let classical;
        let decoder: &dyn Decoder = match &neural {
            Some(d) => d.as_ref(),
            None => {
                classical = classical_decoder(a, &code, p)?;
                classical.as_ref()
            }
        };
        name = decoder.name().to_string();
        let cfg = LerConfig {
            channel: ChannelConfig {
                p,
                model: a.noise.into(),
                seed: a.seed,
            },
            trials: a.trials,
            workers: a.workers,
            mode: if a.per_qubit {
                FailureMode::PerQubit
            } else {
                FailureMode::Block
            },
            batch: 256,
        };
        let start = Instant::now();
        let pt = measure_ler(&code, decoder, &cfg)?;
        summary.push(format!(
            "{name} p_f={p:e} LER={:.4e} [{:.4e}, {:.4e}] ({} / {}, {:.1} s)",
            pt.ler,
            pt.ci_low,
            pt.ci_high,
            pt.failures,
            pt.trials,
            start.elapsed().as_secs_f64()
        ));
        points.push(pt);
    }
    let report = SweepReport::new(name, points);
    summary.push(format!("{}: {}", report.decoder, report.pseudo_threshold));
    let mut notes = vec![format!(
        "{} [[{}, {}]], {} noise, seed {}, {} trials per point, {} counting",
        code.name(),
        code.n(),
        code.k(),
        NoiseModel::from(a.noise).as_str(),
        a.seed,
        a.trials,
        if a.per_qubit {
            "per-qubit"
        } else {
            "per-block"
        }
    )];
    if a.decoder == SweepDecoder::Gnn {
        notes.push("gnn: generic Tanner-graph GNN stand-in, not a reproduction of a published architecture".into());
    }
    let plot = a.plot.clone().unwrap_or_else(|| default_plot_path(&a.out));
    write_csv(std::slice::from_ref(&report), &a.out)?;
    write_gnuplot(std::slice::from_ref(&report), &notes, &plot)?;
    let mut inputs = code_inputs(&a.code);
    inputs.extend(a.ckpt.clone());
    Ok(Outcome {
        inputs,
        outputs: vec![
            ("report_csv".into(), a.out.clone()),
            ("plot_data".into(), plot),
        ],
        summary,
    })
}
