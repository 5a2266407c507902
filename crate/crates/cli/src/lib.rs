//! The `qldpc` pipeline: every subcommand records a manifest that `replay`
//! can re-execute and compare byte for byte.

pub mod args;
pub mod commands;
mod error;
pub mod manifest;

use std::path::{Path, PathBuf};

pub use args::{Cli, Command};
pub use error::{CliError, Result};
use manifest::{manifest_path, Manifest};

fn existing(path: &Path) -> Result<PathBuf> {
    std::fs::canonicalize(path).map_err(|e| CliError::input(path, e))
}

fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Makes every path absolute so the manifest replays from any directory.
fn normalize(cmd: Command) -> Result<Command> {
    Ok(match cmd {
        Command::BuildCode(mut a) => {
            a.h1 = existing(&a.h1)?;
            a.h2 = existing(&a.h2)?;
            a.out = absolute(&a.out)?;
            Command::BuildCode(a)
        }
        Command::GenData(mut a) => {
            a.code = existing(&a.code)?;
            a.out = absolute(&a.out)?;
            Command::GenData(a)
        }
        Command::Train(mut a) => {
            a.code = existing(&a.code)?;
            a.data = existing(&a.data)?;
            a.out = absolute(&a.out)?;
            a.log = a.log.as_deref().map(absolute).transpose()?;
            Command::Train(a)
        }
        Command::Sweep(mut a) => {
            a.code = existing(&a.code)?;
            a.ckpt = a.ckpt.as_deref().map(existing).transpose()?;
            a.out = absolute(&a.out)?;
            a.plot = a.plot.as_deref().map(absolute).transpose()?;
            Command::Sweep(a)
        }
        Command::Replay(mut a) => {
            a.manifest = existing(&a.manifest)?;
            Command::Replay(a)
        }
    })
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
        }
        _ => Ok(()),
    }
}

/// Runs one recorded command and writes its manifest.
fn execute(cmd: Command) -> Result<(Manifest, Vec<String>)> {
    let cmd = normalize(cmd)?;
    let outcome = match &cmd {
        Command::BuildCode(a) => commands::build_code(a)?,
        Command::GenData(a) => {
            ensure_parent(&a.out)?;
            commands::gen_data(a)?
        }
        Command::Train(a) => {
            ensure_parent(&a.out)?;
            commands::train(a)?
        }
        Command::Sweep(a) => {
            ensure_parent(&a.out)?;
            commands::sweep(a)?
        }
        Command::Replay(_) => unreachable!("replay is not recorded"),
    };
    let path = manifest_path(&cmd).expect("recorded commands have a manifest");
    let manifest = Manifest::new(cmd, &outcome.inputs, &outcome.outputs)?;
    manifest.write(&path)?;
    let mut summary = outcome.summary;
    summary.push(format!("manifest {}", path.display()));
    Ok((manifest, summary))
}

/// Moves every output of `cmd` into `dir`, keeping file names.
fn retarget(cmd: Command, dir: &Path) -> Command {
    let into = |p: &Path| dir.join(p.file_name().expect("output paths name a file"));
    match cmd {
        Command::BuildCode(mut a) => {
            a.out = into(&a.out);
            Command::BuildCode(a)
        }
        Command::GenData(mut a) => {
            a.out = into(&a.out);
            Command::GenData(a)
        }
        Command::Train(mut a) => {
            a.log = Some(into(
                &a.log.unwrap_or_else(|| commands::default_log_path(&a.out)),
            ));
            a.out = into(&a.out);
            Command::Train(a)
        }
        Command::Sweep(mut a) => {
            a.plot = Some(into(
                &a.plot
                    .unwrap_or_else(|| commands::default_plot_path(&a.out)),
            ));
            a.out = into(&a.out);
            Command::Sweep(a)
        }
        other => other,
    }
}

fn replay(a: &args::ReplayArgs) -> Result<Vec<String>> {
    let recorded = Manifest::read(&a.manifest)?;
    let changed = recorded.changed_inputs();
    if !changed.is_empty() {
        let list: Vec<String> = changed.iter().map(|p| p.display().to_string()).collect();
        return Err(CliError::Input(format!(
            "inputs changed since the run: {}",
            list.join(", ")
        )));
    }
    let temp;
    let dir = match &a.out_dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
            d.clone()
        }
        None => {
            temp = tempfile::tempdir().map_err(|e| CliError::Internal(e.to_string()))?;
            temp.path().to_path_buf()
        }
    };
    let (fresh, _) = execute(retarget(recorded.run.clone(), &dir))?;
    let mut summary = Vec::new();
    let mut mismatched = Vec::new();
    for (role, old) in &recorded.outputs {
        let ok = fresh
            .outputs
            .get(role)
            .is_some_and(|new| new.sha256 == old.sha256);
        summary.push(format!(
            "{} {role} ({})",
            if ok { "identical" } else { "DIFFERS" },
            old.path.display()
        ));
        if !ok {
            mismatched.push(role.clone());
        }
    }
    if !mismatched.is_empty() {
        return Err(CliError::Mismatch(format!(
            "{} (\n{}\n)",
            mismatched.join(", "),
            summary.join("\n")
        )));
    }
    summary.push(format!(
        "all {} outputs reproduced bit-exactly",
        recorded.outputs.len()
    ));
    Ok(summary)
}

/// Executes a parsed command; returns the lines to print.
pub fn run(cmd: Command) -> Result<Vec<String>> {
    match cmd {
        Command::Replay(a) => match normalize(Command::Replay(a))? {
            Command::Replay(a) => replay(&a),
            _ => unreachable!(),
        },
        other => Ok(execute(other)?.1),
    }
}
