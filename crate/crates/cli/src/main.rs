use std::io::Write;

use clap::Parser;
use qldpc_cli::{run, Cli};

// Training allocates large short-lived tensors; the system allocator returns
// them to the kernel every step.
#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(lines) => {
            let mut out = std::io::stdout().lock();
            for line in lines {
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
        }
        Err(e) => {
            eprintln!("qldpc: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
