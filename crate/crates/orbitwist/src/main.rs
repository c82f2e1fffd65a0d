use std::process::ExitCode;

use clap::{Parser, Subcommand};
use orbitwist::{run, Command, Options, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "orbitwist", version, about = "Twisted equivariant bundles over finite groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// Print JSON instead of TSV.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized steps; falls back to ORBITWIST_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Check the cocycle, bundles and loops of a manifest.
    Validate {
        manifest: String,
        #[command(flatten)]
        common: Common,
    },
    /// Second cohomology of a group: a JSON file or "<group> <n>".
    H2 {
        manifest: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the tasks listed in a manifest.
    Report {
        manifest: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance checks, then the manifest if one is given.
    Selftest {
        manifest: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("ORBITWIST_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("ORBITWIST_SEED is not an unsigned integer: `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(format!("ORBITWIST_SEED: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (cmd, manifest, common) = match cli.command {
        Sub::Validate { manifest, common } => (Command::Validate, Some(manifest), common),
        Sub::H2 { manifest, common } => (Command::H2, Some(manifest), common),
        Sub::Report { manifest, common } => (Command::Report, Some(manifest), common),
        Sub::Selftest { manifest, common } => (Command::Selftest, manifest, common),
    };
    let seed = match seed(common.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cmd, &Options { seed, manifest }) {
        Ok(out) => {
            let text = if common.json { out.table.to_json() } else { out.table.to_tsv() };
            print!("{text}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
