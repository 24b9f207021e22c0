use clap::{Args, Parser, Subcommand};
use skcap_cli::config::{parse_grid, Format, Output, SweepConfig, Units};
use skcap_cli::{execute, execute_profile, EXIT_FATAL};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

/// Secret-key capacity of the amplitude-constrained Gaussian source model.
///
/// Exit status: 0 on success, 2 if some grid points did not converge (their
/// rows are still written, marked in the status column), 1 on fatal errors.
#[derive(Parser)]
#[command(name = "skcap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal discrete input, capacity, K and KKT violation per A^2.
    Capacity(Common),
    /// Suboptimal input schemes next to the capacity.
    Schemes(Common),
    /// Closed-form bounds and the high-amplitude limit (no solver).
    Bounds(Common),
    /// Any combination of outputs.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated: capacity, schemes, bounds, kkt.
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "capacity,bounds"
        )]
        outputs: Vec<Output>,
    },
    /// Secrecy density s(x) over [-A, A] for the optimal input.
    KktProfile(Common),
}

#[derive(Args)]
struct Common {
    /// Noise variance of the legitimate receiver.
    #[arg(long, default_value_t = 1.0)]
    var_d: f64,
    /// Noise variance of the eavesdropper.
    #[arg(long, default_value_t = 2.0)]
    var_e: f64,
    /// A^2 values: list `0.5,1,2` and/or inclusive ranges `start:stop:step`.
    #[arg(long, default_value = "0.5:10:0.5")]
    a2_grid: String,
    #[arg(long, value_enum, default_value_t = Units::Nats)]
    units: Units,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; a metadata file `<out>.meta.json` is written next to it.
    /// Without it the table goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of mass points the solver may try.
    #[arg(long, default_value_t = 64)]
    max_k: usize,
}

impl Common {
    fn into_config(self, outputs: impl IntoIterator<Item = Output>) -> anyhow::Result<SweepConfig> {
        Ok(SweepConfig {
            var_d: self.var_d,
            var_e: self.var_e,
            a2_grid: parse_grid(&self.a2_grid)?,
            units: self.units,
            outputs: outputs.into_iter().collect::<BTreeSet<_>>(),
            seed: self.seed,
            out_path: self.out,
            format: self.format,
            max_k: self.max_k,
        })
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let (name, cfg) = match cli.command {
        Command::Capacity(c) => ("capacity", c.into_config([Output::Capacity])?),
        Command::Schemes(c) => (
            "schemes",
            c.into_config([Output::Capacity, Output::Schemes])?,
        ),
        Command::Bounds(c) => ("bounds", c.into_config([Output::Bounds])?),
        Command::Sweep { common, outputs } => ("sweep", common.into_config(outputs)?),
        Command::KktProfile(c) => {
            return Ok(execute_profile(&c.into_config([Output::Capacity])?)?.exit_code())
        }
    };
    Ok(execute(name, &cfg)?.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FATAL } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FATAL)
        }
    }
}
