use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use trotter_cli::csv::write_atomic;
use trotter_cli::matrix_file::format_splitting;
use trotter_cli::qpe::{parse_int_list, qpe_table};
use trotter_cli::sweep::{run_sweep, Axis, Grid, KChoice, Metric, Model, SweepSpec};
use trotter_cli::{CliError, CliResult};
use trotter_core::bounds::NormMode;
use trotter_core::models::{SingleQubitModel, XXChainModel};
use trotter_core::qpe::DEFAULT_COUPLING;

/// Parsed as one value; a literal `Vec` would make clap expect repeated flags.
type IntList = Vec<usize>;

#[derive(Parser)]
#[command(
    name = "trotter",
    version,
    about = "First-order Trotter errors and their bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    SingleQubit,
    XxChain,
    CustomFile,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpFormat {
    Matrix,
    Pauli,
}

#[derive(Subcommand)]
enum Command {
    /// Exact errors and bounds along one axis, as CSV.
    Sweep {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Splitting file for `--model custom-file`.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value = "t")]
        axis: Axis,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "l")]
        len: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// start:stop:points
        #[arg(long)]
        grid: Grid,
        #[arg(long, default_value = "exact")]
        mode: NormMode,
        #[arg(long, default_value = "both")]
        metric: Metric,
        #[arg(long, default_value = "auto")]
        k: KChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes a built-in splitting as a matrix file or Pauli terms.
    Dump {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long = "l")]
        len: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        #[arg(long, value_enum, default_value = "matrix")]
        format: DumpFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `t_{b_n}` per chain length, with `t_QPE` in the footer.
    Qpe {
        /// Chain lengths, `a:b` or `a,b,c`.
        #[arg(long = "l", default_value = "5:9", value_parser = parse_int_list)]
        lens: IntList,
        /// Step counts, `a:b` or `a,b,c`.
        #[arg(long, default_value = "1:8", value_parser = parse_int_list)]
        n: IntList,
        #[arg(long, default_value_t = DEFAULT_COUPLING)]
        coupling: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(&path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dump(
    model: ModelArg,
    len: Option<usize>,
    coupling: f64,
    format: DumpFormat,
) -> CliResult<String> {
    match model {
        ModelArg::CustomFile => Err(CliError::Usage("dump needs a built-in model".into())),
        ModelArg::SingleQubit => {
            let model = SingleQubitModel::build();
            let s = model.splitting();
            match format {
                DumpFormat::Matrix => Ok(format_splitting(s.a().matrix(), s.b().matrix())),
                DumpFormat::Pauli => Ok("A\n1 0 X\n\nB\n1 0 Z\n".into()),
            }
        }
        ModelArg::XxChain => {
            let len = len
                .ok_or_else(|| CliError::Usage("--l is required for the xx-chain model".into()))?;
            let chain = XXChainModel::build(len, coupling)?;
            match format {
                DumpFormat::Matrix => {
                    let s = chain.dense_splitting()?;
                    Ok(format_splitting(s.a().matrix(), s.b().matrix()))
                }
                DumpFormat::Pauli => Ok(format!("A\n{}\nB\n{}", chain.a(), chain.b())),
            }
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep {
            model,
            file,
            axis,
            t,
            n,
            len,
            coupling,
            grid,
            mode,
            metric,
            k,
            out,
        } => {
            let model = match (model, file) {
                (ModelArg::CustomFile, Some(path)) => Model::CustomFile(path),
                (ModelArg::CustomFile, None) => {
                    return Err(CliError::Usage("--model custom-file needs --file".into()))
                }
                (_, Some(_)) => {
                    return Err(CliError::Usage("--file needs --model custom-file".into()))
                }
                (ModelArg::SingleQubit, None) => Model::SingleQubit,
                (ModelArg::XxChain, None) => Model::XXChain,
            };
            let spec = SweepSpec {
                model,
                axis,
                t,
                n,
                len,
                coupling,
                grid,
                mode,
                metric,
                k,
            };
            emit(out, &run_sweep(&spec)?.to_csv())
        }
        Command::Dump {
            model,
            len,
            coupling,
            format,
            out,
        } => emit(out, &dump(model, len, coupling, format)?),
        Command::Qpe {
            lens,
            n,
            coupling,
            out,
        } => emit(out, &qpe_table(&lens, &n, coupling)?.to_csv()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trotter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
