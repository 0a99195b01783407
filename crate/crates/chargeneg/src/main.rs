use std::path::PathBuf;
use std::process::ExitCode;

use chargeneg::config::Config;
use chargeneg::formats::{CoefficientFile, EnsembleSpec, HamiltonianFile};
use chargeneg::runner;
use chargeneg::table::{emit, emit_json, Cell, Format, Table};
use chargeneg::{CliError, CliResult};
use chargeneg_core::expansion::{negativity_coefficients, to_f64, Rational};
use chargeneg_core::harness::{build_hamiltonian, summarize_errors};
use clap::{Parser, Subcommand, ValueEnum};

/// Charge-cumulant expansion of fermionic negativity: sweeps, scaling fits,
/// exact coefficients and oracle checks.
#[derive(Parser, Debug)]
#[command(name = "chargeneg", version)]
struct Cli {
    /// Base seed (first sweep seed, oracle seed or Hamiltonian seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Adjacent,
    Distant,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    AllConnected,
    Local,
    TranslationInvariant,
    TightBinding,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-temperature convergence sweep of the expansion.
    Verify,
    /// Zero-temperature interval scaling on the half-filled chain.
    Scaling {
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Exact expansion coefficients of one order.
    Coeffs {
        #[arg(long)]
        order: usize,
        /// Evaluate at this replica index (integer or p/q).
        #[arg(long, conflicts_with = "limit")]
        ne: Option<String>,
        /// Evaluate in the replica limit n_e -> 1.
        #[arg(long)]
        limit: bool,
    },
    /// Compare the Gaussian formulas with exact diagonalization.
    OracleCheck {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        seeds: u64,
    },
    /// Draw a Hamiltonian and write it as JSON.
    GenHamiltonian {
        /// Defaults to the sweep ensemble of the configuration.
        #[arg(long, value_enum)]
        ensemble: Option<Kind>,
        /// Defaults to the sweep size of the configuration.
        #[arg(long)]
        sites: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let out = cli.out.as_deref();
    match cli.command {
        Command::Verify => {
            let cfg = config.sweep.to_config(cli.seed)?;
            let rows = runner::run_sweep(&cfg)?;
            let flagged = rows.iter().filter(|r| !r.is_ok()).count();
            if flagged > 0 {
                eprintln!("{flagged} of {} rows failed; see the status column", rows.len());
            }
            for s in summarize_errors(&rows) {
                eprintln!(
                    "T = {:.4}: |E2 err| ord2 {:.3e}, ord2+4 {:.3e}; replica-limit rel err {:.3e}",
                    s.temperature, s.e2_ord2, s.e2_ord24, s.elim_rel_ord24
                );
            }
            emit(&runner::sweep_table(&rows)?, cli.format.unwrap_or(Format::Csv), out)
        }
        Command::Scaling { mode } => {
            let (table, summary) = match mode {
                Mode::Adjacent => {
                    let rep = runner::run_adjacent(&config.adjacent.to_config())?;
                    (runner::adjacent_table(&rep)?, runner::adjacent_summary(&rep))
                }
                Mode::Distant => {
                    let rep = runner::run_distant(&config.distant.to_config()?)?;
                    (runner::distant_table(&rep)?, runner::distant_summary(&rep))
                }
            };
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    eprintln!("{}", serde_json::to_string_pretty(&summary)?);
                    emit(&table, Format::Csv, out)
                }
                Format::Json => emit_json(&serde_json::json!({ "fits": summary, "table": table.to_json() }), out),
            }
        }
        Command::Coeffs { order, ne, limit } => {
            let symbolic = negativity_coefficients(order)?;
            let n_e: Option<Rational> = match (ne, limit) {
                (Some(s), _) => Some(
                    s.parse()
                        .map_err(|_| CliError::Config(format!("--ne expects an integer or p/q, got {s:?}")))?,
                ),
                (None, true) => Some(Rational::from_integer(1.into())),
                (None, false) => None,
            };
            let coeffs = match &n_e {
                Some(x) => symbolic.at(x)?,
                None => symbolic,
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => emit_json(&serde_json::to_value(CoefficientFile::new(&coeffs, n_e.as_ref()))?, out),
                Format::Csv => {
                    let mut table = Table::new(["a", "b", "coefficient", "value"]);
                    for (&(a, b), f) in coeffs.terms() {
                        let value = f.as_constant().map_or(f64::NAN, |c| to_f64(&c));
                        table.push(vec![a.into(), b.into(), Cell::Text(f.to_string()), value.into()])?;
                    }
                    if table.is_empty() {
                        eprintln!("order {order} has no nonzero coefficients");
                        return Ok(());
                    }
                    emit(&table, Format::Csv, out)
                }
            }
        }
        Command::OracleCheck { modes, seeds } => {
            let first = cli.seed.unwrap_or(1);
            let run = runner::run_oracle_check(modes, first, seeds, &config.oracle.betas, config.oracle.tolerance)?;
            if !run.table.is_empty() {
                emit(&run.table, cli.format.unwrap_or(Format::Csv), out)?;
            }
            if run.failures.is_empty() {
                eprintln!("{seeds} cases agree to {:e}", config.oracle.tolerance);
                Ok(())
            } else {
                let list: Vec<String> = run.failures.iter().map(|(s, m)| format!("seed {s}: {m}")).collect();
                Err(CliError::Acceptance(list.join("; ")))
            }
        }
        Command::GenHamiltonian { ensemble, sites } => {
            if cli.format == Some(Format::Csv) {
                return Err(CliError::Config("gen-hamiltonian writes JSON only".into()));
            }
            let spec = match ensemble {
                None => config.sweep.ensemble.clone(),
                Some(kind) => default_spec(kind, &config.sweep.ensemble),
            };
            let n = sites.unwrap_or(config.sweep.n);
            let seed = cli.seed.unwrap_or(config.sweep.seed_start);
            let h = build_hamiltonian(&(&spec).into(), n, seed)?;
            emit_json(&serde_json::to_value(HamiltonianFile::from(&h))?, out)
        }
    }
}

/// The configured parameters when the kind matches, unit defaults otherwise.
fn default_spec(kind: Kind, configured: &EnsembleSpec) -> EnsembleSpec {
    match (kind, configured) {
        (Kind::AllConnected, s @ EnsembleSpec::AllConnected { .. })
        | (Kind::Local, s @ EnsembleSpec::Local { .. })
        | (Kind::TranslationInvariant, s @ EnsembleSpec::TranslationInvariant { .. })
        | (Kind::TightBinding, s @ EnsembleSpec::TightBinding { .. }) => s.clone(),
        (Kind::AllConnected, _) => EnsembleSpec::AllConnected { scale: 1.0 },
        (Kind::Local, _) => EnsembleSpec::Local {
            decay_length: 1.0,
            scale: 1.0,
        },
        (Kind::TranslationInvariant, _) => EnsembleSpec::TranslationInvariant { range: 3, scale: 1.0 },
        (Kind::TightBinding, _) => EnsembleSpec::TightBinding {
            hopping: 1.0,
            chemical_potential: 0.0,
        },
    }
}
