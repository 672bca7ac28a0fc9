use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dmrx_cli::{run, validate_config, CliError, PlotKind, Preset};
use dmrx_core::{Method, ScenarioConfig, SweepAxis};

const CONFIG_HELP: &str = "\
Config files hold one `key = value` per line; `#` starts a comment and
absent keys keep their defaults. Units: powers and noise variances in watts,
distances in km, angles in degrees, SNR in dB. Run `dmrx --print-defaults`
for the full key list.";

#[derive(Parser)]
#[command(name = "dmrx", version, about = "Receive beamforming against a full-duplex eavesdropper", after_help = CONFIG_HELP)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// List the built-in sweeps and exit.
    #[arg(long)]
    list_presets: bool,

    /// Print the default configuration as a config file and exit.
    #[arg(long)]
    print_defaults: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    #[value(name = "snr_db")]
    SnrDb,
    #[value(name = "p_m_watt")]
    PMWatt,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write <out>/<name>.csv and <out>/<name>.svg.
    Run {
        /// Scenario config file; defaults apply when omitted.
        config: Option<PathBuf>,

        /// Built-in sweep to run.
        #[arg(long, default_value = "fig2")]
        preset: String,

        /// Comma-separated methods (mrc, wfmrc, max-sr, mmse, lc-mmse, nsp-max-wfrp).
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,

        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// QPSK symbols per point; 0 skips the BER simulation.
        #[arg(long)]
        symbols: Option<u64>,

        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,

        /// Replace the preset's axis values (comma-separated, increasing).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<f64>>,

        /// Axis that --values refers to.
        #[arg(long, value_enum, requires = "values")]
        axis: Option<AxisArg>,
    },
    /// Parse and validate a config file, then print the effective values.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if cli.list_presets {
        for p in Preset::ALL {
            println!("{:<6} {}", p.name(), p.description());
        }
        return Ok(());
    }
    if cli.print_defaults {
        print!("{}", ScenarioConfig::default().to_kv_string());
        return Ok(());
    }
    match cli.command {
        None => {
            eprintln!("nothing to do; try `dmrx --help`");
            Ok(())
        }
        Some(Command::Validate { config }) => {
            print!("{}", validate_config(&config)?.to_kv_string());
            Ok(())
        }
        Some(Command::Run {
            config,
            preset,
            methods,
            out,
            seed,
            symbols,
            workers,
            values,
            axis,
        }) => {
            let base = match &config {
                Some(path) => validate_config(path)?,
                None => ScenarioConfig::default(),
            };
            let preset = Preset::from_name(&preset).ok_or_else(|| {
                CliError::Spec(format!("unknown preset '{preset}' (see --list-presets)"))
            })?;
            let mut spec = preset.spec(base, out);
            spec.seed = seed;
            if let Some(n) = symbols {
                spec.n_symbols = n;
                if n == 0 {
                    spec.plot = PlotKind::SecrecyRate;
                }
            }
            if let Some(names) = methods {
                spec.methods = names
                    .iter()
                    .map(|n| n.parse::<Method>())
                    .collect::<Result<_, _>>()?;
            }
            if let Some(values) = values {
                spec.axis = match axis.unwrap_or(match spec.axis {
                    SweepAxis::SnrDb(_) => AxisArg::SnrDb,
                    SweepAxis::PmWatt(_) => AxisArg::PMWatt,
                }) {
                    AxisArg::SnrDb => SweepAxis::SnrDb(values),
                    AxisArg::PMWatt => SweepAxis::PmWatt(values),
                };
            }
            let output = run(&spec, workers)?;
            print!("{}", output.summary);
            println!("wrote {}", output.csv_path.display());
            println!("wrote {}", output.svg_path.display());
            Ok(())
        }
    }
}
