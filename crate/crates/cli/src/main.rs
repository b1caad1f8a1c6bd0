use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use catmood::driver::{convergence_study, run_config, RunConfig, RunOptions, Scheme};
use catmood::io::{self, FrameWriter};
use catmood::{Error, Result};

#[derive(Parser)]
#[command(name = "catmood", version, about = "CAT and CATMOOD solvers for hyperbolic conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a configuration file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a case at several resolutions and print the L1 convergence table.
    Converge {
        #[arg(long)]
        case: String,
        #[arg(long)]
        scheme: String,
        /// Comma-separated cell counts per direction, e.g. 50,100,200.
        #[arg(long, default_value = "50,100,200")]
        resolutions: String,
        #[arg(long)]
        cfl: Option<String>,
        #[arg(long)]
        tfinal: Option<String>,
    },
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    tfinal: Option<String>,
    #[arg(long)]
    outdir: Option<String>,
    /// MOOD cascade orders, e.g. 6,4,2,1.
    #[arg(long)]
    cascade: Option<String>,
    #[arg(long)]
    parachute: Option<String>,
    #[arg(long)]
    limiter: Option<String>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        let pairs = [
            ("case", &self.case),
            ("scheme", &self.scheme),
            ("nx", &self.nx),
            ("ny", &self.ny),
            ("cfl", &self.cfl),
            ("tfinal", &self.tfinal),
            ("outdir", &self.outdir),
            ("cascade", &self.cascade),
            ("parachute", &self.parachute),
            ("limiter", &self.limiter),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                io::apply_key(cfg, key, v).map_err(|e| Error::config(format!("--{key}: {e}")))?;
            }
        }
        if cfg.case.is_1d() {
            cfg.ny = 1;
        }
        Ok(())
    }
}

fn solve(config: &PathBuf, overrides: &Overrides) -> Result<()> {
    let text = fs::read_to_string(config).map_err(|e| Error::config(format!("{}: {e}", config.display())))?;
    let mut cfg = io::parse_config(&text)?;
    overrides.apply(&mut cfg)?;
    for w in cfg.validate()? {
        log::warn!("{w}");
    }
    let dir = cfg.outdir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let writer = FrameWriter {
        dir: dir.clone(),
        vtk: cfg.vtk,
    };
    log::info!("{} with {} on {}x{}", cfg.case, cfg.scheme, cfg.nx, cfg.ny);
    let summary = run_config(&cfg, RunOptions::default(), &mut |frame| writer.write(frame))?;
    if matches!(cfg.scheme, Scheme::CatMood(_)) {
        io::write_stats_csv(&summary.records, &dir.join("mood_stats.csv"))?;
    }
    println!("steps {} time {} wall {:.3?}", summary.steps, summary.time, summary.wall);
    if let Some(e) = summary.l1_error {
        println!("L1 error {e:e}");
    }
    Ok(())
}

fn converge(case: &str, scheme: &str, resolutions: &str, cfl: Option<&str>, tfinal: Option<&str>) -> Result<()> {
    let mut cfg = RunConfig::new(case.parse()?, scheme.parse()?, 1, 1);
    if let Some(v) = cfl {
        io::apply_key(&mut cfg, "cfl", v)?;
    }
    if let Some(v) = tfinal {
        io::apply_key(&mut cfg, "tfinal", v)?;
    }
    let ns = io::parse_list(resolutions)?;
    cfg.nx = ns[0];
    cfg.ny = if cfg.case.is_1d() { 1 } else { ns[0] };
    for w in cfg.validate()? {
        log::warn!("{w}");
    }
    let rows = convergence_study(&cfg, &ns)?;
    print!("{}", io::convergence_table(&rows));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { config, overrides } => solve(config, overrides),
        Command::Converge {
            case,
            scheme,
            resolutions,
            cfl,
            tfinal,
        } => converge(case, scheme, resolutions, cfl.as_deref(), tfinal.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
