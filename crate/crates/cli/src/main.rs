use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lagflux_core::euler::sod::ShockTube;
use lagflux_core::io::{lake_at_rest_check, FrameWriter, Scenario, SimConfig};
use lagflux_core::{Error, ErrorKind};

/// Flood and debris simulator built on Lagrange-flux finite volumes.
#[derive(Parser, Debug)]
#[command(name = "lagflux", version)]
struct Cli {
    /// Directory for output files (overrides the configuration).
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,

    /// Write a frame every N steps (0: initial and final frames only).
    #[arg(long, global = true, value_name = "N")]
    frames: Option<u64>,

    /// Only print errors.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the coupled water/debris simulation described by a configuration.
    Run { config: PathBuf },
    /// Sod shock tube against the exact Riemann solution.
    Sod {
        #[arg(long, default_value_t = 384)]
        cells: usize,
    },
    /// Start from a still surface over the configured bed and report the drift.
    LakeAtRest {
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Parse and validate a configuration without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Config => 2,
        ErrorKind::Numerics => 3,
        ErrorKind::Io => 4,
    }
}

macro_rules! say {
    ($cli:expr, $($arg:tt)*) => {
        if !$cli.quiet {
            println!($($arg)*);
        }
    };
}

fn threads_hint(cli: &Cli) {
    let Ok(raw) = std::env::var("SIM_THREADS") else { return };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => say!(cli, "SIM_THREADS={n}: advisory only, the solver runs on one thread"),
        _ => eprintln!("warning: ignoring SIM_THREADS={raw:?}, expected a positive integer"),
    }
}

fn load(path: &Path) -> Result<SimConfig, Error> {
    SimConfig::from_file(path)
}

fn execute(cli: &Cli) -> Result<(), Error> {
    threads_hint(cli);
    match &cli.command {
        Command::Run { config } => run(cli, config),
        Command::Sod { cells } => sod(cli, *cells),
        Command::LakeAtRest { config, steps } => {
            let config = load(config)?;
            let r = lake_at_rest_check(&config, *steps)?;
            say!(
                cli,
                "lake at rest: {} steps to t = {:.6e}, {} wet cells",
                r.steps,
                r.t,
                r.wet_cells
            );
            say!(cli, "max |h + z - level| = {:.3e}", r.level_deviation);
            say!(cli, "max |hu|, |hv|      = {:.3e}", r.max_discharge);
            Ok(())
        }
        Command::Validate { config } => {
            let config = load(config)?;
            let s = Scenario::from_config(&config)?;
            say!(
                cli,
                "{}: ok ({}x{} cells on [{}, {}] x [{}, {}], t_end = {})",
                config.name,
                s.grid.nx,
                s.grid.ny,
                s.grid.x0,
                s.grid.x1,
                s.grid.y0,
                s.grid.y1,
                config.t_end
            );
            Ok(())
        }
    }
}

fn run(cli: &Cli, path: &Path) -> Result<(), Error> {
    let mut config = load(path)?;
    if let Some(dir) = &cli.output_dir {
        config.output.dir = dir.clone();
    }
    if let Some(n) = cli.frames {
        config.output.every = n;
    }
    let mut scenario = Scenario::from_config(&config)?;
    let out = &config.output;
    let mut writer = FrameWriter::new(&out.dir, &config.name, &out.formats)?;
    let volume0 = scenario.state.water.volume();
    let mass0 = scenario.state.debris.mass();
    let start = std::time::Instant::now();
    let frames = scenario.run_with(out.every, |f| {
        writer.write(f)?;
        say!(cli, "frame: step {:>7}  t = {:.6}", f.step, f.t);
        Ok(())
    })?;
    let s = &scenario.state;
    say!(
        cli,
        "{}: {} steps to t = {} in {:.1?}",
        config.name,
        s.step,
        s.t,
        start.elapsed()
    );
    say!(cli, "water volume {:.12e} (initial {:.12e})", s.water.volume(), volume0);
    say!(cli, "debris mass  {:.12e} (initial {:.12e})", s.debris.mass(), mass0);
    if let Some((k, d)) = s.damage.argmax() {
        let (x, y) = scenario.grid.center(k);
        say!(cli, "max damage {d:.6e} at ({x:.4}, {y:.4})");
    }
    say!(
        cli,
        "{frames} frames, {} files in {}",
        writer.written.len(),
        out.dir.display()
    );
    Ok(())
}

fn sod(cli: &Cli, cells: usize) -> Result<(), Error> {
    if cells < 2 {
        return Err(Error::InvalidInput(format!("sod needs at least 2 cells, got {cells}")));
    }
    let tube = ShockTube::sod().with_cells(cells);
    let report = tube.report()?;
    say!(
        cli,
        "sod: {} cells, T = {}, CFL {}, {} steps",
        report.cells,
        tube.t_end,
        tube.cfl,
        report.steps
    );
    say!(cli, "L1(rho) error = {:.6e}", report.l1_density);
    say!(cli, "shock spread  = {} cells", report.shock_spread);
    if let Some(dir) = &cli.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        let path = dir.join(format!("sod_{cells}.csv"));
        report.result.write_csv(&path)?;
        say!(cli, "profile written to {}", path.display());
    }
    Ok(())
}
