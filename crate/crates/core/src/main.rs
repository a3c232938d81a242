use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use exterior_wave::closed_form::{cauchy_solution, BoundaryKind, Evaluator};
use exterior_wave::radial_data::RadialProfile;
use exterior_wave::fd_oracle::{cfl_step, solve_1d, FdBoundary};
use exterior_wave::harness::{
    oracle_errors, run_sweep_with, run_verify, ProblemRegistry, SweepConfig, SweepOptions,
    VerifyOptions,
};
use exterior_wave::WaveError;

#[derive(Parser)]
#[command(
    name = "exterior-wave",
    version,
    about = "Radial wave solutions outside a small ball and their vanishing-ball limits"
)]
struct Cli {
    /// Log more (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bc {
    Neumann,
    Dirichlet,
}

impl From<Bc> for BoundaryKind {
    fn from(bc: Bc) -> Self {
        match bc {
            Bc::Neumann => BoundaryKind::Neumann,
            Bc::Dirichlet => BoundaryKind::Dirichlet,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cauchy,
    Neumann,
    Dirichlet,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite and print one line per check.
    Verify {
        /// Sweep config supplying the data; the built-in defaults otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Print the summary as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Measure sup_t ||U - extended exterior solution|| over the configured eps values.
    /// CSV rows go to stdout.
    Sweep {
        #[arg(long, value_enum)]
        bc: Bc,
        #[arg(long)]
        config: PathBuf,
        /// Write the full JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write `eps sup_norm` pairs here.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Compare the closed form with the leapfrog solver on one grid.
    Oracle {
        #[arg(long, value_enum)]
        bc: Kind,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 0.9)]
        cfl: f64,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the grid solution `t,r,v` here.
        #[arg(long)]
        grid_csv: Option<PathBuf>,
    },
    /// Evaluate one solution and its derivatives at (t, r). Exterior solutions
    /// are extended into the ball, so r < eps is allowed.
    Eval {
        #[arg(long, value_enum)]
        bc: Kind,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> exterior_wave::Result<SweepConfig> {
    match path {
        Some(p) => SweepConfig::load(p),
        None => Ok(SweepConfig::default()),
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

struct Built {
    /// The solution on its own domain.
    solution: Evaluator,
    /// The same, extended into the ball for exterior kinds.
    extended: Evaluator,
    boundary: FdBoundary,
    phi: RadialProfile,
    psi: RadialProfile,
}

fn build(sc: &SweepConfig, kind: Kind, eps: f64) -> exterior_wave::Result<Built> {
    let (phi, psi) = sc.profiles()?;
    let bc = match kind {
        Kind::Cauchy => {
            let u: Evaluator = Arc::new(cauchy_solution(&phi, &psi, sc.wave())?);
            return Ok(Built {
                solution: u.clone(),
                extended: u,
                boundary: FdBoundary::CauchyDirichletAtZero,
                phi,
                psi,
            });
        }
        Kind::Neumann => BoundaryKind::Neumann,
        Kind::Dirichlet => BoundaryKind::Dirichlet,
    };
    let problem = ProblemRegistry::with_cutoff(&sc.cutoff)?.for_kind(bc)?;
    let case = problem.build(&phi, &psi, sc.wave(), eps)?;
    Ok(Built {
        solution: case.solution,
        extended: Arc::new(case.extended),
        boundary: problem.fd_boundary(),
        phi: case.phi_eps,
        psi: case.psi_eps,
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify { config, json } => {
            let opts = VerifyOptions {
                config: load_config(config.as_deref())?,
                ..VerifyOptions::default()
            };
            let summary = run_verify(&opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                for c in &summary.checks {
                    println!("{c}");
                }
                let passed = summary.checks.iter().filter(|c| c.passed).count();
                println!("{passed}/{} checks passed", summary.checks.len());
            }
            Ok(if summary.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep {
            bc,
            config,
            json,
            plot,
            sequential,
        } => {
            let sc = SweepConfig::load(&config)?;
            let problem = ProblemRegistry::with_cutoff(&sc.cutoff)?.for_kind(bc.into())?;
            let report = run_sweep_with(&sc, problem.as_ref(), SweepOptions { parallel: !sequential })?;
            report.write_csv(io::stdout().lock())?;
            if let Some(path) = json {
                let mut w = create(&path)?;
                writeln!(w, "{}", report.to_json()?)?;
                w.flush()?;
            }
            if let Some(path) = plot {
                let mut w = create(&path)?;
                report.write_plot_data(&mut w)?;
                w.flush()?;
            }
            match report.fitted_rate {
                Some(rate) => eprintln!("fitted rate {rate:.4}"),
                None => eprintln!("fitted rate undefined (fewer than three positive norms)"),
            }
            Ok(if report.partial { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Oracle {
            bc,
            eps,
            h,
            cfl,
            config,
            grid_csv,
        } => {
            let sc = load_config(config.as_deref())?;
            if !(cfl > 0.0 && cfl <= 1.0) {
                return Err(WaveError::InvalidArgument(format!("cfl must be in (0, 1], got {cfl}")).into());
            }
            let b = build(&sc, bc, eps)?;
            let cfg = sc.wave();
            let k = cfl_step(&cfg, h, cfl);
            let err = oracle_errors(b.solution.as_ref(), &b.phi, &b.psi, eps, b.boundary, &[h], cfl)?[0];
            if let Some(path) = grid_csv {
                let gs = solve_1d(&b.phi, &b.psi, &cfg, eps, b.boundary, h, k)?;
                let mut w = create(&path)?;
                gs.write_csv(&mut w)?;
                w.flush()?;
            }
            let out = json!({"h": h, "k": k, "eps": eps, "max_abs_diff": err});
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { bc, eps, t, r, config } => {
            let sc = load_config(config.as_deref())?;
            let jet = build(&sc, bc, eps)?.extended.jet(t, r)?;
            let out = json!({"t": t, "r": r, "eps": eps, "jet": jet});
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<WaveError>() {
                Some(WaveError::Config(_) | WaveError::InvalidArgument(_) | WaveError::Domain { .. }) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
