//! `lienard`: spectra, orbits, symmetry tables and the acceptance report
//! for a Lienard model described by a config file.

mod config;
mod export;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lienard_core::classical::{default_step, estimate_period, integrate_orbit};
use lienard_core::criteria::{amplitude_family, run_all};
use lienard_core::quantum::{
    apply_characteristic, build_hamiltonian, closed_form_eigenfunction, closed_form_eigenvalue,
    creation_operator, default_x_range, eigenvector, lowest_eigenvalues, overlap, vonroos_residual,
    COMPLIANT,
};
use lienard_core::symmetry::{sample_points, symmetry_report};
use lienard_core::LienardModel;

use config::{load_config, Config};
use export::{gnuplot_script, num, PlotSpec, Table};

#[derive(Parser, Debug)]
#[command(name = "lienard", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Model configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of levels, overriding the config.
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Write a gnuplot script next to the CSV.
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest eigenvalues of the grid Hamiltonian against the closed form.
    Spectrum,
    /// Grid eigenvector of one level.
    Eigenfunction {
        #[arg(long, default_value_t = 0)]
        state: usize,
    },
    /// RK4 orbit with energy and u = h^2/2.
    Classical {
        /// Starting position; by default the turning point half a unit
        /// of energy above the potential minimum.
        #[arg(long, allow_negative_numbers = true)]
        x0: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        v0: f64,
        #[arg(long, default_value_t = 5.0)]
        periods: f64,
    },
    /// Lie residuals and Noether classification of the eight generators.
    Symmetries,
    /// Ladder states against the closed-form eigenfunctions.
    Ladder,
    /// von Roos ordering residuals.
    Vonroos,
    /// The acceptance criteria as a pass/fail table.
    Report,
}

enum Failure {
    Usage(String),
    Run(String),
    Checks,
}

impl From<lienard_core::Error> for Failure {
    fn from(e: lienard_core::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

struct Output {
    table: Table,
    plot: Option<PlotSpec>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Failure::Usage("--config PATH is required".into()))?;
    let mut cfg = load_config(path).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(l) = cli.levels {
        if l == 0 {
            return Err(Failure::Usage("--levels must be at least 1".into()));
        }
        cfg.levels = l;
    }
    if cli.plot && cli.out.is_none() {
        return Err(Failure::Usage("--plot needs --out".into()));
    }
    let m = cfg.model().map_err(|e| Failure::Usage(e.to_string()))?;
    let (output, failed) = match &cli.command {
        Command::Spectrum => (spectrum(&m, &cfg)?, false),
        Command::Eigenfunction { state } => (eigenfunction(&m, &cfg, *state)?, false),
        Command::Classical { x0, v0, periods } => (classical(&m, *x0, *v0, *periods)?, false),
        Command::Symmetries => (symmetries(&m, &cfg)?, false),
        Command::Ladder => (ladder(&m, &cfg)?, false),
        Command::Vonroos => (vonroos(&m, &cfg)?, false),
        Command::Report => report(&cfg),
    };
    write(&output, cli.out.as_deref())?;
    if failed {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn write(output: &Output, out: Option<&Path>) -> Result<(), Failure> {
    let csv = output.table.to_csv();
    let Some(path) = out else {
        print!("{csv}");
        return Ok(());
    };
    let io = |e: std::io::Error| Failure::Run(format!("cannot write {}: {e}", path.display()));
    fs::write(path, csv).map_err(io)?;
    if let Some(plot) = &output.plot {
        fs::write(
            path.with_extension("gp"),
            gnuplot_script(&output.table, path, plot),
        )
        .map_err(io)?;
    }
    Ok(())
}

fn grid(
    m: &LienardModel,
    cfg: &Config,
) -> Result<lienard_core::quantum::DiscreteHamiltonian, Failure> {
    let range = default_x_range(m, cfg.levels)?;
    Ok(build_hamiltonian(m, cfg.grid_n, range)?)
}

fn spectrum(m: &LienardModel, cfg: &Config) -> Result<Output, Failure> {
    let ev = lowest_eigenvalues(&grid(m, cfg)?, cfg.levels)?;
    let mut table = Table::new(&["n", "E_numeric", "E_closed", "abs_err"]);
    for (n, e) in ev.iter().enumerate() {
        let c = closed_form_eigenvalue(m, n);
        table.push(vec![n.to_string(), num(*e), num(c), num((e - c).abs())]);
    }
    Ok(Output {
        table,
        plot: Some(PlotSpec {
            title: "spectrum".into(),
            x_col: 0,
            y_cols: vec![1, 2],
            x_label: "n",
            y_label: "E",
            points: true,
        }),
    })
}

fn eigenfunction(m: &LienardModel, cfg: &Config, state: usize) -> Result<Output, Failure> {
    if state >= cfg.levels {
        return Err(Failure::Usage(format!(
            "--state {state} must be below the level count {}",
            cfg.levels
        )));
    }
    let h = grid(m, cfg)?;
    let ev = lowest_eigenvalues(&h, state + 1)?;
    let g = eigenvector(&h, ev[state])?;
    let mut table = Table::new(&["x", "xi", "psi"]);
    for i in 0..g.x.len() {
        table.push(vec![num(g.x[i]), num(g.xi[i]), num(g.psi[i])]);
    }
    Ok(Output {
        table,
        plot: Some(PlotSpec {
            title: format!("level {state}, E = {:.10}", ev[state]),
            x_col: 0,
            y_cols: vec![2],
            x_label: "x",
            y_label: "psi",
            points: false,
        }),
    })
}

fn classical(m: &LienardModel, x0: Option<f64>, v0: f64, periods: f64) -> Result<Output, Failure> {
    let x0 = match x0 {
        Some(x) => x,
        None => amplitude_family(m, 0.5)?[0],
    };
    if !(periods > 0.0 && periods.is_finite()) {
        return Err(Failure::Usage("--periods must be positive".into()));
    }
    let nominal = if m.is_harmonic() { 2.0 } else { 1.0 } * std::f64::consts::PI / m.omega();
    let tr = integrate_orbit(m, x0, v0, periods * nominal, default_step(m))?;
    let title = match estimate_period(&tr) {
        Ok(p) => {
            log::info!("estimated period {p:.12}, nominal {nominal:.12}");
            format!("orbit from x0 = {x0}, period {p:.10}")
        }
        Err(e) => {
            log::info!("no period estimate: {e}");
            format!("orbit from x0 = {x0}")
        }
    };
    let u = tr.u()?;
    let mut table = Table::new(&["t", "x", "v", "energy", "u"]);
    for (i, u) in u.iter().enumerate() {
        table.push(vec![
            num(tr.time(i)),
            num(tr.x()[i]),
            num(tr.v()[i]),
            num(tr.energy()[i]),
            num(*u),
        ]);
    }
    Ok(Output {
        table,
        plot: Some(PlotSpec {
            title,
            x_col: 0,
            y_cols: vec![1, 4],
            x_label: "t",
            y_label: "x, u",
            points: false,
        }),
    })
}

fn symmetries(m: &LienardModel, cfg: &Config) -> Result<Output, Failure> {
    let mut table = Table::new(&["generator", "max_residual", "classification"]);
    for row in symmetry_report(m, cfg.seed)? {
        table.push(vec![
            row.generator,
            num(row.max_residual),
            row.classification.as_str().to_string(),
        ]);
    }
    Ok(Output { table, plot: None })
}

fn ladder(m: &LienardModel, cfg: &Config) -> Result<Output, Failure> {
    let up = creation_operator(m)?;
    let mut table = Table::new(&["n", "E_ladder", "E_closed", "overlap"]);
    let mut got = closed_form_eigenfunction(m, 0)?;
    for n in 0..cfg.levels {
        if n > 0 {
            got = apply_characteristic(m, &up, &got)?;
        }
        let want = closed_form_eigenfunction(m, n)?;
        table.push(vec![
            n.to_string(),
            num(got.energy()),
            num(want.energy()),
            num(overlap(m, got.spatial(), want.spatial())?),
        ]);
    }
    Ok(Output { table, plot: None })
}

fn vonroos(m: &LienardModel, cfg: &Config) -> Result<Output, Failure> {
    let orderings = [COMPLIANT, (-0.25, -0.5, -0.25), (0.0, 0.0, -1.0)];
    let points = sample_points(m, 50, cfg.seed);
    let mut table = Table::new(&["alpha", "beta", "gamma", "max_residual"]);
    for (a, b, c) in orderings {
        let mut worst = 0.0f64;
        for n in 0..cfg.levels {
            let st = closed_form_eigenfunction(m, n)?;
            for p in &points {
                worst = worst.max(vonroos_residual(m, &st, a, b, c, p.t, p.x)?);
            }
        }
        table.push(vec![num(a), num(b), num(c), num(worst)]);
    }
    Ok(Output { table, plot: None })
}

fn report(cfg: &Config) -> (Output, bool) {
    let mut table = Table::new(&["id", "criterion", "passed", "detail"]);
    let mut failed = false;
    for c in run_all(cfg.seed) {
        eprintln!("{}", c.line());
        for i in &c.info {
            eprintln!("      {i}");
        }
        failed |= !c.passed;
        table.push(vec![
            c.id.to_string(),
            c.title.to_string(),
            c.passed.to_string(),
            c.measured.clone(),
        ]);
    }
    (Output { table, plot: None }, failed)
}
