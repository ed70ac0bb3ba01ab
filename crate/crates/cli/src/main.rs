mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use uavplan_core::coverage::LinkBudget;
use uavplan_core::packing::{self, MAX_LAYOUT_COUNT};
use uavplan_core::{
    coverage_radius, min_transmit_power, simulate_coverage, CoverageQuery, Error, InterfererSpec,
    LinkGeometry, Scenario,
};

use crate::output::{Field, Format, Rendered, Table};

const UNITS: &str = "Units: angles in degrees, distances in meters, powers in dBm.\n\
Exit codes: 0 success, 1 I/O error, 2 invalid input or scenario, 3 infeasible, 4 numeric failure.";

/// Plan 3D deployments of UAV base stations over a circular area.
#[derive(Parser, Debug)]
#[command(name = "uavplan", version, after_help = UNITS)]
struct Cli {
    /// Scenario file (TOML); defaults to the urban 2 GHz setup over a 5000 m area.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Output format; JSON keeps full precision, CSV prints 6 significant digits.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the Monte-Carlo estimator.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coverage probability of a user at horizontal range R from a UAV at altitude H.
    Coverage {
        /// Horizontal distance from the UAV's nadir to the user, m.
        #[arg(long)]
        range: f64,
        /// UAV altitude, m.
        #[arg(long)]
        altitude: f64,
        /// Horizontal distance from the user to the nearest interfering UAV, m.
        #[arg(long)]
        interferer_range: Option<f64>,
    },
    /// Largest range at which coverage probability meets epsilon.
    Radius {
        /// UAV altitude, m.
        #[arg(long)]
        altitude: f64,
        /// Horizontal distance from the user to the nearest interfering UAV, m.
        #[arg(long)]
        interferer_range: Option<f64>,
    },
    /// Minimum transmit power that meets epsilon at a given range.
    Power {
        /// Horizontal distance from the UAV's nadir to the user, m.
        #[arg(long)]
        range: f64,
        /// UAV altitude, m.
        #[arg(long)]
        altitude: f64,
        /// Horizontal distance from the user to the nearest interfering UAV, m.
        #[arg(long)]
        interferer_range: Option<f64>,
    },
    /// Full deployment plan for M UAVs.
    Plan {
        /// Number of UAVs, 1 to 10.
        #[arg(long)]
        uavs: usize,
    },
    /// Smallest UAV count covering at least THRESHOLD of the area.
    MinUavs {
        /// Required covered fraction of the area, in (0, 1].
        #[arg(long)]
        threshold: f64,
        /// Only consider counts of at least this many UAVs.
        #[arg(long, default_value_t = 1)]
        min_count: usize,
    },
    /// Sweep over UAV count (m) or area radius (rc).
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// First value: UAV count (default 1) or area radius in m (default 1000).
        #[arg(long)]
        start: Option<f64>,
        /// Last value, inclusive: UAV count (default 10) or area radius in m (default 10000).
        #[arg(long)]
        stop: Option<f64>,
        /// Area-radius step in m (default 500); the UAV-count axis always steps by 1.
        #[arg(long)]
        step: Option<f64>,
        /// Coverage threshold for the rc axis.
        #[arg(long, default_value_t = 0.6)]
        threshold: f64,
    },
    /// Monte-Carlo estimate of the coverage probability.
    Validate {
        /// Horizontal distance from the UAV's nadir to the user, m.
        #[arg(long)]
        range: f64,
        /// UAV altitude, m.
        #[arg(long)]
        altitude: f64,
        /// Number of Monte-Carlo samples.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Horizontal distance from the user to the nearest interfering UAV, m.
        #[arg(long)]
        interferer_range: Option<f64>,
    },
    /// Stored circle-packing layout for M circles in the unit disk.
    Layout {
        /// Number of circles, 1 to 10.
        #[arg(long)]
        uavs: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    M,
    Rc,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
            Failure::Core(e) => match e {
                Error::Domain { .. } | Error::Unsupported { .. } | Error::Scenario(_) => 2,
                Error::BeamFootprintViolation { .. }
                | Error::NoCoverage { .. }
                | Error::Unreachable { .. }
                | Error::Infeasible { .. } => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

fn interferer(range: Option<f64>, altitude: f64) -> Result<Option<InterfererSpec>, Error> {
    range
        .map(|x| InterfererSpec::nadir_pointing(x, altitude))
        .transpose()
}

fn query(s: &Scenario, range: f64, altitude: f64, k: Option<f64>) -> Result<CoverageQuery, Error> {
    Ok(
        CoverageQuery::new(LinkGeometry::new(range, altitude)?, s.env, s.radio)
            .with_interferer(interferer(k, altitude)?),
    )
}

#[derive(Serialize)]
struct CoverageOut {
    range_m: f64,
    altitude_m: f64,
    p_cov: f64,
    budget: LinkBudget,
}

#[derive(Serialize)]
struct PowerOut {
    range_m: f64,
    altitude_m: f64,
    tx_power_dbm: f64,
}

#[derive(Serialize)]
struct MinUavsOut {
    area_radius_m: f64,
    threshold: f64,
    min_count: usize,
    min_uav_count: Option<usize>,
}

#[derive(Serialize)]
struct ValidateOut {
    #[serde(flatten)]
    sim: uavplan_core::SimResult,
    analytic_pcov: f64,
    within_3_sigma: bool,
}

fn axis_values(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if step.is_nan() || step <= 0.0 || start.is_nan() || stop.is_nan() || stop < start {
        return Err(Failure::Usage(format!(
            "sweep range needs step > 0 and stop >= start (got {start}..{stop} step {step})"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

fn run(cli: &Cli) -> Result<(Rendered, bool), Failure> {
    let scenario = match &cli.scenario {
        Some(path) => Scenario::from_path(path)?,
        None => Scenario::default(),
    };
    let planner = scenario.planner();
    let area = scenario.area_radius_m;

    let rendered = match &cli.command {
        Command::Coverage {
            range,
            altitude,
            interferer_range,
        } => {
            let q = query(&scenario, *range, *altitude, *interferer_range)?;
            let budget = LinkBudget::evaluate(&q)?;
            let out = CoverageOut {
                range_m: *range,
                altitude_m: *altitude,
                p_cov: budget.coverage_probability(),
                budget,
            };
            let mut t = Table::new(vec!["range_m", "altitude_m", "p_cov"]);
            t.push(vec![
                out.range_m.into(),
                out.altitude_m.into(),
                out.p_cov.into(),
            ]);
            Rendered::new(&out, t)
        }
        Command::Radius {
            altitude,
            interferer_range,
        } => {
            let k = interferer(*interferer_range, *altitude)?;
            let sol = coverage_radius(
                &scenario.radio,
                &scenario.env,
                *altitude,
                k.as_ref(),
                &scenario.solver,
            )?;
            let mut t = Table::new(vec!["altitude_m", "radius_m", "binding", "pcov_at_radius"]);
            let binding = serde_json::to_value(sol.binding).expect("enum serializes");
            t.push(vec![
                (*altitude).into(),
                sol.radius_m.into(),
                Field::Text(binding.as_str().unwrap_or_default().to_string()),
                sol.pcov_at_radius.into(),
            ]);
            Rendered::new(&sol, t)
        }
        Command::Power {
            range,
            altitude,
            interferer_range,
        } => {
            let k = interferer(*interferer_range, *altitude)?;
            let p = min_transmit_power(
                *range,
                &scenario.radio,
                &scenario.env,
                *altitude,
                k.as_ref(),
                &scenario.solver,
            )?;
            let out = PowerOut {
                range_m: *range,
                altitude_m: *altitude,
                tx_power_dbm: p,
            };
            let mut t = Table::new(vec!["range_m", "altitude_m", "tx_power_dbm"]);
            t.push(vec![out.range_m.into(), out.altitude_m.into(), p.into()]);
            Rendered::new(&out, t)
        }
        Command::Plan { uavs } => {
            let plan = planner.plan(area, *uavs)?;
            let mut t = Table::new(vec![
                "uav",
                "x_m",
                "y_m",
                "altitude_m",
                "radius_m",
                "tx_power_dbm",
                "total_coverage",
                "lifetime",
            ]);
            for (i, p) in plan.positions.iter().enumerate() {
                t.push(vec![
                    (i + 1).into(),
                    p.x_m.into(),
                    p.y_m.into(),
                    p.altitude_m.into(),
                    plan.per_uav_radius_m.into(),
                    plan.tx_power_dbm.into(),
                    plan.total_coverage.into(),
                    plan.lifetime.into(),
                ]);
            }
            Rendered::new(&plan, t)
        }
        Command::MinUavs {
            threshold,
            min_count,
        } => {
            let m = planner.min_uav_count_from(area, *threshold, *min_count)?;
            let out = MinUavsOut {
                area_radius_m: area,
                threshold: *threshold,
                min_count: *min_count,
                min_uav_count: m,
            };
            let mut t = Table::new(vec!["area_radius_m", "threshold", "min_uav_count"]);
            t.push(vec![area.into(), (*threshold).into(), m.into()]);
            let rendered = Rendered::new(&out, t);
            return Ok((rendered, m.is_some()));
        }
        Command::Sweep {
            axis: Axis::M,
            start,
            stop,
            ..
        } => {
            let lo = start.unwrap_or(1.0);
            let hi = stop.unwrap_or(MAX_LAYOUT_COUNT as f64);
            if lo < 1.0
                || hi > MAX_LAYOUT_COUNT as f64
                || lo > hi
                || lo.fract() != 0.0
                || hi.fract() != 0.0
            {
                return Err(Failure::Usage(format!(
                    "UAV-count sweep needs integers 1 <= start <= stop <= {MAX_LAYOUT_COUNT}"
                )));
            }
            let rows = planner.sweep_vs_m(area, lo as usize..=hi as usize);
            let mut t = Table::new(vec![
                "uav_count",
                "total_coverage",
                "lifetime",
                "altitude_m",
                "tx_power_dbm",
                "radius_m",
                "error",
            ]);
            for r in &rows {
                t.push(vec![
                    r.uav_count.into(),
                    r.total_coverage.into(),
                    r.lifetime.into(),
                    r.altitude_m.into(),
                    r.tx_power_dbm.into(),
                    r.per_uav_radius_m.into(),
                    r.error.clone().into(),
                ]);
            }
            Rendered::new(&rows, t)
        }
        Command::Sweep {
            axis: Axis::Rc,
            start,
            stop,
            step,
            threshold,
        } => {
            let values = axis_values(
                start.unwrap_or(1000.0),
                stop.unwrap_or(10_000.0),
                step.unwrap_or(500.0),
            )?;
            let rows = planner.sweep_vs_rc(&values, *threshold);
            let mut t = Table::new(vec!["area_radius_m", "min_uav_count", "error"]);
            for r in &rows {
                t.push(vec![
                    r.area_radius_m.into(),
                    r.min_uav_count.into(),
                    r.error.clone().into(),
                ]);
            }
            Rendered::new(&rows, t)
        }
        Command::Validate {
            range,
            altitude,
            samples,
            interferer_range,
        } => {
            let q = query(&scenario, *range, *altitude, *interferer_range)?;
            let sim = simulate_coverage(&q, *samples, cli.seed)?;
            let analytic = uavplan_core::coverage_probability(&q)?;
            let out = ValidateOut {
                sim,
                analytic_pcov: analytic,
                within_3_sigma: sim.agrees_with(analytic, 3.0),
            };
            let mut t = Table::new(vec![
                "empirical_pcov",
                "std_error",
                "n_samples",
                "seed",
                "analytic_pcov",
                "within_3_sigma",
            ]);
            t.push(vec![
                sim.empirical_pcov.into(),
                sim.std_error.into(),
                sim.n_samples.into(),
                sim.seed.into(),
                analytic.into(),
                out.within_3_sigma.into(),
            ]);
            Rendered::new(&out, t)
        }
        Command::Layout { uavs } => {
            let layout = packing::layout(*uavs)?;
            let mut t = Table::new(vec![
                "circle",
                "x_norm",
                "y_norm",
                "radius_norm",
                "total_coverage",
            ]);
            for (i, c) in layout.centers_norm.iter().enumerate() {
                t.push(vec![
                    (i + 1).into(),
                    c[0].into(),
                    c[1].into(),
                    layout.radius_norm.into(),
                    layout.total_coverage.into(),
                ]);
            }
            Rendered::new(&layout, t)
        }
    };
    Ok((rendered, true))
}

fn emit(cli: &Cli, rendered: &Rendered) -> io::Result<()> {
    match &cli.out {
        Some(path) => {
            let mut f = File::create(path)?;
            output::write(rendered, cli.format, &mut f)?;
            f.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            output::write(rendered, cli.format, &mut lock)?;
            lock.flush()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok((rendered, feasible)) => {
            if let Some(column) = rendered.table.non_finite_column() {
                eprintln!("error: numeric failure: non-finite value in {column}");
                return ExitCode::from(4);
            }
            if let Err(e) = emit(&cli, &rendered) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if feasible {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "error: no UAV count in 1..={MAX_LAYOUT_COUNT} meets the coverage threshold"
                );
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
