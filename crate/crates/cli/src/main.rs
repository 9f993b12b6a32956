//! `uwit`: evaluate separability criteria, run detection sweeps and scan the
//! Bell-diagonal tetrahedron from the command line.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use uwit::criteria::{
    bell_tsallis_criterion, bell_variance_criterion, eur_criterion3, linear_witness, maassen_bound,
    nonlinear_witness_value, pauli_lur, CriterionVerdict, Observable, ProductObservable,
};
use uwit::experiments::{
    default_p_grid, format_sig9, geometry_cells, run_detection_sweep_with_workers,
    werner_thresholds, write_detection_csv, write_geometry_csv, GeometryCell,
};
use uwit::matrix::{pauli, Axis};
use uwit::states::{
    bell_diagonal_state, bell_states, is_npt, noisy_singlet, random_separable, sample_noise_ball,
    werner, BellDiagonalCoords, LoadError, NoiseBallConfig,
};
use uwit::{DensityMatrix, Error};

const DEFAULT_SEED: u64 = 42;
const DEFAULT_Q: [f64; 3] = [2.0, 4.0, 15.0];

#[derive(Parser)]
#[command(
    name = "uwit",
    version,
    about = "Entanglement detection with uncertainty relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every applicable criterion on a density-matrix JSON file.
    Evaluate {
        file: PathBuf,
        /// Tsallis index for the Bell-basis criterion (repeatable).
        #[arg(long = "q")]
        q: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detection fractions for noisy singlets over a grid of mixing weights.
    Sweep {
        /// Radius of the noise ball.
        #[arg(long, default_value_t = 0.2)]
        d: f64,
        /// Comma-separated values, or `start:step:end`.
        #[arg(long = "p-grid", value_parser = parse_p_grid)]
        p_grid: Option<PGrid>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, env = "UWIT_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Classify a regular grid over the Bell-diagonal coordinate cube.
    Geometry {
        /// Tsallis index (repeatable); defaults to 2, 4 and 15.
        #[arg(long = "q")]
        q: Vec<f64>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Werner-state thresholds of the witness, the LUR and the PPT test.
    Werner {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write a density-matrix JSON file.
    GenState {
        #[command(subcommand)]
        kind: StateKind,
        #[arg(long, env = "UWIT_SEED", default_value_t = DEFAULT_SEED, global = true)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StateKind {
    /// Bell state 1 to 4 (4 is the singlet).
    Bell { index: usize },
    /// Werner state p·|ψ⁻⟩⟨ψ⁻| + (1 − p)·𝟙/4.
    Werner { p: f64 },
    /// p·|ψ⁻⟩⟨ψ⁻| + (1 − p)·σ with σ drawn from the noise ball of radius d.
    NoisySinglet { p: f64, d: f64 },
    /// Bell-diagonal state with correlation coordinates (x, y, z).
    BellDiagonal {
        #[arg(allow_negative_numbers = true)]
        x: f64,
        #[arg(allow_negative_numbers = true)]
        y: f64,
        #[arg(allow_negative_numbers = true)]
        z: f64,
    },
    /// Mixture of k random product states.
    RandomSeparable { k: usize },
}

#[derive(Clone, Debug)]
struct PGrid(Vec<f64>);

fn parse_p_grid(s: &str) -> Result<PGrid, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let values = if let [start, step, end] = s.split(':').collect::<Vec<_>>()[..] {
        let (start, step, end) = (num(start)?, num(step)?, num(end)?);
        if !(step.is_finite() && step > 0.0) || end < start {
            return Err("range needs step > 0 and end ≥ start".into());
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("empty grid".into());
    }
    if let Some(p) = values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(format!("p = {p} outside [0, 1]"));
    }
    Ok(PGrid(values))
}

enum Failure {
    Usage(String),
    Malformed(String),
    Invariant(String),
    Io(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numeric(_) => 1,
            Failure::Usage(_) | Failure::Malformed(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Malformed(m)
            | Failure::Invariant(m)
            | Failure::Io(m)
            | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(v) => Failure::Invariant(v.to_string()),
            Error::InvalidParameter(_) | Error::InvalidWeight(_) | Error::NotPositive { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Malformed(_) => Failure::Malformed(e.to_string()),
            LoadError::Invalid(v) => Failure::Invariant(v.to_string()),
        }
    }
}

fn io_failure(path: Option<&Path>, e: io::Error) -> Failure {
    match path {
        Some(p) => Failure::Io(format!("cannot write {}: {e}", p.display())),
        None => Failure::Io(format!("cannot write output: {e}")),
    }
}

/// Runs `f` against the output file, or stdout when no path is given.
fn with_output<T>(
    path: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> io::Result<T>,
) -> Result<T, Failure> {
    match path {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| io_failure(path, e))?;
            let mut w = BufWriter::new(file);
            let value = f(&mut w).map_err(|e| io_failure(path, e))?;
            w.flush().map_err(|e| io_failure(path, e))?;
            Ok(value)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            let value = f(&mut w).map_err(|e| io_failure(None, e))?;
            w.flush().map_err(|e| io_failure(None, e))?;
            Ok(value)
        }
    }
}

/// Summary goes to stdout when the data went to a file, else to stderr.
fn summary(out: Option<&Path>, line: String) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

#[derive(Serialize)]
struct EvaluationReport {
    dims: [usize; 2],
    criteria: Vec<CriterionVerdict>,
    npt: bool,
    min_pt_eigenvalue: f64,
}

fn evaluate(rho: &DensityMatrix, q_values: &[f64]) -> Result<EvaluationReport, Failure> {
    let (npt, min_pt_eigenvalue) = is_npt(rho)?;
    let mut criteria = Vec::new();
    if rho.is_two_qubit() {
        criteria.push(linear_witness(rho)?);
        criteria.push(nonlinear_witness_value(rho)?);
        criteria.push(pauli_lur(rho)?);
        let zz = ProductObservable::new(&pauli(Axis::Z), &pauli(Axis::Z))?;
        let xx = ProductObservable::new(&pauli(Axis::X), &pauli(Axis::X))?;
        let c = maassen_bound(&Observable::pauli(Axis::Z), &Observable::pauli(Axis::X))?;
        criteria.push(eur_criterion3(rho, &zz, &xx, c)?);
        criteria.push(bell_variance_criterion(rho)?);
        for &q in q_values {
            criteria.push(bell_tsallis_criterion(rho, q)?);
        }
    }
    Ok(EvaluationReport {
        dims: [rho.dims().0, rho.dims().1],
        criteria,
        npt,
        min_pt_eigenvalue,
    })
}

fn q_or_default(q: Vec<f64>) -> Result<Vec<f64>, Failure> {
    if let Some(bad) = q.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
        return Err(Failure::Usage(format!("q = {bad} must be > 0")));
    }
    Ok(if q.is_empty() { DEFAULT_Q.to_vec() } else { q })
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

fn generate(kind: &StateKind, seed: u64) -> Result<(DensityMatrix, String), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |name: &str, v: f64| -> Result<(), Failure> {
        if (0.0..=1.0).contains(&v) {
            Ok(())
        } else {
            Err(Failure::Usage(format!("{name} = {v} outside [0, 1]")))
        }
    };
    Ok(match *kind {
        StateKind::Bell { index } => {
            if !(1..=4).contains(&index) {
                return Err(Failure::Usage(format!("Bell index {index} outside 1..=4")));
            }
            let state = bell_states()[index - 1].density_matrix();
            (state, format!("Bell state {index}"))
        }
        StateKind::Werner { p } => {
            unit("p", p)?;
            (werner(p)?, format!("Werner state p={p}"))
        }
        StateKind::NoisySinglet { p, d } => {
            unit("p", p)?;
            if !(d.is_finite() && d >= 0.0) {
                return Err(Failure::Usage(format!("d = {d} must be ≥ 0")));
            }
            let sigma = sample_noise_ball(d, &mut rng)?;
            (
                noisy_singlet(p, &sigma)?,
                format!("noisy singlet p={p} d={d} seed={seed}"),
            )
        }
        StateKind::BellDiagonal { x, y, z } => {
            for (name, v) in [("x", x), ("y", y), ("z", z)] {
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Failure::Usage(format!("{name} = {v} outside [-1, 1]")));
                }
            }
            let state = bell_diagonal_state(BellDiagonalCoords::new(x, y, z))?;
            (state, format!("Bell-diagonal state ({x}, {y}, {z})"))
        }
        StateKind::RandomSeparable { k } => {
            if k == 0 {
                return Err(Failure::Usage("k must be ≥ 1".into()));
            }
            let state = random_separable(k, (2, 2), &mut rng)?;
            (
                state,
                format!("separable mixture of {k} product states seed={seed}"),
            )
        }
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Evaluate { file, q, out } => {
            let q_values = q_or_default(q)?;
            let text = fs::read_to_string(&file)
                .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", file.display())))?;
            let rho = DensityMatrix::from_json(&text)?;
            let report = evaluate(&rho, &q_values)?;
            with_output(out.as_deref(), |w| write_json(w, &report))?;
            let detected = report.criteria.iter().filter(|v| v.detected).count();
            summary(
                out.as_deref(),
                format!(
                    "evaluated {} criteria: {detected} detected, npt={}",
                    report.criteria.len(),
                    report.npt
                ),
            );
        }
        Command::Sweep {
            d,
            p_grid,
            samples,
            seed,
            workers,
            out,
            format,
        } => {
            let grid = p_grid.map(|g| g.0).unwrap_or_else(default_p_grid);
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if workers == 0 {
                return Err(Failure::Usage("workers must be ≥ 1".into()));
            }
            let config = NoiseBallConfig {
                p: 0.0,
                d,
                seed,
                samples,
            };
            let report = run_detection_sweep_with_workers(&config, &grid, workers)?;
            with_output(out.as_deref(), |w| match format {
                Format::Csv => write_detection_csv(&report.rows, w),
                Format::Json => write_json(w, &report),
            })?;
            summary(
                out.as_deref(),
                format!(
                    "sweep: {} p values x {samples} samples, d={d}, seed={seed}, chain violations={}",
                    grid.len(),
                    report.chain_violations
                ),
            );
        }
        Command::Geometry {
            q,
            resolution,
            out,
            format,
        } => {
            let q_values = q_or_default(q)?;
            let cells = geometry_cells(resolution, &q_values)?;
            let rows = match format {
                Format::Csv => {
                    let mut failure = None;
                    let ok = cells.map_while(|c| match c {
                        Ok(cell) => Some(cell),
                        Err(e) => {
                            failure = Some(e);
                            None
                        }
                    });
                    let rows = with_output(out.as_deref(), |w| write_geometry_csv(ok, w))?;
                    if let Some(e) = failure {
                        return Err(e.into());
                    }
                    rows
                }
                Format::Json => {
                    let cells: Vec<GeometryCell> = cells.collect::<Result<_, _>>()?;
                    with_output(out.as_deref(), |w| write_json(w, &cells))?;
                    cells.len() * q_values.len()
                }
            };
            summary(
                out.as_deref(),
                format!("geometry: {rows} rows at resolution {resolution}"),
            );
        }
        Command::Werner { format } => {
            let t = werner_thresholds()?;
            with_output(None, |w| match format {
                Format::Json => write_json(w, &t),
                Format::Csv => {
                    writeln!(w, "analytic,witness,lur,npt")?;
                    writeln!(
                        w,
                        "{},{},{},{}",
                        format_sig9(t.analytic),
                        format_sig9(t.witness),
                        format_sig9(t.lur),
                        format_sig9(t.npt)
                    )
                }
            })?;
        }
        Command::GenState { kind, seed, out } => {
            let (rho, label) = generate(&kind, seed)?;
            with_output(out.as_deref(), |w| writeln!(w, "{}", rho.to_json()))?;
            summary(out.as_deref(), format!("wrote {label}"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
