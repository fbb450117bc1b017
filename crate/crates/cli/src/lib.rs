//! Command implementations behind the `minmax-hrde` binary.
//!
//! Each command returns an [`Outcome`] carrying the process exit code and the
//! text destined for standard output, so the binary stays a thin shell and the
//! commands can be exercised directly from tests.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use minmax_hrde::io::{fmt_g17, format_matrix_csv, read_matrix, read_vector};
use minmax_hrde::spectral::{stability_scan, Grid, Verdict};
use minmax_hrde::{
    analyze, integrate_hrde, run_discrete, velocity_bounds, BilinearGame, DiscreteMethod,
    IntegratorConfig, MethodParams, Point, RunStatus, Trajectory,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Angle of the `rotation` matrix kind, in radians.
pub const ROTATION_ANGLE: f64 = 0.3;

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const UNSTABLE: i32 = 2;
    pub const MARGINAL: i32 = 3;
    pub const OVERFLOW: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] minmax_hrde::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        exit::INPUT_ERROR
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug, Parser)]
#[command(name = "minmax-hrde", version, about = "MPM, its high-resolution ODE, and spectral stability on bilinear games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral stability report for one (alpha, gamma) pair
    Analyze(AnalyzeArgs),
    /// Run a discrete method or integrate the HRDE and write the trajectory
    Simulate(SimulateArgs),
    /// Stability over an (alpha, gamma) grid
    Scan(ScanArgs),
    /// Write a payoff matrix
    GenMatrix(GenMatrixArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub gamma: f64,
    /// JSON report destination
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Mpm,
    Eg,
    Gda,
    Ogda,
    Hrde,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Prediction step; required for mpm and hrde
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "mpm")]
    pub method: MethodName,
    /// Initial point: a CSV file of d1 + d2 numbers, or `random` for a seeded unit vector
    #[arg(long, default_value = "random")]
    pub z0: String,
    /// Initial HRDE velocity (CSV of d1 + d2 numbers); defaults to -V(z0) + alpha J V(z0)
    #[arg(long)]
    pub omega0: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long = "t-max", default_value_t = 50.0)]
    pub t_max: f64,
    #[arg(long = "max-iters", default_value_t = 100_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Keep every N-th tick in the output
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// `MIN:MAX:STEPS`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec(pub Grid);

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected MIN:MAX:STEPS, got {s:?}"));
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| format!("bad MIN in {s:?}"))?;
        let max: f64 = parts[1].trim().parse().map_err(|_| format!("bad MAX in {s:?}"))?;
        let steps: usize = parts[2].trim().parse().map_err(|_| format!("bad STEPS in {s:?}"))?;
        Grid::new(min, max, steps).map(RangeSpec).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long = "alpha-range")]
    pub alpha_range: RangeSpec,
    #[arg(long = "gamma-range")]
    pub gamma_range: RangeSpec,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Identity,
    Gaussian,
    Rotation,
    Diag,
}

#[derive(Debug, Clone, Args)]
pub struct GenMatrixArgs {
    #[arg(long, value_enum)]
    pub kind: MatrixKind,
    #[arg(long)]
    pub d1: usize,
    #[arg(long)]
    pub d2: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Scan(a) => cmd_scan(a),
        Command::GenMatrix(a) => cmd_gen_matrix(a),
    }
}

/// Seeded generator for all random inputs: ChaCha with 8 rounds.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gen_matrix(kind: MatrixKind, d1: usize, d2: usize, seed: u64) -> Result<DMatrix<f64>> {
    if d1 == 0 || d2 == 0 {
        return Err(CliError::Input(format!("matrix dimensions must be positive, got {d1}x{d2}")));
    }
    Ok(match kind {
        MatrixKind::Identity => DMatrix::identity(d1, d2),
        MatrixKind::Diag => DMatrix::from_fn(d1, d2, |i, j| if i == j { (i + 1) as f64 } else { 0.0 }),
        MatrixKind::Rotation => {
            if (d1, d2) != (2, 2) {
                return Err(CliError::Input(format!("rotation needs d1 = d2 = 2, got {d1}x{d2}")));
            }
            let (s, c) = ROTATION_ANGLE.sin_cos();
            DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
        }
        MatrixKind::Gaussian => {
            let mut rng = seeded_rng(seed);
            // Row-major draw order, matching the file layout.
            let vals: Vec<f64> = (0..d1 * d2).map(|_| rng.sample(StandardNormal)).collect();
            DMatrix::from_row_slice(d1, d2, &vals)
        }
    })
}

pub fn cmd_gen_matrix(args: &GenMatrixArgs) -> Result<Outcome> {
    let m = gen_matrix(args.kind, args.d1, args.d2, args.seed)?;
    write_atomic(&args.out, format_matrix_csv(&m).as_bytes())?;
    info!("wrote {}x{} {:?} matrix to {}", args.d1, args.d2, args.kind, args.out.display());
    Ok(Outcome {
        code: exit::OK,
        stdout: format!("wrote {}x{} matrix to {}\n", args.d1, args.d2, args.out.display()),
    })
}

fn load_game(path: &Path) -> Result<BilinearGame> {
    let a = read_matrix(path).map_err(|e| CliError::Input(format!("cannot read matrix {}: {e}", path.display())))?;
    let game = BilinearGame::new(a)?;
    debug!(
        "loaded {}x{} game, singular values {:?}",
        game.d1(),
        game.d2(),
        game.singular_values()
    );
    Ok(game)
}

fn params(alpha: f64, gamma: f64) -> Result<MethodParams> {
    MethodParams::new(alpha, gamma).map_err(|e| CliError::Input(e.to_string()))
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let game = load_game(&args.matrix)?;
    let p = params(args.alpha, args.gamma)?;
    let report = analyze(&game, &p)?;
    let mut json = report.to_json();
    json.push('\n');
    write_atomic(&args.out, json.as_bytes())?;

    let verdict = report.verdict();
    let stable_mu = report.hurwitz.iter().filter(|h| h.verdict == Verdict::Stable).count();
    let mut out = String::new();
    out.push_str(&format!("game: {}x{}\n", report.d1, report.d2));
    out.push_str(&format!(
        "alpha = {}, gamma = {}, beta = {}\n",
        fmt_g17(report.alpha),
        fmt_g17(report.gamma),
        fmt_g17(report.beta)
    ));
    out.push_str(&format!("spectral abscissa: {}\n", fmt_g17(report.abscissa)));
    out.push_str(&format!("hurwitz: {stable_mu}/{} eigenvalues of D stable\n", report.hurwitz.len()));
    out.push_str(&format!("pairing residual: {}\n", fmt_g17(report.pairing_residual)));
    out.push_str(&format!("sufficient condition alpha > 2 gamma: {}\n", report.sufficient));
    out.push_str(&format!(
        "exact boundary margin alpha - gamma/2: {}\n",
        fmt_g17(report.exact_boundary_margin)
    ));
    out.push_str(&format!("verdict: {}\n", verdict_name(verdict)));

    let code = match verdict {
        Verdict::Stable => exit::OK,
        Verdict::Unstable => exit::UNSTABLE,
        Verdict::Marginal => exit::MARGINAL,
    };
    Ok(Outcome { code, stdout: out })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::Marginal => "marginal",
        Verdict::Unstable => "unstable",
    }
}

fn initial_point(game: &BilinearGame, spec: &str, seed: u64) -> Result<Point> {
    let z = if spec == "random" {
        let mut rng = seeded_rng(seed);
        let v = DVector::from_fn(game.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        v / n
    } else {
        read_vector(spec).map_err(|e| CliError::Input(format!("cannot read z0 {spec}: {e}")))?
    };
    Point::from_z(game, &z).map_err(|e| CliError::Input(format!("z0: {e}")))
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome> {
    let game = load_game(&args.matrix)?;
    let z0 = initial_point(&game, &args.z0, args.seed)?;
    let alpha = match (args.method, args.alpha) {
        (_, Some(a)) => a,
        (MethodName::Mpm | MethodName::Hrde, None) => {
            return Err(CliError::Input(format!("--alpha is required for {:?}", args.method).to_lowercase()))
        }
        (_, None) => args.gamma,
    };
    let p = params(alpha, args.gamma)?;
    if args.stride == 0 {
        return Err(CliError::Input("--stride must be positive".into()));
    }

    let result = match args.method {
        MethodName::Hrde => {
            let omega0 = match &args.omega0 {
                Some(path) => Some(
                    read_vector(path)
                        .map_err(|e| CliError::Input(format!("cannot read omega0 {}: {e}", path.display())))?,
                ),
                None => None,
            };
            let cfg = IntegratorConfig::new(args.h, args.t_max, args.stride, &p)
                .map_err(|e| CliError::Input(e.to_string()))?;
            integrate_hrde(&game, &z0, omega0.as_ref(), &p, &cfg)
        }
        m => {
            let method = match m {
                MethodName::Mpm => DiscreteMethod::Mpm,
                MethodName::Eg => DiscreteMethod::Eg,
                MethodName::Gda => DiscreteMethod::Gda,
                _ => DiscreteMethod::Ogda,
            };
            if !(args.tol > 0.0) || args.max_iters == 0 {
                return Err(CliError::Input("--tol and --max-iters must be positive".into()));
            }
            run_discrete(&game, method, &z0, &p, args.max_iters, args.tol)
        }
    };
    // The integrator already thins by `stride`.
    let out_stride = if args.method == MethodName::Hrde { 1 } else { args.stride };

    match result {
        Ok(traj) => {
            write_trajectory(&args.out, &traj, out_stride)?;
            let status = traj.status.unwrap_or(RunStatus::Completed);
            let mut out = summary(&traj, status);
            if args.method == MethodName::Hrde {
                let b = velocity_bounds(&game, &traj, &p)?;
                out.push_str(&format!("sup |omega|: {}\n", fmt_g17(b.sup_omega)));
                out.push_str(&format!("sup |omega_dot|: {}\n", fmt_g17(b.sup_omega_dot)));
            }
            let code = match status {
                RunStatus::Converged | RunStatus::Completed => exit::OK,
                RunStatus::Diverged => exit::UNSTABLE,
                RunStatus::BudgetExhausted => exit::MARGINAL,
            };
            Ok(Outcome { code, stdout: out })
        }
        Err(minmax_hrde::Error::NumericOverflow { partial }) => {
            write_trajectory(&args.out, &partial, out_stride)?;
            Ok(Outcome {
                code: exit::OVERFLOW,
                stdout: format!("status: overflow\nticks: {}\n", partial.ticks.len()),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn summary(traj: &Trajectory, status: RunStatus) -> String {
    let last = traj.last().expect("trajectories hold at least the initial tick");
    format!(
        "status: {status}\nfinal t: {}\nfinal distance: {}\nticks: {}\n",
        fmt_g17(last.t),
        fmt_g17(last.dist),
        traj.ticks.len()
    )
}

fn write_trajectory(path: &Path, traj: &Trajectory, stride: usize) -> Result<()> {
    let mut buf = Vec::new();
    traj.write_csv(&mut buf, stride).map_err(|source| CliError::Io {
        context: "formatting trajectory".into(),
        source,
    })?;
    write_atomic(path, &buf)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanCounts {
    pub sufficient_and_stable: usize,
    pub stable_not_sufficient: usize,
    pub sufficient_not_stable: usize,
    pub not_stable: usize,
}

impl fmt::Display for ScanCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sufficient and stable: {}", self.sufficient_and_stable)?;
        writeln!(f, "stable, not sufficient: {}", self.stable_not_sufficient)?;
        writeln!(f, "not stable: {}", self.not_stable)?;
        writeln!(f, "sufficient but not stable: {}", self.sufficient_not_stable)
    }
}

pub fn cmd_scan(args: &ScanArgs) -> Result<Outcome> {
    let game = load_game(&args.matrix)?;
    let cells = stability_scan(&game, &args.alpha_range.0, &args.gamma_range.0)?;

    let mut csv = String::from("gamma,alpha,abscissa,sufficient,stable\n");
    let mut counts = ScanCounts::default();
    for c in &cells {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_g17(c.gamma),
            fmt_g17(c.alpha),
            fmt_g17(c.abscissa),
            c.sufficient,
            c.stable
        ));
        match (c.sufficient, c.stable) {
            (true, true) => counts.sufficient_and_stable += 1,
            (false, true) => counts.stable_not_sufficient += 1,
            (true, false) => {
                counts.sufficient_not_stable += 1;
                counts.not_stable += 1;
            }
            (false, false) => counts.not_stable += 1,
        }
    }
    write_atomic(&args.out, csv.as_bytes())?;
    info!("scanned {} cells", cells.len());
    Ok(Outcome {
        code: exit::OK,
        stdout: format!("cells: {}\n{counts}", cells.len()),
    })
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |context: String| move |source| CliError::Io { context, source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(io_err(format!("cannot create temporary file in {}", dir.display())))?;
    tmp.write_all(bytes)
        .map_err(io_err(format!("cannot write {}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io {
            context: format!("cannot write {}", path.display()),
            source: e.error,
        })?;
    Ok(())
}
