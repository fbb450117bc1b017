//! Discrete-time saddle-point methods on bilinear games.
//!
//! The modified predictive method (MPM) evaluates the vector field at a
//! predicted point and applies it at the current one:
//!
//! ```text
//! z_{n+1/2} = z_n - α V(z_n)
//! z_{n+1}   = z_n - γ V(z_{n+1/2})
//! ```
//!
//! With `α = γ` this is the extragradient method. Gradient descent ascent and
//! optimistic GDA are provided as baselines.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::game::{BilinearGame, Point};
use crate::trajectory::{RunStatus, Tick, Trajectory, TrajectoryKind};

/// Runs whose distance to the saddle set exceeds this are stopped as diverged.
pub const DIVERGENCE_CUTOFF: f64 = 1e12;

pub const DEFAULT_MAX_ITERS: usize = 100_000;

/// Step sizes: prediction `alpha`, update `gamma`, and the derived `beta = 2 / gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    alpha: f64,
    gamma: f64,
    beta: f64,
}

impl MethodParams {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!("alpha must be positive and finite, got {alpha}")));
        }
        Self::with_alpha_unchecked(alpha, gamma)
    }

    /// Like [`MethodParams::new`] but permits `alpha = 0`, which turns MPM into GDA.
    /// Used for the closed-form spectra, where that limit is meaningful.
    pub fn with_alpha_unchecked(alpha: f64, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!("gamma must be positive and finite, got {gamma}")));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::invalid(format!("alpha must be nonnegative and finite, got {alpha}")));
        }
        Ok(Self {
            alpha,
            gamma,
            beta: 2.0 / gamma,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscreteMethod {
    Mpm,
    Eg,
    Gda,
    Ogda,
}

impl FromStr for DiscreteMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mpm" => Ok(Self::Mpm),
            "eg" => Ok(Self::Eg),
            "gda" => Ok(Self::Gda),
            "ogda" => Ok(Self::Ogda),
            other => Err(Error::invalid(format!("unknown discrete method {other:?}"))),
        }
    }
}

impl fmt::Display for DiscreteMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mpm => "mpm",
            Self::Eg => "eg",
            Self::Gda => "gda",
            Self::Ogda => "ogda",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Gda,
    Ogda,
}

fn mpm_update(game: &BilinearGame, z: &DVector<f64>, params: &MethodParams) -> DVector<f64> {
    let half = z - game.field(z) * params.alpha;
    z - game.field(&half) * params.gamma
}

/// One MPM step.
pub fn mpm_step(game: &BilinearGame, z: &Point, params: &MethodParams) -> Result<Point> {
    z.check(game)?;
    Point::from_z(game, &mpm_update(game, &z.to_z(), params))
}

/// One extragradient step: MPM with `alpha = gamma`.
pub fn eg_step(game: &BilinearGame, z: &Point, gamma: f64) -> Result<Point> {
    let params = MethodParams::new(gamma, gamma)?;
    mpm_step(game, z, &params)
}

fn baseline_update(
    game: &BilinearGame,
    z: &DVector<f64>,
    method: Baseline,
    prev_field: Option<&DVector<f64>>,
    gamma: f64,
) -> (DVector<f64>, DVector<f64>) {
    let v = game.field(z);
    let next = match method {
        Baseline::Gda => z - &v * gamma,
        Baseline::Ogda => {
            let prev = prev_field.unwrap_or(&v);
            z - &v * (2.0 * gamma) + prev * gamma
        }
    };
    (next, v)
}

/// One GDA or OGDA step.
///
/// Returns the new point and the vector field evaluated at the input point,
/// which OGDA needs as `prev_field` on the following step. When `prev_field`
/// is absent OGDA treats `V(z_{-1})` as `V(z_0)`, so its first step is a GDA step.
pub fn baseline_step(
    game: &BilinearGame,
    z: &Point,
    method: Baseline,
    prev_field: Option<&DVector<f64>>,
    gamma: f64,
) -> Result<(Point, DVector<f64>)> {
    z.check(game)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::invalid(format!("gamma must be positive and finite, got {gamma}")));
    }
    if let Some(p) = prev_field {
        game.check_z(p)?;
    }
    let (next, v) = baseline_update(game, &z.to_z(), method, prev_field, gamma);
    Ok((Point::from_z(game, &next)?, v))
}

/// Iterates a discrete method until the distance to the saddle set drops to
/// `tol`, exceeds [`DIVERGENCE_CUTOFF`], or `max_iters` steps have been taken.
///
/// Every iterate is recorded, starting with tick 0 at `z0`. `Eg`, `Gda` and
/// `Ogda` use `params.gamma()` as their step size.
pub fn run_discrete(
    game: &BilinearGame,
    method: DiscreteMethod,
    z0: &Point,
    params: &MethodParams,
    max_iters: usize,
    tol: f64,
) -> Result<Trajectory> {
    z0.check(game)?;
    if max_iters == 0 {
        return Err(Error::invalid("max_iters must be positive"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!("tol must be positive, got {tol}")));
    }

    let mut traj = Trajectory::new(TrajectoryKind::Discrete);
    let mut z = z0.to_z();
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial point has non-finite entries"));
    }
    let dist = game.distance_unchecked(&z)?;
    traj.ticks.push(Tick {
        t: 0.0,
        z: z.clone(),
        omega: None,
        dist,
    });
    if dist <= tol {
        traj.status = Some(RunStatus::Converged);
        return Ok(traj);
    }

    let eg_params = MethodParams::new(params.gamma, params.gamma)?;
    let mut prev_field: Option<DVector<f64>> = None;
    for n in 1..=max_iters {
        z = match method {
            DiscreteMethod::Mpm => mpm_update(game, &z, params),
            DiscreteMethod::Eg => mpm_update(game, &z, &eg_params),
            DiscreteMethod::Gda | DiscreteMethod::Ogda => {
                let base = if method == DiscreteMethod::Gda {
                    Baseline::Gda
                } else {
                    Baseline::Ogda
                };
                let (next, v) = baseline_update(game, &z, base, prev_field.as_ref(), params.gamma);
                prev_field = Some(v);
                next
            }
        };
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow {
                partial: Box::new(traj),
            });
        }
        let dist = game.distance_unchecked(&z)?;
        traj.ticks.push(Tick {
            t: n as f64,
            z: z.clone(),
            omega: None,
            dist,
        });
        if dist <= tol {
            traj.status = Some(RunStatus::Converged);
            return Ok(traj);
        }
        if dist > DIVERGENCE_CUTOFF {
            traj.status = Some(RunStatus::Diverged);
            return Ok(traj);
        }
    }
    traj.status = Some(RunStatus::BudgetExhausted);
    Ok(traj)
}

/// Eigenvalues of the MPM iteration matrix `I - γJ + γαJ²` in closed form.
///
/// Each singular value `σ` of `A` contributes the pair `1 - γασ² ∓ iγσ`;
/// the `|d1 - d2|` null-space directions of `J` contribute the eigenvalue 1.
/// This is an independent derivation for bilinear games, used as an oracle
/// for the stepper and for discrete convergence rates.
pub fn discrete_iteration_spectrum(game: &BilinearGame, params: &MethodParams) -> Vec<Complex64> {
    let (a, g) = (params.alpha, params.gamma);
    let mut eigs = Vec::with_capacity(game.dim());
    for &s in game.singular_values() {
        let re = 1.0 - g * a * s * s;
        eigs.push(Complex64::new(re, -g * s));
        eigs.push(Complex64::new(re, g * s));
    }
    let extra = game.d1().abs_diff(game.d2());
    eigs.extend(std::iter::repeat_n(Complex64::new(1.0, 0.0), extra));
    eigs
}

/// Largest modulus of the iteration matrix over the nonzero singular directions.
///
/// Below 1 exactly when `γ(1 + α²σ²) < 2α` for every nonzero `σ`.
pub fn discrete_contraction_modulus(game: &BilinearGame, params: &MethodParams) -> f64 {
    let cutoff = game.rank_tol() * game.sigma_max();
    let (a, g) = (params.alpha, params.gamma);
    game.singular_values()
        .iter()
        .filter(|&&s| s > cutoff)
        .map(|&s| Complex64::new(1.0 - g * a * s * s, g * s).norm())
        .fold(0.0, f64::max)
}
