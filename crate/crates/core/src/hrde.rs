//! The high-resolution ODE of the modified predictive method.
//!
//! As a first-order system in `u = (z, ω)`:
//!
//! ```text
//! ż = ω
//! ω̇ = -β ω - β V(z) + α β J V(z),     β = 2 / γ
//! ```
//!
//! With `α = γ` the system is the extragradient HRDE. On a bilinear game it is
//! linear, `u̇ = C u`, with `C` assembled in [`crate::spectral::build_c_mpm`].

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::game::{BilinearGame, Point};
use crate::methods::MethodParams;
use crate::trajectory::{RunStatus, Tick, Trajectory, TrajectoryKind};

/// Largest admissible `h·β` for the explicit integrator.
pub const MAX_STEP_BETA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct HrdeState {
    pub z: DVector<f64>,
    pub omega: DVector<f64>,
}

impl HrdeState {
    pub fn new(z: DVector<f64>, omega: DVector<f64>) -> Result<Self> {
        if z.len() != omega.len() {
            return Err(Error::dims(format!("omega of length {}", z.len()), omega.len()));
        }
        Ok(Self { z, omega })
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            z: DVector::zeros(d),
            omega: DVector::zeros(d),
        }
    }

    /// Stacked vector `(z, ω)` of length `2d`.
    pub fn to_vec(&self) -> DVector<f64> {
        let d = self.z.len();
        let mut u = DVector::zeros(2 * d);
        u.rows_mut(0, d).copy_from(&self.z);
        u.rows_mut(d, d).copy_from(&self.omega);
        u
    }

    pub fn from_vec(u: &DVector<f64>) -> Result<Self> {
        if u.len() % 2 != 0 {
            return Err(Error::dims("even-length state", u.len()));
        }
        let d = u.len() / 2;
        Ok(Self {
            z: u.rows(0, d).into_owned(),
            omega: u.rows(d, d).into_owned(),
        })
    }
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    h: f64,
    t_max: f64,
    sample_stride: usize,
}

impl IntegratorConfig {
    /// Validates `0 < h ≤ t_max` and `h·β ≤ 0.5` for the given parameters.
    pub fn new(h: f64, t_max: f64, sample_stride: usize, params: &MethodParams) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("step h must be positive, got {h}")));
        }
        if !(t_max.is_finite() && t_max >= h) {
            return Err(Error::invalid(format!("t_max ({t_max}) must be at least h ({h})")));
        }
        if sample_stride == 0 {
            return Err(Error::invalid("sample stride must be positive"));
        }
        if h * params.beta() > MAX_STEP_BETA {
            return Err(Error::invalid(format!(
                "h·β = {} exceeds {MAX_STEP_BETA}; reduce h below {}",
                h * params.beta(),
                MAX_STEP_BETA / params.beta()
            )));
        }
        Ok(Self {
            h,
            t_max,
            sample_stride,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn sample_stride(&self) -> usize {
        self.sample_stride
    }
}

/// Right-hand side on the stacked state; no dimension checks.
pub(crate) fn rhs_vec(game: &BilinearGame, u: &DVector<f64>, params: &MethodParams) -> DVector<f64> {
    let d = game.dim();
    let z = u.rows(0, d).into_owned();
    let omega = u.rows(d, d);
    let v = game.field(&z);
    // J V(z) = V(V(z)) because the field is linear with Jacobian J.
    let jv = game.field(&v);
    let beta = params.beta();
    let omega_dot = omega * (-beta) - &v * beta + jv * (params.alpha() * beta);

    let mut out = DVector::zeros(2 * d);
    out.rows_mut(0, d).copy_from(&omega);
    out.rows_mut(d, d).copy_from(&omega_dot);
    out
}

/// Time derivative `(ż, ω̇)` of the HRDE at `u`.
pub fn hrde_rhs(game: &BilinearGame, u: &HrdeState, params: &MethodParams) -> Result<HrdeState> {
    game.check_z(&u.z)?;
    game.check_z(&u.omega)?;
    HrdeState::from_vec(&rhs_vec(game, &u.to_vec(), params))
}

/// Initial velocity `-V(z0) + α J V(z0)`.
///
/// For bilinear games this equals `(z1 - z0) / γ` for the first MPM step from `z0`.
pub fn default_omega0(game: &BilinearGame, z0: &Point, params: &MethodParams) -> Result<DVector<f64>> {
    z0.check(game)?;
    let v = game.field(&z0.to_z());
    let jv = game.field(&v);
    Ok(jv * params.alpha() - v)
}

/// Integrates the HRDE from `(z0, omega0)` with classical RK4 on `[0, t_max]`.
///
/// `omega0 = None` selects [`default_omega0`]. The trajectory keeps `t = 0`,
/// every `sample_stride`-th step and the final step. If `t_max` is not a
/// multiple of `h`, the last step is shortened to land on `t_max`.
pub fn integrate_hrde(
    game: &BilinearGame,
    z0: &Point,
    omega0: Option<&DVector<f64>>,
    params: &MethodParams,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    z0.check(game)?;
    let omega0 = match omega0 {
        Some(w) => {
            game.check_z(w)?;
            w.clone()
        }
        None => default_omega0(game, z0, params)?,
    };
    let d = game.dim();
    let mut u = HrdeState::new(z0.to_z(), omega0)?.to_vec();
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial state has non-finite entries"));
    }

    let mut traj = Trajectory::new(TrajectoryKind::Continuous);
    let record = |traj: &mut Trajectory, t: f64, u: &DVector<f64>| -> Result<()> {
        let z = u.rows(0, d).into_owned();
        let dist = game.distance_unchecked(&z)?;
        traj.ticks.push(Tick {
            t,
            z,
            omega: Some(u.rows(d, d).into_owned()),
            dist,
        });
        Ok(())
    };
    record(&mut traj, 0.0, &u)?;

    let h = config.h;
    let steps = ((config.t_max / h) - 1e-9).ceil().max(1.0) as usize;
    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * h;
        let (step, t) = if k == steps {
            (config.t_max - t_prev, config.t_max)
        } else {
            (h, k as f64 * h)
        };
        u = rk4_step(game, &u, params, step);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow {
                partial: Box::new(traj),
            });
        }
        if k % config.sample_stride == 0 || k == steps {
            record(&mut traj, t, &u)?;
        }
    }
    traj.status = Some(RunStatus::Completed);
    Ok(traj)
}

fn rk4_step(game: &BilinearGame, u: &DVector<f64>, params: &MethodParams, h: f64) -> DVector<f64> {
    let k1 = rhs_vec(game, u, params);
    let k2 = rhs_vec(game, &(u + &k1 * (0.5 * h)), params);
    let k3 = rhs_vec(game, &(u + &k2 * (0.5 * h)), params);
    let k4 = rhs_vec(game, &(u + &k3 * h), params);
    u + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Lipschitz constant of the HRDE vector field `G(u) = (ω, ω̇)`:
///
/// `√2 · max{ (2/γ) L₁, √(1 + 4/γ²) + (2√2 α/γ) ‖A‖_F }` with `L₁ = σ_max(A)`.
///
/// The `√2` factor is folded into each branch, which is the same value but
/// rounds exactly for simple inputs (`A = [1]`, `α = 1`, `γ = 2` gives `4.0`).
///
/// This is not always an upper bound. The field is `u ↦ C u` with
/// `C = build_c_mpm(..)`, so its exact constant is `‖C‖₂`. That norm is at
/// least `αβσ_max²`, while this formula grows only linearly in `A`. For
/// `σ_max` around 4 and up, `‖C‖₂` can exceed it by a factor close to 2.
pub fn lipschitz_bound(game: &BilinearGame, params: &MethodParams) -> f64 {
    let (alpha, gamma) = (params.alpha(), params.gamma());
    let l1 = game.sigma_max();
    let position = 2.0 * std::f64::consts::SQRT_2 / gamma * l1;
    let velocity = (2.0 + 8.0 / (gamma * gamma)).sqrt() + 4.0 * alpha / gamma * game.frobenius_norm();
    position.max(velocity)
}

/// Empirical suprema of `‖ω‖` and `‖ω̇‖` along a continuous trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityBounds {
    pub sup_omega: f64,
    pub sup_omega_dot: f64,
    /// Suprema over the first half of the samples.
    pub leading_omega: f64,
    pub leading_omega_dot: f64,
    /// Suprema over the second half of the samples.
    pub trailing_omega: f64,
    pub trailing_omega_dot: f64,
}

impl VelocityBounds {
    pub fn is_finite(&self) -> bool {
        self.sup_omega.is_finite() && self.sup_omega_dot.is_finite()
    }

    /// The trailing half never exceeds the leading half.
    pub fn settles(&self) -> bool {
        self.trailing_omega <= self.leading_omega && self.trailing_omega_dot <= self.leading_omega_dot
    }
}

pub fn velocity_bounds(game: &BilinearGame, traj: &Trajectory, params: &MethodParams) -> Result<VelocityBounds> {
    if traj.kind != TrajectoryKind::Continuous || traj.ticks.is_empty() {
        return Err(Error::invalid("velocity bounds need a non-empty continuous trajectory"));
    }
    let norms = traj
        .ticks
        .iter()
        .map(|tick| {
            let omega = tick
                .omega
                .as_ref()
                .ok_or_else(|| Error::invalid("continuous tick without omega"))?;
            let u = HrdeState::new(tick.z.clone(), omega.clone())?;
            let du = hrde_rhs(game, &u, params)?;
            Ok((omega.norm(), du.omega.norm()))
        })
        .collect::<Result<Vec<_>>>()?;

    let sup = |s: &[(f64, f64)]| {
        s.iter()
            .fold((0.0f64, 0.0f64), |(a, b), &(w, dw)| (a.max(w), b.max(dw)))
    };
    let mid = norms.len() / 2;
    let (all_w, all_dw) = sup(&norms);
    let (lead_w, lead_dw) = sup(&norms[..mid.max(1)]);
    let (trail_w, trail_dw) = sup(&norms[mid..]);
    Ok(VelocityBounds {
        sup_omega: all_w,
        sup_omega_dot: all_dw,
        leading_omega: lead_w,
        leading_omega_dot: lead_dw,
        trailing_omega: trail_w,
        trailing_omega_dot: trail_dw,
    })
}
