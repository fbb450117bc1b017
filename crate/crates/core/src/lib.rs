//! The modified predictive method (MPM) for bilinear saddle-point problems,
//! its high-resolution differential equation, and the spectral analysis that
//! decides when that ODE converges.
//!
//! * [`game`]: the bilinear game `min_x max_y xᵀAy`, its vector field and Jacobian.
//! * [`methods`]: discrete MPM, extragradient, GDA and OGDA steppers.
//! * [`hrde`]: the continuous MPM dynamics, an RK4 integrator and a Lipschitz bound.
//! * [`spectral`]: system matrices, eigenvalues, Hurwitz tests and parameter scans.
//!
//! ```
//! use minmax_hrde::{analyze, BilinearGame, MethodParams};
//! use nalgebra::dmatrix;
//!
//! let game = BilinearGame::new(dmatrix![1.0])?;
//! let report = analyze(&game, &MethodParams::new(0.3, 0.1)?)?;
//! assert!(report.sufficient);
//! assert!(report.abscissa < 0.0);
//! # Ok::<(), minmax_hrde::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod error;
pub mod game;
pub mod hrde;
pub mod io;
pub mod linalg;
pub mod methods;
pub mod spectral;
pub mod trajectory;

pub use error::{Error, Result};
pub use game::{BilinearGame, Point};
pub use hrde::{
    default_omega0, hrde_rhs, integrate_hrde, lipschitz_bound, velocity_bounds, HrdeState,
    IntegratorConfig,
};
pub use methods::{
    baseline_step, discrete_contraction_modulus, discrete_iteration_spectrum, eg_step, mpm_step,
    run_discrete, Baseline, DiscreteMethod, MethodParams,
};
pub use spectral::{
    analyze, build_c_mpm, build_d, characteristic_pairing_check, eig, hurwitz_quadratic,
    quadratic_roots, rayleigh_mu, spectral_abscissa, stability_scan, sufficient_condition, Grid,
    ScanCell, SpectralReport, Verdict,
};
pub use trajectory::{RunStatus, Tick, Trajectory, TrajectoryKind};

// mdbook cannot run listings against a local crate, so the chapters are
// compiled here as doc-tests instead.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/game.md")]
    mod game {}
    #[doc = include_str!("../../../book/src/methods.md")]
    mod methods {}
    #[doc = include_str!("../../../book/src/hrde.md")]
    mod hrde {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
}
