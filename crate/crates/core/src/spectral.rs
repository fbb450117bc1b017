//! Spectral stability analysis of the MPM high-resolution ODE on bilinear games.
//!
//! On a bilinear game the HRDE is the linear system `u̇ = C u` with
//!
//! ```text
//!         [   0        0      I    0  ]
//!     C = [   0        0      0    I  ]
//!         [ -αβAAᵀ   -βA    -βI    0  ]
//!         [  βAᵀ   -αβAᵀA    0   -βI  ]
//! ```
//!
//! Its characteristic polynomial factors as `det(λ(β + λ) I - D)` where `D` is
//! the lower-left block, so every eigenvalue `μ` of `D` contributes the two
//! roots of `λ² + βλ - μ`. Both roots lie in the open left half-plane exactly
//! when `Re μ < -(Im μ)² / β²`. The step-size condition `α > 2γ` is sufficient
//! for that; the closed-form spectrum `μ = -αβσ² ± iβσ` places the exact
//! boundary at `α = γ/2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::BilinearGame;
use crate::methods::MethodParams;

pub use crate::linalg::{eig, eigenvector};

/// Absolute band on the Hurwitz determinant entry treated as marginal.
pub const HURWITZ_MARGINAL_TOL: f64 = 1e-9;
/// Absolute band on the spectral abscissa treated as marginal.
pub const ABSCISSA_MARGINAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Marginal,
    Unstable,
}

/// The generalized Hurwitz array of `λ² + βλ - μ`, one row per entry of
/// the tableau: `(1, 0, -μ₁)`, `(β, -μ₂, 0)`, `(μ₂, -βμ₁, 0)`, `(-μ₂² - β²μ₁, 0, 0)`.
pub type HurwitzArray = [[f64; 3]; 4];

/// `C_MPM`, the `2d × 2d` matrix of the linear HRDE in the variables `(x, y, ω_x, ω_y)`.
pub fn build_c_mpm(game: &BilinearGame, params: &MethodParams) -> DMatrix<f64> {
    let d = game.dim();
    let mut c = DMatrix::zeros(2 * d, 2 * d);
    c.view_mut((0, d), (d, d)).fill_with_identity();
    c.view_mut((d, 0), (d, d)).copy_from(&build_d(game, params));
    c.view_mut((d, d), (d, d))
        .copy_from(&(DMatrix::identity(d, d) * -params.beta()));
    c
}

/// `D = [[-αβAAᵀ, -βA], [βAᵀ, -αβAᵀA]]`, i.e. `αβJ² - βJ`.
pub fn build_d(game: &BilinearGame, params: &MethodParams) -> DMatrix<f64> {
    let a = game.matrix();
    let (d1, d2) = (game.d1(), game.d2());
    let beta = params.beta();
    let ab = params.alpha() * beta;
    let mut m = DMatrix::zeros(d1 + d2, d1 + d2);
    m.view_mut((0, 0), (d1, d1)).copy_from(&(a * a.transpose() * -ab));
    m.view_mut((0, d1), (d1, d2)).copy_from(&(a * -beta));
    m.view_mut((d1, 0), (d2, d1)).copy_from(&(a.transpose() * beta));
    m.view_mut((d1, d1), (d2, d2)).copy_from(&(a.transpose() * a * -ab));
    m
}

/// Largest real part.
pub fn spectral_abscissa(eigs: &[Complex64]) -> Result<f64> {
    eigs.iter()
        .map(|e| e.re)
        .reduce(f64::max)
        .ok_or_else(|| Error::invalid("spectral abscissa of an empty spectrum"))
}

/// Stability of `λ² + βλ - μ` by the generalized Hurwitz criterion for complex
/// coefficients: stable iff `-μ₂² - β²μ₁ > 0`.
///
/// The tableau is returned for display. The verdict comes from its final entry
/// alone, which stays valid when `μ₂ = 0` and the third row starts with zero.
pub fn hurwitz_quadratic(beta: f64, mu: Complex64) -> Result<(Verdict, HurwitzArray)> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    let (m1, m2) = (mu.re, mu.im);
    let last = -m2 * m2 - beta * beta * m1;
    let array = [
        [1.0, 0.0, -m1],
        [beta, -m2, 0.0],
        [m2, -beta * m1, 0.0],
        [last, 0.0, 0.0],
    ];
    let band = HURWITZ_MARGINAL_TOL * (beta * beta * mu.norm()).max(1.0);
    let verdict = if last.abs() <= band {
        Verdict::Marginal
    } else if last > 0.0 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    Ok((verdict, array))
}

/// Roots of `λ² + βλ - μ` as `(-β/2 + s, -β/2 - s)` with `s = √(β²/4 + μ)`.
///
/// The larger-magnitude root is formed without cancellation and the other is
/// recovered from the product of the roots, `-μ`.
pub fn quadratic_roots(beta: f64, mu: Complex64) -> (Complex64, Complex64) {
    let s = (Complex64::new(beta * beta / 4.0, 0.0) + mu).sqrt();
    let big = Complex64::new(-beta / 2.0, 0.0) - s;
    let small = if big == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        -mu / big
    };
    (small, big)
}

/// Numerical check of `det(C - λI) = det(λ(β + λ)I - D)`.
///
/// Maps every `μ` in `eig_d` to the two roots of `λ² + βλ - μ`, matches that
/// multiset to `eig_c` greedily by nearest neighbour, and returns the largest
/// matched distance.
pub fn characteristic_pairing_check(eig_c: &[Complex64], eig_d: &[Complex64], beta: f64) -> Result<f64> {
    if eig_c.len() != 2 * eig_d.len() {
        return Err(Error::invalid(format!(
            "expected {} eigenvalues of C for {} of D, got {}",
            2 * eig_d.len(),
            eig_d.len(),
            eig_c.len()
        )));
    }
    let mut used = vec![false; eig_c.len()];
    let mut worst = 0.0f64;
    for &mu in eig_d {
        let (r1, r2) = quadratic_roots(beta, mu);
        for root in [r1, r2] {
            let (idx, dist) = eig_c
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, l)| (i, (l - root).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("sizes checked above");
            used[idx] = true;
            worst = worst.max(dist);
        }
    }
    Ok(worst)
}

/// The quadratic form `μ(z) = z̄ᵀ D z` of a complex unit vector `z = (x, y)`,
/// evaluated in closed form:
///
/// `μ(z) = -αβ(‖Aᵀx‖² + ‖Ay‖²) - 2β·Im(x̄ᵀAy)·i`.
pub fn rayleigh_mu(game: &BilinearGame, z: &DVector<Complex64>, params: &MethodParams) -> Result<Complex64> {
    if z.len() != game.dim() {
        return Err(Error::dims(format!("z of length {}", game.dim()), z.len()));
    }
    let norm = z.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("z must be a unit vector, has norm {norm}")));
    }
    let (d1, d2) = (game.d1(), game.d2());
    let a = game.matrix().map(|v| Complex64::new(v, 0.0));
    let x = z.rows(0, d1);
    let y = z.rows(d1, d2);
    let at_x = a.tr_mul(&x);
    let a_y = &a * y;
    // x̄ᵀ (A y)
    let cross = x.dotc(&a_y);
    let beta = params.beta();
    let re = -params.alpha() * beta * (at_x.norm_squared() + a_y.norm_squared());
    Ok(Complex64::new(re, -2.0 * beta * cross.im))
}

/// `α > 2γ`, strictly.
pub fn sufficient_condition(params: &MethodParams) -> bool {
    params.alpha() > 2.0 * params.gamma()
}

fn ser_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

fn ser_complex<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct HurwitzEntry {
    #[serde(serialize_with = "ser_complex")]
    pub mu: Complex64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
    pub d1: usize,
    pub d2: usize,
    #[serde(serialize_with = "ser_complex_vec")]
    pub eig_c: Vec<Complex64>,
    #[serde(serialize_with = "ser_complex_vec")]
    pub eig_d: Vec<Complex64>,
    pub abscissa: f64,
    pub hurwitz: Vec<HurwitzEntry>,
    pub pairing_residual: f64,
    /// The proven step-size condition `α > 2γ`.
    pub sufficient: bool,
    /// `α - γ/2`, the distance to the exact stability boundary of the closed-form
    /// spectrum. Derived separately from the sufficient condition.
    pub exact_boundary_margin: f64,
}

impl SpectralReport {
    /// Stable when the abscissa is below `-1e-8`, marginal within that band.
    pub fn verdict(&self) -> Verdict {
        if self.abscissa.abs() <= ABSCISSA_MARGINAL_TOL {
            Verdict::Marginal
        } else if self.abscissa < 0.0 {
            Verdict::Stable
        } else {
            Verdict::Unstable
        }
    }

    pub fn all_hurwitz_stable(&self) -> bool {
        self.hurwitz.iter().all(|h| h.verdict == Verdict::Stable)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the whole pipeline: assemble `C` and `D`, compute both spectra, the
/// abscissa, Hurwitz verdicts per `μ`, and the determinant-identity residual.
pub fn analyze(game: &BilinearGame, params: &MethodParams) -> Result<SpectralReport> {
    let beta = params.beta();
    let eig_c = eig(&build_c_mpm(game, params))?;
    let eig_d = eig(&build_d(game, params))?;
    let abscissa = spectral_abscissa(&eig_c)?;
    let hurwitz = eig_d
        .iter()
        .map(|&mu| Ok(HurwitzEntry { mu, verdict: hurwitz_quadratic(beta, mu)?.0 }))
        .collect::<Result<Vec<_>>>()?;
    let pairing_residual = characteristic_pairing_check(&eig_c, &eig_d, beta)?;
    Ok(SpectralReport {
        alpha: params.alpha(),
        gamma: params.gamma(),
        beta,
        d1: game.d1(),
        d2: game.d2(),
        eig_c,
        eig_d,
        abscissa,
        hurwitz,
        pairing_residual,
        sufficient: sufficient_condition(params),
        exact_boundary_margin: params.alpha() - params.gamma() / 2.0,
    })
}

/// Evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min > 0.0) {
            return Err(Error::invalid(format!("grid bounds must be positive, got {min}:{max}")));
        }
        if max < min {
            return Err(Error::invalid(format!("grid max {max} below min {min}")));
        }
        if steps == 0 || (steps == 1 && max != min) {
            return Err(Error::invalid(format!(
                "grid {min}:{max} needs at least {} steps",
                if max == min { 1 } else { 2 }
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanCell {
    pub gamma: f64,
    pub alpha: f64,
    pub abscissa: f64,
    pub sufficient: bool,
    pub stable: bool,
}

/// Analyzes every `(α, γ)` grid cell. Rows are ordered with `γ` outer and `α`
/// inner regardless of how the cells are scheduled.
pub fn stability_scan(game: &BilinearGame, alpha_grid: &Grid, gamma_grid: &Grid) -> Result<Vec<ScanCell>> {
    let alphas = alpha_grid.values();
    let cells: Vec<(f64, f64)> = gamma_grid
        .values()
        .into_iter()
        .flat_map(|g| alphas.iter().map(move |&a| (g, a)))
        .collect();
    cells
        .into_par_iter()
        .map(|(gamma, alpha)| {
            let params = MethodParams::new(alpha, gamma)?;
            let report = analyze(game, &params)?;
            Ok(ScanCell {
                gamma,
                alpha,
                abscissa: report.abscissa,
                sufficient: report.sufficient,
                stable: report.verdict() == Verdict::Stable,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    fn scalar_game() -> BilinearGame {
        BilinearGame::new(dmatrix![1.0]).unwrap()
    }

    fn p(alpha: f64, gamma: f64) -> MethodParams {
        MethodParams::new(alpha, gamma).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn c_mpm_scalar_layout() {
        let m = build_c_mpm(&scalar_game(), &p(0.3, 0.1));
        let want = dmatrix![
            0.0, 0.0, 1.0, 0.0;
            0.0, 0.0, 0.0, 1.0;
            -6.0, -20.0, -20.0, 0.0;
            20.0, -6.0, 0.0, -20.0
        ];
        assert!((m - want).abs().max() < 1e-13);

        let g = BilinearGame::new(DMatrix::from_element(2, 3, 0.5)).unwrap();
        assert_eq!(build_c_mpm(&g, &p(0.3, 0.1)).shape(), (10, 10));
    }

    #[test]
    fn d_scalar_layout_and_skew_limit() {
        let d = build_d(&scalar_game(), &p(0.3, 0.1));
        assert!((d - dmatrix![-6.0, -20.0; 20.0, -6.0]).abs().max() < 1e-13);

        let g = BilinearGame::new(dmatrix![1.0, 2.0; 3.0, 4.0; 5.0, 6.0]).unwrap();
        let params = MethodParams::with_alpha_unchecked(0.0, 0.5).unwrap();
        let d = build_d(&g, &params);
        assert_eq!(d, g.jacobian() * -params.beta());
    }

    #[test]
    fn abscissa_cases() {
        assert_eq!(spectral_abscissa(&[c(-1.0, 0.0), c(-2.0, 0.0)]).unwrap(), -1.0);
        assert_eq!(spectral_abscissa(&[c(0.0, 0.0)]).unwrap(), 0.0);
        assert!(spectral_abscissa(&[]).is_err());
        let lam = [c(-0.2505, 1.0257), c(-19.7495, -1.0257), c(-0.2505, -1.0257), c(-19.7495, 1.0257)];
        assert_eq!(spectral_abscissa(&lam).unwrap(), -0.2505);
    }

    #[test]
    fn hurwitz_cases() {
        let (v, arr) = hurwitz_quadratic(20.0, c(-6.0, 20.0)).unwrap();
        assert_eq!(v, Verdict::Stable);
        assert_eq!(arr[3][0], 2000.0);
        assert_eq!(arr[0], [1.0, 0.0, 6.0]);
        assert_eq!(arr[1], [20.0, -20.0, 0.0]);
        assert_eq!(arr[2], [20.0, 120.0, 0.0]);

        assert_eq!(hurwitz_quadratic(3.0, c(-1.0, 0.0)).unwrap().0, Verdict::Stable);
        assert_eq!(hurwitz_quadratic(3.0, c(1.0, 0.0)).unwrap().0, Verdict::Unstable);
        assert_eq!(hurwitz_quadratic(3.0, c(0.0, 0.0)).unwrap().0, Verdict::Marginal);
        assert!(hurwitz_quadratic(0.0, c(-1.0, 0.0)).is_err());
        // μ₁ = -μ₂²/β² exactly: marginal
        assert_eq!(hurwitz_quadratic(20.0, c(-1.0, 20.0)).unwrap().0, Verdict::Marginal);
    }

    #[test]
    fn quadratic_root_cases() {
        let (r1, r2) = quadratic_roots(20.0, c(-6.0, 20.0));
        // √(94 + 20i)
        let s = c(94.0, 20.0).sqrt();
        assert_abs_diff_eq!(s.re, 9.7495, epsilon = 1e-4);
        assert_abs_diff_eq!(s.im, 1.0257, epsilon = 1e-4);
        assert!((r1 - (c(-10.0, 0.0) + s)).norm() < 1e-13);
        assert!((r2 - (c(-10.0, 0.0) - s)).norm() < 1e-13);
        assert_abs_diff_eq!(r1.re, -0.2505, epsilon = 1e-4);
        assert_abs_diff_eq!(r1.im, 1.0257, epsilon = 1e-4);

        let (r1, r2) = quadratic_roots(5.0, c(0.0, 0.0));
        assert_eq!((r1, r2), (c(0.0, 0.0), c(-5.0, 0.0)));

        let (r1, r2) = quadratic_roots(2.0, c(-1.0, 0.0));
        assert_eq!((r1, r2), (c(-1.0, 0.0), c(-1.0, 0.0)));
    }

    #[test]
    fn pairing_cases() {
        let game = scalar_game();
        let params = p(0.3, 0.1);
        let ec = eig(&build_c_mpm(&game, &params)).unwrap();
        let ed = eig(&build_d(&game, &params)).unwrap();
        assert!(characteristic_pairing_check(&ec, &ed, params.beta()).unwrap() <= 1e-8);
        assert!(characteristic_pairing_check(&ec, &ed, params.beta() + 0.1).unwrap() > 1e-3);

        let r = characteristic_pairing_check(&[c(0.0, 0.0), c(-3.0, 0.0)], &[c(0.0, 0.0)], 3.0).unwrap();
        assert_eq!(r, 0.0);
        assert!(characteristic_pairing_check(&[c(0.0, 0.0)], &[c(0.0, 0.0)], 3.0).is_err());
    }

    #[test]
    fn rayleigh_cases() {
        let game = scalar_game();
        let params = p(0.3, 0.1);
        let unit = |x: Complex64, y: Complex64| DVector::from_vec(vec![x, y]);
        let mu = rayleigh_mu(&game, &unit(c(1.0, 0.0), c(0.0, 0.0)), &params).unwrap();
        assert!((mu - c(-6.0, 0.0)).norm() < 1e-13);
        let mu = rayleigh_mu(&game, &unit(c(0.0, 0.0), c(1.0, 0.0)), &params).unwrap();
        assert!((mu - c(-6.0, 0.0)).norm() < 1e-13);

        // (1, i)/√2 is an eigenvector of D with eigenvalue -6 - 20i.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = unit(c(h, 0.0), c(0.0, h));
        let mu = rayleigh_mu(&game, &z, &params).unwrap();
        assert!((mu - c(-6.0, -20.0)).norm() < 1e-12, "{mu}");
        let d = build_d(&game, &params).map(|v| c(v, 0.0));
        let direct = z.dotc(&(&d * &z));
        assert!((mu - direct).norm() < 1e-10);

        assert!(rayleigh_mu(&game, &unit(c(1.0, 0.0), c(1.0, 0.0)), &params).is_err());
        assert!(rayleigh_mu(&game, &DVector::from_vec(vec![c(1.0, 0.0)]), &params).is_err());
    }

    #[test]
    fn sufficient_condition_is_strict() {
        assert!(sufficient_condition(&p(0.25, 0.1)));
        assert!(!sufficient_condition(&p(0.2, 0.1)));
        assert!(!sufficient_condition(&p(0.05, 0.1)));
    }

    #[test]
    fn analyze_scalar_cases() {
        let game = scalar_game();
        let r = analyze(&game, &p(0.3, 0.1)).unwrap();
        assert_abs_diff_eq!(r.abscissa, -0.2505, epsilon = 1e-4);
        assert!(r.sufficient && r.all_hurwitz_stable());
        assert_eq!(r.verdict(), Verdict::Stable);
        assert_eq!(r.eig_c.len(), 4);
        assert_eq!(r.eig_d.len(), 2);
        assert_abs_diff_eq!(r.exact_boundary_margin, 0.25, epsilon = 1e-15);

        let r = analyze(&game, &p(0.04, 0.1)).unwrap();
        assert!(r.abscissa > 0.0 && !r.sufficient);
        assert!(r.hurwitz.iter().any(|h| h.verdict == Verdict::Unstable));
        assert_eq!(r.verdict(), Verdict::Unstable);

        let r = analyze(&game, &p(0.05, 0.1)).unwrap();
        assert!(r.abscissa.abs() <= 1e-8, "{}", r.abscissa);
        assert_eq!(r.verdict(), Verdict::Marginal);
        assert!(r.hurwitz.iter().all(|h| h.verdict == Verdict::Marginal));
    }

    #[test]
    fn report_json_keys() {
        let r = analyze(&scalar_game(), &p(0.3, 0.1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let obj = v.as_object().unwrap();
        for key in [
            "alpha", "gamma", "beta", "d1", "d2", "eig_c", "eig_d", "abscissa", "hurwitz",
            "pairing_residual", "sufficient", "exact_boundary_margin",
        ] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj.len(), 12);
        assert_eq!(v["eig_c"][0].as_array().unwrap().len(), 2);
        assert_eq!(v["hurwitz"][0]["verdict"], "stable");
        assert_eq!(v["hurwitz"][0]["mu"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn grid_values() {
        assert_eq!(Grid::new(0.3, 0.3, 1).unwrap().values(), vec![0.3]);
        let v = Grid::new(0.01, 0.5, 50).unwrap().values();
        assert_eq!(v.len(), 50);
        assert_eq!((v[0], v[49]), (0.01, 0.5));
        assert!(Grid::new(0.0, 1.0, 3).is_err());
        assert!(Grid::new(1.0, 0.5, 3).is_err());
        assert!(Grid::new(0.1, 0.5, 1).is_err());
    }

    #[test]
    fn scan_order_and_cells() {
        let game = scalar_game();
        let cells = stability_scan(
            &game,
            &Grid::new(0.01, 0.5, 50).unwrap(),
            &Grid::new(0.05, 0.2, 4).unwrap(),
        )
        .unwrap();
        assert_eq!(cells.len(), 200);
        let gammas = Grid::new(0.05, 0.2, 4).unwrap().values();
        let alphas = Grid::new(0.01, 0.5, 50).unwrap().values();
        for (i, cell) in cells.iter().enumerate() {
            assert_eq!(cell.gamma, gammas[i / 50]);
            assert_eq!(cell.alpha, alphas[i % 50]);
            assert!(!(cell.sufficient && !cell.stable));
        }
        assert!(cells.iter().any(|c| c.stable && !c.sufficient));

        // Transition within one α-step of γ/2 for each γ.
        let step = alphas[1] - alphas[0];
        for row in cells.chunks(50) {
            let g = row[0].gamma;
            let first_stable = row.iter().find(|c| c.stable).unwrap().alpha;
            assert!((first_stable - g / 2.0).abs() <= step + 1e-12, "γ={g}: {first_stable}");
        }

        let one = stability_scan(&game, &Grid::new(0.1, 0.1, 1).unwrap(), &Grid::new(0.1, 0.1, 1).unwrap()).unwrap();
        assert!(one[0].stable && !one[0].sufficient);
    }
}
