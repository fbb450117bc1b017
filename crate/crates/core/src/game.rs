//! The bilinear game `min_x max_y xᵀ A y`.
//!
//! Its joint vector field is `V(z) = (A y, -Aᵀ x)` and its Jacobian is the
//! constant block skew-symmetric matrix `J = [[0, A], [-Aᵀ, 0]]`, so that
//! `V(z) = J z`. The singular value decomposition of `A` is computed once at
//! construction; rank decisions, distances to the saddle set and the
//! closed-form spectra elsewhere in the crate all read from it.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct BilinearGame {
    a: DMatrix<f64>,
    sv: Vec<f64>,
    // Thin SVD factors, columns/rows ordered to match `sv`.
    u: DMatrix<f64>,
    v_t: DMatrix<f64>,
    rank_tol: f64,
}

impl BilinearGame {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        Self::with_rank_tol(a, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(a: DMatrix<f64>, rank_tol: f64) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::invalid("payoff matrix must be at least 1x1"));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("payoff matrix has non-finite entries"));
        }
        if !(rank_tol >= 0.0 && rank_tol.is_finite()) {
            return Err(Error::invalid("rank tolerance must be finite and nonnegative"));
        }

        let svd = a.clone().svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::NumericFailure("SVD did not produce factors".into())),
        };
        let k = svd.singular_values.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

        let sv = order.iter().map(|&i| svd.singular_values[i].max(0.0)).collect();
        let u = DMatrix::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]);
        let v_t = DMatrix::from_fn(k, v_t.ncols(), |r, c| v_t[(order[r], c)]);

        Ok(Self {
            a,
            sv,
            u,
            v_t,
            rank_tol,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn d1(&self) -> usize {
        self.a.nrows()
    }

    pub fn d2(&self) -> usize {
        self.a.ncols()
    }

    /// Dimension of the joint variable `z = (x, y)`.
    pub fn dim(&self) -> usize {
        self.d1() + self.d2()
    }

    pub fn is_square(&self) -> bool {
        self.d1() == self.d2()
    }

    /// Singular values of `A`, non-increasing.
    pub fn singular_values(&self) -> &[f64] {
        &self.sv
    }

    pub fn sigma_max(&self) -> f64 {
        self.sv[0]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.norm()
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn numerical_rank(&self) -> usize {
        let cutoff = self.rank_tol * self.sv[0];
        self.sv.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.numerical_rank() == self.d1().min(self.d2())
    }

    pub(crate) fn check_z(&self, z: &DVector<f64>) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::dims(format!("z of length {}", self.dim()), z.len()));
        }
        Ok(())
    }

    /// `V(z) = (A y, -Aᵀ x)` on a concatenated vector, without dimension checks.
    pub(crate) fn field(&self, z: &DVector<f64>) -> DVector<f64> {
        let (d1, d2) = (self.d1(), self.d2());
        let x = z.rows(0, d1);
        let y = z.rows(d1, d2);
        let mut out = DVector::zeros(d1 + d2);
        out.rows_mut(0, d1).copy_from(&(&self.a * y));
        out.rows_mut(d1, d2).copy_from(&(-self.a.tr_mul(&x)));
        out
    }

    /// Joint vector field `V_BG(z)`.
    pub fn vector_field(&self, z: &Point) -> Result<DVector<f64>> {
        z.check(self)?;
        Ok(self.field(&z.to_z()))
    }

    /// Constant Jacobian `J_BG = [[0, A], [-Aᵀ, 0]]`.
    pub fn jacobian(&self) -> DMatrix<f64> {
        let (d1, d2) = (self.d1(), self.d2());
        let mut j = DMatrix::zeros(d1 + d2, d1 + d2);
        j.view_mut((0, d1), (d1, d2)).copy_from(&self.a);
        j.view_mut((d1, 0), (d2, d1)).copy_from(&(-self.a.transpose()));
        j
    }

    /// Euclidean distance from `z` to the saddle set `{Aᵀx = 0, A y = 0}`.
    ///
    /// The distance is the norm of the components of `x` in `range(A)` and of
    /// `y` in `range(Aᵀ)`; for square full-rank games this is just `‖z‖`.
    pub fn distance_to_solution(&self, z: &Point) -> Result<f64> {
        z.check(self)?;
        self.distance_unchecked(&z.to_z())
    }

    pub(crate) fn distance_unchecked(&self, z: &DVector<f64>) -> Result<f64> {
        if !self.is_full_rank() {
            return Err(Error::UnsupportedGame(format!(
                "payoff matrix is rank deficient (rank {} < {})",
                self.numerical_rank(),
                self.d1().min(self.d2())
            )));
        }
        if self.is_square() {
            return Ok(z.norm());
        }
        let (d1, d2) = (self.d1(), self.d2());
        let px = self.u.tr_mul(&z.rows(0, d1));
        let py = &self.v_t * z.rows(d1, d2);
        Ok((px.norm_squared() + py.norm_squared()).sqrt())
    }
}

/// A joint point `z = (x, y)` with `x ∈ R^{d1}`, `y ∈ R^{d2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

impl Point {
    pub fn new(x: DVector<f64>, y: DVector<f64>) -> Self {
        Self { x, y }
    }

    pub fn from_slices(x: &[f64], y: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(x), DVector::from_column_slice(y))
    }

    pub fn zeros(game: &BilinearGame) -> Self {
        Self::new(DVector::zeros(game.d1()), DVector::zeros(game.d2()))
    }

    /// Splits a concatenated vector into `(x, y)` using the game's shape.
    pub fn from_z(game: &BilinearGame, z: &DVector<f64>) -> Result<Self> {
        game.check_z(z)?;
        let (d1, d2) = (game.d1(), game.d2());
        Ok(Self::new(z.rows(0, d1).into_owned(), z.rows(d1, d2).into_owned()))
    }

    pub fn to_z(&self) -> DVector<f64> {
        let mut z = DVector::zeros(self.x.len() + self.y.len());
        z.rows_mut(0, self.x.len()).copy_from(&self.x);
        z.rows_mut(self.x.len(), self.y.len()).copy_from(&self.y);
        z
    }

    pub(crate) fn check(&self, game: &BilinearGame) -> Result<()> {
        if self.x.len() != game.d1() || self.y.len() != game.d2() {
            return Err(Error::dims(
                format!("x: {}, y: {}", game.d1(), game.d2()),
                format!("x: {}, y: {}", self.x.len(), self.y.len()),
            ));
        }
        Ok(())
    }
}
