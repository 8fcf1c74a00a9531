//! Mass matrices.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// The mass matrix `M` of the kinetic energy `½ vᵀ M v`.
#[derive(Debug, Clone)]
pub enum MassSpec {
    Identity,
    Diagonal(Vec<f64>),
    Dense(DenseMass),
}

/// A dense symmetric positive definite mass with its Cholesky factor `M = LLᵀ`.
#[derive(Debug, Clone)]
pub struct DenseMass {
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl MassSpec {
    pub fn diagonal(m: Vec<f64>) -> Result<Self> {
        if m.iter().any(|&mi| !(mi > 0.0 && mi.is_finite())) {
            return Err(Error::InvalidMass("diagonal entries must be positive".into()));
        }
        Ok(MassSpec::Diagonal(m))
    }

    /// `rows` is the row-major `d×d` matrix.
    pub fn dense(d: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: rows.len() });
        }
        let matrix = DMatrix::from_row_slice(d, d, rows);
        if (&matrix - matrix.transpose()).amax() > 1e-12 * matrix.amax().max(1.0) {
            return Err(Error::InvalidMass("dense mass must be symmetric".into()));
        }
        let chol = Cholesky::new(matrix.clone())
            .ok_or_else(|| Error::InvalidMass("dense mass must be positive definite".into()))?;
        Ok(MassSpec::Dense(DenseMass { matrix, chol }))
    }

    /// Checks the mass against a model dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            MassSpec::Identity => Ok(()),
            MassSpec::Diagonal(m) => crate::error::check_dim(dim, m.len()),
            MassSpec::Dense(dm) => crate::error::check_dim(dim, dm.matrix.nrows()),
        }
    }

    /// `out = M v`.
    pub fn apply_m(&self, v: &[f64], out: &mut [f64]) {
        match self {
            MassSpec::Identity => out.copy_from_slice(v),
            MassSpec::Diagonal(m) => {
                for ((o, &vi), &mi) in out.iter_mut().zip(v).zip(m) {
                    *o = mi * vi;
                }
            }
            MassSpec::Dense(dm) => {
                let r = &dm.matrix * DVector::from_column_slice(v);
                out.copy_from_slice(r.as_slice());
            }
        }
    }

    /// `out = M⁻¹ p`.
    pub fn apply_minv(&self, p: &[f64], out: &mut [f64]) {
        match self {
            MassSpec::Identity => out.copy_from_slice(p),
            MassSpec::Diagonal(m) => {
                for ((o, &pi), &mi) in out.iter_mut().zip(p).zip(m) {
                    *o = pi / mi;
                }
            }
            MassSpec::Dense(dm) => {
                let r = dm.chol.solve(&DVector::from_column_slice(p));
                out.copy_from_slice(r.as_slice());
            }
        }
    }

    /// Maps a standard normal vector `z` to a draw from `N(0, M⁻¹)`: `L⁻ᵀ z`.
    pub fn chol_minv_mul(&self, z: &[f64], out: &mut [f64]) {
        match self {
            MassSpec::Identity => out.copy_from_slice(z),
            MassSpec::Diagonal(m) => {
                for ((o, &zi), &mi) in out.iter_mut().zip(z).zip(m) {
                    *o = zi / mi.sqrt();
                }
            }
            MassSpec::Dense(dm) => {
                let lt = dm.chol.l().transpose();
                let r = lt
                    .solve_upper_triangular(&DVector::from_column_slice(z))
                    .expect("Cholesky factor has a positive diagonal");
                out.copy_from_slice(r.as_slice());
            }
        }
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        match self {
            MassSpec::Identity => v.iter().map(|x| x * x).sum(),
            MassSpec::Diagonal(m) => v.iter().zip(m).map(|(x, mi)| mi * x * x).sum(),
            MassSpec::Dense(dm) => {
                let dv = DVector::from_column_slice(v);
                dv.dot(&(&dm.matrix * &dv))
            }
        }
    }

    /// `log det M`.
    pub fn log_det_m(&self) -> f64 {
        match self {
            MassSpec::Identity => 0.0,
            MassSpec::Diagonal(m) => m.iter().map(|mi| mi.ln()).sum(),
            MassSpec::Dense(dm) => 2.0 * dm.chol.l().diagonal().iter().map(|l| l.ln()).sum::<f64>(),
        }
    }
}
