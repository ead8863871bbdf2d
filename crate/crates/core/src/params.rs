//! Model parameters: complex dimension, curvature scale, and the numerical
//! tolerances every comparison in the crate is pinned to.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Default tolerance for matches against finite-difference oracles
/// (relative, second-order FD at double precision).
pub const DEFAULT_TOL_FD: f64 = 1e-5;
/// Default tolerance for identities that hold exactly up to rounding.
pub const DEFAULT_TOL_EXACT: f64 = 1e-10;

/// Parameters of the ball model of CHⁿ with holomorphic sectional
/// curvature −c, plus the tolerances used by the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Complex dimension n ≥ 1; the base manifold has real dimension 2n.
    pub n: usize,
    /// Curvature scale c > 0: the holomorphic sectional curvature is −c.
    pub c: f64,
    /// Step for central finite differences.
    pub fd_step: f64,
    /// Tolerance for oracle matches (finite differences vs closed forms).
    pub tol_fd: f64,
    /// Tolerance for algebraic identities (exact up to rounding).
    pub tol_exact: f64,
}

impl ModelParams {
    /// Parameters with the default steps and tolerances.
    pub fn new(n: usize, c: f64) -> Result<Self> {
        Self::with_tolerances(n, c, DEFAULT_FD_STEP, DEFAULT_TOL_FD, DEFAULT_TOL_EXACT)
    }

    /// Fully explicit constructor; validates every invariant.
    pub fn with_tolerances(
        n: usize,
        c: f64,
        fd_step: f64,
        tol_fd: f64,
        tol_exact: f64,
    ) -> Result<Self> {
        let params = Self { n, c, fd_step, tol_fd, tol_exact };
        params.validate()?;
        Ok(params)
    }

    /// Checks n ≥ 1, c > 0, 0 < fd_step < 1, and positive finite tolerances.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(GeomError::InvalidParams("n must be ≥ 1".into()));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(GeomError::InvalidParams(format!(
                "c must be positive and finite, got {}",
                self.c
            )));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1.0) {
            return Err(GeomError::InvalidParams(format!(
                "fd_step must lie in (0, 1), got {}",
                self.fd_step
            )));
        }
        for (name, t) in [("tol_fd", self.tol_fd), ("tol_exact", self.tol_exact)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(GeomError::InvalidParams(format!(
                    "{name} must be positive and finite, got {t}"
                )));
            }
        }
        Ok(())
    }

    /// Real dimension 2n of the base manifold.
    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    /// Real dimension 4n of the tangent bundle TM.
    pub fn phase_dim(&self) -> usize {
        4 * self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_parameters() {
        let p = ModelParams::new(2, 1.7).unwrap();
        assert_eq!(p.real_dim(), 4);
        assert_eq!(p.phase_dim(), 8);
        assert_eq!(p.tol_exact, DEFAULT_TOL_EXACT);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ModelParams::new(0, 1.0).is_err());
        assert!(ModelParams::new(1, 0.0).is_err());
        assert!(ModelParams::new(1, -2.0).is_err());
        assert!(ModelParams::new(1, f64::NAN).is_err());
        assert!(ModelParams::with_tolerances(1, 1.0, 0.0, 1e-5, 1e-10).is_err());
        assert!(ModelParams::with_tolerances(1, 1.0, 1.5, 1e-5, 1e-10).is_err());
        assert!(ModelParams::with_tolerances(1, 1.0, 1e-5, 0.0, 1e-10).is_err());
    }
}
