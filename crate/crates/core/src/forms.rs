//! Matrix carriers for 2-forms on the tangent spaces of TM, a Pfaffian for
//! nondegeneracy checks, and finite-difference exterior-derivative oracles.
//!
//! Every 2-form matrix is tagged with the basis it is expressed in —
//! coordinate (the 4n TM-coordinates (x, v)) or Sasaki-frame (horizontal and
//! vertical lifts of an adapted frame). Mixing bases is a hard error: it is
//! the single most likely source of silent wrongness in this kind of code.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Basis tag for [`TwoFormMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormBasis {
    /// Coordinate basis of T(TM): the 4n directions (δx, δv).
    Coordinate,
    /// Horizontal then vertical lifts of an adapted g-orthonormal frame.
    SasakiFrame,
}

/// An antisymmetric matrix representing a 2-form, tagged with its basis.
/// Entries are `matrix[(a, b)] = ω(e_a, e_b)` for the tagged basis (e_a).
///
/// Typically 4n×4n (a form on the whole of T(TM)); the horizontal/vertical
/// blocks of the magnetic decomposition reuse the carrier at size 2n×2n.
#[derive(Debug, Clone)]
pub struct TwoFormMatrix {
    basis: FormBasis,
    matrix: DMatrix<f64>,
}

impl TwoFormMatrix {
    pub fn new(basis: FormBasis, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(GeomError::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> FormBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// ω(a, b) for component vectors a, b in this matrix's basis.
    pub fn pair(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.matrix * b))
    }

    /// Components of the interior product i_Xω, i.e. the covector
    /// η ↦ ω(X, η); equals Mᵀ·X for this antisymmetric M.
    pub fn covector(&self, x: &DVector<f64>) -> DVector<f64> {
        self.matrix.transpose() * x
    }

    /// Sum of two forms in the same basis; differing bases are a hard error.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(GeomError::BasisMismatch { left: self.basis, right: other.basis });
        }
        if self.dim() != other.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(Self { basis: self.basis, matrix: &self.matrix + &other.matrix })
    }

    /// Congruence transform Tᵀ·M·T, where the columns of T express the new
    /// basis vectors in this matrix's current basis. The caller supplies the
    /// matching tag for the result.
    pub fn congruence(&self, t: &DMatrix<f64>, new_basis: FormBasis) -> Result<Self> {
        if t.nrows() != self.dim() || t.ncols() != self.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), got: t.nrows() });
        }
        Ok(Self { basis: new_basis, matrix: t.transpose() * &self.matrix * t })
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.clone().lu().determinant()
    }

    /// Pfaffian of the matrix; Pf² = det for antisymmetric input, which the
    /// nondegeneracy checks assert as a consistency condition.
    pub fn pfaffian(&self) -> f64 {
        pfaffian(&self.matrix)
    }

    /// max |M + Mᵀ| — how far the carrier is from exact antisymmetry.
    pub fn antisymmetry_defect(&self) -> f64 {
        (&self.matrix + self.matrix.transpose()).amax()
    }
}

/// Pfaffian of an antisymmetric matrix by the Parlett–Reid LTLᵀ reduction
/// with partial pivoting: congruence by unit lower-triangular transforms
/// (Pfaffian-preserving) brings the matrix to a form whose Pfaffian is the
/// product of the (2k, 2k+1) entries; row/column swaps each flip the sign.
/// Odd dimension returns 0.
pub fn pfaffian(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = m.clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        // Pivot: the largest |a[(i, k)]| for i > k.
        let mut piv = k + 1;
        let mut best = a[(k + 1, k)].abs();
        for i in k + 2..n {
            if a[(i, k)].abs() > best {
                best = a[(i, k)].abs();
                piv = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != k + 1 {
            a.swap_rows(k + 1, piv);
            a.swap_columns(k + 1, piv);
            pf = -pf;
        }
        pf *= a[(k, k + 1)];
        let denom = a[(k + 1, k)];
        for i in k + 2..n {
            let t = a[(i, k)] / denom;
            if t != 0.0 {
                for j in 0..n {
                    let r = t * a[(k + 1, j)];
                    a[(i, j)] -= r;
                }
                for j in 0..n {
                    let r = t * a[(j, k + 1)];
                    a[(j, i)] -= r;
                }
            }
        }
        k += 2;
    }
    pf
}

/// Central-difference exterior derivative of a 1-form on TM given by its
/// coordinate components: returns the matrix with entries
/// (dα)(e_μ, e_ν) = ∂_μ α_ν − ∂_ν α_μ, tagged [`FormBasis::Coordinate`].
pub fn fd_exterior_derivative_1form<F>(
    at: &DVector<f64>,
    step: f64,
    mut components: F,
) -> Result<TwoFormMatrix>
where
    F: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
{
    let m = at.len();
    let mut grad = DMatrix::zeros(m, m);
    for mu in 0..m {
        let mut qp = at.clone();
        qp[mu] += step;
        let mut qm = at.clone();
        qm[mu] -= step;
        let cp = components(&qp)?;
        let cm = components(&qm)?;
        if cp.len() != m || cm.len() != m {
            return Err(GeomError::DimensionMismatch { expected: m, got: cp.len() });
        }
        let row = (cp - cm) / (2.0 * step);
        for nu in 0..m {
            grad[(mu, nu)] = row[nu];
        }
    }
    let mat = &grad - &grad.transpose();
    TwoFormMatrix::new(FormBasis::Coordinate, mat)
}

/// Largest component of the finite-difference exterior derivative of a
/// 2-form field given by its coordinate matrix:
/// max over μ<ν<ρ of |∂_μ W_νρ − ∂_ν W_μρ + ∂_ρ W_μν|. Zero for closed forms.
pub fn fd_closedness_defect<F>(at: &DVector<f64>, step: f64, mut matrix_fn: F) -> Result<f64>
where
    F: FnMut(&DVector<f64>) -> Result<DMatrix<f64>>,
{
    let m = at.len();
    let mut deriv: Vec<DMatrix<f64>> = Vec::with_capacity(m);
    for mu in 0..m {
        let mut qp = at.clone();
        qp[mu] += step;
        let mut qm = at.clone();
        qm[mu] -= step;
        let wp = matrix_fn(&qp)?;
        let wm = matrix_fn(&qm)?;
        deriv.push((wp - wm) / (2.0 * step));
    }
    let mut worst = 0.0f64;
    for mu in 0..m {
        for nu in mu + 1..m {
            for rho in nu + 1..m {
                let v = deriv[mu][(nu, rho)] - deriv[nu][(mu, rho)] + deriv[rho][(mu, nu)];
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_antisymmetric(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
        let raw = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        &raw - raw.transpose()
    }

    #[test]
    fn pfaffian_matches_closed_form_in_dim_four() {
        // Pf [[0,a,b,c],[−a,0,d,e],[−b,−d,0,f],[−c,−e,−f,0]] = af − be + cd.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let (a, b, c) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let (d, e, f) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let m = DMatrix::from_row_slice(
                4,
                4,
                &[0.0, a, b, c, -a, 0.0, d, e, -b, -d, 0.0, f, -c, -e, -f, 0.0],
            );
            assert_relative_eq!(pfaffian(&m), a * f - b * e + c * d, epsilon = 1e-12);
        }
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for d in [2usize, 4, 6, 8, 12] {
            let m = random_antisymmetric(&mut rng, d);
            let pf = pfaffian(&m);
            let det = m.clone().lu().determinant();
            assert_relative_eq!(pf * pf, det, max_relative = 1e-9);
        }
    }

    #[test]
    fn pfaffian_of_standard_symplectic_block_is_unimodular() {
        // [[0, I],[−I, 0]] in any even dimension has Pf = ±1, det = 1.
        for n in 1usize..=3 {
            let d = 2 * n;
            let mut m = DMatrix::zeros(2 * d, 2 * d);
            for i in 0..d {
                m[(i, d + i)] = 1.0;
                m[(d + i, i)] = -1.0;
            }
            let pf = pfaffian(&m);
            assert_relative_eq!(pf.abs(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn pfaffian_detects_singularity_and_odd_dimension() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 2.0;
        m[(1, 0)] = -2.0;
        // rows/cols 2,3 are zero → singular.
        assert_eq!(pfaffian(&m), 0.0);
        assert_eq!(pfaffian(&DMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn basis_mixing_is_a_hard_error() {
        let a = TwoFormMatrix::new(FormBasis::Coordinate, DMatrix::zeros(4, 4)).unwrap();
        let b = TwoFormMatrix::new(FormBasis::SasakiFrame, DMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(a.add(&b), Err(GeomError::BasisMismatch { .. })));
        assert!(a.add(&a).is_ok());
    }

    #[test]
    fn pair_and_covector_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let m = random_antisymmetric(&mut rng, 6);
        let form = TwoFormMatrix::new(FormBasis::Coordinate, m).unwrap();
        let x = DVector::from_fn(6, |_, _| rng.random::<f64>());
        let y = DVector::from_fn(6, |_, _| rng.random::<f64>());
        // (i_Xω)(y) must equal ω(x, y).
        assert_relative_eq!(form.covector(&x).dot(&y), form.pair(&x, &y), epsilon = 1e-12);
    }

    #[test]
    fn congruence_transforms_pairings_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let m = random_antisymmetric(&mut rng, 4);
        let form = TwoFormMatrix::new(FormBasis::Coordinate, m).unwrap();
        let t = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let changed = form.congruence(&t, FormBasis::SasakiFrame).unwrap();
        assert_eq!(changed.basis(), FormBasis::SasakiFrame);
        let a = DVector::from_fn(4, |_, _| rng.random::<f64>());
        let b = DVector::from_fn(4, |_, _| rng.random::<f64>());
        // ω'(a, b) = ω(Ta, Tb).
        assert_relative_eq!(
            changed.pair(&a, &b),
            form.pair(&(&t * &a), &(&t * &b)),
            epsilon = 1e-12
        );
    }

    #[test]
    fn fd_exterior_derivative_matches_polynomial_example() {
        // α = (q₁q₃, q₀², q₃, q₂q₀): central differences are exact on
        // quadratics up to rounding.
        let components = |q: &DVector<f64>| {
            Ok(DVector::from_vec(vec![q[1] * q[3], q[0] * q[0], q[3], q[2] * q[0]]))
        };
        let at = DVector::from_vec(vec![0.3, -0.7, 0.4, 1.1]);
        let d = fd_exterior_derivative_1form(&at, 1e-4, components).unwrap();
        let mut grad = DMatrix::zeros(4, 4);
        // grad[(μ, ν)] = ∂_μ α_ν at `at`.
        grad[(0, 1)] = 2.0 * at[0];
        grad[(0, 3)] = at[2];
        grad[(1, 0)] = at[3];
        grad[(2, 3)] = at[0];
        grad[(3, 0)] = at[1];
        grad[(3, 2)] = 1.0;
        let expect = &grad - grad.transpose();
        assert!((d.matrix() - expect).amax() < 1e-10);
        assert!(d.antisymmetry_defect() < 1e-15);
    }

    #[test]
    fn closedness_defect_separates_exact_from_nonclosed() {
        let at = DVector::from_vec(vec![0.2, 0.5, -0.3, 0.8]);
        // Exact form: d of the α above, as a matrix field.
        let exact = |q: &DVector<f64>| {
            let mut grad = DMatrix::zeros(4, 4);
            grad[(0, 1)] = 2.0 * q[0];
            grad[(0, 3)] = q[2];
            grad[(1, 0)] = q[3];
            grad[(2, 3)] = q[0];
            grad[(3, 0)] = q[1];
            grad[(3, 2)] = 1.0;
            Ok(&grad - grad.transpose())
        };
        assert!(fd_closedness_defect(&at, 1e-4, exact).unwrap() < 1e-10);

        // Non-closed: W₀₁ = q₂ has dW(e₀,e₁,e₂) = 1.
        let nonclosed = |q: &DVector<f64>| {
            let mut w = DMatrix::zeros(4, 4);
            w[(0, 1)] = q[2];
            w[(1, 0)] = -q[2];
            Ok(w)
        };
        let defect = fd_closedness_defect(&at, 1e-4, nonclosed).unwrap();
        assert_relative_eq!(defect, 1.0, epsilon = 1e-9);
    }
}
