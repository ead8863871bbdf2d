//! The ball model of complex hyperbolic space CHⁿ with holomorphic sectional
//! curvature −c: metric tensor, complex structure, Christoffel symbols, and
//! the curvature tensor computed two independent ways.
//!
//! Coordinates are the interleaved real coordinates (x₁, y₁, …, xₙ, yₙ) of
//! z ∈ ℂⁿ in the open unit ball, so the complex structure J (multiplication
//! by i) is a constant matrix. The Hermitian metric is the scaled Bergman
//! metric
//!
//! ```text
//! H_ab = (4/c) · [(1 − |z|²) δ_ab + z̄_a z_b] / (1 − |z|²)²,
//! ```
//!
//! whose real form G is symmetric positive definite and J-invariant. The
//! curvature scale is validated by oracle, not trusted: finite differences of
//! the Christoffel symbols reproduce the constant-curvature quadrilinear
//! formula and give holomorphic sectional curvature −c in the tests.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::params::ModelParams;

/// Margin kept between |z| + fd_step and the ball boundary in FD loops.
const FD_RADIUS_LIMIT: f64 = 0.999;

/// A point of the unit-ball model, stored in interleaved real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePoint {
    coords: DVector<f64>,
}

impl BasePoint {
    /// Validates finiteness and |z| < 1 (strict).
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.iter().any(|t| !t.is_finite()) {
            return Err(GeomError::InvalidInput("non-finite base coordinates".into()));
        }
        let radius = coords.norm();
        if radius >= 1.0 {
            return Err(GeomError::OutsideBall { radius });
        }
        Ok(Self { coords })
    }

    /// The center of the ball in a base of real dimension `dim`.
    pub fn origin(dim: usize) -> Self {
        Self { coords: DVector::zeros(dim) }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Euclidean coordinate radius |z|.
    pub fn radius(&self) -> f64 {
        self.coords.norm()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The point with one coordinate shifted, re-validated (used by FD loops).
    pub fn shifted(&self, index: usize, delta: f64) -> Result<Self> {
        let mut coords = self.coords.clone();
        coords[index] += delta;
        Self::new(coords)
    }
}

/// The metric tensor at a base point: a symmetric positive-definite
/// 2n×2n matrix with helpers for inner products.
#[derive(Debug, Clone)]
pub struct MetricTensor {
    matrix: DMatrix<f64>,
}

impl MetricTensor {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// ⟨u, w⟩_g = uᵀ G w.
    pub fn inner(&self, u: &DVector<f64>, w: &DVector<f64>) -> f64 {
        u.dot(&(&self.matrix * w))
    }

    /// ‖u‖²_g.
    pub fn norm_sq(&self, u: &DVector<f64>) -> f64 {
        self.inner(u, u)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// The constant matrix of the complex structure J (multiplication by i) in
/// interleaved coordinates: block-diagonal 2×2 blocks [[0, −1], [1, 0]].
pub fn complex_structure(params: &ModelParams) -> DMatrix<f64> {
    let d = params.real_dim();
    let mut j = DMatrix::zeros(d, d);
    for a in 0..params.n {
        j[(2 * a, 2 * a + 1)] = -1.0;
        j[(2 * a + 1, 2 * a)] = 1.0;
    }
    j
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// The real form of the scaled Bergman metric at `x`.
pub fn metric(params: &ModelParams, x: &BasePoint) -> Result<MetricTensor> {
    let n = params.n;
    check_dim(params, x)?;
    let q = x.coords();
    let s = q.norm_squared();
    let dd = 1.0 - s;
    let scale = 4.0 / params.c;
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        let (xa, ya) = (q[2 * a], q[2 * a + 1]);
        for b in 0..n {
            let (xb, yb) = (q[2 * b], q[2 * b + 1]);
            // H_ab = (4/c)[δ_ab/D + z̄_a z_b / D²], split into real and
            // imaginary parts: Re z̄_a z_b = x_a x_b + y_a y_b,
            // Im z̄_a z_b = x_a y_b − y_a x_b.
            let re = scale * (delta(a, b) / dd + (xa * xb + ya * yb) / (dd * dd));
            let im = scale * (xa * yb - ya * xb) / (dd * dd);
            g[(2 * a, 2 * b)] = re;
            g[(2 * a + 1, 2 * b + 1)] = re;
            g[(2 * a, 2 * b + 1)] = im;
            g[(2 * a + 1, 2 * b)] = -im;
        }
    }
    Ok(MetricTensor { matrix: g })
}

/// Closed-form partial derivatives ∂G/∂q_m, indexed by the coordinate m.
pub fn metric_derivative(params: &ModelParams, x: &BasePoint) -> Result<Vec<DMatrix<f64>>> {
    let n = params.n;
    check_dim(params, x)?;
    let q = x.coords();
    let d = 2 * n;
    let s = q.norm_squared();
    let dd = 1.0 - s;
    let (d2, d3) = (dd * dd, dd * dd * dd);
    let scale = 4.0 / params.c;
    let xs: Vec<f64> = (0..n).map(|a| q[2 * a]).collect();
    let ys: Vec<f64> = (0..n).map(|a| q[2 * a + 1]).collect();

    let mut out = Vec::with_capacity(d);
    for m in 0..n {
        for part in 0..2 {
            // part 0: ∂/∂x_m, part 1: ∂/∂y_m; t is the active coordinate.
            let t = if part == 0 { xs[m] } else { ys[m] };
            let mut dg = DMatrix::zeros(d, d);
            for a in 0..n {
                for b in 0..n {
                    let p_ab = xs[a] * xs[b] + ys[a] * ys[b];
                    let q_ab = xs[a] * ys[b] - ys[a] * xs[b];
                    let mut da = delta(a, b) * 2.0 * t / d2 + p_ab * 4.0 * t / d3;
                    let mut db = q_ab * 4.0 * t / d3;
                    if part == 0 {
                        da += (delta(a, m) * xs[b] + xs[a] * delta(b, m)) / d2;
                        db += (delta(a, m) * ys[b] - ys[a] * delta(b, m)) / d2;
                    } else {
                        da += (delta(a, m) * ys[b] + ys[a] * delta(b, m)) / d2;
                        db += (xs[a] * delta(b, m) - delta(a, m) * xs[b]) / d2;
                    }
                    da *= scale;
                    db *= scale;
                    dg[(2 * a, 2 * b)] = da;
                    dg[(2 * a + 1, 2 * b + 1)] = da;
                    dg[(2 * a, 2 * b + 1)] = db;
                    dg[(2 * a + 1, 2 * b)] = -db;
                }
            }
            out.push(dg);
        }
    }
    Ok(out)
}

/// Central-difference oracle for [`metric_derivative`].
pub fn metric_fd_derivative(params: &ModelParams, x: &BasePoint) -> Result<Vec<DMatrix<f64>>> {
    let d = params.real_dim();
    let h = params.fd_step;
    check_fd_margin(x, h)?;
    let mut out = Vec::with_capacity(d);
    for m in 0..d {
        let gp = metric(params, &x.shifted(m, h)?)?;
        let gm = metric(params, &x.shifted(m, -h)?)?;
        out.push((gp.matrix() - gm.matrix()) / (2.0 * h));
    }
    Ok(out)
}

/// Christoffel symbols Γᵏᵢⱼ of the Levi-Civita connection at a base point.
#[derive(Debug, Clone)]
pub struct Christoffel {
    /// `symbols[k][(i, j)]` = Γᵏᵢⱼ.
    symbols: Vec<DMatrix<f64>>,
}

impl Christoffel {
    pub fn symbols(&self) -> &[DMatrix<f64>] {
        &self.symbols
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    /// The bilinear contraction Γ(u, w)ᵏ = Γᵏᵢⱼ uⁱ wʲ.
    pub fn contract(&self, u: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        let d = self.symbols.len();
        DVector::from_fn(d, |k, _| u.dot(&(&self.symbols[k] * w)))
    }

    /// The matrix C with C[(k, i)] = Γᵏᵢⱼ vʲ, so that Γ(u, v) = C·u.
    pub fn contract_right(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let d = self.symbols.len();
        DMatrix::from_fn(d, d, |k, i| self.symbols[k].row(i).transpose().dot(v))
    }
}

/// Christoffel symbols from the closed-form metric derivative:
/// Γᵏᵢⱼ = ½ gᵏˡ (∂ᵢ g_lj + ∂ⱼ g_li − ∂_l g_ij).
pub fn christoffel(params: &ModelParams, x: &BasePoint) -> Result<Christoffel> {
    let dg = metric_derivative(params, x)?;
    christoffel_from_derivative(params, x, &dg)
}

/// Same raising step but fed by the finite-difference metric derivative;
/// the tests use it as an independent oracle for [`christoffel`].
pub fn christoffel_fd(params: &ModelParams, x: &BasePoint) -> Result<Christoffel> {
    let dg = metric_fd_derivative(params, x)?;
    christoffel_from_derivative(params, x, &dg)
}

fn christoffel_from_derivative(
    params: &ModelParams,
    x: &BasePoint,
    dg: &[DMatrix<f64>],
) -> Result<Christoffel> {
    let d = params.real_dim();
    let g = metric(params, x)?;
    let chol = nalgebra::Cholesky::new(g.matrix().clone()).ok_or_else(|| {
        GeomError::InvalidInput("metric is not positive definite at this point".into())
    })?;
    let mut symbols = vec![DMatrix::zeros(d, d); d];
    // Each (i, j) pair is raised independently; the i↔j symmetry of the
    // result is a test target, not a structural shortcut.
    for i in 0..d {
        for j in 0..d {
            let lower = DVector::from_fn(d, |l, _| {
                0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)])
            });
            let raised = chol.solve(&lower);
            for k in 0..d {
                symbols[k][(i, j)] = raised[k];
            }
        }
    }
    Ok(Christoffel { symbols })
}

/// The constant-holomorphic-sectional-curvature quadrilinear
///
/// ```text
/// R(X,Y,Z,W) = −(c/4)·(⟨X,Z⟩⟨Y,W⟩ − ⟨X,W⟩⟨Y,Z⟩ + ⟨X,JZ⟩⟨Y,JW⟩
///                       − ⟨X,JW⟩⟨Y,JZ⟩ + 2⟨X,JY⟩⟨Z,JW⟩)
/// ```
///
/// evaluated with a precomputed metric and complex structure. This is the
/// workhorse behind [`curvature_algebraic`] and the magnetic 2-form.
pub fn quadrilinear(
    g: &MetricTensor,
    j: &DMatrix<f64>,
    c: f64,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
) -> f64 {
    let (jy, jz, jw) = (j * y, j * z, j * w);
    -(c / 4.0)
        * (g.inner(x, z) * g.inner(y, w) - g.inner(x, w) * g.inner(y, z)
            + g.inner(x, &jz) * g.inner(y, &jw)
            - g.inner(x, &jw) * g.inner(y, &jz)
            + 2.0 * g.inner(x, &jy) * g.inner(z, &jw))
}

/// Closed-form curvature quadrilinear R(X, Y, Z, W) at `x`.
pub fn curvature_algebraic(
    params: &ModelParams,
    x: &BasePoint,
    xx: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
) -> Result<f64> {
    let g = metric(params, x)?;
    let j = complex_structure(params);
    Ok(quadrilinear(&g, &j, params.c, xx, y, z, w))
}

/// The curvature endomorphism R(X, Y)Z in the standard convention, i.e. the
/// vector with g(R(X,Y)Z, W) = −R(X,Y,Z,W) for the quadrilinear above:
///
/// ```text
/// R(X,Y)Z = (c/4)·[⟨X,Z⟩Y − ⟨Y,Z⟩X − ⟨X,JZ⟩JY + ⟨Y,JZ⟩JX − 2⟨X,JY⟩JZ]
/// ```
///
/// In particular R(v, Jv/‖v‖²)v = c·Jv, the vertical part of the Hamiltonian
/// field.
pub fn curvature_endomorphism(
    params: &ModelParams,
    x: &BasePoint,
    xx: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<DVector<f64>> {
    let g = metric(params, x)?;
    let j = complex_structure(params);
    let (jx, jy, jz) = (&j * xx, &j * y, &j * z);
    let out = (params.c / 4.0)
        * (y * g.inner(xx, z) - xx * g.inner(y, z) - &jy * g.inner(xx, &jz)
            + &jx * g.inner(y, &jz)
            - &jz * (2.0 * g.inner(xx, &jy)));
    Ok(out)
}

/// Curvature quadrilinear assembled from finite differences of the
/// Christoffel symbols (independent of [`curvature_algebraic`]):
/// Rˡ_{kij} = ∂ᵢΓˡⱼₖ − ∂ⱼΓˡᵢₖ + ΓˡᵢₘΓᵐⱼₖ − ΓˡⱼₘΓᵐᵢₖ, lowered with the metric,
/// with the sign convention matching the quadrilinear formula.
pub fn curvature_numeric(
    params: &ModelParams,
    x: &BasePoint,
    xx: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
) -> Result<f64> {
    let d = params.real_dim();
    let h = params.fd_step;
    check_fd_margin(x, h)?;
    let mut dgam: Vec<Vec<DMatrix<f64>>> = Vec::with_capacity(d);
    for i in 0..d {
        let gp = christoffel(params, &x.shifted(i, h)?)?;
        let gm = christoffel(params, &x.shifted(i, -h)?)?;
        let diff = gp
            .symbols()
            .iter()
            .zip(gm.symbols())
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect();
        dgam.push(diff);
    }
    let gam = christoffel(params, x)?;
    let g = metric(params, x)?;

    // u_l = Σ_{i,j,k} X_i Y_j Z_k Rˡ_{kij}; the quadrilinear is −⟨u, W⟩_g.
    let mut u = DVector::zeros(d);
    for l in 0..d {
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut r = dgam[i][l][(j, k)] - dgam[j][l][(i, k)];
                    for m in 0..d {
                        r += gam.symbols()[l][(i, m)] * gam.symbols()[m][(j, k)]
                            - gam.symbols()[l][(j, m)] * gam.symbols()[m][(i, k)];
                    }
                    acc += xx[i] * y[j] * z[k] * r;
                }
            }
        }
        u[l] = acc;
    }
    Ok(-g.inner(&u, w))
}

/// Which path a curvature evaluation takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureMode {
    /// Closed-form quadrilinear (base-point independent in orthonormal data).
    Algebraic,
    /// Finite differences of Christoffel symbols.
    Numeric,
}

/// A curvature evaluator carrying its mode and parameters; both modes agree
/// within `tol_fd` (tested), which is the oracle for the constant-curvature
/// model.
#[derive(Debug, Clone)]
pub struct CurvatureEval {
    pub mode: CurvatureMode,
    pub params: ModelParams,
}

impl CurvatureEval {
    pub fn eval(
        &self,
        x: &BasePoint,
        xx: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
        w: &DVector<f64>,
    ) -> Result<f64> {
        match self.mode {
            CurvatureMode::Algebraic => curvature_algebraic(&self.params, x, xx, y, z, w),
            CurvatureMode::Numeric => curvature_numeric(&self.params, x, xx, y, z, w),
        }
    }
}

fn check_dim(params: &ModelParams, x: &BasePoint) -> Result<()> {
    if x.dim() != params.real_dim() {
        return Err(GeomError::DimensionMismatch { expected: params.real_dim(), got: x.dim() });
    }
    Ok(())
}

fn check_fd_margin(x: &BasePoint, h: f64) -> Result<()> {
    if x.radius() + h >= FD_RADIUS_LIMIT {
        return Err(GeomError::FdDomain { radius: x.radius(), limit: FD_RADIUS_LIMIT });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sample_point(rng: &mut ChaCha8Rng, d: usize) -> BasePoint {
        let coords = DVector::from_fn(d, |_, _| rng.random_range(-0.25..0.25));
        BasePoint::new(coords).unwrap()
    }

    fn sample_vector(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
        DVector::from_fn(d, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal))
    }

    #[test]
    fn base_point_rejects_exterior_and_nonfinite() {
        assert!(BasePoint::new(DVector::from_vec(vec![0.8, 0.7])).is_err());
        assert!(BasePoint::new(DVector::from_vec(vec![f64::NAN, 0.0])).is_err());
        assert!(BasePoint::new(DVector::from_vec(vec![0.3, -0.4])).is_ok());
    }

    #[test]
    fn metric_at_origin_is_four_over_c_identity() {
        let p = ModelParams::new(1, 1.0).unwrap();
        let g = metric(&p, &BasePoint::origin(2)).unwrap();
        assert_relative_eq!(g.matrix(), &(DMatrix::identity(2, 2) * 4.0), epsilon = 1e-14);

        let p = ModelParams::new(2, 2.0).unwrap();
        let g = metric(&p, &BasePoint::origin(4)).unwrap();
        assert_relative_eq!(g.matrix(), &(DMatrix::identity(4, 4) * 2.0), epsilon = 1e-14);
    }

    #[test]
    fn metric_n1_collapses_to_conformal_factor() {
        // For n = 1 the formula reduces to 4 / (c·(1 − |z|²)²) · I₂.
        let p = ModelParams::new(1, 1.0).unwrap();
        let x = BasePoint::new(DVector::from_vec(vec![0.5, 0.0])).unwrap();
        let g = metric(&p, &x).unwrap();
        let expect = DMatrix::identity(2, 2) * (64.0 / 9.0);
        assert_relative_eq!(g.matrix(), &expect, epsilon = 1e-12);
    }

    #[test]
    fn metric_is_symmetric_positive_definite_and_j_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, c) in &[(1usize, 1.0), (2, 1.7), (3, 0.5)] {
            let p = ModelParams::new(n, c).unwrap();
            let j = complex_structure(&p);
            for _ in 0..20 {
                let x = sample_point(&mut rng, 2 * n);
                let g = metric(&p, &x).unwrap();
                let sym_defect = (g.matrix() - g.matrix().transpose()).amax();
                assert!(sym_defect < 1e-14, "symmetry defect {sym_defect}");
                let eig = g.matrix().clone().symmetric_eigen().eigenvalues;
                assert!(eig.iter().all(|&l| l > 0.0), "non-SPD metric: {eig:?}");
                // g(JX, JY) = g(X, Y) for random X, Y.
                let (u, w) = (sample_vector(&mut rng, 2 * n), sample_vector(&mut rng, 2 * n));
                assert_relative_eq!(
                    g.inner(&(&j * &u), &(&j * &w)),
                    g.inner(&u, &w),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn complex_structure_squares_to_minus_identity() {
        let p = ModelParams::new(3, 1.0).unwrap();
        let j = complex_structure(&p);
        assert_eq!(&j * &j, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn metric_derivative_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for &(n, c) in &[(1usize, 1.0), (2, 3.0)] {
            let p = ModelParams::new(n, c).unwrap();
            for _ in 0..5 {
                let x = sample_point(&mut rng, 2 * n);
                let analytic = metric_derivative(&p, &x).unwrap();
                let fd = metric_fd_derivative(&p, &x).unwrap();
                for (a, f) in analytic.iter().zip(&fd) {
                    assert!((a - f).amax() < 1e-8, "dG mismatch {:e}", (a - f).amax());
                }
            }
        }
    }

    #[test]
    fn christoffel_vanishes_at_origin() {
        let p = ModelParams::new(2, 1.3).unwrap();
        let gam = christoffel(&p, &BasePoint::origin(4)).unwrap();
        for s in gam.symbols() {
            assert!(s.amax() < 1e-14, "Γ(0) should vanish, got {:e}", s.amax());
        }
    }

    #[test]
    fn christoffel_is_torsion_free_and_matches_fd_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &(n, c) in &[(1usize, 0.5), (2, 1.7)] {
            let p = ModelParams::new(n, c).unwrap();
            for _ in 0..5 {
                let x = sample_point(&mut rng, 2 * n);
                let gam = christoffel(&p, &x).unwrap();
                let oracle = christoffel_fd(&p, &x).unwrap();
                for (s, o) in gam.symbols().iter().zip(oracle.symbols()) {
                    assert!((s - &s.transpose()).amax() < 1e-12, "torsion");
                    assert!((s - o).amax() < 1e-7, "FD oracle mismatch {:e}", (s - o).amax());
                }
            }
        }
    }

    #[test]
    fn christoffel_is_metric_compatible() {
        // ∂_k g_ij = Γˡ_ki g_lj + Γˡ_kj g_il, with the FD metric derivative
        // on the left so the check is a genuine cross-validation.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let p = ModelParams::new(2, 1.7).unwrap();
        let d = 4;
        for _ in 0..5 {
            let x = sample_point(&mut rng, d);
            let g = metric(&p, &x).unwrap();
            let gam = christoffel(&p, &x).unwrap();
            let dg = metric_fd_derivative(&p, &x).unwrap();
            for k in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        let mut rhs = 0.0;
                        for l in 0..d {
                            rhs += gam.symbols()[l][(k, i)] * g.matrix()[(l, j)]
                                + gam.symbols()[l][(k, j)] * g.matrix()[(i, l)];
                        }
                        assert!(
                            (dg[k][(i, j)] - rhs).abs() < 1e-7,
                            "compatibility defect at ({k},{i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kahler_condition_nabla_j_vanishes() {
        // With constant J, (∇_u J)w = Γ(u, Jw) − J·Γ(u, w); evaluated with
        // the FD-oracle Christoffels so the check does not reuse the
        // analytic derivative path.
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let p = ModelParams::new(2, 1.0).unwrap();
        let j = complex_structure(&p);
        for _ in 0..5 {
            let x = sample_point(&mut rng, 4);
            let gam = christoffel_fd(&p, &x).unwrap();
            let u = sample_vector(&mut rng, 4);
            let w = sample_vector(&mut rng, 4);
            let defect = gam.contract(&u, &(&j * &w)) - &j * gam.contract(&u, &w);
            assert!(defect.amax() < 1e-7, "∇J defect {:e}", defect.amax());
        }
    }

    #[test]
    fn curvature_numeric_matches_algebraic() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for &(n, c) in &[(1usize, 1.0), (2, 1.7), (3, 0.5)] {
            let p = ModelParams::new(n, c).unwrap();
            let d = 2 * n;
            for _ in 0..4 {
                let x = sample_point(&mut rng, d);
                let vs: Vec<_> = (0..4).map(|_| sample_vector(&mut rng, d)).collect();
                let num = curvature_numeric(&p, &x, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap();
                let alg = curvature_algebraic(&p, &x, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap();
                let rel = (num - alg).abs() / (1.0 + alg.abs());
                assert!(rel < p.tol_fd, "curvature oracle mismatch {rel:e} at n={n}, c={c}");
            }
        }
    }

    #[test]
    fn holomorphic_sectional_curvature_is_minus_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &(n, c) in &[(1usize, 1.0), (2, 3.0)] {
            let p = ModelParams::new(n, c).unwrap();
            let d = 2 * n;
            let j = complex_structure(&p);
            // At the origin along a coordinate direction, numerically:
            let origin = BasePoint::origin(d);
            let g0 = metric(&p, &origin).unwrap();
            let mut e1 = DVector::zeros(d);
            e1[0] = 1.0 / g0.norm_sq(&DVector::from_fn(d, |i, _| delta(i, 0))).sqrt();
            let je1 = &j * &e1;
            let num = curvature_numeric(&p, &origin, &e1, &je1, &e1, &je1).unwrap();
            assert!((num + c).abs() < 1e-5 * (1.0 + c), "numeric HSC {num} vs {}", -c);

            // At random points via the closed form, for random g-unit X:
            let x = sample_point(&mut rng, d);
            let g = metric(&p, &x).unwrap();
            let mut v = sample_vector(&mut rng, d);
            v /= g.norm_sq(&v).sqrt();
            let jv = &j * &v;
            let alg = curvature_algebraic(&p, &x, &v, &jv, &v, &jv).unwrap();
            assert_relative_eq!(alg, -c, max_relative = 1e-12);
        }
    }

    #[test]
    fn orthogonal_real_plane_has_curvature_minus_c_over_four() {
        // For g-orthonormal X, Y with Y ⊥ span{X, JX}: R(X,Y,X,Y) = −c/4.
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let p = ModelParams::new(2, 1.7).unwrap();
        let x = sample_point(&mut rng, 4);
        let g = metric(&p, &x).unwrap();
        let j = complex_structure(&p);
        let mut ex = sample_vector(&mut rng, 4);
        ex /= g.norm_sq(&ex).sqrt();
        let jx = &j * &ex;
        let mut ey = sample_vector(&mut rng, 4);
        ey -= &ex * g.inner(&ey, &ex);
        ey -= &jx * g.inner(&ey, &jx);
        ey /= g.norm_sq(&ey).sqrt();
        let val = curvature_algebraic(&p, &x, &ex, &ey, &ex, &ey).unwrap();
        assert_relative_eq!(val, -p.c / 4.0, max_relative = 1e-10);
    }

    #[test]
    fn curvature_symmetries_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let p = ModelParams::new(2, 1.0).unwrap();
        let x = sample_point(&mut rng, 4);
        let vs: Vec<_> = (0..4).map(|_| sample_vector(&mut rng, 4)).collect();
        let r = |a: &DVector<f64>, b: &DVector<f64>, c_: &DVector<f64>, d_: &DVector<f64>| {
            curvature_algebraic(&p, &x, a, b, c_, d_).unwrap()
        };
        let base = r(&vs[0], &vs[1], &vs[2], &vs[3]);
        assert_relative_eq!(r(&vs[1], &vs[0], &vs[2], &vs[3]), -base, max_relative = 1e-11);
        assert_relative_eq!(r(&vs[2], &vs[3], &vs[0], &vs[1]), base, max_relative = 1e-11);
        // Pair symmetry also holds for the FD-assembled tensor.
        let num_base = curvature_numeric(&p, &x, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap();
        let num_swap = curvature_numeric(&p, &x, &vs[2], &vs[3], &vs[0], &vs[1]).unwrap();
        assert!((num_base - num_swap).abs() / (1.0 + num_base.abs()) < 1e-5);
    }

    #[test]
    fn endomorphism_is_the_raised_quadrilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let p = ModelParams::new(2, 2.5).unwrap();
        let x = sample_point(&mut rng, 4);
        let g = metric(&p, &x).unwrap();
        let vs: Vec<_> = (0..4).map(|_| sample_vector(&mut rng, 4)).collect();
        let endo = curvature_endomorphism(&p, &x, &vs[0], &vs[1], &vs[2]).unwrap();
        let quad = curvature_algebraic(&p, &x, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap();
        assert_relative_eq!(g.inner(&endo, &vs[3]), -quad, max_relative = 1e-11);
    }

    #[test]
    fn magnetic_curvature_identity() {
        // R(v, Jv/‖v‖²)v = c·Jv — the closed form of the Hamiltonian field's
        // vertical part.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for &(n, c) in &[(1usize, 1.0), (3, 0.5)] {
            let p = ModelParams::new(n, c).unwrap();
            let d = 2 * n;
            let x = sample_point(&mut rng, d);
            let g = metric(&p, &x).unwrap();
            let j = complex_structure(&p);
            let v = sample_vector(&mut rng, d);
            let jv = &j * &v;
            let vv = g.norm_sq(&v);
            let endo = curvature_endomorphism(&p, &x, &v, &(&jv / vv), &v).unwrap();
            let defect = (&endo - &jv * c).amax();
            assert!(defect < 1e-12 * (1.0 + c), "R(v,Jv/‖v‖²)v ≠ cJv, defect {defect:e}");
        }
    }

    #[test]
    fn curvature_eval_dispatches_both_modes() {
        let p = ModelParams::new(1, 1.0).unwrap();
        let x = BasePoint::new(DVector::from_vec(vec![0.1, 0.2])).unwrap();
        let e = DVector::from_vec(vec![1.0, 0.0]);
        let je = DVector::from_vec(vec![0.0, 1.0]);
        let alg = CurvatureEval { mode: CurvatureMode::Algebraic, params: p };
        let num = CurvatureEval { mode: CurvatureMode::Numeric, params: p };
        let a = alg.eval(&x, &e, &je, &e, &je).unwrap();
        let b = num.eval(&x, &e, &je, &e, &je).unwrap();
        assert!((a - b).abs() / (1.0 + a.abs()) < p.tol_fd);
    }
}
