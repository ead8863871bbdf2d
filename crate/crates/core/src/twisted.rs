//! The twist primitive β, its exterior derivative dβ in closed form, and the
//! total 2-form ω = ω₀ + dβ.
//!
//! The primitive is the normalized angular 1-form
//!
//! ```text
//!   β(ξ) = ⟨Jv, Kξ⟩ / ‖v‖²,
//! ```
//!
//! defined away from the zero section. Its exterior derivative splits into a
//! horizontal magnetic term and a purely vertical term, with no mixed block:
//!
//! ```text
//!   dβ(ξ, η) = Ω(π_*ξ, π_*η) + dβ_vert(Kξ, Kη),
//!   Ω(u, w)  = −R(v, Jv/‖v‖², u, w),
//!   dβ_vert(u, w) = (2/‖v‖²)·⟨Ju, w⟩
//!       − (2/‖v‖⁴)·[⟨v, u⟩⟨Jv, w⟩ − ⟨v, w⟩⟨Jv, u⟩].
//! ```
//!
//! In an adapted frame (f_0 = v/‖v‖, f_1 = Jf_0, f_{2i+1} = Jf_{2i}) the
//! magnetic term is block diagonal with Ω(f_0, f_1) = c and
//! Ω(f_{2i}, f_{2i+1}) = c/2 for i ≥ 1, while the vertical term vanishes on
//! the (f_0, f_1) sector and contributes 2/‖v‖² on each higher sector.
//!
//! Consequence, verified here numerically and exploited by the checks: the
//! sector Pfaffians of ω = ω₀ + dβ are −1 (sector 0) and c/‖v‖² − 1 (higher
//! sectors), so det ω = (1 − c/‖v‖²)^{2n−2} in the frame basis — ω is
//! symplectic away from ‖v‖² = c, but degenerates on that level for n ≥ 2.
//! For n = 1 there are no higher sectors and ω is symplectic everywhere.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::forms::{self, FormBasis, TwoFormMatrix};
use crate::model::{self, quadrilinear};
use crate::params::ModelParams;
use crate::sasaki::{AdaptedFrame, PhaseGeometry, PhasePoint, TangentTT};

/// β(ξ) = ⟨Jv, Kξ⟩ / ‖v‖². Errors on the zero section.
pub fn beta(geom: &PhaseGeometry, xi: &TangentTT) -> Result<f64> {
    let vv = geom.v_norm_sq();
    if vv <= 0.0 {
        return Err(GeomError::ZeroVelocity);
    }
    let k = geom.connection_map(xi);
    Ok(geom.inner(&geom.jv(), &k) / vv)
}

/// Coordinate components of β at phase coordinates q = (x | v), shaped for
/// the finite-difference exterior-derivative oracle:
/// β_{x_k} = (Jv)ᵀ·G·Γ(e_k, v) / ‖v‖², β_{v_k} = (G·Jv)_k / ‖v‖².
pub fn beta_components(params: &ModelParams, q: &DVector<f64>) -> Result<DVector<f64>> {
    let point = PhasePoint::from_coords(q)?;
    let d = point.dim();
    if d != params.real_dim() {
        return Err(GeomError::DimensionMismatch { expected: params.real_dim(), got: d });
    }
    let g = model::metric(params, point.x())?;
    let gamma = model::christoffel(params, point.x())?;
    let j = model::complex_structure(params);
    let v = point.v();
    let vv = g.norm_sq(v);
    if vv <= 0.0 {
        return Err(GeomError::ZeroVelocity);
    }
    let jv = &j * v;
    let gjv = g.matrix() * &jv;
    let mut out = DVector::zeros(2 * d);
    for k in 0..d {
        let mut ek = DVector::zeros(d);
        ek[k] = 1.0;
        out[k] = gjv.dot(&gamma.contract(&ek, v)) / vv;
        out[d + k] = gjv[k] / vv;
    }
    Ok(out)
}

/// The magnetic 2-form on the base at (x, v): Ω(u, w) = −R(v, Jv/‖v‖², u, w).
pub fn omega_magnetic(geom: &PhaseGeometry, u: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
    let vv = geom.v_norm_sq();
    if vv <= 0.0 {
        return Err(GeomError::ZeroVelocity);
    }
    let v = geom.point().v();
    let y = geom.jv() / vv;
    Ok(-quadrilinear(
        geom.metric(),
        geom.complex_structure(),
        geom.params().c,
        v,
        &y,
        u,
        w,
    ))
}

/// The vertical block of dβ:
/// (2/‖v‖²)·⟨Ju, w⟩ − (2/‖v‖⁴)·(⟨v,u⟩⟨Jv,w⟩ − ⟨v,w⟩⟨Jv,u⟩).
pub fn dbeta_vertical(geom: &PhaseGeometry, u: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
    let vv = geom.v_norm_sq();
    if vv <= 0.0 {
        return Err(GeomError::ZeroVelocity);
    }
    let v = geom.point().v();
    let jv = geom.jv();
    let ju = geom.complex_structure() * u;
    let radial = geom.inner(v, u) * geom.inner(&jv, w) - geom.inner(v, w) * geom.inner(&jv, u);
    Ok(2.0 / vv * geom.inner(&ju, w) - 2.0 / (vv * vv) * radial)
}

/// Full pairing dβ(ξ, η) = Ω(π_*ξ, π_*η) + dβ_vert(Kξ, Kη), frame-free.
pub fn dbeta_pair(geom: &PhaseGeometry, xi: &TangentTT, eta: &TangentTT) -> Result<f64> {
    let a = geom.to_sasaki(xi);
    let b = geom.to_sasaki(eta);
    Ok(omega_magnetic(geom, a.first(), b.first())?
        + dbeta_vertical(geom, a.second(), b.second())?)
}

/// dβ evaluated on an adapted frame, kept in blocks so each structural claim
/// can be checked against its own block before anything is assembled.
#[derive(Debug, Clone)]
pub struct MagneticDecomposition {
    omega_h: DMatrix<f64>,
    dbeta_v: DMatrix<f64>,
    assembled: TwoFormMatrix,
    frame: AdaptedFrame,
}

impl MagneticDecomposition {
    /// Horizontal block: Ω(f_a, f_b), 2n×2n.
    pub fn horizontal(&self) -> &DMatrix<f64> {
        &self.omega_h
    }

    /// Vertical block: dβ_vert(f_a, f_b), 2n×2n.
    pub fn vertical(&self) -> &DMatrix<f64> {
        &self.dbeta_v
    }

    /// The 4n×4n frame-basis matrix [[Ω, 0], [0, dβ_vert]] of dβ.
    pub fn assembled(&self) -> &TwoFormMatrix {
        &self.assembled
    }

    /// The frame the blocks are expressed in.
    pub fn frame(&self) -> &AdaptedFrame {
        &self.frame
    }
}

/// Evaluate dβ on the given adapted frame, block by block.
pub fn assemble_dbeta(geom: &PhaseGeometry, frame: &AdaptedFrame) -> Result<MagneticDecomposition> {
    let d = frame.dim();
    if d != geom.point().dim() {
        return Err(GeomError::DimensionMismatch { expected: geom.point().dim(), got: d });
    }
    let mut omega_h = DMatrix::zeros(d, d);
    let mut dbeta_v = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in a + 1..d {
            let fa = &frame.vectors()[a];
            let fb = &frame.vectors()[b];
            let o = omega_magnetic(geom, fa, fb)?;
            let w = dbeta_vertical(geom, fa, fb)?;
            omega_h[(a, b)] = o;
            omega_h[(b, a)] = -o;
            dbeta_v[(a, b)] = w;
            dbeta_v[(b, a)] = -w;
        }
    }
    let mut full = DMatrix::zeros(2 * d, 2 * d);
    for a in 0..d {
        for b in 0..d {
            full[(a, b)] = omega_h[(a, b)];
            full[(d + a, d + b)] = dbeta_v[(a, b)];
        }
    }
    let assembled = TwoFormMatrix::new(FormBasis::SasakiFrame, full)?;
    Ok(MagneticDecomposition { omega_h, dbeta_v, assembled, frame: frame.clone() })
}

/// The closed-form frame-basis matrix dβ is expected to equal: sector 0
/// carries Ω = c and no vertical term; each higher sector carries Ω = c/2
/// and a vertical 2/‖v‖².
pub fn dbeta_frame_reference(n: usize, c: f64, v_norm_sq: f64) -> DMatrix<f64> {
    let d = 2 * n;
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    m[(0, 1)] = c;
    m[(1, 0)] = -c;
    for i in 1..n {
        m[(2 * i, 2 * i + 1)] = c / 2.0;
        m[(2 * i + 1, 2 * i)] = -c / 2.0;
        m[(d + 2 * i, d + 2 * i + 1)] = 2.0 / v_norm_sq;
        m[(d + 2 * i + 1, d + 2 * i)] = -2.0 / v_norm_sq;
    }
    m
}

/// Coordinate-basis matrix of dβ. With S = [[I, 0], [C, I]] the map from
/// (δx, δv) to (δx, Kξ) and O, V the blocks of the closed form on coordinate
/// vectors of T_xM, the matrix is Sᵀ·[[O, 0], [0, V]]·S.
pub fn dbeta_coordinate_matrix(geom: &PhaseGeometry) -> Result<TwoFormMatrix> {
    let d = geom.point().dim();
    let mut o = DMatrix::zeros(d, d);
    let mut w = DMatrix::zeros(d, d);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = DVector::zeros(d);
        e[i] = 1.0;
        basis.push(e);
    }
    for i in 0..d {
        for jx in i + 1..d {
            let oo = omega_magnetic(geom, &basis[i], &basis[jx])?;
            let ww = dbeta_vertical(geom, &basis[i], &basis[jx])?;
            o[(i, jx)] = oo;
            o[(jx, i)] = -oo;
            w[(i, jx)] = ww;
            w[(jx, i)] = -ww;
        }
    }
    let c = geom.christoffel().contract_right(geom.point().v());
    let mut s = DMatrix::identity(2 * d, 2 * d);
    for i in 0..d {
        for jx in 0..d {
            s[(d + i, jx)] = c[(i, jx)];
        }
    }
    let mut blocks = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for jx in 0..d {
            blocks[(i, jx)] = o[(i, jx)];
            blocks[(d + i, d + jx)] = w[(i, jx)];
        }
    }
    let m = s.transpose() * blocks * s;
    TwoFormMatrix::new(FormBasis::Coordinate, m)
}

/// Independent finite-difference oracle: dβ from central differences of the
/// components of β alone. Entirely bypasses the closed-form split.
pub fn dbeta_fd_oracle(params: &ModelParams, q: &DVector<f64>, step: f64) -> Result<TwoFormMatrix> {
    forms::fd_exterior_derivative_1form(q, step, |qq| beta_components(params, qq))
}

/// ω = ω₀ + dβ in the coordinate basis.
pub fn omega_total_coordinate(geom: &PhaseGeometry) -> Result<TwoFormMatrix> {
    geom.omega0_coordinate_matrix()?.add(&dbeta_coordinate_matrix(geom)?)
}

/// ω = ω₀ + dβ in the frame basis (H(f_a) | V(f_a)).
pub fn omega_total_frame(geom: &PhaseGeometry, frame: &AdaptedFrame) -> Result<TwoFormMatrix> {
    geom.omega0_frame_matrix(frame)?.add(assemble_dbeta(geom, frame)?.assembled())
}

/// Frame components of the kernel direction ω acquires on the critical level
/// ‖v‖² = c when n ≥ 2: H(f_2) + (c/2)·V(f_3). Returns `None` for n = 1,
/// where ω is nondegenerate on every level.
pub fn critical_kernel_witness(geom: &PhaseGeometry) -> Option<DVector<f64>> {
    let n = geom.params().n;
    if n < 2 {
        return None;
    }
    let d = 2 * n;
    let mut comps = DVector::zeros(2 * d);
    comps[2] = 1.0;
    comps[d + 3] = geom.params().c / 2.0;
    Some(comps)
}
