//! Phase-space geometry: points of TM, tangent vectors to TM in coordinate
//! and horizontal/vertical (Sasaki) representation, the connection map, the
//! Sasaki metric, the canonical symplectic form ω₀ = dλ, and adapted
//! J-invariant orthonormal frames.
//!
//! A tangent vector ξ to TM at (x, v) has two useful descriptions:
//!
//! * **coordinate**: (δx, δv), the raw derivative of a curve t ↦ (x(t), v(t));
//! * **Sasaki**: (π_*ξ, Kξ), where K is the connection map
//!   Kξ = δv + Γ_x(δx, v).
//!
//! The pair (π_*ξ, Kξ) splits T(TM) into horizontal and vertical subspaces,
//! both canonically isomorphic to T_xM, and all geometric formulas (metric,
//! ω₀, the twist term) are cleanest there. [`TangentTT`] carries an explicit
//! representation tag so the two never get mixed silently.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::forms::{FormBasis, TwoFormMatrix};
use crate::model::{self, BasePoint, Christoffel, MetricTensor};
use crate::params::ModelParams;

/// Candidate directions with post-projection g-norm below this threshold are
/// skipped during frame construction (they are numerically inside the span of
/// the frame built so far).
pub const FRAME_TOL: f64 = 1e-8;

/// A point (x, v) of the phase space TM.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    x: BasePoint,
    v: DVector<f64>,
}

impl PhasePoint {
    pub fn new(x: BasePoint, v: DVector<f64>) -> Result<Self> {
        if v.len() != x.dim() {
            return Err(GeomError::DimensionMismatch { expected: x.dim(), got: v.len() });
        }
        if !v.iter().all(|t| t.is_finite()) {
            return Err(GeomError::InvalidInput("velocity has non-finite entries".into()));
        }
        Ok(Self { x, v })
    }

    pub fn x(&self) -> &BasePoint {
        &self.x
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    /// Real dimension 2n of the base manifold.
    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// Dimension 4n of the phase space.
    pub fn phase_dim(&self) -> usize {
        2 * self.x.dim()
    }

    /// The 4n phase coordinates, base first: (x | v).
    pub fn coords(&self) -> DVector<f64> {
        let d = self.dim();
        let mut q = DVector::zeros(2 * d);
        for i in 0..d {
            q[i] = self.x.coords()[i];
            q[d + i] = self.v[i];
        }
        q
    }

    /// Inverse of [`PhasePoint::coords`].
    pub fn from_coords(q: &DVector<f64>) -> Result<Self> {
        if q.len() % 2 != 0 {
            return Err(GeomError::InvalidInput(format!(
                "phase coordinate vector has odd length {}",
                q.len()
            )));
        }
        let d = q.len() / 2;
        let x = BasePoint::new(q.rows(0, d).into_owned())?;
        Self::new(x, q.rows(d, d).into_owned())
    }
}

/// Representation tag for tangent vectors to TM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rep {
    /// (δx, δv) — derivative of a coordinate curve.
    Coordinate,
    /// (π_*ξ, Kξ) — horizontal and vertical parts via the connection map.
    Sasaki,
}

/// A tangent vector to TM at a fixed phase point, tagged with its
/// representation. `first` is δx (equivalently π_*ξ — identical in the two
/// representations); `second` is δv or Kξ depending on the tag.
#[derive(Debug, Clone)]
pub struct TangentTT {
    rep: Rep,
    first: DVector<f64>,
    second: DVector<f64>,
}

impl TangentTT {
    pub fn coordinate(dx: DVector<f64>, dv: DVector<f64>) -> Self {
        assert_eq!(dx.len(), dv.len(), "tangent halves must have equal length");
        Self { rep: Rep::Coordinate, first: dx, second: dv }
    }

    pub fn sasaki(h: DVector<f64>, k: DVector<f64>) -> Self {
        assert_eq!(h.len(), k.len(), "tangent halves must have equal length");
        Self { rep: Rep::Sasaki, first: h, second: k }
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn first(&self) -> &DVector<f64> {
        &self.first
    }

    pub fn second(&self) -> &DVector<f64> {
        &self.second
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Both halves stacked into one 4n vector (first | second).
    pub fn stacked(&self) -> DVector<f64> {
        let d = self.first.len();
        let mut q = DVector::zeros(2 * d);
        for i in 0..d {
            q[i] = self.first[i];
            q[d + i] = self.second[i];
        }
        q
    }
}

/// A g-orthonormal frame (f_0, …, f_{2n−1}) of T_xM with f_{2i+1} = J f_{2i}
/// and f_0 = v/‖v‖, so f_1 = Jv/‖v‖.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    vectors: Vec<DVector<f64>>,
}

impl AdaptedFrame {
    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Matrix whose columns are the frame vectors.
    pub fn matrix(&self) -> DMatrix<f64> {
        let d = self.vectors.len();
        DMatrix::from_fn(self.vectors[0].len(), d, |i, a| self.vectors[a][i])
    }
}

/// All per-point geometric data needed to evaluate forms and fields at one
/// phase point: metric, Christoffel symbols, complex structure, ‖v‖². Cached
/// once so repeated pairings at the same point cost no re-derivation.
#[derive(Debug, Clone)]
pub struct PhaseGeometry {
    params: ModelParams,
    point: PhasePoint,
    metric: MetricTensor,
    gamma: Christoffel,
    j: DMatrix<f64>,
    v_norm_sq: f64,
}

impl PhaseGeometry {
    pub fn new(params: ModelParams, point: PhasePoint) -> Result<Self> {
        params.validate()?;
        if point.dim() != params.real_dim() {
            return Err(GeomError::DimensionMismatch {
                expected: params.real_dim(),
                got: point.dim(),
            });
        }
        let metric = model::metric(&params, point.x())?;
        let gamma = model::christoffel(&params, point.x())?;
        let j = model::complex_structure(&params);
        let v_norm_sq = metric.norm_sq(point.v());
        Ok(Self { params, point, metric, gamma, j, v_norm_sq })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn point(&self) -> &PhasePoint {
        &self.point
    }

    pub fn metric(&self) -> &MetricTensor {
        &self.metric
    }

    pub fn christoffel(&self) -> &Christoffel {
        &self.gamma
    }

    pub fn complex_structure(&self) -> &DMatrix<f64> {
        &self.j
    }

    /// ‖v‖²_g at this point — twice the kinetic energy.
    pub fn v_norm_sq(&self) -> f64 {
        self.v_norm_sq
    }

    pub fn inner(&self, u: &DVector<f64>, w: &DVector<f64>) -> f64 {
        self.metric.inner(u, w)
    }

    pub fn jv(&self) -> DVector<f64> {
        &self.j * self.point.v()
    }

    /// Convert to the Sasaki representation: Kξ = δv + Γ(δx, v).
    pub fn to_sasaki(&self, xi: &TangentTT) -> TangentTT {
        match xi.rep {
            Rep::Sasaki => xi.clone(),
            Rep::Coordinate => {
                let k = &xi.second + self.gamma.contract(&xi.first, self.point.v());
                TangentTT::sasaki(xi.first.clone(), k)
            }
        }
    }

    /// Convert to the coordinate representation: δv = Kξ − Γ(δx, v).
    pub fn to_coordinate(&self, xi: &TangentTT) -> TangentTT {
        match xi.rep {
            Rep::Coordinate => xi.clone(),
            Rep::Sasaki => {
                let dv = &xi.second - self.gamma.contract(&xi.first, self.point.v());
                TangentTT::coordinate(xi.first.clone(), dv)
            }
        }
    }

    /// The connection map Kξ ∈ T_xM.
    pub fn connection_map(&self, xi: &TangentTT) -> DVector<f64> {
        match xi.rep {
            Rep::Sasaki => xi.second.clone(),
            Rep::Coordinate => &xi.second + self.gamma.contract(&xi.first, self.point.v()),
        }
    }

    /// π_*ξ ∈ T_xM (identical in both representations).
    pub fn pushforward(&self, xi: &TangentTT) -> DVector<f64> {
        xi.first.clone()
    }

    /// Horizontal lift of u ∈ T_xM: π_* = u, K = 0.
    pub fn horizontal_lift(&self, u: &DVector<f64>) -> TangentTT {
        TangentTT::sasaki(u.clone(), DVector::zeros(u.len()))
    }

    /// Vertical lift of w ∈ T_xM: π_* = 0, K = w.
    pub fn vertical(&self, w: &DVector<f64>) -> TangentTT {
        TangentTT::sasaki(DVector::zeros(w.len()), w.clone())
    }

    /// Sasaki metric: ⟨ξ, η⟩_S = ⟨π_*ξ, π_*η⟩ + ⟨Kξ, Kη⟩.
    pub fn sasaki_inner(&self, xi: &TangentTT, eta: &TangentTT) -> f64 {
        let a = self.to_sasaki(xi);
        let b = self.to_sasaki(eta);
        self.inner(&a.first, &b.first) + self.inner(&a.second, &b.second)
    }

    /// The canonical symplectic form pulled back from T*M by the metric:
    /// ω₀(ξ, η) = ⟨π_*ξ, Kη⟩ − ⟨Kξ, π_*η⟩.
    pub fn omega0(&self, xi: &TangentTT, eta: &TangentTT) -> f64 {
        let a = self.to_sasaki(xi);
        let b = self.to_sasaki(eta);
        self.inner(&a.first, &b.second) - self.inner(&a.second, &b.first)
    }

    /// The Liouville 1-form (metric pullback of p·dq): λ(ξ) = −⟨v, π_*ξ⟩,
    /// signed so that dλ = ω₀ with the pairing convention above.
    pub fn liouville(&self, xi: &TangentTT) -> f64 {
        -self.inner(self.point.v(), &xi.first)
    }

    /// The canonical almost complex structure of the Sasaki metric,
    /// W(h, k) = (−k, h) in horizontal/vertical components. Satisfies
    /// W² = −id, is a g_S-isometry, and ω₀ = g_S(W·, ·).
    pub fn almost_complex_w(&self, xi: &TangentTT) -> TangentTT {
        let s = self.to_sasaki(xi);
        TangentTT::sasaki(-&s.second, s.first.clone())
    }

    /// Coordinate-basis matrix of ω₀ at this point, for the basis
    /// (δx_0, …, δx_{2n−1}, δv_0, …, δv_{2n−1}):
    ///
    /// ```text
    ///   [ GC − (GC)ᵀ   G ]           C[k][i] = Γ^k_{ij} v^j
    ///   [    −G        0 ]
    /// ```
    pub fn omega0_coordinate_matrix(&self) -> Result<TwoFormMatrix> {
        let d = self.point.dim();
        let g = self.metric.matrix();
        let c = self.gamma.contract_right(self.point.v());
        let gc = g * &c;
        let xx = &gc - gc.transpose();
        let mut m = DMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            for k in 0..d {
                m[(i, k)] = xx[(i, k)];
                m[(i, d + k)] = g[(i, k)];
                m[(d + i, k)] = -g[(i, k)];
            }
        }
        TwoFormMatrix::new(FormBasis::Coordinate, m)
    }

    /// Frame-basis matrix of ω₀ for the basis (H(f_a) | V(f_a)):
    /// `[[0, F], [−F, 0]]` with `F[a][b]` = ⟨f_a, f_b⟩ computed honestly (≈ I for
    /// an orthonormal frame, but nothing here assumes it).
    pub fn omega0_frame_matrix(&self, frame: &AdaptedFrame) -> Result<TwoFormMatrix> {
        let d = frame.dim();
        if d != self.point.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.point.dim(), got: d });
        }
        let b = frame.matrix();
        let f = b.transpose() * self.metric.matrix() * &b;
        let mut m = DMatrix::zeros(2 * d, 2 * d);
        for a in 0..d {
            for bb in 0..d {
                m[(a, d + bb)] = f[(a, bb)];
                m[(d + a, bb)] = -f[(a, bb)];
            }
        }
        TwoFormMatrix::new(FormBasis::SasakiFrame, m)
    }

    /// g-orthonormal J-adapted frame with f_0 = v/‖v‖ and f_{2i+1} = J f_{2i}.
    ///
    /// Construction: start from v/‖v‖ and its J-image; extend by projecting
    /// coordinate directions (in index order) g-orthogonally against the
    /// frame so far — two Gram–Schmidt passes for numerical hygiene — and
    /// adjoin each survivor together with its exact J-image. J-invariance of
    /// the metric makes the J-image orthonormal automatically.
    pub fn adapted_frame(&self) -> Result<AdaptedFrame> {
        let d = self.point.dim();
        if self.v_norm_sq <= 0.0 {
            return Err(GeomError::ZeroVelocity);
        }
        let mut frame: Vec<DVector<f64>> = Vec::with_capacity(d);
        let f0 = self.point.v() / self.v_norm_sq.sqrt();
        frame.push(f0.clone());
        frame.push(&self.j * &f0);
        let mut idx = 0;
        while frame.len() < d && idx < d {
            let mut cand = DVector::zeros(d);
            cand[idx] = 1.0;
            idx += 1;
            for _ in 0..2 {
                for f in &frame {
                    let c = self.inner(&cand, f);
                    cand -= f * c;
                }
            }
            let norm = self.inner(&cand, &cand).sqrt();
            if norm < FRAME_TOL {
                continue;
            }
            let f = cand / norm;
            frame.push(f.clone());
            frame.push(&self.j * &f);
        }
        if frame.len() != d {
            return Err(GeomError::FrameConstruction(format!(
                "adapted frame stalled at {} of {} vectors",
                frame.len(),
                d
            )));
        }
        Ok(AdaptedFrame { vectors: frame })
    }

    /// Components of ξ in the frame basis (H(f_a) | V(f_a)): exact
    /// g-projections of the horizontal and vertical parts.
    pub fn frame_components(&self, frame: &AdaptedFrame, xi: &TangentTT) -> DVector<f64> {
        let s = self.to_sasaki(xi);
        let d = frame.dim();
        let mut out = DVector::zeros(2 * d);
        for (a, f) in frame.vectors().iter().enumerate() {
            out[a] = self.inner(&s.first, f);
            out[d + a] = self.inner(&s.second, f);
        }
        out
    }

    /// Inverse of [`PhaseGeometry::frame_components`] for orthonormal frames.
    pub fn from_frame_components(&self, frame: &AdaptedFrame, comps: &DVector<f64>) -> TangentTT {
        let d = frame.dim();
        let mut h = DVector::zeros(frame.vectors()[0].len());
        let mut k = h.clone();
        for (a, f) in frame.vectors().iter().enumerate() {
            h += f * comps[a];
            k += f * comps[d + a];
        }
        TangentTT::sasaki(h, k)
    }

    /// Basis-change matrix P from frame components to coordinate components:
    /// columns are the coordinate representations of H(f_a) (= (f_a, −Γ(f_a, v)))
    /// followed by V(f_a) (= (0, f_a)). For a 2-form W in coordinates,
    /// Pᵀ·W·P is the frame matrix.
    pub fn frame_to_coord(&self, frame: &AdaptedFrame) -> DMatrix<f64> {
        let d = frame.dim();
        let mut p = DMatrix::zeros(2 * d, 2 * d);
        for (a, f) in frame.vectors().iter().enumerate() {
            let gfv = self.gamma.contract(f, self.point.v());
            for i in 0..d {
                p[(i, a)] = f[i];
                p[(d + i, a)] = -gfv[i];
                p[(d + i, d + a)] = f[i];
            }
        }
        p
    }
}

/// Coordinate components of the Liouville 1-form at phase coordinates
/// q = (x | v): (−G(x)·v | 0). Shaped for the finite-difference exterior
/// derivative oracle, which re-evaluates the metric at displaced points.
pub fn liouville_components(params: &ModelParams, q: &DVector<f64>) -> Result<DVector<f64>> {
    let point = PhasePoint::from_coords(q)?;
    let d = point.dim();
    if d != params.real_dim() {
        return Err(GeomError::DimensionMismatch { expected: params.real_dim(), got: d });
    }
    let g = model::metric(params, point.x())?;
    let gv = g.matrix() * point.v();
    let mut out = DVector::zeros(2 * d);
    for i in 0..d {
        out[i] = -gv[i];
    }
    Ok(out)
}
