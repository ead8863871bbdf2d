//! Hamiltonian dynamics of the twisted form: the closed-form field, an
//! independent linear-solve construction, and a fixed-step RK4 integrator
//! for the associated flow on TM.
//!
//! For the kinetic Hamiltonian H = ½‖v‖² the field defined by i_Xω = dH has
//! the closed form X_H = (v, c·Jv) in horizontal/vertical components: the
//! flow projects to curves with acceleration ∇_ẋ ẋ = c·Jẋ — a magnetic
//! geodesic flow whose Lorentz force is the complex structure scaled by c.
//! The solve-based construction inverts the assembled frame matrix of ω
//! instead and is used as an oracle against the closed form; it refuses to
//! answer near the critical level ‖v‖² = c for n ≥ 2, where ω is singular.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::model::{self, BasePoint};
use crate::params::ModelParams;
use crate::sasaki::{PhaseGeometry, PhasePoint, TangentTT};
use crate::twisted;

/// Trajectories are truncated when the base point reaches this coordinate
/// radius: the metric blows up like (1 − |z|²)⁻² toward the ideal boundary
/// and fixed-step integration loses meaning there.
pub const TRUNCATION_RADIUS: f64 = 0.95;

/// Relative singular-value floor below which the assembled ω is treated as
/// numerically singular and the solve refuses to proceed.
pub const SINGULARITY_FLOOR: f64 = 1e-12;

/// H(x, v) = ½‖v‖²_g — the kinetic Hamiltonian.
pub fn hamiltonian(geom: &PhaseGeometry) -> f64 {
    0.5 * geom.v_norm_sq()
}

/// dH(ξ) = ⟨v, Kξ⟩ — the differential of the kinetic Hamiltonian.
pub fn dh_of(geom: &PhaseGeometry, xi: &TangentTT) -> f64 {
    geom.inner(geom.point().v(), &geom.connection_map(xi))
}

/// The closed-form Hamiltonian field X_H = (v, c·Jv) in Sasaki components.
pub fn xh_closed(geom: &PhaseGeometry) -> TangentTT {
    let v = geom.point().v().clone();
    let jv = geom.jv();
    TangentTT::sasaki(v, jv * geom.params().c)
}

/// Solve i_Xω = rhs for X in frame components: ωᵀ·X = rhs with a relative
/// singular-value guard and a post-solve residual check. Shared by the
/// Hamiltonian and Liouville field constructions.
pub fn solve_field_from_covector(
    geom: &PhaseGeometry,
    frame: &crate::sasaki::AdaptedFrame,
    omega: &crate::forms::TwoFormMatrix,
    rhs: &DVector<f64>,
) -> Result<TangentTT> {
    let mt = omega.matrix().transpose();
    let sv = mt.clone().svd(false, false).singular_values;
    let (mut smin, mut smax) = (f64::INFINITY, 0.0f64);
    for s in sv.iter() {
        smin = smin.min(*s);
        smax = smax.max(*s);
    }
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if ratio < SINGULARITY_FLOOR {
        return Err(GeomError::SingularForm { sigma_ratio: ratio });
    }
    let solution = mt
        .clone()
        .lu()
        .solve(rhs)
        .ok_or(GeomError::SingularForm { sigma_ratio: ratio })?;
    let residual = (&mt * &solution - rhs).norm();
    if residual > 1e-8 * (1.0 + rhs.norm()) {
        return Err(GeomError::SingularForm { sigma_ratio: ratio });
    }
    Ok(geom.from_frame_components(frame, &solution))
}

/// Independent construction of X_H: assemble ω in an adapted frame, build
/// the frame components of dH, and solve ωᵀ·X = dH generically. Returns
/// [`GeomError::SingularForm`] when ω is numerically degenerate (which is
/// exactly the critical level ‖v‖² = c for n ≥ 2) and checks the solve
/// residual before trusting the answer.
pub fn xh_solve(geom: &PhaseGeometry) -> Result<TangentTT> {
    let frame = geom.adapted_frame()?;
    let omega = twisted::omega_total_frame(geom, &frame)?;
    let d = frame.dim();
    let mut rhs = DVector::zeros(2 * d);
    for (a, f) in frame.vectors().iter().enumerate() {
        // dH(H(f_a)) = 0, dH(V(f_a)) = ⟨v, f_a⟩.
        rhs[d + a] = geom.inner(geom.point().v(), f);
    }
    solve_field_from_covector(geom, &frame, &omega, &rhs)
}

/// Which second-order system to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMode {
    /// v̇ = c·Jv − Γ(v, v): the Hamiltonian flow of ω.
    Magnetic,
    /// v̇ = −Γ(v, v): the Lorentz force switched off, for contrast.
    Geodesic,
}

/// One integration sample: time, base coordinates, velocity, ‖v‖²_g.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub energy: f64,
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryStatus {
    /// Ran to the requested final time.
    Completed,
    /// Stopped early: the base point reached [`TRUNCATION_RADIUS`].
    Truncated { t: f64 },
    /// Stopped early: the state stopped being finite.
    NonFinite { t: f64 },
}

/// A fixed-step integration result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dt: f64,
    pub mode: FlowMode,
    pub status: TrajectoryStatus,
    /// max_i |‖v(t_i)‖² − ‖v(0)‖²| — the conservation defect.
    pub energy_drift: f64,
}

impl Trajectory {
    pub fn final_sample(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

fn flow_rhs(
    params: &ModelParams,
    j: &DMatrix<f64>,
    mode: FlowMode,
    q: &DVector<f64>,
) -> Result<DVector<f64>> {
    let d = params.real_dim();
    let x = BasePoint::new(q.rows(0, d).into_owned())?;
    let v = q.rows(d, d).into_owned();
    let gamma = model::christoffel(params, &x)?;
    let mut dot = DVector::zeros(2 * d);
    let mut acc = -gamma.contract(&v, &v);
    if mode == FlowMode::Magnetic {
        acc += j * &v * params.c;
    }
    for i in 0..d {
        dot[i] = v[i];
        dot[d + i] = acc[i];
    }
    Ok(dot)
}

/// Integrate the chosen flow with classical RK4 at fixed step `dt` up to
/// time `t_total` (rounded to a whole number of steps). The trajectory stops
/// early — with an explicit status, never an error — if the base point
/// reaches [`TRUNCATION_RADIUS`] or the state degenerates.
pub fn integrate_flow(
    params: &ModelParams,
    start: &PhasePoint,
    mode: FlowMode,
    dt: f64,
    t_total: f64,
) -> Result<Trajectory> {
    params.validate()?;
    if start.dim() != params.real_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: params.real_dim(),
            got: start.dim(),
        });
    }
    if !(dt > 0.0 && dt.is_finite() && t_total > 0.0 && t_total.is_finite()) {
        return Err(GeomError::InvalidParams(format!(
            "need finite dt > 0 and t_total > 0, got dt={dt}, t_total={t_total}"
        )));
    }
    if start.v().norm() == 0.0 {
        return Err(GeomError::ZeroVelocity);
    }
    if start.x().radius() >= TRUNCATION_RADIUS {
        return Err(GeomError::InvalidInput(format!(
            "start point radius {} is already beyond the truncation radius {}",
            start.x().radius(),
            TRUNCATION_RADIUS
        )));
    }
    let n_steps = ((t_total / dt).round() as usize).max(1);
    let d = params.real_dim();
    let j = model::complex_structure(params);

    let sample_at = |t: f64, q: &DVector<f64>| -> Result<TrajectorySample> {
        let x = BasePoint::new(q.rows(0, d).into_owned())?;
        let v = q.rows(d, d).into_owned();
        let g = model::metric(params, &x)?;
        Ok(TrajectorySample {
            t,
            x: x.coords().iter().copied().collect(),
            v: v.iter().copied().collect(),
            energy: g.norm_sq(&v),
        })
    };

    let mut q = start.coords();
    let mut t = 0.0;
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(sample_at(t, &q)?);
    let mut status = TrajectoryStatus::Completed;

    for step in 0..n_steps {
        let radius = q.rows(0, d).norm();
        if radius >= TRUNCATION_RADIUS {
            status = TrajectoryStatus::Truncated { t };
            break;
        }
        if !q.iter().all(|a| a.is_finite()) {
            status = TrajectoryStatus::NonFinite { t };
            break;
        }
        let step_result = (|| -> Result<DVector<f64>> {
            let k1 = flow_rhs(params, &j, mode, &q)?;
            let k2 = flow_rhs(params, &j, mode, &(&q + &k1 * (dt / 2.0)))?;
            let k3 = flow_rhs(params, &j, mode, &(&q + &k2 * (dt / 2.0)))?;
            let k4 = flow_rhs(params, &j, mode, &(&q + &k3 * dt))?;
            Ok(&q + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0))
        })();
        match step_result {
            Ok(next) if next.iter().all(|a| a.is_finite()) => {
                q = next;
                t = (step + 1) as f64 * dt;
            }
            Ok(_) => {
                status = TrajectoryStatus::NonFinite { t };
                break;
            }
            Err(_) => {
                // A substep left the chart: report truncation at the last
                // good time rather than failing the whole run.
                status = TrajectoryStatus::Truncated { t };
                break;
            }
        }
        match sample_at(t, &q) {
            Ok(s) => samples.push(s),
            Err(_) => {
                status = TrajectoryStatus::Truncated { t };
                break;
            }
        }
    }

    let e0 = samples[0].energy;
    let energy_drift =
        samples.iter().map(|s| (s.energy - e0).abs()).fold(0.0f64, f64::max);
    Ok(Trajectory { samples, dt, mode, status, energy_drift })
}
