//! The primitive α = λ + β of the twisted form, the Liouville (conformal
//! symplectic) vector field X with i_Xω = α, and the contact-type verdict
//! for the disconnected boundary {‖v‖² = a} ∪ {‖v‖² = b}.
//!
//! The geometric facts this module measures:
//!
//! * α(X_H) = c − ‖v‖², so the Hamiltonian field is never ω-orthogonal to X
//!   away from the critical level;
//! * dH(X) = ‖v‖² − c: the Liouville field crosses energy levels outward
//!   above the critical energy, inward below it, and is tangent exactly on
//!   ‖v‖² = c;
//! * consequently the domain {a ≤ ‖v‖² ≤ b} has X pointing outward through
//!   both walls precisely when 0 < a < c < b — the two boundary components
//!   are then of contact type.
//!
//! Verdicts for degenerate or failing (a, b) are data, not exceptions: they
//! are scientifically informative outputs of the scan.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, solve_field_from_covector};
use crate::error::{GeomError, Result};
use crate::forms;
use crate::params::ModelParams;
use crate::sample::Sampler;
use crate::sasaki::{self, PhaseGeometry, TangentTT};
use crate::twisted;

/// α(ξ) = λ(ξ) + β(ξ). Errors on the zero section (β is undefined there).
pub fn alpha(geom: &PhaseGeometry, xi: &TangentTT) -> Result<f64> {
    Ok(geom.liouville(xi) + twisted::beta(geom, xi)?)
}

/// Coordinate components of α at phase coordinates q = (x | v), shaped for
/// the finite-difference oracle dα = ω.
pub fn alpha_components(params: &ModelParams, q: &DVector<f64>) -> Result<DVector<f64>> {
    let lam = sasaki::liouville_components(params, q)?;
    let bet = twisted::beta_components(params, q)?;
    Ok(lam + bet)
}

/// The Liouville field X defined by i_Xω = α, constructed by the same
/// guarded frame solve as the Hamiltonian field. Off the critical level it
/// equals (Jv/‖v‖², (1 − c/‖v‖²)·v) in Sasaki components; on the critical
/// level the solve correctly refuses for n ≥ 2, where ω is singular.
pub fn liouville_field(geom: &PhaseGeometry) -> Result<TangentTT> {
    let frame = geom.adapted_frame()?;
    let omega = twisted::omega_total_frame(geom, &frame)?;
    let d = frame.dim();
    let vv = geom.v_norm_sq();
    let v = geom.point().v();
    let jv = geom.jv();
    let mut rhs = DVector::zeros(2 * d);
    for (a, f) in frame.vectors().iter().enumerate() {
        // α(H(f_a)) = λ(H(f_a)) = −⟨v, f_a⟩; α(V(f_a)) = β(V(f_a)) = ⟨Jv, f_a⟩/‖v‖².
        rhs[a] = -geom.inner(v, f);
        rhs[d + a] = geom.inner(&jv, f) / vv;
    }
    solve_field_from_covector(geom, &frame, &omega, &rhs)
}

/// Which boundary component of {a ≤ ‖v‖² ≤ b} a level plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wall {
    /// ‖v‖² = a — outward means H decreasing, dH(X) < 0.
    Inner,
    /// ‖v‖² = b — outward means H increasing, dH(X) > 0.
    Outer,
}

/// Result of one transversality measurement on a level.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Transversality {
    /// dH(X) at the sampled point.
    pub dh_x: f64,
    /// Whether X points outward through this wall of the domain.
    pub outward: bool,
    /// |dH(X)| below tol_exact: the sign is not numerically trustworthy.
    pub ambiguous: bool,
}

/// Measure dH(X) at the given on-level point and classify it against the
/// wall's outward direction. `tol_exact` guards the sign call.
pub fn transversality_check(
    geom: &PhaseGeometry,
    wall: Wall,
    tol_exact: f64,
) -> Result<Transversality> {
    let x = liouville_field(geom)?;
    let dh_x = dynamics::dh_of(geom, &x);
    let ambiguous = dh_x.abs() < tol_exact;
    let outward = !ambiguous
        && match wall {
            Wall::Inner => dh_x < 0.0,
            Wall::Outer => dh_x > 0.0,
        };
    Ok(Transversality { dh_x, outward, ambiguous })
}

/// Aggregate verdict for a boundary pair (a, b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactVerdict {
    /// Both walls transverse with X outward: disconnected contact boundary.
    ContactDisconnected,
    /// A wall sits on (or numerically at) the critical level, or ω could
    /// not be inverted there: no sign can be trusted.
    Degenerate,
    /// X is transverse but points the wrong way through at least one wall.
    Fails,
}

/// Per-level aggregate over the sampled points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelResult {
    pub wall: Wall,
    pub energy: f64,
    pub samples: usize,
    /// Points where the ω-solve itself refused (singular form).
    pub solve_failures: usize,
    pub dh_x_mean: Option<f64>,
    pub dh_x_min: Option<f64>,
    pub dh_x_max: Option<f64>,
    /// True when every successful sample had X pointing outward.
    pub outward_all: bool,
    /// True when any sample was ambiguous or failed to solve.
    pub ambiguous_any: bool,
}

/// Full report for one (a, b) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContactReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: usize,
    pub seed: u64,
    pub samples_per_level: usize,
    pub level_results: Vec<LevelResult>,
    /// max over samples of the scaled FD defect ‖dα − ω‖ (Liouville property).
    pub max_dalpha_dev: Option<f64>,
    /// max over samples of |dH(X) − (‖v‖² − c)|.
    pub max_dhx_identity_dev: Option<f64>,
    pub verdict: ContactVerdict,
    pub explanation: String,
}

struct LevelScan {
    result: LevelResult,
    max_dalpha_dev: Option<f64>,
    max_dhx_identity_dev: Option<f64>,
}

fn scan_level(
    params: &ModelParams,
    sampler: &mut Sampler,
    wall: Wall,
    energy: f64,
    samples: usize,
) -> Result<LevelScan> {
    let mut dh_values: Vec<f64> = Vec::with_capacity(samples);
    let mut solve_failures = 0usize;
    let mut outward_all = true;
    let mut ambiguous_any = false;
    let mut max_dalpha_dev: Option<f64> = None;
    let mut max_dhx_identity_dev: Option<f64> = None;
    for _ in 0..samples {
        let geom = sampler.geometry_with_energy(energy)?;
        match transversality_check(&geom, wall, params.tol_exact) {
            Ok(t) => {
                dh_values.push(t.dh_x);
                outward_all &= t.outward;
                ambiguous_any |= t.ambiguous;
                let dev = (t.dh_x - (energy - params.c)).abs();
                max_dhx_identity_dev =
                    Some(max_dhx_identity_dev.map_or(dev, |m: f64| m.max(dev)));
            }
            Err(GeomError::SingularForm { .. }) => {
                solve_failures += 1;
                ambiguous_any = true;
                outward_all = false;
            }
            Err(e) => return Err(e),
        }
        // Liouville property dα = ω, finite differences against the
        // assembled coordinate matrix, scaled by the size of ω.
        let q = geom.point().coords();
        let fd = forms::fd_exterior_derivative_1form(&q, params.fd_step, |qq| {
            alpha_components(params, qq)
        })?;
        let omega = twisted::omega_total_coordinate(&geom)?;
        let dev = (fd.matrix() - omega.matrix()).amax() / omega.matrix().amax().max(1.0);
        max_dalpha_dev = Some(max_dalpha_dev.map_or(dev, |m: f64| m.max(dev)));
    }
    let (mean, min, max) = if dh_values.is_empty() {
        (None, None, None)
    } else {
        let sum: f64 = dh_values.iter().sum();
        (
            Some(sum / dh_values.len() as f64),
            Some(dh_values.iter().cloned().fold(f64::INFINITY, f64::min)),
            Some(dh_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        )
    };
    Ok(LevelScan {
        result: LevelResult {
            wall,
            energy,
            samples,
            solve_failures,
            dh_x_mean: mean,
            dh_x_min: min,
            dh_x_max: max,
            outward_all,
            ambiguous_any,
        },
        max_dalpha_dev,
        max_dhx_identity_dev,
    })
}

/// Sample both walls of {a ≤ ‖v‖² ≤ b}, measure transversality and the
/// Liouville property at every point, and aggregate the verdict:
/// `contact_disconnected` iff X points outward through both walls at every
/// sample, `degenerate` when a wall is numerically on the critical level
/// (or ω refuses to invert there, as it does for n ≥ 2), `fails` when X is
/// transverse but inward somewhere. Requires a, b > 0; bad orderings of
/// (a, b) are verdicts, not errors.
pub fn contact_report(
    params: &ModelParams,
    a: f64,
    b: f64,
    samples_per_level: usize,
    seed: u64,
) -> Result<ContactReport> {
    params.validate()?;
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
        return Err(GeomError::InvalidParams(format!(
            "boundary levels must be finite and positive, got a={a}, b={b}"
        )));
    }
    if samples_per_level == 0 {
        return Err(GeomError::InvalidParams("samples_per_level must be at least 1".into()));
    }
    let base = |verdict, explanation: String, levels: Vec<LevelResult>| ContactReport {
        a,
        b,
        c: params.c,
        n: params.n,
        seed,
        samples_per_level,
        level_results: levels,
        max_dalpha_dev: None,
        max_dhx_identity_dev: None,
        verdict,
        explanation,
    };
    if a >= b {
        return Ok(base(
            ContactVerdict::Degenerate,
            format!("domain {{a <= ||v||^2 <= b}} is empty or degenerate: a = {a} >= b = {b}"),
            Vec::new(),
        ));
    }
    let mut sampler = Sampler::new(*params, seed)?;
    let inner = scan_level(params, &mut sampler, Wall::Inner, a, samples_per_level)?;
    let outer = scan_level(params, &mut sampler, Wall::Outer, b, samples_per_level)?;

    let merge = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(p), Some(q)) => Some(p.max(q)),
        (p, q) => p.or(q),
    };
    let max_dalpha_dev = merge(inner.max_dalpha_dev, outer.max_dalpha_dev);
    let max_dhx_identity_dev = merge(inner.max_dhx_identity_dev, outer.max_dhx_identity_dev);

    let (verdict, explanation) = if inner.result.ambiguous_any || outer.result.ambiguous_any {
        let mut walls = Vec::new();
        if inner.result.ambiguous_any {
            walls.push(format!("inner (||v||^2 = {a})"));
        }
        if outer.result.ambiguous_any {
            walls.push(format!("outer (||v||^2 = {b})"));
        }
        (
            ContactVerdict::Degenerate,
            format!(
                "wall(s) {} sit numerically on the critical level ||v||^2 = {}: \
                 dH(X) vanishes there (or the form is singular), so no outward \
                 direction exists",
                walls.join(" and "),
                params.c
            ),
        )
    } else if inner.result.outward_all && outer.result.outward_all {
        (
            ContactVerdict::ContactDisconnected,
            format!(
                "X is outward through both walls at every sample: dH(X) < 0 on \
                 ||v||^2 = {a} and dH(X) > 0 on ||v||^2 = {b}, so the boundary \
                 has two contact-type components"
            ),
        )
    } else {
        let mut bad = Vec::new();
        if !inner.result.outward_all {
            bad.push(format!(
                "inner wall ||v||^2 = {a}: dH(X) = {a} - {c} >= 0 points inward",
                c = params.c
            ));
        }
        if !outer.result.outward_all {
            bad.push(format!(
                "outer wall ||v||^2 = {b}: dH(X) = {b} - {c} <= 0 points inward",
                c = params.c
            ));
        }
        (ContactVerdict::Fails, bad.join("; "))
    };

    let mut report = base(verdict, explanation, vec![inner.result, outer.result]);
    report.max_dalpha_dev = max_dalpha_dev;
    report.max_dhx_identity_dev = max_dhx_identity_dev;
    Ok(report)
}
