//! Property-based invariants: structural identities that must hold at any
//! admissible point and parameter set, not just at tuned samples.

use nalgebra::DVector;
use proptest::prelude::*;

use chn_twist::contact;
use chn_twist::dynamics;
use chn_twist::model;
use chn_twist::sasaki::{PhaseGeometry, PhasePoint, TangentTT};
use chn_twist::twisted;
use chn_twist::ModelParams;

/// Strategy: an admissible (n, c, base point, velocity) tuple. Base points
/// are drawn from a box and rescaled to stay inside radius 0.85; velocities
/// are nonzero with coordinates in a moderate box, so energies spread over
/// several orders of magnitude.
fn phase_setup() -> impl Strategy<Value = (ModelParams, PhasePoint)> {
    (1usize..=3, 0.3f64..4.0).prop_flat_map(|(n, c)| {
        let d = 2 * n;
        let coords = prop::collection::vec(-1.0f64..1.0, d);
        let vels = prop::collection::vec(-2.0f64..2.0, d);
        (Just(n), Just(c), coords, vels).prop_filter_map(
            "velocity nonzero",
            |(n, c, xs, vs)| {
                let d = xs.len();
                let x = DVector::from_vec(xs) * (0.85 / (d as f64).sqrt());
                let v = DVector::from_vec(vs);
                if v.norm() < 1e-3 {
                    return None;
                }
                let params = ModelParams::new(n, c).ok()?;
                let point = PhasePoint::new(model::BasePoint::new(x).ok()?, v).ok()?;
                Some((params, point))
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// The metric is symmetric positive definite and J-invariant wherever
    /// it is defined.
    #[test]
    fn metric_is_spd_and_j_invariant((params, point) in phase_setup()) {
        let g = model::metric(&params, point.x()).unwrap();
        let m = g.matrix();
        prop_assert!((m - m.transpose()).amax() < 1e-12);
        let eig = m.clone().symmetric_eigen().eigenvalues;
        prop_assert!(eig.min() > 0.0);
        let j = model::complex_structure(&params);
        prop_assert!((&(j.transpose() * m * &j) - m).amax() / m.amax() < 1e-12);
    }

    /// Coordinate ↔ Sasaki conversion is the identity both ways.
    #[test]
    fn representation_roundtrip((params, point) in phase_setup()) {
        let geom = PhaseGeometry::new(params, point).unwrap();
        let d = geom.point().dim();
        let xi = TangentTT::coordinate(
            DVector::from_fn(d, |i, _| (i as f64 + 1.0) * 0.3),
            DVector::from_fn(d, |i, _| 1.0 - 0.2 * i as f64),
        );
        let there = geom.to_sasaki(&xi);
        let back = geom.to_coordinate(&there);
        prop_assert!((back.first() - xi.first()).amax() < 1e-9);
        prop_assert!((back.second() - xi.second()).amax() < 1e-9);
    }

    /// The adapted frame is g-orthonormal and J-paired.
    #[test]
    fn adapted_frame_is_orthonormal((params, point) in phase_setup()) {
        let geom = PhaseGeometry::new(params, point).unwrap();
        let frame = geom.adapted_frame().unwrap();
        for a in 0..frame.dim() {
            for b in 0..frame.dim() {
                let want = if a == b { 1.0 } else { 0.0 };
                let got = geom.inner(&frame.vectors()[a], &frame.vectors()[b]);
                prop_assert!((got - want).abs() < 1e-9, "Gram defect at ({}, {}): {}", a, b, got - want);
            }
        }
    }

    /// β vanishes on horizontal lifts and is antisymmetrically paired by dβ.
    #[test]
    fn beta_kills_horizontal_lifts((params, point) in phase_setup()) {
        let geom = PhaseGeometry::new(params, point).unwrap();
        let d = geom.point().dim();
        let u = DVector::from_fn(d, |i, _| 0.7 - 0.3 * i as f64);
        let lift = geom.horizontal_lift(&u);
        let val = twisted::beta(&geom, &lift).unwrap();
        prop_assert!(val.abs() < 1e-9 * (1.0 + u.norm()), "β on a horizontal lift: {val}");
    }

    /// dβ is antisymmetric and annihilates the vertical lifts of v and Jv.
    #[test]
    fn dbeta_antisymmetry_and_kernel((params, point) in phase_setup()) {
        let geom = PhaseGeometry::new(params, point).unwrap();
        let coord = twisted::dbeta_coordinate_matrix(&geom).unwrap();
        prop_assert!(coord.antisymmetry_defect() < 1e-9 * coord.matrix().amax().max(1.0));
        let d = geom.point().dim();
        let eta = TangentTT::coordinate(
            DVector::from_fn(d, |i, _| ((i * i) as f64).cos()),
            DVector::from_fn(d, |i, _| ((i + 2) as f64).sin()),
        )
        .stacked();
        let scale = coord.matrix().amax().max(1.0) * eta.norm();
        for dir in [geom.point().v().clone(), geom.jv()] {
            let lift = geom.to_coordinate(&geom.vertical(&dir)).stacked();
            prop_assert!(coord.pair(&lift, &eta).abs() < 1e-8 * scale * (1.0 + dir.norm()));
        }
    }

    /// α(X_H) = c − ‖v‖² everywhere, including at and across the critical
    /// level (no solve involved).
    #[test]
    fn alpha_on_hamiltonian_field((params, point) in phase_setup()) {
        let geom = PhaseGeometry::new(params, point).unwrap();
        let xh = dynamics::xh_closed(&geom);
        let got = contact::alpha(&geom, &xh).unwrap();
        let want = params.c - geom.v_norm_sq();
        prop_assert!((got - want).abs() < 1e-8 * (1.0 + want.abs()), "α(X_H) = {got}, want {want}");
    }

    /// The closed-form field satisfies Hamilton's equation against the
    /// assembled ω at any admissible point.
    #[test]
    fn hamilton_equation_everywhere((params, point) in phase_setup()) {
        let geom = PhaseGeometry::new(params, point).unwrap();
        let omega = twisted::omega_total_coordinate(&geom).unwrap();
        let xh = geom.to_coordinate(&dynamics::xh_closed(&geom)).stacked();
        let d = geom.point().dim();
        let gv = geom.metric().matrix() * geom.point().v();
        let cmat = geom.christoffel().contract_right(geom.point().v());
        let xpart = cmat.transpose() * &gv;
        let mut dh = DVector::zeros(2 * d);
        for i in 0..d {
            dh[i] = xpart[i];
            dh[d + i] = gv[i];
        }
        let residual = (omega.covector(&xh) - &dh).amax();
        prop_assert!(residual < 1e-8 * (1.0 + dh.amax()), "Hamilton residual {residual}");
    }
}
