//! Seeded, reproducible sampling of base points, tangent vectors, and phase
//! points. Every randomized check in the crate draws from this module so
//! that a (params, seed) pair pins the entire sample stream.

use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{GeomError, Result};
use crate::model::{self, BasePoint};
use crate::params::ModelParams;
use crate::sasaki::{PhaseGeometry, PhasePoint};

/// Default coordinate-radius cap for sampled base points: far enough from
/// the ideal boundary that metric conditioning and finite-difference
/// displacement are never a concern.
pub const DEFAULT_RADIUS: f64 = 0.8;

/// Sampled energies ‖v‖²_g are log-uniform in [c/ENERGY_SPAN, c·ENERGY_SPAN].
pub const ENERGY_SPAN: f64 = 10.0;

/// A deterministic sample stream for one parameter set.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    params: ModelParams,
}

impl Sampler {
    pub fn new(params: ModelParams, seed: u64) -> Result<Self> {
        params.validate()?;
        Ok(Self { rng: ChaCha8Rng::seed_from_u64(seed), params })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Uniform draw from the coordinate ball of radius [`DEFAULT_RADIUS`].
    pub fn base_point(&mut self) -> BasePoint {
        self.base_point_within(DEFAULT_RADIUS)
    }

    /// Uniform draw from the coordinate ball of radius `rmax` < 1: an
    /// isotropic direction scaled by rmax·u^(1/dim).
    pub fn base_point_within(&mut self, rmax: f64) -> BasePoint {
        let d = self.params.real_dim();
        let mut dir = DVector::zeros(d);
        loop {
            for i in 0..d {
                dir[i] = self.rng.sample::<f64, _>(StandardNormal);
            }
            if dir.norm() > 1e-12 {
                break;
            }
        }
        let u: f64 = self.rng.random_range(0.0..1.0);
        let radius = rmax * u.powf(1.0 / d as f64);
        let coords = &dir * (radius / dir.norm());
        BasePoint::new(coords).expect("sampled point is inside the unit ball by construction")
    }

    /// Standard-normal tangent coordinates (no metric normalization).
    pub fn tangent(&mut self) -> DVector<f64> {
        let d = self.params.real_dim();
        DVector::from_fn(d, |_, _| self.rng.sample::<f64, _>(StandardNormal))
    }

    /// A tangent vector of exact g-norm 1 at `x`.
    pub fn unit_tangent(&mut self, x: &BasePoint) -> Result<DVector<f64>> {
        let g = model::metric(&self.params, x)?;
        loop {
            let v = self.tangent();
            let norm_sq = g.norm_sq(&v);
            if norm_sq > 1e-12 {
                return Ok(v / norm_sq.sqrt());
            }
        }
    }

    /// A phase point with energy ‖v‖²_g drawn log-uniformly from
    /// [c/span, c·span] around the critical level c.
    pub fn phase_point(&mut self) -> Result<PhasePoint> {
        let c = self.params.c;
        let lo = (c / ENERGY_SPAN).ln();
        let hi = (c * ENERGY_SPAN).ln();
        let energy = self.rng.random_range(lo..hi).exp();
        self.phase_point_with_energy(energy)
    }

    /// A phase point whose energy ‖v‖²_g equals `energy` exactly (the
    /// velocity is rescaled after the draw, so level membership carries no
    /// sampling error).
    pub fn phase_point_with_energy(&mut self, energy: f64) -> Result<PhasePoint> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(GeomError::InvalidParams(format!(
                "level energy must be finite and positive, got {energy}"
            )));
        }
        let x = self.base_point();
        let v = self.unit_tangent(&x)? * energy.sqrt();
        PhasePoint::new(x, v)
    }

    /// Convenience: a full cached geometry at a random phase point.
    pub fn geometry(&mut self) -> Result<PhaseGeometry> {
        let point = self.phase_point()?;
        PhaseGeometry::new(self.params, point)
    }

    /// Convenience: a cached geometry on the exact level `energy`.
    pub fn geometry_with_energy(&mut self, energy: f64) -> Result<PhaseGeometry> {
        let point = self.phase_point_with_energy(energy)?;
        PhaseGeometry::new(self.params, point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_reproduces_the_stream() {
        let params = ModelParams::new(2, 1.0).unwrap();
        let mut a = Sampler::new(params, 7).unwrap();
        let mut b = Sampler::new(params, 7).unwrap();
        for _ in 0..10 {
            let pa = a.phase_point().unwrap();
            let pb = b.phase_point().unwrap();
            assert_eq!(pa.x().coords(), pb.x().coords());
            assert_eq!(pa.v(), pb.v());
        }
        let mut c = Sampler::new(params, 8).unwrap();
        let pa = a.phase_point().unwrap();
        let pc = c.phase_point().unwrap();
        assert_ne!(pa.x().coords(), pc.x().coords());
    }

    #[test]
    fn base_points_respect_the_radius_cap() {
        let params = ModelParams::new(3, 0.5).unwrap();
        let mut s = Sampler::new(params, 9).unwrap();
        for _ in 0..200 {
            assert!(s.base_point().radius() <= DEFAULT_RADIUS + 1e-12);
        }
        for _ in 0..50 {
            assert!(s.base_point_within(0.3).radius() <= 0.3 + 1e-12);
        }
    }

    #[test]
    fn level_sampling_is_exact_and_energies_span_the_range() {
        let params = ModelParams::new(2, 3.0).unwrap();
        let mut s = Sampler::new(params, 10).unwrap();
        for _ in 0..50 {
            let geom = s.geometry_with_energy(1.25).unwrap();
            assert!((geom.v_norm_sq() - 1.25).abs() < 1e-12);
        }
        let mut below = 0;
        let mut above = 0;
        for _ in 0..200 {
            let geom = s.geometry().unwrap();
            let e = geom.v_norm_sq();
            assert!(e >= params.c / ENERGY_SPAN * 0.999 && e <= params.c * ENERGY_SPAN * 1.001);
            if e < params.c {
                below += 1;
            } else {
                above += 1;
            }
        }
        // Log-uniform around c: both sides of the critical level get mass.
        assert!(below > 40 && above > 40, "below={below}, above={above}");
    }

    #[test]
    fn unit_tangents_have_unit_g_norm() {
        let params = ModelParams::new(1, 2.0).unwrap();
        let mut s = Sampler::new(params, 11).unwrap();
        for _ in 0..20 {
            let x = s.base_point();
            let v = s.unit_tangent(&x).unwrap();
            let g = model::metric(&params, &x).unwrap();
            assert!((g.norm_sq(&v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_level_energy() {
        let params = ModelParams::new(1, 1.0).unwrap();
        let mut s = Sampler::new(params, 12).unwrap();
        assert!(s.phase_point_with_energy(0.0).is_err());
        assert!(s.phase_point_with_energy(f64::NAN).is_err());
    }
}
