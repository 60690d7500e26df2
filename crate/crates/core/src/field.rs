//! Sampled radial fields and weighted quadrature.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::interp::MonotoneCubic;
use crate::math;

/// How the field continues past the truncation radius.
///
/// `DecayAtInfinity` models a whole-space profile: integrals append the
/// closed-form tail of the harmonic continuation u_N (r_N / r)^{d−2} beyond
/// r_max whenever that tail integral converges. `DirichletAtRmax` means the
/// field genuinely lives on the ball and integrals stop at r_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Boundary {
    DecayAtInfinity,
    DirichletAtRmax,
}

/// Real-valued samples u(r_i) on a shared radial grid.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
    pub boundary: Boundary,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain("value array length must match the grid"));
        }
        let field = Self { grid, values, boundary };
        field.ensure_finite()?;
        Ok(field)
    }

    pub fn from_fn(grid: Arc<RadialGrid>, boundary: Boundary, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes.iter().map(|&r| f(r)).collect();
        Self { grid, values, boundary }
    }

    pub fn zero(grid: Arc<RadialGrid>, boundary: Boundary) -> Self {
        let values = alloc::vec![0.0; grid.len()];
        Self { grid, values, boundary }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> Arc<RadialGrid> {
        Arc::clone(&self.grid)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// NaN or infinity in the samples is a contract violation, not a value.
    pub fn ensure_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("field values"))
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(math::abs(*v)))
    }

    /// Amplitude of the harmonic continuation A = u_N r_N^{d−2}, zero for
    /// Dirichlet fields.
    fn tail_amplitude(&self) -> f64 {
        match self.boundary {
            Boundary::DirichletAtRmax => 0.0,
            Boundary::DecayAtInfinity => {
                let n = self.values.len();
                self.values[n - 1] * math::powf(self.grid.nodes[n - 1], self.grid.d as f64 - 2.0)
            }
        }
    }

    /// ∫ |u|^power r^{−γ·[singular]} dx by midpoint quadrature with the exact
    /// cell weights, plus the decay-model tail when it converges.
    pub fn quadrature(&self, power: f64, singular: bool) -> Result<f64> {
        if !(power >= 1.0) {
            return Err(Error::Domain("quadrature power must be >= 1"));
        }
        self.ensure_finite()?;
        let weights = if singular {
            &self.grid.cell_weights_singular
        } else {
            &self.grid.cell_weights_plain
        };
        let mut total = 0.0;
        for (w, v) in weights.iter().zip(&self.values) {
            total += w * math::powf(math::abs(*v), power);
        }
        total += self.quadrature_tail(power, singular);
        Ok(total)
    }

    /// Closed-form ∫_{r_max}^∞ |A r^{2−d}|^power r^{d−1−γ·[singular]} dr · ω,
    /// or 0 when the continuation is not integrable (or the field is
    /// Dirichlet).
    fn quadrature_tail(&self, power: f64, singular: bool) -> f64 {
        let amp = self.tail_amplitude();
        if amp == 0.0 {
            return 0.0;
        }
        let d = self.grid.d as f64;
        let gamma_eff = if singular { self.grid.gamma } else { 0.0 };
        let decay = power * (d - 2.0) - d + gamma_eff;
        if decay <= 0.0 {
            return 0.0;
        }
        self.grid.sphere_area() * math::powf(math::abs(amp), power)
            * math::powf(self.grid.r_max, -decay)
            / decay
    }

    /// L^q norm from plain radial quadrature; q = ∞ returns the sup norm.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if q.is_infinite() {
            return Ok(self.sup_norm());
        }
        if !(q >= 1.0) {
            return Err(Error::Domain("Lebesgue exponent must be >= 1"));
        }
        Ok(math::powf(self.quadrature(q, false)?, 1.0 / q))
    }

    /// L^q norm over the exterior region {r ≥ radius}, splitting the cell
    /// containing `radius` exactly.
    pub fn exterior_lq_norm(&self, radius: f64, q: f64) -> Result<f64> {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::Domain("exterior norm needs a finite exponent >= 1"));
        }
        if !(radius >= 0.0 && radius < self.grid.r_max) {
            return Err(Error::Domain("exterior radius must lie inside the grid"));
        }
        let g = &self.grid;
        let omega = g.sphere_area();
        let dpow = g.d as f64;
        let mut total = 0.0;
        for i in 0..g.len() {
            let (a, b) = (g.faces[i], g.faces[i + 1]);
            if b <= radius {
                continue;
            }
            let lo = a.max(radius);
            let w = omega * (math::powf(b, dpow) - math::powf(lo, dpow)) / dpow;
            total += w * math::powf(math::abs(self.values[i]), q);
        }
        // Tail of the decay continuation (always integrable at q >= q_c).
        let amp = self.tail_amplitude();
        if amp != 0.0 {
            let decay = q * (dpow - 2.0) - dpow;
            if decay > 0.0 {
                total += omega * math::powf(math::abs(amp), q) * math::powf(g.r_max, -decay) / decay;
            }
        }
        Ok(math::powf(total, 1.0 / q))
    }

    /// Weighted inner product Σ w_i u_i v_i (the discrete L² pairing).
    pub fn l2_inner(&self, other: &RadialField) -> f64 {
        let w = &self.grid.cell_weights_plain;
        let mut acc = 0.0;
        for i in 0..self.values.len() {
            acc += w[i] * self.values[i] * other.values[i];
        }
        acc
    }

    /// Rescaled field r ↦ λ^{(d−2)/2} u(λ r) resampled onto the same grid by
    /// monotone cubic interpolation. Data beyond r_max comes from the decay
    /// continuation (or zero for Dirichlet fields).
    pub fn scale(&self, lambda: f64) -> Result<RadialField> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain("scaling factor must be positive"));
        }
        self.ensure_finite()?;
        if lambda == 1.0 {
            return Ok(self.clone());
        }
        let g = &self.grid;
        let d = g.d as f64;
        let amp_factor = math::powf(lambda, (d - 2.0) / 2.0);

        // Ghost value at r = 0 from the zero-slope parabola through the
        // first two nodes (radial smoothness).
        let (r1, r2) = (g.nodes[0], g.nodes[1]);
        let (u1, u2) = (self.values[0], self.values[1]);
        let u0 = (u1 * r2 * r2 - u2 * r1 * r1) / (r2 * r2 - r1 * r1);
        let mut xs = Vec::with_capacity(g.len() + 1);
        let mut ys = Vec::with_capacity(g.len() + 1);
        xs.push(0.0);
        ys.push(u0);
        xs.extend_from_slice(&g.nodes);
        ys.extend_from_slice(&self.values);
        let interp = MonotoneCubic::new(xs, ys);

        let tail_amp = self.tail_amplitude();
        let values = g
            .nodes
            .iter()
            .map(|&r| {
                let src = lambda * r;
                let sample = if src <= g.r_max {
                    interp.eval(src)
                } else if tail_amp != 0.0 {
                    tail_amp * math::powf(src, 2.0 - d)
                } else {
                    0.0
                };
                amp_factor * sample
            })
            .collect();
        Ok(RadialField { grid: Arc::clone(&self.grid), values, boundary: self.boundary })
    }

    /// Pointwise map, preserving grid and boundary semantics.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> RadialField {
        let values = self.grid.nodes.iter().zip(&self.values).map(|(&r, &v)| f(r, v)).collect();
        RadialField { grid: Arc::clone(&self.grid), values, boundary: self.boundary }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ModelParams, Sign};
    use core::f64::consts::PI;

    fn p3g1() -> ModelParams {
        ModelParams::new(3, 1.0, Sign::Focusing).unwrap()
    }

    fn grid(n: usize, r_max: f64, s: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::graded(&p3g1(), n, r_max, s).unwrap())
    }

    #[test]
    fn zero_field_quadrature_is_zero() {
        let u = RadialField::zero(grid(64, 1.0, 1.0), Boundary::DirichletAtRmax);
        assert_eq!(u.quadrature(2.0, false).unwrap(), 0.0);
        assert_eq!(u.lq_norm(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn constant_field_recovers_ball_volume() {
        let u = RadialField::from_fn(grid(64, 1.0, 1.0), Boundary::DirichletAtRmax, |_| 1.0);
        let vol = u.quadrature(2.0, false).unwrap();
        assert!((vol - 4.0 * PI / 3.0).abs() < 1e-12 * (4.0 * PI / 3.0));
        // ||1||_{L^2} on the unit ball.
        let l2 = u.lq_norm(2.0).unwrap();
        assert!((l2 - (4.0 * PI / 3.0_f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn singular_quadrature_of_ground_state_profile() {
        // ∫ |√2/(1+r)|^4 r^{-1} dx = 8π/3, tail-corrected on r_max = 200.
        let u = RadialField::from_fn(grid(2048, 200.0, 2.0), Boundary::DecayAtInfinity, |r| {
            libm::sqrt(2.0) / (1.0 + r)
        });
        let val = u.quadrature(4.0, true).unwrap();
        let exact = 8.0 * PI / 3.0;
        assert!(
            (val - exact).abs() < 0.005 * exact,
            "weighted potential {val} vs {exact}"
        );
    }

    #[test]
    fn quadrature_monotone_and_scales_linearly() {
        // Seeded xorshift fields: pointwise |u| <= |v| implies ordered
        // quadratures, and quadrature of |c·u|^p is |c|^p times.
        let g = grid(128, 10.0, 2.0);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rand = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let a: Vec<f64> = (0..g.len()).map(|_| rand() - 0.5).collect();
            let b: Vec<f64> = a.iter().map(|v| v * (1.0 + rand())).collect();
            let u = RadialField::new(Arc::clone(&g), a, Boundary::DirichletAtRmax).unwrap();
            let v = RadialField::new(Arc::clone(&g), b, Boundary::DirichletAtRmax).unwrap();
            for (power, singular) in [(1.5, false), (2.0, true), (4.0, true)] {
                let qu = u.quadrature(power, singular).unwrap();
                let qv = v.quadrature(power, singular).unwrap();
                assert!(qu <= qv * (1.0 + 1e-12), "monotonicity {qu} vs {qv}");
                let qcu = u.map(|_, x| 3.0 * x).quadrature(power, singular).unwrap();
                assert!((qcu - libm::pow(3.0, power) * qu).abs() <= 1e-10 * qcu.max(1e-300));
            }
        }
    }

    #[test]
    fn quadrature_rejects_nan() {
        let g = grid(64, 1.0, 1.0);
        let mut vals = alloc::vec![0.0; g.len()];
        vals[10] = f64::NAN;
        let u = RadialField { grid: g, values: vals, boundary: Boundary::DirichletAtRmax };
        assert_eq!(u.quadrature(2.0, false), Err(Error::NonFinite("field values")));
    }

    #[test]
    fn unit_scale_is_identity_and_zero_scales_to_zero() {
        let g = grid(128, 30.0, 2.0);
        let u = RadialField::from_fn(Arc::clone(&g), Boundary::DecayAtInfinity, |r| {
            libm::exp(-r * r) + 0.3 / (1.0 + r)
        });
        let scaled = u.scale(1.0).unwrap();
        assert_eq!(scaled.values, u.values);

        let z = RadialField::zero(g, Boundary::DecayAtInfinity);
        assert!(z.scale(0.5).unwrap().values.iter().all(|v| *v == 0.0));
        assert!(z.scale(-1.0).is_err());
    }

    #[test]
    fn exterior_norm_matches_closed_form() {
        // ||W||_{L^6(r >= 10)} for W = √2/(1+r); oracle value from adaptive
        // quadrature of the closed form: 0.528814045.
        let u = RadialField::from_fn(grid(4096, 200.0, 2.0), Boundary::DecayAtInfinity, |r| {
            libm::sqrt(2.0) / (1.0 + r)
        });
        let val = u.exterior_lq_norm(10.0, 6.0).unwrap();
        assert!(
            (val - 0.528814045).abs() < 2e-3,
            "exterior L6 norm {val} vs 0.528814045"
        );
    }
}
