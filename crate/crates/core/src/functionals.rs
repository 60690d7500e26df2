//! Variational layer: energy, Nehari functional, ground state, best
//! constant, mountain-pass threshold, and stable/unstable set membership.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Boundary, RadialField};
use crate::grid::RadialGrid;
use crate::math;
use crate::params::ModelParams;

/// Position of a field relative to the stable set (energy below the
/// mountain-pass threshold, nonnegative Nehari value), the unstable set
/// (energy below, negative Nehari value), or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Membership {
    MPlus,
    MMinus,
    AboveThreshold,
    Zero,
}

/// All variational quantities of one field.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FunctionalReport {
    /// ‖u‖²_{Ḣ¹}
    pub kinetic: f64,
    /// ∫ |u|^p |x|^{−γ} dx
    pub potential: f64,
    /// kinetic/2 ∓ potential/p (sign from the model)
    pub energy: f64,
    /// kinetic ∓ potential, the derivative of the energy along ray scalings
    pub nehari: f64,
    /// energy − nehari/2
    pub i_value: f64,
    pub membership: Membership,
}

/// Discrete Ḣ¹ seminorm squared: face-centered differences weighted by the
/// face-localized r^{d−1}, plus the harmonic-tail gradient for decaying
/// fields. Second-order accurate on smoothly graded meshes.
pub fn kinetic_norm_sq(u: &RadialField) -> f64 {
    let g = u.grid();
    let omega = g.sphere_area();
    let dm1 = g.d as f64 - 1.0;
    let mut acc = 0.0;
    for i in 0..g.len() - 1 {
        let dr = g.nodes[i + 1] - g.nodes[i];
        let slope = (u.values[i + 1] - u.values[i]) / dr;
        // faces[i+1] is the midpoint between nodes i and i+1.
        acc += math::powf(g.faces[i + 1], dm1) * slope * slope * dr;
    }
    acc *= omega;
    if u.boundary == Boundary::DecayAtInfinity {
        let d = g.d as f64;
        let last = g.len() - 1;
        let amp = u.values[last] * math::powf(g.nodes[last], d - 2.0);
        acc += omega * (d - 2.0) * amp * amp * math::powf(g.r_max, 2.0 - d);
    }
    acc
}

/// Membership classifier. Fields within the numerical slack band of the
/// threshold are reported `AboveThreshold`: the boundary case is delicate
/// (equality forces a ground state), so no claim is made there. The Nehari
/// slack only applies near the threshold; far below it a tiny field has an
/// unambiguous sign.
fn classify(kinetic: f64, energy: f64, nehari: f64, threshold: f64) -> Membership {
    if kinetic < 1e-14 {
        return Membership::Zero;
    }
    let slack = 1e-6 * threshold;
    if energy >= threshold - slack {
        return Membership::AboveThreshold;
    }
    if energy > 0.99 * threshold && math::abs(nehari) < slack {
        return Membership::AboveThreshold;
    }
    if nehari >= 0.0 {
        Membership::MPlus
    } else {
        Membership::MMinus
    }
}

/// Evaluate all functionals of a field. `threshold` is the mountain-pass
/// energy from [`mountain_pass_energy`] computed on the same grid.
pub fn evaluate_functionals(
    u: &RadialField,
    params: &ModelParams,
    threshold: f64,
) -> Result<FunctionalReport> {
    if !(threshold > 0.0) {
        return Err(Error::Domain("mountain-pass threshold must be positive"));
    }
    let p = params.critical_power();
    let kinetic = kinetic_norm_sq(u);
    let potential = u.quadrature(p, true)?;
    let sgn = if params.is_focusing() { -1.0 } else { 1.0 };
    let energy = 0.5 * kinetic + sgn * potential / p;
    let nehari = kinetic + sgn * potential;
    let i_value = energy - 0.5 * nehari;
    Ok(FunctionalReport {
        kinetic,
        potential,
        energy,
        nehari,
        i_value,
        membership: classify(kinetic, energy, nehari, threshold),
    })
}

/// Closed-form parameters of the stationary extremal profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateSpec {
    pub params: ModelParams,
    /// ((d−γ)(d−2))^{(d−2)/(2(2−γ))}
    pub amplitude: f64,
    /// (d−2)/(2−γ)
    pub decay_exponent: f64,
}

impl GroundStateSpec {
    pub fn new(params: ModelParams) -> Result<Self> {
        if !params.is_focusing() {
            return Err(Error::Domain("the ground state exists in the focusing model"));
        }
        let d = params.d as f64;
        let g = params.gamma;
        Ok(Self {
            params,
            amplitude: math::powf((d - g) * (d - 2.0), (d - 2.0) / (2.0 * (2.0 - g))),
            decay_exponent: (d - 2.0) / (2.0 - g),
        })
    }

    /// Pointwise profile amplitude · (1 + r^{2−γ})^{−(d−2)/(2−γ)}.
    pub fn eval(&self, r: f64) -> f64 {
        self.amplitude
            * math::powf(1.0 + math::powf(r, 2.0 - self.params.gamma), -self.decay_exponent)
    }
}

/// Ground state sampled on a grid, carrying whole-space tail semantics.
pub fn ground_state(params: &ModelParams, grid: &Arc<RadialGrid>) -> Result<RadialField> {
    let spec = GroundStateSpec::new(*params)?;
    Ok(RadialField::from_fn(Arc::clone(grid), Boundary::DecayAtInfinity, |r| spec.eval(r)))
}

/// Descending quintic smoothstep: 1 on s ≤ 0, 0 on s ≥ 1, C² at both ends.
pub(crate) fn smooth_cutoff(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        1.0 - (10.0 - 15.0 * s + 6.0 * s * s) * s * s * s
    }
}

/// λ · (ground state) · (smooth cutoff supported in {r ≤ mollify_radius}):
/// the initial-data family of the dichotomy experiments. The cutoff
/// transition spans [mollify_radius/8, mollify_radius]; a wide ramp keeps
/// the cutoff's own gradient energy small so the family's variational
/// geometry tracks the exact ray polynomials.
pub fn mollified_ground_state(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
    amplitude: f64,
    mollify_radius: f64,
) -> Result<RadialField> {
    if !(mollify_radius > 0.0 && mollify_radius <= grid.r_max) {
        return Err(Error::Domain("mollify radius must lie inside the grid"));
    }
    let spec = GroundStateSpec::new(*params)?;
    let a = mollify_radius / 8.0;
    let width = mollify_radius - a;
    Ok(RadialField::from_fn(Arc::clone(grid), Boundary::DirichletAtRmax, |r| {
        amplitude * spec.eval(r) * smooth_cutoff((r - a) / width)
    }))
}

/// Max-norm residual of the stationary equation Δu + r^{−γ}|u|^{p−2}u = 0
/// over interior nodes, skipping the first 2 nodes (one-sided stencils on
/// graded meshes lose accuracy there) and the outer 10% (polluted by the
/// Dirichlet truncation). Uses three-point quadratic-fit derivatives.
pub fn elliptic_residual(u: &RadialField, params: &ModelParams) -> Result<f64> {
    if !params.is_focusing() {
        return Err(Error::Domain("the stationary equation is posed in the focusing model"));
    }
    u.ensure_finite()?;
    let g = u.grid();
    let n = g.len();
    let p = params.critical_power();
    let dm1 = g.d as f64 - 1.0;
    let first = 2;
    let last = n - n / 10;
    let mut worst = 0.0f64;
    for i in first..last.min(n - 1) {
        let dl = g.nodes[i] - g.nodes[i - 1];
        let dr = g.nodes[i + 1] - g.nodes[i];
        let (um, uc, up) = (u.values[i - 1], u.values[i], u.values[i + 1]);
        // Quadratic fit through the three nodes.
        let du = (-dr / (dl * (dl + dr))) * um + ((dr - dl) / (dl * dr)) * uc
            + (dl / (dr * (dl + dr))) * up;
        let d2u = 2.0 * (um / (dl * (dl + dr)) - uc / (dl * dr) + up / (dr * (dl + dr)));
        let laplacian = d2u + dm1 / g.nodes[i] * du;
        let reaction = math::powf(g.nodes[i], -g.gamma) * math::odd_power(uc, p);
        worst = worst.max(math::abs(laplacian + reaction));
    }
    Ok(worst)
}

/// Best constant of the weighted Sobolev inequality, computed from the
/// sampled extremal: ‖W‖_{L^p_γ} / ‖W‖_{Ḣ¹}.
pub fn hardy_sobolev_constant(params: &ModelParams, grid: &Arc<RadialGrid>) -> Result<f64> {
    let w = ground_state(params, grid)?;
    let p = params.critical_power();
    let kinetic = kinetic_norm_sq(&w);
    let potential = w.quadrature(p, true)?;
    Ok(math::powf(potential, 1.0 / p) / math::sqrt(kinetic))
}

/// Mountain-pass energy: the energy of the ground state, computed by
/// quadrature on the given grid. Agrees with ((2−γ)/(2(d−γ))) ‖W‖²_{Ḣ¹}
/// up to the discrete Nehari defect.
pub fn mountain_pass_energy(params: &ModelParams, grid: &Arc<RadialGrid>) -> Result<f64> {
    let w = ground_state(params, grid)?;
    let p = params.critical_power();
    let kinetic = kinetic_norm_sq(&w);
    let potential = w.quadrature(p, true)?;
    Ok(0.5 * kinetic - potential / p)
}

/// Mountain-pass value of a single field: max over ray scalings of the
/// energy, (1/2 − 1/p) K (K/P)^{2/(p−2)}. Infinite for fields with no
/// potential mass.
pub fn ray_mountain_pass_value(u: &RadialField, params: &ModelParams) -> Result<f64> {
    let p = params.critical_power();
    let kinetic = kinetic_norm_sq(u);
    let potential = u.quadrature(p, true)?;
    if potential <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((0.5 - 1.0 / p) * kinetic * math::powf(kinetic / potential, 2.0 / (p - 2.0)))
}

/// Smooth random test fields for inequality spot checks (seeded, no RNG
/// dependency): superpositions of Gaussian bumps with bounded amplitudes.
pub fn smooth_test_fields(grid: &Arc<RadialGrid>, count: usize, seed: u64) -> Vec<RadialField> {
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            let terms: Vec<(f64, f64, f64)> = (0..3)
                .map(|_| {
                    let amp = 2.0 * next() - 1.0;
                    let center = next() * 0.4 * grid.r_max;
                    let width = 0.3 + next() * 0.2 * grid.r_max.min(10.0);
                    (amp, center, width)
                })
                .collect();
            RadialField::from_fn(Arc::clone(grid), Boundary::DirichletAtRmax, |r| {
                terms
                    .iter()
                    .map(|&(a, c, w)| a * math::exp(-((r - c) / w) * ((r - c) / w)))
                    .sum()
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Sign;
    use core::f64::consts::PI;

    fn p3g1() -> ModelParams {
        ModelParams::new(3, 1.0, Sign::Focusing).unwrap()
    }

    fn grid(n: usize, r_max: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::graded(&p3g1(), n, r_max, 2.0).unwrap())
    }

    #[test]
    fn ground_state_closed_form_values() {
        let spec = GroundStateSpec::new(p3g1()).unwrap();
        assert!((spec.eval(0.0) - libm::sqrt(2.0)).abs() < 1e-14);
        assert!((spec.eval(1.0) - libm::sqrt(2.0) / 2.0).abs() < 1e-14);

        let p4 = ModelParams::new(4, 0.0, Sign::Focusing).unwrap();
        let spec4 = GroundStateSpec::new(p4).unwrap();
        // ((4−0)(4−2))^{(4−2)/(2·2)} = 8^{1/2}
        assert!((spec4.eval(0.0) - libm::sqrt(8.0)).abs() < 1e-14);

        assert!(GroundStateSpec::new(ModelParams::new(3, 1.0, Sign::Absorbing).unwrap()).is_err());
    }

    #[test]
    fn kinetic_norm_of_zero_and_gaussian() {
        let g = grid(2048, 60.0);
        let zero = RadialField::zero(Arc::clone(&g), Boundary::DirichletAtRmax);
        assert_eq!(kinetic_norm_sq(&zero), 0.0);

        // ∫ |∇ e^{−r²}|² dx = 3 π^{3/2} / (2 √2) ≈ 5.906104 (moment oracle).
        let gauss = RadialField::from_fn(g, Boundary::DirichletAtRmax, |r| libm::exp(-r * r));
        let k = kinetic_norm_sq(&gauss);
        let exact = 5.906104;
        assert!((k - exact).abs() < 0.005 * exact, "gaussian kinetic {k}");
    }

    #[test]
    fn ray_polynomial_membership_of_scaled_ground_states() {
        // Frozen oracle: for v = λW with K = P = 8π/3,
        //   kinetic(λW) = λ²K, potential = λ⁴K,
        //   E = λ²K/2 − λ⁴K/4, J = λ²K(1 − λ²).
        let g = grid(4096, 200.0);
        let params = p3g1();
        let threshold = mountain_pass_energy(&params, &g).unwrap();
        let k_ref = 8.0 * PI / 3.0;

        let w = ground_state(&params, &g).unwrap();
        let half = w.map(|_, v| 0.5 * v);
        let rep = evaluate_functionals(&half, &params, threshold).unwrap();
        assert!((rep.kinetic - 0.25 * k_ref).abs() < 0.005 * k_ref);
        assert!((rep.potential - 0.0625 * k_ref).abs() < 0.005 * k_ref);
        assert!((rep.energy - 0.109375 * k_ref).abs() < 0.005 * k_ref);
        assert!((rep.nehari - 0.1875 * k_ref).abs() < 0.005 * k_ref);
        assert_eq!(rep.membership, Membership::MPlus);

        let stretched = w.map(|_, v| 1.2 * v);
        let rep = evaluate_functionals(&stretched, &params, threshold).unwrap();
        assert!((rep.energy - 0.2016 * k_ref).abs() < 0.005 * k_ref);
        assert!((rep.nehari - 1.44 * (1.0 - 1.44) * k_ref).abs() < 0.01 * k_ref);
        assert_eq!(rep.membership, Membership::MMinus);

        // The ground state itself sits on the threshold.
        let rep = evaluate_functionals(&w, &params, threshold).unwrap();
        assert_eq!(rep.membership, Membership::AboveThreshold);

        let zero = RadialField::zero(g, Boundary::DirichletAtRmax);
        let rep = evaluate_functionals(&zero, &params, threshold).unwrap();
        assert_eq!(rep.membership, Membership::Zero);
        assert_eq!(rep.energy, 0.0);
    }

    #[test]
    fn energy_decomposes_into_i_value_plus_half_nehari() {
        let g = grid(512, 50.0);
        let params = p3g1();
        let threshold = mountain_pass_energy(&params, &g).unwrap();
        for u in smooth_test_fields(&g, 20, 42) {
            let rep = evaluate_functionals(&u, &params, threshold).unwrap();
            assert!((rep.energy - (rep.i_value + 0.5 * rep.nehari)).abs() <= 1e-15 * rep.energy.abs().max(1.0));
            // Focusing identity: i_value = ((2−γ)/(2(d−γ))) · potential.
            let coeff = (2.0 - params.gamma) / (2.0 * (params.d as f64 - params.gamma));
            assert!((rep.i_value - coeff * rep.potential).abs() <= 1e-12 * rep.potential.max(1.0));
            assert!(rep.potential >= 0.0 && rep.kinetic >= 0.0);
        }
    }

    #[test]
    fn absorbing_nehari_is_nonnegative() {
        let params = ModelParams::new(3, 1.0, Sign::Absorbing).unwrap();
        let g = Arc::new(RadialGrid::graded(&params, 256, 20.0, 2.0).unwrap());
        for u in smooth_test_fields(&g, 10, 7) {
            let rep = evaluate_functionals(&u, &params, 1.0).unwrap();
            assert!(rep.nehari >= 0.0);
        }
    }

    #[test]
    fn gaussian_is_not_a_stationary_solution() {
        let g = grid(1024, 30.0);
        let gauss = RadialField::from_fn(g, Boundary::DirichletAtRmax, |r| libm::exp(-r * r));
        let res = elliptic_residual(&gauss, &p3g1()).unwrap();
        assert!(res > 0.5, "gaussian residual should be O(1), got {res}");

        let zero = RadialField::zero(grid(256, 30.0), Boundary::DirichletAtRmax);
        assert_eq!(elliptic_residual(&zero, &p3g1()).unwrap(), 0.0);
    }

    #[test]
    fn hardy_sobolev_constant_matches_beta_oracle() {
        // C = (8π/3)^{−1/4} ≈ 0.5877875 from the closed-form extremal.
        let c = hardy_sobolev_constant(&p3g1(), &grid(4096, 200.0)).unwrap();
        let exact = libm::pow(8.0 * PI / 3.0, -0.25);
        assert!((c - exact).abs() < 0.005 * exact, "constant {c} vs {exact}");
    }
}
