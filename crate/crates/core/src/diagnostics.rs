//! Post-hoc trajectory diagnostics: time-weighted (Kato) norms, the
//! small-data threshold probe, and the localized concavity machinery used
//! by the blow-up argument.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::evolve::{simulate, EvolveConfig, Trajectory, Verdict};
use crate::field::RadialField;
use crate::functionals::{kinetic_norm_sq, smooth_cutoff};
use crate::math;
use crate::params::ModelParams;
use crate::propagator::{LinearPropagator, LinearStepConfig};

/// Admissible Lebesgue window (q_c, q_upper) for the contraction/uniqueness
/// space: 1/q must lie strictly between 1/q_c − 1/(d(p−1)) and 1/q_c.
///
/// Computed from the algebraically simplified closed form
/// q_upper = 2d(d + 2 − 2γ) / ((d − 2)(d − 2γ)), which is exact in floating
/// point for integer-valued inputs like (d, γ) = (3, 1).
pub fn admissible_q_window(params: &ModelParams) -> (f64, f64) {
    let d = params.d as f64;
    let g = params.gamma;
    let q_c = 2.0 * d / (d - 2.0);
    // 1/q_upper = (d−2)(d−2γ) / (2d(d+2−2γ)); when d ≤ 2γ the lower bound
    // on 1/q is nonpositive and every q > q_c is admissible.
    let q_upper = if d - 2.0 * g > 0.0 {
        2.0 * d * (d + 2.0 - 2.0 * g) / ((d - 2.0) * (d - 2.0 * g))
    } else {
        f64::INFINITY
    };
    (q_c, q_upper)
}

/// Exponents of a time-weighted norm sup_t t^{(d/2)(1/q_c − 1/q) + α} ‖u‖_{L^q}.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KatoConfig {
    pub q: f64,
    pub alpha: f64,
}

impl KatoConfig {
    /// Rejects q outside the open admissibility window (endpoints excluded).
    pub fn new(params: &ModelParams, q: f64, alpha: f64) -> Result<Self> {
        let (q_lo, q_hi) = admissible_q_window(params);
        if !(q > q_lo && q < q_hi) {
            return Err(Error::Domain("q must lie strictly inside the admissible window"));
        }
        Ok(Self { q, alpha })
    }

    pub fn time_exponent(&self, params: &ModelParams) -> f64 {
        let d = params.d as f64;
        (d / 2.0) * (1.0 / params.critical_lebesgue() - 1.0 / self.q) + self.alpha
    }
}

fn kato_of_samples(samples: &[(f64, f64)], exponent: f64) -> f64 {
    let mut sup = 0.0f64;
    for &(t, norm) in samples {
        let weight = if t == 0.0 {
            if exponent == 0.0 { 1.0 } else { 0.0 }
        } else {
            math::powf(t, exponent)
        };
        sup = sup.max(weight * norm);
    }
    sup
}

/// Max over checkpoints of t^β ‖u(t)‖_{L^q}; a lower bound of the true sup
/// (checkpoint discretization). The exponent q must be among the tracked
/// norms of the trajectory.
pub fn kato_norm(traj: &Trajectory, cfg: &KatoConfig) -> Result<f64> {
    let exponent = cfg.time_exponent(&traj.params);
    let mut samples = Vec::with_capacity(traj.checkpoints.len());
    for cp in &traj.checkpoints {
        samples.push((cp.t, cp.lq(cfg.q)?));
    }
    Ok(kato_of_samples(&samples, exponent))
}

/// Kato norm of the pure heat flow of `u0` sampled at the same times as a
/// reference trajectory would be; used by the small-data comparison.
pub fn linear_kato_norm(
    u0: &RadialField,
    params: &ModelParams,
    cfg: &KatoConfig,
    t_end: f64,
    samples: usize,
) -> Result<f64> {
    if samples < 2 || !(t_end > 0.0) {
        return Err(Error::Domain("need t_end > 0 and at least two samples"));
    }
    let exponent = cfg.time_exponent(params);
    let mut u = u0.clone();
    let mut t = 0.0;
    let dt = t_end / (16.0 * samples as f64);
    let prop = LinearPropagator::new(u.grid_arc(), dt, LinearStepConfig::backward_euler())?;
    let mut out = Vec::with_capacity(samples);
    out.push((0.0, u.lq_norm(cfg.q)?));
    let stride = 16;
    for k in 0..samples {
        for _ in 0..stride {
            u = prop.step_with_forcing(&u, None);
            t += dt;
        }
        let _ = k;
        out.push((t, u.lq_norm(cfg.q)?));
    }
    Ok(kato_of_samples(&out, exponent))
}

/// Outcome of the amplitude bisection between dissipation and blow-up.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ThresholdProbe {
    /// Midpoint of the final bracket when a flip was found.
    pub flip_amplitude: Option<f64>,
    /// Final (or searched) amplitude bracket.
    pub bracket: (f64, f64),
    /// Verdict observed at both ends when no flip exists in the range.
    pub one_sided: Option<Verdict>,
    /// Whether the nonlinear Kato norm stayed within twice the linear one
    /// at half the flip amplitude (small-data regime check).
    pub small_data_kato_ok: Option<bool>,
}

/// Bisect the amplitude at which `a · shape` flips from dissipation to
/// blow-up. Undetermined verdicts are treated as the dissipative side of
/// the bracket (the horizon bounds them).
pub fn small_data_threshold_probe(
    shape: &RadialField,
    params: &ModelParams,
    evolve_cfg: &EvolveConfig,
    kato_cfg: &KatoConfig,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> Result<ThresholdProbe> {
    if !params.is_focusing() {
        return Err(Error::Domain("the threshold probe applies to the focusing model"));
    }
    if !(0.0 <= lo && lo < hi) {
        return Err(Error::Domain("need 0 <= lo < hi"));
    }
    let verdict_at = |a: f64| -> Result<Verdict> {
        let data = shape.map(|_, v| a * v);
        Ok(simulate(&data, params, evolve_cfg)?.verdict)
    };
    let lo_v = verdict_at(lo)?;
    let hi_v = verdict_at(hi)?;
    if lo_v == Verdict::BlowUp || hi_v != Verdict::BlowUp {
        return Ok(ThresholdProbe {
            flip_amplitude: None,
            bracket: (lo, hi),
            one_sided: Some(if hi_v == Verdict::BlowUp { Verdict::BlowUp } else { hi_v }),
            small_data_kato_ok: None,
        });
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iterations {
        let mid = 0.5 * (a + b);
        if verdict_at(mid)? == Verdict::BlowUp {
            b = mid;
        } else {
            a = mid;
        }
    }
    let flip = 0.5 * (a + b);

    // Small-data regime: at half the flip amplitude, the nonlinear flow's
    // Kato norm stays within a factor 2 of the linear flow's.
    let half = shape.map(|_, v| 0.5 * flip * v);
    let traj = simulate(&half, params, evolve_cfg)?;
    let t_end = traj.last().t;
    let nonlinear = kato_norm(&traj, kato_cfg)?;
    let linear = linear_kato_norm(&half, params, kato_cfg, t_end.max(1e-6), 64)?;
    let ok = nonlinear <= 2.0 * linear.max(1e-300);

    Ok(ThresholdProbe {
        flip_amplitude: Some(flip),
        bracket: (a, b),
        one_sided: None,
        small_data_kato_ok: Some(ok),
    })
}

/// χ_R(r): 1 on r ≤ R, quintic descent on [R, 2R], 0 beyond. The quintic
/// transition keeps χ² twice continuously differentiable.
pub fn cutoff_profile(r: f64, radius: f64) -> f64 {
    smooth_cutoff((r - radius) / radius)
}

/// ‖χ_R u‖²_{L²} by plain quadrature. Requires 2R ≤ r_max so the cutoff is
/// supported inside the grid.
pub fn cutoff_mass(u: &RadialField, radius: f64) -> Result<f64> {
    let g = u.grid();
    if !(radius > 0.0 && 2.0 * radius <= g.r_max) {
        return Err(Error::Domain("cutoff needs 2R <= r_max"));
    }
    let mut acc = 0.0;
    for i in 0..g.len() {
        let chi = cutoff_profile(g.nodes[i], radius);
        acc += g.cell_weights_plain[i] * chi * chi * u.values[i] * u.values[i];
    }
    Ok(acc)
}

/// Max defect, over consecutive checkpoint pairs, of the localized mass
/// identity d/dt ‖χ_R u‖²/2 = −J(u) + ⟨(χ_R² − 1)u, ∂_t u⟩, with the time
/// derivative a difference quotient and u the midpoint field; normalized by
/// max(1, kinetic).
pub fn nehari_cutoff_identity_residual(traj: &Trajectory, radius: f64) -> Result<f64> {
    if traj.checkpoints.len() < 2 {
        return Err(Error::InsufficientCheckpoints { needed: 2, got: traj.checkpoints.len() });
    }
    let params = traj.params;
    let p = params.critical_power();
    let sgn = if params.is_focusing() { -1.0 } else { 1.0 };
    let mut worst = 0.0f64;
    for pair in traj.checkpoints.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let span = b.t - a.t;
        if span <= 0.0 {
            continue;
        }
        let mut mid = a.field.clone();
        for i in 0..mid.values.len() {
            mid.values[i] = 0.5 * (a.field.values[i] + b.field.values[i]);
        }
        let kinetic = kinetic_norm_sq(&mid);
        let potential = mid.quadrature(p, true)?;
        let nehari = kinetic + sgn * potential;

        let mass_a = cutoff_mass(&a.field, radius)?;
        let mass_b = cutoff_mass(&b.field, radius)?;
        let lhs = (mass_b - mass_a) / (2.0 * span);

        // ⟨(χ² − 1) ū, δu/Δt⟩ with plain weights.
        let g = mid.grid();
        let mut cross = 0.0;
        for i in 0..g.len() {
            let chi = cutoff_profile(g.nodes[i], radius);
            let dq = (b.field.values[i] - a.field.values[i]) / span;
            cross += g.cell_weights_plain[i] * (chi * chi - 1.0) * mid.values[i] * dq;
        }

        let defect = math::abs(lhs + nehari - cross) / kinetic.max(1.0);
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// R² times the exterior critical-Lebesgue norm of the data: the time
/// horizon on which the localized concavity argument is quantitative.
pub fn exterior_timescale(u0: &RadialField, radius: f64) -> Result<f64> {
    let q_c = 2.0 * u0.grid().d as f64 / (u0.grid().d as f64 - 2.0);
    Ok(radius * radius * u0.exterior_lq_norm(radius, q_c)?)
}

/// Localization parameters of the concavity certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CutoffConfig {
    /// Cutoff radius R.
    pub radius: f64,
    /// Additive constant A of the accumulated-mass functional.
    pub a_const: f64,
    /// Concavity exponent α.
    pub alpha: f64,
    /// Young-inequality split ε.
    pub epsilon: f64,
}

impl CutoffConfig {
    pub fn new(params: &ModelParams, radius: f64, a_const: f64, alpha: f64, epsilon: f64) -> Result<Self> {
        if !(radius > 0.0 && a_const > 0.0 && alpha > 0.0 && epsilon > 0.0) {
            return Err(Error::Domain("cutoff parameters must be positive"));
        }
        // The argument needs 2p > 4(1+α)(1+ε).
        let p = params.critical_power();
        if !(2.0 * p > 4.0 * (1.0 + alpha) * (1.0 + epsilon)) {
            return Err(Error::Domain("need 2p > 4(1+alpha)(1+epsilon)"));
        }
        Ok(Self { radius, a_const, alpha, epsilon })
    }

    /// A chosen by the blow-up argument's own formula:
    /// A = 2(1+α)(1+ε^{−1}) ‖χ_R u₀‖⁴_{L²} / (p (l − E(u₀))).
    /// Requires E(u₀) strictly below the threshold.
    pub fn with_proof_constant(
        params: &ModelParams,
        u0: &RadialField,
        energy0: f64,
        threshold: f64,
        radius: f64,
        alpha: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if !(energy0 < threshold) {
            return Err(Error::Domain("the localized argument needs energy below the threshold"));
        }
        let p = params.critical_power();
        let mass = cutoff_mass(u0, radius)?;
        let a_const =
            2.0 * (1.0 + alpha) * (1.0 + 1.0 / epsilon) * mass * mass / (p * (threshold - energy0));
        Self::new(params, radius, a_const, alpha, epsilon)
    }
}

/// Result of the discrete concavity check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConcavityReport {
    pub radius: f64,
    pub a_const: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// Effective window [t_a, min(t_b, T_R, last checkpoint)].
    pub window: (f64, f64),
    pub checkpoints_in_window: usize,
    /// Fraction of window checkpoints where I″I − (1+α)(I′)² > 0 strictly.
    pub fraction_holding: f64,
    /// Minimal margin of the inequality over the window.
    pub min_margin: f64,
    pub exterior_timescale: f64,
}

/// Build the accumulated localized mass I(t) = ∫₀^t ‖χ_R u‖² ds + A along a
/// trajectory and check the concavity inequality I″I − (1+α)(I′)² > 0 on a
/// window. I′ is the cutoff mass itself; I″ comes from three-point
/// quadratic-fit differencing of I′ at the (nonuniform) checkpoint times.
pub fn concavity_certificate(
    traj: &Trajectory,
    cfg: &CutoffConfig,
    window: (f64, f64),
) -> Result<ConcavityReport> {
    if !traj.params.is_focusing() {
        return Err(Error::Domain("the concavity certificate applies to the focusing model"));
    }
    let cps = &traj.checkpoints;
    if cps.len() < 3 {
        return Err(Error::InsufficientCheckpoints { needed: 8, got: cps.len() });
    }

    // Data with no exterior mass puts no quantitative horizon on the
    // localization, so a vanishing timescale does not cap the window.
    let t_r = exterior_timescale(&cps[0].field, cfg.radius)?;
    let cap = if t_r > 0.0 { t_r } else { f64::INFINITY };
    let t_end = window.1.min(cap).min(cps.last().expect("nonempty").t);

    let masses: Vec<f64> = {
        let mut out = Vec::with_capacity(cps.len());
        for cp in cps {
            out.push(cutoff_mass(&cp.field, cfg.radius)?);
        }
        out
    };
    // Trapezoidal accumulation; nondecreasing and >= A by construction.
    let mut accumulated = Vec::with_capacity(cps.len());
    let mut acc = cfg.a_const;
    accumulated.push(acc);
    for k in 0..cps.len() - 1 {
        acc += 0.5 * (cps[k + 1].t - cps[k].t) * (masses[k] + masses[k + 1]);
        accumulated.push(acc);
    }

    let mut in_window = 0usize;
    let mut holding = 0usize;
    let mut min_margin = f64::INFINITY;
    for k in 1..cps.len() - 1 {
        let t = cps[k].t;
        if t < window.0 || t > t_end {
            continue;
        }
        let dl = cps[k].t - cps[k - 1].t;
        let dr = cps[k + 1].t - cps[k].t;
        if dl <= 0.0 || dr <= 0.0 {
            continue;
        }
        // Quadratic-fit first derivative of I' at t_k.
        let second = (-dr / (dl * (dl + dr))) * masses[k - 1]
            + ((dr - dl) / (dl * dr)) * masses[k]
            + (dl / (dr * (dl + dr))) * masses[k + 1];
        let margin = second * accumulated[k] - (1.0 + cfg.alpha) * masses[k] * masses[k];
        in_window += 1;
        if margin > 0.0 {
            holding += 1;
        }
        min_margin = min_margin.min(margin);
    }
    if in_window < 8 {
        return Err(Error::InsufficientCheckpoints { needed: 8, got: in_window });
    }

    Ok(ConcavityReport {
        radius: cfg.radius,
        a_const: cfg.a_const,
        alpha: cfg.alpha,
        epsilon: cfg.epsilon,
        window: (window.0, t_end),
        checkpoints_in_window: in_window,
        fraction_holding: holding as f64 / in_window as f64,
        min_margin,
        exterior_timescale: t_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Boundary;
    use crate::grid::RadialGrid;
    use crate::params::Sign;
    use alloc::string::String;
    use alloc::sync::Arc;

    fn p3g1() -> ModelParams {
        ModelParams::new(3, 1.0, Sign::Focusing).unwrap()
    }

    #[test]
    fn admissible_window_is_exact_for_integer_cases() {
        let (lo, hi) = admissible_q_window(&p3g1());
        assert_eq!(lo, 6.0);
        assert_eq!(hi, 18.0);

        let p = ModelParams::new(4, 0.0, Sign::Focusing).unwrap();
        let (lo, hi) = admissible_q_window(&p);
        assert_eq!(lo, 4.0);
        assert_eq!(hi, 6.0);
    }

    #[test]
    fn window_nonempty_across_parameter_range() {
        for d in 3..8 {
            for k in 0..20 {
                let gamma = 0.1 * k as f64;
                if gamma >= 2.0 {
                    break;
                }
                let p = ModelParams::new(d, gamma, Sign::Focusing).unwrap();
                let (lo, hi) = admissible_q_window(&p);
                assert!(hi > lo, "empty window at d={d} gamma={gamma}");
            }
        }
    }

    #[test]
    fn kato_config_rejects_endpoints() {
        let p = p3g1();
        assert!(KatoConfig::new(&p, 6.0, 0.0).is_err());
        assert!(KatoConfig::new(&p, 18.0, 0.0).is_err());
        assert!(KatoConfig::new(&p, 9.0, 0.0).is_ok());
    }

    #[test]
    fn cutoff_mass_brackets_ball_volumes() {
        let g = Arc::new(RadialGrid::uniform(&p3g1(), 512, 20.0).unwrap());
        let one = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |_| 1.0);
        let radius = 5.0;
        let mass = cutoff_mass(&one, radius).unwrap();
        let vol = |r: f64| 4.0 * core::f64::consts::PI / 3.0 * r * r * r;
        assert!(mass >= vol(radius) - 1e-9, "mass {mass} below inner ball");
        assert!(mass <= vol(2.0 * radius) + 1e-9, "mass {mass} above outer ball");

        // Cutoff covering the support recovers the L2 norm exactly.
        let bump = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            if r <= 3.0 { 1.0 - r / 3.0 } else { 0.0 }
        });
        let full = cutoff_mass(&bump, 5.0).unwrap();
        let l2 = bump.quadrature(2.0, false).unwrap();
        assert!((full - l2).abs() <= 1e-12 * l2);

        let zero = RadialField::zero(g, Boundary::DirichletAtRmax);
        assert_eq!(cutoff_mass(&zero, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn cutoff_requires_room() {
        let g = Arc::new(RadialGrid::uniform(&p3g1(), 64, 10.0).unwrap());
        let u = RadialField::zero(g, Boundary::DirichletAtRmax);
        assert!(cutoff_mass(&u, 6.0).is_err());
    }

    #[test]
    fn exterior_timescale_vanishes_for_interior_support() {
        let g = Arc::new(RadialGrid::uniform(&p3g1(), 256, 40.0).unwrap());
        let bump = RadialField::from_fn(g, Boundary::DirichletAtRmax, |r| {
            if r < 5.0 { 1.0 } else { 0.0 }
        });
        let t = exterior_timescale(&bump, 10.0).unwrap();
        assert_eq!(t, 0.0);
    }

    #[test]
    fn proof_constant_requires_subthreshold_energy() {
        let p = p3g1();
        let g = Arc::new(RadialGrid::uniform(&p, 128, 40.0).unwrap());
        let u = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            libm::exp(-r * r)
        });
        assert!(CutoffConfig::with_proof_constant(&p, &u, 3.0, 2.0, 10.0, 0.05, 0.05).is_err());
        let cfg = CutoffConfig::with_proof_constant(&p, &u, 1.0, 2.0, 10.0, 0.05, 0.05).unwrap();
        assert!(cfg.a_const > 0.0);
        // Constraint 2p > 4(1+alpha)(1+eps) rejected when violated.
        assert!(CutoffConfig::new(&p, 10.0, 1.0, 1.0, 0.05).is_err());
    }

    #[test]
    fn zero_trajectory_certificate_fails_strict_inequality() {
        // Hand-built stationary-zero trajectory: I ≡ A, I′ ≡ 0, so the
        // strict inequality fails everywhere with margin 0.
        let params = p3g1();
        let g = Arc::new(RadialGrid::uniform(&params, 64, 40.0).unwrap());
        let cfg = EvolveConfig::default();
        let zero = RadialField::zero(Arc::clone(&g), Boundary::DirichletAtRmax);
        let mut cps = Vec::new();
        for k in 0..12 {
            cps.push(crate::evolve::Checkpoint {
                t: k as f64 * 0.1,
                field: zero.clone(),
                e_gamma: 0.0,
                j_gamma: 0.0,
                h1_norm: 0.0,
                lq_norms: alloc::vec![(2.0, 0.0)],
                dt_used: 0.1,
                dissipated: 0.0,
                membership: crate::functionals::Membership::Zero,
            });
        }
        let traj = Trajectory {
            params,
            config: cfg,
            threshold: 1.0,
            checkpoints: cps,
            verdict: Verdict::Dissipative,
            halt_reason: String::from("test"),
        };
        let ccfg = CutoffConfig::new(&params, 10.0, 2.0, 0.05, 0.05).unwrap();
        let report = concavity_certificate(&traj, &ccfg, (0.0, 1e9)).unwrap();
        assert_eq!(report.fraction_holding, 0.0);
        assert!(report.min_margin <= 0.0);
    }
}
