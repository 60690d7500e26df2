//! Nonlinear evolution: IMEX integration, trajectory recording, energy
//! diagnostics, the Duhamel-form residual, and the fixed-point (Picard)
//! cross-check.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::functionals::{self, FunctionalReport, Membership};
use crate::math;
use crate::params::{ModelParams, Sign};
use crate::propagator::{LinearPropagator, LinearStepConfig};

/// Time-stepping and halting parameters of a simulation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvolveConfig {
    pub dt_init: f64,
    pub dt_max: f64,
    /// Blow-up floor: the run halts with a BlowUp verdict when the adaptive
    /// rule would push dt below this.
    pub dt_min: f64,
    pub t_horizon: f64,
    /// Record a checkpoint every this many steps (plus the first and last).
    pub checkpoint_stride: usize,
    pub blowup_sup_threshold: f64,
    /// Dissipative when the Ḣ¹ norm falls below this fraction of its
    /// initial value (and is nonincreasing across recent checkpoints).
    pub dissipation_rel_threshold: f64,
    /// Safety factor of the explicit-term stability rule
    /// dt = c_stab / max_i r_i^{−γ} |u_i|^{p−2}.
    pub stability_safety: f64,
    /// Lebesgue exponents recorded at each checkpoint; empty means the
    /// default set {2, q_c, kato default}.
    pub lq_track: Vec<f64>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            dt_init: 1e-3,
            dt_max: 2.0,
            dt_min: 1e-12,
            t_horizon: 100.0,
            checkpoint_stride: 25,
            blowup_sup_threshold: 1e6,
            dissipation_rel_threshold: 1e-3,
            stability_safety: 0.2,
            lq_track: Vec::new(),
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt_init && self.dt_init <= self.dt_max) {
            return Err(Error::Domain("need 0 < dt_min <= dt_init <= dt_max"));
        }
        if !(self.t_horizon > 0.0) {
            return Err(Error::Domain("time horizon must be positive"));
        }
        if !(self.blowup_sup_threshold > 0.0
            && self.dissipation_rel_threshold > 0.0
            && self.stability_safety > 0.0)
        {
            return Err(Error::Domain("thresholds must be positive"));
        }
        if self.checkpoint_stride == 0 {
            return Err(Error::Domain("checkpoint stride must be at least 1"));
        }
        Ok(())
    }

    /// Fixed-step variant used by cross-checks and refinement studies. The
    /// stability rule may still shrink a step when the data demands it, so
    /// callers pair this with configurations where the rule never binds;
    /// the blow-up floor sits three decades below the target step.
    pub fn fixed_dt(dt: f64, t_horizon: f64, stride: usize) -> Self {
        Self {
            dt_init: dt,
            dt_max: dt,
            dt_min: dt * 1e-3,
            t_horizon,
            checkpoint_stride: stride,
            ..Self::default()
        }
    }
}

/// Default Kato exponent: the harmonic midpoint of the admissible window.
pub fn default_kato_exponent(params: &ModelParams) -> f64 {
    let (q_lo, q_hi) = crate::diagnostics::admissible_q_window(params);
    2.0 / (1.0 / q_lo + 1.0 / q_hi)
}

/// Time-stamped state snapshot with its variational quantities.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub t: f64,
    pub field: RadialField,
    pub e_gamma: f64,
    pub j_gamma: f64,
    pub h1_norm: f64,
    /// (q, ‖u‖_{L^q}) pairs for the tracked exponents.
    pub lq_norms: Vec<(f64, f64)>,
    pub dt_used: f64,
    /// Running ∫₀^t ‖∂_t u‖²_{L²} dτ of the discrete difference quotients.
    pub dissipated: f64,
    pub membership: Membership,
}

impl Checkpoint {
    pub fn lq(&self, q: f64) -> Result<f64> {
        self.lq_norms
            .iter()
            .find(|(qq, _)| (qq - q).abs() < 1e-9)
            .map(|(_, v)| *v)
            .ok_or(Error::NormNotRecorded)
    }

    pub fn sup_norm(&self) -> f64 {
        self.field.sup_norm()
    }
}

/// Terminal classification of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Dissipative,
    /// Finite-time blow-up and infinite-time grow-up are not distinguished;
    /// the halt reason records which trigger fired.
    BlowUp,
    Undetermined,
}

/// A completed run: checkpoints plus the terminal verdict.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: ModelParams,
    pub config: EvolveConfig,
    /// Mountain-pass threshold used for membership classification
    /// (computed for the focusing model on the run's grid).
    pub threshold: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub verdict: Verdict,
    pub halt_reason: String,
}

impl Trajectory {
    pub fn last(&self) -> &Checkpoint {
        self.checkpoints.last().expect("trajectory has at least the initial checkpoint")
    }

    pub fn initial(&self) -> &Checkpoint {
        &self.checkpoints[0]
    }
}

/// Pointwise source term ± r^{−γ} |u|^{p−2} u. Overflow surfaces as an
/// error so callers can turn it into a verdict instead of propagating Inf.
pub fn nonlinear_term(u: &RadialField, params: &ModelParams) -> Result<RadialField> {
    let p = params.critical_power();
    let gamma = params.gamma;
    let sgn = if params.is_focusing() { 1.0 } else { -1.0 };
    let out = u.map(|r, v| sgn * math::powf(r, -gamma) * math::odd_power(v, p));
    out.ensure_finite().map_err(|_| Error::NonFinite("nonlinear term"))?;
    Ok(out)
}

/// One IMEX step: implicit backward-Euler heat solve, explicit nonlinearity:
/// (I − dt Δ_h) u⁺ = u + dt N(u).
pub fn imex_step(u: &RadialField, dt: f64, params: &ModelParams) -> Result<RadialField> {
    let prop = LinearPropagator::new(u.grid_arc(), dt, LinearStepConfig::backward_euler())?;
    let forcing = nonlinear_term(u, params)?;
    Ok(prop.step_with_forcing(u, Some(&forcing.values)))
}

/// Cached evaluation of ± r^{−γ} |u|^{p−2} u and its stability scale: the
/// singular prefactor is a fixed per-node vector and integer powers take a
/// multiply-only path. This is the per-step hot loop of every simulation.
pub(crate) struct NonlinearOp {
    sing: alloc::vec::Vec<f64>,
    p: f64,
    sgn: f64,
}

impl NonlinearOp {
    pub(crate) fn new(grid: &crate::grid::RadialGrid, params: &ModelParams) -> Self {
        let gamma = params.gamma;
        let sing = grid.nodes.iter().map(|&r| math::powf(r, -gamma)).collect();
        let sgn = if params.is_focusing() { 1.0 } else { -1.0 };
        Self { sing, p: params.critical_power(), sgn }
    }

    #[inline]
    fn abs_pow(x: f64, e: f64) -> f64 {
        if e == 2.0 {
            x * x
        } else if e == 1.0 {
            math::abs(x)
        } else if e == 3.0 {
            let a = math::abs(x);
            a * a * a
        } else {
            math::powf(math::abs(x), e)
        }
    }

    /// ± r^{−γ} |u|^{p−2} u, written into `out`; false when it overflowed.
    pub(crate) fn eval_into(&self, u: &[f64], out: &mut [f64]) -> bool {
        let e = self.p - 1.0;
        let mut finite = true;
        for i in 0..u.len() {
            let v = self.sgn * self.sing[i] * Self::abs_pow(u[i], e) * if u[i] < 0.0 { -1.0 } else { 1.0 };
            finite &= v.is_finite();
            out[i] = v;
        }
        finite
    }

    /// max_i r_i^{−γ} |u_i|^{p−2}.
    pub(crate) fn rate(&self, u: &[f64]) -> f64 {
        let e = self.p - 2.0;
        let mut rate = 0.0f64;
        for i in 0..u.len() {
            rate = rate.max(self.sing[i] * Self::abs_pow(u[i], e));
        }
        rate
    }
}

/// Mountain-pass threshold for membership classification; always taken from
/// the focusing twin of the model so absorbing runs classify consistently.
fn classification_threshold(params: &ModelParams, u0: &RadialField) -> Result<f64> {
    let focusing = ModelParams { sign: Sign::Focusing, ..*params };
    functionals::mountain_pass_energy(&focusing, &u0.grid_arc())
}

struct Recorder {
    params: ModelParams,
    threshold: f64,
    qs: Vec<f64>,
    checkpoints: Vec<Checkpoint>,
}

impl Recorder {
    fn record(&mut self, t: f64, u: &RadialField, dt_used: f64, dissipated: f64) -> Result<&Checkpoint> {
        let report: FunctionalReport =
            functionals::evaluate_functionals(u, &self.params, self.threshold)?;
        let mut lq_norms = Vec::with_capacity(self.qs.len());
        for &q in &self.qs {
            lq_norms.push((q, u.lq_norm(q)?));
        }
        self.checkpoints.push(Checkpoint {
            t,
            field: u.clone(),
            e_gamma: report.energy,
            j_gamma: report.nehari,
            h1_norm: math::sqrt(report.kinetic),
            lq_norms,
            dt_used,
            dissipated,
            membership: report.membership,
        });
        Ok(self.checkpoints.last().expect("just pushed"))
    }
}

/// Evolve initial data until dissipation, blow-up, or the horizon.
///
/// Failure modes of the dynamics become verdicts with a halt reason; `Err`
/// is reserved for invalid configuration or non-finite input.
pub fn simulate(u0: &RadialField, params: &ModelParams, cfg: &EvolveConfig) -> Result<Trajectory> {
    cfg.validate()?;
    u0.ensure_finite()?;
    let threshold = classification_threshold(params, u0)?;
    let qs = if cfg.lq_track.is_empty() {
        vec![2.0, params.critical_lebesgue(), default_kato_exponent(params)]
    } else {
        cfg.lq_track.clone()
    };
    let mut rec = Recorder { params: *params, threshold, qs, checkpoints: Vec::new() };

    let mut u = u0.clone();
    let mut t = 0.0;
    let mut dissipated = 0.0;
    let h1_init = rec.record(0.0, &u, 0.0, 0.0)?.h1_norm;

    if h1_init < 1e-300 {
        return Ok(Trajectory {
            params: *params,
            config: cfg.clone(),
            threshold,
            checkpoints: rec.checkpoints,
            verdict: Verdict::Dissipative,
            halt_reason: String::from("initial data already below the dissipation threshold"),
        });
    }

    let weights = u0.grid().cell_weights_plain.clone();
    let stiffness = Arc::new(crate::propagator::Stiffness::assemble(u0.grid()));
    let op = NonlinearOp::new(u0.grid(), params);
    let mut forcing = alloc::vec![0.0; u0.len()];
    let mut prop: Option<LinearPropagator> = None;
    let mut step: usize = 0;
    let mut first = true;

    loop {
        let rate = op.rate(&u.values);
        let mut dt = if rate > 0.0 { cfg.stability_safety / rate } else { cfg.dt_max };
        if first {
            dt = dt.min(cfg.dt_init);
            first = false;
        }
        if dt < cfg.dt_min {
            rec.record(t, &u, dt.max(cfg.dt_min), dissipated)?;
            return Ok(finish(rec, params, cfg, threshold, Verdict::BlowUp,
                "time step collapsed to the blow-up floor"));
        }
        dt = dt.min(cfg.dt_max).min(cfg.t_horizon - t);

        if !op.eval_into(&u.values, &mut forcing) {
            rec.record(t, &u, dt, dissipated)?;
            return Ok(finish(rec, params, cfg, threshold, Verdict::BlowUp,
                "nonlinear term overflowed"));
        }
        let needs_factor = prop.as_ref().map(|p| p.dt() != dt).unwrap_or(true);
        if needs_factor {
            prop = Some(LinearPropagator::with_stiffness(
                u.grid_arc(),
                Arc::clone(&stiffness),
                dt,
                LinearStepConfig::backward_euler(),
            )?);
        }
        let next = prop.as_ref().expect("propagator set").step_with_forcing(&u, Some(&forcing));

        // Discrete ∂_t u contribution: ‖u⁺ − u‖²_{L²} / dt.
        let mut jump = 0.0;
        for i in 0..weights.len() {
            let diff = next.values[i] - u.values[i];
            jump += weights[i] * diff * diff;
        }
        dissipated += jump / dt;

        u = next;
        t += dt;
        step += 1;

        if u.ensure_finite().is_err() {
            // Should be unreachable under the dt rule; classify rather than panic.
            let last_ok = rec.checkpoints.last().expect("initial checkpoint").field.clone();
            u = last_ok;
            rec.record(t, &u, dt, dissipated)?;
            return Ok(finish(rec, params, cfg, threshold, Verdict::BlowUp, "state overflowed"));
        }

        let sup = u.sup_norm();
        if sup > cfg.blowup_sup_threshold {
            rec.record(t, &u, dt, dissipated)?;
            return Ok(finish(rec, params, cfg, threshold, Verdict::BlowUp,
                "sup norm crossed the blow-up threshold"));
        }

        let at_horizon = t >= cfg.t_horizon - 1e-14;
        if step % cfg.checkpoint_stride == 0 || at_horizon {
            let cp = rec.record(t, &u, dt, dissipated)?;
            let h1 = cp.h1_norm;
            if h1 < cfg.dissipation_rel_threshold * h1_init && tail_nonincreasing(&rec.checkpoints) {
                return Ok(finish(rec, params, cfg, threshold, Verdict::Dissipative,
                    "gradient norm fell below the dissipation threshold"));
            }
            if at_horizon {
                return Ok(finish(rec, params, cfg, threshold, Verdict::Undetermined,
                    "time horizon reached"));
            }
        }
    }
}

/// Ḣ¹ norm nonincreasing over the last (up to) 10 checkpoints.
fn tail_nonincreasing(cps: &[Checkpoint]) -> bool {
    let start = cps.len().saturating_sub(10);
    cps[start..].windows(2).all(|w| w[1].h1_norm <= w[0].h1_norm * (1.0 + 1e-12))
}

fn finish(
    rec: Recorder,
    params: &ModelParams,
    cfg: &EvolveConfig,
    threshold: f64,
    verdict: Verdict,
    reason: &str,
) -> Trajectory {
    Trajectory {
        params: *params,
        config: cfg.clone(),
        threshold,
        checkpoints: rec.checkpoints,
        verdict,
        halt_reason: String::from(reason),
    }
}

/// Max relative defect of the energy identity
/// E(t) + ∫_{t₀}^t ‖∂_t u‖² = E(t₀) over checkpoints, with t₀ the first
/// checkpoint after zero.
pub fn energy_identity_residual(traj: &Trajectory) -> Result<f64> {
    if traj.verdict == Verdict::BlowUp {
        return Err(Error::Domain("energy identity diagnostic needs a non-blow-up run"));
    }
    if traj.checkpoints.len() < 2 {
        return Err(Error::InsufficientCheckpoints { needed: 2, got: traj.checkpoints.len() });
    }
    let base = &traj.checkpoints[1];
    let scale = math::abs(base.e_gamma).max(1.0);
    let mut worst = 0.0f64;
    for cp in &traj.checkpoints[1..] {
        let defect = cp.e_gamma + (cp.dissipated - base.dissipated) - base.e_gamma;
        worst = worst.max(math::abs(defect) / scale);
    }
    Ok(worst)
}

/// True when the recorded energy is nonincreasing along the whole run
/// (slack 1e−8 relative to the initial energy scale).
pub fn energy_monotone(traj: &Trajectory) -> bool {
    let slack = 1e-8 * math::abs(traj.checkpoints[0].e_gamma).max(1.0);
    traj.checkpoints.windows(2).all(|w| w[1].e_gamma <= w[0].e_gamma + slack)
}

/// Rebuild u(t_check) from the integral form — linear propagation of the
/// data plus trapezoidal-in-τ quadrature of heat-propagated nonlinear
/// snapshots — and return the relative L² deviation from the stored state.
pub fn duhamel_residual(traj: &Trajectory, t_check: f64) -> Result<f64> {
    let idx = traj
        .checkpoints
        .iter()
        .position(|cp| (cp.t - t_check).abs() <= 1e-9 * t_check.max(1.0))
        .ok_or(Error::Domain("t_check is not a checkpoint time"))?;
    if idx < 8 {
        return Err(Error::InsufficientCheckpoints { needed: 8, got: idx });
    }
    let params = traj.params;
    let grid = traj.checkpoints[0].field.grid_arc();
    let cfg = LinearStepConfig::backward_euler();

    let mut linear = traj.checkpoints[0].field.clone();
    let mut integral = RadialField::zero(Arc::clone(&grid), linear.boundary);
    for j in 0..idx {
        let (a, b) = (&traj.checkpoints[j], &traj.checkpoints[j + 1]);
        let span = b.t - a.t;
        // Substep the interval at roughly the solver's own resolution.
        let dt_ref = if b.dt_used > 0.0 { b.dt_used } else { span };
        let m = ((span / dt_ref) as usize).clamp(1, 64);
        let dt = span / m as f64;
        let prop = LinearPropagator::new(Arc::clone(&grid), dt, cfg)?;

        let f_a = nonlinear_term(&a.field, &params)?;
        for i in 0..integral.values.len() {
            integral.values[i] += 0.5 * span * f_a.values[i];
        }
        for _ in 0..m {
            integral = prop.step_with_forcing(&integral, None);
            linear = prop.step_with_forcing(&linear, None);
        }
        let f_b = nonlinear_term(&b.field, &params)?;
        for i in 0..integral.values.len() {
            integral.values[i] += 0.5 * span * f_b.values[i];
        }
    }

    let stored = &traj.checkpoints[idx].field;
    let mut num = 0.0;
    let mut den = 0.0;
    let w = grid.cell_weights_plain.clone();
    for i in 0..stored.values.len() {
        let model = linear.values[i] + integral.values[i];
        let diff = model - stored.values[i];
        num += w[i] * diff * diff;
        den += w[i] * stored.values[i] * stored.values[i];
    }
    Ok(math::sqrt(num) / math::sqrt(den).max(1e-300))
}

/// Result of a fixed-point iteration for the integral form.
#[derive(Debug, Clone)]
pub struct PicardRun {
    /// v_{n_iters} evaluated at t_span.
    pub final_field: RadialField,
    /// Sup-norm distances ‖v_{k+1} − v_k‖_∞ over the time mesh.
    pub distances: Vec<f64>,
}

/// Iterate v_{n+1}(t) = e^{tΔ}u₀ + ∫₀^t e^{(t−τ)Δ} N(v_n(τ)) dτ on a fixed
/// fine time mesh, starting from v_1 = e^{tΔ}u₀; the Duhamel integral uses
/// trapezoidal quadrature composed with the discrete semigroup. Returns
/// every iterate evaluated at t_span plus the successive sup-norm
/// distances. Divergence (iterate sup norm doubling) signals exit from the
/// contraction regime.
fn picard_engine(
    u0: &RadialField,
    n_iters: usize,
    t_span: f64,
    params: &ModelParams,
    mesh_points: usize,
) -> Result<(Vec<RadialField>, Vec<f64>)> {
    if n_iters == 0 {
        return Err(Error::Domain("need at least one fixed-point iteration"));
    }
    if !(t_span > 0.0) {
        return Err(Error::Domain("time span must be positive"));
    }
    let m = mesh_points.max(8);
    let dt = t_span / m as f64;
    let grid = u0.grid_arc();
    let prop = LinearPropagator::new(Arc::clone(&grid), dt, LinearStepConfig::backward_euler())?;

    // Linear flow e^{t_j Δ} u0 on the mesh.
    let mut linear: Vec<RadialField> = Vec::with_capacity(m + 1);
    linear.push(u0.clone());
    for j in 0..m {
        let next = prop.step_with_forcing(&linear[j], None);
        linear.push(next);
    }

    let mut v: Vec<RadialField> = linear.clone();
    let sup_of = |fields: &[RadialField]| fields.iter().fold(0.0f64, |s, f| s.max(f.sup_norm()));
    let base_sup = sup_of(&v);
    let mut at_span = Vec::with_capacity(n_iters);
    at_span.push(v[m].clone());
    let mut distances = Vec::new();

    for _ in 1..n_iters {
        let mut forcings: Vec<RadialField> = Vec::with_capacity(m + 1);
        for f in &v {
            forcings.push(nonlinear_term(f, params)?);
        }
        let mut next: Vec<RadialField> = Vec::with_capacity(m + 1);
        let mut acc = RadialField::zero(Arc::clone(&grid), u0.boundary);
        next.push(linear[0].clone());
        for j in 0..m {
            for i in 0..acc.values.len() {
                acc.values[i] += 0.5 * dt * forcings[j].values[i];
            }
            acc = prop.step_with_forcing(&acc, None);
            for i in 0..acc.values.len() {
                acc.values[i] += 0.5 * dt * forcings[j + 1].values[i];
            }
            let mut vj = linear[j + 1].clone();
            for i in 0..vj.values.len() {
                vj.values[i] += acc.values[i];
            }
            next.push(vj);
        }
        let mut dist = 0.0f64;
        for (a, b) in next.iter().zip(&v) {
            for i in 0..a.values.len() {
                dist = dist.max(math::abs(a.values[i] - b.values[i]));
            }
        }
        distances.push(dist);
        let new_sup = sup_of(&next);
        if new_sup > 2.0 * sup_of(&v).max(base_sup) + 1e-300 {
            return Err(Error::ContractionLost);
        }
        v = next;
        at_span.push(v[m].clone());
    }

    Ok((at_span, distances))
}

/// Fixed-point solution estimate at t_span after `n_iters` iterations.
pub fn picard_iterate(
    u0: &RadialField,
    n_iters: usize,
    t_span: f64,
    params: &ModelParams,
    mesh_points: usize,
) -> Result<PicardRun> {
    let (mut iterates, distances) = picard_engine(u0, n_iters, t_span, params, mesh_points)?;
    Ok(PicardRun { final_field: iterates.pop().expect("at least one iterate"), distances })
}

/// All fixed-point iterates v_1, …, v_n evaluated at t_span.
pub fn picard_iterates(
    u0: &RadialField,
    n_iters: usize,
    t_span: f64,
    params: &ModelParams,
    mesh_points: usize,
) -> Result<Vec<RadialField>> {
    picard_engine(u0, n_iters, t_span, params, mesh_points).map(|(fields, _)| fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Boundary;
    use crate::grid::RadialGrid;

    fn p3g1() -> ModelParams {
        ModelParams::new(3, 1.0, Sign::Focusing).unwrap()
    }

    fn grid(n: usize, r_max: f64, s: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::graded(&p3g1(), n, r_max, s).unwrap())
    }

    #[test]
    fn nonlinear_term_examples() {
        let g = grid(64, 5.0, 1.0);
        let zero = RadialField::zero(Arc::clone(&g), Boundary::DirichletAtRmax);
        let n = nonlinear_term(&zero, &p3g1()).unwrap();
        assert!(n.values.iter().all(|v| *v == 0.0));

        // u ≡ 1, γ = 1, focusing: the term is r^{-1} pointwise; on a grid
        // with a node at r = 2 that sample is 0.5.
        let g = Arc::new(RadialGrid::uniform(&p3g1(), 64, 8.0).unwrap());
        let one = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |_| 1.0);
        let n = nonlinear_term(&one, &p3g1()).unwrap();
        for (i, &r) in g.nodes.iter().enumerate() {
            assert!((n.values[i] - 1.0 / r).abs() < 1e-14);
        }
        let idx = g.nodes.iter().position(|&r| (r - 2.0).abs() < 1e-12).unwrap();
        assert!((n.values[idx] - 0.5).abs() < 1e-14);

        let absorbing = ModelParams::new(3, 1.0, Sign::Absorbing).unwrap();
        let na = nonlinear_term(&one, &absorbing).unwrap();
        assert!((na.values[idx] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_data_is_dissipative_immediately() {
        let g = grid(64, 10.0, 1.0);
        let zero = RadialField::zero(g, Boundary::DirichletAtRmax);
        let traj = simulate(&zero, &p3g1(), &EvolveConfig::default()).unwrap();
        assert_eq!(traj.verdict, Verdict::Dissipative);
        assert_eq!(traj.checkpoints.len(), 1);
    }

    #[test]
    fn absorbing_step_below_heat_step_for_nonnegative_data() {
        let params = ModelParams::new(3, 1.0, Sign::Absorbing).unwrap();
        let g = Arc::new(RadialGrid::graded(&params, 256, 10.0, 2.0).unwrap());
        let mut u = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            2.0 * libm::exp(-r * r)
        });
        let last = u.values.len() - 1;
        u.values[last] = 0.0;
        let dt = 1e-3;
        let stepped = imex_step(&u, dt, &params).unwrap();
        let heat =
            crate::propagator::heat_step(&u, dt, &LinearStepConfig::backward_euler()).unwrap();
        for i in 0..u.values.len() {
            assert!(stepped.values[i] >= -1e-15, "absorption broke positivity");
            assert!(stepped.values[i] <= heat.values[i] + 1e-15, "absorption added mass");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = EvolveConfig::default();
        cfg.dt_min = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = EvolveConfig::default();
        cfg.dt_init = cfg.dt_max * 2.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn picard_zero_data_stays_zero() {
        let g = grid(64, 5.0, 1.0);
        let zero = RadialField::zero(g, Boundary::DirichletAtRmax);
        let run = picard_iterate(&zero, 4, 0.01, &p3g1(), 16).unwrap();
        assert!(run.final_field.values.iter().all(|v| *v == 0.0));
        assert!(run.distances.iter().all(|d| *d == 0.0));
    }
}
