//! Bounded-ball Dirichlet dynamics: the dichotomy on a ball, the pointwise
//! comparison principle across nested domains, and its fixed-point
//! (iterate-by-iterate) refinement.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::evolve::{self, EvolveConfig, Trajectory, Verdict};
use crate::field::{Boundary, RadialField};
use crate::functionals::{ray_mountain_pass_value, GroundStateSpec};
use crate::grid::RadialGrid;
use crate::math;
use crate::params::ModelParams;
use crate::propagator::LinearPropagator;

/// Ball B_radius centered at the origin (which it always contains), carrying
/// its own grid truncated exactly at the boundary.
#[derive(Debug, Clone)]
pub struct BallDomain {
    pub radius: f64,
    pub grid: Arc<RadialGrid>,
}

impl BallDomain {
    pub fn new(params: &ModelParams, n: usize, radius: f64, grading: f64) -> Result<Self> {
        let grid = Arc::new(RadialGrid::graded(params, n, radius, grading)?);
        Ok(Self { radius, grid })
    }

    pub fn from_grid(grid: Arc<RadialGrid>) -> Self {
        Self { radius: grid.r_max, grid }
    }
}

/// Evolve homogeneous-Dirichlet data on the ball. The data must vanish at
/// the boundary node exactly; the step keeps it exactly zero thereafter.
pub fn dirichlet_simulate(
    u0: &RadialField,
    dom: &BallDomain,
    params: &ModelParams,
    cfg: &EvolveConfig,
) -> Result<Trajectory> {
    if !Arc::ptr_eq(&u0.grid_arc(), &dom.grid) && u0.grid().r_max != dom.radius {
        return Err(Error::GridMismatch);
    }
    if u0.boundary != Boundary::DirichletAtRmax {
        return Err(Error::BoundaryData);
    }
    let last = u0.values.len() - 1;
    if u0.values[last] != 0.0 {
        return Err(Error::BoundaryData);
    }
    evolve::simulate(u0, params, cfg)
}

/// Report of a co-evolved comparison pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComparisonReport {
    /// max over time and shared nodes of (|u_small| − u_big)₊.
    pub max_excess: f64,
    pub time_of_max: f64,
    pub radii: (f64, f64),
    pub verdict_small: Verdict,
    pub verdict_big: Verdict,
    pub steps: usize,
}

/// Co-evolve ordered nonnegative data on nested balls with synchronized
/// time steps and report the worst pointwise ordering violation.
///
/// Hypotheses checked at t = 0: the grids are node-aligned on the inner
/// ball, the outer datum is nonnegative, and |u_small| ≤ u_big there. The
/// discrete scheme then preserves the ordering exactly (inverse-positive
/// implicit solve, monotone source), so the reported excess is solver
/// roundoff.
pub fn comparison_check(
    u0_small: &RadialField,
    u0_big: &RadialField,
    params: &ModelParams,
    cfg: &EvolveConfig,
) -> Result<ComparisonReport> {
    cfg.validate()?;
    if !params.is_focusing() {
        return Err(Error::Domain("the comparison source term must be nonnegative (focusing)"));
    }
    let gs = u0_small.grid();
    let gb = u0_big.grid();
    if !gs.is_prefix_of(gb) {
        return Err(Error::GridMismatch);
    }
    let n_small = gs.len();
    if u0_big.values.iter().any(|v| *v < 0.0) {
        return Err(Error::HypothesisViolated("outer data must be nonnegative"));
    }
    for i in 0..n_small {
        if math::abs(u0_small.values[i]) > u0_big.values[i] + 1e-12 {
            return Err(Error::HypothesisViolated("|inner data| must not exceed outer data"));
        }
    }
    if *u0_small.values.last().expect("nonempty") != 0.0 {
        return Err(Error::BoundaryData);
    }

    let op_small = crate::evolve::NonlinearOp::new(gs, params);
    let op_big = crate::evolve::NonlinearOp::new(gb, params);
    let mut f_small = alloc::vec![0.0; gs.len()];
    let mut f_big = alloc::vec![0.0; gb.len()];

    let mut small = u0_small.clone();
    let mut big = u0_big.clone();
    let mut t = 0.0;
    let mut max_excess = 0.0f64;
    let mut time_of_max = 0.0;
    let mut steps = 0usize;
    let mut verdict_small = Verdict::Undetermined;
    let mut verdict_big = Verdict::Undetermined;
    let mut prop_small: Option<LinearPropagator> = None;
    let mut prop_big: Option<LinearPropagator> = None;

    while t < cfg.t_horizon {
        let rate = op_small.rate(&small.values).max(op_big.rate(&big.values));
        let mut dt = if rate > 0.0 { cfg.stability_safety / rate } else { cfg.dt_max };
        if dt < cfg.dt_min {
            verdict_big = Verdict::BlowUp;
            break;
        }
        dt = dt.min(cfg.dt_max).min(cfg.t_horizon - t);

        let refresh = prop_small.as_ref().map(|p| p.dt() != dt).unwrap_or(true);
        if refresh {
            prop_small = Some(LinearPropagator::new(
                small.grid_arc(),
                dt,
                crate::propagator::LinearStepConfig::backward_euler(),
            )?);
            prop_big = Some(LinearPropagator::new(
                big.grid_arc(),
                dt,
                crate::propagator::LinearStepConfig::backward_euler(),
            )?);
        }
        if !op_small.eval_into(&small.values, &mut f_small)
            || !op_big.eval_into(&big.values, &mut f_big)
        {
            verdict_big = Verdict::BlowUp;
            break;
        }
        small = prop_small.as_ref().expect("set").step_with_forcing(&small, Some(&f_small));
        big = prop_big.as_ref().expect("set").step_with_forcing(&big, Some(&f_big));
        t += dt;
        steps += 1;

        for i in 0..n_small {
            let excess = math::abs(small.values[i]) - big.values[i];
            if excess > max_excess {
                max_excess = excess;
                time_of_max = t;
            }
        }
        if big.sup_norm() > cfg.blowup_sup_threshold {
            verdict_big = Verdict::BlowUp;
            if small.sup_norm() > cfg.blowup_sup_threshold {
                verdict_small = Verdict::BlowUp;
            }
            break;
        }
    }
    Ok(ComparisonReport {
        max_excess: max_excess.max(0.0),
        time_of_max,
        radii: (gs.r_max, gb.r_max),
        verdict_small,
        verdict_big,
        steps,
    })
}

/// The fixed-point iterates v_1, …, v_n of the integral form at `t_span`,
/// for the induction step of the comparison argument: for ordered
/// nonnegative data on nested balls every iterate pair stays ordered.
pub fn picard_comparison_sequence(
    u0: &RadialField,
    dom: &BallDomain,
    n: usize,
    t_span: f64,
    params: &ModelParams,
    mesh_points: usize,
) -> Result<Vec<RadialField>> {
    if u0.grid().r_max != dom.radius {
        return Err(Error::GridMismatch);
    }
    evolve::picard_iterates(u0, n, t_span, params, mesh_points)
}

/// Discrete mountain-pass level of the ball: minimum over concentration
/// scales of the ray mountain-pass value of the shifted-truncated extremal
/// bubble (W_μ − W_μ(radius))₊, an honest upper bound that approaches the
/// whole-space level as the bubble concentrates.
pub fn ball_mountain_pass(params: &ModelParams, dom: &BallDomain, scales: &[f64]) -> Result<f64> {
    if scales.is_empty() {
        return Err(Error::Domain("need at least one concentration scale"));
    }
    let spec = GroundStateSpec::new(*params)?;
    let d = params.d as f64;
    let mut best = f64::INFINITY;
    for &mu in scales {
        if !(mu > 0.0) {
            return Err(Error::Domain("concentration scales must be positive"));
        }
        let amp = math::powf(mu, (d - 2.0) / 2.0);
        let shift = amp * spec.eval(mu * dom.radius);
        let bubble = RadialField::from_fn(Arc::clone(&dom.grid), Boundary::DirichletAtRmax, |r| {
            (amp * spec.eval(mu * r) - shift).max(0.0)
        });
        let value = ray_mountain_pass_value(&bubble, params)?;
        best = best.min(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Sign;

    fn p3g1() -> ModelParams {
        ModelParams::new(3, 1.0, Sign::Focusing).unwrap()
    }

    #[test]
    fn dirichlet_rejects_nonzero_boundary_data() {
        let params = p3g1();
        let dom = BallDomain::new(&params, 64, 10.0, 1.0).unwrap();
        let bad = RadialField::from_fn(Arc::clone(&dom.grid), Boundary::DirichletAtRmax, |_| 1.0);
        assert!(matches!(
            dirichlet_simulate(&bad, &dom, &params, &EvolveConfig::default()),
            Err(Error::BoundaryData)
        ));
    }

    #[test]
    fn zero_data_dissipates_on_the_ball() {
        let params = p3g1();
        let dom = BallDomain::new(&params, 64, 10.0, 1.0).unwrap();
        let zero = RadialField::zero(Arc::clone(&dom.grid), Boundary::DirichletAtRmax);
        let traj = dirichlet_simulate(&zero, &dom, &params, &EvolveConfig::default()).unwrap();
        assert_eq!(traj.verdict, Verdict::Dissipative);
    }

    #[test]
    fn comparison_rejects_unordered_data() {
        let params = p3g1();
        let (gs, gb) = RadialGrid::nested_uniform(&params, 64, 5.0, 10.0).unwrap();
        let (gs, gb) = (Arc::new(gs), Arc::new(gb));
        let small = RadialField::from_fn(Arc::clone(&gs), Boundary::DirichletAtRmax, |r| {
            if r < 4.0 { 2.0 } else { 0.0 }
        });
        let big = RadialField::from_fn(Arc::clone(&gb), Boundary::DirichletAtRmax, |r| {
            if r < 4.0 { 1.0 } else { 0.0 }
        });
        assert!(matches!(
            comparison_check(&small, &big, &params, &EvolveConfig::default()),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
