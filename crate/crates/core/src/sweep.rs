//! Amplitude sweeps over the mollified-extremal family: per-row membership
//! classification, simulated verdict, and their agreement.

use alloc::string::String;
use alloc::sync::Arc;

use crate::error::Result;
use crate::evolve::{simulate, EvolveConfig, Verdict};
use crate::functionals::{evaluate_functionals, mollified_ground_state, mountain_pass_energy, Membership};
use crate::grid::RadialGrid;
use crate::params::{ModelParams, Sign};

/// Whether the membership-predicted outcome matched the simulated one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Agreement {
    Agree,
    Disagree,
    /// The dichotomy makes no prediction (energy at or above the threshold).
    NotApplicable,
}

/// Outcome the dichotomy predicts for a membership class, if any.
pub fn predicted_verdict(membership: Membership) -> Option<Verdict> {
    match membership {
        Membership::MPlus | Membership::Zero => Some(Verdict::Dissipative),
        Membership::MMinus => Some(Verdict::BlowUp),
        Membership::AboveThreshold => None,
    }
}

/// One row of a dichotomy sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub amplitude: f64,
    pub energy: f64,
    pub nehari: f64,
    pub membership: Membership,
    pub verdict: Verdict,
    pub halt_reason: String,
    pub halt_time: f64,
    pub agreement: Agreement,
}

/// Classify and evolve one amplitude of the mollified-extremal family.
/// Membership is recomputed on the actual discrete data (mollification
/// shifts the functionals), never taken from the exact ray polynomials.
pub fn run_sweep_row(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
    cfg: &EvolveConfig,
    amplitude: f64,
    mollify_radius: f64,
) -> Result<SweepRow> {
    let u0 = mollified_ground_state(params, grid, amplitude, mollify_radius)?;
    let focusing = ModelParams { sign: Sign::Focusing, ..*params };
    let threshold = mountain_pass_energy(&focusing, grid)?;
    let report = evaluate_functionals(&u0, params, threshold)?;
    let traj = simulate(&u0, params, cfg)?;
    let agreement = match predicted_verdict(report.membership) {
        None => Agreement::NotApplicable,
        Some(predicted) if predicted == traj.verdict => Agreement::Agree,
        Some(_) => Agreement::Disagree,
    };
    Ok(SweepRow {
        amplitude,
        energy: report.energy,
        nehari: report.nehari,
        membership: report.membership,
        verdict: traj.verdict,
        halt_reason: traj.halt_reason.clone(),
        halt_time: traj.last().t,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_row_agrees_trivially() {
        let params = ModelParams::new(3, 1.0, Sign::Focusing).unwrap();
        let grid = Arc::new(RadialGrid::uniform(&params, 128, 40.0).unwrap());
        let cfg = EvolveConfig { t_horizon: 5.0, ..EvolveConfig::default() };
        let row = run_sweep_row(&params, &grid, &cfg, 0.0, 32.0).unwrap();
        assert_eq!(row.membership, Membership::Zero);
        assert_eq!(row.verdict, Verdict::Dissipative);
        assert_eq!(row.agreement, Agreement::Agree);
    }
}
