// Scratch measurement harness (not part of the deliverable test suite).
use std::sync::Arc;
use std::time::Instant;

use hslab_core::diagnostics::{concavity_certificate, exterior_timescale, CutoffConfig};
use hslab_core::evolve::{picard_iterate, simulate, EvolveConfig};
use hslab_core::functionals::{
    evaluate_functionals, ground_state, kinetic_norm_sq, mollified_ground_state,
    mountain_pass_energy,
};
use hslab_core::{Boundary, ModelParams, RadialField, RadialGrid, Sign};

fn main() {
    let params = ModelParams::new(3, 1.0, Sign::Focusing).unwrap();

    // --- sweep family on the production grid ---
    let grid = Arc::new(RadialGrid::uniform(&params, 1024, 300.0).unwrap());
    let threshold = mountain_pass_energy(&params, &grid).unwrap();
    println!("threshold l (n=1024, rmax=300 uniform) = {threshold:.6}");
    let cfg = EvolveConfig {
        t_horizon: 2.0e5,
        checkpoint_stride: 400,
        ..EvolveConfig::default()
    };
    for amp in [0.3, 0.8, 1.1, 1.2, 1.5] {
        let t0 = Instant::now();
        let u0 = mollified_ground_state(&params, &grid, amp, 0.8 * 300.0).unwrap();
        let rep = evaluate_functionals(&u0, &params, threshold).unwrap();
        let traj = simulate(&u0, &params, &cfg).unwrap();
        println!(
            "amp={amp:<4} E={:+.4} (l{:+.4}) J={:+.4} member={:?} verdict={:?} t_halt={:.3} cps={} wall={:.2?} reason={}",
            rep.energy,
            rep.energy - threshold,
            rep.nehari,
            rep.membership,
            traj.verdict,
            traj.last().t,
            traj.checkpoints.len(),
            t0.elapsed(),
            traj.halt_reason,
        );
    }

    // --- stationarity drift over t in [0,1] ---
    for (n, rmax) in [(512usize, 100.0f64), (1024, 100.0)] {
        let g = Arc::new(RadialGrid::graded(&params, n, rmax, 2.0).unwrap());
        let w = ground_state(&params, &g).unwrap();
        let cfg = EvolveConfig {
            t_horizon: 1.0,
            checkpoint_stride: 100000,
            dt_max: 0.05,
            ..EvolveConfig::default()
        };
        let t0 = Instant::now();
        let traj = simulate(&w, &params, &cfg).unwrap();
        let last = traj.last();
        let mut drift = 0.0f64;
        for i in 0..w.values.len() {
            drift = drift.max((last.field.values[i] - w.values[i]).abs());
        }
        println!(
            "stationarity n={n} rmax={rmax}: drift={drift:.3e} t={:.2} steps~{} wall={:.2?}",
            last.t,
            traj.checkpoints.len(),
            t0.elapsed()
        );
    }

    // --- picard cross-check, amplitude 0.1 gaussian ---
    let g = Arc::new(RadialGrid::uniform(&params, 512, 10.0).unwrap());
    let u0 = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
        0.1 * (-r * r).exp()
    });
    let m = 64usize;
    let run = picard_iterate(&u0, 6, 0.01, &params, m).unwrap();
    let cfg = EvolveConfig::fixed_dt(0.01 / m as f64, 0.01, 8);
    let traj = simulate(&u0, &params, &cfg).unwrap();
    let mut dev = 0.0f64;
    for i in 0..u0.values.len() {
        dev = dev.max((run.final_field.values[i] - traj.last().field.values[i]).abs());
    }
    println!("picard vs imex sup dev = {dev:.3e}; distances = {:?}", run.distances);

    // --- concavity on the 1.2 blow-up run ---
    let grid80 = Arc::new(RadialGrid::uniform(&params, 1024, 300.0).unwrap());
    let u12 = mollified_ground_state(&params, &grid80, 1.2, 240.0).unwrap();
    let rep = evaluate_functionals(&u12, &params, threshold).unwrap();
    let cfgb = EvolveConfig { t_horizon: 100.0, checkpoint_stride: 2, ..EvolveConfig::default() };
    let traj = simulate(&u12, &params, &cfgb).unwrap();
    println!(
        "blowup run: verdict={:?} t_halt={:.4} cps={} E0={:+.4}",
        traj.verdict,
        traj.last().t,
        traj.checkpoints.len(),
        rep.energy
    );
    for radius in [10.0, 20.0, 40.0] {
        let tr = exterior_timescale(&u12, radius).unwrap();
        match CutoffConfig::with_proof_constant(&params, &u12, rep.energy, threshold, radius, 0.05, 0.05)
            .and_then(|c| concavity_certificate(&traj, &c, (0.0, f64::INFINITY)).map(|r| (c, r)))
        {
            Ok((c, r)) => println!(
                "R={radius}: T_R={tr:.2} A={:.3e} frac={:.3} min_margin={:+.3e} n={}",
                c.a_const, r.fraction_holding, r.min_margin, r.checkpoints_in_window
            ),
            Err(e) => println!("R={radius}: T_R={tr:.2} error {e}"),
        }
    }
}
