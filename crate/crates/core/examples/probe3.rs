// Scratch: debug the fixed-dt energy-identity run.
use hslab_core::evolve::{energy_identity_residual, simulate, EvolveConfig};
use hslab_core::{Boundary, ModelParams, RadialField, RadialGrid, Sign};
use std::sync::Arc;

fn main() {
    let params = ModelParams::new(3, 1.0, Sign::Focusing).unwrap();
    for (n, dt) in [(512usize, 0.01f64), (512, 0.005), (512, 0.0025), (1024, 0.0025), (1024, 0.00125)] {
        let g = Arc::new(RadialGrid::uniform(&params, n, 20.0).unwrap());
        let u0 = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            0.5 * (-r * r).exp()
        });
        let cfg = EvolveConfig::fixed_dt(dt, 2.0, 4);
        let traj = simulate(&u0, &params, &cfg).unwrap();
        let res = energy_identity_residual(&traj);
        println!(
            "n={n} dt={dt}: verdict={:?} reason='{}' t_end={:.3} sup_end={:.3e} E: {:.5} -> {:.5} resid={:?}",
            traj.verdict,
            traj.halt_reason,
            traj.last().t,
            traj.last().sup_norm(),
            traj.initial().e_gamma,
            traj.last().e_gamma,
            res
        );

    }
}
