// Scratch measurement harness, part 2 (not part of the deliverable).
use std::sync::Arc;
use std::time::Instant;

use hslab_core::diagnostics::{
    kato_norm, nehari_cutoff_identity_residual, small_data_threshold_probe, KatoConfig,
};
use hslab_core::dirichlet::{ball_mountain_pass, comparison_check, BallDomain};
use hslab_core::evolve::{
    duhamel_residual, energy_identity_residual, imex_step, simulate, EvolveConfig,
};
use hslab_core::functionals::{ground_state, mollified_ground_state, mountain_pass_energy};
use hslab_core::propagator::{verify_decay_rate, DecayProbe, LinearStepConfig};
use hslab_core::{Boundary, ModelParams, RadialField, RadialGrid, Sign};

fn main() {
    let params = ModelParams::new(3, 1.0, Sign::Focusing).unwrap();
    let absorbing = ModelParams::new(3, 1.0, Sign::Absorbing).unwrap();

    // --- imex single-step stationarity residual order ---
    for n in [512usize, 1024, 2048] {
        let g = Arc::new(RadialGrid::graded(&params, n, 100.0, 2.0).unwrap());
        let w = ground_state(&params, &g).unwrap();
        let dt = 1e-6;
        let stepped = imex_step(&w, dt, &params).unwrap();
        let mut res = 0.0f64;
        for (i, &r) in g.nodes.iter().enumerate() {
            if r >= 0.5 && r <= 90.0 {
                res = res.max((stepped.values[i] - w.values[i]).abs());
            }
        }
        println!("imex stationarity n={n} (r in [0.5, 90]): |u+ - W|_inf/dt = {:.4e}", res / dt);
    }

    // --- decay slopes ---
    let cfg = LinearStepConfig::backward_euler();
    let t0 = Instant::now();
    let g1 = Arc::new(RadialGrid::graded(&params, 1024, 100.0, 2.0).unwrap());
    let s1 = verify_decay_rate(&params, &g1, &cfg, &DecayProbe::new(1.0, f64::INFINITY)).unwrap();
    let g2 = Arc::new(RadialGrid::graded(&params, 1024, 200.0, 2.0).unwrap());
    let s2 = verify_decay_rate(&params, &g2, &cfg, &DecayProbe::new(2.0, 2.0)).unwrap();
    let s3 = verify_decay_rate(&params, &g2, &cfg, &DecayProbe::weighted(&params)).unwrap();
    println!("slopes: L1->Linf {s1:.4} (-1.5), L2->L2 {s2:.4} (0), weighted {s3:.4} (-0.5), wall={:.2?}", t0.elapsed());

    // --- energy identity residual + refinement halving (small smooth run) ---
    let run_resid = |n: usize, dt: f64| {
        let g = Arc::new(RadialGrid::uniform(&params, n, 20.0).unwrap());
        let u0 = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            0.5 * (-r * r).exp()
        });
        let cfg = EvolveConfig::fixed_dt(dt, 2.0, 4);
        let traj = simulate(&u0, &params, &cfg).unwrap();
        energy_identity_residual(&traj).unwrap()
    };
    let r_coarse = run_resid(512, 0.02);
    let r_dt = run_resid(512, 0.01);
    let r_n = run_resid(1024, 0.02);
    let r_fine = run_resid(1024, 0.01);
    println!("energy identity: coarse {r_coarse:.4e}, dt-half {r_dt:.4e}, n-double {r_n:.4e}, both {r_fine:.4e}, ratio {:.3}", r_fine / r_coarse);

    // --- duhamel residuals ---
    let g = Arc::new(RadialGrid::uniform(&params, 512, 20.0).unwrap());
    let tiny = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
        1e-3 * (-r * r).exp()
    });
    let cfg_fs = EvolveConfig::fixed_dt(0.5 / 128.0, 0.5, 8);
    let traj = simulate(&tiny, &params, &cfg_fs).unwrap();
    let d1 = duhamel_residual(&traj, 0.5).unwrap();
    let moderate = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
        0.8 * (-r * r).exp()
    });
    let cfg_m = EvolveConfig::fixed_dt(0.5 / 256.0, 0.5, 16);
    let traj_m = simulate(&moderate, &params, &cfg_m).unwrap();
    let d2 = duhamel_residual(&traj_m, 0.5).unwrap();
    let cfg_m2 = EvolveConfig::fixed_dt(0.5 / 512.0, 0.5, 16);
    let traj_m2 = simulate(&moderate, &params, &cfg_m2).unwrap();
    let d3 = duhamel_residual(&traj_m2, 0.5).unwrap();
    println!("duhamel: tiny {d1:.3e}; moderate {d2:.3e} -> refined {d3:.3e}");

    // --- threshold probes ---
    let t0 = Instant::now();
    let g300 = Arc::new(RadialGrid::uniform(&params, 1024, 300.0).unwrap());
    let shape = mollified_ground_state(&params, &g300, 1.0, 240.0).unwrap();
    let kato = KatoConfig::new(&params, 9.0, 0.0).unwrap();
    let cfg_probe = EvolveConfig { t_horizon: 2.0e5, checkpoint_stride: 400, ..EvolveConfig::default() };
    let probe = small_data_threshold_probe(&shape, &params, &cfg_probe, &kato, 0.5, 1.6, 6).unwrap();
    println!("W-family flip: {:?} bracket {:?} kato_ok {:?} wall={:.2?}", probe.flip_amplitude, probe.bracket, probe.small_data_kato_ok, t0.elapsed());

    let t0 = Instant::now();
    let g100 = Arc::new(RadialGrid::uniform(&params, 1024, 100.0).unwrap());
    let gauss = RadialField::from_fn(Arc::clone(&g100), Boundary::DirichletAtRmax, |r| (-r * r).exp());
    let cfg_g = EvolveConfig { t_horizon: 4.0e4, checkpoint_stride: 200, ..EvolveConfig::default() };
    let pg = small_data_threshold_probe(&gauss, &params, &cfg_g, &kato, 0.3, 3.0, 6).unwrap();
    let g100b = Arc::new(RadialGrid::uniform(&params, 2048, 100.0).unwrap());
    let gauss_b = RadialField::from_fn(Arc::clone(&g100b), Boundary::DirichletAtRmax, |r| (-r * r).exp());
    let pg2 = small_data_threshold_probe(&gauss_b, &params, &cfg_g, &kato, 0.3, 3.0, 6).unwrap();
    println!("gaussian flip: {:?} vs refined {:?} wall={:.2?}", pg.flip_amplitude, pg2.flip_amplitude, t0.elapsed());

    // --- comparison principle ---
    let t0 = Instant::now();
    let (gs, gb) = RadialGrid::nested_uniform(&params, 512, 5.0, 10.0).unwrap();
    let (gs, gb) = (Arc::new(gs), Arc::new(gb));
    let big = RadialField::from_fn(Arc::clone(&gb), Boundary::DirichletAtRmax, |r| {
        0.8 * (-r * r / 4.0).exp() * if r < 10.0 { 1.0 } else { 0.0 }
    });
    let small = RadialField::from_fn(Arc::clone(&gs), Boundary::DirichletAtRmax, |r| {
        let chi = hslab_core::diagnostics::cutoff_profile(r, 2.0);
        0.8 * (-r * r / 4.0).exp() * chi
    });
    let mut small = small;
    let ns = small.values.len();
    small.values[ns - 1] = 0.0;
    let cfg_c = EvolveConfig { t_horizon: 1.0, ..EvolveConfig::default() };
    let rep = comparison_check(&small, &big, &params, &cfg_c).unwrap();
    println!("comparison: excess {:.3e} at t={:.3} steps={} wall={:.2?}", rep.max_excess, rep.time_of_max, rep.steps, t0.elapsed());

    // --- ball mountain pass ---
    let t0 = Instant::now();
    for (n, radius) in [(2048usize, 20.0f64), (2048, 100.0), (4096, 100.0)] {
        let dom = BallDomain::new(&params, n, radius, 2.0).unwrap();
        let val = ball_mountain_pass(&params, &dom, &[1.0, 2.0, 5.0, 10.0, 20.0]).unwrap();
        let exact = 2.0 * std::f64::consts::PI / 3.0;
        println!("ball mp n={n} R={radius}: {val:.5} rel err {:+.3}% ", 100.0 * (val / exact - 1.0));
    }
    println!("ball mp wall={:.2?}", t0.elapsed());

    // --- kato scaling invariance + stride stability ---
    let g = Arc::new(RadialGrid::graded(&params, 1024, 200.0, 2.0).unwrap());
    let data = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
        1e-4 * (-r * r).exp()
    });
    let mk_cfg = |horizon: f64, stride: usize| {
        let mut c = EvolveConfig::fixed_dt(horizon / 2000.0, horizon, stride);
        c.checkpoint_stride = stride;
        c
    };
    let base = simulate(&data, &params, &mk_cfg(2.0, 8)).unwrap();
    let kato_base = kato_norm(&base, &kato).unwrap();
    let lambda: f64 = 2.0;
    let scaled_data = data.scale(lambda).unwrap();
    let scaled = simulate(&scaled_data, &params, &mk_cfg(2.0 / (lambda * lambda), 8)).unwrap();
    let kato_scaled = kato_norm(&scaled, &kato).unwrap();
    let half_stride = simulate(&data, &params, &mk_cfg(2.0, 4)).unwrap();
    let kato_half = kato_norm(&half_stride, &kato).unwrap();
    println!(
        "kato: base {kato_base:.5e}, scaled {kato_scaled:.5e} (ratio {:.4}), stride-halved ratio {:.4}",
        kato_scaled / kato_base,
        kato_half / kato_base
    );

    // --- nehari cutoff identity ---
    let w = ground_state(&params, &Arc::new(RadialGrid::graded(&params, 1024, 100.0, 2.0).unwrap())).unwrap();
    let cfg_st = EvolveConfig { t_horizon: 0.02, checkpoint_stride: 20, dt_max: 1e-3, ..EvolveConfig::default() };
    let traj_w = simulate(&w, &params, &cfg_st).unwrap();
    let res_w = nehari_cutoff_identity_residual(&traj_w, 25.0).unwrap();
    let lin_res = |n: usize, dt: f64, stride: usize| {
        let g = Arc::new(RadialGrid::uniform(&params, n, 20.0).unwrap());
        let u0 = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            0.1 * (-r * r).exp()
        });
        let cfg = EvolveConfig::fixed_dt(dt, 1.0, stride);
        let traj = simulate(&u0, &params, &cfg).unwrap();
        nehari_cutoff_identity_residual(&traj, 5.0).unwrap()
    };
    let nc = lin_res(256, 0.01, 4);
    let nf = lin_res(512, 0.005, 4);
    println!("nehari cutoff: stationary {res_w:.3e}; small-data {nc:.3e} -> refined {nf:.3e} ratio {:.3}", nf / nc);

    // --- absorbing criterion-7 runs ---
    let t0 = Instant::now();
    let g10 = Arc::new(RadialGrid::uniform(&absorbing, 1024, 12.0).unwrap());
    let gauss20 = RadialField::from_fn(Arc::clone(&g10), Boundary::DirichletAtRmax, |r| {
        20.0 * (-r * r).exp()
    });
    let cfg_a = EvolveConfig { t_horizon: 100.0, checkpoint_stride: 50, ..EvolveConfig::default() };
    let ta = simulate(&gauss20, &absorbing, &cfg_a).unwrap();
    let wmoll = mollified_ground_state(&params, &g10, 5.0, 9.6).unwrap();
    let tb = simulate(&wmoll, &absorbing, &cfg_a).unwrap();
    println!(
        "absorbing: gauss20 {:?} h1 {:.3e}/{:.3e} at t={:.1}; wmoll5 {:?} h1 {:.3e}/{:.3e} at t={:.1} wall={:.2?}",
        ta.verdict, ta.last().h1_norm, ta.initial().h1_norm, ta.last().t,
        tb.verdict, tb.last().h1_norm, tb.initial().h1_norm, tb.last().t,
        t0.elapsed()
    );
    let lhs_check = mountain_pass_energy(&params, &g300).unwrap();
    println!("threshold echo: {lhs_check:.5}");
}
