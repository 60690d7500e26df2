// Scratch: criterion-pinned configurations.
use hslab_core::functionals::{
    elliptic_residual, ground_state, kinetic_norm_sq, mountain_pass_energy,
};
use hslab_core::propagator::{LinearPropagator, LinearStepConfig};
use hslab_core::{Boundary, ModelParams, RadialField, RadialGrid, Sign};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let params = ModelParams::new(3, 1.0, Sign::Focusing).unwrap();

    // Criterion 1: ground-state quantities at n=4096, rmax=200, grading 2.
    let t0 = Instant::now();
    let g = Arc::new(RadialGrid::graded(&params, 4096, 200.0, 2.0).unwrap());
    let w = ground_state(&params, &g).unwrap();
    let k = kinetic_norm_sq(&w);
    let p = w.quadrature(4.0, true).unwrap();
    let e = mountain_pass_energy(&params, &g).unwrap();
    let k_exact = 8.0 * std::f64::consts::PI / 3.0;
    println!(
        "criterion1: K={k:.6} (err {:.2e}), E={e:.6} (err {:.2e}), |J|/K={:.2e}, wall={:.2?}",
        (k - k_exact).abs() / k_exact,
        (e - k_exact / 4.0).abs() / (k_exact / 4.0),
        (k - p).abs() / k,
        t0.elapsed()
    );

    // Criterion 2: elliptic residual order across n.
    let mut lns = Vec::new();
    let mut lres = Vec::new();
    for n in [512usize, 1024, 2048, 4096] {
        let g = Arc::new(RadialGrid::graded(&params, n, 200.0, 2.0).unwrap());
        let w = ground_state(&params, &g).unwrap();
        let r = elliptic_residual(&w, &params).unwrap();
        println!("  elliptic n={n}: residual {r:.4e}");
        lns.push((n as f64).ln());
        lres.push(r.ln());
    }
    let n_ = lns.len() as f64;
    let mx = lns.iter().sum::<f64>() / n_;
    let my = lres.iter().sum::<f64>() / n_;
    let slope = lns
        .iter()
        .zip(&lres)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / lns.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    println!("criterion2: order = {:.3}", -slope);

    // Criterion 3 benchmark: n=2048, rmax=40, dt=1e-4, t=1.
    let t0 = Instant::now();
    let g = Arc::new(RadialGrid::graded(&params, 2048, 40.0, 2.0).unwrap());
    let mut u = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
        (-r * r).exp()
    });
    let prop = LinearPropagator::new(Arc::clone(&g), 1e-4, LinearStepConfig::backward_euler()).unwrap();
    for _ in 0..10000 {
        u = prop.step_with_forcing(&u, None);
    }
    let mut worst = 0.0f64;
    for (i, &r) in g.nodes.iter().enumerate() {
        worst = worst.max((u.values[i] - libm::pow(5.0, -1.5) * (-r * r / 5.0).exp()).abs());
    }
    println!("criterion3: gaussian max err {worst:.3e}, center {:.6}, wall={:.2?}", u.values[0], t0.elapsed());

    // convergence factor: halve dt and h.
    let run = |n: usize, dt: f64| {
        let g = Arc::new(RadialGrid::graded(&params, n, 40.0, 2.0).unwrap());
        let mut u = RadialField::from_fn(Arc::clone(&g), Boundary::DirichletAtRmax, |r| {
            (-r * r).exp()
        });
        let prop = LinearPropagator::new(Arc::clone(&g), dt, LinearStepConfig::backward_euler()).unwrap();
        let steps = (1.0 / dt) as usize;
        for _ in 0..steps {
            u = prop.step_with_forcing(&u, None);
        }
        let mut worst = 0.0f64;
        for (i, &r) in g.nodes.iter().enumerate() {
            worst = worst.max((u.values[i] - libm::pow(5.0, -1.5) * (-r * r / 5.0).exp()).abs());
        }
        worst
    };
    let c = run(512, 2e-3);
    let f = run(1024, 1e-3);
    println!("heat refinement: coarse {c:.3e} fine {f:.3e} ratio {:.3}", f / c);
}
