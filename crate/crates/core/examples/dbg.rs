use equilib_core::curves::{builtin_curve, CurveKind, CurveParams};
use equilib_core::measures::GridMeasure;

fn main() {
    let c = builtin_curve(CurveKind::PollaczekPsi, CurveParams::default()).unwrap();
    let e1sq = (11.0 + 5.0 * 5f64.sqrt()) / 8.0;
    let e2sq = (5.0 * 5f64.sqrt() - 11.0) / 8.0;
    println!("e1^2 = {e1sq}, e2^2 = {e2sq}");

    // half-line lambda1 on [0, e1^2]
    let n1 = 1200;
    let mut edges1 = vec![];
    for i in 0..=n1 { edges1.push(e1sq * (i as f64 / n1 as f64)); }
    let g1 = GridMeasure::from_edges(&edges1).unwrap();
    let m1: Vec<f64> = (0..n1).map(|i| {
        let (a, b) = g1.cell_bounds(i);
        let x = (0.5*(a+b)).clamp(5e-6, e1sq - 5e-6);
        c.halfline_lambda1_density(x).unwrap().value * (b - a)
    }).collect();
    let lam1 = g1.with_masses(m1).unwrap();
    println!("lam1 mass = {}", lam1.total_mass());

    // half-line lambda2 on [-T, 0], graded
    let n2 = 2500;
    let t_max = 2000.0f64;
    let mut edges2 = vec![];
    for i in 0..=n2 { let t = i as f64 / n2 as f64; edges2.push(-t_max * t.powi(3)); }
    edges2.reverse();
    let g2 = GridMeasure::from_edges(&edges2).unwrap();
    let m2: Vec<f64> = (0..n2).map(|i| {
        let (a, b) = g2.cell_bounds(i);
        let x = (0.5*(a+b)).min(-5e-6);
        c.halfline_lambda2_density(x).unwrap().value * (b - a)
    }).collect();
    let lam2 = g2.with_masses(m2).unwrap();
    println!("lam2 mass = {}  (saturated near 0 should have density 1/sqrt|x|)", lam2.total_mass());

    let phi = |x: f64| std::f64::consts::PI * x.sqrt();
    for x in [0.2, 0.7, 1.2, 1.8, 2.4, 2.7] {
        let w1 = 2.0 * lam1.log_potential(x) - lam2.log_potential(x) + phi(x);
        println!("W1({x}) = {w1:.4}");
    }
    for x in [-0.05_f64, -0.5, -2.0, -10.0, -50.0, -300.0] {
        let w2 = 2.0 * lam2.log_potential(x) - lam1.log_potential(x);
        println!("W2({x}) = {w2:.4}");
    }
    // saturation check: density equals 1/sqrt|x| on [-e2^2, 0]
    for x in [-0.005_f64, -0.01, -0.02] {
        let d = c.halfline_lambda2_density(x).unwrap().value;
        println!("lambda2'({x}) = {d:.6} vs 1/sqrt|x| = {:.6}", 1.0/(-x as f64).sqrt());
    }
}
