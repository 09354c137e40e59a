//! Complex cubic solver and a small dense complex root finder.
//!
//! Every curve evaluation upstream reduces to a monic cubic
//! `H^3 + c2 H^2 + c1 H + c0 = 0`; branch-point location additionally needs
//! all roots of low-degree discriminant polynomials.

use num_complex::Complex64;

/// Roots of a monic cubic with multiplicities (clustered roots are merged).
#[derive(Debug, Clone)]
pub struct CubicRoots {
    /// The three roots with multiplicity (root, mult); multiplicities sum
    /// to 3.
    pub roots: Vec<(Complex64, u8)>,
}

impl CubicRoots {
    /// The three roots flattened with multiplicity.
    pub fn all(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(3);
        for &(r, m) in &self.roots {
            for _ in 0..m {
                v.push(r);
            }
        }
        v
    }
}

fn cbrt_principal(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let r = z.norm().cbrt();
    let th = z.arg() / 3.0;
    Complex64::from_polar(r, th)
}

/// All roots of the monic cubic `H^3 + c2 H^2 + c1 H + c0`.
///
/// Cardano with the cancellation-safe cube-root choice, then two Newton
/// sweeps on the original cubic. Total function: every input yields three
/// roots (with multiplicity).
pub fn solve_cubic(c2: Complex64, c1: Complex64, c0: Complex64) -> CubicRoots {
    let one_third = 1.0 / 3.0;
    let shift = c2 * one_third;
    // Depressed cubic t^3 + p t + q, H = t - c2/3.
    let p = c1 - c2 * c2 * one_third;
    let q = c0 - c2 * c1 * one_third + c2 * c2 * c2 * (2.0 / 27.0);

    let scale = 1.0 + c2.norm() + c1.norm() + c0.norm();
    let mut roots: [Complex64; 3];
    if p.norm() < 1e-14 * scale && q.norm() < 1e-21 * scale {
        let t = Complex64::new(0.0, 0.0);
        roots = [t - shift, t - shift, t - shift];
    } else {
        let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
        // Pick the sign that avoids cancellation in -q/2 -/+ disc.
        let u3a = -q * 0.5 + disc;
        let u3b = -q * 0.5 - disc;
        let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };
        let u = cbrt_principal(u3);
        let omega = Complex64::new(-0.5, 0.75f64.sqrt());
        let mut ts = [Complex64::new(0.0, 0.0); 3];
        for (k, t) in ts.iter_mut().enumerate() {
            let uk = u * omega.powu(k as u32);
            let vk = if uk.norm() > 0.0 {
                -p / (uk * 3.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            *t = uk + vk;
        }
        roots = [ts[0] - shift, ts[1] - shift, ts[2] - shift];
    }

    // Cardano loses digits when two roots nearly collide. Converge the
    // best-conditioned root by Newton, deflate to a quadratic, and solve
    // that exactly; the near-double pair then comes out with full accuracy.
    let f = |r: Complex64| ((r + c2) * r + c1) * r + c0;
    let df = |r: Complex64| (r * 3.0 + c2 * 2.0) * r + c1;
    let mut anchor = roots[0];
    let mut best = f64::NEG_INFINITY;
    for &r in &roots {
        let d = df(r).norm();
        if d > best {
            best = d;
            anchor = r;
        }
    }
    for _ in 0..60 {
        let fv = f(anchor);
        let dv = df(anchor);
        if dv.norm() < 1e-300 {
            break;
        }
        let step = fv / dv;
        anchor -= step;
        if step.norm() <= 1e-17 * (1.0 + anchor.norm()) {
            break;
        }
    }
    // Synthetic deflation: H^3 + c2 H^2 + c1 H + c0 = (H - r)(H^2 + bH + c).
    let b = c2 + anchor;
    let c = c1 + anchor * b;
    let sq = (b * b - 4.0 * c).sqrt();
    // Sign choice avoiding cancellation in -b -/+ sq.
    let sq = if (b.conj() * sq).re > 0.0 { -sq } else { sq };
    let q1 = (-b + sq) * 0.5;
    let r1 = q1;
    let r2 = if q1.norm() > 1e-300 { c / q1 } else { -b - q1 };
    roots = [anchor, r1, r2];

    // Final Newton sweeps to absorb deflation noise; keep steps only while
    // they shrink the residual.
    for r in roots.iter_mut().skip(1) {
        for _ in 0..8 {
            let fv = f(*r);
            let dv = df(*r);
            if dv.norm() < 1e-300 {
                break;
            }
            let step = fv / dv;
            let next = *r - step;
            if f(next).norm() < fv.norm() {
                *r = next;
            } else {
                break;
            }
            if step.norm() <= 1e-17 * (1.0 + r.norm()) {
                break;
            }
        }
    }

    // Cluster for multiplicities.
    let tol = 1e-6 * (1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max));
    let mut merged: Vec<(Complex64, u8)> = Vec::new();
    for &r in &roots {
        if let Some(entry) = merged.iter_mut().find(|(c, _)| (*c - r).norm() < tol) {
            let m = entry.1 as f64;
            entry.0 = (entry.0 * m + r) / (m + 1.0);
            entry.1 += 1;
        } else {
            merged.push((r, 1));
        }
    }
    CubicRoots { roots: merged }
}

/// All complex roots of a dense polynomial (coefficients lowest first),
/// by the Durand-Kerner simultaneous iteration. Intended for the small
/// discriminant polynomials (degree <= 12).
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().map(|z| z.norm() < 1e-300).unwrap_or(false) {
        c.pop();
    }
    // Strip trailing zero roots (coefficients c0 = c1 = ... = 0).
    let mut zero_roots = 0usize;
    while c.first().map(|z| z.norm() == 0.0).unwrap_or(false) {
        c.remove(0);
        zero_roots += 1;
    }
    let n = c.len().saturating_sub(1);
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    if n == 0 {
        return roots;
    }
    let lead = *c.last().unwrap();
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for cc in monic.iter().rev() {
            acc = acc * z + cc;
        }
        acc
    };
    // Cauchy bound for the initial circle.
    let bound = 1.0
        + monic[..n]
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            Complex64::from_polar(0.7 * bound, th) + Complex64::new(0.01, 0.007)
        })
        .collect();
    for _ in 0..600 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= zs[i] - zs[j];
                }
            }
            if denom.norm() == 0.0 {
                zs[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = eval(zs[i]) / denom;
            zs[i] -= step;
            worst = worst.max(step.norm());
        }
        if worst < 1e-14 * bound {
            break;
        }
    }
    roots.extend(zs);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(c2: Complex64, c1: Complex64, c0: Complex64, r: Complex64) -> f64 {
        (((r + c2) * r + c1) * r + c0).norm()
    }

    #[test]
    fn bessel_tail_cubic() {
        // H^3 - 2H^2 + H = 0 -> {0, 1, 1}
        let r = solve_cubic(
            Complex64::new(-2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let mut mults: Vec<(f64, u8)> = r
            .roots
            .iter()
            .map(|&(z, m)| (z.re, m))
            .collect();
        mults.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(mults.len(), 2);
        assert!(mults[0].0.abs() < 1e-10 && mults[0].1 == 1);
        assert!((mults[1].0 - 1.0).abs() < 1e-7 && mults[1].1 == 2);
    }

    #[test]
    fn pastur_origin_cubic() {
        // z = 0, a = 1: H^3 + (2 - 1) H = H^3 + H -> {0, i, -i}
        let r = solve_cubic(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let all = r.all();
        for want in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ] {
            assert!(
                all.iter().any(|z| (z - want).norm() < 1e-12),
                "missing {want}"
            );
        }
    }

    #[test]
    fn vieta_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let c2 = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let c1 = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let c0 = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let roots = solve_cubic(c2, c1, c0).all();
            let sum: Complex64 = roots.iter().sum();
            let prod: Complex64 = roots.iter().product();
            let scale = 1.0 + c2.norm() + c0.norm();
            assert!((sum + c2).norm() < 1e-12 * scale, "sum {sum} c2 {c2}");
            assert!((prod + c0).norm() < 1e-12 * scale, "prod {prod} c0 {c0}");
            for r in &roots {
                assert!(
                    residual(c2, c1, c0, *r) < 1e-12 * (1.0 + r.norm()).powi(3),
                    "residual too big"
                );
            }
        }
    }

    #[test]
    fn durand_kerner_quartic() {
        // z^4 - 1
        let roots = complex_roots(&[
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        assert_eq!(roots.len(), 4);
        for want in [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ] {
            assert!(roots.iter().any(|z| (z - want).norm() < 1e-10));
        }
    }
}
