//! Equilibrium densities from branch boundary values.
//!
//! Boundary values are taken by Richardson extrapolation in the offset
//! `eps` (three geometric levels), which stays robust near branch points
//! where root-selection heuristics on the cut would have to disambiguate
//! nearly colliding roots.

use super::{AlgebraicCurve, CurveKind};
use crate::hp::{integrate_adaptive, Bound, PrecisionContext};
use crate::{CoreError, Result};
use num_complex::Complex64;

/// Density value with support/clipping flags.
#[derive(Debug, Clone, Copy)]
pub struct DensityValue {
    pub value: f64,
    /// False when the point lies outside the component's support (the value
    /// is then ~0 and reported as 0).
    pub in_support: bool,
    pub clipped: bool,
}

impl DensityValue {
    fn zero_outside() -> Self {
        DensityValue {
            value: 0.0,
            in_support: false,
            clipped: false,
        }
    }
}

pub(crate) const EPS_LEVELS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Two-stage Richardson extrapolation of `a(eps)` sampled at the three
/// geometric levels (ratio 10), assuming an analytic expansion in eps.
pub(crate) fn richardson3(a: [f64; 3]) -> f64 {
    let r1 = (10.0 * a[1] - a[0]) / 9.0;
    let r2 = (10.0 * a[2] - a[1]) / 9.0;
    (100.0 * r2 - r1) / 99.0
}

/// `lambda_1'(x) = (1/pi) Im H_{0,+}(x)` via upper-half-plane limits (for
/// pollaczek_psi, `(1/pi) |Im H_0| = (2/pi) |log |psi_0||`).
pub fn density_lambda1(curve: &AlgebraicCurve, x: f64) -> Result<DensityValue> {
    let mut vals = [0.0f64; 3];
    for (k, &eps) in EPS_LEVELS.iter().enumerate() {
        let z = Complex64::new(x, eps);
        let b = curve.branch_values(z)?;
        vals[k] = match curve.kind() {
            CurveKind::PollaczekPsi => -2.0 * b.h[0].norm().ln(),
            _ => b.h[0].im,
        };
    }
    let lim = richardson3(vals) / std::f64::consts::PI;
    let value = match curve.kind() {
        CurveKind::PollaczekPsi => lim.abs(),
        _ => lim,
    };
    if value <= 1e-9 {
        return Ok(DensityValue::zero_outside());
    }
    Ok(DensityValue {
        value,
        in_support: true,
        clipped: false,
    })
}

/// Constrained-component density.
///
/// * bessel: `lambda_2'(x) = sigma'(x) - (1/pi) Im H_{1,+}(x)`, `x < 0`.
/// * pollaczek_psi: `x` parametrizes the imaginary axis by imaginary part;
///   `lambda_2'(x) = -1 + (1/pi) lim Re H_1(ix - eps)` with the continued
///   argument of `psi_1`. On the saturated segment this equals the
///   constraint density exactly.
pub fn density_lambda2<F>(curve: &AlgebraicCurve, sigma_density: F, x: f64) -> Result<DensityValue>
where
    F: Fn(f64) -> f64,
{
    match curve.kind() {
        CurveKind::Bessel => {
            if x >= 0.0 {
                return Ok(DensityValue::zero_outside());
            }
            let mut vals = [0.0f64; 3];
            for (k, &eps) in EPS_LEVELS.iter().enumerate() {
                let z = Complex64::new(x, eps);
                let b = curve.branch_values(z)?;
                vals[k] = b.h[1].im;
            }
            let sigma = sigma_density(x);
            let raw = sigma - richardson3(vals) / std::f64::consts::PI;
            Ok(clip_to_constraint(raw, sigma))
        }
        CurveKind::PollaczekPsi => {
            let mut vals = [0.0f64; 3];
            for (k, &eps) in EPS_LEVELS.iter().enumerate() {
                let z = Complex64::new(-eps, x);
                let b = curve.branch_values(z)?;
                // Re H_1 = 2 * (continued arg of psi_1)
                vals[k] = 2.0 * b.unwrapped_arg[1];
            }
            let sigma = sigma_density(x);
            let raw = -1.0 + richardson3(vals) / std::f64::consts::PI;
            Ok(clip_to_constraint(raw, sigma))
        }
        _ => Err(CoreError::InvalidInput(
            "constrained density extraction is defined for the bessel and pollaczek curves".into(),
        )),
    }
}

fn clip_to_constraint(raw: f64, sigma: f64) -> DensityValue {
    let clipped = raw < -1e-8 || raw > sigma + 1e-8;
    let value = raw.clamp(0.0, sigma.max(0.0));
    DensityValue {
        value,
        in_support: value > 1e-12,
        clipped,
    }
}

/// The rational uniformization of the pollaczek curve:
/// `zeta = -i psi (psi + 1) / ((psi^2 + 1)(psi - 1))`. Generates exact
/// `(zeta, psi)` incidence pairs for testing branch evaluation.
pub fn pollaczek_uniformization(psi: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for pole in [one, i, -i] {
        if (psi - pole).norm() < 1e-12 * (1.0 + psi.norm()) {
            return Err(CoreError::Domain(format!(
                "uniformization pole at psi = {pole}"
            )));
        }
    }
    Ok(-i * psi * (psi + one) / ((psi * psi + one) * (psi - one)))
}

/// Integrate a density over `[lo, hi]`, keeping a safety margin `delta`
/// from each endpoint (branch points are not evaluable closer than the
/// degeneracy radius) and adding power-law tail estimates fitted at the
/// margins.
pub(crate) fn integrate_density<F>(f: F, lo: f64, hi: f64, splits: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let delta = 1e-5;
    let ctx = PrecisionContext::with_tols(64, 1e-8, 1e-8)?;
    let mut pieces = vec![lo + delta];
    for &s in splits {
        if s > lo + delta && s < hi - delta {
            pieces.push(s);
        }
    }
    pieces.push(hi - delta);

    let mut total = 0.0;
    for w in pieces.windows(2) {
        let q = integrate_adaptive(
            |x: &rug::Float| {
                let v = f(x.to_f64()).unwrap_or(f64::NAN);
                rug::Float::with_val(x.prec(), v)
            },
            Bound::Finite(w[0]),
            Bound::Finite(w[1]),
            &ctx,
        )?;
        total += q.value.to_f64();
    }

    // Edge tails: fit rho ~ C (dist)^(-alpha) from values at delta and
    // 2 delta, integrate the fit over the skipped margin.
    for &(edge, sign) in &[(lo, 1.0), (hi, -1.0)] {
        let x1 = edge + sign * delta;
        let x2 = edge + sign * 2.0 * delta;
        let r1 = f(x1)?;
        let r2 = f(x2)?;
        if r1 > 0.0 && r2 > 0.0 {
            let alpha = (r1 / r2).ln() / std::f64::consts::LN_2;
            let alpha = alpha.clamp(-2.0, 0.9);
            total += r1 * delta / (1.0 - alpha);
        }
    }
    Ok(total)
}

impl AlgebraicCurve {
    /// Total mass of the first component by quadrature of its density over
    /// the support.
    pub fn lambda1_mass(&self) -> Result<f64> {
        let (lo, hi) = self.lambda1_support()?;
        let splits: &[f64] = match self.kind() {
            // Interior log singularity at the origin for the line curves.
            CurveKind::PollaczekPsi | CurveKind::Pastur => &[0.0],
            _ => &[],
        };
        integrate_density(|x| Ok(self.density_lambda1(x)?.value), lo, hi, splits)
    }

    /// Mass of the constrained component over `[-t_max, 0]` (bessel) with a
    /// fitted algebraic tail estimate for the rest, or over the imaginary
    /// window for pollaczek.
    pub fn lambda2_mass(&self, t_max: f64) -> Result<f64> {
        match self.kind() {
            CurveKind::Bessel => {
                let sigma = |x: f64| x.abs().sqrt() / std::f64::consts::PI;
                let body = integrate_density(
                    |x| Ok(self.density_lambda2(sigma, x)?.value),
                    -t_max,
                    0.0,
                    &[],
                )?;
                // rho ~ C |x|^{-3/2} for x -> -inf; tail = 2 C / sqrt(t_max).
                let rho_edge = self.density_lambda2(sigma, -t_max)?.value;
                let tail = 2.0 * rho_edge * t_max;
                Ok(body + tail)
            }
            CurveKind::PollaczekPsi => {
                let body = integrate_density(
                    |y| Ok(self.density_lambda2(|_| 1.0, y)?.value),
                    -t_max,
                    t_max,
                    &[0.0],
                )?;
                let rho_edge = self.density_lambda2(|_| 1.0, t_max)?.value;
                // rho ~ C y^{-2} on the axis; one-sided tail = C / t_max.
                Ok(body + 2.0 * rho_edge * t_max)
            }
            _ => Err(CoreError::InvalidInput(
                "constrained mass is defined for the bessel and pollaczek curves".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{builtin_curve, CurveParams};

    #[test]
    fn uniformization_values() {
        // psi = 2 -> -6i/5; psi = -1 -> 0; psi large -> ~0.
        let z = pollaczek_uniformization(Complex64::new(2.0, 0.0)).unwrap();
        assert!((z - Complex64::new(0.0, -1.2)).norm() < 1e-15);
        let z = pollaczek_uniformization(Complex64::new(-1.0, 0.0)).unwrap();
        assert!(z.norm() < 1e-15);
        let z = pollaczek_uniformization(Complex64::new(1e6, 0.0)).unwrap();
        assert!(z.norm() <= 2e-6);
        assert!(pollaczek_uniformization(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn uniformization_round_trip() {
        // The cubic at zeta = r(psi) has psi among its roots.
        use rand::{Rng, SeedableRng};
        let c = builtin_curve(CurveKind::PollaczekPsi, CurveParams::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut tested = 0;
        while tested < 1000 {
            let psi = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let zeta = match pollaczek_uniformization(psi) {
                Ok(z) => z,
                Err(_) => continue,
            };
            if zeta.norm() < 1e-3 {
                continue; // coefficient singularity
            }
            let (p2, p1, p0) = c.coefficients(zeta);
            let res = (((psi + p2) * psi + p1) * psi + p0).norm();
            let scale = (1.0 + psi.norm()).powi(3) * (1.0 + p2.norm() + p1.norm() + p0.norm());
            assert!(res < 1e-10 * scale, "residual {res} at psi {psi}");
            tested += 1;
        }
    }

    #[test]
    fn pollaczek_known_incidence() {
        // zeta = -6i/5 carries psi = 2 on some branch.
        let c = builtin_curve(CurveKind::PollaczekPsi, CurveParams::default()).unwrap();
        let b = c.branch_values(Complex64::new(0.0, -1.2)).unwrap();
        let hit = b
            .h
            .iter()
            .any(|p| (p - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        assert!(hit, "psi = 2 missing from {:?}", b.h);
    }

    #[test]
    fn bessel_density_vanishes_past_edge() {
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        let d = c.density_lambda1(13.6).unwrap();
        assert!(!d.in_support);
        assert_eq!(d.value, 0.0);
        let d = c.density_lambda1(5.0).unwrap();
        assert!(d.in_support && d.value > 0.0);
    }

    #[test]
    fn boundary_value_extrapolation_cauchy() {
        // eps-sequence must contract with ratio <= 0.2 at interior points.
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        for &x in &[2.0, 5.0, 9.0] {
            let mut v = [0.0f64; 3];
            for (k, &eps) in EPS_LEVELS.iter().enumerate() {
                v[k] = c
                    .branch_values(Complex64::new(x, eps))
                    .unwrap()
                    .h[0]
                    .im;
            }
            let d1 = (v[1] - v[0]).abs();
            let d2 = (v[2] - v[1]).abs();
            assert!(d2 <= 0.2 * d1 + 1e-12, "no contraction at {x}: {d1} {d2}");
        }
    }
}
