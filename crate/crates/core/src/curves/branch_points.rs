//! Branch points via the cleared discriminant.
//!
//! With monic-cubic coefficients `p_j = n_j / d` (common polynomial
//! denominator `d` per curve), the discriminant
//!
//! ```text
//! D = 18 p2 p1 p0 - 4 p2^3 p0 + p2^2 p1^2 - 4 p1^3 - 27 p0^2
//! ```
//!
//! times `d^4` is a polynomial in `z`:
//!
//! ```text
//! D d^4 = 18 n2 n1 n0 d - 4 n2^3 n0 + n2^2 n1^2 - 4 n1^3 d - 27 n0^2 d^2.
//! ```
//!
//! Its roots are the branch points (double roots of the cubic) together
//! with, possibly, coefficient singularities absorbed by the clearing.

use super::AlgebraicCurve;
use crate::hp::{complex_roots, solve_cubic, Polynomial};
use crate::{CoreError, Result};
use num_complex::Complex64;

/// Branch points of a curve plus the cleared discriminant they came from.
#[derive(Debug, Clone)]
pub struct BranchPointSet {
    /// Deduplicated branch points.
    pub points: Vec<Complex64>,
    /// Cleared discriminant, normalized to a monic real polynomial.
    pub discriminant: Polynomial,
    /// Raw cleared discriminant coefficients (lowest first) before
    /// normalization; kept for residual checks.
    pub raw_coeffs: Vec<Complex64>,
}

impl BranchPointSet {
    /// `|D_cleared(z)| / scale` with `scale = sum |c_k z^k|`.
    pub fn residual_at(&self, z: Complex64) -> f64 {
        let mut val = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &self.raw_coeffs {
            val += c * zp;
            scale += c.norm() * zp.norm();
            zp *= z;
        }
        if scale == 0.0 {
            return 0.0;
        }
        val.norm() / scale
    }
}

type CPoly = Vec<Complex64>;

fn padd(a: &CPoly, b: &CPoly) -> CPoly {
    let n = a.len().max(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn pmul(a: &CPoly, b: &CPoly) -> CPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pscale(a: &CPoly, s: f64) -> CPoly {
    a.iter().map(|c| c * s).collect()
}

/// Numerator polynomials `(n2, n1, n0)` and the common denominator `d` of
/// the cubic coefficients, lowest-degree first.
fn coefficient_numerators(curve: &AlgebraicCurve) -> ([CPoly; 3], CPoly) {
    let re = |x: f64| Complex64::new(x, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let zero = Complex64::new(0.0, 0.0);
    let a = curve.params().a;
    let b = curve.params().b;
    match curve.kind() {
        super::CurveKind::Bessel => (
            [
                vec![zero, re(-2.0)], // -2z
                vec![zero, re(1.0)],  // z
                vec![re(-2.0)],       // -2
            ],
            vec![zero, re(1.0)], // d = z
        ),
        super::CurveKind::Pastur => (
            [
                vec![zero, re(-1.0)],     // -z
                vec![re(2.0 - a * a)],    // 2 - a^2
                vec![zero, re(a * a)],    // a^2 z
            ],
            vec![re(1.0)],
        ),
        super::CurveKind::QuarticSource => (
            [
                vec![zero, re(-b), zero, re(-1.0)], // -(z^3 + b z)
                vec![zero, zero, re(1.0)],          // z^2
                vec![zero, zero, zero, re(a * a)],  // a^2 z^3
            ],
            vec![re(1.0)],
        ),
        super::CurveKind::PollaczekPsi => (
            [
                vec![i, re(-1.0)], // i - z
                vec![i, re(1.0)],  // i + z
                vec![zero, re(-1.0)], // -z   (p0 = -1 = -z / z)
            ],
            vec![zero, re(1.0)], // d = z
        ),
    }
}

/// Cleared discriminant `D * d^4` as a dense complex polynomial.
pub(crate) fn cleared_discriminant(curve: &AlgebraicCurve) -> CPoly {
    let ([n2, n1, n0], d) = coefficient_numerators(curve);
    let t1 = pscale(&pmul(&pmul(&pmul(&n2, &n1), &n0), &d), 18.0);
    let t2 = pscale(&pmul(&pmul(&pmul(&n2, &n2), &n2), &n0), -4.0);
    let t3 = pmul(&pmul(&n2, &n2), &pmul(&n1, &n1));
    let t4 = pscale(&pmul(&pmul(&pmul(&n1, &n1), &n1), &d), -4.0);
    let t5 = pscale(&pmul(&pmul(&n0, &n0), &pmul(&d, &d)), -27.0);
    let mut out = padd(&padd(&t1, &t2), &padd(&t3, &padd(&t4, &t5)));
    while out.last().map(|c| c.norm() < 1e-14).unwrap_or(false) {
        out.pop();
    }
    out
}

pub(crate) fn compute_branch_points(curve: &AlgebraicCurve) -> Result<BranchPointSet> {
    let raw = cleared_discriminant(curve);
    if raw.len() < 2 {
        return Err(CoreError::Consistency(
            "cleared discriminant degenerated to a constant".into(),
        ));
    }
    let roots = complex_roots(&raw);

    // Deduplicate (multiple discriminant roots collapse to one point).
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let mut points: Vec<Complex64> = Vec::new();
    for r in roots {
        if !points.iter().any(|p| (p - r).norm() < 1e-6 * scale) {
            points.push(r);
        }
    }
    // Snap tiny components so axis-symmetric spectra print cleanly.
    for p in points.iter_mut() {
        if p.re.abs() < 1e-9 * scale {
            p.re = 0.0;
        }
        if p.im.abs() < 1e-9 * scale {
            p.im = 0.0;
        }
    }
    points.sort_by(|a, b| {
        (b.re, b.im)
            .partial_cmp(&(a.re, a.im))
            .unwrap()
            .reverse()
    });

    // Double-root test on the cubic wherever the coefficients are regular.
    let singulars = curve.singular_points();
    for p in &points {
        if singulars.iter().any(|s| (p - s).norm() < 1e-9 * scale) {
            continue;
        }
        let (c2, c1, c0) = curve.coefficients(*p);
        let rts = solve_cubic(c2, c1, c0).all();
        let min_sep = (rts[0] - rts[1])
            .norm()
            .min((rts[0] - rts[2]).norm())
            .min((rts[1] - rts[2]).norm());
        let rscale = 1.0 + rts.iter().map(|r| r.norm()).fold(0.0, f64::max);
        if min_sep > 1e-4 * rscale {
            return Err(CoreError::Consistency(format!(
                "discriminant root {p} fails the double-root test (separation {min_sep:e})"
            )));
        }
    }

    // Normalize to a monic real polynomial; the built-in discriminants are
    // real up to one complex constant.
    let lead = *raw.last().unwrap();
    let mut real_coeffs = Vec::with_capacity(raw.len());
    for c in &raw {
        let n = c / lead;
        if n.im.abs() > 1e-9 * (1.0 + n.norm()) {
            return Err(CoreError::Consistency(format!(
                "cleared discriminant not proportional to a real polynomial \
                 (coefficient {n})"
            )));
        }
        real_coeffs.push(n.re);
    }
    let discriminant = Polynomial::from_f64(64, &real_coeffs);

    Ok(BranchPointSet {
        points,
        discriminant,
        raw_coeffs: raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{builtin_curve, CurveKind, CurveParams};

    #[test]
    fn bessel_branch_points() {
        // Cleared discriminant 8z^3 - 108z^2 = 4z^2(2z - 27):
        // branch points z = 27/2 and z = 0 (deduplicated).
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        let bps = c.branch_points().unwrap();
        assert_eq!(bps.points.len(), 2);
        let mut re: Vec<f64> = bps.points.iter().map(|p| p.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(re[0].abs() < 1e-7, "z=0 missing: {re:?}");
        assert!((re[1] - 13.5).abs() < 1e-9, "z=27/2 missing: {re:?}");
    }

    #[test]
    fn pollaczek_discriminant_matches_quartic() {
        // D * z^4 proportional to 16 z^4 - 44 z^2 - 1.
        let c = builtin_curve(CurveKind::PollaczekPsi, CurveParams::default()).unwrap();
        let raw = cleared_discriminant(&c);
        assert_eq!(raw.len(), 5);
        let want = [-1.0, 0.0, -44.0, 0.0, 16.0];
        let factor = raw[4] / want[4];
        for (k, w) in want.iter().enumerate() {
            let diff = (raw[k] - factor * w).norm();
            assert!(diff < 1e-10 * factor.norm().max(1.0), "coeff {k}: {diff}");
        }
    }

    #[test]
    fn pollaczek_branch_points_match_radicals() {
        // zeta^2 = (11 +/- 5 sqrt 5)/8: two real points +/- e1 and two
        // imaginary +/- e2.
        let c = builtin_curve(CurveKind::PollaczekPsi, CurveParams::default()).unwrap();
        let bps = c.branch_points().unwrap();
        assert_eq!(bps.points.len(), 4);
        let e1 = ((11.0 + 5.0 * 5f64.sqrt()) / 8.0).sqrt();
        let e2 = ((5.0 * 5f64.sqrt() - 11.0) / 8.0).sqrt();
        for want in [
            Complex64::new(e1, 0.0),
            Complex64::new(-e1, 0.0),
            Complex64::new(0.0, e2),
            Complex64::new(0.0, -e2),
        ] {
            let found = bps
                .points
                .iter()
                .any(|p| (p - want).norm() < 1e-9);
            assert!(found, "missing branch point {want}; got {:?}", bps.points);
        }
        for p in &bps.points {
            assert!(bps.residual_at(*p) < 1e-10);
        }
    }

    #[test]
    fn pastur_branch_points_symmetric() {
        let c = builtin_curve(CurveKind::Pastur, CurveParams { a: 1.0, b: 0.0 }).unwrap();
        let bps = c.branch_points().unwrap();
        assert_eq!(bps.points.len(), 4);
        // Symmetric under z -> -z.
        for p in &bps.points {
            assert!(
                bps.points.iter().any(|q| (q + p).norm() < 1e-8),
                "not symmetric: {:?}",
                bps.points
            );
        }
        // Real pair at z^2 = (11 + 5 sqrt5)/2.
        let want = ((11.0 + 5.0 * 5f64.sqrt()) / 2.0).sqrt();
        assert!(bps
            .points
            .iter()
            .any(|p| p.im == 0.0 && (p.re - want).abs() < 1e-8));
    }
}
