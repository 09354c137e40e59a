//! Branch labeling by homotopy continuation.
//!
//! Labels are pinned at a reference point of modulus 10^3 on the ray through
//! the query point, where the three roots sit within `O(|z|^{-1})` of their
//! asymptotic expansions and far apart from each other. The root triple is
//! then transported radially inward (or outward), re-matching after each
//! step by the minimum-cost permutation. Steps adapt so that no root moves
//! further than a fraction of the smallest pairwise separation, which keeps
//! the matching unambiguous; near-collisions (branch points on the path)
//! shrink the step and, below a floor, abort with a degeneracy error.
//!
//! For the pollaczek_psi curve the quantity of interest downstream is
//! `H = (2/i) log psi`, whose real part needs the *continued* argument of
//! psi, not the principal one; the walk therefore accumulates unwrapped
//! argument increments per branch.

use super::{AlgebraicCurve, CurveKind, DEGENERACY_RADIUS, REFERENCE_RADIUS};
use crate::hp::solve_cubic;
use crate::{CoreError, Result};
use num_complex::Complex64;

/// Labeled branch values at one point.
#[derive(Debug, Clone)]
pub struct BranchTriple {
    /// Branch values `[H0, H1, H2]` (psi values for pollaczek_psi).
    pub h: [Complex64; 3],
    /// Accumulated argument of each branch along the continuation path,
    /// starting from the principal argument at the reference point.
    pub unwrapped_arg: [f64; 3],
}

impl BranchTriple {
    /// `H_j = (2/i) log psi_j` with the continued argument:
    /// `Re H = 2 arg psi`, `Im H = -2 log |psi|`.
    pub fn log_branch(&self, j: usize) -> Complex64 {
        Complex64::new(2.0 * self.unwrapped_arg[j], -2.0 * self.h[j].norm().ln())
    }
}

fn roots_at(curve: &AlgebraicCurve, z: Complex64) -> [Complex64; 3] {
    let (p2, p1, p0) = curve.coefficients(z);
    let r = solve_cubic(p2, p1, p0).all();
    [r[0], r[1], r[2]]
}

fn min_pairwise(r: &[Complex64; 3]) -> f64 {
    let d01 = (r[0] - r[1]).norm();
    let d02 = (r[0] - r[2]).norm();
    let d12 = (r[1] - r[2]).norm();
    d01.min(d02).min(d12)
}

/// Permutation of `new` that minimizes total distance to `old`; returns the
/// permuted triple, the largest single movement, and the index map.
fn match_roots(old: &[Complex64; 3], new: &[Complex64; 3]) -> ([Complex64; 3], f64, [usize; 3]) {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best = f64::INFINITY;
    let mut best_perm = PERMS[0];
    for perm in PERMS {
        let cost: f64 = (0..3).map(|i| (old[i] - new[perm[i]]).norm()).sum();
        if cost < best {
            best = cost;
            best_perm = perm;
        }
    }
    let matched = [new[best_perm[0]], new[best_perm[1]], new[best_perm[2]]];
    let max_move = (0..3)
        .map(|i| (old[i] - matched[i]).norm())
        .fold(0.0, f64::max);
    (matched, max_move, best_perm)
}

/// Labeled branch values at `z`. See the module docs for the scheme.
pub fn branch_values(curve: &AlgebraicCurve, z: Complex64) -> Result<BranchTriple> {
    if curve.kind() == CurveKind::QuarticSource && curve.params().a == 0.0 {
        return Err(CoreError::Degeneracy { near: 0.0 });
    }
    for s in curve.singular_points() {
        if (z - s).norm() < DEGENERACY_RADIUS {
            return Err(CoreError::NearBranchPoint {
                point: format!("{s} (coefficient singularity)"),
                dist: (z - s).norm(),
            });
        }
    }
    if let Ok(bps) = curve.branch_points() {
        for p in &bps.points {
            let d = (z - p).norm();
            if d < DEGENERACY_RADIUS {
                return Err(CoreError::NearBranchPoint {
                    point: format!("{p}"),
                    dist: d,
                });
            }
        }
    }

    // Reference point on the same ray.
    let theta = z.arg();
    let dir = Complex64::from_polar(1.0, theta);
    let r_start = REFERENCE_RADIUS;
    let r_end = z.norm();
    let z_ref = dir * r_start;

    // Pin labels at the reference point against the asymptotic expansions.
    let raw = roots_at(curve, z_ref);
    let labels = curve.asymptotic_labels(z_ref);
    let (mut current, mismatch, _) = match_roots(&labels, &raw);
    let sep = min_pairwise(&labels);
    if mismatch > 0.25 * sep {
        return Err(CoreError::Consistency(format!(
            "asymptotic labels ambiguous at reference point {z_ref}: \
             mismatch {mismatch:e} vs separation {sep:e}"
        )));
    }
    let mut args = [current[0].arg(), current[1].arg(), current[2].arg()];

    if (r_end - r_start).abs() < 1e-300 {
        return Ok(BranchTriple {
            h: current,
            unwrapped_arg: args,
        });
    }

    // Walk log-radius from r_start to r_end adaptively.
    let l_start = r_start.ln();
    let l_end = r_end.ln();
    let mut t = 0.0f64; // fraction of the log-radius path covered
    let mut dt = 0.02f64;
    const DT_MIN: f64 = 1e-13;
    let mut steps = 0usize;
    while t < 1.0 {
        if steps > 2_000_000 {
            return Err(CoreError::Consistency(
                "continuation step budget exhausted".into(),
            ));
        }
        let t_next = (t + dt).min(1.0);
        let r = (l_start + (l_end - l_start) * t_next).exp();
        let z_next = dir * r;
        let raw = roots_at(curve, z_next);
        let (matched, max_move, _) = match_roots(&current, &raw);
        let sep = min_pairwise(&current);
        if max_move > 0.3 * sep && dt > DT_MIN {
            dt *= 0.5;
            continue;
        }
        if max_move > 0.45 * sep {
            // Even the minimal step moves roots across each other:
            // the path runs into a branch point.
            return Err(CoreError::NearBranchPoint {
                point: format!("{z_next} (path stall)"),
                dist: sep,
            });
        }
        for j in 0..3 {
            let dphi = (matched[j] / current[j]).arg();
            args[j] += dphi;
        }
        current = matched;
        t = t_next;
        steps += 1;
        if max_move < 0.05 * sep {
            dt = (dt * 1.6).min(0.05);
        }
    }

    Ok(BranchTriple {
        h: current,
        unwrapped_arg: args,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{builtin_curve, CurveParams};

    #[test]
    fn bessel_far_field_matches_expansion() {
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        let z = Complex64::new(1e3, 0.0);
        let b = c.branch_values(z).unwrap();
        assert!((b.h[0] - 2.0 / z).norm() < 1e-4);
        let s2 = 2f64.sqrt();
        assert!((b.h[1] - Complex64::new(1.0 - s2 / z.re.sqrt(), 0.0)).norm() < 2e-3);
        assert!((b.h[2] - Complex64::new(1.0 + s2 / z.re.sqrt(), 0.0)).norm() < 2e-3);
    }

    #[test]
    fn pastur_far_field() {
        let c = builtin_curve(CurveKind::Pastur, CurveParams { a: 1.0, b: 0.0 }).unwrap();
        let z = Complex64::new(1e3, 0.0);
        let b = c.branch_values(z).unwrap();
        assert!((b.h[0] - (z - 2.0 / z)).norm() < 1e-4);
        assert!((b.h[1] - Complex64::new(1.0, 0.0)).norm() < 1e-2);
        assert!((b.h[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-2);
    }

    #[test]
    fn continuation_inward_keeps_cubic_residual() {
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        for &(re, im) in &[(5.0, 1.0), (2.0, -0.7), (-4.0, 2.0), (20.0, 0.3)] {
            let z = Complex64::new(re, im);
            let b = c.branch_values(z).unwrap();
            let (p2, p1, p0) = c.coefficients(z);
            for j in 0..3 {
                let h = b.h[j];
                let res = (((h + p2) * h + p1) * h + p0).norm();
                assert!(res < 1e-10 * (1.0 + h.norm()).powi(3), "residual {res}");
            }
            // Branch sum respects Vieta: H0 + H1 + H2 = -p2 = 2.
            let sum = b.h[0] + b.h[1] + b.h[2];
            assert!((sum - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn near_branch_point_rejected() {
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        let z = Complex64::new(13.5, 1e-8);
        assert!(matches!(
            c.branch_values(z),
            Err(CoreError::NearBranchPoint { .. })
        ));
    }
}
