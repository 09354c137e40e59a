//! Zero-counting measures and the Kolmogorov (sup-CDF) distance that
//! metrizes weak-* convergence on the truncated windows.

use super::{DiscreteMeasure, MeasureRef};
use crate::{CoreError, Result};

const MASS_MATCH_TOL: f64 = 1e-8;

/// Normalized zero-counting measure: one atom of weight `1/degree` per root.
pub fn zero_counting(roots: &[f64], degree: usize) -> Result<DiscreteMeasure> {
    if degree == 0 || roots.is_empty() {
        return Err(CoreError::InvalidInput(
            "zero-counting measure undefined for constants".into(),
        ));
    }
    if roots.len() != degree {
        return Err(CoreError::InvalidInput(format!(
            "{} roots vs degree {degree}",
            roots.len()
        )));
    }
    let w = 1.0 / degree as f64;
    DiscreteMeasure::new(roots.iter().map(|&r| (r, w)).collect())
}

/// Kolmogorov distance `sup_x |F_a(x) - F_b(x)|` over a shared refinement of
/// both breakpoint sets. Total masses must agree to `1e-8`.
pub fn cdf_distance<'a, A, B>(a: A, b: B) -> Result<f64>
where
    A: Into<MeasureRef<'a>>,
    B: Into<MeasureRef<'a>>,
{
    let a = a.into();
    let b = b.into();
    let ma = a.total_mass();
    let mb = b.total_mass();
    if (ma - mb).abs() > MASS_MATCH_TOL * ma.abs().max(mb.abs()).max(1.0) {
        return Err(CoreError::InvalidInput(format!(
            "total masses differ: {ma} vs {mb}"
        )));
    }
    Ok(sup_cdf_gap(a, b))
}

/// `sup_x |F_a(x) - F_b(x)|` without the equal-mass gate (used by the
/// assumption validators, which compare measures of different mass on a
/// window).
pub fn sup_cdf_gap<'a, A, B>(a: A, b: B) -> f64
where
    A: Into<MeasureRef<'a>>,
    B: Into<MeasureRef<'a>>,
{
    let a = a.into();
    let b = b.into();
    let mut pts = a.breakpoints();
    pts.extend(b.breakpoints());
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let mut sup: f64 = 0.0;
    // Both CDFs are monotone and piecewise linear / constant between
    // breakpoints, so the sup is attained at a breakpoint, approached from
    // the left or the right.
    for &x in &pts {
        let eps = 1e-9 * (1.0 + x.abs());
        for &p in &[x - eps, x, x + eps] {
            let gap = (a.cdf(p) - b.cdf(p)).abs();
            if gap > sup {
                sup = gap;
            }
        }
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{DiscreteMeasure, GridMeasure};

    #[test]
    fn zero_counting_basic() {
        let nu = zero_counting(&[1.0, 3.0], 2).unwrap();
        assert_eq!(nu.atoms(), &[(1.0, 0.5), (3.0, 0.5)]);
        assert!((nu.total_mass() - 1.0).abs() < 1e-15);
        assert!(zero_counting(&[], 0).is_err());
    }

    #[test]
    fn zero_counting_of_quadratic_roots() {
        // Roots of x^2 - 11x + 6.
        let s = 97f64.sqrt();
        let nu = zero_counting(&[(11.0 - s) / 2.0, (11.0 + s) / 2.0], 2).unwrap();
        assert!((nu.atoms()[0].0 - 0.575571).abs() < 1e-5);
        assert!((nu.atoms()[1].0 - 10.424428).abs() < 1e-5);
        assert!((nu.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identical_measures_distance_zero() {
        let mu = GridMeasure::uniform(0.0, 1.0, 13, 1.0).unwrap();
        assert_eq!(cdf_distance(&mu, &mu).unwrap(), 0.0);
    }

    #[test]
    fn separated_diracs_distance_one() {
        let a = DiscreteMeasure::new(vec![(0.0, 1.0)]).unwrap();
        let b = DiscreteMeasure::new(vec![(1.0, 1.0)]).unwrap();
        assert!((cdf_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_vs_centered_dirac() {
        // max CDF gap between U[0,1] and delta_{1/2} is 1/2, at the atom.
        let u = GridMeasure::uniform(0.0, 1.0, 1, 1.0).unwrap();
        let d = DiscreteMeasure::new(vec![(0.5, 1.0)]).unwrap();
        let dist = cdf_distance(&u, &d).unwrap();
        assert!((dist - 0.5).abs() < 1e-7, "dist {dist}");
    }

    #[test]
    fn unequal_masses_rejected() {
        let a = GridMeasure::uniform(0.0, 1.0, 3, 1.0).unwrap();
        let b = GridMeasure::uniform(0.0, 1.0, 3, 2.0).unwrap();
        assert!(cdf_distance(&a, &b).is_err());
    }
}
