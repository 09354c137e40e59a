//! Built-in algebraic curves: monic cubics in `H` with z-dependent
//! coefficients whose branch boundary values encode equilibrium densities.
//!
//! Four curves are built in:
//!
//! * `bessel`         `H^3 - 2H^2 + H - 2/z = 0`
//! * `pastur`         `H^3 - zH^2 + (2 - a^2)H + z a^2 = 0`
//! * `quartic_source` `H^3 - (z^3 + bz)H^2 + z^2 H + a^2 z^3 = 0`
//! * `pollaczek_psi`  `psi^3 + ((i-z)/z) psi^2 + ((i+z)/z) psi - 1 = 0`
//!
//! Branches are labeled by their asymptotic expansions at a far reference
//! point and transported by homotopy continuation along a radial ray; see
//! [`continuation`]. Branch points come from the cleared discriminant
//! polynomial; densities from epsilon-extrapolated boundary values.

mod branch_points;
mod continuation;
mod density;

pub use branch_points::BranchPointSet;
pub use continuation::BranchTriple;
pub use density::{pollaczek_uniformization, DensityValue};

use crate::{CoreError, Result};
use num_complex::Complex64;
use once_cell::sync::OnceCell;

/// Which built-in curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Bessel,
    Pastur,
    QuarticSource,
    PollaczekPsi,
}

impl CurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Bessel => "bessel",
            CurveKind::Pastur => "pastur",
            CurveKind::QuarticSource => "quartic_source",
            CurveKind::PollaczekPsi => "pollaczek_psi",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "bessel" => Ok(CurveKind::Bessel),
            "pastur" => Ok(CurveKind::Pastur),
            "quartic_source" => Ok(CurveKind::QuarticSource),
            "pollaczek_psi" => Ok(CurveKind::PollaczekPsi),
            other => Err(CoreError::InvalidInput(format!(
                "unknown curve kind `{other}`"
            ))),
        }
    }
}

/// Curve parameters; `a` for pastur, `(a, b)` for quartic_source.
#[derive(Debug, Clone, Copy, Default)]
pub struct CurveParams {
    pub a: f64,
    pub b: f64,
}

/// A built-in curve with its coefficient evaluators and cached branch data.
#[derive(Debug)]
pub struct AlgebraicCurve {
    kind: CurveKind,
    params: CurveParams,
    branch_pts: OnceCell<BranchPointSet>,
}

/// Radius of the far reference point where asymptotic labels are pinned.
pub(crate) const REFERENCE_RADIUS: f64 = 1e3;

/// Stay this far away from branch points and coefficient singularities.
pub(crate) const DEGENERACY_RADIUS: f64 = 1e-6;

/// Lower boundary `a_m(b)` and upper boundary `a_M(b)` of the genus-1
/// parameter region of the quartic-source curve:
///
/// ```text
/// a_m(b) = sqrt(6b^3 - 27b - 6(b^2-3)^{3/2}) / 9,   b in (-2, -sqrt(3))
/// a_M(b) = sqrt(6b^3 - 27b + 6(b^2-3)^{3/2}) / 9,   b in (-inf, -sqrt(3))
/// ```
///
/// For `b <= -2` the lower boundary is the `b`-axis (`a_m = 0`).
pub fn quartic_region_bounds(b: f64) -> Result<(f64, f64)> {
    let sqrt3 = 3f64.sqrt();
    if b >= -sqrt3 {
        return Err(CoreError::Region(format!(
            "quartic region requires b < -sqrt(3) ~= -1.732, got {b}"
        )));
    }
    let core = 6.0 * b.powi(3) - 27.0 * b;
    let wing = 6.0 * (b * b - 3.0).powf(1.5);
    let a_m = if b > -2.0 {
        (core - wing).max(0.0).sqrt() / 9.0
    } else {
        0.0
    };
    let a_max = (core + wing).sqrt() / 9.0;
    Ok((a_m, a_max))
}

/// Construct a built-in curve, validating parameters.
pub fn builtin_curve(kind: CurveKind, params: CurveParams) -> Result<AlgebraicCurve> {
    match kind {
        CurveKind::Bessel | CurveKind::PollaczekPsi => {}
        CurveKind::Pastur => {
            if !params.a.is_finite() {
                return Err(CoreError::InvalidInput("pastur requires a real `a`".into()));
            }
            if params.a == 0.0 {
                return Err(CoreError::Region(
                    "pastur at a = 0 has indistinguishable secondary branches".into(),
                ));
            }
        }
        CurveKind::QuarticSource => {
            let (a_m, a_max) = quartic_region_bounds(params.b)?;
            let a = params.a;
            if a == 0.0 {
                // The b-axis boundary is constructible; branch labels are
                // degenerate there and rejected at evaluation time.
            } else if !(a > a_m && a < a_max) {
                let which = if a <= a_m { "lower a_m(b)" } else { "upper a_M(b)" };
                return Err(CoreError::Region(format!(
                    "(a, b) = ({a}, {b}) outside the genus-1 region: violates the {which} boundary \
                     (a_m = {a_m:.6}, a_M = {a_max:.6})",
                    b = params.b
                )));
            }
        }
    }
    Ok(AlgebraicCurve {
        kind,
        params,
        branch_pts: OnceCell::new(),
    })
}

impl AlgebraicCurve {
    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn params(&self) -> CurveParams {
        self.params
    }

    /// Monic-cubic coefficients `(p2, p1, p0)` at `z`.
    pub fn coefficients(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let a = self.params.a;
        let b = self.params.b;
        match self.kind {
            CurveKind::Bessel => (
                Complex64::new(-2.0, 0.0),
                Complex64::new(1.0, 0.0),
                -2.0 / z,
            ),
            CurveKind::Pastur => (-z, Complex64::new(2.0 - a * a, 0.0), z * (a * a)),
            CurveKind::QuarticSource => {
                let z3 = z * z * z;
                (-(z3 + b * z), z * z, (a * a) * z3)
            }
            CurveKind::PollaczekPsi => {
                let i = Complex64::new(0.0, 1.0);
                ((i - z) / z, (i + z) / z, Complex64::new(-1.0, 0.0))
            }
        }
    }

    /// Points where the coefficients themselves blow up.
    pub fn singular_points(&self) -> Vec<Complex64> {
        match self.kind {
            CurveKind::Bessel | CurveKind::PollaczekPsi => vec![Complex64::new(0.0, 0.0)],
            _ => vec![],
        }
    }

    /// Asymptotic branch values at a far point `z`, in label order
    /// `[H0, H1, H2]` (for pollaczek_psi these are the psi expansions).
    pub(crate) fn asymptotic_labels(&self, z: Complex64) -> [Complex64; 3] {
        let a = self.params.a;
        let b = self.params.b;
        match self.kind {
            CurveKind::Bessel => {
                let s = z.sqrt();
                [
                    2.0 / z,
                    Complex64::new(1.0, 0.0) - Complex64::new(2.0, 0.0).sqrt() / s - 1.0 / z,
                    Complex64::new(1.0, 0.0) + Complex64::new(2.0, 0.0).sqrt() / s - 1.0 / z,
                ]
            }
            CurveKind::Pastur => [
                z - 2.0 / z,
                Complex64::new(a, 0.0) + 1.0 / z,
                Complex64::new(-a, 0.0) + 1.0 / z,
            ],
            CurveKind::QuarticSource => [
                z * z * z + b * z - 1.0 / z,
                Complex64::new(a, 0.0) + 0.5 / z,
                Complex64::new(-a, 0.0) + 0.5 / z,
            ],
            CurveKind::PollaczekPsi => {
                let i = Complex64::new(0.0, 1.0);
                [
                    Complex64::new(1.0, 0.0) - i / z,
                    i - 0.5 / z,
                    -i + 0.5 / z,
                ]
            }
        }
    }

    /// Labeled branch values at `z` (off branch points and coefficient
    /// singularities).
    pub fn branch_values(&self, z: Complex64) -> Result<BranchTriple> {
        continuation::branch_values(self, z)
    }

    /// Branch points from the cleared discriminant, each verified by a
    /// double-root test where the coefficients are regular.
    pub fn branch_points(&self) -> Result<&BranchPointSet> {
        self.branch_pts
            .get_or_try_init(|| branch_points::compute_branch_points(self))
    }

    /// Density of the first equilibrium component at `x` (curve-native
    /// coordinates; for pollaczek this is the line density).
    pub fn density_lambda1(&self, x: f64) -> Result<DensityValue> {
        density::density_lambda1(self, x)
    }

    /// Density of the constrained component. `sigma_density` is the
    /// constraint density in the curve's coordinates; for pollaczek_psi the
    /// argument `x` parametrizes the imaginary axis by the imaginary part.
    pub fn density_lambda2<F>(&self, sigma_density: F, x: f64) -> Result<DensityValue>
    where
        F: Fn(f64) -> f64,
    {
        density::density_lambda2(self, sigma_density, x)
    }

    /// Support interval of the first component on the curve's real line,
    /// from the real branch points.
    pub fn lambda1_support(&self) -> Result<(f64, f64)> {
        let pts = self.branch_points()?;
        let mut reals: Vec<f64> = pts
            .points
            .iter()
            .filter(|p| p.im.abs() < 1e-9 * (1.0 + p.norm()))
            .map(|p| p.re)
            .collect();
        if reals.is_empty() {
            return Err(CoreError::Consistency(
                "no real branch points found for the density support".into(),
            ));
        }
        let lo = reals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = reals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok((lo, hi))
    }

    /// Pollaczek line densities mapped to the solver's half-line
    /// coordinates via `x = zeta^2`: the first component on `R+`.
    pub fn halfline_lambda1_density(&self, x: f64) -> Result<DensityValue> {
        if self.kind != CurveKind::PollaczekPsi {
            return Err(CoreError::InvalidInput(
                "half-line mapping is defined for the pollaczek_psi curve".into(),
            ));
        }
        if x <= 0.0 {
            return Ok(DensityValue {
                value: 0.0,
                in_support: false,
                clipped: false,
            });
        }
        let line = self.density_lambda1(x.sqrt())?;
        // Both line half-axes fold onto R+; evenness makes the pushforward
        // density lambda1'(sqrt x) / sqrt x.
        Ok(DensityValue {
            value: line.value / x.sqrt(),
            in_support: line.in_support,
            clipped: line.clipped,
        })
    }

    /// Pollaczek constrained-component density mapped to `R-` via
    /// `x = zeta^2` (both imaginary half-axes fold onto the negative axis).
    pub fn halfline_lambda2_density(&self, x: f64) -> Result<DensityValue> {
        if self.kind != CurveKind::PollaczekPsi {
            return Err(CoreError::InvalidInput(
                "half-line mapping is defined for the pollaczek_psi curve".into(),
            ));
        }
        if x >= 0.0 {
            return Ok(DensityValue {
                value: 0.0,
                in_support: false,
                clipped: false,
            });
        }
        let t = (-x).sqrt();
        let line = self.density_lambda2(|_| 1.0, t)?;
        Ok(DensityValue {
            value: line.value / t,
            in_support: line.in_support,
            clipped: line.clipped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_region_boundary_values() {
        // a_m(-2) = 0, a_M(-2) = 2 sqrt(3) / 9.
        let (a_m, a_max) = quartic_region_bounds(-2.0).unwrap();
        assert!(a_m.abs() < 1e-10);
        assert!((a_max - 2.0 * 3f64.sqrt() / 9.0).abs() < 1e-10);
        // Collapse at b = -sqrt(3): a_m = a_M = 3^{1/4}/3.
        let b = -(3f64.sqrt()) - 1e-13;
        let (a_m, a_max) = quartic_region_bounds(b).unwrap();
        let want = 3f64.powf(0.25) / 3.0;
        assert!((a_m - want).abs() < 1e-6, "a_m {a_m} want {want}");
        assert!((a_max - want).abs() < 1e-6);
    }

    #[test]
    fn quartic_region_rejects_outside() {
        let err = builtin_curve(CurveKind::QuarticSource, CurveParams { a: 1.0, b: -2.0 });
        match err {
            Err(CoreError::Region(msg)) => assert!(msg.contains("a_M"), "msg: {msg}"),
            other => panic!("expected region error, got {other:?}"),
        }
        assert!(
            builtin_curve(CurveKind::QuarticSource, CurveParams { a: 0.2, b: -2.0 }).is_ok()
        );
        assert!(
            builtin_curve(CurveKind::QuarticSource, CurveParams { a: 0.0, b: -3.0 }).is_ok()
        );
    }

    #[test]
    fn bessel_coefficients() {
        let c = builtin_curve(CurveKind::Bessel, CurveParams::default()).unwrap();
        let (p2, p1, p0) = c.coefficients(Complex64::new(2.0, 0.0));
        assert_eq!(p2, Complex64::new(-2.0, 0.0));
        assert_eq!(p1, Complex64::new(1.0, 0.0));
        assert_eq!(p0, Complex64::new(-1.0, 0.0));
    }
}
