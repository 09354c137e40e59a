//! External fields and upper constraints for the half-line problem, plus the
//! transform that pulls symmetric line problems onto the half-line.
//!
//! Every built-in field has the form `c_lin * x + c_sqrt * sqrt(x) + offset`,
//! so cell averages are closed-form. Constraint densities are `c / sqrt|x|`
//! with exact cell masses. Custom tabulated data fall back to interpolation.

use crate::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// External field on `R+`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    /// `x - 2 sqrt2 sqrt x`: the squared-Bessel-paths field (external-source
    /// form at `a = sqrt 2`), matching the `bessel` spectral curve.
    Bessel,
    /// `2 pi sqrt x`: the multiple-Pollaczek field, matching the
    /// `pollaczek_psi` curve through the half-line fold.
    Pollaczek,
    /// `x - 2 a sqrt x`: the external-source (quadratic) line field pulled
    /// to the half-line.
    HermiteMapped { a: f64 },
    /// Piecewise-linear table.
    CustomTable { xs: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldSpec {
    #[serde(flatten)]
    pub kind: FieldKind,
    /// Additive constant; the minimizing measures are invariant under it and
    /// `w1` shifts by exactly this amount.
    #[serde(default)]
    pub offset: f64,
}

impl FieldSpec {
    pub fn new(kind: FieldKind) -> Self {
        Self { kind, offset: 0.0 }
    }

    pub fn with_offset(kind: FieldKind, offset: f64) -> Self {
        Self { kind, offset }
    }

    /// Linear and sqrt coefficients for the closed-form built-ins.
    fn coeffs(&self) -> Option<(f64, f64)> {
        match &self.kind {
            FieldKind::Bessel => Some((1.0, -2.0 * 2f64.sqrt())),
            FieldKind::Pollaczek => Some((0.0, 2.0 * std::f64::consts::PI)),
            FieldKind::HermiteMapped { a } => Some((1.0, -2.0 * a)),
            FieldKind::CustomTable { .. } => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let base = match &self.kind {
            FieldKind::CustomTable { xs, values } => interp_linear(xs, values, x),
            _ => {
                let (cl, cs) = self.coeffs().expect("closed-form");
                cl * x + cs * x.max(0.0).sqrt()
            }
        };
        base + self.offset
    }

    /// Exact average of the field over `[a, b] subset R+` for the built-ins;
    /// Simpson on the table.
    pub fn cell_average(&self, a: f64, b: f64) -> f64 {
        debug_assert!(b > a);
        let base = match &self.kind {
            FieldKind::CustomTable { xs, values } => {
                let m = 0.5 * (a + b);
                (interp_linear(xs, values, a)
                    + 4.0 * interp_linear(xs, values, m)
                    + interp_linear(xs, values, b))
                    / 6.0
            }
            _ => {
                let (cl, cs) = self.coeffs().expect("closed-form");
                let lin = cl * 0.5 * (a + b);
                let sqr = cs * (2.0 / 3.0) * (b.powf(1.5) - a.powf(1.5)) / (b - a);
                lin + sqr
            }
        };
        base + self.offset
    }

    /// Derivative (numeric for tables), for the window growth check.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.kind {
            FieldKind::CustomTable { .. } => {
                let h = 1e-5 * (1.0 + x.abs());
                (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
            }
            _ => {
                let (cl, cs) = self.coeffs().expect("closed-form");
                cl + 0.5 * cs / x.max(1e-300).sqrt()
            }
        }
    }
}

/// Upper-constraint density on `R-`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `sqrt2 / (pi sqrt|x|)` - never binding for the bessel problem.
    Bessel,
    /// `1 / sqrt|x|` - saturates on `[-(5 sqrt5 - 11)/8, 0]`.
    Pollaczek,
    /// `(a/pi) / sqrt|x|`.
    HermiteMapped { a: f64 },
    CustomTable { xs: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConstraintSpec {
    #[serde(flatten)]
    pub kind: ConstraintKind,
}

impl ConstraintSpec {
    pub fn new(kind: ConstraintKind) -> Self {
        Self { kind }
    }

    fn inv_sqrt_coeff(&self) -> Option<f64> {
        match &self.kind {
            ConstraintKind::Bessel => Some(2f64.sqrt() / std::f64::consts::PI),
            ConstraintKind::Pollaczek => Some(1.0),
            ConstraintKind::HermiteMapped { a } => Some(a / std::f64::consts::PI),
            ConstraintKind::CustomTable { .. } => None,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match &self.kind {
            ConstraintKind::CustomTable { xs, values } => interp_linear(xs, values, x),
            _ => self.inv_sqrt_coeff().expect("closed-form") / x.abs().max(1e-300).sqrt(),
        }
    }

    /// Exact mass of the constraint over a cell `[a, b] subset R-`.
    pub fn cell_mass(&self, a: f64, b: f64) -> f64 {
        debug_assert!(b > a && b <= 1e-12);
        match &self.kind {
            ConstraintKind::CustomTable { xs, values } => {
                let m = 0.5 * (a + b);
                (b - a)
                    * (interp_linear(xs, values, a)
                        + 4.0 * interp_linear(xs, values, m)
                        + interp_linear(xs, values, b))
                    / 6.0
            }
            _ => {
                let c = self.inv_sqrt_coeff().expect("closed-form");
                2.0 * c * (a.abs().sqrt() - b.abs().sqrt())
            }
        }
    }
}

fn interp_linear(xs: &[f64], values: &[f64], x: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    if x <= xs[0] {
        return values[0];
    }
    if x >= xs[xs.len() - 1] {
        return values[values.len() - 1];
    }
    let i = xs.partition_point(|&t| t <= x).saturating_sub(1);
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    values[i] * (1.0 - t) + values[i + 1] * t
}

const EVEN_CHECK_POINTS: usize = 64;
const EVEN_CHECK_RTOL: f64 = 1e-9;

/// Pull a symmetric line problem onto the half-line.
///
/// With the pushforward under `z -> z^2` (both half-axes fold), the fold
/// identity `P^{fold mu}(x) = (1/2) P^{mu}(x^2)` turns the line equilibrium
/// conditions into the half-line ones with
///
/// ```text
/// field(y)            = 2 * field_tilde(sqrt y)
/// constraint_density(x) = profile(sqrt|x|) / sqrt|x|
/// ```
///
/// (the factor 2 on the field, unlike the constraint, does not cancel in the
/// fold). `field_tilde` must be even; `profile` parametrizes the constraint
/// density along the imaginary axis by `|z|` and must be a genuine profile
/// (evenness is the caller's concern for iR; we sample the given profile on
/// `t >= 0`).
pub fn map_line_to_halfline<F, G>(
    field_tilde: F,
    constraint_profile: G,
    sample_radius: f64,
) -> Result<(impl Fn(f64) -> f64, impl Fn(f64) -> f64)>
where
    F: Fn(f64) -> f64 + Copy,
    G: Fn(f64) -> f64 + Copy,
{
    for k in 1..=EVEN_CHECK_POINTS {
        let x = sample_radius * k as f64 / EVEN_CHECK_POINTS as f64;
        let (p, m) = (field_tilde(x), field_tilde(-x));
        if (p - m).abs() > EVEN_CHECK_RTOL * (1.0 + p.abs().max(m.abs())) {
            return Err(CoreError::InvalidInput(format!(
                "line field is not even: f({x}) = {p}, f({-x}) = {m}"
            )));
        }
    }
    let field = move |y: f64| 2.0 * field_tilde(y.max(0.0).sqrt());
    let density = move |x: f64| {
        let t = x.abs().max(1e-300).sqrt();
        constraint_profile(t) / t
    };
    Ok((field, density))
}
