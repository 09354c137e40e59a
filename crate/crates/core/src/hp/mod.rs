//! Arbitrary-precision scalar arithmetic and the numerical primitives built on
//! it: double-exponential quadrature, polynomial root isolation, and a
//! complex cubic solver.
//!
//! Scalars are MPFR floats (via `rug`) with an explicit mantissa width. The
//! moment linear systems upstream are severely ill-conditioned, so everything
//! here is written to run unchanged at 64 bits or at 1024+ bits.

mod cubic;
mod poly;
mod quad;
mod roots;

pub use cubic::{complex_roots, solve_cubic, CubicRoots};
pub use poly::Polynomial;
pub use quad::{integrate_adaptive, Bound, Quadrature};
pub use roots::{isolate_real_roots, RootEstimate};

use crate::{CoreError, Result};
use rug::float::Constant;
use rug::Float;

/// Precision and tolerance bundle threaded through every high-precision
/// operation.
#[derive(Debug, Clone)]
pub struct PrecisionContext {
    mantissa_bits: u32,
    abs_tol: Float,
    rel_tol: Float,
}

impl PrecisionContext {
    /// Context with explicit tolerances. `mantissa_bits >= 64` and both
    /// tolerances must be positive and representable at that precision.
    pub fn with_tols(mantissa_bits: u32, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if mantissa_bits < 64 {
            return Err(CoreError::InvalidInput(format!(
                "mantissa_bits = {mantissa_bits}, need >= 64"
            )));
        }
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(CoreError::InvalidInput(
                "tolerances must be positive".into(),
            ));
        }
        Ok(Self {
            mantissa_bits,
            abs_tol: Float::with_val(mantissa_bits, abs_tol),
            rel_tol: Float::with_val(mantissa_bits, rel_tol),
        })
    }

    /// Context whose tolerances scale with the precision: both are set to
    /// `2^(-3/4 * bits)`, leaving a quarter of the mantissa as guard digits.
    pub fn new(mantissa_bits: u32) -> Result<Self> {
        if mantissa_bits < 64 {
            return Err(CoreError::InvalidInput(format!(
                "mantissa_bits = {mantissa_bits}, need >= 64"
            )));
        }
        let tol = Float::with_val(mantissa_bits, Float::i_exp(1, -((mantissa_bits as i32) * 3 / 4)));
        Ok(Self {
            mantissa_bits,
            abs_tol: tol.clone(),
            rel_tol: tol,
        })
    }

    /// Default context for quadrature work (256 bits).
    pub fn quadrature_default() -> Self {
        Self::new(256).expect("256 >= 64")
    }

    /// Default context for the moment linear systems (1024 bits). Hankel-type
    /// conditioning eats roughly 3.5 decimal digits per polynomial degree, so
    /// degree 32 needs well over 120 safe digits.
    pub fn linear_system_default() -> Self {
        Self::new(1024).expect("1024 >= 64")
    }

    pub fn bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn abs_tol(&self) -> &Float {
        &self.abs_tol
    }

    pub fn rel_tol(&self) -> &Float {
        &self.rel_tol
    }

    /// New float at this context's precision.
    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.mantissa_bits, v)
    }

    /// Pi at this context's precision.
    pub fn pi(&self) -> Float {
        Float::with_val(self.mantissa_bits, Constant::Pi)
    }

    /// Same tolerances, different mantissa width.
    pub fn with_bits(&self, bits: u32) -> Self {
        Self {
            mantissa_bits: bits,
            abs_tol: Float::with_val(bits, &self.abs_tol),
            rel_tol: Float::with_val(bits, &self.rel_tol),
        }
    }
}

/// Float constructor at explicit precision, used where no context is around.
pub fn fl(bits: u32, v: f64) -> Float {
    Float::with_val(bits, v)
}

/// Pi at explicit precision.
pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_rejects_narrow_mantissa() {
        assert!(PrecisionContext::new(32).is_err());
        assert!(PrecisionContext::with_tols(64, 0.0, 1e-10).is_err());
    }

    #[test]
    fn default_tolerances_scale_with_bits() {
        let a = PrecisionContext::new(64).unwrap();
        let b = PrecisionContext::new(128).unwrap();
        assert!(a.abs_tol().to_f64() > b.abs_tol().to_f64());
        assert!(b.abs_tol().to_f64() > 0.0);
    }
}
