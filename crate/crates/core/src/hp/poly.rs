//! Dense real polynomials with arbitrary-precision coefficients.

use num_complex::Complex64;
use rug::ops::Pow;
use rug::Float;

/// Real polynomial, coefficients lowest-degree first, leading coefficient
/// nonzero (the zero polynomial has an empty coefficient list).
#[derive(Debug, Clone)]
pub struct Polynomial {
    coeffs: Vec<Float>,
}

impl Polynomial {
    /// Build from coefficients (lowest first), trimming leading zeros.
    pub fn new(mut coeffs: Vec<Float>) -> Self {
        while let Some(last) = coeffs.last() {
            if last.is_zero() {
                coeffs.pop();
            } else {
                break;
            }
        }
        Self { coeffs }
    }

    pub fn from_f64(bits: u32, coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Float::with_val(bits, c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(bits: u32, roots: &[Float]) -> Self {
        let mut c = vec![Float::with_val(bits, 1)];
        for r in roots {
            let mut next = vec![Float::new(bits); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= Float::with_val(bits, ci * r);
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention of callers
    /// that treat it separately.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Float> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| *c == 1).unwrap_or(false)
    }

    pub fn max_coeff_magnitude(&self) -> Float {
        let bits = self.bits();
        let mut m = Float::new(bits);
        for c in &self.coeffs {
            let a = c.clone().abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn bits(&self) -> u32 {
        self.coeffs.first().map(|c| c.prec()).unwrap_or(64)
    }

    /// Horner evaluation at full precision.
    pub fn eval(&self, x: &Float) -> Float {
        let bits = x.prec().max(self.bits());
        let mut acc = Float::new(bits);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }

    /// Horner evaluation at a complex point (double precision).
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64();
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial { coeffs: vec![] };
        }
        let bits = self.bits();
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Float::with_val(bits, c * i as u32))
                .collect(),
        )
    }

    /// Coefficients of `p(s*x) / s^deg` - the change of variables that maps
    /// roots `r -> r/s` while preserving monicity.
    pub fn scale_argument(&self, s: f64) -> Polynomial {
        let bits = self.bits();
        let deg = self.degree() as i32;
        let sf = Float::with_val(bits, s);
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let p = Float::with_val(bits, (&sf).pow(i as i32 - deg));
                    Float::with_val(bits, c * &p)
                })
                .collect(),
        )
    }

    /// Divide every coefficient by the largest magnitude (sign-preserving
    /// normalization used by the Sturm chain).
    pub(crate) fn normalized(&self) -> Polynomial {
        let m = self.max_coeff_magnitude();
        if m.is_zero() {
            return self.clone();
        }
        let bits = self.bits();
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Float::with_val(bits, c / &m))
                .collect(),
        }
    }

    /// Remainder of `self / d` (coefficient arithmetic at the wider of the
    /// two precisions).
    pub(crate) fn rem(&self, d: &Polynomial) -> Polynomial {
        let bits = self.bits().max(d.bits());
        let dd = d.degree();
        let lead = d.leading().expect("nonzero divisor");
        let mut r: Vec<Float> = self
            .coeffs
            .iter()
            .map(|c| Float::with_val(bits, c))
            .collect();
        while r.len() > dd {
            let k = r.len() - 1;
            let q = Float::with_val(bits, r.last().unwrap() / lead);
            for j in 0..=dd {
                let sub = Float::with_val(bits, &q * &d.coeffs[j]);
                r[k - dd + j] -= sub;
            }
            r.pop();
        }
        Polynomial::new(r)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:e}*x^{}", c.to_f64(), i))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_roots_expands() {
        let bits = 128;
        let roots = vec![Float::with_val(bits, 1), Float::with_val(bits, 3)];
        let p = Polynomial::from_roots(bits, &roots);
        // (x-1)(x-3) = x^2 - 4x + 3
        assert_eq!(p.degree(), 2);
        assert_eq!(p.coeffs()[0].to_f64(), 3.0);
        assert_eq!(p.coeffs()[1].to_f64(), -4.0);
        assert_eq!(p.coeffs()[2].to_f64(), 1.0);
        assert!(p.is_monic());
    }

    #[test]
    fn scale_argument_moves_roots() {
        // p = x^2 - 11x + 6, s = 4 -> q = x^2 - (11/4) x + 6/16
        let p = Polynomial::from_f64(128, &[6.0, -11.0, 1.0]);
        let q = p.scale_argument(4.0);
        assert!((q.coeffs()[1].to_f64() + 11.0 / 4.0).abs() < 1e-30);
        assert!((q.coeffs()[0].to_f64() - 6.0 / 16.0).abs() < 1e-30);
        assert!(q.is_monic());
    }

    #[test]
    fn rem_matches_hand_division() {
        // (x^3 - 1) mod (x - 1) = 0 ;  (x^3) mod (x-1) = 1
        let p = Polynomial::from_f64(128, &[-1.0, 0.0, 0.0, 1.0]);
        let d = Polynomial::from_f64(128, &[-1.0, 1.0]);
        assert!(p.rem(&d).is_zero());
        let p2 = Polynomial::from_f64(128, &[0.0, 0.0, 0.0, 1.0]);
        let r = p2.rem(&d);
        assert_eq!(r.degree(), 0);
        assert_eq!(r.coeffs()[0].to_f64(), 1.0);
    }
}
