//! Certified real-root isolation: Sturm-sequence counting, bisection, and
//! Newton polish.

use super::poly::Polynomial;
use super::PrecisionContext;
use crate::{CoreError, Result};
use rug::Float;

/// A located root with its certification data.
#[derive(Debug, Clone)]
pub struct RootEstimate {
    pub root: Float,
    /// `|p(root)|` at working precision.
    pub residual: Float,
    /// Set when the root appears with multiplicity > 1 (derivative vanishes
    /// there); such roots are still reported exactly once.
    pub multiple: bool,
}

/// All real roots of `p` inside `[a, b]`, ascending. Roots are certified by
/// Sturm counts on the square-free part; suspected multiple roots come back
/// flagged rather than silently polished.
pub fn isolate_real_roots(
    p: &Polynomial,
    a: f64,
    b: f64,
    ctx: &PrecisionContext,
) -> Result<Vec<RootEstimate>> {
    if !(a < b) {
        return Err(CoreError::InvalidInput(format!(
            "root isolation interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if p.is_zero() {
        return Err(CoreError::InvalidInput(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    let bits = ctx.bits().max(p.bits());

    // Sturm chain on the normalized polynomial. A vanishing remainder before
    // reaching degree zero signals a nontrivial gcd(p, p'), i.e. multiple
    // roots; isolation then proceeds on the square-free part and the gcd's
    // roots are flagged.
    let (chain, gcd) = sturm_chain(p, bits);
    let square_free = &chain[0];

    let mut roots: Vec<RootEstimate> = Vec::new();
    let fa = Float::with_val(bits, a);
    let fb = Float::with_val(bits, b);
    isolate_in(&chain, square_free, &fa, &fb, bits, &mut roots)?;

    if let Some(g) = &gcd {
        if g.degree() >= 1 {
            // Multiple roots of p are exactly the roots of the gcd.
            let sub = isolate_real_roots(g, a, b, ctx)?;
            for r in sub {
                mark_multiple(&mut roots, r, bits);
            }
        }
    }

    roots.sort_by(|x, y| x.root.partial_cmp(&y.root).unwrap());
    // Residuals against the original polynomial.
    for r in &mut roots {
        r.residual = p.eval(&r.root).abs();
    }
    Ok(roots)
}

fn mark_multiple(roots: &mut [RootEstimate], cand: RootEstimate, bits: u32) {
    let tol = Float::with_val(bits, Float::i_exp(1, -((bits / 2) as i32)));
    for r in roots.iter_mut() {
        let d = Float::with_val(bits, &r.root - &cand.root).abs();
        let scale = Float::with_val(bits, 1) + r.root.clone().abs();
        if d < Float::with_val(bits, &tol * &scale) {
            r.multiple = true;
            return;
        }
    }
}

/// Sturm chain of the square-free part of `p`. Returns the chain and, when
/// `gcd(p, p')` is nontrivial, that gcd.
fn sturm_chain(p: &Polynomial, bits: u32) -> (Vec<Polynomial>, Option<Polynomial>) {
    // Coefficient threshold below which a remainder counts as zero.
    let zero_thresh = Float::with_val(bits, Float::i_exp(1, -((bits * 3 / 4) as i32)));

    let mut chain = vec![p.normalized(), p.derivative().normalized()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() || chain[n - 1].degree() == 0 {
            break;
        }
        let mut r = chain[n - 2].rem(&chain[n - 1]);
        if !r.is_zero() && r.max_coeff_magnitude() < zero_thresh {
            r = Polynomial::new(vec![]);
        }
        if r.is_zero() {
            // Nontrivial gcd: last chain entry divides everything.
            let gcd = chain[n - 1].clone();
            let sf = divide_out(&chain[0], &gcd, bits);
            let (sf_chain, _) = sturm_chain(&sf, bits);
            return (sf_chain, Some(gcd));
        }
        let neg = Polynomial::new(
            r.normalized()
                .coeffs()
                .iter()
                .map(|c| Float::with_val(bits, -c.clone()))
                .collect(),
        );
        chain.push(neg);
    }
    (chain, None)
}

/// Approximate exact division `p / d` (valid when d | p up to noise).
fn divide_out(p: &Polynomial, d: &Polynomial, bits: u32) -> Polynomial {
    let dd = d.degree();
    let lead = d.leading().expect("nonzero divisor").clone();
    let mut r: Vec<Float> = p.coeffs().iter().map(|c| Float::with_val(bits, c)).collect();
    let mut q = vec![Float::new(bits); r.len().saturating_sub(dd)];
    while r.len() > dd {
        let k = r.len() - 1;
        let qc = Float::with_val(bits, r.last().unwrap() / &lead);
        q[k - dd] = qc.clone();
        for j in 0..=dd {
            let sub = Float::with_val(bits, &qc * &d.coeffs()[j]);
            r[k - dd + j] -= sub;
        }
        r.pop();
    }
    Polynomial::new(q)
}

fn sign_changes(chain: &[Polynomial], x: &Float) -> usize {
    let mut count = 0;
    let mut last: i8 = 0;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_sign_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn count_in(chain: &[Polynomial], a: &Float, b: &Float) -> usize {
    sign_changes(chain, a).saturating_sub(sign_changes(chain, b))
}

fn isolate_in(
    chain: &[Polynomial],
    p: &Polynomial,
    a: &Float,
    b: &Float,
    bits: u32,
    out: &mut Vec<RootEstimate>,
) -> Result<()> {
    // Roots sitting exactly on an evaluation point make Sturm counts
    // ambiguous; nudge such endpoints outward by a hair so boundary roots
    // stay inside the counted interval.
    let span = Float::with_val(bits, b - a);
    let eps = Float::with_val(bits, &span * &Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8)));
    let mut lo = a.clone();
    let mut hi = b.clone();
    if p.eval(&lo).is_zero() {
        lo -= &eps;
    }
    if p.eval(&hi).is_zero() {
        hi += &eps;
    }

    let mut stack = vec![(lo, hi)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_in(chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine_root(p, &lo, &hi, bits)?);
            continue;
        }
        let mut mid = (Float::with_val(bits, &lo + &hi) / 2u32);
        if p.eval(&mid).is_zero() {
            // Exact hit: perturb the split point.
            mid += Float::with_val(bits, &hi - &lo) * &Float::with_val(bits, Float::i_exp(1, -((bits / 2) as i32)));
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    Ok(())
}

/// One root known to lie in `(lo, hi)`: bisect on the sign change, then
/// Newton with bracket safeguard.
fn refine_root(p: &Polynomial, lo: &Float, hi: &Float, bits: u32) -> Result<RootEstimate> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let mut flo = p.eval(&lo);
    if flo.is_zero() {
        return Ok(RootEstimate {
            root: lo,
            residual: Float::new(bits),
            multiple: false,
        });
    }
    let fhi = p.eval(&hi);
    if fhi.is_zero() {
        return Ok(RootEstimate {
            root: hi,
            residual: Float::new(bits),
            multiple: false,
        });
    }
    if flo.is_sign_positive() == fhi.is_sign_positive() {
        // Sturm said one root but no sign change: derivative vanishes there.
        return Err(CoreError::Degeneracy {
            near: (lo.to_f64() + hi.to_f64()) / 2.0,
        });
    }
    // Coarse bisection to a relative width where Newton is safe.
    for _ in 0..60 {
        let mid = (Float::with_val(bits, &lo + &hi) / 2u32);
        let fm = p.eval(&mid);
        if fm.is_zero() {
            return Ok(RootEstimate {
                root: mid,
                residual: Float::new(bits),
                multiple: false,
            });
        }
        if fm.is_sign_positive() == flo.is_sign_positive() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Newton polish, clamped to the bracket.
    let dp = p.derivative();
    let mut x = (Float::with_val(bits, &lo + &hi) / 2u32);
    let stop = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 4));
    for _ in 0..64 {
        let fx = p.eval(&x);
        let dfx = dp.eval(&x);
        if dfx.is_zero() {
            break;
        }
        let step = Float::with_val(bits, &fx / &dfx);
        let next = Float::with_val(bits, &x - &step);
        let rel = step.clone().abs()
            / (Float::with_val(bits, 1) + x.clone().abs());
        let next = if next < lo || next > hi {
            (Float::with_val(bits, &lo + &hi) / 2u32)
        } else {
            next
        };
        x = next;
        if rel < stop {
            break;
        }
    }
    let residual = p.eval(&x).abs();
    Ok(RootEstimate {
        root: x,
        residual,
        multiple: false,
    })
}
