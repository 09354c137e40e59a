//! Logarithmic and modified energies of grid-measure pairs.
//!
//! All six energy values come from the closed-form double integral of
//! `log|x - y|` over a cell pair. With `G(t) = t^2/2 log|t| - 3 t^2/4`
//! (an antiderivative of `t log|t| - t`),
//!
//! ```text
//! int_[a,b] int_[c,d] log|x-y| dy dx = G(b-c) - G(a-c) - G(b-d) + G(a-d),
//! ```
//!
//! which remains exact when the cells coincide (the uniform cell self-energy
//! is `3/2 - log w` per unit mass). A midpoint rule would let the log
//! singularity dominate the error.

use super::GridMeasure;

/// Plain and modified energies of a measure pair plus their log-moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    /// `I(mu1) = int int log 1/|x-y| dmu1 dmu1`
    pub i_self_1: f64,
    /// `I(mu2)`
    pub i_self_2: f64,
    /// `I(mu1, mu2)`
    pub i_mutual: f64,
    /// Modified-kernel energies (kernel `log(sqrt(1+x^2) sqrt(1+y^2)/|x-y|)`)
    pub m_self_1: f64,
    pub m_self_2: f64,
    pub m_mutual: f64,
    /// `int log(1+y^2) dmu_j`
    pub log_moment_1: f64,
    pub log_moment_2: f64,
}

/// `G` as above; continuous through 0 with `G(0) = 0`.
fn antider2_log(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        0.5 * t * t * t.abs().ln() - 0.75 * t * t
    }
}

/// Average of `log 1/|x-y|` over the cell pair, per unit mass of each cell.
/// Far pairs use the multipole series (the four-fold antiderivative
/// difference cancels catastrophically for thin distant cells).
pub(crate) fn cell_pair_kernel(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let wi = b - a;
    let wj = d - c;
    let dist = 0.5 * (a + b) - 0.5 * (c + d);
    if dist.abs() >= 16.0 * (wi + wj) {
        let d2 = dist * dist;
        let si = wi * wi;
        let sj = wj * wj;
        // -log|d| + (wi^2+wj^2)/(24 d^2)
        //         + (wi^4 + wj^4)/(320 d^4) + wi^2 wj^2/(96 d^4) + O((w/d)^6)
        return -dist.abs().ln() + (si + sj) / (24.0 * d2)
            + (si * si + sj * sj) / (320.0 * d2 * d2)
            + si * sj / (96.0 * d2 * d2);
    }
    let num = antider2_log(b - c) - antider2_log(a - c) - antider2_log(b - d)
        + antider2_log(a - d);
    -num / (wi * wj)
}

/// Plain mutual energy `I(mu, nu)` of two grid measures.
pub fn mutual_energy(mu: &GridMeasure, nu: &GridMeasure) -> f64 {
    let mut acc = 0.0;
    for i in 0..mu.len() {
        let mi = mu.masses()[i];
        if mi == 0.0 {
            continue;
        }
        let (a, b) = mu.cell_bounds(i);
        for j in 0..nu.len() {
            let nj = nu.masses()[j];
            if nj == 0.0 {
                continue;
            }
            let (c, d) = nu.cell_bounds(j);
            acc += mi * nj * cell_pair_kernel(a, b, c, d);
        }
    }
    acc
}

/// All energy forms for a pair. The modified energies use the identity
/// `M(mu,nu) = I(mu,nu) + |nu|/2 int log(1+x^2) dmu + |mu|/2 int log(1+y^2) dnu`,
/// exact for bounded grids.
pub fn energy_forms(mu1: &GridMeasure, mu2: &GridMeasure) -> EnergyReport {
    let i_self_1 = mutual_energy(mu1, mu1);
    let i_self_2 = mutual_energy(mu2, mu2);
    let i_mutual = mutual_energy(mu1, mu2);
    let lm1 = mu1.log_moment();
    let lm2 = mu2.log_moment();
    let m1 = mu1.total_mass();
    let m2 = mu2.total_mass();
    EnergyReport {
        i_self_1,
        i_self_2,
        i_mutual,
        m_self_1: i_self_1 + m1 * lm1,
        m_self_2: i_self_2 + m2 * lm2,
        m_mutual: i_mutual + 0.5 * m2 * lm1 + 0.5 * m1 * lm2,
        log_moment_1: lm1,
        log_moment_2: lm2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::GridMeasure;
    use rand::{Rng, SeedableRng};

    /// Brute-force double quadrature of the log kernel over a cell pair by
    /// midpoint refinement; independent of the closed forms above.
    fn brute_pair(a: f64, b: f64, c: f64, d: f64, n: usize) -> f64 {
        let hx = (b - a) / n as f64;
        let hy = (d - c) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = a + (i as f64 + 0.5) * hx;
            for j in 0..n {
                let y = c + (j as f64 + 0.5) * hy;
                if (x - y).abs() > 1e-300 {
                    acc += -(x - y).abs().ln();
                }
            }
        }
        acc * hx * hy / ((b - a) * (d - c))
    }

    #[test]
    fn unit_cell_self_energy_is_three_halves() {
        // int_0^1 int_0^1 log 1/|x-y| = 3/2, both in closed form and brute
        // force.
        assert!((cell_pair_kernel(0.0, 1.0, 0.0, 1.0) - 1.5).abs() < 1e-14);
        let brute = brute_pair(0.0, 1.0, 0.0, 1.0, 4000);
        assert!((brute - 1.5).abs() < 5e-3, "brute {brute}");
        let mu = GridMeasure::uniform(0.0, 1.0, 1, 1.0).unwrap();
        let rep = energy_forms(&mu, &mu);
        assert!((rep.i_self_1 - 1.5).abs() < 1e-14);
    }

    #[test]
    fn disjoint_pair_matches_brute_force() {
        let k = cell_pair_kernel(0.0, 1.0, 2.0, 3.5);
        let brute = brute_pair(0.0, 1.0, 2.0, 3.5, 2000);
        assert!((k - brute).abs() < 1e-6, "closed {k} brute {brute}");
    }

    #[test]
    fn refined_grid_preserves_energy() {
        // Same uniform measure on finer grids: energy converges (already
        // exact for uniform density).
        let m1 = GridMeasure::uniform(0.0, 1.0, 1, 1.0).unwrap();
        let m2 = GridMeasure::uniform(0.0, 1.0, 64, 1.0).unwrap();
        let e1 = energy_forms(&m1, &m1).i_self_1;
        let e2 = energy_forms(&m2, &m2).i_self_1;
        assert!((e1 - e2).abs() < 1e-12);
    }

    #[test]
    fn signed_energy_nonnegative_on_random_pairs() {
        // I(mu1 - mu2) >= 0 for 200 random equal-mass pairs on [0, 10].
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(3..20);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                let tot: f64 = masses.iter().sum();
                let masses: Vec<f64> = masses.iter().map(|m| m / tot).collect();
                GridMeasure::uniform(0.0, 10.0, n, 1.0)
                    .unwrap()
                    .with_masses(masses)
                    .unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let rep = energy_forms(&a, &b);
            let signed = rep.i_self_1 + rep.i_self_2 - 2.0 * rep.i_mutual;
            assert!(signed >= -1e-10, "I(mu1-mu2) = {signed}");
        }
    }

    #[test]
    fn modified_kernel_pointwise_nonnegative() {
        // log(sqrt(1+x^2) sqrt(1+y^2) / |x-y|) >= 0 on 10^4 random samples.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-50.0..50.0);
            let y: f64 = rng.gen_range(-50.0..50.0);
            if (x - y).abs() < 1e-12 {
                continue;
            }
            let k = ((1.0 + x * x).sqrt() * (1.0 + y * y).sqrt() / (x - y).abs()).ln();
            assert!(k >= 0.0, "kernel negative at ({x}, {y}): {k}");
        }
        // Spot value: x = 0, y = 1 gives log sqrt(2) = (log 2)/2 > 0.
        let k = ((1.0f64 + 0.0).sqrt() * 2.0f64.sqrt() / 1.0).ln();
        assert!((k - 0.5 * 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn modified_mutual_energy_nonnegative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = GridMeasure::uniform(
                rng.gen_range(-8.0..0.0),
                rng.gen_range(0.5..9.0),
                7,
                rng.gen_range(0.1..3.0),
            )
            .unwrap();
            let b = GridMeasure::uniform(
                rng.gen_range(-9.0..-2.0),
                rng.gen_range(-1.5..0.0),
                5,
                rng.gen_range(0.1..2.0),
            )
            .unwrap();
            let rep = energy_forms(&a, &b);
            assert!(rep.m_mutual >= 0.0, "M(mu1,mu2) = {}", rep.m_mutual);
            assert!(rep.m_self_1.is_finite() && rep.m_self_2.is_finite());
        }
    }

    #[test]
    fn box_pair_energies_against_brute_force() {
        // mu1 = mass 2 uniform on [0,1], mu2 = mass 1 uniform on [-2,-1].
        let mu1 = GridMeasure::uniform(0.0, 1.0, 1, 2.0).unwrap();
        let mu2 = GridMeasure::uniform(-2.0, -1.0, 1, 1.0).unwrap();
        let rep = energy_forms(&mu1, &mu2);
        let brute_mutual = 2.0 * 1.0 * brute_pair(0.0, 1.0, -2.0, -1.0, 2000);
        assert!((rep.i_mutual - brute_mutual).abs() < 1e-6);
        assert!((rep.i_self_1 - 4.0 * 1.5).abs() < 1e-12);
        assert!((rep.i_self_2 - 1.5).abs() < 1e-12);
    }
}
