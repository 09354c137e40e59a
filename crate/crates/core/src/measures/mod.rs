//! Measures on truncated grids and the potential-theoretic functionals over
//! them.
//!
//! A [`GridMeasure`] carries masses on cell-centered nodes with
//! piecewise-uniform density semantics: the mass of cell `i` is spread evenly
//! over `[node - w/2, node + w/2]`. Atomic measures would have infinite
//! logarithmic self-energy, which breaks every energy functional downstream;
//! cell densities keep all energies finite and convergent under refinement.
//! Genuinely atomic data (constraint generators, zero-counting measures)
//! lives in [`DiscreteMeasure`] and is never smeared.

mod distance;
mod energy;
mod io;

pub use distance::{cdf_distance, sup_cdf_gap, zero_counting};
pub use io::{discrete_from_json, discrete_to_json, grid_from_json, grid_to_json, read_grid, write_grid};
pub use energy::{energy_forms, EnergyReport};

use crate::{CoreError, Result};
use num_complex::Complex64;

const MASS_CONSISTENCY_RTOL: f64 = 1e-14;

/// Nonnegative measure with piecewise-uniform density on disjoint cells.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    nodes: Vec<f64>,
    cell_widths: Vec<f64>,
    masses: Vec<f64>,
    total_mass: f64,
}

impl GridMeasure {
    /// Build and validate: nodes strictly ascending, widths positive, masses
    /// nonnegative, cells non-overlapping.
    pub fn new(nodes: Vec<f64>, cell_widths: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if nodes.len() != cell_widths.len() || nodes.len() != masses.len() {
            return Err(CoreError::InvalidInput(format!(
                "grid measure field lengths differ: {} nodes, {} widths, {} masses",
                nodes.len(),
                cell_widths.len(),
                masses.len()
            )));
        }
        for (i, w) in cell_widths.iter().enumerate() {
            if !(w > &0.0) || !w.is_finite() {
                return Err(CoreError::InvalidInput(format!(
                    "cell width {i} not positive: {w}"
                )));
            }
        }
        for (i, m) in masses.iter().enumerate() {
            if !(*m >= 0.0) || !m.is_finite() {
                return Err(CoreError::InvalidInput(format!(
                    "mass {i} negative or non-finite: {m}"
                )));
            }
        }
        for i in 1..nodes.len() {
            if !(nodes[i] > nodes[i - 1]) {
                return Err(CoreError::InvalidInput(format!(
                    "nodes not strictly ascending at index {i}"
                )));
            }
            let right_prev = nodes[i - 1] + cell_widths[i - 1] / 2.0;
            let left_this = nodes[i] - cell_widths[i] / 2.0;
            if left_this < right_prev - 1e-12 * cell_widths[i].max(cell_widths[i - 1]) {
                return Err(CoreError::InvalidInput(format!(
                    "cells {i} and {} overlap",
                    i - 1
                )));
            }
        }
        let total_mass = masses.iter().sum();
        Ok(Self {
            nodes,
            cell_widths,
            masses,
            total_mass,
        })
    }

    /// Empty measure.
    pub fn empty() -> Self {
        Self {
            nodes: vec![],
            cell_widths: vec![],
            masses: vec![],
            total_mass: 0.0,
        }
    }

    /// Uniform measure of given total mass on `[a, b]` with `n` equal cells.
    pub fn uniform(a: f64, b: f64, n: usize, total: f64) -> Result<Self> {
        if !(a < b) || n == 0 {
            return Err(CoreError::InvalidInput("uniform: need a < b, n > 0".into()));
        }
        let w = (b - a) / n as f64;
        let nodes = (0..n).map(|i| a + (i as f64 + 0.5) * w).collect();
        let widths = vec![w; n];
        let masses = vec![total / n as f64; n];
        Self::new(nodes, widths, masses)
    }

    /// Grid with the given cell edges (ascending, `edges.len() = n+1`) and
    /// zero masses.
    pub fn from_edges(edges: &[f64]) -> Result<Self> {
        if edges.len() < 2 {
            return Err(CoreError::InvalidInput("need at least two edges".into()));
        }
        let mut nodes = Vec::with_capacity(edges.len() - 1);
        let mut widths = Vec::with_capacity(edges.len() - 1);
        for i in 0..edges.len() - 1 {
            if !(edges[i + 1] > edges[i]) {
                return Err(CoreError::InvalidInput(format!(
                    "edges not ascending at {i}"
                )));
            }
            nodes.push(0.5 * (edges[i] + edges[i + 1]));
            widths.push(edges[i + 1] - edges[i]);
        }
        let masses = vec![0.0; nodes.len()];
        Self::new(nodes, widths, masses)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_widths(&self) -> &[f64] {
        &self.cell_widths
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Check the stored total against the mass sum.
    pub fn validate_total(&self) -> Result<()> {
        let s: f64 = self.masses.iter().sum();
        let scale = s.abs().max(self.total_mass.abs()).max(1e-300);
        if (s - self.total_mass).abs() > MASS_CONSISTENCY_RTOL * scale {
            return Err(CoreError::Consistency(format!(
                "total mass {} vs sum {}",
                self.total_mass, s
            )));
        }
        Ok(())
    }

    /// Replace the masses, keeping the grid. Lengths must match.
    pub fn with_masses(&self, masses: Vec<f64>) -> Result<Self> {
        Self::new(self.nodes.clone(), self.cell_widths.clone(), masses)
    }

    /// Measure scaled by a nonnegative factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.with_masses(self.masses.iter().map(|m| m * factor).collect())
    }

    pub fn cell_bounds(&self, i: usize) -> (f64, f64) {
        let h = self.cell_widths[i] / 2.0;
        (self.nodes[i] - h, self.nodes[i] + h)
    }

    /// Logarithmic potential `int log(1/|x-y|) dmu(y)` via the closed-form
    /// cell integral; the cell containing `x` is integrated analytically
    /// through the singularity. Far cells use the multipole series of the
    /// same integral, which avoids the cancellation of the antiderivative
    /// difference for thin cells.
    pub fn log_potential(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            if self.masses[i] == 0.0 {
                continue;
            }
            acc -= self.masses[i] * self.cell_log_avg(i, x);
        }
        acc
    }

    /// Average of `log|x - y|` over cell `i`.
    fn cell_log_avg(&self, i: usize, x: f64) -> f64 {
        let w = self.cell_widths[i];
        let d = x - self.nodes[i];
        if d.abs() >= 16.0 * w {
            // log|d| - w^2/(24 d^2) - w^4/(320 d^4) + O((w/d)^6)
            let r2 = (w / d) * (w / d);
            d.abs().ln() - r2 / 24.0 - r2 * r2 / 320.0
        } else {
            let (a, b) = self.cell_bounds(i);
            (antider_log(x - a) - antider_log(x - b)) / w
        }
    }

    /// `int log(1 + y^2) dmu(y)`, closed form per cell.
    pub fn log_moment(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            if self.masses[i] == 0.0 {
                continue;
            }
            let (a, b) = self.cell_bounds(i);
            let density = self.masses[i] / self.cell_widths[i];
            acc += density * (antider_log1y2(b) - antider_log1y2(a));
        }
        acc
    }

    /// Modified potential `int log(sqrt(1+y^2)/|x-y|) dmu(y)`
    /// `= log_potential(x) + log_moment()/2`.
    pub fn modified_potential(&self, x: f64) -> f64 {
        self.log_potential(x) + 0.5 * self.log_moment()
    }

    /// Cauchy transform `int dmu(t) / (z - t)`; `z` must be strictly off the
    /// closed support.
    pub fn cauchy_transform(&self, z: Complex64) -> Result<Complex64> {
        let d = self.support_distance(z);
        if d <= 0.0 {
            return Err(CoreError::Domain(format!(
                "point {z} lies in the closed support"
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.len() {
            if self.masses[i] == 0.0 {
                continue;
            }
            let (a, b) = self.cell_bounds(i);
            let w = self.cell_widths[i];
            let zc = z - self.nodes[i];
            if zc.norm() >= 16.0 * w {
                // 1/(z-c) * (1 + (w^2/12)/(z-c)^2 + (w^4/80)/(z-c)^4 + ...)
                let inv2 = 1.0 / (zc * zc);
                let series = 1.0 + inv2 * (w * w / 12.0) + inv2 * inv2 * (w * w * w * w / 80.0);
                acc += self.masses[i] * series / zc;
            } else {
                let density = self.masses[i] / w;
                // int_a^b dy / (z - y) = log((z-a)/(z-b)); principal branch
                // is correct for z off the segment.
                acc += density * ((z - a) / (z - b)).ln();
            }
        }
        Ok(acc)
    }

    fn support_distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            if self.masses[i] == 0.0 {
                continue;
            }
            let (a, b) = self.cell_bounds(i);
            let dx = if z.re < a {
                a - z.re
            } else if z.re > b {
                z.re - b
            } else {
                0.0
            };
            best = best.min((dx * dx + z.im * z.im).sqrt());
        }
        best
    }

    /// CDF `mu((-inf, x])`, piecewise linear.
    pub fn cdf(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            let (a, b) = self.cell_bounds(i);
            if x >= b {
                acc += self.masses[i];
            } else if x > a {
                acc += self.masses[i] * (x - a) / (b - a);
                break;
            } else {
                break;
            }
        }
        acc
    }

    /// All cell edges (for CDF refinement).
    pub fn edges(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.len());
        for i in 0..self.len() {
            let (a, b) = self.cell_bounds(i);
            v.push(a);
            v.push(b);
        }
        v
    }
}

/// Purely atomic measure with pairwise-distinct locations.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    /// Atoms sorted by location.
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        for (loc, w) in &atoms {
            if !loc.is_finite() || !(w > &0.0) {
                return Err(CoreError::InvalidInput(format!(
                    "atom ({loc}, {w}) invalid: need finite location, positive weight"
                )));
            }
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for i in 1..atoms.len() {
            if atoms[i].0 == atoms[i - 1].0 {
                return Err(CoreError::InvalidInput(format!(
                    "duplicate atom location {}",
                    atoms[i].0
                )));
            }
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn cauchy_transform(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(t, w) in &self.atoms {
            let d = z - t;
            if d.norm() == 0.0 {
                return Err(CoreError::Domain(format!("point {z} is an atom")));
            }
            acc += w / d;
        }
        Ok(acc)
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|(loc, _)| *loc <= x)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Either measure kind, for the operations defined on both.
#[derive(Debug, Clone, Copy)]
pub enum MeasureRef<'a> {
    Grid(&'a GridMeasure),
    Discrete(&'a DiscreteMeasure),
}

impl<'a> MeasureRef<'a> {
    pub fn total_mass(&self) -> f64 {
        match self {
            MeasureRef::Grid(g) => g.total_mass(),
            MeasureRef::Discrete(d) => d.total_mass(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            MeasureRef::Grid(g) => g.cdf(x),
            MeasureRef::Discrete(d) => d.cdf(x),
        }
    }

    pub fn cauchy_transform(&self, z: Complex64) -> Result<Complex64> {
        match self {
            MeasureRef::Grid(g) => g.cauchy_transform(z),
            MeasureRef::Discrete(d) => d.cauchy_transform(z),
        }
    }

    /// Breakpoints of the CDF (cell edges / atom locations).
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            MeasureRef::Grid(g) => g.edges(),
            MeasureRef::Discrete(d) => d.atoms().iter().map(|(l, _)| *l).collect(),
        }
    }
}

impl<'a> From<&'a GridMeasure> for MeasureRef<'a> {
    fn from(g: &'a GridMeasure) -> Self {
        MeasureRef::Grid(g)
    }
}

impl<'a> From<&'a DiscreteMeasure> for MeasureRef<'a> {
    fn from(d: &'a DiscreteMeasure) -> Self {
        MeasureRef::Discrete(d)
    }
}

/// Antiderivative of `log|t|`: `t log|t| - t`, continuous through 0.
pub(crate) fn antider_log(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.abs().ln() - t
    }
}

/// Antiderivative of `log(1 + y^2)`:
/// `y log(1+y^2) - 2y + 2 atan(y)`.
pub(crate) fn antider_log1y2(y: f64) -> f64 {
    y * (1.0 + y * y).ln() - 2.0 * y + 2.0 * y.atan()
}
