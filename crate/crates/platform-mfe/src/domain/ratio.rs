use serde::{Deserialize, Serialize};

use super::DensityField;
use crate::error::{invalid, Result};
use crate::numeric::{ksum, round_sig};

/// Significant digits used to decide that two cells share the same ratio.
pub const MERGE_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub r: f64,
    pub p_mass: f64,
    pub g_mass: f64,
}

/// Distribution of `r = p/g` under `p`, with equal-ratio cells merged into
/// atoms and entries sorted by `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDistribution {
    entries: Vec<RatioEntry>,
    /// Entry index of every source cell.
    cell_entry: Vec<usize>,
    /// Number of source cells merged into each entry.
    multiplicity: Vec<usize>,
    exact_atoms: bool,
}

impl RatioDistribution {
    pub fn from_densities(p: &DensityField, g: &DensityField) -> Result<Self> {
        p.same_grid(g)?;
        Self::build(&p.masses(), &g.masses(), false)
    }

    /// Build from explicit `(p_mass, g_mass)` atoms. Masses are rescaled to
    /// sum to one. Every atom counts as a point mass.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return invalid("no atoms");
        }
        if atoms.iter().any(|&(a, b)| !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite()) {
            return invalid("atom masses must be positive and finite");
        }
        let sp = ksum(atoms.iter().map(|a| a.0));
        let sg = ksum(atoms.iter().map(|a| a.1));
        let p: Vec<f64> = atoms.iter().map(|a| a.0 / sp).collect();
        let g: Vec<f64> = atoms.iter().map(|a| a.1 / sg).collect();
        Self::build(&p, &g, true)
    }

    fn build(p: &[f64], g: &[f64], exact_atoms: bool) -> Result<Self> {
        let n = p.len();
        let keys: Vec<f64> = (0..n).map(|i| round_sig(p[i] / g[i], MERGE_DIGITS)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));

        let mut entries = Vec::new();
        let mut multiplicity = Vec::new();
        let mut cell_entry = vec![0usize; n];
        let mut i = 0;
        while i < n {
            let key = keys[order[i]];
            let mut j = i;
            while j < n && keys[order[j]] == key {
                j += 1;
            }
            let members = &order[i..j];
            let p_mass = ksum(members.iter().map(|&c| p[c]));
            let g_mass = ksum(members.iter().map(|&c| g[c]));
            for &c in members {
                cell_entry[c] = entries.len();
            }
            entries.push(RatioEntry { r: p_mass / g_mass, p_mass, g_mass });
            multiplicity.push(j - i);
            i = j;
        }
        Ok(Self { entries, cell_entry, multiplicity, exact_atoms })
    }

    pub fn entries(&self) -> &[RatioEntry] {
        &self.entries
    }

    pub fn cell_entry(&self) -> &[usize] {
        &self.cell_entry
    }

    pub fn n_cells(&self) -> usize {
        self.cell_entry.len()
    }

    pub fn r_min(&self) -> f64 {
        self.entries[0].r
    }

    pub fn r_max(&self) -> f64 {
        self.entries[self.entries.len() - 1].r
    }

    /// True when the top ratio carries a point mass: either it merges at
    /// least two grid cells or the distribution was built from atoms.
    pub fn atom_at_max(&self) -> bool {
        self.exact_atoms || self.multiplicity[self.entries.len() - 1] >= 2
    }

    pub fn is_exact(&self) -> bool {
        self.exact_atoms
    }

    /// `E_g[r^alpha]`, which equals `∫ p^alpha g^(1-alpha)`.
    pub fn e_g_r_alpha(&self, alpha: f64) -> f64 {
        ksum(self.entries.iter().map(|e| e.g_mass * e.r.powf(alpha)))
    }

    /// `Σ p_mass * max(t/r, 1)`, equivalently `t G(r < t) + P(r ≥ t)`.
    pub fn lhs(&self, t: f64) -> f64 {
        ksum(self.entries.iter().map(|e| if e.r < t { t * e.g_mass } else { e.p_mass }))
    }
}
