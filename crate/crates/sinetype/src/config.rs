//! Solver configuration and defaults.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation orders, tolerances and patching knobs for the whole pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Coefficient half-width of the solver window.
    pub n: usize,
    /// Γ truncation order K (terms a₀..a_K).
    pub k_terms: usize,
    /// Reduction depth k₀ (partial sums removed from a₀..a_{k₀}).
    pub k0: usize,
    /// Reduction degree d (degree of the removed partial sums).
    pub d: usize,
    /// Fixed-point stopping tolerance on the update norm.
    pub fp_tol: f64,
    /// Iteration cap for the contraction solver.
    pub max_iter: usize,
    /// Perturbation size ε for the inverse patching system.
    pub eps_perturb: f64,
    /// Extra indices patched beyond the verified agreement index n₁.
    pub n1_margin: usize,
    /// Window padding used by `apply_m`.
    pub pad: usize,
    /// Largest zero index enumerated by the oracle.
    pub n_max: usize,
    /// Agreement threshold between solver tail and oracle zeros.
    pub patch_tol: f64,
    /// Refined roots closer than this are one zero of higher multiplicity.
    pub cluster_radius: f64,
    /// Newton refinement tolerance.
    pub newton_tol: f64,
    /// Winding numbers must be this close to an integer.
    pub contour_tol: f64,
    /// Patch system condition-number ceiling.
    pub cond_max: f64,
    /// Scaled residual ceiling for inverse interpolation checks.
    pub res_tol: f64,
    /// Forces the inverse split degree m to start at this value.
    pub split_degree_min: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: 256,
            k_terms: 16,
            k0: 8,
            d: 8,
            fp_tol: 1e-13,
            max_iter: 60,
            eps_perturb: 0.05,
            n1_margin: 4,
            pad: 128,
            n_max: 64,
            patch_tol: 1e-8,
            cluster_radius: 1e-6,
            newton_tol: 1e-12,
            contour_tol: 1e-3,
            cond_max: 1e10,
            res_tol: 1e-8,
            split_degree_min: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.fp_tol <= 0.0 {
            return Err(Error::InvalidInput("fp_tol must be positive".into()));
        }
        if self.eps_perturb <= 0.0 {
            return Err(Error::InvalidInput("eps_perturb must be positive".into()));
        }
        if self.k0 > self.k_terms {
            return Err(Error::InvalidInput(format!(
                "need K >= k0, got K = {}, k0 = {}",
                self.k_terms, self.k0
            )));
        }
        if self.k_terms < 1 {
            return Err(Error::InvalidInput("need K >= 1".into()));
        }
        if 2 * self.n_max > self.n {
            return Err(Error::InvalidInput(format!(
                "need n_max <= N/2 for the patch window, got n_max = {}, N = {}",
                self.n_max, self.n
            )));
        }
        if self.n_max > 200 {
            return Err(Error::InvalidInput(
                "n_max > 200 overflows the e^{|Im z|} scale on the largest contour".into(),
            ));
        }
        Ok(())
    }
}
