//! Run manifests and the re-verification engine behind `sinetype verify`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::Result;
use crate::eval::SineType;
use crate::oracle::{count_zeros_disk_with_tol, K_RADIUS};
use crate::ZeroSet;

/// Reproducibility record written next to every command's outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub config: SolverConfig,
    pub version: String,
    /// Wall-clock stage timings; the one intentionally non-reproducible
    /// field (result files themselves are byte-deterministic).
    pub timings_ms: BTreeMap<String, f64>,
    pub certified: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Residual ceiling for accepted zeros: `|F(z_n)| ≤ 1e-10·e^{|Im z_n|}`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Re-counts the `R_m` and `K_n` populations, recomputes residuals, and
/// checks the asymptotic envelope of a claimed zero set against `F`.
pub fn run_verification(f: &SineType, zeros: &ZeroSet, cfg: &SolverConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let n_max = zeros.n_max();
    let n0 = zeros.n0();

    // Residuals.
    {
        let mut worst = (0i64, 0.0f64);
        let mut count = 0usize;
        for (n, z) in zeros.iter() {
            count += 1;
            let r = f.scaled_abs(z);
            if r > worst.1 {
                worst = (n, r);
            }
        }
        checks.push(CheckResult {
            name: "residuals".into(),
            pass: worst.1 <= RESIDUAL_TOL,
            details: format!(
                "worst scaled residual {:.3e} at n = {} over {count} zeros (tol {RESIDUAL_TOL:.1e})",
                worst.1, worst.0
            ),
        });
    }

    // K_n populations and membership for the tail.
    {
        let mut pass = true;
        let mut details = String::new();
        for n in -(n_max as i64)..=n_max as i64 {
            if n.unsigned_abs() as usize <= n0 {
                continue;
            }
            let center = Complex64::new(PI * n as f64, 0.0);
            let counted = count_zeros_disk_with_tol(f, center, K_RADIUS, cfg.contour_tol)?;
            let claimed = zeros.zero(n);
            let member = claimed.map(|z| (z - center).norm() <= K_RADIUS + 1e-9);
            if counted != 1 || member != Some(true) {
                pass = false;
                details = format!(
                    "K_{n}: winding count {counted}, claimed zero {:?}",
                    claimed.map(|z| format!("{z}"))
                );
                break;
            }
        }
        checks.push(CheckResult {
            name: "k_n_counts".into(),
            pass,
            details: if pass {
                format!("count 1 and membership verified for {n0} < |n| <= {n_max}")
            } else {
                details
            },
        });
    }

    // R_m populations: winding count vs claimed population.
    {
        let mut pass = true;
        let mut details = String::new();
        let mut ms: Vec<usize> = (1..=n_max.min(12)).collect();
        if n_max > 12 {
            ms.push(n_max);
        }
        for &m in &ms {
            let radius = PI * m as f64 + K_RADIUS;
            let counted =
                count_zeros_disk_with_tol(f, Complex64::new(0.0, 0.0), radius, cfg.contour_tol)?;
            let population = zeros
                .iter()
                .filter(|(_, z)| z.norm() <= radius)
                .count() as i64;
            if counted != 2 * m as i64 + 1 || population != counted {
                pass = false;
                details = format!(
                    "R_{m}: winding count {counted}, expected {}, file population {population}",
                    2 * m + 1
                );
                break;
            }
        }
        checks.push(CheckResult {
            name: "r_m_counts".into(),
            pass,
            details: if pass {
                format!("2m+1 confirmed for m in {ms:?}")
            } else {
                details
            },
        });
    }

    // Cluster multiplicities.
    {
        let mut pass = true;
        let mut details = String::from("no clusters");
        for cl in zeros.clusters() {
            let radius = 1e-4f64.max(20.0 * cfg.cluster_radius);
            let counted = count_zeros_disk_with_tol(f, cl.center, radius, cfg.contour_tol)?;
            details = format!(
                "cluster at {}: winding {counted}, claimed {}",
                cl.center, cl.multiplicity
            );
            if counted != cl.multiplicity as i64 {
                pass = false;
                break;
            }
        }
        checks.push(CheckResult {
            name: "cluster_multiplicity".into(),
            pass,
            details,
        });
    }

    // Monotone envelope of |ζ̃_n| over dyadic blocks beyond n0 (asymptotic
    // guard; inner-band irregularity is expected and allowed).
    {
        let mut block_max = Vec::new();
        let mut lo = (n0 + 1).max(1);
        while lo <= n_max {
            let hi = (2 * lo).min(n_max);
            let mx = (lo..=hi)
                .flat_map(|k| [k as i64, -(k as i64)])
                .filter_map(|n| zeros.zeta(n))
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            block_max.push(mx);
            lo = hi + 1;
        }
        let mut pass = true;
        for w in block_max.windows(2) {
            if w[1] > 2.0 * w[0] && w[1] > 1e-8 {
                pass = false;
            }
        }
        let shown: Vec<String> = block_max.iter().map(|v| format!("{v:.3e}")).collect();
        checks.push(CheckResult {
            name: "envelope".into(),
            pass,
            details: format!("dyadic block maxima of |zeta|: [{}]", shown.join(", ")),
        });
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { checks, pass })
}
