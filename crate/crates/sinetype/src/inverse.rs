//! Inverse map `g ↦ f`: the unique `f` whose `F_f` vanishes at
//! `z_n = πn + e_n(g)`.
//!
//! Small data inverts the operator `A_g` by its Neumann series; general data
//! is split into a trigonometric polynomial plus a small remainder, and the
//! low-index zeros are restored by a dense (2m+1)-dimensional patching
//! system with derivative conditions at repeated values.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::eval::{SineType, MAX_DERIVATIVE_ORDER};
use crate::fourier::{entrywise_product, entrywise_sin, CoeffSeq, MomentKernel};
use crate::linalg::solve_least_squares;
use crate::oracle::{localize_all, ZeroSet, K_RADIUS};

/// Series order for the operator `A_g` inside the Neumann inversion; the
/// neglected tail is below `(1/2)^{K+1}/(K+1)!`.
const INVERT_TERMS: usize = 24;

/// Grid size for the L₁ quadrature estimates.
const L1_GRID: usize = 4096;

/// `Σ_{k=1}^{K} e(M^k f)·y^k / k!` where `y` is the coefficient data of g.
fn ag_correction(
    y: &CoeffSeq,
    f: &CoeffSeq,
    k_terms: usize,
    kernel: &MomentKernel,
) -> CoeffSeq {
    let hw = y.half_width().max(f.half_width());
    let mut acc = CoeffSeq::zero(hw);
    let mut y_pow = {
        let (resized, _) = y.resized(hw);
        resized
    };
    let y_base = y_pow.clone();
    let mut inv_fact = 1.0f64;
    for k in 1..=k_terms {
        inv_fact /= k as f64;
        let mkf = kernel.weighted_coeffs(f, k, hw);
        acc = acc.add(&entrywise_product(&mkf, &y_pow).scaled(Complex64::new(inv_fact, 0.0)));
        if k < k_terms {
            y_pow = entrywise_product(&y_pow, &y_base);
        }
    }
    acc
}

/// The bounded operator `A_g(f) = f + F⁻¹ Σ_{k≥1} e(M^k f) e^k(g)/k!`,
/// truncated at K terms; `‖A_g - I‖ ≤ e^{‖g‖} - 1`.
pub fn apply_ag(g: &CoeffSeq, f: &CoeffSeq, k_terms: usize) -> CoeffSeq {
    let kernel = MomentKernel::new(
        k_terms,
        g.half_width().max(f.half_width()) * 2 + 1,
    );
    let (f_resized, _) = f.resized(g.half_width().max(f.half_width()));
    f_resized.add(&ag_correction(g, f, k_terms, &kernel))
}

/// Solves `A_g f = h` by the fixed-point iteration `f ← h - (A_g - I)f`.
///
/// Requires `‖g‖ ≤ 1/2`, which makes `‖A_g - I‖ ≤ e^{1/2} - 1 < 1`; the a
/// posteriori residual `‖A_g f - h‖ ≤ 2·tol` is verified before returning.
pub fn invert_ag(g: &CoeffSeq, h: &CoeffSeq, tol: f64) -> Result<CoeffSeq> {
    let norm = g.norm_x_hat();
    if norm > 0.5 + 1e-12 {
        return Err(Error::GTooLargeForNeumann { norm });
    }
    let hw = g.half_width().max(h.half_width());
    let kernel = MomentKernel::new(INVERT_TERMS, 2 * hw + 1);
    let (h_resized, _) = h.resized(hw);
    let mut f = h_resized.clone();
    for _ in 0..200 {
        let next = h_resized.sub(&ag_correction(g, &f, INVERT_TERMS, &kernel));
        let update = next.dist(&f);
        f = next;
        if update <= tol {
            let residual = f
                .add(&ag_correction(g, &f, INVERT_TERMS, &kernel))
                .dist(&h_resized);
            if residual > 2.0 * tol {
                return Err(Error::InverseResidualExceeded(format!(
                    "Neumann solve residual {residual:.3e} > {:.3e}",
                    2.0 * tol
                )));
            }
            return Ok(f);
        }
    }
    Err(Error::NoConvergence {
        best: Complex64::new(0.0, 0.0),
        residual: f64::NAN,
        iterations: 200,
    })
}

const INVERT_TOL: f64 = 1e-13;

/// The map `B: g ↦ -A_g⁻¹(F⁻¹ sin e(g))`, with the index reflection that
/// pairs the zero near `πn` with coefficient index `-n`.
///
/// Requires `‖g‖ ≤ 1/2` and `‖g‖_{L₁} < π/2`; the postcondition
/// `F_f(πn + e_n(g)) ≈ 0` is verified before returning.
pub fn b_map(g: &CoeffSeq, cfg: &SolverConfig) -> Result<CoeffSeq> {
    let norm = g.norm_x_hat();
    if norm > 0.5 + 1e-12 {
        return Err(Error::Precondition {
            op: "b_map",
            msg: format!("need ||g|| <= 1/2, got {norm:.6}"),
        });
    }
    let (l1, _step) = g.l1_norm_estimate(L1_GRID);
    if l1 >= PI / 2.0 {
        return Err(Error::Precondition {
            op: "b_map",
            msg: format!("need ||g||_L1 < pi/2, got {l1:.6}"),
        });
    }
    let y = g.reflected();
    let f = invert_ag(&y, &entrywise_sin(&y).scaled(Complex64::new(-1.0, 0.0)), INVERT_TOL)?;

    // Interpolation postcondition at the prescribed zeros.
    let func = SineType::from_coeffs(f.clone());
    let check_to = (g.half_width() + 2).min(cfg.n_max.max(8)) as i64;
    let mut worst = (0i64, 0.0f64);
    for n in -check_to..=check_to {
        let z = Complex64::new(PI * n as f64, 0.0) + g.get(n);
        let r = func.scaled_abs(z);
        if r > worst.1 {
            worst = (n, r);
        }
    }
    if worst.1 > cfg.res_tol {
        return Err(Error::InverseResidualExceeded(format!(
            "b_map residual {:.3e} at n = {} (tol {:.1e}); window truncation suspected",
            worst.1, worst.0, cfg.res_tol
        )));
    }
    Ok(f)
}

/// Output of [`inverse_map`]; serializes to the documented result schema.
#[derive(Debug, Clone)]
pub struct InverseResult {
    pub f: CoeffSeq,
    pub m: usize,
    pub eps: f64,
    pub alphas: Vec<Complex64>,
    /// Scaled residuals `|F_f(z_n)| e^{-|Im z_n|}` over the checked window.
    pub residuals: Vec<f64>,
    pub condition_number: f64,
    /// Oracle re-enumeration of the constructed function.
    pub zeros: Option<ZeroSet>,
}

#[derive(Serialize, Deserialize)]
struct InverseResultDto {
    f: CoeffSeq,
    m: usize,
    eps: f64,
    alphas: Vec<[f64; 2]>,
    residuals: Vec<f64>,
    condition_number: f64,
}

impl Serialize for InverseResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InverseResultDto {
            f: self.f.clone(),
            m: self.m,
            eps: self.eps,
            alphas: self.alphas.iter().map(|a| [a.re, a.im]).collect(),
            residuals: self.residuals.clone(),
            condition_number: self.condition_number,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InverseResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = InverseResultDto::deserialize(d)?;
        Ok(InverseResult {
            f: dto.f,
            m: dto.m,
            eps: dto.eps,
            alphas: dto
                .alphas
                .iter()
                .map(|a| Complex64::new(a[0], a[1]))
                .collect(),
            residuals: dto.residuals,
            condition_number: dto.condition_number,
            zeros: None,
        })
    }
}

/// Builds the unique `f` with `F_f(πn + e_n(g)) = 0` for all `n`, allowing
/// repeated low-index values (zeros of higher multiplicity).
///
/// The splitting step removes a degree-`m` trigonometric polynomial until
/// the remainder is inside both Neumann bounds; the 2m+1 perturbed
/// functions `g̃ + ε e^{2πilt}` then span the patching system that restores
/// the prescribed low-index zeros with derivative conditions.
pub fn inverse_map(g: &CoeffSeq, cfg: &SolverConfig) -> Result<InverseResult> {
    cfg.validate()?;
    let hw = g.half_width();

    // (0) m₀: beyond it every prescribed perturbation is below π/2.
    let mut m0 = 0usize;
    for (n, c) in g.iter() {
        if c.norm() >= PI / 2.0 {
            m0 = m0.max(n.unsigned_abs() as usize);
        }
    }

    // (1) split degree m: both norm margins >= 10% and the low set keeps
    // clear of the tail zeros. The removed polynomial may be zero (small
    // data), in which case the base inverse already interpolates everything
    // and the patch coefficients come out zero.
    let check_to = (hw + 2).max(cfg.n_max.min(hw + 8)) as i64;
    let m_start = m0.max(cfg.split_degree_min.unwrap_or(0));
    let m_cap = hw.max(m0) + 8;
    let mut chosen: Option<(usize, CoeffSeq)> = None;
    'split: for m in m_start..=m_cap {
        for remove in [false, true] {
            let g_tail = if remove {
                g.sub(&g.partial_sum(m))
            } else {
                g.clone()
            };
            if g_tail.norm_x_hat() > 0.45 {
                continue;
            }
            let (l1, _) = g_tail.l1_norm_estimate(L1_GRID);
            if l1 > 0.45 * PI {
                continue;
            }
            // Disjointness of prescribed low values from the tail zeros.
            let low: Vec<Complex64> = (-(m as i64)..=m as i64)
                .map(|n| Complex64::new(PI * n as f64, 0.0) + g.get(n))
                .collect();
            let mut ok = true;
            'disj: for j in -check_to..=check_to {
                if j.unsigned_abs() as usize <= m {
                    continue;
                }
                let tail_zero = Complex64::new(PI * j as f64, 0.0) + g_tail.get(j);
                for w in &low {
                    if (w - tail_zero).norm() < K_RADIUS {
                        ok = false;
                        break 'disj;
                    }
                }
            }
            if ok {
                chosen = Some((m, g_tail));
                break 'split;
            }
        }
    }
    let (m, g_tail) = chosen.ok_or_else(|| {
        Error::SplitExhausted(format!(
            "no split degree m in [{m_start}, {m_cap}] satisfies the norm margins and disjointness"
        ))
    })?;

    // (2) base inverse of the small remainder.
    let f_base = b_map(&g_tail, cfg)?;
    let g_fn = SineType::from_coeffs(f_base.clone());
    let zeta = |n: i64| Complex64::new(PI * n as f64, 0.0) + g_tail.get(n);

    // (3) perturbed inverses f̃_l for the patch directions.
    let (l1_tail, _) = g_tail.l1_norm_estimate(L1_GRID);
    let eps = cfg
        .eps_perturb
        .min((0.5 - g_tail.norm_x_hat()) / 4.0)
        .min((PI / 2.0 - l1_tail) / 4.0);
    if eps < 1e-6 {
        return Err(Error::SplitExhausted(format!(
            "no room for the patch perturbation: eps = {eps:.3e}"
        )));
    }
    let window = hw.max(m);
    let mut f_perturbed = Vec::with_capacity(2 * m + 1);
    for l in -(m as i64)..=m as i64 {
        let (mut gl, _) = g_tail.resized(window);
        gl.set(l, gl.get(l) + Complex64::new(eps, 0.0));
        let fl = b_map(&gl, cfg)?;
        f_perturbed.push(SineType::from_coeffs(fl));
    }

    // Structure check: G_l keeps ζ_k for k ≠ l and loses ζ_l.
    for (idx, gl_fn) in f_perturbed.iter().enumerate() {
        let l = idx as i64 - m as i64;
        let at_own = gl_fn.scaled_abs(zeta(l));
        if at_own < eps * 1e-4 {
            return Err(Error::PatchSystemIllConditioned(format!(
                "perturbed function did not move its zero at l = {l} (|G_l(ζ_l)| = {at_own:.3e})"
            )));
        }
    }

    // (4) cluster the prescribed low-index zeros into (w_k, r_k).
    let prescribed: Vec<Complex64> = (-(m as i64)..=m as i64)
        .map(|n| Complex64::new(PI * n as f64, 0.0) + g.get(n))
        .collect();
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    'next: for &z in &prescribed {
        for grp in groups.iter_mut() {
            if (grp.0 - z).norm() <= 1e-9 {
                grp.1 += 1;
                continue 'next;
            }
        }
        groups.push((z, 1));
    }
    let max_mult = groups.iter().map(|g| g.1).max().unwrap_or(1);
    if max_mult > MAX_DERIVATIVE_ORDER + 1 {
        return Err(Error::InvalidInput(format!(
            "multiplicity {max_mult} exceeds the supported derivative order"
        )));
    }

    // (5) dense patching system Σ_l α_l (G_l - G)^{(j)}(w_k) = -G^{(j)}(w_k).
    let dim = 2 * m + 1;
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    let mut rhs: Vec<Complex64> = Vec::with_capacity(dim);
    for (w, mult) in &groups {
        let base_jet = g_fn.evaluate_jet(*w, mult - 1);
        let jets: Vec<Vec<Complex64>> = f_perturbed
            .iter()
            .map(|gl| gl.evaluate_jet(*w, mult - 1))
            .collect();
        for j in 0..*mult {
            rows.push(jets.iter().map(|jet| jet[j] - base_jet[j]).collect());
            rhs.push(-base_jet[j]);
        }
    }
    let sol = solve_least_squares(&rows, &rhs);
    let rhs_scale = rhs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    if sol.residual > 1e-9 * rhs_scale {
        return Err(Error::PatchSystemIllConditioned(format!(
            "patch solve residual {:.3e} (rank {}, cond {:.3e})",
            sol.residual, sol.rank, sol.cond_estimate
        )));
    }
    if sol.cond_estimate > cfg.cond_max {
        return Err(Error::PatchSystemIllConditioned(format!(
            "condition estimate {:.3e} above {:.1e}",
            sol.cond_estimate, cfg.cond_max
        )));
    }

    // (6) assemble f = f̃ + Σ α_l (f̃_l - f̃).
    let mut f = f_base.clone();
    for (alpha, fl) in sol.x.iter().zip(f_perturbed.iter()) {
        f = f.add(&fl.f_coeffs().sub(&f_base).scaled(*alpha));
    }

    // (7) verify all prescribed zeros, derivative conditions included.
    let func = SineType::from_coeffs(f.clone());
    let alpha_scale: f64 = 1.0 + sol.x.iter().map(|a| a.norm()).sum::<f64>();
    let tol = cfg.res_tol * alpha_scale;
    let mut residuals = Vec::new();
    for (w, mult) in &groups {
        let jet = func.evaluate_jet(*w, mult - 1);
        let scale = (-w.im.abs()).exp();
        for (j, value) in jet.iter().enumerate() {
            let r = value.norm() * scale;
            residuals.push(r);
            if r > tol * 10f64.powi(j as i32) {
                return Err(Error::InverseResidualExceeded(format!(
                    "derivative order {j} at w = {w}: residual {r:.3e} > {tol:.3e}"
                )));
            }
        }
    }
    for n in -check_to..=check_to {
        if n.unsigned_abs() as usize <= m {
            continue;
        }
        let z = Complex64::new(PI * n as f64, 0.0) + g.get(n);
        let r = func.scaled_abs(z);
        residuals.push(r);
        if r > tol {
            return Err(Error::InverseResidualExceeded(format!(
                "tail zero n = {n}: residual {r:.3e} > {tol:.3e}"
            )));
        }
    }

    // (8) oracle closure on the constructed function.
    let verify_n_max = cfg.n_max.min((2 * m + 8).max(16));
    let zeros = localize_all(&func, verify_n_max, cfg)?;

    Ok(InverseResult {
        f,
        m,
        eps,
        alphas: sol.x,
        residuals,
        condition_number: sol.cond_estimate,
        zeros: Some(zeros),
    })
}
