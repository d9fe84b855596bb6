//! Forward map `f ↦ g`: the zero perturbations `ζ̃_n = e_n(g)` as the fixed
//! point of the entrywise contraction `G_γ`, patched at low indices by the
//! root oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::eval::SineType;
use crate::fourier::{gamma_from_f, reduce_gamma, CoeffSeq, GammaElement};
use crate::oracle::{localize_all, ZeroSet};

/// Contraction radius r₀ = (4ρ)⁻¹ with ρ = 1 for the L₂ instantiation.
pub const R0: f64 = 0.25;

/// One application of the nonlinear map `G_γ`, entrywise:
///
/// ```text
/// G_γ(x)_n = x_n - sin x_n - Σ_{k=0}^{K} (a_k)_n x_n^k / k!
/// ```
///
/// so a fixed point satisfies `sin x_n + Σ_k (a_k)_n x_n^k/k! = 0`. The odd
/// series is resummed by the library sine; the polynomial part is Horner.
pub fn apply_g(gamma: &GammaElement, x: &CoeffSeq) -> CoeffSeq {
    let hw = x
        .half_width()
        .max(gamma.terms().iter().map(|a| a.half_width()).max().unwrap_or(0));
    let order = gamma.order();
    let mut inv_fact = vec![1.0f64; order + 1];
    for k in 1..=order {
        inv_fact[k] = inv_fact[k - 1] / k as f64;
    }
    let mut out = CoeffSeq::zero(hw);
    for n in -(hw as i64)..=hw as i64 {
        let xn = x.get(n);
        // Horner over k with coefficients (a_k)_n / k!.
        let mut poly = gamma.term(order).get(n) * inv_fact[order];
        for k in (0..order).rev() {
            poly = poly * xn + gamma.term(k).get(n) * inv_fact[k];
        }
        out.set(n, xn - xn.sin() - poly);
    }
    out
}

/// Converged fixed point with the observed per-step contraction ratios.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub x: CoeffSeq,
    pub ratios: Vec<f64>,
    pub iterations: usize,
    /// `‖x - G_γ(x)‖` at the returned iterate.
    pub residual: f64,
}

/// Iterates `x ← G_γ(x)` from `x₀ = 0` until the update is below `fp_tol`.
///
/// Requires `‖γ‖_Γ ≤ 1/4`; the contraction factor is then ≤ 1/2 and the
/// geometric tail bounds the distance to the true fixed point by the last
/// update. Observed ratios above 0.55 signal truncation damage and abort.
pub fn solve_fixed_point(gamma: &GammaElement, cfg: &SolverConfig) -> Result<FixedPoint> {
    let norm = gamma.norm_gamma();
    if norm > R0 + 1e-12 {
        return Err(Error::GammaNormExceedsR0 { norm });
    }
    let mut x = CoeffSeq::zero(
        gamma
            .terms()
            .iter()
            .map(|a| a.half_width())
            .max()
            .unwrap_or(0),
    );
    let mut ratios = Vec::new();
    let mut prev_update: Option<f64> = None;
    for it in 0..cfg.max_iter {
        let next = apply_g(gamma, &x);
        let update = next.dist(&x);
        if let Some(prev) = prev_update {
            if prev > 100.0 * cfg.fp_tol {
                let ratio = update / prev;
                ratios.push(ratio);
                if ratio > 0.55 && update > 10.0 * cfg.fp_tol {
                    return Err(Error::ContractionViolated {
                        ratio,
                        step: it,
                    });
                }
            }
        }
        prev_update = Some(update);
        x = next;
        if update <= cfg.fp_tol {
            let residual = apply_g(gamma, &x).dist(&x);
            return Ok(FixedPoint {
                x,
                ratios,
                iterations: it + 1,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        best: Complex64::new(0.0, 0.0),
        residual: prev_update.unwrap_or(f64::NAN),
        iterations: cfg.max_iter,
    })
}

/// Output of [`forward_map`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForwardResult {
    pub g: CoeffSeq,
    pub zeros: ZeroSet,
    pub n1: usize,
    pub certified: bool,
    pub contraction_ratios: Vec<f64>,
}

/// Computes `g` with `e_n(g) = ζ̃_n` for the zeros `z_n = πn + ζ̃_n` of
/// `F_f`, and the certified zero set itself.
///
/// Pipeline: Taylor data `γ`, polynomial reduction to `‖γ̃‖ < 1/4`, the
/// contraction solve, oracle enumeration, verified tail agreement at an
/// index `n₁`, and low-index entry replacement by oracle values.
pub fn forward_map(f: &CoeffSeq, cfg: &SolverConfig) -> Result<ForwardResult> {
    forward_map_inner(f, cfg, None).map(|(r, _, _)| r)
}

pub(crate) type ReductionChoice = (usize, usize);

pub(crate) fn forward_map_inner(
    f: &CoeffSeq,
    cfg: &SolverConfig,
    fixed_reduction: Option<ReductionChoice>,
) -> Result<(ForwardResult, GammaElement, ReductionChoice)> {
    cfg.validate()?;
    if f.support_radius().unwrap_or(0) > cfg.n {
        return Err(Error::Precondition {
            op: "forward_map",
            msg: format!(
                "input support |n| <= {} exceeds the solver window N = {}; raise N",
                f.support_radius().unwrap_or(0),
                cfg.n
            ),
        });
    }
    let func = SineType::from_coeffs(f.clone());

    // (1)-(2) Taylor data, reflected into the zero-index convention, then
    // reduced until the Γ-norm admits the contraction.
    let gamma = gamma_from_f(f, cfg.k_terms, cfg.n).reflected();
    let (reduced, k0, d) = match fixed_reduction {
        Some((k0, d)) => {
            let (reduced, _) = reduce_gamma(&gamma, k0, d);
            let norm = reduced.norm_gamma();
            if norm >= R0 {
                return Err(Error::ReductionExhausted { norm, k0, d });
            }
            (reduced, k0, d)
        }
        None => escalate_reduction(&gamma, cfg)?,
    };

    // (3) contraction solve.
    let solve = solve_fixed_point(&reduced, cfg)?;
    let x = &solve.x;

    // (4) independent enumeration.
    let zeros = localize_all(&func, cfg.n_max, cfg)?;

    // (5) verified agreement index n₁.
    let n0_prime = (1..=cfg.n as i64)
        .rev()
        .find(|&n| x.get(n).norm() >= PI / 12.0 || x.get(-n).norm() >= PI / 12.0)
        .unwrap_or(0) as usize;
    let n_base = d.max(zeros.n0()).max(n0_prime);
    if n_base > cfg.n / 2 {
        return Err(Error::PatchWindowExhausted(format!(
            "patch base {n_base} exceeds N/2 = {}",
            cfg.n / 2
        )));
    }
    let agrees = |n: i64| -> bool {
        match zeros.zeta(n) {
            Some(zeta) => (x.get(n) - zeta).norm() <= cfg.patch_tol,
            None => false,
        }
    };
    let mut n1_verified = None;
    for cand in n_base..=cfg.n_max {
        let ok = ((cand as i64 + 1)..=cfg.n_max as i64).all(|n| agrees(n) && agrees(-n));
        if ok {
            n1_verified = Some(cand);
            break;
        }
    }
    let (n1_raw, tail_verified) = match n1_verified {
        Some(n1) if n1 < cfg.n_max => (n1, true),
        _ => (cfg.n_max, false),
    };
    let n1 = (n1_raw + cfg.n1_margin).min(cfg.n_max);

    // (6) entry replacement per the patched assembly.
    let mut g = CoeffSeq::zero(cfg.n.max(x.half_width()));
    for n in -(g.half_width() as i64)..=g.half_width() as i64 {
        let value = if n.unsigned_abs() as usize <= n1 {
            zeros
                .zeta(n)
                .expect("oracle covers |n| <= n1 <= n_max")
        } else {
            x.get(n)
        };
        g.set(n, value);
    }

    let result = ForwardResult {
        g,
        zeros,
        n1,
        certified: tail_verified,
        contraction_ratios: solve.ratios.clone(),
    };
    Ok((result, reduced, (k0, d)))
}

/// Doubles `d` and increments `k₀` until `‖γ̃‖_Γ < 0.2` (hard caps d ≤ N/2,
/// k₀ ≤ K); borderline norms below 1/4 are still accepted.
fn escalate_reduction(
    gamma: &GammaElement,
    cfg: &SolverConfig,
) -> Result<(GammaElement, usize, usize)> {
    let mut k0 = cfg.k0.min(cfg.k_terms);
    let mut d = cfg.d.max(1);
    loop {
        let (reduced, _) = reduce_gamma(gamma, k0, d);
        let norm = reduced.norm_gamma();
        if norm < 0.2 {
            return Ok((reduced, k0, d));
        }
        let mut progressed = false;
        if d < cfg.n / 2 {
            d = (2 * d).min(cfg.n / 2);
            progressed = true;
        }
        if k0 < cfg.k_terms {
            k0 += 1;
            progressed = true;
        }
        if !progressed {
            if norm < R0 {
                return Ok((reduced, k0, d));
            }
            return Err(Error::ReductionExhausted { norm, k0, d });
        }
    }
}

/// Continuation of `forward_map` along the segment `f_s = f0 + s(f1 - f0)`.
///
/// Requires simple zeros along the whole path (a multiple zero is a branch
/// point, where no continuous enumeration exists); keeps one fixed
/// polynomial reduction so consecutive solutions obey the Lipschitz bound
/// `‖x̃(γ) - x̃(γ')‖ ≤ 2‖γ - γ'‖_Γ`.
pub fn track_branch(
    f0: &CoeffSeq,
    f1: &CoeffSeq,
    steps: usize,
    cfg: &SolverConfig,
) -> Result<Vec<CoeffSeq>> {
    if steps < 1 {
        return Err(Error::Precondition {
            op: "track_branch",
            msg: "need steps >= 1".into(),
        });
    }
    // Oracle precheck: a multiple zero anywhere blocks continuous branches.
    let start_zeros = localize_all(&SineType::from_coeffs(f0.clone()), cfg.n_max, cfg)?;
    if !start_zeros.all_simple() {
        return Err(Error::BranchPoint {
            s: 0.0,
            msg: "f0 has a multiple zero; enumeration is a Puiseux branch here".into(),
        });
    }
    let mut path = Vec::with_capacity(steps + 1);
    let mut reduction: Option<ReductionChoice> = None;
    let mut prev: Option<(CoeffSeq, GammaElement)> = None;
    for j in 0..=steps {
        let s = j as f64 / steps as f64;
        let fs = f0.add(&f1.sub(f0).scaled(Complex64::new(s, 0.0)));
        let (result, reduced, chosen) = forward_map_inner(&fs, cfg, reduction)?;
        reduction = Some(chosen);
        if !result.zeros.all_simple() {
            return Err(Error::BranchPoint {
                s,
                msg: "multiple zero on the path; enumeration is a Puiseux branch here".into(),
            });
        }
        // Solver output before patching = entries of g beyond n1; recompute
        // x̃ from the reduced data for the Lipschitz check instead.
        let x = solve_fixed_point(&reduced, cfg)?.x;
        if let Some((x_prev, gamma_prev)) = &prev {
            let dx = x.dist(x_prev);
            let dgamma = reduced.sub(gamma_prev)?.norm_gamma();
            if dx > 2.0 * dgamma + 1e-10 {
                return Err(Error::BranchPoint {
                    s,
                    msg: format!(
                        "Lipschitz surrogate violated: ‖Δx‖ = {dx:.3e} > 2‖Δγ‖ = {:.3e}",
                        2.0 * dgamma
                    ),
                });
            }
        }
        prev = Some((x, reduced));
        path.push(result.g);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::gamma_from_f;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gamma_of(terms: Vec<CoeffSeq>) -> GammaElement {
        GammaElement::new(terms).unwrap()
    }

    fn small_cfg(n_max: usize) -> SolverConfig {
        SolverConfig {
            n: 32,
            n_max,
            pad: 16,
            d: 2,
            ..Default::default()
        }
    }

    #[test]
    fn apply_g_zero_gamma_zero_x() {
        let g = gamma_of(vec![CoeffSeq::zero(2); 3]);
        assert_eq!(apply_g(&g, &CoeffSeq::zero(2)), CoeffSeq::zero(2));
    }

    #[test]
    fn apply_g_zero_gamma_is_x_minus_sin() {
        // With γ = 0 the map reduces to the odd series x - sin x =
        // Σ_{k≥1} (-1)^{k+1} x^{2k+1}/(2k+1)!.
        let g = gamma_of(vec![CoeffSeq::zero(3); 2]);
        let vals = [c(0.5, 0.0), c(-0.3, 0.2), c(0.0, -0.45)];
        for v in vals {
            let out = apply_g(&g, &CoeffSeq::delta(0, v)).get(0);
            let mut series = Complex64::new(0.0, 0.0);
            let mut term = v * v * v / 6.0; // x³/3!
            for k in 1..=25 {
                let sgn = if k % 2 == 1 { 1.0 } else { -1.0 };
                series += term * sgn;
                let kk = (2 * k + 2) as f64 * (2 * k + 3) as f64;
                term *= v * v / kk;
            }
            assert!((out - series).norm() < 1e-15, "v = {v}");
        }
    }

    #[test]
    fn apply_g_zero_x_gives_minus_a0() {
        let a0 = CoeffSeq::delta(2, c(0.1, -0.05));
        let g = gamma_of(vec![a0.clone(), CoeffSeq::zero(2), CoeffSeq::zero(2)]);
        let out = apply_g(&g, &CoeffSeq::zero(2));
        assert_eq!(out, a0.scaled(c(-1.0, 0.0)));
    }

    #[test]
    fn fixed_point_zero_gamma() {
        let cfg = SolverConfig::default();
        let g = gamma_of(vec![CoeffSeq::zero(4); 3]);
        let fp = solve_fixed_point(&g, &cfg).unwrap();
        assert_eq!(fp.x, CoeffSeq::zero(4));
    }

    #[test]
    fn fixed_point_solves_arcsin_equation() {
        // a₀ = 0.1 δ_{n=5}: the entry-5 equation is sin x + 0.1 = 0.
        let cfg = SolverConfig::default();
        let mut a0 = CoeffSeq::zero(6);
        a0.set(5, c(0.1, 0.0));
        let g = gamma_of(vec![a0, CoeffSeq::zero(6), CoeffSeq::zero(6)]);
        let fp = solve_fixed_point(&g, &cfg).unwrap();
        let expect = -0.1f64.asin();
        assert!((fp.x.get(5) - c(expect, 0.0)).norm() < 1e-13);
        for n in -6i64..=6 {
            if n != 5 {
                assert_eq!(fp.x.get(n), c(0.0, 0.0));
            }
        }
        // Geometric iterate-count bound at contraction factor 1/2.
        let bound = (0.1f64 / cfg.fp_tol).log2().ceil() as usize + 2;
        assert!(fp.iterations <= bound, "{} > {bound}", fp.iterations);
    }

    #[test]
    fn fixed_point_rejects_large_gamma() {
        let cfg = SolverConfig::default();
        let g = gamma_of(vec![CoeffSeq::constant(c(0.3, 0.0))]);
        assert!(matches!(
            solve_fixed_point(&g, &cfg),
            Err(Error::GammaNormExceedsR0 { .. })
        ));
    }

    #[test]
    fn forward_map_zero() {
        let cfg = small_cfg(8);
        let r = forward_map(&CoeffSeq::zero(4), &cfg).unwrap();
        assert!(r.g.norm_x_hat() < 1e-12);
        assert!(r.certified);
    }

    #[test]
    fn forward_map_constant_closed_form() {
        // f ≡ c: the only perturbed zero is z₀ = -c, so e₀(g) = -c and all
        // other entries vanish.
        let cfg = small_cfg(8);
        let cc = 0.05;
        let r = forward_map(&CoeffSeq::constant(c(cc, 0.0)), &cfg).unwrap();
        assert!((r.g.get(0) - c(-cc, 0.0)).norm() < 1e-10, "{}", r.g.get(0));
        for n in 1..=8i64 {
            assert!(r.g.get(n).norm() < 1e-10, "n = {n}");
            assert!(r.g.get(-n).norm() < 1e-10, "n = -{n}");
        }
        assert!(r.certified);
    }

    #[test]
    fn forward_map_harmonic_closed_form() {
        // f = c e^{2πi·2t}: zero at -2π - c, i.e. e_{-2}(g) = -c exactly.
        let cfg = small_cfg(8);
        let cc = 0.03;
        let r = forward_map(&CoeffSeq::delta(2, c(cc, 0.0)), &cfg).unwrap();
        assert!(
            (r.g.get(-2) - c(-cc, 0.0)).norm() < 1e-9,
            "e_-2 = {}",
            r.g.get(-2)
        );
        for n in -8i64..=8 {
            if n != -2 {
                assert!(r.g.get(n).norm() < 1e-9, "n = {n}: {}", r.g.get(n));
            }
        }
    }

    #[test]
    fn forward_map_zeros_match_assembled_g() {
        let cfg = small_cfg(8);
        let mut f = CoeffSeq::zero(3);
        f.set(1, c(0.02, 0.015));
        f.set(-2, c(-0.01, 0.02));
        let r = forward_map(&f, &cfg).unwrap();
        for (n, z) in r.zeros.iter() {
            let rebuilt = PI * n as f64 + r.g.get(n);
            assert!((rebuilt - z).norm() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn track_branch_constant_path() {
        let cfg = small_cfg(6);
        let f = CoeffSeq::delta(1, c(0.02, 0.0));
        let path = track_branch(&f, &f, 3, &cfg).unwrap();
        assert_eq!(path.len(), 4);
        for g in &path[1..] {
            assert!(g.dist(&path[0]) < 1e-12);
        }
    }

    #[test]
    fn track_branch_constant_family() {
        // f_s ≡ 0.05 s : e₀(g_s) = -0.05 s exactly.
        let cfg = small_cfg(6);
        let f0 = CoeffSeq::zero(0);
        let f1 = CoeffSeq::constant(c(0.05, 0.0));
        let path = track_branch(&f0, &f1, 8, &cfg).unwrap();
        for (j, g) in path.iter().enumerate() {
            let s = j as f64 / 8.0;
            assert!(
                (g.get(0) - c(-0.05 * s, 0.0)).norm() < 1e-9,
                "step {j}: {}",
                g.get(0)
            );
        }
    }

    #[test]
    fn forward_map_rejects_oversized_input() {
        let cfg = small_cfg(8);
        let wide = CoeffSeq::delta(33, c(0.01, 0.0));
        assert!(matches!(
            forward_map(&wide, &cfg),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn gamma_reflection_used_by_forward_is_isometric() {
        let mut f = CoeffSeq::zero(3);
        f.set(2, c(0.05, 0.01));
        let g = gamma_from_f(&f, 6, 16);
        assert!((g.norm_gamma() - g.reflected().norm_gamma()).abs() < 1e-15);
    }
}
