//! Canonical representation and evaluation of `F(z) = sin z + ∫₀¹ f(t) e^{iz(2t-1)} dt`.
//!
//! Term-by-term integration of the Fourier series of `f` gives the
//! partial-fraction form
//!
//! ```text
//! F(z) = sin z + Σ_n c_n · sin z / (z + πn),     c_n = e_n(f),
//! ```
//!
//! which is fast and uniformly accurate near the real axis where root
//! finding lives. Each summand is entire (removable singularity at `-πn`),
//! handled explicitly inside `DELTA_POLE` of the lattice.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::CoeffSeq;

/// Distance to πℤ below which the removable-singularity form is used.
pub const DELTA_POLE: f64 = 1e-2;

/// Highest derivative order supported by [`SineType::evaluate_derivative`].
pub const MAX_DERIVATIVE_ORDER: usize = 8;

/// Normalized sine-type function: coefficients of `f` on (0,1) plus the
/// normalization metadata (shift α and original leading amplitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct SineType {
    f: CoeffSeq,
    alpha: Complex64,
    m_minus: Complex64,
    m_plus: Complex64,
}

impl SineType {
    /// Wraps already-normalized data: `F(z) = sin z + ∫₀¹ f e^{iz(2t-1)} dt`.
    pub fn from_coeffs(f: CoeffSeq) -> Self {
        Self {
            f,
            alpha: Complex64::new(0.0, 0.0),
            m_minus: Complex64::new(0.0, 0.5),
            m_plus: Complex64::new(0.0, -0.5),
        }
    }

    pub fn f_coeffs(&self) -> &CoeffSeq {
        &self.f
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn m_minus(&self) -> Complex64 {
        self.m_minus
    }

    pub fn m_plus(&self) -> Complex64 {
        self.m_plus
    }

    /// `F(z)`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.evaluate_jet(z, 0)[0]
    }

    /// `[F(z), F'(z), …, F^{(order)}(z)]` by analytic differentiation of the
    /// partial-fraction form.
    pub fn evaluate_jet(&self, z: Complex64, order: usize) -> Vec<Complex64> {
        debug_assert!(order <= MAX_DERIVATIVE_ORDER);
        let k = nearest_lattice_index(z);
        let w = z - PI * k as f64;
        let near = w.norm() <= DELTA_POLE;
        let sign_k = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };

        // sin^{(i)}(z) cycle.
        let sz = z.sin();
        let cz = z.cos();
        let sin_d = |i: usize| match i % 4 {
            0 => sz,
            1 => cz,
            2 => -sz,
            _ => -cz,
        };

        let mut out: Vec<Complex64> = (0..=order).map(sin_d).collect();

        let mut sinc = Vec::new();
        if near {
            sinc = sinc_jet(w, order);
        }

        // Falling factorials (j-i)! and binomials for the Leibniz rule.
        let mut fact = [1.0f64; MAX_DERIVATIVE_ORDER + 1];
        for i in 1..=MAX_DERIVATIVE_ORDER {
            fact[i] = fact[i - 1] * i as f64;
        }

        for (n, c) in self.f.iter() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            if near && n == -k {
                // c_{-k} · sin z/(z - πk) = c_{-k} (-1)^k sinc(w).
                for (j, o) in out.iter_mut().enumerate() {
                    *o += c * sign_k * sinc[j];
                }
                continue;
            }
            let denom = z + PI * n as f64;
            // inv[p] = 1/denom^{p+1}.
            let mut inv = [Complex64::new(0.0, 0.0); MAX_DERIVATIVE_ORDER + 1];
            inv[0] = denom.finv();
            for p in 1..=order {
                inv[p] = inv[p - 1] * inv[0];
            }
            for j in 0..=order {
                let mut term = Complex64::new(0.0, 0.0);
                for i in 0..=j {
                    let binom = fact[j] / (fact[i] * fact[j - i]);
                    let sgn = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
                    term += sin_d(i) * (binom * sgn * fact[j - i]) * inv[j - i];
                }
                out[j] += c * term;
            }
        }
        out
    }

    /// `(F(z), F'(z))` without heap allocation; the hot path for contour
    /// integration and Newton refinement.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let k = nearest_lattice_index(z);
        let w = z - PI * k as f64;
        let near = w.norm() <= DELTA_POLE;
        let sz = z.sin();
        let cz = z.cos();
        let mut f = sz;
        let mut df = cz;
        if near {
            let sign_k = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let sjet = sinc_pair(w);
            for (n, c) in self.f.iter() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                if n == -k {
                    f += c * sign_k * sjet.0;
                    df += c * sign_k * sjet.1;
                } else {
                    let inv = (z + PI * n as f64).finv();
                    let base = c * inv;
                    f += sz * base;
                    df += (cz - sz * inv) * base;
                }
            }
        } else {
            for (n, c) in self.f.iter() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let inv = (z + PI * n as f64).finv();
                let base = c * inv;
                f += sz * base;
                df += (cz - sz * inv) * base;
            }
        }
        (f, df)
    }

    /// `F^{(j)}(z)` for `0 ≤ j ≤ 8`.
    pub fn evaluate_derivative(&self, z: Complex64, order: usize) -> Result<Complex64> {
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::Precondition {
                op: "evaluate_derivative",
                msg: format!("order {order} > {MAX_DERIVATIVE_ORDER}"),
            });
        }
        Ok(self.evaluate_jet(z, order)[order])
    }

    /// `|F(z)|·e^{-|Im z|}`, the scale-free residual used everywhere.
    pub fn scaled_abs(&self, z: Complex64) -> f64 {
        self.evaluate(z).norm() * (-z.im.abs()).exp()
    }
}

pub(crate) fn nearest_lattice_index(z: Complex64) -> i64 {
    (z.re / PI).round() as i64
}

/// `(sinc(w), sinc'(w))` by the power series; `|w| ≤ DELTA_POLE`.
fn sinc_pair(w: Complex64) -> (Complex64, Complex64) {
    let w2 = w * w;
    let one = Complex64::new(1.0, 0.0);
    let s = one - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0;
    let ds = w * (-1.0 / 3.0) + w * w2 / 30.0 - w * w2 * w2 / 840.0;
    (s, ds)
}

/// `[sinc(w), sinc'(w), …]` with `sinc(w) = sin(w)/w`, by the power series;
/// only called for `|w| ≤ DELTA_POLE` where six terms reach machine
/// precision.
fn sinc_jet(w: Complex64, order: usize) -> Vec<Complex64> {
    (0..=order)
        .map(|j| {
            let mut term = Complex64::new(0.0, 0.0);
            let p_start = j.div_ceil(2);
            // Σ_p (-1)^p · (2p)(2p-1)…(2p-j+1) · w^{2p-j} / (2p+1)!
            for p in p_start..p_start + 6 {
                let mut coeff = 1.0f64;
                for i in 0..j {
                    coeff *= (2 * p - i) as f64;
                }
                let mut inv_fact = 1.0f64;
                for i in 1..=2 * p + 1 {
                    inv_fact /= i as f64;
                }
                let sgn = if p % 2 == 0 { 1.0 } else { -1.0 };
                term += w.powu((2 * p - j) as u32) * (sgn * coeff * inv_fact);
            }
            term
        })
        .collect()
}

/// Sign map `c_n ↦ (-1)^n c_n` between the (0,1) convention `ζ̃_n = e_n(g̃)`
/// and the (-1,1) convention `ζ_n = (-1)^n e_n(g)`; self-inverse.
pub fn to_symmetric_coeffs(g: &CoeffSeq) -> CoeffSeq {
    let mut out = g.clone();
    for n in -(g.half_width() as i64)..=g.half_width() as i64 {
        if n.rem_euclid(2) == 1 {
            out.set(n, -g.get(n));
        }
    }
    out
}

/// Normalizes general leading data `m_± ≠ 0` and a perturbation on (-1,1)
/// to the canonical `sin z` form.
///
/// The shift is `α = (1/2i)·log(-m_-/m_+)` (principal branch); the whole
/// function is rescaled by `λ = 1/(2i m_+ e^{iα})` and the variables changed
/// by `t ↦ (t+1)/2`, so the normalized zeros are the original zeros minus α.
/// `f_raw` holds coefficients with respect to `e^{iπnt}` on (-1,1).
///
/// For `α ∉ πℤ` the factor `e^{iαt}` spreads the spectrum; the output
/// window then truncates coefficients decaying like `1/n`.
pub fn normalize(
    m_minus: Complex64,
    m_plus: Complex64,
    f_raw: &CoeffSeq,
    out_half_width: usize,
) -> Result<SineType> {
    if m_minus.norm_sqr() == 0.0 || m_plus.norm_sqr() == 0.0 {
        return Err(Error::Precondition {
            op: "normalize",
            msg: "degenerate leading term: m_- and m_+ must be nonzero".into(),
        });
    }
    let ratio = -m_minus / m_plus;
    let mut alpha = ratio.ln() / Complex64::new(0.0, 2.0);
    if alpha.norm() < 1e-14 {
        alpha = Complex64::new(0.0, 0.0);
    }
    let lambda =
        (Complex64::new(0.0, 2.0) * m_plus * (Complex64::i() * alpha).exp()).finv();
    let front = 2.0 * lambda * (-Complex64::i() * alpha).exp();

    let mut f = CoeffSeq::zero(out_half_width);
    if alpha.norm_sqr() == 0.0 {
        // Φ(q) = δ_{q0}: plain (-1)^m twist and rescale.
        for (m, c) in f_raw.iter() {
            if m.unsigned_abs() as usize > out_half_width || c.norm_sqr() == 0.0 {
                continue;
            }
            let sgn = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            f.set(m, front * (Complex64::i() * alpha).exp() * sgn * c);
        }
    } else {
        // e_n(f̃) = 2λ e^{-iα} Σ_m (-1)^m c_m Φ(m-n),
        // Φ(q) = ∫₀¹ e^{2i(πq+α)s} ds = e^{iβ} sin(β)/β with β = πq+α.
        for n in -(out_half_width as i64)..=out_half_width as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, c) in f_raw.iter() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let sgn = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let beta = PI * (m - n) as f64 + alpha;
                let phi = (Complex64::i() * beta).exp() * csinc(beta);
                acc += c * sgn * phi;
            }
            f.set(n, front * acc);
        }
    }
    Ok(SineType {
        f,
        alpha,
        m_minus,
        m_plus,
    })
}

fn csinc(b: Complex64) -> Complex64 {
    if b.norm() < 1e-4 {
        let b2 = b * b;
        Complex64::new(1.0, 0.0) - b2 / 6.0 + b2 * b2 / 120.0
    } else {
        b.sin() / b
    }
}

#[derive(Serialize, Deserialize)]
struct SineTypeDto {
    alpha: [f64; 2],
    m_minus: [f64; 2],
    m_plus: [f64; 2],
    f: CoeffSeq,
}

impl Serialize for SineType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SineTypeDto {
            alpha: [self.alpha.re, self.alpha.im],
            m_minus: [self.m_minus.re, self.m_minus.im],
            m_plus: [self.m_plus.re, self.m_plus.im],
            f: self.f.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SineType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = SineTypeDto::deserialize(d)?;
        Ok(SineType {
            f: dto.f,
            alpha: Complex64::new(dto.alpha[0], dto.alpha[1]),
            m_minus: Complex64::new(dto.m_minus[0], dto.m_minus[1]),
            m_plus: Complex64::new(dto.m_plus[0], dto.m_plus[1]),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::fourier_integral_quadrature;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_sine_everywhere() {
        let f = SineType::from_coeffs(CoeffSeq::zero(0));
        for z in [
            c(0.0, 0.0),
            c(3.1, -0.4),
            c(97.2, 1.0),
            c(-55.0, 4.0),
            c(PI * 31.0 + 1e-3, 0.0),
        ] {
            assert!(
                (f.evaluate(z) - z.sin()).norm() <= 1e-12 * z.sin().norm().max(1.0),
                "z = {z}"
            );
        }
    }

    #[test]
    fn constant_f_closed_form() {
        // F(z) = sin z (z+c)/z, F(0) = c.
        let cc = c(0.05, 0.0);
        let f = SineType::from_coeffs(CoeffSeq::constant(cc));
        assert!((f.evaluate(c(0.0, 0.0)) - cc).norm() < 1e-15);
        for z in [c(1.0, 1.0), c(10.0, -2.0)] {
            let expect = z.sin() * (z + cc) / z;
            assert!((f.evaluate(z) - expect).norm() < 1e-13, "z = {z}");
        }
        // Quadrature cross-check of the defining integral.
        for z in [c(0.7, 0.3), c(4.0, -1.0)] {
            let direct = z.sin() + fourier_integral_quadrature(f.f_coeffs(), z);
            assert!((f.evaluate(z) - direct).norm() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn single_harmonic_closed_form_and_zero() {
        // f = c e^{2πimt}: F(z) = sin z (1 + c/(z+πm)), zero at -πm - c.
        let cc = c(0.03, 0.0);
        let m = 2i64;
        let f = SineType::from_coeffs(CoeffSeq::delta(m, cc));
        for z in [c(1.3, 0.2), c(-7.0, -0.5)] {
            let expect = z.sin() * (Complex64::new(1.0, 0.0) + cc / (z + PI * m as f64));
            assert!((f.evaluate(z) - expect).norm() < 1e-13);
            let direct = z.sin() + fourier_integral_quadrature(f.f_coeffs(), z);
            assert!((f.evaluate(z) - direct).norm() < 1e-12);
        }
        let root = c(-PI * m as f64 - 0.03, 0.0);
        assert!(f.evaluate(root).norm() < 1e-14);
    }

    #[test]
    fn lattice_values_are_coefficients() {
        // F(πk) = (-1)^k c_{-k}.
        let mut coeffs = CoeffSeq::zero(3);
        coeffs.set(-2, c(0.1, -0.05));
        coeffs.set(1, c(0.0, 0.07));
        let f = SineType::from_coeffs(coeffs.clone());
        for k in -3i64..=3 {
            let sgn = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let expect = coeffs.get(-k) * sgn;
            assert!(
                (f.evaluate(c(PI * k as f64, 0.0)) - expect).norm() < 1e-14,
                "k = {k}"
            );
        }
    }

    #[test]
    fn branches_agree_at_the_pole_boundary() {
        // Just inside the near-pole zone the plain partial-fraction sum is
        // still usable (mild cancellation); both formulas must agree there.
        let mut coeffs = CoeffSeq::zero(4);
        coeffs.set(-1, c(0.2, 0.1));
        coeffs.set(3, c(-0.1, 0.3));
        let f = SineType::from_coeffs(coeffs.clone());
        for k in [-3i64, 1] {
            let base = PI * k as f64;
            for dir in 0..8 {
                let phase = 2.0 * PI * dir as f64 / 8.0;
                let e = c(phase.cos(), phase.sin());
                let z = base + e * (DELTA_POLE * 0.999);
                let near = f.evaluate(z);
                let mut far = z.sin();
                for (n, cc) in coeffs.iter() {
                    if cc.norm_sqr() > 0.0 {
                        far += cc * z.sin() / (z + PI * n as f64);
                    }
                }
                assert!((near - far).norm() < 1e-10, "k = {k}, dir = {dir}");
            }
        }
    }

    #[test]
    fn continuity_across_lattice_points() {
        let mut coeffs = CoeffSeq::zero(2);
        coeffs.set(2, c(0.15, 0.0));
        coeffs.set(0, c(0.0, -0.1));
        let f = SineType::from_coeffs(coeffs);
        for k in [-2i64, 0, 5] {
            let base = PI * k as f64;
            for h in [1e-3, 1e-6] {
                for dir in 0..8 {
                    let phase = 2.0 * PI * dir as f64 / 8.0;
                    let e = c(phase.cos(), phase.sin());
                    let d = (f.evaluate(base + e * h) - f.evaluate(base - e * h)).norm();
                    // |F(x+h) - F(x-h)| <= 2|F'| h; |F'| = O(1) here.
                    assert!(d < 10.0 * h, "k = {k}, h = {h}, diff = {d}");
                }
            }
        }
    }

    #[test]
    fn derivative_of_pure_sine_is_cosine() {
        let f = SineType::from_coeffs(CoeffSeq::zero(0));
        for z in [c(0.3, 0.0), c(2.0, -1.0), c(-9.0, 0.5)] {
            assert!((f.evaluate_derivative(z, 1).unwrap() - z.cos()).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut coeffs = CoeffSeq::zero(3);
        coeffs.set(1, c(0.11, -0.04));
        coeffs.set(-3, c(0.02, 0.09));
        let f = SineType::from_coeffs(coeffs);
        let mut rng = 987654321u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        let h = 1e-5;
        for _ in 0..100 {
            let z = c(20.0 * next() - 10.0, 4.0 * next() - 2.0);
            let fd = (f.evaluate(z + c(h, 0.0)) - f.evaluate(z - c(h, 0.0))) / (2.0 * h);
            let an = f.evaluate_derivative(z, 1).unwrap();
            assert!((fd - an).norm() < 1e-8, "z = {z}: {fd} vs {an}");
        }
    }

    #[test]
    fn constant_f_derivative_closed_form() {
        // F'(z) = cos z (z+c)/z + sin z (z - (z+c))/z² at z = 2+i.
        let cc = c(0.05, 0.0);
        let f = SineType::from_coeffs(CoeffSeq::constant(cc));
        let z = c(2.0, 1.0);
        let expect = z.cos() * (z + cc) / z + z.sin() * (z - (z + cc)) / (z * z);
        assert!((f.evaluate_derivative(z, 1).unwrap() - expect).norm() < 1e-13);
    }

    #[test]
    fn second_derivative_matches_m2f_integral_identity() {
        // F'' - sin'' equals the integral with (i(2t-1))²f, i.e. the same
        // evaluator fed the coefficients of M²f. Those coefficients decay
        // like 1/n² (derivative jump at the boundary), so the auxiliary
        // window W leaves an O(1/W²) tail in the comparison.
        let mut coeffs = CoeffSeq::zero(2);
        coeffs.set(1, c(0.08, 0.03));
        coeffs.set(-2, c(-0.02, 0.05));
        let f = SineType::from_coeffs(coeffs.clone());
        let kernel = crate::fourier::MomentKernel::new(2, 320);
        let m2f = kernel.weighted_coeffs(&coeffs, 2, 300);
        let g = SineType::from_coeffs(m2f);
        for z in [c(1.1, 0.4), c(-4.2, -0.3)] {
            let lhs = f.evaluate_derivative(z, 2).unwrap() + z.sin();
            let rhs = g.evaluate(z) - z.sin();
            assert!((lhs - rhs).norm() < 5e-9, "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn higher_derivatives_match_finite_differences_of_lower_jets() {
        let mut coeffs = CoeffSeq::zero(2);
        coeffs.set(1, c(0.08, 0.03));
        coeffs.set(-2, c(-0.02, 0.05));
        let f = SineType::from_coeffs(coeffs);
        let h = 1e-4;
        for j in 2..=8usize {
            for z in [c(1.1, 0.4), c(-4.2, -0.3), c(0.3, 0.0)] {
                let fd = (f.evaluate_derivative(z + c(h, 0.0), j - 1).unwrap()
                    - f.evaluate_derivative(z - c(h, 0.0), j - 1).unwrap())
                    / (2.0 * h);
                let an = f.evaluate_derivative(z, j).unwrap();
                assert!((fd - an).norm() < 1e-6, "j = {j}, z = {z}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn fast_pair_matches_jet() {
        let mut coeffs = CoeffSeq::zero(3);
        coeffs.set(1, c(0.11, -0.04));
        coeffs.set(-3, c(0.02, 0.09));
        coeffs.set(0, c(-0.03, 0.0));
        let f = SineType::from_coeffs(coeffs);
        for z in [
            c(1.3, 0.2),
            c(-7.4, -1.1),
            c(PI * 3.0 + 1e-3, 1e-4),
            c(-PI + 5e-3, 0.0),
            c(40.1, 2.0),
        ] {
            let (v, d) = f.evaluate_with_derivative(z);
            let jet = f.evaluate_jet(z, 1);
            assert!((v - jet[0]).norm() < 1e-13, "z = {z}");
            assert!((d - jet[1]).norm() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn derivative_order_capped() {
        let f = SineType::from_coeffs(CoeffSeq::zero(0));
        assert!(f.evaluate_derivative(c(1.0, 0.0), 9).is_err());
    }

    #[test]
    fn growth_surrogate_decreases() {
        let mut coeffs = CoeffSeq::zero(4);
        coeffs.set(0, c(0.2, 0.0));
        coeffs.set(3, c(0.0, 0.15));
        let f = SineType::from_coeffs(coeffs);
        let sup = |r: f64| {
            (0..720)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / 720.0 + 1e-3;
                    let z = c(r * th.cos(), r * th.sin());
                    (f.evaluate(z) - z.sin()).norm() * (-z.im.abs()).exp()
                })
                .fold(0.0f64, f64::max)
        };
        let (a, b, cc) = (sup(10.0 * PI), sup(20.0 * PI), sup(40.0 * PI));
        assert!(b <= a + 1e-3);
        assert!(cc <= b + 1e-3);
    }

    #[test]
    fn to_symmetric_is_involution_and_signs() {
        assert_eq!(
            to_symmetric_coeffs(&CoeffSeq::zero(3)),
            CoeffSeq::zero(3)
        );
        let mut g = CoeffSeq::zero(4);
        g.set(3, c(1.0, -2.0));
        g.set(-2, c(0.5, 0.5));
        assert_eq!(to_symmetric_coeffs(&to_symmetric_coeffs(&g)), g);
        let h = to_symmetric_coeffs(&CoeffSeq::delta(3, c(1.0, 0.0)));
        assert_eq!(h.get(3), c(-1.0, 0.0));
    }

    #[test]
    fn normalize_already_normalized() {
        let st = normalize(c(0.0, 0.5), c(0.0, -0.5), &CoeffSeq::zero(2), 4).unwrap();
        assert_eq!(st.alpha(), c(0.0, 0.0));
        assert_eq!(st.f_coeffs(), &CoeffSeq::zero(4));
        assert!((st.evaluate(c(1.3, 0.2)) - c(1.3, 0.2).sin()).norm() < 1e-15);
    }

    #[test]
    fn normalize_extracts_shift() {
        // m_- = (i/2)e^{iα₀}, m_+ = (-i/2)e^{-iα₀} gives F_orig = sin(z-α₀);
        // the normalized function must be sin z.
        let a0 = 0.3f64;
        let e = c(a0.cos(), a0.sin());
        let st = normalize(c(0.0, 0.5) * e, c(0.0, -0.5) * e.conj(), &CoeffSeq::zero(1), 4)
            .unwrap();
        assert!((st.alpha() - c(a0, 0.0)).norm() < 1e-14);
        for z in [c(0.0, 0.0), c(2.0, 0.7), c(-6.1, -0.2)] {
            assert!((st.evaluate(z) - z.sin()).norm() < 1e-13);
        }
    }

    #[test]
    fn normalize_rescales_amplitudes() {
        // m_± = ±3i has α = 0 and a pure 1/6 rescale of the perturbation;
        // zeros are unchanged, so evaluation must match the quadrature of
        // the rescaled integrand exactly (band-limited case).
        let mut raw = CoeffSeq::zero(2);
        raw.set(2, c(0.3, 0.1)); // coefficient of e^{iπ·2·t} on (-1,1)
        let st = normalize(c(0.0, 3.0), c(0.0, -3.0), &raw, 4).unwrap();
        assert_eq!(st.alpha(), c(0.0, 0.0));
        // f̃(s) = 2λ f(2s-1), λ = 1/(2i·(-3i)) = 1/6; harmonic m = 2 keeps
        // index 2 with the (+1) twist.
        assert!((st.f_coeffs().get(2) - c(0.3, 0.1) / 3.0).norm() < 1e-15);
        let z = c(1.7, -0.4);
        let direct = z.sin() + fourier_integral_quadrature(st.f_coeffs(), z);
        assert!((st.evaluate(z) - direct).norm() < 1e-12);
    }

    #[test]
    fn normalize_with_shift_matches_original_quadrature() {
        // General path: nonzero α and nonzero f. The normalized function
        // evaluated at z must match λ·F_orig(z+α) computed by direct
        // quadrature of the original integral, up to the documented window
        // truncation (coefficients decay ~ 1/n here).
        let a0 = 0.3f64;
        let e = c(a0.cos(), a0.sin());
        let m_minus = c(0.0, 0.5) * e;
        let m_plus = c(0.0, -0.5) * e.conj();
        let mut raw = CoeffSeq::zero(1);
        raw.set(1, c(0.05, 0.0));
        let hw = 512;
        let st = normalize(m_minus, m_plus, &raw, hw).unwrap();
        let lambda = (c(0.0, 2.0) * m_plus * (Complex64::i() * st.alpha()).exp()).finv();
        let (gln, glw) = crate::quad::gauss_legendre(40);
        for z in [c(0.9, 0.1), c(-2.2, -0.3)] {
            // F_orig(z+α) on (-1,1) by quadrature.
            let zz = z + st.alpha();
            let mut integral = Complex64::new(0.0, 0.0);
            for (x, w) in gln.iter().zip(glw.iter()) {
                let ft = raw.get(1) * (Complex64::i() * PI * x).exp();
                integral += ft * (Complex64::i() * zz * x).exp() * *w;
            }
            let orig = m_minus * (-Complex64::i() * zz).exp()
                + m_plus * (Complex64::i() * zz).exp()
                + integral;
            let expect = lambda * orig;
            let got = st.evaluate(z);
            // 1/n coefficient tail at hw = 512 leaves ~1e-4 truncation.
            assert!((got - expect).norm() < 5e-4, "z = {z}: {got} vs {expect}");
        }
    }

    #[test]
    fn normalize_rejects_zero_amplitudes() {
        assert!(normalize(c(0.0, 0.0), c(0.0, -0.5), &CoeffSeq::zero(0), 2).is_err());
        assert!(normalize(c(0.0, 0.5), c(0.0, 0.0), &CoeffSeq::zero(0), 2).is_err());
    }

    #[test]
    fn sine_type_serde_schema() {
        let st = SineType::from_coeffs(CoeffSeq::delta(1, c(0.2, -0.1)));
        let v = serde_json::to_value(&st).unwrap();
        assert_eq!(v["alpha"], serde_json::json!([0.0, 0.0]));
        assert_eq!(v["m_minus"], serde_json::json!([0.0, 0.5]));
        assert_eq!(v["f"]["N"], 1);
        let back: SineType = serde_json::from_value(v).unwrap();
        assert_eq!(back, st);
    }
}
