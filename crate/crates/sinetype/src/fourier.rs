//! Fourier-coefficient sequences and their algebra.
//!
//! Everything downstream works on truncated doubly-indexed coefficient
//! sequences: the entrywise (Hadamard) product realizes convolution of the
//! underlying L₂(0,1) functions, and multiplication by `i(2t-1)` becomes a
//! convolution with the explicit kernel `-1/(πm)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// Truncated coefficient sequence `(c_n)` for `n ∈ {-N, …, N}`.
///
/// Entries outside the window are implicitly zero; two sequences with
/// different half-widths compare equal iff they agree after zero-extension.
#[derive(Debug, Clone)]
pub struct CoeffSeq {
    half_width: usize,
    entries: Vec<Complex64>,
}

impl CoeffSeq {
    /// Builds a sequence from entries ordered `n = -N..N`.
    pub fn new(half_width: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != 2 * half_width + 1 {
            return Err(Error::InvalidInput(format!(
                "coefficient vector length {} does not match window 2*{}+1",
                entries.len(),
                half_width
            )));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput(
                "coefficient entries must be finite".into(),
            ));
        }
        Ok(Self {
            half_width,
            entries,
        })
    }

    pub fn zero(half_width: usize) -> Self {
        Self {
            half_width,
            entries: vec![Complex64::new(0.0, 0.0); 2 * half_width + 1],
        }
    }

    /// Single harmonic `c · e^{2πint}`.
    pub fn delta(n: i64, c: Complex64) -> Self {
        let hw = n.unsigned_abs() as usize;
        let mut s = Self::zero(hw);
        s.set(n, c);
        s
    }

    /// Constant function `c` (only `c₀` set).
    pub fn constant(c: Complex64) -> Self {
        Self::delta(0, c)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    #[inline]
    pub fn get(&self, n: i64) -> Complex64 {
        let hw = self.half_width as i64;
        if n < -hw || n > hw {
            Complex64::new(0.0, 0.0)
        } else {
            self.entries[(n + hw) as usize]
        }
    }

    #[inline]
    pub fn set(&mut self, n: i64, c: Complex64) {
        let hw = self.half_width as i64;
        assert!(n >= -hw && n <= hw, "index {n} outside window {hw}");
        self.entries[(n + hw) as usize] = c;
    }

    /// Iterates `(n, c_n)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let hw = self.half_width as i64;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, c)| (i as i64 - hw, *c))
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// ℓ₂ norm; equals the L₂(0,1) norm of the represented function.
    pub fn norm_x_hat(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ℓ₁ norm of the coefficients (not the L₁ norm of the function).
    pub fn coeff_l1(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).sum()
    }

    /// Largest `|n|` with `c_n ≠ 0`, or `None` for the zero sequence.
    pub fn support_radius(&self) -> Option<usize> {
        self.iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
    }

    /// Copy with the window resized to `half_width`; returns the discarded
    /// ℓ₂ mass when shrinking.
    pub fn resized(&self, half_width: usize) -> (Self, f64) {
        let mut out = Self::zero(half_width);
        let mut lost = 0.0;
        for (n, c) in self.iter() {
            if n.unsigned_abs() as usize <= half_width {
                out.set(n, c);
            } else {
                lost += c.norm_sqr();
            }
        }
        (out, lost.sqrt())
    }

    /// Index reflection `c_n ↦ c_{-n}`.
    ///
    /// The kernel `e^{iz(2t-1)}` pairs the zero near `πn` with coefficient
    /// index `-n`; this reflection moves data between the two conventions.
    pub fn reflected(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Self {
            half_width: self.half_width,
            entries,
        }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            half_width: self.half_width,
            entries: self.entries.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let hw = self.half_width.max(other.half_width);
        let mut out = Self::zero(hw);
        for n in -(hw as i64)..=hw as i64 {
            out.set(n, self.get(n) + other.get(n));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Distance in the X̂ (ℓ₂) norm, zero-extension aware.
    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).norm_x_hat()
    }

    /// Evaluates the represented function `Σ c_n e^{2πint}` at `t`.
    pub fn eval_function(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.iter() {
            let phase = 2.0 * PI * n as f64 * t;
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        acc
    }

    /// Grid-quadrature estimate of the L₁(0,1) norm of the function.
    ///
    /// Rectangle rule on `s` equispaced samples; returns `(value, step)` so
    /// callers can tighten the step when the margin is thin.
    pub fn l1_norm_estimate(&self, s: usize) -> (f64, f64) {
        let step = 1.0 / s as f64;
        let sum: f64 = (0..s)
            .map(|j| self.eval_function(j as f64 * step).norm())
            .sum();
        (sum * step, step)
    }

    /// Entries `|n| ≤ d` as their own sequence (the degree-`d` partial
    /// Fourier sum of the function).
    pub fn partial_sum(&self, d: usize) -> Self {
        let (out, _) = self.resized(d.min(self.half_width));
        out
    }
}

impl PartialEq for CoeffSeq {
    fn eq(&self, other: &Self) -> bool {
        let hw = self.half_width.max(other.half_width) as i64;
        (-hw..=hw).all(|n| self.get(n) == other.get(n))
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffSeqDto {
    #[serde(rename = "N")]
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for CoeffSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffSeqDto {
            n: self.half_width,
            re: self.entries.iter().map(|c| c.re).collect(),
            im: self.entries.iter().map(|c| c.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = CoeffSeqDto::deserialize(d)?;
        if dto.re.len() != dto.im.len() {
            return Err(serde::de::Error::custom("re/im length mismatch"));
        }
        let entries = dto
            .re
            .iter()
            .zip(dto.im.iter())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        CoeffSeq::new(dto.n, entries).map_err(serde::de::Error::custom)
    }
}

/// Complex samples `h(t_j)` at `t_j = j/S`; I/O and quadrature only, never
/// the canonical representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        let s = samples.len();
        if s == 0 || !s.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "sample count {s} must be a nonzero power of two"
            )));
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("samples must be finite".into()));
        }
        Ok(Self { samples })
    }

    pub fn from_fn(s: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new((0..s).map(|j| f(j as f64 / s as f64)).collect())
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
}

#[derive(Serialize, Deserialize)]
struct GridFunctionDto {
    #[serde(rename = "S")]
    s: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for GridFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridFunctionDto {
            s: self.samples.len(),
            re: self.samples.iter().map(|c| c.re).collect(),
            im: self.samples.iter().map(|c| c.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = GridFunctionDto::deserialize(d)?;
        if dto.re.len() != dto.s || dto.im.len() != dto.s {
            return Err(serde::de::Error::custom("sample length mismatch"));
        }
        let samples = dto
            .re
            .iter()
            .zip(dto.im.iter())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        GridFunction::new(samples).map_err(serde::de::Error::custom)
    }
}

/// Fourier coefficients `(e_n(h))_{|n|≤N}` by the discrete transform of the
/// samples; exact for trigonometric polynomials of degree ≤ N.
pub fn coeffs_from_samples(h: &GridFunction, n: usize) -> Result<CoeffSeq> {
    let s = h.sample_count();
    if s < 4 * n + 4 {
        return Err(Error::Precondition {
            op: "coeffs_from_samples",
            msg: format!("need S >= 4N+4 = {}, got S = {}", 4 * n + 4, s),
        });
    }
    // Twiddle table keeps per-term phase error at machine level.
    let tw: Vec<Complex64> = (0..s)
        .map(|k| {
            let phase = -2.0 * PI * k as f64 / s as f64;
            Complex64::new(phase.cos(), phase.sin())
        })
        .collect();
    let mut entries = Vec::with_capacity(2 * n + 1);
    for k in -(n as i64)..=n as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &hj) in h.samples().iter().enumerate() {
            let idx = (k.rem_euclid(s as i64) as usize * j) % s;
            acc += hj * tw[idx];
        }
        entries.push(acc / s as f64);
    }
    CoeffSeq::new(n, entries)
}

/// Samples of `Σ c_n e^{2πint}` on the `S`-point grid; left inverse of
/// [`coeffs_from_samples`] on band-limited inputs.
pub fn samples_from_coeffs(a: &CoeffSeq, s: usize) -> Result<GridFunction> {
    if s < 2 * a.half_width() + 2 {
        return Err(Error::Precondition {
            op: "samples_from_coeffs",
            msg: format!(
                "need S >= 2N+2 = {}, got S = {}",
                2 * a.half_width() + 2,
                s
            ),
        });
    }
    let tw: Vec<Complex64> = (0..s)
        .map(|k| {
            let phase = 2.0 * PI * k as f64 / s as f64;
            Complex64::new(phase.cos(), phase.sin())
        })
        .collect();
    let samples = (0..s)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (n, c) in a.iter() {
                let idx = (n.rem_euclid(s as i64) as usize * j) % s;
                acc += c * tw[idx];
            }
            acc
        })
        .collect();
    GridFunction::new(samples)
}

/// Entrywise (Hadamard) product; realizes convolution in L₂(0,1) with
/// `‖ab‖ ≤ ‖a‖·‖b‖`.
pub fn entrywise_product(a: &CoeffSeq, b: &CoeffSeq) -> CoeffSeq {
    let hw = a.half_width().max(b.half_width());
    let mut out = CoeffSeq::zero(hw);
    for n in -(hw as i64)..=hw as i64 {
        out.set(n, a.get(n) * b.get(n));
    }
    out
}

/// Entrywise sine; equals the series `Σ (-1)^k a^{2k+1}/(2k+1)!` resummed.
pub fn entrywise_sin(a: &CoeffSeq) -> CoeffSeq {
    let mut out = a.clone();
    for c in out.entries.iter_mut() {
        *c = c.sin();
    }
    out
}

/// Multiplication by `i(2t-1)` in coefficient space.
///
/// `(Ma)_n = -Σ_{m≠0} a_{n-m}/(πm)` on the window widened by `pad`; each
/// retained entry is exact for band-limited input, and the second return
/// value bounds the ℓ₂ mass of the discarded `|n| > N + pad` tail.
pub fn apply_m(a: &CoeffSeq, pad: usize) -> (CoeffSeq, f64) {
    let n_in = a.half_width();
    let n_out = n_in + pad;
    let mut out = CoeffSeq::zero(n_out);
    for n in -(n_out as i64)..=n_out as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in a.iter() {
            if j == n {
                continue;
            }
            acc -= c / (PI * (n - j) as f64);
        }
        out.set(n, acc);
    }
    // |(Ma)_n| <= l1 / (π(|n| - N)) for |n| > N+pad, so the tail mass is
    // bounded by (l1/π)·sqrt(2/pad).
    let l1 = a.coeff_l1();
    let discarded = if pad == 0 {
        f64::INFINITY.min(l1)
    } else {
        l1 / PI * (2.0 / pad as f64).sqrt()
    };
    (out, discarded)
}

/// Table of the moment coefficients `w_k(q) = e_q((2t-1)^k)`.
///
/// `e_n(M^k f) = i^k Σ_m f_m w_k(n-m)` turns the k-fold multiplication
/// operator into a single exact convolution, avoiding the slowly decaying
/// truncation tails of iterated [`apply_m`].
pub struct MomentKernel {
    k_max: usize,
    q_max: usize,
    /// `table[k][q]` for `q >= 0`; negative q by conjugation (real weight).
    table: Vec<Vec<Complex64>>,
}

/// Below this |q| the upward recurrence for `∫ u^k e^{-iπqu} du` is
/// unstable (k can exceed ω = πq) and quadrature is used instead.
const RECURRENCE_MIN_Q: usize = 33;

impl MomentKernel {
    pub fn new(k_max: usize, q_max: usize) -> Self {
        let mut table = vec![vec![Complex64::new(0.0, 0.0); q_max + 1]; k_max + 1];
        // k = 0: identity, w_0(q) = δ_{q0} exactly.
        table[0][0] = Complex64::new(1.0, 0.0);
        if k_max == 0 {
            return Self {
                k_max,
                q_max,
                table,
            };
        }
        for k in (0..=k_max).step_by(2).skip(1) {
            // w_k(0) = ∫₀¹(2t-1)^k dt = 1/(k+1) for even k, 0 for odd.
            table[k][0] = Complex64::new(1.0 / (k as f64 + 1.0), 0.0);
        }
        let (nodes, weights) = gauss_legendre(16);
        for q in 1..=q_max {
            let omega = PI * q as f64;
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            let ik = if q < RECURRENCE_MIN_Q {
                // Composite Gauss–Legendre of ∫_{-1}^{1} u^k e^{-iωu} du,
                // all k at once; one panel per half-oscillation.
                let panels = q.max(2);
                let h = 2.0 / panels as f64;
                let mut ik = vec![Complex64::new(0.0, 0.0); k_max + 1];
                for p in 0..panels {
                    let a = -1.0 + p as f64 * h;
                    for (x, w) in nodes.iter().zip(weights.iter()) {
                        let u = a + 0.5 * h * (x + 1.0);
                        let e = Complex64::new(0.0, -omega * u).exp() * (0.5 * h * w);
                        let mut up = Complex64::new(1.0, 0.0);
                        for ik_k in ik.iter_mut() {
                            *ik_k += e * up;
                            up *= u;
                        }
                    }
                }
                ik[0] = Complex64::new(0.0, 0.0); // sin(πq)/πq vanishes exactly
                ik
            } else {
                // Upward recurrence, stable since k_max < ω here:
                // I_k = (i(-1)^q/ω)(1 - (-1)^k) - (ik/ω) I_{k-1}, I_0 = 0.
                let mut ik = vec![Complex64::new(0.0, 0.0); k_max + 1];
                for k in 1..=k_max {
                    let jump = if k % 2 == 1 { 2.0 } else { 0.0 };
                    ik[k] = Complex64::new(0.0, sign * jump / omega)
                        - Complex64::new(0.0, k as f64 / omega) * ik[k - 1];
                }
                ik
            };
            for (k, row) in table.iter_mut().enumerate() {
                // w_k(q) = (-1)^q I_k(πq) / 2.
                row[q] = ik[k] * (0.5 * sign);
            }
        }
        Self {
            k_max,
            q_max,
            table,
        }
    }

    /// `w_k(q) = ∫₀¹ (2t-1)^k e^{-2πiqt} dt`.
    pub fn weight(&self, k: usize, q: i64) -> Complex64 {
        assert!(k <= self.k_max, "moment order {k} above table {}", self.k_max);
        let qa = q.unsigned_abs() as usize;
        assert!(qa <= self.q_max, "offset {q} above table {}", self.q_max);
        if q >= 0 {
            self.table[k][qa]
        } else {
            self.table[k][qa].conj()
        }
    }

    /// Coefficients `e_n(M^k f)` on the window `|n| ≤ out_half_width`.
    pub fn weighted_coeffs(&self, f: &CoeffSeq, k: usize, out_half_width: usize) -> CoeffSeq {
        if k == 0 {
            let (out, _) = f.resized(out_half_width);
            return out;
        }
        let ik = Complex64::i().powu(k as u32);
        let mut out = CoeffSeq::zero(out_half_width);
        for n in -(out_half_width as i64)..=out_half_width as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, c) in f.iter() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                acc += c * self.weight(k, n - m);
            }
            out.set(n, acc * ik);
        }
        out
    }
}

/// Sequence `(a_k)` of coefficient windows with the factorial-weighted norm
/// `‖a₀‖ + Σ_{k≥1} ‖a_k‖/(k-1)!`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaElement {
    terms: Vec<CoeffSeq>,
}

impl GammaElement {
    pub fn new(terms: Vec<CoeffSeq>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("gamma needs at least a₀".into()));
        }
        Ok(Self { terms })
    }

    /// Truncation order K (terms are a₀..a_K).
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize) -> &CoeffSeq {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[CoeffSeq] {
        &self.terms
    }

    pub fn norm_gamma(&self) -> f64 {
        let mut norm = self.terms[0].norm_x_hat();
        let mut fact = 1.0;
        for (k, a) in self.terms.iter().enumerate().skip(1) {
            if k > 1 {
                fact *= (k - 1) as f64;
            }
            norm += a.norm_x_hat() / fact;
        }
        norm
    }

    /// Entrywise index reflection of every term; see [`CoeffSeq::reflected`].
    pub fn reflected(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|a| a.reflected()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.terms.len() != other.terms.len() {
            return Err(Error::InvalidInput("gamma order mismatch".into()));
        }
        Self::new(
            self.terms
                .iter()
                .zip(other.terms.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }
}

/// Taylor data `a_k = e(M^k f)`, k = 0..K, on the given window.
///
/// `‖γ‖_Γ ≤ (1 + e)·‖f‖` and the neglected tail beyond K is bounded by
/// `‖f‖ Σ_{k>K} 1/(k-1)!`.
pub fn gamma_from_f(f: &CoeffSeq, k_terms: usize, window: usize) -> GammaElement {
    assert!(k_terms >= 1, "need K >= 1");
    let q_max = window + f.half_width();
    let kernel = MomentKernel::new(k_terms, q_max);
    gamma_from_f_with_kernel(f, k_terms, window, &kernel)
}

/// Same as [`gamma_from_f`] with a caller-provided kernel table.
pub fn gamma_from_f_with_kernel(
    f: &CoeffSeq,
    k_terms: usize,
    window: usize,
    kernel: &MomentKernel,
) -> GammaElement {
    let terms = (0..=k_terms)
        .map(|k| kernel.weighted_coeffs(f, k, window))
        .collect();
    GammaElement { terms }
}

/// Removes the degree-`d` partial Fourier sums from the first `k0+1` terms.
///
/// Returns the reduced element and the removed polynomials `p_k`; the caller
/// is responsible for checking `‖γ̃‖_Γ < 1/4` before the fixed-point solve.
pub fn reduce_gamma(gamma: &GammaElement, k0: usize, d: usize) -> (GammaElement, Vec<CoeffSeq>) {
    let mut terms = Vec::with_capacity(gamma.terms.len());
    let mut polys = Vec::new();
    for (k, a) in gamma.terms.iter().enumerate() {
        if k <= k0 {
            let p = a.partial_sum(d);
            terms.push(a.sub(&p));
            polys.push(p);
        } else {
            terms.push(a.clone());
        }
    }
    (GammaElement { terms }, polys)
}
