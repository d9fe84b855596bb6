//! Gauss–Legendre quadrature helpers.
//!
//! Used for the oscillatory integrals behind the moment kernel and as the
//! independent quadrature oracle cross-checking the partial-fraction
//! evaluator.

use num_complex::Complex64;

use crate::fourier::CoeffSeq;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Nodes found by Newton iteration on the Legendre recurrence; accurate to
/// machine precision for the small orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre evaluation of `∫₀¹ f(t) e^{iz(2t-1)} dt` with `f`
/// reconstructed from its Fourier coefficients at the quadrature nodes.
///
/// This is the slow, direct oracle for the partial-fraction evaluator; panel
/// count adapts to the oscillation rate `2|z| + 2π N`.
pub fn fourier_integral_quadrature(f: &CoeffSeq, z: Complex64) -> Complex64 {
    let n = f.half_width() as f64;
    let rate = 2.0 * z.norm() + 2.0 * std::f64::consts::PI * n;
    let panels = ((rate / 6.0).ceil() as usize).max(4);
    let (nodes, weights) = gauss_legendre(12);
    let h = 1.0 / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let t = a + 0.5 * h * (x + 1.0);
            let ft = f.eval_function(t);
            let kernel = (Complex64::i() * z * (2.0 * t - 1.0)).exp();
            acc += ft * kernel * (0.5 * h * w);
        }
    }
    acc
}
