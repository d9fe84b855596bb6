//! Dense complex least-squares for the patching system.
//!
//! Householder QR with column pivoting; rank-deficient systems get the
//! basic solution (free pivots zeroed), which is what the patching step
//! needs when some prescribed zeros are already interpolated.

use num_complex::Complex64;

pub struct LsSolution {
    pub x: Vec<Complex64>,
    pub rank: usize,
    /// |R₀₀| / |R_rr| over the retained pivots.
    pub cond_estimate: f64,
    /// ‖Ax - b‖₂ against the original data.
    pub residual: f64,
}

/// Solves `min ‖Ax - b‖` for square or tall `A` given as rows.
pub fn solve_least_squares(a_rows: &[Vec<Complex64>], b: &[Complex64]) -> LsSolution {
    let m = a_rows.len();
    let n = if m == 0 { 0 } else { a_rows[0].len() };
    assert!(m >= n, "need rows >= cols");
    assert_eq!(b.len(), m);

    // Column-major working copy.
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| a_rows[i][j]).collect())
        .collect();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    let mut r_diag = vec![0.0f64; n];
    for j in 0..n {
        // Pivot on the largest remaining column norm.
        let (pivot, _) = (j..n)
            .map(|k| {
                let norm: f64 = a[k][j..].iter().map(|c| c.norm_sqr()).sum();
                (k, norm)
            })
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        a.swap(j, pivot);
        perm.swap(j, pivot);

        let sigma: f64 = a[j][j..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        r_diag[j] = sigma;
        if sigma == 0.0 {
            continue;
        }
        let alpha = a[j][j];
        let phase = if alpha.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            alpha / alpha.norm()
        };
        // v = x + phase·σ·e₁ ; H = I - 2 vv^H/‖v‖².
        let mut v: Vec<Complex64> = a[j][j..].to_vec();
        v[0] += phase * sigma;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for column in a.iter_mut().skip(j) {
            let dot: Complex64 = v
                .iter()
                .zip(column[j..].iter())
                .map(|(vi, ci)| vi.conj() * ci)
                .sum();
            let scale = dot * (2.0 / vnorm2);
            for (vi, ci) in v.iter().zip(column[j..].iter_mut()) {
                *ci -= scale * vi;
            }
        }
        let dot: Complex64 = v
            .iter()
            .zip(rhs[j..].iter())
            .map(|(vi, ci)| vi.conj() * ci)
            .sum();
        let scale = dot * (2.0 / vnorm2);
        for (vi, ci) in v.iter().zip(rhs[j..].iter_mut()) {
            *ci -= scale * vi;
        }
    }

    let r00 = r_diag[0].max(0.0);
    let tol = 1e-12 * r00;
    let rank = (0..n).take_while(|&j| r_diag[j] > tol).count();
    let cond_estimate = if rank == 0 {
        f64::INFINITY
    } else {
        r00 / r_diag[rank - 1]
    };

    // Back-substitute the leading r×r block; free variables stay zero.
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for j in (0..rank).rev() {
        let mut acc = rhs[j];
        for k in j + 1..rank {
            acc -= a[k][j] * y[k];
        }
        y[j] = acc / a[j][j];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        x[perm[j]] = y[j];
    }

    let residual = (0..m)
        .map(|i| {
            let ax: Complex64 = a_rows[i].iter().zip(x.iter()).map(|(aij, xj)| aij * xj).sum();
            (ax - b[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();

    LsSolution {
        x,
        rank,
        cond_estimate,
        residual,
    }
}
