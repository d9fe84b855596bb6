//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured margins (run with `--nocapture` to see them).

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sinetype::cli::random_band_limited;
use sinetype::{
    apply_g, count_zeros_disk, forward_map, inverse_map, localize_all, solve_fixed_point,
    CoeffSeq, GammaElement, SineType, SolverConfig,
};

const K_RADIUS: f64 = PI / 6.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_coeffs(rng: &mut ChaCha8Rng, half_width: usize) -> CoeffSeq {
    let mut out = CoeffSeq::zero(half_width);
    for n in -(half_width as i64)..=half_width as i64 {
        out.set(n, c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    }
    out
}

/// Random f on the full window scaled to the requested L₁ norm.
fn random_l1_function(rng: &mut ChaCha8Rng, half_width: usize, l1_target: f64) -> CoeffSeq {
    let raw = random_coeffs(rng, half_width);
    let (l1, _) = raw.l1_norm_estimate(4096);
    raw.scaled(c(l1_target / l1, 0.0))
}

fn random_gamma(rng: &mut ChaCha8Rng, window: usize, k_terms: usize, norm_target: f64) -> GammaElement {
    let terms: Vec<CoeffSeq> = (0..=k_terms).map(|_| random_coeffs(rng, window)).collect();
    let gamma = GammaElement::new(terms).unwrap();
    let scale = norm_target / gamma.norm_gamma();
    GammaElement::new(
        gamma
            .terms()
            .iter()
            .map(|a| a.scaled(c(scale, 0.0)))
            .collect(),
    )
    .unwrap()
}

fn forward_cfg() -> SolverConfig {
    SolverConfig::default() // n = 256, n_max = 64, d = 8, pad = 128
}

#[test]
fn criterion_01_rouche_counts() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut functions = vec![CoeffSeq::zero(0)];
    for _ in 0..20 {
        functions.push(random_l1_function(&mut rng, 128, 0.98 / 8.0));
    }
    for (idx, f_coeffs) in functions.iter().enumerate() {
        let f = SineType::from_coeffs(f_coeffs.clone());
        for m in 1..=15usize {
            let got = count_zeros_disk(&f, c(0.0, 0.0), PI * m as f64 + K_RADIUS).unwrap();
            assert_eq!(got, 2 * m as i64 + 1, "f #{idx}, R_{m}");
        }
        for n in 1..=40i64 {
            for sign in [1i64, -1] {
                let center = c(PI * (sign * n) as f64, 0.0);
                let got = count_zeros_disk(&f, center, K_RADIUS).unwrap();
                assert_eq!(got, 1, "f #{idx}, K_{}", sign * n);
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed <= 60.0, "runtime {elapsed:.1}s exceeds 60s");
    println!(
        "criterion 01 (rouche counts): PASS — 21 functions, R_1..R_15 and K_1..K_40 all exact, {elapsed:.1}s"
    );
}

#[test]
fn criterion_02_contour_lower_bound() {
    let mut worst = f64::INFINITY;
    for m in 1..=20usize {
        let r = PI * m as f64 + K_RADIUS;
        for j in 0..10_000 {
            let th = 2.0 * PI * j as f64 / 10_000.0;
            let z = c(r * th.cos(), r * th.sin());
            let s = z.sin().norm() * (-z.im.abs()).exp();
            worst = worst.min(s);
            assert!(s >= 0.25 - 1e-9, "m = {m}, theta = {th}: {s}");
        }
    }
    println!("criterion 02 (contour bound): PASS — min e^-|Im z| |sin z| = {worst:.6} >= 0.25");
}

#[test]
fn criterion_03_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let cfg = SolverConfig {
        max_iter: 45,
        ..Default::default()
    };
    let mut worst_ratio = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut worst_iterations = 0usize;
    for trial in 0..50 {
        let norm_target = 0.15 + 0.10 * rng.gen::<f64>();
        let gamma = random_gamma(&mut rng, 24, 16, norm_target);
        let fp = solve_fixed_point(&gamma, &cfg)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        for &r in &fp.ratios {
            worst_ratio = worst_ratio.max(r);
            assert!(r <= 0.55, "trial {trial}: ratio {r}");
        }
        let residual = fp.x.sub(&apply_g(&gamma, &fp.x)).norm_x_hat();
        worst_residual = worst_residual.max(residual);
        worst_iterations = worst_iterations.max(fp.iterations);
        assert!(residual <= 1e-12, "trial {trial}: residual {residual:.3e}");
        assert!(fp.iterations <= 45, "trial {trial}: {} iterations", fp.iterations);
    }
    println!(
        "criterion 03 (contraction): PASS — 50 gammas, max ratio {worst_ratio:.3}, max residual {worst_residual:.2e}, max iterations {worst_iterations}"
    );
}

#[test]
fn criterion_04_lipschitz_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let cfg = SolverConfig::default();
    let mut worst_slack = f64::NEG_INFINITY;
    for trial in 0..50 {
        let gamma_norm = 0.10 + 0.10 * rng.gen::<f64>();
        let gamma = random_gamma(&mut rng, 16, 16, gamma_norm);
        let delta_norm = 0.005 + 0.04 * rng.gen::<f64>();
        let delta = random_gamma(&mut rng, 16, 16, delta_norm);
        let gamma2 = GammaElement::new(
            gamma
                .terms()
                .iter()
                .zip(delta.terms())
                .map(|(a, d)| a.add(d))
                .collect(),
        )
        .unwrap();
        if gamma2.norm_gamma() > 0.25 {
            continue;
        }
        let x1 = solve_fixed_point(&gamma, &cfg).unwrap().x;
        let x2 = solve_fixed_point(&gamma2, &cfg).unwrap().x;
        let dx = x1.dist(&x2);
        let dgamma = gamma.sub(&gamma2).unwrap().norm_gamma();
        worst_slack = worst_slack.max(dx - 2.0 * dgamma);
        assert!(
            dx <= 2.0 * dgamma + 1e-10,
            "trial {trial}: ||dx|| = {dx:.3e} > 2||dgamma|| = {:.3e}",
            2.0 * dgamma
        );
    }
    println!(
        "criterion 04 (lipschitz): PASS — 50 pairs, worst (||dx|| - 2||dgamma||) = {worst_slack:.2e}"
    );
}

#[test]
fn criterion_05_closed_form_cases() {
    let started = Instant::now();
    let cfg = SolverConfig {
        n: 64,
        n_max: 16,
        d: 4,
        pad: 32,
        ..Default::default()
    };

    // Constant f ≡ 0.05: z₀ = -0.05 and g ≡ -0.05.
    let r = forward_map(&CoeffSeq::constant(c(0.05, 0.0)), &cfg).unwrap();
    let z0 = r.zeros.zero(0).unwrap();
    assert!((z0 - c(-0.05, 0.0)).norm() <= 1e-10, "z0 = {z0}");
    assert!((r.g.get(0) - c(-0.05, 0.0)).norm() <= 1e-9);
    let mut worst_other = 0.0f64;
    for n in -(r.g.half_width() as i64)..=r.g.half_width() as i64 {
        if n != 0 {
            worst_other = worst_other.max(r.g.get(n).norm());
        }
    }
    assert!(worst_other <= 1e-9, "stray g entry {worst_other:.3e}");

    // Harmonic f = 0.03 e^{2πi·2t}: ζ̃_{-2} = -0.03, all others below 1e-9.
    let r = forward_map(&CoeffSeq::delta(2, c(0.03, 0.0)), &cfg).unwrap();
    assert!((r.g.get(-2) - c(-0.03, 0.0)).norm() <= 1e-9, "{}", r.g.get(-2));
    let mut worst_other_h = 0.0f64;
    for n in -(r.g.half_width() as i64)..=r.g.half_width() as i64 {
        if n != -2 {
            worst_other_h = worst_other_h.max(r.g.get(n).norm());
        }
    }
    assert!(worst_other_h <= 1e-9, "stray g entry {worst_other_h:.3e}");

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed <= 5.0, "runtime {elapsed:.2}s exceeds 5s");
    println!(
        "criterion 05 (closed forms): PASS — constant and harmonic cases exact, stray entries <= {:.1e}, {elapsed:.2}s",
        worst_other.max(worst_other_h)
    );
}

#[test]
fn criterion_06_oracle_equivalence() {
    let cfg = forward_cfg();
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let f = random_band_limited(600 + seed, 0.05, 16);
        let r = forward_map(&f, &cfg).unwrap();
        assert!(r.certified, "seed {seed} not certified");
        for n in -64i64..=64 {
            let rebuilt = c(PI * n as f64, 0.0) + r.g.get(n);
            let oracle = r.zeros.zero(n).unwrap();
            let err = (rebuilt - oracle).norm();
            worst = worst.max(err);
            assert!(err <= 1e-9, "seed {seed}, n = {n}: {err:.3e}");
        }
    }
    println!(
        "criterion 06 (oracle equivalence): PASS — 20 functions, worst |πn + e_n(g) - z_n| = {worst:.2e}"
    );
}

#[test]
fn criterion_07_roundtrips() {
    let started = Instant::now();
    let cfg = forward_cfg();
    let mut worst_f = 0.0f64;
    let mut worst_g = 0.0f64;
    for seed in 0..20u64 {
        let f_in = random_band_limited(700 + seed, 0.05, 16);
        let fwd = forward_map(&f_in, &cfg).unwrap();

        // g -> f recovers the input.
        let inv = inverse_map(&fwd.g, &cfg).unwrap();
        let rel_f = inv.f.dist(&f_in) / f_in.norm_x_hat();
        worst_f = worst_f.max(rel_f);
        assert!(rel_f <= 1e-6, "seed {seed}: f recovery {rel_f:.3e}");

        // f -> g recovers the prescription.
        let fwd2 = forward_map(&inv.f, &cfg).unwrap();
        let rel_g = fwd2.g.dist(&fwd.g) / fwd.g.norm_x_hat();
        worst_g = worst_g.max(rel_g);
        assert!(rel_g <= 1e-6, "seed {seed}: g recovery {rel_g:.3e}");
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed <= 120.0, "runtime {elapsed:.1}s exceeds 120s");
    println!(
        "criterion 07 (roundtrips): PASS — 20 functions, worst relative errors f: {worst_f:.2e}, g: {worst_g:.2e}, {elapsed:.1}s"
    );
}

#[test]
fn criterion_08_interpolation_with_multiplicity() {
    let cfg = SolverConfig {
        n: 64,
        n_max: 16,
        d: 4,
        pad: 32,
        ..Default::default()
    };
    // Collide z₁ = z₂ = w = 1.5π: e₁(g) = π/2, e₂(g) = -π/2.
    let w = c(1.5 * PI, 0.0);
    let mut g = CoeffSeq::zero(2);
    g.set(1, w - c(PI, 0.0));
    g.set(2, w - c(2.0 * PI, 0.0));
    let r = inverse_map(&g, &cfg).unwrap();
    let func = SineType::from_coeffs(r.f.clone());
    let f0 = func.evaluate(w).norm();
    let f1 = func.evaluate_derivative(w, 1).unwrap().norm();
    assert!(f0 <= 1e-7, "|F(w)| = {f0:.3e}");
    assert!(f1 <= 1e-6, "|F'(w)| = {f1:.3e}");

    let zeros = localize_all(&func, 16, &cfg).unwrap();
    let cluster = zeros
        .clusters()
        .iter()
        .find(|cl| (cl.center - w).norm() < 1e-6)
        .expect("no cluster reported at w");
    assert_eq!(cluster.multiplicity, 2, "cluster at {}", cluster.center);
    println!(
        "criterion 08 (multiplicity): PASS — |F(w)| = {f0:.2e}, |F'(w)| = {f1:.2e}, cluster of multiplicity 2 at w = 1.5π"
    );
}

#[test]
fn criterion_09_l2_decay() {
    let cfg = forward_cfg();
    let mut worst_fraction = 0.0f64;
    for seed in 0..5u64 {
        let f = random_band_limited(900 + seed, 0.05, 32);
        let r = forward_map(&f, &cfg).unwrap();
        let mut total = 0.0f64;
        let mut tail = 0.0f64;
        for n in -(r.g.half_width() as i64)..=r.g.half_width() as i64 {
            let mag = r.g.get(n).norm_sqr();
            total += mag;
            if n.unsigned_abs() > 64 {
                tail += mag;
            }
        }
        let fraction = tail / total;
        worst_fraction = worst_fraction.max(fraction);
        assert!(fraction <= 0.1, "seed {seed}: tail fraction {fraction:.3e}");
    }
    println!(
        "criterion 09 (l2 decay): PASS — worst tail fraction beyond |n| = 64: {worst_fraction:.2e}"
    );
}

#[test]
fn criterion_10_first_order_law() {
    let cfg = SolverConfig {
        n: 128,
        n_max: 32,
        pad: 64,
        ..Default::default()
    };
    let direction = {
        let raw = random_band_limited(1010, 1.0, 8);
        raw.scaled(c(1.0 / raw.norm_x_hat(), 0.0))
    };
    let mut defects = Vec::new();
    for scale in [0.04, 0.02, 0.01] {
        let f = direction.scaled(c(scale, 0.0));
        let r = forward_map(&f, &cfg).unwrap();
        // First-order: e_n(g) ≈ -e_{-n}(f), i.e. g ≈ -f(1-·).
        let defect = r.g.add(&f.reflected()).norm_x_hat() / (scale * scale);
        defects.push(defect);
    }
    let max = defects.iter().cloned().fold(f64::MIN, f64::max);
    let min = defects.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        max / min <= 2.0,
        "normalized defects {defects:?} vary by more than 2x"
    );
    println!(
        "criterion 10 (first-order law): PASS — ||g + f(1-.)||/||f||^2 in [{min:.4}, {max:.4}] across ||f|| = 0.04, 0.02, 0.01"
    );
}

#[test]
fn criterion_11_uniqueness_surrogate() {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let cfg_a = SolverConfig {
        n: 64,
        n_max: 16,
        pad: 32,
        eps_perturb: 0.05,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for trial in 0..10 {
        // Large enough that the splitting genuinely engages.
        let raw = random_coeffs(&mut rng, 6);
        let g = raw.scaled(c(0.48 / raw.norm_x_hat(), 0.0));
        let run_a = inverse_map(&g, &cfg_a).unwrap_or_else(|e| panic!("trial {trial} A: {e}"));
        let cfg_b = SolverConfig {
            split_degree_min: Some(run_a.m + 2),
            eps_perturb: 0.02,
            ..cfg_a.clone()
        };
        let run_b = inverse_map(&g, &cfg_b).unwrap_or_else(|e| panic!("trial {trial} B: {e}"));
        assert!(
            run_b.m >= run_a.m + 2,
            "trial {trial}: splits did not differ ({} vs {})",
            run_a.m,
            run_b.m
        );
        let diff = run_a.f.dist(&run_b.f);
        worst = worst.max(diff);
        assert!(diff <= 1e-6, "trial {trial}: ||f_A - f_B|| = {diff:.3e}");
    }
    println!(
        "criterion 11 (uniqueness surrogate): PASS — 10 prescriptions, worst ||f_A - f_B|| = {worst:.2e}"
    );
}
