//! Independent ground truth for the zeros of `F`.
//!
//! Zeros are certified by argument-principle counts over the disks
//! `R_m = {|z| ≤ πm + π/6}` and `K_n = {|z - πn| ≤ π/6}` and refined by
//! guarded Newton iteration (Muller fallback near multiple zeros).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::eval::SineType;

/// Radius of the per-index certification disk `K_n`.
pub const K_RADIUS: f64 = PI / 6.0;

/// Group of coincident zeros: center and multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Enumerated zeros `z_n = πn + ζ̃_n`, `|n| ≤ n_max`, with multiplicity
/// bookkeeping for the low indices `|n| ≤ n0`.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    n_max: usize,
    n0: usize,
    /// Slot `n + n_max`; `None` only for partially populated inputs.
    zeros: Vec<Option<Complex64>>,
    clusters: Vec<Cluster>,
    certified_m: usize,
}

impl ZeroSet {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn certified_m(&self) -> usize {
        self.certified_m
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn zero(&self, n: i64) -> Option<Complex64> {
        let m = self.n_max as i64;
        if n < -m || n > m {
            None
        } else {
            self.zeros[(n + m) as usize]
        }
    }

    /// `ζ̃_n = z_n - πn`.
    pub fn zeta(&self, n: i64) -> Option<Complex64> {
        self.zero(n).map(|z| z - PI * n as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.n_max as i64;
        self.zeros
            .iter()
            .enumerate()
            .filter_map(move |(i, z)| z.map(|z| (i as i64 - m, z)))
    }

    /// All zeros are simple (every low-index cluster has multiplicity 1).
    pub fn all_simple(&self) -> bool {
        self.clusters.iter().all(|c| c.multiplicity == 1)
    }
}

#[derive(Serialize, Deserialize)]
struct ZeroEntryDto {
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ClusterDto {
    re: f64,
    im: f64,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct ZeroSetDto {
    n0: usize,
    zeros: Vec<ZeroEntryDto>,
    clusters: Vec<ClusterDto>,
    certified_m: usize,
}

impl Serialize for ZeroSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ZeroSetDto {
            n0: self.n0,
            zeros: self
                .iter()
                .map(|(n, z)| ZeroEntryDto { n, re: z.re, im: z.im })
                .collect(),
            clusters: self
                .clusters
                .iter()
                .map(|c| ClusterDto {
                    re: c.center.re,
                    im: c.center.im,
                    mult: c.multiplicity,
                })
                .collect(),
            certified_m: self.certified_m,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZeroSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = ZeroSetDto::deserialize(d)?;
        let n_max = dto
            .zeros
            .iter()
            .map(|e| e.n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut zeros = vec![None; 2 * n_max + 1];
        for e in &dto.zeros {
            zeros[(e.n + n_max as i64) as usize] = Some(Complex64::new(e.re, e.im));
        }
        Ok(ZeroSet {
            n_max,
            n0: dto.n0,
            zeros,
            clusters: dto
                .clusters
                .iter()
                .map(|c| Cluster {
                    center: Complex64::new(c.re, c.im),
                    multiplicity: c.mult,
                })
                .collect(),
            certified_m: dto.certified_m,
        })
    }
}

enum WindingFailure {
    /// Minimum scaled |F| on the contour relative to the maximum.
    ContourTooClose(f64),
    NotStabilized(f64),
}

impl WindingFailure {
    fn defect(&self) -> f64 {
        match self {
            WindingFailure::ContourTooClose(v) | WindingFailure::NotStabilized(v) => *v,
        }
    }
}

/// Trapezoid winding number on the circle; doubles the point count until the
/// value stabilizes and is integer to `contour_tol`.
fn winding_number(
    f: &SineType,
    center: Complex64,
    radius: f64,
    contour_tol: f64,
) -> std::result::Result<i64, WindingFailure> {
    let mut points = 512usize;
    let mut prev: Option<Complex64> = None;
    while points <= 32768 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut min_s = f64::INFINITY;
        let mut max_s = 0.0f64;
        for j in 0..points {
            let theta = 2.0 * PI * j as f64 / points as f64;
            let e = Complex64::new(theta.cos(), theta.sin());
            let z = center + radius * e;
            let (value, deriv) = f.evaluate_with_derivative(z);
            let s = value.norm() * (-z.im.abs()).exp();
            min_s = min_s.min(s);
            max_s = max_s.max(s);
            acc += deriv / value * e;
        }
        if min_s <= 1e-8 * max_s.max(1e-300) {
            return Err(WindingFailure::ContourTooClose(min_s / max_s.max(1e-300)));
        }
        let w = acc * radius / points as f64;
        if let Some(p) = prev {
            let rounded = w.re.round();
            if (w - p).norm() <= 0.5 * contour_tol
                && (w - Complex64::new(rounded, 0.0)).norm() <= contour_tol
            {
                return Ok(rounded as i64);
            }
        }
        prev = Some(w);
        points *= 2;
    }
    let defect = prev
        .map(|w| (w - Complex64::new(w.re.round(), 0.0)).norm())
        .unwrap_or(f64::NAN);
    Err(WindingFailure::NotStabilized(defect))
}

/// Scaled power sums `s_p = Σ_i (z_i/R)^p` over the zeros inside the disk,
/// by the argument principle (Delves–Lyness); `s_0` must confirm `expected`.
fn contour_power_sums(
    f: &SineType,
    center: Complex64,
    radius: f64,
    expected: usize,
) -> Result<Vec<Complex64>> {
    let mut points = 2048usize;
    let mut prev: Option<Vec<Complex64>> = None;
    while points <= 65536 {
        let mut sums = vec![Complex64::new(0.0, 0.0); expected + 1];
        for j in 0..points {
            let theta = 2.0 * PI * j as f64 / points as f64;
            let e = Complex64::new(theta.cos(), theta.sin());
            let z = center + radius * e;
            let (value, deriv) = f.evaluate_with_derivative(z);
            let logd = deriv / value * (radius * e);
            // Powers of the scaled coordinate (z - center)/R ... shifted
            // moments keep conditioning uniform in the disk size.
            let u = (z - center) / radius;
            let mut up = Complex64::new(1.0, 0.0);
            for s in sums.iter_mut() {
                *s += logd * up;
                up *= u;
            }
        }
        let sums: Vec<Complex64> = sums.into_iter().map(|s| s / points as f64).collect();
        if let Some(p) = &prev {
            let drift = sums
                .iter()
                .zip(p.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            let count_ok = (sums[0] - Complex64::new(expected as f64, 0.0)).norm() < 1e-6;
            if drift < 1e-9 && count_ok {
                return Ok(sums);
            }
        }
        prev = Some(sums);
        points *= 2;
    }
    Err(Error::QuadratureFailure(format!(
        "power sums did not stabilize on |z - {center}| = {radius:.3}"
    )))
}

/// Roots of the monic polynomial with the given power sums, via Newton's
/// identities and Durand–Kerner iteration. Multiple roots come out as close
/// groups; callers cluster and re-certify them.
fn roots_from_power_sums(sums: &[Complex64]) -> Vec<Complex64> {
    let n = sums.len() - 1;
    // e_k = (1/k) Σ_{i=1..k} (-1)^{i-1} e_{k-i} s_i.
    let mut elementary = vec![Complex64::new(0.0, 0.0); n + 1];
    elementary[0] = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            let sgn = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sgn * elementary[k - i] * sums[i];
        }
        elementary[k] = acc / k as f64;
    }
    // q(u) = Σ_{k=0..n} (-1)^k e_k u^{n-k}, monic.
    let coeffs: Vec<Complex64> = (0..=n)
        .map(|k| {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            elementary[k] * sgn
        })
        .collect();
    let eval = |u: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &coeffs {
            acc = acc * u + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|j| seed.powu(j as u32 + 1)).collect();
    for _ in 0..400 {
        let mut biggest = 0.0f64;
        for j in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            if denom.norm() == 0.0 {
                roots[j] += Complex64::new(1e-6, 1e-6);
                continue;
            }
            let step = eval(roots[j]) / denom;
            roots[j] -= step;
            biggest = biggest.max(step.norm());
        }
        if biggest < 1e-13 {
            break;
        }
    }
    roots
}

/// Number of zeros of `F` (with multiplicity) in the disk of the given
/// center and radius, by the argument principle.
///
/// The radius is nudged by multiples of ±π/50 (up to 5 retries) when a zero
/// sits too close to the contour.
pub fn count_zeros_disk(f: &SineType, center: Complex64, radius: f64) -> Result<i64> {
    count_zeros_disk_with_tol(f, center, radius, 1e-3)
}

pub fn count_zeros_disk_with_tol(
    f: &SineType,
    center: Complex64,
    radius: f64,
    contour_tol: f64,
) -> Result<i64> {
    let nudges = [0.0, 1.0, -1.0, 2.0, -2.0, 3.0];
    let mut saw_close: Option<f64> = None;
    let mut last_defect = f64::NAN;
    for nudge in nudges {
        let r = radius + nudge * PI / 50.0;
        if r <= 0.0 {
            continue;
        }
        match winding_number(f, center, r, contour_tol) {
            Ok(w) => return Ok(w),
            Err(e @ WindingFailure::ContourTooClose(_)) => saw_close = Some(e.defect()),
            Err(e @ WindingFailure::NotStabilized(_)) => last_defect = e.defect(),
        }
    }
    if let Some(ratio) = saw_close {
        Err(Error::IllConditionedContour(format!(
            "zero within reach of the contour at center {center}, radius {radius:.4} (min/max |F| = {ratio:.3e})"
        )))
    } else {
        Err(Error::QuadratureFailure(format!(
            "winding defect {last_defect:.3e} at center {center}, radius {radius:.4}"
        )))
    }
}

/// Result of a Newton/Muller refinement.
#[derive(Debug, Clone)]
pub struct Refined {
    pub z: Complex64,
    pub iterations: usize,
    pub used_fallback: bool,
    /// `|F(z)|·e^{-|Im z|}` at the returned point.
    pub residual: f64,
}

const MAX_REFINE_ITER: usize = 60;

/// Newton refinement from `z0` until `|Δz| ≤ tol` and `|F| ≤ tol·e^{|Im z|}`.
///
/// Falls back to Muller's method when the derivative breaks down (the
/// multiple-zero signature); failure carries the best iterate seen.
pub fn newton_refine(f: &SineType, z0: Complex64, tol: f64) -> Result<Refined> {
    let mut z = z0;
    let mut best = z0;
    let mut best_res = f.scaled_abs(z0);

    let record = |z: Complex64, res: f64, best: &mut Complex64, best_res: &mut f64| {
        if res < *best_res {
            *best_res = res;
            *best = z;
        }
    };

    for it in 0..MAX_REFINE_ITER {
        let (value, deriv) = f.evaluate_with_derivative(z);
        let scale = (-z.im.abs()).exp();
        let res = value.norm() * scale;
        record(z, res, &mut best, &mut best_res);
        let deriv_scale = deriv.norm() * scale;
        if !deriv_scale.is_finite() || deriv_scale < 1e-8 {
            return muller_refine(f, z, tol, it, best, best_res);
        }
        let mut step = -value / deriv;
        if step.norm() > 1.0 {
            step *= 1.0 / step.norm();
        }
        z += step;
        if step.norm() <= tol {
            let res = f.scaled_abs(z);
            record(z, res, &mut best, &mut best_res);
            if res <= tol {
                return Ok(Refined {
                    z,
                    iterations: it + 1,
                    used_fallback: false,
                    residual: res,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        best,
        residual: best_res,
        iterations: MAX_REFINE_ITER,
    })
}

/// Muller iteration through three points; converges (superlinearly for
/// simple, linearly for multiple zeros) without using `F'`.
fn muller_refine(
    f: &SineType,
    z: Complex64,
    tol: f64,
    used_iters: usize,
    mut best: Complex64,
    mut best_res: f64,
) -> Result<Refined> {
    let h = Complex64::new(1e-4, 1e-4);
    let mut x0 = z - h;
    let mut x1 = z + h;
    let mut x2 = z;
    let mut f0 = f.evaluate(x0);
    let mut f1 = f.evaluate(x1);
    let mut f2 = f.evaluate(x2);
    for it in used_iters..MAX_REFINE_ITER {
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        if h1.norm() == 0.0 || h2.norm() == 0.0 {
            break;
        }
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * f2 * a).sqrt();
        let denom = if (b + disc).norm() >= (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        if denom.norm() == 0.0 {
            break;
        }
        let mut step = -2.0 * f2 / denom;
        if step.norm() > 1.0 {
            step *= 1.0 / step.norm();
        }
        let x3 = x2 + step;
        let f3 = f.evaluate(x3);
        let res = f3.norm() * (-x3.im.abs()).exp();
        if res < best_res {
            best_res = res;
            best = x3;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
        if step.norm() <= tol && res <= tol {
            return Ok(Refined {
                z: x3,
                iterations: it + 1,
                used_fallback: true,
                residual: res,
            });
        }
    }
    Err(Error::NoConvergence {
        best,
        residual: best_res,
        iterations: MAX_REFINE_ITER,
    })
}

/// Locates and certifies all zeros for `|n| ≤ n_max`.
///
/// Pipeline: per-index `K_n` counts fix an empirical `n₀`; the tail is
/// Newton-refined from `πn`; the low block inside `R_{n₀}` is found by disk
/// subdivision, refined, clustered into `(w_k, r_k)` and index-assigned by
/// real part; finally the `R_{n₀}` and `R_{n_max}` totals are re-certified.
pub fn localize_all(f: &SineType, n_max: usize, cfg: &SolverConfig) -> Result<ZeroSet> {
    if n_max < 1 {
        return Err(Error::Precondition {
            op: "localize_all",
            msg: "need n_max >= 1".into(),
        });
    }
    let m = n_max as i64;

    // (i) empirical n₀ from the K_n populations.
    let mut counts = Vec::with_capacity(2 * n_max + 1);
    for n in -m..=m {
        let c = count_zeros_disk_with_tol(
            f,
            Complex64::new(PI * n as f64, 0.0),
            K_RADIUS,
            cfg.contour_tol,
        )?;
        counts.push((n, c));
    }
    let mut n0 = 0usize;
    for &(n, c) in &counts {
        if c != 1 {
            n0 = n0.max(n.unsigned_abs() as usize);
        }
    }
    // A zero may leave its K_n without breaking the enumeration (it then
    // belongs to the low block); grow n₀ until the R_{n₀} population is the
    // full 2n₀+1.
    let expected = loop {
        if n0 > n_max / 2 {
            return Err(Error::EnumerationFailure(format!(
                "no certified low block below |n| = {n0} (n_max = {n_max}); perturbation too large"
            )));
        }
        let low_radius = PI * n0 as f64 + K_RADIUS;
        let counted =
            count_zeros_disk_with_tol(f, Complex64::new(0.0, 0.0), low_radius, cfg.contour_tol)?;
        if counted == 2 * n0 as i64 + 1 {
            break counted;
        }
        n0 += 1;
    };

    let mut zeros: Vec<Option<Complex64>> = vec![None; 2 * n_max + 1];

    // (ii) tail refinement from πn.
    for &(n, _) in counts.iter().filter(|&&(n, _)| n.unsigned_abs() as usize > n0) {
        let seed = Complex64::new(PI * n as f64, 0.0);
        let refined = refine_in_disk(f, seed, K_RADIUS, cfg.newton_tol)?;
        zeros[(n + m) as usize] = Some(refined);
    }

    // (iii) low block inside R_{n0}.
    let low_radius = PI * n0 as f64 + K_RADIUS;
    let mut clusters = low_block_clusters(f, low_radius, expected as usize, cfg)?;
    clusters.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .unwrap()
    });

    // (iv) assign low indices; multiplicity r_k consumes r_k consecutive n.
    let mut n_cursor = -(n0 as i64);
    for cl in &clusters {
        for _ in 0..cl.multiplicity {
            if n_cursor > n0 as i64 {
                return Err(Error::EnumerationFailure(
                    "low-index multiplicities exceed 2n0+1 slots".into(),
                ));
            }
            zeros[(n_cursor + m) as usize] = Some(cl.center);
            n_cursor += 1;
        }
    }
    if n_cursor != n0 as i64 + 1 {
        return Err(Error::EnumerationFailure(
            "low-index multiplicities fall short of 2n0+1 slots".into(),
        ));
    }

    // (v) total re-certification at m = n_max.
    let total = count_zeros_disk_with_tol(
        f,
        Complex64::new(0.0, 0.0),
        PI * n_max as f64 + K_RADIUS,
        cfg.contour_tol,
    )?;
    if total != 2 * m + 1 {
        return Err(Error::EnumerationFailure(format!(
            "R_{n_max} holds {total} zeros, expected {}",
            2 * n_max + 1
        )));
    }

    Ok(ZeroSet {
        n_max,
        n0,
        zeros,
        clusters,
        certified_m: n_max,
    })
}

/// Newton from the disk center with perturbed restarts; the result must stay
/// in the disk.
fn refine_in_disk(f: &SineType, center: Complex64, radius: f64, tol: f64) -> Result<Complex64> {
    let offsets = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.0),
        Complex64::new(-0.3, 0.0),
        Complex64::new(0.0, 0.3),
        Complex64::new(0.0, -0.3),
    ];
    let mut last = None;
    for off in offsets {
        match newton_refine(f, center + off * radius, tol) {
            Ok(r) if (r.z - center).norm() <= radius + 1e-9 => return Ok(r.z),
            Ok(_) => continue,
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::EnumerationFailure(format!("refinement left the disk at {center}"))
    }))
}

/// Finds the 2n₀+1 low-index zeros inside `R_{n0}` from contour moments:
/// power sums by the argument principle, Newton's identities, Durand–Kerner
/// for the seed roots, then Newton/Muller refinement and clustering.
fn low_block_clusters(
    f: &SineType,
    radius: f64,
    expected: usize,
    cfg: &SolverConfig,
) -> Result<Vec<Cluster>> {
    let center = Complex64::new(0.0, 0.0);
    let sums = contour_power_sums(f, center, radius, expected)?;
    let seeds = roots_from_power_sums(&sums);

    let mut candidates = Vec::with_capacity(expected);
    for u in seeds {
        let seed = center + radius * u;
        match newton_refine(f, seed, cfg.newton_tol) {
            Ok(refined) => candidates.push(refined.z),
            // Stalled near a multiple zero: keep the best iterate, the
            // cluster winding below confirms the multiplicity.
            Err(Error::NoConvergence { best, residual, .. }) if residual <= 1e-6 => {
                candidates.push(best)
            }
            Err(e) => {
                return Err(Error::EnumerationFailure(format!(
                    "low-block refinement failed from seed {seed}: {e}"
                )))
            }
        }
    }
    candidates.retain(|z| (z - center).norm() <= radius + 1e-6);

    // Newton stalls at ~eps^{1/r} from a zero of multiplicity r, so the
    // merge radius escalates until the certified winding totals close; each
    // merged cluster is re-counted, so correctness never depends on the
    // threshold itself.
    let mut last_total = 0;
    for scale in [1.0, 10.0, 100.0, 1000.0] {
        let clusters = cluster_candidates(f, candidates.clone(), cfg.cluster_radius * scale, cfg)?;
        let total: usize = clusters.iter().map(|c| c.multiplicity).sum();
        if total == expected {
            return Ok(clusters);
        }
        last_total = total;
    }
    Err(Error::EnumerationFailure(format!(
        "low block: refined zeros account for {last_total} of {expected} counted zeros"
    )))
}

fn cluster_candidates(
    f: &SineType,
    mut candidates: Vec<Complex64>,
    merge_radius: f64,
    cfg: &SolverConfig,
) -> Result<Vec<Cluster>> {
    candidates.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    'outer: for z in candidates {
        for g in groups.iter_mut() {
            let centroid = g.iter().sum::<Complex64>() / g.len() as f64;
            if (z - centroid).norm() <= merge_radius {
                g.push(z);
                continue 'outer;
            }
        }
        groups.push(vec![z]);
    }
    let centroids: Vec<Complex64> = groups
        .iter()
        .map(|g| g.iter().sum::<Complex64>() / g.len() as f64)
        .collect();
    let mut clusters = Vec::new();
    for (i, &w) in centroids.iter().enumerate() {
        let min_other = centroids
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &o)| (o - w).norm())
            .fold(f64::INFINITY, f64::min)
            .min(distance_to_lattice_tail(w));
        // Small-circle winding confirms the multiplicity at the centroid.
        let r0 = (20.0 * merge_radius).max(1e-4).min(0.3 * min_other).min(0.1);
        let mut mult = None;
        for shrink in [1.0, 0.5, 2.0] {
            match winding_number(f, w, r0 * shrink, cfg.contour_tol) {
                Ok(m) => {
                    mult = Some(m);
                    break;
                }
                Err(_) => continue,
            }
        }
        let mult = match mult {
            Some(m) if m >= 1 => m as usize,
            Some(_) => continue, // spurious candidate, no zero inside
            None => {
                return Err(Error::EnumerationFailure(format!(
                    "multiplicity winding failed at cluster {w}"
                )))
            }
        };
        clusters.push(Cluster {
            center: w,
            multiplicity: mult,
        });
    }
    Ok(clusters)
}

/// Distance from a low-block point to the nearest possible tail zero zone.
fn distance_to_lattice_tail(w: Complex64) -> f64 {
    let k = (w.re / PI).round();
    let mut d = f64::INFINITY;
    for dk in [-1.0, 0.0, 1.0] {
        let p = Complex64::new(PI * (k + dk), 0.0);
        d = d.min((w - p).norm());
    }
    d.max(0.05)
}
