//! Command-line front-end: `zeros`, `construct`, `verify`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::eval::SineType;
use crate::forward::forward_map;
use crate::fourier::CoeffSeq;
use crate::inverse::inverse_map;
use crate::report::{run_verification, RunManifest};
use crate::ZeroSet;

#[derive(Parser)]
#[command(
    name = "sinetype",
    version,
    about = "Zeros of sin z + ∫₀¹ f(t)e^{iz(2t-1)}dt: forward asymptotics, certification, inverse construction"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the certified zero set and the coefficient function g of f.
    Zeros {
        /// Input f: zero | const:C | harmonic:M,C | random:SEED,NORM[,BW] | file:PATH
        #[arg(long = "f")]
        f_spec: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Construct f from prescribed zero data g.
    Construct {
        /// Input g: zero | const:C | harmonic:M,C | random:SEED,NORM[,BW] | file:PATH
        #[arg(long = "g")]
        g_spec: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-certify a zeros.json against an f.json.
    Verify {
        /// Path to the f coefficient JSON.
        #[arg(long = "f")]
        f_path: PathBuf,
        /// Path to the zero-set JSON.
        #[arg(long = "zeros")]
        zeros_path: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Coefficient half-width.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Γ truncation order.
    #[arg(long = "K")]
    k_terms: Option<usize>,
    /// Reduction depth.
    #[arg(long)]
    k0: Option<usize>,
    /// Reduction degree.
    #[arg(long)]
    d: Option<usize>,
    /// Fixed-point tolerance.
    #[arg(long = "fp-tol")]
    fp_tol: Option<f64>,
    /// Patch perturbation size ε.
    #[arg(long)]
    eps: Option<f64>,
    /// Largest enumerated zero index.
    #[arg(long)]
    nmax: Option<usize>,
    /// Output directory.
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// Overrides the seed of a random: generator.
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress CSV outputs.
    #[arg(long = "json-only")]
    json_only: bool,
}

impl CommonOpts {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(k) = self.k_terms {
            cfg.k_terms = k;
        }
        if let Some(k0) = self.k0 {
            cfg.k0 = k0;
        }
        if let Some(d) = self.d {
            cfg.d = d;
        }
        if let Some(t) = self.fp_tol {
            cfg.fp_tol = t;
        }
        if let Some(e) = self.eps {
            cfg.eps_perturb = e;
        }
        if let Some(m) = self.nmax {
            cfg.n_max = m;
        }
        cfg
    }
}

/// Parses generator specs: zero | const:C | harmonic:M,C | random:SEED,NORM[,BW] | file:PATH.
pub fn parse_generator(spec: &str, seed_override: Option<u64>) -> Result<CoeffSeq> {
    if spec == "zero" {
        return Ok(CoeffSeq::zero(0));
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let c: f64 = rest
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad const spec '{spec}'")))?;
        return Ok(CoeffSeq::constant(Complex64::new(c, 0.0)));
    }
    if let Some(rest) = spec.strip_prefix("harmonic:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidInput(format!("bad harmonic spec '{spec}'")));
        }
        let m: i64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad harmonic index in '{spec}'")))?;
        let c: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad harmonic amplitude in '{spec}'")))?;
        return Ok(CoeffSeq::delta(m, Complex64::new(c, 0.0)));
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(Error::InvalidInput(format!("bad random spec '{spec}'")));
        }
        let seed: u64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad random seed in '{spec}'")))?;
        let norm: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad random norm in '{spec}'")))?;
        let bw: usize = if parts.len() == 3 {
            parts[2]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad random bandwidth in '{spec}'")))?
        } else {
            16
        };
        return Ok(random_band_limited(
            seed_override.unwrap_or(seed),
            norm,
            bw,
        ));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path)?;
        return Ok(serde_json::from_str(&text)?);
    }
    Err(Error::InvalidInput(format!(
        "unknown generator '{spec}' (expected zero | const:C | harmonic:M,C | random:SEED,NORM[,BW] | file:PATH)"
    )))
}

/// Deterministic band-limited coefficients with the requested X̂ norm.
pub fn random_band_limited(seed: u64, norm: f64, half_width: usize) -> CoeffSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CoeffSeq::zero(half_width);
    for n in -(half_width as i64)..=half_width as i64 {
        out.set(
            n,
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        );
    }
    let current = out.norm_x_hat();
    if current == 0.0 || norm == 0.0 {
        return CoeffSeq::zero(half_width);
    }
    out.scaled(Complex64::new(norm / current, 0.0))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn zeros_csv(zeros: &ZeroSet) -> String {
    let mut out = String::from("n,re,im,zeta_abs\n");
    for (n, z) in zeros.iter() {
        let zeta = z - PI * n as f64;
        out.push_str(&format!("{n},{},{},{}\n", z.re, z.im, zeta.norm()));
    }
    out
}

fn residuals_csv(f: &SineType, g: &CoeffSeq, n_max: usize) -> String {
    let mut out = String::from("n,re,im,residual\n");
    for n in -(n_max as i64)..=n_max as i64 {
        let z = Complex64::new(PI * n as f64, 0.0) + g.get(n);
        out.push_str(&format!("{n},{},{},{:.6e}\n", z.re, z.im, f.scaled_abs(z)));
    }
    out
}

fn manifest(
    command: &str,
    inputs: BTreeMap<String, String>,
    outputs: Vec<String>,
    cfg: &SolverConfig,
    timings_ms: BTreeMap<String, f64>,
    certified: Option<bool>,
) -> RunManifest {
    RunManifest {
        command: command.into(),
        inputs,
        outputs,
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        timings_ms,
        certified,
    }
}

fn cmd_zeros(f_spec: &str, opts: &CommonOpts) -> Result<bool> {
    let cfg = opts.config();
    cfg.validate()?;
    let f = parse_generator(f_spec, opts.seed)?;
    fs::create_dir_all(&opts.out_dir)?;

    let started = Instant::now();
    let result = forward_map(&f, &cfg)?;
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;

    let io_started = Instant::now();
    let mut outputs = Vec::new();
    let g_path = opts.out_dir.join("g.json");
    write_json(&g_path, &result.g)?;
    outputs.push("g.json".into());
    let z_path = opts.out_dir.join("zeros.json");
    write_json(&z_path, &result.zeros)?;
    outputs.push("zeros.json".into());
    if !opts.json_only {
        fs::write(opts.out_dir.join("zeros.csv"), zeros_csv(&result.zeros))?;
        outputs.push("zeros.csv".into());
    }
    let mut timings = BTreeMap::new();
    timings.insert("forward_map".into(), solve_ms);
    timings.insert("io".into(), io_started.elapsed().as_secs_f64() * 1e3);
    let mut inputs = BTreeMap::new();
    inputs.insert("f".into(), f_spec.to_string());
    outputs.push("manifest.json".into());
    write_json(
        &opts.out_dir.join("manifest.json"),
        &manifest("zeros", inputs, outputs, &cfg, timings, Some(result.certified)),
    )?;
    Ok(true)
}

fn cmd_construct(g_spec: &str, opts: &CommonOpts) -> Result<bool> {
    let cfg = opts.config();
    cfg.validate()?;
    let g = parse_generator(g_spec, opts.seed)?;
    fs::create_dir_all(&opts.out_dir)?;

    let started = Instant::now();
    let result = inverse_map(&g, &cfg)?;
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;

    let io_started = Instant::now();
    let mut outputs = Vec::new();
    write_json(&opts.out_dir.join("f.json"), &result.f)?;
    outputs.push("f.json".into());
    if !opts.json_only {
        let func = SineType::from_coeffs(result.f.clone());
        let check_to = g.half_width().max(result.m) + 2;
        fs::write(
            opts.out_dir.join("residuals.csv"),
            residuals_csv(&func, &g, check_to),
        )?;
        outputs.push("residuals.csv".into());
    }
    let mut timings = BTreeMap::new();
    timings.insert("inverse_map".into(), solve_ms);
    timings.insert("io".into(), io_started.elapsed().as_secs_f64() * 1e3);
    let mut inputs = BTreeMap::new();
    inputs.insert("g".into(), g_spec.to_string());
    outputs.push("manifest.json".into());
    write_json(
        &opts.out_dir.join("manifest.json"),
        &manifest("construct", inputs, outputs, &cfg, timings, None),
    )?;
    Ok(true)
}

fn cmd_verify(f_path: &Path, zeros_path: &Path, opts: &CommonOpts) -> Result<bool> {
    let cfg = opts.config();
    let f: CoeffSeq = serde_json::from_str(&fs::read_to_string(f_path)?)?;
    let zeros: ZeroSet = serde_json::from_str(&fs::read_to_string(zeros_path)?)?;
    fs::create_dir_all(&opts.out_dir)?;

    let started = Instant::now();
    let report = run_verification(&SineType::from_coeffs(f), &zeros, &cfg)?;
    let mut timings = BTreeMap::new();
    timings.insert("verify".into(), started.elapsed().as_secs_f64() * 1e3);

    write_json(&opts.out_dir.join("verify.json"), &report)?;
    let mut inputs = BTreeMap::new();
    inputs.insert("f".into(), f_path.display().to_string());
    inputs.insert("zeros".into(), zeros_path.display().to_string());
    write_json(
        &opts.out_dir.join("manifest.json"),
        &manifest(
            "verify",
            inputs,
            vec!["verify.json".into(), "manifest.json".into()],
            &cfg,
            timings,
            Some(report.pass),
        ),
    )?;
    for check in &report.checks {
        println!(
            "{}: {} — {}",
            check.name,
            if check.pass { "PASS" } else { "FAIL" },
            check.details
        );
    }
    Ok(report.pass)
}

/// Entry point; returns the process exit code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Zeros { f_spec, common } => cmd_zeros(f_spec, common),
        Command::Construct { g_spec, common } => cmd_construct(g_spec, common),
        Command::Verify {
            f_path,
            zeros_path,
            common,
        } => cmd_verify(f_path, zeros_path, common),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 4,
        Err(e) => {
            let payload = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            println!("{payload}");
            e.exit_class()
        }
    }
}
