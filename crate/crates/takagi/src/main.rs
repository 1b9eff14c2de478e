//! Command-line front end: every library operation as a subcommand, JSON on
//! stdin/file arguments, SVG plot emission.
//!
//! Exit codes: 0 success, 1 containment violation, 2 numerical failure,
//! 64 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use takagi::json::parse_complex;
use takagi::poly::differential_compose;
use takagi::region::{convex_hull, ConvexRegion};
use takagi::roots::find_roots;
use takagi::svg::{render, PlotData, PlotSpec};
use takagi::verify::{alpha_sweep, run_verification, EnsembleConfig, TolerancePolicy};
use takagi::{theorem, Polynomial};

const EXIT_VIOLATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "takagi",
    about = "Zero localization for differential compositions h = f(D) g",
    long_about = "Computes the differential composition h = f(D) g, locates its zeros, \
builds the convex inclusion region K + sum [0, n-r]/alpha_i, and checks containment.\n\n\
Exit codes: 0 success / containment holds, 1 containment violation, \
2 numerical failure, 64 usage error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PolyPair {
    /// JSON file with polynomial f: {"coeffs": [[re,im], ...]} ascending
    #[arg(short, long)]
    f: PathBuf,
    /// JSON file with polynomial g
    #[arg(short, long)]
    g: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Compute h = f(D) g and print its coefficients as JSON
    Compose(PolyPair),
    /// Find all zeros of a polynomial with residuals
    Roots {
        /// JSON file with the polynomial
        #[arg(short, long)]
        p: PathBuf,
    },
    /// Build the inclusion region for (f, g); with no f, the hull K itself
    Region {
        #[arg(short, long)]
        g: PathBuf,
        #[arg(short, long)]
        f: Option<PathBuf>,
    },
    /// Full analysis: compose, find zeros, build region, check containment
    Analyze {
        #[command(flatten)]
        pair: PolyPair,
        /// Containment tolerance (default: 1e-6 * (region diameter + max |zero|))
        #[arg(long)]
        tol: Option<f64>,
        /// Write an SVG plot of K, the region, and the zeros
        #[arg(long, value_name = "FILE")]
        plot: Option<PathBuf>,
        /// Write the full analysis as JSON
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        /// Scale the region about its centroid before checking (self-test)
        #[arg(long, hide = true, value_name = "FACTOR")]
        shrink_region: Option<f64>,
    },
    /// Convex-combination certificate for a point against the zeros of g
    Certificate {
        #[arg(short, long)]
        g: PathBuf,
        /// The point, as re, "re,im", or "re+imi"
        #[arg(short, long)]
        z: String,
        /// The factor root alpha, same syntax
        #[arg(short, long)]
        alpha: String,
    },
    /// Run the verification ensembles from a config file
    Verify {
        /// JSON config: {"ensembles": [...]} or a single ensemble object
        config: PathBuf,
        /// Write the report as JSON
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Sweep alpha over a grid and classify the zeros of g' - alpha g
    Sweep {
        #[arg(short, long)]
        g: PathBuf,
        /// Grid: "geom:START:END:COUNT" or "list:z1;z2;..."
        #[arg(long)]
        alpha_grid: String,
        /// Write per-zero rows as CSV
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Render the analysis plot without the containment gate
    Plot {
        #[command(flatten)]
        pair: PolyPair,
        #[arg(short, long)]
        out: PathBuf,
    },
}

enum CmdError {
    Usage(String),
    Numerical(String),
}

impl From<takagi::Error> for CmdError {
    fn from(e: takagi::Error) -> Self {
        CmdError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Usage(format!("io error: {e}"))
    }
}

fn read_poly(path: &PathBuf) -> Result<Polynomial, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CmdError::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), CmdError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<Complex64>, CmdError> {
    let usage = || {
        CmdError::Usage(format!(
            "bad --alpha-grid {spec:?}: expected geom:START:END:COUNT or list:z1;z2;..."
        ))
    };
    if let Some(body) = spec.strip_prefix("geom:") {
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(usage());
        }
        let start: f64 = parts[0].parse().map_err(|_| usage())?;
        let end: f64 = parts[1].parse().map_err(|_| usage())?;
        let count: usize = parts[2].parse().map_err(|_| usage())?;
        if count == 0 || start <= 0.0 || end <= 0.0 {
            return Err(usage());
        }
        if count == 1 {
            return Ok(vec![Complex64::new(start, 0.0)]);
        }
        let ratio = (end / start).powf(1.0 / (count - 1) as f64);
        return Ok((0..count)
            .map(|k| Complex64::new(start * ratio.powi(k as i32), 0.0))
            .collect());
    }
    if let Some(body) = spec.strip_prefix("list:") {
        let items: Vec<&str> = body.split(';').filter(|s| !s.trim().is_empty()).collect();
        if items.is_empty() {
            return Err(usage());
        }
        return items
            .iter()
            .map(|s| parse_complex(s).map_err(|e| CmdError::Usage(e)))
            .collect();
    }
    Err(usage())
}

fn scale_region(region: &ConvexRegion, factor: f64) -> ConvexRegion {
    let vs = region.vertices();
    if vs.is_empty() {
        return ConvexRegion::Empty;
    }
    let centroid = vs.iter().sum::<Complex64>() / vs.len() as f64;
    let scaled: Vec<Complex64> = vs.iter().map(|&v| centroid + factor * (v - centroid)).collect();
    convex_hull(&scaled)
}

fn cmd_compose(pair: &PolyPair) -> Result<u8, CmdError> {
    let f = read_poly(&pair.f)?;
    let g = read_poly(&pair.g)?;
    let h = differential_compose(&f, &g);
    if h.is_zero() {
        println!("{}", serde_json::json!({"identically_zero": true}));
    } else {
        println!("{}", serde_json::to_string(&h).expect("serializable"));
    }
    Ok(0)
}

fn cmd_roots(path: &PathBuf) -> Result<u8, CmdError> {
    let p = read_poly(path)?;
    let rs = find_roots(&p)?;
    println!("{}", serde_json::to_string(&rs).expect("serializable"));
    Ok(0)
}

fn cmd_region(g_path: &PathBuf, f_path: Option<&PathBuf>) -> Result<u8, CmdError> {
    let g = read_poly(g_path)?;
    let region = match f_path {
        Some(fp) => {
            let f = read_poly(fp)?;
            let (_, r, alphas) = theorem::factor_operator(&f)?;
            theorem::build_region(&g, r, &alphas)?
        }
        None => convex_hull(&find_roots(&g)?.roots),
    };
    println!("{}", serde_json::to_string(&region).expect("serializable"));
    Ok(0)
}

fn cmd_analyze(
    pair: &PolyPair,
    tol: Option<f64>,
    plot: Option<&PathBuf>,
    json: Option<&PathBuf>,
    shrink: Option<f64>,
) -> Result<u8, CmdError> {
    let f = read_poly(&pair.f)?;
    let g = read_poly(&pair.g)?;
    let mut inst = theorem::analyze(&f, &g, tol)?;

    if let (Some(factor), Some(region)) = (shrink, inst.region.clone()) {
        let shrunk = scale_region(&region, factor);
        if let Some(zeros) = &inst.h_zeros {
            inst.margins = zeros
                .roots
                .iter()
                .map(|&z| takagi::region::signed_distance(&shrunk, z).unwrap_or(f64::INFINITY))
                .collect();
            inst.contained = inst.margins.iter().all(|&m| m <= inst.tol);
        }
        inst.region = Some(shrunk);
    }

    if let Some(path) = json {
        fs::write(path, serde_json::to_string_pretty(&inst).expect("serializable"))?;
    }
    if let Some(path) = plot {
        let hull = if inst.n >= 1 {
            Some(convex_hull(&find_roots(&inst.g)?.roots))
        } else {
            None
        };
        let data = PlotData {
            region: inst.region.clone(),
            hull: hull.clone(),
            g_roots: find_roots(&inst.g).map(|r| r.roots).unwrap_or_default(),
            h_zeros: inst.h_zeros.as_ref().map(|r| r.roots.clone()).unwrap_or_default(),
        };
        if let (Some(h), Some(r)) = (&hull, &inst.region) {
            if h.diameter() > 0.0 && r.diameter() > 1e6 * h.diameter() {
                eprintln!(
                    "warning: region diameter {:.3e} exceeds 1e6 x hull diameter {:.3e}",
                    r.diameter(),
                    h.diameter()
                );
            }
        }
        fs::write(path, render(&data, &PlotSpec::default()))?;
    }

    if inst.identically_zero {
        println!("h = f(D) g is identically zero (deg g < origin multiplicity of f)");
        return Ok(0);
    }
    let n_zeros = inst.h_zeros.as_ref().map(|z| z.len()).unwrap_or(0);
    println!(
        "deg h = {:?}, {} zeros, region kind = {}, tol = {:.3e}",
        inst.h.degree(),
        n_zeros,
        inst.region.as_ref().map(|r| r.kind()).unwrap_or("none"),
        inst.tol
    );
    if inst.contained {
        println!("containment: PASS (worst margin {:.3e})",
            inst.margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        Ok(0)
    } else {
        println!("containment: FAIL");
        for (z, m) in inst
            .h_zeros
            .as_ref()
            .map(|z| z.roots.clone())
            .unwrap_or_default()
            .iter()
            .zip(&inst.margins)
        {
            if *m > inst.tol {
                println!("  zero {z} has margin {m:.6e} > tol {:.3e}", inst.tol);
            }
        }
        Ok(EXIT_VIOLATION)
    }
}

fn cmd_certificate(g_path: &PathBuf, z: &str, alpha: &str) -> Result<u8, CmdError> {
    let g = read_poly(g_path)?;
    let z = parse_complex(z).map_err(CmdError::Usage)?;
    let alpha = parse_complex(alpha).map_err(CmdError::Usage)?;
    let roots = find_roots(&g)?;
    let cert = theorem::certificate(z, &roots, alpha)?;
    println!("{}", serde_json::to_string(&cert).expect("serializable"));
    Ok(0)
}

#[derive(serde::Serialize, serde::Deserialize)]
struct VerifyConfig {
    ensembles: Vec<EnsembleConfig>,
}

fn cmd_verify(config_path: &PathBuf, json: Option<&PathBuf>) -> Result<u8, CmdError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CmdError::Usage(format!("cannot read {}: {e}", config_path.display())))?;
    let mut cfg: VerifyConfig = serde_json::from_str(&text)
        .or_else(|_| {
            serde_json::from_str::<EnsembleConfig>(&text)
                .map(|e| VerifyConfig { ensembles: vec![e] })
        })
        .map_err(|e| CmdError::Usage(format!("cannot parse {}: {e}", config_path.display())))?;

    if let Ok(seed_text) = std::env::var("TAKAGI_SEED") {
        let seed: u64 = seed_text
            .parse()
            .map_err(|_| CmdError::Usage(format!("TAKAGI_SEED not a u64: {seed_text:?}")))?;
        for e in &mut cfg.ensembles {
            e.seed = seed;
        }
    }

    let policy = TolerancePolicy::default();
    let mut reports = Vec::new();
    let mut all_pass = true;
    for (i, ensemble) in cfg.ensembles.iter().enumerate() {
        let report = run_verification(ensemble, &policy)?;
        println!(
            "ensemble {i}: {} ({}/{} instances pass, max margin {:?})",
            if report.pass { "PASS" } else { "FAIL" },
            report.passed,
            report.total,
            report.max_margin
        );
        all_pass &= report.pass;
        reports.push(report);
    }
    let out = serde_json::json!({"pass": all_pass, "ensembles": reports});
    if let Some(path) = json {
        fs::write(path, serde_json::to_string_pretty(&out).expect("serializable"))?;
    }
    Ok(if all_pass { 0 } else { EXIT_VIOLATION })
}

fn cmd_sweep(g_path: &PathBuf, grid_spec: &str, csv: Option<&PathBuf>) -> Result<u8, CmdError> {
    let g = read_poly(g_path)?;
    let grid = parse_grid(grid_spec)?;
    let k_hull = convex_hull(&find_roots(&g)?.roots);
    let result = alpha_sweep(&g, &grid, &k_hull)?;

    let mut rows = String::from(
        "alpha_re,alpha_im,zero_re,zero_im,class,dist_to_K,abs_z_times_abs_alpha\n",
    );
    for rec in &result.records {
        for z in &rec.near {
            rows.push_str(&format!(
                "{},{},{},{},near,{},{}\n",
                rec.alpha.re, rec.alpha.im, z.z.re, z.z.im, z.measure,
                z.z.norm() * rec.alpha.norm()
            ));
        }
        for z in &rec.far {
            rows.push_str(&format!(
                "{},{},{},{},far,{},{}\n",
                rec.alpha.re, rec.alpha.im, z.z.re, z.z.im,
                takagi::region::signed_distance(&k_hull, z.z).map(|d| d.max(0.0)).unwrap_or(f64::NAN),
                z.measure
            ));
        }
    }
    write_or_print(csv, rows.trim_end())?;
    if let Some(fit) = &result.near_fit {
        eprintln!("near-distance slope: {:.4} (rms residual {:.2e})", fit.slope, fit.residual);
    }
    if let Some(fit) = &result.far_fit {
        eprintln!("far-magnitude slope: {:.4} (rms residual {:.2e})", fit.slope, fit.residual);
    }
    Ok(0)
}

fn cmd_plot(pair: &PolyPair, out: &PathBuf) -> Result<u8, CmdError> {
    let f = read_poly(&pair.f)?;
    let g = read_poly(&pair.g)?;
    let inst = theorem::analyze(&f, &g, None)?;
    let hull = if inst.n >= 1 {
        Some(convex_hull(&find_roots(&g)?.roots))
    } else {
        None
    };
    let data = PlotData {
        region: inst.region.clone(),
        hull,
        g_roots: find_roots(&g).map(|r| r.roots).unwrap_or_default(),
        h_zeros: inst.h_zeros.as_ref().map(|r| r.roots.clone()).unwrap_or_default(),
    };
    fs::write(out, render(&data, &PlotSpec::default()))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CmdError> {
    match &cli.command {
        Command::Compose(pair) => cmd_compose(pair),
        Command::Roots { p } => cmd_roots(p),
        Command::Region { g, f } => cmd_region(g, f.as_ref()),
        Command::Analyze { pair, tol, plot, json, shrink_region } => {
            cmd_analyze(pair, *tol, plot.as_ref(), json.as_ref(), *shrink_region)
        }
        Command::Certificate { g, z, alpha } => cmd_certificate(g, z, alpha),
        Command::Verify { config, json } => cmd_verify(config, json.as_ref()),
        Command::Sweep { g, alpha_grid, csv } => cmd_sweep(g, alpha_grid, csv.as_ref()),
        Command::Plot { pair, out } => cmd_plot(pair, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CmdError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
