//! Property-based harness: seeded instance ensembles, batch verification of
//! the containment and certificate invariants, and the small-alpha sweep
//! experiment.
//!
//! Instances built from sampled roots carry their true zero sets, which act
//! as an oracle independent of the root finder.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::region::{self, ConvexRegion};
use crate::roots::find_roots;
use crate::theorem::{self, TakagiInstance};
use crate::Result;

/// Nonzero roots of `f` are kept at least this far from the origin so the
/// segment lengths `(n-r)/|alpha|` stay finite-scale; origin zeros of `f`
/// are modeled exactly through `r`.
const ALPHA_FLOOR: f64 = 0.05;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootLaw {
    UnitDiscUniform,
    RealInterval { lo: f64, hi: f64 },
    Clustered { centers: Vec<[f64; 2]>, spread: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientLaw {
    ComplexGaussian,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub count: usize,
    pub seed: u64,
    /// Inclusive degree range for `f`.
    pub deg_f: [usize; 2],
    /// Inclusive degree range for `g`.
    pub deg_g: [usize; 2],
    pub root_law: RootLaw,
    /// When set, polynomials are drawn by coefficients instead of roots and
    /// no sampled-root oracle is available.
    #[serde(default)]
    pub coefficient_law: Option<CoefficientLaw>,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(crate::Error::invalid("count must be at least 1"));
        }
        if self.deg_f[0] > self.deg_f[1] || self.deg_g[0] > self.deg_g[1] {
            return Err(crate::Error::invalid("degree ranges must be nonempty"));
        }
        if let RootLaw::RealInterval { lo, hi } = self.root_law {
            if lo >= hi {
                return Err(crate::Error::invalid("real interval must be nonempty"));
            }
        }
        if let RootLaw::Clustered { centers, spread } = &self.root_law {
            if centers.is_empty() || *spread <= 0.0 {
                return Err(crate::Error::invalid("clustered law needs centers and spread > 0"));
            }
        }
        Ok(())
    }
}

/// One generated instance, with the sampled ground truth when built from
/// roots.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratedInstance {
    pub id: u64,
    pub f: Polynomial,
    pub g: Polynomial,
    #[serde(default, with = "crate::json::complex_vec")]
    pub sampled_g_roots: Vec<Complex64>,
    #[serde(default, with = "crate::json::complex_vec")]
    pub sampled_alphas: Vec<Complex64>,
    pub sampled_r: Option<usize>,
}

fn sample_law(rng: &mut ChaCha8Rng, law: &RootLaw) -> Complex64 {
    match law {
        RootLaw::UnitDiscUniform => loop {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            if re * re + im * im <= 1.0 {
                return Complex64::new(re, im);
            }
        },
        RootLaw::RealInterval { lo, hi } => Complex64::new(rng.gen_range(*lo..*hi), 0.0),
        RootLaw::Clustered { centers, spread } => {
            let c = centers[rng.gen_range(0..centers.len())];
            let dre = rng.gen_range(-1.0..1.0) * spread;
            let dim = rng.gen_range(-1.0..1.0) * spread;
            Complex64::new(c[0] + dre, c[1] + dim)
        }
    }
}

fn sample_alpha(rng: &mut ChaCha8Rng, law: &RootLaw) -> Complex64 {
    for _ in 0..64 {
        let z = sample_law(rng, law);
        if z.norm() >= ALPHA_FLOOR {
            return z;
        }
    }
    // the law concentrates at the origin: fall back to a ring sample
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let radius = rng.gen_range(ALPHA_FLOOR..1.0);
    Complex64::from_polar(radius, theta)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Deterministic stream of `(f, g)` instances; the seed fully determines it.
pub fn generate_instances(cfg: &EnsembleConfig) -> Result<Vec<GeneratedInstance>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    for id in 0..cfg.count as u64 {
        let deg_f = rng.gen_range(cfg.deg_f[0]..=cfg.deg_f[1]);
        let deg_g = rng.gen_range(cfg.deg_g[0]..=cfg.deg_g[1]);
        let inst = match &cfg.coefficient_law {
            Some(CoefficientLaw::ComplexGaussian) => {
                let draw = |rng: &mut ChaCha8Rng, deg: usize| -> Polynomial {
                    let mut coeffs: Vec<Complex64> = (0..=deg)
                        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
                        .collect();
                    while coeffs[deg].norm() < 0.1 {
                        coeffs[deg] = Complex64::new(gaussian(rng), gaussian(rng));
                    }
                    Polynomial::new(coeffs)
                };
                let f = draw(&mut rng, deg_f);
                let g = draw(&mut rng, deg_g);
                GeneratedInstance {
                    id,
                    f,
                    g,
                    sampled_g_roots: Vec::new(),
                    sampled_alphas: Vec::new(),
                    sampled_r: None,
                }
            }
            None => {
                let r = rng.gen_range(0..=deg_f.min(deg_g));
                let alphas: Vec<Complex64> = (0..deg_f - r)
                    .map(|_| sample_alpha(&mut rng, &cfg.root_law))
                    .collect();
                let betas: Vec<Complex64> = (0..deg_g)
                    .map(|_| sample_law(&mut rng, &cfg.root_law))
                    .collect();
                let lead_f = Complex64::from_polar(
                    rng.gen_range(0.5..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                let lead_g = Complex64::from_polar(
                    rng.gen_range(0.5..2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                let mut f_roots = vec![Complex64::new(0.0, 0.0); r];
                f_roots.extend(&alphas);
                GeneratedInstance {
                    id,
                    f: Polynomial::from_roots(lead_f, &f_roots),
                    g: Polynomial::from_roots(lead_g, &betas),
                    sampled_g_roots: betas,
                    sampled_alphas: alphas,
                    sampled_r: Some(r),
                }
            }
        };
        out.push(inst);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Containment: tol = scale * (region diameter + max |zero|).
    pub containment_scale: f64,
    /// Certificate reconstruction: err <= scale * (1 + |z|).
    pub certificate_recon_scale: f64,
    pub lambda_sum_tol: f64,
    /// Relative slack on kappa <= n/|alpha|^2.
    pub kappa_rel_slack: f64,
    /// Certificates are only asserted for zeros at least this far from the
    /// zeros of the current factor-step polynomial.
    pub certificate_min_distance: f64,
    /// Baseline multiset-matching tolerance for the sampled-root oracle.
    pub oracle_match_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            containment_scale: 1e-6,
            certificate_recon_scale: 1e-7,
            lambda_sum_tol: 1e-12,
            kappa_rel_slack: 1e-9,
            certificate_min_distance: 1e-6,
            oracle_match_tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: u64,
    pub pass: bool,
    pub failures: Vec<String>,
    pub margins: Vec<f64>,
    pub max_margin: Option<f64>,
    pub worst_certificate_error: Option<f64>,
    pub worst_log_residual: Option<f64>,
    /// Full instance, serialized for replay on failure only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<GeneratedInstance>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistogramBucket {
    pub label: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_margin: Option<f64>,
    pub margin_histogram: Vec<HistogramBucket>,
    pub records: Vec<InstanceRecord>,
}

/// Minimal bottleneck matching between two equally sized point sets: the
/// smallest worst pair distance over all assignments (bitmask DP; sizes
/// here are <= 8).
pub fn min_cost_match(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let mut dp = vec![f64::INFINITY; 1 << n];
    dp[0] = 0.0;
    for mask in 0..(1usize << n) - 1 {
        if dp[mask].is_infinite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                let cost = dp[mask].max((a[i] - b[j]).norm());
                let next = mask | (1 << j);
                if cost < dp[next] {
                    dp[next] = cost;
                }
            }
        }
    }
    dp[(1 << n) - 1]
}

/// Worst-case first-order sensitivity of the roots of `p` built from the
/// sampled roots: coefficient noise `eps * max|c|` maps to root error
/// `~ eps * max|c| * max(1,|b|)^deg / |p'(b)|`.
fn oracle_tolerance(p: &Polynomial, sampled: &[Complex64], baseline: f64) -> f64 {
    let lead = match p.leading() {
        Some(l) => l.norm(),
        None => return baseline,
    };
    let eps = 1e-13 * p.max_coeff_norm();
    let mut worst = baseline;
    for (i, &b) in sampled.iter().enumerate() {
        let mut deriv = lead;
        for (j, &other) in sampled.iter().enumerate() {
            if i != j {
                deriv *= (b - other).norm().max(1e-300);
            }
        }
        let bound = eps * b.norm().max(1.0).powi(sampled.len() as i32) / deriv;
        worst = worst.max(bound);
    }
    worst
}

fn check_instance(
    gi: &GeneratedInstance,
    policy: &TolerancePolicy,
    failures: &mut Vec<String>,
) -> (Option<TakagiInstance>, Option<f64>, Option<f64>) {
    let analysis = match theorem::analyze(&gi.f, &gi.g, None) {
        Ok(a) => a,
        Err(e) => {
            failures.push(format!("analyze failed: {e}"));
            return (None, None, None);
        }
    };

    // degree law and the identically-zero characterization
    let n = analysis.n;
    let r = analysis.r;
    if analysis.identically_zero {
        if r <= n {
            failures.push(format!("h vanished with r = {r} <= n = {n}"));
        }
        return (Some(analysis), None, None);
    }
    if n < r {
        failures.push(format!("h nonzero although n = {n} < r = {r}"));
    } else if analysis.h.degree() != Some(n - r) {
        failures.push(format!(
            "degree law violated: deg h = {:?}, expected {}",
            analysis.h.degree(),
            n - r
        ));
    }

    if !analysis.contained {
        let worst = analysis.margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        failures.push(format!(
            "containment violated: worst margin {worst:.3e} > tol {:.3e}",
            analysis.tol
        ));
    }

    // sampled-root oracle: find_roots(g) must reproduce the construction
    if gi.sampled_r.is_some() && !gi.sampled_g_roots.is_empty() {
        match find_roots(&gi.g) {
            Ok(rs) => {
                let tol = oracle_tolerance(&gi.g, &gi.sampled_g_roots, policy.oracle_match_tol);
                let cost = min_cost_match(&rs.roots, &gi.sampled_g_roots);
                if cost > tol {
                    failures.push(format!(
                        "root oracle mismatch: matching cost {cost:.3e} > tol {tol:.3e}"
                    ));
                }
            }
            Err(e) => failures.push(format!("find_roots(g) failed: {e}")),
        }
    }

    // certificate chain over the degree-1 factor steps
    let mut worst_cert: Option<f64> = None;
    let mut worst_logres: Option<f64> = None;
    let mut cur = analysis.g.derivative(r);
    for &alpha in &analysis.alphas.roots {
        if cur.degree().map_or(true, |d| d == 0) {
            break;
        }
        let cur_roots = match find_roots(&cur) {
            Ok(rs) => rs,
            Err(e) => {
                failures.push(format!("find_roots at factor step failed: {e}"));
                break;
            }
        };
        let next = crate::poly::linear_factor_apply(&cur, alpha);
        let step_deg = cur.degree().unwrap();
        if let Ok(next_roots) = find_roots(&next) {
            for &z in &next_roots.roots {
                let dist = cur_roots
                    .roots
                    .iter()
                    .map(|&b| (z - b).norm())
                    .fold(f64::INFINITY, f64::min);
                if dist <= policy.certificate_min_distance {
                    continue;
                }
                match theorem::certificate(z, &cur_roots, alpha) {
                    Ok(cert) => {
                        let sum: f64 = cert.lambdas.iter().sum();
                        if cert.lambdas.iter().any(|&l| l <= 0.0) {
                            failures.push(format!("nonpositive lambda at z = {z}"));
                        }
                        if (sum - 1.0).abs() > policy.lambda_sum_tol {
                            failures.push(format!("lambda sum {sum} differs from 1 at z = {z}"));
                        }
                        let err = cert.reconstruction_error(z);
                        worst_cert = Some(worst_cert.map_or(err, |w| w.max(err)));
                        if err > policy.certificate_recon_scale * (1.0 + z.norm()) {
                            failures.push(format!(
                                "certificate reconstruction error {err:.3e} at z = {z}"
                            ));
                        }
                        if let Some(bound) = cert.schwarz_bound {
                            if cert.kappa > bound * (1.0 + policy.kappa_rel_slack) {
                                failures.push(format!(
                                    "kappa {:.6e} exceeds bound {:.6e} at z = {z}",
                                    cert.kappa, bound
                                ));
                            }
                        }
                        // the log-derivative residual is the reconstruction
                        // defect divided by kappa
                        if let Ok(lr) = theorem::log_derivative_residual(z, &cur_roots, alpha) {
                            worst_logres = Some(worst_logres.map_or(lr, |w| w.max(lr)));
                            let allowed = policy.certificate_recon_scale * (1.0 + z.norm())
                                / cert.kappa
                                * (1.0 + policy.kappa_rel_slack);
                            if lr > allowed {
                                failures.push(format!(
                                    "log-derivative residual {lr:.3e} > {allowed:.3e} at z = {z}"
                                ));
                            }
                        }
                    }
                    Err(crate::Error::CertificateAtRoot) => {}
                    Err(e) => failures.push(format!("certificate failed at z = {z}: {e}")),
                }
            }
        }
        let _ = step_deg;
        cur = next;
        if cur.is_zero() {
            break;
        }
    }

    (Some(analysis), worst_cert, worst_logres)
}

/// Run every invariant over the configured ensemble. Single-instance
/// failures are recorded (with a replayable serialization), never panicked.
pub fn run_verification(cfg: &EnsembleConfig, policy: &TolerancePolicy) -> Result<VerificationReport> {
    let instances = generate_instances(cfg)?;
    let mut records = Vec::with_capacity(instances.len());
    let mut all_margins: Vec<f64> = Vec::new();
    for gi in &instances {
        let mut failures = Vec::new();
        let (analysis, worst_cert, worst_logres) = check_instance(gi, policy, &mut failures);
        let margins = analysis.as_ref().map(|a| a.margins.clone()).unwrap_or_default();
        all_margins.extend(&margins);
        let pass = failures.is_empty();
        records.push(InstanceRecord {
            id: gi.id,
            pass,
            max_margin: margins.iter().cloned().fold(None, |acc: Option<f64>, m| {
                Some(acc.map_or(m, |a| a.max(m)))
            }),
            margins,
            failures,
            worst_certificate_error: worst_cert,
            worst_log_residual: worst_logres,
            replay: if pass { None } else { Some(gi.clone()) },
        });
    }
    records.sort_by_key(|r| r.id);
    let failed = records.iter().filter(|r| !r.pass).count();
    let max_margin = records.iter().filter_map(|r| r.max_margin).fold(None, |acc: Option<f64>, m| {
        Some(acc.map_or(m, |a| a.max(m)))
    });
    Ok(VerificationReport {
        pass: failed == 0,
        total: records.len(),
        passed: records.len() - failed,
        failed,
        max_margin,
        margin_histogram: margin_histogram(&all_margins),
        records,
    })
}

fn margin_histogram(margins: &[f64]) -> Vec<HistogramBucket> {
    // decade buckets of |margin|, signed: negative margins are interior
    let edges = [1e-12, 1e-9, 1e-6, 1e-3, 1.0, f64::INFINITY];
    let label = |sign: &str, i: usize| -> String {
        if i == 0 {
            format!("{sign}[0, 1e-12)")
        } else if edges[i].is_infinite() {
            format!("{sign}[{:.0e}, inf)", edges[i - 1])
        } else {
            format!("{sign}[{:.0e}, {:.0e})", edges[i - 1], edges[i])
        }
    };
    let mut neg = vec![0usize; edges.len()];
    let mut pos = vec![0usize; edges.len()];
    for &m in margins {
        let mag = m.abs();
        let idx = edges.iter().position(|&e| mag < e).unwrap_or(edges.len() - 1);
        if m <= 0.0 {
            neg[idx] += 1;
        } else {
            pos[idx] += 1;
        }
    }
    let mut out = Vec::new();
    for i in 0..edges.len() {
        if neg[i] > 0 {
            out.push(HistogramBucket { label: label("inside ", i), count: neg[i] });
        }
    }
    for i in 0..edges.len() {
        if pos[i] > 0 {
            out.push(HistogramBucket { label: label("outside ", i), count: pos[i] });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifiedZero {
    #[serde(with = "crate::json::complex")]
    pub z: Complex64,
    /// Distance to `K` for near zeros; `|z| * |alpha|` for far zeros.
    pub measure: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(with = "crate::json::complex")]
    pub alpha: Complex64,
    pub near: Vec<ClassifiedZero>,
    pub far: Vec<ClassifiedZero>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    /// log(max near distance) vs log |alpha|.
    pub near_fit: Option<SlopeFit>,
    /// log(max far magnitude) vs log |alpha|.
    pub far_fit: Option<SlopeFit>,
}

fn fit_line(points: &[(f64, f64)]) -> Option<SlopeFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = (points
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some(SlopeFit { slope, intercept, residual })
}

/// Zeros of `g' - alpha g` across an alpha grid, classified as near `K` or
/// escaping, with log-log slope fits of the two scaling laws.
pub fn alpha_sweep(
    g: &Polynomial,
    alpha_grid: &[Complex64],
    k_hull: &ConvexRegion,
) -> Result<SweepResult> {
    if g.degree().map_or(true, |d| d == 0) {
        return Err(crate::Error::invalid("sweep needs deg g >= 1"));
    }
    if alpha_grid.iter().any(|a| a.norm() == 0.0) {
        return Err(crate::Error::ZeroAlpha);
    }
    let far_cut = 10.0 * (1.0 + k_hull.diameter());
    let mut records = Vec::with_capacity(alpha_grid.len());
    let mut near_pts = Vec::new();
    let mut far_pts = Vec::new();
    for &alpha in alpha_grid {
        let h = crate::poly::linear_factor_apply(g, alpha);
        let mut rec = SweepRecord { alpha, near: Vec::new(), far: Vec::new(), error: None };
        match find_roots(&h) {
            Ok(zeros) => {
                for &z in &zeros.roots {
                    if z.norm() > far_cut {
                        rec.far.push(ClassifiedZero { z, measure: z.norm() * alpha.norm() });
                    } else {
                        let d = region::signed_distance(k_hull, z)?.max(0.0);
                        rec.near.push(ClassifiedZero { z, measure: d });
                    }
                }
                let max_near = rec.near.iter().map(|c| c.measure).fold(0.0, f64::max);
                if max_near > 0.0 {
                    near_pts.push((alpha.norm().ln(), max_near.ln()));
                }
                let max_far_mag = rec.far.iter().map(|c| c.z.norm()).fold(0.0, f64::max);
                if max_far_mag > 0.0 {
                    far_pts.push((alpha.norm().ln(), max_far_mag.ln()));
                }
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        records.push(rec);
    }
    Ok(SweepResult {
        records,
        near_fit: fit_line(&near_pts),
        far_fit: fit_line(&far_pts),
    })
}
