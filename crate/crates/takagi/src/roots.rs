//! Simultaneous root finding with certified residuals.
//!
//! Exact origin roots are split off by coefficient inspection, the deflated
//! polynomial is handed to an Aberth-Ehrlich iteration with a deterministic
//! initial-guess circle, and every root is Newton-polished. A result is only
//! returned when every residual meets [`residual_tolerance`]; otherwise the
//! best iterates come back inside the error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::Polynomial;
use crate::Result;

const ABERTH_MAX_ITERS: usize = 400;
const NEWTON_BUDGET: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootMultiset {
    /// Repeats encode multiplicity; `len == deg p` for nonzero `p`.
    #[serde(with = "crate::json::complex_vec")]
    pub roots: Vec<Complex64>,
    /// `|p(root)|` aligned with `roots`.
    pub residuals: Vec<f64>,
}

impl RootMultiset {
    pub fn empty() -> Self {
        RootMultiset { roots: Vec::new(), residuals: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_root_norm(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Default clustering tolerance: double roots perturb as square roots of
    /// coefficient noise, so this sits well above f64 noise but below any
    /// genuine separation.
    pub fn default_cluster_tol(&self) -> f64 {
        1e-6 * (1.0 + self.max_root_norm())
    }
}

/// Residual allowed for a claimed root `z` of `p`.
pub fn residual_tolerance(p: &Polynomial, z: Complex64) -> f64 {
    let deg = p.degree().unwrap_or(0) as i32;
    1e-10 * p.max_coeff_norm() * z.norm().max(1.0).powi(deg)
}

/// All complex zeros of `p` with multiplicity.
pub fn find_roots(p: &Polynomial) -> Result<RootMultiset> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let r = p.origin_multiplicity()?;
    let q = p.deflate_origin(r);
    let deg_q = q.degree().expect("deflated polynomial is nonzero");

    let mut roots = vec![Complex64::new(0.0, 0.0); r];
    if deg_q > 0 {
        let mut iterates = aberth(&q);
        for z in &mut iterates {
            *z = polish_root(&q, *z);
        }
        refine_multiple_roots(&q, &mut iterates);
        // fixed ordering so output is deterministic and stable for callers
        iterates.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        roots.extend(iterates);
    }

    let residuals: Vec<f64> = roots.iter().map(|&z| p.evaluate(z).norm()).collect();
    let mut worst = 0.0f64;
    let mut worst_allowed = f64::INFINITY;
    let mut worst_ratio = 0.0f64;
    for (&z, &res) in roots.iter().zip(&residuals) {
        let allowed = residual_tolerance(p, z);
        if res > allowed && res / allowed > worst_ratio {
            worst_ratio = res / allowed;
            worst = res;
            worst_allowed = allowed;
        }
    }
    if worst_ratio > 0.0 {
        return Err(Error::RootFinding {
            roots,
            residuals,
            worst_residual: worst,
            allowed: worst_allowed,
        });
    }
    Ok(RootMultiset { roots, residuals })
}

/// Aberth-Ehrlich simultaneous iteration on a polynomial with nonzero
/// constant term. Deterministic: fixed starting circle, Gauss-Seidel update
/// order.
fn aberth(p: &Polynomial) -> Vec<Complex64> {
    let deg = p.degree().expect("nonzero");
    let c = p.coeffs();
    if deg == 1 {
        return vec![-c[0] / c[1]];
    }
    let dp = p.derivative(1);

    let lead = c[deg];
    let radius = 1.0
        + c[..deg]
            .iter()
            .map(|x| (x / lead).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            // the 0.41 phase offset breaks real-axis and conjugate symmetry
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.41;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..ABERTH_MAX_ITERS {
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let pv = p.evaluate(z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = dp.evaluate(z[k]);
            let ratio = if dv.norm() > 0.0 {
                pv / dv
            } else {
                // saddle point: nudge off it
                Complex64::new(1e-8 * (1.0 + z[k].norm()), 0.0)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    } else {
                        repulsion += Complex64::new(1e8, 0.0);
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() > 1e-300 { ratio / denom } else { ratio };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// An m-fold root leaves simultaneous iteration with only ~sqrt-precision,
/// spread over a symmetric cluster. The cluster mean is a simple root of the
/// (m-1)-th derivative; re-polishing it there recovers full precision. The
/// replacement is kept only when every copy still meets the residual
/// contract.
fn refine_multiple_roots(p: &Polynomial, roots: &mut [Complex64]) {
    let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = 1e-6 * (1.0 + scale);
    let rs = RootMultiset { roots: roots.to_vec(), residuals: vec![0.0; roots.len()] };
    for (center, mult) in cluster_multiplicities(&rs, tol) {
        if mult < 2 || mult > roots.len() {
            continue;
        }
        let refined = polish_root(&p.derivative(mult - 1), center);
        if (refined - center).norm() > tol {
            continue;
        }
        if p.evaluate(refined).norm() > residual_tolerance(p, refined) {
            continue;
        }
        for z in roots.iter_mut() {
            if (*z - center).norm() <= tol {
                *z = refined;
            }
        }
    }
}

/// Newton refinement that never makes the residual worse: keeps the best
/// iterate seen and returns `z0` if nothing improves.
pub fn polish_root(p: &Polynomial, z0: Complex64) -> Complex64 {
    if p.is_zero() || p.degree() == Some(0) {
        return z0;
    }
    let dp = p.derivative(1);
    let mut best = z0;
    let mut best_res = p.evaluate(z0).norm();
    let mut z = z0;
    for _ in 0..NEWTON_BUDGET {
        let pv = p.evaluate(z);
        if pv.norm() == 0.0 {
            return z;
        }
        let dv = dp.evaluate(z);
        if dv.norm() == 0.0 {
            break;
        }
        z -= pv / dv;
        let res = p.evaluate(z).norm();
        if res < best_res {
            best = z;
            best_res = res;
        } else if res > 4.0 * best_res {
            break;
        }
    }
    best
}

/// Single-linkage clustering of a root multiset at distance `tol`.
/// Cluster centers are arithmetic means; multiplicities sum to `len(roots)`.
pub fn cluster_multiplicities(rs: &RootMultiset, tol: f64) -> Vec<(Complex64, usize)> {
    let n = rs.roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (rs.roots[i] - rs.roots[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    let mut index_of_rep: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let rep = find(&mut parent, i);
        match index_of_rep[rep] {
            Some(idx) => {
                clusters[idx].0 += rs.roots[i];
                clusters[idx].1 += 1;
            }
            None => {
                index_of_rep[rep] = Some(clusters.len());
                clusters.push((rs.roots[i], 1));
            }
        }
    }
    for c in &mut clusters {
        c.0 /= c.1 as f64;
    }
    clusters
}
