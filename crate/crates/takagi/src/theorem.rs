//! The theorem layer: operator factorization, the zero-inclusion region
//! `K + sum_i [0, n-r] alpha_i^{-1}`, per-zero convex-combination
//! certificates, and the quadratic closed form used by the small-alpha
//! experiments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{differential_compose, Polynomial};
use crate::region::{self, contains, convex_hull, minkowski_sum_segment, ConvexRegion, Segment};
use crate::roots::{find_roots, RootMultiset};
use crate::Result;

/// Default containment tolerance scale; the theorem itself is exact, this
/// absorbs root-finder and hull arithmetic noise.
pub const CONTAINMENT_SCALE: f64 = 1e-6;

/// Witness that a zero `z` of `g' - alpha g` decomposes as
/// `sum lambda_i beta_i + kappa * conj(alpha)` with positive normalized
/// weights and `kappa <= n / |alpha|^2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub lambdas: Vec<f64>,
    pub kappa: f64,
    #[serde(with = "crate::json::complex")]
    pub reconstruction: Complex64,
    /// `n / |alpha|^2`; absent when `alpha = 0` (no bound applies).
    pub schwarz_bound: Option<f64>,
}

impl Certificate {
    /// `|reconstruction - z|`, the defect of the decomposition identity.
    pub fn reconstruction_error(&self, z: Complex64) -> f64 {
        (self.reconstruction - z).norm()
    }
}

/// Everything the containment statement needs for one `(f, g)` pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TakagiInstance {
    pub f: Polynomial,
    pub g: Polynomial,
    /// Origin multiplicity of `f`.
    pub r: usize,
    /// Nonzero roots of `f` with multiplicity.
    pub alphas: RootMultiset,
    /// Degree of `g`.
    pub n: usize,
    pub h: Polynomial,
    pub identically_zero: bool,
    /// `None` when `h` vanishes identically.
    pub region: Option<ConvexRegion>,
    /// `None` when `h` vanishes identically.
    pub h_zeros: Option<RootMultiset>,
    /// Signed distance of each zero of `h` to the region.
    pub margins: Vec<f64>,
    /// Tolerance the margins were checked against.
    pub tol: f64,
    pub contained: bool,
}

/// Factor `f(D) = a_m (prod_i (D - alpha_i)) D^r`.
pub fn factor_operator(f: &Polynomial) -> Result<(Complex64, usize, RootMultiset)> {
    let r = f.origin_multiplicity()?;
    let deflated = f.deflate_origin(r);
    let a_m = f.leading().ok_or(Error::ZeroPolynomial)?;
    let alphas = if deflated.degree() == Some(0) {
        RootMultiset::empty()
    } else {
        find_roots(&deflated)?
    };
    Ok((a_m, r, alphas))
}

/// `K + sum_i [0, n-r] alpha_i^{-1}` where `K` is the hull of the zeros of
/// `g`. With no nonzero `alpha_i` this is `K` itself (the Gauss-Lucas case).
///
/// Factors are applied in ascending `|alpha|` (ties by argument) so
/// intermediate regions are reproducible; the result is order-independent.
pub fn build_region(g: &Polynomial, r: usize, alphas: &RootMultiset) -> Result<ConvexRegion> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = g.degree().unwrap();
    if r > n {
        return Err(Error::invalid(format!(
            "origin multiplicity {r} exceeds deg g = {n}: h vanishes identically and has no region"
        )));
    }
    let k_hull = if n == 0 {
        ConvexRegion::Empty
    } else {
        convex_hull(&find_roots(g)?.roots)
    };
    let mut ordered = alphas.roots.clone();
    ordered.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
    let span = (n - r) as f64;
    let mut region = k_hull;
    for alpha in ordered {
        if alpha.norm() == 0.0 {
            return Err(Error::ZeroAlpha);
        }
        region = minkowski_sum_segment(&region, &Segment::from_origin(span * alpha.inv()));
    }
    Ok(region)
}

/// End-to-end: compose, factor, locate zeros, build the region, and check
/// containment of every zero. A violation is recorded in `contained` and the
/// margins, never silently accepted.
pub fn analyze(f: &Polynomial, g: &Polynomial, tol: Option<f64>) -> Result<TakagiInstance> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_a_m, r, alphas) = factor_operator(f)?;
    let n = g.degree().unwrap();
    let h = differential_compose(f, g);

    if h.is_zero() {
        // consistency with the characterization: h == 0 exactly when deg g < r
        if r <= n {
            return Err(Error::invalid(format!(
                "composition vanished although r = {r} <= deg g = {n}"
            )));
        }
        return Ok(TakagiInstance {
            f: f.clone(),
            g: g.clone(),
            r,
            alphas,
            n,
            h,
            identically_zero: true,
            region: None,
            h_zeros: None,
            margins: Vec::new(),
            tol: 0.0,
            contained: true,
        });
    }

    let h_zeros = find_roots(&h)?;
    let region = build_region(g, r, &alphas)?;
    let tol = tol.unwrap_or_else(|| {
        CONTAINMENT_SCALE * (region.diameter() + h_zeros.max_root_norm())
    });
    let margins: Vec<f64> = h_zeros
        .roots
        .iter()
        .map(|&z| region::signed_distance(&region, z).unwrap_or(f64::INFINITY))
        .collect();
    let contained = h_zeros
        .roots
        .iter()
        .all(|&z| contains(&region, z, tol));

    Ok(TakagiInstance {
        f: f.clone(),
        g: g.clone(),
        r,
        alphas,
        n,
        h,
        identically_zero: false,
        region: Some(region),
        h_zeros: Some(h_zeros),
        margins,
        tol,
        contained,
    })
}

/// Convex-combination certificate for a point `z` away from the zeros of
/// `g`: `lambda_i = |z - beta_i|^{-2} / S`, `kappa = 1 / S` with
/// `S = sum_j |z - beta_j|^{-2}`.
pub fn certificate(z: Complex64, g_roots: &RootMultiset, alpha: Complex64) -> Result<Certificate> {
    let n = g_roots.len();
    if n == 0 {
        return Err(Error::invalid("certificate needs at least one zero of g"));
    }
    let cluster_tol = g_roots.default_cluster_tol();
    let mut inv_sq = Vec::with_capacity(n);
    for &beta in &g_roots.roots {
        let d = (z - beta).norm();
        if d <= cluster_tol {
            return Err(Error::CertificateAtRoot);
        }
        inv_sq.push(1.0 / (d * d));
    }
    let total: f64 = inv_sq.iter().sum();
    let lambdas: Vec<f64> = inv_sq.iter().map(|w| w / total).collect();
    let kappa = 1.0 / total;
    let mut reconstruction = Complex64::new(0.0, 0.0);
    for (&lam, &beta) in lambdas.iter().zip(&g_roots.roots) {
        reconstruction += lam * beta;
    }
    reconstruction += kappa * alpha.conj();
    let schwarz_bound = if alpha.norm() > 0.0 {
        Some(n as f64 / alpha.norm_sqr())
    } else {
        None
    };
    Ok(Certificate { lambdas, kappa, reconstruction, schwarz_bound })
}

/// `|sum_i 1/(z - beta_i) - alpha|`: the partial-fraction residual that
/// vanishes at zeros of `g' - alpha g` away from the zeros of `g`.
pub fn log_derivative_residual(
    z: Complex64,
    g_roots: &RootMultiset,
    alpha: Complex64,
) -> Result<f64> {
    let cluster_tol = g_roots.default_cluster_tol();
    let mut sum = -alpha;
    for &beta in &g_roots.roots {
        let d = z - beta;
        if d.norm() <= cluster_tol {
            return Err(Error::CertificateAtRoot);
        }
        sum += d.inv();
    }
    Ok(sum.norm())
}

/// Zeros `(1 +- sqrt(1 + alpha^2 beta^2)) / alpha` of `g' - alpha g` for
/// `g = z^2 - beta^2`, labeled by distance to `K = hull{beta, -beta}`:
/// `z_near` is closer to `K`, `z_far` the escaping zero.
pub fn quadratic_closed_form(alpha: Complex64, beta: Complex64) -> Result<(Complex64, Complex64)> {
    if alpha.norm() == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    let s = (Complex64::new(1.0, 0.0) + alpha * alpha * beta * beta).sqrt();
    let z_plus = (Complex64::new(1.0, 0.0) + s) / alpha;
    let z_minus = (Complex64::new(1.0, 0.0) - s) / alpha;
    let k_hull = convex_hull(&[beta, -beta]);
    let d_plus = region::signed_distance(&k_hull, z_plus)?.max(0.0);
    let d_minus = region::signed_distance(&k_hull, z_minus)?.max(0.0);
    if d_minus <= d_plus {
        Ok((z_minus, z_plus))
    } else {
        Ok((z_plus, z_minus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factors_pure_d_and_shifts() {
        let (a, r, alphas) = factor_operator(&Polynomial::from_real(&[0.0, 1.0])).unwrap();
        assert_eq!((a, r), (c(1.0, 0.0), 1));
        assert!(alphas.is_empty());

        let (a, r, alphas) = factor_operator(&Polynomial::from_real(&[-1.0, 1.0])).unwrap();
        assert_eq!((a, r), (c(1.0, 0.0), 0));
        assert_eq!(alphas.len(), 1);
        assert!((alphas.roots[0] - c(1.0, 0.0)).norm() < 1e-12);

        // 2z^3 - 2z^2 = 2 z^2 (z - 1); verify the reconstruction
        let f = Polynomial::from_real(&[0.0, 0.0, -2.0, 2.0]);
        let (a, r, alphas) = factor_operator(&f).unwrap();
        assert_eq!((a, r), (c(2.0, 0.0), 2));
        let mut rebuilt_roots = vec![c(0.0, 0.0); r];
        rebuilt_roots.extend(alphas.roots.iter());
        let rebuilt = Polynomial::from_roots(a, &rebuilt_roots);
        for (x, y) in rebuilt.coeffs().iter().zip(f.coeffs()) {
            assert!((x - y).norm() < 1e-8);
        }
    }

    #[test]
    fn region_single_factor() {
        // g = z^2 - 1, alpha = 1 -> [-1, 3]
        let g = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let alphas = RootMultiset { roots: vec![c(1.0, 0.0)], residuals: vec![0.0] };
        let region = build_region(&g, 0, &alphas).unwrap();
        match region {
            ConvexRegion::Segment(a, b) => {
                assert!((a - c(-1.0, 0.0)).norm() < 1e-10);
                assert!((b - c(3.0, 0.0)).norm() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn region_gauss_lucas_is_hull() {
        // g = z^3 - 1, r = 1, no alphas -> triangle of cube roots of unity
        let g = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let region = build_region(&g, 1, &RootMultiset::empty()).unwrap();
        let vs = region.vertices();
        assert_eq!(vs.len(), 3);
        for k in 0..3 {
            let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
            assert!(vs.iter().any(|v| (v - root).norm() < 1e-10));
        }
    }

    #[test]
    fn region_complex_factor_rectangle() {
        // g = z^2 - 1, alpha = i: 2 * i^{-1} = -2i, rectangle over [-1,1]
        let g = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let alphas = RootMultiset { roots: vec![c(0.0, 1.0)], residuals: vec![0.0] };
        let region = build_region(&g, 0, &alphas).unwrap();
        let expected = [c(-1.0, -2.0), c(1.0, -2.0), c(1.0, 0.0), c(-1.0, 0.0)];
        let vs = region.vertices();
        assert_eq!(vs.len(), 4);
        for e in expected {
            assert!(vs.iter().any(|v| (v - e).norm() < 1e-10), "missing {e}");
        }
    }

    #[test]
    fn analyze_quadratic_instance() {
        let f = Polynomial::from_real(&[-1.0, 1.0]);
        let g = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let inst = analyze(&f, &g, None).unwrap();
        assert!(!inst.identically_zero);
        assert!(inst.contained);
        let zeros = inst.h_zeros.unwrap();
        let s = 2.0f64.sqrt();
        assert!(zeros.roots.iter().any(|z| (z - c(1.0 + s, 0.0)).norm() < 1e-10));
        assert!(zeros.roots.iter().any(|z| (z - c(1.0 - s, 0.0)).norm() < 1e-10));
        assert!(inst.margins.iter().all(|&m| m <= inst.tol));
    }

    #[test]
    fn analyze_identically_zero() {
        // f = z^3, g = z^2: third derivative of a quadratic
        let f = Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let g = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let inst = analyze(&f, &g, None).unwrap();
        assert!(inst.identically_zero);
        assert!(inst.region.is_none());
    }

    #[test]
    fn analyze_point_region() {
        // f = z^2, g = z^4 -> h = 12 z^2, K = {0}
        let f = Polynomial::from_real(&[0.0, 0.0, 1.0]);
        let g = Polynomial::from_real(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        let inst = analyze(&f, &g, None).unwrap();
        assert_eq!(inst.h, Polynomial::from_real(&[0.0, 0.0, 12.0]));
        assert_eq!(inst.region, Some(ConvexRegion::Point(c(0.0, 0.0))));
        let zeros = inst.h_zeros.unwrap();
        assert_eq!(zeros.len(), 2);
        assert!(zeros.roots.iter().all(|z| z.norm() == 0.0));
        assert!(inst.contained);
    }

    #[test]
    fn certificate_at_known_zero() {
        // z = 1 + sqrt(2), roots {1, -1}, alpha = 1
        let roots = RootMultiset { roots: vec![c(1.0, 0.0), c(-1.0, 0.0)], residuals: vec![0.0; 2] };
        let z = c(1.0 + 2.0f64.sqrt(), 0.0);
        let cert = certificate(z, &roots, c(1.0, 0.0)).unwrap();
        // direct evaluation oracle: d1 = sqrt(2), d2 = 2 + sqrt(2)
        let w1 = 1.0 / 2.0f64; // 1/d1^2
        let w2 = 1.0 / (2.0 + 2.0f64.sqrt()).powi(2);
        let total = w1 + w2;
        assert!((cert.lambdas[0] - w1 / total).abs() < 1e-12);
        assert!((cert.lambdas[1] - w2 / total).abs() < 1e-12);
        assert!((cert.kappa - 1.0 / total).abs() < 1e-12);
        assert!((cert.lambdas[0] - 0.853553).abs() < 1e-6);
        assert!((cert.kappa - 1.707107).abs() < 1e-6);
        assert!(cert.reconstruction_error(z) < 1e-12);
        assert!(cert.kappa <= cert.schwarz_bound.unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn certificate_symmetry_and_plain_point() {
        let roots = RootMultiset { roots: vec![c(1.0, 0.0), c(-1.0, 0.0)], residuals: vec![0.0; 2] };
        let cert = certificate(c(0.0, 0.0), &roots, c(0.0, 0.0)).unwrap();
        assert!((cert.lambdas[0] - 0.5).abs() < 1e-15);
        assert!((cert.lambdas[1] - 0.5).abs() < 1e-15);
        assert!(cert.reconstruction.norm() < 1e-15);
        assert!(cert.schwarz_bound.is_none());

        let cert = certificate(c(2.0, 0.0), &roots, c(0.3, 0.7)).unwrap();
        assert!((cert.lambdas[0] - 0.9).abs() < 1e-12);
        assert!((cert.lambdas[1] - 0.1).abs() < 1e-12);
        assert!((cert.kappa - 0.9).abs() < 1e-12);
    }

    #[test]
    fn certificate_rejects_zero_of_g() {
        let roots = RootMultiset { roots: vec![c(1.0, 0.0), c(-1.0, 0.0)], residuals: vec![0.0; 2] };
        assert!(matches!(
            certificate(c(1.0, 0.0), &roots, c(1.0, 0.0)),
            Err(Error::CertificateAtRoot)
        ));
    }

    #[test]
    fn log_derivative_values() {
        let roots = RootMultiset { roots: vec![c(1.0, 0.0), c(-1.0, 0.0)], residuals: vec![0.0; 2] };
        let r = log_derivative_residual(c(1.0 + 2.0f64.sqrt(), 0.0), &roots, c(1.0, 0.0)).unwrap();
        assert!(r < 1e-12);
        let r = log_derivative_residual(c(0.0, 0.0), &roots, c(0.0, 0.0)).unwrap();
        assert!(r < 1e-15);
        let r = log_derivative_residual(c(2.0, 0.0), &roots, c(0.0, 0.0)).unwrap();
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_cases() {
        let (near, far) = quadratic_closed_form(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let s = 2.0f64.sqrt();
        assert!((near - c(1.0 - s, 0.0)).norm() < 1e-15);
        assert!((far - c(1.0 + s, 0.0)).norm() < 1e-15);

        let (near, far) = quadratic_closed_form(c(0.01, 0.0), c(1.0, 0.0)).unwrap();
        assert!((near - c(-0.005, 0.0)).norm() < 1e-6);
        assert!((far - c(200.005, 0.0)).norm() < 1e-3);

        // beta = 0 collapses K to a point: g = z^2, h = 2z - alpha z^2
        let (near, far) = quadratic_closed_form(c(2.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(near.norm() < 1e-15);
        assert!((far - c(1.0, 0.0)).norm() < 1e-15);

        assert!(matches!(
            quadratic_closed_form(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::ZeroAlpha)
        ));
    }
}
