//! Dense complex polynomial arithmetic and the differential composition
//! operator `f(D) g`.
//!
//! Coefficients are stored ascending: index `k` holds the coefficient of
//! `z^k`. The list is trimmed so the last entry is nonzero; the zero
//! polynomial is the empty list.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// A coefficient is treated as zero when its magnitude is at most
/// `REL_ZERO` times the largest coefficient magnitude. Used for trimming,
/// origin multiplicity, and detecting identically-zero compositions.
pub const REL_ZERO: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    #[serde(with = "crate::json::complex_vec")]
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Build from ascending coefficients, trimming near-zero leading terms.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `lead * prod (z - roots[i])`, expanded.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Polynomial::new(coeffs)
    }

    fn trim(&mut self) {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        let thresh = REL_ZERO * max;
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= thresh {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The k-th derivative. Degree drops by exactly `k` when `k <= deg`,
    /// otherwise the result is the zero polynomial.
    pub fn derivative(&self, k: usize) -> Polynomial {
        let mut cur = self.coeffs.clone();
        for _ in 0..k {
            if cur.len() <= 1 {
                cur.clear();
                break;
            }
            cur = cur
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * j as f64)
                .collect();
        }
        // exact power-rule arithmetic; no retrimming needed beyond Polynomial::new
        Polynomial::new(cur)
    }

    /// Multiplicity of 0 as a zero: index of the first coefficient above the
    /// relative-zero threshold.
    pub fn origin_multiplicity(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::UndefinedMultiplicity);
        }
        let thresh = REL_ZERO * self.max_coeff_norm();
        Ok(self
            .coeffs
            .iter()
            .position(|c| c.norm() > thresh)
            .expect("trimmed nonzero polynomial has a nonzero coefficient"))
    }

    /// Drop an exact factor `z^k` (the caller is responsible for `k` being at
    /// most the origin multiplicity).
    pub fn deflate_origin(&self, k: usize) -> Polynomial {
        Polynomial::new(self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Polynomial::new(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// The differential composition `h = f(D) g = sum_i a_i g^(i)`.
///
/// Satisfies `deg h = deg g - r` when `r <= deg g` (`r` = origin multiplicity
/// of `f`), and `h == 0` when `deg g < r`.
pub fn differential_compose(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() || g.is_zero() {
        return Polynomial::zero();
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); g.coeffs.len()];
    let mut deriv = g.clone();
    for (i, &a) in f.coeffs.iter().enumerate() {
        if i > 0 {
            deriv = deriv.derivative(1);
            if deriv.is_zero() {
                break;
            }
        }
        for (k, &c) in deriv.coeffs.iter().enumerate() {
            acc[k] += a * c;
        }
    }
    Polynomial::new(acc)
}

/// `g' - alpha g`, the degree-1 factor step. Coefficientwise identical to
/// `differential_compose([-alpha, 1], g)`.
pub fn linear_factor_apply(g: &Polynomial, alpha: Complex64) -> Polynomial {
    differential_compose(&Polynomial::new(vec![-alpha, Complex64::new(1.0, 0.0)]), g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Bisection on [lo, hi] for a real root of a real-coefficient polynomial.
    /// Independent of Horner evaluation order: sums monomials directly.
    fn bisect_real_root(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
        let eval = |x: f64| -> f64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| a * x.powi(k as i32))
                .sum()
        };
        assert!(eval(lo) * eval(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eval(lo) * eval(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn evaluate_simple() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]); // z^2 - 1
        assert_eq!(p.evaluate(c(2.0, 0.0)), c(3.0, 0.0));
        assert_eq!(Polynomial::zero().evaluate(c(5.0, 2.0)), c(0.0, 0.0));
    }

    #[test]
    fn evaluate_near_real_root() {
        // z^3 + 6z - 1 near its real root
        let p = Polynomial::from_real(&[-1.0, 6.0, 0.0, 1.0]);
        let root = bisect_real_root(&[-1.0, 6.0, 0.0, 1.0], 0.0, 0.5);
        let z = 0.166100;
        let v = p.evaluate(c(z, 0.0));
        // first-order check against the bisection oracle: p(z) ~ p'(root)(z - root)
        let slope = 6.0 + 3.0 * root * root;
        assert!((v.re - slope * (z - root)).abs() < 1e-6, "v = {v}, root = {root}");
        assert!(v.im == 0.0);
    }

    #[test]
    fn derivative_power_rule() {
        let p = Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]); // z^3
        assert_eq!(p.derivative(2), Polynomial::from_real(&[0.0, 6.0]));
        let g = Polynomial::from_real(&[-1.0, 0.0, 1.0]); // z^2 - 1 (beta = 1)
        assert_eq!(g.derivative(1), Polynomial::from_real(&[0.0, 2.0]));
        let k = Polynomial::from_real(&[5.0]);
        assert!(k.derivative(1).is_zero());
        assert!(p.derivative(7).is_zero());
    }

    #[test]
    fn compose_pure_derivative() {
        let f = Polynomial::from_real(&[0.0, 1.0]); // z
        let g = Polynomial::from_real(&[0.0, 0.0, 1.0]); // z^2
        assert_eq!(differential_compose(&f, &g), Polynomial::from_real(&[0.0, 2.0]));
    }

    #[test]
    fn compose_matches_symbolic_oracle() {
        // f = z^2 + 1, g = z^3 - 1 -> h = g'' + g = z^3 + 6z - 1
        let f = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let g = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let oracle = g.derivative(2).add(&g);
        let h = differential_compose(&f, &g);
        assert_eq!(h, oracle);
        assert_eq!(h, Polynomial::from_real(&[-1.0, 6.0, 0.0, 1.0]));
    }

    #[test]
    fn compose_linear_factor() {
        // f = z - 1, g = z^2 - 1 -> h = g' - g = -z^2 + 2z + 1
        let f = Polynomial::from_real(&[-1.0, 1.0]);
        let g = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let h = differential_compose(&f, &g);
        assert_eq!(h, Polynomial::from_real(&[1.0, 2.0, -1.0]));
        assert_eq!(h, linear_factor_apply(&g, c(1.0, 0.0)));
    }

    #[test]
    fn linear_factor_cases() {
        let g = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(
            linear_factor_apply(&g, c(0.0, 0.0)),
            Polynomial::from_real(&[0.0, 2.0])
        );
        let k = Polynomial::from_real(&[7.0]);
        assert_eq!(
            linear_factor_apply(&k, c(2.0, 0.0)),
            Polynomial::from_real(&[-14.0])
        );
    }

    #[test]
    fn origin_multiplicity_cases() {
        let f = Polynomial::from_real(&[0.0, 0.0, 2.0, 1.0]); // z^3 + 2z^2
        assert_eq!(f.origin_multiplicity().unwrap(), 2);
        assert_eq!(Polynomial::from_real(&[1.0]).origin_multiplicity().unwrap(), 0);
        assert_eq!(Polynomial::from_real(&[0.0, 1.0]).origin_multiplicity().unwrap(), 1);
        assert!(matches!(
            Polynomial::zero().origin_multiplicity(),
            Err(Error::UndefinedMultiplicity)
        ));
    }

    #[test]
    fn from_roots_expands() {
        // (z-1)^2 (z+2) = z^3 - 3z + 2
        let p = Polynomial::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]);
        assert_eq!(p, Polynomial::from_real(&[2.0, -3.0, 0.0, 1.0]));
    }

    #[test]
    fn trims_relative_noise() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(1e-15, 0.0)]);
        assert_eq!(p.degree(), Some(0));
    }

    #[test]
    fn json_round_trip_accepts_bare_reals() {
        let p: Polynomial = serde_json::from_str(r#"{"coeffs": [-1, 0, [1, 0]]}"#).unwrap();
        assert_eq!(p, Polynomial::from_real(&[-1.0, 0.0, 1.0]));
        let text = serde_json::to_string(&p).unwrap();
        let q: Polynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(p, q);
    }
}
