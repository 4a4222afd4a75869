//! Dense univariate polynomials over `f64`.
//!
//! This is the raw coefficient workhorse used wherever a polynomial is not
//! known to be real-rooted (polar derivatives, Wronskians, operator images).
//! Coefficients are stored lowest degree first; the zero polynomial is the
//! empty coefficient vector.

/// A dense polynomial `a_0 + a_1 x + … + a_n x^n`, not necessarily monic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Builds a polynomial from coefficients in ascending-degree order,
    /// trimming exact trailing zeros.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// Monic `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    /// Drops leading coefficients whose magnitude is below `rel` times the
    /// largest coefficient magnitude. Used when a linear combination of two
    /// same-degree polynomials cancels its top term only up to rounding.
    pub fn trim_relative(&self, rel: f64) -> Poly {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return Poly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        while let Some(&top) = coeffs.last() {
            if top.abs() <= rel * scale {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly::new(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `Σ |a_k| |x|^k`, the natural magnitude of the evaluation at `x`.
    /// Rounding in `eval` is bounded by a small multiple of `ε · envelope`,
    /// so sign tests use this as their relative scale.
    pub fn envelope(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Poly::new(coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| s * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }
}

/// Exact binomial coefficient as `f64`; exact for the degrees this crate
/// works at (n ≤ ~30).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0f64, |acc, i| acc * i as f64)
}
