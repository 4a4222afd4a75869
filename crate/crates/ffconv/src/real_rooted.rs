//! Monic real-rooted polynomials carried by their roots.
//!
//! The roots are the primary representation — discriminants, dilations and
//! interlacing tests all read them directly — and the monic coefficient
//! expansion is computed once at construction and kept alongside, so both
//! views stay consistent. Values are immutable after construction and can be
//! shared freely across threads.

use crate::error::{FfcError, Result};
use crate::poly::{binomial, factorial, Poly};
use crate::roots::find_real_roots;

/// A monic polynomial `∏ (x − λ_i)` of degree `d ≥ 1` with all roots real.
///
/// Repeated roots are allowed (the discriminant is then zero); operations
/// whose hypotheses need simple roots say so and check it.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRootedPoly {
    /// Sorted ascending.
    roots: Vec<f64>,
    /// `c_0 … c_{d−1}`; the leading coefficient 1 is implicit.
    coeffs: Vec<f64>,
}

/// Normalized symmetric sums `σ_k = e_k(roots) / C(d, k)` for `k = 0..=d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricProfile {
    degree: usize,
    sigma: Vec<f64>,
}

/// A true (unnormalized) derivative: `scale · monic`. Wronskian-style
/// computations need the honest leading coefficient, so derivatives carry
/// their scalar factor instead of silently renormalizing.
#[derive(Clone, Debug)]
pub struct ScaledPoly {
    pub monic: RealRootedPoly,
    pub scale: f64,
}

impl ScaledPoly {
    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.monic.evaluate(x)
    }

    pub fn to_poly(&self) -> Poly {
        self.monic.to_poly().scale(self.scale)
    }
}

impl RealRootedPoly {
    /// Builds the polynomial with the given real roots; coefficients are
    /// expanded by stable iterated multiplication by `(x − λ)`.
    pub fn from_roots(roots: &[f64]) -> Result<Self> {
        if roots.is_empty() {
            return Err(FfcError::DegreeTooSmall { degree: 0, min: 1 });
        }
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(FfcError::NonFiniteInput);
        }
        let mut sorted = roots.to_vec();
        sorted.sort_by(f64::total_cmp);
        let coeffs = expand_from_roots(&sorted);
        Ok(RealRootedPoly {
            roots: sorted,
            coeffs,
        })
    }

    /// Interprets `coeffs = [c_0, …, c_{d−1}]` as the monic polynomial
    /// `x^d + c_{d−1} x^{d−1} + … + c_0` and recovers its roots.
    /// Fails with [`FfcError::NotRealRooted`] when any root keeps an
    /// imaginary part above the realness tolerance.
    pub fn from_coeffs(coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(FfcError::DegreeTooSmall { degree: 0, min: 1 });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(FfcError::NonFiniteInput);
        }
        let roots = find_real_roots(coeffs)?;
        Ok(RealRootedPoly {
            roots,
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Low-order coefficients `c_0 … c_{d−1}` (monic, so the top is omitted).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Full dense form including the leading 1.
    pub fn to_poly(&self) -> Poly {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.extend_from_slice(&self.coeffs);
        c.push(1.0);
        Poly::new(c)
    }

    /// `∏ (x − λ_i)`, evaluated in the root representation. For a
    /// real-rooted polynomial this gets the sign exactly right at any `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.roots.iter().fold(1.0, |acc, &r| acc * (x - r))
    }

    /// The `order`-th true derivative, as monic part × scalar factor.
    /// The roots of the monic part are recovered by root finding (they are
    /// real by Rolle's theorem, though a tight root cluster can defeat the
    /// numerical tolerance — that surfaces as `NotRealRooted`).
    pub fn derivative(&self, order: usize) -> Result<ScaledPoly> {
        let d = self.degree();
        if order >= d {
            return Err(FfcError::DegreeUnderflow { degree: d, order });
        }
        if order == 0 {
            return Ok(ScaledPoly {
                monic: self.clone(),
                scale: 1.0,
            });
        }
        let mut p = self.to_poly();
        for _ in 0..order {
            p = p.derivative();
        }
        // d (d−1) … (d−order+1)
        let scale = factorial(d) / factorial(d - order);
        let monic_coeffs: Vec<f64> = p.coeffs()[..d - order]
            .iter()
            .map(|c| c / scale)
            .collect();
        let monic = RealRootedPoly::from_coeffs(&monic_coeffs)?;
        Ok(ScaledPoly { monic, scale })
    }

    /// The polar derivative `d·p − x·p′`, a raw polynomial of degree at most
    /// `d − 1` (lower when `c_{d−1} = 0`).
    pub fn polar_derivative(&self) -> Poly {
        let p = self.to_poly();
        let d = self.degree() as f64;
        p.scale(d).sub(&p.derivative().mul_x())
    }

    /// Normalized symmetric sums computed from the cached coefficients via
    /// `e_k = (−1)^k c_{d−k}`.
    pub fn symmetric_profile(&self) -> SymmetricProfile {
        let d = self.degree();
        let full = self.to_poly();
        let sigma = (0..=d)
            .map(|k| {
                let e_k = if k.is_multiple_of(2) { 1.0 } else { -1.0 } * full.coeff(d - k);
                e_k / binomial(d, k)
            })
            .collect();
        SymmetricProfile { degree: d, sigma }
    }

    /// Scales every root by `√t`. `t = 0` collapses to `x^d`, `t = 1` is the
    /// identity.
    pub fn time_dilate(&self, t: f64) -> Result<Self> {
        if t.is_nan() || t < 0.0 {
            return Err(FfcError::InvalidParameter {
                name: "t",
                value: t,
            });
        }
        let s = t.sqrt();
        let roots: Vec<f64> = self.roots.iter().map(|r| r * s).collect();
        RealRootedPoly::from_roots(&roots)
    }

    /// Translates every root by `+c`, i.e. returns `p(x − c)`.
    pub fn shift(&self, c: f64) -> Self {
        let roots: Vec<f64> = self.roots.iter().map(|r| r + c).collect();
        RealRootedPoly::from_roots(&roots).expect("translated roots stay finite")
    }

    /// Hull of the roots as `(min, max)`.
    pub fn root_span(&self) -> (f64, f64) {
        (self.roots[0], self.roots[self.roots.len() - 1])
    }

    /// Smallest gap between consecutive roots; infinity for degree 1.
    pub fn min_gap(&self) -> f64 {
        self.roots
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_root(&self) -> f64 {
        self.roots.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }

    /// True when all roots are separated by more than the collision
    /// tolerance `1e−10 · (1 + max |root|)`.
    pub fn has_simple_roots(&self) -> bool {
        self.degree() == 1 || self.min_gap() > 1e-10 * (1.0 + self.max_abs_root())
    }
}

impl SymmetricProfile {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `σ_0 … σ_d`.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn sigma_k(&self, k: usize) -> f64 {
        self.sigma.get(k).copied().unwrap_or(0.0)
    }
}

fn expand_from_roots(roots: &[f64]) -> Vec<f64> {
    // Iterated multiplication of the full (monic) coefficient vector by
    // (x − λ); low order first, leading 1 kept explicitly then dropped.
    let d = roots.len();
    let mut full = vec![0.0; d + 1];
    full[0] = 1.0;
    for (len, &r) in (1..).zip(roots) {
        full[len] = full[len - 1];
        for i in (1..len).rev() {
            full[i] = full[i - 1] - r * full[i];
        }
        full[0] *= -r;
    }
    full.truncate(d);
    full
}
