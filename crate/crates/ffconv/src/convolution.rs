//! Finite free additive convolution `⊞_d`.
//!
//! Two routes are provided and kept deliberately independent so one can
//! check the other:
//!
//! * [`convolve`] uses the derivative formula
//!   `p ⊞_d q = Σ_k p^{(k)} (−1)^k σ_k(q) / k!`,
//!   where `σ_k` are the normalized symmetric sums of `q`;
//! * [`convolve_bruteforce`] averages the root pairings
//!   `(1/d!) Σ_π ∏ (x − a_i − b_{π(i)})` over all permutations, which is
//!   only feasible for small degree but needs nothing beyond expanding
//!   products.
//!
//! The pairing sum is divided by `d!` so both routes produce a monic result.

use itertools::Itertools;

use crate::error::{FfcError, Result};
use crate::poly::{factorial, Poly};
use crate::real_rooted::{RealRootedPoly, SymmetricProfile};

/// Largest degree accepted by the brute-force pairing average (`d! · d`
/// products become unreasonable beyond this).
pub const BRUTE_FORCE_MAX_DEGREE: usize = 7;

/// A differential operator `r(D) = ∏ (1 − α_i D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperatorSpec {
    alphas: Vec<f64>,
}

impl DiffOperatorSpec {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(FfcError::InvalidConfig(
                "operator needs at least one factor".into(),
            ));
        }
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(FfcError::NonFiniteInput);
        }
        Ok(DiffOperatorSpec { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }
}

/// Applies the linear map `f ↦ Σ_k f^{(k)} (−1)^k σ_k / k!` to a raw
/// polynomial. For monic `f` of matching degree this is exactly `f ⊞_d q`
/// with `σ = σ(q)`; the same map extends to lower-degree and non-monic
/// inputs, which is what the flow equations act on.
pub fn convolve_operator(f: &Poly, with: &SymmetricProfile) -> Poly {
    let mut acc = Poly::zero();
    let mut fk = f.clone();
    let mut k = 0usize;
    while !fk.is_zero() && k <= with.degree() {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let weight = sign * with.sigma_k(k) / factorial(k);
        if weight != 0.0 {
            acc = acc.add(&fk.scale(weight));
        }
        fk = fk.derivative();
        k += 1;
    }
    acc
}

/// `p ⊞_d q` through the derivative formula. Both inputs must have the same
/// degree; the result is monic, real-rooted, and commutes with swapping the
/// arguments up to rounding. A `NotRealRooted` error here signals numerical
/// breakdown, not a mathematical failure.
pub fn convolve(p: &RealRootedPoly, q: &RealRootedPoly) -> Result<RealRootedPoly> {
    if p.degree() != q.degree() {
        return Err(FfcError::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    let out = convolve_operator(&p.to_poly(), &q.symmetric_profile());
    let d = p.degree();
    debug_assert_eq!(out.degree(), Some(d));
    // The x^d coefficient is exactly 1 by construction (only k = 0
    // contributes at the top); take the low-order part as monic.
    let coeffs: Vec<f64> = (0..d).map(|k| out.coeff(k)).collect();
    RealRootedPoly::from_coeffs(&coeffs)
}

/// The pairing-average definition: `(1/d!) Σ_π ∏ (x − a_i − b_{π(i)})`.
/// Exponential in the degree; serves as the independent oracle for
/// [`convolve`] at small degree.
pub fn convolve_bruteforce(p: &RealRootedPoly, q: &RealRootedPoly) -> Result<RealRootedPoly> {
    if p.degree() != q.degree() {
        return Err(FfcError::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    let d = p.degree();
    if d > BRUTE_FORCE_MAX_DEGREE {
        return Err(FfcError::TooLarge {
            degree: d,
            max: BRUTE_FORCE_MAX_DEGREE,
        });
    }
    let a = p.roots();
    let mut sum = vec![0.0f64; d + 1];
    let mut count = 0usize;
    for perm in q.roots().iter().permutations(d) {
        let paired: Vec<f64> = a.iter().zip(&perm).map(|(ai, bi)| ai + **bi).collect();
        let product = monic_from_roots_full(&paired);
        for (s, c) in sum.iter_mut().zip(&product) {
            *s += c;
        }
        count += 1;
    }
    let norm = count as f64; // d!
    let coeffs: Vec<f64> = sum[..d].iter().map(|c| c / norm).collect();
    RealRootedPoly::from_coeffs(&coeffs)
}

/// `p ⊞_d (x−c)^d`, which is the pure translation `p(x − c)`.
pub fn shift_by_scalar(p: &RealRootedPoly, c: f64) -> RealRootedPoly {
    p.shift(c)
}

/// Applies `r(D) = ∏ (1 − α_i D)` as the sequence `p ← p − α_i p′`,
/// left to right over the factors. The factors commute, so the order only
/// affects rounding; fixing it keeps runs reproducible.
pub fn apply_diff_operator(p: &RealRootedPoly, spec: &DiffOperatorSpec) -> Result<RealRootedPoly> {
    if !p.has_simple_roots() {
        return Err(FfcError::MultipleRoots {
            min_gap: p.min_gap(),
        });
    }
    let mut current = p.clone();
    for &alpha in spec.alphas() {
        if alpha == 0.0 {
            continue;
        }
        let full = current.to_poly();
        let next = full.sub(&full.derivative().scale(alpha));
        let d = current.degree();
        let coeffs: Vec<f64> = (0..d).map(|k| next.coeff(k)).collect();
        current = RealRootedPoly::from_coeffs(&coeffs)?;
    }
    Ok(current)
}

/// Full monic coefficient vector (length `roots.len() + 1`) of
/// `∏ (x − r_i)`, low order first.
fn monic_from_roots_full(roots: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; roots.len() + 1];
    full[0] = 1.0;
    for (len, &r) in (1..).zip(roots) {
        full[len] = full[len - 1];
        for i in (1..len).rev() {
            full[i] = full[i - 1] - r * full[i];
        }
        full[0] *= -r;
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    fn poly(roots: &[f64]) -> RealRootedPoly {
        RealRootedPoly::from_roots(roots).unwrap()
    }

    #[test]
    fn square_of_unit_pair() {
        // (x²−1) ⊞ (x²−1) = x²−2.
        let p = poly(&[-1.0, 1.0]);
        let r = convolve(&p, &p).unwrap();
        assert!(rel_close(r.coeffs()[0], -2.0, 1e-14));
        assert!(r.coeffs()[1].abs() < 1e-14);
    }

    #[test]
    fn convolving_with_a_shift_polynomial_translates() {
        // (x²−1) ⊞ (x−1)² = x² − 2x.
        let p = poly(&[-1.0, 1.0]);
        let q = poly(&[1.0, 1.0]);
        let r = convolve(&p, &q).unwrap();
        assert!(r.roots()[0].abs() < 1e-12);
        assert!(rel_close(r.roots()[1], 2.0, 1e-12));

        // Same through the explicit translation.
        let s = shift_by_scalar(&p, 1.0);
        for (a, b) in r.roots().iter().zip(s.roots()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn first_order_operator_form() {
        // q = x³ − 3x² has σ_1 = 1 and higher sums zero, so p ⊞ q = p − p′.
        let p = poly(&[-1.0, 0.0, 1.0]);
        let q = RealRootedPoly::from_coeffs(&[0.0, 0.0, -3.0]).unwrap();
        let r = convolve(&p, &q).unwrap();
        // p − p′ = x³ − 3x² − x + 1.
        assert!(rel_close(r.coeffs()[0], 1.0, 1e-12));
        assert!(rel_close(r.coeffs()[1], -1.0, 1e-12));
        assert!(rel_close(r.coeffs()[2], -3.0, 1e-12));
    }

    #[test]
    fn brute_force_matches_hand_average() {
        // The two pairings of (x²−1) ⊞ (x²−1) give x²−4 and x², mean x²−2.
        let p = poly(&[-1.0, 1.0]);
        let r = convolve_bruteforce(&p, &p).unwrap();
        assert!(rel_close(r.coeffs()[0], -2.0, 1e-14));
        assert!(r.coeffs()[1].abs() < 1e-14);
    }

    #[test]
    fn brute_force_degree_one() {
        let p = poly(&[2.5]);
        let q = poly(&[-1.0]);
        let r = convolve_bruteforce(&p, &q).unwrap();
        assert_eq!(r.roots(), &[1.5]);
    }

    #[test]
    fn brute_force_with_zero_shift() {
        // (x²−1) ⊞ x² = x²−1.
        let p = poly(&[-1.0, 1.0]);
        let q = poly(&[0.0, 0.0]);
        let r = convolve_bruteforce(&p, &q).unwrap();
        assert!(rel_close(r.coeffs()[0], -1.0, 1e-14));
        assert!(r.coeffs()[1].abs() < 1e-14);
    }

    #[test]
    fn brute_force_rejects_large_degree() {
        let roots: Vec<f64> = (0..8).map(|k| k as f64).collect();
        let p = poly(&roots);
        assert!(matches!(
            convolve_bruteforce(&p, &p),
            Err(FfcError::TooLarge { .. })
        ));
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let p = poly(&[-1.0, 1.0]);
        let q = poly(&[-1.0, 0.0, 1.0]);
        assert!(matches!(
            convolve(&p, &q),
            Err(FfcError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            convolve_bruteforce(&p, &q),
            Err(FfcError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn shift_identity_and_translation() {
        let p = poly(&[-1.0, 1.0]);
        assert_eq!(shift_by_scalar(&p, 0.0).roots(), p.roots());
        assert_eq!(shift_by_scalar(&p, 1.0).roots(), &[0.0, 2.0]);
        let cubic = poly(&[-1.0, 0.0, 1.0]);
        assert_eq!(shift_by_scalar(&cubic, -2.0).roots(), &[-3.0, -2.0, -1.0]);
    }

    #[test]
    fn diff_operator_single_and_two_step() {
        let p = poly(&[-1.0, 1.0]);

        // α = 1: p − p′ = x² − 2x − 1, roots 1 ± √2.
        let spec = DiffOperatorSpec::new(vec![1.0]).unwrap();
        let r = apply_diff_operator(&p, &spec).unwrap();
        assert!(rel_close(r.coeffs()[0], -1.0, 1e-12));
        assert!(rel_close(r.coeffs()[1], -2.0, 1e-12));

        // α = 0 leaves p unchanged.
        let zero = DiffOperatorSpec::new(vec![0.0]).unwrap();
        let same = apply_diff_operator(&p, &zero).unwrap();
        assert_eq!(same.coeffs(), p.coeffs());

        // α = [1, −1]: q₁ = x²−2x−1, then q₁ + q₁′ = x² − 3.
        let spec = DiffOperatorSpec::new(vec![1.0, -1.0]).unwrap();
        let r = apply_diff_operator(&p, &spec).unwrap();
        assert!(rel_close(r.coeffs()[0], -3.0, 1e-12));
        assert!(r.coeffs()[1].abs() < 1e-12);
    }

    #[test]
    fn diff_operator_requires_simple_roots() {
        let double = poly(&[1.0, 1.0]);
        let spec = DiffOperatorSpec::new(vec![0.5]).unwrap();
        assert!(matches!(
            apply_diff_operator(&double, &spec),
            Err(FfcError::MultipleRoots { .. })
        ));
    }

    #[test]
    fn operator_spec_validation() {
        assert!(DiffOperatorSpec::new(vec![]).is_err());
        assert!(DiffOperatorSpec::new(vec![f64::NAN]).is_err());
    }
}
