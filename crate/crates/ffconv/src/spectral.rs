//! Discriminant, entropy and root-spread quantities.
//!
//! The discriminant `Dis(p) = ∏_{i<j} (λ_i − λ_j)²` grows super-exponentially
//! with degree and gap scale, so every comparison in this crate happens on
//! `log Dis`; the plain value is exposed when it fits in an `f64`.

use serde::{Deserialize, Serialize};

use crate::poly::binomial;
use crate::real_rooted::RealRootedPoly;

/// Which route produced a [`DiscriminantReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisMethod {
    /// `2 Σ_{i<j} log |λ_i − λ_j|` straight from the root pairs.
    #[serde(rename = "root-pairs")]
    RootPairs,
    /// `(−1)^{d(d−1)/2} ∏ p′(λ_i)` with the true derivative.
    #[serde(rename = "derivative-product")]
    DerivativeProduct,
}

/// Discriminant summary for one polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantReport {
    /// Natural log of the discriminant; `−∞` when a root pair collides.
    pub log_dis: f64,
    /// `exp(log_dis)` when it is representable, `None` on overflow.
    pub dis: Option<f64>,
    pub method: DisMethod,
    /// `log_dis / (2 C(d,2))`, the mean log root gap.
    pub entropy: f64,
    /// `Dis^{1/C(d,2)} = exp(2 · entropy)`.
    pub normalized: f64,
}

/// `log Dis(p) = 2 Σ_{i<j} log |λ_i − λ_j|`; `−∞` when any pair coincides
/// exactly.
pub fn log_discriminant(p: &RealRootedPoly) -> f64 {
    let roots = p.roots();
    let mut acc = 0.0f64;
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let gap = (roots[i] - roots[j]).abs();
            if gap == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += gap.ln();
        }
    }
    2.0 * acc
}

/// `Dis(p) = (−1)^{d(d−1)/2} ∏ p′(λ_i)` with the true (non-monic)
/// derivative, evaluated in the root representation. Repeated roots give 0.
/// Overflows to `+∞` for large degree/scale; prefer [`log_discriminant`]
/// for comparisons.
pub fn discriminant_via_derivative(p: &RealRootedPoly) -> f64 {
    let roots = p.roots();
    let d = roots.len();
    let mut product = 1.0f64;
    for (i, &lambda) in roots.iter().enumerate() {
        // p′(λ_i) = ∏_{j≠i} (λ_i − λ_j) for monic p.
        let mut deriv = 1.0f64;
        for (j, &other) in roots.iter().enumerate() {
            if j != i {
                deriv *= lambda - other;
            }
        }
        product *= deriv;
    }
    let sign = if (d * (d - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * product
}

/// `h(p) = (1/C(d,2)) Σ_{i<j} log |λ_i − λ_j| = log Dis(p) / (2 C(d,2))`.
/// Returns `−∞` for repeated roots; degree 1 has no pairs and reports 0.
pub fn entropy(p: &RealRootedPoly) -> f64 {
    let d = p.degree();
    if d < 2 {
        return 0.0;
    }
    log_discriminant(p) / (2.0 * binomial(d, 2))
}

/// `exp(2 h(p)) = Dis(p)^{1/C(d,2)}`, the normalized discriminant.
pub fn normalized_discriminant(p: &RealRootedPoly) -> f64 {
    (2.0 * entropy(p)).exp()
}

/// `Σ_{i<j} (λ_i − λ_j)²`, computed from the roots.
pub fn spread(p: &RealRootedPoly) -> f64 {
    let roots = p.roots();
    let mut acc = 0.0f64;
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let gap = roots[i] - roots[j];
            acc += gap * gap;
        }
    }
    acc
}

/// The same spread through the coefficient identity
/// `(d−1) c_{d−1}² − 2 d c_{d−2}` (degree 1 has no pairs, spread 0).
pub fn spread_from_coeffs(p: &RealRootedPoly) -> f64 {
    let d = p.degree();
    if d < 2 {
        return 0.0;
    }
    let full = p.to_poly();
    let c1 = full.coeff(d - 1);
    let c2 = full.coeff(d - 2);
    (d as f64 - 1.0) * c1 * c1 - 2.0 * d as f64 * c2
}

/// True when `q` is numerically of the form `(x − c)^d`, the degenerate
/// class under which convolution acts as a pure translation. Classified by
/// `spread(q) ≤ 1e−12 · (1 + max |root|)²`.
pub fn is_shift_class(q: &RealRootedPoly) -> bool {
    let scale = 1.0 + q.max_abs_root();
    spread(q) <= 1e-12 * scale * scale
}

/// True when some root pair sits inside the collision tolerance, i.e. the
/// discriminant is numerically zero.
pub fn is_collided(p: &RealRootedPoly) -> bool {
    !p.has_simple_roots()
}

/// Builds the full report through the requested method.
pub fn report(p: &RealRootedPoly, method: DisMethod) -> DiscriminantReport {
    let log_dis = match method {
        DisMethod::RootPairs => log_discriminant(p),
        DisMethod::DerivativeProduct => {
            let v = discriminant_via_derivative(p);
            if v <= 0.0 {
                f64::NEG_INFINITY
            } else {
                v.ln()
            }
        }
    };
    let dis = if log_dis.is_finite() {
        let v = log_dis.exp();
        if v.is_finite() {
            Some(v)
        } else {
            None
        }
    } else if log_dis == f64::NEG_INFINITY {
        Some(0.0)
    } else {
        None
    };
    let d = p.degree();
    let entropy = if d < 2 {
        0.0
    } else {
        log_dis / (2.0 * binomial(d, 2))
    };
    DiscriminantReport {
        log_dis,
        dis,
        method,
        entropy,
        normalized: (2.0 * entropy).exp(),
    }
}
