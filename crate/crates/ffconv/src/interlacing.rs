//! Wronskians, interlacing detection, and sign-preservation checks.
//!
//! Wronskian evaluation works on raw coefficients with Horner evaluation —
//! never through root products — because several of the polynomials tested
//! here (polar derivatives, operator images) are exactly the ones whose
//! real-rootedness is in question.
//!
//! Sign tests run on a Chebyshev-spaced grid over the root hull plus one
//! span of margin on each side; the nodes cluster at the hull edges where
//! Wronskians degenerate. "Strictly positive" and "non-negative" are always
//! judged against a rounding envelope proportional to the natural magnitude
//! of the evaluation, so the verdicts stay meaningful across scales.

use serde::Serialize;

use crate::convolution::convolve_operator;
use crate::error::{FfcError, Result};
use crate::poly::Poly;
use crate::real_rooted::RealRootedPoly;
use crate::roots::find_real_roots_raw;
use crate::spectral::spread;

/// Number of grid points used by [`standard_grid`].
pub const GRID_POINTS: usize = 512;

/// Relative slack allowed when testing `W ≥ 0` on a grid.
pub const NONNEG_TOL: f64 = 1e-9;

/// Strictness margin for `W > 0`, as a multiple of the Horner evaluation
/// envelope. The forward error of evaluating a degree-n polynomial is below
/// `2n·ε·envelope`; 32ε covers the degrees this crate works at with room to
/// spare while staying far under honest positive values.
pub const STRICT_MARGIN: f64 = 32.0 * f64::EPSILON;

/// Constant sign of a Wronskian over the sampled grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WronskianSign {
    #[serde(rename = "nonneg")]
    NonNeg,
    #[serde(rename = "nonpos")]
    NonPos,
    #[serde(rename = "mixed")]
    Mixed,
}

/// Outcome of an interlacing test.
#[derive(Clone, Debug, Serialize)]
pub struct InterlacingVerdict {
    /// Whether the sorted root lists alternate (weakly).
    pub interlaces: bool,
    pub wronskian_sign: WronskianSign,
    /// A grid point (x, W(x)) where sign constancy failed, if it did.
    pub witness: Option<(f64, f64)>,
}

/// `W[f,g](x) = f′(x) g(x) − g′(x) f(x)` with true derivatives.
pub fn wronskian(f: &Poly, g: &Poly, x: f64) -> f64 {
    f.derivative().eval(x) * g.eval(x) - g.derivative().eval(x) * f.eval(x)
}

/// The Wronskian as a polynomial, by coefficient arithmetic.
pub fn wronskian_poly(f: &Poly, g: &Poly) -> Poly {
    f.derivative().mul(g).sub(&g.derivative().mul(f))
}

/// Rounding envelope for evaluating `W[f,g]` at `x`: the absolute error of
/// the floating computation is a small multiple of machine epsilon times
/// this quantity.
pub fn wronskian_envelope(f: &Poly, g: &Poly, x: f64) -> f64 {
    f.derivative().envelope(x) * g.envelope(x) + g.derivative().envelope(x) * f.envelope(x)
}

/// `n` Chebyshev–Gauss nodes on `[lo, hi]`, ascending.
pub fn chebyshev_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut grid: Vec<f64> = (0..n)
        .map(|j| {
            let theta = std::f64::consts::PI * (2.0 * j as f64 + 1.0) / (2.0 * n as f64);
            mid + half * theta.cos()
        })
        .collect();
    grid.reverse();
    grid
}

/// The sign-test grid for a root hull `(min, max)`: 512 Chebyshev nodes on
/// `[min − span, max + span]` where `span = max − min`, or 1 when the hull
/// is a single point.
pub fn standard_grid(hull: (f64, f64)) -> Vec<f64> {
    let (min, max) = hull;
    let mut span = max - min;
    if span == 0.0 {
        span = 1.0;
    }
    chebyshev_grid(min - span, max + span, GRID_POINTS)
}

/// Union hull of the roots of several polynomials.
pub fn root_hull(polys: &[&RealRootedPoly]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for p in polys {
        let (lo, hi) = p.root_span();
        min = min.min(lo);
        max = max.max(hi);
    }
    (min, max)
}

/// Result of sampling `W[p′, p″]` over a point set.
#[derive(Clone, Debug, Serialize)]
pub struct LaguerreOutcome {
    /// True iff every sample cleared the strictness margin
    /// `1e−12 · (1 + |x|)^{2d} · max|coeff|`.
    pub strictly_positive: bool,
    pub min_value: f64,
    pub argmin: f64,
}

/// Evaluates `W[p′, p″] = p″² − p′ p‴` at the sample points and reports the
/// minimum. For simple-rooted `p` of degree ≥ 2 this is strictly positive
/// everywhere; the value is still reported when the hypothesis is violated.
pub fn laguerre_check(p: &RealRootedPoly, sample_points: &[f64]) -> Result<LaguerreOutcome> {
    let d = p.degree();
    if d < 2 {
        return Err(FfcError::DegreeTooSmall { degree: d, min: 2 });
    }
    let dp = p.to_poly().derivative();
    let ddp = dp.derivative();
    let w = wronskian_poly(&dp, &ddp);
    let mut min_value = f64::INFINITY;
    let mut argmin = f64::NAN;
    let mut strict = true;
    for &x in sample_points {
        let value = w.eval(x);
        if value < min_value {
            min_value = value;
            argmin = x;
        }
        // Strictness margin: the rounding floor of the Horner evaluation,
        // proportional to the polynomial's natural magnitude at x.
        let margin = STRICT_MARGIN * (w.envelope(x) + f64::MIN_POSITIVE);
        if value <= margin {
            strict = false;
        }
    }
    Ok(LaguerreOutcome {
        strictly_positive: strict,
        min_value,
        argmin,
    })
}

/// Checks weak root alternation plus Wronskian sign constancy on the
/// standard grid. Degrees may differ by at most one.
pub fn check_interlacing(f: &RealRootedPoly, g: &RealRootedPoly) -> Result<InterlacingVerdict> {
    let (n, m) = (f.degree(), g.degree());
    if n.abs_diff(m) > 1 {
        return Err(FfcError::DegreeMismatch { left: n, right: m });
    }
    let interlaces = roots_alternate(f.roots(), g.roots());
    let grid = standard_grid(root_hull(&[f, g]));
    let (sign, witness) = wronskian_sign_on_grid(&f.to_poly(), &g.to_poly(), &grid);
    Ok(InterlacingVerdict {
        interlaces,
        wronskian_sign: sign,
        witness,
    })
}

/// Weak alternation of two sorted root lists whose lengths differ by ≤ 1.
fn roots_alternate(a: &[f64], b: &[f64]) -> bool {
    if a.len() < b.len() {
        return roots_alternate(b, a);
    }
    match a.len() - b.len() {
        0 => interleaved(a, b) || interleaved(b, a),
        1 => interleaved(a, b),
        _ => false,
    }
}

/// `a_1 ≤ b_1 ≤ a_2 ≤ b_2 ≤ …` with `a` the longer (or equal) list.
/// Roots are finite by construction, so plain comparisons suffice.
fn interleaved(a: &[f64], b: &[f64]) -> bool {
    for i in 0..b.len() {
        if a[i] > b[i] {
            return false;
        }
        if i + 1 < a.len() && b[i] > a[i + 1] {
            return false;
        }
    }
    true
}

fn wronskian_sign_on_grid(
    f: &Poly,
    g: &Poly,
    grid: &[f64],
) -> (WronskianSign, Option<(f64, f64)>) {
    let df = f.derivative();
    let dg = g.derivative();
    let mut saw_pos: Option<(f64, f64)> = None;
    let mut saw_neg: Option<(f64, f64)> = None;
    for &x in grid {
        let value = df.eval(x) * g.eval(x) - dg.eval(x) * f.eval(x);
        let env = df.envelope(x) * g.envelope(x) + dg.envelope(x) * f.envelope(x);
        let margin = NONNEG_TOL * (env + f64::MIN_POSITIVE);
        if value > margin && saw_pos.is_none() {
            saw_pos = Some((x, value));
        } else if value < -margin && saw_neg.is_none() {
            saw_neg = Some((x, value));
        }
        if saw_pos.is_some() && saw_neg.is_some() {
            break;
        }
    }
    match (saw_pos, saw_neg) {
        (Some(_), Some(neg)) => (WronskianSign::Mixed, Some(neg)),
        (Some(_) | None, None) => (WronskianSign::NonNeg, None),
        (None, Some(_)) => (WronskianSign::NonPos, None),
    }
}

/// Statistical proxy for the linear-combination criterion: draws `(a, b)`
/// on the unit circle and tests `a·f + b·g` for real-rootedness. Returns
/// true iff every sampled combination was real-rooted.
pub fn hko_sample_test(
    f: &RealRootedPoly,
    g: &RealRootedPoly,
    trials: u32,
    seed: u64,
) -> Result<bool> {
    use rand::{Rng, SeedableRng};
    if f.degree() != g.degree() {
        return Err(FfcError::DegreeMismatch {
            left: f.degree(),
            right: g.degree(),
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let fp = f.to_poly();
    let gp = g.to_poly();
    for _ in 0..trials {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let combo = fp.scale(theta.cos()).add(&gp.scale(theta.sin()));
        match find_real_roots_raw(&combo) {
            Ok(_) => {}
            // a + b ≈ 0 with f = g collapses to the zero polynomial.
            Err(FfcError::DegreeTooSmall { .. }) => {}
            Err(FfcError::NotRealRooted { .. }) => return Ok(false),
            Err(other) => return Err(other),
        }
    }
    Ok(true)
}

/// Verdict for the positivity of `W[∂̇q, q′]`.
#[derive(Clone, Debug, Serialize)]
pub struct PolarWronskianVerdict {
    /// `W(x) ≥ −1e−9 · envelope(x)` held at every grid point.
    pub nonnegative: bool,
    /// Smallest raw grid value.
    pub grid_min: f64,
    /// Coefficient of `x^{2(d−2)}`, which equals `Σ_{i<j} (λ_i − λ_j)²`.
    pub leading_value: f64,
    /// The spread computed independently from the roots, for comparison.
    pub spread: f64,
    /// Largest `|W(x)| / envelope(x)` seen; `≈ ε` when `W ≡ 0` up to
    /// rounding, as happens for shift polynomials.
    pub max_envelope_ratio: f64,
}

/// Computes `W[∂̇q, q′]` by coefficient arithmetic and tests it against
/// zero on the standard grid. The leading coefficient reproduces the root
/// spread; for `q = (x−c)^d` the Wronskian vanishes identically.
pub fn polar_wronskian_positivity(q: &RealRootedPoly) -> PolarWronskianVerdict {
    let d = q.degree();
    let polar = q.polar_derivative();
    let deriv = q.to_poly().derivative();
    let w = wronskian_poly(&polar, &deriv);

    let leading_value = if d >= 2 { w.coeff(2 * (d - 2)) } else { 0.0 };

    let grid = standard_grid(q.root_span());
    let dp_polar = polar.derivative();
    let dp_deriv = deriv.derivative();
    let mut grid_min = f64::INFINITY;
    let mut nonnegative = true;
    let mut max_ratio = 0.0f64;
    for &x in &grid {
        let value = w.eval(x);
        let env = dp_polar.envelope(x) * deriv.envelope(x)
            + dp_deriv.envelope(x) * polar.envelope(x)
            + f64::MIN_POSITIVE;
        grid_min = grid_min.min(value);
        if value < -NONNEG_TOL * env {
            nonnegative = false;
        }
        max_ratio = max_ratio.max(value.abs() / env);
    }
    PolarWronskianVerdict {
        nonnegative,
        grid_min,
        leading_value,
        spread: spread(q),
        max_envelope_ratio: max_ratio,
    }
}

/// Outcome of a sign-preservation test under convolution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SignPreservation {
    /// `W[f,g]` was not non-negative on the grid to begin with.
    PreconditionFailed { x: f64, value: f64 },
    Preserved,
    Violated { x: f64, value: f64 },
}

/// Checks that `W[f,g] ≥ 0` on the grid implies
/// `W[f ⊞ p, g ⊞ p] ≥ 0` there too, with both images taken through the
/// linear operator form so non-monic, lower-degree inputs are handled
/// faithfully.
pub fn convolution_preserves_wronskian_sign(
    f: &Poly,
    g: &Poly,
    p: &RealRootedPoly,
    grid: &[f64],
) -> SignPreservation {
    if let Some((x, value)) = first_negative(f, g, grid) {
        return SignPreservation::PreconditionFailed { x, value };
    }
    let profile = p.symmetric_profile();
    let fc = convolve_operator(f, &profile);
    let gc = convolve_operator(g, &profile);
    match first_negative(&fc, &gc, grid) {
        Some((x, value)) => SignPreservation::Violated { x, value },
        None => SignPreservation::Preserved,
    }
}

fn first_negative(f: &Poly, g: &Poly, grid: &[f64]) -> Option<(f64, f64)> {
    let df = f.derivative();
    let dg = g.derivative();
    for &x in grid {
        let value = df.eval(x) * g.eval(x) - dg.eval(x) * f.eval(x);
        let env = df.envelope(x) * g.envelope(x)
            + dg.envelope(x) * f.envelope(x)
            + f64::MIN_POSITIVE;
        if value < -NONNEG_TOL * env {
            return Some((x, value));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(roots: &[f64]) -> RealRootedPoly {
        RealRootedPoly::from_roots(roots).unwrap()
    }

    #[test]
    fn wronskian_point_values() {
        // p = x²−1: W[p′, p″] = 2·2 − 0·2x = 4 at any x.
        let f = Poly::new(vec![0.0, 2.0]);
        let g = Poly::constant(2.0);
        assert_eq!(wronskian(&f, &g, -3.0), 4.0);
        assert_eq!(wronskian(&f, &g, 7.5), 4.0);

        // Antisymmetry is exact as floating computation.
        let a = Poly::new(vec![1.0, -2.0, 0.5]);
        let b = Poly::new(vec![-1.0, 3.0, 2.0]);
        for x in [-2.0, 0.0, 0.3, 4.0] {
            assert_eq!(wronskian(&a, &b, x), -wronskian(&b, &a, x));
        }
        assert_eq!(wronskian(&a, &a, 1.7), 0.0);

        // f = x, g = x² at 1: 1·1 − 2·1 = −1.
        let f = Poly::new(vec![0.0, 1.0]);
        let g = Poly::new(vec![0.0, 0.0, 1.0]);
        assert_eq!(wronskian(&f, &g, 1.0), -1.0);
    }

    #[test]
    fn wronskian_poly_matches_pointwise() {
        let f = Poly::new(vec![1.0, -2.0, 0.5, 1.0]);
        let g = Poly::new(vec![-1.0, 3.0, 2.0]);
        let w = wronskian_poly(&f, &g);
        for x in [-1.5, 0.0, 0.25, 2.0] {
            assert!((w.eval(x) - wronskian(&f, &g, x)).abs() < 1e-12 * (1.0 + w.eval(x).abs()));
        }
    }

    #[test]
    fn laguerre_examples() {
        let grid = standard_grid((-1.0, 1.0));

        let p = poly(&[-1.0, 1.0]);
        let out = laguerre_check(&p, &grid).unwrap();
        assert!(out.strictly_positive);
        assert!((out.min_value - 4.0).abs() < 1e-12);

        // p = x³−x at 0: W = 0² − (−1)·6·0… p″(0) = 0, p′(0) = −1, p‴ = 6 → 6.
        let cubic = poly(&[-1.0, 0.0, 1.0]);
        let out = laguerre_check(&cubic, &[0.0]).unwrap();
        assert!((out.min_value - 6.0).abs() < 1e-12);
        assert!(out.strictly_positive);

        // Double root: hypothesis violated but the value is still reported.
        let double = poly(&[0.0, 0.0]);
        let out = laguerre_check(&double, &[0.0]).unwrap();
        assert!((out.min_value - 4.0).abs() < 1e-12);

        let line = poly(&[0.0]);
        assert!(matches!(
            laguerre_check(&line, &grid),
            Err(FfcError::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn interlacing_detection() {
        // Roots −1 < 0 < 1 interlace.
        let f = poly(&[-1.0, 1.0]);
        let g = poly(&[0.0]);
        let verdict = check_interlacing(&f, &g).unwrap();
        assert!(verdict.interlaces);
        assert_ne!(verdict.wronskian_sign, WronskianSign::Mixed);

        // 5 lies outside (−1, 1).
        let far = poly(&[5.0]);
        let verdict = check_interlacing(&f, &far).unwrap();
        assert!(!verdict.interlaces);

        // Same degree, alternating: −1 < 0 < 1 < 2.
        let alternating = poly(&[0.0, 2.0]);
        assert!(check_interlacing(&f, &alternating).unwrap().interlaces);

        // Nested roots −2 < −1 < 1 < 2 do not alternate: (a+4b)/(a+b) < 0
        // makes a·f + b·(x²−4) complex for some (a, b).
        let nested = poly(&[-2.0, 2.0]);
        assert!(!check_interlacing(&f, &nested).unwrap().interlaces);

        // Degree gap of two is rejected.
        let cubic = poly(&[-1.0, 0.0, 1.0]);
        assert!(matches!(
            check_interlacing(&cubic, &g),
            Err(FfcError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn derivative_interlaces_its_polynomial() {
        // Rolle: the roots of p′ interlace those of p.
        let p = poly(&[-3.0, -0.7, 0.4, 1.9, 4.2]);
        let dp = p.derivative(1).unwrap();
        let verdict = check_interlacing(&p, &dp.monic).unwrap();
        assert!(verdict.interlaces);
        assert_ne!(verdict.wronskian_sign, WronskianSign::Mixed);
    }

    #[test]
    fn hko_sampling() {
        let f = poly(&[-1.0, 1.0]);

        // Non-interlacing pair: some combination goes complex.
        let g = poly(&[3.0, 4.0]);
        assert!(!hko_sample_test(&f, &g, 200, 7).unwrap());

        // f with itself is trivially fine.
        assert!(hko_sample_test(&f, &f, 200, 7).unwrap());

        // Interlacing pair −1 < 0 < 1 < 2 passes.
        let alternating = poly(&[0.0, 2.0]);
        assert!(hko_sample_test(&f, &alternating, 200, 7).unwrap());

        // Nested roots fail: a − 0.5·b with g = x²−4 goes complex.
        let nested = poly(&[-2.0, 2.0]);
        assert!(!hko_sample_test(&f, &nested, 200, 7).unwrap());

        let cubic = poly(&[-1.0, 0.0, 1.0]);
        assert!(matches!(
            hko_sample_test(&f, &cubic, 10, 7),
            Err(FfcError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn polar_wronskian_small_cases() {
        // q = x²−1: ∂̇q = −2, q′ = 2x → W = 0·2x − 2·(−2) = 4.
        let q = poly(&[-1.0, 1.0]);
        let verdict = polar_wronskian_positivity(&q);
        assert!(verdict.nonnegative);
        assert!((verdict.leading_value - 4.0).abs() < 1e-12);
        assert!((verdict.leading_value - verdict.spread).abs() < 1e-12);

        // q = x³−x: W = 6x² + 2, leading 6 = spread.
        let cubic = poly(&[-1.0, 0.0, 1.0]);
        let verdict = polar_wronskian_positivity(&cubic);
        assert!(verdict.nonnegative);
        assert!((verdict.leading_value - 6.0).abs() < 1e-12);
        assert!(verdict.grid_min > 1.9);

        // Shift polynomial: identically zero.
        let shift = poly(&[2.0; 4]);
        let verdict = polar_wronskian_positivity(&shift);
        assert!(verdict.nonnegative);
        assert!(verdict.max_envelope_ratio < 1e-10);
        assert!(verdict.leading_value.abs() < 1e-9);
    }

    #[test]
    fn convolution_sign_preservation() {
        // f = ∂̇q, g = q′ for q = x³−x is a non-negative pair; convolving
        // with a simple cubic keeps the sign.
        let q = poly(&[-1.0, 0.0, 1.0]);
        let p = poly(&[-2.0, 0.5, 1.5]);
        let f = q.polar_derivative().scale(-1.0); // W[∂̇q, q′] ≥ 0 → use the ≥0 orientation
        let g = q.to_poly().derivative();
        let grid = standard_grid(root_hull(&[&q, &p]));
        // Orientation check: W[∂̇q, q′] ≥ 0 already, no flip needed.
        let polar = q.polar_derivative();
        let outcome = convolution_preserves_wronskian_sign(&polar, &g, &p, &grid);
        assert_eq!(outcome, SignPreservation::Preserved);
        // The negated first argument has W ≤ 0 and must fail the precondition.
        let outcome = convolution_preserves_wronskian_sign(&f, &g, &p, &grid);
        assert!(matches!(outcome, SignPreservation::PreconditionFailed { .. }));

        // f = g gives the identically-zero Wronskian on both sides.
        let outcome = convolution_preserves_wronskian_sign(&g, &g, &p, &grid);
        assert_eq!(outcome, SignPreservation::Preserved);

        // W[x²−1, x²−2x] is strictly negative, so the precondition fails.
        let f = poly(&[-1.0, 1.0]).to_poly();
        let g2 = poly(&[0.0, 2.0]).to_poly();
        let p2 = poly(&[-1.0, 1.0]);
        let grid = standard_grid((-2.0, 2.0));
        let outcome = convolution_preserves_wronskian_sign(&f, &g2, &p2, &grid);
        assert!(matches!(
            outcome,
            SignPreservation::PreconditionFailed { .. }
        ));
    }

    #[test]
    fn grid_shape() {
        let grid = standard_grid((-1.0, 1.0));
        assert_eq!(grid.len(), GRID_POINTS);
        assert!(grid.first().unwrap() > &-3.0 && grid.first().unwrap() < &-2.9);
        assert!(grid.last().unwrap() < &3.0 && grid.last().unwrap() > &2.9);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));

        let point = standard_grid((2.0, 2.0));
        assert!(*point.first().unwrap() > 0.99);
        assert!(*point.last().unwrap() < 3.0);
    }
}
