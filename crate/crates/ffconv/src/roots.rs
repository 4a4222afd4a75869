//! Real root extraction via companion-matrix eigenvalues.
//!
//! The polynomial is put into a balanced companion (upper-Hessenberg) form
//! and its eigenvalues are computed; imaginary parts below the realness
//! tolerance are discarded, anything larger is reported as a
//! [`FfcError::NotRealRooted`] failure. Roots are then polished with a few
//! guarded Newton steps — tight pairs through a local quadratic model around
//! their critical point — and returned sorted ascending. No initial brackets
//! are needed, and the approach is robust through degree ~30, which is the
//! working range of this crate.

use nalgebra::DMatrix;

use crate::error::{FfcError, Result};
use crate::poly::Poly;

/// Relative tolerance on the imaginary part of an eigenvalue before the
/// polynomial is declared not real-rooted.
pub const REALNESS_TOL: f64 = 1e-8;

/// Finds all roots of the monic polynomial `x^d + c_{d-1} x^{d-1} + … + c_0`
/// given `coeffs = [c_0, …, c_{d-1}]`, sorted ascending.
pub fn find_real_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    if coeffs.is_empty() {
        return Err(FfcError::DegreeTooSmall { degree: 0, min: 1 });
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(FfcError::NonFiniteInput);
    }
    // Deflate exact roots at zero first. Low-order coefficients that are
    // exactly zero are common structure (x^d, x^d − dα x^{d−1}) and the
    // multiplicity survives only if it never reaches the eigensolver.
    let zeros = coeffs.iter().take_while(|c| **c == 0.0).count();
    if zeros == coeffs.len() {
        return Ok(vec![0.0; zeros]);
    }
    if zeros > 0 {
        let mut roots = find_real_roots(&coeffs[zeros..])?;
        roots.extend(std::iter::repeat_n(0.0, zeros));
        roots.sort_by(f64::total_cmp);
        return Ok(roots);
    }
    match coeffs.len() {
        1 => Ok(vec![-coeffs[0]]),
        2 => quadratic_roots(coeffs[1], coeffs[0]),
        _ => {
            let mut m = companion(coeffs);
            balance(&mut m);
            let eigen = m.complex_eigenvalues();
            let scale = 1.0 + eigen.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));

            // Real eigenvalues come from 1×1 Schur blocks with exact zero
            // imaginary part; complex ones arrive in conjugate pairs. A
            // complex pair is often a tight real pair the QR iteration could
            // not separate, so each pair gets a chance to resolve through
            // the local quadratic model before the polynomial is rejected.
            let mut roots: Vec<f64> = Vec::with_capacity(coeffs.len());
            for z in eigen.iter() {
                if z.im == 0.0 {
                    roots.push(polish(coeffs, z.re));
                } else if z.im > 0.0 {
                    // Spurious imaginary parts on true real pairs are small;
                    // a pair far from the axis is genuinely complex and gets
                    // no resolution attempt.
                    let attempt = if z.im <= 1e-3 * scale {
                        resolve_pair(coeffs, z.re)
                    } else {
                        None
                    };
                    match attempt {
                        Some((a, b)) => {
                            roots.push(a);
                            roots.push(b);
                        }
                        None => {
                            if z.im.abs() > REALNESS_TOL * scale {
                                return Err(FfcError::NotRealRooted { max_imag: z.im.abs() });
                            }
                            // Within tolerance: a double root at the shared
                            // real part.
                            roots.push(z.re);
                            roots.push(z.re);
                        }
                    }
                }
            }
            // Conjugate pairing must account for every eigenvalue.
            if roots.len() != coeffs.len() {
                let max_imag = eigen.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
                return Err(FfcError::NotRealRooted { max_imag });
            }
            roots.sort_by(f64::total_cmp);
            refine_tight_pairs(coeffs, &mut roots);
            Ok(roots)
        }
    }
}

/// Gap threshold (relative to the local scale) below which an adjacent root
/// pair is re-resolved through the quadratic model. Individual Newton steps
/// lose their footing once the eigenvalue error approaches half the gap.
const PAIR_REFINE_REL: f64 = 1e-2;

/// Re-resolves isolated tight pairs among the sorted roots. The quadratic
/// model around the critical point reaches the accuracy the coefficient
/// representation supports, where polishing each root separately stalls.
fn refine_tight_pairs(coeffs: &[f64], roots: &mut [f64]) {
    let d = roots.len();
    let mut i = 0;
    while i + 1 < d {
        let gap = roots[i + 1] - roots[i];
        let mid = 0.5 * (roots[i] + roots[i + 1]);
        let local = PAIR_REFINE_REL * (1.0 + mid.abs());
        let isolated = (i == 0 || roots[i] - roots[i - 1] > 5.0 * gap)
            && (i + 2 >= d || roots[i + 2] - roots[i + 1] > 5.0 * gap);
        if gap < local && isolated {
            if let Some((a, b)) = resolve_pair(coeffs, mid) {
                // Accept only a genuine pair that stayed inside its bracket.
                let stayed = a >= roots[i] - gap && b <= roots[i + 1] + gap;
                if a < b - f64::EPSILON && stayed {
                    roots[i] = a;
                    roots[i + 1] = b;
                    i += 2;
                    continue;
                }
            }
        }
        i += 1;
    }
}

/// Resolves a near-double root pair around `m0` by locating the critical
/// point `m` between the two roots (Newton on p′) and modelling
/// `p(x) ≈ p(m) + ½ p″(m) (x − m)²`, so the roots are
/// `m ± √(−2 p(m) / p″(m))`. Returns `None` when the local minimum is
/// genuinely on the wrong side of zero, i.e. the pair is complex.
fn resolve_pair(coeffs: &[f64], m0: f64) -> Option<(f64, f64)> {
    let d = coeffs.len();
    let mut m = m0;
    for _ in 0..4 {
        let (_, dp, ddp, _) = horner_with_two_derivatives(coeffs, m);
        if ddp == 0.0 {
            return None;
        }
        let step = dp / ddp;
        if !step.is_finite() {
            return None;
        }
        m -= step;
    }
    let (p, _, ddp, env) = horner_with_two_derivatives(coeffs, m);
    if ddp == 0.0 {
        return None;
    }
    let disc = -2.0 * p / ddp;
    // Evaluation noise floor of the discriminant.
    let floor = 8.0 * f64::EPSILON * (d as f64) * env / ddp.abs();
    if disc < -floor {
        return None;
    }
    let h = disc.max(0.0).sqrt();
    // The symmetric model carries an O(h²) bias from the cubic term; both
    // points land inside their roots' Newton basins, so polishing finishes
    // the job.
    Some((polish(coeffs, m - h), polish(coeffs, m + h)))
}

/// `(p(x), p′(x), p″(x), envelope(x))` for the monic polynomial with
/// low-order coefficients `coeffs`.
fn horner_with_two_derivatives(coeffs: &[f64], x: f64) -> (f64, f64, f64, f64) {
    let d = coeffs.len();
    let (mut p, mut dp, mut ddp) = (1.0f64, 0.0f64, 0.0f64);
    let mut env = 1.0f64;
    let ax = x.abs();
    for k in (0..d).rev() {
        ddp = ddp * x + 2.0 * dp;
        dp = dp * x + p;
        p = p * x + coeffs[k];
        env = env * ax + coeffs[k].abs();
    }
    (p, dp, ddp, env)
}

/// Root finding for a raw, possibly non-monic polynomial. Leading
/// coefficients that are only rounding residue (relative to the largest
/// coefficient) are trimmed first, then the polynomial is normalized to
/// monic form. Degree zero yields no roots.
pub fn find_real_roots_raw(p: &Poly) -> Result<Vec<f64>> {
    let trimmed = p.trim_relative(1e-13);
    let Some(degree) = trimmed.degree() else {
        // The zero polynomial has no well-defined root set.
        return Err(FfcError::DegreeTooSmall { degree: 0, min: 1 });
    };
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = trimmed.leading();
    let monic: Vec<f64> = trimmed.coeffs()[..degree].iter().map(|c| c / lead).collect();
    find_real_roots(&monic)
}

/// Stable quadratic formula for `x^2 + b x + c`.
fn quadratic_roots(b: f64, c: f64) -> Result<Vec<f64>> {
    let disc = b * b - 4.0 * c;
    let scale = b * b + 4.0 * c.abs() + 1.0;
    if disc < 0.0 {
        if disc.abs() <= REALNESS_TOL * REALNESS_TOL * scale {
            // Double root up to rounding.
            let r = -b / 2.0;
            return Ok(vec![r, r]);
        }
        return Err(FfcError::NotRealRooted {
            max_imag: (-disc).sqrt() / 2.0,
        });
    }
    let sq = disc.sqrt();
    if b == 0.0 && c == 0.0 {
        return Ok(vec![0.0, 0.0]);
    }
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if q == 0.0 { (0.0, -b) } else { (q, c / q) };
    let mut roots = vec![r1, r2];
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Column companion matrix of the monic polynomial with low-order
/// coefficients `coeffs`.
fn companion(coeffs: &[f64]) -> DMatrix<f64> {
    let d = coeffs.len();
    let mut m = DMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -coeffs[i];
    }
    m
}

/// Parlett–Reinsch balancing: a diagonal similarity with powers of two that
/// equalizes row and column norms. Eigenvalues are unchanged, accuracy of
/// the QR iteration improves markedly for companion matrices whose
/// coefficients span many orders of magnitude.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix: f64 = 2.0;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut cc = c;
            let s = c + r;
            while cc < r / radix {
                f *= radix;
                cc *= radix * radix;
            }
            while cc > r * radix {
                f /= radix;
                cc /= radix * radix;
            }
            if (c * f + r / f) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// A few guarded Newton steps on the monic coefficient form. Skipped when
/// the derivative is too small relative to its natural magnitude (clustered
/// roots), where a Newton step could do more harm than good.
fn polish(coeffs: &[f64], mut x: f64) -> f64 {
    let d = coeffs.len();
    for _ in 0..3 {
        let (mut p, mut dp) = (1.0f64, 0.0f64);
        let mut env = 1.0f64;
        let ax = x.abs();
        for k in (0..d).rev() {
            dp = dp * x + p;
            p = p * x + coeffs[k];
            env = env * ax + coeffs[k].abs();
        }
        if dp.abs() < 1e-10 * (env + 1.0) {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!(
                (a - e).abs() <= tol * (1.0 + e.abs()),
                "root {a} vs expected {e}"
            );
        }
    }

    #[test]
    fn quadratic_with_shifted_roots() {
        // x^2 - 2x - 1 has roots 1 ± √2.
        let roots = find_real_roots(&[-1.0, -2.0]).unwrap();
        assert_close(
            &roots,
            &[1.0 - std::f64::consts::SQRT_2, 1.0 + std::f64::consts::SQRT_2],
            1e-14,
        );
    }

    #[test]
    fn cubic_factorization() {
        // x^3 - x = x(x-1)(x+1).
        let roots = find_real_roots(&[0.0, -1.0, 0.0]).unwrap();
        assert_close(&roots, &[-1.0, 0.0, 1.0], 1e-12);
    }

    #[test]
    fn complex_pair_is_rejected() {
        // x^2 + 1.
        match find_real_roots(&[1.0, 0.0]) {
            Err(FfcError::NotRealRooted { max_imag }) => {
                assert!((max_imag - 1.0).abs() < 1e-9);
            }
            other => panic!("expected NotRealRooted, got {other:?}"),
        }
    }

    #[test]
    fn complex_quartic_is_rejected() {
        // (x^2 + 1)(x^2 + 4) = x^4 + 5x^2 + 4.
        assert!(matches!(
            find_real_roots(&[4.0, 0.0, 5.0, 0.0]),
            Err(FfcError::NotRealRooted { .. })
        ));
    }

    #[test]
    fn raw_roots_normalize_leading_coefficient() {
        // 3x^2 - 3 ~ x^2 - 1.
        let p = Poly::new(vec![-3.0, 0.0, 3.0]);
        let roots = find_real_roots_raw(&p).unwrap();
        assert_close(&roots, &[-1.0, 1.0], 1e-14);
    }

    #[test]
    fn raw_roots_of_constant_are_empty() {
        let p = Poly::constant(2.0);
        assert!(find_real_roots_raw(&p).unwrap().is_empty());
    }

    #[test]
    fn wilkinson_style_spread_degree_twelve() {
        // Roots 1..12 — coefficients span nine orders of magnitude.
        let roots_true: Vec<f64> = (1..=12).map(|k| k as f64).collect();
        let mut coeffs = vec![1.0f64];
        for r in &roots_true {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        // coeffs holds c_0..c_12 with c_12 = 1; drop the leading one.
        coeffs.pop();
        let roots = find_real_roots(&coeffs).unwrap();
        assert_close(&roots, &roots_true, 1e-8);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        assert!(matches!(
            find_real_roots(&[f64::NAN, 1.0]),
            Err(FfcError::NonFiniteInput)
        ));
    }
}
