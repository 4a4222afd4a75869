//! The time-dilation root flow `r_t = p ⊞_d q_t`.
//!
//! Dilating `q`'s roots by `√t` interpolates from `x^d` at `t = 0` (where
//! `r_0 = p`) to `q` at `t = 1` (where `r_1 = p ⊞ q`). The roots `λ_i(t)` of
//! `r_t` obey `dλ_i/dt = −(∂_t r_t / r_t′)(λ_i)` and the squared derivative
//! values `f_i(t) = r_t′(λ_i(t))²` multiply to the squared discriminant, so
//! tracing the flow gives a pointwise view of discriminant growth.
//!
//! Integration runs in the substituted variable `u = √t`: the `1/(2√t)`
//! factor in `∂_t q_t` is singular at zero, while in `u` the roots of the
//! dilated polynomial are linear and the dynamics stay smooth. Under the
//! substitution the flow polynomial has the closed form
//! `r(u) = Σ_k p^{(k)} (−1)^k σ_k(q) u^k / k!`, so each integration stage
//! only re-weights a fixed basis of derivative polynomials.
//!
//! Stepping is fixed-step fourth-order Runge–Kutta so a trace is
//! reproducible byte for byte given its configuration. Every checkpoint is
//! cross-checked against roots found directly from the coefficients of
//! `r(u)`; the worst deviation is recorded in the trace.

use serde::Serialize;

use crate::convolution::{convolve, convolve_operator};
use crate::error::{FfcError, Result};
use crate::interlacing::{root_hull, standard_grid, wronskian_poly};
use crate::poly::Poly;
use crate::real_rooted::RealRootedPoly;
use crate::roots::find_real_roots;

/// Relative tolerance on `|r′(λ)|` below which a trajectory is considered
/// to have hit a root collision.
const DERIVATIVE_GUARD: f64 = 1e-12;

/// Root-gap guard: integration aborts when two trajectories come closer
/// than `1e−8 · (1 + max |λ|)`. Collisions cannot happen while the
/// discriminant grows, so reaching this signals numerical failure.
const GAP_GUARD: f64 = 1e-8;

/// Time series of one root flow.
#[derive(Clone, Debug, Serialize)]
pub struct FlowTrace {
    #[serde(skip)]
    p: RealRootedPoly,
    #[serde(skip)]
    q: RealRootedPoly,
    /// Checkpoint times `t = u²`, ascending from `t_min` to 1.
    pub times: Vec<f64>,
    /// Integrated roots per checkpoint, sorted ascending.
    pub roots: Vec<Vec<f64>>,
    /// `f_i(t) = r_t′(λ_i(t))²` per checkpoint.
    pub f_values: Vec<Vec<f64>>,
    /// `log Dis(r_t)` per checkpoint.
    pub log_dis: Vec<f64>,
    /// Max distance between integrated and directly-found roots.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

impl FlowTrace {
    pub fn p(&self) -> &RealRootedPoly {
        &self.p
    }

    pub fn q(&self) -> &RealRootedPoly {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn checkpoints(&self) -> usize {
        self.times.len()
    }

    /// `t,lambda_1..lambda_d,f_1..f_d,log_dis`, one row per checkpoint.
    /// Values carry 17 significant digits so the file round-trips doubles.
    pub fn to_csv(&self) -> String {
        let d = self.degree();
        let mut out = String::new();
        out.push('t');
        for i in 1..=d {
            out.push_str(&format!(",lambda_{i}"));
        }
        for i in 1..=d {
            out.push_str(&format!(",f_{i}"));
        }
        out.push_str(",log_dis\n");
        for row in 0..self.times.len() {
            out.push_str(&crate::json::fmt_f64(self.times[row]));
            for v in &self.roots[row] {
                out.push(',');
                out.push_str(&crate::json::fmt_f64(*v));
            }
            for v in &self.f_values[row] {
                out.push(',');
                out.push_str(&crate::json::fmt_f64(*v));
            }
            out.push(',');
            out.push_str(&crate::json::fmt_f64(self.log_dis[row]));
            out.push('\n');
        }
        out
    }

    /// Whether `log Dis` never drops by more than `slack` between
    /// consecutive checkpoints.
    pub fn log_dis_nondecreasing(&self, slack: f64) -> bool {
        self.log_dis.windows(2).all(|w| w[1] >= w[0] - slack)
    }

    /// Total `log Dis` increase over the trace.
    pub fn total_log_dis_increase(&self) -> f64 {
        self.log_dis.last().unwrap() - self.log_dis.first().unwrap()
    }
}

/// `r_t = p ⊞_d (q dilated by t)`.
pub fn flow_polynomial(p: &RealRootedPoly, q: &RealRootedPoly, t: f64) -> Result<RealRootedPoly> {
    convolve(p, &q.time_dilate(t)?)
}

/// `(∂_t q_t) ⊞_d p` at time `t > 0`, through the operator form with
/// `∂_t q_t = (1/2t) (d·q_t − x·q_t′)`.
pub fn time_derivative_poly(p: &RealRootedPoly, q: &RealRootedPoly, t: f64) -> Result<Poly> {
    if t.is_nan() || t <= 0.0 {
        return Err(FfcError::InvalidParameter { name: "t", value: t });
    }
    let q_t = q.time_dilate(t)?;
    let dt_q = q_t.polar_derivative().scale(1.0 / (2.0 * t));
    Ok(convolve_operator(&dt_q, &p.symmetric_profile()))
}

/// One root's instantaneous velocity `−(∂_t r_t)(λ) / r_t′(λ)`, where
/// `dq_dt_conv` is the precomputed `(∂_t q_t) ⊞ p`. Errors when `r_t′(λ)`
/// is numerically zero (the root is colliding).
pub fn root_velocity(r_t: &RealRootedPoly, dq_dt_conv: &Poly, lambda: f64) -> Result<f64> {
    let deriv = r_t.to_poly().derivative();
    let denom = deriv.eval(lambda);
    let env = deriv.envelope(lambda) + f64::MIN_POSITIVE;
    if denom.abs() <= DERIVATIVE_GUARD * env {
        return Err(FfcError::NearCollision {
            lambda,
            derivative_magnitude: denom.abs(),
        });
    }
    Ok(-dq_dt_conv.eval(lambda) / denom)
}

/// The fixed derivative basis of the flow: `r(u) = Σ_k B_k u^k` with
/// `B_k = p^{(k)} (−1)^k σ_k(q) / k!`.
struct FlowBasis {
    terms: Vec<Poly>,
}

impl FlowBasis {
    fn new(p: &RealRootedPoly, q: &RealRootedPoly) -> Self {
        let profile = q.symmetric_profile();
        let d = p.degree();
        let mut terms = Vec::with_capacity(d + 1);
        let mut fk = p.to_poly();
        let mut kfact = 1.0f64;
        for k in 0..=d {
            if k > 0 {
                kfact *= k as f64;
            }
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            terms.push(fk.scale(sign * profile.sigma_k(k) / kfact));
            fk = fk.derivative();
        }
        FlowBasis { terms }
    }

    /// `r(u)` as a monic polynomial.
    fn poly_at(&self, u: f64) -> Poly {
        let mut acc = Poly::zero();
        let mut uk = 1.0f64;
        for term in &self.terms {
            if uk != 0.0 {
                acc = acc.add(&term.scale(uk));
            }
            uk *= u;
        }
        acc
    }

    /// `∂_u r(u)`.
    fn du_poly_at(&self, u: f64) -> Poly {
        let mut acc = Poly::zero();
        let mut uk = 1.0f64;
        for (k, term) in self.terms.iter().enumerate().skip(1) {
            acc = acc.add(&term.scale(k as f64 * uk));
            uk *= u;
        }
        acc
    }
}

fn velocities(basis: &FlowBasis, u: f64, lambda: &[f64]) -> Result<Vec<f64>> {
    let r = basis.poly_at(u);
    let deriv = r.derivative();
    let du = basis.du_poly_at(u);
    lambda
        .iter()
        .map(|&l| {
            let denom = deriv.eval(l);
            let env = deriv.envelope(l) + f64::MIN_POSITIVE;
            if denom.abs() <= DERIVATIVE_GUARD * env {
                Err(FfcError::NearCollision {
                    lambda: l,
                    derivative_magnitude: denom.abs(),
                })
            } else {
                Ok(-du.eval(l) / denom)
            }
        })
        .collect()
}

/// Integrates the root trajectories from `t_min` to 1 with `steps` RK4
/// steps in `u = √t`, recording a checkpoint after every step. `p` must be
/// simple-rooted (the flow keeps it that way); `q` may be degenerate, in
/// which case the flow is a rigid translation.
pub fn integrate_flow(
    p: &RealRootedPoly,
    q: &RealRootedPoly,
    t_min: f64,
    steps: usize,
) -> Result<FlowTrace> {
    let t_min_ok = t_min > 0.0 && t_min < 1.0;
    if !t_min_ok {
        return Err(FfcError::InvalidParameter {
            name: "t_min",
            value: t_min,
        });
    }
    if steps == 0 {
        return Err(FfcError::InvalidParameter {
            name: "steps",
            value: 0.0,
        });
    }
    if p.degree() != q.degree() {
        return Err(FfcError::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    if !p.has_simple_roots() {
        return Err(FfcError::MultipleRoots {
            min_gap: p.min_gap(),
        });
    }

    let d = p.degree();
    let basis = FlowBasis::new(p, q);
    let u0 = t_min.sqrt();
    let u_at = |j: usize| u0 + (1.0 - u0) * (j as f64 / steps as f64);

    let mut trace = FlowTrace {
        p: p.clone(),
        q: q.clone(),
        times: Vec::with_capacity(steps + 1),
        roots: Vec::with_capacity(steps + 1),
        f_values: Vec::with_capacity(steps + 1),
        log_dis: Vec::with_capacity(steps + 1),
        deviations: Vec::with_capacity(steps + 1),
        max_deviation: 0.0,
    };

    let mut lambda = direct_roots(&basis, u0, d)?;
    record(&mut trace, &basis, u0, &lambda, d)?;

    for j in 1..=steps {
        let u_prev = u_at(j - 1);
        let u_next = u_at(j);
        let h = u_next - u_prev;

        let k1 = velocities(&basis, u_prev, &lambda)?;
        let mid1 = stepped(&lambda, &k1, h / 2.0);
        let k2 = velocities(&basis, u_prev + h / 2.0, &mid1)?;
        let mid2 = stepped(&lambda, &k2, h / 2.0);
        let k3 = velocities(&basis, u_prev + h / 2.0, &mid2)?;
        let end = stepped(&lambda, &k3, h);
        let k4 = velocities(&basis, u_next, &end)?;

        for i in 0..d {
            lambda[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        lambda.sort_by(f64::total_cmp);
        record(&mut trace, &basis, u_next, &lambda, d)?;
    }

    Ok(trace)
}

fn stepped(lambda: &[f64], velocity: &[f64], h: f64) -> Vec<f64> {
    lambda
        .iter()
        .zip(velocity)
        .map(|(l, v)| l + h * v)
        .collect()
}

fn direct_roots(basis: &FlowBasis, u: f64, d: usize) -> Result<Vec<f64>> {
    let poly = basis.poly_at(u);
    let coeffs: Vec<f64> = (0..d).map(|k| poly.coeff(k)).collect();
    find_real_roots(&coeffs)
}

fn record(
    trace: &mut FlowTrace,
    basis: &FlowBasis,
    u: f64,
    lambda: &[f64],
    d: usize,
) -> Result<()> {
    let scale = 1.0 + lambda.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    if d > 1 {
        let min_gap = lambda
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if min_gap < GAP_GUARD * scale {
            return Err(FfcError::NearCollision {
                lambda: lambda[0],
                derivative_magnitude: min_gap,
            });
        }
    }

    let direct = direct_roots(basis, u, d)?;
    let deviation = lambda
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let deriv = basis.poly_at(u).derivative();
    let f_row: Vec<f64> = lambda.iter().map(|&l| deriv.eval(l).powi(2)).collect();

    let mut log_dis = 0.0f64;
    for i in 0..d {
        for j in (i + 1)..d {
            log_dis += (lambda[j] - lambda[i]).abs().ln();
        }
    }
    log_dis *= 2.0;

    trace.times.push(u * u);
    trace.roots.push(lambda.to_vec());
    trace.f_values.push(f_row);
    trace.log_dis.push(log_dis);
    trace.deviations.push(deviation);
    trace.max_deviation = trace.max_deviation.max(deviation);
    Ok(())
}

/// Outcome of the `f_i` monotonicity check on a trace.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    /// Every `f_i` series is nondecreasing up to `1e−9` relative slack.
    pub monotone: bool,
    /// Most negative relative step seen across all series.
    pub min_relative_step: f64,
    /// Checkpoints where the Wronskian form of `df_i/dt` was compared
    /// against a finite difference of the recorded series.
    pub spot_checks: usize,
    /// Worst relative mismatch between the two.
    pub max_fd_mismatch: f64,
    /// Smallest Wronskian value of `df_i/dt` seen at the spot checks,
    /// normalized by the local `f` scale.
    pub min_wronskian: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.max_fd_mismatch <= 1e-4 && self.min_wronskian >= -1e-9
    }
}

/// Checks that each `f_i(t)` series in the trace is nondecreasing (up to
/// `1e−9` relative slack) and spot-checks `df_i/dt` at 10 interior
/// checkpoints: the derivative equals `2 W[∂_t q_t ⊞ p, q_t′ ⊞ p](λ_i(t))`,
/// which is compared against a central finite difference of the series at
/// `1e−4` relative tolerance.
pub fn f_monotonicity_check(trace: &FlowTrace) -> Result<MonotonicityReport> {
    use rand::{Rng, SeedableRng};

    let d = trace.degree();
    let n = trace.times.len();
    let f_scale = trace
        .f_values
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    let mut monotone = true;
    let mut min_step = f64::INFINITY;
    for i in 0..d {
        for j in 1..n {
            let prev = trace.f_values[j - 1][i];
            let next = trace.f_values[j][i];
            let rel = (next - prev) / f_scale;
            min_step = min_step.min(rel);
            if rel < -1e-9 {
                monotone = false;
            }
        }
    }

    // Deterministic spot checks; the trace fixes everything else. The first
    // few percent of checkpoints are excluded: f is even in u = √t, so
    // f_u′ vanishes toward u = 0 and the finite difference loses relative
    // accuracy inside that boundary layer.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x666c6f77);
    let j_lo = (n / 20).max(1);
    let spots = if j_lo + 1 < n - 1 {
        10.min(n - 1 - j_lo)
    } else {
        0
    };
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(spots * d);
    let mut min_wronskian = f64::INFINITY;
    for _ in 0..spots {
        let j = rng.random_range(j_lo..n - 1);
        let t = trace.times[j];
        let profile = trace.p.symmetric_profile();
        let q_t = trace.q.time_dilate(t)?;
        let dt_q = q_t.polar_derivative().scale(1.0 / (2.0 * t));
        let a = convolve_operator(&dt_q, &profile);
        let b = convolve_operator(&q_t.to_poly().derivative(), &profile);
        let w = wronskian_poly(&a, &b);
        // Difference in u = √t, where the series is smooth, then convert:
        // df/dt = (df/du) / (2u). The three-point nonuniform formula is
        // exact for quadratics in u.
        let u = t.sqrt();
        let h_plus = trace.times[j + 1].sqrt() - u;
        let h_minus = u - trace.times[j - 1].sqrt();
        for i in 0..d {
            let value = 2.0 * w.eval(trace.roots[j][i]);
            min_wronskian = min_wronskian.min(value / f_scale);
            let (f_prev, f_here, f_next) = (
                trace.f_values[j - 1][i],
                trace.f_values[j][i],
                trace.f_values[j + 1][i],
            );
            let df_du = (h_minus * h_minus * f_next
                + (h_plus * h_plus - h_minus * h_minus) * f_here
                - h_plus * h_plus * f_prev)
                / (h_plus * h_minus * (h_plus + h_minus));
            pairs.push((value, df_du / (2.0 * u)));
        }
    }
    // Uniform relative comparison across all sampled points: a wrong
    // Wronskian expression shows up at the active checkpoints, while
    // stationary roots (where both sides sit at the noise floor) cannot
    // dominate the ratio.
    let deriv_scale = pairs
        .iter()
        .map(|(w, fd)| w.abs().max(fd.abs()))
        .fold(1e-6 * f_scale, f64::max);
    let max_mismatch = pairs
        .iter()
        .map(|(w, fd)| (w - fd).abs() / deriv_scale)
        .fold(0.0f64, f64::max);
    if spots == 0 {
        min_wronskian = 0.0;
    }

    Ok(MonotonicityReport {
        monotone,
        min_relative_step: if min_step.is_finite() { min_step } else { 0.0 },
        spot_checks: spots,
        max_fd_mismatch: max_mismatch,
        min_wronskian,
    })
}

/// Grid comparison of the flow Wronskian against its zero-time limit.
#[derive(Clone, Debug, Serialize)]
pub struct SmallTLimit {
    pub grid: Vec<f64>,
    /// `2 W[∂_t q_t ⊞ p, q_t′ ⊞ p](x)` at `t = t_probe`.
    pub lhs: Vec<f64>,
    /// `(σ_1(q)² − σ_2(q)) · W[p′, p″](x)` with the sums of the undilated `q`.
    pub rhs: Vec<f64>,
    /// `max |lhs − rhs| / max |rhs|` over the grid (0 when both vanish).
    pub max_rel_dev: f64,
}

/// Evaluates both sides of the `t → 0` asymptotic on the standard grid.
/// The time-derivative side is `2W`, matching `df_i/dt`; for the
/// first-order dilation `q = x^d − dα x^{d−1}` the two sides agree exactly
/// at any `t`, and for shift-class `q` both vanish identically.
pub fn small_t_wronskian_limit(
    p: &RealRootedPoly,
    q: &RealRootedPoly,
    t_probe: f64,
) -> Result<SmallTLimit> {
    if t_probe.is_nan() || t_probe <= 0.0 {
        return Err(FfcError::InvalidParameter {
            name: "t_probe",
            value: t_probe,
        });
    }
    let grid = standard_grid(root_hull(&[p, q]));
    let profile = p.symmetric_profile();

    let q_t = q.time_dilate(t_probe)?;
    let dt_q = q_t.polar_derivative().scale(1.0 / (2.0 * t_probe));
    let a = convolve_operator(&dt_q, &profile);
    let b = convolve_operator(&q_t.to_poly().derivative(), &profile);
    let w_flow = wronskian_poly(&a, &b);

    let p_poly = p.to_poly();
    let w_laguerre = wronskian_poly(&p_poly.derivative(), &p_poly.derivative().derivative());
    let sigma = q.symmetric_profile();
    let factor = sigma.sigma_k(1).powi(2) - sigma.sigma_k(2);

    let lhs: Vec<f64> = grid.iter().map(|&x| 2.0 * w_flow.eval(x)).collect();
    let rhs: Vec<f64> = grid.iter().map(|&x| factor * w_laguerre.eval(x)).collect();

    let rhs_max = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lhs_max = lhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Both sides vanish identically for shift-class q; classify "zero up to
    // rounding" through the evaluation envelopes rather than exact equality.
    let da = a.derivative();
    let db = b.derivative();
    let env_max = grid
        .iter()
        .map(|&x| da.envelope(x) * b.envelope(x) + db.envelope(x) * a.envelope(x))
        .fold(f64::MIN_POSITIVE, f64::max);
    let sigma_scale = sigma.sigma_k(1).powi(2) + sigma.sigma_k(2).abs();
    let factor_is_zero = factor.abs() <= 1e-12 * (sigma_scale + f64::MIN_POSITIVE);
    let lhs_is_zero = lhs_max <= 1e-10 * 2.0 * env_max;
    let max_rel_dev = if factor_is_zero && lhs_is_zero {
        0.0
    } else {
        let denom = rhs_max.max(f64::MIN_POSITIVE);
        lhs.iter()
            .zip(&rhs)
            .map(|(l, r)| (l - r).abs() / denom)
            .fold(0.0f64, f64::max)
    };

    Ok(SmallTLimit {
        grid,
        lhs,
        rhs,
        max_rel_dev,
    })
}
