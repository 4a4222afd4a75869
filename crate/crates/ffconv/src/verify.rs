//! Batch verification suites for the discriminant-growth properties.
//!
//! Each suite runs seeded independent trials (on the worker pool when the
//! `parallel` feature is enabled) and reports violation counts, the worst
//! slack seen, and serialized inputs for any offending trial so it can be
//! replayed. A suite passes iff it has zero violations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::convolution::{apply_diff_operator, convolve, DiffOperatorSpec};
use crate::exec;
use crate::flow::{f_monotonicity_check, integrate_flow, small_t_wronskian_limit};
use crate::interlacing::{
    check_interlacing, hko_sample_test, laguerre_check, polar_wronskian_positivity,
    standard_grid, WronskianSign,
};
use crate::real_rooted::RealRootedPoly;
use crate::spectral::log_discriminant;

/// The four property suites exposed by the verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremSuite {
    /// `log Dis(p − αp′) > log Dis(p)` for α ≠ 0.
    Base,
    /// `log Dis(p ⊞ q) > max(log Dis p, log Dis q)` for non-shift `q`,
    /// with the shift-class control staying flat.
    General,
    /// Trace monotonicity, endpoint consistency, integration accuracy and
    /// the small-time Wronskian limit.
    Flow,
    /// Laguerre positivity, polar-derivative Wronskian positivity with its
    /// leading-coefficient identity, and interlacing/HKO consistency.
    Interlacing,
}

impl TheoremSuite {
    pub fn name(self) -> &'static str {
        match self {
            TheoremSuite::Base => "base",
            TheoremSuite::General => "general",
            TheoremSuite::Flow => "flow",
            TheoremSuite::Interlacing => "interlacing",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "base" => Some(TheoremSuite::Base),
            "general" => Some(TheoremSuite::General),
            "flow" => Some(TheoremSuite::Flow),
            "interlacing" => Some(TheoremSuite::Interlacing),
            _ => None,
        }
    }
}

/// A violated check with enough context to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct FailureCase {
    pub trial: u64,
    pub description: String,
    pub inputs: serde_json::Value,
}

/// Aggregate outcome of one suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub seed: u64,
    pub violations: u64,
    /// Smallest margin seen across all trials; its meaning is suite-specific
    /// but the sign convention is uniform: negative means a check failed.
    pub worst_slack: f64,
    /// Up to [`MAX_STORED_FAILURES`] offending cases.
    pub failures: Vec<FailureCase>,
}

pub const MAX_STORED_FAILURES: usize = 20;

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct TrialResult {
    worst_slack: f64,
    failures: Vec<FailureCase>,
}

impl TrialResult {
    fn clean(worst_slack: f64) -> Self {
        TrialResult {
            worst_slack,
            failures: Vec::new(),
        }
    }
}

pub fn run_suite(suite: TheoremSuite, trials: u64, seed: u64) -> SuiteReport {
    match suite {
        TheoremSuite::Base => base_suite(trials, seed),
        TheoremSuite::General => general_suite(trials, seed),
        TheoremSuite::Flow => flow_suite(trials, seed),
        TheoremSuite::Interlacing => interlacing_suite(trials, seed),
    }
}

/// Slack margin required of the base inequality, in log space.
pub const BASE_LOG_SLACK: f64 = 1e-12;

/// Degree-growth suite for `Dis(p − αp′) > Dis(p)`: degrees 2..=10, roots
/// uniform in [−5, 5] with min gap 1e−2, α in [−2, 2] bounded away from 0.
pub fn base_suite(trials: u64, seed: u64) -> SuiteReport {
    let results = exec::map_indexed(trials as usize, |i| {
        let trial = i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(exec::derive_seed(seed, trial));
        let d = rng.random_range(2..=10);
        let roots = sample_roots_min_gap(&mut rng, d, -5.0, 5.0, 1e-2);
        let alpha = loop {
            let a: f64 = rng.random_range(-2.0..=2.0);
            if a.abs() >= 1e-3 {
                break a;
            }
        };
        let p = RealRootedPoly::from_roots(&roots).unwrap();
        let spec = DiffOperatorSpec::new(vec![alpha]).unwrap();
        let inputs = json!({ "p_roots": roots, "alpha": alpha });
        match apply_diff_operator(&p, &spec) {
            Ok(r) => {
                let slack = log_discriminant(&r) - log_discriminant(&p);
                let mut result = TrialResult::clean(slack);
                if slack.is_nan() || slack <= BASE_LOG_SLACK {
                    result.failures.push(FailureCase {
                        trial,
                        description: format!("log Dis slack {slack:.3e} not above {BASE_LOG_SLACK:.0e}"),
                        inputs,
                    });
                }
                result
            }
            Err(err) => TrialResult {
                worst_slack: f64::NEG_INFINITY,
                failures: vec![FailureCase {
                    trial,
                    description: format!("operator application failed: {err}"),
                    inputs,
                }],
            },
        }
    });
    merge(TheoremSuite::Base, trials, seed, results)
}

/// Tolerance on the shift-class control `|log Dis(p ⊞ (x−c)^d) − log Dis(p)|`.
pub const SHIFT_CONTROL_TOL: f64 = 1e-9;

/// Convolution-growth suite: `log Dis(p ⊞ q)` must exceed both inputs'
/// log-discriminants, and convolving with `(x−c)^d` must leave it unchanged.
pub fn general_suite(trials: u64, seed: u64) -> SuiteReport {
    let results = exec::map_indexed(trials as usize, |i| {
        let trial = i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(exec::derive_seed(seed, trial));

        // The strict-growth check takes adversarial draws (tight clusters
        // included): the inequality has room, so conditioning is harmless.
        let d = rng.random_range(2..=8);
        let p_roots = sample_roots_min_gap(&mut rng, d, -3.0, 3.0, 1e-2);
        let q_roots = sample_roots_min_gap(&mut rng, d, -3.0, 3.0, 1e-2);
        let p = RealRootedPoly::from_roots(&p_roots).unwrap();
        let q = RealRootedPoly::from_roots(&q_roots).unwrap();
        let inputs = json!({ "p_roots": p_roots, "q_roots": q_roots });

        let mut result = TrialResult::clean(f64::INFINITY);
        match convolve(&p, &q) {
            Ok(r) => {
                let slack = log_discriminant(&r)
                    - log_discriminant(&p).max(log_discriminant(&q));
                result.worst_slack = slack;
                if slack.is_nan() || slack <= 0.0 {
                    result.failures.push(FailureCase {
                        trial,
                        description: format!("convolution slack {slack:.3e} not positive"),
                        inputs: inputs.clone(),
                    });
                }
            }
            Err(err) => {
                result.worst_slack = f64::NEG_INFINITY;
                result.failures.push(FailureCase {
                    trial,
                    description: format!("convolution failed: {err}"),
                    inputs: inputs.clone(),
                });
            }
        }

        // The shift control is a 1e−9 equality test, so its inputs must stay
        // where the coefficient-to-root conditioning of the convolution
        // output supports that accuracy: moderate degree, gaps ≥ 0.3
        // (worst observed drift over 20k draws is then ~8e−11).
        let dc = rng.random_range(2..=6);
        let pc_roots = sample_roots_min_gap(&mut rng, dc, -3.0, 3.0, 0.3);
        let c = rng.random_range(-2.0..=2.0);
        let pc = RealRootedPoly::from_roots(&pc_roots).unwrap();
        let control_inputs = json!({ "p_roots": pc_roots, "c": c });
        let shift = RealRootedPoly::from_roots(&vec![c; dc]).unwrap();
        match convolve(&pc, &shift) {
            Ok(r) => {
                let drift = (log_discriminant(&r) - log_discriminant(&pc)).abs();
                if drift > SHIFT_CONTROL_TOL {
                    result.failures.push(FailureCase {
                        trial,
                        description: format!(
                            "shift control drifted by {drift:.3e} (> {SHIFT_CONTROL_TOL:.0e})"
                        ),
                        inputs: control_inputs,
                    });
                }
            }
            Err(err) => result.failures.push(FailureCase {
                trial,
                description: format!("shift-class convolution failed: {err}"),
                inputs: control_inputs,
            }),
        }
        result
    });
    merge(TheoremSuite::General, trials, seed, results)
}

/// Number of RK4 steps per trace in the flow suite; at this resolution the
/// integrated roots must track directly-found roots to 1e−6.
pub const FLOW_STEPS: usize = 1000;
pub const FLOW_T_MIN: f64 = 1e-4;
pub const FLOW_DEVIATION_TOL: f64 = 1e-6;
/// Absolute slack allowed between consecutive `log Dis` checkpoints.
pub const FLOW_LOG_DIS_SLACK: f64 = 1e-9;
/// Probe time and tolerance for the small-time Wronskian limit.
pub const SMALL_T_PROBE: f64 = 1e-8;
pub const SMALL_T_TOL: f64 = 1e-3;

/// Flow suite: integrates one trace per trial and checks discriminant
/// monotonicity, endpoint consistency against the direct convolution,
/// integration accuracy, `f_i` monotonicity, and the small-time limit.
pub fn flow_suite(trials: u64, seed: u64) -> SuiteReport {
    let results = exec::map_indexed(trials as usize, |i| {
        let trial = i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(exec::derive_seed(seed, trial));
        let d = rng.random_range(3..=8);
        let p_roots = sample_roots_min_gap(&mut rng, d, -2.0, 2.0, 5e-2);
        let q_roots = sample_roots_min_gap(&mut rng, d, -2.0, 2.0, 5e-2);
        let p = RealRootedPoly::from_roots(&p_roots).unwrap();
        let q = RealRootedPoly::from_roots(&q_roots).unwrap();
        let inputs = json!({ "p_roots": p_roots, "q_roots": q_roots });

        let mut result = TrialResult::clean(f64::INFINITY);
        let fail = |result: &mut TrialResult, description: String| {
            result.failures.push(FailureCase {
                trial,
                description,
                inputs: inputs.clone(),
            });
        };

        let trace = match integrate_flow(&p, &q, FLOW_T_MIN, FLOW_STEPS) {
            Ok(trace) => trace,
            Err(err) => {
                result.worst_slack = f64::NEG_INFINITY;
                fail(&mut result, format!("integration failed: {err}"));
                return result;
            }
        };

        let min_step = trace
            .log_dis
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        result.worst_slack = min_step;
        if min_step < -FLOW_LOG_DIS_SLACK {
            fail(
                &mut result,
                format!("log Dis decreased by {min_step:.3e} between checkpoints"),
            );
        }
        let total = trace.total_log_dis_increase();
        if total.is_nan() || total <= 0.0 {
            fail(&mut result, "log Dis did not increase over the trace".into());
        }
        if trace.max_deviation > FLOW_DEVIATION_TOL {
            fail(
                &mut result,
                format!("integrated roots deviate by {:.3e}", trace.max_deviation),
            );
        }

        match convolve(&p, &q) {
            Ok(direct) => {
                let end_dev = trace
                    .roots
                    .last()
                    .unwrap()
                    .iter()
                    .zip(direct.roots())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                if end_dev > FLOW_DEVIATION_TOL {
                    fail(
                        &mut result,
                        format!("endpoint deviates from direct convolution by {end_dev:.3e}"),
                    );
                }
            }
            Err(err) => fail(&mut result, format!("direct convolution failed: {err}")),
        }

        match f_monotonicity_check(&trace) {
            Ok(report) if !report.passed() => {
                fail(&mut result, format!("f series check failed: {report:?}"));
            }
            Ok(_) => {}
            Err(err) => fail(&mut result, format!("f series check errored: {err}")),
        }

        match small_t_wronskian_limit(&p, &q, SMALL_T_PROBE) {
            Ok(limit) if limit.max_rel_dev > SMALL_T_TOL => {
                fail(
                    &mut result,
                    format!("small-t limit off by {:.3e}", limit.max_rel_dev),
                );
            }
            Ok(_) => {}
            Err(err) => fail(&mut result, format!("small-t limit errored: {err}")),
        }

        result
    });
    merge(TheoremSuite::Flow, trials, seed, results)
}

/// Relative tolerance for `leading(W[∂̇q, q′]) = spread(q)`.
pub const LEADING_SPREAD_TOL: f64 = 1e-9;
/// Envelope-relative bound under which the shift-class Wronskian counts as
/// identically zero.
pub const SHIFT_WRONSKIAN_TOL: f64 = 1e-10;

/// Interlacing suite: Laguerre positivity of `W[p′, p″]` on the standard
/// grid, non-negativity of `W[∂̇q, q′]` with its leading coefficient equal
/// to the root spread, the shift-class Wronskian vanishing, and (on a
/// subsample) agreement between root alternation and the random linear
/// combination test.
pub fn interlacing_suite(trials: u64, seed: u64) -> SuiteReport {
    let results = exec::map_indexed(trials as usize, |i| {
        let trial = i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(exec::derive_seed(seed, trial));
        let d = rng.random_range(3..=10);
        let p_roots = sample_roots_min_gap(&mut rng, d, -4.0, 4.0, 1e-2);
        let q_roots = sample_roots_min_gap(&mut rng, d, -4.0, 4.0, 1e-2);
        let c = rng.random_range(-3.0..=3.0);
        let p = RealRootedPoly::from_roots(&p_roots).unwrap();
        let q = RealRootedPoly::from_roots(&q_roots).unwrap();
        let inputs = json!({ "p_roots": p_roots, "q_roots": q_roots, "c": c });

        let mut result = TrialResult::clean(f64::INFINITY);
        let fail = |result: &mut TrialResult, description: String| {
            result.failures.push(FailureCase {
                trial,
                description,
                inputs: inputs.clone(),
            });
        };

        let grid = standard_grid(p.root_span());
        match laguerre_check(&p, &grid) {
            Ok(out) if !out.strictly_positive => {
                fail(
                    &mut result,
                    format!(
                        "W[p′,p″] min {:.3e} at x = {} not strictly positive",
                        out.min_value, out.argmin
                    ),
                );
            }
            Ok(_) => {}
            Err(err) => fail(&mut result, format!("Laguerre check errored: {err}")),
        }

        let verdict = polar_wronskian_positivity(&q);
        result.worst_slack = verdict.grid_min / (1.0 + verdict.spread);
        if !verdict.nonnegative {
            fail(
                &mut result,
                format!("W[∂̇q, q′] dips to {:.3e} on the grid", verdict.grid_min),
            );
        }
        let leading_err = (verdict.leading_value - verdict.spread).abs()
            / (1.0 + verdict.spread.abs());
        if leading_err > LEADING_SPREAD_TOL {
            fail(
                &mut result,
                format!(
                    "leading coefficient {:.6e} vs spread {:.6e} (rel err {leading_err:.3e})",
                    verdict.leading_value, verdict.spread
                ),
            );
        }

        let shift = RealRootedPoly::from_roots(&vec![c; d]).unwrap();
        let shift_verdict = polar_wronskian_positivity(&shift);
        if shift_verdict.max_envelope_ratio > SHIFT_WRONSKIAN_TOL {
            fail(
                &mut result,
                format!(
                    "shift-class Wronskian not identically zero: envelope ratio {:.3e}",
                    shift_verdict.max_envelope_ratio
                ),
            );
        }

        // Alternation ⇒ the sampled combination test agrees. Checked on a
        // subsample since each run costs 200 root extractions. The
        // same-degree interlacing partner is p − βp′; the derivative itself
        // covers the degree-gap-one alternation case.
        if trial.is_multiple_of(8) {
            let beta = rng.random_range(0.1..1.0);
            let partner = crate::convolution::DiffOperatorSpec::new(vec![beta])
                .and_then(|spec| crate::convolution::apply_diff_operator(&p, &spec));
            let alternation = p
                .derivative(1)
                .and_then(|dp| check_interlacing(&p, &dp.monic));
            match (partner, alternation) {
                (Ok(partner), Ok(dp_verdict)) => {
                    if !dp_verdict.interlaces {
                        fail(&mut result, "derivative roots failed to alternate".into());
                    }
                    match check_interlacing(&p, &partner) {
                        Ok(verdict) => {
                            if !verdict.interlaces {
                                fail(&mut result, "p − βp′ failed to alternate with p".into());
                            }
                            if verdict.wronskian_sign == WronskianSign::Mixed {
                                fail(&mut result, "W[p, p − βp′] changed sign on the grid".into());
                            }
                            match hko_sample_test(
                                &p,
                                &partner,
                                200,
                                exec::derive_seed(seed, trial ^ 0x484b4f),
                            ) {
                                Ok(true) => {}
                                Ok(false) => fail(
                                    &mut result,
                                    "combination test failed on an interlacing pair".into(),
                                ),
                                Err(err) => {
                                    fail(&mut result, format!("combination test errored: {err}"))
                                }
                            }
                        }
                        Err(err) => fail(&mut result, format!("interlacing check errored: {err}")),
                    }
                }
                (Err(err), _) => fail(&mut result, format!("operator failed: {err}")),
                (_, Err(err)) => fail(&mut result, format!("derivative failed: {err}")),
            }
        }

        result
    });
    merge(TheoremSuite::Interlacing, trials, seed, results)
}

fn merge(suite: TheoremSuite, trials: u64, seed: u64, results: Vec<TrialResult>) -> SuiteReport {
    let mut violations = 0u64;
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for result in results {
        violations += result.failures.len() as u64;
        worst = worst.min(result.worst_slack);
        for f in result.failures {
            if failures.len() < MAX_STORED_FAILURES {
                failures.push(f);
            }
        }
    }
    SuiteReport {
        suite: suite.name().to_string(),
        trials,
        seed,
        violations,
        worst_slack: if worst.is_finite() { worst } else { 0.0 },
        failures,
    }
}

/// Uniform roots on `[lo, hi]` with every consecutive gap at least
/// `min_gap`, by rejection.
pub fn sample_roots_min_gap(
    rng: &mut ChaCha8Rng,
    d: usize,
    lo: f64,
    hi: f64,
    min_gap: f64,
) -> Vec<f64> {
    loop {
        let mut roots: Vec<f64> = (0..d).map(|_| rng.random_range(lo..=hi)).collect();
        roots.sort_by(f64::total_cmp);
        if d < 2 || roots.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return roots;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_smoke_scale() {
        for suite in [
            TheoremSuite::Base,
            TheoremSuite::General,
            TheoremSuite::Interlacing,
        ] {
            let report = run_suite(suite, 40, 2024);
            assert!(
                report.passed(),
                "{} suite: {:?}",
                report.suite,
                report.failures
            );
            assert_eq!(report.trials, 40);
        }
        let report = run_suite(TheoremSuite::Flow, 4, 2024);
        assert!(report.passed(), "flow suite: {:?}", report.failures);
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in [
            TheoremSuite::Base,
            TheoremSuite::General,
            TheoremSuite::Flow,
            TheoremSuite::Interlacing,
        ] {
            assert_eq!(TheoremSuite::from_name(suite.name()), Some(suite));
        }
        assert_eq!(TheoremSuite::from_name("nope"), None);
    }

    #[test]
    fn base_suite_worst_slack_is_positive() {
        let report = base_suite(50, 7);
        assert!(report.passed());
        assert!(report.worst_slack > BASE_LOG_SLACK);
    }

    #[test]
    fn min_gap_sampler_honors_the_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let roots = sample_roots_min_gap(&mut rng, 8, -5.0, 5.0, 1e-2);
            assert!(roots.windows(2).all(|w| w[1] - w[0] >= 1e-2));
        }
    }
}
