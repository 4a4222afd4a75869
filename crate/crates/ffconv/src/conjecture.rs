//! Randomized search over superadditivity of the normalized discriminant.
//!
//! The quantity under test is
//! `Dis(p ⊞_d q)^{1/C(d,2)} ≥ Dis(p)^{1/C(d,2)} + Dis(q)^{1/C(d,2)}`,
//! equivalently `e^{2h(p⊞q)} ≥ e^{2h(p)} + e^{2h(q)}` in entropy form.
//! Every intermediate value is kept in log space, so near-degenerate inputs
//! (tight root clusters, huge scales) stay finite.
//!
//! Campaigns are reproducible: each trial derives its own seed from the
//! master seed and the trial index, trials execute independently (on the
//! worker pool when the `parallel` feature is on), and records are merged
//! in trial order, so a rerun with the same config produces a byte-identical
//! report. A failure only fires when the slack is below
//! `−slack_tolerance · (1 + |rhs|)`; anything inside that band is floating
//! noise, not a counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convolution::convolve;
use crate::error::{FfcError, Result};
use crate::exec;
use crate::poly::binomial;
use crate::real_rooted::RealRootedPoly;
use crate::spectral::{entropy, is_collided, is_shift_class, log_discriminant};

/// Root generation law for one side of a trial.
///
/// `ClusteredPairs` is the adversarial one: it plants root pairs at
/// distance `1e−4`, probing the small-discriminant region where a false
/// inequality would fail first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootLaw {
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "gaussian")]
    Gaussian,
    #[serde(rename = "chebyshev-nodes")]
    ChebyshevNodes,
    #[serde(rename = "clustered-pairs")]
    ClusteredPairs,
}

pub const ALL_LAWS: [RootLaw; 4] = [
    RootLaw::Uniform,
    RootLaw::Gaussian,
    RootLaw::ChebyshevNodes,
    RootLaw::ClusteredPairs,
];

fn default_trials() -> u64 {
    10_000
}
fn default_degree_range() -> (usize, usize) {
    (2, 8)
}
fn default_laws() -> Vec<RootLaw> {
    ALL_LAWS.to_vec()
}
fn default_scale_range() -> (f64, f64) {
    (0.5, 2.0)
}
fn default_slack_tolerance() -> f64 {
    1e-9
}

/// Campaign configuration. Each trial draws its degree, law and scales from
/// the ranges below using its own derived seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub master_seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_degree_range")]
    pub degree_range: (usize, usize),
    #[serde(default = "default_laws")]
    pub root_laws: Vec<RootLaw>,
    #[serde(default = "default_scale_range")]
    pub scale_range: (f64, f64),
    #[serde(default = "default_slack_tolerance")]
    pub slack_tolerance: f64,
}

impl FuzzConfig {
    pub fn with_seed(master_seed: u64) -> Self {
        FuzzConfig {
            master_seed,
            trials: default_trials(),
            degree_range: default_degree_range(),
            root_laws: default_laws(),
            scale_range: default_scale_range(),
            slack_tolerance: default_slack_tolerance(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (d_lo, d_hi) = self.degree_range;
        if d_lo < 2 || d_hi < d_lo {
            return Err(FfcError::InvalidConfig(format!(
                "degree_range ({d_lo}, {d_hi}) must satisfy 2 ≤ lo ≤ hi"
            )));
        }
        if self.trials == 0 {
            return Err(FfcError::InvalidConfig("trials must be ≥ 1".into()));
        }
        if self.root_laws.is_empty() {
            return Err(FfcError::InvalidConfig("root_laws must be nonempty".into()));
        }
        let (s_lo, s_hi) = self.scale_range;
        let scales_ok = s_lo > 0.0 && s_hi >= s_lo && s_hi.is_finite();
        if !scales_ok {
            return Err(FfcError::InvalidConfig(format!(
                "scale_range ({s_lo}, {s_hi}) must be positive and ordered"
            )));
        }
        if self.slack_tolerance.is_nan() || self.slack_tolerance <= 0.0 {
            return Err(FfcError::InvalidConfig(
                "slack_tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "degenerate")]
    Degenerate,
}

/// One fuzz trial. `lhs_log` is `log Dis(p⊞q) / C(d,2)` (kept in log form);
/// `rhs` and `slack` are in linear units.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub derived_seed: u64,
    pub d: usize,
    pub p_roots: Vec<f64>,
    pub q_roots: Vec<f64>,
    pub lhs_log: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub trials: u64,
    pub failures: u64,
    pub degenerate: u64,
    pub min_slack: Option<f64>,
    pub argmin_trial: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub config: FuzzConfig,
    pub version: String,
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

impl CampaignReport {
    /// One header line (config echo + version tag) followed by one record
    /// per line.
    pub fn to_jsonl(&self) -> String {
        #[derive(Serialize)]
        struct Header<'a> {
            config: &'a FuzzConfig,
            version: &'a str,
        }
        let mut out = crate::json::to_string(&Header {
            config: &self.config,
            version: &self.version,
        });
        out.push('\n');
        for record in &self.records {
            out.push_str(&crate::json::to_string(record));
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> String {
        crate::json::to_string(&self.summary)
    }
}

/// Slack of the superadditivity inequality for one pair.
#[derive(Clone, Copy, Debug)]
pub struct SlackValue {
    /// `log Dis(p⊞q) / C(d,2)`.
    pub lhs_log: f64,
    /// `Dis(p)^{1/C} + Dis(q)^{1/C}`.
    pub rhs: f64,
    /// `exp(lhs_log) − rhs`.
    pub slack: f64,
    /// Input was shift-class or had collided roots; the slack is still
    /// well-defined (a zero discriminant contributes 0 to the sum) but the
    /// trial does not count as evidence either way.
    pub degenerate: bool,
}

/// `Dis(p⊞q)^{1/C(d,2)} − Dis(p)^{1/C(d,2)} − Dis(q)^{1/C(d,2)}` with
/// log-space intermediates. Degenerate inputs (shift-class or collided) are
/// flagged, not failed; degree mismatch and degree < 2 are errors.
pub fn minkowski_slack(p: &RealRootedPoly, q: &RealRootedPoly) -> Result<SlackValue> {
    let d = check_pair(p, q)?;
    let c = binomial(d, 2);
    let lhs_log = log_discriminant(&convolve(p, q)?) / c;
    let rhs = (log_discriminant(p) / c).exp() + (log_discriminant(q) / c).exp();
    Ok(SlackValue {
        lhs_log,
        rhs,
        slack: lhs_log.exp() - rhs,
        degenerate: is_degenerate(p) || is_degenerate(q),
    })
}

/// The same slack computed through the entropy path
/// (`e^{2h(p⊞q)} − e^{2h(p)} − e^{2h(q)}`); algebraically identical to
/// [`minkowski_slack`] and used as a consistency check on the two routes.
pub fn entropy_power_slack(p: &RealRootedPoly, q: &RealRootedPoly) -> Result<SlackValue> {
    check_pair(p, q)?;
    let r = convolve(p, q)?;
    let lhs_log = 2.0 * entropy(&r);
    let rhs = (2.0 * entropy(p)).exp() + (2.0 * entropy(q)).exp();
    Ok(SlackValue {
        lhs_log,
        rhs,
        slack: lhs_log.exp() - rhs,
        degenerate: is_degenerate(p) || is_degenerate(q),
    })
}

fn check_pair(p: &RealRootedPoly, q: &RealRootedPoly) -> Result<usize> {
    if p.degree() != q.degree() {
        return Err(FfcError::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    if p.degree() < 2 {
        return Err(FfcError::DegreeTooSmall {
            degree: p.degree(),
            min: 2,
        });
    }
    Ok(p.degree())
}

fn is_degenerate(p: &RealRootedPoly) -> bool {
    is_collided(p) || is_shift_class(p)
}

/// Runs the campaign on the worker pool (or sequentially without the
/// `parallel` feature). Individual numerical failures inside a trial are
/// recorded as degenerate; they never abort the campaign.
pub fn run_campaign(config: &FuzzConfig) -> Result<CampaignReport> {
    config.validate()?;
    let records = exec::map_indexed(config.trials as usize, |i| run_trial(config, i as u64));
    Ok(assemble(config, records))
}

/// Sequential twin of [`run_campaign`]; produces the identical report and
/// serves as the baseline in the benchmark suite.
pub fn run_campaign_sequential(config: &FuzzConfig) -> Result<CampaignReport> {
    config.validate()?;
    let records =
        exec::map_indexed_sequential(config.trials as usize, |i| run_trial(config, i as u64));
    Ok(assemble(config, records))
}

fn assemble(config: &FuzzConfig, records: Vec<TrialRecord>) -> CampaignReport {
    let mut failures = 0u64;
    let mut degenerate = 0u64;
    let mut min_slack: Option<f64> = None;
    let mut argmin_trial: Option<u64> = None;
    for record in &records {
        match record.verdict {
            Verdict::Fail => failures += 1,
            Verdict::Degenerate => degenerate += 1,
            Verdict::Pass => {}
        }
        if record.verdict != Verdict::Degenerate
            && min_slack.is_none_or(|m| record.slack < m)
        {
            min_slack = Some(record.slack);
            argmin_trial = Some(record.trial_index);
        }
    }
    CampaignReport {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        summary: CampaignSummary {
            trials: config.trials,
            failures,
            degenerate,
            min_slack,
            argmin_trial,
        },
        records,
    }
}

fn run_trial(config: &FuzzConfig, trial_index: u64) -> TrialRecord {
    let derived_seed = exec::derive_seed(config.master_seed, trial_index);
    let mut rng = ChaCha8Rng::seed_from_u64(derived_seed);

    let (d_lo, d_hi) = config.degree_range;
    let d = rng.random_range(d_lo..=d_hi);
    let law = config.root_laws[rng.random_range(0..config.root_laws.len())];
    let (s_lo, s_hi) = config.scale_range;
    let scale_p = rng.random_range(s_lo..=s_hi);
    let scale_q = rng.random_range(s_lo..=s_hi);
    let p_roots = sample_roots(&mut rng, law, d, scale_p);
    let q_roots = sample_roots(&mut rng, law, d, scale_q);

    let outcome = RealRootedPoly::from_roots(&p_roots)
        .and_then(|p| RealRootedPoly::from_roots(&q_roots).map(|q| (p, q)))
        .and_then(|(p, q)| minkowski_slack(&p, &q));

    match outcome {
        Ok(sv) => {
            let verdict = if sv.degenerate {
                Verdict::Degenerate
            } else if sv.slack < -config.slack_tolerance * (1.0 + sv.rhs.abs()) {
                Verdict::Fail
            } else {
                Verdict::Pass
            };
            TrialRecord {
                trial_index,
                derived_seed,
                d,
                p_roots,
                q_roots,
                lhs_log: sv.lhs_log,
                rhs: sv.rhs,
                slack: sv.slack,
                verdict,
            }
        }
        Err(_) => TrialRecord {
            trial_index,
            derived_seed,
            d,
            p_roots,
            q_roots,
            lhs_log: f64::NAN,
            rhs: f64::NAN,
            slack: 0.0,
            verdict: Verdict::Degenerate,
        },
    }
}

/// Draws `d` roots under the given law, sorted ascending.
pub fn sample_roots(rng: &mut ChaCha8Rng, law: RootLaw, d: usize, scale: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = match law {
        RootLaw::Uniform => (0..d).map(|_| rng.random_range(-1.0..=1.0) * scale).collect(),
        RootLaw::Gaussian => (0..d).map(|_| standard_normal(rng) * scale).collect(),
        RootLaw::ChebyshevNodes => {
            let center = rng.random_range(-0.5..=0.5) * scale;
            (0..d)
                .map(|i| {
                    let theta = std::f64::consts::PI * (2.0 * i as f64 + 1.0)
                        / (2.0 * d as f64);
                    center + theta.cos() * scale
                })
                .collect()
        }
        RootLaw::ClusteredPairs => {
            let mut out = Vec::with_capacity(d);
            while out.len() + 1 < d {
                let center = rng.random_range(-1.0..=1.0) * scale;
                out.push(center - 5e-5);
                out.push(center + 5e-5);
            }
            if out.len() < d {
                out.push(rng.random_range(-1.0..=1.0) * scale);
            }
            out
        }
    };
    roots.sort_by(f64::total_cmp);
    roots
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; only the cosine branch is used.
    let u1: f64 = rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Max `|slack|` over random same-shape quadratic pairs. Degree 2 is the
/// exact equality case of the inequality (the normalized discriminant is
/// additive there); other degrees are not supported because the equality
/// class is not pinned down.
pub fn hermite_equality_probe(d: usize, pairs: u64, seed: u64) -> Result<f64> {
    if d != 2 {
        return Err(FfcError::UnsupportedProbe { degree: d });
    }
    let mut worst = 0.0f64;
    for i in 0..pairs {
        let mut rng = ChaCha8Rng::seed_from_u64(exec::derive_seed(seed, i));
        let p = quadratic(&mut rng);
        let q = quadratic(&mut rng);
        let sv = minkowski_slack(&p, &q)?;
        worst = worst.max(sv.slack.abs());
    }
    Ok(worst)
}

fn quadratic(rng: &mut ChaCha8Rng) -> RealRootedPoly {
    loop {
        let a: f64 = rng.random_range(-3.0..=3.0);
        let b = rng.random_range(-3.0..=3.0);
        if (a - b).abs() > 1e-3 {
            return RealRootedPoly::from_roots(&[a, b]).unwrap();
        }
    }
}
