//! Numerical limit probes: rate ratios evaluated along geometric photon-number
//! schedules, with a convergence verdict per probe.
//!
//! A probe converges when the distance to its target is non-increasing over
//! the last few schedule points and the distance at the final point is below
//! the probe's tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{received_photons, receiver_covariance};
use crate::gaussian::{ChannelParams, CovMatrix2, PhotonBudget};
use crate::optimize::golden_section_max;
use crate::rates::{
    big_g11, big_g12, branch1_rate, branch_threshold, outer_bound, piecewise_rate, point_to_point,
    receiver_individual_rate, Branch, Receiver, User,
};

pub const LEMMA1_TOLERANCE: f64 = 0.01;
pub const LEMMA2_TOLERANCE: f64 = 0.01;
pub const HOMODYNE_TOLERANCE: f64 = 0.05;
pub const RECEIVER_GAP_CEILING: f64 = 0.1;
pub const MONOTONE_WINDOW: usize = 4;
pub const MONOTONE_SLACK: f64 = 1e-12;
/// Inner variable of a nested double limit sits this factor deeper.
pub const INNER_DEPTH: f64 = 1e3;
pub const HOMODYNE_SEARCH_TOL: f64 = 1e-8;
pub const HOMODYNE_MAX_SQUEEZE: f64 = 10.0;
/// Relative residual allowed on the b_max constraint.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    Diverged,
    Skipped,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Diverged
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeTolerances {
    /// Largest accepted |ratio - target| at the final schedule point.
    pub final_gap: f64,
    /// Number of trailing points over which the gap must not grow.
    pub monotone_window: usize,
    pub monotone_slack: f64,
}

/// An auxiliary pass/fail condition attached to a probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitProbe {
    pub lemma: String,
    pub schedule: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_schedule: Option<Vec<f64>>,
    pub ratios: Vec<f64>,
    pub target: f64,
    pub gap: f64,
    pub monotone: bool,
    pub verdict: Verdict,
    pub tolerances: ProbeTolerances,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<Branch>,
    /// Optimizer arguments per point, when the probe maximizes something.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arg_max: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<ProbeCheck>,
}

impl LimitProbe {
    fn assemble(
        lemma: &str,
        schedule: Vec<f64>,
        ratios: Vec<f64>,
        target: f64,
        tolerances: ProbeTolerances,
    ) -> Self {
        let gaps: Vec<f64> = ratios.iter().map(|r| (r - target).abs()).collect();
        let gap = gaps.last().copied().unwrap_or(f64::NAN);
        let start = gaps.len().saturating_sub(tolerances.monotone_window);
        let monotone = gaps[start..]
            .windows(2)
            .all(|w| w[1] <= w[0] + tolerances.monotone_slack);
        let mut probe = LimitProbe {
            lemma: lemma.to_string(),
            schedule,
            inner_schedule: None,
            ratios,
            target,
            gap,
            monotone,
            verdict: Verdict::Diverged,
            tolerances,
            branches: Vec::new(),
            arg_max: Vec::new(),
            checks: Vec::new(),
        };
        probe.refresh_verdict();
        probe
    }

    fn refresh_verdict(&mut self) {
        let finite = self.ratios.iter().all(|r| r.is_finite());
        let ok = finite
            && !self.ratios.is_empty()
            && self.monotone
            && self.gap < self.tolerances.final_gap
            && self.checks.iter().all(|c| c.passed);
        self.verdict = if ok {
            Verdict::Converged
        } else {
            Verdict::Diverged
        };
    }

    fn with_check(mut self, name: &str, passed: bool, value: f64) -> Self {
        self.checks.push(ProbeCheck {
            name: name.to_string(),
            passed,
            value,
        });
        self.refresh_verdict();
        self
    }

    fn skipped(lemma: &str, schedule: Vec<f64>, target: f64, tolerances: ProbeTolerances) -> Self {
        LimitProbe {
            lemma: lemma.to_string(),
            schedule,
            inner_schedule: None,
            ratios: Vec::new(),
            target,
            gap: f64::NAN,
            monotone: false,
            verdict: Verdict::Skipped,
            tolerances,
            branches: Vec::new(),
            arg_max: Vec::new(),
            checks: Vec::new(),
        }
    }
}

fn tolerances(final_gap: f64) -> ProbeTolerances {
    ProbeTolerances {
        final_gap,
        monotone_window: MONOTONE_WINDOW,
        monotone_slack: MONOTONE_SLACK,
    }
}

/// `points` values `start, start*ratio, ...`.
pub fn geometric_schedule(start: f64, ratio: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| start * ratio.powi(i as i32)).collect()
}

/// Powers of ten from `10^first` to `10^last` inclusive, one per decade.
/// Each entry is the correctly rounded decimal value.
pub fn decade_schedule(first: i32, last: i32) -> Vec<f64> {
    let step = if last >= first { 1 } else { -1 };
    let count = (last - first).abs() + 1;
    (0..count)
        .map(|i| {
            format!("1e{}", first + step * i)
                .parse()
                .expect("valid literal")
        })
        .collect()
}

/// 1e0 .. 1e8.
pub fn lemma1_schedule() -> Vec<f64> {
    decade_schedule(0, 8)
}

/// 1e-2 .. 1e6.
pub fn homodyne_schedule() -> Vec<f64> {
    decade_schedule(-2, 6)
}

/// 1e2 .. 1e-6.
pub fn lemma2_schedule() -> Vec<f64> {
    decade_schedule(2, -6)
}

/// 1e-1 .. 1e-9.
pub fn receiver_gap_schedule() -> Vec<f64> {
    decade_schedule(-1, -9)
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(invalid("schedule", "must not be empty"));
    }
    if schedule.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(invalid(
            "schedule",
            "entries must be finite and non-negative",
        ));
    }
    let up = schedule.windows(2).all(|w| w[1] > w[0]);
    let down = schedule.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(invalid("schedule", "must be strictly monotone"));
    }
    Ok(())
}

fn require_positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {x}")))
    }
}

// ---------------------------------------------------------------------------
// Heterodyne vs outer bound at high power

/// Heterodyne single-user rate over the interference-free outer bound for
/// `user` holding `n_user` photons (the other user is silent).
pub fn lemma1_ratio(n_user: f64, params: &ChannelParams, user: User) -> Result<f64> {
    require_positive("n_user", n_user)?;
    let budget = match user {
        User::Alice => PhotonBudget::coherent(n_user, 0.0),
        User::Bob => PhotonBudget::coherent(0.0, n_user),
    };
    let het = receiver_individual_rate(params, &budget, Receiver::Heterodyne, user)?;
    Ok(het / outer_bound(params, &budget, user))
}

pub fn lemma1_probe(params: &ChannelParams, user: User, schedule: &[f64]) -> Result<LimitProbe> {
    check_schedule(schedule)?;
    let ratios = schedule
        .iter()
        .map(|&n| lemma1_ratio(n, params, user))
        .collect::<Result<Vec<_>>>()?;
    let name = match user {
        User::Alice => "lemma1",
        User::Bob => "lemma1-bob",
    };
    Ok(LimitProbe::assemble(
        name,
        schedule.to_vec(),
        ratios,
        1.0,
        tolerances(LEMMA1_TOLERANCE),
    ))
}

// ---------------------------------------------------------------------------
// Homodyne half limit

/// One point of the homodyne ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodynePoint {
    pub n_b: f64,
    pub ratio: f64,
    /// Alice's squeezing parameter at the optimum.
    pub r_a: f64,
}

fn homodyne_point(n_a: f64, n_b: f64, params: &ChannelParams) -> Result<HomodynePoint> {
    if params.eta1() == 0.0 || params.eta2() == 0.0 {
        return Err(Error::DegenerateChannel(
            "homodyne ratio needs eta1, eta2 > 0",
        ));
    }
    if n_a == 0.0 {
        return Ok(HomodynePoint {
            n_b,
            ratio: 0.0,
            r_a: 0.0,
        });
    }
    let r_b = -n_b.sqrt().asinh();
    let bound = outer_bound(params, &PhotonBudget::coherent(n_a, 0.0), User::Alice);
    let limit = n_a.sqrt().asinh().min(HOMODYNE_MAX_SQUEEZE);
    let rate = |r_a: f64| {
        PhotonBudget::new(n_a, n_b, r_a, r_b)
            .and_then(|b| receiver_individual_rate(params, &b, Receiver::Homodyne, User::Alice))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (r_a, best) = golden_section_max(rate, -limit, limit, HOMODYNE_SEARCH_TOL);
    Ok(HomodynePoint {
        n_b,
        ratio: best / bound,
        r_a,
    })
}

/// Homodyne rate for Alice, maximized over her squeezing, over her outer
/// bound. Bob spends his whole budget anti-squeezing the measured quadrature.
pub fn homodyne_asymptotic_ratio(
    n_a: f64,
    params: &ChannelParams,
    n_b_schedule: &[f64],
) -> Result<Vec<HomodynePoint>> {
    if !(n_a.is_finite() && n_a >= 0.0) {
        return Err(invalid("n_a", format!("must be non-negative, got {n_a}")));
    }
    check_schedule(n_b_schedule)?;
    n_b_schedule
        .iter()
        .map(|&n_b| homodyne_point(n_a, n_b, params))
        .collect()
}

/// Homodyne ratio along `schedule` with `n_B = n_A` at every point.
pub fn homodyne_probe(params: &ChannelParams, schedule: &[f64]) -> Result<LimitProbe> {
    check_schedule(schedule)?;
    let points = schedule
        .iter()
        .map(|&n| homodyne_point(n, n, params))
        .collect::<Result<Vec<_>>>()?;
    let mut probe = LimitProbe::assemble(
        "hom-half",
        schedule.to_vec(),
        points.iter().map(|p| p.ratio).collect(),
        0.5,
        tolerances(HOMODYNE_TOLERANCE),
    );
    probe.inner_schedule = Some(schedule.to_vec());
    probe.arg_max = points.iter().map(|p| p.r_a).collect();
    Ok(probe)
}

// ---------------------------------------------------------------------------
// Low-power ratios against the point-to-point capacity

fn alice_capacity(params: &ChannelParams, n_a: f64) -> f64 {
    point_to_point(params.weight_a() * n_a, params.received_thermal())
}

fn inner_points(schedule: &[f64]) -> Vec<f64> {
    schedule.iter().map(|n| n / INNER_DEPTH).collect()
}

/// Coherent inputs: `R_maxA / C_A`.
pub fn lemma2_case1_ratio(params: &ChannelParams, n_a: f64, n_b: f64) -> Result<(f64, Branch)> {
    require_positive("n_a", n_a)?;
    let budget = PhotonBudget::new(n_a, n_b, 0.0, 0.0)?;
    ratio_to_capacity(params, &budget)
}

/// Bob squeezes with his whole budget, Alice coherent: `R_maxA / C_A`.
pub fn lemma2_case2_ratio(params: &ChannelParams, n_a: f64, n_b: f64) -> Result<(f64, Branch)> {
    require_positive("n_a", n_a)?;
    let budget = PhotonBudget::new(n_a, n_b, 0.0, n_b.max(0.0).sqrt().asinh())?;
    ratio_to_capacity(params, &budget)
}

fn ratio_to_capacity(params: &ChannelParams, budget: &PhotonBudget) -> Result<(f64, Branch)> {
    let (n, _) = received_photons(budget, params)?;
    let v = receiver_covariance(budget, params);
    let (rate, branch) = piecewise_rate(n, &v);
    Ok((rate / alice_capacity(params, budget.n_a), branch))
}

/// First-order value of the Case 2 ratio as `n_A -> 0` with Bob's squeezed
/// budget `n_b` held fixed.
pub fn case2_small_signal_ratio(params: &ChannelParams, n_b: f64) -> Result<f64> {
    let thermal = params.received_thermal();
    if thermal <= 0.0 {
        return Err(Error::DegenerateChannel(
            "small-signal ratio needs (1 - eta2) n_T > 0",
        ));
    }
    let budget = PhotonBudget::new(0.0, n_b, 0.0, n_b.max(0.0).sqrt().asinh())?;
    let v = receiver_covariance(&budget, params);
    let hi = v.v11.max(v.v22);
    let lo = v.v11.min(v.v22);
    let root = (hi * lo).sqrt();
    let num = hi / root * ((1.0 + 4.0 * root) / (4.0 * root - 1.0)).ln();
    let den = (1.0 / thermal).ln_1p();
    Ok(num / den)
}

pub fn lemma2_case1(params: &ChannelParams, schedule: &[f64]) -> Result<LimitProbe> {
    check_schedule(schedule)?;
    let inner = inner_points(schedule);
    let (ratios, branches): (Vec<f64>, Vec<Branch>) = schedule
        .iter()
        .zip(&inner)
        .map(|(&n_a, &n_b)| lemma2_case1_ratio(params, n_a, n_b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let mut probe = LimitProbe::assemble(
        "lemma2-case1",
        schedule.to_vec(),
        ratios,
        1.0,
        tolerances(LEMMA2_TOLERANCE),
    );
    probe.inner_schedule = Some(inner);
    probe.branches = branches;
    Ok(probe)
}

/// Outer limit on Bob's squeezed budget, inner limit on Alice's signal.
/// Branch 2 must be active at every point.
pub fn lemma2_case2(params: &ChannelParams, schedule: &[f64]) -> Result<LimitProbe> {
    check_schedule(schedule)?;
    let inner = inner_points(schedule);
    let (ratios, branches): (Vec<f64>, Vec<Branch>) = schedule
        .iter()
        .zip(&inner)
        .map(|(&n_b, &n_a)| lemma2_case2_ratio(params, n_a, n_b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let branch2_count = branches.iter().filter(|b| **b == Branch::Branch2).count();
    let mut probe = LimitProbe::assemble(
        "lemma2-case2",
        schedule.to_vec(),
        ratios,
        1.0,
        tolerances(LEMMA2_TOLERANCE),
    );
    probe.inner_schedule = Some(inner);
    probe.branches = branches;
    let all = branch2_count == schedule.len();
    Ok(probe.with_check("branch2_active", all, branch2_count as f64))
}

// ---------------------------------------------------------------------------
// Case 3: both users scale with a common photon number

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseThreeConfig {
    pub a: f64,
    pub b: f64,
    pub kappa: f64,
    /// Alice's displacement fraction in the branch-2 sub-case.
    pub p_a: f64,
}

impl CaseThreeConfig {
    pub fn new(a: f64, b: f64, kappa: f64, p_a: f64) -> Result<Self> {
        let c = CaseThreeConfig { a, b, kappa, p_a };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("a", self.a)?;
        require_positive("b", self.b)?;
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(invalid(
                "kappa",
                format!("must lie in [0, 1], got {}", self.kappa),
            ));
        }
        if !(0.0..=1.0).contains(&self.p_a) {
            return Err(invalid(
                "p_a",
                format!("must lie in [0, 1], got {}", self.p_a),
            ));
        }
        Ok(())
    }
}

impl Default for CaseThreeConfig {
    fn default() -> Self {
        CaseThreeConfig {
            a: 1.0,
            b: 1.0,
            kappa: 1.0,
            p_a: 0.5,
        }
    }
}

/// Largest `b` for which Alice (coherent, `a n` photons) stays in branch 1
/// while Bob squeezes `b n` photons.
pub fn b_max_a1(a: f64, eta1: f64, n: f64) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("n", n)?;
    if !(0.0..=1.0).contains(&eta1) {
        return Err(invalid("eta1", format!("must lie in [0, 1], got {eta1}")));
    }
    if eta1 == 1.0 {
        return Err(Error::Unbounded("b_max is unbounded when eta1 = 1"));
    }
    let an = a * n;
    let root = ((1.0 - eta1).powi(2) + 4.0 * eta1 * eta1 * an * an).sqrt();
    // eta1 - 1 + root, rewritten to avoid cancellation for small a n
    let lift = 4.0 * eta1 * eta1 * an * an / (root + (1.0 - eta1));
    Ok(lift / (2.0 * (1.0 - eta1) * n))
}

/// Relative residual of the branch boundary `N_A - |V1 - V2|` at Bob's
/// squeezed budget `b n`.
pub fn case3_constraint_residual(params: &ChannelParams, a: f64, b: f64, n: f64) -> Result<f64> {
    let budget = case3_branch1_budget(a, b, n)?;
    let (n_sig, _) = received_photons(&budget, params)?;
    let v = receiver_covariance(&budget, params);
    let threshold = branch_threshold(&v);
    Ok((n_sig - threshold) / n_sig.abs().max(threshold.abs()).max(f64::MIN_POSITIVE))
}

fn case3_branch1_budget(a: f64, b: f64, n: f64) -> Result<PhotonBudget> {
    PhotonBudget::new(a * n, b * n, 0.0, (b * n).sqrt().asinh())
}

/// Branch-1 rate over `C_A` with `b = kappa * b_max(n)`.
pub fn case3_branch1_ratio(
    params: &ChannelParams,
    config: &CaseThreeConfig,
    n: f64,
) -> Result<f64> {
    Ok(case3_branch1_rate(params, config, n)? / alice_capacity(params, config.a * n))
}

/// Branch-1 rate for Alice with Bob squeezing `kappa * b_max(n) * n` photons.
pub fn case3_branch1_rate(params: &ChannelParams, config: &CaseThreeConfig, n: f64) -> Result<f64> {
    config.validate()?;
    let b = config.kappa * b_max_a1(config.a, params.eta1(), n)?;
    let budget = case3_branch1_budget(config.a, b, n)?;
    let (n_sig, _) = received_photons(&budget, params)?;
    Ok(branch1_rate(n_sig, &receiver_covariance(&budget, params)))
}

/// Relative change of the branch-1 rate caused by Bob's squeezing.
pub fn case3_kappa_deviation(
    params: &ChannelParams,
    config: &CaseThreeConfig,
    n: f64,
) -> Result<f64> {
    let base = case3_branch1_rate(
        params,
        &CaseThreeConfig {
            kappa: 0.0,
            ..*config
        },
        n,
    )?;
    let with = case3_branch1_rate(params, config, n)?;
    Ok((with - base).abs() / base)
}

/// `G12` with Alice displacing `p_A a n` and squeezing the rest, Bob
/// squeezing `b n`, over `G11` for the same budgets sent coherently.
/// The second element reports whether branch 2 is active.
pub fn case3_branch2_ratio(
    params: &ChannelParams,
    config: &CaseThreeConfig,
    n: f64,
) -> Result<(f64, bool)> {
    config.validate()?;
    require_positive("n", n)?;
    let (n_a, n_b) = (config.a * n, config.b * n);
    let squeezed = PhotonBudget::new(
        n_a,
        n_b,
        ((1.0 - config.p_a) * n_a).sqrt().asinh(),
        n_b.sqrt().asinh(),
    )?;
    let (n_sig, _) = received_photons(&squeezed, params)?;
    let v = receiver_covariance(&squeezed, params);
    let coherent = PhotonBudget::coherent(n_a, n_b);
    let (n_coh, _) = received_photons(&coherent, params)?;
    let v_coh: CovMatrix2 = receiver_covariance(&coherent, params);
    let active = n_sig < branch_threshold(&v);
    Ok((big_g12(n_sig, &v) / big_g11(n_coh, &v_coh), active))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseThreeReport {
    pub config: CaseThreeConfig,
    pub branch1: LimitProbe,
    pub branch2: LimitProbe,
    /// b_max at each schedule point.
    pub b_max: Vec<f64>,
    /// Relative constraint residual at b = b_max for each schedule point.
    pub constraint_residuals: Vec<f64>,
    pub verdict: Verdict,
}

pub fn lemma2_case3(
    params: &ChannelParams,
    config: &CaseThreeConfig,
    schedule: &[f64],
) -> Result<CaseThreeReport> {
    config.validate()?;
    check_schedule(schedule)?;
    let b_max = schedule
        .iter()
        .map(|&n| b_max_a1(config.a, params.eta1(), n))
        .collect::<Result<Vec<_>>>()?;
    let residuals = schedule
        .iter()
        .zip(&b_max)
        .map(|(&n, &b)| case3_constraint_residual(params, config.a, b, n))
        .collect::<Result<Vec<_>>>()?;
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));

    let ratios1 = schedule
        .iter()
        .map(|&n| case3_branch1_ratio(params, config, n))
        .collect::<Result<Vec<_>>>()?;
    let branch1 = LimitProbe::assemble(
        "lemma2-case3-branch1",
        schedule.to_vec(),
        ratios1,
        1.0,
        tolerances(LEMMA2_TOLERANCE),
    )
    .with_check("b_max_constraint", worst <= CONSTRAINT_TOLERANCE, worst);

    let (ratios2, active): (Vec<f64>, Vec<bool>) = schedule
        .iter()
        .map(|&n| case3_branch2_ratio(params, config, n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let mut branch2 = LimitProbe::assemble(
        "lemma2-case3-branch2",
        schedule.to_vec(),
        ratios2,
        1.0,
        tolerances(LEMMA2_TOLERANCE),
    );
    branch2.branches = active
        .iter()
        .map(|&a| if a { Branch::Branch2 } else { Branch::Branch1 })
        .collect();
    let deepest_active = active.last().copied().unwrap_or(false);
    let branch2 = branch2.with_check(
        "branch2_active_at_deepest",
        deepest_active,
        if deepest_active { 1.0 } else { 0.0 },
    );

    let verdict = if branch1.verdict == Verdict::Converged && branch2.verdict == Verdict::Converged
    {
        Verdict::Converged
    } else {
        Verdict::Diverged
    };
    Ok(CaseThreeReport {
        config: *config,
        branch1,
        branch2,
        b_max,
        constraint_residuals: residuals,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Structured receivers at low power

/// Heterodyne and homodyne single-user rates over `R_maxA`, both users sending
/// `n` coherent photons. Skipped when the channel adds no thermal noise.
pub fn receiver_gap_at_low_power(
    params: &ChannelParams,
    schedule: &[f64],
) -> Result<Vec<LimitProbe>> {
    check_schedule(schedule)?;
    let tol = ProbeTolerances {
        final_gap: RECEIVER_GAP_CEILING,
        monotone_window: schedule.len(),
        monotone_slack: MONOTONE_SLACK,
    };
    let receivers = [
        (Receiver::Heterodyne, "receiver-gap-het"),
        (Receiver::Homodyne, "receiver-gap-hom"),
    ];
    if params.n_thermal() == 0.0 {
        return Ok(receivers
            .iter()
            .map(|(_, name)| LimitProbe::skipped(name, schedule.to_vec(), 0.0, tol))
            .collect());
    }
    receivers
        .iter()
        .map(|&(receiver, name)| {
            let ratios = schedule
                .iter()
                .map(|&n| {
                    require_positive("schedule", n)?;
                    let budget = PhotonBudget::coherent(n, n);
                    let c = receiver_individual_rate(params, &budget, receiver, User::Alice)?;
                    let (n_sig, _) = received_photons(&budget, params)?;
                    let (r, _) = piecewise_rate(n_sig, &receiver_covariance(&budget, params));
                    Ok(c / r)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LimitProbe::assemble(
                name,
                schedule.to_vec(),
                ratios,
                0.0,
                tol,
            ))
        })
        .collect()
}
