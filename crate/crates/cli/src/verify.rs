//! Self-checks run by `bosonic-mac verify`.

use bosonic_mac::gaussian::{received_photons, receiver_covariance, squeezing_cost};
use bosonic_mac::network::{
    mc_heterodyne_rate, receiver_covariance_by_propagation, MIN_MC_SAMPLES,
};
use bosonic_mac::rates::{
    branch1_rate, branch2_rate, branch_threshold, heterodyne_sum_rate, outer_bound,
};
use bosonic_mac::region::{pentagon_at, receiver_pentagon};
use bosonic_mac::{ChannelParams, PhotonBudget, Receiver, User};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::args::{Format, VerifyArgs};
use crate::commands::{to_json, Context};
use crate::error::{CliError, CliResult};
use crate::settings::resolve;

pub const DEFAULT_DRAWS: usize = 1000;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_ORACLE_TOL: f64 = 1e-10;
pub const MC_SIGMAS: f64 = 3.0;
pub const CONTINUITY_TOL: f64 = 1e-9;
pub const CONTINUITY_DRAWS: usize = 10;
pub const CONTAINMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation (same units as `tolerance`).
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub params: ChannelParams,
    pub budget: PhotonBudget,
    pub seed: u64,
    pub draws: usize,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn random_channel(rng: &mut ChaCha8Rng) -> ChannelParams {
    ChannelParams::new(rng.gen(), rng.gen(), rng.gen_range(0.0..10.0)).expect("in range")
}

fn random_budget(rng: &mut ChaCha8Rng) -> PhotonBudget {
    let r_a: f64 = rng.gen_range(-2.0..2.0);
    let r_b: f64 = rng.gen_range(-2.0..2.0);
    let n_a = squeezing_cost(r_a) + rng.gen_range(0.0..10.0);
    let n_b = squeezing_cost(r_b) + rng.gen_range(0.0..10.0);
    PhotonBudget::new(n_a, n_b, r_a, r_b).expect("squeezing fits")
}

fn oracle_check(rng: &mut ChaCha8Rng, draws: usize, tol: f64) -> CliResult<Check> {
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let params = random_channel(rng);
        let budget = random_budget(rng);
        let closed = receiver_covariance(&budget, &params);
        let prop = receiver_covariance_by_propagation(&params, &budget)?;
        let scale = closed.v11.max(closed.v22);
        for (x, y) in [
            (closed.v11, prop.v11),
            (closed.v22, prop.v22),
            (closed.v12, prop.v12),
        ] {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    Ok(Check {
        name: "covariance_oracle".into(),
        passed: worst < tol,
        value: worst,
        tolerance: tol,
        detail: format!("max relative deviation over {draws} draws"),
    })
}

fn monte_carlo_check(ctx: &Context, samples: usize) -> CliResult<Check> {
    let budget = PhotonBudget::coherent(ctx.budget.n_a, ctx.budget.n_b);
    let mc = mc_heterodyne_rate(&ctx.params, &budget, samples, ctx.seed)?;
    let closed = heterodyne_sum_rate(&ctx.params, &budget)?;
    let z = if mc.std_error > 0.0 {
        (mc.rate - closed).abs() / mc.std_error
    } else if mc.rate == closed {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(Check {
        name: "monte_carlo_heterodyne".into(),
        passed: z <= MC_SIGMAS,
        value: z,
        tolerance: MC_SIGMAS,
        detail: format!(
            "simulated {:.6} +- {:.2e} bits vs closed form {closed:.6} ({samples} samples, standard errors)",
            mc.rate, mc.std_error
        ),
    })
}

/// Bisect Alice's squeezing onto the branch boundary and compare the two
/// branch formulas there.
fn continuity_check(rng: &mut ChaCha8Rng) -> CliResult<Check> {
    let mut worst = 0.0f64;
    let mut found = 0;
    let mut attempts = 0;
    while found < CONTINUITY_DRAWS && attempts < 10_000 {
        attempts += 1;
        let params = ChannelParams::new(
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.0..5.0),
        )?;
        let n_a: f64 = rng.gen_range(0.1..10.0);
        let n_b: f64 = rng.gen_range(0.1..10.0);
        let r_b = rng.gen_range(-1.0..1.0) * n_b.sqrt().asinh();
        let r_max = n_a.sqrt().asinh();
        let h = |r_a: f64| -> CliResult<f64> {
            let b = PhotonBudget::new(n_a, n_b, r_a, r_b)?;
            let (n, _) = received_photons(&b, &params)?;
            Ok(n - branch_threshold(&receiver_covariance(&b, &params)))
        };
        let mut bracket = None;
        let mut prev = (-r_max, h(-r_max)?);
        for i in 1..=200 {
            let r = -r_max + 2.0 * r_max * i as f64 / 200.0;
            let v = h(r)?;
            if (v > 0.0) != (prev.1 > 0.0) {
                bracket = Some((prev.0, r, prev.1 > 0.0));
                break;
            }
            prev = (r, v);
        }
        let Some((mut lo, mut hi, up)) = bracket else {
            continue;
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (h(mid)? > 0.0) == up {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let b = PhotonBudget::new(n_a, n_b, 0.5 * (lo + hi), r_b)?;
        let (n, _) = received_photons(&b, &params)?;
        let v = receiver_covariance(&b, &params);
        worst = worst.max((branch1_rate(n, &v) - branch2_rate(n, &v)).abs());
        found += 1;
    }
    Ok(Check {
        name: "piecewise_continuity".into(),
        passed: found == CONTINUITY_DRAWS && worst < CONTINUITY_TOL,
        value: worst,
        tolerance: CONTINUITY_TOL,
        detail: format!("max branch mismatch in bits at {found} boundary crossings"),
    })
}

fn containment_check(ctx: &Context, rng: &mut ChaCha8Rng, draws: usize) -> CliResult<Check> {
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let params = random_channel(rng);
        let budget = random_budget(rng);
        let pent = pentagon_at(&params, &budget)?;
        let ub_a = outer_bound(&params, &budget, User::Alice);
        let ub_b = outer_bound(&params, &budget, User::Bob);
        for v in &pent.vertices {
            worst = worst
                .max((v.r_a - ub_a) / ub_a.max(1.0))
                .max((v.r_b - ub_b) / ub_b.max(1.0));
        }
    }
    let coherent = PhotonBudget::coherent(ctx.budget.n_a, ctx.budget.n_b);
    let gaussian = pentagon_at(&ctx.params, &coherent)?;
    for rx in [Receiver::Heterodyne, Receiver::Homodyne] {
        let Ok(pent) = receiver_pentagon(&ctx.params, &coherent, rx) else {
            continue;
        };
        for v in &pent.vertices {
            worst = worst
                .max(v.r_a - gaussian.r_a_max)
                .max(v.r_b - gaussian.r_b_max)
                .max(v.r_a + v.r_b - gaussian.sum_max);
        }
    }
    let worst = worst.max(0.0);
    Ok(Check {
        name: "containment".into(),
        passed: worst <= CONTAINMENT_TOL,
        value: worst,
        tolerance: CONTAINMENT_TOL,
        detail: format!(
            "pentagons inside outer-bound boxes over {draws} draws; receiver pentagons inside the coherent pentagon"
        ),
    })
}

pub fn run_verify(ctx: &Context, args: &VerifyArgs) -> CliResult<VerifyReport> {
    let cfg = &ctx.config;
    let draws = resolve(cfg, "draws", args.draws, DEFAULT_DRAWS)?;
    if draws == 0 {
        return Err(CliError::invalid("draws", "must be at least 1"));
    }
    let samples = resolve(cfg, "samples", args.samples, DEFAULT_SAMPLES)?;
    if samples < MIN_MC_SAMPLES {
        return Err(CliError::invalid(
            "samples",
            format!("must be at least {MIN_MC_SAMPLES}, got {samples}"),
        ));
    }
    let tol = resolve(cfg, "tolerance", args.tolerance, DEFAULT_ORACLE_TOL)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::invalid(
            "tolerance",
            format!("must be non-negative, got {tol}"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let checks = vec![
        oracle_check(&mut rng, draws, tol)?,
        monte_carlo_check(ctx, samples)?,
        continuity_check(&mut rng)?,
        containment_check(ctx, &mut rng, draws)?,
    ];
    for c in &checks {
        log::info!(
            "{}: {} ({:e} vs {:e})",
            c.name,
            if c.passed { "ok" } else { "FAILED" },
            c.value,
            c.tolerance
        );
    }
    Ok(VerifyReport {
        params: ctx.params,
        budget: ctx.budget,
        seed: ctx.seed,
        draws,
        samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn verify_csv(report: &VerifyReport) -> String {
    let mut s = String::from("check,passed,value,tolerance\n");
    for c in &report.checks {
        s.push_str(&format!(
            "{},{},{},{}\n",
            c.name,
            c.passed,
            bosonic_mac::region::fmt17(c.value),
            bosonic_mac::region::fmt17(c.tolerance)
        ));
    }
    s
}

pub fn cmd_verify(ctx: &Context, args: &VerifyArgs) -> CliResult<()> {
    let report = run_verify(ctx, args)?;
    match ctx.out_format() {
        Format::Json => ctx.emit(&to_json(&report))?,
        Format::Csv => ctx.emit(&verify_csv(&report))?,
    }
    if report.passed {
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Verification(format!(
            "failing checks: {}",
            failing.join(", ")
        )))
    }
}
