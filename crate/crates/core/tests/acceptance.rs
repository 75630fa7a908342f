//! Acceptance criteria. Each test prints exactly one line of the form
//! `PASS [n] name: detail` or `FAIL [n] name: detail`, then asserts.
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1`.

use std::time::{Duration, Instant};

use bosonic_mac::asymptotics::{
    b_max_a1, homodyne_probe, homodyne_schedule, lemma1_probe, lemma1_schedule, lemma2_case1,
    lemma2_case2, lemma2_case3, lemma2_schedule, receiver_gap_at_low_power, receiver_gap_schedule,
    CaseThreeConfig, Verdict,
};
use bosonic_mac::gaussian::{received_photons, receiver_covariance};
use bosonic_mac::network::{mc_heterodyne_rate, receiver_covariance_by_propagation};
use bosonic_mac::rates::{
    branch1_rate, branch2_rate, branch_threshold, heterodyne_sum_rate, individual_rate, User,
};
use bosonic_mac::region::{
    build_region, global_constraint_scan, squeeze_surface, Encoding, ALL_SIGNS, DEFAULT_GRID,
    DEFAULT_SPLITS,
};
use bosonic_mac::{ChannelParams, PhotonBudget};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, passed: bool, detail: String, elapsed: Duration, budget_s: f64) {
    let secs = elapsed.as_secs_f64();
    let in_time = secs < budget_s;
    let ok = passed && in_time;
    println!(
        "{} [{id}] {name}: {detail}; runtime {secs:.3}s (limit {budget_s}s)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn noisy_lossy() -> ChannelParams {
    ChannelParams::new(0.2, 0.9, 4.0).unwrap()
}

fn balanced() -> ChannelParams {
    ChannelParams::new(0.25, 0.9, 1.0).unwrap()
}

fn lemma_channel() -> ChannelParams {
    ChannelParams::new(0.5, 0.9, 1.0).unwrap()
}

#[test]
fn criterion_01_oracle_equivalence() {
    const TOL: f64 = 1e-10;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let params = ChannelParams::new(rng.gen(), rng.gen(), rng.gen_range(0.0..10.0)).unwrap();
        let r_a: f64 = rng.gen_range(-2.0..2.0);
        let r_b: f64 = rng.gen_range(-2.0..2.0);
        let n_a = r_a.sinh().powi(2) + rng.gen_range(0.0..5.0);
        let n_b = r_b.sinh().powi(2) + rng.gen_range(0.0..5.0);
        let budget = PhotonBudget::new(n_a, n_b, r_a, r_b).unwrap();
        let closed = receiver_covariance(&budget, &params);
        let prop = receiver_covariance_by_propagation(&params, &budget).unwrap();
        let scale = closed.v11.abs().max(closed.v22.abs());
        for (x, y) in [
            (closed.v11, prop.v11),
            (closed.v22, prop.v22),
            (closed.v12, prop.v12),
        ] {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    report(
        1,
        "oracle equivalence",
        worst <= TOL,
        format!("max relative deviation {worst:.3e} over 1000 draws (tol {TOL:e})"),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_02_monte_carlo_heterodyne() {
    const SAMPLES: usize = 1_000_000;
    const SIGMAS: f64 = 3.0;
    let start = Instant::now();
    let params = balanced();
    let budget = PhotonBudget::coherent(1.0, 1000.0);
    let mc = mc_heterodyne_rate(&params, &budget, SAMPLES, 7).unwrap();
    let again = mc_heterodyne_rate(&params, &budget, SAMPLES, 7).unwrap();
    let closed = heterodyne_sum_rate(&params, &budget).unwrap();
    let z = (mc.rate - closed).abs() / mc.std_error;
    report(
        2,
        "monte-carlo heterodyne",
        z <= SIGMAS && mc == again,
        format!(
            "mc {:.6} +- {:.2e} vs closed form {closed:.6}, |z| = {z:.2} (limit {SIGMAS}), deterministic {}",
            mc.rate,
            mc.std_error,
            mc == again
        ),
        start.elapsed(),
        30.0,
    );
}

#[test]
fn criterion_03_lemma1() {
    let start = Instant::now();
    let probe = lemma1_probe(&lemma_channel(), User::Alice, &lemma1_schedule()).unwrap();
    report(
        3,
        "lemma 1 heterodyne/outer-bound ratio",
        probe.verdict == Verdict::Converged,
        format!(
            "ratio {:.6} at n_A = {:e}, gap {:.4} (tol {}), monotone {}",
            probe.ratios.last().unwrap(),
            probe.schedule.last().unwrap(),
            probe.gap,
            probe.tolerances.final_gap,
            probe.monotone
        ),
        start.elapsed(),
        1.0,
    );
}

#[test]
fn criterion_04_homodyne_half() {
    let start = Instant::now();
    let probe = homodyne_probe(&lemma_channel(), &homodyne_schedule()).unwrap();
    report(
        4,
        "homodyne half limit",
        probe.verdict == Verdict::Converged,
        format!(
            "ratio {:.6} at n_A = n_B = {:e}, gap to 0.5 {:.4} (tol {}), optimal r_A {:.4}",
            probe.ratios.last().unwrap(),
            probe.schedule.last().unwrap(),
            probe.gap,
            probe.tolerances.final_gap,
            probe.arg_max.last().unwrap()
        ),
        start.elapsed(),
        5.0,
    );
}

/// `N_A - |V1 - V2|` with Alice coherent (`a n` photons) and Bob squeezing
/// `b n`, written out directly.
fn constraint(eta1: f64, eta2: f64, a: f64, b: f64, n: f64) -> f64 {
    let r = (b * n).sqrt().asinh();
    eta1 * eta2 * a * n - (1.0 - eta1) * eta2 * (2.0 * r).sinh() / 2.0
}

fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_05_lemma2() {
    const ROOT_TOL: f64 = 1e-9;
    let start = Instant::now();
    let params = lemma_channel();
    let schedule = lemma2_schedule();
    let c1 = lemma2_case1(&params, &schedule).unwrap();
    let c2 = lemma2_case2(&params, &schedule).unwrap();
    let c3 = lemma2_case3(&params, &CaseThreeConfig::default(), &schedule).unwrap();
    let branch2 = c2.checks.iter().all(|c| c.passed);

    let mut worst_root = 0.0f64;
    for &n in &schedule {
        let b = b_max_a1(1.0, params.eta1(), n).unwrap();
        let f = |b: f64| constraint(params.eta1(), params.eta2(), 1.0, b, n);
        let mut hi = 1.0;
        while f(hi) > 0.0 {
            hi *= 2.0;
        }
        let root = bisect_root(f, 0.0, hi);
        worst_root = worst_root.max((root - b).abs() / root);
    }

    let ok = c1.verdict == Verdict::Converged
        && c2.verdict == Verdict::Converged
        && c3.verdict == Verdict::Converged
        && branch2
        && worst_root <= ROOT_TOL;
    report(
        5,
        "lemma 2 cases",
        ok,
        format!(
            "gaps at n = {:e}: case1 {:.2e}, case2 {:.2e}, case3 branch1 {:.2e} branch2 {:.2e} (tol {}); \
             case2 branch2 active {branch2}; b_max root deviation {worst_root:.2e} (tol {ROOT_TOL:e})",
            schedule.last().unwrap(),
            c1.gap,
            c2.gap,
            c3.branch1.gap,
            c3.branch2.gap,
            c1.tolerances.final_gap
        ),
        start.elapsed(),
        10.0,
    );
}

#[test]
fn criterion_06_squeezing_advantage() {
    let start = Instant::now();
    let params = noisy_lossy();
    let surface = squeeze_surface(&params, 4.0, 8.0, DEFAULT_GRID, &ALL_SIGNS).unwrap();
    let baseline = surface.baseline().r_max_a;
    let best = surface
        .cells
        .iter()
        .filter(|c| c.p_b > 0.0)
        .max_by(|x, y| x.r_max_a.total_cmp(&y.r_max_a))
        .unwrap();
    let margin = best.r_max_a - baseline;
    report(
        6,
        "squeezing advantage",
        margin > 0.0,
        format!(
            "best R_maxA {:.6} at p_A={:.4} p_B={:.4} signs ({},{}) vs coherent {baseline:.6}, margin {margin:.6}",
            best.r_max_a, best.p_a, best.p_b, best.sign_a, best.sign_b
        ),
        start.elapsed(),
        5.0,
    );
}

#[test]
fn criterion_07_global_constraint() {
    let start = Instant::now();
    let scan = global_constraint_scan(&noisy_lossy(), 12.0, DEFAULT_SPLITS, DEFAULT_GRID).unwrap();
    let ok = scan.sum.is_coherent() && scan.alice.s == 1.0 && scan.alice.p_a == 0.0;
    report(
        7,
        "global-constraint optimality",
        ok,
        format!(
            "sum argmax s={} p=({},{}) value {:.6}; Alice argmax s={} p_A={} value {:.6}",
            scan.sum.s,
            scan.sum.p_a,
            scan.sum.p_b,
            scan.sum.value,
            scan.alice.s,
            scan.alice.p_a,
            scan.alice.value
        ),
        start.elapsed(),
        10.0,
    );
}

#[test]
fn criterion_08_region_sanity() {
    const TOL: f64 = 1e-12;
    let start = Instant::now();
    let params = balanced();
    let report_ = build_region(
        &params,
        1.0,
        1000.0,
        &[Encoding::COHERENT, Encoding { r_a: 0.0, r_b: 3.0 }],
        true,
    )
    .unwrap();
    let coherent = &report_.pentagons[0].pentagon;
    let coherent_ra = coherent.vertices.iter().fold(0.0f64, |m, p| m.max(p.r_a));
    let extends = report_.region.max_r_a() > coherent_ra;
    let boxed = report_
        .region
        .hull
        .iter()
        .all(|p| report_.outer_box.contains(*p, TOL));
    let receivers_inside = report_.receivers.iter().all(|r| {
        r.pentagon
            .vertices
            .iter()
            .all(|p| coherent.contains(*p, TOL))
    });
    report(
        8,
        "region sanity",
        extends && boxed && receivers_inside,
        format!(
            "hull max R_A {:.6} vs coherent {coherent_ra:.6}; inside outer box {boxed}; receiver pentagons inside coherent {receivers_inside}",
            report_.region.max_r_a()
        ),
        start.elapsed(),
        2.0,
    );
}

#[test]
fn criterion_09_piecewise_continuity() {
    const TOL: f64 = 1e-9;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut found = 0;
    while found < 10 {
        let params = ChannelParams::new(
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.0..5.0),
        )
        .unwrap();
        let n_a: f64 = rng.gen_range(0.1..10.0);
        let n_b: f64 = rng.gen_range(0.1..10.0);
        let r_b = rng.gen_range(-1.0..1.0) * n_b.sqrt().asinh();
        let r_max = n_a.sqrt().asinh();
        let h = |r_a: f64| {
            let budget = PhotonBudget::new(n_a, n_b, r_a, r_b).unwrap();
            let (n, _) = received_photons(&budget, &params).unwrap();
            n - branch_threshold(&receiver_covariance(&budget, &params))
        };
        // look for a sign change of N_A - |V1 - V2| along r_A
        let grid: Vec<f64> = (0..=200)
            .map(|i| -r_max + 2.0 * r_max * i as f64 / 200.0)
            .collect();
        let Some(w) = grid.windows(2).find(|w| (h(w[0]) > 0.0) != (h(w[1]) > 0.0)) else {
            continue;
        };
        let (mut lo, mut hi) = (w[0], w[1]);
        let up = h(lo) > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (h(mid) > 0.0) == up {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let budget = PhotonBudget::new(n_a, n_b, 0.5 * (lo + hi), r_b).unwrap();
        let (n, _) = received_photons(&budget, &params).unwrap();
        let v = receiver_covariance(&budget, &params);
        worst = worst.max((branch1_rate(n, &v) - branch2_rate(n, &v)).abs());
        found += 1;
    }
    report(
        9,
        "piecewise continuity",
        worst < TOL,
        format!("max |Branch1 - Branch2| at crossing {worst:.3e} bits over 10 draws (tol {TOL:e})"),
        start.elapsed(),
        1.0,
    );
}

#[test]
fn criterion_10_receiver_gap() {
    let start = Instant::now();
    let probes = receiver_gap_at_low_power(&lemma_channel(), &receiver_gap_schedule()).unwrap();
    let at = |probe: &bosonic_mac::asymptotics::LimitProbe, n: f64| {
        let i = probe
            .schedule
            .iter()
            .position(|&x| (x - n).abs() <= 1e-3 * n)
            .unwrap();
        probe.ratios[i]
    };
    let het = &probes[0];
    let hom = &probes[1];
    let ceiling = het.tolerances.final_gap;
    let below = at(het, 1e-6) < ceiling && at(hom, 1e-6) < ceiling;
    let decreasing = het.monotone && hom.monotone;
    report(
        10,
        "low-power receiver gap",
        below && decreasing,
        format!(
            "at n = 1e-6: heterodyne {:.5}, homodyne {:.5} (limit {ceiling}); deepest {:.5}/{:.5}; decreasing {decreasing}",
            at(het, 1e-6),
            at(hom, 1e-6),
            het.ratios.last().unwrap(),
            hom.ratios.last().unwrap()
        ),
        start.elapsed(),
        1.0,
    );
}

#[test]
fn noisy_lossy_baseline_matches_rates() {
    // consistency check used by the surface criterion
    let (a, _) = individual_rate(
        &noisy_lossy(),
        &PhotonBudget::coherent(4.0, 8.0),
        User::Alice,
    )
    .unwrap();
    assert!((a - 0.906_728_865_201_457_6).abs() < 1e-12);
}
