use bosonic_mac::asymptotics::{
    b_max_a1, case2_small_signal_ratio, case3_kappa_deviation, homodyne_asymptotic_ratio,
    lemma1_ratio, lemma2_case1_ratio, lemma2_case2_ratio, receiver_gap_at_low_power,
    receiver_gap_schedule, CaseThreeConfig,
};
use bosonic_mac::gaussian::{receiver_covariance, squeezing_cost};
use bosonic_mac::network::receiver_covariance_by_propagation;
use bosonic_mac::rates::{individual_rate, outer_bound, rate_bundle, sum_rate};
use bosonic_mac::region::{
    build_region, optimize_squeezing, pentagon_at, Encoding, Objective, RatePoint, RateRegion,
    ALL_SIGNS,
};
use bosonic_mac::{Branch, ChannelParams, PhotonBudget, User};
use proptest::prelude::*;

// mpmath, 40 digits
const LEMMA1_AT_1E8: f64 = 0.918_843_460_854_033_1;
const B_MAX_EXAMPLE: f64 = 0.099_019_513_592_784_83;
const CASE2_SMALL_SIGNAL_NB1: f64 = 1.163_923_361_899_993_1;
const CASE2_RATIO_NA_1E8_NB1: f64 = 1.163_923_356_947_400_7;
const GAP_HET_1E9: f64 = 0.347_526_993_084_825_05;
const GAP_HOM_1E9: f64 = 0.695_053_985_778_682_2;

fn lemma_channel() -> ChannelParams {
    ChannelParams::new(0.5, 0.9, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn frozen_asymptotic_values() {
    let p = lemma_channel();
    assert!(rel(lemma1_ratio(1e8, &p, User::Alice).unwrap(), LEMMA1_AT_1E8) < 1e-12);
    assert!(rel(b_max_a1(1.0, 0.5, 0.1).unwrap(), B_MAX_EXAMPLE) < 1e-14);
    assert!(
        rel(
            case2_small_signal_ratio(&p, 1.0).unwrap(),
            CASE2_SMALL_SIGNAL_NB1
        ) < 1e-12
    );
    let (r, branch) = lemma2_case2_ratio(&p, 1e-8, 1.0).unwrap();
    assert_eq!(branch, Branch::Branch2);
    assert!(rel(r, CASE2_RATIO_NA_1E8_NB1) < 1e-7);
    let probes = receiver_gap_at_low_power(&p, &receiver_gap_schedule()).unwrap();
    assert!(rel(*probes[0].ratios.last().unwrap(), GAP_HET_1E9) < 1e-7);
    assert!(rel(*probes[1].ratios.last().unwrap(), GAP_HOM_1E9) < 1e-7);
}

#[test]
fn case1_examples() {
    let p = lemma_channel();
    let (r, _) = lemma2_case1_ratio(&p, 1e-3, 1e-6).unwrap();
    assert!((r - 1.0).abs() < 1e-3);
    let (r, _) = lemma2_case1_ratio(&p, 1e-8, 1e-8).unwrap();
    assert!((r - 1.0).abs() < 1e-6);
}

#[test]
fn case2_examples() {
    let p = lemma_channel();
    let (r, branch) = lemma2_case2_ratio(&p, 1e-8, 1.0).unwrap();
    assert_eq!(branch, Branch::Branch2);
    assert!((r - case2_small_signal_ratio(&p, 1.0).unwrap()).abs() < 0.05);
    let (r, _) = lemma2_case2_ratio(&p, 1e-11, 1e-8).unwrap();
    assert!((r - 1.0).abs() < 1e-3);
    // noise-dominated
    let noisy = ChannelParams::new(0.5, 0.9, 1e3).unwrap();
    let (r, _) = lemma2_case2_ratio(&noisy, 1e-9, 1e-6).unwrap();
    assert!((r - 1.0).abs() < 1e-3);
}

#[test]
fn case3_squeezing_is_immaterial_at_low_power() {
    let p = lemma_channel();
    for kappa in [0.0, 0.5, 1.0] {
        let c = CaseThreeConfig::new(1.0, 1.0, kappa, 0.5).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1e-4, 1e-5, 1e-6, 1e-7] {
            let d = case3_kappa_deviation(&p, &c, n).unwrap();
            assert!(d < 0.01, "kappa {kappa} n {n}: {d}");
            assert!(d <= prev + 1e-15);
            prev = d;
        }
    }
}

#[test]
fn lemma1_examples() {
    let p = lemma_channel();
    assert!(lemma1_ratio(1e-3, &p, User::Alice).unwrap() < 1.0);
    assert!(lemma1_ratio(1e-3, &p, User::Bob).unwrap() < 1.0);
    let ideal = ChannelParams::new(1.0, 1.0, 0.0).unwrap();
    for n in [1e-2, 1.0, 1e4] {
        assert!(lemma1_ratio(n, &ideal, User::Alice).unwrap() < 1.0);
    }
}

#[test]
fn homodyne_pure_loss_contrast() {
    let pure_loss = ChannelParams::new(0.5, 1.0, 0.0).unwrap();
    let pts = homodyne_asymptotic_ratio(1e8, &pure_loss, &[1e8]).unwrap();
    assert!(pts[0].ratio > 0.9, "{}", pts[0].ratio);
}

#[test]
fn mirror_symmetry_of_squeezing_optima() {
    let p = ChannelParams::new(0.5, 0.9, 0.0).unwrap();
    let a = optimize_squeezing(&p, 3.0, 3.0, Objective::MaxRA, &ALL_SIGNS, 17).unwrap();
    let b = optimize_squeezing(&p, 3.0, 3.0, Objective::MaxRB, &ALL_SIGNS, 17).unwrap();
    assert!((a.value - b.value).abs() < 1e-9);
    assert!((a.p_a - b.p_b).abs() < 1e-5 && (a.p_b - b.p_a).abs() < 1e-5);
}

#[test]
fn squeezing_search_beats_coherent_baseline() {
    let p = ChannelParams::new(0.2, 0.9, 4.0).unwrap();
    let opt = optimize_squeezing(&p, 4.0, 8.0, Objective::MaxRA, &ALL_SIGNS, 33).unwrap();
    assert!(opt.p_b > 0.0);
    assert!(opt.margin() > 0.05);
}

fn channel() -> impl Strategy<Value = ChannelParams> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..10.0f64)
        .prop_map(|(a, b, n)| ChannelParams::new(a, b, n).unwrap())
}

/// Budget with squeezing that fits: `n = sinh²(r) + displacement`.
fn budget() -> impl Strategy<Value = PhotonBudget> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.0..20.0f64, 0.0..20.0f64).prop_map(|(ra, rb, da, db)| {
        PhotonBudget::new(squeezing_cost(ra) + da, squeezing_cost(rb) + db, ra, rb).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn propagation_matches_closed_form(p in channel(), b in budget()) {
        let closed = receiver_covariance(&b, &p);
        let prop = receiver_covariance_by_propagation(&p, &b).unwrap();
        let scale = closed.v11.max(closed.v22);
        prop_assert!((closed.v11 - prop.v11).abs() <= 1e-10 * scale);
        prop_assert!((closed.v22 - prop.v22).abs() <= 1e-10 * scale);
        prop_assert!((closed.v12 - prop.v12).abs() <= 1e-10 * scale);
    }

    #[test]
    fn rates_nonnegative_and_sum_dominates(p in channel(), b in budget()) {
        let r = rate_bundle(&p, &b).unwrap();
        prop_assert!(r.r_max_a >= 0.0 && r.r_max_b >= 0.0);
        prop_assert!(r.r_max_ab + 1e-12 >= r.r_max_a.max(r.r_max_b));
    }

    #[test]
    fn pentagon_inside_outer_box(p in channel(), b in budget()) {
        let pent = pentagon_at(&p, &b).unwrap();
        let ub_a = outer_bound(&p, &b, User::Alice);
        let ub_b = outer_bound(&p, &b, User::Bob);
        for v in &pent.vertices {
            prop_assert!(v.r_a <= ub_a * (1.0 + 1e-12) + 1e-12);
            prop_assert!(v.r_b <= ub_b * (1.0 + 1e-12) + 1e-12);
            prop_assert!(v.r_a + v.r_b <= pent.sum_max + 1e-12);
        }
    }

    #[test]
    fn coherent_hull_inside_outer_box(
        p in channel(), n_a in 0.0..50.0f64, n_b in 0.0..50.0f64, r in 0.0..1.0f64,
    ) {
        let r_b = r * n_b.sqrt().asinh();
        let report = build_region(&p, n_a, n_b, &[Encoding::COHERENT, Encoding { r_a: 0.0, r_b }], false).unwrap();
        for v in &report.region.hull {
            prop_assert!(report.outer_box.contains(*v, 1e-12 * (1.0 + v.r_a.max(v.r_b))));
        }
    }

    #[test]
    fn hull_idempotent_and_time_sharing(p in channel(), b in budget(), t in 0.0..=1.0f64) {
        let report = build_region(&p, b.n_a, b.n_b, &[Encoding::COHERENT, Encoding { r_a: b.r_a, r_b: b.r_b }], false).unwrap();
        let again = RateRegion::from_points(&report.region.hull, report.region.provenance.clone());
        prop_assert_eq!(&again.hull, &report.region.hull);
        let pts: Vec<RatePoint> = report.pentagons.iter().flat_map(|x| x.pentagon.vertices.clone()).collect();
        for (i, a) in pts.iter().enumerate() {
            let c = pts[(i * 7 + 3) % pts.len()];
            let mix = RatePoint::new(t * a.r_a + (1.0 - t) * c.r_a, t * a.r_b + (1.0 - t) * c.r_b);
            prop_assert!(report.region.contains(mix, 1e-9));
        }
    }

    #[test]
    fn user_swap_symmetry(p in channel(), b in budget()) {
        let swapped = PhotonBudget::new(b.n_b, b.n_a, b.r_b, b.r_a).unwrap();
        let (ra, _) = individual_rate(&p, &b, User::Alice).unwrap();
        let (rb, _) = individual_rate(&p.swapped(), &swapped, User::Bob).unwrap();
        prop_assert!((ra - rb).abs() <= 1e-9 * ra.max(1.0));
        let (s1, _) = sum_rate(&p, &b).unwrap();
        let (s2, _) = sum_rate(&p.swapped(), &swapped).unwrap();
        prop_assert!((s1 - s2).abs() <= 1e-9 * s1.max(1.0));
    }
}
