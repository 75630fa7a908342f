//! Rate regions: per-encoding pentagons, their convex closure, receiver
//! pentagons, squeezing surfaces and squeezing searches.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{ChannelParams, PhotonBudget, Sign, SqueezeFractions};
use crate::optimize::maximize_on_unit_square;
use crate::rates::{
    individual_rate, outer_bound, rate_bundle, receiver_individual_rate, receiver_sum_rate,
    sum_rate, Receiver, User,
};

/// Default surface and search grid (per axis).
pub const DEFAULT_GRID: usize = 33;
/// Default number of budget splits in the global-constraint scan.
pub const DEFAULT_SPLITS: usize = 101;
pub const REFINE_STEP_TOL: f64 = 1e-6;

/// The four squeezing orientation pairs, in scan order.
pub const ALL_SIGNS: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r_a: f64,
    pub r_b: f64,
}

impl RatePoint {
    pub fn new(r_a: f64, r_b: f64) -> Self {
        RatePoint { r_a, r_b }
    }

    pub const ORIGIN: RatePoint = RatePoint { r_a: 0.0, r_b: 0.0 };
}

/// Region cut out by two individual-rate constraints and one sum-rate
/// constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pentagon {
    pub r_a_max: f64,
    pub r_b_max: f64,
    pub sum_max: f64,
    /// Counter-clockwise from the origin, degenerate edges removed.
    pub vertices: Vec<RatePoint>,
}

impl Pentagon {
    pub fn from_bounds(r_a_max: f64, r_b_max: f64, sum_max: f64) -> Self {
        let ra = r_a_max.max(0.0).min(sum_max.max(0.0));
        let rb = r_b_max.max(0.0).min(sum_max.max(0.0));
        let sum = sum_max.max(0.0);
        let raw = [
            RatePoint::ORIGIN,
            RatePoint::new(ra, 0.0),
            RatePoint::new(ra, rb.min(sum - ra)),
            RatePoint::new(ra.min(sum - rb), rb),
            RatePoint::new(0.0, rb),
        ];
        let mut vertices: Vec<RatePoint> = Vec::with_capacity(5);
        for p in raw {
            if vertices.last() != Some(&p) && !(vertices.len() > 1 && vertices[0] == p) {
                vertices.push(p);
            }
        }
        Pentagon {
            r_a_max,
            r_b_max,
            sum_max,
            vertices,
        }
    }

    pub fn contains(&self, p: RatePoint, tol: f64) -> bool {
        p.r_a >= -tol
            && p.r_b >= -tol
            && p.r_a <= self.r_a_max + tol
            && p.r_b <= self.r_b_max + tol
            && p.r_a + p.r_b <= self.sum_max + tol
    }
}

/// Pentagon of the Gaussian-input maximum rates for one encoding.
pub fn pentagon_at(params: &ChannelParams, budget: &PhotonBudget) -> Result<Pentagon> {
    let bundle = rate_bundle(params, budget)?;
    Ok(Pentagon::from_bounds(
        bundle.r_max_a,
        bundle.r_max_b,
        bundle.r_max_ab,
    ))
}

/// Pentagon induced by a structured receiver's single-user and sum rates.
pub fn receiver_pentagon(
    params: &ChannelParams,
    budget: &PhotonBudget,
    receiver: Receiver,
) -> Result<Pentagon> {
    Ok(Pentagon::from_bounds(
        receiver_individual_rate(params, budget, receiver, User::Alice)?,
        receiver_individual_rate(params, budget, receiver, User::Bob)?,
        receiver_sum_rate(params, budget, receiver)?,
    ))
}

fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.r_a - o.r_a) * (b.r_b - o.r_b) - (a.r_b - o.r_b) * (b.r_a - o.r_a)
}

/// Convex hull by monotone chain, counter-clockwise starting from the
/// lowest-leftmost point. Collinear points are dropped.
pub fn convex_hull(points: &[RatePoint]) -> Vec<RatePoint> {
    let mut pts: Vec<RatePoint> = points
        .iter()
        .copied()
        .filter(|p| p.r_a.is_finite() && p.r_b.is_finite())
        .collect();
    pts.sort_by(|a, b| a.r_a.total_cmp(&b.r_a).then(a.r_b.total_cmp(&b.r_b)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<RatePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Squeezing parameters of one encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Encoding {
    pub r_a: f64,
    pub r_b: f64,
}

impl Encoding {
    pub const COHERENT: Encoding = Encoding { r_a: 0.0, r_b: 0.0 };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub hull: Vec<RatePoint>,
    pub provenance: Vec<Encoding>,
}

impl RateRegion {
    /// Convex closure of `points` together with the origin.
    pub fn from_points(points: &[RatePoint], provenance: Vec<Encoding>) -> Self {
        let mut all = points.to_vec();
        all.push(RatePoint::ORIGIN);
        RateRegion {
            hull: convex_hull(&all),
            provenance,
        }
    }

    pub fn contains(&self, p: RatePoint, tol: f64) -> bool {
        match self.hull.len() {
            0 => false,
            1 => (p.r_a - self.hull[0].r_a).abs() <= tol && (p.r_b - self.hull[0].r_b).abs() <= tol,
            n => (0..n).all(|i| {
                let a = self.hull[i];
                let b = self.hull[(i + 1) % n];
                let len = ((b.r_a - a.r_a).powi(2) + (b.r_b - a.r_b).powi(2)).sqrt();
                cross(a, b, p) >= -tol * len.max(1.0)
            }),
        }
    }

    pub fn max_r_a(&self) -> f64 {
        self.hull.iter().fold(0.0, |m, p| m.max(p.r_a))
    }

    pub fn max_r_b(&self) -> f64 {
        self.hull.iter().fold(0.0, |m, p| m.max(p.r_b))
    }
}

/// Interference-free ceilings for each user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterBox {
    pub r_ub_a: f64,
    pub r_ub_b: f64,
}

impl OuterBox {
    pub fn contains(&self, p: RatePoint, tol: f64) -> bool {
        p.r_a <= self.r_ub_a + tol && p.r_b <= self.r_ub_b + tol && p.r_a >= -tol && p.r_b >= -tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPentagon {
    pub label: String,
    pub encoding: Encoding,
    pub pentagon: Pentagon,
}

pub const RECEIVER_CONSTRUCTION: &str =
    "receiver regions are pentagons built from the receiver's single-user and sum rates with coherent inputs";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub params: ChannelParams,
    pub n_a: f64,
    pub n_b: f64,
    pub region: RateRegion,
    pub pentagons: Vec<LabeledPentagon>,
    pub receivers: Vec<LabeledPentagon>,
    pub outer_box: OuterBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver_construction: Option<String>,
}

fn encoding_label(e: &Encoding) -> String {
    if *e == Encoding::COHERENT {
        "coherent".to_string()
    } else {
        format!("squeezed r_A={} r_B={}", e.r_a, e.r_b)
    }
}

/// Convex closure of the pentagons of `encodings`, plus optional coherent
/// receiver pentagons and the outer-bound box.
pub fn build_region(
    params: &ChannelParams,
    n_a: f64,
    n_b: f64,
    encodings: &[Encoding],
    with_receivers: bool,
) -> Result<RegionReport> {
    if encodings.is_empty() {
        return Err(Error::EmptyEncodings);
    }
    let coherent = PhotonBudget::new(n_a, n_b, 0.0, 0.0)?;
    let mut pentagons = Vec::with_capacity(encodings.len());
    let mut points = Vec::new();
    for e in encodings {
        let budget = PhotonBudget::new(n_a, n_b, e.r_a, e.r_b)?;
        let pentagon = pentagon_at(params, &budget)?;
        points.extend(pentagon.vertices.iter().copied());
        pentagons.push(LabeledPentagon {
            label: encoding_label(e),
            encoding: *e,
            pentagon,
        });
    }
    let receivers = if with_receivers {
        [
            (Receiver::Heterodyne, "heterodyne"),
            (Receiver::Homodyne, "homodyne"),
        ]
        .iter()
        .map(|&(rx, label)| {
            Ok(LabeledPentagon {
                label: label.to_string(),
                encoding: Encoding::COHERENT,
                pentagon: receiver_pentagon(params, &coherent, rx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(RegionReport {
        params: *params,
        n_a,
        n_b,
        region: RateRegion::from_points(&points, encodings.to_vec()),
        pentagons,
        receivers,
        outer_box: OuterBox {
            r_ub_a: outer_bound(params, &coherent, User::Alice),
            r_ub_b: outer_bound(params, &coherent, User::Bob),
        },
        receiver_construction: with_receivers.then(|| RECEIVER_CONSTRUCTION.to_string()),
    })
}

// ---------------------------------------------------------------------------
// Squeezing surface

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub p_a: f64,
    pub p_b: f64,
    pub sign_a: Sign,
    pub sign_b: Sign,
    pub r_max_a: f64,
    pub r_max_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSurface {
    pub params: ChannelParams,
    pub n_a: f64,
    pub n_b: f64,
    pub grid_n: usize,
    pub signs: Vec<(Sign, Sign)>,
    /// Sign layer outermost, then `p_A`, then `p_B`.
    pub cells: Vec<SurfaceCell>,
}

pub const SURFACE_CSV_HEADER: &str = "p_A,p_B,sign_A,sign_B,r_max_a,r_max_b";

/// Seventeen significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid_value(i: usize, grid_n: usize) -> f64 {
    if i + 1 == grid_n {
        1.0
    } else {
        i as f64 / (grid_n - 1) as f64
    }
}

impl SqueezeSurface {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Per-`(p_A, p_B)` maximum over the sign layers, in `p_A`-major order.
    pub fn envelope(&self) -> Vec<SurfaceCell> {
        let per_layer = self.grid_n * self.grid_n;
        let mut out: Vec<SurfaceCell> = self.cells[..per_layer.min(self.cells.len())].to_vec();
        for layer in self.cells.chunks(per_layer).skip(1) {
            for (best, cell) in out.iter_mut().zip(layer) {
                if cell.r_max_a > best.r_max_a {
                    best.r_max_a = cell.r_max_a;
                }
                if cell.r_max_b > best.r_max_b {
                    best.r_max_b = cell.r_max_b;
                }
            }
        }
        out
    }

    /// Coherent (`p_A = p_B = 0`) cell of the first sign layer.
    pub fn baseline(&self) -> SurfaceCell {
        self.cells[0]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.cells.len() * 96);
        s.push_str(SURFACE_CSV_HEADER);
        s.push('\n');
        for c in &self.cells {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                fmt17(c.p_a),
                fmt17(c.p_b),
                c.sign_a,
                c.sign_b,
                fmt17(c.r_max_a),
                fmt17(c.r_max_b)
            );
        }
        s
    }
}

fn user_rate(params: &ChannelParams, budget: &PhotonBudget, user: User) -> Result<f64> {
    individual_rate(params, budget, user).map(|(r, _)| r)
}

/// Individual rates on a uniform grid of squeezing fractions, one layer per
/// sign pair.
pub fn squeeze_surface(
    params: &ChannelParams,
    n_a: f64,
    n_b: f64,
    grid_n: usize,
    signs: &[(Sign, Sign)],
) -> Result<SqueezeSurface> {
    if grid_n < 2 {
        return Err(invalid("grid", format!("must be at least 2, got {grid_n}")));
    }
    if signs.is_empty() {
        return Err(invalid("signs", "at least one sign pair is required"));
    }
    PhotonBudget::new(n_a, n_b, 0.0, 0.0)?;
    let mut cells = Vec::with_capacity(signs.len() * grid_n * grid_n);
    for &(sign_a, sign_b) in signs {
        for i in 0..grid_n {
            for j in 0..grid_n {
                let (p_a, p_b) = (grid_value(i, grid_n), grid_value(j, grid_n));
                let budget = SqueezeFractions::new(p_a, p_b, sign_a, sign_b)?.to_budget(n_a, n_b);
                cells.push(SurfaceCell {
                    p_a,
                    p_b,
                    sign_a,
                    sign_b,
                    r_max_a: user_rate(params, &budget, User::Alice)?,
                    r_max_b: user_rate(params, &budget, User::Bob)?,
                });
            }
        }
    }
    Ok(SqueezeSurface {
        params: *params,
        n_a,
        n_b,
        grid_n,
        signs: signs.to_vec(),
        cells,
    })
}

// ---------------------------------------------------------------------------
// Squeezing search

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MaxRA,
    MaxRB,
    MaxSum,
}

impl Objective {
    fn evaluate(self, params: &ChannelParams, budget: &PhotonBudget) -> Result<f64> {
        match self {
            Objective::MaxRA => individual_rate(params, budget, User::Alice).map(|r| r.0),
            Objective::MaxRB => individual_rate(params, budget, User::Bob).map(|r| r.0),
            Objective::MaxSum => sum_rate(params, budget).map(|r| r.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeOptimum {
    pub objective: Objective,
    pub p_a: f64,
    pub p_b: f64,
    pub sign_a: Sign,
    pub sign_b: Sign,
    pub value: f64,
    /// Objective with coherent inputs.
    pub baseline: f64,
}

impl SqueezeOptimum {
    pub fn margin(&self) -> f64 {
        self.value - self.baseline
    }
}

/// Grid scan plus coordinate-wise golden refinement over the squeezing
/// fractions, for every sign pair in `signs`. The coherent encoding is always
/// a candidate.
pub fn optimize_squeezing(
    params: &ChannelParams,
    n_a: f64,
    n_b: f64,
    objective: Objective,
    signs: &[(Sign, Sign)],
    grid_n: usize,
) -> Result<SqueezeOptimum> {
    if grid_n < 2 {
        return Err(invalid("grid", format!("must be at least 2, got {grid_n}")));
    }
    let coherent = PhotonBudget::new(n_a, n_b, 0.0, 0.0)?;
    let baseline = objective.evaluate(params, &coherent)?;
    let mut best = SqueezeOptimum {
        objective,
        p_a: 0.0,
        p_b: 0.0,
        sign_a: Sign::Plus,
        sign_b: Sign::Plus,
        value: baseline,
        baseline,
    };
    for &(sign_a, sign_b) in signs {
        let f = |p_a: f64, p_b: f64| {
            let budget = SqueezeFractions {
                p_a,
                p_b,
                sign_a,
                sign_b,
            }
            .to_budget(n_a, n_b);
            objective
                .evaluate(params, &budget)
                .unwrap_or(f64::NEG_INFINITY)
        };
        let opt = maximize_on_unit_square(f, grid_n, REFINE_STEP_TOL);
        if opt.value > best.value {
            best.p_a = opt.x;
            best.p_b = opt.y;
            best.sign_a = sign_a;
            best.sign_b = sign_b;
            best.value = opt.value;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Global photon constraint

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanArgmax {
    /// Alice's share of the global budget.
    pub s: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub sign_a: Sign,
    pub sign_b: Sign,
    pub value: f64,
}

impl ScanArgmax {
    pub fn is_coherent(&self) -> bool {
        self.p_a == 0.0 && self.p_b == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalScanReport {
    pub n_s: f64,
    pub splits: usize,
    pub grid_n: usize,
    pub alice: ScanArgmax,
    pub bob: ScanArgmax,
    pub sum: ScanArgmax,
}

/// Exhaustive scan over the split `n_A = s n_S`, `n_B = (1-s) n_S` and the
/// squeezing fractions. Ties keep the first cell in scan order.
pub fn global_constraint_scan(
    params: &ChannelParams,
    n_s: f64,
    splits: usize,
    grid_n: usize,
) -> Result<GlobalScanReport> {
    if !(n_s.is_finite() && n_s >= 0.0) {
        return Err(invalid("n_s", format!("must be non-negative, got {n_s}")));
    }
    if splits < 2 {
        return Err(invalid(
            "splits",
            format!("must be at least 2, got {splits}"),
        ));
    }
    if grid_n < 2 {
        return Err(invalid("grid", format!("must be at least 2, got {grid_n}")));
    }
    let empty = ScanArgmax {
        s: 0.0,
        p_a: 0.0,
        p_b: 0.0,
        sign_a: Sign::Plus,
        sign_b: Sign::Plus,
        value: f64::NEG_INFINITY,
    };
    let (mut alice, mut bob, mut sum) = (empty, empty, empty);
    for k in 0..splits {
        let s = grid_value(k, splits);
        let (n_a, n_b) = (s * n_s, (1.0 - s) * n_s);
        for &(sign_a, sign_b) in &ALL_SIGNS {
            for i in 0..grid_n {
                for j in 0..grid_n {
                    let (p_a, p_b) = (grid_value(i, grid_n), grid_value(j, grid_n));
                    let budget =
                        SqueezeFractions::new(p_a, p_b, sign_a, sign_b)?.to_budget(n_a, n_b);
                    let bundle = rate_bundle(params, &budget)?;
                    let cell = |value| ScanArgmax {
                        s,
                        p_a,
                        p_b,
                        sign_a,
                        sign_b,
                        value,
                    };
                    if bundle.r_max_a > alice.value {
                        alice = cell(bundle.r_max_a);
                    }
                    if bundle.r_max_b > bob.value {
                        bob = cell(bundle.r_max_b);
                    }
                    if bundle.r_max_ab > sum.value {
                        sum = cell(bundle.r_max_ab);
                    }
                }
            }
        }
    }
    Ok(GlobalScanReport {
        n_s,
        splits,
        grid_n,
        alice,
        bob,
        sum,
    })
}
