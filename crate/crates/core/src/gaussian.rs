//! Single-mode Gaussian primitives: the thermal entropy function, the photon
//! budget split between displacement and squeezing, and the closed-form
//! covariance of the receiver mode.
//!
//! Quadrature variances use the convention where vacuum has variance 1/4.
//! All entropies and rates are in bits.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Variance of each vacuum quadrature.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Negative entropy arguments down to this size are treated as rounding noise.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

const UNDERFLOW_CUTOFF: f64 = 1e-300;

/// Relative slack allowed when a squeezing cost is compared to its budget.
const BUDGET_SLACK: f64 = 1e-12;

/// Thermal-state entropy `g(x) = (1+x)log2(1+x) - x log2(x)` in bits.
pub fn g_entropy(x: f64) -> Result<f64> {
    if x.is_nan() || x < -NEGATIVE_TOLERANCE {
        return Err(Error::NegativeEntropyArgument(x));
    }
    Ok(g(x))
}

/// Clamping variant of [`g_entropy`] for arguments that are non-negative up
/// to rounding.
pub(crate) fn g(x: f64) -> f64 {
    if x < UNDERFLOW_CUTOFF {
        return 0.0;
    }
    ((1.0 + x) * x.ln_1p() - x * x.ln()) / LN_2
}

/// `g(base + delta) - g(base)` without cancellation when `delta` is small
/// compared to `base`.
///
/// Both arguments are clamped at zero.
pub fn g_increment(base: f64, delta: f64) -> f64 {
    let y = base.max(0.0);
    let d = delta.max(0.0);
    if d == 0.0 {
        return 0.0;
    }
    if y < UNDERFLOW_CUTOFF {
        return g(d);
    }
    // (1+y) ln(1 + d/(1+y)) - y ln(1 + d/y) + d ln(1 + 1/(y+d))
    let nats =
        (1.0 + y) * (d / (1.0 + y)).ln_1p() - y * (d / y).ln_1p() + d * (1.0 / (y + d)).ln_1p();
    (nats / LN_2).max(0.0)
}

/// Mean photon number consumed by squeezing with parameter `r`:
/// `cosh(2r)/2 - 1/2`, which equals `sinh²(r)`.
pub fn squeezing_cost(r: f64) -> f64 {
    0.5 * (2.0 * r).cosh() - 0.5
}

/// Squeezing parameter whose cost is exactly `photons`, with the given
/// orientation.
pub fn squeezing_for_cost(photons: f64, sign: Sign) -> f64 {
    sign.value() * photons.max(0.0).sqrt().asinh()
}

/// The physical channel: two cascaded beamsplitters and a thermal
/// environment feeding the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel")]
pub struct ChannelParams {
    eta1: f64,
    eta2: f64,
    n_thermal: f64,
}

#[derive(Deserialize)]
struct RawChannel {
    eta1: f64,
    eta2: f64,
    n_thermal: f64,
}

impl TryFrom<RawChannel> for ChannelParams {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        ChannelParams::new(raw.eta1, raw.eta2, raw.n_thermal)
    }
}

impl ChannelParams {
    pub fn new(eta1: f64, eta2: f64, n_thermal: f64) -> Result<Self> {
        check_unit("eta1", eta1)?;
        check_unit("eta2", eta2)?;
        check_non_negative("n_thermal", n_thermal)?;
        Ok(Self {
            eta1,
            eta2,
            n_thermal,
        })
    }

    /// Transmissivity of the splitter that combines Alice and Bob.
    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    /// Transmissivity of the splitter that couples the environment in.
    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn n_thermal(&self) -> f64 {
        self.n_thermal
    }

    /// Power weight of Alice's mode at the receiver.
    pub fn weight_a(&self) -> f64 {
        self.eta1 * self.eta2
    }

    /// Power weight of Bob's mode at the receiver.
    pub fn weight_b(&self) -> f64 {
        (1.0 - self.eta1) * self.eta2
    }

    /// Power weight of the environment mode at the receiver.
    pub fn weight_env(&self) -> f64 {
        1.0 - self.eta2
    }

    /// Thermal photons reaching the receiver, `(1-η2) n_T`.
    pub fn received_thermal(&self) -> f64 {
        self.weight_env() * self.n_thermal
    }

    /// The same channel with the users' roles exchanged (`η1 -> 1-η1`).
    pub fn swapped(&self) -> Self {
        Self {
            eta1: 1.0 - self.eta1,
            ..*self
        }
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(invalid(name, format!("{value} is outside [0, 1]")));
    }
    Ok(())
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(invalid(name, format!("{value} must be finite and >= 0")));
    }
    Ok(())
}

/// Per-user mean photon constraints and squeezing parameters.
///
/// Positive `r` inflates the first quadrature (`e^{2r}/4`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhotonBudget {
    pub n_a: f64,
    pub n_b: f64,
    pub r_a: f64,
    pub r_b: f64,
}

impl PhotonBudget {
    pub fn new(n_a: f64, n_b: f64, r_a: f64, r_b: f64) -> Result<Self> {
        let budget = Self { n_a, n_b, r_a, r_b };
        budget.validate()?;
        Ok(budget)
    }

    pub fn coherent(n_a: f64, n_b: f64) -> Self {
        Self {
            n_a,
            n_b,
            r_a: 0.0,
            r_b: 0.0,
        }
    }

    pub fn is_coherent(&self) -> bool {
        self.r_a == 0.0 && self.r_b == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        check_non_negative("n_a", self.n_a)?;
        check_non_negative("n_b", self.n_b)?;
        if !self.r_a.is_finite() {
            return Err(invalid("r_a", "must be finite"));
        }
        if !self.r_b.is_finite() {
            return Err(invalid("r_b", "must be finite"));
        }
        self.displacement_a()?;
        self.displacement_b()?;
        Ok(())
    }

    /// Photons Alice has left for displacement after paying for squeezing.
    pub fn displacement_a(&self) -> Result<f64> {
        displacement("Alice", self.n_a, self.r_a)
    }

    /// Photons Bob has left for displacement after paying for squeezing.
    pub fn displacement_b(&self) -> Result<f64> {
        displacement("Bob", self.n_b, self.r_b)
    }
}

fn displacement(user: &'static str, budget: f64, r: f64) -> Result<f64> {
    let cost = squeezing_cost(r);
    let left = budget - cost;
    if left < -(BUDGET_SLACK * budget.max(1.0)) || left.is_nan() {
        return Err(Error::SqueezingExceedsBudget { user, cost, budget });
    }
    Ok(left.max(0.0))
}

/// Orientation of the squeezed quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl From<Sign> for i8 {
    fn from(sign: Sign) -> i8 {
        match sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(value: i8) -> std::result::Result<Self, String> {
        match value {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i8::from(*self))
    }
}

/// Fractions of each user's photons spent on squeezing, `p = sinh²(r)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeFractions {
    pub p_a: f64,
    pub p_b: f64,
    pub sign_a: Sign,
    pub sign_b: Sign,
}

impl SqueezeFractions {
    pub fn new(p_a: f64, p_b: f64, sign_a: Sign, sign_b: Sign) -> Result<Self> {
        check_unit("p_a", p_a)?;
        check_unit("p_b", p_b)?;
        Ok(Self {
            p_a,
            p_b,
            sign_a,
            sign_b,
        })
    }

    pub fn coherent() -> Self {
        Self {
            p_a: 0.0,
            p_b: 0.0,
            sign_a: Sign::Plus,
            sign_b: Sign::Plus,
        }
    }

    /// Budget with `r = sign * asinh(sqrt(p n))` for each user.
    pub fn to_budget(&self, n_a: f64, n_b: f64) -> PhotonBudget {
        PhotonBudget {
            n_a,
            n_b,
            r_a: squeezing_for_cost(self.p_a * n_a, self.sign_a),
            r_b: squeezing_for_cost(self.p_b * n_b, self.sign_b),
        }
    }
}

/// Squeezing parameter when `p_displacement` of `n` photons go to
/// displacement and the rest to squeezing.
pub fn squeezing_for_displacement_fraction(n: f64, p_displacement: f64, sign: Sign) -> f64 {
    squeezing_for_cost((1.0 - p_displacement) * n, sign)
}

/// 2x2 quadrature covariance matrix of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovMatrix2 {
    pub v11: f64,
    pub v22: f64,
    pub v12: f64,
}

impl CovMatrix2 {
    pub fn diagonal(v11: f64, v22: f64) -> Self {
        Self { v11, v22, v12: 0.0 }
    }

    pub fn vacuum() -> Self {
        Self::diagonal(VACUUM_VARIANCE, VACUUM_VARIANCE)
    }

    pub fn thermal(n: f64) -> Self {
        let v = VACUUM_VARIANCE * (2.0 * n + 1.0);
        Self::diagonal(v, v)
    }

    pub fn squeezed(r: f64) -> Self {
        Self::diagonal(
            VACUUM_VARIANCE * (2.0 * r).exp(),
            VACUUM_VARIANCE * (-2.0 * r).exp(),
        )
    }

    pub fn det(&self) -> f64 {
        self.v11 * self.v22 - self.v12 * self.v12
    }

    pub fn trace(&self) -> f64 {
        self.v11 + self.v22
    }

    /// Positive variances and `det >= 1/16` up to relative rounding.
    pub fn is_physical(&self) -> bool {
        let floor = VACUUM_VARIANCE * VACUUM_VARIANCE;
        self.v11 > 0.0 && self.v22 > 0.0 && self.det() >= floor * (1.0 - 1e-12)
    }

    /// Mean photon number of a zero-mean state with this covariance.
    pub fn mean_photons(&self) -> f64 {
        self.trace() - 2.0 * VACUUM_VARIANCE
    }

    fn scaled(&self, w: f64) -> Self {
        Self {
            v11: w * self.v11,
            v22: w * self.v22,
            v12: w * self.v12,
        }
    }

    fn plus(&self, other: &Self) -> Self {
        Self {
            v11: self.v11 + other.v11,
            v22: self.v22 + other.v22,
            v12: self.v12 + other.v12,
        }
    }
}

/// Input covariances `(X, Y, Z)` of Alice, Bob and the environment.
pub fn input_covariances(
    budget: &PhotonBudget,
    params: &ChannelParams,
) -> (CovMatrix2, CovMatrix2, CovMatrix2) {
    (
        CovMatrix2::squeezed(budget.r_a),
        CovMatrix2::squeezed(budget.r_b),
        CovMatrix2::thermal(params.n_thermal),
    )
}

/// Covariance of the receiver mode, `η1η2 X + (1-η1)η2 Y + (1-η2) Z`.
pub fn receiver_covariance(budget: &PhotonBudget, params: &ChannelParams) -> CovMatrix2 {
    let (x, y, z) = input_covariances(budget, params);
    x.scaled(params.weight_a())
        .plus(&y.scaled(params.weight_b()))
        .plus(&z.scaled(params.weight_env()))
}

/// Signal photons from Alice and Bob that reach the receiver,
/// `(η1η2 n_α, (1-η1)η2 n_β)`.
pub fn received_photons(budget: &PhotonBudget, params: &ChannelParams) -> Result<(f64, f64)> {
    Ok((
        params.weight_a() * budget.displacement_a()?,
        params.weight_b() * budget.displacement_b()?,
    ))
}
