//! Closed-form rates for the two-user channel: the Gaussian-input maximum
//! rates (individual and sum), the interference-free outer bounds, the
//! coherent sum-rate capacity, and the homodyne/heterodyne receiver rates.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    g, g_increment, received_photons, receiver_covariance, ChannelParams, CovMatrix2, PhotonBudget,
};

/// Which piece of the piecewise rate formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Signal photons at or above the quadrature asymmetry.
    Branch1,
    /// Signal photons below the quadrature asymmetry.
    Branch2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum User {
    Alice,
    Bob,
}

impl User {
    pub fn other(self) -> User {
        match self {
            User::Alice => User::Bob,
            User::Bob => User::Alice,
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            User::Alice => "Alice",
            User::Bob => "Bob",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Receiver {
    Homodyne,
    Heterodyne,
}

/// Maximum Gaussian-input rates for one encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBundle {
    pub r_max_a: f64,
    pub r_max_b: f64,
    pub r_max_ab: f64,
    pub branch_a: Branch,
    pub branch_b: Branch,
    pub branch_ab: Branch,
}

/// `g(V1 + V2 + N - 1/2)`.
pub fn big_g11(n: f64, v: &CovMatrix2) -> f64 {
    g(v.trace() + n - 0.5)
}

/// The second-branch entropy term, evaluated from its general (correlated
/// quadrature) form.
pub fn big_g12(n: f64, v: &CovMatrix2) -> f64 {
    let s = (((v.v11 - v.v22) / 2.0).powi(2) + v.v12 * v.v12).sqrt();
    let radicand = -(s - n / 2.0).powi(2) + ((v.v11 + v.v22 + n) / 2.0).powi(2);
    g(2.0 * radicand.max(0.0).sqrt() - 0.5)
}

/// [`big_g12`] for uncorrelated quadratures: `g(2 sqrt(Vmax (N + Vmin)) - 1/2)`.
pub fn big_g12_uncorrelated(n: f64, v: &CovMatrix2) -> f64 {
    let hi = v.v11.max(v.v22);
    let lo = v.v11.min(v.v22);
    g(2.0 * (hi * (n + lo)).sqrt() - 0.5)
}

/// `g(2 sqrt(det V) - 1/2)`.
pub fn big_g2(v: &CovMatrix2) -> f64 {
    g(2.0 * v.det().max(0.0).sqrt() - 0.5)
}

/// Threshold separating the two branches, `sqrt((V1-V2)^2 + 4 V12^2)`.
pub fn branch_threshold(v: &CovMatrix2) -> f64 {
    ((v.v11 - v.v22).powi(2) + 4.0 * v.v12 * v.v12).sqrt()
}

/// `G1x(N, V) - G2(V)` for the branch selected by `n`.
pub fn piecewise_rate(n: f64, v: &CovMatrix2) -> (f64, Branch) {
    if n >= branch_threshold(v) {
        (branch1_rate(n, v), Branch::Branch1)
    } else {
        (branch2_rate(n, v), Branch::Branch2)
    }
}

/// `G11(N, V) - G2(V)`, evaluated as an increment over the shared base
/// `2 sqrt(det V) - 1/2`: the increment is `N + (tr V - 2 sqrt(det V))`.
pub fn branch1_rate(n: f64, v: &CovMatrix2) -> f64 {
    let root_det = v.det().max(0.0).sqrt();
    let asym = (v.v11 - v.v22).powi(2) + 4.0 * v.v12 * v.v12;
    let excess = asym / (v.trace() + 2.0 * root_det);
    g_increment(2.0 * root_det - 0.5, n.max(0.0) + excess)
}

/// `G12(N, V) - G2(V)` as an increment over `2 sqrt(det V) - 1/2`. The
/// radicand of [`big_g12`] equals `det V + N (s + tr V / 2)` exactly.
pub fn branch2_rate(n: f64, v: &CovMatrix2) -> f64 {
    let det = v.det().max(0.0);
    let root_det = det.sqrt();
    let s = (((v.v11 - v.v22) / 2.0).powi(2) + v.v12 * v.v12).sqrt();
    let gain = n.max(0.0) * (s + v.trace() / 2.0);
    let delta = 2.0 * gain / ((det + gain).sqrt() + root_det);
    g_increment(2.0 * root_det - 0.5, delta)
}

/// Maximum individual rate of `user` for this encoding.
pub fn individual_rate(
    params: &ChannelParams,
    budget: &PhotonBudget,
    user: User,
) -> Result<(f64, Branch)> {
    let (n_a, n_b) = received_photons(budget, params)?;
    let v = receiver_covariance(budget, params);
    let n = match user {
        User::Alice => n_a,
        User::Bob => n_b,
    };
    Ok(piecewise_rate(n, &v))
}

/// Maximum sum rate for this encoding.
pub fn sum_rate(params: &ChannelParams, budget: &PhotonBudget) -> Result<(f64, Branch)> {
    let (n_a, n_b) = received_photons(budget, params)?;
    let v = receiver_covariance(budget, params);
    Ok(piecewise_rate(n_a + n_b, &v))
}

pub fn rate_bundle(params: &ChannelParams, budget: &PhotonBudget) -> Result<RateBundle> {
    let (r_max_a, branch_a) = individual_rate(params, budget, User::Alice)?;
    let (r_max_b, branch_b) = individual_rate(params, budget, User::Bob)?;
    let (r_max_ab, branch_ab) = sum_rate(params, budget)?;
    Ok(RateBundle {
        r_max_a,
        r_max_b,
        r_max_ab,
        branch_a,
        branch_b,
        branch_ab,
    })
}

/// Capacity of a thermal lossy point-to-point channel, `g(x+y) - g(y)`, with
/// `x` signal and `y` thermal photons at the receiver.
pub fn point_to_point(x: f64, y: f64) -> f64 {
    g_increment(y, x)
}

/// Individual-rate ceiling of a receiver that could undo the interference
/// from the other user.
pub fn outer_bound(params: &ChannelParams, budget: &PhotonBudget, user: User) -> f64 {
    let n = match user {
        User::Alice => budget.n_a,
        User::Bob => budget.n_b,
    };
    point_to_point(params.eta2() * n, params.received_thermal())
}

/// Sum-rate capacity with coherent encoding. Squeezing in `budget` is ignored.
pub fn sum_rate_capacity_coherent(params: &ChannelParams, budget: &PhotonBudget) -> f64 {
    let signal = params.weight_a() * budget.n_a + params.weight_b() * budget.n_b;
    point_to_point(signal, params.received_thermal())
}

/// Sum rate of squeezed-state homodyne detection, referenced to Alice's path.
pub fn homodyne_sum_rate(params: &ChannelParams, budget: &PhotonBudget) -> Result<f64> {
    let n_alpha = budget.displacement_a()?;
    let n_beta = budget.displacement_b()?;
    homodyne_rate(params, n_alpha, n_beta, budget.r_a, budget.r_b)
}

fn homodyne_rate(
    params: &ChannelParams,
    n_alpha: f64,
    n_beta: f64,
    r_a: f64,
    r_b: f64,
) -> Result<f64> {
    if params.eta1() == 0.0 {
        return Err(Error::DegenerateChannel("homodyne rate needs eta1 > 0"));
    }
    if params.eta2() == 0.0 {
        return Err(Error::DegenerateChannel("homodyne rate needs eta2 > 0"));
    }
    let k = (1.0 - params.eta1()) / params.eta1();
    let env = params.weight_env() / params.weight_a() * (1.0 + 2.0 * params.n_thermal());
    let noise = (2.0 * r_a).exp() + k * (2.0 * r_b).exp() + env;
    let snr = 4.0 * (n_alpha + k * n_beta) / noise;
    Ok(0.5 * snr.ln_1p() / LN_2)
}

/// Sum rate of coherent-state heterodyne detection.
pub fn heterodyne_sum_rate(params: &ChannelParams, budget: &PhotonBudget) -> Result<f64> {
    if !budget.is_coherent() {
        return Err(Error::SqueezingNotAllowed {
            r_a: budget.r_a,
            r_b: budget.r_b,
        });
    }
    budget.validate()?;
    heterodyne_rate(params, budget.n_a, budget.n_b)
}

fn heterodyne_rate(params: &ChannelParams, n_a: f64, n_b: f64) -> Result<f64> {
    if params.eta2() == 0.0 {
        return Err(Error::DegenerateChannel("heterodyne rate needs eta2 > 0"));
    }
    let signal = params.eta1() * n_a + (1.0 - params.eta1()) * n_b;
    let noise = 1.0 + params.weight_env() / params.eta2() * (1.0 + 2.0 * params.n_thermal());
    Ok((signal / noise).ln_1p() / LN_2)
}

/// Single-user rate of a structured receiver: the sum-rate formula with the
/// other user's signal photons set to zero. For homodyne the other user's
/// squeezing stays in the noise term.
pub fn receiver_individual_rate(
    params: &ChannelParams,
    budget: &PhotonBudget,
    receiver: Receiver,
    user: User,
) -> Result<f64> {
    match receiver {
        Receiver::Homodyne => {
            let n_alpha = budget.displacement_a()?;
            let n_beta = budget.displacement_b()?;
            let (n_alpha, n_beta) = match user {
                User::Alice => (n_alpha, 0.0),
                User::Bob => (0.0, n_beta),
            };
            homodyne_rate(params, n_alpha, n_beta, budget.r_a, budget.r_b)
        }
        Receiver::Heterodyne => {
            if !budget.is_coherent() {
                return Err(Error::SqueezingNotAllowed {
                    r_a: budget.r_a,
                    r_b: budget.r_b,
                });
            }
            budget.validate()?;
            match user {
                User::Alice => heterodyne_rate(params, budget.n_a, 0.0),
                User::Bob => heterodyne_rate(params, 0.0, budget.n_b),
            }
        }
    }
}

/// Sum rate of a structured receiver.
pub fn receiver_sum_rate(
    params: &ChannelParams,
    budget: &PhotonBudget,
    receiver: Receiver,
) -> Result<f64> {
    match receiver {
        Receiver::Homodyne => homodyne_sum_rate(params, budget),
        Receiver::Heterodyne => heterodyne_sum_rate(params, budget),
    }
}
