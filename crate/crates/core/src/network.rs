//! Passive beamsplitter networks acting on Gaussian modes.
//!
//! This module does not use any of the closed-form rate or covariance
//! expressions. It composes beamsplitters into an orthogonal mode transform,
//! pushes first and second moments through it, and samples heterodyne
//! outcomes, so its results can be compared against the closed forms.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{
    input_covariances, ChannelParams, CovMatrix2, PhotonBudget, VACUUM_VARIANCE,
};

/// Minimum sample count accepted by [`mc_heterodyne_rate`].
pub const MIN_MC_SAMPLES: usize = 10_000;

/// A two-port coupler between `mode_a` and `mode_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beamsplitter {
    pub transmissivity: f64,
    pub phase: f64,
    pub mode_a: usize,
    pub mode_b: usize,
}

impl Beamsplitter {
    pub fn new(transmissivity: f64, mode_a: usize, mode_b: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmissivity) {
            return Err(invalid(
                "transmissivity",
                format!("{transmissivity} is outside [0, 1]"),
            ));
        }
        if mode_a == mode_b {
            return Err(invalid(
                "mode_b",
                "a beamsplitter must couple two distinct modes",
            ));
        }
        Ok(Self {
            transmissivity,
            phase: 0.0,
            mode_a,
            mode_b,
        })
    }
}

/// An ordered list of beamsplitters over `num_modes` modes, one of which is
/// read out by the receiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamsplitterNetwork {
    pub num_modes: usize,
    pub splitters: Vec<Beamsplitter>,
    pub receiver_mode: usize,
}

impl BeamsplitterNetwork {
    pub fn new(
        num_modes: usize,
        splitters: Vec<Beamsplitter>,
        receiver_mode: usize,
    ) -> Result<Self> {
        let net = Self {
            num_modes,
            splitters,
            receiver_mode,
        };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        let check = |index: usize| {
            if index >= self.num_modes {
                Err(Error::ModeOutOfRange {
                    index,
                    num_modes: self.num_modes,
                })
            } else {
                Ok(())
            }
        };
        check(self.receiver_mode)?;
        for s in &self.splitters {
            check(s.mode_a)?;
            check(s.mode_b)?;
            if s.mode_a == s.mode_b {
                return Err(invalid(
                    "mode_b",
                    "a beamsplitter must couple two distinct modes",
                ));
            }
        }
        Ok(())
    }

    /// Triangular mesh for `transmitters` users plus one environment mode
    /// (the last mode). Mode 0 is the receiver: it is coupled in turn to every
    /// other mode, after which the remaining modes are meshed among themselves.
    ///
    /// Needs `K(K+1)/2` transmissivities for `K` transmitters.
    pub fn canonical(transmitters: usize, transmissivities: &[f64]) -> Result<Self> {
        if transmitters == 0 {
            return Err(invalid("transmitters", "need at least one transmitter"));
        }
        let expected = transmitters * (transmitters + 1) / 2;
        if transmissivities.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: transmissivities.len(),
            });
        }
        let num_modes = transmitters + 1;
        let mut pairs = (1..num_modes).map(|j| (0, j)).collect::<Vec<_>>();
        for i in 1..num_modes {
            for j in (i + 1)..num_modes {
                pairs.push((i, j));
            }
        }
        let splitters = pairs
            .into_iter()
            .zip(transmissivities)
            .map(|((a, b), &t)| Beamsplitter::new(t, a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_modes, splitters, 0)
    }

    /// The two-user channel: Alice (mode 0), Bob (mode 1), environment
    /// (mode 2). `eta3` only mixes the two environment outputs.
    pub fn two_user(params: &ChannelParams, eta3: f64) -> Result<Self> {
        Self::canonical(2, &[params.eta1(), params.eta2(), eta3])
    }
}

/// Real orthogonal matrix mapping input mode operators to output mode
/// operators. Splitters are applied in list order.
pub fn mode_transform(net: &BeamsplitterNetwork) -> Result<DMatrix<f64>> {
    net.validate()?;
    let mut m = DMatrix::<f64>::identity(net.num_modes, net.num_modes);
    for (k, s) in net.splitters.iter().enumerate() {
        if s.phase != 0.0 {
            return Err(Error::NonzeroPhase(k));
        }
        let t = s.transmissivity.sqrt();
        let r = (1.0 - s.transmissivity).sqrt();
        let mut block = DMatrix::<f64>::identity(net.num_modes, net.num_modes);
        block[(s.mode_a, s.mode_a)] = t;
        block[(s.mode_a, s.mode_b)] = r;
        block[(s.mode_b, s.mode_a)] = -r;
        block[(s.mode_b, s.mode_b)] = t;
        m = block * m;
    }
    Ok(m)
}

/// Product Gaussian input: per-mode quadrature means and covariances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeEnsemble {
    pub means: Vec<[f64; 2]>,
    pub covs: Vec<CovMatrix2>,
}

impl ModeEnsemble {
    pub fn new(means: Vec<[f64; 2]>, covs: Vec<CovMatrix2>) -> Result<Self> {
        if means.len() != covs.len() {
            return Err(Error::DimensionMismatch {
                expected: covs.len(),
                actual: means.len(),
            });
        }
        if let Some(k) = covs.iter().position(|c| !c.is_physical()) {
            return Err(invalid(
                "covs",
                format!("mode {k} violates the uncertainty relation"),
            ));
        }
        Ok(Self { means, covs })
    }

    /// Zero-mean ensemble.
    pub fn centered(covs: Vec<CovMatrix2>) -> Result<Self> {
        Self::new(vec![[0.0; 2]; covs.len()], covs)
    }

    pub fn vacuum(num_modes: usize) -> Self {
        Self {
            means: vec![[0.0; 2]; num_modes],
            covs: vec![CovMatrix2::vacuum(); num_modes],
        }
    }

    pub fn num_modes(&self) -> usize {
        self.covs.len()
    }

    pub fn total_mean_photons(&self) -> f64 {
        self.means
            .iter()
            .zip(&self.covs)
            .map(|(m, c)| m[0] * m[0] + m[1] * m[1] + c.mean_photons())
            .sum()
    }
}

/// Output of [`propagate`]. Quadratures are ordered `(q0, p0, q1, p1, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagated {
    pub means: Vec<[f64; 2]>,
    pub joint_cov: DMatrix<f64>,
    pub receiver_mode: usize,
}

impl Propagated {
    pub fn marginal(&self, mode: usize) -> CovMatrix2 {
        let (q, p) = (2 * mode, 2 * mode + 1);
        CovMatrix2 {
            v11: self.joint_cov[(q, q)],
            v22: self.joint_cov[(p, p)],
            v12: self.joint_cov[(q, p)],
        }
    }

    pub fn receiver(&self) -> ([f64; 2], CovMatrix2) {
        (
            self.means[self.receiver_mode],
            self.marginal(self.receiver_mode),
        )
    }

    pub fn total_mean_photons(&self) -> f64 {
        let n = self.means.len();
        (0..n)
            .map(|k| {
                let m = self.means[k];
                m[0] * m[0] + m[1] * m[1] + self.marginal(k).mean_photons()
            })
            .sum()
    }
}

/// Push an input ensemble through the network. Means transform linearly; the
/// joint covariance transforms by congruence with the transform expanded over
/// both quadratures.
pub fn propagate(net: &BeamsplitterNetwork, input: &ModeEnsemble) -> Result<Propagated> {
    if input.num_modes() != net.num_modes {
        return Err(Error::DimensionMismatch {
            expected: net.num_modes,
            actual: input.num_modes(),
        });
    }
    let m = mode_transform(net)?;
    let n = net.num_modes;
    let s = m.kronecker(&DMatrix::<f64>::identity(2, 2));

    let mut cov_in = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let mut mean_in = nalgebra::DVector::<f64>::zeros(2 * n);
    for (k, (c, mu)) in input.covs.iter().zip(&input.means).enumerate() {
        cov_in[(2 * k, 2 * k)] = c.v11;
        cov_in[(2 * k + 1, 2 * k + 1)] = c.v22;
        cov_in[(2 * k, 2 * k + 1)] = c.v12;
        cov_in[(2 * k + 1, 2 * k)] = c.v12;
        mean_in[2 * k] = mu[0];
        mean_in[2 * k + 1] = mu[1];
    }
    let joint_cov = &s * cov_in * s.transpose();
    let mean_out = &s * mean_in;
    let means = (0..n)
        .map(|k| [mean_out[2 * k], mean_out[2 * k + 1]])
        .collect();
    Ok(Propagated {
        means,
        joint_cov,
        receiver_mode: net.receiver_mode,
    })
}

/// Receiver covariance of the two-user channel computed by propagation.
pub fn receiver_covariance_by_propagation(
    params: &ChannelParams,
    budget: &PhotonBudget,
) -> Result<CovMatrix2> {
    let net = BeamsplitterNetwork::two_user(params, 0.5)?;
    let (x, y, z) = input_covariances(budget, params);
    let out = propagate(&net, &ModeEnsemble::centered(vec![x, y, z])?)?;
    Ok(out.receiver().1)
}

/// Monte-Carlo heterodyne estimate with its standard error, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub rate: f64,
    pub std_error: f64,
    pub num_samples: usize,
    pub seed: u64,
}

#[derive(Default)]
struct QuadratureStats {
    u: f64,
    w: f64,
    uu: f64,
    ww: f64,
    uw: f64,
}

impl QuadratureStats {
    fn push(&mut self, outcome: f64, noise: f64) {
        let u = outcome * outcome;
        let w = noise * noise;
        self.u += u;
        self.w += w;
        self.uu += u * u;
        self.ww += w * w;
        self.uw += u * w;
    }

    /// Gaussian mutual information `½ log2(E[y²]/E[noise²])` and its
    /// delta-method variance.
    fn information(&self, n: f64) -> (f64, f64) {
        let (mu, mw) = (self.u / n, self.w / n);
        let var_u = self.uu / n - mu * mu;
        let var_w = self.ww / n - mw * mw;
        let cov = self.uw / n - mu * mw;
        let rel = (var_u / (mu * mu) + var_w / (mw * mw) - 2.0 * cov / (mu * mw)).max(0.0);
        let info = 0.5 * (mu / mw).ln() / LN_2;
        let var = rel / (4.0 * LN_2 * LN_2 * n);
        (info, var)
    }
}

/// Simulate heterodyne detection of coherent-state Gaussian codewords.
///
/// Alice's and Bob's displacements are drawn circularly-symmetric Gaussian
/// with their photon budgets, routed to the receiver through the network
/// transform, and read out with per-quadrature noise equal to the receiver
/// covariance plus one vacuum unit. The sum information is the Gaussian
/// mutual information of the empirical signal and noise powers.
pub fn mc_heterodyne_rate(
    params: &ChannelParams,
    budget: &PhotonBudget,
    num_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !budget.is_coherent() {
        return Err(Error::SqueezingNotAllowed {
            r_a: budget.r_a,
            r_b: budget.r_b,
        });
    }
    budget.validate()?;
    if num_samples < MIN_MC_SAMPLES {
        return Err(invalid(
            "num_samples",
            format!("{num_samples} is below the minimum of {MIN_MC_SAMPLES}"),
        ));
    }

    let net = BeamsplitterNetwork::two_user(params, 0.5)?;
    let m = mode_transform(&net)?;
    let (gain_a, gain_b) = (m[(net.receiver_mode, 0)], m[(net.receiver_mode, 1)]);
    let (x, y, z) = input_covariances(budget, params);
    let v = propagate(&net, &ModeEnsemble::centered(vec![x, y, z])?)?
        .receiver()
        .1;
    let noise_q = (v.v11 + VACUUM_VARIANCE).sqrt();
    let noise_p = (v.v22 + VACUUM_VARIANCE).sqrt();
    let sd_a = (budget.n_a / 2.0).sqrt();
    let sd_b = (budget.n_b / 2.0).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut q = QuadratureStats::default();
    let mut p = QuadratureStats::default();
    for _ in 0..num_samples {
        let (aq, ap, bq, bp) = (sd_a * draw(), sd_a * draw(), sd_b * draw(), sd_b * draw());
        let (nq, np) = (noise_q * draw(), noise_p * draw());
        q.push(gain_a * aq + gain_b * bq + nq, nq);
        p.push(gain_a * ap + gain_b * bp + np, np);
    }
    let n = num_samples as f64;
    let (iq, vq) = q.information(n);
    let (ip, vp) = p.information(n);
    Ok(McEstimate {
        rate: iq + ip,
        std_error: (vq + vp).sqrt(),
        num_samples,
        seed,
    })
}
