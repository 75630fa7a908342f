//! Gaussian-input capacity analysis of the two-user thermal-noise lossy
//! bosonic multiple access channel.
//!
//! * [`gaussian`]: entropy function, photon budgets, receiver covariance.
//! * [`network`]: beamsplitter-network simulator and Monte-Carlo heterodyne
//!   sampler, used as independent oracles.
//! * [`rates`]: closed-form maximum rates, outer bounds, receiver rates.
//! * [`asymptotics`]: numerical limit probes for the high/low photon regimes.
//! * [`region`]: pentagons, convex rate regions, squeezing surfaces and scans.

pub mod asymptotics;
pub mod error;
pub mod gaussian;
pub mod network;
pub mod optimize;
pub mod rates;
pub mod region;

pub use error::{Error, Result};
pub use gaussian::{ChannelParams, CovMatrix2, PhotonBudget, Sign, SqueezeFractions};
pub use rates::{Branch, RateBundle, Receiver, User};
