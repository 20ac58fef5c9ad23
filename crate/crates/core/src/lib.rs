//! Qubit channels in the Bloch representation: positivity and complete
//! positivity tests, Markovian and telegraph-noise dynamics, a stochastic
//! Monte Carlo oracle and entanglement-breaking times.

pub mod bloch;
pub mod cli;
pub mod cp;
pub mod error;
pub mod linalg;
pub mod markov;
pub mod nonmarkov;
pub mod ode;
pub mod separability;
pub mod stochastic;
pub mod tolerances;

pub use bloch::{
    apply_map, from_density, image_ellipsoid, is_positive_map, superoperator_matrix, to_density,
    AffineBlochMap, BlochVector, DensityOperator, Ellipsoid, PositivityReport, Superoperator,
};
pub use cp::{
    bloch_inequalities, choi_matrix, choi_test, lifetime_inequalities, unital_kraus, verify_kraus,
    CpVerdict, DecayRates, KrausSet,
};
pub use error::{Error, Result};
pub use linalg::{CMat2, CMat4, C64};
