//! Brute-force truncated-Fock-space engine: states of the illumination
//! experiment, Helstrom errors, quantum Chernoff exponents and numerical
//! checks of the concavity and fading lemmas.

mod channel;
mod covariance;
mod density;
mod discrimination;
mod fading;
mod lemmas;
pub mod linalg;
mod states;

pub use channel::{apply_return_channel, conditional_state};
pub use covariance::{covariance_from_state, CovarianceMatrix, Moments};
pub use density::{auto_dim, DensityMatrix, Truncation, DEFAULT_DEFICIT_TOL, EIGEN_CLAMP, HERMITIAN_TOL};
pub use discrimination::{chernoff_q, helstrom, qcb, DiscriminationReport, QCB_S_TOL};
pub use fading::{average_over, fading_average, FadingQuadrature, QuadratureNode, MIN_NODES};
pub use lemmas::{
    concavity_slack, conditional_qcb, lemma1_check, lemma2_trend, lemma2_trend_with, qcb_vanishes_at_origin,
    random_density_matrix, Lemma1Report, Lemma2Config, TrendPoint, DEFAULT_MAX_COPY_DIM, DESK_DEFICIT_TOL,
    LEMMA1_SLACK_TOL,
};
pub use states::{coherent_thermal_state, thermal_state, tmsv_state};
