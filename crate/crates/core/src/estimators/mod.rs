//! Monte Carlo estimators and analytic cross-checks.
//!
//! Indicator conventions: volume, distance and influence use the 0/1 indicator;
//! stability and zoom variance use the +-1 indicator `2K - 1`.

pub mod cramer;
pub mod gsa;
pub mod hermite;
pub mod influence;
pub mod noise;
pub mod volume;
pub mod zoom;

pub use cramer::{iid_tail_check, tail_ratio_without_replacement, TailRatio};
pub use gsa::{ball_gsa_bound, gsa_ball_analytic, nazarov_gsa_bound};
pub use hermite::{
    diagonal_level2_coeffs, estimate_hermite_coeff, estimate_two_point, l2_error,
    low_degree_projection, parseval_distance_lb, HermiteExpansion, ParsevalBound, Projection,
    MAX_COEFF_DEGREE, PROJECTION_BUDGET,
};
pub use influence::{
    boppana_check, estimate_directional_influence, estimate_influence_dilation,
    estimate_influence_dilation_with, estimate_total_influence, estimate_total_influence_hermite,
    influential_direction_fraction, BoppanaReport, DilationScheme, InfluenceProfile,
};
pub use noise::{
    estimate_gns, estimate_gns_curve, estimate_stability, gns_from_stability, sheppard_gns,
};
pub use volume::{estimate_distance, estimate_volume, GaugeProfile};
pub use zoom::{zoom_collapse_curve, zoom_collapse_experiment, zoom_variance_profile, CollapseCurve, ZoomProfile};
