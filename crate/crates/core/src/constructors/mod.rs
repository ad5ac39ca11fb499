//! Approximator constructions and facet-complexity bound calculators.
//!
//! * [`nazarov`]: random polytopes `{x : <x, g_i> <= w}` and their parameter solver.
//! * [`junta`]: intersections of p-power constraints on random coordinate tuples.
//! * [`tangent`]: outer approximators from supporting halfspaces, bucketed by ray tail mass.
//! * [`net`]: deterministic and random direction sets on the sphere.
//! * [`bounds`]: closed-form log facet counts.

pub mod bounds;
pub mod junta;
pub mod nazarov;
pub mod net;
pub mod tangent;

pub use bounds::{fc_bound_bronstein, fc_bound_relative, fc_bound_universal, BoundConstants};
pub use junta::{
    empirical_theta, junta_term_bounds, junta_term_volume_check, sample_junta_intersection,
    solve_junta_params, JuntaConstants, JuntaMode, JuntaParams, TermVolumeCheck,
};
pub use nazarov::{
    expected_nazarov_volume, nazarov_w_for_volume, sample_nazarov, sample_nazarov_with_budget, solve_nazarov_params, solve_nazarov_params_in,
    NazarovParams, NAZAROV_FACET_BUDGET,
};
pub use net::{sphere_net, DirectionMode};
pub use tangent::{ray_error_angle, tangent_approximator, TangentApproximation, TangentConfig};
