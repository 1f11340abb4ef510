//! Time-power series: grid TE coefficients, the reduced-variable recursion,
//! inverse-power asymptotic series and their Borel resummation.

mod asymptotic;
mod borel;
mod reduced;
mod te;

pub use asymptotic::{
    asymptotic_eval_optimal, borel_coefficient, borel_coefficient_ln, AsymptoticSeries, Divergence,
    Prefactor,
};
pub use borel::{borel_resum, borel_resum_with, BorelOptions, DEFAULT_RAY_ANGLE};
pub use reduced::{
    log_unwrapped, reduced_coords, reduced_potential_terms, reduced_residual, s_ode_residual,
    te_reduced_terms, ChannelField, PotentialTerm, ReducedPotential, ReducedTeTerm, TeScenario,
};
pub use te::{te_coefficients_grid, Hamiltonian, SeriesVariable, TeGrid, TimePowerSeries};
