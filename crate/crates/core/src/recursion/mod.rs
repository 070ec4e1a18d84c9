//! Topological recursion on the curve `x = -z^r + log z`, `y = z^s`, computed
//! in the coordinate `u` with `x̃ = -u^r/r + log u` and branch points `ζ^i`.

mod chart;
mod correlator;
mod identities;

pub use chart::{local_chart, q_inverse, recursion_kernel, Kernel, LocalChart, SpectralCurveConfig};
pub use correlator::{expansion_coefficients, Correlator, Key, SpectralRecursion};
pub use identities::{
    bernoulli_exponential, condition_y_defect, operator_identity_check, series_identity_check, wick, xi_expansion,
    IdentityKind,
};
