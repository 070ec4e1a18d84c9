//! ψ and κ intersection numbers on the moduli space of stable curves.

mod cache;
mod kappa;
mod witten;

pub use cache::IntersectionCache;
pub use kappa::{kappa_psi_integral, PsiKappaQuery};
pub use witten::witten_correlator;

