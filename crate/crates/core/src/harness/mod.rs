//! Closed formulas for the expansion coefficients and the cross-check
//! reports comparing them with the recursion and the Hurwitz oracles.

mod formulas;
mod report;

pub use formulas::{closed_form_rhs, elsv_rhs, jpt_rhs, rescaling_check};
pub use report::{cross_check, cross_check_with_order, CrossCheckReport, Grid, Instance, InstanceRecord, SChoice, PATHS};
