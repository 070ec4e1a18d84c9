//! The Chiodo classes as a cohomological field theory: TFT, Bernoulli
//! R-matrix, κ-decorations and the stable-graph sum.

mod givental;
mod graphs;
mod sum;

pub use givental::{
    edge_series, r_matrix_entry, tft_value, vertex_decoration_series, EdgeSeries, GiventalData, UnitMode,
};
pub use graphs::{enumerate_stable_graphs, StableGraph};
pub use sum::{
    chiodo_elsv_integral, chiodo_integral, chiodo_integral_with, elsv_decorations, ChiodoSpec, SumOptions,
};
pub(crate) use sum::geometric;
