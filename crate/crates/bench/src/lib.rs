//! Workloads shared by the criterion benches.

use chiodo_core::harness::Grid;

/// `(r, s, g, n)` correlators timed from a cold recursion.
pub const CORRELATORS: &[(u32, u32, u32, usize)] = &[(1, 1, 1, 2), (2, 2, 0, 4), (2, 3, 1, 2), (3, 3, 1, 2)];

/// `(r, s, g, μ)` Chiodo/ELSV integrals.
pub const ELSV: &[(u32, u32, u32, &[u64])] = &[(1, 1, 1, &[1, 1, 2]), (2, 2, 1, &[2, 2]), (3, 4, 0, &[1, 2, 2, 3])];

/// `(g, r, μ)` orbifold Hurwitz numbers small enough for enumeration.
pub const HURWITZ: &[(u32, u32, &[u64])] = &[(0, 1, &[1, 1, 1, 1]), (1, 2, &[2, 2]), (0, 3, &[3, 3])];

/// A cross-check grid that finishes in about a second.
pub fn small_grid() -> Grid {
    Grid::hurwitz(2, 1, 2, 4)
}
