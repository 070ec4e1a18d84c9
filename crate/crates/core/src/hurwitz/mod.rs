//! r-orbifold Hurwitz numbers by character theory and by brute force.

mod characters;
mod count;
mod enumerate;
mod partition;

pub use characters::{sd_character, CharacterTable};
pub use count::{disconnected_count, orbifold_hurwitz, HurwitzQuery};
pub use enumerate::{enumerate_oracle, enumerate_oracle_with_ceiling, DEFAULT_CEILING};
pub use partition::Partition;
