//! Cones, fans and polytopes with exact double-description conversions.

mod dd;

pub mod cone;
pub mod fan;
pub mod polytope;
pub mod refine;

pub use cone::Cone;
pub use fan::{coarsening_embedding, Fan, FanReport};
pub use polytope::{minkowski_sum, Polytope};
pub use refine::{chamber_cells, chamber_fan, chamber_refinement, common_refinement};
