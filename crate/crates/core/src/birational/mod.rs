//! Exact rational maps: polynomial and rational-function arithmetic,
//! multi-projective maps, Weyl group actions on charts, mutation tables,
//! quadric chart transitions and relation checks.

pub mod map;
pub mod mutations;
pub mod poly;
pub mod quadric;
pub mod rational;
pub mod verify;

pub use map::{projective_eq, MultiProjectiveMap};
pub use mutations::{
    grassmann_quotient_map, grassmann_weyl_chart_map, lines_points, mutation_affine, mutation_generators, mutation_map,
    point_orbit,
};
pub use poly::Poly;
pub use quadric::{quadric_boundary, quadric_transition, quadric_transition_involutive};
pub use rational::{RationalFunction, RationalMap};
pub use verify::{verify_coxeter, verify_equivariance, CheckMode, RelationReport, VerifyOptions};
