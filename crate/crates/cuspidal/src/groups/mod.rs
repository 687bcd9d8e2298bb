//! Group models with computable normal forms, and their Cayley balls.
//!
//! Supported families: free, free abelian, free products of these (nested),
//! and finite external models given by generator permutations. Elements are
//! represented by canonical words; all metric work happens on the finite
//! ball graphs produced here.

mod ball;
mod interval;
mod membership;
mod model;
mod word;

pub use ball::{cayley_ball, CayleyBall, TraceSet, DEFAULT_VERTEX_BUDGET};
pub use interval::{geodesic_count, geodesic_interval_elements};
pub use membership::CosetKey;
pub use model::{ExternalSpec, Family, GroupModel, GroupSpecFile, SubgroupSpec, SubgroupSpecFile};
pub use word::Word;
