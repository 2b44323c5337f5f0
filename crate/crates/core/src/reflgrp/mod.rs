//! Explicit models of the reflection groups in scope.

pub mod cache;
pub mod chars;
pub mod group;
pub mod molien;
pub mod parabolic;
pub mod spec;

pub use cache::{cached_character_table, CacheStatus, CharTableCache};
pub use chars::{character_table, restriction_multiplicities, subgroup_characters, CharTable, SubgroupCharacters};
pub use group::{ReflGroup, Subgroup};
pub use molien::{invariant_degrees, poincare_polynomial};
pub use parabolic::{parabolic_classes, ParabolicClass};
pub use spec::{Family, GroupSpec};
