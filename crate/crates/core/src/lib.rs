//! Power groups of groups: families of nonempty subsets of a group that form
//! a group under the induced subset product `AB = {ab | a in A, b in B}`.

pub mod catalog;
pub mod census;
pub mod classify;
pub mod family;
pub mod group;
pub mod iso;
pub mod lattice;
pub mod qcuts;
pub mod search;
pub mod subset;
pub mod suites;
pub mod zset;

pub use family::{FamilyError, PowerGroupFamily};
pub use group::{Caps, FiniteGroup, GroupError};
pub use lattice::Subgroup;
pub use search::{all_power_groups, brute_force_power_groups, SearchError};
pub use subset::{GroupSubset, Subset};
pub use zset::{zset_sum, ZSet, ZSetError};
