//! Finite groups and their complex characters, computed exactly.

mod character;
mod group;
mod subgroup;
mod table;

pub use character::{induce, inner_product, multiplicity, Character, ClassFunction};
pub use group::{compose, is_permutation, FiniteGroup, DEFAULT_MAX_ORDER};
pub use subgroup::{all_subgroups, subgroup_classes, EmbeddedGroup, Subgroup};
pub use table::{CharacterTable, TableSource, DEFAULT_TABLE_CAP};
mod input;

pub use input::{GroupLimits, GroupSpec, SuppliedTable};
