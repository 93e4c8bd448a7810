//! Simplicial complexes with simplicial finite group actions: regularization,
//! fixed subcomplexes, orbit-type strata, orbit spaces and normal orientation
//! characters.

mod action;
mod complex;
mod input;
mod orbit;
mod orientation;
mod strata;

pub use action::{FixedSet, GComplex, Regularity, MAX_SUBDIVISIONS};
pub use complex::{faces, relative_euler, Simplex, SimplicialComplex};
pub use input::{ActionSpec, ComplexSpec, VertexLabel};
pub use orbit::OrbitSpace;
pub use orientation::{orientation_character, OrientationCharacter};
pub use strata::{orbit_type_stratification, require_codimension_two, singular_set, Stratum, StratumComponent};

/// `χ(K)`
pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    k.euler_characteristic()
}
