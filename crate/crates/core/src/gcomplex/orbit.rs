use std::collections::BTreeSet;

use crate::error::Result;

use super::action::GComplex;
use super::complex::{Simplex, SimplicialComplex};

/// `G\X` as a simplicial complex on the vertex orbits, with the projection.
#[derive(Clone, Debug)]
pub struct OrbitSpace {
    pub complex: SimplicialComplex,
    /// Vertex of `X` -> vertex of the quotient.
    pub vertex_projection: Vec<usize>,
    /// Simplex id of `X` -> simplex id of the quotient.
    pub simplex_projection: Vec<usize>,
}

impl OrbitSpace {
    /// Quotient vertices are the vertex orbits, ordered by least member and
    /// labelled like it.
    pub fn new(x: &GComplex) -> Result<Self> {
        x.require_regularized()?;
        let k = x.complex();
        let rep = x.vertex_orbit_rep();
        let reps: Vec<usize> = rep.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let vertex_projection: Vec<usize> =
            rep.iter().map(|r| reps.binary_search(r).expect("representative")).collect();
        let labels: Vec<String> = reps.iter().map(|&r| k.label(r).to_string()).collect();
        let images: Vec<Simplex> = k.simplices().iter().map(|s| project(&vertex_projection, s)).collect();
        let complex = SimplicialComplex::from_maximal(labels, &images).expect("images are simplices");
        let simplex_projection = images.iter().map(|s| complex.id_of(s).expect("image present")).collect();
        Ok(Self { complex, vertex_projection, simplex_projection })
    }

    /// Image of a `G`-invariant subcomplex, as a subcomplex of the quotient.
    pub fn image(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        let images: BTreeSet<Simplex> = sub.simplices().iter().map(|s| project(&self.vertex_projection, s)).collect();
        self.complex.subcomplex(images).expect("image of a closed set is closed")
    }

    /// Number of simplex orbits in a set of simplex ids (one quotient simplex each).
    pub fn orbit_count(&self, ids: impl IntoIterator<Item = usize>) -> usize {
        ids.into_iter().map(|id| self.simplex_projection[id]).collect::<BTreeSet<_>>().len()
    }
}

fn project(vertex_projection: &[usize], s: &[usize]) -> Simplex {
    let mut t: Simplex = s.iter().map(|&v| vertex_projection[v]).collect();
    t.sort_unstable();
    t
}
