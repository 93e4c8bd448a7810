use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouprep::{compose, is_permutation, FiniteGroup, Subgroup};

use super::complex::{Simplex, SimplicialComplex, UnionFind};

/// Maximum number of barycentric subdivisions `regularize` applies.
pub const MAX_SUBDIVISIONS: usize = 2;

/// A simplicial complex with a simplicial action of a finite group, given by a
/// vertex permutation for every group element.
#[derive(Clone, Debug)]
pub struct GComplex {
    complex: SimplicialComplex,
    group: FiniteGroup,
    action: Vec<Vec<usize>>,
    regularized: bool,
    subdivisions: usize,
}

/// Outcome of the regularity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Regularity {
    /// `g·σ = σ` implies `g` fixes every vertex of `σ`.
    pub pointwise_stabilizers: bool,
    /// No two vertices of a simplex lie in the same orbit.
    pub no_orbit_collisions: bool,
    /// Distinct simplex orbits have distinct vertex-orbit sets, so the orbit
    /// space is a simplicial complex on the vertex orbits.
    pub injective_quotient: bool,
}

impl Regularity {
    pub fn holds(&self) -> bool {
        self.pointwise_stabilizers && self.no_orbit_collisions && self.injective_quotient
    }
}

impl GComplex {
    /// `generator_images[i]` is the vertex permutation of the group's `i`-th generator.
    pub fn new(complex: SimplicialComplex, group: FiniteGroup, generator_images: &[Vec<usize>]) -> Result<Self> {
        let n = complex.num_labels();
        if generator_images.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images for {} group generators",
                generator_images.len(),
                group.generators().len()
            )));
        }
        for (i, img) in generator_images.iter().enumerate() {
            if img.len() != n || !is_permutation(img) {
                return Err(Error::InvalidAction(format!("generator_images[{i}] is not a permutation of the {n} vertices")));
            }
            for s in complex.simplices() {
                let mut t: Simplex = s.iter().map(|&v| img[v]).collect();
                t.sort_unstable();
                if !complex.contains(&t) {
                    return Err(Error::InvalidAction(format!(
                        "generator_images[{i}] maps simplex {} to {}, which is not a simplex",
                        complex.format_simplex(s),
                        complex.format_simplex(&t)
                    )));
                }
            }
        }

        // Extend along the breadth-first Cayley graph, checking well-definedness.
        let order = group.order();
        let mut action: Vec<Option<Vec<usize>>> = vec![None; order];
        action[0] = Some((0..n).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (i, &g) in group.generators().iter().enumerate() {
                let y = group.mul(x, g);
                let p = compose(action[x].as_ref().expect("visited"), &generator_images[i]);
                match &action[y] {
                    None => {
                        action[y] = Some(p);
                        queue.push_back(y);
                    }
                    Some(q) if *q != p => {
                        return Err(Error::InvalidAction(format!(
                            "generator images violate a group relation at element {y}"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let action: Vec<Vec<usize>> = action.into_iter().map(|p| p.expect("generators span the group")).collect();
        for a in 0..order {
            for b in 0..order {
                if action[group.mul(a, b)] != compose(&action[a], &action[b]) {
                    return Err(Error::InvalidAction(format!("not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(Self { complex, group, action, regularized: false, subdivisions: 0 })
    }

    /// The trivial action of `group` on `complex`.
    pub fn trivial_action(complex: SimplicialComplex, group: FiniteGroup) -> Self {
        let id: Vec<usize> = (0..complex.num_labels()).collect();
        let action = vec![id; group.order()];
        Self { complex, group, action, regularized: false, subdivisions: 0 }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn is_regularized(&self) -> bool {
        self.regularized
    }

    /// Number of barycentric subdivisions applied by `regularize`.
    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    pub fn vertex_permutation(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.action[g][v]
    }

    pub fn act(&self, g: usize, s: &[usize]) -> Simplex {
        let mut t: Simplex = s.iter().map(|&v| self.action[g][v]).collect();
        t.sort_unstable();
        t
    }

    /// Simplex id of `g·σ`.
    pub fn act_id(&self, g: usize, id: usize) -> usize {
        self.complex.id_of(&self.act(g, self.complex.simplex(id))).expect("action is simplicial")
    }

    /// `{g : g·σ = σ}` (setwise).
    pub fn stabilizer(&self, id: usize) -> Subgroup {
        let els = (0..self.group.order()).filter(|&g| self.act_id(g, id) == id).collect();
        Subgroup::new(&self.group, els).expect("stabilizers are subgroups")
    }

    pub fn vertex_stabilizer(&self, v: usize) -> Subgroup {
        let els = (0..self.group.order()).filter(|&g| self.action[g][v] == v).collect();
        Subgroup::new(&self.group, els).expect("stabilizers are subgroups")
    }

    /// Vertex orbit ids: each vertex maps to the least vertex of its orbit.
    pub fn vertex_orbit_rep(&self) -> Vec<usize> {
        (0..self.complex.num_labels())
            .map(|v| (0..self.group.order()).map(|g| self.action[g][v]).min().expect("nonempty group"))
            .collect()
    }

    pub fn check_regularity(&self) -> Regularity {
        let order = self.group.order();
        let orbit = self.vertex_orbit_rep();
        let mut pointwise = true;
        let mut collisions = true;
        for s in self.complex.simplices() {
            for g in 0..order {
                if self.act(g, s) == *s && s.iter().any(|&v| self.action[g][v] != v) {
                    pointwise = false;
                }
            }
            let reps: BTreeSet<usize> = s.iter().map(|&v| orbit[v]).collect();
            if reps.len() != s.len() {
                collisions = false;
            }
        }
        let mut image_owner: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut injective = true;
        for id in 0..self.complex.len() {
            let mut image: Vec<usize> = self.complex.simplex(id).iter().map(|&v| orbit[v]).collect();
            image.sort_unstable();
            let least = (0..order).map(|g| self.act_id(g, id)).min().expect("nonempty group");
            match image_owner.get(&image) {
                Some(&other) if other != least => injective = false,
                Some(_) => {}
                None => {
                    image_owner.insert(image, least);
                }
            }
        }
        Regularity { pointwise_stabilizers: pointwise, no_orbit_collisions: collisions, injective_quotient: injective }
    }

    /// Barycentric subdivision with the action transported. Vertices of the
    /// subdivision are the simplices of `self` (same ids); original vertices keep
    /// their labels, barycentres are labelled by their vertex list.
    pub fn barycentric_subdivision(&self) -> GComplex {
        let k = &self.complex;
        let labels: Vec<String> = k
            .simplices()
            .iter()
            .map(|s| {
                if s.len() == 1 {
                    k.label(s[0]).to_string()
                } else {
                    let names: Vec<&str> = s.iter().map(|&v| k.label(v)).collect();
                    format!("<{}>", names.join(","))
                }
            })
            .collect();
        let mut flags: Vec<Vec<usize>> = Vec::new();
        for top in k.maximal_simplices() {
            for order in permutations(top) {
                let chain: Vec<usize> = (1..=order.len())
                    .map(|len| {
                        let mut prefix = order[..len].to_vec();
                        prefix.sort_unstable();
                        k.id_of(&prefix).expect("faces present")
                    })
                    .collect();
                flags.push(chain);
            }
        }
        let complex = SimplicialComplex::from_maximal(labels, &flags)
            .expect("flags are simplices")
            .with_manifold_flag(k.manifold());
        let action = (0..self.group.order())
            .map(|g| (0..k.len()).map(|id| self.act_id(g, id)).collect())
            .collect();
        GComplex {
            complex,
            group: self.group.clone(),
            action,
            regularized: false,
            subdivisions: self.subdivisions + 1,
        }
    }

    /// Subdivides (at most twice) until every regularity condition holds.
    pub fn regularize(&self) -> Result<GComplex> {
        let mut x = self.clone();
        for round in 0..=MAX_SUBDIVISIONS {
            if x.check_regularity().holds() {
                x.regularized = true;
                return Ok(x);
            }
            if round < MAX_SUBDIVISIONS {
                x = x.barycentric_subdivision();
            }
        }
        Err(Error::RegularizationFailed(MAX_SUBDIVISIONS))
    }

    pub(crate) fn require_regularized(&self) -> Result<()> {
        if self.regularized {
            Ok(())
        } else {
            Err(Error::NotRegularized)
        }
    }

    /// `X^H`: the full subcomplex on vertices fixed by every element of `H`.
    pub fn fixed_subcomplex(&self, h: &Subgroup) -> Result<FixedSet> {
        self.require_regularized()?;
        if !h.parent().same_group(&self.group) {
            return Err(Error::NotSubgroup("subgroup of a different group".into()));
        }
        let fixed: BTreeSet<usize> = (0..self.complex.num_labels())
            .filter(|&v| h.elements().iter().all(|&g| self.action[g][v] == v))
            .collect();
        let complex = self.complex.full_subcomplex(&fixed);
        let components = complex.components();
        Ok(FixedSet { complex, components })
    }

    /// Connected components of a set of simplex ids, where two simplices are
    /// adjacent when one is a codimension-one face of the other. Components are
    /// sorted id lists ordered by least id.
    pub(crate) fn simplex_components(&self, ids: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let k = &self.complex;
        let mut uf = UnionFind::new(k.len());
        for &id in ids {
            let s = k.simplex(id);
            if s.len() > 1 {
                for f in super::complex::faces(s) {
                    let fid = k.id_of(&f).expect("closed");
                    if ids.contains(&fid) {
                        uf.union(id, fid);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &id in ids {
            groups.entry(uf.find(id)).or_default().push(id);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort();
        comps
    }
}

/// A fixed subcomplex with its connected components (vertex lists).
#[derive(Clone, Debug)]
pub struct FixedSet {
    pub complex: SimplicialComplex,
    pub components: Vec<Vec<usize>>,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}
