use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::grouprep::Subgroup;

use super::action::GComplex;
use super::complex::SimplicialComplex;

/// One orbit-type stratum: the open simplices whose isotropy is conjugate to
/// `isotropy` (the canonical representative of the class).
#[derive(Clone, Debug)]
pub struct Stratum {
    pub index: usize,
    pub isotropy: Subgroup,
    /// Simplex ids, sorted.
    pub simplices: Vec<usize>,
    /// Components relative to `G`, ordered by least simplex id.
    pub components: Vec<StratumComponent>,
    /// Closure of the stratum as a subcomplex.
    pub closure: SimplicialComplex,
}

/// A component `Σ_α = G·X_α^H` of a stratum relative to `G`.
#[derive(Clone, Debug)]
pub struct StratumComponent {
    /// Position among all singular components (principal components get their own numbering).
    pub id: String,
    pub simplices: Vec<usize>,
    /// Connected pieces of `Σ_α` with isotropy exactly `H` (the `H`-fixed part),
    /// ordered by least simplex id.
    pub fixed_pieces: Vec<Vec<usize>>,
    pub dimension: usize,
    pub codimension: usize,
    /// Closure of `Σ_α`.
    pub closure: SimplicialComplex,
    /// Closure minus `Σ_α`.
    pub lower: SimplicialComplex,
}

impl Stratum {
    pub fn is_principal(&self) -> bool {
        self.index == 0
    }
}

impl StratumComponent {
    /// Least-id vertex of `Σ_α` whose isotropy is exactly the stratum representative.
    pub fn basepoints(&self, x: &GComplex) -> Vec<usize> {
        let k = x.complex();
        let mut out: Vec<usize> = self
            .fixed_pieces
            .iter()
            .flatten()
            .map(|&id| k.simplex(id))
            .filter(|s| s.len() == 1)
            .map(|s| s[0])
            .collect();
        out.sort_unstable();
        out
    }
}

/// The orbit-type stratification of a regularized `G`-complex.
///
/// Strata are ordered by `(|H|, element list of the canonical representative)`,
/// which extends the partial order `[H] ≤ [K]`. Stratum 0 is principal: its
/// class is subconjugate to every other and every simplex is a face of one of
/// its simplices.
pub fn orbit_type_stratification(x: &GComplex) -> Result<Vec<Stratum>> {
    x.require_regularized()?;
    let k = x.complex();
    let mut by_class: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    let mut class_cache: BTreeMap<Vec<usize>, (usize, Vec<usize>)> = BTreeMap::new();
    for id in 0..k.len() {
        let stab = x.stabilizer(id);
        let key = class_cache
            .entry(stab.elements().to_vec())
            .or_insert_with(|| {
                let rep = stab.canonical_representative();
                (rep.order(), rep.elements().to_vec())
            })
            .clone();
        by_class.entry(key).or_default().push(id);
    }

    let group = x.group();
    let dim = k.dimension().max(0) as usize;
    let mut strata = Vec::with_capacity(by_class.len());
    for (index, ((_, elements), simplices)) in by_class.into_iter().enumerate() {
        let isotropy = Subgroup::new(group, elements).expect("canonical representative");
        let closure = k.closure_of(simplices.iter().copied());
        strata.push(Stratum { index, isotropy, simplices, components: Vec::new(), closure });
    }

    let principal = strata[0].isotropy.clone();
    if let Some(s) = strata.iter().find(|s| !principal.is_subconjugate_to(&s.isotropy)) {
        return Err(Error::Stratification(format!(
            "no principal orbit type: isotropy of stratum {} does not contain the minimal type",
            s.index
        )));
    }
    if strata[0].closure.len() != k.len() {
        return Err(Error::Stratification("the minimal orbit-type stratum is not dense".into()));
    }

    let mut singular_count = 0;
    for stratum in &mut strata {
        let ids: BTreeSet<usize> = stratum.simplices.iter().copied().collect();
        let pieces = x.simplex_components(&ids);
        // Merge pieces along the action.
        let piece_of: BTreeMap<usize, usize> =
            pieces.iter().enumerate().flat_map(|(p, c)| c.iter().map(move |&id| (id, p))).collect();
        let mut uf = super::complex::UnionFind::new(pieces.len());
        for (p, c) in pieces.iter().enumerate() {
            for g in 0..group.order() {
                uf.union(p, piece_of[&x.act_id(g, c[0])]);
            }
        }
        let mut merged: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for p in 0..pieces.len() {
            merged.entry(uf.find(p)).or_default().push(p);
        }
        let h = &stratum.isotropy;
        let mut comps = Vec::new();
        for members in merged.into_values() {
            let mut simplices: Vec<usize> = members.iter().flat_map(|&p| pieces[p].iter().copied()).collect();
            simplices.sort_unstable();
            let fixed_pieces: Vec<Vec<usize>> = members
                .iter()
                .map(|&p| &pieces[p])
                .filter(|c| x.stabilizer(c[0]).elements() == h.elements())
                .cloned()
                .collect();
            let dimension = simplices.iter().map(|&id| k.simplex(id).len() - 1).max().unwrap_or(0);
            let closure = k.closure_of(simplices.iter().copied());
            let own: BTreeSet<usize> = simplices.iter().copied().collect();
            let lower = closure
                .subcomplex(
                    closure
                        .simplices()
                        .iter()
                        .filter(|s| !own.contains(&k.id_of(s).expect("face of a simplex")))
                        .cloned(),
                )
                .expect("complement of an open stratum in its closure is closed");
            let id = if stratum.index == 0 {
                format!("principal.{}", comps.len())
            } else {
                singular_count += 1;
                format!("S{}", singular_count - 1)
            };
            comps.push(StratumComponent {
                id,
                simplices,
                fixed_pieces,
                dimension,
                codimension: dim.saturating_sub(dimension),
                closure,
                lower,
            });
        }
        stratum.components = comps;
    }
    Ok(strata)
}

/// Union of all non-principal strata, which is a closed subcomplex.
pub fn singular_set(x: &GComplex, strata: &[Stratum]) -> SimplicialComplex {
    x.complex().closure_of(strata.iter().skip(1).flat_map(|s| s.simplices.iter().copied()))
}

/// Codimension of every singular component, failing on the first below 2.
pub fn require_codimension_two(strata: &[Stratum]) -> Result<()> {
    for s in strata.iter().skip(1) {
        for c in &s.components {
            if c.codimension < 2 {
                return Err(Error::CodimensionOne { stratum: c.id.clone(), codimension: c.codimension });
            }
        }
    }
    Ok(())
}
