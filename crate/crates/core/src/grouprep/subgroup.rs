use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::group::FiniteGroup;

/// A subgroup, stored as the sorted list of its element ids in the parent group.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<usize>,
    embedded: OnceLock<EmbeddedGroup>,
}

/// A subgroup realised as a group in its own right.
#[derive(Clone, Debug)]
pub struct EmbeddedGroup {
    pub group: FiniteGroup,
    /// Subgroup id -> parent id.
    pub to_parent: Vec<usize>,
}

impl EmbeddedGroup {
    pub fn from_parent(&self, g: usize) -> Option<usize> {
        self.to_parent.iter().position(|&x| x == g)
    }
}

impl Subgroup {
    /// Validates closure under products (finite, so inverses follow).
    pub fn new(parent: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::NotSubgroup(format!("element id {bad} out of range")));
        }
        if elements.first() != Some(&parent.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        for &a in &elements {
            for &b in &elements {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("{a} * {b} leaves the set")));
                }
            }
        }
        Ok(Self::unchecked(parent, elements))
    }

    fn unchecked(parent: &FiniteGroup, elements: Vec<usize>) -> Self {
        Self { parent: parent.clone(), elements, embedded: OnceLock::new() }
    }

    pub fn generated_by(parent: &FiniteGroup, generators: &[usize]) -> Result<Self> {
        if let Some(&bad) = generators.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::NotSubgroup(format!("element id {bad} out of range")));
        }
        let mut seen = vec![false; parent.order()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in generators {
                let y = parent.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let elements = (0..parent.order()).filter(|&i| seen[i]).collect();
        Ok(Self::unchecked(parent, elements))
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Self::unchecked(parent, vec![0])
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::unchecked(parent, (0..parent.order()).collect())
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// `g H g^{-1}`
    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut els: Vec<usize> = self.elements.iter().map(|&x| self.parent.conjugate(g, x)).collect();
        els.sort_unstable();
        Self::unchecked(&self.parent, els)
    }

    /// All conjugates, deduplicated and sorted by element list.
    pub fn conjugates(&self) -> Vec<Subgroup> {
        let set: BTreeSet<Vec<usize>> =
            (0..self.parent.order()).map(|g| self.conjugate_by(g).elements).collect();
        set.into_iter().map(|e| Self::unchecked(&self.parent, e)).collect()
    }

    /// The lexicographically least conjugate; canonical representative of `[H]`.
    pub fn canonical_representative(&self) -> Subgroup {
        self.conjugates().into_iter().next().expect("at least one conjugate")
    }

    pub fn is_conjugate_to(&self, other: &Subgroup) -> bool {
        self.order() == other.order()
            && self.canonical_representative().elements == other.canonical_representative().elements
    }

    /// `N(H) = {g : g H g^{-1} = H}` by brute force.
    pub fn normalizer(&self) -> Subgroup {
        let els = (0..self.parent.order())
            .filter(|&g| self.conjugate_by(g).elements == self.elements)
            .collect();
        Self::unchecked(&self.parent, els)
    }

    pub fn normalizes(&self, g: usize) -> bool {
        self.conjugate_by(g).elements == self.elements
    }

    /// `[H] ≤ [K]`: some conjugate of `H` lies in `K`.
    pub fn is_subconjugate_to(&self, other: &Subgroup) -> bool {
        if other.order() % self.order() != 0 {
            return false;
        }
        (0..self.parent.order()).any(|g| {
            self.elements.iter().all(|&x| other.contains(self.parent.conjugate(g, x)))
        })
    }

    /// Least element generating set (greedy in id order).
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(&self.parent);
        for &x in &self.elements {
            if !span.contains(x) {
                gens.push(x);
                span = Subgroup::generated_by(&self.parent, &gens).expect("in range");
            }
        }
        gens
    }

    /// The subgroup as a standalone group, with canonical ids of its own.
    pub fn embedded(&self) -> &EmbeddedGroup {
        self.embedded.get_or_init(|| {
            let n = self.order();
            let local: std::collections::HashMap<usize, usize> =
                self.elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let table: Vec<Vec<usize>> = self
                .elements
                .iter()
                .map(|&a| self.elements.iter().map(|&b| local[&self.parent.mul(a, b)]).collect())
                .collect();
            let gens: Vec<usize> = self.generators().iter().map(|g| local[g]).collect();
            let (group, new_of) = FiniteGroup::from_table(&table, Some(&gens), n).expect("subgroup table is a group");
            let mut to_parent = vec![0; n];
            for (old, &new) in new_of.iter().enumerate() {
                to_parent[new] = self.elements[old];
            }
            EmbeddedGroup { group, to_parent }
        })
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

/// Every subgroup, sorted by `(order, element list)`.
///
/// Joins of cyclic subgroups are taken until no new subgroup appears; every
/// subgroup is the join of the cyclic subgroups of its elements.
pub fn all_subgroups(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let cyclic: Vec<Vec<usize>> = (0..group.order())
        .map(|g| Subgroup::generated_by(group, &[g]).expect("in range").elements)
        .collect();
    found.extend(cyclic.iter().cloned());
    let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for c in &cyclic {
                if c.iter().all(|x| h.binary_search(x).is_ok()) {
                    continue;
                }
                let gens: Vec<usize> = h.iter().chain(c.iter()).copied().collect();
                let j = Subgroup::generated_by(group, &gens).expect("in range").elements;
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut subs: Vec<Subgroup> = found.into_iter().map(|e| Subgroup::unchecked(group, e)).collect();
    subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    subs
}

/// One canonical representative per conjugacy class of subgroups, sorted by `(order, element list)`.
pub fn subgroup_classes(group: &FiniteGroup) -> Vec<Subgroup> {
    let reps: BTreeSet<(usize, Vec<usize>)> = all_subgroups(group)
        .iter()
        .map(|h| {
            let r = h.canonical_representative();
            (r.order(), r.elements)
        })
        .collect();
    reps.into_iter().map(|(_, e)| Subgroup::unchecked(group, e)).collect()
}
