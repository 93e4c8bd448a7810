use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num::integer::lcm;

use crate::error::{Error, Result};

/// Default cap on the order of a group produced by generator closure.
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// A finite group given by its full composition table.
///
/// Element ids are `0..order`; `0` is the identity. Ids follow breadth-first
/// order from the generators: each discovered element `x` is multiplied on the
/// right by the generators in input order, and new products are appended.
/// Cloning is cheap (shared storage).
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

struct GroupData {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    orders: Vec<usize>,
    exponent: usize,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    fingerprint: u64,
    permutations: Option<Vec<Vec<usize>>>,
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

impl FiniteGroup {
    /// Closure of permutation generators, all acting on the same number of points.
    /// The product `a * b` is the composition `a ∘ b` (apply `b` first).
    pub fn from_permutations(generators: &[Vec<usize>], max_order: usize) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} acts on {} points, expected {degree}",
                    g.len()
                )));
            }
            if !is_permutation(g) {
                return Err(Error::InvalidGroup(format!("generator {i} is not a bijection")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for g in generators {
                let p = compose(&elements[cur], g);
                if !index.contains_key(&p) {
                    if elements.len() >= max_order {
                        return Err(Error::GroupTooLarge { cap: max_order });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elements[a], &elements[b])]).collect())
            .collect();
        let gens = generators.iter().map(|g| index[g]).collect();
        Ok(Self::assemble(mul, gens, Some(elements)))
    }

    /// A group from an explicit composition table `table[a][b] = a * b` over
    /// arbitrary ids `0..n`. The table is fully validated (identity, inverses,
    /// associativity) and relabelled into canonical breadth-first order.
    ///
    /// When `generators` is `None`, the least ids that are not yet generated are
    /// chosen greedily. Returns the group and the map from input ids to canonical ids.
    pub fn from_table(
        table: &[Vec<usize>],
        generators: Option<&[usize]>,
        max_order: usize,
    ) -> Result<(Self, Vec<usize>)> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > max_order {
            return Err(Error::GroupTooLarge { cap: max_order });
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has length {}, expected {n}", row.len())));
            }
            if !is_permutation(row) {
                return Err(Error::InvalidGroup(format!("row {a} is not a permutation of the elements")));
            }
        }
        for b in 0..n {
            let col: Vec<usize> = (0..n).map(|a| table[a][b]).collect();
            if !is_permutation(&col) {
                return Err(Error::InvalidGroup(format!("column {b} is not a permutation of the elements")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative: ({a}*{b})*{c} != {a}*({b}*{c})"
                        )));
                    }
                }
            }
        }

        let gens: Vec<usize> = match generators {
            Some(g) => {
                if let Some(&bad) = g.iter().find(|&&x| x >= n) {
                    return Err(Error::InvalidGroup(format!("generator id {bad} out of range")));
                }
                g.to_vec()
            }
            None => {
                let mut gens = Vec::new();
                let mut span = closure_ids(table, e, &gens);
                for x in 0..n {
                    if !span[x] {
                        gens.push(x);
                        span = closure_ids(table, e, &gens);
                    }
                }
                gens
            }
        };

        // Breadth-first relabelling.
        let mut new_of = vec![usize::MAX; n];
        let mut old_of = vec![e];
        new_of[e] = 0;
        let mut queue = VecDeque::from([e]);
        while let Some(cur) = queue.pop_front() {
            for &g in &gens {
                let p = table[cur][g];
                if new_of[p] == usize::MAX {
                    new_of[p] = old_of.len();
                    old_of.push(p);
                    queue.push_back(p);
                }
            }
        }
        if old_of.len() != n {
            return Err(Error::InvalidGroup("generators do not generate the whole table".into()));
        }
        let mul = (0..n)
            .map(|a| (0..n).map(|b| new_of[table[old_of[a]][old_of[b]]]).collect())
            .collect();
        let new_gens = gens.iter().map(|&g| new_of[g]).collect();
        Ok((Self::assemble(mul, new_gens, None), new_of))
    }

    /// The cyclic group of order `n` (ids are powers of the generator).
    pub fn cyclic(n: usize) -> Self {
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[gen], n.max(1)).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        Self::from_permutations(&[], 1).expect("trivial group")
    }

    fn assemble(mul: Vec<Vec<usize>>, generators: Vec<usize>, permutations: Option<Vec<Vec<usize>>>) -> Self {
        let n = mul.len();
        let inv: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| mul[a][b] == 0).expect("inverse")).collect();
        let orders: Vec<usize> = (0..n)
            .map(|a| {
                let (mut x, mut k) = (a, 1);
                while x != 0 {
                    x = mul[x][a];
                    k += 1;
                }
                k
            })
            .collect();
        let exponent = orders.iter().fold(1, |acc, &o| lcm(acc, o));

        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| mul[mul[g][x]][inv[g]]).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                class_of[y] = classes.len();
            }
            classes.push(class);
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        for (k, c) in classes.iter().enumerate() {
            for &y in c {
                class_of[y] = k;
            }
        }

        let mut h = DefaultHasher::new();
        mul.hash(&mut h);
        let fingerprint = h.finish();
        Self(Arc::new(GroupData {
            mul,
            inv,
            generators,
            orders,
            exponent,
            classes,
            class_of,
            fingerprint,
            permutations,
        }))
    }

    pub fn order(&self) -> usize {
        self.0.mul.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }

    /// `g x g^{-1}`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.0.orders[a]
    }

    /// Least common multiple of the element orders; the conductor of every character.
    pub fn exponent(&self) -> usize {
        self.0.exponent
    }

    /// Conjugacy classes sorted by `(size, least element id)`; members sorted.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.0.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.0.class_of[a]
    }

    pub fn num_classes(&self) -> usize {
        self.0.classes.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.num_classes() == self.order()
    }

    /// Permutation realisation of each element, when built from permutations.
    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.0.permutations.as_deref()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.0.mul
    }

    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.fingerprint == other.0.fingerprint && self.0.mul == other.0.mul
    }
}

fn closure_ids(table: &[Vec<usize>], e: usize, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; table.len()];
    seen[e] = true;
    let mut stack = vec![e];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = table[x][g];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.0.generators)
            .field("classes", &self.num_classes())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other)
    }
}

impl Eq for FiniteGroup {}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![0, 2, 1]], 100).unwrap()
    }

    #[test]
    fn single_transposition_has_order_two() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0]], 100).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn two_transpositions_generate_s3() {
        // Brute-force oracle: every product of up to 5 generators stays within 6 distinct permutations.
        let gens = [vec![1, 0, 2], vec![0, 2, 1]];
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![vec![0, 1, 2]];
        for _ in 0..5 {
            let mut next = Vec::new();
            for p in &frontier {
                seen.insert(p.clone());
                for g in &gens {
                    next.push(compose(p, g));
                }
            }
            frontier = next;
        }
        assert_eq!(seen.len(), 6);
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn breadth_first_ids() {
        let g = FiniteGroup::cyclic(5);
        let gen = g.generators()[0];
        assert_eq!(gen, 1);
        for k in 0..5 {
            assert_eq!(g.pow(gen, k), k);
        }
    }

    #[test]
    fn rejects_non_bijection_and_cap() {
        assert!(FiniteGroup::from_permutations(&[vec![0, 0]], 10).is_err());
        assert!(FiniteGroup::from_permutations(&[vec![0, 1], vec![0, 1, 2]], 10).is_err());
        let err = FiniteGroup::from_permutations(&[vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]], 50).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { cap: 50 }));
    }

    #[test]
    fn table_without_identity_is_rejected() {
        // Row/column Latin square but no identity: x*y = x+y+1 mod 2 has identity 1; use a 3x3 one without.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        // Identity of this table is 2; break it by swapping rows.
        let broken = vec![t[1].clone(), t[0].clone(), t[2].clone()];
        assert!(FiniteGroup::from_table(&t, None, 10).is_ok());
        let err = FiniteGroup::from_table(&broken, None, 10).unwrap_err();
        assert!(matches!(err, Error::InvalidGroup(_)), "{err}");
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // A Latin square with identity 0 that is not a group (order-5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(&t, None, 10).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }

    #[test]
    fn table_round_trip_relabels() {
        let g = s3();
        // Scramble ids with a fixed permutation and rebuild.
        let perm = [3, 5, 0, 1, 4, 2];
        let n = g.order();
        let mut t = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                t[perm[a]][perm[b]] = perm[g.mul(a, b)];
            }
        }
        let (h, map) = FiniteGroup::from_table(&t, None, 100).unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(map[perm[0]], 0);
        let sizes: Vec<usize> = h.classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn conjugacy_classes() {
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(c2.classes(), &[vec![0], vec![1]]);
        // Oracle: brute-force conjugation of every pair.
        let g = s3();
        let n = g.order();
        let mut brute: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let mut c: Vec<usize> = (0..n).map(|y| g.mul(g.mul(y, x), g.inv(y))).collect();
            c.sort();
            c.dedup();
            if !brute.contains(&c) {
                brute.push(c);
            }
        }
        brute.sort_by_key(|c| (c.len(), c[0]));
        assert_eq!(g.classes(), brute.as_slice());
        let sizes: Vec<usize> = g.classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        let c7 = FiniteGroup::cyclic(7);
        assert_eq!(c7.num_classes(), 7);
    }
}
