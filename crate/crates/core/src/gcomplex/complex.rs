use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Sorted, duplicate-free vertex ids.
pub type Simplex = Vec<usize>;

/// A finite abstract simplicial complex.
///
/// Simplices are stored sorted by `(dimension, vertex list)` and addressed by
/// that position. Subcomplexes share the vertex label table of their parent, so
/// vertex ids are comparable between a complex and its subcomplexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    manifold: Option<bool>,
}

impl SimplicialComplex {
    /// The complex generated by `maximal` (all faces are added) plus every listed vertex.
    pub fn from_maximal(labels: Vec<String>, maximal: &[Vec<usize>]) -> Result<Self> {
        let n = labels.len();
        let mut set: BTreeSet<Simplex> = (0..n).map(|v| vec![v]).collect();
        for (i, s) in maximal.iter().enumerate() {
            let mut s = s.clone();
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::InvalidComplex(format!("maximal_simplices[{i}] is empty")));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("maximal_simplices[{i}] repeats a vertex")));
            }
            if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidComplex(format!("maximal_simplices[{i}] uses unknown vertex id {bad}")));
            }
            if s.len() > 24 {
                return Err(Error::InvalidComplex(format!("maximal_simplices[{i}] has dimension above 23")));
            }
            for mask in 1u32..(1 << s.len()) {
                let face: Simplex = s.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect();
                set.insert(face);
            }
        }
        Ok(Self::from_closed_set(labels, set))
    }

    /// A subcomplex given by simplices of `self`; must be closed under faces.
    pub fn subcomplex(&self, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let set: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &set {
            if !self.index.contains_key(s) {
                return Err(Error::NotSubcomplex(format!("{} is not a simplex", self.format_simplex(s))));
            }
            for f in faces(s) {
                if !f.is_empty() && !set.contains(&f) {
                    return Err(Error::NotSubcomplex(format!(
                        "face {} of {} is missing",
                        self.format_simplex(&f),
                        self.format_simplex(s)
                    )));
                }
            }
        }
        Ok(Self::from_closed_set(self.labels.clone(), set))
    }

    /// Subcomplex from simplex ids of `self`, closed by adding all faces.
    pub fn closure_of(&self, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut set = BTreeSet::new();
        for id in ids {
            let s = &self.simplices[id];
            for mask in 1u32..(1 << s.len()) {
                set.insert(s.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        Self::from_closed_set(self.labels.clone(), set)
    }

    /// Full subcomplex on a vertex set: every simplex whose vertices all lie in it.
    pub fn full_subcomplex(&self, vertices: &BTreeSet<usize>) -> Self {
        let set = self.simplices.iter().filter(|s| s.iter().all(|v| vertices.contains(v))).cloned().collect();
        Self::from_closed_set(self.labels.clone(), set)
    }

    pub(crate) fn from_closed_set(labels: Vec<String>, set: BTreeSet<Simplex>) -> Self {
        let mut simplices: Vec<Simplex> = set.into_iter().collect();
        simplices.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { labels, simplices, index, manifold: None }
    }

    pub fn with_manifold_flag(mut self, manifold: Option<bool>) -> Self {
        self.manifold = manifold;
        self
    }

    /// Declared manifold flag from the input, if any.
    pub fn manifold(&self) -> Option<bool> {
        self.manifold
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[id]
    }

    pub fn id_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    /// Vertices present as 0-simplices.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices.iter().take_while(|s| s.len() == 1).map(|s| s[0])
    }

    /// Highest simplex dimension, `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.simplices.last().map_or(-1, |s| s.len() as isize - 1)
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dimension() + 1) as usize];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    /// `Σ_k (-1)^k #(k-simplices)`
    pub fn euler_characteristic(&self) -> i64 {
        euler_of(self.simplices.iter().map(Vec::len))
    }

    /// Simplices that are not proper faces of another simplex.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        let mut is_face = vec![false; self.simplices.len()];
        for s in &self.simplices {
            if s.len() > 1 {
                for f in faces(s) {
                    is_face[self.index[&f]] = true;
                }
            }
        }
        self.simplices.iter().zip(is_face).filter(|(_, f)| !f).map(|(s, _)| s).collect()
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.labels.len());
        for s in &self.simplices {
            for w in s.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in self.vertices() {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort();
        comps
    }

    pub fn format_simplex(&self, s: &[usize]) -> String {
        let names: Vec<&str> = s.iter().map(|&v| self.labels.get(v).map_or("?", String::as_str)).collect();
        format!("[{}]", names.join(","))
    }
}

/// Codimension-one faces, in order of the omitted vertex position.
pub fn faces(s: &[usize]) -> Vec<Simplex> {
    (0..s.len()).map(|i| s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()).collect()
}

pub(crate) fn euler_of(sizes: impl Iterator<Item = usize>) -> i64 {
    sizes.map(|len| if len % 2 == 1 { 1 } else { -1 }).sum()
}

/// `χ(K, L) = χ(K) − χ(L)` for a subcomplex `L ⊆ K`.
pub fn relative_euler(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<i64> {
    if k.labels != l.labels {
        return Err(Error::NotSubcomplex("complexes use different vertex sets".into()));
    }
    if let Some(s) = l.simplices.iter().find(|s| !k.contains(s)) {
        return Err(Error::NotSubcomplex(format!("{} is not a simplex of the ambient complex", l.format_simplex(s))));
    }
    Ok(k.euler_characteristic() - l.euler_characteristic())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller root so representatives are least elements.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    pub(crate) fn octahedron() -> SimplicialComplex {
        // 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z
        let mut tris = Vec::new();
        for x in [0, 1] {
            for y in [2, 3] {
                for z in [4, 5] {
                    tris.push(vec![x, y, z]);
                }
            }
        }
        SimplicialComplex::from_maximal(labels(6), &tris).unwrap()
    }

    #[test]
    fn octahedron_is_a_sphere() {
        let k = octahedron();
        assert_eq!(k.f_vector(), vec![6, 12, 8]);
        assert_eq!(k.euler_characteristic(), 2);
        assert_eq!(k.dimension(), 2);
        assert_eq!(k.components().len(), 1);
        assert_eq!(k.maximal_simplices().len(), 8);
    }

    #[test]
    fn interval_relative_to_endpoints() {
        let k = SimplicialComplex::from_maximal(labels(2), &[vec![0, 1]]).unwrap();
        let ends = k.subcomplex([vec![0], vec![1]]).unwrap();
        assert_eq!(relative_euler(&k, &ends).unwrap(), -1);
    }

    #[test]
    fn subcomplex_errors() {
        let k = SimplicialComplex::from_maximal(labels(3), &[vec![0, 1], vec![1, 2]]).unwrap();
        assert!(k.subcomplex([vec![0, 1]]).is_err());
        assert!(k.subcomplex([vec![0], vec![2], vec![0, 2]]).is_err());
        let other = SimplicialComplex::from_maximal(labels(4), &[vec![0, 3]]).unwrap();
        assert!(relative_euler(&k, &other).is_err());
    }

    #[test]
    fn bad_maximal_simplices() {
        assert!(SimplicialComplex::from_maximal(labels(2), &[vec![0, 0]]).is_err());
        assert!(SimplicialComplex::from_maximal(labels(2), &[vec![0, 2]]).is_err());
        assert!(SimplicialComplex::from_maximal(labels(2), &[vec![]]).is_err());
    }

    #[test]
    fn isolated_vertices_and_components() {
        let k = SimplicialComplex::from_maximal(labels(4), &[vec![1, 2]]).unwrap();
        assert_eq!(k.components(), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(k.euler_characteristic(), 3);
        let sub = k.full_subcomplex(&[0usize, 3].into_iter().collect());
        assert_eq!(sub.components(), vec![vec![0], vec![3]]);
    }
}
