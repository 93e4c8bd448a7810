use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::grouprep::{ClassFunction, Subgroup};

use super::action::GComplex;
use super::complex::SimplicialComplex;
use super::strata::StratumComponent;

/// The ±1 character of the isotropy group at a basepoint recording whether an
/// element preserves or reverses the orientation of the normal slice to a
/// stratum component.
#[derive(Clone, Debug)]
pub struct OrientationCharacter {
    pub component: String,
    pub basepoint: usize,
    pub stabilizer: Subgroup,
    values: BTreeMap<usize, i8>,
}

impl OrientationCharacter {
    pub fn value(&self, g: usize) -> Result<i8> {
        self.values.get(&g).copied().ok_or(Error::NotStabilizing { element: g })
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|&v| v == 1)
    }

    /// Element id -> sign, for every element of the stabilizer.
    pub fn values(&self) -> &BTreeMap<usize, i8> {
        &self.values
    }

    /// As a class function on the stabilizer viewed as a standalone group.
    pub fn as_class_function(&self) -> ClassFunction {
        let emb = self.stabilizer.embedded();
        let n = emb.group.exponent();
        let per_element: Vec<Cyclotomic> =
            emb.to_parent.iter().map(|g| Cyclotomic::from_integer(n, i64::from(self.values[g]))).collect();
        ClassFunction::from_element_values(&emb.group, &per_element).expect("characters are class functions")
    }
}

/// Coherent orientation of the top simplices around `x` in `complex`, which
/// must look like a cone on a closed orientable pseudomanifold of dimension
/// `dim - 1` with the Euler characteristic of a sphere. Returns simplex -> sign.
fn local_orientation(complex: &SimplicialComplex, x: usize, dim: usize) -> Result<HashMap<Vec<usize>, i8>> {
    let fail = |reason: String| Error::NotPseudomanifold { vertex: complex.label(x).to_string(), reason };
    let star: Vec<&Vec<usize>> = complex.simplices().iter().filter(|s| s.contains(&x)).collect();
    let tops: Vec<&Vec<usize>> = star.iter().copied().filter(|s| s.len() == dim + 1).collect();
    if star.iter().any(|s| s.len() > dim + 1) {
        return Err(fail(format!("star contains simplices above dimension {dim}")));
    }
    for s in &star {
        if !tops.iter().any(|t| s.iter().all(|v| t.contains(v))) {
            return Err(fail(format!("{} is not a face of a top simplex", complex.format_simplex(s))));
        }
    }
    let mut signs = HashMap::new();
    if dim == 0 {
        signs.insert(vec![x], 1);
        return Ok(signs);
    }
    // Link Euler characteristic must be that of S^{dim-1}.
    let link_euler: i64 = star.iter().filter(|s| s.len() > 1).map(|s| if s.len() % 2 == 0 { 1 } else { -1 }).sum();
    let sphere = if dim % 2 == 1 { 2 } else { 0 };
    if link_euler != sphere {
        return Err(fail(format!("link has Euler characteristic {link_euler}, expected {sphere}")));
    }

    let mut ridge_tops: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (t, top) in tops.iter().enumerate() {
        for (i, &v) in top.iter().enumerate() {
            if v != x {
                let mut ridge = (*top).clone();
                ridge.remove(i);
                ridge_tops.entry(ridge).or_default().push(t);
            }
        }
    }
    if let Some((r, ts)) = ridge_tops.iter().find(|(_, ts)| ts.len() != 2) {
        return Err(fail(format!("{} lies in {} top simplices", complex.format_simplex(r), ts.len())));
    }
    let omitted = |top: &Vec<usize>, ridge: &Vec<usize>| top.iter().position(|v| !ridge.contains(v)).expect("ridge");
    let mut sign: Vec<Option<i8>> = vec![None; tops.len()];
    sign[0] = Some(1);
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let st = sign[t].expect("assigned");
        for (ridge, ts) in &ridge_tops {
            if !ts.contains(&t) {
                continue;
            }
            let u = if ts[0] == t { ts[1] } else { ts[0] };
            let parity = (omitted(tops[t], ridge) + omitted(tops[u], ridge)) % 2;
            let su = if parity == 0 { -st } else { st };
            match sign[u] {
                None => {
                    sign[u] = Some(su);
                    queue.push_back(u);
                }
                Some(s) if s != su => return Err(fail("star is not orientable".into())),
                Some(_) => {}
            }
        }
    }
    if sign.iter().any(Option::is_none) {
        return Err(fail("link is not strongly connected".into()));
    }
    for (t, top) in tops.iter().enumerate() {
        signs.insert((*top).clone(), sign[t].expect("assigned"));
    }
    Ok(signs)
}

fn permutation_sign(v: &[usize]) -> i8 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the action of `g` (fixing `x`) on the local top homology class.
fn local_sign(x: &GComplex, signs: &HashMap<Vec<usize>, i8>, g: usize) -> Result<i8> {
    let mut result = None;
    for (top, &s) in signs {
        let image: Vec<usize> = top.iter().map(|&v| x.act_vertex(g, v)).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        let target = signs
            .get(&sorted)
            .ok_or_else(|| Error::Defect("stabilizer does not preserve the star".into()))?;
        let value = s * permutation_sign(&image) * target;
        match result {
            None => result = Some(value),
            Some(r) if r != value => return Err(Error::Defect("local orientation sign is not well defined".into())),
            Some(_) => {}
        }
    }
    Ok(result.unwrap_or(1))
}

/// `ε(g) = sign_M(g) · sign_Σ(g)` for `g` in the isotropy group of `basepoint`.
pub fn orientation_character(
    x: &GComplex,
    component: &StratumComponent,
    basepoint: usize,
) -> Result<OrientationCharacter> {
    x.require_regularized()?;
    let k = x.complex();
    let vid = k.id_of(&[basepoint]).ok_or_else(|| Error::InvalidComplex(format!("no vertex {basepoint}")))?;
    if component.simplices.binary_search(&vid).is_err() {
        return Err(Error::Stratification(format!(
            "basepoint {} does not lie in component {}",
            k.label(basepoint),
            component.id
        )));
    }
    let dim = k.dimension().max(0) as usize;
    let ambient = local_orientation(k, basepoint, dim)?;
    let along = local_orientation(&component.closure, basepoint, component.dimension)?;
    let stabilizer = x.vertex_stabilizer(basepoint);
    let mut values = BTreeMap::new();
    for &g in stabilizer.elements() {
        let e = local_sign(x, &ambient, g)? * local_sign(x, &along, g)?;
        values.insert(g, e);
    }
    let group = x.group();
    for (&a, &ea) in &values {
        for (&b, &eb) in &values {
            if values[&group.mul(a, b)] != ea * eb {
                return Err(Error::Defect("orientation character is not multiplicative".into()));
            }
        }
    }
    if values[&group.identity()] != 1 {
        return Err(Error::Defect("orientation character is not 1 at the identity".into()));
    }
    Ok(OrientationCharacter { component: component.id.clone(), basepoint, stabilizer, values })
}
