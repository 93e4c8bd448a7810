//! Brute-force equivariant Euler multiplicities from Lefschetz numbers.
//!
//! For a finite group acting simplicially, the multiplicity of an irreducible
//! `ρ` in the virtual representation `Σ_k (-1)^k H_k(X; C)` is
//! `ind^ρ = (1/|G|) Σ_g L(g) · conj(χ_ρ(g))`, and the Lefschetz number `L(g)` is
//! both the alternating chain-level trace of `g` and `χ(X^g)`.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gcomplex::GComplex;
use crate::grouprep::{inner_product, CharacterTable, ClassFunction, Subgroup};

/// The two independent evaluations of `L(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzNumber {
    pub element: usize,
    /// `Σ_k (-1)^k tr(g | C_k)`.
    pub trace: i64,
    /// `χ(X^g)`.
    pub fixed_set: i64,
}

/// Alternating trace of `g` on the oriented simplicial chains. Valid on any
/// `G`-complex: a simplex mapped to itself contributes the sign of the vertex
/// permutation it undergoes.
pub fn chain_trace(x: &GComplex, g: usize) -> i64 {
    let k = x.complex();
    let mut total = 0;
    for s in k.simplices() {
        if x.act(g, s) != *s {
            continue;
        }
        let image: Vec<usize> = s.iter().map(|&v| x.act_vertex(g, v)).collect();
        let sign = if inversions(&image) % 2 == 0 { 1 } else { -1 };
        let dim_sign = if s.len() % 2 == 1 { 1 } else { -1 };
        total += sign * dim_sign;
    }
    total
}

fn inversions(v: &[usize]) -> usize {
    (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
}

/// Both evaluations of `L(g)`; they must agree on a regularized complex.
pub fn lefschetz_pair(x: &GComplex, g: usize) -> Result<LefschetzNumber> {
    let trace = chain_trace(x, g);
    let cyclic = Subgroup::generated_by(x.group(), &[g])?;
    let fixed_set = x.fixed_subcomplex(&cyclic)?.complex.euler_characteristic();
    Ok(LefschetzNumber { element: g, trace, fixed_set })
}

/// `L(g)`, computed by chain trace and by fixed-set Euler characteristic.
pub fn lefschetz_number(x: &GComplex, g: usize) -> Result<i64> {
    let pair = lefschetz_pair(x, g)?;
    if pair.trace != pair.fixed_set {
        return Err(Error::Defect(format!(
            "Lefschetz number of element {g}: trace {} but fixed set has χ = {}",
            pair.trace, pair.fixed_set
        )));
    }
    Ok(pair.trace)
}

/// Per-irreducible Euler multiplicities together with the Lefschetz numbers they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    /// `L(g)` per element id.
    pub lefschetz: Vec<i64>,
    /// `ind^ρ` per irreducible index.
    pub multiplicities: Vec<i64>,
    /// `deg ρ` per irreducible index.
    pub degrees: Vec<u64>,
    /// `χ^ρ(X) = deg(ρ) · ind^ρ`.
    pub chi_rho: Vec<i64>,
}

impl MultiplicityReport {
    /// `{"lefschetz": {"g": L}, "multiplicities": {"rho": ind}, "chi_rho": {"rho": χ^ρ}}`
    pub fn to_json(&self) -> serde_json::Value {
        let l: BTreeMap<String, i64> = self.lefschetz.iter().enumerate().map(|(g, &v)| (g.to_string(), v)).collect();
        let m: BTreeMap<String, i64> =
            self.multiplicities.iter().enumerate().map(|(r, &v)| (r.to_string(), v)).collect();
        let c: BTreeMap<String, i64> = self.chi_rho.iter().enumerate().map(|(r, &v)| (r.to_string(), v)).collect();
        serde_json::json!({ "lefschetz": l, "multiplicities": m, "chi_rho": c })
    }

    /// `Σ_ρ deg(ρ) · ind^ρ`, which equals `L(e) = χ(X)`.
    pub fn degree_weighted_sum(&self) -> i64 {
        self.chi_rho.iter().sum()
    }
}

/// The Lefschetz numbers as a class function.
pub fn lefschetz_character(x: &GComplex) -> Result<(Vec<i64>, ClassFunction)> {
    let group = x.group();
    let n = group.exponent();
    let values = (0..group.order()).map(|g| lefschetz_number(x, g)).collect::<Result<Vec<_>>>()?;
    let per_element: Vec<Cyclotomic> = values.iter().map(|&v| Cyclotomic::from_integer(n, v)).collect();
    let cf = ClassFunction::from_element_values(group, &per_element)
        .map_err(|_| Error::Defect("Lefschetz numbers are not a class function".into()))?;
    Ok((values, cf))
}

/// `ind^ρ = (1/|G|) Σ_g L(g) conj(χ_ρ(g))` for every irreducible, checked to be integers.
pub fn equivariant_multiplicities(x: &GComplex, table: &CharacterTable) -> Result<MultiplicityReport> {
    x.require_regularized()?;
    if !table.group().same_group(x.group()) {
        return Err(Error::GroupMismatch);
    }
    let (lefschetz, l) = lefschetz_character(x)?;
    let mut multiplicities = Vec::with_capacity(table.len());
    for chi in table.characters() {
        let ip = inner_product(&l, chi)?;
        let v = ip.to_i64().ok_or_else(|| {
            Error::Defect(format!("multiplicity of irreducible {} is {ip}, not an integer", chi.index().unwrap_or(0)))
        })?;
        multiplicities.push(v);
    }
    let degrees: Vec<u64> = table.characters().iter().map(|c| c.degree()).collect();
    let chi_rho = multiplicities.iter().zip(&degrees).map(|(&m, &d)| m * d as i64).collect();
    Ok(MultiplicityReport { lefschetz, multiplicities, degrees, chi_rho })
}

/// `Σ_ρ ind^ρ ⟨φ, χ_ρ⟩`: the distributional index paired with a class function.
pub fn distributional_pairing(
    report: &MultiplicityReport,
    table: &CharacterTable,
    phi: &ClassFunction,
) -> Result<Cyclotomic> {
    if report.multiplicities.len() != table.len() {
        return Err(Error::GroupMismatch);
    }
    let mut acc = Cyclotomic::zero(table.group().exponent());
    for (chi, &m) in table.characters().iter().zip(&report.multiplicities) {
        let ip = inner_product(phi, chi)?;
        acc = &acc + &ip.scale(&BigRational::from_integer(BigInt::from(m)));
    }
    Ok(acc)
}
