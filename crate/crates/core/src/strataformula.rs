//! The stratified formula for the equivariant Euler characteristic
//!
//! `χ^ρ(M) = χ^ρ(G/H_pr)·χ(G\M, G\M_sing) + Σ_j χ^ρ(G/G_j, L_j)·χ(G\Σ̄_j, G\(Σ̄_j − Σ_j))`,
//!
//! with every ingredient taken from the orbit-type stratification, and its
//! comparison against the Lefschetz oracle.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gcomplex::{
    orbit_type_stratification, orientation_character, relative_euler, require_codimension_two, singular_set,
    GComplex, OrbitSpace, OrientationCharacter,
};
use crate::grouprep::{CharacterTable, Character, Subgroup};
use crate::lefschetz::equivariant_multiplicities;

/// `deg(ρ) · ⟨Res_H χ_ρ, ε⟩_H`, with `ε` a ±1 character of `H` given per element
/// (`None` means trivial).
pub fn chi_rho_homogeneous(h: &Subgroup, epsilon: Option<&BTreeMap<usize, i8>>, rho: &Character) -> Result<i64> {
    if !rho.group().same_group(h.parent()) {
        return Err(Error::GroupMismatch);
    }
    let group = h.parent();
    let sign = |g: usize| -> Result<i8> {
        match epsilon {
            None => Ok(1),
            Some(map) => match map.get(&g) {
                Some(&v) if v == 1 || v == -1 => Ok(v),
                Some(&v) => Err(Error::InvalidIndexData(format!("orientation character takes value {v}"))),
                None => Err(Error::NotStabilizing { element: g }),
            },
        }
    };
    if let Some(map) = epsilon {
        if let Some(&g) = map.keys().find(|g| !h.contains(**g)) {
            return Err(Error::NotStabilizing { element: g });
        }
        for &a in h.elements() {
            for &b in h.elements() {
                if sign(group.mul(a, b))? != sign(a)? * sign(b)? {
                    return Err(Error::InvalidIndexData("orientation values are not a character".into()));
                }
            }
        }
    }
    let mut sum = Cyclotomic::zero(group.exponent());
    for &g in h.elements() {
        let v = rho.value_at(g);
        sum = if sign(g)? == 1 { &sum + v } else { &sum - v };
    }
    let ip = sum.scale(&BigRational::new(BigInt::from(1), BigInt::from(h.order())));
    let m = ip
        .to_i64()
        .ok_or_else(|| Error::Defect(format!("restriction multiplicity {ip} is not an integer")))?;
    Ok(m * rho.degree() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalTerm {
    /// Element ids of the principal isotropy representative.
    pub isotropy: Vec<usize>,
    pub chi_rho: i64,
    /// `χ(G\M, G\M_sing)`.
    pub relative_euler: i64,
    pub product: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularTerm {
    pub component: String,
    pub stratum: usize,
    pub codimension: usize,
    pub isotropy: Vec<usize>,
    pub basepoint: String,
    /// Element id -> ±1.
    pub orientation: BTreeMap<usize, i8>,
    pub chi_rho: i64,
    /// `χ(G\Σ̄, G\(Σ̄ − Σ))`.
    pub relative_euler: i64,
    pub product: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrataEulerBreakdown {
    pub rho: usize,
    pub principal: PrincipalTerm,
    pub singular: Vec<SingularTerm>,
    pub total: i64,
}

impl StrataEulerBreakdown {
    /// `total` equals the sum of the recorded products.
    pub fn is_consistent(&self) -> bool {
        self.principal.product + self.singular.iter().map(|t| t.product).sum::<i64>() == self.total
    }
}

struct ComponentData {
    component: String,
    stratum: usize,
    codimension: usize,
    basepoint: String,
    orientation: OrientationCharacter,
    relative_euler: i64,
}

/// The `ρ`-independent part of the formula, computed once per complex.
pub struct StrataEvaluation {
    principal: Subgroup,
    principal_relative: i64,
    components: Vec<ComponentData>,
}

impl StrataEvaluation {
    /// Stratifies, checks codimension, builds the orbit space and the
    /// orientation characters (rechecked at a second basepoint when there is one).
    pub fn new(x: &GComplex) -> Result<Self> {
        let strata = orbit_type_stratification(x)?;
        require_codimension_two(&strata)?;
        let quotient = OrbitSpace::new(x)?;
        let sing = singular_set(x, &strata);
        let principal_relative = relative_euler(&quotient.complex, &quotient.image(&sing))?;
        let k = x.complex();
        let mut components = Vec::new();
        for stratum in strata.iter().skip(1) {
            for c in &stratum.components {
                let basepoints = c.basepoints(x);
                let &first = basepoints.first().ok_or_else(|| {
                    Error::Stratification(format!("component {} has no vertex with the stratum isotropy", c.id))
                })?;
                let orientation = orientation_character(x, c, first)?;
                if let Some(&second) = basepoints.get(1) {
                    let other = orientation_character(x, c, second)?;
                    if other.values() != orientation.values() {
                        return Err(Error::Defect(format!(
                            "orientation character of {} differs at {} and {}",
                            c.id,
                            k.label(first),
                            k.label(second)
                        )));
                    }
                }
                let relative = relative_euler(&quotient.image(&c.closure), &quotient.image(&c.lower))?;
                components.push(ComponentData {
                    component: c.id.clone(),
                    stratum: stratum.index,
                    codimension: c.codimension,
                    basepoint: k.label(first).to_string(),
                    orientation,
                    relative_euler: relative,
                });
            }
        }
        Ok(Self { principal: strata[0].isotropy.clone(), principal_relative, components })
    }

    pub fn evaluate(&self, rho: &Character) -> Result<StrataEulerBreakdown> {
        let chi = chi_rho_homogeneous(&self.principal, None, rho)?;
        let principal = PrincipalTerm {
            isotropy: self.principal.elements().to_vec(),
            chi_rho: chi,
            relative_euler: self.principal_relative,
            product: chi * self.principal_relative,
        };
        let mut singular = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let chi = chi_rho_homogeneous(&c.orientation.stabilizer, Some(c.orientation.values()), rho)?;
            singular.push(SingularTerm {
                component: c.component.clone(),
                stratum: c.stratum,
                codimension: c.codimension,
                isotropy: c.orientation.stabilizer.elements().to_vec(),
                basepoint: c.basepoint.clone(),
                orientation: c.orientation.values().clone(),
                chi_rho: chi,
                relative_euler: c.relative_euler,
                product: chi * c.relative_euler,
            });
        }
        let total = principal.product + singular.iter().map(|t| t.product).sum::<i64>();
        Ok(StrataEulerBreakdown { rho: rho.index().unwrap_or(0), principal, singular, total })
    }
}

/// `χ^ρ(M)` by the stratified formula.
pub fn equivariant_euler_via_strata(x: &GComplex, rho: &Character) -> Result<StrataEulerBreakdown> {
    if !rho.group().same_group(x.group()) {
        return Err(Error::GroupMismatch);
    }
    StrataEvaluation::new(x)?.evaluate(rho)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub rho: usize,
    pub degree: u64,
    /// `deg(ρ) · ind^ρ` from the Lefschetz numbers.
    pub oracle: i64,
    pub formula: i64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum VerificationStatus {
    AllMatch,
    Mismatch,
    Skipped { reason: String, stratum: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    #[serde(flatten)]
    pub status: VerificationStatus,
    pub rows: Vec<VerificationRow>,
    pub breakdowns: Vec<StrataEulerBreakdown>,
}

impl VerificationReport {
    pub fn all_match(&self) -> bool {
        self.status == VerificationStatus::AllMatch
    }
}

/// Compares the stratified formula with the Lefschetz oracle for every irreducible.
/// Codimension-one strata give a skipped report instead of an error.
pub fn verify_strata_vs_oracle(x: &GComplex, table: &CharacterTable) -> Result<VerificationReport> {
    if !table.group().same_group(x.group()) {
        return Err(Error::GroupMismatch);
    }
    let evaluation = match StrataEvaluation::new(x) {
        Ok(e) => e,
        Err(Error::CodimensionOne { stratum, codimension }) => {
            return Ok(VerificationReport {
                status: VerificationStatus::Skipped {
                    reason: format!("singular stratum {stratum} has codimension {codimension}; the formula needs at least 2"),
                    stratum: Some(stratum),
                },
                rows: Vec::new(),
                breakdowns: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let oracle = equivariant_multiplicities(x, table)?;
    let mut rows = Vec::with_capacity(table.len());
    let mut breakdowns = Vec::with_capacity(table.len());
    for (i, rho) in table.characters().iter().enumerate() {
        let b = evaluation.evaluate(rho)?;
        rows.push(VerificationRow {
            rho: i,
            degree: rho.degree(),
            oracle: oracle.chi_rho[i],
            formula: b.total,
            matches: oracle.chi_rho[i] == b.total,
        });
        breakdowns.push(b);
    }
    let status =
        if rows.iter().all(|r| r.matches) { VerificationStatus::AllMatch } else { VerificationStatus::Mismatch };
    Ok(VerificationReport { status, rows, breakdowns })
}
