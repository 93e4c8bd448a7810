//! Evaluation of the equivariant and basic index formulas
//!
//! `ind^ρ = A₀^ρ + Σ_j β(Σ_j)`,
//! `β = 1/(2 dim V_ρ) · Σ_b 1/(n_b · rank W^b) · (−η_b + h_b) · A^ρ_{j,b}`,
//!
//! from supplied per-stratum data. In basic mode `dim V_ρ` is 1.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::{rational_to_json, rational_to_string, RationalJson};
use crate::strataformula::StrataEulerBreakdown;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Equivariant,
    Basic,
}

/// One fine component `b` of a singular stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FineEntry {
    pub n_b: u64,
    pub rank: u64,
    pub eta: BigRational,
    pub h: u64,
    /// `A^ρ_{j,b}` per irreducible index.
    pub integrals: BTreeMap<usize, BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRecord {
    pub id: String,
    pub entries: Vec<FineEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexData {
    pub mode: Mode,
    /// `dim V_ρ` per irreducible index.
    pub dims: BTreeMap<usize, u64>,
    /// `A₀^ρ` per irreducible index.
    pub principal: BTreeMap<usize, BigRational>,
    pub strata: Vec<StratumRecord>,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `β(Σ_j)` for irreducible `rho` with `dim V_ρ = dim`.
pub fn beta_term(record: &StratumRecord, rho: usize, dim: u64, mode: Mode) -> Result<BigRational> {
    if mode == Mode::Basic && dim != 1 {
        return Err(Error::InvalidIndexData(format!("basic mode needs dim V_ρ = 1, got {dim}")));
    }
    if dim == 0 {
        return Err(Error::InvalidIndexData(format!("dim V_{rho} is zero")));
    }
    let mut sum = BigRational::zero();
    for (i, e) in record.entries.iter().enumerate() {
        if e.n_b == 0 || e.rank == 0 {
            return Err(Error::InvalidIndexData(format!("stratum {} entry {i}: n_b and rank must be positive", record.id)));
        }
        let a = e
            .integrals
            .get(&rho)
            .ok_or_else(|| Error::InvalidIndexData(format!("stratum {} entry {i}: no integral for ρ = {rho}", record.id)))?;
        sum += (int(e.h) - &e.eta) * a / int(e.n_b * e.rank);
    }
    let prefactor = match mode {
        Mode::Equivariant => half() / int(dim),
        Mode::Basic => half(),
    };
    Ok(prefactor * sum)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBreakdown {
    pub rho: usize,
    pub principal: BigRational,
    /// Stratum id and its `β`.
    pub betas: Vec<(String, BigRational)>,
    pub total: BigRational,
    pub warning: Option<String>,
}

impl IndexBreakdown {
    pub fn is_integral(&self) -> bool {
        self.total.is_integer()
    }

    pub fn to_json(&self) -> Value {
        let betas: Vec<Value> =
            self.betas.iter().map(|(id, b)| serde_json::json!({"stratum": id, "beta": rational_to_json(b)})).collect();
        serde_json::json!({
            "rho": self.rho,
            "principal": rational_to_json(&self.principal),
            "betas": betas,
            "total": rational_to_json(&self.total),
            "integral": self.is_integral(),
            "warning": self.warning,
        })
    }
}

/// `A₀^ρ + Σ_j β(Σ_j)`. A non-integer total is returned with a warning.
pub fn assemble_index(data: &IndexData, rho: usize) -> Result<IndexBreakdown> {
    let principal = data
        .principal
        .get(&rho)
        .cloned()
        .ok_or_else(|| Error::InvalidIndexData(format!("no principal integral for ρ = {rho}")))?;
    let dim = match data.mode {
        Mode::Basic => data.dims.get(&rho).copied().unwrap_or(1),
        Mode::Equivariant => {
            data.dims.get(&rho).copied().ok_or_else(|| Error::InvalidIndexData(format!("no dim V_ρ for ρ = {rho}")))?
        }
    };
    let mut total = principal.clone();
    let mut betas = Vec::with_capacity(data.strata.len());
    for record in &data.strata {
        let b = beta_term(record, rho, dim, data.mode)?;
        total += &b;
        betas.push((record.id.clone(), b));
    }
    let warning = (!total.is_integer()).then(|| {
        format!("index for ρ = {rho} is {}, not an integer; the input data are inconsistent", rational_to_string(&total))
    });
    Ok(IndexBreakdown { rho, principal, betas, total, warning })
}

impl IndexData {
    /// Entrywise sum of the integrands `A₀^ρ` and `A^ρ_{j,b}`; everything else
    /// must agree.
    pub fn add(&self, other: &IndexData) -> Result<IndexData> {
        let shape = |d: &IndexData| {
            (
                d.mode,
                d.dims.clone(),
                d.principal.keys().copied().collect::<Vec<_>>(),
                d.strata
                    .iter()
                    .map(|s| {
                        let e: Vec<_> = s
                            .entries
                            .iter()
                            .map(|e| (e.n_b, e.rank, e.eta.clone(), e.h, e.integrals.keys().copied().collect::<Vec<_>>()))
                            .collect();
                        (s.id.clone(), e)
                    })
                    .collect::<Vec<_>>(),
            )
        };
        if shape(self) != shape(other) {
            return Err(Error::InvalidIndexData("index data differ in more than their integrands".into()));
        }
        let mut out = self.clone();
        for (k, v) in &mut out.principal {
            *v += &other.principal[k];
        }
        for (s, t) in out.strata.iter_mut().zip(&other.strata) {
            for (e, f) in s.entries.iter_mut().zip(&t.entries) {
                for (k, v) in &mut e.integrals {
                    *v += &f.integrals[k];
                }
            }
        }
        Ok(out)
    }

    /// De Rham data reproducing a stratified Euler characteristic computation:
    /// `A₀^ρ` is the principal product over `deg ρ`, and each singular component
    /// gets one entry with `n_b = rank = 1`, `η = 0`, `h = 1` and integral twice
    /// its product, so that `ind^ρ = χ^ρ / deg ρ`.
    pub fn from_breakdowns(breakdowns: &[StrataEulerBreakdown], degrees: &[u64]) -> Result<IndexData> {
        if breakdowns.len() != degrees.len() {
            return Err(Error::InvalidIndexData("one breakdown per irreducible is required".into()));
        }
        let ids: Vec<String> = breakdowns.first().map(|b| b.singular.iter().map(|t| t.component.clone()).collect()).unwrap_or_default();
        let mut dims = BTreeMap::new();
        let mut principal = BTreeMap::new();
        let mut strata: Vec<StratumRecord> = ids
            .iter()
            .map(|id| StratumRecord {
                id: id.clone(),
                entries: vec![FineEntry { n_b: 1, rank: 1, eta: BigRational::zero(), h: 1, integrals: BTreeMap::new() }],
            })
            .collect();
        for (b, &deg) in breakdowns.iter().zip(degrees) {
            if b.singular.iter().map(|t| &t.component).ne(ids.iter()) {
                return Err(Error::InvalidIndexData("breakdowns list different components".into()));
            }
            dims.insert(b.rho, deg);
            principal.insert(b.rho, BigRational::new(BigInt::from(b.principal.product), BigInt::from(deg)));
            for (record, term) in strata.iter_mut().zip(&b.singular) {
                record.entries[0].integrals.insert(b.rho, BigRational::from_integer(BigInt::from(2 * term.product)));
            }
        }
        Ok(IndexData { mode: Mode::Equivariant, dims, principal, strata })
    }

    pub fn to_spec(&self) -> IndexDataSpec {
        let q = |v: &BigRational| -> RationalJson {
            use num::ToPrimitive;
            let (n, d) = (v.numer().to_i64().expect("fits i64"), v.denom().to_i64().expect("fits i64"));
            if d == 1 {
                RationalJson::Integer(n)
            } else {
                RationalJson::Pair([n, d])
            }
        };
        IndexDataSpec {
            mode: self.mode,
            dims: self.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            principal: self.principal.iter().map(|(k, v)| (k.to_string(), q(v))).collect(),
            strata: self
                .strata
                .iter()
                .map(|s| StratumSpec {
                    id: s.id.clone(),
                    entries: s
                        .entries
                        .iter()
                        .map(|e| EntrySpec {
                            n_b: e.n_b,
                            rank: e.rank,
                            eta: q(&e.eta),
                            h: e.h,
                            integrals: e.integrals.iter().map(|(k, v)| (k.to_string(), q(v))).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub n_b: u64,
    pub rank: u64,
    pub eta: RationalJson,
    pub h: u64,
    pub integrals: BTreeMap<String, RationalJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub id: String,
    pub entries: Vec<EntrySpec>,
}

/// Index data file. Rationals are integers or `[numerator, denominator]`;
/// per-ρ maps are keyed by irreducible index.
///
/// ```json
/// {"mode": "equivariant", "dims": {"0": 1}, "principal": {"0": 0},
///  "strata": [{"id": "S0", "entries": [
///     {"n_b": 1, "rank": 1, "eta": [1, 2], "h": 1, "integrals": {"0": 2}}]}]}
/// ```
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexDataSpec {
    pub mode: Mode,
    #[serde(default)]
    pub dims: BTreeMap<String, u64>,
    pub principal: BTreeMap<String, RationalJson>,
    #[serde(default)]
    pub strata: Vec<StratumSpec>,
}

fn key(s: &str, field: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::InvalidIndexData(format!("{field}: key {s:?} is not an irreducible index")))
}

impl IndexDataSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<IndexData> {
        let mut dims = BTreeMap::new();
        for (k, &v) in &self.dims {
            if v == 0 {
                return Err(Error::InvalidIndexData(format!("dims.{k} is zero")));
            }
            if self.mode == Mode::Basic && v != 1 {
                return Err(Error::InvalidIndexData(format!("dims.{k} is {v}; basic mode needs 1")));
            }
            dims.insert(key(k, "dims")?, v);
        }
        let mut principal = BTreeMap::new();
        for (k, v) in &self.principal {
            principal.insert(key(k, "principal")?, v.to_rational()?);
        }
        let mut strata = Vec::with_capacity(self.strata.len());
        for (j, s) in self.strata.iter().enumerate() {
            let mut entries = Vec::with_capacity(s.entries.len());
            for (i, e) in s.entries.iter().enumerate() {
                if e.n_b == 0 || e.rank == 0 {
                    return Err(Error::InvalidIndexData(format!("strata[{j}].entries[{i}]: n_b and rank must be positive")));
                }
                let mut integrals = BTreeMap::new();
                for (k, v) in &e.integrals {
                    integrals.insert(key(k, &format!("strata[{j}].entries[{i}].integrals"))?, v.to_rational()?);
                }
                entries.push(FineEntry { n_b: e.n_b, rank: e.rank, eta: e.eta.to_rational()?, h: e.h, integrals });
            }
            strata.push(StratumRecord { id: s.id.clone(), entries });
        }
        Ok(IndexData { mode: self.mode, dims, principal, strata })
    }
}
