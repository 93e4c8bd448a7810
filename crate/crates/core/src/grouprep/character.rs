use std::ops::Deref;

use num::{BigInt, BigRational, ToPrimitive};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

use super::group::FiniteGroup;
use super::subgroup::Subgroup;

/// A class function with values in `Q(ζ_N)`, one value per conjugacy class
/// (in the group's canonical class order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    group: FiniteGroup,
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(group: &FiniteGroup, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::InvalidTable(format!(
                "class function has {} values for {} classes",
                values.len(),
                group.num_classes()
            )));
        }
        Ok(Self { group: group.clone(), values })
    }

    /// A class function from per-element values; must be constant on classes.
    pub fn from_element_values(group: &FiniteGroup, per_element: &[Cyclotomic]) -> Result<Self> {
        let mut values = Vec::with_capacity(group.num_classes());
        for class in group.classes() {
            let v = &per_element[class[0]];
            if class.iter().any(|&g| &per_element[g] != v) {
                return Err(Error::InvalidTable("values are not constant on a conjugacy class".into()));
            }
            values.push(v.clone());
        }
        Self::new(group, values)
    }

    pub fn constant(group: &FiniteGroup, c: i64) -> Self {
        let n = group.exponent();
        Self { group: group.clone(), values: vec![Cyclotomic::from_integer(n, c); group.num_classes()] }
    }

    /// `|G|` at the identity, 0 elsewhere.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.exponent();
        let mut values = vec![Cyclotomic::zero(n); group.num_classes()];
        values[0] = Cyclotomic::from_integer(n, group.order() as i64);
        Self { group: group.clone(), values }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_at_class(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn value_at(&self, g: usize) -> &Cyclotomic {
        &self.values[self.group.class_of(g)]
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { group: self.group.clone(), values })
    }

    pub fn scale(&self, c: &Cyclotomic) -> ClassFunction {
        Self { group: self.group.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if self.group.same_group(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(1/|G|) Σ_g self(g) · conj(other(g))`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Cyclotomic> {
        inner_product(self, other)
    }

    /// Values on `H`, re-bucketed into the classes of `H` as a standalone group.
    pub fn restrict(&self, h: &Subgroup) -> Result<ClassFunction> {
        if !h.parent().same_group(&self.group) {
            return Err(Error::NotSubgroup("subgroup of a different group".into()));
        }
        let emb = h.embedded();
        let values = emb
            .group
            .classes()
            .iter()
            .map(|class| self.value_at(emb.to_parent[class[0]]).clone())
            .collect();
        Ok(ClassFunction { group: emb.group.clone(), values })
    }

    /// The value as a rational integer at every class, if it is one.
    pub fn integer_values(&self) -> Option<Vec<i64>> {
        self.values.iter().map(Cyclotomic::to_i64).collect()
    }
}

pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<Cyclotomic> {
    a.check_same(b)?;
    let g = &a.group;
    let mut acc = Cyclotomic::zero(g.exponent());
    for (k, class) in g.classes().iter().enumerate() {
        let term = &a.values[k] * &b.values[k].conj();
        acc = &acc + &term.scale(&BigRational::from_integer(BigInt::from(class.len())));
    }
    Ok(acc.scale(&BigRational::new(1.into(), BigInt::from(g.order()))))
}

/// Inner product that must be a nonnegative rational integer (multiplicity).
pub fn multiplicity(a: &ClassFunction, b: &ClassFunction) -> Result<u64> {
    let ip = inner_product(a, b)?;
    ip.to_i64()
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Error::Defect(format!("multiplicity {ip} is not a nonnegative integer")))
}

/// `Ind_H^G σ`, where `σ` is a class function on `h.embedded().group`.
pub fn induce(sigma: &ClassFunction, h: &Subgroup) -> Result<Character> {
    let emb = h.embedded();
    if !sigma.group.same_group(&emb.group) {
        return Err(Error::NotSubgroup("class function is not defined on this subgroup".into()));
    }
    let g = h.parent();
    let n = g.exponent();
    let mut values = Vec::with_capacity(g.num_classes());
    for class in g.classes() {
        let rep = class[0];
        // (1/|H|) Σ_{x∈G} σ°(x^{-1} rep x)
        let mut acc = Cyclotomic::zero(n);
        for x in 0..g.order() {
            let y = g.conjugate(g.inv(x), rep);
            if let Some(local) = emb.from_parent(y) {
                acc = &acc + sigma.value_at(local);
            }
        }
        values.push(acc.scale(&BigRational::new(1.into(), BigInt::from(h.order()))));
    }
    Character::from_class_function(ClassFunction { group: g.clone(), values }, None)
}

/// A character: a class function with its degree, irreducibility flag and,
/// for members of a character table, the enumeration index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    function: ClassFunction,
    degree: u64,
    irreducible: bool,
    index: Option<usize>,
}

impl Character {
    /// Degree is read off the identity class; irreducibility is `⟨χ, χ⟩ = 1`.
    pub fn from_class_function(function: ClassFunction, index: Option<usize>) -> Result<Self> {
        let degree = function.values[0]
            .to_i64()
            .and_then(|d| d.to_u64())
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::InvalidTable(format!("degree {} is not a positive integer", function.values[0])))?;
        let norm = inner_product(&function, &function)?;
        let irreducible = norm.to_i64() == Some(1);
        Ok(Self { function, degree, irreducible, index })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    /// Position in the owning character table's enumeration.
    pub fn index(&self) -> Option<usize> {
        self.index
    }

    pub fn class_function(&self) -> &ClassFunction {
        &self.function
    }

    pub(crate) fn with_index(mut self, index: usize) -> Self {
        self.index = Some(index);
        self
    }
}

impl Deref for Character {
    type Target = ClassFunction;
    fn deref(&self) -> &ClassFunction {
        &self.function
    }
}
