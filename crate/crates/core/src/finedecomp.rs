//! Fine (refined isotypical) decompositions of equivariant bundle data over a
//! single orbit type, adapted bundles and canonical isotropy bundles.
//!
//! A bundle over `X^H` is described only by its fibre representations: for
//! each component `α` of `X^H` a multiplicity function `m_α: Irr(H) → ℕ`,
//! together with the permutation action of `N(H)` on the components.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::gcomplex::GComplex;
use crate::grouprep::{multiplicity, Character, CharacterTable, ClassFunction, FiniteGroup, Subgroup};

/// `σ^n(h) = σ(n⁻¹ h n)`, matched to a row of `h_table` (the table of `H`
/// as a standalone group).
pub fn twist_irrep(h: &Subgroup, h_table: &CharacterTable, sigma: &Character, n: usize) -> Result<Character> {
    if !h.normalizes(n) {
        return Err(Error::NotInNormalizer { element: n });
    }
    let emb = h.embedded();
    if !h_table.group().same_group(&emb.group) || !sigma.group().same_group(&emb.group) {
        return Err(Error::GroupMismatch);
    }
    let parent = h.parent();
    let n_inv = parent.inv(n);
    let values: Vec<Cyclotomic> = emb
        .to_parent
        .iter()
        .map(|&p| {
            let q = parent.conjugate(n_inv, p);
            sigma.value_at(emb.from_parent(q).expect("n normalizes H")).clone()
        })
        .collect();
    let f = ClassFunction::from_element_values(&emb.group, &values)?;
    let index = h_table.index_of(&f).ok_or_else(|| Error::Defect(format!("twist of a character by {n} is not irreducible")))?;
    Ok(h_table.characters()[index].clone())
}

/// Twist action of `n` on indices into `h_table`.
fn twist_index(h: &Subgroup, h_table: &CharacterTable, sigma: usize, n: usize) -> Result<usize> {
    Ok(twist_irrep(h, h_table, &h_table.characters()[sigma], n)?.index().expect("table row"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleComponent {
    pub id: String,
    /// Irreducible index of `H` -> multiplicity, zero entries omitted.
    pub multiplicities: BTreeMap<usize, u64>,
}

/// Fibre-representation data of an equivariant bundle over `X^H`.
#[derive(Clone, Debug)]
pub struct BundleData {
    h: Subgroup,
    h_table: CharacterTable,
    normalizer: Subgroup,
    components: Vec<BundleComponent>,
    /// Element of `N(H)` -> permutation of component positions.
    action: BTreeMap<usize, Vec<usize>>,
    /// Element of `N(H)` -> `σ ↦ σ^n` on irreducible indices.
    twists: BTreeMap<usize, Vec<usize>>,
}

impl BundleData {
    /// `action` lists images for some elements of `N(H)`; those elements together
    /// with `H` (acting trivially) must generate `N(H)`. An empty map means `N(H)`
    /// fixes every component. Equivariance of the multiplicities is not checked
    /// here (see [`BundleData::check_equivariance`]).
    pub fn new(h: Subgroup, components: Vec<BundleComponent>, action: &BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        let h_table = CharacterTable::compute(&h.embedded().group)?;
        let normalizer = h.normalizer();
        let c = components.len();
        let mut ids = BTreeSet::new();
        for comp in &components {
            if !ids.insert(comp.id.as_str()) {
                return Err(Error::InvalidBundle(format!("duplicate component id {}", comp.id)));
            }
            if let Some(&bad) = comp.multiplicities.keys().find(|&&s| s >= h_table.len()) {
                return Err(Error::InvalidBundle(format!(
                    "component {}: irreducible index {bad} out of range (H has {} irreducibles)",
                    comp.id,
                    h_table.len()
                )));
            }
        }
        let identity: Vec<usize> = (0..c).collect();
        let mut generators: Vec<(usize, Vec<usize>)> = Vec::new();
        for (&n, perm) in action {
            if !normalizer.contains(n) {
                return Err(Error::NotInNormalizer { element: n });
            }
            if perm.len() != c || !crate::grouprep::is_permutation(perm) {
                return Err(Error::InvalidBundle(format!("action of {n} is not a permutation of the components")));
            }
            if h.contains(n) && *perm != identity {
                return Err(Error::InvalidBundle(format!("element {n} of H must fix every component")));
            }
            generators.push((n, perm.clone()));
        }
        if action.is_empty() {
            generators.extend(normalizer.generators().into_iter().map(|n| (n, identity.clone())));
        }
        for &x in h.elements() {
            generators.push((x, identity.clone()));
        }
        let group = h.parent();
        let mut full: BTreeMap<usize, Vec<usize>> = BTreeMap::from([(group.identity(), identity)]);
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let px = full[&x].clone();
            for (s, ps) in &generators {
                let y = group.mul(*s, x);
                let py: Vec<usize> = px.iter().map(|&i| ps[i]).collect();
                match full.get(&y) {
                    None => {
                        full.insert(y, py);
                        queue.push_back(y);
                    }
                    Some(existing) if *existing != py => {
                        return Err(Error::InvalidBundle(format!(
                            "component action is not a homomorphism (element {y} gets two permutations)"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        if full.len() != normalizer.order() {
            return Err(Error::InvalidBundle(format!(
                "listed elements and H generate a group of order {}, but N(H) has order {}",
                full.len(),
                normalizer.order()
            )));
        }
        let mut components = components;
        for comp in &mut components {
            comp.multiplicities.retain(|_, m| *m > 0);
        }
        let mut twists = BTreeMap::new();
        for &n in normalizer.elements() {
            let row = (0..h_table.len()).map(|s| twist_index(&h, &h_table, s, n)).collect::<Result<Vec<_>>>()?;
            twists.insert(n, row);
        }
        Ok(Self { h, h_table, normalizer, components, action: full, twists })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.h.parent()
    }

    pub fn isotropy(&self) -> &Subgroup {
        &self.h
    }

    /// Character table of `H` as a standalone group; multiplicity keys index its rows.
    pub fn isotropy_table(&self) -> &CharacterTable {
        &self.h_table
    }

    pub fn normalizer(&self) -> &Subgroup {
        &self.normalizer
    }

    pub fn components(&self) -> &[BundleComponent] {
        &self.components
    }

    pub fn component_index(&self, id: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::InvalidBundle(format!("no component {id}")))
    }

    /// Image of component position `alpha` under `n ∈ N(H)`.
    pub fn act(&self, n: usize, alpha: usize) -> Result<usize> {
        self.action.get(&n).map(|p| p[alpha]).ok_or(Error::NotInNormalizer { element: n })
    }

    /// Index of `σ^n`.
    pub fn twist(&self, n: usize, sigma: usize) -> Result<usize> {
        let row = self.twists.get(&n).ok_or(Error::NotInNormalizer { element: n })?;
        row.get(sigma).copied().ok_or_else(|| Error::InvalidBundle(format!("irreducible index {sigma} out of range")))
    }

    /// `N_α`: elements of `N(H)` mapping component `alpha` to itself.
    pub fn component_stabilizer(&self, alpha: usize) -> Subgroup {
        let elements = self.action.iter().filter(|(_, p)| p[alpha] == alpha).map(|(&n, _)| n).collect();
        Subgroup::new(self.group(), elements).expect("stabilizer of a point under a group action")
    }

    /// Same group, isotropy, components and action with new multiplicities.
    pub fn with_multiplicities(&self, multiplicities: Vec<BTreeMap<usize, u64>>) -> Result<Self> {
        if multiplicities.len() != self.components.len() {
            return Err(Error::InvalidBundle("one multiplicity map per component is required".into()));
        }
        let mut out = self.clone();
        for (c, mut m) in out.components.iter_mut().zip(multiplicities) {
            m.retain(|_, v| *v > 0);
            if let Some(&bad) = m.keys().find(|&&s| s >= self.h_table.len()) {
                return Err(Error::InvalidBundle(format!("irreducible index {bad} out of range")));
            }
            c.multiplicities = m;
        }
        Ok(out)
    }

    fn m(&self, alpha: usize, sigma: usize) -> u64 {
        self.components[alpha].multiplicities.get(&sigma).copied().unwrap_or(0)
    }

    /// `m_{nα}(σ^n) = m_α(σ)` for all `n ∈ N(H)`, components `α` and irreducibles `σ`.
    pub fn check_equivariance(&self) -> Result<()> {
        for &n in self.action.keys() {
            for alpha in 0..self.components.len() {
                let beta = self.act(n, alpha)?;
                for sigma in 0..self.h_table.len() {
                    let tau = self.twists[&n][sigma];
                    let (lhs, rhs) = (self.m(beta, tau), self.m(alpha, sigma));
                    if lhs != rhs {
                        return Err(Error::EquivarianceViolation(format!(
                            "n = {n}: m_{}(σ{tau}) = {lhs} but m_{}(σ{sigma}) = {rhs}",
                            self.components[beta].id, self.components[alpha].id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Orbit of `sigma` under twisting by `N_α`, ascending.
    pub fn twist_orbit(&self, alpha: usize, sigma: usize) -> Result<Vec<usize>> {
        let stab = self.component_stabilizer(alpha);
        let orbit: BTreeSet<usize> = stab.elements().iter().map(|&n| self.twists[&n][sigma]).collect();
        Ok(orbit.into_iter().collect())
    }

    /// `Σ_σ m_α(σ) · deg σ`.
    pub fn rank(&self, alpha: usize) -> u64 {
        self.components[alpha]
            .multiplicities
            .iter()
            .map(|(&s, &m)| m * self.h_table.characters()[s].degree())
            .sum()
    }
}

/// One summand `E_α^b` of the refined isotypical decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FineComponent {
    pub component: String,
    /// Irreducible indices of `H`, ascending.
    pub orbit: Vec<usize>,
    pub multiplicity: u64,
    pub degree: u64,
    /// `|O| · m · d`.
    pub rank: u64,
    /// `|O|`.
    pub n_b: u64,
}

/// The fine components of `b` over component `alpha`, ordered by least orbit member.
pub fn fine_decomposition(b: &BundleData, alpha: usize) -> Result<Vec<FineComponent>> {
    if alpha >= b.components.len() {
        return Err(Error::InvalidBundle(format!("component position {alpha} out of range")));
    }
    b.check_equivariance()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &sigma in b.components[alpha].multiplicities.keys() {
        if seen.contains(&sigma) {
            continue;
        }
        let orbit = b.twist_orbit(alpha, sigma)?;
        let multiplicity = b.m(alpha, sigma);
        let degree = b.h_table.characters()[sigma].degree();
        for &s in &orbit {
            if b.m(alpha, s) != multiplicity || b.h_table.characters()[s].degree() != degree {
                return Err(Error::Defect(format!(
                    "multiplicity or degree varies along the twist orbit of σ{sigma} over {}",
                    b.components[alpha].id
                )));
            }
            seen.insert(s);
        }
        let n_b = orbit.len() as u64;
        out.push(FineComponent {
            component: b.components[alpha].id.clone(),
            orbit,
            multiplicity,
            degree,
            rank: n_b * multiplicity * degree,
            n_b,
        });
    }
    let total: u64 = out.iter().map(|f| f.rank).sum();
    if total != b.rank(alpha) {
        return Err(Error::Defect("fine component ranks do not add up to the bundle rank".into()));
    }
    Ok(out)
}

/// Whether `w` over the component of `e_b` carries exactly the irreducible
/// classes of `e_b`'s orbit. When it does, `w` is re-decomposed and must form a
/// single fine component with that orbit.
pub fn is_adapted(w: &BundleData, e_b: &FineComponent) -> Result<bool> {
    let alpha = w.component_index(&e_b.component)?;
    let classes: Vec<usize> = w.components[alpha].multiplicities.keys().copied().collect();
    if classes != e_b.orbit {
        return Ok(false);
    }
    let fine = fine_decomposition(w, alpha)?;
    if fine.len() != 1 || fine[0].orbit != e_b.orbit {
        return Err(Error::Defect(format!(
            "bundle with the class set of a fine component splits into {} fine components",
            fine.len()
        )));
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct CanonicalIsotropyBundle {
    pub fine: FineComponent,
    /// Least index of an irreducible of `G` whose restriction to `H` contains `σ`.
    pub j0: usize,
    pub character: Character,
    /// The bundle itself: the `[σ]`-part of the trivial bundle with fibre `V_{ρ_{j0}}`,
    /// transported to every component in the `N(H)`-orbit of `α`.
    pub bundle: BundleData,
}

/// The canonical isotropy bundle `W_{α,[σ]}`, using the components and action of `b`.
pub fn canonical_isotropy_bundle(
    g_table: &CharacterTable,
    b: &BundleData,
    alpha: usize,
    sigma: usize,
) -> Result<CanonicalIsotropyBundle> {
    if !g_table.group().same_group(b.group()) {
        return Err(Error::GroupMismatch);
    }
    if sigma >= b.h_table.len() || alpha >= b.components.len() {
        return Err(Error::InvalidBundle("irreducible or component out of range".into()));
    }
    let sigma_char = &b.h_table.characters()[sigma];
    let restricted: Vec<ClassFunction> =
        g_table.characters().iter().map(|c| c.restrict(&b.h)).collect::<Result<_>>()?;
    let j0 = restricted
        .iter()
        .map(|r| multiplicity(r, sigma_char))
        .position(|m| matches!(m, Ok(k) if k >= 1))
        .ok_or_else(|| Error::Defect(format!("no irreducible of G restricts onto σ{sigma}")))?;
    let orbit = b.twist_orbit(alpha, sigma)?;
    let mut maps: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); b.components.len()];
    for &s in &orbit {
        let m = multiplicity(&restricted[j0], &b.h_table.characters()[s])?;
        for (&n, perm) in &b.action {
            let tau = b.twists[&n][s];
            maps[perm[alpha]].insert(tau, m);
        }
    }
    let bundle = b.with_multiplicities(maps)?;
    let fine = fine_decomposition(&bundle, alpha)?;
    if fine.len() != 1 {
        return Err(Error::Defect("canonical isotropy bundle is not a single fine component".into()));
    }
    Ok(CanonicalIsotropyBundle {
        fine: fine.into_iter().next().expect("one component"),
        j0,
        character: g_table.characters()[j0].clone(),
        bundle,
    })
}

/// Components of `X^H` (ids `"c0"`, `"c1"`, ... by least simplex) and the
/// permutation action of each generator of `N(H)` on them.
pub fn fixed_component_action(x: &GComplex, h: &Subgroup) -> Result<(Vec<String>, BTreeMap<usize, Vec<usize>>)> {
    let fixed = x.fixed_subcomplex(h)?;
    let owner: BTreeMap<usize, usize> =
        fixed.components.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&id| (id, i))).collect();
    let mut action = BTreeMap::new();
    for n in h.normalizer().generators() {
        let perm: Vec<usize> = fixed.components.iter().map(|c| owner[&x.act_id(n, c[0])]).collect();
        action.insert(n, perm);
    }
    let ids = (0..fixed.components.len()).map(|i| format!("c{i}")).collect();
    Ok((ids, action))
}

/// How the isotropy subgroup is given in a bundle file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

impl SubgroupSpec {
    pub fn build(&self, group: &FiniteGroup) -> Result<Subgroup> {
        let check = |ids: &[usize], field: &str| -> Result<()> {
            match ids.iter().find(|&&g| g >= group.order()) {
                Some(bad) => Err(Error::InvalidBundle(format!("H.{field}: element id {bad} out of range"))),
                None => Ok(()),
            }
        };
        match (&self.elements, &self.generators) {
            (Some(e), None) => {
                check(e, "elements")?;
                Subgroup::new(group, e.clone())
            }
            (None, Some(g)) => {
                check(g, "generators")?;
                Subgroup::generated_by(group, g)
            }
            _ => Err(Error::InvalidBundle("H needs exactly one of \"elements\" or \"generators\"".into())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub id: String,
    #[serde(default)]
    pub multiplicities: BTreeMap<String, u64>,
}

/// Bundle file.
///
/// ```json
/// {"H": {"generators": [1]},
///  "components": [{"id": "a", "multiplicities": {"1": 1, "2": 1}}],
///  "component_action": {"3": {"a": "b", "b": "a"}}}
/// ```
///
/// Multiplicity keys index the character table of `H`; `component_action` maps
/// an element id of `G` to the images of the components it moves.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    #[serde(rename = "H")]
    pub h: SubgroupSpec,
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub component_action: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl BundleSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, group: &FiniteGroup) -> Result<BundleData> {
        let h = self.h.build(group)?;
        let parse = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::InvalidBundle(format!("{what}: {s:?} is not a non-negative integer")))
        };
        let mut components = Vec::with_capacity(self.components.len());
        for (i, c) in self.components.iter().enumerate() {
            let mut m = BTreeMap::new();
            for (k, &v) in &c.multiplicities {
                m.insert(parse(k, &format!("components[{i}].multiplicities"))?, v);
            }
            components.push(BundleComponent { id: c.id.clone(), multiplicities: m });
        }
        let position = |id: &str| -> Result<usize> {
            self.components
                .iter()
                .position(|c| c.id == id)
                .ok_or_else(|| Error::InvalidBundle(format!("component_action: unknown component {id}")))
        };
        let mut action = BTreeMap::new();
        for (n, images) in &self.component_action {
            let n = parse(n, "component_action")?;
            if n >= group.order() {
                return Err(Error::InvalidBundle(format!("component_action: element id {n} out of range")));
            }
            let mut perm: Vec<usize> = (0..components.len()).collect();
            for (from, to) in images {
                perm[position(from)?] = position(to)?;
            }
            action.insert(n, perm);
        }
        BundleData::new(h, components, &action)
    }
}
