use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::RationalJson;

use super::group::{FiniteGroup, DEFAULT_MAX_ORDER};
use super::table::{CharacterTable, DEFAULT_TABLE_CAP};

/// Group input file.
///
/// ```json
/// {"permutation_generators": [[1, 0, 2], [0, 2, 1]]}
/// {"table": [[0, 1], [1, 0]], "generators": [1]}
/// ```
///
/// An optional `character_table` (`{"conductor": n, "rows": [[[[num, den], ...], ...], ...]}`,
/// one row per irreducible, one coefficient vector per class in canonical class
/// order) is required for groups above the table cap and validated otherwise.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation_generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character_table: Option<SuppliedTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuppliedTable {
    pub conductor: usize,
    pub rows: Vec<Vec<Vec<RationalJson>>>,
}

/// Limits applied while loading.
#[derive(Clone, Copy, Debug)]
pub struct GroupLimits {
    pub max_order: usize,
    pub table_cap: usize,
}

impl Default for GroupLimits {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, table_cap: DEFAULT_TABLE_CAP }
    }
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build_group(&self, limits: GroupLimits) -> Result<FiniteGroup> {
        match (&self.permutation_generators, &self.table) {
            (Some(gens), None) => {
                if self.generators.is_some() {
                    return Err(Error::Parse("`generators` only applies to `table` input".into()));
                }
                FiniteGroup::from_permutations(gens, limits.max_order)
            }
            (None, Some(table)) => {
                FiniteGroup::from_table(table, self.generators.as_deref(), limits.max_order).map(|(g, _)| g)
            }
            _ => Err(Error::Parse("exactly one of `permutation_generators` or `table` is required".into())),
        }
    }

    /// The group and its character table (computed, or the validated supplied one).
    pub fn build(&self, limits: GroupLimits) -> Result<(FiniteGroup, CharacterTable)> {
        let group = self.build_group(limits)?;
        let table = match &self.character_table {
            Some(t) => {
                let rows = t
                    .rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| v.iter().map(RationalJson::to_rational).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                CharacterTable::from_supplied(&group, t.conductor, rows)?
            }
            None => CharacterTable::compute_with_cap(&group, limits.table_cap)?,
        };
        Ok((group, table))
    }
}
