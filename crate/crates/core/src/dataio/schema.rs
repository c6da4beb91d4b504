use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Label,
    Drop,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    #[default]
    DropRow,
}

/// Value rewrites applied before categories are looked up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recode {
    /// Groups the seven Adult marital-status values into three.
    CensusMarital,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    /// Category order for `categorical` (required) and `label` (optional;
    /// sorted distinct values otherwise).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<String>>,
    #[serde(default)]
    pub missing_policy: MissingPolicy,
    /// Exact-match rewrites, e.g. `"<=50K." -> "<=50K"`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub value_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recode: Option<Recode>,
}

impl ColumnSpec {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            name: name.into(),
            kind,
            categories: None,
            missing_policy: MissingPolicy::DropRow,
            value_map: BTreeMap::new(),
            recode: None,
        }
    }

    pub fn with_categories<S: Into<String>>(mut self, cats: impl IntoIterator<Item = S>) -> Self {
        self.categories = Some(cats.into_iter().map(Into::into).collect());
        self
    }
}

fn default_true() -> bool {
    true
}

fn default_missing() -> Vec<String> {
    vec![String::new(), "?".to_owned()]
}

/// Column layout of an input CSV.
///
/// With `has_header`, schema columns are matched to header names and unlisted
/// header columns are ignored; without it, columns are positional and the
/// schema must list every column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSchema {
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Lines starting with this character are skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<char>,
    #[serde(default = "default_true")]
    pub trim: bool,
    /// Field values treated as missing (after trimming).
    #[serde(default = "default_missing")]
    pub missing_values: Vec<String>,
    pub columns: Vec<ColumnSpec>,
}

impl ColumnSchema {
    pub fn new(columns: Vec<ColumnSpec>) -> Self {
        Self {
            has_header: true,
            comment: None,
            trim: true,
            missing_values: default_missing(),
            columns,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let schema: Self = serde_json::from_str(s)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate column {:?}", c.name)));
            }
            if c.kind == ColumnKind::Categorical {
                match &c.categories {
                    Some(cats) if !cats.is_empty() => {}
                    _ => {
                        return Err(Error::InvalidConfig(format!(
                            "categorical column {:?} needs a category list",
                            c.name
                        )))
                    }
                }
            }
            if let Some(cats) = &c.categories {
                let distinct: std::collections::BTreeSet<_> = cats.iter().collect();
                if distinct.len() != cats.len() {
                    return Err(Error::InvalidConfig(format!(
                        "column {:?} lists a category twice",
                        c.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Names of the `label` columns, in schema order.
    pub fn label_names(&self) -> Vec<&str> {
        self.columns
            .iter()
            .filter(|c| c.kind == ColumnKind::Label)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Forces `recode` on the named column.
    pub fn set_recode(&mut self, column: &str, recode: Recode) -> Result<()> {
        let c = self
            .columns
            .iter_mut()
            .find(|c| c.name == column)
            .ok_or_else(|| Error::InvalidConfig(format!("no column named {column:?}")))?;
        c.recode = Some(recode);
        Ok(())
    }
}
