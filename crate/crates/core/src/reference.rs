//! Expected values for table reproduction, loaded from an embedded TOML file.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};

const DATA: &str = include_str!("../data/reference_values.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct StageCounts {
    pub d: u32,
    pub b: u32,
    pub f: Vec<String>,
    pub a: Vec<String>,
    pub b_class: Vec<String>,
    pub c: Vec<String>,
    pub d_class: Vec<String>,
}

impl StageCounts {
    /// Class columns in variable order `a, b, c, d`.
    pub fn classes(&self) -> [&Vec<String>; 4] {
        [&self.a, &self.b_class, &self.c, &self.d_class]
    }

    pub fn stages(&self) -> usize {
        self.f.len()
    }
}

/// Upper bounds by stage, their ratio to the limit `z`, and upper bounds for a
/// companion gasket without a built-in recursion.
#[derive(Clone, Debug, Deserialize)]
pub struct BoundColumns {
    pub z: String,
    pub upper: Vec<String>,
    pub ratio: Vec<String>,
    pub companion: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SimplexRows {
    pub d: Vec<u32>,
    pub dimension: Vec<String>,
    pub upper0: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SideRows {
    pub b: Vec<u32>,
    pub dimension: Vec<String>,
    pub upper0: Vec<String>,
    pub limit_dimension: String,
    pub limit_upper0: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceValues {
    pub sg22_counts: StageCounts,
    pub sg23_counts: StageCounts,
    pub sg22_bounds: BoundColumns,
    pub simplex_stage0: SimplexRows,
    pub sg23_bounds: BoundColumns,
    pub side_stage0: SideRows,
}

pub fn parse(text: &str) -> Result<ReferenceValues> {
    toml::from_str(text).map_err(|e| Error::Parse(format!("reference values: {e}")))
}

/// The embedded expected values.
pub fn reference() -> &'static ReferenceValues {
    static CELL: OnceLock<ReferenceValues> = OnceLock::new();
    CELL.get_or_init(|| parse(DATA).expect("embedded reference values parse"))
}
