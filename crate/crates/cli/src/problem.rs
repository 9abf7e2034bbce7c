//! Problem files.
//!
//! ```json
//! { "dimension": 2, "label": "example", "matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]] }
//! ```
//!
//! Each matrix is given row-major, either nested (`[[a11, a12], [a21, a22]]`)
//! or flat (`[a11, a12, a21, a22]`).

use std::fs;
use std::path::Path;

use jsr_core::{Matrix2, MatrixSet};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntries {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MatrixEntries {
    fn rows(&self) -> Option<[[f64; 2]; 2]> {
        match self {
            MatrixEntries::Nested(rows) => match rows.as_slice() {
                [r1, r2] if r1.len() == 2 && r2.len() == 2 => Some([[r1[0], r1[1]], [r2[0], r2[1]]]),
                _ => None,
            },
            MatrixEntries::Flat(e) if e.len() == 4 => Some([[e[0], e[1]], [e[2], e[3]]]),
            MatrixEntries::Flat(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub matrices: Vec<MatrixEntries>,
}

impl ProblemFile {
    pub fn from_matrices(label: Option<&str>, matrices: &[[[f64; 2]; 2]]) -> Self {
        ProblemFile {
            dimension: 2,
            label: label.map(str::to_owned),
            matrices: matrices
                .iter()
                .map(|m| MatrixEntries::Nested(m.iter().map(|r| r.to_vec()).collect()))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let problem: ProblemFile =
            serde_json::from_str(text).map_err(|e| CliError::InvalidInput(e.to_string()))?;
        problem.validate()?;
        Ok(problem)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.matrix_set().map(|_| ())
    }

    pub fn rows(&self) -> Result<Vec<[[f64; 2]; 2]>, CliError> {
        if self.dimension != 2 {
            return Err(CliError::InvalidInput(format!(
                "dimension must be 2, got {}",
                self.dimension
            )));
        }
        if self.matrices.is_empty() {
            return Err(CliError::InvalidInput("no matrices given".into()));
        }
        self.matrices
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.rows().ok_or_else(|| {
                    CliError::InvalidInput(format!("matrix {} is not 2x2", i + 1))
                })
            })
            .collect()
    }

    pub fn matrix_set(&self) -> Result<MatrixSet<f64>, CliError> {
        let ms = self.rows()?.into_iter().map(Matrix2::from_rows).collect();
        MatrixSet::new(ms).map_err(|e| CliError::InvalidInput(e.to_string()))
    }
}
