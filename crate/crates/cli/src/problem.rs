//! The JSON problem file: a space plus whichever objects a command needs.
//!
//! Matrices are arrays of rows. An entry is either a plain number or a
//! two-element `[re, im]` array. Index lists are 0-based.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use krein_frames::linalg::{c64, signature_matrix, CMat};
use krein_frames::{KreinSpace, Tolerances, VectorFamily};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

pub type MatrixJson = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(rename = "T")]
    pub t: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    #[serde(rename = "S")]
    pub s: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceSpec {
    #[serde(rename = "M")]
    pub m: MatrixJson,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witnesses {
    /// Candidate projection for the operator test.
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<MatrixJson>,
    /// Columns spanning a candidate maximal uniformly J-positive subspace.
    #[serde(rename = "T_subspace", skip_serializing_if = "Option::is_none")]
    pub t_subspace: Option<MatrixJson>,
    #[serde(rename = "S1", skip_serializing_if = "Option::is_none")]
    pub s1: Option<MatrixJson>,
    #[serde(rename = "S2", skip_serializing_if = "Option::is_none")]
    pub s2: Option<MatrixJson>,
    /// Index set tested as the positive part of a synthesis operator.
    #[serde(rename = "I_plus", skip_serializing_if = "Option::is_none")]
    pub i_plus: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub space: SpaceSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
    }

    pub fn space(&self, tol: Tolerances) -> Result<KreinSpace> {
        let s = &self.space;
        let j = match (&s.signature, &s.j) {
            (Some(_), Some(_)) => bail!("space: give either \"signature\" or \"J\", not both"),
            (Some([p, q]), None) => {
                ensure!(p + q > 0, "space: signature [0, 0] is empty");
                signature_matrix(*p, *q)
            }
            (None, Some(j)) => matrix(j, "space.J")?,
            (None, None) => bail!("space: missing \"signature\" or \"J\""),
        };
        if let Some(dim) = s.dim {
            ensure!(dim == j.nrows(), "space: dim {dim} does not match J of size {}", j.nrows());
        }
        Ok(KreinSpace::with_tolerances(j, tol)?)
    }

    pub fn family(&self) -> Result<VectorFamily> {
        let f = self.family.as_ref().context("problem file has no \"family\"")?;
        let t = matrix(&f.t, "family.T")?;
        Ok(match &f.labels {
            Some(labels) => VectorFamily::with_labels(t, labels.clone())?,
            None => VectorFamily::new(t)?,
        })
    }

    pub fn witnesses(&self) -> Witnesses {
        self.witnesses.clone().unwrap_or_default()
    }
}

/// Dense complex matrix from rows of entries.
pub fn matrix(rows: &MatrixJson, what: &str) -> Result<CMat> {
    ensure!(!rows.is_empty(), "{what}: empty matrix");
    let cols = rows[0].len();
    ensure!(cols > 0, "{what}: empty rows");
    for (i, r) in rows.iter().enumerate() {
        ensure!(r.len() == cols, "{what}: row {i} has {} entries, expected {cols}", r.len());
    }
    Ok(CMat::from_fn(rows.len(), cols, |i, j| match rows[i][j] {
        Entry::Real(x) => c64(x, 0.0),
        Entry::Complex([re, im]) => c64(re, im),
    }))
}

/// Rows of `[re, im]` entries, values passed through `round`.
pub fn matrix_json(a: &CMat, round: impl Fn(f64) -> f64) -> MatrixJson {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| Entry::Complex([round(a[(i, j)].re), round(a[(i, j)].im)])).collect())
        .collect()
}
