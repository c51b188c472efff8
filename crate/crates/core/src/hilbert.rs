//! Classical frame theory on the Hilbert space `(C^n, <.,.>)`.

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigenvalues, select_columns, CMat, CVec};
use crate::tolerance::Tolerances;

/// A finite indexed family of vectors, stored as the columns of its
/// synthesis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    synthesis: CMat,
    labels: Vec<String>,
}

impl VectorFamily {
    /// Family whose `i`-th vector is column `i` of `t`, labelled `f1, f2, ...`.
    pub fn new(t: CMat) -> Result<Self> {
        let labels = (1..=t.ncols()).map(|i| format!("f{i}")).collect();
        Self::with_labels(t, labels)
    }

    pub fn with_labels(t: CMat, labels: Vec<String>) -> Result<Self> {
        if t.nrows() == 0 || t.ncols() == 0 {
            return Err(Error::Dimension(format!("a family needs at least one vector in C^n, n >= 1; got {}x{}", t.nrows(), t.ncols())));
        }
        if labels.len() != t.ncols() {
            return Err(Error::Dimension(format!("{} labels for {} vectors", labels.len(), t.ncols())));
        }
        Ok(Self { synthesis: t, labels })
    }

    pub fn from_columns(columns: &[CVec]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Dimension("empty family".into()));
        };
        let n = first.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("vectors of different lengths".into()));
        }
        Self::new(CMat::from_fn(n, columns.len(), |i, j| columns[j][i]))
    }

    /// The synthesis matrix `T` (`n x m`).
    pub fn synthesis(&self) -> &CMat {
        &self.synthesis
    }

    pub fn into_synthesis(self) -> CMat {
        self.synthesis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.synthesis.nrows()
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.synthesis.column(i).into_owned()
    }

    /// Synthesis matrix of the sub-family with the given indices (possibly `n x 0`).
    pub fn columns(&self, idx: &[usize]) -> CMat {
        select_columns(&self.synthesis, idx)
    }

    /// Same labels, new vectors.
    pub fn relabelled_map(&self, t: CMat) -> Result<Self> {
        Self::with_labels(t, self.labels.clone())
    }

    /// Concatenation `F ∪ G`.
    pub fn concat(&self, other: &VectorFamily) -> Result<Self> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::Dimension("families live in different spaces".into()));
        }
        let t = linalg::hstack(&self.synthesis, &other.synthesis);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Self::with_labels(t, labels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `S = T T*`.
pub fn frame_operator(f: &VectorFamily) -> CMat {
    f.synthesis() * f.synthesis().adjoint()
}

pub fn is_frame(f: &VectorFamily) -> bool {
    is_frame_with(f, Tolerances::default().rank)
}

/// `T` is surjective.
pub fn is_frame_with(f: &VectorFamily, rank_tol: f64) -> bool {
    linalg::rank(f.synthesis(), rank_tol) == f.ambient_dim()
}

/// Optimal frame bounds: extreme eigenvalues of `T T*`.
pub fn frame_bounds(f: &VectorFamily) -> Result<FrameBounds> {
    require_frame(f)?;
    let eig = hermitian_eigenvalues(&frame_operator(f));
    Ok(FrameBounds { lower: eig[0], upper: eig[eig.len() - 1] })
}

/// `{S^-1 f_i}` with `S = T T*`.
pub fn canonical_dual(f: &VectorFamily) -> Result<VectorFamily> {
    require_frame(f)?;
    let s_inv = frame_operator(f)
        .try_inverse()
        .ok_or_else(|| Error::NotAFrame("frame operator is singular".into()))?;
    f.relabelled_map(s_inv * f.synthesis())
}

fn require_frame(f: &VectorFamily) -> Result<()> {
    if !is_frame(f) {
        return Err(Error::NotAFrame(format!(
            "synthesis operator has rank {} < {}",
            linalg::rank(f.synthesis(), Tolerances::default().rank),
            f.ambient_dim()
        )));
    }
    Ok(())
}
