//! Finite-dimensional Krein spaces and the indefinite-geometry primitives
//! built on them.
//!
//! A Krein space here is `C^n` together with a fundamental symmetry `J`
//! (a Hermitian involution). The indefinite product is `[x, y] = <Jx, y>`,
//! with `<.,.>` linear in the first argument.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c64, complement, hermitian_defect, hermitian_eigenvalues, hstack, identity, orth,
    projector, rank, select_columns, singular_values, CMat, CVec,
};
use crate::tolerance::Tolerances;

/// `C^n` with a fundamental symmetry and its cached fundamental decomposition.
#[derive(Debug, Clone)]
pub struct KreinSpace {
    j: CMat,
    plus: CMat,
    minus: CMat,
    tol: Tolerances,
}

impl KreinSpace {
    pub fn new(j: CMat) -> Result<Self> {
        Self::with_tolerances(j, Tolerances::default())
    }

    /// Validates `J` (Hermitian involution) and computes orthonormal bases of
    /// the `+1` and `-1` eigenspaces.
    pub fn with_tolerances(j: CMat, tol: Tolerances) -> Result<Self> {
        let n = j.nrows();
        if n == 0 || j.ncols() != n {
            return Err(Error::InvalidSymmetry(format!(
                "J must be a non-empty square matrix, got {}x{}",
                j.nrows(),
                j.ncols()
            )));
        }
        let scale = (n as f64).sqrt();
        let herm = hermitian_defect(&j);
        if herm > tol.structure * scale {
            return Err(Error::InvalidSymmetry(format!("J is not Hermitian (||J - J*|| = {herm:.3e})")));
        }
        let inv = (&j * &j - identity(n)).norm();
        if inv > tol.structure * scale {
            return Err(Error::InvalidSymmetry(format!("J is not an involution (||J^2 - I|| = {inv:.3e})")));
        }

        let is_diagonal = (0..n).all(|r| (0..n).all(|c| r == c || j[(r, c)].norm() == 0.0));
        let (plus, minus) = if is_diagonal {
            let p: Vec<usize> = (0..n).filter(|&i| j[(i, i)].re > 0.0).collect();
            let m: Vec<usize> = (0..n).filter(|&i| j[(i, i)].re < 0.0).collect();
            let id = identity(n);
            (select_columns(&id, &p), select_columns(&id, &m))
        } else {
            let (vals, vecs) = linalg::hermitian_eigen(&j);
            let p: Vec<usize> = (0..n).filter(|&i| vals[i] > 0.0).collect();
            let m: Vec<usize> = (0..n).filter(|&i| vals[i] < 0.0).collect();
            (select_columns(&vecs, &p), select_columns(&vecs, &m))
        };
        Ok(Self { j, plus, minus, tol })
    }

    /// `diag(1,...,1,-1,...,-1)` with `p` positive and `q` negative entries.
    pub fn signature(p: usize, q: usize) -> Self {
        Self::new(linalg::signature_matrix(p, q)).expect("signature matrices are valid symmetries")
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn dim_plus(&self) -> usize {
        self.plus.ncols()
    }

    pub fn dim_minus(&self) -> usize {
        self.minus.ncols()
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    /// Orthonormal basis of `H+`.
    pub fn plus_basis(&self) -> &CMat {
        &self.plus
    }

    /// Orthonormal basis of `H-`.
    pub fn minus_basis(&self) -> &CMat {
        &self.minus
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn with_tol(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// `P = (I + J)/2`, the J-selfadjoint projection onto `H+`.
    pub fn canonical_projection(&self) -> CMat {
        (identity(self.dim()) + &self.j) * c64(0.5, 0.0)
    }

    /// The antispace `(H, -[.,.])`.
    pub fn antispace(&self) -> KreinSpace {
        KreinSpace { j: -&self.j, plus: self.minus.clone(), minus: self.plus.clone(), tol: self.tol }
    }

    /// Components `(x+, x-)` of `x` in the fundamental decomposition.
    pub fn fundamental_components(&self, x: &CVec) -> (CVec, CVec) {
        let xp = &self.plus * (self.plus.adjoint() * x);
        let xm = &self.minus * (self.minus.adjoint() * x);
        (xp, xm)
    }

    pub fn hplus(&self) -> SubspaceBasis {
        SubspaceBasis { basis: self.plus.clone() }
    }

    pub fn hminus(&self) -> SubspaceBasis {
        SubspaceBasis { basis: self.minus.clone() }
    }

    /// Orthonormalized span of the columns of `vectors`, using this space's
    /// rank tolerance.
    pub fn span(&self, vectors: &CMat) -> Result<SubspaceBasis> {
        if vectors.nrows() != self.dim() {
            return Err(Error::Dimension(format!(
                "vectors have {} rows, space has dimension {}",
                vectors.nrows(),
                self.dim()
            )));
        }
        Ok(SubspaceBasis::span(vectors, self.tol.rank))
    }

    fn check_subspace(&self, m: &SubspaceBasis) -> Result<()> {
        if m.ambient_dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "subspace lives in C^{}, space has dimension {}",
                m.ambient_dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// A subspace of `C^n` stored through an orthonormal basis.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    basis: CMat,
}

impl SubspaceBasis {
    /// Span of the columns of `vectors`, orthonormalized by SVD.
    pub fn span(vectors: &CMat, rank_tol: f64) -> Self {
        Self { basis: orth(vectors, rank_tol) }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: CMat) -> Result<Self> {
        let k = basis.ncols();
        if k > basis.nrows() {
            return Err(Error::Dimension(format!("{k} orthonormal columns cannot live in C^{}", basis.nrows())));
        }
        let gram = basis.adjoint() * &basis;
        let defect = (gram - identity(k)).norm();
        if defect > 1e-8 {
            return Err(Error::Geometry(format!("columns are not orthonormal (||B*B - I|| = {defect:.3e})")));
        }
        Ok(Self { basis })
    }

    pub fn zero(n: usize) -> Self {
        Self { basis: CMat::zeros(n, 0) }
    }

    pub fn whole(n: usize) -> Self {
        Self { basis: identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn projector(&self) -> CMat {
        projector(&self.basis)
    }

    pub fn orthogonal_complement(&self) -> SubspaceBasis {
        SubspaceBasis { basis: complement(&self.basis) }
    }

    /// `||v - P v|| <= tol ||v||`.
    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        let p = &self.basis * (self.basis.adjoint() * v);
        (v - p).norm() <= tol * v.norm().max(f64::MIN_POSITIVE)
    }

    /// Projector distance `||P_A - P_B||_2`.
    pub fn distance(&self, other: &SubspaceBasis) -> f64 {
        linalg::spectral_norm(&(self.projector() - other.projector()))
    }

    pub fn same_as(&self, other: &SubspaceBasis, tol: f64) -> bool {
        self.ambient_dim() == other.ambient_dim() && self.dim() == other.dim() && self.distance(other) <= tol
    }

    /// Image `A(M)` of the subspace under a square matrix.
    pub fn image(&self, a: &CMat, rank_tol: f64) -> SubspaceBasis {
        SubspaceBasis::span(&(a * &self.basis), rank_tol)
    }
}

/// Sign behaviour of `[f, f]` on the nonzero vectors of a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    /// The trivial subspace `{0}`.
    Zero,
    Positive,
    Nonnegative,
    Neutral,
    Nonpositive,
    Negative,
    Indefinite,
}

impl SubspaceKind {
    pub fn is_nonnegative(self) -> bool {
        matches!(self, Self::Zero | Self::Positive | Self::Nonnegative | Self::Neutral)
    }

    pub fn is_nonpositive(self) -> bool {
        matches!(self, Self::Zero | Self::Negative | Self::Nonpositive | Self::Neutral)
    }

    pub fn is_semidefinite(self) -> bool {
        self != Self::Indefinite
    }
}

impl fmt::Display for SubspaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Zero => "zero",
            Self::Positive => "positive",
            Self::Nonnegative => "nonnegative",
            Self::Neutral => "neutral",
            Self::Nonpositive => "nonpositive",
            Self::Negative => "negative",
            Self::Indefinite => "indefinite",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceClassification {
    pub kind: SubspaceKind,
    pub dim: usize,
    /// Largest `alpha` with `alpha ||f||^2 <= |[f,f]|` on the subspace; absent
    /// for indefinite subspaces.
    pub definiteness_bound: Option<f64>,
    pub uniformly_definite: bool,
    /// Maximal among uniformly definite subspaces of its sign.
    pub maximal: bool,
    /// `dim(M ∩ M^[⊥])`.
    pub degenerate_part_dim: usize,
    /// Eigenvalues of `B* J B` in ascending order.
    pub form_eigenvalues: Vec<f64>,
    dim_plus: usize,
    dim_minus: usize,
}

impl SubspaceClassification {
    pub fn is_uniformly_positive(&self) -> bool {
        matches!(self.kind, SubspaceKind::Zero | SubspaceKind::Positive)
    }

    pub fn is_uniformly_negative(&self) -> bool {
        matches!(self.kind, SubspaceKind::Zero | SubspaceKind::Negative)
    }

    pub fn is_maximal_positive(&self) -> bool {
        self.is_uniformly_positive() && self.dim == self.dim_plus
    }

    pub fn is_maximal_negative(&self) -> bool {
        self.is_uniformly_negative() && self.dim == self.dim_minus
    }
}

/// `[x, y] = <Jx, y>`.
pub fn indefinite_inner(space: &KreinSpace, x: &CVec, y: &CVec) -> Result<Complex64> {
    let n = space.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {} in a space of dimension {n}",
            x.len(),
            y.len()
        )));
    }
    Ok(y.dotc(&(space.j() * x)))
}

/// `T^# = J_in T* J_out` for `T : space_in -> space_out`.
pub fn j_adjoint(space_in: &KreinSpace, space_out: &KreinSpace, t: &CMat) -> Result<CMat> {
    if t.nrows() != space_out.dim() || t.ncols() != space_in.dim() {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, expected {}x{}",
            t.nrows(),
            t.ncols(),
            space_out.dim(),
            space_in.dim()
        )));
    }
    Ok(space_in.j() * t.adjoint() * space_out.j())
}

/// Gramian `G_M = P_M J P_M`.
pub fn gramian(space: &KreinSpace, m: &SubspaceBasis) -> Result<CMat> {
    space.check_subspace(m)?;
    let p = m.projector();
    Ok(&p * space.j() * &p)
}

/// Smallest nonzero singular value, with the default rank cutoff. Returns
/// `f64::INFINITY` for the zero operator.
pub fn reduced_min_modulus(t: &CMat) -> f64 {
    reduced_min_modulus_with(t, Tolerances::default().rank)
}

pub fn reduced_min_modulus_with(t: &CMat, rank_tol: f64) -> f64 {
    let s = singular_values(t);
    let Some(&smax) = s.first() else { return f64::INFINITY };
    let cutoff = rank_tol * smax.max(1.0);
    s.iter().rev().copied().find(|&x| x > cutoff).unwrap_or(f64::INFINITY)
}

/// Compression `B* J B` of the form to the subspace coordinates.
pub fn form_matrix(space: &KreinSpace, m: &SubspaceBasis) -> CMat {
    m.basis().adjoint() * space.j() * m.basis()
}

pub fn classify_subspace(space: &KreinSpace, m: &SubspaceBasis) -> Result<SubspaceClassification> {
    space.check_subspace(m)?;
    let tol = space.tolerances().definite;
    let eig = hermitian_eigenvalues(&form_matrix(space, m));
    let k = eig.len();
    let pos = eig.iter().filter(|&&l| l > tol).count();
    let neg = eig.iter().filter(|&&l| l < -tol).count();
    let zero = k - pos - neg;

    let kind = if k == 0 {
        SubspaceKind::Zero
    } else if pos == k {
        SubspaceKind::Positive
    } else if neg == k {
        SubspaceKind::Negative
    } else if zero == k {
        SubspaceKind::Neutral
    } else if neg == 0 {
        SubspaceKind::Nonnegative
    } else if pos == 0 {
        SubspaceKind::Nonpositive
    } else {
        SubspaceKind::Indefinite
    };

    let definiteness_bound = match kind {
        SubspaceKind::Zero => Some(1.0),
        SubspaceKind::Positive => Some(eig[0].clamp(0.0, 1.0)),
        SubspaceKind::Negative => Some((-eig[k - 1]).clamp(0.0, 1.0)),
        SubspaceKind::Nonnegative | SubspaceKind::Nonpositive | SubspaceKind::Neutral => Some(0.0),
        SubspaceKind::Indefinite => None,
    };
    let uniformly_definite = matches!(kind, SubspaceKind::Zero | SubspaceKind::Positive | SubspaceKind::Negative);
    let maximal = match kind {
        SubspaceKind::Positive => k == space.dim_plus(),
        SubspaceKind::Negative => k == space.dim_minus(),
        SubspaceKind::Zero => space.dim_plus() == 0 || space.dim_minus() == 0,
        _ => false,
    };

    Ok(SubspaceClassification {
        kind,
        dim: k,
        definiteness_bound,
        uniformly_definite,
        maximal,
        degenerate_part_dim: zero,
        form_eigenvalues: eig,
        dim_plus: space.dim_plus(),
        dim_minus: space.dim_minus(),
    })
}

/// Definiteness bound of a J-semidefinite subspace (zero when degenerate).
pub fn definiteness_bound(space: &KreinSpace, m: &SubspaceBasis) -> Result<f64> {
    let c = classify_subspace(space, m)?;
    c.definiteness_bound
        .ok_or_else(|| Error::Classification("subspace is J-indefinite, no definiteness bound".into()))
}

/// `gamma(G_M)`. For a J-semidefinite `M` this is the definiteness bound of
/// `M ⊖ (M ∩ M^[⊥])`, which agrees with [`definiteness_bound`] exactly when
/// `M` is nondegenerate.
pub fn gramian_reduced_modulus(space: &KreinSpace, m: &SubspaceBasis) -> Result<f64> {
    let g = gramian(space, m)?;
    Ok(reduced_min_modulus_with(&g, space.tolerances().rank))
}

/// `M^[⊥] = (J M)^⊥`.
pub fn j_orthogonal_companion(space: &KreinSpace, m: &SubspaceBasis) -> Result<SubspaceBasis> {
    space.check_subspace(m)?;
    let jm = orth(&(space.j() * m.basis()), space.tolerances().rank);
    Ok(SubspaceBasis { basis: complement(&jm) })
}

/// Cosine of the Friedrichs angle with the default rank cutoff.
pub fn friedrichs_angle(s: &SubspaceBasis, t: &SubspaceBasis) -> f64 {
    friedrichs_angle_with(s, t, Tolerances::default().rank)
}

/// Largest principal cosine between `S` and `T` once `S ∩ T` is removed.
pub fn friedrichs_angle_with(s: &SubspaceBasis, t: &SubspaceBasis, rank_tol: f64) -> f64 {
    if s.dim() == 0 || t.dim() == 0 {
        return 0.0;
    }
    let inter = linalg::intersection_dim(s.basis(), t.basis(), rank_tol);
    let cosines = singular_values(&(s.basis().adjoint() * t.basis()));
    cosines.get(inter).copied().unwrap_or(0.0).clamp(0.0, 1.0)
}

/// Oblique projection onto `M` along `N`, for complementary `M` and `N`.
pub fn oblique_projection(space: &KreinSpace, m: &SubspaceBasis, n: &SubspaceBasis) -> Result<CMat> {
    space.check_subspace(m)?;
    space.check_subspace(n)?;
    let dim = space.dim();
    let stacked = hstack(m.basis(), n.basis());
    if m.dim() + n.dim() != dim || rank(&stacked, space.tolerances().rank) != dim {
        return Err(Error::Geometry(format!(
            "subspaces of dimensions {} and {} are not complementary in C^{dim}",
            m.dim(),
            n.dim()
        )));
    }
    let inv = stacked
        .try_inverse()
        .ok_or_else(|| Error::Geometry("complementary bases are numerically singular".into()))?;
    let k = m.dim();
    let top = inv.rows(0, k).into_owned();
    Ok(m.basis() * top)
}

/// The J-selfadjoint projection onto a uniformly J-definite subspace,
/// `P_{M // M^[⊥]}`.
pub fn j_selfadjoint_projection(space: &KreinSpace, m: &SubspaceBasis) -> Result<CMat> {
    let class = classify_subspace(space, m)?;
    if !class.uniformly_definite {
        return Err(Error::Geometry(format!(
            "subspace is {} but not uniformly J-definite; no J-selfadjoint projection onto it exists",
            class.kind
        )));
    }
    let comp = j_orthogonal_companion(space, m)?;
    oblique_projection(space, m, &comp)
}
