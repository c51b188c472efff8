//! J-frames: detection, bounds, the J-frame operator and its block
//! decomposition, indefinite reconstruction and the canonical dual.

use std::fmt;

use crate::error::{Error, Result};
use crate::hilbert::{is_frame_with, VectorFamily};
use crate::krein::{
    classify_subspace, form_matrix, oblique_projection, reduced_min_modulus_with, KreinSpace, SubspaceBasis,
    SubspaceClassification, SubspaceKind,
};
use crate::linalg::{self, c64, hermitian_eigen, psd_power, psd_sqrt, select_columns, CMat, CVec};
use crate::neutral::{angular_operator_over, AngularOperator, Side};

/// Split of the index set by the sign of `[f_i, f_i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPartition {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    /// `sigma[i]` is `+1` for `i` in `plus`, `-1` otherwise.
    pub sigma: Vec<i8>,
}

impl SignPartition {
    /// Partition of `0..len` with the given positive class.
    pub fn from_plus(len: usize, plus: &[usize]) -> Result<Self> {
        let mut sigma = vec![-1i8; len];
        for &i in plus {
            if i >= len {
                return Err(Error::Precondition(format!("index {i} out of range for {len} vectors")));
            }
            if sigma[i] == 1 {
                return Err(Error::Precondition(format!("index {i} listed twice")));
            }
            sigma[i] = 1;
        }
        Ok(Self::from_sigma(sigma))
    }

    fn from_sigma(sigma: Vec<i8>) -> Self {
        let plus = (0..sigma.len()).filter(|&i| sigma[i] > 0).collect();
        let minus = (0..sigma.len()).filter(|&i| sigma[i] < 0).collect();
        Self { plus, minus, sigma }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `J2 = diag(sigma)` on the coefficient space.
    pub fn j2(&self) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(self.len(), self.sigma.iter().map(|&s| c64(s as f64, 0.0))))
    }
}

/// `[f_i, f_i]` for every column.
pub fn self_products(space: &KreinSpace, f: &VectorFamily) -> Result<Vec<f64>> {
    check_family(space, f)?;
    let jt = space.j() * f.synthesis();
    Ok((0..f.len()).map(|i| f.synthesis().column(i).dotc(&jt.column(i)).re).collect())
}

fn check_family(space: &KreinSpace, f: &VectorFamily) -> Result<()> {
    if f.ambient_dim() != space.dim() {
        return Err(Error::Dimension(format!(
            "family lives in C^{}, space has dimension {}",
            f.ambient_dim(),
            space.dim()
        )));
    }
    Ok(())
}

/// Strict sign partition; a column with `|[f,f]| <= tol ||f||^2` is an error.
pub fn partition_by_sign(space: &KreinSpace, f: &VectorFamily) -> Result<SignPartition> {
    let (partition, neutral) = partition_with_neutral(space, f)?;
    if let Some(&index) = neutral.first() {
        let value = self_products(space, f)?[index];
        return Err(Error::NeutralVector { index, value });
    }
    Ok(partition)
}

/// Sign partition with neutral columns assigned to the positive class
/// (`I+ = {i : [f_i,f_i] >= 0}`), together with the list of neutral columns.
pub fn partition_with_neutral(space: &KreinSpace, f: &VectorFamily) -> Result<(SignPartition, Vec<usize>)> {
    let values = self_products(space, f)?;
    let tol = space.tolerances().neutral;
    let mut neutral = Vec::new();
    let sigma = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let norm2 = f.synthesis().column(i).norm_squared();
            if v.abs() <= tol * norm2 {
                neutral.push(i);
                1
            } else if v > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok((SignPartition::from_sigma(sigma), neutral))
}

/// Frame bounds of one side. On the positive side `0 < a <= b`; on the
/// negative side `b <= a < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideBounds {
    pub a: f64,
    pub b: f64,
}

/// Bounds of both sides; a side is absent when the corresponding
/// fundamental subspace is trivial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JFrameBounds {
    pub plus: Option<SideBounds>,
    pub minus: Option<SideBounds>,
}

impl JFrameBounds {
    /// `(B-, A-, A+, B+)`, `NaN` for an absent side.
    pub fn as_tuple(&self) -> (f64, f64, f64, f64) {
        let (am, bm) = self.minus.map_or((f64::NAN, f64::NAN), |s| (s.a, s.b));
        let (ap, bp) = self.plus.map_or((f64::NAN, f64::NAN), |s| (s.a, s.b));
        (bm, am, ap, bp)
    }
}

/// Unit-free vectors attaining the optimal bounds: `lower` attains `A`,
/// `upper` attains `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Attainment {
    pub lower: CVec,
    pub upper: CVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundWitnesses {
    pub plus: Option<Attainment>,
    pub minus: Option<Attainment>,
}

/// `S = T J2 T* J` and its pieces `S+ = T+ T+* J`, `S- = T- T-* J`
/// (so `S = S+ - S-`), plus `Q`, the projection onto `M+` along `M-`.
#[derive(Debug, Clone, PartialEq)]
pub struct JFrameOperators {
    pub s: CMat,
    pub s_plus: CMat,
    pub s_minus: CMat,
    pub q: CMat,
}

/// Why a family is not a J-frame.
#[derive(Debug, Clone, PartialEq)]
pub enum JFrameFailure {
    Degenerate { side: Side, neutral_dim: usize },
    Indefinite { side: Side },
    NotMaximal { side: Side, dim: usize, required: usize },
}

impl fmt::Display for JFrameFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Degenerate { side, neutral_dim } => {
                write!(f, "M_{side} degenerate: neutral direction present (dim {neutral_dim})")
            }
            Self::Indefinite { side } => write!(f, "M_{side} is J-indefinite"),
            Self::NotMaximal { side, dim, required } => {
                let h = if *side == Side::Plus { "H+" } else { "H-" };
                write!(f, "M_{side} not maximal: dim {dim} < dim {h} = {required}")
            }
        }
    }
}

/// Full analysis of a family against the J-frame definition.
#[derive(Debug, Clone)]
pub struct JFrameReport {
    pub is_j_frame: bool,
    pub failures: Vec<JFrameFailure>,
    pub partition: SignPartition,
    pub m_plus: SubspaceBasis,
    pub m_minus: SubspaceBasis,
    pub class_plus: SubspaceClassification,
    pub class_minus: SubspaceClassification,
    pub bounds: Option<JFrameBounds>,
    pub crude_bounds: Option<JFrameBounds>,
    pub witnesses: Option<BoundWitnesses>,
    pub operators: Option<JFrameOperators>,
    space: KreinSpace,
    family: VectorFamily,
}

impl JFrameReport {
    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn family(&self) -> &VectorFamily {
        &self.family
    }

    /// `T+`, the columns with positive sign.
    pub fn t_plus(&self) -> CMat {
        self.family.columns(&self.partition.plus)
    }

    pub fn t_minus(&self) -> CMat {
        self.family.columns(&self.partition.minus)
    }

    /// `"J-frame"` or the failures joined by `"; "`.
    pub fn reason(&self) -> String {
        if self.is_j_frame {
            return "J-frame".into();
        }
        self.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
    }

    fn require(&self) -> Result<()> {
        if self.is_j_frame {
            Ok(())
        } else {
            Err(Error::NotAJFrame(self.reason()))
        }
    }
}

pub fn is_j_frame(space: &KreinSpace, f: &VectorFamily) -> Result<JFrameReport> {
    let partition = partition_by_sign(space, f)?;
    let rank_tol = space.tolerances().rank;
    let t_plus = f.columns(&partition.plus);
    let t_minus = f.columns(&partition.minus);
    let m_plus = SubspaceBasis::span(&t_plus, rank_tol);
    let m_minus = SubspaceBasis::span(&t_minus, rank_tol);
    let class_plus = classify_subspace(space, &m_plus)?;
    let class_minus = classify_subspace(space, &m_minus)?;

    let mut failures = Vec::new();
    side_failures(Side::Plus, &class_plus, space.dim_plus(), &mut failures);
    side_failures(Side::Minus, &class_minus, space.dim_minus(), &mut failures);
    let is_j_frame = failures.is_empty();

    let mut report = JFrameReport {
        is_j_frame,
        failures,
        partition,
        m_plus,
        m_minus,
        class_plus,
        class_minus,
        bounds: None,
        crude_bounds: None,
        witnesses: None,
        operators: None,
        space: space.clone(),
        family: f.clone(),
    };
    if is_j_frame {
        fill_j_frame_data(&mut report, &t_plus, &t_minus)?;
    }
    Ok(report)
}

fn side_failures(side: Side, class: &SubspaceClassification, required: usize, out: &mut Vec<JFrameFailure>) {
    let definite = match side {
        Side::Plus => class.is_uniformly_positive(),
        Side::Minus => class.is_uniformly_negative(),
    };
    if definite {
        if class.dim != required {
            out.push(JFrameFailure::NotMaximal { side, dim: class.dim, required });
        }
        return;
    }
    let semidefinite = match side {
        Side::Plus => class.kind.is_nonnegative(),
        Side::Minus => class.kind.is_nonpositive(),
    };
    if semidefinite && class.kind != SubspaceKind::Indefinite {
        out.push(JFrameFailure::Degenerate { side, neutral_dim: class.degenerate_part_dim });
    } else {
        out.push(JFrameFailure::Indefinite { side });
    }
}

fn fill_j_frame_data(report: &mut JFrameReport, t_plus: &CMat, t_minus: &CMat) -> Result<()> {
    let space = &report.space;
    let j = space.j();
    let plus = side_bounds(space, &report.m_plus, t_plus, 1.0);
    let minus = side_bounds(space, &report.m_minus, t_minus, -1.0);
    report.bounds = Some(JFrameBounds { plus: plus.as_ref().map(|p| p.0), minus: minus.as_ref().map(|m| m.0) });
    report.witnesses = Some(BoundWitnesses { plus: plus.map(|p| p.1), minus: minus.map(|m| m.1) });

    let rank_tol = space.tolerances().rank;
    let crude = |t: &CMat, alpha: Option<f64>, sign: f64| -> Option<SideBounds> {
        if t.ncols() == 0 {
            return None;
        }
        let alpha = alpha?;
        let gamma = reduced_min_modulus_with(t, rank_tol);
        let norm = linalg::spectral_norm(t);
        Some(SideBounds { a: sign * alpha * alpha * gamma * gamma, b: sign * norm * norm / alpha })
    };
    report.crude_bounds = Some(JFrameBounds {
        plus: crude(t_plus, report.class_plus.definiteness_bound, 1.0),
        minus: crude(t_minus, report.class_minus.definiteness_bound, -1.0),
    });

    let s_plus = t_plus * t_plus.adjoint() * j;
    let s_minus = t_minus * t_minus.adjoint() * j;
    let s = &s_plus - &s_minus;
    let q = oblique_projection(space, &report.m_plus, &report.m_minus)?;
    report.operators = Some(JFrameOperators { s, s_plus, s_minus, q });
    Ok(())
}

/// Optimal bounds of `A [f,f] <= sum |[f,f_i]|^2 <= B [f,f]` on `M`, computed
/// as extreme eigenvalues of `H^(1/2) X X* H^(1/2)` where `H = sign * B*JB`
/// and `X = B* T` in an orthonormal basis `B` of `M`.
fn side_bounds(space: &KreinSpace, m: &SubspaceBasis, t: &CMat, sign: f64) -> Option<(SideBounds, Attainment)> {
    if m.dim() == 0 || t.ncols() == 0 {
        return None;
    }
    let basis = m.basis();
    let h = linalg::hermitian_part(&form_matrix(space, m)) * c64(sign, 0.0);
    let x = basis.adjoint() * t;
    let h_half = psd_sqrt(&h);
    let pencil = &h_half * (&x * x.adjoint()) * &h_half;
    let (vals, vecs) = hermitian_eigen(&pencil);
    let h_inv_half = psd_power(&h, -0.5);
    let lift = |k: usize| basis * &h_inv_half * vecs.column(k);
    let last = vals.len() - 1;
    let bounds = SideBounds { a: sign * vals[0], b: sign * vals[last] };
    Some((bounds, Attainment { lower: lift(0), upper: lift(last) }))
}

/// Optimal J-frame bounds.
pub fn j_frame_bounds(space: &KreinSpace, f: &VectorFamily) -> Result<JFrameBounds> {
    let report = is_j_frame(space, f)?;
    report.require()?;
    Ok(report.bounds.expect("J-frame reports carry bounds"))
}

/// The bounds `+-alpha^2 gamma(T)^2` and `+-||T||^2 / alpha`.
pub fn crude_j_frame_bounds(space: &KreinSpace, f: &VectorFamily) -> Result<JFrameBounds> {
    let report = is_j_frame(space, f)?;
    report.require()?;
    Ok(report.crude_bounds.expect("J-frame reports carry bounds"))
}

/// The closed expressions `A = ||G^(-1/2) R^(-1)||^(-1)` and
/// `B = ||G^(1/2) R G||` with `G` the compressed form and `R = X X*` in an
/// orthonormal basis of each side (sign-adjusted on the negative side).
/// These coincide with the optimal bounds when `G = I`, but not in general.
pub fn literal_bound_expressions(space: &KreinSpace, f: &VectorFamily) -> Result<JFrameBounds> {
    let report = is_j_frame(space, f)?;
    report.require()?;
    let side = |m: &SubspaceBasis, t: &CMat, sign: f64| -> Option<SideBounds> {
        if m.dim() == 0 {
            return None;
        }
        let g = linalg::hermitian_part(&form_matrix(space, m)) * c64(sign, 0.0);
        let x = m.basis().adjoint() * t;
        let r = &x * x.adjoint();
        let r_inv = r.clone().try_inverse()?;
        let a = 1.0 / linalg::spectral_norm(&(psd_power(&g, -0.5) * r_inv));
        let b = linalg::spectral_norm(&(psd_sqrt(&g) * r * &g));
        Some(SideBounds { a: sign * a, b: sign * b })
    };
    Ok(JFrameBounds {
        plus: side(&report.m_plus, &report.t_plus(), 1.0),
        minus: side(&report.m_minus, &report.t_minus(), -1.0),
    })
}

/// `S = T J2 T* J` for any family with a strict sign partition.
pub fn j_frame_operator(space: &KreinSpace, f: &VectorFamily) -> Result<CMat> {
    let p = partition_by_sign(space, f)?;
    let t = f.synthesis();
    Ok(t * p.j2() * t.adjoint() * space.j())
}

pub fn j_frame_decomposition(report: &JFrameReport) -> Result<JFrameOperators> {
    report.require()?;
    Ok(report.operators.clone().expect("J-frame reports carry operators"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// `c_i = sigma_i [f, S^-1 f_i]`.
    pub coefficients: CVec,
    /// `sum c_i f_i`.
    pub rebuilt: CVec,
    /// `d_i = sigma_i [f, f_i]`.
    pub dual_coefficients: CVec,
    /// `sum d_i S^-1 f_i`.
    pub rebuilt_dual: CVec,
}

pub fn indefinite_reconstruct(report: &JFrameReport, x: &CVec) -> Result<Reconstruction> {
    report.require()?;
    let space = &report.space;
    if x.len() != space.dim() {
        return Err(Error::Dimension(format!("vector of length {} in C^{}", x.len(), space.dim())));
    }
    let ops = report.operators.as_ref().expect("J-frame reports carry operators");
    let s_inv = invert_operator(&ops.s)?;
    let t = report.family.synthesis();
    let g = &s_inv * t;
    let j2 = report.partition.j2();
    let jx = space.j() * x;
    let coefficients = &j2 * (g.adjoint() * &jx);
    let dual_coefficients = &j2 * (t.adjoint() * &jx);
    Ok(Reconstruction {
        rebuilt: t * &coefficients,
        rebuilt_dual: &g * &dual_coefficients,
        coefficients,
        dual_coefficients,
    })
}

fn invert_operator(s: &CMat) -> Result<CMat> {
    s.clone()
        .try_inverse()
        .ok_or_else(|| Error::Operator("J-frame operator is numerically singular".into()))
}

/// `{S^-1 f_i}`, labels kept.
pub fn canonical_dual_j_frame(space: &KreinSpace, f: &VectorFamily) -> Result<VectorFamily> {
    let report = is_j_frame(space, f)?;
    report.require()?;
    let s = &report.operators.as_ref().expect("J-frame reports carry operators").s;
    f.relabelled_map(invert_operator(s)? * f.synthesis())
}

/// Angular operators of `R(T+)` over `H+` and of `R(T-)` over `H-`.
#[derive(Debug, Clone)]
pub struct TransitionReport {
    pub plus: Option<AngularOperator>,
    pub minus: Option<AngularOperator>,
    /// Both angular operators exist and are defined on all of `H+`, `H-`.
    pub defined_everywhere: bool,
    /// `max(||K+||, ||K-||)`; infinite when an angular operator does not exist.
    pub norm: f64,
    /// `defined_everywhere` and `norm < 1`.
    pub criterion: bool,
}

pub fn transition_operator_criterion(space: &KreinSpace, f: &VectorFamily) -> Result<TransitionReport> {
    let p = partition_by_sign(space, f)?;
    let rank_tol = space.tolerances().rank;
    let m_plus = SubspaceBasis::span(&f.columns(&p.plus), rank_tol);
    let m_minus = SubspaceBasis::span(&f.columns(&p.minus), rank_tol);
    let plus = angular_operator_over(space, &m_plus, Side::Plus).ok();
    let minus = angular_operator_over(space, &m_minus, Side::Minus).ok();
    let defined_everywhere = matches!((&plus, &minus), (Some(a), Some(b)) if a.full_domain && b.full_domain);
    let norm = match (&plus, &minus) {
        (Some(a), Some(b)) => a.norm.max(b.norm),
        _ => f64::INFINITY,
    };
    // ||K|| < 1 read through the definiteness bound of the graph, with the
    // same threshold the subspace classification uses
    let alpha = (1.0 - norm * norm) / (1.0 + norm * norm);
    let criterion = defined_everywhere && norm.is_finite() && alpha > space.tolerances().definite;
    Ok(TransitionReport { plus, minus, defined_everywhere, norm, criterion })
}

/// `Fp ∪ Fm` after checking that `Fp` spans a maximal uniformly J-positive
/// subspace and `Fm` a maximal uniformly J-negative one.
pub fn build_from_maximal_pair(space: &KreinSpace, fp: &VectorFamily, fm: &VectorFamily) -> Result<VectorFamily> {
    check_family(space, fp)?;
    check_family(space, fm)?;
    let cp = classify_subspace(space, &space.span(fp.synthesis())?)?;
    if !cp.is_maximal_positive() {
        return Err(Error::Geometry(format!(
            "positive part spans a {} subspace of dimension {} (need maximal uniformly J-positive, dim {})",
            cp.kind,
            cp.dim,
            space.dim_plus()
        )));
    }
    let cm = classify_subspace(space, &space.span(fm.synthesis())?)?;
    if !cm.is_maximal_negative() {
        return Err(Error::Geometry(format!(
            "negative part spans a {} subspace of dimension {} (need maximal uniformly J-negative, dim {})",
            cm.kind,
            cm.dim,
            space.dim_minus()
        )));
    }
    fp.concat(fm)
}

/// `(ind+, ind-)`: numbers of positive and negative eigenvalues of `JS`.
pub fn index_signature(space: &KreinSpace, s: &CMat) -> Result<(usize, usize)> {
    if s.shape() != (space.dim(), space.dim()) {
        return Err(Error::Dimension(format!("operator is {}x{}, space has dimension {}", s.nrows(), s.ncols(), space.dim())));
    }
    let js = space.j() * s;
    let tol = space.tolerances();
    let scale = js.norm().max(1.0);
    if linalg::hermitian_defect(&js) > tol.residual * scale {
        return Err(Error::Operator("operator is not J-selfadjoint (JS is not Hermitian)".into()));
    }
    let eig = linalg::hermitian_eigenvalues(&js);
    let cut = tol.rank * scale;
    Ok((eig.iter().filter(|&&l| l > cut).count(), eig.iter().filter(|&&l| l < -cut).count()))
}

/// Outcome of the one-sided inequality test
/// `A [f,f] <= sum |[f,f_i]|^2 <= B [f,f]` on `M = span{f_i}` with `0 < A <= B`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub dim: usize,
    /// Some `0 < A <= B` works.
    pub satisfiable: bool,
    /// Optimal constants, when `[.,.]` does not vanish identically on `M`.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// `dim (M ∩ M^[⊥])`.
    pub neutral_dim: usize,
}

impl InequalityReport {
    pub fn degenerate(&self) -> bool {
        self.neutral_dim > 0
    }

    /// Satisfiable and nondegenerate, i.e. `M` is uniformly J-positive.
    pub fn uniformly_positive(&self) -> bool {
        self.satisfiable && !self.degenerate()
    }
}

/// One-sided inequality test for the columns of `vectors`. Use the antispace
/// for the negative version.
pub fn one_sided_inequalities(space: &KreinSpace, vectors: &CMat) -> Result<InequalityReport> {
    let m = space.span(vectors)?;
    let tol = space.tolerances();
    let k = m.dim();
    if k == 0 {
        return Ok(InequalityReport { dim: 0, satisfiable: true, lower: None, upper: None, neutral_dim: 0 });
    }
    let (vals, vecs) = hermitian_eigen(&form_matrix(space, &m));
    let neutral_dim = vals.iter().filter(|l| l.abs() <= tol.definite).count();
    if vals[0] < -tol.definite {
        return Ok(InequalityReport { dim: k, satisfiable: false, lower: None, upper: None, neutral_dim });
    }
    let keep: Vec<usize> = (0..k).filter(|&i| vals[i] > tol.definite).collect();
    if keep.is_empty() {
        // [.,.] vanishes on M: both sides are identically zero
        return Ok(InequalityReport { dim: k, satisfiable: true, lower: None, upper: None, neutral_dim });
    }
    let v1 = select_columns(&vecs, &keep);
    let root = CMat::from_diagonal(&CVec::from_iterator(keep.len(), keep.iter().map(|&i| c64(vals[i].sqrt(), 0.0))));
    let x = m.basis().adjoint() * vectors;
    let w = &root * v1.adjoint() * x;
    let mu = linalg::hermitian_eigenvalues(&(&w * w.adjoint()));
    let (lo, hi) = (mu[0], mu[mu.len() - 1]);
    let satisfiable = lo > tol.rank * hi.max(1.0);
    Ok(InequalityReport { dim: k, satisfiable, lower: Some(lo), upper: Some(hi), neutral_dim })
}

/// J-frame test through nondegeneracy of `M+-` and the two-sided
/// inequalities on each side. Neutral columns count as positive.
pub fn j_frame_via_inequalities(space: &KreinSpace, f: &VectorFamily) -> Result<bool> {
    check_family(space, f)?;
    if !is_frame_with(f, space.tolerances().rank) {
        return Err(Error::NotAFrame("family does not span the space".into()));
    }
    let (p, _) = partition_with_neutral(space, f)?;
    let plus = one_sided_inequalities(space, &f.columns(&p.plus))?;
    let minus = one_sided_inequalities(&space.antispace(), &f.columns(&p.minus))?;
    Ok(plus.uniformly_positive() && minus.uniformly_positive())
}
