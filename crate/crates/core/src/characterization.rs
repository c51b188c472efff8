//! Operator-level tests: when a surjective matrix is (up to a unitary on
//! the coefficient space) the synthesis operator of a J-frame, and which
//! invertible J-selfadjoint operators are J-frame operators.
//!
//! Every decision takes its candidate witness as input; nothing searches over
//! index subsets or projections.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::VectorFamily;
use crate::jframe::{is_j_frame, SignPartition};
use crate::krein::{
    classify_subspace, friedrichs_angle_with, j_orthogonal_companion, oblique_projection, KreinSpace,
    SubspaceBasis,
};
use crate::linalg::{
    self, c64, complement, hermitian_eigen, hstack, identity, intersection_dim, null_space, orth, pinv, psd_margin,
    psd_sqrt, rank, select_columns, CMat,
};
use crate::sample::random_unitary;
use crate::tolerance::Tolerances;

/// Verdict of an operator test with the witness that supports it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorCertificate {
    pub verdict: bool,
    /// Projection with uniformly J-positive range and uniformly J-negative kernel.
    pub witness_q: Option<CMat>,
    pub witness_split: Option<(CMat, CMat)>,
    /// Unitary on the coefficient space.
    pub witness_u: Option<CMat>,
    pub witness_partition: Option<Vec<usize>>,
    /// Named residuals and margins.
    pub diagnostics: Vec<(String, f64)>,
    /// Human-readable explanation of failed checks.
    pub notes: Vec<String>,
}

impl OperatorCertificate {
    fn diag(&mut self, name: &str, value: f64) {
        self.diagnostics.push((name.to_string(), value));
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn require_surjective(t: &CMat, tol: &Tolerances) -> Result<()> {
    let r = rank(t, tol.rank);
    if r < t.nrows() {
        return Err(Error::NotSurjective(format!("rank {r} < {}", t.nrows())));
    }
    Ok(())
}

fn rel_norm(a: &CMat, scale: f64) -> f64 {
    a.norm() / scale.max(1.0)
}

/// Outcome of the projection-splitting lemma for `T P_S T^+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitTest {
    /// `T P_S T^+` is idempotent.
    pub idempotent: bool,
    /// `||E^2 - E|| / max(1, ||E||)` for `E = T P_S T^+`.
    pub residual: f64,
    /// `N(T) = (S ∩ N(T)) ⊕ (S^⊥ ∩ N(T))`.
    pub kernel_splits: bool,
    /// Friedrichs cosine between `S` and `N(T)^⊥`.
    pub cosine: f64,
}

/// `s` is a subspace of the coefficient space `C^m` of `t` (`n x m`).
pub fn projection_split_test(t: &CMat, s: &SubspaceBasis, tol: &Tolerances) -> Result<SplitTest> {
    if s.ambient_dim() != t.ncols() {
        return Err(Error::Dimension(format!(
            "subspace lives in C^{}, coefficient space is C^{}",
            s.ambient_dim(),
            t.ncols()
        )));
    }
    require_surjective(t, tol)?;
    let row_space = SubspaceBasis::span(&t.adjoint(), tol.rank);
    let cosine = friedrichs_angle_with(s, &row_space, tol.rank);
    if cosine >= 1.0 - tol.subspace {
        return Err(Error::Precondition(format!("Friedrichs cosine {cosine:.3e} is not below 1")));
    }
    let e = t * s.projector() * pinv(t, tol.rank);
    let residual = rel_norm(&(&e * &e - &e), e.norm());
    let kernel = null_space(t, tol.rank);
    let in_s = intersection_dim(&kernel, s.basis(), tol.rank);
    let in_perp = intersection_dim(&kernel, &complement(s.basis()), tol.rank);
    Ok(SplitTest {
        idempotent: residual <= tol.residual,
        residual,
        kernel_splits: in_s + in_perp == kernel.ncols(),
        cosine,
    })
}

/// Membership in the set of projections with uniformly J-positive range and
/// uniformly J-negative kernel. Fills diagnostics and notes on `cert`.
fn check_projection(space: &KreinSpace, q: &CMat, cert: &mut OperatorCertificate) -> Result<bool> {
    let tol = space.tolerances();
    if q.shape() != (space.dim(), space.dim()) {
        return Err(Error::Dimension(format!("Q is {}x{}, space has dimension {}", q.nrows(), q.ncols(), space.dim())));
    }
    let idem = rel_norm(&(q * q - q), q.norm());
    cert.diag("||Q^2-Q||", idem);
    if idem > tol.residual {
        cert.note("Q is not idempotent");
        return Ok(false);
    }
    let range = SubspaceBasis::span(q, tol.rank);
    let kernel = SubspaceBasis::from_orthonormal(null_space(q, tol.rank))?;
    let cr = classify_subspace(space, &range)?;
    let ck = classify_subspace(space, &kernel)?;
    let mut ok = true;
    if !cr.is_uniformly_positive() {
        cert.note(format!("R(Q) is {} (not uniformly J-positive)", cr.kind));
        ok = false;
    } else {
        cert.diag("alpha(R(Q))", cr.definiteness_bound.unwrap_or(0.0));
    }
    if !ck.is_uniformly_negative() {
        cert.note(format!("N(Q) is {} (not uniformly J-negative)", ck.kind));
        ok = false;
    } else {
        cert.diag("alpha(N(Q))", ck.definiteness_bound.unwrap_or(0.0));
    }
    Ok(ok)
}

/// Whether `q` is idempotent with uniformly J-positive range and uniformly
/// J-negative kernel.
pub fn is_admissible_projection(space: &KreinSpace, q: &CMat) -> Result<bool> {
    check_projection(space, q, &mut OperatorCertificate::default())
}

/// Synthesis test for a given positive index set: the Friedrichs cosine
/// between `N(T)^⊥` and `l2(I+)` is below one and `T P+ T^+` is an admissible
/// projection.
pub fn is_jframe_synthesis(space: &KreinSpace, t: &CMat, i_plus: &[usize]) -> Result<OperatorCertificate> {
    let tol = space.tolerances();
    if t.nrows() != space.dim() {
        return Err(Error::Dimension(format!("T has {} rows, space has dimension {}", t.nrows(), space.dim())));
    }
    require_surjective(t, tol)?;
    let m = t.ncols();
    let partition = SignPartition::from_plus(m, i_plus)?;
    let p_plus = select_columns(&identity(m), &partition.plus);
    let coeff_plus = SubspaceBasis::from_orthonormal(p_plus.clone())?;
    let row_space = SubspaceBasis::span(&t.adjoint(), tol.rank);

    let mut cert = OperatorCertificate { witness_partition: Some(partition.plus.clone()), ..Default::default() };
    let cosine = friedrichs_angle_with(&row_space, &coeff_plus, tol.rank);
    cert.diag("c(N(T)^perp, l2(I+))", cosine);
    let angle_ok = cosine < 1.0 - tol.subspace;
    if !angle_ok {
        cert.note("Friedrichs cosine between N(T)^perp and l2(I+) is 1");
    }
    let q = t * (&p_plus * p_plus.adjoint()) * pinv(t, tol.rank);
    let q_ok = check_projection(space, &q, &mut cert)?;
    cert.verdict = angle_ok && q_ok;
    cert.witness_q = Some(q);
    Ok(cert)
}

/// `||Q T T* (I-Q)*||` relative to `||T||^2`.
pub fn orthogonality_residual(t: &CMat, q: &CMat) -> f64 {
    let n = q.nrows();
    let r = q * t * t.adjoint() * (identity(n) - q).adjoint();
    r.norm() / (t.norm() * t.norm()).max(1.0)
}

/// Admissible `Q` with `Q T T* (I-Q)* = 0`. On success the split
/// `(QT, (I-Q)T)` is returned as a witness.
pub fn projection_orthogonality_test(space: &KreinSpace, t: &CMat, q: &CMat) -> Result<OperatorCertificate> {
    let tol = space.tolerances();
    if t.nrows() != space.dim() {
        return Err(Error::Dimension("T and space dimensions differ".into()));
    }
    require_surjective(t, tol)?;
    let mut cert = OperatorCertificate::default();
    let q_ok = check_projection(space, q, &mut cert)?;
    let res = orthogonality_residual(t, q);
    cert.diag("||QTT*(I-Q)*||", res);
    if res > tol.residual {
        cert.note("QTT*(I-Q)* does not vanish");
    }
    cert.verdict = q_ok && res <= tol.residual;
    cert.witness_q = Some(q.clone());
    let t1 = q * t;
    let t2 = t - &t1;
    cert.witness_split = Some((t1, t2));
    Ok(cert)
}

/// Split `T = T1 + T2` with `R(T1)` uniformly J-positive, `R(T2)` uniformly
/// J-negative and `T1 T2* = T2 T1* = 0`. When it holds, a unitary `U` with
/// `TU` a J-frame synthesis matrix is built and verified.
pub fn unitary_reordering_test(space: &KreinSpace, t: &CMat, t1: &CMat, t2: &CMat) -> Result<OperatorCertificate> {
    let tol = space.tolerances();
    if t.nrows() != space.dim() || t1.shape() != t.shape() || t2.shape() != t.shape() {
        return Err(Error::Dimension("T, T1, T2 must share the shape n x m".into()));
    }
    require_surjective(t, tol)?;
    let scale = t.norm() * t.norm();
    let sum_res = rel_norm(&(t - t1 - t2), t.norm());
    if sum_res > tol.residual {
        return Err(Error::Precondition(format!("T1 + T2 differs from T (relative residual {sum_res:.3e})")));
    }
    let mut cert = OperatorCertificate { witness_split: Some((t1.clone(), t2.clone())), ..Default::default() };
    let c1 = classify_subspace(space, &SubspaceBasis::span(t1, tol.rank))?;
    let c2 = classify_subspace(space, &SubspaceBasis::span(t2, tol.rank))?;
    let mut ok = true;
    if !c1.is_uniformly_positive() {
        cert.note(format!("R(T1) is {} (not uniformly J-positive)", c1.kind));
        ok = false;
    }
    if !c2.is_uniformly_negative() {
        cert.note(format!("R(T2) is {} (not uniformly J-negative)", c2.kind));
        ok = false;
    }
    let r12 = rel_norm(&(t1 * t2.adjoint()), scale);
    let r21 = rel_norm(&(t2 * t1.adjoint()), scale);
    cert.diag("||T1 T2*||", r12);
    cert.diag("||T2 T1*||", r21);
    if r12.max(r21) > tol.residual {
        cert.note("T1 T2* does not vanish");
        ok = false;
    }
    if !ok {
        return Ok(cert);
    }

    let u = reordering_unitary(t1, t2, tol);
    let v = t * &u;
    let n_plus = rank(t1, tol.rank);
    let fam = VectorFamily::new(v)?;
    match is_j_frame(space, &fam) {
        Ok(report) if report.is_j_frame && report.partition.plus == (0..n_plus).collect::<Vec<_>>() => {
            cert.verdict = true;
            cert.witness_partition = Some(report.partition.plus.clone());
        }
        Ok(report) => cert.note(format!("TU is not a J-frame synthesis matrix: {}", report.reason())),
        Err(e) => cert.note(format!("TU is not a J-frame synthesis matrix: {e}")),
    }
    cert.diag("||U*U - I||", (u.adjoint() * &u - identity(u.ncols())).norm());
    cert.witness_u = Some(u);
    Ok(cert)
}

/// Columns: an orthonormal basis of `N(T1)^⊥`, then one of `N(T1)`.
///
/// `N(T1) = N(T2)^⊥ ⊕ (N(T1) ∩ N(T2))`; a plain orthonormal basis of `N(T1)`
/// may contain vectors of `N(T)`, which `T` sends to zero. The basis of the
/// common kernel is therefore mixed with a basis of `N(T2)^⊥` (or, when that
/// is trivial, of `N(T1)^⊥`) by a Fourier matrix, whose entries are all
/// nonzero, so no column of `TU` vanishes.
fn reordering_unitary(t1: &CMat, t2: &CMat, tol: &Tolerances) -> CMat {
    let b1 = orth(&t1.adjoint(), tol.rank);
    let c = orth(&t2.adjoint(), tol.rank);
    let common = complement(&hstack(&b1, &c));
    if common.ncols() == 0 {
        return hstack(&b1, &c);
    }
    if c.ncols() > 0 {
        let mixed = hstack(&c, &common) * fourier(c.ncols() + common.ncols());
        hstack(&b1, &mixed)
    } else {
        let mixed = hstack(&b1, &common) * fourier(b1.ncols() + common.ncols());
        hstack(&mixed, &c)
    }
}

fn fourier(k: usize) -> CMat {
    let s = 1.0 / (k as f64).sqrt();
    CMat::from_fn(k, k, |a, b| {
        let ang = 2.0 * std::f64::consts::PI * (a * b) as f64 / k as f64;
        c64(s * ang.cos(), s * ang.sin())
    })
}

/// Checks that `S` is square, invertible and J-selfadjoint.
fn require_j_selfadjoint(space: &KreinSpace, s: &CMat) -> Result<CMat> {
    let tol = space.tolerances();
    if s.shape() != (space.dim(), space.dim()) {
        return Err(Error::Dimension(format!("S is {}x{}, space has dimension {}", s.nrows(), s.ncols(), space.dim())));
    }
    let js = space.j() * s;
    if linalg::hermitian_defect(&js) > tol.residual * js.norm().max(1.0) {
        return Err(Error::Operator("S is not J-selfadjoint (JS is not Hermitian)".into()));
    }
    if rank(s, tol.rank) < space.dim() {
        return Err(Error::Operator("S is not invertible".into()));
    }
    Ok(js)
}

/// `Q` is admissible, `QS` is J-positive and `(I-Q)S` is J-negative.
pub fn is_j_frame_operator(space: &KreinSpace, s: &CMat, q: &CMat) -> Result<OperatorCertificate> {
    require_j_selfadjoint(space, s)?;
    let tol = space.tolerances();
    let mut cert = OperatorCertificate::default();
    let q_ok = check_projection(space, q, &mut cert)?;
    let j = space.j();
    let plus = j * q * s;
    let minus = -(j * (identity(space.dim()) - q) * s);
    let mp = psd_margin(&plus, tol.psd);
    let mm = psd_margin(&minus, tol.psd);
    cert.diag("psd margin J(QS)", mp);
    cert.diag("psd margin -J(I-Q)S", mm);
    if mp < 0.0 {
        cert.note("QS is not J-positive");
    }
    if mm < 0.0 {
        cert.note("(I-Q)S is not J-negative");
    }
    cert.verdict = q_ok && mp >= 0.0 && mm >= 0.0;
    cert.witness_q = Some(q.clone());
    if cert.verdict {
        let s1 = q * s;
        let s2 = s1.clone() - s;
        cert.witness_split = Some((s1, s2));
    }
    Ok(cert)
}

/// Image test for a maximal uniformly J-positive `T`: `S(T)` is maximal
/// uniformly J-positive, `[Sf,f] >= 0` on `T` and `[Sg,g] <= 0` on
/// `S(T)^[⊥]`. When all three hold the projection onto `S(T)` along `T^[⊥]`
/// is passed to [`is_j_frame_operator`].
pub fn positive_image_test(space: &KreinSpace, s: &CMat, t_sub: &SubspaceBasis) -> Result<OperatorCertificate> {
    let js = require_j_selfadjoint(space, s)?;
    let tol = space.tolerances();
    let ct = classify_subspace(space, t_sub)?;
    if !ct.is_maximal_positive() {
        return Err(Error::Geometry(format!(
            "T is {} of dimension {}, not maximal uniformly J-positive",
            ct.kind, ct.dim
        )));
    }
    let mut cert = OperatorCertificate::default();
    let image = t_sub.image(s, tol.rank);
    let ci = classify_subspace(space, &image)?;
    let c1 = ci.is_maximal_positive();
    if !c1 {
        cert.note(format!("condition 1 fails: S(T) is {}", ci.kind));
    }
    let on_t = t_sub.basis().adjoint() * &js * t_sub.basis();
    let m2 = psd_margin(&on_t, tol.psd);
    cert.diag("psd margin [Sf,f] on T", m2);
    if m2 < 0.0 {
        cert.note("condition 2 fails: [Sf,f] < 0 for some f in T");
    }
    let comp = j_orthogonal_companion(space, &image)?;
    let on_comp = -(comp.basis().adjoint() * &js * comp.basis());
    let m3 = psd_margin(&on_comp, tol.psd);
    cert.diag("psd margin -[Sg,g] on S(T)^[perp]", m3);
    if m3 < 0.0 {
        cert.note("condition 3 fails: [Sg,g] > 0 for some g in S(T)^[perp]");
    }
    if !(c1 && m2 >= 0.0 && m3 >= 0.0) {
        return Ok(cert);
    }
    let q = oblique_projection(space, &image, &j_orthogonal_companion(space, t_sub)?)?;
    let mut inner = is_j_frame_operator(space, s, &q)?;
    cert.diagnostics.append(&mut inner.diagnostics);
    cert.notes.append(&mut inner.notes);
    cert.verdict = inner.verdict;
    cert.witness_q = inner.witness_q;
    cert.witness_split = inner.witness_split;
    Ok(cert)
}

/// Tries the supplied projections, then the supplied subspaces, `H+` and the
/// positive eigenspace of `JS` through [`positive_image_test`]. Returns the
/// first accepting certificate, or a rejecting one listing what was tried.
pub fn find_j_frame_operator_witness(
    space: &KreinSpace,
    s: &CMat,
    projections: &[CMat],
    subspaces: &[SubspaceBasis],
) -> Result<OperatorCertificate> {
    let js = require_j_selfadjoint(space, s)?;
    let tol = space.tolerances();
    let mut tried = Vec::new();
    for (k, q) in projections.iter().enumerate() {
        let cert = is_j_frame_operator(space, s, q)?;
        if cert.verdict {
            return Ok(cert);
        }
        tried.push(format!("Q[{k}]: {}", cert.notes.join(", ")));
    }
    let (vals, vecs) = hermitian_eigen(&js);
    let pos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.0).collect();
    let eigenspace = SubspaceBasis::span(&select_columns(&vecs, &pos), tol.rank);
    let mut candidates: Vec<(String, SubspaceBasis)> =
        subspaces.iter().enumerate().map(|(k, m)| (format!("T[{k}]"), m.clone())).collect();
    candidates.push(("H+".into(), space.hplus()));
    candidates.push(("positive eigenspace of JS".into(), eigenspace));
    for (name, m) in candidates {
        match positive_image_test(space, s, &m) {
            Ok(cert) if cert.verdict => return Ok(cert),
            Ok(cert) => tried.push(format!("{name}: {}", cert.notes.join(", "))),
            Err(e) => tried.push(format!("{name}: {e}")),
        }
    }
    let (ip, im) = crate::jframe::index_signature(space, s)?;
    let mut cert = OperatorCertificate::default();
    cert.note(format!("ind=({ip},{im}) but no admissible Q found among tried witnesses"));
    cert.notes.extend(tried);
    Ok(cert)
}

/// Builds a J-frame whose J-frame operator is `S1 - S2`, where `S1`, `S2` are
/// J-positive with uniformly J-positive (resp. J-negative) complementary
/// ranges. Each side is the minimal frame `B A^(1/2)` with `A = B* S_j J B`.
pub fn construct_j_frame_from_operator(space: &KreinSpace, s1: &CMat, s2: &CMat) -> Result<VectorFamily> {
    let (t1, t2) = factor_pair(space, s1, s2)?;
    labelled(hstack(&t1, &t2), t1.ncols())
}

/// As [`construct_j_frame_from_operator`], with `extra_plus` and
/// `extra_minus` additional vectors on each side obtained by a random
/// co-isometry.
pub fn construct_redundant_j_frame<R: Rng + ?Sized>(
    space: &KreinSpace,
    s1: &CMat,
    s2: &CMat,
    extra_plus: usize,
    extra_minus: usize,
    rng: &mut R,
) -> Result<VectorFamily> {
    let (t1, t2) = factor_pair(space, s1, s2)?;
    let spread = |t: CMat, extra: usize, rng: &mut R| -> CMat {
        let k = t.ncols();
        if extra == 0 || k == 0 {
            return t;
        }
        let u = random_unitary(k + extra, rng);
        // first k rows of a unitary form a co-isometry
        t * u.rows(0, k)
    };
    let t1 = spread(t1, extra_plus, rng);
    let t2 = spread(t2, extra_minus, rng);
    labelled(hstack(&t1, &t2), t1.ncols())
}

fn labelled(t: CMat, n_plus: usize) -> Result<VectorFamily> {
    let labels = (0..t.ncols())
        .map(|i| if i < n_plus { format!("p{}", i + 1) } else { format!("m{}", i - n_plus + 1) })
        .collect();
    VectorFamily::with_labels(t, labels)
}

fn factor_pair(space: &KreinSpace, s1: &CMat, s2: &CMat) -> Result<(CMat, CMat)> {
    let tol = space.tolerances();
    let n = space.dim();
    for (name, s) in [("S1", s1), ("S2", s2)] {
        if s.shape() != (n, n) {
            return Err(Error::Dimension(format!("{name} is {}x{}, space has dimension {n}", s.nrows(), s.ncols())));
        }
        if psd_margin(&(space.j() * s), tol.psd) < 0.0 {
            return Err(Error::Operator(format!("{name} is not J-positive (J {name} is not positive semidefinite)")));
        }
    }
    let k1 = SubspaceBasis::span(s1, tol.rank);
    let k2 = SubspaceBasis::span(s2, tol.rank);
    let c1 = classify_subspace(space, &k1)?;
    let c2 = classify_subspace(space, &k2)?;
    if !c1.is_uniformly_positive() {
        return Err(Error::Geometry(format!("R(S1) is {}, not uniformly J-positive", c1.kind)));
    }
    if !c2.is_uniformly_negative() {
        return Err(Error::Geometry(format!("R(S2) is {}, not uniformly J-negative", c2.kind)));
    }
    if k1.dim() + k2.dim() != n {
        return Err(Error::Geometry(format!(
            "ranges of dimensions {} and {} do not add up to {n}; S1 - S2 is not invertible",
            k1.dim(),
            k2.dim()
        )));
    }
    Ok((factor_side(space, s1, &k1)?, factor_side(space, s2, &k2)?))
}

fn factor_side(space: &KreinSpace, s: &CMat, k: &SubspaceBasis) -> Result<CMat> {
    let tol = space.tolerances();
    if k.dim() == 0 {
        return Ok(CMat::zeros(space.dim(), 0));
    }
    let a = k.basis().adjoint() * s * space.j() * k.basis();
    let a = linalg::hermitian_part(&a);
    let lmin = linalg::hermitian_eigenvalues(&a)[0];
    if lmin <= tol.rank * a.norm().max(1.0) {
        return Err(Error::Operator(format!("S J is not positive definite on R(S) (min eigenvalue {lmin:.3e})")));
    }
    Ok(k.basis() * psd_sqrt(&a))
}
