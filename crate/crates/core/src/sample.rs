//! Seeded random constructions: graph subspaces over `H+`/`H-`, glued
//! J-frames and elements of the projection set `{Q : R(Q) uniformly
//! positive, N(Q) uniformly negative}`.
//!
//! All generators take the RNG explicitly so sweeps are reproducible.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::hilbert::VectorFamily;
use crate::krein::{oblique_projection, KreinSpace, SubspaceBasis};
use crate::linalg::{self, c64, orth, select_columns, CMat, CVec};

/// Standard complex Gaussian matrix (`E|z|^2 = 1`).
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let s = 0.5f64.sqrt();
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(s * re, s * im)
    })
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    gaussian_matrix(n, 1, rng).column(0).into_owned()
}

/// Haar-like random unitary (orthonormalized Gaussian matrix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    loop {
        let q = orth(&gaussian_matrix(n, n, rng), 1e-10);
        if q.ncols() == n {
            return q;
        }
    }
}

/// Random `rows x cols` matrix with spectral norm exactly `norm`.
pub fn random_contraction<R: Rng + ?Sized>(rows: usize, cols: usize, norm: f64, rng: &mut R) -> CMat {
    let g = gaussian_matrix(rows, cols, rng);
    let s = linalg::spectral_norm(&g);
    if s == 0.0 {
        return g;
    }
    g * c64(norm / s, 0.0)
}

/// Graph `{x + Kx : x in H+}` of `k : H+ -> H-`, given in the coordinates of
/// the space's bases (`k` is `dim H- x dim H+`). Maximal uniformly positive
/// whenever `||k|| < 1`.
pub fn positive_graph(space: &KreinSpace, k: &CMat) -> SubspaceBasis {
    let cols = space.plus_basis() + space.minus_basis() * k;
    SubspaceBasis::span(&cols, space.tolerances().rank)
}

/// Graph `{y + Ky : y in H-}` of `k : H- -> H+` (`dim H+ x dim H-`).
pub fn negative_graph(space: &KreinSpace, k: &CMat) -> SubspaceBasis {
    let cols = space.minus_basis() + space.plus_basis() * k;
    SubspaceBasis::span(&cols, space.tolerances().rank)
}

/// A random maximal uniformly J-positive subspace whose angular operator has
/// norm drawn uniformly from `[0, max_norm]`.
pub fn random_maximal_positive<R: Rng + ?Sized>(space: &KreinSpace, max_norm: f64, rng: &mut R) -> SubspaceBasis {
    let norm = max_norm * rng.random::<f64>();
    positive_graph(space, &random_contraction(space.dim_minus(), space.dim_plus(), norm, rng))
}

pub fn random_maximal_negative<R: Rng + ?Sized>(space: &KreinSpace, max_norm: f64, rng: &mut R) -> SubspaceBasis {
    let norm = max_norm * rng.random::<f64>();
    negative_graph(space, &random_contraction(space.dim_plus(), space.dim_minus(), norm, rng))
}

/// `count >= dim M` random vectors spanning `M`.
pub fn random_frame_in<R: Rng + ?Sized>(m: &SubspaceBasis, count: usize, rng: &mut R) -> CMat {
    assert!(count >= m.dim());
    loop {
        let t = m.basis() * gaussian_matrix(m.dim(), count, rng);
        if linalg::rank(&t, 1e-8) == m.dim() {
            return t;
        }
    }
}

/// A glued J-frame: random frames on a random maximal uniformly definite
/// pair, each side with between `dim` and `redundancy * dim` vectors, columns
/// shuffled.
pub fn random_j_frame<R: Rng + ?Sized>(
    space: &KreinSpace,
    max_norm: f64,
    redundancy: usize,
    rng: &mut R,
) -> VectorFamily {
    let mp = random_maximal_positive(space, max_norm, rng);
    let mm = random_maximal_negative(space, max_norm, rng);
    let redundancy = redundancy.max(1);
    let np = rng.random_range(space.dim_plus()..=redundancy * space.dim_plus());
    let nm = rng.random_range(space.dim_minus()..=redundancy * space.dim_minus());
    let t = linalg::hstack(&random_frame_in(&mp, np, rng), &random_frame_in(&mm, nm, rng));
    let mut order: Vec<usize> = (0..t.ncols()).collect();
    order.shuffle(rng);
    VectorFamily::new(select_columns(&t, &order)).expect("glued family is non-empty")
}

/// Random projection with maximal uniformly positive range and maximal
/// uniformly negative kernel.
pub fn random_q<R: Rng + ?Sized>(space: &KreinSpace, max_norm: f64, rng: &mut R) -> CMat {
    let mp = random_maximal_positive(space, max_norm, rng);
    let mm = random_maximal_negative(space, max_norm, rng);
    oblique_projection(space, &mp, &mm).expect("maximal definite pair is complementary")
}

/// Random signature `(p, q)` with `1 <= p, q` and `p + q <= max_dim`.
pub fn random_signature<R: Rng + ?Sized>(max_dim: usize, rng: &mut R) -> (usize, usize) {
    let n = rng.random_range(2..=max_dim.max(2));
    let p = rng.random_range(1..n);
    (p, n - p)
}

/// `diag(1,..,1,-1,..,-1)` conjugated by a random unitary, so `H±` are not
/// coordinate subspaces.
pub fn random_space<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> KreinSpace {
    let u = random_unitary(p + q, rng);
    let j = &u * linalg::signature_matrix(p, q) * u.adjoint();
    let j = linalg::hermitian_part(&j);
    KreinSpace::new(j).expect("unitarily conjugated signature is a fundamental symmetry")
}

/// Ways a family can fail to be a J-frame while still spanning the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    /// `M+` is J-nonnegative with a neutral direction (needs `dim H+ >= 2`).
    DegeneratePlus,
    /// `M+` uniformly positive of dimension `dim H+ - 1`; the negative
    /// columns span an indefinite subspace (needs `dim H+ >= 2`).
    NonMaximalPlus,
    /// A J-frame with one neutral column appended.
    NeutralColumn,
}

impl Defect {
    pub const ALL: [Defect; 3] = [Defect::DegeneratePlus, Defect::NonMaximalPlus, Defect::NeutralColumn];
}

/// A frame for the space that is not a J-frame, with the requested defect.
pub fn defective_family<R: Rng + ?Sized>(space: &KreinSpace, defect: Defect, rng: &mut R) -> VectorFamily {
    let (p, q) = (space.dim_plus(), space.dim_minus());
    assert!(q >= 1 && (p >= 2 || defect == Defect::NeutralColumn), "signature too small for {defect:?}");
    let u = space.plus_basis();
    let v = space.minus_basis();
    let t = match defect {
        Defect::DegeneratePlus => {
            // span{u1 + v1, u2, ..., up}
            let mut gens = u.clone();
            let tilted = u.column(0) + v.column(0);
            gens.set_column(0, &tilted);
            let plus = random_positive_columns(space, &gens, p + rng.random_range(0..=p), rng);
            let mm = random_maximal_negative(space, 0.5, rng);
            linalg::hstack(&plus, &random_frame_in(&mm, q + rng.random_range(0..=q), rng))
        }
        Defect::NonMaximalPlus => {
            let k = random_contraction(q, p - 1, 0.8 * rng.random::<f64>(), rng);
            let head = u.columns(0, p - 1).into_owned();
            let graph = &head + v * k;
            let plus = random_frame_in(&SubspaceBasis::span(&graph, 1e-10), p - 1 + rng.random_range(0..p), rng);
            // H- plus the negative vector u_p/2 + v_1: spans H- + span{u_p}
            let extra = u.column(p - 1) * c64(0.5, 0.0) + v.column(0);
            let minus = linalg::hstack(v, &CMat::from_columns(&[extra]));
            linalg::hstack(&plus, &minus)
        }
        Defect::NeutralColumn => {
            let base = random_j_frame(space, 0.9, 2, rng);
            let a = u * gaussian_vector(p, rng);
            let b = v * gaussian_vector(q, rng);
            let n = &a / c64(a.norm(), 0.0) + &b / c64(b.norm(), 0.0);
            linalg::hstack(base.synthesis(), &CMat::from_columns(&[n]))
        }
    };
    let mut order: Vec<usize> = (0..t.ncols()).collect();
    order.shuffle(rng);
    VectorFamily::new(select_columns(&t, &order)).expect("non-empty family")
}

/// `count` random combinations of `gens` with `[f,f]` comfortably positive.
fn random_positive_columns<R: Rng + ?Sized>(space: &KreinSpace, gens: &CMat, count: usize, rng: &mut R) -> CMat {
    let mut cols = Vec::with_capacity(count);
    while cols.len() < count {
        let f = gens * gaussian_vector(gens.ncols(), rng);
        let val = f.dotc(&(space.j() * &f)).re;
        if val > 1e-3 * f.norm_squared() {
            cols.push(f);
        }
    }
    let t = CMat::from_columns(&cols);
    if linalg::rank(&t, 1e-8) < linalg::rank(gens, 1e-8) {
        return random_positive_columns(space, gens, count, rng);
    }
    t
}

/// Random Hermitian positive definite `k x k` matrix with eigenvalues in
/// roughly `[0.1, 0.1 + 2k]`.
pub fn random_positive_definite<R: Rng + ?Sized>(k: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(k, k, rng);
    linalg::hermitian_part(&(&g * g.adjoint())) + linalg::identity(k) * c64(0.1, 0.0)
}

/// J-positive `S1`, `S2` with maximal uniformly J-positive (resp. J-negative)
/// ranges: `S_j = B_j A_j B_j* J` with random positive definite `A_j`.
pub fn random_operator_pair<R: Rng + ?Sized>(space: &KreinSpace, max_norm: f64, rng: &mut R) -> (CMat, CMat) {
    let mp = random_maximal_positive(space, max_norm, rng);
    let mm = random_maximal_negative(space, max_norm, rng);
    let side = |m: &SubspaceBasis, rng: &mut R| {
        let a = random_positive_definite(m.dim(), rng);
        m.basis() * a * m.basis().adjoint() * space.j()
    };
    let s1 = side(&mp, rng);
    let s2 = side(&mm, rng);
    (s1, s2)
}
