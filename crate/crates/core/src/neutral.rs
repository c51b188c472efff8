//! Angles between subspaces and the neutral cone `C = {n : [n,n] = 0}`,
//! angular operators, and the partition test for J-frames.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::hilbert::{is_frame_with, VectorFamily};
use crate::krein::{classify_subspace, KreinSpace, SubspaceBasis, SubspaceKind};
use crate::linalg::{self, c64, pinv, rank, CMat, CVec};
use crate::sample::gaussian_vector;

/// Minimal angle between a subspace and the neutral cone, with the derived
/// quantities that share the same definiteness bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeAngleReport {
    /// `sup |<m, n>|` over unit `m` in the subspace and unit neutral `n`.
    pub c0: f64,
    /// `arccos(c0)`, in `[0, pi/4]`.
    pub theta: f64,
    pub alpha: f64,
    /// Norm of the angular operator of a subspace with this bound.
    pub k_norm: f64,
    pub aperture: f64,
    /// `pi/4 - theta`.
    pub phi: f64,
    /// The subspace is J-indefinite and therefore meets the cone.
    pub indefinite: bool,
}

impl ConeAngleReport {
    /// Closed forms in terms of a definiteness bound `alpha` in `[0, 1]`.
    pub fn from_bound(alpha: f64) -> Self {
        let a = alpha.clamp(0.0, 1.0);
        let c0 = FRAC_1_SQRT_2 * (((1.0 + a) / 2.0).sqrt() + ((1.0 - a) / 2.0).sqrt());
        // cos(2 theta) = sqrt(1 - a^2) and sin(2 theta) = a; asin is well
        // conditioned near a = 0 where acos(c0) is not.
        let theta = 0.5 * a.asin();
        let k_norm = ((1.0 - a) / (1.0 + a)).sqrt();
        Self {
            c0: c0.min(1.0),
            theta,
            alpha: a,
            k_norm,
            aperture: ((1.0 - a) / 2.0).sqrt(),
            phi: FRAC_PI_4 - theta,
            indefinite: false,
        }
    }

    /// `theta > tol`.
    pub fn is_uniformly_definite(&self, angle_tol: f64) -> bool {
        self.theta > angle_tol
    }
}

/// Closed-form cone angle report of `M`. Indefinite subspaces contain neutral
/// vectors, so they get `c0 = 1` and `theta = 0`.
pub fn cone_correlation(space: &KreinSpace, m: &SubspaceBasis) -> Result<ConeAngleReport> {
    let class = classify_subspace(space, m)?;
    match class.definiteness_bound {
        Some(alpha) => Ok(ConeAngleReport::from_bound(alpha)),
        None => Ok(ConeAngleReport { indefinite: true, ..ConeAngleReport::from_bound(0.0) }),
    }
}

/// Sampling estimate of `c0(M, C)`.
///
/// For each random unit `m` in `M` the inner supremum over the cone is taken
/// at `n = (m+/||m+|| + m-/||m-||)/sqrt(2)`, or at `(m + z)/sqrt(2)` with a
/// unit `z` in the opposite fundamental subspace when one component vanishes.
/// The estimate is the running maximum, so it is nondecreasing in `samples`
/// for a fixed seed.
pub fn cone_correlation_oracle(space: &KreinSpace, m: &SubspaceBasis, samples: usize, seed: u64) -> Result<f64> {
    if m.ambient_dim() != space.dim() {
        return Err(Error::Dimension(format!(
            "subspace lives in C^{}, space has dimension {}",
            m.ambient_dim(),
            space.dim()
        )));
    }
    if m.dim() == 0 {
        return Ok(0.0);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..samples.max(1) {
        let c = gaussian_vector(m.dim(), &mut rng);
        let v = m.basis() * c;
        let v = &v / c64(v.norm(), 0.0);
        if let Some(n) = optimal_neutral(space, &v) {
            best = best.max(n.dotc(&v).norm());
        }
    }
    Ok(best)
}

fn optimal_neutral(space: &KreinSpace, m: &CVec) -> Option<CVec> {
    let (mp, mm) = space.fundamental_components(m);
    let (np, nm) = (mp.norm(), mm.norm());
    if np > 0.0 && nm > 0.0 {
        return Some((&mp / c64(np, 0.0) + &mm / c64(nm, 0.0)) * c64(FRAC_1_SQRT_2, 0.0));
    }
    // one component is zero: pair m with any unit vector on the other side
    let other = if nm == 0.0 { space.minus_basis() } else { space.plus_basis() };
    if other.ncols() == 0 {
        return None;
    }
    let z = other.column(0).into_owned();
    Some((m + z) * c64(FRAC_1_SQRT_2, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

/// `M = {x + Kx : x in dom K}` over `H+` (side `Plus`, `K : H+ -> H-`) or
/// over `H-` (side `Minus`).
#[derive(Debug, Clone)]
pub struct AngularOperator {
    pub side: Side,
    /// `K` as an `n x n` matrix vanishing on the complement of its domain.
    pub operator: CMat,
    /// `K` in the bases of `H+` and `H-` of the space (`target dim x source dim`).
    pub coordinates: CMat,
    pub domain: SubspaceBasis,
    pub norm: f64,
    /// `dom K` is all of `H+` (resp. `H-`).
    pub full_domain: bool,
}

/// Angular operator of `M` over the side matching its sign. Indefinite
/// subspaces are tried over `H+` first.
pub fn angular_operator(space: &KreinSpace, m: &SubspaceBasis) -> Result<AngularOperator> {
    let class = classify_subspace(space, m)?;
    match class.kind {
        SubspaceKind::Negative | SubspaceKind::Nonpositive => angular_operator_over(space, m, Side::Minus),
        SubspaceKind::Indefinite => {
            angular_operator_over(space, m, Side::Plus).or_else(|_| angular_operator_over(space, m, Side::Minus))
        }
        _ => angular_operator_over(space, m, Side::Plus),
    }
}

/// Angular operator of `M` over `H+` or `H-`. Fails when the fundamental
/// projection onto that side is not injective on `M`.
pub fn angular_operator_over(space: &KreinSpace, m: &SubspaceBasis, side: Side) -> Result<AngularOperator> {
    if m.ambient_dim() != space.dim() {
        return Err(Error::Dimension("subspace and space dimensions differ".into()));
    }
    let (src, dst) = match side {
        Side::Plus => (space.plus_basis(), space.minus_basis()),
        Side::Minus => (space.minus_basis(), space.plus_basis()),
    };
    let tol = space.tolerances().rank;
    let a = src.adjoint() * m.basis();
    let b = dst.adjoint() * m.basis();
    let ra = rank(&a, tol);
    if ra < m.dim() {
        return Err(Error::Geometry(format!(
            "projection onto H{} is not injective on the subspace (rank {ra} < {}); no angular operator",
            if side == Side::Plus { "+" } else { "-" },
            m.dim()
        )));
    }
    let coords = &b * pinv(&a, tol);
    let operator = dst * &coords * src.adjoint();
    let domain = SubspaceBasis::span(&(src * &a), tol);
    Ok(AngularOperator {
        side,
        norm: linalg::spectral_norm(&coords),
        full_domain: ra == src.ncols(),
        operator,
        coordinates: coords,
        domain,
    })
}

/// Both classes `I1`, `I2` span subspaces at a positive angle from the cone.
pub fn j_frame_by_partition(space: &KreinSpace, f: &VectorFamily, first: &[usize], second: &[usize]) -> Result<bool> {
    if f.ambient_dim() != space.dim() {
        return Err(Error::Dimension("family and space dimensions differ".into()));
    }
    let tol = space.tolerances();
    if !is_frame_with(f, tol.rank) {
        return Err(Error::NotAFrame("family does not span the space".into()));
    }
    let mut seen = vec![0u8; f.len()];
    for &i in first.iter().chain(second) {
        if i >= f.len() {
            return Err(Error::Precondition(format!("index {i} out of range for {} vectors", f.len())));
        }
        seen[i] += 1;
    }
    if seen.iter().any(|&s| s != 1) {
        return Err(Error::Precondition("partition classes must be disjoint and cover every index".into()));
    }
    for class in [first, second] {
        let m = space.span(&f.columns(class))?;
        if !cone_correlation(space, &m)?.is_uniformly_definite(tol.angle) {
            return Ok(false);
        }
    }
    Ok(true)
}
