/// Numerical thresholds used by every decision in the crate.
///
/// All values are relative unless noted. A [`Tolerances`] value travels with
/// each [`KreinSpace`](crate::KreinSpace), so overriding one here changes the
/// behaviour of every routine operating in that space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Singular values below `rank * max(1, sigma_max)` count as zero.
    pub rank: f64,
    /// A column is neutral when `|[f,f]| <= neutral * ||f||^2`.
    pub neutral: f64,
    /// Eigenvalues of `B* J B` (orthonormal `B`) with modulus below this are zero.
    pub definite: f64,
    /// Floor for numerical semidefiniteness, relative to the matrix norm.
    pub psd: f64,
    /// Residual threshold for identities such as `Q^2 = Q` or `T1 T2* = 0`.
    pub residual: f64,
    /// Minimal angle (radians) that counts as strictly positive.
    pub angle: f64,
    /// Projector distance under which two subspaces are considered equal.
    pub subspace: f64,
    /// Check threshold for `J = J*` and `J^2 = I`.
    pub structure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-10,
            neutral: 1e-10,
            definite: 1e-10,
            psd: 1e-9,
            residual: 1e-9,
            angle: 1e-8,
            subspace: 1e-8,
            structure: 1e-10,
        }
    }
}

impl Tolerances {
    /// Sets the zero thresholds (`rank`, `neutral`, `definite`) to `tol`.
    pub fn with_base(mut self, tol: f64) -> Self {
        self.rank = tol;
        self.neutral = tol;
        self.definite = tol;
        self
    }

    /// Overrides a single named threshold. Returns `false` for an unknown name.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "rank" => &mut self.rank,
            "neutral" => &mut self.neutral,
            "definite" => &mut self.definite,
            "psd" => &mut self.psd,
            "residual" => &mut self.residual,
            "angle" => &mut self.angle,
            "subspace" => &mut self.subspace,
            "structure" => &mut self.structure,
            _ => return false,
        };
        *slot = value;
        true
    }
}
