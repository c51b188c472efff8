#![allow(dead_code)]

use krein_frames::linalg::{c64, real_matrix, CMat, CVec};
use krein_frames::{KreinSpace, VectorFamily};

/// `{e1, e2, e1+e2, e3}` in signature (2, 1).
pub fn glued_example() -> (KreinSpace, VectorFamily) {
    let t = real_matrix(3, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    (KreinSpace::signature(2, 1), VectorFamily::new(t).unwrap())
}

/// `{(1,0,1/√2), (0,1,1/√2), (0,0,1)}` in signature (2, 1): a frame whose
/// positive part spans a degenerate subspace.
pub fn degenerate_example() -> (KreinSpace, VectorFamily) {
    let s = 0.5f64.sqrt();
    let t = real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, s, s, 1.0]);
    (KreinSpace::signature(2, 1), VectorFamily::new(t).unwrap())
}

pub fn swap_operator() -> CMat {
    CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, 1.0), c64(0.0, 1.0), c64(0.0, 0.0)])
}

/// `[x, y] = <Jx, y>` computed entrywise.
pub fn form(space: &KreinSpace, x: &CVec, y: &CVec) -> num_complex::Complex64 {
    let jx = space.j() * x;
    (0..x.len()).map(|k| jx[k] * y[k].conj()).sum()
}

/// `sum sigma_i [x, f_i] f_i`, one term at a time.
pub fn sum_formula(space: &KreinSpace, f: &VectorFamily, sigma: &[i8], x: &CVec) -> CVec {
    let mut acc = CVec::zeros(x.len());
    for (i, &sign) in sigma.iter().enumerate().take(f.len()) {
        let fi = f.vector(i);
        acc += &fi * (form(space, x, &fi) * sign as f64);
    }
    acc
}
