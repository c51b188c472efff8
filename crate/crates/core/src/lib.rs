//! J-frames for finite-dimensional Krein spaces.
//!
//! The crate works in `C^n` equipped with a fundamental symmetry `J` and the
//! indefinite product `[x, y] = <Jx, y>`. On top of the basic indefinite
//! geometry ([`krein`]) and classical frame machinery ([`hilbert`]) it
//! provides detection and analysis of J-frames ([`jframe`]), angles between
//! subspaces and the neutral cone ([`neutral`]) and the operator-level
//! characterizations of J-frame synthesis and J-frame operators
//! ([`characterization`]).

pub mod error;
pub mod characterization;
pub mod hilbert;
pub mod jframe;
pub mod krein;
pub mod linalg;
pub mod neutral;
pub mod sample;
pub mod tolerance;

pub use error::{Error, Result};
pub use hilbert::{FrameBounds, VectorFamily};
pub use jframe::{JFrameBounds, JFrameReport, SignPartition};
pub use krein::{KreinSpace, SubspaceBasis, SubspaceClassification, SubspaceKind};
pub use linalg::{CMat, CVec};
pub use neutral::{ConeAngleReport, Side};
pub use tolerance::Tolerances;
