//! K-theory invariants of boundary crossed products `C(∂G) ⋊ G` for
//! fundamental groups of closed orientable 3-manifolds.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! - [`intlin`]: Smith normal form with witnesses, ranks over `Q` and `F_p`.
//! - [`fgab`]: finitely generated abelian groups in invariant-factor form,
//!   pointed groups and coefficient functors.
//! - [`chain`]: chain complexes of dimension ≤ 3, (co)homology, and the
//!   closed orientable 3-manifold checks.
//! - [`ahss`]: the Atiyah–Hirzebruch spectral sequence in the dimension-3
//!   window, certified to degenerate at page 2, giving `K^*(M)` and `K_*(M)`.
//! - [`crossed`]: the pointed invariants `(K_0, [1], K_1)` of the crossed
//!   product, integrally or with field coefficients, and their comparison.

pub mod ahss;
pub mod chain;
pub mod crossed;
pub mod error;
pub mod fgab;
pub mod intlin;

pub use error::{Error, Result};
