//! Refined weak coupling dynamics of the spin-boson model.
//!
//! Units: ħ = k_B = 1 and the qubit splitting ω₀ = 1. The qubit basis is
//! ordered (|e⟩, |g⟩), so σ_z = diag(1, −1) and σ₊ = |e⟩⟨g|. Matrices are
//! vectorized by stacking columns: vec(AXB) = (Bᵀ ⊗ A) vec(X).

pub mod bath;
pub mod cli;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod nonmarkov;
pub mod quadrature;
pub mod validation;

pub use error::{Error, Result};
