//! Continuous-variable quantum computing workbench.
//!
//! The crate is organized around a small set of subsystems:
//!
//! - [`weyl`] — exact symbolic algebra of q̂/p̂ polynomials, used to verify
//!   operator identities with rational arithmetic.
//! - [`symplectic`] — Gaussian gates, their symplectic matrices, and the
//!   exact shear/Fourier decompositions of squeezer, beamsplitter and
//!   rotation.
//! - [`kerrplan`] — the cross-Kerr compiler: concatenation, second-order
//!   splitting and nested-commutator rescaling of e^{iπn̂₁n̂₂} under a
//!   precision budget, with gate-count accounting.
//! - [`comb`] — closed-form analytics of Gaussian-superposition states:
//!   cat states, the iterated beamsplitter-plus-homodyne GKP synthesis
//!   protocol, and envelope overlaps.
//! - [`gridsim`] — dense numerical oracles: position-grid wavefunctions
//!   (1–2 modes), binned homodyne detection, the shift-error correction
//!   gadget, and a truncated-Fock cross-Kerr verifier.
//! - [`ftcalc`] — fault-tolerance accounting: ε budgets, erf tail
//!   probabilities, threshold inequalities and minimal-iteration search.
//! - [`sampler`] — the two homodyne sampling circuit families with seeded
//!   circuit drawing and binned outcome distributions.

pub mod comb;
pub mod ftcalc;
pub mod gridsim;
pub mod kerrplan;
pub mod sampler;
pub mod symplectic;
pub mod weyl;
