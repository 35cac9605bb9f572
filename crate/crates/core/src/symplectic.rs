//! Gaussian gate algebra: symplectic matrices for the elementary gates and
//! exact decompositions of squeezer, beamsplitter and rotation into shear
//! and Fourier gates.
//!
//! Conventions, pinned once for the whole crate:
//!
//! - Quadrature ordering is (q₁…qₙ, p₁…pₙ).
//! - A [`GateSequence`] acts on states first-element-first, so the composed
//!   Heisenberg matrix is the product of member matrices in *reverse* list
//!   order (last gate leftmost).
//! - The elementary shear gate is e^{isq̂²}; the decomposition identities are
//!   stated for e^{isq̂²/2}, so emitted shear parameters are halved relative
//!   to the bare matrix entry.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

pub const SQRT_PI: f64 = 1.7724538509055159;

/// The gate vocabulary. Parameters are real; `Displacement(d)` is e^{idq̂},
/// `Shear(s)` is e^{isq̂²}, `Cubic(c)` is e^{icq̂³}, `CZ(b)` is e^{ibq̂₁q̂₂},
/// `Squeeze(s)` maps q̂ → sq̂, `Rotation(θ)` is e^{iθ(q̂²+p̂²)/2},
/// `BeamSplitter(R)` mixes q̂₁,q̂₂ with reflectivity R, and `CrossKerr(θ)`
/// is e^{iθn̂₁n̂₂}. `LogicalZ` and `LogicalT` are the fixed q̂-diagonal gates
/// that act as Z and T on grid-encoded qubits.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub enum GateKind {
    Displacement(f64),
    Shear(f64),
    Cubic(f64),
    CZ(f64),
    Fourier,
    FourierInverse,
    Squeeze(f64),
    Rotation(f64),
    BeamSplitter(f64),
    CrossKerr(f64),
    LogicalZ,
    LogicalT,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::CZ(_) | GateKind::BeamSplitter(_) | GateKind::CrossKerr(_) => 2,
            _ => 1,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        !matches!(
            self,
            GateKind::Cubic(_) | GateKind::CrossKerr(_) | GateKind::LogicalT
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Displacement(_) => "displacement",
            GateKind::Shear(_) => "shear",
            GateKind::Cubic(_) => "cubic",
            GateKind::CZ(_) => "cz",
            GateKind::Fourier => "fourier",
            GateKind::FourierInverse => "fourier_inverse",
            GateKind::Squeeze(_) => "squeeze",
            GateKind::Rotation(_) => "rotation",
            GateKind::BeamSplitter(_) => "beamsplitter",
            GateKind::CrossKerr(_) => "cross_kerr",
            GateKind::LogicalZ => "logical_z",
            GateKind::LogicalT => "logical_t",
        }
    }
}

/// A gate bound to concrete mode indices.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Gate {
    pub kind: GateKind,
    pub modes: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, modes: &[usize]) -> Self {
        assert_eq!(
            kind.arity(),
            modes.len(),
            "gate {:?} wants {} mode(s), got {:?}",
            kind,
            kind.arity(),
            modes
        );
        Self {
            kind,
            modes: modes.to_vec(),
        }
    }

    pub fn displacement(d: f64, mode: usize) -> Self {
        Self::new(GateKind::Displacement(d), &[mode])
    }
    pub fn shear(s: f64, mode: usize) -> Self {
        Self::new(GateKind::Shear(s), &[mode])
    }
    pub fn cubic(c: f64, mode: usize) -> Self {
        Self::new(GateKind::Cubic(c), &[mode])
    }
    pub fn cz(b: f64, m1: usize, m2: usize) -> Self {
        Self::new(GateKind::CZ(b), &[m1, m2])
    }
    pub fn fourier(mode: usize) -> Self {
        Self::new(GateKind::Fourier, &[mode])
    }
    pub fn fourier_inverse(mode: usize) -> Self {
        Self::new(GateKind::FourierInverse, &[mode])
    }
    pub fn logical_z(mode: usize) -> Self {
        Self::new(GateKind::LogicalZ, &[mode])
    }
    pub fn logical_t(mode: usize) -> Self {
        Self::new(GateKind::LogicalT, &[mode])
    }

    /// The q̂-diagonal phase polynomial [c₀, c₁, c₂, c₃] (exponent of e^{i·poly(q)}),
    /// for gates diagonal in position; None otherwise.
    pub fn q_polynomial(&self) -> Option<[f64; 4]> {
        match self.kind {
            GateKind::Displacement(d) => Some([0.0, d, 0.0, 0.0]),
            GateKind::Shear(s) => Some([0.0, 0.0, s, 0.0]),
            GateKind::Cubic(c) => Some([0.0, 0.0, 0.0, c]),
            GateKind::LogicalZ => Some([0.0, SQRT_PI, 0.0, 0.0]),
            // (π/4)·[2(q/√π)³ + (q/√π)² − 2q/√π]
            GateKind::LogicalT => Some([
                0.0,
                -2.0 * std::f64::consts::FRAC_PI_4 / SQRT_PI,
                std::f64::consts::FRAC_PI_4 / SQRT_PI.powi(2),
                2.0 * std::f64::consts::FRAC_PI_4 / SQRT_PI.powi(3),
            ]),
            _ => None,
        }
    }
}

/// Ordered list of gates; applied to states first-element-first.
#[derive(Clone, PartialEq, Debug, Default, Serialize)]
pub struct GateSequence {
    pub gates: Vec<Gate>,
}

impl GateSequence {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: GateSequence) {
        self.gates.extend(other.gates);
    }

    pub fn max_mode(&self) -> usize {
        self.gates
            .iter()
            .flat_map(|g| g.modes.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SymplecticError {
    #[error("gate {0} has no symplectic representation")]
    NonGaussian(&'static str),
    #[error("squeeze parameter must be positive, got {0}")]
    NonPositive(f64),
    #[error("beamsplitter reflectivity must lie in [0,1], got {0}")]
    OutOfRange(f64),
    #[error("rotation by {0} is singular (cos θ = 0)")]
    Singular(f64),
}

/// A 2n×2n real symplectic matrix in (q₁…qₙ, p₁…pₙ) ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    pub modes: usize,
    pub matrix: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn identity(modes: usize) -> Self {
        Self {
            modes,
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Largest entrywise deviation from another matrix.
    pub fn residual_against(&self, other: &SymplecticMatrix) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }

    /// Residual ‖SΩSᵀ − Ω‖∞ against the standard symplectic form
    /// Ω = [[0, I], [−I, 0]].
    pub fn symplectic_residual(&self) -> f64 {
        let n = self.modes;
        let mut omega = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            omega[(i, n + i)] = 1.0;
            omega[(n + i, i)] = -1.0;
        }
        let lhs = &self.matrix * &omega * self.matrix.transpose();
        (lhs - omega).amax()
    }
}

/// Embed a per-mode 2×2 block action [[a,b],[c,d]]: q' = aq + bp, p' = cq + dp.
fn embed_single(modes: usize, mode: usize, block: [[f64; 2]; 2]) -> DMatrix<f64> {
    let n = modes;
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m[(mode, mode)] = block[0][0];
    m[(mode, n + mode)] = block[0][1];
    m[(n + mode, mode)] = block[1][0];
    m[(n + mode, n + mode)] = block[1][1];
    m
}

/// Symplectic matrix of a Gaussian gate, embedded at its modes in a
/// `modes`-mode register. The single-mode table:
///
/// Squeeze(s) → [[s,0],[0,1/s]];  Rotation(θ) → [[cosθ,−sinθ],[sinθ,cosθ]];
/// Shear(s) = e^{isq̂²} → [[1,0],[2s,1]];  F → [[0,−1],[1,0]];
/// Displacement → identity (pure translation, see [`gaussian_action_of`]).
pub fn symplectic_of_embedded(
    g: &Gate,
    modes: usize,
) -> Result<SymplecticMatrix, SymplecticError> {
    let n = modes;
    let matrix = match g.kind {
        GateKind::Displacement(_) | GateKind::LogicalZ => DMatrix::identity(2 * n, 2 * n),
        GateKind::Shear(s) => embed_single(n, g.modes[0], [[1.0, 0.0], [2.0 * s, 1.0]]),
        GateKind::Fourier => embed_single(n, g.modes[0], [[0.0, -1.0], [1.0, 0.0]]),
        GateKind::FourierInverse => embed_single(n, g.modes[0], [[0.0, 1.0], [-1.0, 0.0]]),
        GateKind::Squeeze(s) => {
            if s <= 0.0 {
                return Err(SymplecticError::NonPositive(s));
            }
            embed_single(n, g.modes[0], [[s, 0.0], [0.0, 1.0 / s]])
        }
        GateKind::Rotation(theta) => embed_single(
            n,
            g.modes[0],
            [[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]],
        ),
        GateKind::CZ(b) => {
            // p₁ → p₁ + b·q₂, p₂ → p₂ + b·q₁
            let (m1, m2) = (g.modes[0], g.modes[1]);
            let mut m = DMatrix::identity(2 * n, 2 * n);
            m[(n + m1, m2)] = b;
            m[(n + m2, m1)] = b;
            m
        }
        GateKind::BeamSplitter(r) => {
            if !(0.0..=1.0).contains(&r) {
                return Err(SymplecticError::OutOfRange(r));
            }
            // M_R ⊕ M_R with M_R = [[√R, √(1−R)], [√(1−R), −√R]]
            let (m1, m2) = (g.modes[0], g.modes[1]);
            let (c, s) = (r.sqrt(), (1.0 - r).sqrt());
            let mut m = DMatrix::identity(2 * n, 2 * n);
            for off in [0, n] {
                m[(off + m1, off + m1)] = c;
                m[(off + m1, off + m2)] = s;
                m[(off + m2, off + m1)] = s;
                m[(off + m2, off + m2)] = -c;
            }
            m
        }
        GateKind::Cubic(_) => return Err(SymplecticError::NonGaussian("cubic")),
        GateKind::CrossKerr(_) => return Err(SymplecticError::NonGaussian("cross_kerr")),
        GateKind::LogicalT => return Err(SymplecticError::NonGaussian("logical_t")),
    };
    Ok(SymplecticMatrix { modes: n, matrix })
}

/// Symplectic matrix of a Gaussian gate in the smallest register that
/// contains its modes.
pub fn symplectic_of(g: &Gate) -> Result<SymplecticMatrix, SymplecticError> {
    let modes = g.modes.iter().copied().max().unwrap_or(0) + 1;
    symplectic_of_embedded(g, modes)
}

/// Affine Heisenberg action x → Sx + c of a Gaussian gate sequence.
/// Means transform as x̄ → Sx̄ + c and covariances as Σ → SΣSᵀ.
#[derive(Clone, Debug)]
pub struct GaussianAction {
    pub matrix: SymplecticMatrix,
    pub shift: DVector<f64>,
}

impl GaussianAction {
    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: SymplecticMatrix::identity(modes),
            shift: DVector::zeros(2 * modes),
        }
    }
}

fn shift_of(g: &Gate, modes: usize) -> DVector<f64> {
    let mut c = DVector::zeros(2 * modes);
    match g.kind {
        // e^{idq̂} shifts p̂ by +d
        GateKind::Displacement(d) => c[modes + g.modes[0]] = d,
        GateKind::LogicalZ => c[modes + g.modes[0]] = SQRT_PI,
        _ => {}
    }
    c
}

/// Composed symplectic matrix of a Gaussian gate sequence over `modes` modes.
/// The product runs in reverse list order so that it matches first-element-
/// first application to states; the empty sequence composes to the identity.
pub fn compose_embedded(
    seq: &GateSequence,
    modes: usize,
) -> Result<SymplecticMatrix, SymplecticError> {
    let mut acc = DMatrix::identity(2 * modes, 2 * modes);
    for g in &seq.gates {
        let s = symplectic_of_embedded(g, modes)?;
        acc = s.matrix * acc;
    }
    Ok(SymplecticMatrix {
        modes,
        matrix: acc,
    })
}

/// Composed symplectic matrix over the smallest register holding every mode.
pub fn compose(seq: &GateSequence) -> Result<SymplecticMatrix, SymplecticError> {
    let modes = if seq.is_empty() {
        1
    } else {
        seq.max_mode() + 1
    };
    compose_embedded(seq, modes)
}

/// Composed affine action (matrix and displacement shift) of a sequence.
pub fn compose_affine(
    seq: &GateSequence,
    modes: usize,
) -> Result<GaussianAction, SymplecticError> {
    let mut acc = GaussianAction::identity(modes);
    for g in &seq.gates {
        let s = symplectic_of_embedded(g, modes)?;
        let c = shift_of(g, modes);
        acc.shift = &s.matrix * &acc.shift + c;
        acc.matrix.matrix = &s.matrix * &acc.matrix.matrix;
    }
    Ok(acc)
}

/// Exact squeezer decomposition: e^{−i(ln s/2)(q̂p̂+p̂q̂)} equals
/// F·e^{isq̂²/2}·F·e^{iq̂²/2s}·F·e^{isq̂²/2}, emitted here as shear gates in
/// the e^{isq̂²} convention (parameters s/2 and 1/2s) applied first-to-last.
pub fn decompose_squeeze(s: f64) -> Result<GateSequence, SymplecticError> {
    decompose_squeeze_on(s, 0)
}

pub fn decompose_squeeze_on(s: f64, mode: usize) -> Result<GateSequence, SymplecticError> {
    if s <= 0.0 || !s.is_finite() {
        return Err(SymplecticError::NonPositive(s));
    }
    Ok(GateSequence::new(vec![
        Gate::shear(0.5 * s, mode),
        Gate::fourier(mode),
        Gate::shear(0.5 / s, mode),
        Gate::fourier(mode),
        Gate::shear(0.5 * s, mode),
        Gate::fourier(mode),
    ]))
}

/// Shear parameters (b₁, b₂, b₃) of the two-mode block
/// O(q̂) = e^{i(b₁q̂₁² + b₂q̂₂² + b₃q̂₁q̂₂)} used by the beamsplitter
/// decomposition: b₁ = √R/2, b₂ = −√R/2, b₃ = √(1−R).
pub fn beamsplitter_block_params(r: f64) -> Result<(f64, f64, f64), SymplecticError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(SymplecticError::OutOfRange(r));
    }
    Ok((0.5 * r.sqrt(), -0.5 * r.sqrt(), (1.0 - r).sqrt()))
}

/// Exact beamsplitter decomposition: three repetitions of
/// [O(q̂) as shears and CZ, then Fourier on both modes]; composes to
/// M_R ⊕ M_R.
pub fn decompose_beamsplitter(r: f64) -> Result<GateSequence, SymplecticError> {
    decompose_beamsplitter_on(r, 0, 1)
}

pub fn decompose_beamsplitter_on(
    r: f64,
    m1: usize,
    m2: usize,
) -> Result<GateSequence, SymplecticError> {
    let (b1, b2, b3) = beamsplitter_block_params(r)?;
    let mut gates = Vec::with_capacity(15);
    for _ in 0..3 {
        gates.push(Gate::shear(b1, m1));
        gates.push(Gate::shear(b2, m2));
        gates.push(Gate::cz(b3, m1, m2));
        gates.push(Gate::fourier(m1));
        gates.push(Gate::fourier(m2));
    }
    Ok(GateSequence::new(gates))
}

/// Shear parameters of the exact rotation decomposition,
/// s₁ = secθ + tanθ, s₂ = cosθ, s₃ = cosθ + (1 + sinθ)tanθ.
pub fn rotation_shear_params(theta: f64) -> Result<(f64, f64, f64), SymplecticError> {
    if theta.cos().abs() < 1e-9 {
        return Err(SymplecticError::Singular(theta));
    }
    let (sin, cos) = theta.sin_cos();
    let tan = sin / cos;
    Ok((1.0 / cos + tan, cos, cos + (1.0 + sin) * tan))
}

/// Exact rotation decomposition: e^{iθ(q̂²+p̂²)/2} equals
/// F·e^{is₃q̂²/2}·F·e^{is₂q̂²/2}·F·e^{is₁q̂²/2}; singular at θ ≡ π/2 mod π.
pub fn decompose_rotation(theta: f64) -> Result<GateSequence, SymplecticError> {
    decompose_rotation_on(theta, 0)
}

pub fn decompose_rotation_on(theta: f64, mode: usize) -> Result<GateSequence, SymplecticError> {
    let (s1, s2, s3) = rotation_shear_params(theta)?;
    Ok(GateSequence::new(vec![
        Gate::shear(0.5 * s1, mode),
        Gate::fourier(mode),
        Gate::shear(0.5 * s2, mode),
        Gate::fourier(mode),
        Gate::shear(0.5 * s3, mode),
        Gate::fourier(mode),
    ]))
}

/// The main-text variant of the beamsplitter block prints the q̂₁q̂₂
/// coefficient as 1/(2√2) for R = 1/2 instead of √(1−R) = 1/√2. This builds
/// that variant so the matrix oracle can report which one reproduces
/// M_R ⊕ M_R; the decomposition above uses the value that passes.
pub fn decompose_beamsplitter_main_text_variant() -> GateSequence {
    let b = 0.5 / 2.0f64.sqrt();
    let mut gates = Vec::with_capacity(15);
    for _ in 0..3 {
        gates.push(Gate::shear(b, 0));
        gates.push(Gate::shear(-b, 1));
        gates.push(Gate::cz(b, 0, 1));
        gates.push(Gate::fourier(0));
        gates.push(Gate::fourier(1));
    }
    GateSequence::new(gates)
}

/// Target matrix diag(s, 1/s) of the squeezer decomposition.
pub fn squeeze_target(s: f64) -> SymplecticMatrix {
    let mut m = DMatrix::identity(2, 2);
    m[(0, 0)] = s;
    m[(1, 1)] = 1.0 / s;
    SymplecticMatrix { modes: 1, matrix: m }
}

/// Target rotation matrix of the rotation decomposition.
pub fn rotation_target(theta: f64) -> SymplecticMatrix {
    let (sin, cos) = theta.sin_cos();
    let m = DMatrix::from_row_slice(2, 2, &[cos, -sin, sin, cos]);
    SymplecticMatrix { modes: 1, matrix: m }
}

/// Target matrix M_R ⊕ M_R of the beamsplitter decomposition.
pub fn beamsplitter_target(r: f64) -> SymplecticMatrix {
    let (c, s) = (r.sqrt(), (1.0 - r).sqrt());
    let mut m = DMatrix::zeros(4, 4);
    for off in [0, 2] {
        m[(off, off)] = c;
        m[(off, off + 1)] = s;
        m[(off + 1, off)] = s;
        m[(off + 1, off + 1)] = -c;
    }
    SymplecticMatrix { modes: 2, matrix: m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn fourier_matrix_matches_table() {
        let s = symplectic_of(&Gate::fourier(0)).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(s.matrix, want);
    }

    #[test]
    fn shear_matrix_matches_table() {
        // e^{isq̂²/2} → [[1,0],[s,1]], so Shear(s) = e^{isq̂²} → [[1,0],[2s,1]]
        let s = symplectic_of(&Gate::shear(0.7, 0)).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.4, 1.0]);
        assert!(max_diff(&s.matrix, &want) < 1e-15);
    }

    #[test]
    fn cubic_gate_is_not_gaussian() {
        let err = symplectic_of(&Gate::cubic(0.3, 0)).unwrap_err();
        assert_eq!(err, SymplecticError::NonGaussian("cubic"));
    }

    #[test]
    fn fourier_fourth_power_is_identity() {
        let seq = GateSequence::new(vec![Gate::fourier(0); 4]);
        let s = compose(&seq).unwrap();
        assert!(max_diff(&s.matrix, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn empty_sequence_composes_to_identity() {
        let s = compose(&GateSequence::default()).unwrap();
        assert_eq!(s.matrix, DMatrix::identity(2, 2));
    }

    #[test]
    fn squeeze_decomposition_identity_case() {
        let seq = decompose_squeeze(1.0).unwrap();
        let s = compose(&seq).unwrap();
        assert!(max_diff(&s.matrix, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn squeeze_decomposition_matches_matrix_oracle() {
        // direct matrix-multiplication oracle at s = 2 and the cat-squeeze
        // value s = 0.5642 (vacuum width 1/√2 → 0.3989)
        for (s, want_qq, want_pp) in [(2.0, 2.0, 0.5), (0.5642, 0.5642, 1.0 / 0.5642)] {
            let seq = decompose_squeeze(s).unwrap();
            let m = compose(&seq).unwrap().matrix;
            let want = DMatrix::from_row_slice(2, 2, &[want_qq, 0.0, 0.0, want_pp]);
            assert!(max_diff(&m, &want) < 1e-12, "s = {}", s);
        }
        let m = compose(&decompose_squeeze(0.5642).unwrap()).unwrap().matrix;
        assert!((m[(1, 1)] - 1.7724).abs() < 1e-4);
    }

    #[test]
    fn squeeze_rejects_nonpositive() {
        assert!(matches!(
            decompose_squeeze(0.0),
            Err(SymplecticError::NonPositive(_))
        ));
        assert!(matches!(
            decompose_squeeze(-1.0),
            Err(SymplecticError::NonPositive(_))
        ));
    }

    #[test]
    fn beamsplitter_edge_cases() {
        // R = 1: b₃ = 0, decoupled modes, diag(1,−1) ⊕ diag(1,−1)
        let m1 = compose(&decompose_beamsplitter(1.0).unwrap()).unwrap().matrix;
        assert!(max_diff(&m1, &beamsplitter_target(1.0).matrix) < 1e-12);
        // R = 0: swap-form
        let m0 = compose(&decompose_beamsplitter(0.0).unwrap()).unwrap().matrix;
        assert!(max_diff(&m0, &beamsplitter_target(0.0).matrix) < 1e-12);
    }

    #[test]
    fn balanced_beamsplitter_params_and_matrix() {
        let (b1, b2, b3) = beamsplitter_block_params(0.5).unwrap();
        assert!((b1 - 0.35355).abs() < 1e-5);
        assert!((b2 + 0.35355).abs() < 1e-5);
        assert!((b3 - 0.70711).abs() < 1e-5);
        let m = compose(&decompose_beamsplitter(0.5).unwrap()).unwrap().matrix;
        assert!(max_diff(&m, &beamsplitter_target(0.5).matrix) < 1e-12);
    }

    #[test]
    fn beamsplitter_rejects_out_of_range() {
        assert!(matches!(
            decompose_beamsplitter(1.5),
            Err(SymplecticError::OutOfRange(_))
        ));
    }

    #[test]
    fn main_text_beamsplitter_variant_fails_oracle() {
        // the 1/(2√2) coefficient from the main text does not reproduce
        // M_R ⊕ M_R; the appendix identification does
        let m = compose(&decompose_beamsplitter_main_text_variant())
            .unwrap()
            .matrix;
        assert!(max_diff(&m, &beamsplitter_target(0.5).matrix) > 1e-3);
    }

    #[test]
    fn rotation_decomposition_identity_case() {
        let (s1, s2, s3) = rotation_shear_params(0.0).unwrap();
        assert_eq!((s1, s2, s3), (1.0, 1.0, 1.0));
        let m = compose(&decompose_rotation(0.0).unwrap()).unwrap().matrix;
        assert!(max_diff(&m, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn rotation_decomposition_quarter_turn() {
        let (s1, s2, s3) = rotation_shear_params(FRAC_PI_4).unwrap();
        assert!((s1 - 2.41421).abs() < 1e-5);
        assert!((s2 - 0.70711).abs() < 1e-5);
        assert!((s3 - 2.41421).abs() < 1e-5);
        let m = compose(&decompose_rotation(FRAC_PI_4).unwrap()).unwrap().matrix;
        let c = FRAC_PI_4.cos();
        let want = DMatrix::from_row_slice(2, 2, &[c, -c, c, c]);
        assert!(max_diff(&m, &want) < 1e-12);
    }

    #[test]
    fn rotation_rejects_singular_angle() {
        assert!(matches!(
            decompose_rotation(FRAC_PI_2),
            Err(SymplecticError::Singular(_))
        ));
    }

    #[test]
    fn squeeze_decomposition_sweep() {
        let mut s = 0.1;
        while s <= 10.0 {
            let m = compose(&decompose_squeeze(s).unwrap()).unwrap().matrix;
            let want = DMatrix::from_row_slice(2, 2, &[s, 0.0, 0.0, 1.0 / s]);
            assert!(max_diff(&m, &want) < 1e-12, "s = {}", s);
            s += 0.1;
        }
    }

    #[test]
    fn beamsplitter_decomposition_sweep() {
        for i in 0..=100 {
            let r = i as f64 / 100.0;
            let m = compose(&decompose_beamsplitter(r).unwrap()).unwrap().matrix;
            let target = beamsplitter_target(r);
            assert!(max_diff(&m, &target.matrix) < 1e-12, "R = {}", r);
            // M_R is involutory
            let sq = &target.matrix * &target.matrix;
            assert!(max_diff(&sq, &DMatrix::identity(4, 4)) < 1e-12);
        }
    }

    #[test]
    fn rotation_decomposition_sweep() {
        for i in -20..=20 {
            let theta = i as f64 * 0.15;
            if theta.cos().abs() < 0.05 {
                continue;
            }
            let m = compose(&decompose_rotation(theta).unwrap()).unwrap().matrix;
            let (sin, cos) = theta.sin_cos();
            let want = DMatrix::from_row_slice(2, 2, &[cos, -sin, sin, cos]);
            assert!(max_diff(&m, &want) < 1e-12, "theta = {}", theta);
        }
    }

    fn arb_gaussian_gate() -> impl Strategy<Value = Gate> {
        prop_oneof![
            (-3.0f64..3.0).prop_map(|d| Gate::displacement(d, 0)),
            (-2.0f64..2.0).prop_map(|s| Gate::shear(s, 0)),
            (0.1f64..5.0).prop_map(|s| Gate::new(GateKind::Squeeze(s), &[0])),
            (-PI..PI).prop_map(|t| Gate::new(GateKind::Rotation(t), &[0])),
            Just(Gate::fourier(0)),
            Just(Gate::fourier_inverse(0)),
            (-2.0f64..2.0).prop_map(|b| Gate::cz(b, 0, 1)),
            (0.0f64..1.0).prop_map(|r| Gate::new(GateKind::BeamSplitter(r), &[0, 1])),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn composed_sequences_stay_symplectic(gates in proptest::collection::vec(arb_gaussian_gate(), 0..12)) {
            let seq = GateSequence::new(gates);
            let s = compose_embedded(&seq, 2).unwrap();
            prop_assert!(s.symplectic_residual() < 1e-12);
        }
    }
}
