//! Dense numerical oracles on position grids: one- and two-mode
//! wavefunctions under the elementary gates, binned homodyne detection, and
//! the shift-error correction gadget.
//!
//! Grids are mirror-symmetric and self-dual: n points at spacing
//! dq = √(2π/n), centers q_j = (j − (n−1)/2)·dq, so the Fourier gate maps
//! the grid onto itself and can be applied repeatedly.
//!
//! Fourier sign convention: the gate F = e^{iπ(q̂²+p̂²)/4} acts on quadratures
//! as q̂ → −p̂, p̂ → q̂, which forces the Schrödinger kernel
//! (Fψ)(q) = (2π)^{−1/2}∫e^{+iqq′}ψ(q′)dq′ — the +i kernel: its modulus
//! square in q then reproduces the momentum density mirrored, matching the
//! symplectic table. The −i kernel is the inverse gate and doubles as the
//! standard momentum representation.

// the 2D kernels index several arrays by the same row/column variables
#![allow(clippy::needless_range_loop)]

pub mod fock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::comb::GaussianComb;
use crate::symplectic::{Gate, GateKind, SymplecticError, SQRT_PI};

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid reaches {q_max:.2} but the state needs {needed:.2}")]
    GridTooSmall { needed: f64, q_max: f64 },
    #[error("gate needs {expected} mode(s), state has {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("Fock truncation {got} too small, need at least {required}")]
    TruncationTooSmall { required: usize, got: usize },
    #[error("state norm drifted to {0}")]
    NotNormalized(f64),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error("gate {0} is not supported on the grid")]
    Unsupported(&'static str),
}

/// Symmetric self-dual grid geometry shared by all modes of a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub dq: f64,
}

impl GridSpec {
    /// Self-dual grid: dq = √(2π/n), so the dual (momentum) grid coincides
    /// with the position grid.
    pub fn self_dual(n: usize) -> Self {
        Self {
            n,
            dq: (2.0 * std::f64::consts::PI / n as f64).sqrt(),
        }
    }

    fn center(&self) -> f64 {
        0.5 * (self.n as f64 - 1.0)
    }

    /// Coordinate of grid point j.
    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - self.center()) * self.dq
    }

    pub fn q_max(&self) -> f64 {
        self.center() * self.dq
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }
}

/// Dense wavefunction on one or two modes. Two-mode amplitudes are row-major
/// with mode 0 as the slow index: amps[i0·n + i1].
#[derive(Clone, Debug)]
pub struct GridState {
    pub spec: GridSpec,
    pub modes: usize,
    pub amps: Vec<Complex64>,
}

impl GridState {
    pub fn vacuum(spec: GridSpec) -> Self {
        let amps = spec
            .coords()
            .iter()
            .map(|&q| Complex64::new((-q * q / 2.0).exp(), 0.0))
            .collect();
        let mut s = Self {
            spec,
            modes: 1,
            amps,
        };
        s.renormalize();
        s
    }

    /// Gaussian with amplitude width σ, centered at q̄, with momentum mean p̄.
    pub fn gaussian(spec: GridSpec, sigma: f64, q_mean: f64, p_mean: f64) -> Self {
        let amps = spec
            .coords()
            .iter()
            .map(|&q| {
                Complex64::from_polar(
                    (-(q - q_mean).powi(2) / (2.0 * sigma * sigma)).exp(),
                    p_mean * q,
                )
            })
            .collect();
        let mut s = Self {
            spec,
            modes: 1,
            amps,
        };
        s.renormalize();
        s
    }

    /// Evaluate a comb on the grid and renormalize. The grid must cover
    /// every peak center ± 8σ.
    pub fn from_comb(comb: &GaussianComb, spec: GridSpec) -> Result<Self, GridError> {
        let needed = comb.max_center() + 8.0 * comb.sigma;
        if needed > spec.q_max() {
            return Err(GridError::GridTooSmall {
                needed,
                q_max: spec.q_max(),
            });
        }
        let amps = spec.coords().iter().map(|&q| comb.amplitude(q)).collect();
        let mut s = Self {
            spec,
            modes: 1,
            amps,
        };
        s.renormalize();
        Ok(s)
    }

    /// Product state of two single-mode states on the same grid.
    pub fn tensor(a: &GridState, b: &GridState) -> Self {
        assert_eq!(a.modes, 1);
        assert_eq!(b.modes, 1);
        assert_eq!(a.spec, b.spec);
        let n = a.spec.n;
        let mut amps = vec![Complex64::default(); n * n];
        for i0 in 0..n {
            for i1 in 0..n {
                amps[i0 * n + i1] = a.amps[i0] * b.amps[i1];
            }
        }
        Self {
            spec: a.spec,
            modes: 2,
            amps,
        }
    }

    fn volume(&self) -> f64 {
        self.spec.dq.powi(self.modes as i32)
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.volume()
    }

    pub fn renormalize(&mut self) {
        let n = self.norm_sq().sqrt();
        for a in &mut self.amps {
            *a /= n;
        }
    }

    /// Largest boundary amplitude relative to the peak amplitude; the grid
    /// is wide enough when this is below 1e-10.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.spec.n;
        let max = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let mut edge = 0.0f64;
        match self.modes {
            1 => {
                edge = edge.max(self.amps[0].norm()).max(self.amps[n - 1].norm());
            }
            _ => {
                for i in 0..n {
                    edge = edge
                        .max(self.amps[i].norm())
                        .max(self.amps[(n - 1) * n + i].norm())
                        .max(self.amps[i * n].norm())
                        .max(self.amps[i * n + n - 1].norm());
                }
            }
        }
        edge / max
    }

    /// Multiply by e^{i·poly(q)} on one mode, poly = c₀ + c₁q + c₂q² + c₃q³.
    pub fn apply_q_polynomial(&mut self, mode: usize, poly: [f64; 4]) -> Result<(), GridError> {
        self.check_mode(mode)?;
        let n = self.spec.n;
        let phases: Vec<Complex64> = self
            .spec
            .coords()
            .iter()
            .map(|&q| Complex64::from_polar(1.0, poly[0] + q * (poly[1] + q * (poly[2] + q * poly[3]))))
            .collect();
        match (self.modes, mode) {
            (1, _) => {
                for (a, ph) in self.amps.iter_mut().zip(&phases) {
                    *a *= ph;
                }
            }
            (2, 0) => {
                for i0 in 0..n {
                    let ph = phases[i0];
                    for a in &mut self.amps[i0 * n..(i0 + 1) * n] {
                        *a *= ph;
                    }
                }
            }
            (2, 1) => {
                for i0 in 0..n {
                    for (a, ph) in self.amps[i0 * n..(i0 + 1) * n].iter_mut().zip(&phases) {
                        *a *= ph;
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Two-mode phase e^{i·b·q₁q₂}.
    pub fn apply_cz(&mut self, b: f64) -> Result<(), GridError> {
        if self.modes != 2 {
            return Err(GridError::WrongArity {
                expected: 2,
                got: self.modes,
            });
        }
        let n = self.spec.n;
        let coords = self.spec.coords();
        for i0 in 0..n {
            let q0 = coords[i0];
            for i1 in 0..n {
                self.amps[i0 * n + i1] *= Complex64::from_polar(1.0, b * q0 * coords[i1]);
            }
        }
        Ok(())
    }

    fn check_mode(&self, mode: usize) -> Result<(), GridError> {
        if mode >= self.modes {
            return Err(GridError::WrongArity {
                expected: mode + 1,
                got: self.modes,
            });
        }
        Ok(())
    }

    /// Fourier gate (+i kernel) on one mode; inverse uses the −i kernel.
    /// Realized as an FFT conjugated by the twiddles that move between
    /// DFT indexing and the symmetric continuum grid.
    pub fn apply_fourier(&mut self, mode: usize) -> Result<(), GridError> {
        self.fourier_impl(mode, true)
    }

    pub fn apply_fourier_inverse(&mut self, mode: usize) -> Result<(), GridError> {
        self.fourier_impl(mode, false)
    }

    fn fourier_impl(&mut self, mode: usize, plus_kernel: bool) -> Result<(), GridError> {
        self.check_mode(mode)?;
        let n = self.spec.n;
        let c = self.spec.center();
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        let sign = if plus_kernel { 1.0 } else { -1.0 };
        // (dq/√2π)·e^{±i2πc²/n} and the index twiddles e^{∓i2πcj/n}
        let scale = Complex64::from_polar(
            self.spec.dq / (2.0 * std::f64::consts::PI).sqrt(),
            sign * tau * c * c,
        );
        let pre: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, -sign * tau * c * j as f64))
            .collect();
        let post: Vec<Complex64> = (0..n)
            .map(|k| scale * Complex64::from_polar(1.0, -sign * tau * c * k as f64))
            .collect();

        let mut planner = FftPlanner::new();
        let fft = if plus_kernel {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };

        let run = |row: &mut [Complex64]| {
            for (a, t) in row.iter_mut().zip(&pre) {
                *a *= t;
            }
            fft.process(row);
            for (a, t) in row.iter_mut().zip(&post) {
                *a *= t;
            }
        };

        match (self.modes, mode) {
            (1, _) => run(&mut self.amps),
            (2, 1) => {
                for i0 in 0..n {
                    run(&mut self.amps[i0 * n..(i0 + 1) * n]);
                }
            }
            (2, 0) => {
                let mut col = vec![Complex64::default(); n];
                for i1 in 0..n {
                    for i0 in 0..n {
                        col[i0] = self.amps[i0 * n + i1];
                    }
                    run(&mut col);
                    for i0 in 0..n {
                        self.amps[i0 * n + i1] = col[i0];
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Shift the position wavefunction: ψ(q) → ψ(q − delta), applied as a
    /// phase in the momentum representation (no pixel rounding).
    pub fn displace_q(&mut self, mode: usize, delta: f64) -> Result<(), GridError> {
        self.apply_fourier_inverse(mode)?;
        self.apply_q_polynomial(mode, [0.0, -delta, 0.0, 0.0])?;
        self.apply_fourier(mode)
    }

    /// Apply one gate from the shared vocabulary. Gaussian composites go
    /// through their exact shear/Fourier decompositions; the cross-Kerr gate
    /// has no grid realization here (see the Fock verifier).
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), GridError> {
        let mode = gate.modes[0];
        if let Some(poly) = gate.q_polynomial() {
            return self.apply_q_polynomial(mode, poly);
        }
        match gate.kind {
            GateKind::Fourier => self.apply_fourier(mode),
            GateKind::FourierInverse => self.apply_fourier_inverse(mode),
            GateKind::CZ(b) => {
                if gate.modes == vec![0, 1] || gate.modes == vec![1, 0] {
                    self.apply_cz(b)
                } else {
                    Err(GridError::WrongArity {
                        expected: 2,
                        got: self.modes,
                    })
                }
            }
            GateKind::Squeeze(s) => {
                let seq = crate::symplectic::decompose_squeeze_on(s, mode)?;
                self.apply_sequence(&seq)
            }
            GateKind::Rotation(theta) => {
                let seq = crate::symplectic::decompose_rotation_on(theta, mode)?;
                self.apply_sequence(&seq)
            }
            GateKind::BeamSplitter(r) => {
                let seq =
                    crate::symplectic::decompose_beamsplitter_on(r, gate.modes[0], gate.modes[1])?;
                self.apply_sequence(&seq)
            }
            GateKind::CrossKerr(_) => Err(GridError::Unsupported("cross_kerr")),
            _ => unreachable!("diagonal gates handled above"),
        }
    }

    pub fn apply_sequence(&mut self, seq: &crate::symplectic::GateSequence) -> Result<(), GridError> {
        for g in &seq.gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Probability masses per grid point of the chosen mode's position.
    pub fn marginal_q(&self, mode: usize) -> Vec<f64> {
        let n = self.spec.n;
        let mut out = vec![0.0; n];
        match (self.modes, mode) {
            (1, _) => {
                for (o, a) in out.iter_mut().zip(&self.amps) {
                    *o = a.norm_sqr() * self.spec.dq;
                }
            }
            (2, 0) => {
                for i0 in 0..n {
                    out[i0] = self.amps[i0 * n..(i0 + 1) * n]
                        .iter()
                        .map(|a| a.norm_sqr())
                        .sum::<f64>()
                        * self.spec.dq
                        * self.spec.dq;
                }
            }
            (2, 1) => {
                for i0 in 0..n {
                    for i1 in 0..n {
                        out[i1] += self.amps[i0 * n + i1].norm_sqr();
                    }
                }
                for o in &mut out {
                    *o *= self.spec.dq * self.spec.dq;
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Probability masses per grid point of the chosen mode's momentum.
    pub fn marginal_p(&self, mode: usize) -> Vec<f64> {
        let mut s = self.clone();
        s.apply_fourier_inverse(mode).expect("self-dual grid");
        s.marginal_q(mode)
    }

    /// Mean and variance of q̂ and p̂ on one mode.
    pub fn moments(&self, mode: usize) -> Moments {
        let coords = self.spec.coords();
        let stat = |masses: &[f64]| {
            let mean: f64 = masses.iter().zip(&coords).map(|(m, q)| m * q).sum();
            let var: f64 = masses
                .iter()
                .zip(&coords)
                .map(|(m, q)| m * (q - mean) * (q - mean))
                .sum();
            (mean, var)
        };
        let (mean_q, var_q) = stat(&self.marginal_q(mode));
        let (mean_p, var_p) = stat(&self.marginal_p(mode));
        Moments {
            mean_q,
            mean_p,
            var_q,
            var_p,
        }
    }

    /// ⟨e^{icq̂}⟩ on one mode.
    pub fn expectation_exp_icq(&self, mode: usize, c: f64) -> Complex64 {
        let coords = self.spec.coords();
        self.marginal_q(mode)
            .iter()
            .zip(&coords)
            .map(|(m, &q)| Complex64::from_polar(*m, c * q))
            .sum()
    }

    /// |⟨a|b⟩|² by grid quadrature.
    pub fn fidelity(&self, other: &GridState) -> f64 {
        assert_eq!(self.modes, other.modes);
        assert_eq!(self.spec, other.spec);
        let ip: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        (ip * self.volume()).norm_sqr()
    }

    /// Momentum-representation column of a two-mode state at an arbitrary
    /// momentum value of `mode` (not necessarily a grid point):
    /// ψ(x; p) = (2π)^{−1/2}·dq·Σ_j e^{−ip·q_j}·Ψ(x, q_j). Returns the
    /// unnormalized conditional single-mode state and the momentum density
    /// ∫|ψ(x; p)|²dx at that p.
    pub fn p_slice(&self, mode: usize, p: f64) -> (GridState, f64) {
        assert_eq!(self.modes, 2);
        let n = self.spec.n;
        let coords = self.spec.coords();
        let scale = self.spec.dq / (2.0 * std::f64::consts::PI).sqrt();
        let phases: Vec<Complex64> =
            coords.iter().map(|&q| Complex64::from_polar(scale, -p * q)).collect();
        let mut amps = vec![Complex64::default(); n];
        match mode {
            1 => {
                for i0 in 0..n {
                    let mut acc = Complex64::default();
                    for i1 in 0..n {
                        acc += self.amps[i0 * n + i1] * phases[i1];
                    }
                    amps[i0] = acc;
                }
            }
            0 => {
                for i0 in 0..n {
                    let ph = phases[i0];
                    for i1 in 0..n {
                        amps[i1] += self.amps[i0 * n + i1] * ph;
                    }
                }
            }
            _ => unreachable!(),
        }
        let density: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spec.dq;
        (
            GridState {
                spec: self.spec,
                modes: 1,
                amps,
            },
            density,
        )
    }

    /// Position-probability mass split by the parity of the nearest √π
    /// multiple: (even mass, odd mass).
    pub fn parity_masses(&self, mode: usize) -> (f64, f64) {
        let coords = self.spec.coords();
        let (mut even, mut odd) = (0.0, 0.0);
        for (m, &q) in self.marginal_q(mode).iter().zip(&coords) {
            let idx = (q / SQRT_PI).round() as i64;
            if idx.rem_euclid(2) == 0 {
                even += m;
            } else {
                odd += m;
            }
        }
        (even, odd)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Moments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
}

/// Finite homodyne resolution: bin half-width η tied to the grid constant by
/// √π = K·η, bin centers p_k = 2ηk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomodyneSpec {
    pub eta: f64,
    pub k_divisor: u32,
}

impl HomodyneSpec {
    pub fn from_k(k_divisor: u32) -> Self {
        assert!(k_divisor >= 1);
        Self {
            eta: SQRT_PI / k_divisor as f64,
            k_divisor,
        }
    }

    pub fn bin_center(&self, k: i64) -> f64 {
        2.0 * self.eta * k as f64
    }

    pub fn bin_of(&self, p: f64) -> i64 {
        (p / (2.0 * self.eta)).round() as i64
    }
}

/// Binned probability vector over bin indices [k_min, k_min + len).
#[derive(Clone, Debug)]
pub struct BinnedPdf {
    pub k_min: i64,
    pub masses: Vec<f64>,
}

impl BinnedPdf {
    pub fn mass_of(&self, k: i64) -> f64 {
        let idx = k - self.k_min;
        if idx < 0 || idx as usize >= self.masses.len() {
            0.0
        } else {
            self.masses[idx as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// Binned momentum distribution of one mode: the mass of bin k is the
/// quadrature of |ψ̃(p)|² over [p_k − η, p_k + η]. Grid cells that straddle
/// a bin edge split their mass proportionally.
pub fn homodyne_bins(state: &GridState, mode: usize, spec: &HomodyneSpec) -> BinnedPdf {
    let masses = state.marginal_p(mode);
    let coords = state.spec.coords();
    let half = state.spec.dq / 2.0;
    let width = 2.0 * spec.eta;

    let k_lo = spec.bin_of(coords[0] - half);
    let k_hi = spec.bin_of(coords[coords.len() - 1] + half);
    let mut out = vec![0.0; (k_hi - k_lo + 1) as usize];
    for (m, &p) in masses.iter().zip(&coords) {
        let (lo, hi) = (p - half, p + half);
        let (k1, k2) = (spec.bin_of(lo), spec.bin_of(hi));
        if k1 == k2 {
            out[(k1 - k_lo) as usize] += m;
        } else {
            // cell crosses the edge between k1 and k2 at (k1 + 1/2)·2η
            let edge = width * (k1 as f64 + 0.5);
            let frac = ((edge - lo) / state.spec.dq).clamp(0.0, 1.0);
            out[(k1 - k_lo) as usize] += m * frac;
            out[(k2 - k_lo) as usize] += m * (1.0 - frac);
        }
    }
    BinnedPdf {
        k_min: k_lo,
        masses: out,
    }
}

/// Outcome of one error-correction round.
#[derive(Clone, Debug)]
pub struct EcOutcome {
    pub corrected: GridState,
    /// Sampled momentum readout after binning, p_k = 2ηk.
    pub outcome: f64,
    /// The correction applied: p_k reduced to (−√π/2, √π/2].
    pub measured_shift: f64,
    /// Post-correction position mass sits mostly on odd √π multiples —
    /// the round ended in the bit-flipped regime. Meaningful for
    /// grid-diagonal (Z-basis) data states.
    pub flip_flag: bool,
}

/// Shift-error correction gadget: entangle the data mode with a grid-state
/// ancilla through CZ, measure the ancilla's momentum with binned homodyne
/// readout, and displace the data back by the measured shift reduced mod √π
/// to (−√π/2, √π/2].
///
/// The measurement is modeled as a perfectly resolved homodyne sample (drawn
/// from the exact ancilla momentum marginal with a seeded ChaCha20 stream,
/// inverse-CDF over the grid) followed by discretization onto the bin
/// centers, which is equivalent to the finitely-resolved momentum operator.
pub fn ec_gadget(
    data: &GridState,
    ancilla: &GaussianComb,
    spec: &HomodyneSpec,
    seed: u64,
) -> Result<EcOutcome, GridError> {
    if data.modes != 1 {
        return Err(GridError::WrongArity {
            expected: 1,
            got: data.modes,
        });
    }
    let ancilla_grid = GridState::from_comb(ancilla, data.spec)?;
    let mut joint = GridState::tensor(data, &ancilla_grid);
    joint.apply_cz(1.0)?;

    // exact momentum marginal of the ancilla mode
    let marginal = joint.marginal_p(1);
    let total: f64 = marginal.iter().sum();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let u: f64 = rand::Rng::random_range(&mut rng, 0.0..total);
    let mut acc = 0.0;
    let mut idx = marginal.len() - 1;
    for (j, m) in marginal.iter().enumerate() {
        acc += m;
        if acc >= u {
            idx = j;
            break;
        }
    }
    let p_sampled = joint.spec.coord(idx);
    let outcome = spec.bin_center(spec.bin_of(p_sampled));
    let measured_shift = wrap_to_half_interval(outcome, SQRT_PI);

    // collapse onto the sampled momentum and undo the inferred shift
    let (mut corrected, _) = joint.p_slice(1, p_sampled);
    corrected.renormalize();
    corrected.displace_q(0, -measured_shift)?;

    let (even, odd) = corrected.parity_masses(0);
    Ok(EcOutcome {
        corrected,
        outcome,
        measured_shift,
        flip_flag: odd > even,
    })
}

/// Reduce x modulo `period` into (−period/2, period/2].
pub fn wrap_to_half_interval(x: f64, period: f64) -> f64 {
    let mut r = x - period * (x / period).round();
    if r <= -period / 2.0 {
        r += period;
    }
    r
}

/// Outcome of running the first synthesis iteration on the dense grid and
/// comparing it against the comb analytics.
#[derive(Clone, Copy, Debug)]
pub struct SynthesisCrossCheck {
    pub fidelity: f64,
    pub grid_prob: f64,
    pub comb_prob: f64,
    pub prob_rel_err: f64,
}

/// Run the first synthesis iteration entirely on the grid — two cats sent
/// through the decomposed beamsplitter, the difference mode projected onto
/// the momentum window [−η, η] — and compare the conditional state and
/// window probability against the comb module. The window probability is a
/// Simpson rule over momentum slices at {−η, 0, η}, evaluated exactly by
/// explicit phase sums so η need not be resolved by the momentum grid; η is
/// picked as the largest bin satisfying η·2√π ≤ 0.02.
pub fn synthesis_cross_check(n_points: usize) -> SynthesisCrossCheck {
    let sigma = crate::comb::sigma_of_m(1).sigma;
    let k_divisor = (2.0 * SQRT_PI * SQRT_PI / 0.02).ceil() as u32;
    let eta = HomodyneSpec::from_k(k_divisor).eta;

    let cat = crate::comb::cat(crate::comb::protocol_center(1), sigma);
    let spec = GridSpec::self_dual(n_points);
    let single = GridState::from_comb(&cat, spec).expect("grid covers the cats");
    let mut joint = GridState::tensor(&single, &single);
    joint
        .apply_sequence(&crate::symplectic::decompose_beamsplitter_on(0.5, 0, 1).unwrap())
        .expect("gaussian sequence");

    // the balanced splitter sends the sum to mode 0, the difference to mode 1
    let (_, d_lo) = joint.p_slice(1, -eta);
    let (mut cond, d_mid) = joint.p_slice(1, 0.0);
    let (_, d_hi) = joint.p_slice(1, eta);
    let grid_prob = (d_lo + 4.0 * d_mid + d_hi) * eta / 3.0;

    let bs = crate::comb::bs_step(&cat, &cat).unwrap();
    let (comb_state, comb_prob) =
        crate::comb::project_p0(&bs, crate::comb::Mode::First, eta).unwrap();

    cond.renormalize();
    let reference = GridState::from_comb(&comb_state, spec).expect("grid covers the comb");
    SynthesisCrossCheck {
        fidelity: cond.fidelity(&reference),
        grid_prob,
        comb_prob,
        prob_rel_err: ((grid_prob - comb_prob) / comb_prob).abs(),
    }
}
