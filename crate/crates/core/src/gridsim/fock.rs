//! Truncated two-mode Fock-space verifier for the π-strength cross-Kerr
//! identity on coherent inputs:
//! e^{iπn̂₁n̂₂}|α⟩|β⟩ = ½(|α⟩+|−α⟩)|β⟩ + ½(|α⟩−|−α⟩)|−β⟩.

use num_complex::Complex64;

use super::GridError;

/// Two-mode state in the number basis, amplitudes indexed (n₁, n₂).
#[derive(Clone, Debug)]
pub struct FockState {
    pub dim: usize,
    pub amps: Vec<Complex64>,
}

impl FockState {
    pub fn product(a: &[Complex64], b: &[Complex64]) -> Self {
        let dim = a.len();
        assert_eq!(dim, b.len());
        let mut amps = vec![Complex64::default(); dim * dim];
        for n1 in 0..dim {
            for n2 in 0..dim {
                amps[n1 * dim + n2] = a[n1] * b[n2];
            }
        }
        Self { dim, amps }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Diagonal phase e^{iθn₁n₂}.
    pub fn apply_cross_kerr(&mut self, theta: f64) {
        for n1 in 0..self.dim {
            for n2 in 0..self.dim {
                self.amps[n1 * self.dim + n2] *=
                    Complex64::from_polar(1.0, theta * (n1 * n2) as f64);
            }
        }
    }

    pub fn overlap(&self, other: &FockState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Coherent-state amplitudes c_n = e^{−α²/2}·αⁿ/√n! for real α, truncated
/// at `dim`.
pub fn coherent_amps(alpha: f64, dim: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(dim);
    let mut ln_term = -alpha * alpha / 2.0; // ln c_0
    for n in 0..dim {
        if n > 0 {
            ln_term += alpha.abs().ln() - 0.5 * (n as f64).ln();
        }
        let sign = if alpha < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        out.push(Complex64::new(sign * ln_term.exp(), 0.0));
    }
    out
}

/// Harmonic-oscillator eigenfunctions φ_n(q) at one point, for the
/// convention ⟨q²⟩_vac = 1/2 (so φ_0 = π^{−1/4}e^{−q²/2}), via the stable
/// recursion φ_n = √(2/n)·q·φ_{n−1} − √((n−1)/n)·φ_{n−2}.
pub fn oscillator_eigenfunctions(q: f64, dim: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(dim);
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-q * q / 2.0).exp();
    out.push(phi0);
    if dim > 1 {
        out.push(std::f64::consts::SQRT_2 * q * phi0);
    }
    for n in 2..dim {
        let nf = n as f64;
        let next = (2.0 / nf).sqrt() * q * out[n - 1] - ((nf - 1.0) / nf).sqrt() * out[n - 2];
        out.push(next);
    }
    out
}

/// Result of the cross-Kerr cat-generation check.
#[derive(Clone, Copy, Debug)]
pub struct CrossKerrCheck {
    /// |⟨rhs|e^{iπn̂₁n̂₂}|α,β⟩|² over the product of norms.
    pub fidelity: f64,
    /// Probability that a position-sign readout on mode 2, conditioned on
    /// the even-cat branch, lands on the wrong side of 0.
    pub sign_error_prob: f64,
    /// Bound e^{−2β²} = |⟨−β|β⟩| the sign error must stay below.
    pub overlap_bound: f64,
}

/// Build |α⟩|β⟩ in a dim-`d` truncation, apply the π cross-Kerr phase, and
/// compare against the cat decomposition. Also reads out the mode-2
/// conditional (even branch) on a position grid and integrates the
/// wrong-sign mass.
pub fn cross_kerr_fock(alpha: f64, beta: f64, dim: usize) -> Result<CrossKerrCheck, GridError> {
    let required = (alpha * alpha).max(beta * beta) as usize * 4 + 20;
    if dim < required {
        return Err(GridError::TruncationTooSmall { required, got: dim });
    }
    let ca = coherent_amps(alpha, dim);
    let cb = coherent_amps(beta, dim);
    // truncation tails must be negligible
    for c in [&ca, &cb] {
        let tail = 1.0 - c.iter().map(|x| x.norm_sqr()).sum::<f64>();
        if tail > 1e-10 {
            return Err(GridError::TruncationTooSmall { required, got: dim });
        }
    }

    let mut lhs = FockState::product(&ca, &cb);
    lhs.apply_cross_kerr(std::f64::consts::PI);

    let ca_neg = coherent_amps(-alpha, dim);
    let cb_neg = coherent_amps(-beta, dim);
    let even: Vec<Complex64> = ca.iter().zip(&ca_neg).map(|(a, b)| (a + b) / 2.0).collect();
    let odd: Vec<Complex64> = ca.iter().zip(&ca_neg).map(|(a, b)| (a - b) / 2.0).collect();
    let mut rhs = FockState::product(&even, &cb);
    let part = FockState::product(&odd, &cb_neg);
    for (r, p) in rhs.amps.iter_mut().zip(&part.amps) {
        *r += p;
    }

    let fidelity = lhs.overlap(&rhs).norm_sqr() / (lhs.norm_sq() * rhs.norm_sq());

    // even-branch conditional on mode 2 is |β⟩ (truncated); integrate its
    // position density over the wrong sign by Simpson quadrature
    let q_max = 2f64.sqrt() * beta.abs() + 8.0;
    let steps = 2000usize;
    let h = q_max / steps as f64;
    let mut wrong = 0.0;
    for i in 0..=steps {
        let q = -q_max + i as f64 * h;
        let phi = oscillator_eigenfunctions(q, dim);
        let psi: Complex64 = cb.iter().zip(&phi).map(|(c, f)| c * f).sum();
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        wrong += w * psi.norm_sqr();
    }
    wrong *= h / 3.0;

    Ok(CrossKerrCheck {
        fidelity,
        sign_error_prob: wrong,
        overlap_bound: (-2.0 * beta * beta).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_amplitudes_are_normalized() {
        for alpha in [0.0, 0.7, 2.0, -1.5] {
            let c = coherent_amps(alpha, 40);
            let n: f64 = c.iter().map(|x| x.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12, "alpha = {}", alpha);
        }
    }

    #[test]
    fn coherent_mean_photon_number() {
        let c = coherent_amps(2.0, 60);
        let n_mean: f64 = c
            .iter()
            .enumerate()
            .map(|(n, x)| n as f64 * x.norm_sqr())
            .sum();
        assert!((n_mean - 4.0).abs() < 1e-9);
    }

    #[test]
    fn eigenfunctions_orthonormal() {
        // quadrature check on the first few
        let (q_max, steps) = (12.0, 4000);
        let h = 2.0 * q_max / steps as f64;
        for (m, n) in [(0, 0), (1, 1), (0, 2), (3, 3), (2, 4)] {
            let mut acc = 0.0;
            for i in 0..=steps {
                let q = -q_max + i as f64 * h;
                let phi = oscillator_eigenfunctions(q, 6);
                let w = if i == 0 || i == steps {
                    0.5
                } else {
                    1.0
                };
                acc += w * phi[m] * phi[n];
            }
            acc *= h;
            let want = if m == n { 1.0 } else { 0.0 };
            assert!((acc - want).abs() < 1e-8, "({}, {})", m, n);
        }
    }

    #[test]
    fn coherent_position_mean_is_sqrt2_alpha() {
        let beta = 1.3;
        let c = coherent_amps(beta, 40);
        let (q_max, steps) = (12.0, 4000);
        let h = 2.0 * q_max / steps as f64;
        let mut mean = 0.0;
        for i in 0..=steps {
            let q = -q_max + i as f64 * h;
            let phi = oscillator_eigenfunctions(q, 40);
            let psi: Complex64 = c.iter().zip(&phi).map(|(a, f)| a * f).sum();
            mean += q * psi.norm_sqr();
        }
        mean *= h;
        assert!((mean - 2f64.sqrt() * beta).abs() < 1e-6);
    }

    #[test]
    fn cross_kerr_identity_exact_up_to_truncation() {
        let check = cross_kerr_fock(2.0, 2.0, 40).unwrap();
        assert!(check.fidelity >= 1.0 - 1e-8, "fidelity = {}", check.fidelity);
    }

    #[test]
    fn cross_kerr_alpha_zero_leaves_mode1_in_vacuum() {
        // n₁ = 0 sector: gate acts trivially; mode-1 reduced state is vacuum
        let ca = coherent_amps(0.0, 30);
        let cb = coherent_amps(2.0, 30);
        let mut s = FockState::product(&ca, &cb);
        s.apply_cross_kerr(std::f64::consts::PI);
        let mut mode1 = vec![0.0; 30];
        for n1 in 0..30 {
            for n2 in 0..30 {
                mode1[n1] += s.amps[n1 * 30 + n2].norm_sqr();
            }
        }
        assert!((mode1[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sign_error_bounded_by_coherent_overlap() {
        let check = cross_kerr_fock(2.0, 2.0, 40).unwrap();
        assert!((check.overlap_bound - (-8.0f64).exp()).abs() < 1e-12);
        assert!(
            check.sign_error_prob <= check.overlap_bound,
            "{} > {}",
            check.sign_error_prob,
            check.overlap_bound
        );
        assert!(check.sign_error_prob > 0.0);
    }

    #[test]
    fn truncation_guard_fires() {
        assert!(matches!(
            cross_kerr_fock(2.0, 2.0, 10),
            Err(GridError::TruncationTooSmall { .. })
        ));
    }
}
