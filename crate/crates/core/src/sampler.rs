//! The two homodyne sampling circuit families: random circuits over the
//! full elementary pool on vacuum inputs, and the position-diagonal family
//! (no Fourier) on momentum-squeezed inputs. Circuits are drawn with seeded
//! streams; outcome distributions are binned per mode, computed either by
//! symplectic covariance propagation (Gaussian-only circuits, closed-form
//! erf bin masses) or by the dense grid.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use crate::comb::{displacement_alpha, sigma_of_m};
use crate::gridsim::{homodyne_bins, GridError, GridSpec, GridState, HomodyneSpec};
use crate::kerrplan;
use crate::symplectic::{compose_affine, Gate, GateKind, GateSequence};

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("non-Gaussian circuit on {0} modes exceeds the dense-grid limit of 2")]
    TooManyModes(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    NonGaussian(#[from] crate::symplectic::SymplecticError),
}

/// Which circuit family to draw from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ModelKind {
    RandomCv,
    Cviqp,
}

/// A circuit family with its gate parameters fixed by the state-quality
/// point (m, y). The position-diagonal family also fixes the input
/// momentum squeezing σ < 1.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CircuitModel {
    pub kind: ModelKind,
    pub m: u32,
    pub y: f64,
    pub input_sigma: f64,
}

impl CircuitModel {
    pub fn random_cv(m: u32, y: f64) -> Self {
        Self {
            kind: ModelKind::RandomCv,
            m,
            y,
            input_sigma: 1.0,
        }
    }

    pub fn cviqp(m: u32, y: f64, input_sigma: f64) -> Self {
        assert!(
            input_sigma > 0.0 && input_sigma < 1.0,
            "inputs must be momentum squeezed"
        );
        Self {
            kind: ModelKind::Cviqp,
            m,
            y,
            input_sigma,
        }
    }

    /// Concrete gate templates of the pool. Parameters come from the
    /// (m, y)-derived table: cat displacement, cat-squeezer shears,
    /// beamsplitter block, cross-Kerr decomposition angles, plus the fixed
    /// logical gates. The position-diagonal pool omits the Fourier gate.
    pub fn pool(&self) -> Vec<GateKind> {
        let sigma = sigma_of_m(self.m).sigma;
        let squeeze = std::f64::consts::SQRT_2 * sigma;
        let angles = kerrplan::plan(self.y).expect("valid budget").derived_angles;
        // balanced-beamsplitter block coupling b₃ = √(1−R) at R = 1/2
        let (_, _, bs_coupling) =
            crate::symplectic::beamsplitter_block_params(0.5).expect("R in range");
        let mut pool = vec![
            GateKind::Displacement(displacement_alpha(self.m, sigma)),
            GateKind::Shear(0.5 * squeeze),
            GateKind::Shear(0.5 / squeeze),
            GateKind::Cubic(angles.cubic_small),
            GateKind::Cubic(angles.cubic_big),
            GateKind::CZ(bs_coupling),
            GateKind::CZ(angles.cz_small),
            GateKind::LogicalZ,
            GateKind::CZ(1.0),
            GateKind::LogicalT,
        ];
        if self.kind == ModelKind::RandomCv {
            pool.push(GateKind::Fourier);
        }
        pool
    }
}

/// A drawn circuit: gates in application order plus the detection binning.
#[derive(Clone, Debug)]
pub struct CircuitSpec {
    pub model: CircuitModel,
    pub n_modes: usize,
    pub gates: GateSequence,
    pub homodyne: HomodyneSpec,
    pub seed: u64,
}

/// Draw a circuit of `depth` gates uniformly from the model's pool, with
/// modes drawn uniformly (ordered distinct pairs for two-mode gates).
/// Deterministic in the seed. Single-mode registers restrict the pool to
/// single-mode gates.
pub fn draw_circuit(
    model: &CircuitModel,
    n_modes: usize,
    depth: usize,
    k_divisor: u32,
    seed: u64,
) -> CircuitSpec {
    assert!(n_modes >= 1);
    let pool: Vec<GateKind> = model
        .pool()
        .into_iter()
        .filter(|g| g.arity() <= n_modes)
        .collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut gates = GateSequence::default();
    for _ in 0..depth {
        let kind = pool[rng.random_range(0..pool.len())];
        debug_assert!(
            model.kind == ModelKind::RandomCv || kind != GateKind::Fourier,
            "position-diagonal pool must not contain Fourier"
        );
        let gate = match kind.arity() {
            1 => Gate::new(kind, &[rng.random_range(0..n_modes)]),
            _ => {
                let a = rng.random_range(0..n_modes);
                let mut b = rng.random_range(0..n_modes - 1);
                if b >= a {
                    b += 1;
                }
                Gate::new(kind, &[a, b])
            }
        };
        gates.push(gate);
    }
    CircuitSpec {
        model: *model,
        n_modes,
        gates,
        homodyne: HomodyneSpec::from_k(k_divisor),
        seed,
    }
}

/// Per-mode binned momentum distribution, truncated to |k| ≤ k_lim with the
/// remainder gathered into two overflow bins.
#[derive(Clone, Debug, Serialize)]
pub struct ModeDistribution {
    pub k_lim: i64,
    /// masses for k = −k_lim ..= k_lim
    pub masses: Vec<f64>,
    pub underflow: f64,
    pub overflow: f64,
}

impl ModeDistribution {
    pub fn mass_of(&self, k: i64) -> f64 {
        if k.abs() > self.k_lim {
            0.0
        } else {
            self.masses[(k + self.k_lim) as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum::<f64>() + self.underflow + self.overflow
    }

    /// Total-variation distance over the common binned support.
    pub fn total_variation(&self, other: &ModeDistribution) -> f64 {
        let k_lim = self.k_lim.max(other.k_lim);
        let mut tv = 0.0;
        for k in -k_lim..=k_lim {
            tv += (self.mass_of(k) - other.mass_of(k)).abs();
        }
        tv += (self.underflow - other.underflow).abs();
        tv += (self.overflow - other.overflow).abs();
        tv / 2.0
    }
}

/// Bins with centers out to ±4√π stay explicit; everything further piles
/// into the overflow slots.
fn k_limit(spec: &HomodyneSpec) -> i64 {
    2 * spec.k_divisor as i64
}

fn gaussian_bin_masses(mean: f64, var: f64, spec: &HomodyneSpec, k_lim: i64) -> ModeDistribution {
    let s = var.sqrt();
    let cdf = |x: f64| 0.5 * (1.0 + libm::erf((x - mean) / (s * std::f64::consts::SQRT_2)));
    let mut masses = Vec::with_capacity((2 * k_lim + 1) as usize);
    for k in -k_lim..=k_lim {
        let c = spec.bin_center(k);
        masses.push(cdf(c + spec.eta) - cdf(c - spec.eta));
    }
    let underflow = cdf(spec.bin_center(-k_lim) - spec.eta);
    let overflow = 1.0 - cdf(spec.bin_center(k_lim) + spec.eta);
    ModeDistribution {
        k_lim,
        masses,
        underflow,
        overflow,
    }
}

/// Closed-form covariance path: valid only for Gaussian-only circuits.
pub fn simulate_covariance(spec: &CircuitSpec) -> Result<Vec<ModeDistribution>, SamplerError> {
    let n = spec.n_modes;
    let action = compose_affine(&spec.gates, n)?;
    // input covariance: vacuum (q, p) variances 1/2, or momentum-squeezed
    // amplitude width σ in p: var_p = σ²/2, var_q = 1/(2σ²)
    let (vq, vp) = match spec.model.kind {
        ModelKind::RandomCv => (0.5, 0.5),
        ModelKind::Cviqp => {
            let s2 = spec.model.input_sigma * spec.model.input_sigma;
            (0.5 / s2, 0.5 * s2)
        }
    };
    let mut cov = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        cov[(i, i)] = vq;
        cov[(n + i, n + i)] = vp;
    }
    let s = &action.matrix.matrix;
    let cov_out = s * cov * s.transpose();
    let mean_out = &action.shift; // input means vanish

    let k_lim = k_limit(&spec.homodyne);
    Ok((0..n)
        .map(|i| {
            gaussian_bin_masses(
                mean_out[n + i],
                cov_out[(n + i, n + i)],
                &spec.homodyne,
                k_lim,
            )
        })
        .collect())
}

fn input_grid_state(model: &CircuitModel, spec: GridSpec) -> GridState {
    match model.kind {
        ModelKind::RandomCv => GridState::vacuum(spec),
        // momentum amplitude width σ means position amplitude width 1/σ
        ModelKind::Cviqp => GridState::gaussian(spec, 1.0 / model.input_sigma, 0.0, 0.0),
    }
}

/// Dense-grid path for circuits of up to two modes.
pub fn simulate_on_grid(
    spec: &CircuitSpec,
    grid_points: usize,
) -> Result<Vec<ModeDistribution>, SamplerError> {
    if spec.n_modes > 2 {
        return Err(SamplerError::TooManyModes(spec.n_modes));
    }
    let gspec = GridSpec::self_dual(grid_points);
    let single = input_grid_state(&spec.model, gspec);
    let mut state = match spec.n_modes {
        1 => single,
        _ => GridState::tensor(&single, &single),
    };
    state.apply_sequence(&spec.gates)?;

    let k_lim = k_limit(&spec.homodyne);
    Ok((0..spec.n_modes)
        .map(|mode| {
            let pdf = homodyne_bins(&state, mode, &spec.homodyne);
            let mut masses = vec![0.0; (2 * k_lim + 1) as usize];
            let (mut under, mut over) = (0.0, 0.0);
            for (off, &m) in pdf.masses.iter().enumerate() {
                let k = pdf.k_min + off as i64;
                if k < -k_lim {
                    under += m;
                } else if k > k_lim {
                    over += m;
                } else {
                    masses[(k + k_lim) as usize] += m;
                }
            }
            ModeDistribution {
                k_lim,
                masses,
                underflow: under,
                overflow: over,
            }
        })
        .collect())
}

const GRID_POINTS_ONE_MODE: usize = 8192;
const GRID_POINTS_TWO_MODES: usize = 1024;

/// Per-mode binned momentum distributions: Gaussian-only circuits take the
/// covariance path, anything else runs on the dense grid (limited to two
/// modes).
pub fn simulate_distribution(spec: &CircuitSpec) -> Result<Vec<ModeDistribution>, SamplerError> {
    match simulate_covariance(spec) {
        Ok(d) => Ok(d),
        Err(SamplerError::NonGaussian(_)) => {
            let n = if spec.n_modes == 1 {
                GRID_POINTS_ONE_MODE
            } else {
                GRID_POINTS_TWO_MODES
            };
            simulate_on_grid(spec, n)
        }
        Err(e) => Err(e),
    }
}

/// One sampled readout: shot index, mode, bin index and bin center.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleRecord {
    pub shot: u64,
    pub mode: usize,
    pub bin: i64,
    pub center: f64,
}

/// Draw i.i.d. bin indices per mode from the simulated marginal
/// distributions; deterministic in the sampling seed (one ChaCha20 stream,
/// modes drawn in order within each shot).
pub fn sample(
    spec: &CircuitSpec,
    shots: u64,
    seed: u64,
) -> Result<Vec<SampleRecord>, SamplerError> {
    let dists = simulate_distribution(spec)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(shots as usize * spec.n_modes);
    for shot in 0..shots {
        for (mode, dist) in dists.iter().enumerate() {
            let u: f64 = rng.random_range(0.0..dist.total());
            let mut acc = 0.0;
            let mut chosen = dist.k_lim;
            for k in -dist.k_lim..=dist.k_lim {
                acc += dist.mass_of(k);
                if acc >= u {
                    chosen = k;
                    break;
                }
            }
            out.push(SampleRecord {
                shot,
                mode,
                bin: chosen,
                center: spec.homodyne.bin_center(chosen),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universal_model() -> CircuitModel {
        CircuitModel::random_cv(1, 0.1)
    }

    fn diag_model() -> CircuitModel {
        CircuitModel::cviqp(1, 0.1, 0.5)
    }

    #[test]
    fn draw_is_deterministic() {
        let a = draw_circuit(&universal_model(), 2, 12, 8, 99);
        let b = draw_circuit(&universal_model(), 2, 12, 8, 99);
        assert_eq!(a.gates, b.gates);
    }

    #[test]
    fn diag_model_never_draws_fourier() {
        for seed in 0..50 {
            let spec = draw_circuit(&diag_model(), 2, 30, 8, seed);
            assert!(spec
                .gates
                .gates
                .iter()
                .all(|g| g.kind != GateKind::Fourier && g.kind != GateKind::FourierInverse));
            // everything is diagonal in position or the CZ entangler
            for g in &spec.gates.gates {
                assert!(
                    g.q_polynomial().is_some() || matches!(g.kind, GateKind::CZ(_)),
                    "unexpected gate {:?}",
                    g.kind
                );
            }
        }
    }

    #[test]
    fn random_cv_pool_membership() {
        let pool = universal_model().pool();
        assert!(pool.contains(&GateKind::Fourier));
        assert!(pool.contains(&GateKind::LogicalZ));
        assert!(pool.contains(&GateKind::LogicalT));
        let spec = draw_circuit(&universal_model(), 2, 40, 8, 5);
        for g in &spec.gates.gates {
            assert!(pool.contains(&g.kind));
        }
    }

    #[test]
    fn depth_zero_is_empty_circuit() {
        let spec = draw_circuit(&universal_model(), 3, 0, 8, 1);
        assert!(spec.gates.is_empty());
        let dists = simulate_distribution(&spec).unwrap();
        assert_eq!(dists.len(), 3);
        for d in &dists {
            assert!((d.total() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn vacuum_bins_match_erf_masses() {
        let spec = draw_circuit(&universal_model(), 1, 0, 4, 1);
        let d = &simulate_distribution(&spec).unwrap()[0];
        // vacuum momentum is N(0, 1/2)
        for k in -3i64..=3 {
            let c = spec.homodyne.bin_center(k);
            let want = 0.5 * (libm::erf(c + spec.homodyne.eta) - libm::erf(c - spec.homodyne.eta));
            assert!((d.mass_of(k) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn gaussian_two_mode_grid_and_covariance_paths_agree() {
        // hand-built Gaussian-only circuit exercising every Gaussian member
        let model = universal_model();
        let mut gates = GateSequence::default();
        gates.push(Gate::shear(0.28, 0));
        gates.push(Gate::fourier(1));
        gates.push(Gate::cz(0.7, 0, 1));
        gates.push(Gate::displacement(0.9, 0));
        gates.push(Gate::fourier(0));
        gates.push(Gate::logical_z(1));
        gates.push(Gate::shear(-0.4, 1));
        let spec = CircuitSpec {
            model,
            n_modes: 2,
            gates,
            homodyne: HomodyneSpec::from_k(8),
            seed: 0,
        };
        let cov = simulate_covariance(&spec).unwrap();
        let grid = simulate_on_grid(&spec, 1024).unwrap();
        for (c, g) in cov.iter().zip(&grid) {
            assert!((c.total() - 1.0).abs() < 1e-8);
            assert!((g.total() - 1.0).abs() < 1e-8);
            let tv = c.total_variation(g);
            assert!(tv < 1e-2, "tv = {}", tv);
        }
    }

    #[test]
    fn cubic_circuit_matches_refined_grid() {
        // one-mode position-diagonal circuit with a cubic gate: the grid
        // path at doubled resolution is the refinement oracle
        let model = diag_model();
        let mut gates = GateSequence::default();
        gates.push(Gate::shear(0.3, 0));
        gates.push(Gate::cubic(0.2, 0));
        gates.push(Gate::displacement(0.5, 0));
        let spec = CircuitSpec {
            model,
            n_modes: 1,
            gates,
            homodyne: HomodyneSpec::from_k(8),
            seed: 0,
        };
        let coarse = simulate_on_grid(&spec, 4096).unwrap();
        let fine = simulate_on_grid(&spec, 8192).unwrap();
        let tv = coarse[0].total_variation(&fine[0]);
        assert!(tv < 1e-3, "tv = {}", tv);
        // and the dispatcher picks the grid path for this circuit
        let dispatched = simulate_distribution(&spec).unwrap();
        assert!(dispatched[0].total_variation(&fine[0]) < 1e-3);
    }

    #[test]
    fn sampling_is_deterministic_and_respects_counts() {
        let spec = draw_circuit(&universal_model(), 1, 0, 4, 3);
        let a = sample(&spec, 50, 7).unwrap();
        let b = sample(&spec, 50, 7).unwrap();
        assert_eq!(a.len(), 50);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.bin, y.bin);
        }
        assert!(sample(&spec, 0, 7).unwrap().is_empty());
    }

    #[test]
    fn vacuum_sampling_within_multinomial_bands() {
        let spec = draw_circuit(&universal_model(), 1, 0, 4, 3);
        let dist = &simulate_distribution(&spec).unwrap()[0];
        let shots = 10_000u64;
        let records = sample(&spec, shots, 11).unwrap();
        let mut counts = std::collections::HashMap::new();
        for r in &records {
            *counts.entry(r.bin).or_insert(0u64) += 1;
        }
        for k in -dist.k_lim..=dist.k_lim {
            let p = dist.mass_of(k);
            let expected = shots as f64 * p;
            if expected < 5.0 {
                continue;
            }
            let sd = (shots as f64 * p * (1.0 - p)).sqrt();
            let got = *counts.get(&k).unwrap_or(&0) as f64;
            assert!(
                (got - expected).abs() <= 3.0 * sd,
                "bin {}: {} vs {} ± {}",
                k,
                got,
                expected,
                sd
            );
        }
    }

    #[test]
    fn squeezed_inputs_narrow_the_momentum_distribution() {
        let vac_spec = draw_circuit(&universal_model(), 1, 0, 8, 0);
        let sq_spec = draw_circuit(&diag_model(), 1, 0, 8, 0);
        let vac = &simulate_distribution(&vac_spec).unwrap()[0];
        let sq = &simulate_distribution(&sq_spec).unwrap()[0];
        // squeezed inputs concentrate more mass in the central bin
        assert!(sq.mass_of(0) > vac.mass_of(0));
    }
}
