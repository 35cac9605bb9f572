//! Cross-Kerr compiler: lowers e^{iπn̂₁n̂₂} onto the elementary gate set
//! under a total precision budget y.
//!
//! Three nested stages progressively weaken the interaction:
//!
//! 1. concatenation — e^{iπn̂₁n̂₂} = (e^{iτn̂₁n̂₂})^p with τ = π/p;
//! 2. splitting — each step is split into nine factors over the quartic
//!    operators O₁…O₄ by the doubled second-order formula, error O(τ³);
//! 3. rescaling — each factor e^{iθp̂₁²p̂₂²/4} becomes a nested-commutator
//!    product of CZ and cubic gates via p̂₁²p̂₂² = −(1/9)[p̂₂³,[p̂₁³,q̂₁q̂₂]],
//!    with integers k, l controlling the residual error.
//!
//! Counting follows the dominant-term bookkeeping: the abstract factor count
//! per rescaled block is [2(4l²+1)]·k³, and Fourier conjugations are tallied
//! separately when a plan is materialized into concrete gates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

use crate::symplectic::{Gate, GateSequence};

#[derive(Debug, Error, PartialEq)]
pub enum KerrError {
    #[error("precision budget must lie in (0, π), got {0}")]
    OutOfRange(f64),
    #[error("materialized count {count} exceeds cap {cap}")]
    TooLarge { count: u64, cap: u64 },
}

/// Gate angles a plan derives for the rescaled blocks: the CZ and cubic
/// angles t/(k·l) and the cubic angle t/k, with t = (τ/36)^{1/3}.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DerivedAngles {
    pub cz_small: f64,
    pub cubic_small: f64,
    pub cubic_big: f64,
}

/// A precision-budgeted compilation record for e^{iπn̂₁n̂₂}.
///
/// `p`, `k`, `l` are ceiled to integers so the plan is executable; the raw
/// real-valued quantities they were ceiled from are kept alongside. `tau` is
/// recomputed from the rounded `p`, while `tau_raw` = √(y/π) is the analytic
/// value; derived angles use `tau_raw`, which is what reproduces the
/// published gate-parameter tables at printed rounding (angles for the
/// rounded τ are available via [`derived_angles`]).
#[derive(Clone, Debug, Serialize)]
pub struct KerrPlan {
    pub y: f64,
    pub p: u64,
    pub p_raw: f64,
    pub tau: f64,
    pub tau_raw: f64,
    pub k: u64,
    pub k_raw: f64,
    pub l: u64,
    pub l_raw: f64,
    pub per_block_count: u64,
    pub total_count: u64,
    pub derived_angles: DerivedAngles,
}

/// Angles of the rescaled block for a given per-factor strength τ.
pub fn derived_angles(tau: f64, k: u64, l: u64) -> DerivedAngles {
    let t = (tau / 36.0).cbrt();
    DerivedAngles {
        cz_small: t / (k as f64 * l as f64),
        cubic_small: t / (k as f64 * l as f64),
        cubic_big: t / k as f64,
    }
}

/// Abstract factor count [2(4l²+1)]·k³ of one rescaled block.
pub fn per_block_count(k: u64, l: u64) -> u64 {
    2 * (4 * l * l + 1) * k * k * k
}

/// Build the full plan for a target precision y ∈ (0, π):
/// p = ⌈π^{3/2}/√y⌉, k = ⌈9^{−1/3}4^{−4/3}(y/π)^{−5/6}⌉, l = ⌈(π/y)/4⌉.
pub fn plan(y: f64) -> Result<KerrPlan, KerrError> {
    if !(y > 0.0 && y < PI) || !y.is_finite() {
        return Err(KerrError::OutOfRange(y));
    }
    let p_raw = PI.powf(1.5) / y.sqrt();
    let p = p_raw.ceil() as u64;
    let tau = PI / p as f64;
    let tau_raw = (y / PI).sqrt();

    let k_raw = 9f64.powf(-1.0 / 3.0) * 4f64.powf(-4.0 / 3.0) * (y / PI).powf(-5.0 / 6.0);
    let k = (k_raw.ceil() as u64).max(1);
    let l_raw = (PI / y) / 4.0;
    let l = (l_raw.ceil() as u64).max(1);

    let per_block = per_block_count(k, l);
    Ok(KerrPlan {
        y,
        p,
        p_raw,
        tau,
        tau_raw,
        k,
        k_raw,
        l,
        l_raw,
        per_block_count: per_block,
        total_count: 9 * per_block * p,
        derived_angles: derived_angles(tau_raw, k, l),
    })
}

/// The four quartic splitting operators, O₁ = q̂₁²q̂₂²/4 through
/// O₄ = p̂₁²p̂₂²/4.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SplitTag {
    O1,
    O2,
    O3,
    O4,
}

/// One factor e^{i·strength·O_tag} of the second-order splitting.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SplitFactor {
    pub tag: SplitTag,
    pub strength: f64,
}

/// The nine-factor doubled second-order splitting of e^{iτ(O₁+O₂+O₃+O₄)}:
/// (O₁,τ/4)(O₂,τ/2)(O₁,τ/4)(O₃,τ/2)(O₄,τ)(O₃,τ/2)(O₁,τ/4)(O₂,τ/2)(O₁,τ/4).
pub fn splitting_sequence(tau: f64) -> Result<Vec<SplitFactor>, KerrError> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(KerrError::OutOfRange(tau));
    }
    use SplitTag::*;
    let f = |tag, strength| SplitFactor { tag, strength };
    Ok(vec![
        f(O1, tau / 4.0),
        f(O2, tau / 2.0),
        f(O1, tau / 4.0),
        f(O3, tau / 2.0),
        f(O4, tau),
        f(O3, tau / 2.0),
        f(O1, tau / 4.0),
        f(O2, tau / 2.0),
        f(O1, tau / 4.0),
    ])
}

/// The three abstract operators of the nested-commutator identity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NestedTag {
    A,
    B,
    C,
}

/// One factor e^{i·angle·X_tag} of the nested-commutator product.
#[derive(Clone, Copy, Debug)]
pub struct NestedFactor {
    pub tag: NestedTag,
    pub angle: f64,
}

/// Factors of e^{iτ′[B̂,[Ĉ,Â]]} in operator order (leftmost factor first):
/// ( B₊ (A₊C₊A₋C₋)^{l²} B₋ (C₊A₊C₋A₋)^{l²} )^{k³}, with angles t/k on B and
/// t/(kl) on A and C, t = τ′^{1/3}. The factor count is exactly
/// [2(4l²+1)]·k³.
///
/// This is the group-commutator form: with G = A₊C₊A₋C₋ ≈ e^{(t/kl)²[C,A]},
/// the second parenthesis is G⁻¹ and each k-repetition is the commutator of
/// e^{iBt/k} with G^{l²}. A transcription that instead repeats the first
/// parenthesis with all signs flipped fails at leading order (both groups
/// then approximate the same exponential), which the matrix oracle below
/// detects; the inverse-group form is what the two-stage rescaling
/// derivation actually produces.
pub fn nested_factors(tau_prime: f64, k: u64, l: u64) -> Vec<NestedFactor> {
    assert!(k >= 1 && l >= 1, "rescaling integers must be >= 1");
    let t = tau_prime.cbrt();
    let big = t / k as f64;
    let small = t / (k as f64 * l as f64);
    use NestedTag::*;
    let f = |tag, angle| NestedFactor { tag, angle };

    let mut rep = Vec::with_capacity(2 + 8 * (l * l) as usize);
    rep.push(f(B, big));
    for _ in 0..l * l {
        rep.push(f(A, small));
        rep.push(f(C, small));
        rep.push(f(A, -small));
        rep.push(f(C, -small));
    }
    rep.push(f(B, -big));
    for _ in 0..l * l {
        rep.push(f(C, small));
        rep.push(f(A, small));
        rep.push(f(C, -small));
        rep.push(f(A, -small));
    }

    let mut out = Vec::with_capacity(rep.len() * (k * k * k) as usize);
    for _ in 0..k * k * k {
        out.extend_from_slice(&rep);
    }
    out
}

/// Realize one nested factor as concrete gates in application order, for the
/// cross-Kerr identification Â = q̂₁q̂₂, B̂ = p̂₂³, Ĉ = p̂₁³ on modes
/// (m1, m2). Cubic gates in p̂ are conjugated through p̂³ = F̂q̂³F̂†.
fn realize_nested_factor(factor: &NestedFactor, m1: usize, m2: usize) -> Vec<Gate> {
    match factor.tag {
        NestedTag::A => vec![Gate::cz(factor.angle, m1, m2)],
        NestedTag::B => vec![
            Gate::fourier_inverse(m2),
            Gate::cubic(factor.angle, m2),
            Gate::fourier(m2),
        ],
        NestedTag::C => vec![
            Gate::fourier_inverse(m1),
            Gate::cubic(factor.angle, m1),
            Gate::fourier(m1),
        ],
    }
}

/// Concrete gate block implementing e^{iθp̂₁²p̂₂²/4} on modes (m1, m2),
/// i.e. the nested product at τ′ = −θ/36, in application order.
pub fn p2p2_block(theta: f64, k: u64, l: u64, m1: usize, m2: usize) -> GateSequence {
    let factors = nested_factors(-theta / 36.0, k, l);
    let mut gates = Vec::new();
    // operator order → application order is reversed
    for factor in factors.iter().rev() {
        gates.extend(realize_nested_factor(factor, m1, m2));
    }
    GateSequence::new(gates)
}

/// Gate count of the materialization of one plan: per concatenation step the
/// nine rescaled blocks cost (16l²+6)k³ gates each plus 24 Fourier
/// conjugation gates for the O₁/O₂/O₃ wraps, and the run ends with the two
/// accumulated inverse Fourier gates.
pub fn materialized_count(p: u64, k: u64, l: u64) -> u64 {
    let block = (16 * l * l + 6) * k * k * k;
    p * (9 * block + 24) + 2
}

/// Gate-count report for a budget y: the closed-form totals (with raw and
/// with ceiled p, k, l), the materialized total, and the two asymptotic
/// scalings y⁻⁵π^{3/2}/(2·4⁴) (the published figure, "a thousand gates" at
/// y = 0.1) and y⁻⁵π⁶/(2·4⁴) (what the count algebra actually yields). The
/// two differ by π^{9/2}; both are reported and the mismatch is flagged.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub plan: KerrPlan,
    pub exact_total_real: f64,
    pub exact_total_ceiled: u64,
    pub materialized_total: u64,
    pub asymptotic_reference: f64,
    pub asymptotic_derived: f64,
    pub asymptotic_mismatch_factor: f64,
    pub discrepancy: bool,
    pub note: String,
}

pub fn count_report(y: f64) -> Result<CountReport, KerrError> {
    let plan = plan(y)?;
    let block_real = 2.0 * (4.0 * plan.l_raw * plan.l_raw + 1.0) * plan.k_raw.powi(3);
    let exact_total_real = 9.0 * block_real * plan.p_raw;
    let exact_total_ceiled = plan.total_count;
    let materialized_total = materialized_count(plan.p, plan.k, plan.l);

    let asymptotic_reference = y.powi(-5) * PI.powf(1.5) / (2.0 * 256.0);
    let asymptotic_derived = y.powi(-5) * PI.powi(6) / (2.0 * 256.0);
    Ok(CountReport {
        plan,
        exact_total_real,
        exact_total_ceiled,
        materialized_total,
        asymptotic_reference,
        asymptotic_derived,
        asymptotic_mismatch_factor: PI.powf(4.5),
        discrepancy: true,
        note: "reference asymptotic gate count (pi^{3/2} prefactor) disagrees with the \
               count algebra (pi^6 prefactor) by a factor pi^{9/2}; both totals reported"
            .to_string(),
    })
}

/// Materialize a plan into elementary gates (A₁ members plus Fourier and its
/// inverse) on modes (0, 1), in application order. Refuses plans whose
/// projected count exceeds `cap`; realistic budgets easily reach 10⁶+ gates,
/// so counting is the default workflow and full materialization is opt-in.
pub fn materialize(plan: &KerrPlan, cap: u64) -> Result<GateSequence, KerrError> {
    let count = materialized_count(plan.p, plan.k, plan.l);
    if count > cap {
        return Err(KerrError::TooLarge { count, cap });
    }
    let (m1, m2) = (0usize, 1usize);
    let mut gates = Vec::with_capacity(count as usize);
    // rightmost operator factor of e^{iπ(ΣO)}·F₁†F₂† applies first
    gates.push(Gate::fourier_inverse(m1));
    gates.push(Gate::fourier_inverse(m2));
    let factors = splitting_sequence(plan.tau).expect("plan tau is in (0,1)");
    for _ in 0..plan.p {
        for factor in &factors {
            let core = p2p2_block(factor.strength, plan.k, plan.l, m1, m2);
            match factor.tag {
                SplitTag::O4 => gates.extend(core.gates),
                SplitTag::O3 => {
                    // p̂₁²q̂₂²: conjugate mode 2
                    gates.push(Gate::fourier(m2));
                    gates.extend(core.gates);
                    gates.push(Gate::fourier_inverse(m2));
                }
                SplitTag::O2 => {
                    // q̂₁²p̂₂²: conjugate mode 1
                    gates.push(Gate::fourier(m1));
                    gates.extend(core.gates);
                    gates.push(Gate::fourier_inverse(m1));
                }
                SplitTag::O1 => {
                    gates.push(Gate::fourier(m1));
                    gates.push(Gate::fourier(m2));
                    gates.extend(core.gates);
                    gates.push(Gate::fourier_inverse(m1));
                    gates.push(Gate::fourier_inverse(m2));
                }
            }
        }
    }
    Ok(GateSequence::new(gates))
}

// ---------------------------------------------------------------------------
// Numerical verification of the identities on random Hermitian generators.
// ---------------------------------------------------------------------------

/// Random Hermitian dim×dim matrix: entries drawn uniformly from [−1, 1]
/// (real and imaginary parts) with a seeded ChaCha20 stream, symmetrized as
/// (M + M†)/2, then rescaled to spectral norm 1/2 so residual bounds do not
/// depend on the draw.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha20Rng) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let norm = spectral_norm(&h);
    h * Complex64::new(0.5 / norm, 0.0)
}

/// Matrix exponential by scaling-and-squaring with a Taylor core.
pub fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = m.nrows();
    let norm: f64 = m.iter().map(|c| c.norm()).fold(0.0, f64::max) * dim as f64;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / Complex64::new(2f64.powi(s as i32), 0.0);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    let mut out = sum;
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

/// Spectral norm via power iteration on D†D.
pub fn spectral_norm(d: &DMatrix<Complex64>) -> f64 {
    let g = d.adjoint() * d;
    let dim = g.nrows();
    let mut v = DMatrix::from_fn(dim, 1, |i, _| Complex64::new(1.0 + i as f64, 0.0));
    let mut lambda = 0.0;
    for _ in 0..60 {
        let w = &g * &v;
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        lambda = n;
        v = w / Complex64::new(n, 0.0);
    }
    lambda.sqrt()
}

fn exp_i(h: &DMatrix<Complex64>, angle: f64) -> DMatrix<Complex64> {
    expm(&(h * Complex64::new(0.0, angle)))
}

/// Least-squares slope of ln(y) against ln(x), for fitting error exponents.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Evaluate both sides of the nested-commutator identity on three seeded
/// random Hermitian matrices and return the spectral-norm difference.
/// The residual scales as O(τ′^{4/3}/k) + O(τ′/l).
pub fn verify_rescaling(tau_prime: f64, k: u64, l: u64, dim: usize, seed: u64) -> f64 {
    assert!(dim <= 8, "verification is meant for small dimensions");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let a = random_hermitian(dim, &mut rng);
    let b = random_hermitian(dim, &mut rng);
    let c = random_hermitian(dim, &mut rng);

    let inner = &c * &a - &a * &c;
    let nested = &b * &inner - &inner * &b;
    let lhs = expm(&(nested * Complex64::new(0.0, tau_prime)));

    let dimn = dim;
    let mut rhs = DMatrix::<Complex64>::identity(dimn, dimn);
    for factor in nested_factors(tau_prime, k, l) {
        let h = match factor.tag {
            NestedTag::A => &a,
            NestedTag::B => &b,
            NestedTag::C => &c,
        };
        rhs *= exp_i(h, factor.angle);
    }
    spectral_norm(&(lhs - rhs))
}

/// Evaluate the nine-factor splitting against e^{iτ(O₁+O₂+O₃+O₄)} on four
/// seeded random Hermitian generators; the residual scales as O(τ³).
pub fn verify_splitting(tau: f64, dim: usize, seed: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let ops: Vec<DMatrix<Complex64>> = (0..4).map(|_| random_hermitian(dim, &mut rng)).collect();
    let sum = &ops[0] + &ops[1] + &ops[2] + &ops[3];
    let lhs = exp_i(&sum, tau);

    let mut rhs = DMatrix::<Complex64>::identity(dim, dim);
    for factor in splitting_sequence(tau).expect("tau in (0,1)") {
        let idx = match factor.tag {
            SplitTag::O1 => 0,
            SplitTag::O2 => 1,
            SplitTag::O3 => 2,
            SplitTag::O4 => 3,
        };
        rhs *= exp_i(&ops[idx], factor.strength);
    }
    spectral_norm(&(lhs - rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::GateKind;

    #[test]
    fn plan_reproduces_reference_budget() {
        // y = 0.1: raw values p = 17.61, k = 1.34, l = 7.85 before ceiling
        let plan = plan(0.1).unwrap();
        assert_eq!((plan.p, plan.k, plan.l), (18, 2, 8));
        assert!((plan.p_raw - 17.61).abs() < 0.01);
        assert!((plan.k_raw - 1.34).abs() < 0.01);
        assert!((plan.l_raw - 7.85).abs() < 0.01);
        assert!((plan.tau - 0.17453).abs() < 1e-5);
    }

    #[test]
    fn plan_tight_budget() {
        let plan = plan(1e-3).unwrap();
        assert_eq!((plan.p, plan.k, plan.l), (177, 63, 786));
    }

    #[test]
    fn plan_rejects_boundary() {
        assert!(matches!(plan(PI), Err(KerrError::OutOfRange(_))));
        assert!(matches!(plan(0.0), Err(KerrError::OutOfRange(_))));
        assert!(matches!(plan(-0.1), Err(KerrError::OutOfRange(_))));
    }

    #[test]
    fn splitting_sequence_shape() {
        let seq = splitting_sequence(0.1).unwrap();
        assert_eq!(seq.len(), 9);
        assert_eq!(seq[0].tag, SplitTag::O1);
        assert!((seq[0].strength - 0.025).abs() < 1e-15);
        // palindromic
        for (a, b) in seq.iter().zip(seq.iter().rev()) {
            assert_eq!(a.tag, b.tag);
            assert_eq!(a.strength, b.strength);
        }
        // per-tag strengths sum to tau exactly
        for tag in [SplitTag::O1, SplitTag::O2, SplitTag::O3, SplitTag::O4] {
            let total: f64 = seq
                .iter()
                .filter(|f| f.tag == tag)
                .map(|f| f.strength)
                .sum();
            assert_eq!(total, 0.1);
        }
    }

    #[test]
    fn nested_factor_count_matches_closed_form() {
        // direct enumeration equals [2(4l²+1)]k³
        for (k, l) in [(1, 1), (2, 8), (3, 2)] {
            let factors = nested_factors(0.01, k, l);
            assert_eq!(factors.len() as u64, per_block_count(k, l));
        }
        assert_eq!(per_block_count(2, 8), 4112);
    }

    #[test]
    fn nested_angles_vanish_at_zero_strength() {
        let factors = nested_factors(0.0, 1, 1);
        assert!(factors.iter().all(|f| f.angle == 0.0));
    }

    #[test]
    fn derived_angles_match_printed_table() {
        // y = 0.1 plan vs printed 0.011 / 0.086, at one unit in the last digit
        let plan = plan(0.1).unwrap();
        let a = plan.derived_angles;
        assert!((a.cz_small - 0.011).abs() < 1e-3, "cz_small = {}", a.cz_small);
        assert!((a.cubic_small - 0.011).abs() < 1e-3);
        assert!((a.cubic_big - 0.086).abs() < 1e-3, "cubic_big = {}", a.cubic_big);
        // sharper pins from direct evaluation of the formulas
        assert!((a.cz_small - 0.0106558).abs() < 1e-6);
        assert!((a.cubic_big - 0.0852467).abs() < 1e-6);
    }

    #[test]
    fn count_report_reproduces_both_totals() {
        let report = count_report(0.1).unwrap();
        // printed asymptotic: about a thousand gates at y = 0.1
        assert!((report.asymptotic_reference - 1.09e3).abs() < 0.01e3);
        // algebra-consistent totals: about 1.9e5
        assert!((report.exact_total_real - 1.9e5).abs() < 0.05e5);
        assert!((report.asymptotic_derived - 1.88e5).abs() < 0.02e5);
        assert_eq!(report.exact_total_ceiled, 9 * 4112 * 18);
        assert!(report.discrepancy);
        let factor = report.asymptotic_derived / report.asymptotic_reference;
        assert!((factor - PI.powf(4.5)).abs() < 1e-6);
    }

    #[test]
    fn materialize_rejects_realistic_plans_at_small_cap() {
        let plan = plan(0.1).unwrap();
        match materialize(&plan, 1000) {
            Err(KerrError::TooLarge { count, cap }) => {
                assert_eq!(cap, 1000);
                assert_eq!(count, materialized_count(18, 2, 8));
            }
            other => panic!("expected TooLarge, got {:?}", other.map(|s| s.len())),
        }
    }

    #[test]
    fn materialize_count_matches_closed_form() {
        // synthetic plan p = 1, k = 1, l = 1
        let mut small = plan(0.1).unwrap();
        small.p = 1;
        small.k = 1;
        small.l = 1;
        small.tau = 0.3;
        let seq = materialize(&small, 10_000).unwrap();
        assert_eq!(seq.len() as u64, materialized_count(1, 1, 1));

        small.p = 2;
        small.k = 2;
        small.l = 3;
        small.tau = 0.2;
        let seq = materialize(&small, 100_000).unwrap();
        assert_eq!(seq.len() as u64, materialized_count(2, 2, 3));
    }

    #[test]
    fn materialized_gates_stay_in_elementary_set() {
        let mut small = plan(0.1).unwrap();
        small.p = 1;
        small.k = 1;
        small.l = 2;
        small.tau = 0.3;
        let seq = materialize(&small, 10_000).unwrap();
        for gate in &seq.gates {
            assert!(matches!(
                gate.kind,
                GateKind::Displacement(_)
                    | GateKind::Shear(_)
                    | GateKind::Cubic(_)
                    | GateKind::CZ(_)
                    | GateKind::Fourier
                    | GateKind::FourierInverse
            ));
        }
    }

    #[test]
    fn rescaling_residual_vanishes_at_zero() {
        assert!(verify_rescaling(0.0, 2, 2, 4, 7) < 1e-12);
    }

    #[test]
    fn rescaling_residual_small_at_weak_strength() {
        // matrix-exponential oracle: fixed seed, dim 4
        let err = verify_rescaling(1e-2, 2, 2, 4, 11);
        assert!(err < 1e-3, "err = {}", err);
    }

    #[test]
    fn rescaling_error_scales_as_tau_to_four_thirds() {
        // k-dominated regime: k = 1, l large so the O(τ/l) term is negligible
        let taus = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];
        let points: Vec<(f64, f64)> = taus
            .iter()
            .map(|&t| (t, verify_rescaling(t, 1, 24, 4, 5)))
            .collect();
        let slope = loglog_slope(&points);
        assert!(
            (slope - 4.0 / 3.0).abs() < 0.2,
            "slope = {} points = {:?}",
            slope,
            points
        );
    }

    #[test]
    fn splitting_error_scales_as_tau_cubed() {
        let taus = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];
        let points: Vec<(f64, f64)> = taus
            .iter()
            .map(|&t| (t, verify_splitting(t, 4, 3)))
            .collect();
        let slope = loglog_slope(&points);
        assert!((slope - 3.0).abs() < 0.3, "slope = {} points = {:?}", slope, points);
    }

    #[test]
    fn expm_matches_scalar_exponential() {
        let m = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.0, 1.3)]);
        let e = expm(&m);
        assert!((e[(0, 0)] - Complex64::new(1.3f64.cos(), 1.3f64.sin())).norm() < 1e-14);
    }
}
