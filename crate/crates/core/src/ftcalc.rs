//! Fault-tolerance accounting: state-quality budgets ε_m = ζ_m + 2^m·y,
//! erf tail probabilities for the shift-error correction rounds, threshold
//! inequalities for the universal and position-diagonal (CVIQP) models, and
//! the minimal-iteration search.
//!
//! erf-argument convention: the reference expressions write the success
//! probability as erf((√π/2 − ε)/σ) with no 1/√2 in the argument. A strict
//! N(0, σ²) two-sided tail would read erf((√π/2 − ε)/(σ√2)). Both are
//! computed throughout — the literal form as the primary value, the strict
//! Gaussian tail alongside — because the choice shifts the minimal m by
//! about one unit.

use libm::erf;
use serde::Serialize;
use thiserror::Error;

use crate::comb::{self, sigma_of_m};
use crate::kerrplan;
use crate::symplectic::SQRT_PI;

#[derive(Debug, Error, PartialEq)]
pub enum FtError {
    #[error("budget exhausted: epsilon_m = {epsilon_m:.4} >= sqrt(pi)/2")]
    BudgetExhausted { epsilon_m: f64 },
    #[error("no m <= {0} satisfies the threshold inequality")]
    Infeasible(u32),
}

/// Distance ζ_m = √(1 − overlap²) between the m-th binomial comb and its
/// closest Gaussian-envelope grid state.
pub fn zeta(m: u32) -> f64 {
    let overlap = comb::overlap_gaussian(m);
    (1.0 - overlap * overlap).max(0.0).sqrt()
}

/// Total state-quality budget ε_m = ζ_m + 2^m·y.
pub fn epsilon_m(m: u32, y: f64) -> f64 {
    zeta(m) + 2f64.powi(m as i32) * y
}

/// Success probability erf((√π/2 − ε_m)/σ_m) of one correction round with
/// perfectly implemented gates (the literal printed form).
pub fn p_succ(m: u32, y: f64) -> Result<f64, FtError> {
    let eps = epsilon_m(m, y);
    if eps >= SQRT_PI / 2.0 {
        return Err(FtError::BudgetExhausted { epsilon_m: eps });
    }
    Ok(erf((SQRT_PI / 2.0 - eps) / sigma_of_m(m).sigma))
}

/// Same with the strict N(0, σ²) tail (√2 in the argument).
pub fn p_succ_gauss_tail(m: u32, y: f64) -> Result<f64, FtError> {
    let eps = epsilon_m(m, y);
    if eps >= SQRT_PI / 2.0 {
        return Err(FtError::BudgetExhausted { epsilon_m: eps });
    }
    Ok(erf(
        (SQRT_PI / 2.0 - eps) / (sigma_of_m(m).sigma * std::f64::consts::SQRT_2),
    ))
}

/// Tail probability χ(σ, δ) = Pr(|shift| > √π/2 − δ) for a width-σ
/// syndrome, in the literal erf convention: 1 − erf((√π/2 − δ)/σ),
/// clamped to [0, 1].
pub fn chi(sigma: f64, delta: f64) -> f64 {
    assert!(sigma > 0.0);
    (1.0 - erf((SQRT_PI / 2.0 - delta) / sigma)).clamp(0.0, 1.0)
}

/// χ with the strict Gaussian-tail convention.
pub fn chi_gauss_tail(sigma: f64, delta: f64) -> f64 {
    assert!(sigma > 0.0);
    (1.0 - erf((SQRT_PI / 2.0 - delta) / (sigma * std::f64::consts::SQRT_2))).clamp(0.0, 1.0)
}

/// Complete budget for one two-round correction cycle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FTBudget {
    pub m: u32,
    pub y: f64,
    pub zeta_m: f64,
    pub epsilon_m: f64,
    pub sigma_m: f64,
    pub epsilon_q: f64,
    pub epsilon_p: f64,
    pub epsilon_th: f64,
}

impl FTBudget {
    pub fn new(m: u32, y: f64, epsilon_q: f64, epsilon_p: f64, epsilon_th: f64) -> Self {
        Self {
            m,
            y,
            zeta_m: zeta(m),
            epsilon_m: epsilon_m(m, y),
            sigma_m: sigma_of_m(m).sigma,
            epsilon_q,
            epsilon_p,
            epsilon_th,
        }
    }

    /// Two-round failure probability
    /// 1 − (1 − χ(σ, ε_q + 2ε_m))·(1 − χ(σ, ε_p + 2ε_m)); gadget budgets
    /// enter thresholds only through ε + 2ε_m.
    pub fn failure_probability(&self) -> f64 {
        let f1 = chi(self.sigma_m, self.epsilon_q + 2.0 * self.epsilon_m);
        let f2 = chi(self.sigma_m, self.epsilon_p + 2.0 * self.epsilon_m);
        1.0 - (1.0 - f1) * (1.0 - f2)
    }
}

/// The printed threshold inequality: total two-round failure below ε_th.
pub fn threshold_ok(budget: &FTBudget) -> bool {
    budget.failure_probability() < budget.epsilon_th
}

fn cviqp_failure(m: u32, y: f64, chi_fn: fn(f64, f64) -> f64) -> f64 {
    let sigma = sigma_of_m(m).sigma;
    let eps = epsilon_m(m, y);
    let f1 = chi_fn(2f64.sqrt() * sigma, 2.0 * eps);
    let f2 = chi_fn(5f64.sqrt() * sigma, 2.0 * eps);
    1.0 - (1.0 - f1) * (1.0 - f2)
}

/// Result of the minimal-m search for the position-diagonal model with its
/// teleported Fourier: 1 − (1 − χ(√2σ, 2ε_m))(1 − χ(√5σ, 2ε_m)) < ε_th.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CviqpSearch {
    pub m_min: u32,
    pub epsilon_m: f64,
    /// Largest y keeping the inequality satisfied at m_min.
    pub max_y_at_m: f64,
    /// Minimal m under the strict Gaussian-tail convention, usually
    /// m_min + 2; the printed result sits between the two.
    pub m_min_gauss_tail: Option<u32>,
}

const M_SEARCH_CAP: u32 = 20;

/// Smallest m satisfying the teleported-Fourier threshold inequality, plus
/// the largest admissible y at that m (by bisection).
pub fn cviqp_minimal_m(epsilon_th: f64, y: f64) -> Result<CviqpSearch, FtError> {
    assert!(epsilon_th > 0.0 && epsilon_th < 1.0);
    let m_min = (1..=M_SEARCH_CAP)
        .find(|&m| cviqp_failure(m, y, chi) < epsilon_th)
        .ok_or(FtError::Infeasible(M_SEARCH_CAP))?;
    let m_min_gauss_tail = (1..=M_SEARCH_CAP).find(|&m| cviqp_failure(m, y, chi_gauss_tail) < epsilon_th);

    // failure grows with y, so bisect for the boundary
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    if cviqp_failure(m_min, hi, chi) < epsilon_th {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cviqp_failure(m_min, mid, chi) < epsilon_th {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    Ok(CviqpSearch {
        m_min,
        epsilon_m: epsilon_m(m_min, y),
        max_y_at_m: lo,
        m_min_gauss_tail,
    })
}

/// Largest y keeping the inequality satisfied at a given m (literal
/// convention), or 0 when even y = 0 fails.
pub fn cviqp_max_y(m: u32, epsilon_th: f64) -> f64 {
    if cviqp_failure(m, 0.0, chi) >= epsilon_th {
        return 0.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    if cviqp_failure(m, hi, chi) < epsilon_th {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cviqp_failure(m, mid, chi) < epsilon_th {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Which circuit family a parameter table is for.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Model {
    Universal,
    Cviqp,
}

/// One derived gate parameter with its published counterpart, when one
/// exists. `matches` uses one unit in the printed value's last digit.
#[derive(Clone, Debug, Serialize)]
pub struct ParameterRow {
    pub quantity: String,
    pub derived: f64,
    pub reference: Option<f64>,
    pub tolerance: Option<f64>,
    pub matches: Option<bool>,
}

fn row(quantity: &str, derived: f64, reference: Option<(f64, f64)>) -> ParameterRow {
    let (reference, tolerance) = match reference {
        Some((v, t)) => (Some(v), Some(t)),
        None => (None, None),
    };
    let matches = reference
        .zip(tolerance)
        .map(|(v, t)| (derived - v).abs() <= t);
    ParameterRow {
        quantity: quantity.to_string(),
        derived,
        reference,
        tolerance,
        matches,
    }
}

/// Gate parameters that define the model at quality (m, y): the cat
/// displacement, the cat-squeezer shears, the beamsplitter block, and the
/// cross-Kerr decomposition angles — each flagged against the published
/// value where one is printed (m = 1, y = 0.1 universal; m = 6, y = 10⁻³
/// position-diagonal).
pub fn gate_parameter_table(model: Model, m: u32, y: f64) -> Vec<ParameterRow> {
    let sigma = sigma_of_m(m).sigma;
    // squeeze factor mapping the vacuum position width 1/√2 onto σ
    let squeeze = std::f64::consts::SQRT_2 * sigma;
    let shear1 = 0.5 * squeeze;
    let shear2 = 0.5 / squeeze;
    let plan = kerrplan::plan(y).expect("valid budget");
    let angles = plan.derived_angles;
    let (b1, _, _) = crate::symplectic::beamsplitter_block_params(0.5).expect("R in range");

    let printed = |universal: Option<(f64, f64)>, cviqp: Option<(f64, f64)>| match model {
        Model::Universal => {
            if m == 1 && (y - 0.1).abs() < 1e-12 {
                universal
            } else {
                None
            }
        }
        Model::Cviqp => {
            if m == 6 && (y - 1e-3).abs() < 1e-12 {
                cviqp
            } else {
                None
            }
        }
    };

    vec![
        row(
            "displacement",
            comb::displacement_alpha(m, sigma),
            printed(Some((5.6, 0.1)), Some((142.0, 1.0))),
        ),
        row(
            "shear_1",
            shear1,
            printed(Some((0.73, 0.01)), Some((0.28, 0.01))),
        ),
        row(
            "shear_2",
            shear2,
            printed(Some((1.1, 0.1)), Some((0.89, 0.01))),
        ),
        row(
            "beamsplitter_b1",
            b1,
            printed(Some((0.35, 0.01)), Some((0.35, 0.01))),
        ),
        row(
            "kerr_cz",
            angles.cz_small,
            printed(Some((0.011, 0.001)), Some((1.6e-6, 1e-7))),
        ),
        row(
            "kerr_cubic_small",
            angles.cubic_small,
            printed(Some((0.011, 0.001)), Some((1.6e-6, 1e-7))),
        ),
        row(
            "kerr_cubic_big",
            angles.cubic_big,
            printed(Some((0.086, 0.001)), Some((1.3e-3, 1e-4))),
        ),
    ]
}

/// Success probability against gate precision, both erf conventions.
pub fn psucc_curve(m: u32, y_values: &[f64]) -> Vec<(f64, f64, f64)> {
    y_values
        .iter()
        .map(|&y| {
            let literal = p_succ(m, y).unwrap_or(0.0);
            let tail = p_succ_gauss_tail(m, y).unwrap_or(0.0);
            (y, literal, tail)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values_match_reference() {
        // ζ₁ ≤ √(1 − 0.9976²) ≈ 0.069
        assert!((zeta(1) - 0.069).abs() < 0.005, "zeta_1 = {}", zeta(1));
        // ζ₆ ≈ 3·10⁻³
        assert!((zeta(6) - 3e-3).abs() < 1e-3, "zeta_6 = {}", zeta(6));
        // monotone decreasing
        for m in 1..8 {
            assert!(zeta(m + 1) < zeta(m));
        }
    }

    #[test]
    fn p_succ_reference_point() {
        let p = p_succ(1, 0.1).unwrap();
        assert!((p - 0.97).abs() < 0.01, "p = {}", p);
    }

    #[test]
    fn p_succ_noiseless_formula() {
        // y = 0, m = 4: erf((√π/2 − ζ₄)/σ₄) by direct evaluation
        let p = p_succ(4, 0.0).unwrap();
        let want = erf((SQRT_PI / 2.0 - zeta(4)) / sigma_of_m(4).sigma);
        assert_eq!(p, want);
    }

    #[test]
    fn p_succ_budget_exhaustion() {
        // 2y ≥ √π/2 at m = 1 leaves nothing
        assert!(matches!(
            p_succ(1, 0.5),
            Err(FtError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn p_succ_approaches_pure_erf_as_zeta_vanishes() {
        // with ζ → 0 and y = 0 the expression reduces to erf(√π/(2σ));
        // at large m, ζ_m is already ~0
        let m = 12;
        let p = p_succ(m, 0.0).unwrap();
        let want = erf(SQRT_PI / (2.0 * sigma_of_m(m).sigma));
        assert!((p - want).abs() < 1e-9);
    }

    #[test]
    fn chi_limits() {
        assert_eq!(chi(0.3, SQRT_PI / 2.0), 1.0);
        // σ → 0 with δ < √π/2 drives the tail to 0
        assert!(chi(1e-6, 0.3) < 1e-300);
        assert!(chi(1e-3, 0.0) < 1e-12);
    }

    #[test]
    fn chi_monotonicity_grids() {
        let sigmas = [0.05, 0.1, 0.2, 0.4, 0.8];
        let deltas = [0.0, 0.2, 0.4, 0.6, 0.8];
        for &s in &sigmas {
            for w in deltas.windows(2) {
                assert!(chi(s, w[1]) >= chi(s, w[0]));
            }
        }
        for &d in &deltas {
            for w in sigmas.windows(2) {
                assert!(chi(w[1], d) >= chi(w[0], d));
            }
        }
    }

    #[test]
    fn p_succ_monotonicity_grids() {
        for m in 1..=4u32 {
            let mut prev = f64::INFINITY;
            for i in 0..20 {
                let y = i as f64 * 0.01;
                let p = p_succ(m, y).unwrap_or(0.0);
                assert!(p <= prev + 1e-15, "m = {} y = {}", m, y);
                prev = p;
            }
        }
    }

    #[test]
    fn threshold_trivially_met_at_unit_epsilon() {
        let b = FTBudget::new(3, 0.01, 0.05, 0.05, 1.0);
        assert!(threshold_ok(&b));
    }

    #[test]
    fn threshold_failure_probability_structure() {
        // ε_q = ε_p = 0: failure = 1 − (1 − χ)² with χ at 2ε_m
        let b = FTBudget::new(1, 0.1, 0.0, 0.0, 0.05);
        let x = chi(b.sigma_m, 2.0 * b.epsilon_m);
        assert!((b.failure_probability() - (1.0 - (1.0 - x) * (1.0 - x))).abs() < 1e-15);
    }

    #[test]
    fn threshold_sharp_sigma_limit() {
        // tiny σ_m (large m) at fixed small budgets: failure → 0
        let b = FTBudget::new(14, 0.0, 0.01, 0.01, 1e-9);
        assert!(threshold_ok(&b));
    }

    #[test]
    fn cviqp_search_reference_point() {
        // printed result: m = 6 at ε_th = 10⁻⁶, y = 10⁻³; the literal erf
        // convention admits m = 5 and the strict tail requires m = 7 — the
        // printed value sits between the conventions, within ±1
        let s = cviqp_minimal_m(1e-6, 1e-3).unwrap();
        assert!(
            (s.m_min as i32 - 6).abs() <= 1,
            "m_min = {} (literal)",
            s.m_min
        );
        let tail = s.m_min_gauss_tail.unwrap();
        assert!((tail as i32 - 6).abs() <= 1, "m_min = {} (tail)", tail);
        assert!(s.m_min <= tail);
    }

    #[test]
    fn cviqp_loose_threshold_needs_one_round() {
        let s = cviqp_minimal_m(0.5, 0.0).unwrap();
        assert_eq!(s.m_min, 1);
    }

    #[test]
    fn cviqp_max_y_at_reference_m() {
        // at m = 6 the admissible y stays within a factor 3 of the printed
        // 10⁻³ bound under either convention
        let max_y = cviqp_max_y(6, 1e-6);
        assert!(max_y > 1e-3 / 3.0 && max_y < 3e-3, "max_y = {}", max_y);
    }

    #[test]
    fn cviqp_epsilon6_bound_both_conventions() {
        // the printed ε₆ ≈ 0.05 bound follows from the strict-tail reading;
        // the literal convention permits a larger budget
        let x_literal = {
            // solve χ(√5σ₆, 2ε) threshold: find ε where failure = 1e-6
            let sigma = sigma_of_m(6).sigma;
            let mut lo = 0.0;
            let mut hi = SQRT_PI / 2.0;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fail = 1.0
                    - (1.0 - chi(2f64.sqrt() * sigma, 2.0 * mid))
                        * (1.0 - chi(5f64.sqrt() * sigma, 2.0 * mid));
                if fail < 1e-6 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let x_tail = {
            let sigma = sigma_of_m(6).sigma;
            let mut lo = 0.0;
            let mut hi = SQRT_PI / 2.0;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fail = 1.0
                    - (1.0 - chi_gauss_tail(2f64.sqrt() * sigma, 2.0 * mid))
                        * (1.0 - chi_gauss_tail(5f64.sqrt() * sigma, 2.0 * mid));
                if fail < 1e-6 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        assert!((x_tail - 0.057).abs() < 0.01, "tail bound = {}", x_tail);
        assert!(x_literal > 0.15, "literal bound = {}", x_literal);
    }

    #[test]
    fn universal_table_reference_points() {
        let table = gate_parameter_table(Model::Universal, 1, 0.1);
        let find = |name: &str| table.iter().find(|r| r.quantity == name).unwrap().clone();

        // displacement: derived 4.44 vs printed 5.6 — flagged mismatch
        let d = find("displacement");
        assert!((d.derived - 4.443).abs() < 1e-3);
        assert_eq!(d.matches, Some(false));

        // shears: derived 0.282/0.886 vs printed 0.73/1.1 — flagged mismatch
        let s1 = find("shear_1");
        assert!((s1.derived - 0.2821).abs() < 1e-4);
        assert_eq!(s1.matches, Some(false));

        // cross-Kerr angles match at printed rounding
        assert_eq!(find("kerr_cz").matches, Some(true));
        assert_eq!(find("kerr_cubic_small").matches, Some(true));
        assert_eq!(find("kerr_cubic_big").matches, Some(true));
        assert_eq!(find("beamsplitter_b1").matches, Some(true));
    }

    #[test]
    fn cviqp_table_reference_points() {
        let table = gate_parameter_table(Model::Cviqp, 6, 1e-3);
        let find = |name: &str| table.iter().find(|r| r.quantity == name).unwrap().clone();

        let d = find("displacement");
        assert!((d.derived - 142.0).abs() < 1.0, "derived = {}", d.derived);
        assert_eq!(d.matches, Some(true));

        assert_eq!(find("kerr_cz").matches, Some(true));
        assert_eq!(find("kerr_cubic_big").matches, Some(true));
    }

    #[test]
    fn psucc_curve_reference_value() {
        let curve = psucc_curve(1, &[0.05, 0.1, 0.2]);
        let at_01 = curve[1];
        assert!((at_01.1 - 0.971).abs() < 0.01);
        // strict tail lies below the literal value
        assert!(at_01.2 < at_01.1);
    }
}
