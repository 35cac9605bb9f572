//! Name-keyed emitters for the published tables and curve data. Each table
//! or curve is one strategy behind a common trait, registered by name and
//! selected at runtime, so adding a reproduction target means adding one
//! registry entry.
//!
//! Output is bit-stable CSV: fixed column order, 6-significant-digit
//! floats, '\n' line endings.

use cvqc::comb;
use cvqc::ftcalc::{self, Model};
use cvqc::symplectic::SQRT_PI;

use crate::report::sig6;

pub trait TableEmitter {
    fn name(&self) -> &'static str;
    fn emit(&self) -> String;
}

struct GkpBinomTable;

impl TableEmitter for GkpBinomTable {
    fn name(&self) -> &'static str {
        "gkp-binom"
    }

    /// The binomial-vs-Gaussian comparison rows for m = 1…4: squeezing
    /// equivalent, envelope overlap, and the success-probability
    /// coefficient of (ησ)^{2^m−1}.
    fn emit(&self) -> String {
        let mut out = String::from("m,squeezing_db,sigma,overlap,succ_coeff,succ_exponent\n");
        for m in 1..=4u32 {
            let sq = comb::sigma_of_m(m);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                m,
                sig6(sq.squeezing_db),
                sig6(sq.sigma),
                sig6(comb::overlap_gaussian(m)),
                sig6(comb::success_prob_coefficient(m)),
                2u64.pow(m) - 1,
            ));
        }
        out
    }
}

struct ParamsTable {
    model: Model,
}

impl TableEmitter for ParamsTable {
    fn name(&self) -> &'static str {
        match self.model {
            Model::Universal => "params-universal",
            Model::Cviqp => "params-cviqp",
        }
    }

    fn emit(&self) -> String {
        let (m, y) = match self.model {
            Model::Universal => (1, 0.1),
            Model::Cviqp => (6, 1e-3),
        };
        let mut out = String::from("quantity,derived,reference,matches\n");
        for row in ftcalc::gate_parameter_table(self.model, m, y) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.quantity,
                sig6(row.derived),
                row.reference.map(sig6).unwrap_or_default(),
                row.matches
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
            ));
        }
        out
    }
}

struct FidelityChainTable;

impl TableEmitter for FidelityChainTable {
    fn name(&self) -> &'static str {
        "fidelity-chain"
    }

    /// The ε_m = ζ_m + 2^m·y budget chain per iteration order.
    fn emit(&self) -> String {
        let mut out = String::from("m,y,zeta_m,gate_term,epsilon_m\n");
        for (m, y) in [(1u32, 0.1), (6, 1e-3)] {
            let z = ftcalc::zeta(m);
            let g = 2f64.powi(m as i32) * y;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                m,
                sig6(y),
                sig6(z),
                sig6(g),
                sig6(z + g)
            ));
        }
        out
    }
}

pub fn table_registry() -> Vec<Box<dyn TableEmitter>> {
    vec![
        Box::new(GkpBinomTable),
        Box::new(ParamsTable {
            model: Model::Universal,
        }),
        Box::new(ParamsTable { model: Model::Cviqp }),
        Box::new(FidelityChainTable),
    ]
}

pub fn emit_table(name: &str) -> Option<String> {
    table_registry()
        .iter()
        .find(|t| t.name() == name)
        .map(|t| t.emit())
}

pub trait CurveEmitter {
    fn name(&self) -> &'static str;
    fn emit(&self) -> String;
}

struct PsuccVsY;

impl CurveEmitter for PsuccVsY {
    fn name(&self) -> &'static str {
        "psucc-vs-y"
    }

    /// Success probability of one correction round against the gate
    /// precision y at m = 1, in both erf-argument conventions.
    fn emit(&self) -> String {
        let ys: Vec<f64> = (0..=150).map(|i| i as f64 * 0.002).collect();
        let mut out = String::from("y,p_succ,p_succ_gauss_tail\n");
        for (y, lit, tail) in ftcalc::psucc_curve(1, &ys) {
            out.push_str(&format!("{},{},{}\n", sig6(y), sig6(lit), sig6(tail)));
        }
        out
    }
}

struct GkpWavefunction;

impl CurveEmitter for GkpWavefunction {
    fn name(&self) -> &'static str {
        "gkp-wavefunction"
    }

    /// Position wavefunctions of the σ = δ = 0.25 grid states, both
    /// logical branches.
    fn emit(&self) -> String {
        let spec = comb::GKPSpec::symmetric(0.25);
        let zero = comb::gaussian_gkp_comb(&spec, 0);
        let one = comb::gaussian_gkp_comb(&spec, 1);
        let mut out = String::from("q,psi_zero,psi_one\n");
        let q_max = 6.0 * SQRT_PI;
        let steps = 1200;
        for i in 0..=steps {
            let q = -q_max + 2.0 * q_max * i as f64 / steps as f64;
            out.push_str(&format!(
                "{},{},{}\n",
                sig6(q),
                sig6(zero.amplitude(q).re),
                sig6(one.amplitude(q).re)
            ));
        }
        out
    }
}

pub fn curve_registry() -> Vec<Box<dyn CurveEmitter>> {
    vec![Box::new(PsuccVsY), Box::new(GkpWavefunction)]
}

pub fn emit_curve(name: &str) -> Option<String> {
    curve_registry()
        .iter()
        .find(|c| c.name() == name)
        .map(|c| c.emit())
}

pub fn known_tables() -> Vec<&'static str> {
    table_registry().iter().map(|t| t.name()).collect()
}

pub fn known_curves() -> Vec<&'static str> {
    curve_registry().iter().map(|c| c.name()).collect()
}
