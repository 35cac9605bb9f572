//! The `verify` command: a battery of independent-oracle checks across all
//! subsystems, each reduced to one named pass/fail line. Checks mirror the
//! heaviest invariants at a size that finishes in seconds; the full-depth
//! versions live in the test suites.

use cvqc::comb;
use cvqc::ftcalc;
use cvqc::gridsim::fock::cross_kerr_fock;
use cvqc::gridsim::{homodyne_bins, GridSpec, GridState, HomodyneSpec};
use cvqc::kerrplan;
use cvqc::sampler;
use cvqc::symplectic::{self, Gate, GateSequence};
use cvqc::weyl;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

pub fn run_battery(quick: bool) -> Vec<Check> {
    let mut out = Vec::new();

    // exact operator identities
    {
        let p = |m: usize| weyl::WeylPoly::p(m);
        let q = |m: usize| weyl::WeylPoly::q(m);
        let cube = |x: &weyl::WeylPoly| weyl::normal_product(&weyl::normal_product(x, x), x);
        let inner = weyl::commutator(&cube(&p(0)), &weyl::normal_product(&q(0), &q(1)));
        let nested = weyl::commutator(&cube(&p(1)), &inner);
        let want = weyl::normal_product(
            &weyl::normal_product(&p(0), &p(0)),
            &weyl::normal_product(&p(1), &p(1)),
        )
        .scale(&weyl::coeff(-9, 1));
        out.push(check(
            "weyl nested commutator",
            nested == want,
            "[p2^3,[p1^3,q1q2]] = -9 p1^2 p2^2".into(),
        ));

        let exp = weyl::expand_number_product();
        let quarter = weyl::WeylPoly::constant(weyl::coeff(1, 4));
        out.push(check(
            "weyl number-product constant",
            exp.difference == quarter,
            "n1n2 minus printed splitting equals 1/4 (global phase)".into(),
        ));
    }

    // exact Gaussian decompositions
    {
        let mut worst = 0.0f64;
        for i in 1..=20 {
            let s = i as f64 * 0.5;
            let m = symplectic::compose(&symplectic::decompose_squeeze(s).unwrap())
                .unwrap()
                .matrix;
            worst = worst.max((m[(0, 0)] - s).abs()).max((m[(1, 1)] - 1.0 / s).abs());
        }
        for i in 0..=20 {
            let r = i as f64 / 20.0;
            let m = symplectic::compose(&symplectic::decompose_beamsplitter(r).unwrap())
                .unwrap()
                .matrix;
            let t = symplectic::beamsplitter_target(r).matrix;
            worst = worst.max((m - t).amax());
        }
        out.push(check(
            "symplectic decompositions",
            worst < 1e-12,
            format!("max residual {:.2e}", worst),
        ));
    }

    // compiler plan and counts
    {
        let plan = kerrplan::plan(0.1).unwrap();
        let counts = kerrplan::count_report(0.1).unwrap();
        let ok = plan.p == 18
            && plan.k == 2
            && plan.l == 8
            && (counts.asymptotic_reference - 1.09e3).abs() < 0.01e3
            && (counts.exact_total_real - 1.9e5).abs() < 0.05e5
            && counts.discrepancy;
        out.push(check(
            "kerr plan at y = 0.1",
            ok,
            format!(
                "p={} k={} l={} ref~{:.3e} exact~{:.3e}",
                plan.p, plan.k, plan.l, counts.asymptotic_reference, counts.exact_total_real
            ),
        ));

        let err = kerrplan::verify_rescaling(1e-2, 2, 2, 4, 11);
        out.push(check(
            "nested rescaling residual",
            err < 1e-3,
            format!("dim 4, tau' = 1e-2, k = l = 2: {:.2e}", err),
        ));
    }

    // synthesis protocol exactness
    {
        let mut ok = true;
        for m in 1..=3u32 {
            let sigma = comb::sigma_of_m(m).sigma;
            let syn = comb::synthesize_gkp(m, sigma, 1e-3).unwrap();
            let closed = comb::success_prob_closed_form(m, sigma, 1e-3);
            ok &= ((syn.success_prob - closed) / closed).abs() < 1e-12;
            let n = 2u64.pow(m);
            ok &= syn
                .exact_weights
                .iter()
                .enumerate()
                .all(|(i, w)| *w == comb::binomial_big(n, i as u64));
        }
        out.push(check(
            "synthesis protocol exactness",
            ok,
            "binomial weights and closed-form probability, m <= 3".into(),
        ));

        let printed = [0.9976, 0.9986, 0.9997, 0.9999];
        let ok = (1..=4u32).all(|m| (comb::overlap_gaussian(m) - printed[m as usize - 1]).abs() < 2e-3);
        out.push(check(
            "envelope overlap table",
            ok,
            "m = 1..4 within 2e-3 of reference".into(),
        ));
    }

    // Fock cross-Kerr identity
    {
        let kerr = cross_kerr_fock(2.0, 2.0, 40).unwrap();
        out.push(check(
            "fock cross-kerr cat identity",
            kerr.fidelity >= 1.0 - 1e-8 && kerr.sign_error_prob <= kerr.overlap_bound,
            format!(
                "fidelity {:.10}, sign error {:.2e} <= {:.2e}",
                kerr.fidelity, kerr.sign_error_prob, kerr.overlap_bound
            ),
        ));
    }

    // grid oracles
    {
        let spec = GridSpec::self_dual(if quick { 512 } else { 2048 });
        let mut s = GridState::gaussian(spec, 0.8, 0.9, -0.5);
        let orig = s.clone();
        for _ in 0..4 {
            s.apply_fourier(0).unwrap();
        }
        let fid = s.fidelity(&orig);
        out.push(check(
            "fourier fourth power",
            fid > 1.0 - 1e-8,
            format!("fidelity {:.12}", fid),
        ));

        let v = GridState::vacuum(spec);
        let hs = HomodyneSpec::from_k(4);
        let pdf = homodyne_bins(&v, 0, &hs);
        let mut worst = 0.0f64;
        for k in -3i64..=3 {
            let c = hs.bin_center(k);
            let want = 0.5 * (libm::erf(c + hs.eta) - libm::erf(c - hs.eta));
            worst = worst.max((pdf.mass_of(k) - want).abs());
        }
        out.push(check(
            "homodyne erf bins",
            worst < 5e-3,
            format!("max bin deviation {:.2e}", worst),
        ));
    }

    // grid-vs-comb synthesis cross-check
    if !quick {
        let r = cvqc::gridsim::synthesis_cross_check(2048);
        out.push(check(
            "grid vs comb synthesis (m = 1)",
            r.fidelity >= 0.999 && r.prob_rel_err < 0.01,
            format!(
                "fidelity {:.6}, probability error {:.3}%",
                r.fidelity,
                100.0 * r.prob_rel_err
            ),
        ));
    }

    // threshold calculator reference numbers
    {
        let p = ftcalc::p_succ(1, 0.1).unwrap();
        let z = ftcalc::zeta(1);
        let s = ftcalc::cviqp_minimal_m(1e-6, 1e-3).unwrap();
        let ok = (p - 0.97).abs() < 0.01
            && (z - 0.069).abs() < 0.005
            && (s.m_min as i32 - 6).abs() <= 1;
        out.push(check(
            "fault-tolerance reference numbers",
            ok,
            format!("p_succ {:.4}, zeta1 {:.4}, m_min {}", p, z, s.m_min),
        ));
    }

    // sampler cross-oracle
    {
        let model = sampler::CircuitModel::random_cv(1, 0.1);
        let mut gates = GateSequence::default();
        gates.push(Gate::shear(0.28, 0));
        gates.push(Gate::fourier(1));
        gates.push(Gate::cz(0.7, 0, 1));
        gates.push(Gate::displacement(0.9, 0));
        let spec = sampler::CircuitSpec {
            model,
            n_modes: 2,
            gates,
            homodyne: HomodyneSpec::from_k(8),
            seed: 0,
        };
        let cov = sampler::simulate_covariance(&spec).unwrap();
        let grid = sampler::simulate_on_grid(&spec, if quick { 512 } else { 1024 }).unwrap();
        let tv = cov
            .iter()
            .zip(&grid)
            .map(|(c, g)| c.total_variation(g))
            .fold(0.0, f64::max);
        out.push(check(
            "sampler covariance vs grid",
            tv < 1e-2,
            format!("max total variation {:.2e}", tv),
        ));
    }

    out
}

