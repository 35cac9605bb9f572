//! Exact symbolic algebra of polynomials in the canonical operators q̂, p̂.
//!
//! Commutator convention: [q̂, p̂] = i, so â = (q̂ + ip̂)/√2 and the vacuum
//! quadrature variance is 1/2. Every operator is kept in a unique normal
//! form — within each mode all q̂ powers stand to the left of all p̂ powers —
//! with exact rational complex coefficients, so operator identities can be
//! checked with no floating-point drift.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact complex coefficient with rational real and imaginary parts.
pub type Coeff = Complex<BigRational>;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficient `n/d` (real).
pub fn coeff(n: i64, d: i64) -> Coeff {
    Complex::new(rat(n, d), BigRational::zero())
}

/// Coefficient `i·n/d` (imaginary).
pub fn coeff_i(n: i64, d: i64) -> Coeff {
    Complex::new(BigRational::zero(), rat(n, d))
}

/// A normal-form product of quadrature operators: q̂ᵃp̂ᵇ on each mode.
///
/// Modes with exponent pair (0, 0) are not stored, so the identity operator
/// is the empty map and equality of monomials is structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct WeylMonomial {
    exps: BTreeMap<usize, (u32, u32)>,
}

impl WeylMonomial {
    pub fn identity() -> Self {
        Self::default()
    }

    /// q̂ᵃp̂ᵇ on a single mode.
    pub fn single(mode: usize, q_exp: u32, p_exp: u32) -> Self {
        let mut exps = BTreeMap::new();
        if (q_exp, p_exp) != (0, 0) {
            exps.insert(mode, (q_exp, p_exp));
        }
        Self { exps }
    }

    pub fn exponents(&self, mode: usize) -> (u32, u32) {
        self.exps.get(&mode).copied().unwrap_or((0, 0))
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.keys().copied()
    }

    /// Total degree across all modes.
    pub fn degree(&self) -> u32 {
        self.exps.values().map(|&(a, b)| a + b).sum()
    }
}

impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (mode, &(a, b)) in &self.exps {
            if a > 0 {
                write!(f, "q{}^{}", mode, a)?;
            }
            if b > 0 {
                write!(f, "p{}^{}", mode, b)?;
            }
        }
        Ok(())
    }
}

/// A polynomial in the quadrature operators, stored as a map from
/// normal-form monomials to nonzero exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeylPoly {
    terms: BTreeMap<WeylMonomial, Coeff>,
}

impl WeylPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(coeff(1, 1))
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Self::default();
        p.add_term(WeylMonomial::identity(), c);
        p
    }

    /// The position operator q̂ on `mode`.
    pub fn q(mode: usize) -> Self {
        let mut p = Self::default();
        p.add_term(WeylMonomial::single(mode, 1, 0), coeff(1, 1));
        p
    }

    /// The momentum operator p̂ on `mode`.
    pub fn p(mode: usize) -> Self {
        let mut p = Self::default();
        p.add_term(WeylMonomial::single(mode, 0, 1), coeff(1, 1));
        p
    }

    /// The number operator n̂ = (q̂² + p̂² − 1)/2 on `mode`.
    pub fn number(mode: usize) -> Self {
        let mut p = Self::default();
        p.add_term(WeylMonomial::single(mode, 2, 0), coeff(1, 2));
        p.add_term(WeylMonomial::single(mode, 0, 2), coeff(1, 2));
        p.add_term(WeylMonomial::identity(), coeff(-1, 2));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &WeylMonomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    fn add_term(&mut self, m: WeylMonomial, c: Coeff) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::default();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }
}

/// C(n, k) as a BigInt.
fn binomial_int(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k.min(n) {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    if k > n {
        BigInt::zero()
    } else {
        acc
    }
}

/// Falling factorial n·(n−1)···(n−j+1).
fn falling(n: u32, j: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= BigInt::from(n - i);
    }
    acc
}

/// (−i)^j as an exact coefficient.
fn neg_i_pow(j: u32) -> Coeff {
    match j % 4 {
        0 => coeff(1, 1),
        1 => coeff_i(-1, 1),
        2 => coeff(-1, 1),
        _ => coeff_i(1, 1),
    }
}

/// Reorder p̂ᵐq̂ⁿ into normal form on one mode:
/// p̂ᵐq̂ⁿ = Σⱼ C(m,j)·n!/(n−j)!·(−i)ʲ·q̂ⁿ⁻ʲp̂ᵐ⁻ʲ, from [q̂, p̂] = i.
fn reorder_single_mode(m: u32, n: u32) -> Vec<(u32, u32, Coeff)> {
    let mut out = Vec::new();
    for j in 0..=m.min(n) {
        let count = binomial_int(m, j) * falling(n, j);
        let c = neg_i_pow(j) * Complex::new(BigRational::from(count), BigRational::zero());
        out.push((n - j, m - j, c));
    }
    out
}

/// Product of two normal-form monomials, reduced back to normal form.
fn monomial_product(a: &WeylMonomial, b: &WeylMonomial) -> WeylPoly {
    // Distinct modes commute, so each mode reduces independently:
    // q^{a1} p^{b1} · q^{a2} p^{b2} = q^{a1} (p^{b1} q^{a2}) p^{b2}.
    let mut acc: Vec<(WeylMonomial, Coeff)> = vec![(WeylMonomial::identity(), coeff(1, 1))];
    let modes: std::collections::BTreeSet<usize> = a.modes().chain(b.modes()).collect();
    for mode in modes {
        let (a1, b1) = a.exponents(mode);
        let (a2, b2) = b.exponents(mode);
        let expansion = reorder_single_mode(b1, a2);
        let mut next = Vec::with_capacity(acc.len() * expansion.len());
        for (mono, c) in &acc {
            for (qe, pe, ec) in &expansion {
                let mut m = mono.clone();
                let total = (a1 + qe, pe + b2);
                if total != (0, 0) {
                    m.exps.insert(mode, total);
                }
                next.push((m, c.clone() * ec.clone()));
            }
        }
        acc = next;
    }
    let mut out = WeylPoly::default();
    for (m, c) in acc {
        out.add_term(m, c);
    }
    out
}

/// Operator product a·b reduced to normal form with exact arithmetic.
pub fn normal_product(a: &WeylPoly, b: &WeylPoly) -> WeylPoly {
    let mut out = WeylPoly::default();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let prod = monomial_product(ma, mb);
            let c = ca.clone() * cb.clone();
            for (m, pc) in &prod.terms {
                out.add_term(m.clone(), pc.clone() * c.clone());
            }
        }
    }
    out
}

/// Commutator [a, b] = ab − ba in normal form.
pub fn commutator(a: &WeylPoly, b: &WeylPoly) -> WeylPoly {
    normal_product(a, b).sub(&normal_product(b, a))
}

/// The exact expansion of n̂₁n̂₂ together with its deviation from the
/// four-operator splitting used by the cross-Kerr compiler.
pub struct NumberProductExpansion {
    /// n̂₁n̂₂ in normal form.
    pub product: WeylPoly,
    /// O₁ + O₂ + O₃ + O₄ − (q̂₁² + p̂₁²)/4 − (q̂₂² + p̂₂²)/4, the right-hand
    /// side as printed in the reference derivation.
    pub printed_rhs: WeylPoly,
    /// product − printed_rhs. Comes out to (1/4)·identity: the printed
    /// expansion drops a constant, i.e. a harmless global phase.
    pub difference: WeylPoly,
}

/// The four quartic operators of the cross-Kerr splitting,
/// O₁ = q̂₁²q̂₂²/4, O₂ = q̂₁²p̂₂²/4, O₃ = p̂₁²q̂₂²/4, O₄ = p̂₁²p̂₂²/4.
pub fn cross_kerr_operators() -> [WeylPoly; 4] {
    let quarter = coeff(1, 4);
    let q1 = WeylPoly::q(0);
    let p1 = WeylPoly::p(0);
    let q2 = WeylPoly::q(1);
    let p2 = WeylPoly::p(1);
    let sq = |x: &WeylPoly| normal_product(x, x);
    [
        normal_product(&sq(&q1), &sq(&q2)).scale(&quarter),
        normal_product(&sq(&q1), &sq(&p2)).scale(&quarter),
        normal_product(&sq(&p1), &sq(&q2)).scale(&quarter),
        normal_product(&sq(&p1), &sq(&p2)).scale(&quarter),
    ]
}

/// Expand n̂₁n̂₂ and compare it against the printed four-operator form.
pub fn expand_number_product() -> NumberProductExpansion {
    let product = normal_product(&WeylPoly::number(0), &WeylPoly::number(1));

    let [o1, o2, o3, o4] = cross_kerr_operators();
    let quarter = coeff(-1, 4);
    let mode_energy = |mode: usize| {
        normal_product(&WeylPoly::q(mode), &WeylPoly::q(mode))
            .add(&normal_product(&WeylPoly::p(mode), &WeylPoly::p(mode)))
    };
    let printed_rhs = o1
        .add(&o2)
        .add(&o3)
        .add(&o4)
        .add(&mode_energy(0).scale(&quarter))
        .add(&mode_energy(1).scale(&quarter));

    let difference = product.sub(&printed_rhs);
    NumberProductExpansion {
        product,
        printed_rhs,
        difference,
    }
}
