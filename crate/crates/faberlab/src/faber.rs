//! Faber polynomials of the Miller basis forms.
//!
//! For `k = 12*ell + k'` and `0 <= m <= ell`, the basis form
//! `f_{k,m} = q^m + O(q^{ell+1})` factors as
//! `Delta^ell * E_{k'} * F_{k,m}(j)` for a unique monic integer polynomial
//! `F_{k,m}` of degree `ell - m`. The coefficients are peeled greedily from
//! `q^m * Delta^{-ell} * E_{k'}^{-1}` against powers of `j`: only the prefix
//! `q^m` of the form matters, since later coefficients of the form cannot
//! change earlier polynomial coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::modforms::{
    delta_series, eisenstein_series, j_series, weight_decompose, ModFormsError,
    WeightDecomposition,
};
use crate::powersums::LinearityConstants;
use crate::qseries::LaurentSeries;

/// Errors from Faber polynomial construction and the closed-form evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaberError {
    #[error(transparent)]
    Weight(#[from] ModFormsError),
    /// m outside `0..=ell`.
    #[error("index m = {m} out of range for ell = {ell}")]
    IndexOutOfRange { m: i64, ell: u64 },
    /// The closed-form formula only covers `1 <= n <= ell - m`.
    #[error("coefficient index n = {n} outside the linear range 1..={range}")]
    OutOfTheoremRange { n: u32, range: u64 },
    /// The closed-form sum must collapse to an integer; a remainder means
    /// the supplied constants are wrong.
    #[error("closed-form sum is not an integer: {0}")]
    NonIntegerResult(BigRational),
    /// The requested q-expansion window is too short to exhibit the
    /// Miller prefix.
    #[error("n_terms = {n_terms} too small, need at least ell + 1 = {need}")]
    PrecisionTooLow { n_terms: i64, need: i64 },
}

/// Monic integer Faber polynomial
/// `F(t) = e_0 t^D + e_1 t^{D-1} + ... + e_D` with `D = ell - m`,
/// tagged with the weight data it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaberPolynomial {
    pub weight: WeightDecomposition,
    pub m: u64,
    /// `e_0, e_1, ..., e_D`, leading coefficient first; `e_0 = 1`.
    pub coeffs: Vec<BigInt>,
}

impl FaberPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `e_n` of `t^{D-n}`.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }
}

/// Shared precomputation for one weight: the inverse factor
/// `Delta^{-ell} * E_{k'}^{-1}`, the powers of `j`, and the forward factor
/// `Delta^ell * E_{k'}`, all to one relative precision. Every `m` of the
/// weight reuses it, so scans construct it once per `k`.
pub struct MillerBasis {
    weight: WeightDecomposition,
    rel_prec: i64,
    /// `Delta^{-ell} * E_{k'}^{-1}`; valuation `-ell`.
    inverse_factor: LaurentSeries,
    /// `j^0, j^1, ..., j^ell`; `j^i` has valuation `-i`.
    j_powers: Vec<LaurentSeries>,
    /// `Delta^ell * E_{k'}`; valuation `ell`.
    forward_factor: LaurentSeries,
}

impl MillerBasis {
    /// Prepares the weight with the default window `ell + 2`, enough for
    /// every greedy run and the Miller-prefix validation through `q^ell`.
    pub fn new(k: i64) -> Result<Self, FaberError> {
        let w = weight_decompose(k)?;
        Self::with_precision(k, w.ell as i64 + 2)
    }

    /// Prepares the weight with at least `rel_prec` known coefficients per
    /// generator (clamped up to the default when smaller).
    pub fn with_precision(k: i64, rel_prec: i64) -> Result<Self, FaberError> {
        let weight = weight_decompose(k)?;
        let ell = weight.ell as i64;
        let rel = rel_prec.max(ell + 2);
        let delta = delta_series(rel);
        let eis = eisenstein_series(weight.kprime, rel)?;
        let inverse_factor = delta
            .pow(-ell, rel)
            .expect("Delta is monic in q")
            .mul(&eis.invert(rel).expect("E_{k'} has constant term 1"))
            .truncate_to(rel);
        let forward_factor = delta.pow(ell, rel).expect("positive power").mul(&eis).truncate_to(rel);
        let j = j_series(rel);
        let mut j_powers = Vec::with_capacity(weight.ell as usize + 1);
        j_powers.push(LaurentSeries::one(rel));
        for _ in 1..=weight.ell {
            let next = j_powers.last().expect("nonempty").mul(&j).truncate_to(rel);
            j_powers.push(next);
        }
        Ok(Self { weight, rel_prec: rel, inverse_factor, j_powers, forward_factor })
    }

    pub fn weight(&self) -> WeightDecomposition {
        self.weight
    }

    /// Power `j^i` on the precomputed window.
    pub fn j_power(&self, i: usize) -> &LaurentSeries {
        &self.j_powers[i]
    }

    /// The Faber polynomial of `f_{k,m}` by greedy coefficient peeling.
    pub fn faber(&self, m: i64) -> Result<FaberPolynomial, FaberError> {
        let ell = self.weight.ell;
        if m < 0 || m as u64 > ell {
            return Err(FaberError::IndexOutOfRange { m, ell });
        }
        let degree = (ell - m as u64) as usize;
        // Remainder of q^m * Delta^{-ell} * E^{-1} on exponents m-ell .. 0;
        // index i holds the coefficient of q^{m-ell+i}.
        let mut remainder: Vec<BigInt> = self.inverse_factor.coeffs()[..=degree].to_vec();
        let mut coeffs = Vec::with_capacity(degree + 1);
        for s in 0..=degree {
            let e_s = remainder[s].clone();
            if !e_s.is_zero() {
                let jpow = self.j_powers[degree - s].coeffs();
                for i in 0..=(degree - s) {
                    remainder[s + i] -= &e_s * &jpow[i];
                }
            }
            coeffs.push(e_s);
        }
        debug_assert!(coeffs[0].is_one());
        Ok(FaberPolynomial { weight: self.weight, m: m as u64, coeffs })
    }

    /// Evaluates `F(j)` on the precomputed window.
    pub fn eval_at_j(&self, poly: &FaberPolynomial) -> LaurentSeries {
        let degree = poly.degree();
        let mut acc = LaurentSeries::zero(self.rel_prec - degree as i64 - 1);
        for (s, e) in poly.coeffs.iter().enumerate() {
            acc = acc.add(&self.j_powers[degree - s].scale(e));
        }
        acc
    }

    /// The q-expansion `Delta^ell * E_{k'} * F(j)` of the Miller form.
    pub fn form_qexp(&self, poly: &FaberPolynomial) -> LaurentSeries {
        self.forward_factor.mul(&self.eval_at_j(poly))
    }

    /// Checks the defining property
    /// `Delta^ell * E_{k'} * F(j) = q^m + 0*q^{m+1} + ... + 0*q^ell + O(q^{ell+1})`
    /// exactly.
    pub fn validate_miller_prefix(&self, poly: &FaberPolynomial) -> bool {
        let f = self.form_qexp(poly);
        let m = poly.m as i64;
        let ell = self.weight.ell as i64;
        if f.coefficient(m) != Ok(BigInt::one()) {
            return false;
        }
        (m + 1..=ell).all(|d| f.coefficient(d) == Ok(BigInt::zero()))
    }
}

/// One-shot form of [`MillerBasis::faber`].
pub fn faber_greedy(k: i64, m: i64) -> Result<FaberPolynomial, FaberError> {
    MillerBasis::new(k)?.faber(m)
}

/// The q-expansion of `f_{k,m}` with `n_terms` known coefficients starting
/// at `q^m`. Requires `n_terms >= ell + 1` so the Miller prefix is visible.
pub fn miller_form_qexp(k: i64, m: i64, n_terms: i64) -> Result<LaurentSeries, FaberError> {
    let w = weight_decompose(k)?;
    let need = w.ell as i64 + 1;
    if n_terms < need {
        return Err(FaberError::PrecisionTooLow { n_terms, need });
    }
    let basis = MillerBasis::with_precision(k, n_terms)?;
    let poly = basis.faber(m)?;
    Ok(basis.form_qexp(&poly).truncate_to(n_terms))
}

/// Coefficient `e_n` from the non-recursive formula: a sum over the
/// multiplicity vectors `(t_1, ..., t_n)` with `sum s*t_s = n` of
/// `prod_s (-1)^{t_s} (A_s k + B_s m + C_s(k'))^{t_s} / (t_s! s^{t_s})`,
/// evaluated in exact rational arithmetic. The denominators cancel only in
/// aggregate; integrality of the total is asserted.
pub fn faber_closed_form(
    k: i64,
    m: i64,
    n: u32,
    consts: &[LinearityConstants],
) -> Result<BigInt, FaberError> {
    let w = weight_decompose(k)?;
    if m < 0 || m as u64 > w.ell {
        return Err(FaberError::IndexOutOfRange { m, ell: w.ell });
    }
    let range = w.ell - m as u64;
    if n < 1 || n as u64 > range {
        return Err(FaberError::OutOfTheoremRange { n, range });
    }
    // power sums p_s = A_s k + B_s m + C_s(k') for s = 1..=n
    let mut p = Vec::with_capacity(n as usize);
    for s in 1..=n {
        let c = consts
            .iter()
            .find(|c| c.n == s)
            .unwrap_or_else(|| panic!("constants for s = {s} not supplied"));
        p.push(&c.a * k + &c.b * m + c.c(w.kprime).expect("valid kprime"));
    }
    let mut total = BigRational::zero();
    for_each_partition(n as usize, &mut |mults| {
        let mut term = BigRational::one();
        for (idx, &t) in mults.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let s = idx + 1;
            let mut num = p[idx].pow(t);
            if t % 2 == 1 {
                num = -num;
            }
            let denom = factorial(t) * BigInt::from(s).pow(t);
            term *= BigRational::new(num, denom);
        }
        total += term;
    });
    if !total.is_integer() {
        return Err(FaberError::NonIntegerResult(total));
    }
    Ok(total.to_integer())
}

/// Visits every multiplicity vector `(t_1, ..., t_n)` with
/// `sum_{s} s * t_s = n`.
pub(crate) fn for_each_partition(n: usize, visit: &mut impl FnMut(&[u32])) {
    let mut mults = vec![0u32; n];
    fn rec(remaining: usize, max_part: usize, mults: &mut [u32], visit: &mut impl FnMut(&[u32])) {
        if remaining == 0 {
            visit(mults);
            return;
        }
        for s in (1..=max_part.min(remaining)).rev() {
            mults[s - 1] += 1;
            rec(remaining - s, s, mults, visit);
            mults[s - 1] -= 1;
        }
    }
    rec(n, n, &mut mults, visit);
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}
