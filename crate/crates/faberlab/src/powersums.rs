//! Power sums of Faber roots, Newton's identities in both directions, and
//! the exact linearity constants: for `n <= ell - m` the power sum obeys
//! `p_n = A_n * k + B_n * m + C_n(k')` with instance-independent integers
//! `A_n`, `B_n` and a per-`k'` constant `C_n(k')`.
//!
//! `B_n` is read off a series (`-B_n` is the `q^0` coefficient of `j^n`)
//! and double-checked against an independent combinatorial formula;
//! `A_n` is extracted from explicit weight instances with the divisibility
//! and cross-instance agreement asserted.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::faber::{factorial, for_each_partition, FaberError, FaberPolynomial, MillerBasis};
use crate::modforms::{j_series, weight_decompose, ModFormsError, WeightDecomposition, KPRIMES};

/// Default cap on the partition enumeration in [`constant_c0_oracle`].
pub const DEFAULT_PARTITION_CAP: u32 = 12;

/// Errors from constants extraction and linearity checking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowerSumsError {
    #[error(transparent)]
    Weight(#[from] ModFormsError),
    #[error(transparent)]
    Faber(#[from] FaberError),
    /// The inverse Newton recurrence produced a non-integer coefficient.
    #[error("power sums are inconsistent with an integer monic polynomial at n = {0}")]
    NonIntegerResult(u32),
    /// Two weight instances disagreed on A_n, or k did not divide p_n.
    #[error("A_{n} extraction failed: {detail}")]
    InconsistentInstances { n: u32, detail: String },
    /// Lemma-style partition sums are capped to keep enumeration bounded.
    #[error("n = {0} exceeds the partition enumeration cap {1}")]
    CapExceeded(u32, u32),
    /// Theorem range is `n <= ell - m`; nothing is claimed beyond it.
    #[error("n_max = {n_max} exceeds the valid range ell - m = {range}")]
    OutOfTheoremRange { n_max: u64, range: u64 },
}

/// The exact Theorem constants for one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityConstants {
    pub n: u32,
    pub a: BigInt,
    pub b: BigInt,
    /// `C_n(k')` for each admissible `k'`.
    pub c: BTreeMap<u32, BigInt>,
}

impl LinearityConstants {
    pub fn c(&self, kprime: u32) -> Option<&BigInt> {
        self.c.get(&kprime)
    }

    /// `p_n` predicted for the pair `(k, m)`.
    pub fn predict(&self, k: i64, m: i64, kprime: u32) -> Option<BigInt> {
        Some(&self.a * k + &self.b * m + self.c(kprime)?)
    }
}

/// Exact moments `M_n = p_n / (ell - m)` of the root-counting measure,
/// defined for `n <= ell - m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentVector {
    pub weight: WeightDecomposition,
    pub m: u64,
    pub moments: Vec<BigRational>,
}

/// Power sums `p_1..p_{n_max}` of the roots of a monic integer polynomial
/// given as `[e_0 = 1, e_1, ..., e_D]`, by the Newton recurrence
/// `p_n = -n e_n - sum_{i=1}^{n-1} e_i p_{n-i}` (with `e_i = 0` past the
/// degree). Exact for all `n`, whatever the roots are.
pub fn power_sums_monic(coeffs: &[BigInt], n_max: usize) -> Vec<BigInt> {
    assert!(!coeffs.is_empty() && coeffs[0].is_one(), "polynomial must be monic");
    let degree = coeffs.len() - 1;
    let mut p: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = if n <= degree { BigInt::from(n as i64) * &coeffs[n] } else { BigInt::zero() };
        for i in 1..n.min(degree + 1) {
            if !coeffs[i].is_zero() {
                acc += &coeffs[i] * &p[n - i - 1];
            }
        }
        p.push(-acc);
    }
    p
}

/// [`power_sums_monic`] applied to a Faber polynomial.
pub fn power_sums(poly: &FaberPolynomial, n_max: usize) -> Vec<BigInt> {
    power_sums_monic(&poly.coeffs, n_max)
}

/// Inverse direction of Newton's identities: recovers `e_1..e_n` from
/// `p_1..p_n`. Errors if some division by `n` is inexact, i.e. the power
/// sums do not come from an integer monic polynomial.
pub fn coeffs_from_power_sums(p: &[BigInt]) -> Result<Vec<BigInt>, PowerSumsError> {
    let mut e: Vec<BigInt> = Vec::with_capacity(p.len());
    for n in 1..=p.len() {
        let mut acc = p[n - 1].clone();
        for i in 1..n {
            acc += &e[i - 1] * &p[n - i - 1];
        }
        let (q, r) = (-acc).div_rem(&BigInt::from(n as i64));
        if !r.is_zero() {
            return Err(PowerSumsError::NonIntegerResult(n as u32));
        }
        e.push(q);
    }
    Ok(e)
}

fn b_cache() -> &'static Mutex<HashMap<u32, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn a_cache() -> &'static Mutex<HashMap<u32, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `B_n = -(coefficient of q^0 in j^n)`, exact.
pub fn constant_b(n: u32) -> BigInt {
    assert!(n >= 1);
    if let Some(b) = b_cache().lock().expect("cache").get(&n) {
        return b.clone();
    }
    let rel = n as i64 + 1;
    let jn = j_series(rel).pow(n as i64, rel).expect("j is invertible");
    let b = -jn.coefficient(0).expect("window covers q^0");
    b_cache().lock().expect("cache").insert(n, b.clone());
    b
}

/// `C_n(k')`: zero for `k'` in {0, 4, 8} and `-1728^n / 2` for
/// `k'` in {6, 10, 14}; the half is exact since
/// `1728^n / 2 = 864 * 1728^{n-1}`.
pub fn constant_c(n: u32, kprime: u32) -> Result<BigInt, PowerSumsError> {
    assert!(n >= 1);
    match kprime {
        0 | 4 | 8 => Ok(BigInt::zero()),
        6 | 10 | 14 => Ok(BigInt::from(-864) * BigInt::from(1728).pow(n - 1)),
        other => Err(ModFormsError::UnsupportedWeight(other as i64).into()),
    }
}

/// `A_n`, extracted from the instance `k = 12(n+1), m = 0` (so the linear
/// law applies at exponent `n`) and cross-checked against `k = 12(n+2)`.
pub fn constant_a(n: u32) -> Result<BigInt, PowerSumsError> {
    assert!(n >= 1);
    if let Some(a) = a_cache().lock().expect("cache").get(&n) {
        return Ok(a.clone());
    }
    let a = constants_from_instances(n)?
        .remove(&n)
        .expect("requested index present");
    Ok(a)
}

/// Extracts `A_1..A_{n_max}` from the single instance pair
/// `k = 12(n_max+1)` and `k = 12(n_max+2)` with `m = 0`: every `n <= n_max`
/// is inside the valid range of both. Populates the cache.
fn constants_from_instances(n_max: u32) -> Result<HashMap<u32, BigInt>, PowerSumsError> {
    let mut out = HashMap::new();
    let k1 = 12 * (n_max as i64 + 1);
    let k2 = 12 * (n_max as i64 + 2);
    let p1 = power_sums(&MillerBasis::new(k1)?.faber(0)?, n_max as usize);
    let p2 = power_sums(&MillerBasis::new(k2)?.faber(0)?, n_max as usize);
    let mut cache = a_cache().lock().expect("cache");
    for n in 1..=n_max {
        let (q1, r1) = p1[n as usize - 1].div_rem(&BigInt::from(k1));
        if !r1.is_zero() {
            return Err(PowerSumsError::InconsistentInstances {
                n,
                detail: format!("k = {k1} does not divide p_n = {}", p1[n as usize - 1]),
            });
        }
        let (q2, r2) = p2[n as usize - 1].div_rem(&BigInt::from(k2));
        if !r2.is_zero() || q1 != q2 {
            return Err(PowerSumsError::InconsistentInstances {
                n,
                detail: format!("instances k = {k1}, {k2} disagree: {q1} vs {q2} (rem {r2})"),
            });
        }
        cache.entry(n).or_insert_with(|| q1.clone());
        out.insert(n, q1);
    }
    Ok(out)
}

/// Bundles `A_n, B_n, C_n(k')` for `n = 1..=n_max`.
pub fn linearity_constants(n_max: u32) -> Result<Vec<LinearityConstants>, PowerSumsError> {
    let a_all = constants_from_instances(n_max)?;
    (1..=n_max)
        .map(|n| {
            let mut c = BTreeMap::new();
            for kp in KPRIMES {
                c.insert(kp, constant_c(n, kp)?);
            }
            Ok(LinearityConstants { n, a: a_all[&n].clone(), b: constant_b(n), c })
        })
        .collect()
}

/// `c_n(0)`, the `q^0` coefficient of `j^n`, by the combinatorial formula
/// `sum over d_1 + 2 d_2 + ... + n d_n = n` of
/// `n!/(n - sum d_t)! * prod_t c(t-1)^{d_t} / d_t!`
/// where `c(d)` is the coefficient of `q^d` in `j`. Independent of the
/// series-product route in [`constant_b`].
pub fn constant_c0_oracle(n: u32) -> Result<BigInt, PowerSumsError> {
    constant_c0_oracle_with_cap(n, DEFAULT_PARTITION_CAP)
}

/// [`constant_c0_oracle`] with an explicit partition-enumeration cap.
pub fn constant_c0_oracle_with_cap(n: u32, cap: u32) -> Result<BigInt, PowerSumsError> {
    assert!(n >= 1);
    if n > cap {
        return Err(PowerSumsError::CapExceeded(n, cap));
    }
    let j = j_series(n as i64 + 1);
    let jc: Vec<BigInt> =
        (0..n as i64).map(|t| j.coefficient(t).expect("window covers it")).collect();
    let mut total = BigRational::zero();
    for_each_partition(n as usize, &mut |mults| {
        let weight: u32 = mults.iter().sum();
        // n! / (n - sum d_t)! = falling factorial
        let mut term = BigRational::from(falling_factorial(n, weight));
        for (idx, &d) in mults.iter().enumerate() {
            if d == 0 {
                continue;
            }
            term *= BigRational::new(jc[idx].pow(d), factorial(d));
        }
        total += term;
    });
    debug_assert!(total.is_integer());
    Ok(total.to_integer())
}

fn falling_factorial(n: u32, len: u32) -> BigInt {
    ((n - len + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// One row of a linearity check: the observed power sum against the linear
/// prediction.
#[derive(Debug, Clone)]
pub struct LinearityRow {
    pub n: u32,
    pub power_sum: BigInt,
    pub predicted: BigInt,
}

impl LinearityRow {
    pub fn pass(&self) -> bool {
        self.power_sum == self.predicted
    }
}

/// Exact verification of the linear law for one `(k, m)` and all
/// `n <= n_max`; `n_max` must stay within `ell - m`.
pub fn verify_linearity(k: i64, m: i64, n_max: u32) -> Result<Vec<LinearityRow>, PowerSumsError> {
    let basis = MillerBasis::new(k)?;
    verify_linearity_with(&basis, &linearity_constants(n_max)?, m, n_max)
}

/// [`verify_linearity`] against shared precomputations, for scans.
pub fn verify_linearity_with(
    basis: &MillerBasis,
    consts: &[LinearityConstants],
    m: i64,
    n_max: u32,
) -> Result<Vec<LinearityRow>, PowerSumsError> {
    let w = basis.weight();
    if m < 0 || m as u64 > w.ell {
        return Err(FaberError::IndexOutOfRange { m, ell: w.ell }.into());
    }
    let range = w.ell - m as u64;
    if n_max as u64 > range {
        return Err(PowerSumsError::OutOfTheoremRange { n_max: n_max as u64, range });
    }
    let poly = basis.faber(m)?;
    let p = power_sums(&poly, n_max as usize);
    let rows = (1..=n_max)
        .map(|n| {
            let c = &consts[n as usize - 1];
            debug_assert_eq!(c.n, n);
            LinearityRow {
                n,
                power_sum: p[n as usize - 1].clone(),
                predicted: c.predict(w.k as i64, m, w.kprime).expect("admissible kprime"),
            }
        })
        .collect();
    Ok(rows)
}

/// The smallest `n <= ell - m` with `A_n k + B_n m + C_n(k') < 0`, if any.
/// A negative power sum certifies (by the sign argument) that some Faber
/// root lies outside `[0, 1728]`.
pub fn bound_violation(k: i64, m: i64) -> Result<Option<u32>, PowerSumsError> {
    let w = weight_decompose(k)?;
    if m < 0 || m as u64 > w.ell {
        return Err(FaberError::IndexOutOfRange { m, ell: w.ell }.into());
    }
    let range = (w.ell - m as u64) as u32;
    if range == 0 {
        return Ok(None);
    }
    let consts = linearity_constants(range)?;
    bound_violation_with(&consts, k, m, w.kprime)
}

/// [`bound_violation`] against shared constants, for scans.
pub fn bound_violation_with(
    consts: &[LinearityConstants],
    k: i64,
    m: i64,
    kprime: u32,
) -> Result<Option<u32>, PowerSumsError> {
    for c in consts {
        if let Some(p) = c.predict(k, m, kprime) {
            if p.is_negative() {
                return Ok(Some(c.n));
            }
        }
    }
    Ok(None)
}

/// The exact rationals `12 A_n / (-B_n)` for `n = 1..=n_max`; they decrease
/// toward `3/pi` from above.
pub fn ratio_sequence(n_max: u32) -> Result<Vec<BigRational>, PowerSumsError> {
    let consts = linearity_constants(n_max)?;
    Ok(consts
        .iter()
        .map(|c| BigRational::new(BigInt::from(12) * &c.a, -&c.b))
        .collect())
}

/// Exact moments of the root measure of `F_{k,m}`, valid for
/// `n <= ell - m`.
pub fn moment_vector(k: i64, m: i64, n_max: u32) -> Result<MomentVector, PowerSumsError> {
    let basis = MillerBasis::new(k)?;
    let w = basis.weight();
    if m < 0 || m as u64 >= w.ell {
        return Err(FaberError::IndexOutOfRange { m, ell: w.ell }.into());
    }
    let count = w.ell - m as u64;
    if n_max as u64 > count {
        return Err(PowerSumsError::OutOfTheoremRange { n_max: n_max as u64, range: count });
    }
    let p = power_sums(&basis.faber(m)?, n_max as usize);
    Ok(MomentVector {
        weight: w,
        m: m as u64,
        moments: p
            .into_iter()
            .map(|pn| BigRational::new(pn, BigInt::from(count)))
            .collect(),
    })
}

/// A rational strictly below pi (40 correct digits).
pub fn pi_lower_bound() -> BigRational {
    BigRational::new(
        "31415926535897932384626433832795028841971".parse().expect("literal"),
        BigInt::from(10u32).pow(40),
    )
}

/// A rational strictly above pi (40 correct digits).
pub fn pi_upper_bound() -> BigRational {
    BigRational::new(
        "31415926535897932384626433832795028841972".parse().expect("literal"),
        BigInt::from(10u32).pow(40),
    )
}
