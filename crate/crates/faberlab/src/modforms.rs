//! Exact q-expansions of the classical generators: the discriminant form,
//! the Eisenstein series of weight 0, 4, 6, 8, 10, 14, and the j-invariant.
//!
//! Weights decompose uniquely as `k = 12*ell + k'` with
//! `k' in {0, 4, 6, 8, 10, 14}`; that decomposition drives everything else.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::qseries::LaurentSeries;

/// The admissible `k'` values, in ascending order.
pub const KPRIMES: [u32; 6] = [0, 4, 6, 8, 10, 14];

/// Errors from weight handling and generator construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModFormsError {
    /// Weight is odd, negative, or 2 — no decomposition exists.
    #[error("invalid weight {0}: must be even and >= 4, or 0")]
    InvalidWeight(i64),
    /// Eisenstein weight outside {0, 4, 6, 8, 10, 14}.
    #[error("unsupported Eisenstein weight {0}")]
    UnsupportedWeight(i64),
}

/// The unique decomposition `k = 12*ell + k'` with `k'` in [`KPRIMES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightDecomposition {
    pub k: u64,
    pub ell: u64,
    pub kprime: u32,
}

/// Decomposes an even weight `k >= 4` (or `k = 0`).
pub fn weight_decompose(k: i64) -> Result<WeightDecomposition, ModFormsError> {
    if k < 0 || k % 2 != 0 || k == 2 {
        return Err(ModFormsError::InvalidWeight(k));
    }
    let (mut ell, mut kprime) = (k / 12, k % 12);
    if kprime == 2 {
        // 12*ell + 2 = 12*(ell-1) + 14
        ell -= 1;
        kprime = 14;
        if ell < 0 {
            return Err(ModFormsError::InvalidWeight(k));
        }
    }
    Ok(WeightDecomposition { k: k as u64, ell: ell as u64, kprime: kprime as u32 })
}

/// The normalization constant `gamma_{k'}` of the Eisenstein series
/// `E_{k'} = 1 + gamma_{k'} * sum sigma_{k'-1}(n) q^n`, for `k' > 0`.
pub fn gamma(kprime: u32) -> Result<i64, ModFormsError> {
    gamma_self_check();
    match kprime {
        4 => Ok(240),
        6 => Ok(-504),
        8 => Ok(480),
        10 => Ok(-264),
        14 => Ok(-24),
        other => Err(ModFormsError::UnsupportedWeight(other as i64)),
    }
}

/// Re-derives the hardcoded gamma table from `gamma_k = -2k / B_k` with the
/// Bernoulli numbers computed exactly; runs once per process.
fn gamma_self_check() {
    static CHECK: OnceLock<()> = OnceLock::new();
    CHECK.get_or_init(|| {
        let bernoulli = bernoulli_numbers(14);
        for (kp, expected) in [(4, 240i64), (6, -504), (8, 480), (10, -264), (14, -24)] {
            let derived = BigRational::from(BigInt::from(-2 * kp)) / &bernoulli[kp as usize];
            assert!(
                derived.is_integer() && derived.to_integer() == BigInt::from(expected),
                "gamma_{kp} table entry {expected} disagrees with -2k/B_k = {derived}"
            );
        }
    });
}

/// Bernoulli numbers `B_0..B_n` (convention `B_1 = -1/2`) by the defining
/// recurrence `sum_{j<=m} C(m+1, j) B_j = 0`.
fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from(binom.clone()) * bj;
            binom = binom * BigInt::from(m as i64 + 1 - j as i64) / BigInt::from(j as i64 + 1);
        }
        // binom is now C(m+1, m)
        b.push(-acc / BigRational::from(binom));
    }
    b
}

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum Generator {
    Delta,
    Eisenstein(u32),
    J,
}

fn cache() -> &'static Mutex<HashMap<Generator, LaurentSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<Generator, LaurentSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fetches a generator from the session cache, growing it when a larger
/// window is requested. Regeneration is pure, so the cache is only a
/// speedup; writes are idempotent and the lock is never held across a
/// build (generators build each other).
fn cached(gen: Generator, rel_prec: i64, build: impl Fn(i64) -> LaurentSeries) -> LaurentSeries {
    {
        let guard = cache().lock().expect("generator cache poisoned");
        if let Some(s) = guard.get(&gen) {
            if s.len() as i64 >= rel_prec {
                return s.truncate_to(rel_prec);
            }
        }
    }
    let fresh = build(rel_prec);
    let out = fresh.truncate_to(rel_prec);
    let mut guard = cache().lock().expect("generator cache poisoned");
    let keep = match guard.get(&gen) {
        Some(existing) => existing.len() < fresh.len(),
        None => true,
    };
    if keep {
        guard.insert(gen, fresh);
    }
    out
}

/// The discriminant form `Delta = q * prod_{n>=1} (1 - q^n)^24`, truncated to
/// `n_terms` known coefficients starting at `q^1`.
///
/// Factors with `n > n_terms` cannot touch the kept window, so the product
/// is cut there.
pub fn delta_series(n_terms: i64) -> LaurentSeries {
    assert!(n_terms >= 1);
    cached(Generator::Delta, n_terms, |rel| {
        let euler = euler_product(rel);
        let pow24 = euler.pow(24, rel).expect("unit leading coefficient");
        pow24.shift(1)
    })
}

/// `prod_{n=1}^{rel-1} (1 - q^n)` on the window `[0, rel-1]`.
fn euler_product(rel: i64) -> LaurentSeries {
    let len = rel as usize;
    let mut coeffs = vec![BigInt::zero(); len];
    coeffs[0] = BigInt::one();
    for n in 1..len {
        // multiply by (1 - q^n) in place
        for i in (n..len).rev() {
            let lower = coeffs[i - n].clone();
            coeffs[i] -= lower;
        }
    }
    LaurentSeries::new(0, coeffs)
}

/// The Eisenstein series `E_{k'}` with `n_terms` known coefficients from
/// `q^0`; `E_0 = 1` exactly.
pub fn eisenstein_series(kprime: u32, n_terms: i64) -> Result<LaurentSeries, ModFormsError> {
    assert!(n_terms >= 1);
    if kprime == 0 {
        return Ok(LaurentSeries::one(n_terms));
    }
    let g = gamma(kprime)?;
    Ok(cached(Generator::Eisenstein(kprime), n_terms, |rel| {
        let len = rel as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        coeffs[0] = BigInt::one();
        // sigma_{k'-1} by sieve; d^{k'-1} <= 300^13 fits u128 at library scale,
        // but stay in BigInt for arbitrary windows.
        let s = (kprime - 1) as u32;
        for d in 1..len {
            let dpow = BigInt::from(d).pow(s) * g;
            let mut m = d;
            while m < len {
                coeffs[m] += &dpow;
                m += d;
            }
        }
        LaurentSeries::new(0, coeffs)
    }))
}

/// The j-invariant `E_4^3 / Delta = q^-1 + 744 + 196884 q + ...` with
/// `n_terms` known coefficients starting at `q^-1`.
pub fn j_series(n_terms: i64) -> LaurentSeries {
    assert!(n_terms >= 1);
    cached(Generator::J, n_terms, |rel| {
        let e4 = eisenstein_series(4, rel).expect("weight 4 is supported");
        let e4cubed = e4.pow(3, rel).expect("unit leading coefficient");
        let delta_inv = delta_series(rel).invert(rel).expect("Delta is monic in q");
        e4cubed.mul(&delta_inv)
    })
}

/// `sigma_s(n)`, the sum of the s-th powers of the divisors of n.
pub fn sigma(s: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(s);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn weight_decompose_table() {
        let w = weight_decompose(12).unwrap();
        assert_eq!((w.ell, w.kprime), (1, 0));
        let w = weight_decompose(26).unwrap();
        assert_eq!((w.ell, w.kprime), (1, 14));
        let w = weight_decompose(38).unwrap();
        assert_eq!((w.ell, w.kprime), (2, 14));
        let w = weight_decompose(0).unwrap();
        assert_eq!((w.ell, w.kprime), (0, 0));
        for bad in [-4, 2, 7, 13] {
            assert_eq!(weight_decompose(bad), Err(ModFormsError::InvalidWeight(bad)));
        }
    }

    #[test]
    fn delta_leading_coefficients() {
        let d = delta_series(8);
        assert_eq!(d.valuation(), 1);
        let taus: Vec<i64> = (1..=8).map(|n| d.coefficient(n).unwrap().to_i64().unwrap()).collect();
        assert_eq!(taus, [1, -24, 252, -1472, 4830, -6048, -16744, 84480]);
    }

    /// Independent route to the same coefficients: Euler's pentagonal-number
    /// recurrence for prod (1-q^n), raised to the 24th power by plain
    /// convolution. No shared code with `delta_series`.
    #[test]
    fn delta_matches_pentagonal_recurrence() {
        let n = 40usize;
        let mut euler = vec![0i128; n];
        euler[0] = 1;
        let mut k = 1i128;
        loop {
            let p1 = (k * (3 * k - 1) / 2) as usize;
            let p2 = (k * (3 * k + 1) / 2) as usize;
            if p1 >= n && p2 >= n {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            if p1 < n {
                euler[p1] += sign;
            }
            if p2 < n {
                euler[p2] += sign;
            }
            k += 1;
        }
        let mut pow = vec![num_bigint::BigInt::from(0); n];
        pow[0] = BigInt::one();
        for _ in 0..24 {
            let mut next = vec![BigInt::zero(); n];
            for i in 0..n {
                if pow[i].is_zero() {
                    continue;
                }
                for (j, e) in euler.iter().enumerate() {
                    if i + j >= n {
                        break;
                    }
                    if *e != 0 {
                        next[i + j] += &pow[i] * BigInt::from(*e);
                    }
                }
            }
            pow = next;
        }
        let d = delta_series(n as i64);
        for (i, c) in pow.iter().enumerate() {
            assert_eq!(&d.coefficient(1 + i as i64).unwrap(), c, "tau({})", i + 1);
        }
    }

    #[test]
    fn eisenstein_small_coefficients() {
        let e4 = eisenstein_series(4, 3).unwrap();
        assert_eq!(e4.coefficient(1).unwrap(), BigInt::from(240));
        assert_eq!(e4.coefficient(2).unwrap(), BigInt::from(2160)); // 240 * sigma_3(2) = 240 * 9
        let e0 = eisenstein_series(0, 5).unwrap();
        assert_eq!(e0, LaurentSeries::one(5));
        assert!(eisenstein_series(12, 3).is_err());
    }

    #[test]
    fn sigma_prime_and_multiplicativity() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(sigma(3, p), BigInt::from(1) + BigInt::from(p).pow(3));
        }
        // multiplicative on coprime arguments
        assert_eq!(sigma(5, 6), sigma(5, 2) * sigma(5, 3));
        assert_eq!(sigma(9, 35), sigma(9, 5) * sigma(9, 7));
    }

    #[test]
    fn j_first_coefficients() {
        let j = j_series(6);
        assert_eq!(j.valuation(), -1);
        assert_eq!(j.coefficient(-1).unwrap(), BigInt::from(1));
        assert_eq!(j.coefficient(0).unwrap(), BigInt::from(744));
        assert_eq!(j.coefficient(1).unwrap(), BigInt::from(196884));
        assert_eq!(j.coefficient(2).unwrap(), BigInt::from(21493760));
        assert_eq!(j.coefficient(3).unwrap(), BigInt::from(864299970u64));
        assert_eq!(j.coefficient(4).unwrap(), BigInt::from(20245856256u64));
    }

    #[test]
    fn j_times_delta_is_e4_cubed() {
        let n = 30;
        let j = j_series(n);
        let d = delta_series(n);
        let e4cubed = eisenstein_series(4, n).unwrap().pow(3, n).unwrap();
        let prod = j.mul(&d);
        for deg in 0..prod.trunc().min(e4cubed.trunc()) {
            assert_eq!(prod.coefficient(deg).unwrap(), e4cubed.coefficient(deg).unwrap());
        }
    }

    #[test]
    fn classical_identity_e4_e6_delta() {
        // E_4^3 - E_6^2 = 1728 * Delta, coefficientwise.
        let n = 60;
        let e4c = eisenstein_series(4, n).unwrap().pow(3, n).unwrap();
        let e6s = eisenstein_series(6, n).unwrap().pow(2, n).unwrap();
        let lhs = e4c.sub(&e6s);
        let rhs = delta_series(n).scale(&BigInt::from(1728));
        for deg in 0..n {
            assert_eq!(lhs.coefficient(deg).unwrap(), rhs.coefficient(deg).unwrap(), "q^{deg}");
        }
    }

    #[test]
    fn delta_window_contract() {
        for n in [1i64, 2, 7] {
            let d = delta_series(n);
            assert_eq!(d.valuation(), 1);
            assert_eq!(d.len() as i64, n);
            assert_eq!(d.coefficient(1).unwrap(), BigInt::from(1));
            if n >= 1 {
                // coefficient of q^0 is below the valuation: exactly zero
                assert_eq!(d.coefficient(0).unwrap(), BigInt::from(0));
            }
        }
    }
}
