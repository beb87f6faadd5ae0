//! Exact arithmetic on truncated Laurent series in `q`.
//!
//! A [`LaurentSeries`] stores the coefficients of `q^v, q^{v+1}, ..., q^N`
//! as arbitrary-precision integers together with the truncation order `N`.
//! Every operation propagates the truncation window, so a coefficient is
//! either known exactly or unavailable — never a silent zero.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors from series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    /// Inversion requires the lowest nonzero coefficient to be +1 or -1.
    #[error("leading coefficient {0} is not +1 or -1; inverse is not integral")]
    NonUnitLeadingCoefficient(BigInt),
    /// The operand does not carry enough known coefficients.
    #[error("series carries {have} known coefficients, {need} required")]
    InsufficientPrecision { have: i64, need: i64 },
    /// A coefficient beyond the truncation order was requested.
    #[error("coefficient of q^{degree} requested, series known only through q^{trunc}")]
    PrecisionExceeded { degree: i64, trunc: i64 },
}

/// A truncated Laurent series `a_v q^v + ... + a_N q^N + O(q^{N+1})`
/// with exact integer coefficients.
///
/// The empty coefficient list represents `0 + O(q^{N+1})`; in that case
/// `valuation = N + 1`, preserving the invariant `trunc >= valuation - 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    valuation: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentSeries {
    /// Builds a series from the coefficients of `q^valuation, q^{valuation+1}, ...`.
    pub fn new(valuation: i64, coeffs: Vec<BigInt>) -> Self {
        Self { valuation, coeffs }
    }

    /// Builds a series from machine integers, for fixtures and tests.
    pub fn from_ints(valuation: i64, coeffs: &[i64]) -> Self {
        Self::new(valuation, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The zero series `0 + O(q^{trunc+1})`.
    pub fn zero(trunc: i64) -> Self {
        Self { valuation: trunc + 1, coeffs: Vec::new() }
    }

    /// The constant one with `rel_prec` known coefficients: `1 + O(q^{rel_prec})`.
    pub fn one(rel_prec: i64) -> Self {
        assert!(rel_prec >= 1);
        let mut coeffs = vec![BigInt::zero(); rel_prec as usize];
        coeffs[0] = BigInt::one();
        Self { valuation: 0, coeffs }
    }

    /// `q^d` with `rel_prec` known coefficients.
    pub fn monomial(d: i64, rel_prec: i64) -> Self {
        assert!(rel_prec >= 1);
        let mut coeffs = vec![BigInt::zero(); rel_prec as usize];
        coeffs[0] = BigInt::one();
        Self { valuation: d, coeffs }
    }

    /// Lowest stored exponent.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Highest exponent with a known coefficient.
    pub fn trunc(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64 - 1
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// True if no coefficients are stored (the series is `0 + O(q^{trunc+1})`).
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, if any.
    pub fn order(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.valuation + i as i64)
    }

    /// Exact coefficient of `q^d`. Exponents below the valuation are zero;
    /// exponents above the truncation order are an error.
    pub fn coefficient(&self, d: i64) -> Result<BigInt, SeriesError> {
        if d > self.trunc() {
            return Err(SeriesError::PrecisionExceeded { degree: d, trunc: self.trunc() });
        }
        if d < self.valuation {
            return Ok(BigInt::zero());
        }
        Ok(self.coeffs[(d - self.valuation) as usize].clone())
    }

    /// Borrowed view of the stored coefficients, lowest exponent first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiplies by `q^d` (shifts every exponent by `d`).
    pub fn shift(&self, d: i64) -> Self {
        Self { valuation: self.valuation + d, coeffs: self.coeffs.clone() }
    }

    /// Restricts to at most `rel_prec` known coefficients from the valuation.
    pub fn truncate_to(&self, rel_prec: i64) -> Self {
        assert!(rel_prec >= 0);
        let keep = (rel_prec as usize).min(self.coeffs.len());
        Self { valuation: self.valuation, coeffs: self.coeffs[..keep].to_vec() }
    }

    /// Coefficientwise sum; the result is known where both operands are.
    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc().min(other.trunc());
        let valuation = self.valuation.min(other.valuation).min(trunc + 1);
        let len = (trunc - valuation + 1) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (src, base) in [(self, self.valuation), (other, other.valuation)] {
            for (i, c) in src.coeffs.iter().enumerate() {
                let d = base + i as i64;
                if d <= trunc {
                    coeffs[(d - valuation) as usize] += c;
                }
            }
        }
        Self { valuation, coeffs }
    }

    /// Coefficientwise difference, same window rule as [`LaurentSeries::add`].
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation; the window is unchanged.
    pub fn neg(&self) -> Self {
        Self {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplies every coefficient by an exact integer.
    pub fn scale(&self, s: &BigInt) -> Self {
        Self {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Cauchy product. The result valuation is the sum of the operand
    /// valuations; the truncation order is
    /// `min(a.trunc + b.valuation, b.trunc + a.valuation)`.
    pub fn mul(&self, other: &Self) -> Self {
        let valuation = self.valuation + other.valuation;
        let trunc = (self.trunc() + other.valuation).min(other.trunc() + self.valuation);
        if trunc < valuation {
            return Self::zero(trunc);
        }
        let len = (trunc - valuation + 1) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { valuation, coeffs }
    }

    /// Multiplicative inverse with `rel_prec` known coefficients.
    ///
    /// The lowest nonzero coefficient must be +1 or -1, so the inverse has
    /// exact integer coefficients. The identity `a * a^{-1} = 1 + O(q^{rel_prec})`
    /// holds after shifting by valuations.
    pub fn invert(&self, rel_prec: i64) -> Result<Self, SeriesError> {
        assert!(rel_prec >= 1);
        let ord = match self.order() {
            Some(o) => o,
            None => return Err(SeriesError::NonUnitLeadingCoefficient(BigInt::zero())),
        };
        let lead = self.coefficient(ord).expect("order is within window");
        if !lead.is_one() && lead != BigInt::from(-1) {
            return Err(SeriesError::NonUnitLeadingCoefficient(lead));
        }
        let have = self.trunc() - ord + 1;
        if have < rel_prec {
            return Err(SeriesError::InsufficientPrecision { have, need: rel_prec });
        }
        // Write a = lead * q^ord * (1 + u); invert the unit part by the
        // triangular recurrence b_n = -sum_{k=1..n} u_k b_{n-k}.
        let start = (ord - self.valuation) as usize;
        let unit: Vec<BigInt> = (0..rel_prec as usize)
            .map(|i| &self.coeffs[start + i] * &lead) // lead^2 = 1, so this divides by lead
            .collect();
        let mut inv = vec![BigInt::zero(); rel_prec as usize];
        inv[0] = BigInt::one();
        for n in 1..rel_prec as usize {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                if !unit[k].is_zero() && !inv[n - k].is_zero() {
                    acc += &unit[k] * &inv[n - k];
                }
            }
            inv[n] = -acc;
        }
        for c in inv.iter_mut() {
            *c *= &lead;
        }
        Ok(Self { valuation: -ord, coeffs: inv })
    }

    /// Integer power by repeated squaring, keeping `rel_prec` known
    /// coefficients past the result valuation. Negative exponents go
    /// through [`LaurentSeries::invert`] and inherit its preconditions.
    pub fn pow(&self, e: i64, rel_prec: i64) -> Result<Self, SeriesError> {
        assert!(rel_prec >= 1);
        if e == 0 {
            return Ok(Self::one(rel_prec));
        }
        let base = if e < 0 { self.invert(rel_prec)? } else { self.clone() };
        let ord = match base.order() {
            Some(o) => o,
            None => {
                // 0^e for e > 0: still zero, with the window the bookkeeping allows.
                let t = base.trunc();
                return Ok(Self::zero(e * (t + 1) - 1));
            }
        };
        let have = base.trunc() - ord + 1;
        if have < rel_prec {
            return Err(SeriesError::InsufficientPrecision { have, need: rel_prec });
        }
        // Drop unknown-tail excess so intermediate products stay short.
        let base = Self {
            valuation: ord,
            coeffs: base.coeffs[(ord - base.valuation) as usize..].to_vec(),
        }
        .truncate_to(rel_prec);
        let mut exp = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq).truncate_to(rel_prec),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            sq = sq.mul(&sq).truncate_to(rel_prec);
        }
        Ok(acc.expect("exp was nonzero"))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.valuation + i as i64;
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match d {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "q")?,
                1 => write!(f, "{a}*q")?,
                _ if a.is_one() => write!(f, "q^{d}")?,
                _ => write!(f, "{a}*q^{d}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}
