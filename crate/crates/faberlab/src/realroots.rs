//! Exact real-root location for integer polynomials.
//!
//! Sturm chains are built from the subresultant pseudo-remainder sequence
//! (content growth stays single-exponential without any gcd per step) with
//! the signs corrected so that consecutive elements are positively
//! proportional to the textbook chain. Sign-variation counts use the
//! dropped-zero convention, which counts distinct roots on half-open
//! intervals `(a, b]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::faber::{FaberError, FaberPolynomial, MillerBasis};
use crate::modforms::ModFormsError;

/// Errors from root location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealRootsError {
    /// Root counting over the zero polynomial is meaningless.
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Weight(#[from] ModFormsError),
    #[error(transparent)]
    Faber(#[from] FaberError),
}

/// Dense integer polynomial, coefficients in ascending degree order.
/// The zero polynomial is the empty vector; otherwise the top coefficient
/// is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Coefficients given highest degree first (the Faber layout).
    pub fn from_descending(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().rev().cloned().collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of `p(x)` at a rational point, computed in integers as
    /// `sign(sum c_i num^i den^{d-i})` for `den > 0`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let num = x.numer();
        let den = x.denom();
        let mut acc = self.coeffs.last().expect("nonzero").clone();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev().skip(1) {
            dpow *= den;
            acc = acc * num + c * &dpow;
        }
        sign_of(&acc)
    }

    /// Sign at +infinity (leading coefficient) or -infinity
    /// (flipped for odd degree).
    pub fn sign_at_inf(&self, positive: bool) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let s = sign_of(self.leading());
        if positive || self.coeffs.len() % 2 == 1 {
            s
        } else {
            -s
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i as u64))
                .collect(),
        )
    }

    /// Positive gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content-free part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Self::new(out)
    }

    /// `x^shift * self`.
    fn shifted(&self, shift: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); shift];
        out.extend(self.coeffs.iter().cloned());
        Self { coeffs: out }
    }

    /// Divides every coefficient by `s`, asserting exactness.
    fn div_scalar_exact(&self, s: &BigInt) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(s);
                    debug_assert!(r.is_zero(), "inexact scalar division in PRS");
                    q
                })
                .collect(),
        }
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`, exactly.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let da = self.degree().expect("nonzero dividend");
        let db = b.degree().expect("nonzero divisor");
        assert!(da >= db);
        let lb = b.leading().clone();
        let mut r = self.clone();
        let mut remaining = (da - db + 1) as u32;
        while !r.is_zero() && r.degree().expect("nonzero") >= db {
            let dr = r.degree().expect("nonzero");
            let lr = r.leading().clone();
            r = r.scale(&lb).sub(&b.shifted(dr - db).scale(&lr));
            remaining -= 1;
            debug_assert!(r.is_zero() || r.degree().unwrap() < dr);
        }
        if remaining > 0 {
            r = r.scale(&lb.pow(remaining));
        }
        r
    }

    /// Exact polynomial division; `None` when `other` does not divide
    /// `self` in `Q[x]` with an integer quotient.
    pub fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let db = other.degree().expect("nonzero");
        let lb = other.leading();
        let mut rem = self.clone();
        let mut q = vec![
            BigInt::zero();
            self.coeffs.len().checked_sub(other.coeffs.len())? + 1
        ];
        while !rem.is_zero() {
            let dr = rem.degree().expect("nonzero");
            if dr < db {
                return None;
            }
            let (qc, r) = rem.leading().div_rem(lb);
            if !r.is_zero() {
                return None;
            }
            q[dr - db] = qc.clone();
            rem = rem.sub(&other.shifted(dr - db).scale(&qc));
        }
        Some(Self::new(q))
    }
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Primitive gcd (positive leading coefficient) via the subresultant PRS.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let (mut f, mut g) = if a.degree() >= b.degree() {
        (a.primitive(), b.primitive())
    } else {
        (b.primitive(), a.primitive())
    };
    let mut gg = BigInt::one();
    let mut hh = BigInt::one();
    loop {
        let delta = (f.degree().expect("nonzero") - g.degree().expect("nonzero")) as u32;
        let r = f.pseudo_rem(&g);
        if r.is_zero() {
            return g.primitive();
        }
        let next = r.div_scalar_exact(&(&gg * hh.pow(delta)));
        gg = g.leading().clone();
        hh = if delta == 0 {
            hh
        } else {
            (gg.pow(delta)).div_rem(&hh.pow(delta - 1)).0
        };
        f = g;
        g = next;
        if g.degree() == Some(0) {
            return IntPoly::new(vec![BigInt::one()]);
        }
    }
}

/// An endpoint for interval root counting: a rational or an infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl Bound {
    pub fn finite_int(x: i64) -> Self {
        Bound::Finite(BigRational::from(BigInt::from(x)))
    }

    fn lt(&self, other: &Bound) -> bool {
        match (self, other) {
            (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, Bound::PosInf) => false,
            (Bound::NegInf, _) | (_, Bound::PosInf) => true,
            (Bound::PosInf, _) | (_, Bound::NegInf) => false,
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
        }
    }
}

/// The sign-corrected subresultant remainder sequence of a square-free
/// polynomial. `V(a) - V(b)` (dropped-zero sign variations) is the number
/// of distinct real roots in `(a, b]`.
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    /// Builds the chain for `p` (expected square-free; for a polynomial with
    /// repeated roots the chain still counts the distinct roots of the
    /// square-free part only when built on that part).
    pub fn new(p: &IntPoly) -> Result<Self, RealRootsError> {
        if p.is_zero() {
            return Err(RealRootsError::ZeroPolynomial);
        }
        let mut polys = vec![p.primitive()];
        if p.degree() == Some(0) {
            return Ok(Self { polys });
        }
        polys.push(p.derivative().primitive());
        // Subresultant recurrence on the unsigned sequence; eps tracks the
        // sign correction making element i+2 positively proportional to
        // -(t_i mod t_{i+1}).
        let mut eps = vec![1i8, 1];
        let mut gg = BigInt::one();
        let mut hh = BigInt::one();
        loop {
            let n = polys.len();
            let f = &polys[n - 2];
            let g = &polys[n - 1];
            if g.degree().is_none() || g.degree() == Some(0) {
                break;
            }
            // Undo the stored sign corrections: the recurrence runs on the
            // raw subresultant elements.
            let f_raw = if eps[n - 2] < 0 { f.neg() } else { f.clone() };
            let g_raw = if eps[n - 1] < 0 { g.neg() } else { g.clone() };
            let delta = (f_raw.degree().expect("deg >= 1") - g_raw.degree().expect("deg >= 1")) as u32;
            let r = f_raw.pseudo_rem(&g_raw);
            if r.is_zero() {
                break;
            }
            let divisor = &gg * hh.pow(delta);
            let next_raw = r.div_scalar_exact(&divisor);
            // phi = lc(g)^(delta+1) / (gg * hh^delta) relates next_raw to the
            // true remainder.
            let phi_sign = sign_of(g_raw.leading()).pow((delta + 1) as u32)
                * sign_of(&divisor);
            let next_eps = -eps[n - 2] * phi_sign;
            gg = g_raw.leading().clone();
            hh = if delta == 0 {
                hh
            } else {
                gg.pow(delta).div_rem(&hh.pow(delta - 1)).0
            };
            let stored = if next_eps < 0 { next_raw.neg() } else { next_raw };
            polys.push(stored);
            eps.push(next_eps);
        }
        Ok(Self { polys })
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    /// The remainder sequence terminates in a nonzero constant exactly when
    /// the input was square-free (the last element is the gcd of the input
    /// and its derivative, up to sign and content).
    pub fn certifies_squarefree(&self) -> bool {
        self.polys.last().map(|p| p.degree() == Some(0)).unwrap_or(false)
    }

    /// Sign variations at a point, zeros dropped.
    pub fn variations_at(&self, x: &Bound) -> usize {
        let mut count = 0usize;
        let mut last = 0i8;
        for p in &self.polys {
            let s = match x {
                Bound::NegInf => p.sign_at_inf(false),
                Bound::PosInf => p.sign_at_inf(true),
                Bound::Finite(r) => p.sign_at(r),
            };
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots of the (square-free) polynomial in `(lo, hi]`.
    pub fn count_in(&self, lo: &Bound, hi: &Bound) -> usize {
        debug_assert!(lo.lt(hi));
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }
}

/// Square-free decomposition `sign * prod factor_i ^ multiplicity_i`,
/// equal to the input up to a positive rational scalar. Factors are
/// primitive with positive leading coefficient, pairwise coprime and
/// square-free; constant factors are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub sign: i8,
    pub factors: Vec<(IntPoly, u32)>,
}

impl SquarefreeDecomposition {
    /// Total multiplicity of `x` as a root of the original polynomial.
    pub fn multiplicity_at(&self, x: &BigRational) -> u32 {
        self.factors
            .iter()
            .filter(|(f, _)| f.sign_at(x) == 0)
            .map(|(_, m)| *m)
            .sum()
    }
}

/// Yun's algorithm over Q, integer-primitive at the boundary.
pub fn squarefree_decompose(poly: &IntPoly) -> Result<SquarefreeDecomposition, RealRootsError> {
    if poly.is_zero() {
        return Err(RealRootsError::ZeroPolynomial);
    }
    let sign = sign_of(poly.leading());
    let f = poly.primitive();
    if f.degree() == Some(0) {
        return Ok(SquarefreeDecomposition { sign, factors: Vec::new() });
    }
    let g = poly_gcd(&f, &f.derivative());
    if g.degree() == Some(0) {
        return Ok(SquarefreeDecomposition { sign, factors: vec![(f, 1)] });
    }
    // Yun's cascade. The exact cofactors stay integral because every
    // divisor is a primitive factor of a primitive polynomial.
    let mut factors = Vec::new();
    let mut w = f.exact_div(&g).expect("gcd divides");
    let mut y = f.derivative().exact_div(&g).expect("gcd divides the derivative");
    let mut i = 1u32;
    loop {
        let z = y.sub(&w.derivative());
        if z.is_zero() {
            if w.degree() != Some(0) {
                factors.push((w.primitive(), i));
            }
            break;
        }
        let a = poly_gcd(&w, &z);
        if a.degree() != Some(0) {
            factors.push((a.primitive(), i));
        }
        w = w.exact_div(&a).expect("gcd divides w");
        y = z.exact_div(&a).expect("gcd divides z");
        i += 1;
    }
    Ok(SquarefreeDecomposition { sign, factors })
}

/// Number of real roots of `poly` in `(lo, hi]`, counted with multiplicity.
pub fn count_roots(poly: &IntPoly, lo: &Bound, hi: &Bound) -> Result<usize, RealRootsError> {
    assert!(lo.lt(hi), "empty interval");
    if poly.is_zero() {
        return Err(RealRootsError::ZeroPolynomial);
    }
    // Square-free inputs (the common case) need no decomposition: the
    // chain of the polynomial itself both certifies that and counts.
    let chain = SturmChain::new(poly)?;
    if chain.certifies_squarefree() {
        return Ok(chain.count_in(lo, hi));
    }
    let decomp = squarefree_decompose(poly)?;
    let mut total = 0usize;
    for (factor, mult) in &decomp.factors {
        if factor.degree() == Some(0) {
            continue;
        }
        let chain = SturmChain::new(factor)?;
        total += chain.count_in(lo, hi) * *mult as usize;
    }
    Ok(total)
}

/// Multiplicity-aware location counts for the roots of a Faber polynomial,
/// split by the three real ranges the j-line decomposes into: negative
/// reals, the arc image `[0, 1728]`, and `(1728, oo)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCountReport {
    pub degree: usize,
    /// Roots in `(-oo, 0)`.
    pub neg: usize,
    /// Roots in the closed interval `[0, 1728]`.
    pub arc: usize,
    /// Roots in `(1728, oo)`.
    pub large: usize,
    /// Non-real roots (always even).
    pub nonreal: usize,
    /// Multiplicity of a root exactly at 0.
    pub hits_zero: usize,
    /// Multiplicity of a root exactly at 1728.
    pub hits_1728: usize,
}

impl RootCountReport {
    /// True exactly when every root lies in `[0, 1728]` — vacuously true in
    /// degree 0.
    pub fn all_on_arc(&self) -> bool {
        self.arc == self.degree
    }

    pub fn boundary_hit(&self) -> bool {
        self.hits_zero > 0 || self.hits_1728 > 0
    }
}

/// Classifies the roots of an arbitrary nonzero integer polynomial.
pub fn root_report_poly(poly: &IntPoly) -> Result<RootCountReport, RealRootsError> {
    let degree = poly.degree().ok_or(RealRootsError::ZeroPolynomial)?;
    if degree == 0 {
        return Ok(RootCountReport {
            degree,
            neg: 0,
            arc: 0,
            large: 0,
            nonreal: 0,
            hits_zero: 0,
            hits_1728: 0,
        });
    }
    let zero = BigRational::zero();
    let wall = BigRational::from(BigInt::from(1728));
    let (mut neg, mut arc, mut large) = (0usize, 0usize, 0usize);
    let (mut hits_zero, mut hits_1728) = (0usize, 0usize);
    // Square-free fast path: one chain, no gcd pass.
    let own_chain = SturmChain::new(poly)?;
    let parts: Vec<(IntPoly, u32, SturmChain)> = if own_chain.certifies_squarefree() {
        vec![(poly.primitive(), 1, own_chain)]
    } else {
        squarefree_decompose(poly)?
            .factors
            .into_iter()
            .filter(|(f, _)| f.degree() != Some(0))
            .map(|(f, m)| {
                let chain = SturmChain::new(&f)?;
                Ok((f, m, chain))
            })
            .collect::<Result<_, RealRootsError>>()?
    };
    for (factor, mult, chain) in &parts {
        let mult = *mult as usize;
        let at_zero = (factor.sign_at(&zero) == 0) as usize * mult;
        let at_wall = (factor.sign_at(&wall) == 0) as usize * mult;
        let b_zero = Bound::Finite(zero.clone());
        let b_wall = Bound::Finite(wall.clone());
        // (-oo, 0] includes a root at 0; shift it into the arc bucket.
        neg += chain.count_in(&Bound::NegInf, &b_zero) * mult - at_zero;
        arc += chain.count_in(&b_zero, &b_wall) * mult + at_zero;
        large += chain.count_in(&b_wall, &Bound::PosInf) * mult;
        hits_zero += at_zero;
        hits_1728 += at_wall;
    }
    let real = neg + arc + large;
    debug_assert!(real <= degree);
    Ok(RootCountReport {
        degree,
        neg,
        arc,
        large,
        nonreal: degree - real,
        hits_zero,
        hits_1728,
    })
}

/// [`root_report_poly`] for a Faber polynomial.
pub fn root_report(poly: &FaberPolynomial) -> Result<RootCountReport, RealRootsError> {
    root_report_poly(&IntPoly::from_descending(&poly.coeffs))
}

/// Outcome of scanning one weight for the minimal off-arc index.
#[derive(Debug, Clone)]
pub struct MinMOffArc {
    /// Smallest `m` whose Faber polynomial has a root off `[0, 1728]`
    /// (or a non-real root); `None` when every `m` passes.
    pub min_m: Option<u64>,
    /// Whether every `m` in `[min_m, ell - 1]` also fails the arc test.
    /// The degree-zero index `m = ell` has no roots and is excluded.
    pub monotone: bool,
    /// The indices `m > min_m` (up to `ell - 1`) that pass the arc test
    /// despite the minimum having been crossed.
    pub rebounds: Vec<u64>,
    /// Indices with a root exactly at 0 or 1728, with the report kept for
    /// inspection; corner roots count as on-arc.
    pub boundary_cases: Vec<(u64, RootCountReport)>,
}

/// Scans `m = 0..=ell` upward for the smallest index failing the arc test,
/// and records whether the failure is monotone beyond it.
pub fn min_m_off_arc(k: i64) -> Result<MinMOffArc, RealRootsError> {
    let basis = MillerBasis::new(k)?;
    min_m_off_arc_with(&basis)
}

/// [`min_m_off_arc`] against a prepared basis, for scans.
pub fn min_m_off_arc_with(basis: &MillerBasis) -> Result<MinMOffArc, RealRootsError> {
    let ell = basis.weight().ell;
    let mut min_m = None;
    let mut rebounds = Vec::new();
    let mut boundary_cases = Vec::new();
    for m in 0..=ell {
        let report = root_report(&basis.faber(m as i64)?)?;
        if report.boundary_hit() {
            boundary_cases.push((m, report.clone()));
        }
        let on_arc = report.all_on_arc();
        match (min_m, on_arc) {
            (None, false) => min_m = Some(m),
            (Some(_), true) if m < ell => rebounds.push(m),
            _ => {}
        }
    }
    Ok(MinMOffArc { min_m, monotone: rebounds.is_empty(), rebounds, boundary_cases })
}

/// The tabulated minimal index `m(12*ell) = 10*s + m_r` for
/// `ell = 16*s + r > 30`.
pub fn conjectured_min_m(ell: u64) -> Option<u64> {
    const M_R: [u64; 16] = [4, 3, 4, 5, 6, 7, 6, 7, 8, 9, 10, 9, 10, 11, 12, 13];
    if ell <= 30 {
        return None;
    }
    Some(10 * (ell / 16) + M_R[(ell % 16) as usize])
}

/// One `(k, m)` pair whose Faber polynomial has a root in `[1728, oo)`.
#[derive(Debug, Clone)]
pub struct LargeRootViolation {
    pub k: u64,
    pub m: u64,
    pub count_above: usize,
    pub hit_1728: usize,
}

/// Checks that no Faber polynomial of the listed weights has a root in
/// `[1728, oo)`; any hit (including exactly 1728) is reported.
pub fn scan_no_large_roots(ks: &[i64]) -> Result<(usize, Vec<LargeRootViolation>), RealRootsError> {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for &k in ks {
        let basis = MillerBasis::new(k)?;
        let ell = basis.weight().ell;
        for m in 0..=ell {
            let report = root_report(&basis.faber(m as i64)?)?;
            checked += 1;
            if report.large > 0 || report.hits_1728 > 0 {
                violations.push(LargeRootViolation {
                    k: k as u64,
                    m,
                    count_above: report.large,
                    hit_1728: report.hits_1728,
                });
            }
        }
    }
    Ok((checked, violations))
}

/// A rational interval known to contain exactly one distinct real root.
#[derive(Debug, Clone)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Multiplicity of the root in the original polynomial.
    pub multiplicity: u32,
}

impl IsolatingInterval {
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from(BigInt::from(2))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Isolates the distinct real roots of `poly` in the closed interval
/// `[lo, hi]` into disjoint rational intervals of length at most `width`,
/// each with the square-free factor changing sign across it. Roots landing
/// exactly on `lo`, `hi`, or a bisection point get a symmetric interval
/// around them (which may poke slightly past `[lo, hi]`).
pub fn isolate_roots(
    poly: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Result<Vec<IsolatingInterval>, RealRootsError> {
    assert!(width.is_positive());
    assert!(lo < hi);
    if poly.is_zero() {
        return Err(RealRootsError::ZeroPolynomial);
    }
    // Square-free fast path mirrors root_report_poly.
    let own_chain = SturmChain::new(poly)?;
    let factors: Vec<(IntPoly, u32, SturmChain)> = if own_chain.certifies_squarefree() {
        vec![(poly.primitive(), 1, own_chain)]
    } else {
        squarefree_decompose(poly)?
            .factors
            .into_iter()
            .filter(|(f, _)| f.degree() != Some(0))
            .map(|(f, m)| {
                let chain = SturmChain::new(&f)?;
                Ok((f, m, chain))
            })
            .collect::<Result<_, RealRootsError>>()?
    };
    let mut out: Vec<(IsolatingInterval, usize)> = Vec::new();
    for (fi, (factor, mult, chain)) in factors.iter().enumerate() {
        for (a, b) in isolate_squarefree(factor, chain, lo, hi, width) {
            out.push((IsolatingInterval { lo: a, hi: b, multiplicity: *mult }, fi));
        }
    }
    out.sort_by(|x, y| x.0.lo.cmp(&y.0.lo));
    // Factors are coprime, so the roots are distinct; shrink overlapping
    // neighbours (each around its own factor's root) until they separate.
    let mut separated = true;
    for _ in 0..512 {
        separated = true;
        for i in 1..out.len() {
            if out[i].0.lo < out[i - 1].0.hi {
                separated = false;
                let (left, right) = out.split_at_mut(i);
                let (iv_a, fa) = &mut left[i - 1];
                shrink(&factors[*fa].0, iv_a);
                let (iv_b, fb) = &mut right[0];
                shrink(&factors[*fb].0, iv_b);
            }
        }
        if separated {
            break;
        }
        out.sort_by(|x, y| x.0.lo.cmp(&y.0.lo));
    }
    assert!(separated, "isolating intervals failed to separate");
    Ok(out.into_iter().map(|(iv, _)| iv).collect())
}

/// Halves an isolating interval around the single root of its square-free
/// factor.
fn shrink(factor: &IntPoly, interval: &mut IsolatingInterval) {
    let mid = interval.midpoint();
    let s_mid = factor.sign_at(&mid);
    if s_mid == 0 {
        // Exact hit: re-centre a tighter interval on the root.
        let quarter = interval.width() / BigRational::from(BigInt::from(4));
        interval.lo = &mid - &quarter;
        interval.hi = &mid + &quarter;
        return;
    }
    if s_mid == factor.sign_at(&interval.lo) {
        interval.lo = mid;
    } else {
        interval.hi = mid;
    }
}

/// Sturm-guided bisection of `[lo, hi]` for one square-free factor.
fn isolate_squarefree(
    factor: &IntPoly,
    chain: &SturmChain,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let mut out = Vec::new();
    // Endpoint roots first; interior isolation then works on (lo, hi).
    for point in [lo, hi] {
        if factor.sign_at(point) == 0 {
            out.push(pin_exact_root(factor, chain, point, width));
        }
    }
    // The count in (lo, hi) exact: subtract a root exactly at hi.
    let b_lo = Bound::Finite(lo.clone());
    let b_hi = Bound::Finite(hi.clone());
    let at_hi = (factor.sign_at(hi) == 0) as usize;
    let interior = chain.count_in(&b_lo, &b_hi) - at_hi;
    let mut stack = vec![(lo.clone(), hi.clone(), interior)];
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => continue,
            1 => {
                // A single root strictly inside (a, b): refine by signs.
                out.push(refine_single(factor, chain, a, b, width));
            }
            _ => {
                let mid = (&a + &b) / BigRational::from(BigInt::from(2));
                if factor.sign_at(&mid) == 0 {
                    out.push(pin_exact_root(factor, chain, &mid, width));
                }
                let b_a = Bound::Finite(a.clone());
                let b_mid = Bound::Finite(mid.clone());
                let at_mid = (factor.sign_at(&mid) == 0) as usize;
                let left = chain.count_in(&b_a, &b_mid) - at_mid;
                let right = count - left - at_mid;
                stack.push((a, mid.clone(), left));
                stack.push((mid, b, right));
            }
        }
    }
    out
}

/// Shrinks `(a, b)` around its single strictly-interior root down to
/// `width`, ending with differing nonzero endpoint signs. The endpoints
/// themselves may be (other) roots of the factor; the chain detaches them
/// first.
fn refine_single(
    factor: &IntPoly,
    chain: &SturmChain,
    mut a: BigRational,
    mut b: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from(BigInt::from(2));
    // Detach a zero endpoint: halve toward it until the interior root is
    // cut off from it, using exact counts.
    while factor.sign_at(&a) == 0 || factor.sign_at(&b) == 0 {
        let mid = (&a + &b) / &two;
        if factor.sign_at(&mid) == 0 {
            // The midpoint is the interior root itself.
            return pin_exact_root(factor, chain, &mid, width);
        }
        let in_left = chain.count_in(&Bound::Finite(a.clone()), &Bound::Finite(mid.clone()));
        if in_left == 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    let mut sa = factor.sign_at(&a);
    loop {
        if &b - &a <= *width {
            debug_assert_ne!(sa, factor.sign_at(&b));
            return (a, b);
        }
        let mid = (&a + &b) / &two;
        let sm = factor.sign_at(&mid);
        if sm == 0 {
            return pin_exact_root(factor, chain, &mid, width);
        }
        if sm == sa {
            a = mid;
            sa = sm;
        } else {
            b = mid;
        }
    }
}

/// Builds a symmetric isolating interval around an exactly-known root.
fn pin_exact_root(
    factor: &IntPoly,
    chain: &SturmChain,
    root: &BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from(BigInt::from(2));
    let mut delta = width / &two;
    loop {
        let lo = root - &delta;
        let hi = root + &delta;
        let clean_ends = factor.sign_at(&lo) != 0 && factor.sign_at(&hi) != 0;
        if clean_ends
            && chain.count_in(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone())) == 1
        {
            return (lo, hi);
        }
        delta /= &two;
    }
}
