//! Numeric evaluation of `j` on the boundary arc, the arc-angle samples of
//! Faber roots, the limit law of on-arc zeros, and quadrature cross-checks
//! of the exact constants.
//!
//! On the circular boundary piece `tau = e^{i theta}` the nome satisfies
//! `|q| = e^{-2 pi sin(theta)} <= e^{-pi sqrt 3} ~ 0.00433`, so a short
//! prefix of the exact `j` expansion evaluates `j` to far below the
//! tolerances used here; the tail is bounded by a geometric majorant whose
//! ratio is validated against the next block of exact coefficients.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::faber::MillerBasis;
use crate::modforms::{j_series, WeightDecomposition};
use crate::powersums::PowerSumsError;
use crate::realroots::{isolate_roots, root_report, IntPoly, RealRootsError};

/// Errors from arc evaluation, sampling, and quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArcDistError {
    /// Argument outside the function's domain.
    #[error("argument {0} outside the valid range {1}")]
    RangeError(f64, &'static str),
    /// The truncated series cannot meet the requested tail tolerance.
    #[error("tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBoundFailure { bound: f64, tol: f64 },
    /// Sampling requires every root on the closed arc image.
    #[error("not all Faber roots lie in [0, 1728] for k={k}, m={m}")]
    NotAllOnArc { k: i64, m: i64 },
    /// The empirical CDF of nothing is undefined.
    #[error("empty sample")]
    EmptySample,
    /// The zero-counting function is only monotone for m < (2/9) ell.
    #[error("m = {m} outside the regime m < (2/9) ell = {bound:.3}")]
    OutOfRegime { m: i64, bound: f64 },
    /// Adaptive refinement hit its depth cap.
    #[error("quadrature failed to converge (depth cap)")]
    QuadratureFailure,
    #[error(transparent)]
    Roots(#[from] RealRootsError),
    #[error(transparent)]
    Constants(#[from] PowerSumsError),
}

/// Evaluation window: `c(-1)..c(EVAL_TERMS-2)` of the `j` expansion.
const EVAL_TERMS: usize = 60;
/// Extra exact coefficients used to validate the geometric majorant.
const GUARD_TERMS: usize = 20;
/// Validated growth ratio of consecutive `j` coefficients in the guard
/// block: `c(d+1) <= (12/5) c(d)` for d >= EVAL_TERMS - 2.
const GROWTH_NUM: u32 = 12;
const GROWTH_DEN: u32 = 5;

struct JTable {
    /// `c(-1), c(0), ..., c(EVAL_TERMS-2)` as doubles.
    coeffs: Vec<f64>,
    /// Top evaluation-window coefficient, for the tail majorant.
    top: f64,
}

fn j_table() -> &'static JTable {
    static TABLE: OnceLock<JTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let exact = j_series((EVAL_TERMS + GUARD_TERMS) as i64);
        // Validate the majorant ratio on the guard block, exactly.
        for d in (EVAL_TERMS as i64 - 2)..(EVAL_TERMS + GUARD_TERMS) as i64 - 2 {
            let c0 = exact.coefficient(d).expect("inside window");
            let c1 = exact.coefficient(d + 1).expect("inside window");
            assert!(
                c1 * GROWTH_DEN <= c0 * GROWTH_NUM,
                "majorant ratio violated at d = {d}"
            );
        }
        let coeffs: Vec<f64> = (-1..EVAL_TERMS as i64 - 1)
            .map(|d| exact.coefficient(d).expect("inside window").to_f64().expect("fits"))
            .collect();
        let top = *coeffs.last().expect("nonempty");
        JTable { coeffs, top }
    })
}

/// `j(e^{i theta})` for `theta` in `[pi/3, 2 pi/3]`, where `j` is real.
///
/// The rigorous tail bound is kept below `1e-10 * max(1, |j|)`; the
/// imaginary part of the evaluated sum is asserted below the same
/// tolerance and discarded.
pub fn j_on_circle(theta: f64) -> Result<f64, ArcDistError> {
    if !(PI / 3.0 - 1e-12..=2.0 * PI / 3.0 + 1e-12).contains(&theta) {
        return Err(ArcDistError::RangeError(theta, "[pi/3, 2pi/3]"));
    }
    let table = j_table();
    // q = exp(2 pi i e^{i theta})
    let tau = Complex64::from_polar(1.0, theta);
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let qabs = q.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = q.inv(); // q^{-1}
    for c in &table.coeffs {
        sum += term * *c;
        term *= q;
    }
    // Tail: sum_{d >= D+1} c(d) |q|^d <= c(D) |q|^D * r / (1 - r) with the
    // validated ratio r = (12/5) |q|.
    let ratio = qabs * GROWTH_NUM as f64 / GROWTH_DEN as f64;
    let top_term = table.top * qabs.powi(EVAL_TERMS as i32 - 2);
    let tail = top_term * ratio / (1.0 - ratio);
    let tol = 1e-10 * sum.re.abs().max(1.0);
    if !(tail < tol) {
        return Err(ArcDistError::TailBoundFailure { bound: tail, tol });
    }
    assert!(
        sum.im.abs() < tol,
        "j should be real on the boundary circle: im = {:e} at theta = {theta}",
        sum.im
    );
    Ok(sum.re)
}

/// Inverts `x = j(e^{i theta})` on the arc `[pi/2, 2 pi/3]`, where `j`
/// decreases from 1728 to 0; plain bisection to an absolute theta
/// tolerance of 1e-9.
pub fn theta_from_x(x: f64) -> Result<f64, ArcDistError> {
    if !(0.0..=1728.0).contains(&x) {
        return Err(ArcDistError::RangeError(x, "[0, 1728]"));
    }
    // The corners are exact values of j but critical points of j(theta)
    // (j - 1728 vanishes to order 2 at i, j to order 3 at rho), so
    // bisection there would resolve theta only to the noise floor.
    if x == 0.0 {
        return Ok(2.0 * PI / 3.0);
    }
    if x == 1728.0 {
        return Ok(PI / 2.0);
    }
    let mut lo = PI / 2.0;
    let mut hi = 2.0 * PI / 3.0;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if j_on_circle(mid)? > x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Angles of the on-arc zeros of one Miller form, sorted ascending, with
/// multiplicities expanded.
#[derive(Debug, Clone)]
pub struct ArcSample {
    pub weight: WeightDecomposition,
    pub m: u64,
    pub thetas: Vec<f64>,
    /// Isolation width used for the underlying roots.
    pub root_width: BigRational,
}

/// Default isolation width for [`arc_sample`]: 2^-24.
pub fn default_root_width() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1u64 << 24))
}

/// Samples the zero angles of `f_{k,m}`. Every Faber root must lie in
/// `[0, 1728]`.
pub fn arc_sample(k: i64, m: i64) -> Result<ArcSample, ArcDistError> {
    let basis = MillerBasis::new(k).map_err(RealRootsError::from)?;
    arc_sample_with(&basis, m)
}

/// [`arc_sample`] against a prepared basis.
pub fn arc_sample_with(basis: &MillerBasis, m: i64) -> Result<ArcSample, ArcDistError> {
    let poly = basis.faber(m).map_err(RealRootsError::from)?;
    let report = root_report(&poly)?;
    if !report.all_on_arc() {
        return Err(ArcDistError::NotAllOnArc { k: basis.weight().k as i64, m });
    }
    let width = default_root_width();
    let zero = BigRational::from(BigInt::from(0));
    let wall = BigRational::from(BigInt::from(1728));
    let intervals = isolate_roots(&IntPoly::from_descending(&poly.coeffs), &zero, &wall, &width)?;
    let mut thetas = Vec::with_capacity(report.degree);
    for iv in &intervals {
        let x = iv.midpoint().to_f64().expect("midpoint in [0,1728]").clamp(0.0, 1728.0);
        let theta = theta_from_x(x)?;
        // Consistency: the isolation width plus the bisection tolerance
        // bound how far j(theta) may sit from the root.
        debug_assert!(
            (j_on_circle(theta)? - x).abs() <= 1e-4,
            "theta inversion drifted at x = {x}"
        );
        for _ in 0..iv.multiplicity {
            thetas.push(theta);
        }
    }
    thetas.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    debug_assert_eq!(thetas.len(), report.degree);
    Ok(ArcSample { weight: basis.weight(), m: m as u64, thetas, root_width: width })
}

/// The limit distribution of on-arc zero angles for index ratio `c`:
/// CDF `6 (theta - pi/2) / (pi (1-c)) + 2 c cos(theta) / (1-c)` on
/// `[pi/2, 2 pi/3]`. The density is nonnegative exactly when
/// `c <= 3/pi`.
#[derive(Debug, Clone, Copy)]
pub struct LimitLaw {
    c: f64,
}

impl LimitLaw {
    pub fn new(c: f64) -> Result<Self, ArcDistError> {
        if !(0.0..=3.0 / PI).contains(&c) {
            return Err(ArcDistError::RangeError(c, "[0, 3/pi]"));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn cdf(&self, theta: f64) -> f64 {
        6.0 * (theta - PI / 2.0) / (PI * (1.0 - self.c)) + 2.0 * self.c * theta.cos() / (1.0 - self.c)
    }

    pub fn density(&self, theta: f64) -> f64 {
        6.0 / (PI * (1.0 - self.c)) - 2.0 * self.c * theta.sin() / (1.0 - self.c)
    }
}

/// Kolmogorov-Smirnov distance between the empirical CDF of a sample and
/// the law, evaluated at the sample jump points.
pub fn ks_distance(sample: &ArcSample, law: &LimitLaw) -> Result<f64, ArcDistError> {
    if sample.thetas.is_empty() {
        return Err(ArcDistError::EmptySample);
    }
    let n = sample.thetas.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, theta) in sample.thetas.iter().enumerate() {
        let f = law.cdf(*theta);
        sup = sup.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs());
    }
    Ok(sup)
}

/// Prediction for the number of on-arc zeros with angle in
/// `[theta1, theta2]`: the increment of
/// `h(theta) = (k/2) theta + 2 pi m cos(theta)` divided by pi,
/// correct to within +-2 in the regime `m < (2/9) ell` where `h` is
/// monotone.
#[derive(Debug, Clone, Copy)]
pub struct ZeroCountBracket {
    pub predicted: f64,
    pub lo: i64,
    pub hi: i64,
}

impl ZeroCountBracket {
    pub fn contains(&self, count: usize) -> bool {
        (self.lo..=self.hi).contains(&(count as i64))
    }
}

/// The `h`-increment prediction for `f_{k,m}` over `[theta1, theta2]`.
pub fn raveh_zero_count(
    k: i64,
    m: i64,
    theta1: f64,
    theta2: f64,
) -> Result<ZeroCountBracket, ArcDistError> {
    let w = crate::modforms::weight_decompose(k).map_err(RealRootsError::from)?;
    let bound = 2.0 * w.ell as f64 / 9.0;
    if m as f64 >= bound {
        return Err(ArcDistError::OutOfRegime { m, bound });
    }
    if !(PI / 2.0 - 1e-12..=2.0 * PI / 3.0 + 1e-12).contains(&theta1) || theta2 < theta1 {
        return Err(ArcDistError::RangeError(theta1, "[pi/2, 2pi/3]"));
    }
    let h = |t: f64| 0.5 * k as f64 * t + 2.0 * PI * m as f64 * t.cos();
    let predicted = (h(theta2) - h(theta1)) / PI;
    Ok(ZeroCountBracket {
        predicted,
        lo: (predicted - 2.0 - 1e-9).ceil() as i64,
        hi: (predicted + 2.0 + 1e-9).floor() as i64,
    })
}

/// Result of one adaptive quadrature, scaled by `1728^n` to stay inside
/// floating range for any `n`.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    /// The integral of the `(j/1728)^n`-scaled integrand.
    pub scaled_value: f64,
    /// Accumulated error estimate, same scale.
    pub scaled_error: f64,
    /// The power of 1728 scaled away.
    pub scale_pow: u32,
}

impl Quadrature {
    /// The unscaled value; may overflow to infinity for large `n`.
    pub fn value(&self) -> f64 {
        self.scaled_value * 1728f64.powi(self.scale_pow as i32)
    }

    /// Relative residual against an exact integer reference, compared in
    /// scaled space. NaN-free as long as the reference is nonzero.
    pub fn relative_residual(&self, exact: &BigInt) -> f64 {
        let scale = BigInt::from(1728u32).pow(self.scale_pow);
        let reference = BigRational::new(exact.clone(), scale).to_f64().expect("finite");
        ((self.scaled_value - reference) / reference).abs()
    }
}

/// Adaptive Simpson with Richardson error control.
fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64, ArcDistError>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), ArcDistError> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> Result<f64, ArcDistError>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<(f64, f64), ArcDistError> {
        if depth > 48 {
            return Err(ArcDistError::QuadratureFailure);
        }
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok((left + right + delta / 15.0, delta.abs() / 15.0));
        }
        let (lv, le) = rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let (rv, re) = rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok((lv + rv, le + re))
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, 0)
}

/// Quadrature of `(1/2 pi) * integral over [pi/2, 2 pi/3] of j^n`, the
/// integral representation of `A_n`, scaled by `1728^n`.
pub fn quad_a(n: u32) -> Result<Quadrature, ArcDistError> {
    assert!(n >= 1);
    let f = move |t: f64| Ok((j_on_circle(t)? / 1728.0).powi(n as i32));
    let (v, e) = adaptive_simpson(&f, PI / 2.0, 2.0 * PI / 3.0, 1e-12)?;
    Ok(Quadrature {
        scaled_value: v / (2.0 * PI),
        scaled_error: e / (2.0 * PI),
        scale_pow: n,
    })
}

/// Quadrature of `- integral over [pi/3, 2 pi/3] of sin(theta) j^n`, the
/// integral representation of `B_n`, scaled by `1728^n`.
pub fn quad_b(n: u32) -> Result<Quadrature, ArcDistError> {
    assert!(n >= 1);
    let f = move |t: f64| Ok(t.sin() * (j_on_circle(t)? / 1728.0).powi(n as i32));
    let (v, e) = adaptive_simpson(&f, PI / 3.0, 2.0 * PI / 3.0, 1e-12)?;
    Ok(Quadrature { scaled_value: -v, scaled_error: e, scale_pow: n })
}

/// Moment identity check: the law's `n`-th moment of `j` against
/// `(12 A_n + c B_n) / (1 - c)`, both scaled by `1728^n`. Returns
/// `(lhs, rhs)`; `n = 0` reduces to the normalization `(1, 1)`.
pub fn moment_check(c: f64, n: u32) -> Result<(f64, f64), ArcDistError> {
    if !(0.0 < c && c < 3.0 / PI) {
        return Err(ArcDistError::RangeError(c, "(0, 3/pi)"));
    }
    let law = LimitLaw::new(c)?;
    let f = move |t: f64| Ok((j_on_circle(t)? / 1728.0).powi(n as i32) * law.density(t));
    let (lhs, _) = adaptive_simpson(&f, PI / 2.0, 2.0 * PI / 3.0, 1e-12)?;
    let rhs = if n == 0 {
        1.0
    } else {
        let a = crate::powersums::constant_a(n)?;
        let b = crate::powersums::constant_b(n);
        let scale = BigInt::from(1728u32).pow(n);
        let a_scaled = BigRational::new(a, scale.clone()).to_f64().expect("finite");
        let b_scaled = BigRational::new(b, scale).to_f64().expect("finite");
        (12.0 * a_scaled + c * b_scaled) / (1.0 - c)
    };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_at_corners() {
        // j(i) = 1728, j(rho) = 0, and the pi/3 corner mirrors rho.
        assert!((j_on_circle(PI / 2.0).unwrap() - 1728.0).abs() < 1e-6);
        assert!(j_on_circle(2.0 * PI / 3.0).unwrap().abs() < 1e-6);
        assert!(j_on_circle(PI / 3.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn j_symmetry_about_vertical() {
        for i in 0..=20 {
            let alpha = PI / 6.0 * i as f64 / 20.0;
            let a = j_on_circle(PI / 2.0 + alpha).unwrap();
            let b = j_on_circle(PI / 2.0 - alpha).unwrap();
            assert!((a - b).abs() < 1e-8, "alpha = {alpha}: {a} vs {b}");
        }
    }

    #[test]
    fn j_monotone_on_arc() {
        let steps = 1000;
        let mut last = f64::INFINITY;
        for i in 0..=steps {
            let theta = PI / 2.0 + (2.0 * PI / 3.0 - PI / 2.0) * i as f64 / steps as f64;
            let v = j_on_circle(theta).unwrap();
            assert!(v < last, "not decreasing at step {i}");
            last = v;
        }
    }

    #[test]
    fn j_range_error() {
        assert!(matches!(j_on_circle(0.1), Err(ArcDistError::RangeError(..))));
    }

    #[test]
    fn theta_inversion_corners_and_roundtrip() {
        assert!((theta_from_x(1728.0).unwrap() - PI / 2.0).abs() < 1e-8);
        assert!((theta_from_x(0.0).unwrap() - 2.0 * PI / 3.0).abs() < 1e-8);
        let t = theta_from_x(720.0).unwrap();
        assert!((j_on_circle(t).unwrap() - 720.0).abs() < 1e-5);
        assert!(matches!(theta_from_x(-1.0), Err(ArcDistError::RangeError(..))));
    }

    #[test]
    fn arc_sample_examples() {
        let s = arc_sample(12, 0).unwrap();
        assert_eq!(s.thetas.len(), 1);
        let expected = theta_from_x(720.0).unwrap();
        assert!((s.thetas[0] - expected).abs() < 1e-6);

        let s = arc_sample(12, 1).unwrap();
        assert!(s.thetas.is_empty());

        let s = arc_sample(24, 0).unwrap();
        assert_eq!(s.thetas.len(), 2);
        assert!(s.thetas[0] < s.thetas[1]);
    }

    #[test]
    fn arc_sample_rejects_off_arc() {
        // k = 12*32, m = 31 has its root at -24 < 0.
        assert!(matches!(
            arc_sample(12 * 32, 31),
            Err(ArcDistError::NotAllOnArc { .. })
        ));
    }

    #[test]
    fn limit_law_normalization() {
        for c in [0.0, 0.05, 0.1, 0.2, 3.0 / PI - 1e-9] {
            let law = LimitLaw::new(c).unwrap();
            assert!(law.cdf(PI / 2.0).abs() < 1e-12);
            assert!((law.cdf(2.0 * PI / 3.0) - 1.0).abs() < 1e-12);
            for i in 0..=100 {
                let theta = PI / 2.0 + PI / 6.0 * i as f64 / 100.0;
                assert!(law.density(theta) >= -1e-12, "c={c} theta={theta}");
            }
        }
        assert!(LimitLaw::new(1.1).is_err());
    }

    #[test]
    fn ks_distance_of_exact_quantiles() {
        // Points at the law's (i - 1/2)/N quantiles give distance 1/(2N).
        let law = LimitLaw::new(0.1).unwrap();
        let n = 40;
        let mut thetas = Vec::new();
        for i in 1..=n {
            let target = (i as f64 - 0.5) / n as f64;
            // invert the cdf by bisection
            let (mut lo, mut hi) = (PI / 2.0, 2.0 * PI / 3.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if law.cdf(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            thetas.push(0.5 * (lo + hi));
        }
        let sample = ArcSample {
            weight: crate::modforms::weight_decompose(12).unwrap(),
            m: 0,
            thetas,
            root_width: default_root_width(),
        };
        let d = ks_distance(&sample, &law).unwrap();
        assert!((d - 1.0 / (2.0 * n as f64)).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn ks_distance_empty_sample() {
        let sample = ArcSample {
            weight: crate::modforms::weight_decompose(12).unwrap(),
            m: 1,
            thetas: vec![],
            root_width: default_root_width(),
        };
        let law = LimitLaw::new(0.1).unwrap();
        assert!(matches!(ks_distance(&sample, &law), Err(ArcDistError::EmptySample)));
    }

    #[test]
    fn bracket_full_interval() {
        // Over the whole arc the increment is ell - m + k'/12 within +-2.
        let b = raveh_zero_count(1800, 10, PI / 2.0, 2.0 * PI / 3.0).unwrap();
        let ell = 150.0;
        assert!((b.predicted - (ell - 10.0)).abs() < 1e-9);
        assert!(b.contains(140) && !b.contains(143));
    }

    #[test]
    fn bracket_degenerate_and_additive() {
        let b = raveh_zero_count(1800, 10, PI / 2.0, PI / 2.0).unwrap();
        assert_eq!(b.predicted, 0.0);
        assert!(b.contains(0) && b.contains(2) && !b.contains(3));
        // additivity across a midpoint split
        let mid = PI / 2.0 + PI / 12.0;
        let full = raveh_zero_count(1800, 10, PI / 2.0, 2.0 * PI / 3.0).unwrap();
        let left = raveh_zero_count(1800, 10, PI / 2.0, mid).unwrap();
        let right = raveh_zero_count(1800, 10, mid, 2.0 * PI / 3.0).unwrap();
        assert!((left.predicted + right.predicted - full.predicted).abs() < 1e-9);
    }

    #[test]
    fn bracket_out_of_regime() {
        // m >= (2/9) ell
        assert!(matches!(
            raveh_zero_count(1800, 40, PI / 2.0, 2.0 * PI / 3.0),
            Err(ArcDistError::OutOfRegime { .. })
        ));
    }

    #[test]
    fn quadrature_reproduces_a1_b1() {
        let qa = quad_a(1).unwrap();
        assert!(qa.relative_residual(&BigInt::from(60)) < 1e-6);
        assert!((qa.value() - 60.0).abs() < 1e-3);
        let qb = quad_b(1).unwrap();
        assert!(qb.relative_residual(&BigInt::from(-744)) < 1e-6);
        assert!((qb.value() + 744.0).abs() < 1e-2);
    }

    #[test]
    fn moment_check_examples() {
        // c = 0.1, n = 1: rhs = (720 - 74.4)/0.9 = 717.333...
        let (lhs, rhs) = moment_check(0.1, 1).unwrap();
        assert!((rhs * 1728.0 - 717.333333333).abs() < 1e-6);
        assert!((lhs - rhs).abs() < 1e-6 * rhs.abs());
        // normalization at n = 0
        let (lhs, rhs) = moment_check(0.2, 0).unwrap();
        assert_eq!(rhs, 1.0);
        assert!((lhs - 1.0).abs() < 1e-9);
    }
}
