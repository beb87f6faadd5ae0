//! Exact computation with the Faber polynomials of Miller-basis modular
//! forms.
//!
//! The library computes q-expansions of the classical generators with
//! arbitrary-precision integer coefficients, extracts Faber polynomials by
//! greedy coefficient peeling, verifies the linear law for the power sums
//! of their roots, locates the roots exactly with Sturm chains, and
//! compares the on-arc zero angles against the limiting distribution.
//!
//! Modules mirror those layers:
//!
//! - [`qseries`]: truncated Laurent series over the integers.
//! - [`modforms`]: the discriminant, the six Eisenstein weights, `j`.
//! - [`faber`]: Faber polynomials, greedy and closed-form.
//! - [`powersums`]: Newton's identities and the constants `A_n, B_n, C_n`.
//! - [`realroots`]: square-free decomposition, Sturm chains, root counts,
//!   the arc scanners.
//! - [`arcdist`]: numeric `j` on the arc, angle samples, the limit law,
//!   quadrature cross-checks.
//! - [`report`]: machine-readable report envelopes behind the `faberlab`
//!   binary.
//!
//! Run the examples (`cargo run --release --example <name>`) for guided
//! tours of each capability.

pub mod arcdist;
pub mod faber;
pub mod modforms;
pub mod powersums;
pub mod qseries;
pub mod realroots;
pub mod report;

pub use arcdist::{arc_sample, j_on_circle, ks_distance, theta_from_x, ArcSample, LimitLaw};
pub use faber::{faber_closed_form, faber_greedy, miller_form_qexp, FaberPolynomial, MillerBasis};
pub use modforms::{
    delta_series, eisenstein_series, j_series, weight_decompose, WeightDecomposition,
};
pub use powersums::{
    constant_a, constant_b, constant_c, constant_c0_oracle, linearity_constants, power_sums,
    verify_linearity, LinearityConstants,
};
pub use qseries::LaurentSeries;
pub use realroots::{
    count_roots, isolate_roots, min_m_off_arc, root_report, scan_no_large_roots,
    squarefree_decompose, IntPoly, RootCountReport, SturmChain,
};
