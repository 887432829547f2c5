//! Pinned tolerances for every verdict the harness can emit.
//!
//! One table, one place. Suites and the acceptance gate must read these
//! constants instead of inlining literals, so a tolerance change is a
//! reviewable one-line diff here.
//!
//! | constant | guards | kind |
//! |---|---|---|
//! | [`GAUSSIAN_FORWARD_REL`] | forward transform vs closed form | relative, per mode |
//! | [`ISOMETRY_REL`] | mean-corrected `L^2` isometry of imaginary powers | relative |
//! | [`IDENTITY_ABS`] | `z = 0` multiplier is the identity | absolute |
//! | [`COMPOSE_REL`] | two-step vs one-step powers, `L^2` | relative |
//! | [`ORACLE_REL`] | multiplier vs quadrature oracle, effective support | relative to sup |
//! | [`KERNEL_SLOPE_TOL`] | growth exponent of the kernel constant | absolute on slope |
//! | [`GAMMA_IDENTITY_REL`] | recurrence / reflection self-checks | relative |
//! | [`MORREY_EQUALS_LEBESGUE_REL`] | `p = q` collapse of the Morrey scan | relative |
//! | [`DYADIC_RATIO_REL`] | dyadic dilation of the Morrey norm | relative on ratio |
//! | [`CHI_HALVING_WINDOW`] | first-order convergence of the indicator norm | relative window |
//! | [`DECAY_SLOPE_TOL`] | far-field decay exponent of kernels | absolute on slope |
//! | [`DECAY_DRIFT_TOL`] | slope stability under box doubling | absolute on slope |
//! | [`ROUNDTRIP_REL`] | unit-symbol multiplier roundtrip | relative, pointwise |
//! | [`ZERO_MODE_OFFSET_REL`] | predicted mean offset of inverse pairs | relative |
//! | [`DILATION_SPREAD`] | scaling sweeps of inequality ratios, base grid | relative spread |
//! | [`DILATION_SPREAD_REFINED`] | same sweeps after `--refine` | relative spread |
//! | [`REFINE_DRIFT`] | sup-ratio movement between base and refined grids | relative |
//! | [`INTERP_ENDPOINT_REL`] | interpolation ratio at `theta in {0, 1}` | relative |
//! | [`L2_RATIO_SLACK`] | all-`L^2` interpolation ratio ceiling | relative slack |
//! | [`LOCAL_BOUND_SLACK`] | uniform local bound ratio ceiling | relative slack |
//! | [`HOMOGENEITY_REL`] | scalar homogeneity audit of suite ratios | relative |
//! | [`WITNESS_RADIUS_REL`] | argmax radius location checks | relative |
//! | [`EXACT_MATCH`] | lattice identities that hold bit for bit | exact |
//! | [`IU_TREND_SLOPE_MAX`] | growth trend of the normalized imaginary-power ratio | slope ceiling |
//! | [`HOLDER_AUDIT_SLACK`] | pointwise-Hoelder intermediate bound | relative slack |
//! | [`HARDY_ALPHA_PROBE_REL`] | Hardy ratio at `alpha = 0.01` | relative |
//! | [`OLSEN_TRANSLATED_BAND`] | off-origin Olsen sup vs centered sup | relative band |
//! | [`CLASSICAL_HEISENBERG_CEILING`] | all-`L^2` uncertainty ratio | absolute ceiling |
//! | [`CHAIN_SLACK`] | norm-chain inequalities, float cushion | relative slack |

/// Forward transform of a band-limited Gaussian against its closed-form
/// transform, per frequency, relative to the true value.
pub const GAUSSIAN_FORWARD_REL: f64 = 1e-8;

/// Mean-corrected `L^2` norm deviation under `(-Delta)^{iu/2}`.
pub const ISOMETRY_REL: f64 = 1e-9;

/// `laplacian_power` with `z = 0` against the input, absolute per point.
pub const IDENTITY_ABS: f64 = 1e-12;

/// `compose_powers(z1, z2)` against `laplacian_power(z1 + z2)`, relative
/// `L^2` on the grid.
pub const COMPOSE_REL: f64 = 1e-10;

/// Grid multiplier against the quadrature oracle on the effective support,
/// relative to the sup of the oracle values.
pub const ORACLE_REL: f64 = 1e-4;

/// Fitted growth exponent of `|C(u)|` over `1 + |u|`, against `n/2`.
pub const KERNEL_SLOPE_TOL: f64 = 0.1;

/// Gamma recurrence and reflection identities, relative.
pub const GAMMA_IDENTITY_REL: f64 = 1e-12;

/// Morrey norm with `p = q` against the global Lebesgue norm, relative.
pub const MORREY_EQUALS_LEBESGUE_REL: f64 = 1e-12;

/// Morrey norm ratio under dyadic dilation against `2^(-n/q)`, relative.
pub const DYADIC_RATIO_REL: f64 = 0.02;

/// Window around exact halving for the indicator-norm error under grid
/// refinement: the error ratio must land in `[0.5 (1 - w), 0.5 (1 + w)]`.
pub const CHI_HALVING_WINDOW: f64 = 0.3;

/// Fitted far-field decay exponent against `-(n + alpha)`.
pub const DECAY_SLOPE_TOL: f64 = 0.2;

/// Movement of the fitted decay exponent when the box doubles.
pub const DECAY_DRIFT_TOL: f64 = 0.05;

/// Roundtrip through `apply_radial_multiplier` with the unit symbol,
/// relative max error.
pub const ROUNDTRIP_REL: f64 = 1e-9;

/// Observed two-step inversion error against the predicted zero-mode
/// offset `|mean(f)|`, relative.
pub const ZERO_MODE_OFFSET_REL: f64 = 0.1;

/// Spread of an inequality ratio across the dilation sweep
/// `lambda in {1/4 .. 4}`, per function, base grid.
pub const DILATION_SPREAD: f64 = 0.05;

/// Same spread on the refined grid; refinement must tighten the sweep.
pub const DILATION_SPREAD_REFINED: f64 = 0.025;

/// Relative movement of a suite's sup ratio between base and refined grids.
pub const REFINE_DRIFT: f64 = 0.1;

/// Interpolation ratio at the endpoints `theta = 0` and `theta = 1`.
pub const INTERP_ENDPOINT_REL: f64 = 1e-12;

/// Ceiling slack for the interpolation ratio when every space is `L^2`.
pub const L2_RATIO_SLACK: f64 = 1e-9;

/// Ceiling slack for the uniform local bound ratio; the majorant is a
/// rigorous discrete bound, so only float arithmetic can push it over 1.
pub const LOCAL_BOUND_SLACK: f64 = 1e-12;

/// Scalar homogeneity audit: ratios must be invariant under scaling the
/// input function by a nonzero complex constant.
pub const HOMOGENEITY_REL: f64 = 1e-10;

/// Location of argmax radii against continuum predictions.
pub const WITNESS_RADIUS_REL: f64 = 0.1;

/// Fraction of a dilation-sweep margin that `--refine` must not lose:
/// `spread_refined <= spread_base * (1 + REFINE_TIGHTENING_SLACK)` plus an
/// absolute floor for spreads near zero.
pub const REFINE_TIGHTENING_SLACK: f64 = 0.05;

/// Absolute floor used together with [`REFINE_TIGHTENING_SLACK`].
pub const REFINE_TIGHTENING_FLOOR: f64 = 1e-4;

/// Identities that hold bit for bit on the lattice (`u = 0` imaginary
/// power, interpolation endpoints, the small-regime reduction of the
/// general uncertainty suite): the observed deviation must be exactly zero.
pub const EXACT_MATCH: f64 = 0.0;

/// Fitted slope of `ln sup_f R(f, u)` against `ln(1 + |u|)` beyond
/// `|u| = 10`: the normalized imaginary-power ratio must not grow.
pub const IU_TREND_SLOPE_MAX: f64 = 0.05;

/// Ceiling slack for the pointwise-Hoelder intermediate bound in the
/// small-order uncertainty suite; the split is exact per ball, the slack
/// covers the finite sup family and float powers.
pub const HOLDER_AUDIT_SLACK: f64 = 0.02;

/// Hardy ratio probed at `alpha = 0.01` with the mean-free input: both
/// operators are near the identity there, so the ratio sits within 2% of 1.
pub const HARDY_ALPHA_PROBE_REL: f64 = 0.02;

/// A translated (off-origin) input may not push the Olsen sup ratio above
/// the centered sup by more than this discretization band.
pub const OLSEN_TRANSLATED_BAND: f64 = 0.1;

/// Ceiling for the classical all-`L^2` uncertainty ratio; the continuum
/// maximum is `sqrt(2)`, attained by Gaussians, plus discretization room.
pub const CLASSICAL_HEISENBERG_CEILING: f64 = 1.45;

/// Cushion for norm-chain inequalities that are exact on the lattice up to
/// float powers (`L^q` against the endpoint interpolation, Morrey against
/// `L^q` after the counted-mass correction).
pub const CHAIN_SLACK: f64 = 1e-12;
