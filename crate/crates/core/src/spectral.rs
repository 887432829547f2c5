//! Complex powers of the Laplacian as Fourier multipliers, plus an
//! independent quadrature oracle.
//!
//! The forward transform follows the convention
//! `F(xi) = integral f(x) exp(-i x . xi) dx`, realised on the periodic box
//! as `F(xi_k) = h^n (-1)^(k_0+...+k_{n-1}) DFT[f](k)`. The sign factor is
//! the phase `exp(i pi m)` of the box offset `x_0 = -L/2`; it is exact
//! because `m` and `k` share parity when `N` is even. The inverse carries
//! `L^-n` so that `inverse(forward(f)) == f` up to FFT roundoff and
//! Parseval reads `h^n sum |f|^2 = L^-n sum |F|^2`.
//!
//! `(-Delta)^(z/2)` multiplies the spectrum by `|xi|^z = exp(z ln |xi|)`.
//! The zero mode has no continuum meaning for `Re z <= 0`; the
//! [`MultiplierPolicy`] decides between forcing it to zero and failing when
//! the input actually carries a constant component. Forcing to zero kills
//! the lattice mean, so comparisons involving negative or imaginary powers
//! are made against mean-corrected references throughout the test suites.

use crate::grid::{GridFunction, Point, SpectrumFunction};
use crate::testfns::{AnalyticFunction, GaussianComponent};
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("Riesz range violated: power {z} has Re z = {re} but requires -Re z < n = {n}")]
    RieszRange { z: Complex64, re: f64, n: usize },
    #[error("multiplier |xi|^z with z = {z} is singular at the zero mode, whose coefficient {coefficient} is nonzero")]
    SingularZeroMode {
        z: Complex64,
        coefficient: Complex64,
    },
    #[error("radial multiplier returned a non-finite value {value} at |xi| = {radius}")]
    NonFiniteMultiplier { radius: f64, value: Complex64 },
    #[error("quadrature oracle needs a closed-form transform (gaussians and their sums/dilates/translates)")]
    OracleNeedsTransform,
    #[error("quadrature oracle in dimension {n} is restricted to origin-centered components evaluated at x = 0")]
    OracleNotRadial { n: usize },
    #[error("oracle power must satisfy Re z > -n, got Re z = {re} in dimension {n}")]
    OracleRange { re: f64, n: usize },
    #[error("oracle tail bound {bound:e} did not reach {target:e} within the truncation budget")]
    TailBound { bound: f64, target: f64 },
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// Treatment of the `xi = 0` coefficient for singular multipliers
/// (`|xi|^z` with `Re z <= 0`, `z != 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierPolicy {
    /// Force the zero mode to 0 and proceed. This is the default; it
    /// subtracts the lattice mean of the input.
    Zero,
    /// Fail if the input has a nonzero zero mode where the multiplier is
    /// singular.
    SkipError,
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft(len, direction)
}

/// In-place multidimensional FFT over a row-major cube, one axis at a time.
fn transform_axes(values: &mut [Complex64], n_dims: usize, per_axis: usize, dir: FftDirection) {
    let fft = plan(per_axis, dir);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for axis in 0..n_dims {
        let stride = per_axis.pow((n_dims - 1 - axis) as u32);
        if stride == 1 {
            for chunk in values.chunks_exact_mut(per_axis) {
                fft.process_with_scratch(chunk, &mut scratch);
            }
        } else {
            let block = stride * per_axis;
            let mut line = vec![Complex64::default(); per_axis];
            for block_start in (0..values.len()).step_by(block) {
                for offset in 0..stride {
                    let base = block_start + offset;
                    for (t, slot) in line.iter_mut().enumerate() {
                        *slot = values[base + t * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (t, v) in line.iter().enumerate() {
                        values[base + t * stride] = *v;
                    }
                }
            }
        }
    }
}

/// `(-1)^(sum of axis indices)`, the exact box-offset phase.
fn parity_sign(idx: [usize; 3], n_dims: usize) -> f64 {
    let s: usize = idx[..n_dims].iter().sum();
    if s % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Discrete realisation of `F(xi) = integral fexp(-i x . xi) dx`.
pub fn forward(f: &GridFunction) -> SpectrumFunction {
    let spec = *f.spec();
    let mut values = f.values().to_vec();
    transform_axes(
        &mut values,
        spec.n_dims(),
        spec.points_per_axis(),
        FftDirection::Forward,
    );
    let h_n = spec.cell_volume();
    for (slot, idx) in values.iter_mut().zip(spec.indices()) {
        *slot *= h_n * parity_sign(idx, spec.n_dims());
    }
    SpectrumFunction::from_parts(spec, values)
}

fn inverse_values(s: &SpectrumFunction) -> Vec<Complex64> {
    let spec = *s.spec();
    let mut values = s.values().to_vec();
    for (slot, idx) in values.iter_mut().zip(spec.indices()) {
        *slot *= parity_sign(idx, spec.n_dims());
    }
    transform_axes(
        &mut values,
        spec.n_dims(),
        spec.points_per_axis(),
        FftDirection::Inverse,
    );
    let scale = spec.extent().powi(-(spec.n_dims() as i32));
    for slot in values.iter_mut() {
        *slot *= scale;
    }
    values
}

/// Exact inverse of [`forward`] on the lattice (up to FFT roundoff).
pub fn inverse(s: &SpectrumFunction) -> GridFunction {
    GridFunction::from_parts(*s.spec(), inverse_values(s))
}

/// Multiplies a spectrum by `|xi|^z`.
///
/// `z = 0` is the identity (multiplier 1 everywhere, including the zero
/// mode). For `Re z > 0` the zero mode is 0 by continuity; for other
/// nonzero `z` the policy applies. Negative real parts must stay in the
/// Riesz range `-Re z < n`.
pub fn laplacian_power_spectrum(
    s: &SpectrumFunction,
    z: Complex64,
    policy: MultiplierPolicy,
) -> Result<SpectrumFunction, SpectralError> {
    if z == Complex64::default() {
        return Ok(s.clone());
    }
    let n = s.spec().n_dims();
    if z.re < 0.0 && -z.re >= n as f64 {
        return Err(SpectralError::RieszRange { z, re: z.re, n });
    }
    let spec = *s.spec();
    let mut values = s.values().to_vec();
    for (flat, idx) in spec.indices().enumerate() {
        let r = s.frequency_norm(idx);
        if r == 0.0 {
            values[flat] = if z.re > 0.0 {
                Complex64::default()
            } else {
                match policy {
                    MultiplierPolicy::Zero => Complex64::default(),
                    MultiplierPolicy::SkipError => {
                        let coefficient = values[flat];
                        if coefficient == Complex64::default() {
                            coefficient
                        } else {
                            return Err(SpectralError::SingularZeroMode { z, coefficient });
                        }
                    }
                }
            };
        } else {
            values[flat] *= (z * r.ln()).exp();
        }
    }
    Ok(SpectrumFunction::from_parts(spec, values))
}

/// `(-Delta)^(z/2) f` through the spectral path. `z = 0` returns the input
/// unchanged.
pub fn laplacian_power(
    f: &GridFunction,
    z: Complex64,
    policy: MultiplierPolicy,
) -> Result<GridFunction, SpectralError> {
    if z == Complex64::default() {
        return Ok(f.clone());
    }
    let s = laplacian_power_spectrum(&forward(f), z, policy)?;
    Ok(GridFunction::from_values(*f.spec(), inverse_values(&s))?)
}

/// Riesz potential `I_alpha = (-Delta)^(-alpha/2)`, `0 < alpha < n`.
pub fn riesz_potential(
    f: &GridFunction,
    alpha: f64,
    policy: MultiplierPolicy,
) -> Result<GridFunction, SpectralError> {
    let z = Complex64::new(-alpha, 0.0);
    if !(alpha > 0.0 && alpha < f.spec().n_dims() as f64) {
        return Err(SpectralError::RieszRange {
            z,
            re: z.re,
            n: f.spec().n_dims(),
        });
    }
    laplacian_power(f, z, policy)
}

/// `laplacian_power(laplacian_power(f, z1), z2)`, the two-step composite.
///
/// On the lattice this equals `laplacian_power(f, z1 + z2)` whenever both
/// steps are admissible, because multipliers multiply pointwise; the zero
/// mode is killed on both paths for nonzero powers.
pub fn compose_powers(
    f: &GridFunction,
    z1: Complex64,
    z2: Complex64,
    policy: MultiplierPolicy,
) -> Result<GridFunction, SpectralError> {
    laplacian_power(&laplacian_power(f, z1, policy)?, z2, policy)
}

/// Multiplies a spectrum by an arbitrary radial symbol `m(|xi|)`.
///
/// A non-finite symbol value at the zero mode falls back to the policy; a
/// non-finite value at any other radius is an error.
pub fn apply_radial_multiplier(
    s: &SpectrumFunction,
    m: impl Fn(f64) -> Complex64,
    policy: MultiplierPolicy,
) -> Result<SpectrumFunction, SpectralError> {
    let spec = *s.spec();
    let mut values = s.values().to_vec();
    for (flat, idx) in spec.indices().enumerate() {
        let r = s.frequency_norm(idx);
        let symbol = m(r);
        if symbol.re.is_finite() && symbol.im.is_finite() {
            values[flat] *= symbol;
        } else if r == 0.0 {
            values[flat] = match policy {
                MultiplierPolicy::Zero => Complex64::default(),
                MultiplierPolicy::SkipError => {
                    let coefficient = values[flat];
                    if coefficient == Complex64::default() {
                        coefficient
                    } else {
                        return Err(SpectralError::NonFiniteMultiplier {
                            radius: r,
                            value: symbol,
                        });
                    }
                }
            };
        } else {
            return Err(SpectralError::NonFiniteMultiplier {
                radius: r,
                value: symbol,
            });
        }
    }
    Ok(SpectrumFunction::from_parts(spec, values))
}

/// 16-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on
/// the Legendre recurrence.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let k = 16;
        (1..=k)
            .map(|i| {
                let mut x = (PI * (i as f64 - 0.25) / (k as f64 + 0.5)).cos();
                for _ in 0..60 {
                    let (p, dp) = legendre(k, x);
                    let step = p / dp;
                    x -= step;
                    if step.abs() < 1e-16 {
                        break;
                    }
                }
                let (_, dp) = legendre(k, x);
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

fn legendre(k: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for m in 2..=k {
        let m = m as f64;
        let next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * p_prev) / m;
        p_prev = p;
        p = next;
    }
    let dp = k as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn gl_panel(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::default();
    for &(x, w) in gauss_legendre() {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct OracleIntegrand<'a> {
    comps: &'a [GaussianComponent],
    n_dims: usize,
    z: Complex64,
    x: f64,
    radial: bool,
}

impl OracleIntegrand<'_> {
    /// `r^z G(r)` for `r > 0`, where `G` collects the transform values (and
    /// the angular factor in the radial case).
    fn eval(&self, r: f64) -> Complex64 {
        let power = (self.z * r.ln()).exp();
        if self.radial {
            let g: Complex64 = self
                .comps
                .iter()
                .map(|c| c.transform([r, 0.0, 0.0], self.n_dims))
                .sum();
            power * g * r.powi(self.n_dims as i32 - 1)
        } else {
            let plus: Complex64 = self
                .comps
                .iter()
                .map(|c| c.transform([r, 0.0, 0.0], 1))
                .sum();
            let minus: Complex64 = self
                .comps
                .iter()
                .map(|c| c.transform([-r, 0.0, 0.0], 1))
                .sum();
            let phase = Complex64::from_polar(1.0, self.x * r);
            power * (plus * phase + minus * phase.conj())
        }
    }

    /// Local panel width limiting the phase change per panel to about 1.5.
    fn panel_width(&self, r: f64, sigma_max: f64, c_max: f64) -> f64 {
        1.5 / (1.0 + self.x.abs() + c_max + sigma_max * sigma_max * r + self.z.norm() / r)
    }
}

/// Evaluates `(2 pi)^-n integral |xi|^z F(xi) exp(i x . xi) dxi` by panel
/// quadrature, for descriptors with closed-form Gaussian transforms.
///
/// In one dimension arbitrary evaluation points are supported. In two and
/// three dimensions the integral is reduced to a radial one, which requires
/// origin-centered components and `x = 0`.
pub fn quadrature_oracle(
    f: &AnalyticFunction,
    n_dims: usize,
    z: Complex64,
    points: &[Point],
) -> Result<Vec<Complex64>, SpectralError> {
    let comps = f
        .gaussian_components()
        .ok_or(SpectralError::OracleNeedsTransform)?;
    if z.re <= -(n_dims as f64) {
        return Err(SpectralError::OracleRange {
            re: z.re,
            n: n_dims,
        });
    }
    let radial = n_dims > 1;
    if radial {
        let centered = comps
            .iter()
            .all(|c| c.center[..n_dims].iter().all(|&v| v == 0.0));
        let at_origin = points.iter().all(|p| p[..n_dims].iter().all(|&v| v == 0.0));
        if !(centered && at_origin) {
            return Err(SpectralError::OracleNotRadial { n: n_dims });
        }
    }
    let sigma_min = comps.iter().map(|c| c.sigma).fold(f64::INFINITY, f64::min);
    let sigma_max = comps.iter().map(|c| c.sigma).fold(0.0, f64::max);
    let c_max = comps
        .iter()
        .map(|c| c.center[..n_dims].iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let envelope_scale: f64 = comps
        .iter()
        .map(|c| c.amplitude.abs() * (2.0 * PI * c.sigma * c.sigma).powf(n_dims as f64 / 2.0))
        .sum();
    // Outside the inner-unit interval the powers on the integrand are
    // r^(Re z + n - 1) radially, r^(Re z) on the line.
    let power_exp = z.re + if radial { n_dims as f64 - 1.0 } else { 0.0 };
    let surface = match n_dims {
        1 => 1.0, // both half-lines handled explicitly
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    };
    let overall = surface / (2.0 * PI).powi(n_dims as i32);

    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let integrand = OracleIntegrand {
            comps: &comps,
            n_dims,
            z,
            x: p[0],
            radial,
        };
        // Singular part (0, 1]: substitute r = exp(s); the factor
        // exp((z + power_exp + 1) s) decays as s -> -inf because
        // Re z + power_exp + 1 > 0 in the admissible range.
        let decay = power_exp + 1.0;
        let s_min = -45.0 / decay;
        let mut total = Complex64::default();
        let log_width = 1.5 / (1.0 + z.im.abs());
        let mut s = s_min;
        while s < 0.0 {
            let s_next = (s + log_width).min(0.0);
            total += gl_panel(|t| integrand.eval(t.exp()) * t.exp(), s, s_next);
            s = s_next;
        }
        // Smooth part [1, R] with adaptive truncation: the Gaussian envelope
        // gives tail(R) <= env(R) R^power_exp / (sigma_min^2 R) * 2 once
        // sigma_min^2 R^2 > power_exp + 1.
        let mut r_edge = 1.0;
        let mut r_target = 2.0 + 8.0 / sigma_min + c_max;
        let mut tail;
        let mut budget = 0;
        loop {
            while r_edge < r_target {
                let w = integrand.panel_width(r_edge, sigma_max, c_max);
                let r_next = (r_edge + w).min(r_target);
                total += gl_panel(|t| integrand.eval(t), r_edge, r_next);
                r_edge = r_next;
            }
            let a = 0.5 * sigma_min * sigma_min;
            tail = envelope_scale * r_edge.powf(power_exp) * (-a * r_edge * r_edge).exp()
                / (a * r_edge);
            let target = 1e-9 * (total.norm() * overall).max(1e-12 * envelope_scale);
            if tail * overall <= target {
                break;
            }
            budget += 1;
            if budget > 8 {
                return Err(SpectralError::TailBound {
                    bound: tail * overall,
                    target,
                });
            }
            r_target *= 1.5;
        }
        out.push(total * overall);
    }
    Ok(out)
}
