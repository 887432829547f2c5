//! Gamma-family special values backing the spectral multipliers.
//!
//! Three quantities are needed by the rest of the crate:
//!
//! * the complex gamma function on the strip `Re z in [-1, 10]`,
//!   `|Im z| <= 100`, accurate to about 1e-13 relative;
//! * the kernel constant attached to purely imaginary powers of the
//!   Laplacian,
//!
//!   ```text
//!   C(u) = pi^(-n/2) * 2^(iu) * Gamma((n + iu)/2) / Gamma(-iu/2),
//!   ```
//!
//!   with the continuity choice `C(0) = 0` (the denominator has a pole at
//!   `u = 0`), and the growth envelope `|C(u)| <~ (1 + |u|)^(n/2)`;
//! * the Riesz normalisation `gamma(alpha, n)` which makes convolution with
//!   `gamma(alpha, n)^-1 |x|^(alpha - n)` act as the Fourier multiplier
//!   `|xi|^(-alpha)` under the transform convention of [`crate::spectral`].
//!
//! The gamma evaluation is a 15-term rational (Lanczos-type) approximation
//! with shift `g = 607/128`, reflected onto `Re z < 1/2`, and conjugated
//! explicitly for `Im z < 0` so that `Gamma(conj z) = conj Gamma(z)` holds
//! bitwise. Unit tests pin it against identities that do not share code with
//! the approximation: the recurrence, the duplication formula, and the
//! closed-form moduli `|Gamma(iy)|^2 = pi / (y sinh(pi y))` and
//! `|Gamma(1/2 + iy)|^2 = pi / cosh(pi y)`.

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum SpecialError {
    #[error("gamma pole at non-positive integer z = {0}")]
    Pole(Complex64),
    #[error("dimension {0} is unsupported; expected 1, 2 or 3")]
    Dimension(usize),
    #[error("riesz normalisation needs 0 < alpha < n, got alpha = {alpha}, n = {n}")]
    RieszRange { alpha: f64, n: usize },
    #[error("evaluation overflowed or produced a non-finite value at z = {0}")]
    NonFinite(Complex64),
    #[error("slope fit needs 0 < lo < hi and at least 4 samples, got [{lo}, {hi}] with {count}")]
    SlopeWindow { lo: f64, hi: f64, count: usize },
}

/// Shift parameter of the rational approximation.
const LANCZOS_G: f64 = 607.0 / 128.0;

/// Partial-fraction coefficients for `g = 607/128` (15 terms).
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_188_9e-5,
    4.652_362_892_704_857_5e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_124_7e-4,
    -2.102_644_417_241_048_7e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_140_6e-5,
    3.689_918_265_953_162e-6,
];

/// Complex gamma function.
///
/// Errors on the exact poles (non-positive integers on the real axis) and on
/// overflow. Conjugate symmetry is exact by construction.
pub fn complex_gamma(z: Complex64) -> Result<Complex64, SpecialError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(SpecialError::Pole(z));
    }
    let value = gamma_upper_half(z);
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SpecialError::NonFinite(z))
    }
}

fn gamma_upper_half(z: Complex64) -> Complex64 {
    // Evaluate in the closed upper half plane and conjugate back, so the
    // symmetry Gamma(conj z) = conj Gamma(z) is exact rather than up to
    // rounding.
    if z.im < 0.0 {
        return gamma_upper_half(z.conj()).conj();
    }
    if z.re < 0.5 {
        // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z)).
        let sin_piz = (PI * z).sin();
        return PI / (sin_piz * gamma_upper_half(Complex64::new(1.0, 0.0) - z));
    }
    let mut series = Complex64::new(LANCZOS_C[0], 0.0);
    for (p, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        series += c / (z + (p as f64 - 1.0));
    }
    let zh = z - 0.5;
    let zgh = zh + LANCZOS_G;
    // Split the power to keep intermediates in range for large |Im z|.
    let half_pow = zgh.powc(0.5 * zh);
    (2.0 * PI).sqrt() * series * half_pow * (-zgh).exp() * half_pow
}

/// Kernel constant `C(u)` of the imaginary-power kernel in dimension `n`,
/// with the continuity value `C(0) = 0`.
pub fn kernel_constant(n: usize, u: f64) -> Result<Complex64, SpecialError> {
    if !(1..=3).contains(&n) {
        return Err(SpecialError::Dimension(n));
    }
    if u == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let iu = Complex64::new(0.0, u);
    let numerator = complex_gamma((n as f64 + iu) / 2.0)?;
    let denominator = complex_gamma(-iu / 2.0)?;
    let two_pow_iu = Complex64::from_polar(1.0, u * std::f64::consts::LN_2);
    let value = PI.powf(-(n as f64) / 2.0) * two_pow_iu * numerator / denominator;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SpecialError::NonFinite(iu))
    }
}

/// Least-squares slope of `log |C(u)|` against `log(1 + u)` over a log-spaced
/// window `[u_lo, u_hi]`. The envelope `|C(u)| <~ (1 + |u|)^(n/2)` predicts a
/// slope near `n/2`.
pub fn kernel_growth_slope(
    n: usize,
    u_lo: f64,
    u_hi: f64,
    count: usize,
) -> Result<f64, SpecialError> {
    if !(u_lo > 0.0 && u_hi > u_lo && count >= 4) {
        return Err(SpecialError::SlopeWindow {
            lo: u_lo,
            hi: u_hi,
            count,
        });
    }
    let log_step = (u_hi / u_lo).ln() / (count - 1) as f64;
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for i in 0..count {
        let u = u_lo * ((i as f64) * log_step).exp();
        let c = kernel_constant(n, u)?;
        xs.push((1.0 + u).ln());
        ys.push(c.norm().ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

/// Slope of the least-squares line through `(xs, ys)`.
pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    sxy / sxx
}

/// Riesz normalisation: with the convention `F(xi) = integral f exp(-i x.xi)`,
/// the distributional transform of `|x|^(alpha - n)` is
/// `gamma(alpha, n) |xi|^(-alpha)` where
///
/// ```text
/// gamma(alpha, n) = 2^alpha pi^(n/2) Gamma(alpha/2) / Gamma((n - alpha)/2),
/// ```
///
/// valid for `0 < alpha < n`. The Gaussian calibration test in the spectral
/// oracle suite pins this value numerically against a direct quadrature of
/// the multiplier path.
pub fn riesz_constant(alpha: f64, n: usize) -> Result<f64, SpecialError> {
    if !(1..=3).contains(&n) {
        return Err(SpecialError::Dimension(n));
    }
    if !(alpha > 0.0 && alpha < n as f64 && alpha.is_finite()) {
        return Err(SpecialError::RieszRange { alpha, n });
    }
    let num = complex_gamma(Complex64::new(alpha / 2.0, 0.0))?;
    let den = complex_gamma(Complex64::new((n as f64 - alpha) / 2.0, 0.0))?;
    Ok(2.0_f64.powf(alpha) * PI.powf(n as f64 / 2.0) * num.re / den.re)
}

/// Volume of the unit ball in dimension `n`.
pub fn unit_ball_volume(n: usize) -> Result<f64, SpecialError> {
    match n {
        1 => Ok(2.0),
        2 => Ok(PI),
        3 => Ok(4.0 * PI / 3.0),
        _ => Err(SpecialError::Dimension(n)),
    }
}

/// Surface area of the unit sphere in dimension `n`.
pub fn unit_sphere_area(n: usize) -> Result<f64, SpecialError> {
    match n {
        1 => Ok(2.0),
        2 => Ok(2.0 * PI),
        3 => Ok(4.0 * PI),
        _ => Err(SpecialError::Dimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn rel_err_c(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
        let t = rng.next_u64() as f64 / (u64::MAX as f64 + 1.0);
        lo + t * (hi - lo)
    }

    #[test]
    fn gamma_matches_factorials() {
        let mut expected = 1.0;
        for k in 1..=10 {
            let g = complex_gamma(Complex64::new(k as f64, 0.0)).unwrap();
            assert!(rel_err(g.re, expected) < 1e-13, "Gamma({k}) = {g}");
            assert_eq!(g.im, 0.0);
            expected *= k as f64;
        }
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = complex_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!(rel_err(g.re, PI.sqrt()) < 1e-14);
    }

    #[test]
    fn gamma_of_i_has_known_modulus() {
        // |Gamma(i)|^2 = pi / sinh(pi).
        let g = complex_gamma(Complex64::new(0.0, 1.0)).unwrap();
        assert!(rel_err(g.norm_sqr(), PI / PI.sinh()) < 1e-13);
    }

    #[test]
    fn gamma_imaginary_axis_modulus_identity() {
        // |Gamma(iy)|^2 = pi / (y sinh(pi y)).
        for &y in &[0.25, 1.0, 7.5, 40.0, 100.0] {
            let g = complex_gamma(Complex64::new(0.0, y)).unwrap();
            let exact = PI / (y * (PI * y).sinh());
            assert!(
                rel_err(g.norm_sqr(), exact) < 1e-12,
                "y = {y}: {} vs {exact}",
                g.norm_sqr()
            );
        }
    }

    #[test]
    fn gamma_critical_line_modulus_identity() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y).
        for &y in &[0.5, 3.0, 20.0, 75.0] {
            let g = complex_gamma(Complex64::new(0.5, y)).unwrap();
            let exact = PI / (PI * y).cosh();
            assert!(rel_err(g.norm_sqr(), exact) < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn gamma_recurrence_on_the_working_strip() {
        // Gamma(z + 1) = z Gamma(z) on 100 seeded points with Re z in
        // [-1, 10], 0.5 <= |Im z| <= 100.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..100 {
            let re = uniform(&mut rng, -1.0, 10.0);
            let sign = if rng.next_u64() % 2 == 0 { 1.0 } else { -1.0 };
            let im = sign * uniform(&mut rng, 0.5, 100.0);
            let z = Complex64::new(re, im);
            let lhs = complex_gamma(z + 1.0).unwrap();
            let rhs = z * complex_gamma(z).unwrap();
            assert!(rel_err_c(lhs, rhs) < 1e-12, "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn gamma_duplication_formula() {
        // Gamma(z) Gamma(z + 1/2) = 2^(1 - 2z) sqrt(pi) Gamma(2z).
        let pts = [
            Complex64::new(0.75, 0.0),
            Complex64::new(1.3, 4.0),
            Complex64::new(2.0, -17.5),
            Complex64::new(4.5, 40.0),
        ];
        for &z in &pts {
            let lhs = complex_gamma(z).unwrap() * complex_gamma(z + 0.5).unwrap();
            let factor = ((1.0 - 2.0 * z) * std::f64::consts::LN_2).exp() * PI.sqrt();
            let rhs = factor * complex_gamma(2.0 * z).unwrap();
            assert!(rel_err_c(lhs, rhs) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn gamma_conjugate_symmetry_is_bitwise() {
        let pts = [
            Complex64::new(0.3, 2.0),
            Complex64::new(-0.7, 55.0),
            Complex64::new(6.1, 0.125),
        ];
        for &z in &pts {
            let a = complex_gamma(z.conj()).unwrap();
            let b = complex_gamma(z).unwrap().conj();
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn gamma_rejects_poles() {
        for &re in &[0.0, -1.0, -2.0, -7.0] {
            let err = complex_gamma(Complex64::new(re, 0.0));
            assert!(matches!(err, Err(SpecialError::Pole(_))), "z = {re}");
        }
        // Just off the pole is merely large, not an error.
        assert!(complex_gamma(Complex64::new(-1.0 + 1e-9, 0.0)).is_ok());
    }

    #[test]
    fn kernel_constant_vanishes_at_zero() {
        for n in 1..=3 {
            assert_eq!(kernel_constant(n, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn kernel_constant_rejects_bad_dimension() {
        assert!(matches!(
            kernel_constant(0, 1.0),
            Err(SpecialError::Dimension(0))
        ));
        assert!(matches!(
            kernel_constant(4, 1.0),
            Err(SpecialError::Dimension(4))
        ));
    }

    #[test]
    fn kernel_constant_modulus_n1_closed_form() {
        // |C(u)|^2 = u tanh(pi u / 2) / (2 pi) in dimension 1; the identity
        // follows from the imaginary-axis and critical-line gamma moduli.
        for &u in &[0.3, 1.0, 4.0, 15.0, 80.0] {
            let c = kernel_constant(1, u).unwrap();
            let exact = (u * (PI * u / 2.0).tanh() / (2.0 * PI)).sqrt();
            assert!(rel_err(c.norm(), exact) < 1e-12, "u = {u}");
        }
        // Frozen spot value at u = 1.
        let c1 = kernel_constant(1, 1.0).unwrap().norm();
        let oracle = PI.powf(-0.5) * ((PI / 2.0).tanh() / 2.0).sqrt();
        assert!(rel_err(c1, oracle) < 1e-12);
        assert!(rel_err(c1, 0.382_059_324_961_090_2) < 1e-12);
    }

    #[test]
    fn kernel_constant_modulus_n2_is_linear() {
        // |C(u)| = u / (2 pi) exactly in dimension 2.
        for &u in &[0.5, 3.0, 17.0, 60.0] {
            let c = kernel_constant(2, u).unwrap();
            assert!(rel_err(c.norm(), u / (2.0 * PI)) < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn kernel_constant_modulus_n3_closed_form() {
        // |C(u)|^2 = (y^2 + 1/4) y tanh(pi y) / pi^3 with y = u/2.
        for &u in &[0.8, 5.0, 33.0] {
            let y: f64 = u / 2.0;
            let c = kernel_constant(3, u).unwrap();
            let exact = ((y * y + 0.25) * y * (PI * y).tanh() / PI.powi(3)).sqrt();
            assert!(rel_err(c.norm(), exact) < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn kernel_constant_conjugate_symmetry() {
        for n in 1..=3 {
            for &u in &[0.7, 12.0, 90.0] {
                let plus = kernel_constant(n, u).unwrap();
                let minus = kernel_constant(n, -u).unwrap();
                assert!((minus - plus.conj()).norm() < 1e-15 * plus.norm());
            }
        }
    }

    #[test]
    fn growth_slope_matches_half_dimension() {
        for n in 1..=3usize {
            let slope = kernel_growth_slope(n, 10.0, 100.0, 40).unwrap();
            assert!(
                (slope - n as f64 / 2.0).abs() <= 0.1,
                "n = {n}: slope = {slope}"
            );
        }
    }

    #[test]
    fn growth_slope_rejects_bad_window() {
        assert!(matches!(
            kernel_growth_slope(1, 10.0, 5.0, 40),
            Err(SpecialError::SlopeWindow { .. })
        ));
        assert!(matches!(
            kernel_growth_slope(1, 10.0, 100.0, 3),
            Err(SpecialError::SlopeWindow { .. })
        ));
    }

    #[test]
    fn riesz_constant_closed_values() {
        // alpha = 1/2, n = 1: the two gamma factors cancel, leaving
        // sqrt(2 pi).
        let g = riesz_constant(0.5, 1).unwrap();
        assert!(rel_err(g, (2.0 * PI).sqrt()) < 1e-13);
        // alpha = 1, n = 2: Gamma(1/2) cancels, leaving 2 pi.
        let g = riesz_constant(1.0, 2).unwrap();
        assert!(rel_err(g, 2.0 * PI) < 1e-13);
    }

    #[test]
    fn riesz_constant_rejects_out_of_range_alpha() {
        assert!(matches!(
            riesz_constant(0.0, 1),
            Err(SpecialError::RieszRange { .. })
        ));
        assert!(matches!(
            riesz_constant(1.0, 1),
            Err(SpecialError::RieszRange { .. })
        ));
        assert!(matches!(
            riesz_constant(3.5, 3),
            Err(SpecialError::RieszRange { .. })
        ));
    }

    #[test]
    fn ball_and_sphere_constants() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert!(rel_err(unit_ball_volume(2).unwrap(), PI) < 1e-15);
        assert!(rel_err(unit_sphere_area(3).unwrap(), 4.0 * PI) < 1e-15);
        assert!(matches!(
            unit_ball_volume(5),
            Err(SpecialError::Dimension(5))
        ));
    }
}
