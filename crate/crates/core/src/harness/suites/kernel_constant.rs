//! Growth of the imaginary-power kernel constant, plus the gamma-function
//! self-checks that everything downstream of `kernel_constant` relies on.
//!
//! The kernel modulus `|C(u)|` grows like `(1 + |u|)^(n/2)`; the suite
//! tabulates it over the configured sweep, fits the log-log slope from the
//! rows it reports, and checks the recurrence and reflection identities of
//! the gamma function at awkward complex probes. This is the one suite with
//! no lattice, no corpus, and therefore no homogeneity audit: there is no
//! test function to rescale.

use super::{SuiteOutcome, Verdict};
use crate::harness::config::SuiteConfig;
use crate::harness::report::Row;
use crate::harness::{tol, HarnessError};
use crate::special::{complex_gamma, kernel_constant, least_squares_slope};
use num_complex::Complex64;
use std::f64::consts::PI;

const GAMMA_PROBES: [Complex64; 6] = [
    Complex64::new(0.3, 0.7),
    Complex64::new(1.4, -0.6),
    Complex64::new(-1.6, 0.4),
    Complex64::new(2.5, 1.2),
    Complex64::new(0.5, 3.0),
    Complex64::new(-0.5, -2.0),
];

pub(crate) fn run(cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    let mut out = SuiteOutcome {
        zero_mode_policy: "not applicable (no transform in this suite)".to_string(),
        ..SuiteOutcome::default()
    };
    if cfg.u_values.len() < 2 {
        return Err(HarnessError::Config(
            "kernel-constant needs at least two u values for a slope fit".to_string(),
        ));
    }

    // Growth rows: |C(u)| against the predicted power of (1 + |u|).
    for n in 1..=3usize {
        let half = n as f64 / 2.0;
        let mut ln_x = Vec::with_capacity(cfg.u_values.len());
        let mut ln_y = Vec::with_capacity(cfg.u_values.len());
        for &u in &cfg.u_values {
            let c = kernel_constant(n, u)?;
            let modulus = c.norm();
            out.rows.push(Row::new(
                format!("kernel-n{n}"),
                &[("n", n as f64), ("u", u)],
                modulus,
                (1.0 + u.abs()).powf(half),
            ));
            ln_x.push((1.0 + u.abs()).ln());
            ln_y.push(modulus.ln());
        }
        let slope = least_squares_slope(&ln_x, &ln_y);
        out.slopes.insert(format!("growth-n{n}"), slope);
        out.verdicts.push(Verdict::bounded(
            &format!("growth-slope-n{n}"),
            (slope - half).abs(),
            tol::KERNEL_SLOPE_TOL,
            format!("fitted |C(u)| exponent {slope:.4} against n/2 = {half}"),
        ));
    }

    // Gamma identity rows: the ratio column carries the relative deviation,
    // so the verdict is a direct bound on the rows.
    for z in GAMMA_PROBES {
        let g = complex_gamma(z)?;
        let g_next = complex_gamma(z + 1.0)?;
        let recurrence_ref = z * g;
        out.rows.push(Row::new(
            "gamma-recurrence",
            &[("re", z.re), ("im", z.im)],
            (g_next - recurrence_ref).norm(),
            recurrence_ref.norm(),
        ));

        let g_mirror = complex_gamma(Complex64::new(1.0, 0.0) - z)?;
        let reflection_ref = Complex64::new(PI, 0.0) / (PI * z).sin();
        out.rows.push(Row::new(
            "gamma-reflection",
            &[("re", z.re), ("im", z.im)],
            (g * g_mirror - reflection_ref).norm(),
            reflection_ref.norm(),
        ));
    }
    let worst_gamma = out
        .rows
        .iter()
        .filter(|r| r.function_id.starts_with("gamma-"))
        .map(|r| r.ratio)
        .fold(0.0_f64, f64::max);
    out.verdicts.push(Verdict::bounded(
        "gamma-identities",
        worst_gamma,
        tol::GAMMA_IDENTITY_REL,
        "worst relative deviation of recurrence and reflection over the probe set",
    ));

    // The frozen modulus at u = 1 in one dimension, as a drift canary.
    let c1 = kernel_constant(1, 1.0)?.norm();
    out.metrics.insert("abs_c1_n1".to_string(), c1);
    out.verdicts.push(Verdict::bounded(
        "kernel-modulus-pinned",
        (c1 / 0.382_059_324_961_090_2 - 1.0).abs(),
        tol::GAMMA_IDENTITY_REL,
        "|C(1)| in one dimension against its frozen value",
    ));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_passes_every_verdict() {
        let cfg = SuiteConfig::default_for("kernel-constant");
        let out = run(&cfg).unwrap();
        for v in &out.verdicts {
            assert!(v.passed, "{}: observed {:.3e}", v.name, v.observed);
        }
        assert_eq!(out.slopes.len(), 3);
    }

    #[test]
    fn too_short_sweep_is_a_config_error() {
        let mut cfg = SuiteConfig::default_for("kernel-constant");
        cfg.u_values = vec![10.0];
        assert!(matches!(run(&cfg), Err(HarnessError::Config(_))));
    }
}
