//! Local norms of fractional images, uniform in the order and the exponent.
//!
//! One fixed bump, one spectral constant. Splitting the exact inverse
//! transform at `|xi| = 1` gives the order-uniform pointwise majorant
//!
//! `|(-Delta)^(alpha v / 2) f|
//!     <= |f_hat|_inf * mu(|xi| < 1) + L^(-n) sum_{|xi_k| >= 1} |xi_k|^alpha |f_hat(k)|`
//!
//! for every `v` in `[0, 1]` at once (`mu` is the lattice measure of the
//! low-frequency ball). On a ball `B` that yields
//! `|g_v|_{L^w(B)} <= C max(1, m_h(B))` with `m_h` the discrete mass of the
//! ball, simultaneously for all local exponents `w`. Everything here is a
//! lattice-rigorous inequality, so the verdict slack is pure roundoff.

use super::{SuiteOutcome, Verdict};
use crate::grid::{GridFunction, GridSpec, Point, SpectrumFunction};
use crate::harness::config::SuiteConfig;
use crate::harness::report::Row;
use crate::harness::{sweep, tol, HarnessError};
use crate::norms::ball_local_norm;
use crate::spectral::{forward, inverse, laplacian_power_spectrum, MultiplierPolicy};
use crate::testfns::{sample, AnalyticFunction};
use num_complex::Complex64;
use std::collections::BTreeMap;

const V_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const W_VALUES: [f64; 5] = [1.0, 2.0, 4.0, 8.0, f64::INFINITY];
/// One ball with discrete mass above one, one below.
const BALL_RADII: [f64; 2] = [2.0, 0.4];
const BALL_CENTER: Point = [0.5, 0.0, 0.0];

/// The two proof ingredients of the order-uniform majorant: the sup of the
/// transform times the lattice measure of the unit frequency ball, and the
/// high-frequency tail sum at the top order.
fn majorant_terms(s: &SpectrumFunction, alpha: f64) -> (f64, f64) {
    let spec = *s.spec();
    let inv_vol = spec.extent().powi(-(spec.n_dims() as i32));
    let mut sup_modulus = 0.0_f64;
    let mut low_count = 0usize;
    let mut tail = 0.0;
    for (idx, value) in spec.indices().zip(s.values()) {
        let r = s.frequency_norm(idx);
        sup_modulus = sup_modulus.max(value.norm());
        if r < 1.0 {
            low_count += 1;
        } else {
            tail += r.powf(alpha) * value.norm();
        }
    }
    (sup_modulus * low_count as f64 * inv_vol, tail * inv_vol)
}

fn power_image(
    f: &GridFunction,
    s: &SpectrumFunction,
    order: f64,
) -> Result<GridFunction, HarnessError> {
    if order == 0.0 {
        return Ok(f.clone());
    }
    let shifted = laplacian_power_spectrum(s, Complex64::new(order, 0.0), MultiplierPolicy::Zero)?;
    Ok(inverse(&shifted))
}

pub(crate) fn run(cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    let spec = GridSpec::new(cfg.n_dims, cfg.extent, cfg.points_per_axis)?;
    let alpha = cfg.alpha;
    if !(alpha > 0.0) {
        return Err(HarnessError::Config(
            "uniform-local-bound needs a positive order alpha".to_string(),
        ));
    }
    let f = sample(&AnalyticFunction::bump(&[0.0], 1.5, 1.0), &spec)?;
    let s = forward(&f);
    let (low_term, tail_term) = majorant_terms(&s, alpha);
    let c_uniform = low_term + tail_term;

    let ones = GridFunction::from_real_fn(spec, |_| 1.0)?;
    let masses: Vec<f64> = BALL_RADII
        .iter()
        .map(|&r| ball_local_norm(&ones, 1.0, BALL_CENTER, r))
        .collect::<Result<_, _>>()?;

    let mut out = SuiteOutcome {
        zero_mode_policy:
            "the majorant keeps the constant mode, covering the identity and the nulled powers alike"
            .to_string(),
        ..SuiteOutcome::default()
    };
    out.ball_families.insert(
        "lhs".to_string(),
        format!(
            "fixed balls r in {BALL_RADII:?} at ({}, ..), masses {masses:?}",
            BALL_CENTER[0]
        ),
    );
    out.ball_families
        .insert("rhs".to_string(), "ball-free spectral majorant".to_string());

    // locals[(v index, ball index, w index)] feeds the monotonicity check.
    let mut locals: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
    for (vi, &v) in V_VALUES.iter().enumerate() {
        let g = power_image(&f, &s, alpha * v)?;
        for (bi, &radius) in BALL_RADII.iter().enumerate() {
            let cap = c_uniform * masses[bi].max(1.0);
            for (wi, &w) in W_VALUES.iter().enumerate() {
                let local = ball_local_norm(&g, w, BALL_CENTER, radius)?;
                locals.insert((vi, bi, wi), local);
                out.rows.push(Row::new(
                    format!("bump-r{radius}"),
                    &[
                        ("v", v),
                        ("order", alpha * v),
                        // 1/w, so the sup norm is representable in JSON.
                        ("inv_w", if w.is_finite() { 1.0 / w } else { 0.0 }),
                        ("radius", radius),
                    ],
                    local,
                    cap,
                ));
            }
        }
    }

    let sup_ratio = out.rows.iter().map(|r| r.ratio).fold(0.0_f64, f64::max);
    out.verdicts.push(Verdict::bounded(
        "uniform-majorant",
        sup_ratio,
        1.0 + tol::LOCAL_BOUND_SLACK,
        "every (order, exponent, ball) local norm stays under the single spectral cap",
    ));

    // Moving to a larger local exponent can only cost the mass factor:
    // |g|_{L^{w1}(B)} <= max(1, m_h(B)) |g|_{L^{w2}(B)} for every w1 <= w2
    // (discrete Hoelder with factor m_h^(1/w1 - 1/w2)).
    let mut mono = 0.0_f64;
    for vi in 0..V_VALUES.len() {
        for (bi, _) in BALL_RADII.iter().enumerate() {
            let factor = masses[bi].max(1.0);
            for wi in 0..W_VALUES.len() {
                for wj in wi + 1..W_VALUES.len() {
                    let lo = locals[&(vi, bi, wi)];
                    let hi = locals[&(vi, bi, wj)];
                    mono = mono.max(lo / (factor * hi));
                }
            }
        }
    }
    out.verdicts.push(Verdict::bounded(
        "exponent-monotonicity",
        mono,
        1.0 + tol::CHAIN_SLACK,
        "every ordered pair of local exponents obeys the discrete power-mean inequality",
    ));

    let homogeneity = sweep::homogeneity_deviation(&f, |g| {
        let sg = forward(g);
        let image = power_image(g, &sg, alpha * 0.5)?;
        let local = ball_local_norm(&image, 4.0, BALL_CENTER, BALL_RADII[0])?;
        let (low, tail) = majorant_terms(&sg, alpha);
        Ok(local / ((low + tail) * masses[0].max(1.0)))
    })?;
    out.verdicts.push(Verdict::bounded(
        "homogeneity",
        homogeneity,
        tol::HOMOGENEITY_REL,
        "local-to-cap ratio is invariant under complex rescaling of the input",
    ));

    out.metrics
        .insert("uniform_constant".to_string(), c_uniform);
    out.metrics
        .insert("majorant_low_term".to_string(), low_term);
    out.metrics
        .insert("majorant_tail_term".to_string(), tail_term);
    for (bi, &r) in BALL_RADII.iter().enumerate() {
        out.metrics.insert(format!("mass_r{r}"), masses[bi]);
    }
    out.metrics.insert("sup_ratio".to_string(), sup_ratio);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_hold_on_the_default_grid() {
        let mut cfg = SuiteConfig::default_for("uniform-local-bound");
        cfg.points_per_axis = 256;
        let out = run(&cfg).unwrap();
        for v in &out.verdicts {
            assert!(v.passed, "{}: observed {:.3e}", v.name, v.observed);
        }
        // 5 orders x 2 balls x 5 exponents.
        assert_eq!(out.rows.len(), 50);
    }

    #[test]
    fn nonpositive_order_is_rejected() {
        let mut cfg = SuiteConfig::default_for("uniform-local-bound");
        cfg.alpha = 0.0;
        assert!(matches!(run(&cfg), Err(HarnessError::Config(_))));
    }
}
