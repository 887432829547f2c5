//! Interpolation of fractional orders between Morrey norms.
//!
//! For endpoint pairs `(p0, q0)` and `(p1, q1)` the validator derives the
//! intermediate pair `(p, q)` at each `theta`, and the suite checks
//!
//! `|(-Delta)^(alpha theta / 2) f|_{M^p_q}
//!     <= |f|_{M^{p0}_{q0}}^(1-theta) |(-Delta)^(alpha/2) f|_{M^{p1}_{q1}}^theta`
//!
//! as a reported ratio. Exact anchors: at `theta` in {0, 1} the two sides
//! coincide up to floating-point residue, and on the all-`L^2` tuple the
//! inequality is plain spectral Cauchy-Schwarz, so the ratio may not exceed
//! one by more than roundoff.

use super::{Ctx, SuiteOutcome, Verdict};
use crate::exponents::{validate_interpolation, ExponentTuple};
use crate::grid::{GridFunction, SpectrumFunction};
use crate::harness::config::SuiteConfig;
use crate::harness::corpus::{seam_audit, standard_corpus, sweep_inflation};
use crate::harness::report::Row;
use crate::harness::{sweep, tol, HarnessError};
use crate::norms::morrey_norm;
use crate::spectral::{forward, inverse, laplacian_power_spectrum, MultiplierPolicy};
use crate::testfns::sample;
use num_complex::Complex64;
use rayon::prelude::*;

const L2_TUPLE: (f64, f64, f64, f64) = (2.0, 2.0, 2.0, 2.0);
const L2_ALPHA: f64 = 2.0;
/// The dilation sweep fixes one interior point of the (alpha, theta) square.
const DILATION_ALPHA: f64 = 1.0;
const DILATION_THETA: f64 = 0.5;

fn fractional(s: &SpectrumFunction, order: f64) -> Result<GridFunction, HarnessError> {
    let shifted = laplacian_power_spectrum(s, Complex64::new(order, 0.0), MultiplierPolicy::Zero)?;
    Ok(inverse(&shifted))
}

fn pair_label(t: &(f64, f64, f64, f64)) -> String {
    format!("p{}q{}-p{}q{}", t.0, t.1, t.2, t.3)
}

pub(crate) fn run(cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    if cfg.interpolation_tuples.is_empty()
        || cfg.theta_values.is_empty()
        || cfg.alpha_values.is_empty()
    {
        return Err(HarnessError::Config(
            "interpolation needs endpoint tuples, theta values and alpha values".to_string(),
        ));
    }
    let ctx = Ctx::new(cfg)?;
    let corpus = standard_corpus(cfg.n_dims, cfg.corpus_size, cfg.corpus_seed);
    seam_audit(&corpus, &ctx.spec, sweep_inflation(&cfg.lambda_values))?;

    // Validate every (pair, theta) combination up front; the derived (p, q)
    // drive the scans below and every tuple is echoed into the report.
    let mut validated: Vec<Vec<ExponentTuple>> = Vec::new();
    let mut tuples = Vec::new();
    for pair in &cfg.interpolation_tuples {
        let mut per_theta = Vec::new();
        for &theta in &cfg.theta_values {
            let t = validate_interpolation(cfg.n_dims, pair.0, pair.1, pair.2, pair.3, theta)?;
            tuples.push(serde_json::to_value(&t).map_err(HarnessError::Serde)?);
            per_theta.push(t);
        }
        validated.push(per_theta);
    }
    let l2_tuple = validate_interpolation(
        cfg.n_dims,
        L2_TUPLE.0,
        L2_TUPLE.1,
        L2_TUPLE.2,
        L2_TUPLE.3,
        DILATION_THETA,
    )?;
    tuples.push(serde_json::to_value(&l2_tuple).map_err(HarnessError::Serde)?);

    struct Prepared {
        id: String,
        f: GridFunction,
        spectrum: SpectrumFunction,
        /// One base norm per endpoint pair, in config order.
        bases: Vec<f64>,
    }
    let prepared: Vec<Prepared> = corpus
        .par_iter()
        .map(|entry| {
            let f = sample(&entry.descriptor, &ctx.spec)?;
            let spectrum = forward(&f);
            let bases = cfg
                .interpolation_tuples
                .iter()
                .map(|pair| Ok(morrey_norm(&f, pair.0, pair.1, &ctx.family)?.value))
                .collect::<Result<Vec<_>, HarnessError>>()?;
            Ok(Prepared {
                id: entry.id.clone(),
                f,
                spectrum,
                bases,
            })
        })
        .collect::<Result<_, HarnessError>>()?;

    // Main sweep: one parallel cell per (function, pair, alpha); the theta
    // loop inside reuses the high-order image.
    let cells: Vec<(usize, usize, f64)> = (0..prepared.len())
        .flat_map(|i| {
            (0..cfg.interpolation_tuples.len())
                .flat_map(move |pi| cfg.alpha_values.iter().map(move |&a| (i, pi, a)))
        })
        .collect();
    let main_rows: Vec<Vec<Row>> = cells
        .par_iter()
        .map(|&(i, pi, alpha)| {
            let prep = &prepared[i];
            let pair = cfg.interpolation_tuples[pi];
            let high = fractional(&prep.spectrum, alpha)?;
            let high_norm = morrey_norm(&high, pair.2, pair.3, &ctx.family)?.value;
            let mut rows = Vec::with_capacity(cfg.theta_values.len());
            for (ti, &theta) in cfg.theta_values.iter().enumerate() {
                let tuple = &validated[pi][ti];
                let (p, q) = (tuple.value("p"), tuple.value("q"));
                let lhs = if theta == 0.0 {
                    morrey_norm(&prep.f, p, q, &ctx.family)?.value
                } else if theta == 1.0 {
                    morrey_norm(&high, p, q, &ctx.family)?.value
                } else {
                    let mid = fractional(&prep.spectrum, alpha * theta)?;
                    morrey_norm(&mid, p, q, &ctx.family)?.value
                };
                let rhs = prep.bases[pi].powf(1.0 - theta) * high_norm.powf(theta);
                rows.push(Row::new(
                    prep.id.clone(),
                    &[
                        ("alpha", alpha),
                        ("theta", theta),
                        ("p0", pair.0),
                        ("q0", pair.1),
                        ("p1", pair.2),
                        ("q1", pair.3),
                    ],
                    lhs,
                    rhs,
                ));
            }
            Ok(rows)
        })
        .collect::<Result<_, HarnessError>>()?;

    // All-L^2 anchor: here both sides collapse to plain L^2 norms and the
    // inequality is spectral Cauchy-Schwarz, exact on the lattice.
    let l2_rows: Vec<Row> = prepared
        .par_iter()
        .map(|prep| {
            let base = morrey_norm(&prep.f, L2_TUPLE.0, L2_TUPLE.1, &ctx.family)?.value;
            let high = fractional(&prep.spectrum, L2_ALPHA)?;
            let high_norm = morrey_norm(&high, L2_TUPLE.2, L2_TUPLE.3, &ctx.family)?.value;
            let mid = fractional(&prep.spectrum, L2_ALPHA * DILATION_THETA)?;
            let lhs =
                morrey_norm(&mid, l2_tuple.value("p"), l2_tuple.value("q"), &ctx.family)?.value;
            Ok(Row::new(
                format!("{}#l2", prep.id),
                &[
                    ("alpha", L2_ALPHA),
                    ("theta", DILATION_THETA),
                    ("p0", 2.0),
                    ("q0", 2.0),
                    ("p1", 2.0),
                    ("q1", 2.0),
                ],
                lhs,
                base.powf(1.0 - DILATION_THETA) * high_norm.powf(DILATION_THETA),
            ))
        })
        .collect::<Result<_, HarnessError>>()?;

    // Dilation sweep at the fixed interior point, per pair and function.
    let dilation_cells: Vec<(usize, usize)> = (0..prepared.len())
        .flat_map(|i| (0..cfg.interpolation_tuples.len()).map(move |pi| (i, pi)))
        .collect();
    let theta_index = cfg
        .theta_values
        .iter()
        .position(|&t| t == DILATION_THETA)
        .ok_or_else(|| {
            HarnessError::Config("dilation sweep needs theta = 0.5 in theta_values".to_string())
        })?;
    let dilation: Vec<(String, f64, Vec<Row>)> = dilation_cells
        .par_iter()
        .map(|&(i, pi)| {
            let entry = &corpus[i];
            let pair = cfg.interpolation_tuples[pi];
            let tuple = &validated[pi][theta_index];
            let (p, q) = (tuple.value("p"), tuple.value("q"));
            let mut ratios = Vec::with_capacity(cfg.lambda_values.len());
            let mut rows = Vec::with_capacity(cfg.lambda_values.len());
            for &lambda in &cfg.lambda_values {
                let g = sample(&entry.descriptor.clone().dilate(lambda), &ctx.spec)?;
                let s = forward(&g);
                let base = morrey_norm(&g, pair.0, pair.1, &ctx.family)?.value;
                let high = fractional(&s, DILATION_ALPHA)?;
                let high_norm = morrey_norm(&high, pair.2, pair.3, &ctx.family)?.value;
                let mid = fractional(&s, DILATION_ALPHA * DILATION_THETA)?;
                let lhs = morrey_norm(&mid, p, q, &ctx.family)?.value;
                let rhs = base.powf(1.0 - DILATION_THETA) * high_norm.powf(DILATION_THETA);
                ratios.push(lhs / rhs);
                rows.push(Row::new(
                    format!("{}#dilation", entry.id),
                    &[
                        ("alpha", DILATION_ALPHA),
                        ("theta", DILATION_THETA),
                        ("lambda", lambda),
                        ("p0", pair.0),
                        ("q0", pair.1),
                        ("p1", pair.2),
                        ("q1", pair.3),
                    ],
                    lhs,
                    rhs,
                ));
            }
            let key = format!("{}/{}", pair_label(&pair), entry.id);
            Ok((key, sweep::relative_spread(&ratios), rows))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut out = SuiteOutcome {
        zero_mode_policy:
            "fractional powers null the constant mode on both sides; the theta = 0 base keeps it"
                .to_string(),
        ball_families: ctx.families_both_sides(),
        tuples,
        ..SuiteOutcome::default()
    };

    let mut endpoint_dev = 0.0_f64;
    for rows in &main_rows {
        for row in rows {
            let theta = row.parameters["theta"];
            if theta == 0.0 || theta == 1.0 {
                endpoint_dev = endpoint_dev.max((row.ratio - 1.0).abs());
            }
            out.rows.push(row.clone());
        }
    }
    let l2_max = l2_rows.iter().map(|r| r.ratio).fold(0.0_f64, f64::max);
    out.rows.extend(l2_rows);
    for (key, spread, rows) in dilation {
        out.invariance_spreads.insert(key, spread);
        out.rows.extend(rows);
    }

    let sup_ratio = out.rows.iter().map(|r| r.ratio).fold(0.0_f64, f64::max);
    out.verdicts.push(Verdict::bounded(
        "theta-endpoints",
        endpoint_dev,
        tol::INTERP_ENDPOINT_REL,
        "theta in {0, 1} reproduces the endpoint norms",
    ));
    out.verdicts.push(Verdict::bounded(
        "l2-cauchy-schwarz",
        l2_max,
        1.0 + tol::L2_RATIO_SLACK,
        "on the all-L2 tuple the ratio never exceeds one",
    ));
    out.verdicts.push(Verdict::claim(
        "sup-ratio-finite",
        sup_ratio.is_finite() && sup_ratio > 0.0,
        sup_ratio,
        "largest interpolation ratio over the full sweep",
    ));
    let worst = out
        .invariance_spreads
        .values()
        .fold(0.0_f64, |acc, &v| acc.max(v));
    out.verdicts.push(Verdict::bounded(
        "dilation-spread",
        worst,
        cfg.tolerances.dilation_spread,
        "per-function spread of the ratio across the dilation sweep",
    ));

    let first_pair = cfg.interpolation_tuples[0];
    let first_tuple = &validated[0][theta_index];
    let (hp, hq) = (first_tuple.value("p"), first_tuple.value("q"));
    let homogeneity = sweep::homogeneity_deviation(&prepared[0].f, |g| {
        let s = forward(g);
        let base = morrey_norm(g, first_pair.0, first_pair.1, &ctx.family)?.value;
        let high = fractional(&s, DILATION_ALPHA)?;
        let high_norm = morrey_norm(&high, first_pair.2, first_pair.3, &ctx.family)?.value;
        let mid = fractional(&s, DILATION_ALPHA * DILATION_THETA)?;
        let lhs = morrey_norm(&mid, hp, hq, &ctx.family)?.value;
        Ok(lhs / (base.powf(1.0 - DILATION_THETA) * high_norm.powf(DILATION_THETA)))
    })?;
    out.verdicts.push(Verdict::bounded(
        "homogeneity",
        homogeneity,
        tol::HOMOGENEITY_REL,
        "ratio functional is invariant under complex rescaling of the input",
    ));

    out.metrics.insert("sup_ratio".to_string(), sup_ratio);
    out.metrics.insert("l2_sup_ratio".to_string(), l2_max);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SuiteConfig {
        let mut cfg = SuiteConfig::default_for("interpolation");
        cfg.extent = 32.0;
        cfg.points_per_axis = 256;
        cfg.corpus_size = 4;
        cfg.lambda_values = vec![0.5, 1.0, 2.0];
        cfg
    }

    #[test]
    fn endpoints_anchor_and_l2_is_cauchy_schwarz() {
        let out = run(&small_config()).unwrap();
        let endpoints = out
            .verdicts
            .iter()
            .find(|v| v.name == "theta-endpoints")
            .unwrap();
        assert!(endpoints.passed, "observed {:.3e}", endpoints.observed);
        let l2 = out
            .verdicts
            .iter()
            .find(|v| v.name == "l2-cauchy-schwarz")
            .unwrap();
        assert!(l2.passed, "observed {:.3e}", l2.observed);
        // Two pairs, five thetas each, plus the L2 anchor tuple.
        assert_eq!(out.tuples.len(), 11);
    }

    #[test]
    fn missing_tuples_are_a_config_error() {
        let mut cfg = small_config();
        cfg.interpolation_tuples.clear();
        assert!(matches!(run(&cfg), Err(HarnessError::Config(_))));
    }
}
