//! Weighted Riesz-potential (Olsen-type) inequality.
//!
//! The suite manufactures exact potential pairs: starting from a corpus
//! function `g` it forms `f = (-Delta)^(alpha/2) g`, so that `g` is the
//! Riesz image of `f` by construction, and then measures
//!
//! `||x|^(-alpha) g|_{M^p_q} <= C ||x|^(-alpha)|_{M^u_v} |f|_{M^p_q}`
//!
//! with the weight pair `(u, v)` supplied by the exponent validator. The
//! certified facts are dilation invariance of the ratio (the validator's
//! scaling identity) and that moving `g` away from the weight's singularity
//! never raises the ratio beyond the discretisation band.

use super::{Ctx, SuiteOutcome, Verdict};
use crate::exponents::validate_olsen;
use crate::harness::config::SuiteConfig;
use crate::harness::corpus::{corpus_of_kinds, seam_audit, sweep_inflation, CorpusKind};
use crate::harness::report::Row;
use crate::harness::{sweep, tol, HarnessError};
use crate::norms::morrey_norm;
use crate::spectral::{forward, inverse, laplacian_power_spectrum, MultiplierPolicy};
use crate::testfns::{sample, AnalyticFunction};
use num_complex::Complex64;
use rayon::prelude::*;

/// Lattice-aligned offset for the off-origin block (an exact multiple of
/// the default spacings).
const TRANSLATION_SHIFT: f64 = 2.5;

pub(crate) fn run(cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    let ctx = Ctx::new(cfg)?;
    let tuple = validate_olsen(cfg.n_dims, cfg.p, cfg.q, cfg.alpha)?;
    let (wu, wv) = (tuple.value("u"), tuple.value("v"));
    let alpha = cfg.alpha;

    // Potential pairs start from compactly supported bump templates, so the
    // Riesz image is exact by construction and nothing leaks over the seam.
    let corpus = corpus_of_kinds(
        cfg.n_dims,
        cfg.corpus_size,
        cfg.corpus_seed,
        &[
            CorpusKind::Bump,
            CorpusKind::Product,
            CorpusKind::Sum,
            CorpusKind::Shifted,
        ],
    );
    seam_audit(&corpus, &ctx.spec, sweep_inflation(&cfg.lambda_values))?;
    let seam_limit = 0.5 * ctx.spec.extent() - 4.0 * ctx.spec.spacing();
    for entry in &corpus {
        let shifted = entry.effective_radius + TRANSLATION_SHIFT;
        if shifted > seam_limit {
            return Err(HarnessError::SeamViolation {
                id: entry.id.clone(),
                radius: shifted,
                inflation: 1.0,
                limit: seam_limit,
            });
        }
    }

    let weight = sample(&AnalyticFunction::power_weight(alpha), &ctx.spec)?;
    let weight_norm = morrey_norm(&weight, wu, wv, &ctx.family)?;

    let base_index = cfg
        .lambda_values
        .iter()
        .position(|&l| l == 1.0)
        .ok_or_else(|| {
            HarnessError::Config("olsen needs lambda = 1 in lambda_values".to_string())
        })?;

    // ratio(h) for one sampled input: numerator weights the Riesz image,
    // denominator weights the potential norm.
    let ratio_of = |g: &crate::grid::GridFunction| -> Result<(f64, f64), HarnessError> {
        let s = forward(g);
        let f = inverse(&laplacian_power_spectrum(
            &s,
            Complex64::new(alpha, 0.0),
            MultiplierPolicy::Zero,
        )?);
        let num = morrey_norm(&g.pointwise_multiply(&weight)?, cfg.p, cfg.q, &ctx.family)?.value;
        let den = weight_norm.value * morrey_norm(&f, cfg.p, cfg.q, &ctx.family)?.value;
        Ok((num, den))
    };

    let sweeps: Vec<(String, f64, Vec<Row>, f64)> = corpus
        .par_iter()
        .map(|entry| {
            let mut rows = Vec::with_capacity(cfg.lambda_values.len());
            let mut ratios = Vec::with_capacity(cfg.lambda_values.len());
            for &lambda in &cfg.lambda_values {
                let g = sample(&entry.descriptor.clone().dilate(lambda), &ctx.spec)?;
                let (num, den) = ratio_of(&g)?;
                ratios.push(num / den);
                rows.push(Row::new(
                    entry.id.clone(),
                    &[("lambda", lambda), ("alpha", alpha)],
                    num,
                    den,
                ));
            }
            Ok((
                entry.id.clone(),
                sweep::relative_spread(&ratios),
                rows,
                ratios[base_index],
            ))
        })
        .collect::<Result<_, HarnessError>>()?;

    // Off-origin block: same functions translated away from the weight's
    // singularity; the numerator loses access to the singular mass, so the
    // shifted ratios must not climb past the centered sup by more than the
    // discretisation band.
    let centered_sup = sweeps
        .iter()
        .map(|(_, _, _, base_ratio)| *base_ratio)
        .fold(0.0_f64, f64::max);
    let translated: Vec<Row> = corpus
        .par_iter()
        .map(|entry| {
            let moved = entry
                .descriptor
                .clone()
                .translate(&[TRANSLATION_SHIFT, 0.0, 0.0]);
            let g = sample(&moved, &ctx.spec)?;
            let (num, den) = ratio_of(&g)?;
            Ok(Row::new(
                format!("{}#shift", entry.id),
                &[
                    ("lambda", 1.0),
                    ("alpha", alpha),
                    ("shift", TRANSLATION_SHIFT),
                ],
                num,
                den,
            ))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut out = SuiteOutcome {
        zero_mode_policy:
            "potential pairs are built symbolically (f = (-Delta)^(alpha/2) g), so only f has its constant mode nulled"
                .to_string(),
        ball_families: ctx.families_both_sides(),
        ..SuiteOutcome::default()
    };
    out.tuples
        .push(serde_json::to_value(&tuple).map_err(HarnessError::Serde)?);

    for (id, spread, rows, _) in sweeps {
        out.invariance_spreads.insert(id, spread);
        out.rows.extend(rows);
    }
    let mut shift_excess = 0.0_f64;
    for row in translated {
        shift_excess = shift_excess.max(row.ratio / centered_sup);
        out.rows.push(row);
    }

    let sup_ratio = out.rows.iter().map(|r| r.ratio).fold(0.0_f64, f64::max);
    out.verdicts.push(Verdict::claim(
        "sup-ratio-finite",
        sup_ratio.is_finite() && sup_ratio > 0.0,
        sup_ratio,
        "largest weighted-potential ratio over corpus, dilations and shifts",
    ));
    let worst = out
        .invariance_spreads
        .values()
        .fold(0.0_f64, |acc, &v| acc.max(v));
    out.verdicts.push(Verdict::bounded(
        "dilation-spread",
        worst,
        cfg.tolerances.dilation_spread,
        "per-function spread of the ratio across the certified dilation sweep",
    ));
    out.verdicts.push(Verdict::bounded(
        "translated-band",
        shift_excess,
        1.0 + tol::OLSEN_TRANSLATED_BAND,
        "off-origin ratio against the centered ratio of the same function",
    ));

    let first = sample(&corpus[0].descriptor, &ctx.spec)?;
    let homogeneity = sweep::homogeneity_deviation(&first, |g| {
        let (num, den) = ratio_of(g)?;
        Ok(num / den)
    })?;
    out.verdicts.push(Verdict::bounded(
        "homogeneity",
        homogeneity,
        tol::HOMOGENEITY_REL,
        "ratio functional is invariant under complex rescaling of the input",
    ));

    out.metrics
        .insert("weight_norm".to_string(), weight_norm.value);
    out.metrics.insert(
        "weight_witness_radius".to_string(),
        weight_norm.witness_radius,
    );
    out.metrics.insert("sup_ratio".to_string(), sup_ratio);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_pairs_stay_bounded_and_dilation_invariant() {
        let mut cfg = SuiteConfig::default_for("olsen");
        cfg.points_per_axis = 2048;
        cfg.corpus_size = 2;
        let out = run(&cfg).unwrap();
        for v in &out.verdicts {
            assert!(v.passed, "{}: observed {:.3e}", v.name, v.observed);
        }
        assert_eq!(out.tuples.len(), 1);
        // corpus x lambdas plus one shifted row each.
        assert_eq!(out.rows.len(), 2 * 3 + 2);
    }

    #[test]
    fn missing_unit_lambda_is_a_config_error() {
        let mut cfg = SuiteConfig::default_for("olsen");
        cfg.lambda_values = vec![0.5, 2.0];
        assert!(matches!(run(&cfg), Err(HarnessError::Config(_))));
    }
}
