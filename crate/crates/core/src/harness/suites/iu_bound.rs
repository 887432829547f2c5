//! Imaginary powers measured in the Morrey norm.
//!
//! For each corpus function the suite forms `g_u = (-Delta)^(iu/2) f` over
//! the configured sweep of `u` and reports the normalised ratio
//! `R(f, u) = |g_u|_{M^p_q} / ((1 + |u|)^(n/2) |f|_{M^p_q})`. The operator
//! norm grows no faster than the kernel constant, so `R` must stay of order
//! one; on top of that the suite checks the exact lattice facts: `u = 0` is
//! the identity bit for bit, and each `g_u` has the same `L^2` norm as the
//! mean-free part of `f`.

use super::{Ctx, SuiteOutcome, Verdict};
use crate::harness::config::SuiteConfig;
use crate::harness::corpus::{seam_audit, standard_corpus};
use crate::harness::report::Row;
use crate::harness::{sweep, tol, HarnessError};
use crate::norms::{lebesgue_norm, morrey_norm};
use crate::special::least_squares_slope;
use crate::spectral::{forward, inverse, laplacian_power_spectrum, MultiplierPolicy};
use crate::testfns::sample;
use num_complex::Complex64;
use rayon::prelude::*;

struct Prepared {
    id: String,
    f: crate::grid::GridFunction,
    spectrum: crate::grid::SpectrumFunction,
    base_norm: f64,
    mean_free_l2: f64,
}

pub(crate) fn run(cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    let ctx = Ctx::new(cfg)?;
    let corpus = standard_corpus(cfg.n_dims, cfg.corpus_size, cfg.corpus_seed);
    seam_audit(&corpus, &ctx.spec, 1.0)?;
    let half = cfg.n_dims as f64 / 2.0;

    let prepared: Vec<Prepared> = corpus
        .par_iter()
        .map(|entry| {
            let f = sample(&entry.descriptor, &ctx.spec)?;
            let spectrum = forward(&f);
            let base_norm = morrey_norm(&f, cfg.p, cfg.q, &ctx.family)?.value;
            let mean = f.mean();
            let centered =
                f.difference(&crate::grid::GridFunction::from_fn(ctx.spec, |_| mean)?)?;
            Ok(Prepared {
                id: entry.id.clone(),
                f,
                spectrum,
                base_norm,
                mean_free_l2: lebesgue_norm(&centered, 2.0)?,
            })
        })
        .collect::<Result<_, HarnessError>>()?;

    let cells: Vec<(usize, f64)> = (0..prepared.len())
        .flat_map(|i| cfg.u_values.iter().map(move |&u| (i, u)))
        .collect();
    // Each cell yields its row plus, for u != 0, the isometry deviation.
    let evaluated: Vec<(Row, Option<f64>)> = cells
        .par_iter()
        .map(|&(i, u)| {
            let prep = &prepared[i];
            let right = (1.0 + u.abs()).powf(half) * prep.base_norm;
            if u == 0.0 {
                return Ok((
                    Row::new(prep.id.clone(), &[("u", u)], prep.base_norm, right),
                    None,
                ));
            }
            let shifted = laplacian_power_spectrum(
                &prep.spectrum,
                Complex64::new(0.0, u),
                MultiplierPolicy::Zero,
            )?;
            let g = inverse(&shifted);
            let left = morrey_norm(&g, cfg.p, cfg.q, &ctx.family)?.value;
            let dev = (lebesgue_norm(&g, 2.0)? / prep.mean_free_l2 - 1.0).abs();
            Ok((
                Row::new(prep.id.clone(), &[("u", u)], left, right),
                Some(dev),
            ))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut out = SuiteOutcome {
        zero_mode_policy:
            "imaginary powers null the constant mode; the L2 isometry is checked against the mean-free input"
                .to_string(),
        ball_families: ctx.families_both_sides(),
        ..SuiteOutcome::default()
    };

    let mut identity_dev = f64::NEG_INFINITY;
    let mut isometry = 0.0_f64;
    for (row, dev) in &evaluated {
        if let Some(d) = dev {
            isometry = isometry.max(*d);
        } else {
            identity_dev = identity_dev.max((row.ratio - 1.0).abs());
        }
    }
    let sup_ratio = evaluated
        .iter()
        .map(|(row, _)| row.ratio)
        .fold(f64::NEG_INFINITY, f64::max);

    if identity_dev > f64::NEG_INFINITY {
        out.verdicts.push(Verdict::bounded(
            "u0-identity",
            identity_dev,
            tol::EXACT_MATCH,
            "u = 0 short-circuits to the identity, so the ratio is exactly 1",
        ));
    }
    out.verdicts.push(Verdict::bounded(
        "l2-isometry",
        isometry,
        tol::ISOMETRY_REL,
        "|xi|^{iu} is unimodular away from the nulled constant mode",
    ));
    out.verdicts.push(Verdict::claim(
        "sup-ratio-finite",
        sup_ratio.is_finite() && sup_ratio > 0.0,
        sup_ratio,
        "normalised imaginary-power ratio over the whole sweep",
    ));

    // Trend of the per-u envelope in the far regime: once the kernel growth
    // is divided out the envelope should not keep climbing.
    let mut ln_x = Vec::new();
    let mut ln_y = Vec::new();
    for (u_idx, &u) in cfg.u_values.iter().enumerate() {
        if u.abs() < 10.0 {
            continue;
        }
        let sup_at_u = evaluated
            .iter()
            .enumerate()
            .filter(|(cell_idx, _)| cell_idx % cfg.u_values.len() == u_idx)
            .map(|(_, (row, _))| row.ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        ln_x.push((1.0 + u.abs()).ln());
        ln_y.push(sup_at_u.ln());
    }
    if ln_x.len() >= 2 {
        let slope = least_squares_slope(&ln_x, &ln_y);
        out.slopes.insert("far-regime-envelope".to_string(), slope);
        out.verdicts.push(Verdict::bounded(
            "envelope-trend",
            slope,
            tol::IU_TREND_SLOPE_MAX,
            "log-log slope of sup_f R against 1 + |u| for |u| >= 10",
        ));
    }

    let probe_u = cfg
        .u_values
        .iter()
        .copied()
        .find(|u| u.abs() >= 1.0)
        .unwrap_or(6.0);
    let homogeneity = sweep::homogeneity_deviation(&prepared[0].f, |g| {
        let s = forward(g);
        let moved =
            laplacian_power_spectrum(&s, Complex64::new(0.0, probe_u), MultiplierPolicy::Zero)?;
        let num = morrey_norm(&inverse(&moved), cfg.p, cfg.q, &ctx.family)?.value;
        let den =
            (1.0 + probe_u.abs()).powf(half) * morrey_norm(g, cfg.p, cfg.q, &ctx.family)?.value;
        Ok(num / den)
    })?;
    out.verdicts.push(Verdict::bounded(
        "homogeneity",
        homogeneity,
        tol::HOMOGENEITY_REL,
        "ratio functional is invariant under complex rescaling of the input",
    ));

    out.metrics.insert("sup_ratio".to_string(), sup_ratio);
    out.metrics
        .insert("isometry_worst_dev".to_string(), isometry);
    out.rows = evaluated.into_iter().map(|(row, _)| row).collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrunk_config_passes_and_pins_u0_bitwise() {
        let mut cfg = SuiteConfig::default_for("iu-bound");
        cfg.points_per_axis = 128;
        cfg.corpus_size = 4;
        cfg.u_values = vec![-15.0, -10.0, 0.0, 10.0, 15.0];
        let out = run(&cfg).unwrap();
        for v in &out.verdicts {
            assert!(v.passed, "{}: observed {:.3e}", v.name, v.observed);
        }
        let zero_rows: Vec<_> = out
            .rows
            .iter()
            .filter(|r| r.parameters["u"] == 0.0)
            .collect();
        assert_eq!(zero_rows.len(), 4);
        for row in zero_rows {
            assert_eq!(row.ratio, 1.0);
        }
    }
}
