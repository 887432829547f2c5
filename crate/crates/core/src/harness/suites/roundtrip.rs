//! Round trips through the fractional Laplacian, and the norm chain the
//! resulting images satisfy.
//!
//! Two inversion paths with different zero-mode fates:
//!
//! * the unit radial symbol keeps every mode, including the constant one,
//!   so transform -> multiply by 1 -> invert must reproduce the input to
//!   transform accuracy;
//! * `compose_powers(alpha, -alpha)` nulls the constant mode twice, so the
//!   trip returns the input minus its mean. The pointwise error is then a
//!   known constant, `|f^(0)| / L^n`, and the measured error must match
//!   that prediction instead of vanishing.
//!
//! The images `(-Delta)^{alpha/2} f` also feed a norm chain that is exact
//! on the lattice: the Morrey norm against the global `L^q` norm (up to the
//! counted-mass correction of the smallest scan balls), and `L^q` against
//! the `L^infinity`/`L^1` interpolation bound.

use super::{Ctx, SuiteOutcome, Verdict};
use crate::grid::GridSpec;
use crate::harness::config::SuiteConfig;
use crate::harness::corpus::{seam_audit, standard_corpus};
use crate::harness::report::Row;
use crate::harness::{sweep, tol, HarnessError};
use crate::norms::{lebesgue_norm, morrey_norm, BallFamily};
use crate::special::unit_ball_volume;
use crate::spectral::{
    apply_radial_multiplier, compose_powers, forward, laplacian_power, MultiplierPolicy,
};
use crate::testfns::sample;
use num_complex::Complex64;
use rayon::prelude::*;

/// A two-step row is only meaningful when the predicted offset rises above
/// float noise relative to the input's scale.
const OFFSET_FLOOR_REL: f64 = 1e-10;

/// Largest value of `(m_h(r) / (omega_n r^n))^(1/p - 1/q)` over the scan
/// ladder, clamped at 1: the exact factor by which a discrete ball's counted
/// mass can exceed its continuum volume. Per-ball Hoelder then gives
/// `|f|_{M^p_q} <= slack * |f|_{L^q}` on the lattice. Axis offsets are
/// clamped to the box span, so the count caps the in-box mass of every ball
/// in the family regardless of center or clipping.
fn counted_mass_slack(spec: &GridSpec, family: &BallFamily, p: f64, q: f64) -> f64 {
    let n = spec.n_dims();
    let h = spec.spacing();
    let span = spec.points_per_axis() as isize - 1;
    let omega = unit_ball_volume(n).expect("grid dimension is validated");
    let exponent = 1.0 / p - 1.0 / q;
    let box_volume = spec.extent().powi(n as i32);
    let mut worst = 1.0_f64;
    for &r in family.radii() {
        let t_sq = (r / h) * (r / h);
        let cap = ((r / h).floor() as isize).min(span);
        let mut count = 0u64;
        match n {
            1 => {
                for a in -cap..=cap {
                    if ((a * a) as f64) < t_sq {
                        count += 1;
                    }
                }
            }
            2 => {
                for a in -cap..=cap {
                    for b in -cap..=cap {
                        if ((a * a + b * b) as f64) < t_sq {
                            count += 1;
                        }
                    }
                }
            }
            _ => {
                for a in -cap..=cap {
                    for b in -cap..=cap {
                        for c in -cap..=cap {
                            if ((a * a + b * b + c * c) as f64) < t_sq {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        let mass = (count as f64 * spec.cell_volume()).min(box_volume);
        let ratio = mass / (omega * r.powi(n as i32));
        worst = worst.max(ratio.powf(exponent));
    }
    worst
}

pub(crate) fn run(cfg: &SuiteConfig) -> Result<SuiteOutcome, HarnessError> {
    if cfg.alpha_values.is_empty() {
        return Err(HarnessError::Config(
            "roundtrip needs a non-empty alpha sweep".to_string(),
        ));
    }
    for &alpha in &cfg.alpha_values {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(HarnessError::Config(format!(
                "roundtrip orders must be positive; got alpha = {alpha}"
            )));
        }
    }
    let ctx = Ctx::new(cfg)?;
    let corpus = standard_corpus(cfg.n_dims, cfg.corpus_size, cfg.corpus_seed);
    seam_audit(&corpus, &ctx.spec, 1.0)?;
    let slack = counted_mass_slack(&ctx.spec, &ctx.family, cfg.p, cfg.q);
    let box_volume = ctx.spec.extent().powi(ctx.spec.n_dims() as i32);

    struct Cell {
        single: Row,
        per_alpha: Vec<(Option<Row>, Row, Row)>,
    }
    let cells: Vec<Cell> = corpus
        .par_iter()
        .map(|entry| {
            let g = sample(&entry.descriptor, &ctx.spec)?;
            let peak = g.max_abs();
            let spectrum = forward(&g);
            let unit = apply_radial_multiplier(
                &spectrum,
                |_| Complex64::new(1.0, 0.0),
                MultiplierPolicy::Zero,
            )?;
            let back = crate::spectral::inverse(&unit);
            let single = Row::new(
                format!("{}#single", entry.id),
                &[],
                back.difference(&g)?.max_abs(),
                peak,
            );

            let offset = spectrum.zero_mode().norm() / box_volume;
            let mut per_alpha = Vec::with_capacity(cfg.alpha_values.len());
            for &alpha in &cfg.alpha_values {
                let z = Complex64::new(alpha, 0.0);
                let two_step = if offset >= OFFSET_FLOOR_REL * peak {
                    let back = compose_powers(&g, z, -z, MultiplierPolicy::Zero)?;
                    Some(Row::new(
                        format!("{}#twostep", entry.id),
                        &[("alpha", alpha)],
                        back.difference(&g)?.max_abs(),
                        offset,
                    ))
                } else {
                    None
                };
                let image = laplacian_power(&g, z, MultiplierPolicy::Zero)?;
                let morrey = morrey_norm(&image, cfg.p, cfg.q, &ctx.family)?.value;
                let lq = lebesgue_norm(&image, cfg.q)?;
                let chain_morrey = Row::new(
                    format!("{}#chain-morrey", entry.id),
                    &[("alpha", alpha)],
                    morrey,
                    lq,
                );
                let sup = lebesgue_norm(&image, f64::INFINITY)?;
                let l1 = lebesgue_norm(&image, 1.0)?;
                let chain_holder = Row::new(
                    format!("{}#chain-holder", entry.id),
                    &[("alpha", alpha)],
                    lq,
                    sup.powf(1.0 - 1.0 / cfg.q) * l1.powf(1.0 / cfg.q),
                );
                per_alpha.push((two_step, chain_morrey, chain_holder));
            }
            Ok(Cell { single, per_alpha })
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut out = SuiteOutcome {
        zero_mode_policy: "the unit symbol preserves the constant mode, so the single-multiplier \
                           trip reproduces the input; the two-step power trip nulls it twice and \
                           returns the input minus its mean, with the offset predicted exactly"
            .to_string(),
        ball_families: ctx.families_both_sides(),
        ..SuiteOutcome::default()
    };
    let mut single_sup = 0.0_f64;
    let mut offset_dev = f64::NEG_INFINITY;
    let mut offset_rows = 0usize;
    let mut morrey_sup = 0.0_f64;
    let mut holder_sup = 0.0_f64;
    for cell in cells {
        single_sup = single_sup.max(cell.single.ratio);
        out.rows.push(cell.single);
        for (two_step, chain_morrey, chain_holder) in cell.per_alpha {
            if let Some(row) = two_step {
                offset_dev = offset_dev.max((row.ratio - 1.0).abs());
                offset_rows += 1;
                out.rows.push(row);
            }
            morrey_sup = morrey_sup.max(chain_morrey.ratio);
            holder_sup = holder_sup.max(chain_holder.ratio);
            out.rows.push(chain_morrey);
            out.rows.push(chain_holder);
        }
    }

    out.verdicts.push(Verdict::bounded(
        "single-multiplier-roundtrip",
        single_sup,
        tol::ROUNDTRIP_REL,
        "max pointwise error of the unit-symbol trip, relative to the peak",
    ));
    if offset_rows > 0 {
        out.verdicts.push(Verdict::bounded(
            "zero-mode-offset",
            offset_dev,
            tol::ZERO_MODE_OFFSET_REL,
            "two-step trip error against the predicted mean offset",
        ));
    } else {
        out.verdicts.push(Verdict::claim(
            "zero-mode-offset",
            true,
            0.0,
            "every corpus mean sat below the float-noise floor; nothing to compare",
        ));
    }
    out.verdicts.push(Verdict::bounded(
        "chain-morrey",
        morrey_sup,
        slack * (1.0 + tol::CHAIN_SLACK),
        format!("Morrey against global Lebesgue; counted-mass slack {slack:.6}"),
    ));
    out.verdicts.push(Verdict::bounded(
        "chain-holder",
        holder_sup,
        1.0 + tol::CHAIN_SLACK,
        "Lebesgue endpoint interpolation, exact on the lattice",
    ));

    let first = sample(&corpus[0].descriptor, &ctx.spec)?;
    let alpha0 = Complex64::new(cfg.alpha_values[0], 0.0);
    let homogeneity = sweep::homogeneity_deviation(&first, |g| {
        let image = laplacian_power(g, alpha0, MultiplierPolicy::Zero)?;
        let morrey = morrey_norm(&image, cfg.p, cfg.q, &ctx.family)?.value;
        Ok(morrey / lebesgue_norm(&image, cfg.q)?)
    })?;
    out.verdicts.push(Verdict::bounded(
        "homogeneity",
        homogeneity,
        tol::HOMOGENEITY_REL,
        "chain ratio is invariant under complex rescaling of the input",
    ));

    out.metrics.insert("single_sup".to_string(), single_sup);
    out.metrics
        .insert("zero_mode_rows".to_string(), offset_rows as f64);
    if offset_rows > 0 {
        out.metrics
            .insert("zero_mode_worst_dev".to_string(), offset_dev);
    }
    out.metrics.insert("chain_slack".to_string(), slack);
    out.metrics
        .insert("chain_morrey_sup".to_string(), morrey_sup);
    out.metrics
        .insert("chain_holder_sup".to_string(), holder_sup);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes_both_paths_and_the_chain() {
        let cfg = SuiteConfig::default_for("roundtrip");
        let out = run(&cfg).unwrap();
        for v in &out.verdicts {
            assert!(v.passed, "{}: observed {:.3e}", v.name, v.observed);
        }
        assert!(out.rows.iter().any(|r| r.function_id.ends_with("#twostep")));
        assert!(out.metrics["chain_slack"] >= 1.0);
    }

    #[test]
    fn non_positive_orders_are_refused() {
        let mut cfg = SuiteConfig::default_for("roundtrip");
        cfg.alpha_values = vec![0.0];
        assert!(matches!(run(&cfg), Err(HarnessError::Config(_))));
    }

    #[test]
    fn counted_mass_slack_is_modest_and_clamped() {
        let spec = GridSpec::new(1, 32.0, 512).unwrap();
        let family = BallFamily::geometric(&spec);
        let slack = counted_mass_slack(&spec, &family, 1.5, 3.0);
        assert!(slack >= 1.0);
        assert!(slack < 1.1, "slack {slack}");
        // p = q needs no correction at all.
        assert_eq!(counted_mass_slack(&spec, &family, 2.0, 2.0), 1.0);
    }
}
