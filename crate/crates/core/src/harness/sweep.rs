//! Shared sweep machinery: scoped thread pools, spread statistics, and the
//! per-suite homogeneity audit.

use super::HarnessError;
use crate::grid::GridFunction;
use crate::harness::tol::HOMOGENEITY_REL;
use num_complex::Complex64;

/// Run `job` inside a dedicated rayon pool of `threads` workers. A scoped
/// pool keeps `--threads` deterministic regardless of what the ambient
/// global pool looks like.
pub fn with_pool<T, F>(threads: usize, job: F) -> Result<T, HarnessError>
where
    F: FnOnce() -> Result<T, HarnessError> + Send,
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    pool.install(job)
}

/// Relative spread max/min - 1 of a set of positive values. Empty or
/// non-positive inputs report an infinite spread so the verdict fails loudly
/// instead of passing on vacuous data.
pub fn relative_spread(values: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if !(v.is_finite() && v > 0.0) {
            return f64::INFINITY;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo.is_finite() && hi.is_finite() {
        hi / lo - 1.0
    } else {
        f64::INFINITY
    }
}

/// Homogeneity audit: a ratio functional must be invariant under complex
/// rescaling of its input. Returns the relative deviation of
/// `ratio(c * f)` from `ratio(f)` for a fixed awkward scalar.
pub fn homogeneity_deviation<R>(f: &GridFunction, ratio: R) -> Result<f64, HarnessError>
where
    R: Fn(&GridFunction) -> Result<f64, HarnessError>,
{
    let c = Complex64::new(-0.734, 1.219);
    let base = ratio(f)?;
    let scaled = ratio(&f.scaled(c)?)?;
    if base == 0.0 {
        return Ok(scaled.abs());
    }
    Ok((scaled / base - 1.0).abs())
}

/// Convenience used by every suite that records an audit verdict.
pub fn homogeneity_ok(deviation: f64) -> bool {
    deviation.is_finite() && deviation <= HOMOGENEITY_REL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::norms::lebesgue_norm;

    #[test]
    fn spread_of_constant_set_is_zero() {
        assert_eq!(relative_spread(&[2.0, 2.0, 2.0]), 0.0);
    }

    #[test]
    fn spread_flags_bad_data() {
        assert!(relative_spread(&[]).is_infinite());
        assert!(relative_spread(&[1.0, 0.0]).is_infinite());
        assert!(relative_spread(&[1.0, f64::NAN]).is_infinite());
    }

    #[test]
    fn spread_matches_hand_value() {
        let s = relative_spread(&[1.0, 1.25, 1.1]);
        assert!((s - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pool_runs_job_with_requested_width() {
        let width = with_pool(3, || Ok(rayon::current_num_threads())).unwrap();
        assert_eq!(width, 3);
    }

    #[test]
    fn norm_ratios_are_scale_invariant() {
        let spec = GridSpec::new(1, 16.0, 128).unwrap();
        let f = GridFunction::from_real_fn(spec, |x| (-x[0] * x[0]).exp()).unwrap();
        let dev = homogeneity_deviation(&f, |g| {
            let a = lebesgue_norm(g, 2.0)?;
            let b = lebesgue_norm(g, 4.0)?;
            Ok(a / b)
        })
        .unwrap();
        assert!(homogeneity_ok(dev), "deviation {dev:.3e}");
    }
}
