//! Morrey, Lebesgue, and weak-Lebesgue norm functionals on grid functions.
//!
//! The Morrey norm discretises `sup_{a, r} |B(a,r)|^(1/q - 1/p) ||f||_{L^p(B(a,r))}`
//! by scanning a [`BallFamily`]: centers on a strided sublattice and radii on
//! a ladder. Ball volumes use the continuum formula `omega_n r^n` while the
//! integral is the lattice Riemann sum; this hybrid keeps the `p = q` case
//! exactly equal to the global Lebesgue norm (the largest rung covers the box
//! from every center and the volume factor is `vol^0 = 1`).
//!
//! The default radius ladder is geometric with ratio `sqrt(2)` and a
//! multiplicative offset `4/3`, so squared radii in units of `h^2` are
//! `(16/9) 2^m`, never an integer. Lattice distances have integer squares in
//! those units, so the strict membership test `|x_j - a| < r` can never tie.
//! The offset being multiplicative rather than additive also makes the ladder
//! exactly self-similar under dilation by 2, which the dyadic scaling checks
//! rely on. Balls never wrap around the periodic seam; near the boundary they
//! are clipped, which can only under-estimate the sup. Reported Morrey values
//! are therefore certified lower bounds of the continuum norm.
//!
//! The weak norm takes the sup of `lambda (h^n #{|f| > lambda})^(1/t)` over
//! all thresholds; since the distribution function is a right-continuous step
//! function, that sup equals the max over sampled values `v` of
//! `v (h^n #{|f| >= v})^(1/t)`, which is what is computed.

use crate::grid::{GridFunction, GridSpec, Index, Point};
use crate::special::unit_ball_volume;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum NormsError {
    #[error("exponent {symbol} = {value} is out of range; need {requirement}")]
    ExponentRange {
        symbol: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("Morrey exponents need p <= q, got p = {p}, q = {q}")]
    ExponentOrder { p: f64, q: f64 },
    #[error("ball at {center:?} with radius {radius} contains no lattice point")]
    EmptyBall { center: Point, radius: f64 },
    #[error("ball family radii must be positive, strictly increasing, and reach the box diameter; offender: {0}")]
    BadRadii(f64),
    #[error("center stride must satisfy 1 <= stride < N, got {0}")]
    BadStride(usize),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// The finite search family realising the Morrey sup: centers on a strided
/// sublattice, radii on a fixed ladder reaching the box diameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallFamily {
    spec: GridSpec,
    center_stride: usize,
    radii: Vec<f64>,
}

impl BallFamily {
    /// Geometric ladder `r_m = (4/3) h sqrt(2)^m` up to the box diameter,
    /// stride 1 for n <= 2 and 2 for n = 3.
    pub fn geometric(spec: &GridSpec) -> Self {
        let h = spec.spacing();
        let diameter = (spec.n_dims() as f64).sqrt() * spec.extent();
        let mut radii = Vec::new();
        let mut r = h * 4.0 / 3.0;
        loop {
            radii.push(r);
            if r >= diameter {
                break;
            }
            r *= std::f64::consts::SQRT_2;
        }
        Self {
            spec: *spec,
            center_stride: if spec.n_dims() == 3 { 2 } else { 1 },
            radii,
        }
    }

    /// Linear ladder `r_k = (k + 1/3) h`; fine enough that the discrete sup
    /// tracks the continuum argmax radius to within `h`.
    pub fn linear(spec: &GridSpec) -> Self {
        let h = spec.spacing();
        let diameter = (spec.n_dims() as f64).sqrt() * spec.extent();
        let mut radii = Vec::new();
        let mut k = 1u64;
        loop {
            let r = (k as f64 + 1.0 / 3.0) * h;
            radii.push(r);
            if r >= diameter {
                break;
            }
            k += 1;
        }
        Self {
            spec: *spec,
            center_stride: if spec.n_dims() == 3 { 2 } else { 1 },
            radii,
        }
    }

    /// Arbitrary ladder; radii must be positive, strictly increasing, and
    /// the last must reach the box diameter so the family can recover global
    /// norms.
    pub fn custom(
        spec: &GridSpec,
        center_stride: usize,
        radii: Vec<f64>,
    ) -> Result<Self, NormsError> {
        if center_stride == 0 || center_stride >= spec.points_per_axis() {
            return Err(NormsError::BadStride(center_stride));
        }
        let mut previous = 0.0;
        for &r in &radii {
            if !(r.is_finite() && r > previous) {
                return Err(NormsError::BadRadii(r));
            }
            previous = r;
        }
        let diameter = (spec.n_dims() as f64).sqrt() * spec.extent();
        if previous < diameter {
            return Err(NormsError::BadRadii(previous));
        }
        Ok(Self {
            spec: *spec,
            center_stride,
            radii,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn center_stride(&self) -> usize {
        self.center_stride
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Short description for report provenance.
    pub fn describe(&self) -> String {
        format!(
            "stride={} rungs={} r_min={:.6} r_max={:.6}",
            self.center_stride,
            self.radii.len(),
            self.radii.first().copied().unwrap_or(0.0),
            self.radii.last().copied().unwrap_or(0.0),
        )
    }
}

/// A norm value together with the argmax ball of the scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub witness_center: Point,
    pub witness_radius: f64,
}

fn check_p(p: f64) -> Result<(), NormsError> {
    if p.is_nan() || p < 1.0 {
        return Err(NormsError::ExponentRange {
            symbol: "p",
            value: p,
            requirement: "1 <= p (infinity allowed where documented)",
        });
    }
    Ok(())
}

/// `|f|^p` over the lattice, shared by all the scans.
fn pow_buffer(f: &GridFunction, p: f64) -> Vec<f64> {
    f.values()
        .iter()
        .map(|v| v.norm_sqr().powf(p / 2.0))
        .collect()
}

/// Largest integer `m >= 0` with `m^2 < budget`, or -1 when none exists.
fn widest_offset(budget: f64) -> isize {
    if budget <= 0.0 {
        return -1;
    }
    let mut m = budget.sqrt().floor() as isize;
    while m >= 0 && (m * m) as f64 >= budget {
        m -= 1;
    }
    m
}

/// `(h^n sum_{|x_j - a| < r} |f(x_j)|^p)^(1/p)` with strict membership,
/// or the sup over the ball for `p = infinity`.
pub fn ball_local_norm(
    f: &GridFunction,
    p: f64,
    center: Point,
    radius: f64,
) -> Result<f64, NormsError> {
    check_p(p)?;
    let spec = *f.spec();
    let n = spec.n_dims();
    let r_sq = radius * radius;
    let mut acc = 0.0f64;
    let mut sup = 0.0f64;
    let mut occupied = false;
    for (flat, idx) in spec.indices().enumerate() {
        let x = spec.point(idx);
        let d_sq: f64 = x[..n]
            .iter()
            .zip(&center[..n])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if d_sq < r_sq {
            occupied = true;
            let v = f.values()[flat];
            if p.is_finite() {
                acc += v.norm_sqr().powf(p / 2.0);
            } else {
                sup = sup.max(v.norm());
            }
        }
    }
    if !occupied {
        return Err(NormsError::EmptyBall { center, radius });
    }
    if p.is_finite() {
        Ok((spec.cell_volume() * acc).powf(1.0 / p))
    } else {
        Ok(sup)
    }
}

/// Row-wise prefix sums of `pows` along the last axis; `P[row][t]` holds the
/// sum of the first `t` entries of the row.
fn row_prefixes(pows: &[f64], per_axis: usize) -> Vec<f64> {
    let rows = pows.len() / per_axis;
    let mut out = vec![0.0; rows * (per_axis + 1)];
    for row in 0..rows {
        let src = &pows[row * per_axis..(row + 1) * per_axis];
        let dst = &mut out[row * (per_axis + 1)..(row + 1) * (per_axis + 1)];
        let mut acc = 0.0;
        for (t, &v) in src.iter().enumerate() {
            acc += v;
            dst[t + 1] = acc;
        }
    }
    out
}

/// Sum of `pows` over lattice points within distance `r` of the lattice
/// center `c`, via per-row interval lookups. `t_sq` is `(r/h)^2`.
fn ball_mass(prefixes: &[f64], per_axis: usize, n_dims: usize, c: Index, t_sq: f64) -> f64 {
    let stride = per_axis + 1;
    let mut acc = 0.0;
    let span = |center: usize, m: isize| -> (usize, usize) {
        let lo = (center as isize - m).max(0) as usize;
        let hi = ((center as isize + m + 1).min(per_axis as isize)) as usize;
        (lo, hi)
    };
    match n_dims {
        1 => {
            let m = widest_offset(t_sq);
            if m >= 0 {
                let (lo, hi) = span(c[0], m);
                acc = prefixes[hi] - prefixes[lo];
            }
        }
        2 => {
            let m0 = widest_offset(t_sq);
            for d0 in -m0..=m0 {
                let i0 = c[0] as isize + d0;
                if i0 < 0 || i0 >= per_axis as isize {
                    continue;
                }
                let m1 = widest_offset(t_sq - (d0 * d0) as f64);
                if m1 < 0 {
                    continue;
                }
                let (lo, hi) = span(c[1], m1);
                let row = i0 as usize * stride;
                acc += prefixes[row + hi] - prefixes[row + lo];
            }
        }
        _ => {
            let m0 = widest_offset(t_sq);
            for d0 in -m0..=m0 {
                let i0 = c[0] as isize + d0;
                if i0 < 0 || i0 >= per_axis as isize {
                    continue;
                }
                let rem0 = t_sq - (d0 * d0) as f64;
                let m1 = widest_offset(rem0);
                for d1 in -m1..=m1 {
                    let i1 = c[1] as isize + d1;
                    if i1 < 0 || i1 >= per_axis as isize {
                        continue;
                    }
                    let m2 = widest_offset(rem0 - (d1 * d1) as f64);
                    if m2 < 0 {
                        continue;
                    }
                    let (lo, hi) = span(c[2], m2);
                    let row = (i0 as usize * per_axis + i1 as usize) * stride;
                    acc += prefixes[row + hi] - prefixes[row + lo];
                }
            }
        }
    }
    acc
}

/// Discrete Morrey norm over the ball family, with the argmax witness.
///
/// Requires `1 <= p <= q < infinity`. Ties in the scan keep the first
/// attained maximum in (center, radius) scan order, so results are
/// deterministic bit for bit.
pub fn morrey_norm(
    f: &GridFunction,
    p: f64,
    q: f64,
    family: &BallFamily,
) -> Result<NormResult, NormsError> {
    check_p(p)?;
    if !p.is_finite() {
        return Err(NormsError::ExponentRange {
            symbol: "p",
            value: p,
            requirement: "finite p for Morrey norms",
        });
    }
    if q.is_nan() || !q.is_finite() {
        return Err(NormsError::ExponentRange {
            symbol: "q",
            value: q,
            requirement: "finite q",
        });
    }
    if p > q {
        return Err(NormsError::ExponentOrder { p, q });
    }
    f.spec().check_same(family.spec())?;

    let spec = *f.spec();
    let n = spec.n_dims();
    let per_axis = spec.points_per_axis();
    let h = spec.spacing();
    let omega = unit_ball_volume(n).expect("grid dimension is validated");
    let pows = pow_buffer(f, p);
    let prefixes = row_prefixes(&pows, per_axis);

    // Volume factors and squared index radii per rung.
    let vol_exp = 1.0 / q - 1.0 / p;
    let rungs: Vec<(f64, f64, f64)> = family
        .radii
        .iter()
        .map(|&r| {
            let vol = omega * r.powi(n as i32);
            (r, vol.powf(vol_exp), (r * r) / (h * h))
        })
        .collect();

    let h_n = spec.cell_volume();
    let inv_p = 1.0 / p;
    let mut best = f64::NEG_INFINITY;
    let mut witness = ([0usize; 3], 0.0f64);
    let stride = family.center_stride;
    for c in spec.indices() {
        if c[..n].iter().any(|i| i % stride != 0) {
            continue;
        }
        for &(r, vol_factor, t_sq) in &rungs {
            let mass = ball_mass(&prefixes, per_axis, n, c, t_sq);
            let value = vol_factor * (h_n * mass).powf(inv_p);
            if value > best {
                best = value;
                witness = (c, r);
            }
        }
    }
    Ok(NormResult {
        value: best,
        witness_center: spec.point(witness.0),
        witness_radius: witness.1,
    })
}

/// Global Lebesgue norm `(h^n sum |f|^p)^(1/p)`; `p = infinity` gives the
/// lattice sup.
pub fn lebesgue_norm(f: &GridFunction, p: f64) -> Result<f64, NormsError> {
    check_p(p)?;
    if !p.is_finite() {
        return Ok(f.max_abs());
    }
    let total: f64 = pow_buffer(f, p).iter().sum();
    Ok((f.spec().cell_volume() * total).powf(1.0 / p))
}

/// Weak Lebesgue quasi-norm `sup_lambda lambda (h^n #{|f| > lambda})^(1/t)`.
pub fn weak_norm(f: &GridFunction, t: f64) -> Result<f64, NormsError> {
    if t.is_nan() || t < 1.0 {
        return Err(NormsError::ExponentRange {
            symbol: "t",
            value: t,
            requirement: "t >= 1",
        });
    }
    let mut magnitudes: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    magnitudes.sort_by(|a, b| b.partial_cmp(a).expect("values are finite"));
    let h_n = f.spec().cell_volume();
    let mut best = 0.0f64;
    for (count_minus_one, window) in magnitudes.windows(2).enumerate() {
        // The distribution only changes at sampled values; evaluate where a
        // run of equal magnitudes ends, with the >= count for that value.
        if window[0] == window[1] {
            continue;
        }
        let v = window[0];
        if v == 0.0 {
            break;
        }
        let measure = h_n * (count_minus_one + 1) as f64;
        best = best.max(v * measure.powf(1.0 / t));
    }
    if let Some(&last) = magnitudes.last() {
        if last > 0.0 {
            best = best.max(last * (h_n * magnitudes.len() as f64).powf(1.0 / t));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;
    use crate::testfns::{sample, AnalyticFunction};
    use num_complex::Complex64;

    fn spec1(l: f64, n: usize) -> GridSpec {
        GridSpec::new(1, l, n).unwrap()
    }

    #[test]
    fn constant_ball_norm_counts_cells() {
        let spec = spec1(16.0, 64);
        let f = GridFunction::from_real_fn(spec, |_| 1.0).unwrap();
        let h = spec.spacing();
        for &r in &[0.9, 1.7, 3.3] {
            let got = ball_local_norm(&f, 2.0, [0.0; 3], r).unwrap();
            // Count of lattice points with |x| < r around an on-lattice
            // center, times h, approaches the interval length 2r.
            let count = (2.0 * (r / h).floor() + 1.0).min(spec.points_per_axis() as f64);
            assert!((got - (h * count).sqrt()).abs() < 1e-12);
            assert!((got * got - 2.0 * r).abs() <= 2.0 * h);
        }
    }

    #[test]
    fn zero_function_has_zero_ball_norm() {
        let spec = spec1(16.0, 32);
        let f = GridFunction::from_real_fn(spec, |_| 0.0).unwrap();
        assert_eq!(ball_local_norm(&f, 2.0, [0.0; 3], 2.0).unwrap(), 0.0);
    }

    #[test]
    fn ball_norm_grows_with_radius() {
        let spec = spec1(16.0, 128);
        let f = sample(&AnalyticFunction::bump(&[0.0], 2.0, 1.0), &spec).unwrap();
        let mut previous = 0.0;
        for k in 1..20 {
            let r = 0.4 * k as f64;
            let value = ball_local_norm(&f, 2.0, [0.0; 3], r).unwrap();
            assert!(value >= previous);
            previous = value;
        }
    }

    #[test]
    fn empty_ball_is_an_error() {
        let spec = spec1(16.0, 32);
        let f = GridFunction::from_real_fn(spec, |_| 1.0).unwrap();
        let err = ball_local_norm(&f, 2.0, [0.21, 0.0, 0.0], 0.05);
        assert!(matches!(err, Err(NormsError::EmptyBall { .. })));
    }

    #[test]
    fn sup_ball_norm_matches_max() {
        let spec = spec1(16.0, 64);
        let f = sample(&AnalyticFunction::bump(&[0.0], 2.0, 3.0), &spec).unwrap();
        let got = ball_local_norm(&f, f64::INFINITY, [0.0; 3], 8.0).unwrap();
        assert_eq!(got, f.max_abs());
    }

    #[test]
    fn families_reach_the_box_diameter() {
        for n in 1..=3 {
            let spec = GridSpec::new(n, 16.0, 16).unwrap();
            let family = BallFamily::geometric(&spec);
            let diameter = (n as f64).sqrt() * 16.0;
            assert!(*family.radii().last().unwrap() >= diameter);
            assert!(family.radii().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn geometric_radii_never_tie_with_lattice_distances() {
        // Squared rung radii in units of h^2 are (16/9) 2^m, never integers,
        // while squared lattice distances are integers in those units.
        let spec = spec1(32.0, 512);
        let family = BallFamily::geometric(&spec);
        let h = spec.spacing();
        for &r in family.radii() {
            // (16/9) 2^m stays at least 1/9 away from every integer.
            let t_sq = (r * r) / (h * h);
            assert!(
                (t_sq - t_sq.round()).abs() > 0.1,
                "rung {r} lands on a lattice distance"
            );
        }
    }

    #[test]
    fn morrey_with_equal_exponents_is_the_lebesgue_norm() {
        let spec = spec1(32.0, 256);
        let family = BallFamily::geometric(&spec);
        for desc in [
            AnalyticFunction::bump(&[1.0], 2.0, 1.0),
            AnalyticFunction::gaussian(&[0.0], 1.0),
            AnalyticFunction::mollified_noise(4, 3.0, 0.75),
        ] {
            let f = sample(&desc, &spec).unwrap();
            for &p in &[1.0, 1.5, 2.0, 3.0] {
                let morrey = morrey_norm(&f, p, p, &family).unwrap();
                let lebesgue = lebesgue_norm(&f, p).unwrap();
                assert!(
                    (morrey.value - lebesgue).abs() <= 1e-12 * lebesgue,
                    "p = {p}"
                );
            }
        }
    }

    #[test]
    fn indicator_norm_approaches_the_ball_volume_power() {
        let q = 3.0;
        let p = 1.5;
        let mut errors = Vec::new();
        for &n_pts in &[256usize, 512] {
            let spec = spec1(32.0, n_pts);
            let f = GridFunction::from_real_fn(spec, |x| f64::from(x[0].abs() < 1.0)).unwrap();
            let family = BallFamily::linear(&spec);
            let got = morrey_norm(&f, p, q, &family).unwrap();
            let exact = 2.0f64.powf(1.0 / q);
            errors.push((got.value - exact).abs() / exact);
            assert!((got.witness_radius - 1.0).abs() < 0.1, "{got:?}");
            assert_eq!(got.witness_center, [0.0; 3]);
        }
        assert!(errors[1] < errors[0], "{errors:?}");
    }

    #[test]
    fn dyadic_dilation_follows_the_scaling_law() {
        let g = AnalyticFunction::bump(&[0.0], 2.0, 1.0);
        for (n, n_pts, tol) in [(1usize, 256usize, 0.02), (2, 128, 0.02)] {
            let spec = GridSpec::new(n, 32.0, n_pts).unwrap();
            let family = BallFamily::geometric(&spec);
            let (p, q) = (1.5, 3.0);
            let base = morrey_norm(&sample(&g, &spec).unwrap(), p, q, &family)
                .unwrap()
                .value;
            let dilated = morrey_norm(
                &sample(&g.clone().dilate(2.0), &spec).unwrap(),
                p,
                q,
                &family,
            )
            .unwrap()
            .value;
            let want = 2.0f64.powf(-(n as f64) / q);
            let ratio = dilated / base;
            assert!(
                (ratio - want).abs() <= tol * want,
                "n = {n}: ratio {ratio} vs {want}"
            );
        }
    }

    #[test]
    fn enlarging_the_family_never_decreases_the_norm() {
        let spec = spec1(32.0, 128);
        let f = sample(&AnalyticFunction::mollified_noise(9, 3.0, 0.75), &spec).unwrap();
        let base = BallFamily::geometric(&spec);
        let mut radii = base.radii().to_vec();
        radii.insert(3, 0.5 * (radii[2] + radii[3]));
        let larger = BallFamily::custom(&spec, 1, radii).unwrap();
        let a = morrey_norm(&f, 1.5, 3.0, &base).unwrap().value;
        let b = morrey_norm(&f, 1.5, 3.0, &larger).unwrap().value;
        assert!(b >= a);
    }

    #[test]
    fn norm_axioms_hold_on_random_pairs() {
        let spec = spec1(16.0, 64);
        let family = BallFamily::geometric(&spec);
        let (p, q) = (1.5, 2.5);
        for seed in 0..50u64 {
            let f = sample(&AnalyticFunction::mollified_noise(seed, 3.0, 1.0), &spec).unwrap();
            let g = sample(
                &AnalyticFunction::mollified_noise(seed + 1000, 3.0, 1.0),
                &spec,
            )
            .unwrap();
            let nf = morrey_norm(&f, p, q, &family).unwrap().value;
            let ng = morrey_norm(&g, p, q, &family).unwrap().value;
            let c = Complex64::new(-2.5, 1.0);
            let scaled = morrey_norm(&f.scaled(c).unwrap(), p, q, &family)
                .unwrap()
                .value;
            assert!((scaled - c.norm() * nf).abs() <= 1e-12 * scaled.max(1e-300));
            let sum = morrey_norm(
                &f.linear_combination(Complex64::new(1.0, 0.0), &g, Complex64::new(1.0, 0.0))
                    .unwrap(),
                p,
                q,
                &family,
            )
            .unwrap()
            .value;
            assert!(sum <= (nf + ng) * (1.0 + 1e-12), "seed {seed}");
        }
    }

    #[test]
    fn lattice_translation_leaves_the_norm_unchanged() {
        let spec = spec1(32.0, 256);
        let family = BallFamily::geometric(&spec);
        let f = AnalyticFunction::mollified_noise(21, 3.0, 0.75);
        let base = morrey_norm(&sample(&f, &spec).unwrap(), 1.5, 3.0, &family)
            .unwrap()
            .value;
        let shifted = morrey_norm(
            &sample(&f.clone().translate(&[3.0]), &spec).unwrap(),
            1.5,
            3.0,
            &family,
        )
        .unwrap()
        .value;
        assert!((shifted - base).abs() <= 1e-12 * base);
    }

    #[test]
    fn lebesgue_norm_matches_closed_forms() {
        let spec = spec1(32.0, 512);
        let f = sample(&AnalyticFunction::gaussian(&[0.0], 1.0), &spec).unwrap();
        // integral of exp(-x^2) is sqrt(pi).
        let want = std::f64::consts::PI.powf(0.25);
        assert!((lebesgue_norm(&f, 2.0).unwrap() - want).abs() < 1e-8);
        let k_cells = GridFunction::from_real_fn(spec, |x| f64::from(x[0].abs() < 0.9)).unwrap();
        let count = spec
            .indices()
            .filter(|&i| spec.point(i)[0].abs() < 0.9)
            .count() as f64;
        let h = spec.spacing();
        for &p in &[1.0, 2.0, 4.0] {
            let got = lebesgue_norm(&k_cells, p).unwrap();
            assert!((got - (count * h).powf(1.0 / p)).abs() < 1e-13);
        }
        let c = Complex64::new(0.0, -3.0);
        let scaled = lebesgue_norm(&f.scaled(c).unwrap(), 2.0).unwrap();
        assert!((scaled - 3.0 * lebesgue_norm(&f, 2.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn weak_norm_of_indicator_is_measure_power() {
        let spec = spec1(16.0, 64);
        let f = GridFunction::from_real_fn(spec, |x| f64::from(x[0].abs() < 2.0)).unwrap();
        let count = spec
            .indices()
            .filter(|&i| spec.point(i)[0].abs() < 2.0)
            .count() as f64;
        let measure = count * spec.spacing();
        for &t in &[1.0, 2.0, 3.5] {
            let got = weak_norm(&f, t).unwrap();
            assert!((got - measure.powf(1.0 / t)).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn weak_norm_is_dominated_by_lebesgue() {
        let spec = spec1(16.0, 64);
        for seed in 0..20u64 {
            let f = sample(&AnalyticFunction::mollified_noise(seed, 3.0, 1.0), &spec).unwrap();
            for &t in &[1.0, 2.0, 4.0] {
                let weak = weak_norm(&f, t).unwrap();
                let strong = lebesgue_norm(&f, t).unwrap();
                assert!(weak <= strong * (1.0 + 1e-12), "seed {seed}, t = {t}");
            }
        }
    }

    #[test]
    fn power_weight_separates_weak_from_strong() {
        // |x|^(-1/t) lies in weak-L^t but not L^t; under refinement the weak
        // norm is stable while the Lebesgue norm keeps growing.
        let t = 2.0;
        let w = AnalyticFunction::power_weight(1.0 / t);
        let coarse = spec1(32.0, 256);
        let fine = spec1(32.0, 1024);
        let weak_c = weak_norm(&sample(&w, &coarse).unwrap(), t).unwrap();
        let weak_f = weak_norm(&sample(&w, &fine).unwrap(), t).unwrap();
        let strong_c = lebesgue_norm(&sample(&w, &coarse).unwrap(), t).unwrap();
        let strong_f = lebesgue_norm(&sample(&w, &fine).unwrap(), t).unwrap();
        assert!((weak_f / weak_c - 1.0).abs() < 0.03, "{weak_c} -> {weak_f}");
        assert!(strong_f / strong_c > 1.05, "{strong_c} -> {strong_f}");
    }

    #[test]
    fn power_weight_morrey_objective_is_radius_flat_at_the_origin() {
        // With u = np/(alpha q), v = n/alpha the objective at center 0 is
        // radius-independent in the continuum; check the discrete plateau on
        // the interior window [L/16, L/4].
        let spec = spec1(32.0, 512);
        let (alpha, p, q) = (0.25, 1.5, 3.0);
        let n = 1.0;
        let u = n * p / (alpha * q);
        let v = n / alpha;
        let f = sample(&AnalyticFunction::power_weight(alpha), &spec).unwrap();
        let family = BallFamily::geometric(&spec);
        let omega = unit_ball_volume(1).unwrap();
        let l = spec.extent();
        let mut plateau: Vec<f64> = Vec::new();
        for &r in family.radii() {
            if r < l / 16.0 || r > l / 4.0 {
                continue;
            }
            let local = ball_local_norm(&f, u, [0.0; 3], r).unwrap();
            plateau.push((omega * r).powf(1.0 / v - 1.0 / u) * local);
        }
        assert!(plateau.len() >= 3);
        let lo = plateau.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = plateau.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo < 1.03, "plateau spread {}", hi / lo);
    }

    #[test]
    fn power_weight_morrey_norm_is_stable_under_refinement() {
        let (alpha, p, q) = (0.25, 1.5, 3.0);
        let u = p / (alpha * q);
        let v = 1.0 / alpha;
        let w = AnalyticFunction::power_weight(alpha);
        let mut values = Vec::new();
        for &n_pts in &[256usize, 512] {
            let spec = spec1(32.0, n_pts);
            let f = sample(&w, &spec).unwrap();
            let family = BallFamily::geometric(&spec);
            values.push(morrey_norm(&f, u, v, &family).unwrap().value);
        }
        assert!((values[1] / values[0] - 1.0).abs() < 0.05, "{values:?}");
    }

    #[test]
    fn exponent_validation_is_enforced() {
        let spec = spec1(16.0, 32);
        let f = GridFunction::from_real_fn(spec, |_| 1.0).unwrap();
        let family = BallFamily::geometric(&spec);
        assert!(matches!(
            morrey_norm(&f, 2.0, 1.0, &family),
            Err(NormsError::ExponentOrder { .. })
        ));
        assert!(matches!(
            morrey_norm(&f, 0.5, 1.0, &family),
            Err(NormsError::ExponentRange { .. })
        ));
        assert!(matches!(
            weak_norm(&f, 0.0),
            Err(NormsError::ExponentRange { .. })
        ));
        assert!(matches!(
            lebesgue_norm(&f, f64::NAN),
            Err(NormsError::ExponentRange { .. })
        ));
        let fine = BallFamily::custom(&spec, 1, vec![1.0, 2.0]);
        assert!(matches!(fine, Err(NormsError::BadRadii(_))));
    }

    #[test]
    fn witness_prefers_first_scan_position_on_ties() {
        // Two mirrored bumps produce equal objectives at two centers; the
        // scan keeps the first strictly greater value, so the witness must
        // come from the earlier (more negative) center.
        let spec = spec1(32.0, 128);
        let two = AnalyticFunction::sum(vec![
            AnalyticFunction::bump(&[-6.0], 1.5, 1.0),
            AnalyticFunction::bump(&[6.0], 1.5, 1.0),
        ]);
        let f = sample(&two, &spec).unwrap();
        let family = BallFamily::geometric(&spec);
        let got = morrey_norm(&f, 1.5, 3.0, &family).unwrap();
        assert!(
            got.witness_center[0] <= 0.0,
            "witness {:?} should sit at or left of the origin",
            got.witness_center
        );
    }

    #[test]
    fn morrey_norm_matches_brute_force_scan() {
        // Independent oracle: evaluate every (center, rung) objective with
        // ball_local_norm and take the max directly.
        for n in 1..=2usize {
            let spec = GridSpec::new(n, 8.0, 16).unwrap();
            let f = sample(&AnalyticFunction::mollified_noise(5, 2.0, 0.8), &spec).unwrap();
            let family = BallFamily::geometric(&spec);
            let (p, q) = (1.5, 2.5);
            let omega = unit_ball_volume(n).unwrap();
            let mut brute = 0.0f64;
            for c in spec.indices() {
                let center = spec.point(c);
                for &r in family.radii() {
                    let local = ball_local_norm(&f, p, center, r).unwrap();
                    let value = (omega * r.powi(n as i32)).powf(1.0 / q - 1.0 / p) * local;
                    if value > brute {
                        brute = value;
                    }
                }
            }
            let fast = morrey_norm(&f, p, q, &family).unwrap().value;
            assert!(
                (fast - brute).abs() <= 1e-12 * brute,
                "n = {n}: {fast} vs {brute}"
            );
        }
    }
}
