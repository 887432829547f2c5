//! Periodic lattice, sampled fields and their discrete spectra.
//!
//! The computational domain is the periodic box `[-L/2, L/2)^n` for
//! `n in {1, 2, 3}`, discretised by `N` points per axis with spacing
//! `h = L/N`. Lattice points are `x_j = -L/2 + j h`, `j = 0..N`. The
//! matching frequency lattice is `xi_k = (2 pi / L) m` with the signed index
//! `m = k` for `k < N/2` and `m = k - N` otherwise, so `|xi| <= pi/h`
//! componentwise.
//!
//! `N` is required to be even so that dilation by 2 maps the lattice into
//! itself; that property is load-bearing for the dyadic dilation checks in
//! the norm suites.
//!
//! Storage is row-major over the axis indices with the last axis fastest.
//! Unused trailing axes of the fixed-size index/point arrays are zero.

use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

/// Coordinates of a lattice point. Only the first `n_dims` entries are
/// meaningful; trailing entries are zero.
pub type Point = [f64; 3];

/// Axis indices of a lattice point, same convention as [`Point`].
pub type Index = [usize; 3];

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("dimension {0} is unsupported; this toolkit covers n in {{1, 2, 3}}")]
    Dimension(usize),
    #[error("points per axis must be even and at least 4, got {0}")]
    PointsPerAxis(usize),
    #[error("box extent must be positive and finite, got {0}")]
    Extent(f64),
    #[error("grid mismatch: left is {left}, right is {right}")]
    SpecMismatch { left: String, right: String },
    #[error("non-finite value at flat index {index}: {value}")]
    NonFinite { index: usize, value: Complex64 },
}

/// Geometry of the periodic box and its lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    n_dims: usize,
    extent: f64,
    points_per_axis: usize,
    spacing: f64,
}

impl GridSpec {
    /// Builds a grid over `[-extent/2, extent/2)^n_dims` with
    /// `points_per_axis` samples per axis.
    ///
    /// The stored extent is re-derived as `spacing * points_per_axis` so that
    /// `h * N = L` holds exactly in the arithmetic used; for extents that are
    /// not representable as `N * (extent / N)` this adjusts the box by at
    /// most one ulp.
    pub fn new(n_dims: usize, extent: f64, points_per_axis: usize) -> Result<Self, GridError> {
        if !(1..=3).contains(&n_dims) {
            return Err(GridError::Dimension(n_dims));
        }
        if points_per_axis < 4 || points_per_axis % 2 != 0 {
            return Err(GridError::PointsPerAxis(points_per_axis));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(GridError::Extent(extent));
        }
        let spacing = extent / points_per_axis as f64;
        Ok(Self {
            n_dims,
            extent: spacing * points_per_axis as f64,
            points_per_axis,
            spacing,
        })
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    /// Box side length `L`.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Samples per axis `N`.
    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Lattice spacing `h = L/N`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total number of lattice points `N^n`.
    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.n_dims as u32)
    }

    /// Cell volume `h^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.n_dims as i32)
    }

    /// Coordinate of axis index `j`: `-L/2 + j h`.
    pub fn coordinate(&self, j: usize) -> f64 {
        j as f64 * self.spacing - 0.5 * self.extent
    }

    /// Signed frequency `xi = (2 pi / L) m` for axis index `k`.
    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.points_per_axis;
        let m = if k < n / 2 {
            k as f64
        } else {
            k as f64 - n as f64
        };
        2.0 * std::f64::consts::PI / self.extent * m
    }

    /// Coordinates of a lattice index.
    pub fn point(&self, idx: Index) -> Point {
        let mut x = [0.0; 3];
        for (axis, slot) in x.iter_mut().enumerate().take(self.n_dims) {
            *slot = self.coordinate(idx[axis]);
        }
        x
    }

    /// Frequency vector of a spectral index.
    pub fn frequency_point(&self, idx: Index) -> Point {
        let mut xi = [0.0; 3];
        for (axis, slot) in xi.iter_mut().enumerate().take(self.n_dims) {
            *slot = self.frequency(idx[axis]);
        }
        xi
    }

    /// Flat storage offset of an index (row-major, last axis fastest).
    pub fn flat_index(&self, idx: Index) -> usize {
        let n = self.points_per_axis;
        idx.iter().take(self.n_dims).fold(0, |acc, &i| acc * n + i)
    }

    /// Iterates all lattice indices in storage order.
    pub fn indices(&self) -> LatticeIndices {
        LatticeIndices {
            n_dims: self.n_dims,
            per_axis: self.points_per_axis,
            next: Some([0; 3]),
        }
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), GridError> {
        if self == other {
            Ok(())
        } else {
            Err(GridError::SpecMismatch {
                left: format!("{self}"),
                right: format!("{other}"),
            })
        }
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} L={} N={} h={}",
            self.n_dims, self.extent, self.points_per_axis, self.spacing
        )
    }
}

/// Row-major iterator over lattice indices.
pub struct LatticeIndices {
    n_dims: usize,
    per_axis: usize,
    next: Option<Index>,
}

impl Iterator for LatticeIndices {
    type Item = Index;

    fn next(&mut self) -> Option<Index> {
        let current = self.next?;
        let mut bumped = current;
        let mut axis = self.n_dims;
        loop {
            if axis == 0 {
                self.next = None;
                break;
            }
            axis -= 1;
            bumped[axis] += 1;
            if bumped[axis] < self.per_axis {
                self.next = Some(bumped);
                break;
            }
            bumped[axis] = 0;
        }
        Some(current)
    }
}

/// A complex-valued field sampled on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    /// Samples a complex-valued closure on the lattice.
    pub fn from_fn(
        spec: GridSpec,
        mut f: impl FnMut(Point) -> Complex64,
    ) -> Result<Self, GridError> {
        let mut values = Vec::with_capacity(spec.total_points());
        for idx in spec.indices() {
            values.push(f(spec.point(idx)));
        }
        let out = Self { spec, values };
        out.check_finite()?;
        Ok(out)
    }

    /// Samples a real-valued closure on the lattice.
    pub fn from_real_fn(
        spec: GridSpec,
        mut f: impl FnMut(Point) -> f64,
    ) -> Result<Self, GridError> {
        Self::from_fn(spec, |x| Complex64::new(f(x), 0.0))
    }

    /// Wraps raw values already laid out in storage order.
    pub fn from_values(spec: GridSpec, values: Vec<Complex64>) -> Result<Self, GridError> {
        if values.len() != spec.total_points() {
            return Err(GridError::SpecMismatch {
                left: format!("{} points", values.len()),
                right: format!("{spec}"),
            });
        }
        let out = Self { spec, values };
        out.check_finite()?;
        Ok(out)
    }

    pub(crate) fn from_parts(spec: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), spec.total_points());
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value_at(&self, idx: Index) -> Complex64 {
        self.values[self.spec.flat_index(idx)]
    }

    /// `a * self + b * other` on a shared grid.
    pub fn linear_combination(
        &self,
        a: Complex64,
        other: &Self,
        b: Complex64,
    ) -> Result<Self, GridError> {
        self.spec.check_same(&other.spec)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Self::from_values(self.spec, values)
    }

    /// Pointwise product with another field on the same grid.
    pub fn pointwise_multiply(&self, other: &Self) -> Result<Self, GridError> {
        self.spec.check_same(&other.spec)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| u * v)
            .collect();
        Self::from_values(self.spec, values)
    }

    /// Scales by a complex constant.
    pub fn scaled(&self, c: Complex64) -> Result<Self, GridError> {
        let values = self.values.iter().map(|&u| c * u).collect();
        Self::from_values(self.spec, values)
    }

    /// Pointwise difference `self - other`.
    pub fn difference(&self, other: &Self) -> Result<Self, GridError> {
        self.linear_combination(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Largest modulus over the lattice.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Lattice mean, i.e. the zero Fourier coefficient divided by `L^n`.
    pub fn mean(&self) -> Complex64 {
        let sum: Complex64 = self.values.iter().sum();
        sum / self.values.len() as f64
    }

    fn check_finite(&self) -> Result<(), GridError> {
        for (index, v) in self.values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(GridError::NonFinite { index, value: *v });
            }
        }
        Ok(())
    }

    /// Debug dump as CSV rows `index, x0[, x1[, x2]], re, im`.
    ///
    /// The column layout follows the active dimension; this is a debugging
    /// aid, not a stability contract.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.spec.n_dims;
        let coords: String = (0..n).map(|a| format!("x{a},")).collect();
        writeln!(out, "index,{coords}re,im")?;
        for (flat, idx) in self.spec.indices().enumerate() {
            let x = self.spec.point(idx);
            let coords: String = x.iter().take(n).map(|c| format!("{c},")).collect();
            let v = self.values[flat];
            writeln!(out, "{flat},{coords}{},{}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Discrete Fourier coefficients of a [`GridFunction`], stored in FFT index
/// layout on the same `N^n` lattice of frequencies.
///
/// With the forward convention `F(xi) = integral f(x) exp(-i x . xi) dx`,
/// coefficients approximate `F(xi_k)` including the `h^n` quadrature factor,
/// so Parseval reads `h^n sum |f|^2 = L^-n sum |F|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl SpectrumFunction {
    pub(crate) fn from_parts(spec: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), spec.total_points());
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[cfg(test)]
    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn value_at(&self, idx: Index) -> Complex64 {
        self.values[self.spec.flat_index(idx)]
    }

    /// Coefficient of the constant mode `xi = 0`.
    pub fn zero_mode(&self) -> Complex64 {
        self.values[0]
    }

    /// Euclidean norm of the frequency vector at a spectral index.
    pub fn frequency_norm(&self, idx: Index) -> f64 {
        let xi = self.spec.frequency_point(idx);
        xi[..self.spec.n_dims()]
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
