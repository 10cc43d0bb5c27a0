//! Point and dataset representations, CSV ingestion, and the synthetic
//! generators used by tests and benchmarks.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::scalar::Scalar;
use crate::Result;

/// A single observation: an ordered sequence of finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<F> {
    coords: Vec<F>,
}

impl<F: Scalar> Point<F> {
    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("point with zero coordinates".into()));
        }
        if let Some(bad) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {bad} is not finite"
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl<F: Scalar> AsRef<[F]> for Point<F> {
    fn as_ref(&self) -> &[F] {
        &self.coords
    }
}

/// An immutable collection of points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<F> {
    points: Vec<Point<F>>,
    dim: usize,
}

impl<F: Scalar> Dataset<F> {
    /// Builds a dataset from points, checking that it is nonempty and
    /// that every point has the same dimension.
    pub fn new(points: Vec<Point<F>>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::EmptyInput("dataset with zero points".into()))?;
        let dim = first.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(Self { points, dim })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let points = rows.into_iter().map(Point::new).collect::<Result<_>>()?;
        Self::new(points)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point<F>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point<F> {
        &self.points[i]
    }

    /// Coordinates of point `i` as a slice.
    pub fn coords(&self, i: usize) -> &[F] {
        self.points[i].coords()
    }

    /// Dataset restricted to the given row indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        Self::new(points)
    }

    /// Per-column z-scored copy. Columns with zero spread are centered
    /// but not scaled.
    pub fn standardized(&self) -> Self {
        let n = F::from_usize(self.n()).unwrap();
        let mut means = vec![F::zero(); self.dim];
        for p in &self.points {
            for (m, &c) in means.iter_mut().zip(p.coords()) {
                *m += c;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = vec![F::zero(); self.dim];
        for p in &self.points {
            for ((v, &c), &m) in vars.iter_mut().zip(p.coords()).zip(&means) {
                let d = c - m;
                *v += d * d;
            }
        }
        let stds: Vec<F> = vars
            .iter()
            .map(|&v| {
                let s = (v / n).sqrt();
                if s > F::zero() {
                    s
                } else {
                    F::one()
                }
            })
            .collect();
        let points = self
            .points
            .iter()
            .map(|p| Point {
                coords: p
                    .coords()
                    .iter()
                    .zip(means.iter().zip(&stds))
                    .map(|(&c, (&m, &s))| (c - m) / s)
                    .collect(),
            })
            .collect();
        Self {
            points,
            dim: self.dim,
        }
    }

    /// Writes the dataset as comma-separated rows, one point per line.
    /// Values use the shortest round-tripping decimal form.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = String::new();
        for p in &self.points {
            let mut first = true;
            for c in p.coords() {
                if !first {
                    out.push(',');
                }
                write!(out, "{c}").expect("write to string");
                first = false;
            }
            out.push('\n');
        }
        fs::write(path, out)?;
        Ok(())
    }
}

/// Loads a numeric CSV file: comma-separated, UTF-8, one point per row,
/// optional single header row. Malformed rows are rejected, never
/// skipped, so the dataset size always matches the file.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Dataset<f64>> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text, has_header)
}

/// CSV parsing on an in-memory string; see [`load_csv`].
pub fn parse_csv(text: &str, has_header: bool) -> Result<Dataset<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected_cols = None;
    let mut lines = text.lines();
    if has_header {
        lines.next();
    }
    for (row_idx, line) in lines.enumerate() {
        let row_no = row_idx + 1; // 1-based, header not counted
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let expected = *expected_cols.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(Error::CsvShape {
                row: row_no,
                expected,
                found: cells.len(),
            });
        }
        let mut coords = Vec::with_capacity(cells.len());
        for (col_idx, cell) in cells.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| Error::CsvParse {
                row: row_no,
                col: col_idx + 1,
                value: cell.trim().to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::CsvParse {
                    row: row_no,
                    col: col_idx + 1,
                    value: cell.trim().to_string(),
                });
            }
            coords.push(v);
        }
        rows.push(coords);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("CSV file contains no data rows".into()));
    }
    Dataset::from_rows(rows)
}

/// Grid side length for `k` centers in `dim` dimensions.
fn grid_side(k: usize, dim: usize) -> usize {
    let mut side = 1usize;
    while side.pow(dim as u32) < k {
        side += 1;
    }
    side
}

/// Deterministic well-separated centers: a grid with spacing
/// `10 * spread`, so centers are at least `10 * spread` apart.
fn blob_centers(k: usize, dim: usize, spread: f64) -> Vec<Vec<f64>> {
    let side = grid_side(k, dim);
    let spacing = 10.0 * spread;
    (0..k)
        .map(|j| {
            let mut rest = j;
            (0..dim)
                .map(|_| {
                    let cell = rest % side;
                    rest /= side;
                    cell as f64 * spacing
                })
                .collect()
        })
        .collect()
}

/// Generates `k` isotropic Gaussian blobs totalling `n` points in `dim`
/// dimensions; cluster sizes differ by at most one point. Returns the
/// dataset together with the generating cluster labels.
///
/// Deterministic for a fixed seed: points are drawn cluster by cluster
/// from a ChaCha stream in `f64` and narrowed to `F`.
pub fn gen_blobs<F: Scalar>(
    n: usize,
    k: usize,
    dim: usize,
    spread: f64,
    seed: u64,
) -> Result<(Dataset<F>, Vec<usize>)> {
    if k < 1 {
        return Err(Error::InvalidArgument("gen_blobs requires k >= 1".into()));
    }
    if n < k {
        return Err(Error::InvalidArgument(format!(
            "gen_blobs requires n >= k, got n={n}, k={k}"
        )));
    }
    if dim < 1 {
        return Err(Error::InvalidArgument("gen_blobs requires dim >= 1".into()));
    }
    if spread <= 0.0 || spread.is_nan() {
        return Err(Error::InvalidArgument(
            "gen_blobs requires spread > 0".into(),
        ));
    }
    let centers = blob_centers(k, dim, spread);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = n / k;
    let extra = n % k;
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (c, center) in centers.iter().enumerate() {
        let size = base + usize::from(c < extra);
        for _ in 0..size {
            let coords = center
                .iter()
                .map(|&m| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    F::from_f64_lossy(m + spread * z)
                })
                .collect();
            points.push(Point { coords });
            labels.push(c);
        }
    }
    Ok((Dataset::new(points)?, labels))
}

/// Generates two interleaved half-circle arcs with Gaussian jitter,
/// split as evenly as possible between the arcs. Deterministic for a
/// fixed seed.
pub fn gen_moons<F: Scalar>(n: usize, jitter: f64, seed: u64) -> Result<Dataset<F>> {
    if n < 2 {
        return Err(Error::InvalidArgument("gen_moons requires n >= 2".into()));
    }
    if jitter < 0.0 {
        return Err(Error::InvalidArgument(
            "gen_moons requires jitter >= 0".into(),
        ));
    }
    let n_outer = n / 2 + n % 2;
    let n_inner = n - n_outer;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jittered = |v: f64| {
        if jitter > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + jitter * z
        } else {
            v
        }
    };
    let arc = |i: usize, m: usize| {
        if m == 1 {
            0.0
        } else {
            std::f64::consts::PI * i as f64 / (m - 1) as f64
        }
    };
    let mut points = Vec::with_capacity(n);
    for i in 0..n_outer {
        let t = arc(i, n_outer);
        let x = jittered(t.cos());
        let y = jittered(t.sin());
        points.push(Point {
            coords: vec![F::from_f64_lossy(x), F::from_f64_lossy(y)],
        });
    }
    for i in 0..n_inner {
        let t = arc(i, n_inner);
        let x = jittered(1.0 - t.cos());
        let y = jittered(0.5 - t.sin());
        points.push(Point {
            coords: vec![F::from_f64_lossy(x), F::from_f64_lossy(y)],
        });
    }
    Dataset::new(points)
}
