//! Points on the torus `T^d = R^d / Z^d`, wraparound metrics, covering radius
//! certification and integer matrix action.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::TorusScalar;

/// Grids larger than this are refused rather than silently taking hours.
pub const MAX_GRID_NODES: u64 = 1 << 28;

#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint<S> {
    coords: Vec<S>,
}

impl<S: TorusScalar> TorusPoint<S> {
    /// Builds a point from arbitrary coordinates, reducing each modulo 1.
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("coords", "a torus point needs dimension >= 1"));
        }
        Ok(reduce_to_torus(&coords))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64_lossy()).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_coord_string()).collect()
    }

    /// Translation by an arbitrary vector, reduced back onto the torus.
    pub fn translate(&self, v: &[S]) -> Result<Self> {
        check_dim(self.dim(), v.len())?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(v)
                .map(|(a, b)| (a.clone() + b.clone()).frac())
                .collect(),
        })
    }

    fn same_as(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len() && self.coords.iter().zip(&other.coords).all(|(a, b)| a.coord_eq(b))
    }
}

impl<S: TorusScalar> fmt::Display for TorusPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl<S: TorusScalar> Serialize for TorusPoint<S> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_strings().serialize(s)
    }
}

/// Reduces every coordinate modulo 1 into `[0, 1)`.
pub fn reduce_to_torus<S: TorusScalar>(v: &[S]) -> TorusPoint<S> {
    TorusPoint {
        coords: v.iter().map(TorusScalar::frac).collect(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Sup,
    Euclidean,
}

impl std::str::FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(Metric::Sup),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(Error::Parse(format!("unknown metric `{other}`"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Sup => "sup",
            Metric::Euclidean => "euclidean",
        })
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Wraparound distance. The sup metric is evaluated exactly in `S` before the
/// final conversion.
pub fn torus_distance<S: TorusScalar>(x: &TorusPoint<S>, y: &TorusPoint<S>, metric: Metric) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    Ok(match metric {
        Metric::Sup => sup_distance_exact(x.coords(), y.coords()).to_f64_lossy(),
        Metric::Euclidean => x
            .coords()
            .iter()
            .zip(y.coords())
            .map(|(a, b)| a.wrap_distance(b).to_f64_lossy().powi(2))
            .sum::<f64>()
            .sqrt(),
    })
}

fn sup_distance_exact<S: TorusScalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (a, b)| {
        let d = a.wrap_distance(b);
        if d > acc {
            d
        } else {
            acc
        }
    })
}

#[inline]
fn wrap_f64(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

#[inline]
fn distance_f64(x: &[f64], y: &[f64], metric: Metric) -> f64 {
    match metric {
        Metric::Sup => x.iter().zip(y).fold(0.0, |m, (a, b)| m.max(wrap_f64(*a, *b))),
        Metric::Euclidean => x
            .iter()
            .zip(y)
            .map(|(a, b)| wrap_f64(*a, *b).powi(2))
            .sum::<f64>()
            .sqrt(),
    }
}

/// A finite set of distinct torus points of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<S> {
    dim: usize,
    points: Vec<TorusPoint<S>>,
}

struct PointKey<'a, S>(&'a TorusPoint<S>);

impl<S: TorusScalar> PartialEq for PointKey<'_, S> {
    fn eq(&self, other: &Self) -> bool {
        self.0.same_as(other.0)
    }
}
impl<S: TorusScalar> Eq for PointKey<'_, S> {}
impl<S: TorusScalar> Hash for PointKey<'_, S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for c in &self.0.coords {
            c.hash_coord(state);
        }
    }
}

impl<S: TorusScalar> PointSet<S> {
    pub fn new(dim: usize, points: Vec<TorusPoint<S>>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            check_dim(dim, p.dim())?;
            if !seen.insert(PointKey(p)) {
                return Err(Error::DuplicatePoint { index });
            }
        }
        Ok(Self { dim, points })
    }

    /// Builds a set from raw coordinate rows, reducing each modulo 1.
    pub fn from_rows(dim: usize, rows: Vec<Vec<S>>) -> Result<Self> {
        let pts = rows.into_iter().map(TorusPoint::new).collect::<Result<Vec<_>>>()?;
        Self::new(dim, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint<S>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<TorusPoint<S>> {
        self.points
    }

    pub fn to_file(&self) -> PointSetFile {
        PointSetFile {
            dim: self.dim,
            exact: S::EXACT,
            points: self.points.iter().map(TorusPoint::to_strings).collect(),
        }
    }
}

/// Certified bracket on the covering radius `max_y dist(y, S)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringRadius<S: TorusScalar> {
    pub lo: f64,
    pub hi: f64,
    /// A point realising `lo`: the farthest grid node, or the exact gap midpoint in dimension 1.
    pub witness: TorusPoint<S>,
    /// Grid spacing used; zero for the exact one-dimensional sweep.
    pub grid_spacing: f64,
}

/// Exact covering radius of a one-dimensional set: half the largest cyclic
/// gap, with the midpoint of that gap as witness.
pub fn covering_radius_exact_1d<S: TorusScalar>(set: &PointSet<S>) -> Result<(S, TorusPoint<S>)> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    check_dim(1, set.dim())?;
    let mut xs: Vec<S> = set.points.iter().map(|p| p.coords[0].clone()).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("torus coordinates are ordered"));
    let two = S::one() + S::one();
    // the first widest gap in ascending order wins; the wrap gap comes last
    let wrap_gap = xs[0].clone() + S::one() - xs[xs.len() - 1].clone();
    let mut best_gap = S::zero();
    let mut best_start = xs[0].clone();
    let mut have = false;
    for w in xs.windows(2) {
        let gap = w[1].clone() - w[0].clone();
        if !have || gap > best_gap {
            best_gap = gap;
            best_start = w[0].clone();
            have = true;
        }
    }
    if !have || wrap_gap > best_gap {
        best_gap = wrap_gap;
        best_start = xs[xs.len() - 1].clone();
    }
    let radius = best_gap.clone() / two.clone();
    let mid = (best_start + radius.clone()).frac();
    Ok((radius, TorusPoint { coords: vec![mid] }))
}

/// Nearest-point queries on the torus for a fixed set, with points sorted by
/// their first coordinate so a query only scans a window around itself.
pub struct DistanceIndex {
    firsts: Vec<f64>,
    pts: Vec<Vec<f64>>,
}

impl DistanceIndex {
    pub fn new(points: &[Vec<f64>]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let firsts = pts.iter().map(|p| p[0]).collect();
        Self { firsts, pts }
    }

    /// Distance from `y` to the nearest indexed point.
    pub fn nearest(&self, y: &[f64], metric: Metric) -> f64 {
        let k = self.pts.len();
        if k == 0 {
            return f64::INFINITY;
        }
        let start = self.firsts.partition_point(|&v| v < y[0]) % k;
        let mut best = f64::INFINITY;
        let mut right_open = true;
        let mut left_open = true;
        let mut steps = 0usize;
        let mut r = start;
        let mut l = (start + k - 1) % k;
        while (right_open || left_open) && steps < k {
            if right_open {
                let off = (self.firsts[r] - y[0]).rem_euclid(1.0);
                if off >= best {
                    right_open = false;
                } else {
                    best = best.min(distance_f64(&self.pts[r], y, metric));
                    r = (r + 1) % k;
                    steps += 1;
                }
            }
            if left_open && steps < k {
                let off = (y[0] - self.firsts[l]).rem_euclid(1.0);
                if off >= best {
                    left_open = false;
                } else {
                    best = best.min(distance_f64(&self.pts[l], y, metric));
                    l = (l + k - 1) % k;
                    steps += 1;
                }
            }
        }
        best
    }
}

/// Brackets the covering radius to within `resolution`.
///
/// In dimension 1 the answer is exact (`lo == hi`). Otherwise the
/// distance-to-set function is evaluated on a uniform grid of `N` nodes per
/// axis; since that function is 1-Lipschitz, every point of the torus lies
/// within `h/2` (sup) or `h*sqrt(d)/2` (euclidean) of a node, `h = 1/N`.
pub fn covering_radius<S: TorusScalar>(
    set: &PointSet<S>,
    resolution: f64,
    metric: Metric,
) -> Result<CoveringRadius<S>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(invalid("resolution", format!("must be positive, got {resolution}")));
    }
    let d = set.dim();
    if d == 1 {
        let (r, witness) = covering_radius_exact_1d(set)?;
        let r = r.to_f64_lossy();
        return Ok(CoveringRadius {
            lo: r,
            hi: r,
            witness,
            grid_spacing: 0.0,
        });
    }

    let slack_factor = match metric {
        Metric::Sup => 0.5,
        Metric::Euclidean => 0.5 * (d as f64).sqrt(),
    };
    let n_axis = (slack_factor / resolution).ceil().max(1.0) as u64;
    let total = n_axis
        .checked_pow(d as u32)
        .filter(|&t| t <= MAX_GRID_NODES)
        .ok_or_else(|| invalid("resolution", format!("grid of {n_axis}^{d} nodes is too large")))?;
    let h = 1.0 / n_axis as f64;

    let index = DistanceIndex::new(&set.points.iter().map(TorusPoint::to_f64).collect::<Vec<_>>());
    let node = |idx: u64| -> Vec<u64> {
        let mut rem = idx;
        (0..d)
            .map(|_| {
                let c = rem % n_axis;
                rem /= n_axis;
                c
            })
            .collect()
    };
    let (lo_grid, arg) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let y: Vec<f64> = node(idx).iter().map(|&c| c as f64 * h).collect();
            (index.nearest(&y, metric), idx)
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| {
                if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
                    a
                } else {
                    b
                }
            },
        );

    let witness = TorusPoint {
        coords: node(arg)
            .into_iter()
            .map(|c| S::from_ratio(c as i64, n_axis as i64))
            .collect(),
    };
    // the exact distance of the witness replaces the float grid value where possible
    let lo = match metric {
        Metric::Sup if S::EXACT => set
            .points
            .iter()
            .map(|p| sup_distance_exact(p.coords(), witness.coords()))
            .fold(None::<S>, |m, v| match m {
                Some(m) if m <= v => Some(m),
                _ => Some(v),
            })
            .map(|v| v.to_f64_lossy())
            .unwrap_or(lo_grid),
        _ => lo_grid,
    };
    Ok(CoveringRadius {
        lo,
        // rounded outward so the bracket stays valid in floating point
        hi: (lo + slack_factor * h) * (1.0 + 4.0 * f64::EPSILON),
        witness,
        grid_spacing: h,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Dense,
    NotDense,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct DensityReport<S: TorusScalar> {
    pub verdict: Verdict,
    pub eps: f64,
    pub covering_radius_lo: f64,
    pub covering_radius_hi: f64,
    /// Uncovered point when `NotDense`.
    pub witness: Option<TorusPoint<S>>,
    pub grid_resolution: f64,
}

/// Three-valued epsilon-density test: `Dense` iff the certified covering radius
/// is at most `eps`, `NotDense` iff a point farther than `eps` from the set was
/// found.
pub fn is_eps_dense<S: TorusScalar>(
    set: &PointSet<S>,
    eps: f64,
    resolution: f64,
    metric: Metric,
) -> Result<DensityReport<S>> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    let cr = covering_radius(set, resolution, metric)?;
    let verdict = if cr.hi <= eps {
        Verdict::Dense
    } else if cr.lo > eps {
        Verdict::NotDense
    } else {
        Verdict::Unknown
    };
    Ok(DensityReport {
        verdict,
        eps,
        covering_radius_lo: cr.lo,
        covering_radius_hi: cr.hi,
        witness: (verdict == Verdict::NotDense).then_some(cr.witness),
        grid_resolution: resolution,
    })
}

/// Dense integer matrix with arbitrary-precision entries, row major.
/// Serialized as a list of rows of decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(invalid(
                "matrix",
                format!("{} entries cannot form a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(invalid("matrix", "ragged rows"));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }
}

impl Serialize for IntMatrix {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let rows: Vec<Vec<String>> = self
            .data
            .chunks(self.cols)
            .map(|r| r.iter().map(BigInt::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.trim().parse::<BigInt>().map_err(serde::de::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `M x mod 1`. For rational input the result is exact.
pub fn apply_integer_matrix<S: TorusScalar>(m: &IntMatrix, x: &TorusPoint<S>) -> Result<TorusPoint<S>> {
    if m.cols != x.dim() {
        return Err(Error::ShapeMismatch {
            rows: m.rows,
            cols: m.cols,
            len: x.dim(),
        });
    }
    let coords = (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(x.coords())
                .fold(S::zero(), |acc, (c, xi)| acc + xi.scale_mod1(c))
                .frac()
        })
        .collect();
    Ok(TorusPoint { coords })
}

/// Image of a whole set. Distinct inputs may collide, so the image is a plain list.
pub fn apply_to_set<S: TorusScalar>(m: &IntMatrix, set: &PointSet<S>) -> Result<Vec<TorusPoint<S>>> {
    set.points().iter().map(|p| apply_integer_matrix(m, p)).collect()
}

/// Removes repeated points (exact or bitwise equality) keeping first occurrences.
pub fn dedup_points<S: TorusScalar>(dim: usize, pts: Vec<TorusPoint<S>>) -> Result<PointSet<S>> {
    let mut out = Vec::with_capacity(pts.len());
    {
        let mut seen = HashSet::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            if seen.insert(PointKey(p)) {
                out.push(i);
            }
        }
    }
    let mut pts: Vec<Option<TorusPoint<S>>> = pts.into_iter().map(Some).collect();
    let kept = out
        .into_iter()
        .map(|i| pts[i].take().expect("index kept once"))
        .collect();
    PointSet::new(dim, kept)
}

/// On-disk form of a point set: coordinates as `"num/den"` strings when
/// exact, decimal strings otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub dim: usize,
    pub exact: bool,
    pub points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyPointSet {
    Exact(PointSet<BigRational>),
    Float(PointSet<f64>),
}

impl AnyPointSet {
    pub fn dim(&self) -> usize {
        match self {
            AnyPointSet::Exact(s) => s.dim(),
            AnyPointSet::Float(s) => s.dim(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            AnyPointSet::Exact(s) => s.k(),
            AnyPointSet::Float(s) => s.k(),
        }
    }
}

impl PointSetFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point set file serializes")
    }

    pub fn into_point_set(self) -> Result<AnyPointSet> {
        fn rows<S: TorusScalar>(file: &PointSetFile) -> Result<PointSet<S>> {
            let rows = file
                .points
                .iter()
                .map(|row| row.iter().map(|c| S::parse_coord(c)).collect::<Result<Vec<S>>>())
                .collect::<Result<Vec<_>>>()?;
            PointSet::from_rows(file.dim, rows)
        }
        if self.exact {
            rows::<BigRational>(&self).map(AnyPointSet::Exact)
        } else {
            rows::<f64>(&self).map(AnyPointSet::Float)
        }
    }
}
