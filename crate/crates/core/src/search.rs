//! Densification search over prime assignments, adversarial point sets and
//! empirical `k(ε)` exponent scans.
//!
//! A search instantiates matrices from a family at primes taken from the first
//! `prime_budget` primes, maps the point set and asks whether the image is
//! `ε`-dense. A `found = false` report only means nothing was found within the
//! budget.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bump::truncation_threshold;
use crate::error::{invalid, Error, Result};
use crate::pair_counts::farey_count;
use crate::polynomials::{instantiate, MatrixFamily, PrimeAssignment, PrimeMode};
use crate::primes::first_n_primes;
use crate::scalar::TorusScalar;
use crate::stats::linear_fit;
use crate::torus::{
    apply_integer_matrix, apply_to_set, covering_radius_exact_1d, dedup_points, is_eps_dense, DensityReport, IntMatrix,
    Metric, PointSet, TorusPoint, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    RandomSample,
    GreedyRowwise,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(Self::Exhaustive),
            "random-sample" | "random" => Ok(Self::RandomSample),
            "greedy-rowwise" | "greedy" => Ok(Self::GreedyRowwise),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exhaustive => "exhaustive",
            Self::RandomSample => "random-sample",
            Self::GreedyRowwise => "greedy-rowwise",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub eps: f64,
    pub metric: Metric,
    pub resolution: f64,
    /// Primes come from the first `prime_budget` primes; it also caps the
    /// number of assignments tested.
    pub prime_budget: usize,
    pub strategy: Strategy,
    pub rng_seed: u64,
    /// Edge `T` of the frequency box; absent when `eps > 1/e`.
    pub t_freq: Option<u64>,
}

impl SearchConfig {
    pub fn new(
        eps: f64,
        metric: Metric,
        resolution: f64,
        prime_budget: usize,
        strategy: Strategy,
        rng_seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            eps,
            metric,
            resolution,
            prime_budget,
            strategy,
            rng_seed,
            t_freq: truncation_threshold(eps).ok(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(invalid("eps", format!("must lie in (0, 1/2), got {}", self.eps)));
        }
        if !(self.resolution > 0.0) || !self.resolution.is_finite() {
            return Err(invalid(
                "resolution",
                format!("must be positive, got {}", self.resolution),
            ));
        }
        if self.prime_budget == 0 {
            return Err(invalid("budget", "must be at least 1"));
        }
        Ok(())
    }

    /// Same settings at another `eps`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(
            eps,
            self.metric,
            self.resolution,
            self.prime_budget,
            self.strategy,
            self.rng_seed,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct SearchReport<S: TorusScalar> {
    pub found: bool,
    pub witness_primes: Option<PrimeAssignment>,
    pub matrix: Option<IntMatrix>,
    /// The re-verification report when found; otherwise the report of the
    /// candidate with the smallest covering radius.
    pub density: DensityReport<S>,
    pub primes_tested: u64,
    /// Candidates whose verdict was `Unknown`; counted as failures.
    pub unknown_count: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl<S: TorusScalar> SearchReport<S> {
    /// JSON without the timing field, identical across runs with equal inputs.
    pub fn to_deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_time");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

struct Candidate<S: TorusScalar> {
    primes: PrimeAssignment,
    matrix: IntMatrix,
    report: DensityReport<S>,
    reverified: Option<DensityReport<S>>,
}

impl<S: TorusScalar> Candidate<S> {
    fn success(&self) -> bool {
        self.reverified.as_ref().is_some_and(|r| r.verdict == Verdict::Dense)
    }

    fn unknown(&self) -> bool {
        self.report.verdict == Verdict::Unknown || (self.report.verdict == Verdict::Dense && !self.success())
    }
}

fn image<S: TorusScalar>(m: &IntMatrix, set: &PointSet<S>) -> Result<PointSet<S>> {
    dedup_points(m.rows(), apply_to_set(m, set)?)
}

fn evaluate<S: TorusScalar>(
    fam: &MatrixFamily,
    set: &PointSet<S>,
    cfg: &SearchConfig,
    primes: PrimeAssignment,
) -> Result<Candidate<S>> {
    let matrix = instantiate(fam, &primes)?;
    let img = image(&matrix, set)?;
    let report = is_eps_dense(&img, cfg.eps, cfg.resolution, cfg.metric)?;
    // a fresh check at half the resolution guards every positive answer
    let reverified = if report.verdict == Verdict::Dense {
        Some(is_eps_dense(&img, cfg.eps, cfg.resolution / 2.0, cfg.metric)?)
    } else {
        None
    };
    Ok(Candidate {
        primes,
        matrix,
        report,
        reverified,
    })
}

/// Index tuples in `[0, limit)^arity` by shells of increasing maximum,
/// lexicographic within a shell.
struct ShellOrder {
    arity: usize,
    limit: usize,
    shell: usize,
    cur: Vec<usize>,
    done: bool,
}

impl ShellOrder {
    fn new(arity: usize, limit: usize) -> Self {
        Self {
            arity,
            limit,
            shell: 0,
            cur: vec![0; arity],
            done: limit == 0 || arity == 0,
        }
    }

    fn advance(&mut self) {
        loop {
            // odometer over [0, shell]^arity, last index fastest
            let mut i = self.arity;
            loop {
                if i == 0 {
                    self.shell += 1;
                    if self.shell >= self.limit {
                        self.done = true;
                        return;
                    }
                    self.cur.iter_mut().for_each(|c| *c = 0);
                    break;
                }
                i -= 1;
                if self.cur[i] < self.shell {
                    self.cur[i] += 1;
                    break;
                }
                self.cur[i] = 0;
            }
            if self.cur.contains(&self.shell) {
                return;
            }
        }
    }
}

impl Iterator for ShellOrder {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        self.advance();
        Some(out)
    }
}

fn candidate_stream<'a>(
    fam: &MatrixFamily,
    cfg: &SearchConfig,
    primes: &'a [u64],
) -> Box<dyn Iterator<Item = PrimeAssignment> + 'a> {
    let budget = cfg.prime_budget;
    let arity = fam.n() * fam.m();
    match (fam.mode(), cfg.strategy) {
        (PrimeMode::SinglePrime, Strategy::Exhaustive) => Box::new(primes.iter().map(|&p| PrimeAssignment::Single(p))),
        (PrimeMode::IndependentPrimes, Strategy::Exhaustive) => Box::new(
            ShellOrder::new(arity, primes.len())
                .take(budget)
                .map(move |ix| PrimeAssignment::Grid(ix.iter().map(|&i| primes[i]).collect())),
        ),
        (mode, Strategy::RandomSample) => {
            let seed = cfg.rng_seed;
            Box::new((0..budget as u64).map(move |i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                match mode {
                    PrimeMode::SinglePrime => PrimeAssignment::Single(primes[rng.gen_range(0..primes.len())]),
                    PrimeMode::IndependentPrimes => {
                        PrimeAssignment::Grid((0..arity).map(|_| primes[rng.gen_range(0..primes.len())]).collect())
                    }
                }
            }))
        }
        (_, Strategy::GreedyRowwise) => unreachable!("greedy search builds its own candidates"),
    }
}

fn batch_len() -> usize {
    4 * rayon::current_num_threads().max(1)
}

struct Scan<S: TorusScalar> {
    winner: Option<Candidate<S>>,
    best: Option<Candidate<S>>,
    tested: u64,
    unknown: u64,
}

/// Evaluates candidates in parallel batches. The earliest success in stream
/// order wins regardless of completion order.
fn run_stream<S: TorusScalar>(
    fam: &MatrixFamily,
    set: &PointSet<S>,
    cfg: &SearchConfig,
    stream: impl Iterator<Item = PrimeAssignment>,
) -> Result<Scan<S>> {
    let mut stream = stream.peekable();
    let mut out = Scan {
        winner: None,
        best: None,
        tested: 0,
        unknown: 0,
    };
    let chunk = batch_len();
    while stream.peek().is_some() {
        let batch: Vec<PrimeAssignment> = stream.by_ref().take(chunk).collect();
        let results = batch
            .into_par_iter()
            .map(|a| evaluate(fam, set, cfg, a))
            .collect::<Result<Vec<_>>>()?;
        for c in results {
            out.tested += 1;
            if c.unknown() {
                out.unknown += 1;
            }
            if c.success() {
                out.winner = Some(c);
                return Ok(out);
            }
            let better = out
                .best
                .as_ref()
                .is_none_or(|b| c.report.covering_radius_lo < b.report.covering_radius_lo);
            if better {
                out.best = Some(c);
            }
        }
    }
    Ok(out)
}

/// Projection of the set onto row `i` for the given row primes: exact 1-D radius.
fn row_radius<S: TorusScalar>(fam: &MatrixFamily, set: &PointSet<S>, row: usize, primes: &[u64]) -> Result<S> {
    let data = (0..fam.m())
        .map(|j| fam.entry(row, j).eval_at_integer(&BigInt::from(primes[j])))
        .collect();
    let m = IntMatrix::new(1, fam.m(), data)?;
    let img = image(&m, set)?;
    Ok(covering_radius_exact_1d(&img)?.0)
}

fn greedy<S: TorusScalar>(
    fam: &MatrixFamily,
    set: &PointSet<S>,
    cfg: &SearchConfig,
    primes: &[u64],
) -> Result<(Scan<S>, u64)> {
    if fam.mode() != PrimeMode::IndependentPrimes {
        return Err(invalid("strategy", "greedy-rowwise needs independent primes"));
    }
    let m = fam.m();
    let mut grid = Vec::with_capacity(fam.n() * m);
    let mut row_tests = 0u64;
    for row in 0..fam.n() {
        let cands: Vec<Vec<u64>> = ShellOrder::new(m, primes.len())
            .take(cfg.prime_budget)
            .map(|ix| ix.iter().map(|&i| primes[i]).collect())
            .collect();
        let mut chosen: Option<(f64, usize)> = None;
        for (start, chunk) in cands.chunks(batch_len()).enumerate().map(|(b, c)| (b * batch_len(), c)) {
            let radii = chunk
                .par_iter()
                .map(|ps| row_radius(fam, set, row, ps).map(|r| r.to_f64_lossy()))
                .collect::<Result<Vec<_>>>()?;
            let mut hit = false;
            for (off, r) in radii.into_iter().enumerate() {
                row_tests += 1;
                let better = chosen.as_ref().is_none_or(|(b, _)| r < *b);
                let good = r <= cfg.eps;
                if better {
                    chosen = Some((r, start + off));
                }
                if good {
                    hit = true;
                    break;
                }
            }
            if hit {
                break;
            }
        }
        let (_, idx) = chosen.expect("budget is at least one");
        grid.extend_from_slice(&cands[idx]);
    }
    let scan = run_stream(fam, set, cfg, std::iter::once(PrimeAssignment::Grid(grid)))?;
    Ok((scan, row_tests))
}

/// Looks for a family member whose image of `set` is `eps`-dense.
pub fn search<S: TorusScalar>(fam: &MatrixFamily, set: &PointSet<S>, cfg: &SearchConfig) -> Result<SearchReport<S>> {
    let start = Instant::now();
    cfg.validate()?;
    if set.dim() != fam.m() {
        return Err(Error::DimensionMismatch {
            expected: fam.m(),
            got: set.dim(),
        });
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let table = first_n_primes(cfg.prime_budget)?;
    let primes = table.as_slice();
    let (scan, extra) = match cfg.strategy {
        Strategy::GreedyRowwise => greedy(fam, set, cfg, primes)?,
        _ => (run_stream(fam, set, cfg, candidate_stream(fam, cfg, primes))?, 0),
    };
    let tested = scan.tested + extra;
    let report = match scan.winner {
        Some(c) => SearchReport {
            found: true,
            witness_primes: Some(c.primes),
            matrix: Some(c.matrix),
            density: c.reverified.expect("winner was re-verified"),
            primes_tested: tested,
            unknown_count: scan.unknown,
            wall_time: 0.0,
        },
        None => {
            let best = scan.best.expect("at least one candidate is tested");
            SearchReport {
                found: false,
                witness_primes: None,
                matrix: None,
                density: best.report,
                primes_tested: tested,
                unknown_count: scan.unknown,
                wall_time: 0.0,
            }
        }
    };
    Ok(SearchReport {
        wall_time: start.elapsed().as_secs_f64(),
        ..report
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    BallCluster,
    HalfGrid,
    ArithmeticProgression,
    RandomBoundedDenominator,
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ball-cluster" | "ball" => Ok(Self::BallCluster),
            "half-grid" | "halfgrid" => Ok(Self::HalfGrid),
            "arithmetic-progression" | "ap" => Ok(Self::ArithmeticProgression),
            "random-bounded-denominator" | "random" => Ok(Self::RandomBoundedDenominator),
            other => Err(Error::Parse(format!("unknown generator {other:?}"))),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BallCluster => "ball-cluster",
            Self::HalfGrid => "half-grid",
            Self::ArithmeticProgression => "arithmetic-progression",
            Self::RandomBoundedDenominator => "random-bounded-denominator",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    /// Sup radius of the cluster ball, in `(0, 1/2)`.
    pub rho: f64,
    /// Progression step numerators, one per coordinate; empty means all ones.
    pub a: Vec<i64>,
    /// Progression denominator; zero means `k`.
    pub q: u64,
    /// Denominator bound for random rationals.
    pub d: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            rho: 0.01,
            a: Vec::new(),
            q: 0,
            d: 10_000,
        }
    }
}

fn inconsistent(kind: GeneratorKind, detail: impl Into<String>) -> Error {
    invalid("k", format!("{kind}: {}", detail.into()))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::from_ratio(n, d).frac()
}

/// Draws `k` distinct points of `T^m` of the given kind.
pub fn generate_adversarial(
    kind: GeneratorKind,
    k: usize,
    m: usize,
    params: &GeneratorParams,
    seed: u64,
) -> Result<PointSet<BigRational>> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if k == 0 {
        return Err(inconsistent(kind, "needs at least one point"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<BigRational>> = match kind {
        GeneratorKind::HalfGrid => {
            if m >= usize::BITS as usize || k != 1usize << m {
                return Err(inconsistent(kind, format!("forces k = 2^{m}, got {k}")));
            }
            (0..k)
                .map(|i| (0..m).map(|j| frac(((i >> (m - 1 - j)) & 1) as i64, 2)).collect())
                .collect()
        }
        GeneratorKind::ArithmeticProgression => {
            let q = if params.q == 0 { k as u64 } else { params.q };
            let a = if params.a.is_empty() {
                vec![1; m]
            } else {
                params.a.clone()
            };
            if a.len() != m {
                return Err(invalid("a", format!("expected {m} numerators, got {}", a.len())));
            }
            let q = i64::try_from(q).map_err(|_| invalid("q", "too large"))?;
            (0..k as i64)
                .map(|j| a.iter().map(|&ai| frac((j * ai).rem_euclid(q), q)).collect())
                .collect()
        }
        GeneratorKind::BallCluster => {
            let rho = params.rho;
            if !(rho > 0.0 && rho < 0.5) {
                return Err(invalid("rho", format!("must lie in (0, 1/2), got {rho}")));
            }
            // offsets j/q with |j| <= half on a grid holding at least 2k points
            let side = ((2 * k) as f64).powf(1.0 / m as f64).ceil() as i64;
            let half = (side / 2).max(1);
            let q = (half as f64 / rho).ceil() as i64;
            let width = 2 * half + 1;
            if (width as f64).powi(m as i32) < k as f64 {
                return Err(inconsistent(kind, "ball grid too small"));
            }
            let centre: Vec<i64> = (0..m).map(|_| rng.gen_range(0..q)).collect();
            let mut seen = HashSet::with_capacity(k);
            let mut rows = Vec::with_capacity(k);
            while rows.len() < k {
                let off: Vec<i64> = (0..m).map(|_| rng.gen_range(-half..=half)).collect();
                if seen.insert(off.clone()) {
                    rows.push(centre.iter().zip(&off).map(|(&c, &o)| frac(c + o, q)).collect());
                }
            }
            rows
        }
        GeneratorKind::RandomBoundedDenominator => {
            let d = params.d;
            if d == 0 || d > i64::MAX as u64 {
                return Err(invalid("D", "must be a positive 63-bit integer"));
            }
            let pool = (farey_count(d) as f64).powi(m as i32);
            if (k as f64) > pool {
                return Err(inconsistent(
                    kind,
                    format!("only {pool} points have denominators at most {d}"),
                ));
            }
            let mut seen = HashSet::with_capacity(k);
            let mut rows = Vec::with_capacity(k);
            while rows.len() < k {
                let coords: Vec<(u64, u64)> = (0..m).map(|_| uniform_reduced(&mut rng, d)).collect();
                if seen.insert(coords.clone()) {
                    rows.push(coords.iter().map(|&(a, q)| frac(a as i64, q as i64)).collect());
                }
            }
            rows
        }
    };
    PointSet::from_rows(m, rows)
}

/// Uniform over reduced fractions `a/q ∈ [0, 1)` with `q <= d`: uniform pairs
/// `a < q` by rejection, then rejection on `gcd(a, q) > 1`.
fn uniform_reduced(rng: &mut ChaCha8Rng, d: u64) -> (u64, u64) {
    loop {
        let q = rng.gen_range(1..=d);
        let a = rng.gen_range(0..d);
        if a < q && a.gcd(&q) == 1 {
            return (a, q);
        }
    }
}

/// `⌊1/ε⌋^n`, saturating.
pub fn packing_lower_bound(n: u32, eps: f64) -> u64 {
    ((1.0 / eps).floor() as u64).saturating_pow(n)
}

/// `⌊1/ε⌋^n` points squeezed into a corner cube so that some point of the
/// torus is farther than `ε` from all of them (sup metric, hence also
/// euclidean).
pub fn packing_set(n: usize, eps: f64) -> Result<PointSet<BigRational>> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(invalid("eps", format!("must lie in (0, 1/2), got {eps}")));
    }
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let k = (1.0 / eps).floor() as i64;
    // spacing 1/(kq) keeps the k points of each axis inside [0, (k-1)/(kq)],
    // leaving a gap wider than 2ε
    let q = (1.0 / (1.0 - 2.0 * eps)).ceil() as i64 + 1;
    let total = (k as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| invalid("n", "packing set too large"))?;
    let rows = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = (idx % k as u64) as i64;
                    idx /= k as u64;
                    frac(c, k * q)
                })
                .collect()
        })
        .collect();
    PointSet::from_rows(n, rows)
}

/// The proven upper exponent of `1/ε` for the family's mode, with the
/// tighter form for `m = 1`.
pub fn reference_exponent(fam: &MatrixFamily) -> f64 {
    let l = fam.max_degree() as f64;
    let n = fam.n() as f64;
    let m = fam.m() as f64;
    let dim_factor = if fam.m() == 1 { 1.0 } else { m + 1.0 };
    match fam.mode() {
        PrimeMode::IndependentPrimes => 2.0 * l * dim_factor * n,
        PrimeMode::SinglePrime => (2.0 * l + 1.0) * dim_factor * n,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub search: SearchConfig,
    pub generator: GeneratorKind,
    pub params: GeneratorParams,
    /// Draws per `k`; success needs a strict majority.
    pub reps: usize,
    /// Doubling stops above this size.
    pub k_max: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub eps: f64,
    /// Least `k` with a majority of successful draws; `None` means never.
    pub k_min: Option<usize>,
    /// Largest tested `k` without a majority.
    pub k_fail: Option<usize>,
    pub budget: usize,
    pub primes_tested: u64,
    /// Doubling ran past `k_max` or the generator could not produce `k` points.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentScanResult {
    pub rows: Vec<ScanRow>,
    /// Slope of `log k_min` against `log(1/ε)`; NaN with fewer than two rows.
    pub fitted_exponent: f64,
    pub reference_exponent: f64,
    pub warnings: Vec<String>,
}

impl ExponentScanResult {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<usize>, none: &str| v.map_or(none.to_string(), |k| k.to_string());
        let mut out = String::from("eps,k_min,k_fail,budget,primes_tested,fitted_exponent\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},\n",
                r.eps,
                opt(r.k_min, "inf"),
                opt(r.k_fail, ""),
                r.budget,
                r.primes_tested
            ));
        }
        out.push_str(&format!(",,,,,{}\n", self.fitted_exponent));
        out
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_seed(seed: u64, row: usize, k: usize, draw: usize) -> u64 {
    splitmix(splitmix(splitmix(seed ^ row as u64) ^ k as u64) ^ draw as u64)
}

/// Majority verdict over `reps` draws at size `k`, ties counted as failure.
/// `None` when the generator cannot produce `k` points.
fn succeeds_at(
    fam: &MatrixFamily,
    cfg: &ScanConfig,
    search_cfg: &SearchConfig,
    row: usize,
    k: usize,
    tested: &mut u64,
) -> Result<Option<bool>> {
    let mut wins = 0;
    for draw in 0..cfg.reps {
        let s = draw_seed(cfg.seed, row, k, draw);
        let set = match generate_adversarial(cfg.generator, k, fam.m(), &cfg.params, s) {
            Ok(set) => set,
            Err(Error::InvalidParameter { name: "k", .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let draw_cfg = SearchConfig {
            rng_seed: s,
            ..search_cfg.clone()
        };
        let rep = search(fam, &set, &draw_cfg)?;
        *tested += rep.primes_tested;
        if rep.found {
            wins += 1;
        }
    }
    Ok(Some(2 * wins > cfg.reps))
}

fn scan_row(fam: &MatrixFamily, cfg: &ScanConfig, row: usize, eps: f64) -> Result<ScanRow> {
    let search_cfg = cfg.search.with_eps(eps)?;
    let mut tested = 0u64;
    let mut out = ScanRow {
        eps,
        k_min: None,
        k_fail: None,
        budget: cfg.search.prime_budget,
        primes_tested: 0,
        exhausted: false,
    };
    if cfg.generator == GeneratorKind::HalfGrid {
        let k = 1usize << fam.m();
        match succeeds_at(fam, cfg, &search_cfg, row, k, &mut tested)? {
            Some(true) => out.k_min = Some(k),
            Some(false) => out.k_fail = Some(k),
            None => out.exhausted = true,
        }
        out.primes_tested = tested;
        return Ok(out);
    }
    // k sup-balls of radius ε cover volume at most k (2ε)^n
    let mut k = ((2.0 * eps).powi(-(fam.n() as i32))).ceil().max(1.0) as usize;
    let mut lo: Option<usize> = None;
    let hi = loop {
        if k > cfg.k_max {
            out.exhausted = true;
            break None;
        }
        match succeeds_at(fam, cfg, &search_cfg, row, k, &mut tested)? {
            Some(true) => break Some(k),
            Some(false) => lo = Some(k),
            None => {
                out.exhausted = true;
                break None;
            }
        }
        k = k.saturating_mul(2);
    };
    if let Some(mut hi) = hi {
        let mut lo_k = lo.unwrap_or(0);
        while hi - lo_k > 1 {
            let mid = lo_k + (hi - lo_k) / 2;
            if succeeds_at(fam, cfg, &search_cfg, row, mid, &mut tested)? == Some(true) {
                hi = mid;
            } else {
                lo_k = mid;
                lo = Some(mid);
            }
        }
        out.k_min = Some(hi);
    }
    out.k_fail = lo;
    out.primes_tested = tested;
    Ok(out)
}

/// For each `ε` of a strictly decreasing schedule, the least `k` at which
/// generated sets are densified within budget; success is assumed monotone in
/// `k`, which is heuristic.
pub fn exponent_scan(fam: &MatrixFamily, schedule: &[f64], cfg: &ScanConfig) -> Result<ExponentScanResult> {
    if schedule.is_empty() {
        return Err(invalid("schedule", "is empty"));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("schedule", "must be strictly decreasing"));
    }
    if cfg.reps == 0 {
        return Err(invalid("reps", "must be at least 1"));
    }
    let rows = schedule
        .iter()
        .enumerate()
        .map(|(i, &eps)| scan_row(fam, cfg, i, eps))
        .collect::<Result<Vec<_>>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.k_min.map(|k| ((1.0 / r.eps).ln(), (k as f64).ln())))
        .unzip();
    let mut warnings = Vec::new();
    let fitted_exponent = match linear_fit(&xs, &ys) {
        Some((slope, _)) => slope,
        None => {
            warnings.push(format!(
                "fitted exponent undetermined: {} row(s) with finite k_min",
                xs.len()
            ));
            f64::NAN
        }
    };
    for r in rows.iter().filter(|r| r.exhausted) {
        warnings.push(format!("eps {}: budget or size limit exhausted", r.eps));
    }
    Ok(ExponentScanResult {
        rows,
        fitted_exponent,
        reference_exponent: reference_exponent(fam),
        warnings,
    })
}

/// `true` when every point of `set` maps into `{0, 1/2}^n` under `m`.
pub fn maps_into_half_grid(m: &IntMatrix, set: &PointSet<BigRational>) -> Result<bool> {
    let half = BigRational::from_ratio(1, 2);
    for p in set.points() {
        let img: TorusPoint<BigRational> = apply_integer_matrix(m, p)?;
        if !img.coords().iter().all(|c| c.is_zero() || *c == half) {
            return Ok(false);
        }
    }
    Ok(true)
}
