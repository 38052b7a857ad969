//! Rational-difference pair statistics.
//!
//! For a set of distinct exact points, `h_b` counts pairs `i < j` whose
//! difference has least common denominator `b`, i.e. `b` is the smallest
//! positive integer with `b (z_i - z_j) ∈ Z^m`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::stats::loglog_slope;
use crate::torus::{PointSet, TorusPoint};

/// `lcm` of the reduced denominators of `x - y`.
pub fn min_denominator(x: &TorusPoint<BigRational>, y: &TorusPoint<BigRational>) -> Result<BigInt> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .fold(BigInt::one(), |acc, (a, b)| acc.lcm((a - b).denom())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCountProfile {
    pub k: usize,
    pub m: usize,
    /// Pairs whose difference is integral; zero for a set of distinct points.
    pub h1: u64,
    #[serde(serialize_with = "ser_map")]
    pub h: BTreeMap<BigInt, u64>,
}

fn ser_map<S: serde::Serializer>(h: &BTreeMap<BigInt, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(h.len()))?;
    for (b, c) in h {
        map.serialize_entry(&b.to_string(), c)?;
    }
    map.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    #[serde(serialize_with = "ser_bigint")]
    pub b: BigInt,
    pub h_b: u64,
    pub cum_h_b: u64,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PairCountProfile {
    pub fn total_pairs(&self) -> u64 {
        self.h1 + self.h.values().sum::<u64>()
    }

    /// `(b, h_b, H_b)` over the support, ascending in `b`.
    pub fn rows(&self) -> Vec<ProfileRow> {
        let mut cum = self.h1;
        self.h
            .iter()
            .map(|(b, &c)| {
                cum += c;
                ProfileRow {
                    b: b.clone(),
                    h_b: c,
                    cum_h_b: cum,
                }
            })
            .collect()
    }

    /// `H_b = Σ_{s ≤ b} h_s`.
    pub fn cumulative_at(&self, b: &BigInt) -> u64 {
        self.h1 + self.h.range(..=b.clone()).map(|(_, c)| c).sum::<u64>()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("b,h_b,H_b\n");
        for r in self.rows() {
            out.push_str(&format!("{},{},{}\n", r.b, r.h_b, r.cum_h_b));
        }
        out
    }
}

/// Exact histogram of minimal denominators over all `k(k-1)/2` pairs.
pub fn profile(set: &PointSet<BigRational>) -> Result<PairCountProfile> {
    let pts = set.points();
    let k = pts.len();
    let (h1, h) = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut local = BTreeMap::new();
            let mut ones = 0u64;
            for j in (i + 1)..k {
                let b = min_denominator(&pts[i], &pts[j]).expect("set has a common dimension");
                if b.is_one() {
                    ones += 1;
                } else {
                    *local.entry(b).or_insert(0u64) += 1;
                }
            }
            (ones, local)
        })
        .reduce(
            || (0, BTreeMap::new()),
            |(o1, mut a), (o2, b)| {
                for (key, c) in b {
                    *a.entry(key).or_insert(0) += c;
                }
                (o1 + o2, a)
            },
        );
    Ok(PairCountProfile { k, m: set.dim(), h1, h })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HbViolation {
    #[serde(serialize_with = "ser_bigint")]
    pub b: BigInt,
    pub cum_h_b: u64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HbReport {
    pub holds: bool,
    pub checked: usize,
    pub violations: Vec<HbViolation>,
    /// For `m = 1`: the least `α ≥ 0` with `H_b ≤ (kb)^{1+α}` on the support.
    pub alpha_m1: Option<f64>,
}

/// Checks `H_b ≤ k·b^{m+1}` at every `b` in the support. Between support points
/// `H_b` is constant while the bound grows, so this covers all `b`.
pub fn verify_hb_bound(p: &PairCountProfile) -> HbReport {
    let k = p.k as f64;
    let mut violations = Vec::new();
    let mut alpha: f64 = 0.0;
    let rows = p.rows();
    for r in &rows {
        let b = r.b.to_f64().unwrap_or(f64::INFINITY);
        // compare in log space to stay finite for huge b
        let log_bound = k.ln() + (p.m as f64 + 1.0) * b.ln();
        let h = r.cum_h_b as f64;
        if h.ln() > log_bound + 1e-12 {
            violations.push(HbViolation {
                b: r.b.clone(),
                cum_h_b: r.cum_h_b,
                bound: log_bound.exp(),
            });
        }
        if p.m == 1 && h > 0.0 {
            let a = h.ln() / (k * b).ln() - 1.0;
            alpha = alpha.max(a);
        }
    }
    HbReport {
        holds: violations.is_empty(),
        checked: rows.len(),
        violations,
        alpha_m1: (p.m == 1).then_some(alpha),
    }
}

/// `Σ_{b ≥ 2} h_b ((c T b^{-r} + 1)^n - 1)` over the (finite) support.
pub fn lemma4_sum(p: &PairCountProfile, c: f64, t: f64, r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid("r", format!("must lie in (0, 1), got {r}")));
    }
    if !(c > 0.0) || !(t > 0.0) {
        return Err(invalid("c, T", "must be positive"));
    }
    Ok(p.h
        .iter()
        .map(|(b, &h)| {
            let b = b.to_f64().unwrap_or(f64::INFINITY);
            let x = c * t * b.powf(-r);
            // (1 + x)^n - 1 without cancellation for small x
            h as f64 * (n as f64 * x.ln_1p()).exp_m1()
        })
        .sum())
}

/// The growth law `k^{2 - r/(m+1)}` the sum is compared against.
pub fn lemma4_reference(k: usize, m: usize, t: f64, r: f64, n: u32) -> f64 {
    t.powi(n as i32) * (k as f64).powf(2.0 - r / (m as f64 + 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma4Row {
    pub k: usize,
    pub sum: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Sums over a batch of profiles and the log–log slope of sum against `k`.
pub fn lemma4_growth(
    profiles: &[PairCountProfile],
    c: f64,
    t: f64,
    r: f64,
    n: u32,
) -> Result<(Vec<Lemma4Row>, Option<f64>)> {
    let rows = profiles
        .iter()
        .map(|p| {
            let sum = lemma4_sum(p, c, t, r, n)?;
            let bound = lemma4_reference(p.k, p.m, t, r, n);
            Ok(Lemma4Row {
                k: p.k,
                sum,
                bound,
                ratio: sum / bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.sum).collect();
    Ok((rows, loglog_slope(&xs, &ys)))
}

/// Number of reduced fractions in `[0, 1)` with denominator at most `d`.
pub fn farey_count(d: u64) -> u64 {
    (1..=d).map(crate::primes::euler_phi).sum()
}

/// Smallest denominator bound whose pool of points in `T^m` holds at least
/// `2k` candidates, so a uniform draw of `k` of them is a half-density sample.
pub fn scan_denominator(k: usize, m: usize) -> u64 {
    let mut d = 1u64;
    while (farey_count(d) as f64).powi(m as i32) < 2.0 * k as f64 {
        d += 1;
    }
    d
}
