//! Exponential sums over primes.
//!
//! Empirical averages `(1/N) Σ_{p ≤ p_N} e(w f(p) α)` are computed with the
//! phase reduced modulo 1 in exact arithmetic before any trigonometry. Their
//! limits for rational `α = a/b` are obtained from Dirichlet's theorem: primes
//! equidistribute over the unit residues of `M₀ = b·L!`, and `f(r + M₀) ≡ f(r)
//! (mod b)` for an integer-valued `f` of degree `L`, so the limit is a
//! normalized complete sum over those units.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::polynomials::{IntegerValuedPolynomial, RationalPolynomial};
use crate::primes::{first_n_primes, PrimeTable};
use crate::scalar::{decimal_digits, parse_rational};
use crate::stats::loglog_slope;

/// Partial sums are formed over fixed blocks so the result does not depend on
/// the number of worker threads.
const BLOCK: usize = 4096;

/// Decimal digits required before a coefficient is treated as an irrational
/// approximation.
pub const MIN_IRRATIONAL_DIGITS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSize {
    Count(u64),
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpSumResult {
    pub re: f64,
    pub im: f64,
    pub n_used: SampleSize,
    /// Period of the complete-sum reduction, 0 for empirical sums.
    pub modulus_used: u64,
}

impl ExpSumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(&self) -> f64 {
        self.value().norm()
    }
}

#[inline]
fn unit_phase(frac: f64) -> Complex64 {
    let t = TAU * frac;
    Complex64::new(t.cos(), t.sin())
}

/// Sum of `e(phase(x))` over `items` in fixed blocks.
fn blocked_phase_sum<T: Sync>(items: &[T], phase: impl Fn(&T) -> f64 + Sync) -> Complex64 {
    let partials: Vec<Complex64> = items
        .par_chunks(BLOCK)
        .map(|chunk| {
            chunk
                .iter()
                .fold(Complex64::zero(), |acc, x| acc + unit_phase(phase(x)))
        })
        .collect();
    partials.into_iter().fold(Complex64::zero(), |acc, z| acc + z)
}

/// `r / b` as a float in `[0, 1)`.
fn unit_fraction(r: &BigInt, b: &BigInt) -> f64 {
    let v = r.to_f64().unwrap_or(0.0) / b.to_f64().unwrap_or(1.0);
    if v >= 1.0 {
        0.0
    } else {
        v
    }
}

/// `(1/N) Σ_{p ∈ P_N} e(w · f(p) · α)` over the given primes.
pub fn empirical_prime_exp_sum_with(
    f: &IntegerValuedPolynomial,
    alpha: &BigRational,
    w: i64,
    primes: &[u64],
) -> Result<ExpSumResult> {
    if primes.is_empty() {
        return Err(invalid("N", "must be at least 1"));
    }
    let scale = alpha * BigRational::from_integer(w.into());
    let (num, den) = (scale.numer().clone(), scale.denom().clone());
    let sum = match (num.mod_floor(&den).to_u64(), den.to_u64()) {
        (Some(a), Some(b)) if b < (1 << 62) => blocked_phase_sum(primes, |&p| {
            let c = f.eval_mod(p, b);
            let r = (a as u128 * c as u128 % b as u128) as u64;
            r as f64 / b as f64
        }),
        _ => blocked_phase_sum(primes, |&p| {
            let r = (f.eval_at_integer(&BigInt::from(p)) * &num).mod_floor(&den);
            unit_fraction(&r, &den)
        }),
    };
    let n = primes.len() as f64;
    Ok(ExpSumResult {
        re: sum.re / n,
        im: sum.im / n,
        n_used: SampleSize::Count(primes.len() as u64),
        modulus_used: 0,
    })
}

pub fn empirical_prime_exp_sum(
    f: &IntegerValuedPolynomial,
    alpha: &BigRational,
    w: i64,
    n: usize,
) -> Result<ExpSumResult> {
    let table = first_n_primes(n)?;
    empirical_prime_exp_sum_with(f, alpha, w, table.as_slice())
}

/// Distribution of `f(r) mod b` over the units `r` of a period `P`, `b | P`.
#[derive(Clone, Debug)]
pub struct ResidueHistogram {
    b: u64,
    period: u64,
    counts: Vec<u64>,
    units: u64,
}

impl ResidueHistogram {
    pub fn new(f: &IntegerValuedPolynomial, b: u64, period: u64) -> Result<Self> {
        if b == 0 || period == 0 || !period.is_multiple_of(b) {
            return Err(invalid(
                "period",
                format!("{period} is not a positive multiple of b = {b}"),
            ));
        }
        let counts = (1..period + 1)
            .into_par_iter()
            .filter(|r| r.gcd(&period) == 1)
            .fold(
                || vec![0u64; b as usize],
                |mut h, r| {
                    h[f.eval_mod(r, b) as usize] += 1;
                    h
                },
            )
            .reduce(
                || vec![0u64; b as usize],
                |mut a, c| {
                    a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let units: u64 = counts.iter().sum();
        // counts for a multiple of the period are a constant multiple of these;
        // dividing out the gcd makes the evaluation independent of the period
        let g = counts.iter().fold(0u64, |g, &c| g.gcd(&c));
        let counts = if g > 1 {
            counts.into_iter().map(|c| c / g).collect()
        } else {
            counts
        };
        Ok(Self {
            b,
            period,
            counts,
            units: units / g.max(1),
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// `Σ_c count(c) e(mult·c/b) / Σ_c count(c)`.
    pub fn average(&self, mult: &BigInt, table: Option<&[Complex64]>) -> Complex64 {
        let b = self.b;
        let m = mult.mod_floor(&BigInt::from(b)).to_u64().expect("reduced");
        let mut acc = Complex64::zero();
        for (c, &cnt) in self.counts.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            let idx = (m as u128 * c as u128 % b as u128) as u64;
            let z = match table {
                Some(t) => t[idx as usize],
                None => unit_phase(idx as f64 / b as f64),
            };
            acc += z * cnt as f64;
        }
        acc / self.units as f64
    }
}

fn roots_of_unity(b: u64) -> Vec<Complex64> {
    (0..b).map(|j| unit_phase(j as f64 / b as f64)).collect()
}

fn check_coprime(a: &BigInt, b: u64) -> Result<()> {
    if b == 0 {
        return Err(invalid("b", "must be at least 1"));
    }
    let g = a.gcd(&BigInt::from(b));
    if !g.is_one() {
        return Err(Error::NotCoprime(g.to_string()));
    }
    Ok(())
}

/// The default period `b·L!`, or `b` when `f` has integer coefficients.
pub fn limit_period(f: &IntegerValuedPolynomial, b: u64) -> Result<u64> {
    if f.poly().has_integer_coefficients() {
        return Ok(b);
    }
    f.period_factor()
        .to_u64()
        .and_then(|fact| fact.checked_mul(b))
        .ok_or_else(|| invalid("b", "period b·L! overflows 64 bits"))
}

/// `lim_N (1/N) Σ_{p ∈ P_N} e(w f(p) a/b)` evaluated with an explicit period,
/// which must be a multiple of `b·L!` (or of `b` for `f ∈ Z[x]`).
pub fn limit_prime_exp_sum_with_period(
    f: &IntegerValuedPolynomial,
    a: &BigInt,
    b: u64,
    w: i64,
    period: u64,
) -> Result<ExpSumResult> {
    check_coprime(a, b)?;
    let base = limit_period(f, b)?;
    if !period.is_multiple_of(base) {
        return Err(invalid("period", format!("{period} is not a multiple of {base}")));
    }
    let hist = ResidueHistogram::new(f, b, period)?;
    let z = hist.average(&(a * BigInt::from(w)), None);
    Ok(ExpSumResult {
        re: z.re,
        im: z.im,
        n_used: SampleSize::Limit,
        modulus_used: period,
    })
}

pub fn limit_prime_exp_sum_rational(f: &IntegerValuedPolynomial, a: &BigInt, b: u64, w: i64) -> Result<ExpSumResult> {
    let period = limit_period(f, b)?;
    limit_prime_exp_sum_with_period(f, a, b, w, period)
}

/// Per-`w` magnitudes `|lim ... e(w f(p) a/b)|` for `w = 1..=t`.
pub fn lemma3_terms(f: &IntegerValuedPolynomial, a: &BigInt, b: u64, t: u64) -> Result<Vec<f64>> {
    if t == 0 {
        return Err(invalid("T", "must be at least 1"));
    }
    if a.is_zero() {
        return Err(invalid("a", "a/b must be nonzero"));
    }
    check_coprime(a, b)?;
    let hist = ResidueHistogram::new(f, b, limit_period(f, b)?)?;
    let table = roots_of_unity(b);
    Ok((1..=t)
        .map(|w| hist.average(&(a * BigInt::from(w)), Some(&table)).norm())
        .collect())
}

/// `Σ_{w=1}^T |lim_N (1/N) Σ_{p ∈ P_N} e(w f(p) a/b)|`.
pub fn lemma3_sum(f: &IntegerValuedPolynomial, a: &BigInt, b: u64, t: u64) -> Result<f64> {
    Ok(lemma3_terms(f, a, b, t)?.iter().sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma3Row {
    pub b: u64,
    pub t: u64,
    /// The `w` with the largest single term.
    pub w_max: u64,
    pub sum_magnitude: f64,
}

/// `lemma3_sum` over several moduli with the log–log slope of `sum/T` against `b`.
pub fn lemma3_scan(
    f: &IntegerValuedPolynomial,
    a: &BigInt,
    moduli: &[u64],
    t: u64,
) -> Result<(Vec<Lemma3Row>, Option<f64>)> {
    let rows = moduli
        .par_iter()
        .map(|&b| {
            let terms = lemma3_terms(f, a, b, t)?;
            let (w_max, _) =
                terms.iter().enumerate().fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, &v)| if v > best.1 { (i, v) } else { best },
                );
            Ok(Lemma3Row {
                b,
                t,
                w_max: w_max as u64 + 1,
                sum_magnitude: terms.iter().sum(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.b as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.sum_magnitude / r.t as f64).collect();
    Ok((rows, loglog_slope(&xs, &ys)))
}

/// Unnormalized complete sum `Σ_{1≤r≤b, gcd(r,b)=1} e(P(r)/b)` for `P ∈ Z[x]`
/// with `gcd(a_0, …, a_L, b) = 1`.
pub fn lemma6_complete_sum(p: &RationalPolynomial, b: u64) -> Result<ExpSumResult> {
    if b == 0 {
        return Err(invalid("b", "must be at least 1"));
    }
    if !p.has_integer_coefficients() {
        return Err(invalid("P", "complete sums need integer coefficients"));
    }
    let g = p.coeffs().iter().fold(BigInt::from(b), |g, c| g.gcd(&c.to_integer()));
    if !g.is_one() {
        return Err(Error::NotCoprime(g.to_string()));
    }
    let coeffs: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_integer().mod_floor(&BigInt::from(b)).to_u64().expect("reduced"))
        .collect();
    let eval = |r: u64| -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * r as u128 + c as u128) % b as u128) as u64
    };
    let counts = (1..b + 1)
        .into_par_iter()
        .filter(|r| r.gcd(&b) == 1)
        .fold(
            || vec![0u64; b as usize],
            |mut h, r| {
                h[eval(r) as usize] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; b as usize],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(u, v)| *u += v);
                x
            },
        );
    let z = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(Complex64::zero(), |acc, (idx, &c)| {
            acc + unit_phase(idx as f64 / b as f64) * c as f64
        });
    Ok(ExpSumResult {
        re: z.re,
        im: z.im,
        n_used: SampleSize::Limit,
        modulus_used: b,
    })
}

/// A polynomial whose coefficients may be long decimal approximations of
/// irrational numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbePolynomial {
    coeffs: Vec<BigRational>,
    irrational: Vec<bool>,
}

impl ProbePolynomial {
    /// Coefficients ascending. A decimal literal with at least
    /// [`MIN_IRRATIONAL_DIGITS`] significant digits marks an irrational
    /// coefficient; `"a/b"` and short literals are rational.
    pub fn parse(coeffs: &[&str]) -> Result<Self> {
        let mut values = Vec::with_capacity(coeffs.len());
        let mut irrational = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            values.push(parse_rational(c)?);
            irrational.push(!c.contains('/') && c.contains('.') && decimal_digits(c) >= MIN_IRRATIONAL_DIGITS);
        }
        Ok(Self {
            coeffs: values,
            irrational,
        })
    }

    pub fn has_irrational_nonconstant(&self) -> bool {
        self.irrational.iter().skip(1).any(|&b| b)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }
}

/// `|(1/N) Σ_{p ∈ P_N} e(f(p))|` for each `N` in the schedule. Report only:
/// the limit is zero but no finite `N` certifies it.
pub fn lemma2_convergence_probe(f: &ProbePolynomial, schedule: &[usize]) -> Result<Vec<f64>> {
    if f.is_constant() {
        return Err(invalid("f", "must be non-constant"));
    }
    if !f.has_irrational_nonconstant() {
        return Err(invalid(
            "f",
            format!("needs a non-constant coefficient given to at least {MIN_IRRATIONAL_DIGITS} decimal digits"),
        ));
    }
    let max_n = schedule
        .iter()
        .copied()
        .max()
        .ok_or_else(|| invalid("schedule", "empty"))?;
    let table: PrimeTable = first_n_primes(max_n)?;
    let den = f.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let phase = |&p: &u64| {
        let pb = BigInt::from(p);
        let v = nums
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * &pb + c).mod_floor(&den));
        unit_fraction(&v, &den)
    };
    schedule
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(invalid("schedule", "N must be at least 1"));
            }
            Ok((blocked_phase_sum(table.prefix(n), phase) / n as f64).norm())
        })
        .collect()
}

/// `√2` to 60 decimal places.
pub const SQRT2_60: &str = "1.414213562373095048801688724209698078569671875376948073176679";

/// `(b, |sum|)` rows with the fitted log-log slope.
pub type SlopeFit = (Vec<(u64, f64)>, Option<f64>);

/// Slope of `log |Σ_{units r} e(P(r)/b)|` against `log b` over the given moduli.
pub fn complete_sum_slope(p: &RationalPolynomial, moduli: &[u64]) -> Result<SlopeFit> {
    let rows = moduli
        .iter()
        .map(|&b| Ok((b, lemma6_complete_sum(p, b)?.norm())))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok((rows, loglog_slope(&xs, &ys)))
}

impl FromStr for ProbePolynomial {
    type Err = Error;
    /// Comma-separated coefficients, ascending.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        Self::parse(&parts)
    }
}
