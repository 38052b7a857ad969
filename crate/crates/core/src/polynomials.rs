//! Integer-valued polynomials, prime-indexed matrix families and the
//! multiplicative complexity bound for row combinations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::primes::is_prime_u64;
use crate::scalar::{parse_rational, TorusScalar};
use crate::torus::IntMatrix;

/// Polynomial over `Q`, coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `self - self(0)`.
    pub fn without_constant(&self) -> Self {
        let mut c = self.coeffs.clone();
        if let Some(c0) = c.first_mut() {
            *c0 = BigRational::zero();
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Parses a sum of monomials such as `"x^2"`, `"1/2x^2 + 1/2x"`, `"3*x^2 - 7"`.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);

        let mut coeffs: Vec<BigRational> = Vec::new();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, power) = match body.find('x') {
                None => (parse_rational(body)?, 0usize),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rational(c)?
                    };
                    let rest = &body[pos + 1..];
                    let p = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| Error::Parse(format!("bad exponent in `{term}`")))?
                    };
                    (c, p)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigRational::zero());
            }
            coeffs[power] += coef * BigRational::from_integer(sign.into());
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let coef = a.to_coord_string();
            match (k, a.is_one()) {
                (0, _) => f.write_str(&coef)?,
                (_, true) => {}
                _ => write!(f, "{coef}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Forward differences `Δ^i f(0)` for `i = 0..=deg`.
pub fn forward_differences_at_zero(f: &RationalPolynomial) -> Vec<BigRational> {
    let deg = f.degree();
    let mut vals: Vec<BigRational> = (0..=deg)
        .map(|t| f.eval(&BigRational::from_integer(BigInt::from(t))))
        .collect();
    let mut out = Vec::with_capacity(deg + 1);
    for _ in 0..=deg {
        out.push(vals[0].clone());
        vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// `f(Z) ⊆ Z` iff every forward difference at 0 is an integer.
pub fn is_integer_valued(f: &RationalPolynomial) -> bool {
    forward_differences_at_zero(f).iter().all(BigRational::is_integer)
}

/// A non-constant polynomial certified to map integers to integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerValuedPolynomial {
    poly: RationalPolynomial,
    /// `deg!`, so that `scaled = deg! * f` has integer coefficients.
    factorial: BigInt,
    scaled: Vec<BigInt>,
}

impl IntegerValuedPolynomial {
    pub fn new(poly: RationalPolynomial) -> Result<Self> {
        if poly.degree() < 1 {
            return Err(Error::Hypothesis {
                hypothesis: "non-constant",
                detail: format!("`{poly}` is constant"),
            });
        }
        if !is_integer_valued(&poly) {
            return Err(Error::NotIntegerValued(poly.to_string()));
        }
        let factorial = factorial(poly.degree());
        let fr = BigRational::from_integer(factorial.clone());
        let scaled = poly
            .coeffs()
            .iter()
            .map(|c| {
                let v = c * &fr;
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect();
        Ok(Self {
            poly,
            factorial,
            scaled,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(RationalPolynomial::parse(text)?)
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(RationalPolynomial::from_integers(coeffs))
    }

    pub fn poly(&self) -> &RationalPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// `deg!`; `f(t + b * deg!) ≡ f(t) (mod b)` for every integer `b`.
    pub fn period_factor(&self) -> &BigInt {
        &self.factorial
    }

    pub fn eval_at_integer(&self, t: &BigInt) -> BigInt {
        let v = self.scaled.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c);
        let (q, r) = v.div_rem(&self.factorial);
        assert!(r.is_zero(), "integer-valuedness certificate violated for {}", self.poly);
        q
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval_at_integer(&BigInt::from(t))
    }

    /// `f(t) mod modulus` in `[0, modulus)` without forming `f(t)` when it fits
    /// in machine words.
    pub fn eval_mod(&self, t: u64, modulus: u64) -> u64 {
        assert!(modulus > 0);
        let fact = self.factorial.to_u128();
        if let Some(fact) = fact {
            if let Some(big_mod) = fact.checked_mul(modulus as u128).filter(|&m| m < (1u128 << 63)) {
                // evaluate deg!*f(t) modulo deg!*modulus, then divide out deg!
                let tm = (t as u128) % big_mod;
                let mut acc: u128 = 0;
                for c in self.scaled.iter().rev() {
                    let cm = c.mod_floor(&BigInt::from(big_mod)).to_u128().expect("reduced");
                    acc = (acc * tm % big_mod + cm) % big_mod;
                }
                debug_assert_eq!(acc % fact, 0);
                return (acc / fact) as u64;
            }
        }
        self.eval_at_integer(&BigInt::from(t))
            .mod_floor(&BigInt::from(modulus))
            .to_u64()
            .expect("reduced residue fits")
    }
}

impl fmt::Display for IntegerValuedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeMode {
    /// Every entry evaluated at its own prime `p_{i,j}`.
    #[serde(rename = "independent")]
    IndependentPrimes,
    /// All entries evaluated at one prime `p`.
    #[serde(rename = "single")]
    SinglePrime,
}

/// An `n x m` grid of integer-valued polynomials together with the way primes
/// are substituted into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFamily {
    n: usize,
    m: usize,
    mode: PrimeMode,
    entries: Vec<IntegerValuedPolynomial>,
}

impl MatrixFamily {
    /// Builds a family after checking every hypothesis of its mode.
    pub fn new(n: usize, m: usize, mode: PrimeMode, entries: Vec<RationalPolynomial>) -> Result<Self> {
        let report = check_family_entries(n, m, mode, &entries);
        if let Some(f) = report.failures.first() {
            return Err(Error::Hypothesis {
                hypothesis: f.hypothesis,
                detail: f.detail.clone(),
            });
        }
        let entries = entries
            .into_iter()
            .map(IntegerValuedPolynomial::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, m, mode, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> PrimeMode {
        self.mode
    }

    pub fn entry(&self, i: usize, j: usize) -> &IntegerValuedPolynomial {
        &self.entries[i * self.m + j]
    }

    pub fn entries(&self) -> &[IntegerValuedPolynomial] {
        &self.entries
    }

    /// `L = max deg f_{i,j}`.
    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .map(IntegerValuedPolynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Number of primes an assignment needs: `n*m` or 1.
    pub fn arity(&self) -> usize {
        match self.mode {
            PrimeMode::IndependentPrimes => self.n * self.m,
            PrimeMode::SinglePrime => 1,
        }
    }

    pub fn to_config(&self) -> FamilyConfig {
        FamilyConfig {
            n: self.n,
            m: self.m,
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .map(|e| e.poly().coeffs().iter().map(TorusScalar::to_coord_string).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisFailure {
    pub hypothesis: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub failures: Vec<HypothesisFailure>,
}

impl FamilyReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, hypothesis: &'static str, detail: String) {
        self.failures.push(HypothesisFailure { hypothesis, detail });
    }
}

pub const HYP_SHAPE: &str = "shape";
pub const HYP_NON_CONSTANT: &str = "non-constant";
pub const HYP_INTEGER_VALUED: &str = "integer-valued";
pub const HYP_INTEGER_COEFFICIENTS: &str = "integer-coefficients";
pub const HYP_LINEAR_INDEPENDENCE: &str = "linear-independence";

fn check_family_entries(n: usize, m: usize, mode: PrimeMode, entries: &[RationalPolynomial]) -> FamilyReport {
    let mut report = FamilyReport::default();
    if n == 0 || m == 0 || entries.len() != n * m {
        report.fail(HYP_SHAPE, format!("{} entries for a {n}x{m} family", entries.len()));
        return report;
    }
    for (idx, f) in entries.iter().enumerate() {
        let (i, j) = (idx / m + 1, idx % m + 1);
        if f.degree() < 1 {
            report.fail(HYP_NON_CONSTANT, format!("f_{{{i},{j}}} = {f} is constant"));
        }
        if !is_integer_valued(f) {
            report.fail(HYP_INTEGER_VALUED, format!("f_{{{i},{j}}} = {f} does not map Z into Z"));
        }
        if mode == PrimeMode::SinglePrime && !f.has_integer_coefficients() {
            report.fail(HYP_INTEGER_COEFFICIENTS, format!("f_{{{i},{j}}} = {f} is not in Z[x]"));
        }
    }
    if mode == PrimeMode::SinglePrime {
        let mut vectors: Vec<RationalPolynomial> = vec![RationalPolynomial::from_integers(&[1])];
        vectors.extend(entries.iter().cloned());
        let r = rank(&vectors);
        if r < vectors.len() {
            report.fail(
                HYP_LINEAR_INDEPENDENCE,
                format!("{{1}} ∪ {{f_ij}} has rank {r} < {}", vectors.len()),
            );
        }
    }
    report
}

/// Checks every hypothesis of the family's mode and reports each failure by name.
pub fn check_family(fam: &MatrixFamily) -> FamilyReport {
    let polys: Vec<RationalPolynomial> = fam.entries.iter().map(|e| e.poly.clone()).collect();
    check_family_entries(fam.n, fam.m, fam.mode, &polys)
}

/// Rank over `Q` of the coefficient vectors, by exact Gaussian elimination.
/// Over `Z` this is the same as linear independence since the span is torsion-free.
pub fn rank(polys: &[RationalPolynomial]) -> usize {
    let width = polys.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let mut rows: Vec<Vec<BigRational>> = polys
        .iter()
        .map(|p| {
            let mut r = p.coeffs().to_vec();
            r.resize(width, BigRational::zero());
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pv = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pv;
                let pivot_row = rows[rank][col..].to_vec();
                for (x, p) in rows[r][col..].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Prime substitution for a family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeAssignment {
    /// Row-major `n x m` grid.
    Grid(Vec<u64>),
    Single(u64),
}

/// Evaluates every entry at its prime.
pub fn instantiate(fam: &MatrixFamily, primes: &PrimeAssignment) -> Result<IntMatrix> {
    let grid: Vec<u64> = match (fam.mode, primes) {
        (PrimeMode::SinglePrime, PrimeAssignment::Single(p)) => vec![*p; fam.n * fam.m],
        (PrimeMode::IndependentPrimes, PrimeAssignment::Grid(g)) if g.len() == fam.n * fam.m => g.clone(),
        (PrimeMode::IndependentPrimes, PrimeAssignment::Grid(g)) => {
            return Err(invalid(
                "primes",
                format!("expected {} primes, got {}", fam.n * fam.m, g.len()),
            ))
        }
        (mode, _) => {
            return Err(invalid(
                "primes",
                format!("assignment arity does not match mode {mode:?}"),
            ))
        }
    };
    if let Some(p) = grid.iter().find(|&&p| !is_prime_u64(p)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let data = fam
        .entries
        .iter()
        .zip(&grid)
        .map(|(f, &p)| f.eval_at_integer(&BigInt::from(p)))
        .collect();
    IntMatrix::new(fam.n, fam.m, data)
}

/// `Q = m! * (n * ||M(x) - M(0)|| * ||m_vec||_inf)^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultComplexityBound {
    #[serde(serialize_with = "ser_bigint")]
    pub q: BigInt,
    /// `||m_vec||_inf`, the frequency box edge this bound was computed for.
    pub frequency_bound: u64,
    /// Largest absolute coefficient of `M(x) - M(0)`.
    #[serde(serialize_with = "ser_bigint")]
    pub matrix_norm: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The vector `m_vec^t (M(x) - M(0))` of `m` integer polynomials.
pub fn row_combination(fam: &MatrixFamily, m_vec: &[i64]) -> Result<Vec<RationalPolynomial>> {
    if m_vec.len() != fam.n {
        return Err(Error::DimensionMismatch {
            expected: fam.n,
            got: m_vec.len(),
        });
    }
    if m_vec.iter().all(|&v| v == 0) {
        return Err(invalid("m_vec", "must be nonzero"));
    }
    Ok((0..fam.m)
        .map(|j| {
            (0..fam.n).fold(RationalPolynomial::new(vec![]), |acc, i| {
                acc.add(
                    &fam.entry(i, j)
                        .poly()
                        .without_constant()
                        .scale(&BigRational::from_integer(m_vec[i].into())),
                )
            })
        })
        .collect())
}

pub fn matrix_norm(fam: &MatrixFamily) -> BigInt {
    fam.entries
        .iter()
        .flat_map(|e| e.poly().coeffs().iter().skip(1))
        .map(|c| c.abs().ceil().to_integer())
        .max()
        .unwrap_or_else(BigInt::zero)
}

pub fn mult_complexity_bound(fam: &MatrixFamily, m_vec: &[i64]) -> Result<MultComplexityBound> {
    let combo = row_combination(fam, m_vec)?;
    if combo.iter().any(|p| !p.has_integer_coefficients()) {
        return Err(Error::Hypothesis {
            hypothesis: HYP_INTEGER_COEFFICIENTS,
            detail: "multiplicative complexity needs entries in Z[x]".into(),
        });
    }
    let r = rank(&combo);
    if r < combo.len() {
        return Err(Error::Hypothesis {
            hypothesis: HYP_LINEAR_INDEPENDENCE,
            detail: format!("entries of m^t(M(x) - M(0)) have rank {r} < {}", combo.len()),
        });
    }
    let norm = matrix_norm(fam);
    let freq = m_vec.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let base = BigInt::from(fam.n) * &norm * BigInt::from(freq);
    let q = factorial(fam.m) * num_traits::pow(base, fam.m);
    Ok(MultComplexityBound {
        q,
        frequency_bound: freq,
        matrix_norm: norm,
    })
}

/// Random search for a counterexample to the complexity bound: draws `(a, q)`
/// with `gcd(a_1, .., a_m, q) = 1`, forms `(P(x) - P(0)) · a = Σ b_j x^j` and
/// checks `gcd(b_1, .., b_L, q) <= Q`. Returns `true` when every trial passes.
pub fn mult_complexity_witness_check(
    fam: &MatrixFamily,
    m_vec: &[i64],
    trials: usize,
    q_max: u64,
    seed: u64,
) -> Result<bool> {
    if q_max < 1 {
        return Err(invalid("q_max", "must be at least 1"));
    }
    let bound = mult_complexity_bound(fam, m_vec)?;
    let combo: Vec<Vec<BigInt>> = row_combination(fam, m_vec)?
        .iter()
        .map(|p| p.coeffs().iter().map(|c| c.to_integer()).collect())
        .collect();
    let len = combo.iter().map(Vec::len).max().unwrap_or(0);
    let a_max = q_max as i64;

    // each trial gets its own stream so the outcome does not depend on scheduling
    let ok = (0..trials).into_par_iter().all(|t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let (a, q) = loop {
            let q = rng.gen_range(1..=q_max);
            let a: Vec<i64> = (0..fam.m).map(|_| rng.gen_range(-a_max..=a_max)).collect();
            let g = a.iter().fold(q, |g, &ai| g.gcd(&ai.unsigned_abs()));
            if g == 1 {
                break (a, q);
            }
        };
        let mut g = BigInt::from(q);
        for j in 1..len {
            let bj: BigInt = combo
                .iter()
                .zip(&a)
                .map(|(p, &ai)| p.get(j).cloned().unwrap_or_default() * BigInt::from(ai))
                .sum();
            g = g.gcd(&bj);
        }
        g <= bound.q
    });
    Ok(ok)
}

/// On-disk family description, coefficients ascending as `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub n: usize,
    pub m: usize,
    pub mode: PrimeMode,
    pub entries: Vec<Vec<String>>,
}

impl FamilyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family config serializes")
    }

    pub fn polynomials(&self) -> Result<Vec<RationalPolynomial>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>>>()
                    .map(RationalPolynomial::new)
            })
            .collect()
    }

    /// Hypothesis report without building the family.
    pub fn check(&self) -> Result<FamilyReport> {
        Ok(check_family_entries(self.n, self.m, self.mode, &self.polynomials()?))
    }

    pub fn build(&self) -> Result<MatrixFamily> {
        MatrixFamily::new(self.n, self.m, self.mode, self.polynomials()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RationalPolynomial {
        RationalPolynomial::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("x^2").coeffs().len(), 3);
        assert_eq!(p("1/2x^2 + 1/2x").to_string(), "1/2*x^2 + 1/2*x");
        assert_eq!(p("3*x^2 - 7").to_string(), "3*x^2 - 7");
        assert_eq!(p("-x + 1").to_string(), "-x + 1");
        assert!(RationalPolynomial::parse("x^").is_err());
        assert!(RationalPolynomial::parse("").is_err());
    }

    #[test]
    fn eval_examples() {
        let tri = IntegerValuedPolynomial::parse("1/2x^2 + 1/2x").unwrap();
        assert_eq!(tri.eval_i64(5), BigInt::from(15));
        let sq = IntegerValuedPolynomial::parse("x^2").unwrap();
        assert_eq!(sq.eval_i64(3), BigInt::from(9));
        assert_eq!(
            tri.eval_mod(1_000_003, 97),
            (tri.eval_i64(1_000_003) % 97u32).to_u64().unwrap()
        );
    }

    #[test]
    fn integer_valued_examples() {
        assert!(is_integer_valued(&p("1/2x^2 + 1/2x")));
        assert!(!is_integer_valued(&p("1/2x")));
        assert!(is_integer_valued(&p("3x^2 + 7")));
        assert!(is_integer_valued(&p("1/6x^3 - 1/6x")));
        assert!(matches!(
            IntegerValuedPolynomial::parse("1/2x"),
            Err(Error::NotIntegerValued(_))
        ));
        assert!(IntegerValuedPolynomial::parse("5").is_err());
    }

    #[test]
    fn finite_difference_oracle_agrees_with_direct_evaluation() {
        // f(Z) ⊆ Z checked on a window of integers
        for text in [
            "1/2x^2 + 1/2x",
            "1/2x",
            "1/3x^3 + 1/2x^2 + 1/6x",
            "1/3x^3 + 1/2x^2",
            "x^4 - x",
        ] {
            let f = p(text);
            let direct = (-30..30).all(|t| f.eval(&BigRational::from_integer(t.into())).is_integer());
            assert_eq!(is_integer_valued(&f), direct, "{text}");
        }
    }

    #[test]
    fn family_checks() {
        let ok = MatrixFamily::new(2, 1, PrimeMode::SinglePrime, vec![p("x"), p("x^2")]);
        assert!(ok.is_ok());
        let err = MatrixFamily::new(2, 1, PrimeMode::SinglePrime, vec![p("x"), p("x + 1")]).unwrap_err();
        assert!(matches!(
            err,
            Error::Hypothesis {
                hypothesis: HYP_LINEAR_INDEPENDENCE,
                ..
            }
        ));
        let err = MatrixFamily::new(1, 1, PrimeMode::SinglePrime, vec![p("1/2x^2 + 1/2x")]).unwrap_err();
        assert!(matches!(
            err,
            Error::Hypothesis {
                hypothesis: HYP_INTEGER_COEFFICIENTS,
                ..
            }
        ));
        // the same entry is fine with independent primes
        assert!(MatrixFamily::new(1, 1, PrimeMode::IndependentPrimes, vec![p("1/2x^2 + 1/2x")]).is_ok());
        let err = MatrixFamily::new(1, 1, PrimeMode::IndependentPrimes, vec![p("7")]).unwrap_err();
        assert!(matches!(
            err,
            Error::Hypothesis {
                hypothesis: HYP_NON_CONSTANT,
                ..
            }
        ));
        let err = MatrixFamily::new(1, 2, PrimeMode::IndependentPrimes, vec![p("x")]).unwrap_err();
        assert!(matches!(
            err,
            Error::Hypothesis {
                hypothesis: HYP_SHAPE,
                ..
            }
        ));
    }

    #[test]
    fn instantiate_examples() {
        let f = MatrixFamily::new(1, 1, PrimeMode::IndependentPrimes, vec![p("x^2")]).unwrap();
        let m = instantiate(&f, &PrimeAssignment::Grid(vec![3])).unwrap();
        assert_eq!(m.to_rows(), vec![vec![BigInt::from(9)]]);

        let f = MatrixFamily::new(2, 1, PrimeMode::SinglePrime, vec![p("x"), p("x^2")]).unwrap();
        let m = instantiate(&f, &PrimeAssignment::Single(2)).unwrap();
        assert_eq!(m.to_rows(), vec![vec![BigInt::from(2)], vec![BigInt::from(4)]]);

        let f = MatrixFamily::new(1, 2, PrimeMode::IndependentPrimes, vec![p("x"), p("x")]).unwrap();
        let m = instantiate(&f, &PrimeAssignment::Grid(vec![2, 5])).unwrap();
        assert_eq!(m.to_rows(), vec![vec![BigInt::from(2), BigInt::from(5)]]);

        assert_eq!(
            instantiate(&f, &PrimeAssignment::Grid(vec![2, 9])).unwrap_err(),
            Error::NotPrime("9".into())
        );
        assert!(instantiate(&f, &PrimeAssignment::Single(2)).is_err());
        assert!(instantiate(&f, &PrimeAssignment::Grid(vec![2])).is_err());
    }

    #[test]
    fn complexity_bound_examples() {
        let f = MatrixFamily::new(1, 1, PrimeMode::SinglePrime, vec![p("x")]).unwrap();
        assert_eq!(mult_complexity_bound(&f, &[1]).unwrap().q, BigInt::from(1));
        let f = MatrixFamily::new(1, 2, PrimeMode::SinglePrime, vec![p("x"), p("x^2")]).unwrap();
        let b = mult_complexity_bound(&f, &[1]).unwrap();
        assert_eq!(b.matrix_norm, BigInt::from(1));
        assert_eq!(b.q, BigInt::from(2));
        // doubling the frequency scales Q by 2^m
        assert_eq!(mult_complexity_bound(&f, &[2]).unwrap().q, BigInt::from(8));
        assert!(mult_complexity_bound(&f, &[0]).is_err());
    }

    #[test]
    fn complexity_rejects_dependent_combination() {
        // x and 2x: the row combination entries are dependent
        let f = MatrixFamily::new(1, 2, PrimeMode::IndependentPrimes, vec![p("x"), p("2x")]).unwrap();
        assert!(matches!(
            mult_complexity_bound(&f, &[1]),
            Err(Error::Hypothesis {
                hypothesis: HYP_LINEAR_INDEPENDENCE,
                ..
            })
        ));
    }

    #[test]
    fn witness_check_small() {
        let f = MatrixFamily::new(1, 2, PrimeMode::SinglePrime, vec![p("x"), p("x^2")]).unwrap();
        assert!(mult_complexity_witness_check(&f, &[1], 500, 1_000, 7).unwrap());
        // q = 1 only: gcd is 1
        assert!(mult_complexity_witness_check(&f, &[3], 50, 1, 7).unwrap());
    }

    #[test]
    fn config_round_trip() {
        let f = MatrixFamily::new(1, 2, PrimeMode::IndependentPrimes, vec![p("1/2x^2 + 1/2x"), p("x")]).unwrap();
        let text = f.to_config().to_json();
        assert!(text.contains("\"independent\""));
        assert_eq!(FamilyConfig::from_json(&text).unwrap().build().unwrap(), f);
    }
}
