use glasner_core::bump::{build_bump, eps1, truncation_threshold, Bump};
use glasner_core::exp_sums::{
    complete_sum_slope, empirical_prime_exp_sum, lemma3_scan, lemma6_complete_sum, limit_prime_exp_sum_rational,
};
use glasner_core::pair_counts::{lemma4_growth, profile, scan_denominator, verify_hb_bound};
use glasner_core::polynomials::{
    mult_complexity_bound, mult_complexity_witness_check, IntegerValuedPolynomial, MatrixFamily, PrimeMode,
    RationalPolynomial,
};
use glasner_core::primes::{euler_phi, primes_up_to};
use glasner_core::search::{generate_adversarial, GeneratorKind, GeneratorParams};
use glasner_core::{BigInt, BigRational};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BumpArgs, Command, ExpsumArgs, Format, MultcompArgs, PaircountArgs, Suite};
use crate::{csv_body, json_body, read_family, CliError, CliResult, Report};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub value: f64,
    pub threshold: String,
    pub pass: bool,
}

fn check(name: impl Into<String>, value: f64, threshold: impl Into<String>, pass: bool) -> Check {
    Check {
        check: name.into(),
        value,
        threshold: threshold.into(),
        pass,
    }
}

fn fmt_num(v: f64) -> String {
    if v != 0.0 && v.is_finite() && (v.abs() < 1e-4 || v.abs() >= 1e12) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn checks_csv(checks: &[Check]) -> String {
    let mut s = String::from("check,value,threshold,pass\n");
    for c in checks {
        s.push_str(&format!(
            "{},{},{},{}\n",
            c.check,
            fmt_num(c.value),
            c.threshold,
            c.pass
        ));
    }
    s
}

pub(crate) fn cmd_verify(suite: &Suite, cmd: &Command) -> CliResult<Report> {
    let (checks, format) = match suite {
        Suite::Bump(a) => (bump_suite(a)?, a.common.format),
        Suite::Expsum(a) => (expsum_suite(a)?, a.common.format),
        Suite::Paircount(a) => (paircount_suite(a)?, a.common.format),
        Suite::Multcomp(a) => (multcomp_suite(a)?, a.common.format),
    };
    let all = checks.iter().all(|c| c.pass);
    let body = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_body(cmd, &checks_csv(&checks)),
        Format::Json => json_body(cmd, &checks),
    };
    let notes = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("check {} failed: {} vs {}", c.check, c.value, c.threshold))
        .collect();
    Ok(Report {
        code: if all { 0 } else { 1 },
        body,
        notes,
    })
}

/// Least `eps · l2_mass` spread over a schedule, as max/min.
pub fn l2_scaling_ratio(schedule: &[f64], m_max: usize) -> glasner_core::Result<f64> {
    let vals = schedule
        .iter()
        .map(|&e| Ok(e * build_bump(e, m_max)?.l2_mass().0))
        .collect::<glasner_core::Result<Vec<f64>>>()?;
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(max / min)
}

/// `min_t g(t) + err` over an `n`-point grid of `[-1/2, 1/2)`.
pub fn bump_min_on_grid(g: &Bump<f64>, n: usize) -> f64 {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let (v, err) = g.eval(-0.5 + i as f64 / n as f64);
            v + err
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// `max |g(t)| - err` for `t` on a grid of `[from, 1/2]`.
pub fn bump_max_outside(g: &Bump<f64>, from: f64, n: usize) -> f64 {
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let t = from + (0.5 - from) * i as f64 / n as f64;
            let (v, err) = g.eval(t);
            v.abs() - err
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

fn bump_suite(a: &BumpArgs) -> CliResult<Vec<Check>> {
    let g = build_bump(a.eps, a.m_max)?;
    let mut out = Vec::new();
    let g0 = g.fourier(0)?;
    out.push(check("fourier_zero", g0, "== 1", g0 == 1.0));
    let (lo, hi) = g
        .coefficients()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &c| (l.min(c), h.max(c)));
    out.push(check("coefficients_min", lo, ">= 0", lo >= 0.0));
    out.push(check("coefficients_max", hi, "<= 1", hi <= 1.0));
    let c = g.decay_constant();
    out.push(check(
        "decay_constant",
        c,
        "finite and <= 1000",
        c.is_finite() && c <= 1e3,
    ));
    if a.eps < 0.5 {
        let outside = bump_max_outside(&g, a.eps, 200);
        out.push(check("support_outside_eps", outside, "<= 1e-9", outside <= 1e-9));
    }
    let min = bump_min_on_grid(&g, 10_000);
    out.push(check("nonnegative_on_grid", min, ">= -1e-9", min >= -1e-9));
    let (l2, _) = g.l2_mass();
    out.push(check("l2_mass", l2, ">= 1", l2 >= 1.0));
    let ratio = l2_scaling_ratio(&[0.2, 0.1, 0.05, 0.025], a.m_max)?;
    out.push(check("eps_l2_scaling_ratio", ratio, "<= 2", ratio <= 2.0));
    if let Ok(t) = truncation_threshold(a.eps) {
        for n in 1..=2 {
            let tail = if (t as usize) <= g.m_max() {
                g.box_tail_mass(n, t as usize)?
            } else {
                f64::INFINITY
            };
            out.push(check(format!("tail_mass_n{n}_at_T{t}"), tail, "< 0.5", tail < 0.5));
        }
    }
    for n in 1..=4 {
        // recorded for reference; the certificate bound is not a pass/fail criterion here
        out.push(check(format!("eps1_n{n}"), eps1(n, c), "recorded", true));
    }
    Ok(out)
}

fn odd_primes_up_to(b: u64) -> Vec<u64> {
    primes_up_to(b as usize).into_iter().filter(|&p| p > 2).collect()
}

fn expsum_suite(a: &ExpsumArgs) -> CliResult<Vec<Check>> {
    let f = IntegerValuedPolynomial::parse(&a.f)?;
    let x = IntegerValuedPolynomial::from_integers(&[0, 1])?;
    let half = BigRational::new(1.into(), 2.into());
    let third = BigRational::new(1.into(), 3.into());
    let mut out = Vec::new();

    let e = empirical_prime_exp_sum(&x, &half, 1, 10_000)?;
    let d = (e.value() - num_complex::Complex64::new(-1.0, 0.0)).norm();
    out.push(check("x_half_empirical_N1e4", d, "<= 2e-4", d <= 2e-4));
    let lim = limit_prime_exp_sum_rational(&x, &BigInt::from(1), 3, 1)?;
    let e = empirical_prime_exp_sum(&x, &third, 1, 100_000)?;
    let d = (e.value() - lim.value()).norm();
    out.push(check("x_third_empirical_N1e5", d, "<= 0.02", d <= 0.02));
    let d = (lim.value() - num_complex::Complex64::new(-0.5, 0.0)).norm();
    out.push(check("x_third_limit", d, "<= 1e-12", d <= 1e-12));

    let lim = limit_prime_exp_sum_rational(&f, &BigInt::from(1), 3, 1)?;
    let e = empirical_prime_exp_sum(&f, &third, 1, 100_000)?;
    let d = (e.value() - lim.value()).norm();
    out.push(check("f_third_oracle_agreement", d, "<= 5e-3", d <= 5e-3));
    let plus = limit_prime_exp_sum_rational(&f, &BigInt::from(2), 7, 3)?;
    let minus = limit_prime_exp_sum_rational(&f, &BigInt::from(2), 7, -3)?;
    let d = (plus.value().conj() - minus.value()).norm();
    out.push(check("conjugation_symmetry", d, "<= 1e-12", d <= 1e-12));

    let moduli = odd_primes_up_to(a.bmax);
    let degree = f.degree().max(1) as f64;
    let poly: &RationalPolynomial = f.poly();
    if poly.has_integer_coefficients() {
        let worst = moduli
            .par_iter()
            .map(|&b| Ok(lemma6_complete_sum(poly, b)?.norm() - euler_phi(b) as f64))
            .collect::<glasner_core::Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(check("complete_sum_phi_bound", worst, "<= 1e-9", worst <= 1e-9));
        let (_, slope) = complete_sum_slope(poly, &moduli)?;
        let s = slope.unwrap_or(f64::NAN);
        let bound = 1.0 - 1.0 / degree + 0.05;
        out.push(check("complete_sum_slope", s, format!("<= {bound}"), s <= bound));
    }
    let (_, slope) = lemma3_scan(&f, &BigInt::from(1), &moduli, a.t)?;
    let s = slope.unwrap_or(f64::NAN);
    let bound = -1.0 / degree + 0.1;
    out.push(check("lemma3_slope", s, format!("<= {bound}"), s <= bound));
    Ok(out)
}

/// Growth exponent of the weighted pair sum over `ks`, each set drawn at its scan denominator.
pub fn lemma4_growth_slope(ks: &[usize], m: usize, r: f64, seed: u64) -> glasner_core::Result<f64> {
    let profiles = ks
        .iter()
        .map(|&k| {
            let params = GeneratorParams {
                d: scan_denominator(k, m),
                ..Default::default()
            };
            profile(&generate_adversarial(
                GeneratorKind::RandomBoundedDenominator,
                k,
                m,
                &params,
                seed,
            )?)
        })
        .collect::<glasner_core::Result<Vec<_>>>()?;
    let (_, slope) = lemma4_growth(&profiles, 1.0, 10.0, r, 1)?;
    Ok(slope.unwrap_or(f64::NAN))
}

fn paircount_suite(a: &PaircountArgs) -> CliResult<Vec<Check>> {
    if a.sets == 0 {
        return Err(CliError::Usage("--sets must be at least 1".into()));
    }
    let params = GeneratorParams {
        d: a.d,
        ..Default::default()
    };
    let mut violations = 0usize;
    let mut checked = 0usize;
    let mut alpha: f64 = 0.0;
    for i in 0..a.sets {
        let set = generate_adversarial(
            GeneratorKind::RandomBoundedDenominator,
            a.k,
            a.m,
            &params,
            a.seed.wrapping_add(i as u64),
        )?;
        let rep = verify_hb_bound(&profile(&set)?);
        violations += rep.violations.len();
        checked += rep.checked;
        if let Some(al) = rep.alpha_m1 {
            alpha = alpha.max(al);
        }
    }
    let mut out = vec![
        check("hb_bound_violations", violations as f64, "== 0", violations == 0),
        check("hb_support_points_checked", checked as f64, "recorded", true),
    ];
    if a.m == 1 {
        out.push(check("alpha_m1", alpha, "recorded", true));
    }
    let slope = lemma4_growth_slope(&[50, 100, 200, 400], a.m, a.r, a.seed)?;
    let bound = 2.0 - a.r / (a.m as f64 + 1.0) + 0.15;
    out.push(check(
        "lemma4_growth_slope",
        slope,
        format!("<= {bound}"),
        slope <= bound,
    ));
    Ok(out)
}

/// The two fixed families with their frequency vectors: `{x}` with `(1)` and
/// `{x, x^2}` (one row) with `(1)`.
pub fn builtin_multcomp_families() -> Vec<(String, MatrixFamily, Vec<i64>)> {
    let lin = MatrixFamily::new(
        1,
        1,
        PrimeMode::IndependentPrimes,
        vec![RationalPolynomial::from_integers(&[0, 1])],
    )
    .expect("valid family");
    let quad = MatrixFamily::new(
        1,
        2,
        PrimeMode::IndependentPrimes,
        vec![
            RationalPolynomial::from_integers(&[0, 1]),
            RationalPolynomial::from_integers(&[0, 0, 1]),
        ],
    )
    .expect("valid family");
    vec![("x".into(), lin, vec![1]), ("x_x2".into(), quad, vec![1])]
}

fn multcomp_suite(a: &MultcompArgs) -> CliResult<Vec<Check>> {
    let fams = match &a.family {
        Some(path) => {
            let fam = read_family(path)?;
            let mvec = a.mvec.clone().unwrap_or_else(|| vec![1; fam.n()]);
            vec![("family".to_string(), fam, mvec)]
        }
        None => builtin_multcomp_families(),
    };
    let mut out = Vec::new();
    for (name, fam, mvec) in fams {
        let q = mult_complexity_bound(&fam, &mvec)?;
        out.push(check(
            format!("{name}_Q"),
            q.q.to_string().parse().unwrap_or(f64::INFINITY),
            "recorded",
            true,
        ));
        let ok = mult_complexity_witness_check(&fam, &mvec, a.trials, a.qmax, a.seed)?;
        out.push(check(format!("{name}_witness_trials"), a.trials as f64, "all pass", ok));
    }
    Ok(out)
}
