//! Periodic bump functions with sub-exponential Fourier decay.
//!
//! `g_ε` is the normalized convolution of centred interval indicators. An
//! indicator of width `w` scaled to mass 1 has Fourier coefficients
//! `sinc(π m w)`, so `ĝ_ε(m) = Π_j sinc(π m w_j)` and `ĝ_ε(0) = 1`. Widths come
//! in equal pairs, which makes every coefficient a product of squares and
//! hence nonnegative, and the support is `[-Σw/2, Σw/2] ⊆ [-ε, ε]`.

use num_traits::{Float, FloatConst};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Relative size of the widths dropped from the infinite geometric sequence.
pub const OMITTED_WIDTH_TOLERANCE: f64 = 1e-12;

pub trait BumpScalar: Float + FloatConst + Send + Sync + std::fmt::Debug + 'static {}
impl BumpScalar for f32 {}
impl BumpScalar for f64 {}

fn cast<F: BumpScalar>(x: f64) -> F {
    F::from(x).expect("finite literal converts")
}

#[inline]
fn sinc<F: BumpScalar>(x: F) -> F {
    if x == F::zero() {
        F::one()
    } else {
        x.sin() / x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bump<F: BumpScalar> {
    eps: F,
    widths: Vec<F>,
    /// `ĝ(m)` for `m = 0..=m_max`; the construction is even so `ĝ(-m) = ĝ(m)`.
    table: Vec<F>,
    decay_constant: F,
    tail_bound: F,
}

/// Paired geometric widths `w_j ∝ 2^{-j}`, normalized to total `eps`.
pub fn geometric_widths<F: BumpScalar>(eps: F) -> Vec<F> {
    let levels = (1.0 / OMITTED_WIDTH_TOLERANCE).log2().ceil() as i32 + 1;
    let two = cast::<F>(2.0);
    let raw: Vec<F> = (0..levels).map(|j| two.powi(-j)).collect();
    let total = raw.iter().fold(F::zero(), |a, &w| a + w) * two;
    raw.iter().flat_map(|&w| [w * eps / total, w * eps / total]).collect()
}

/// `g_ε` from the paired geometric construction with a table up to `m_max`.
pub fn build_bump<F: BumpScalar>(eps: F, m_max: usize) -> Result<Bump<F>> {
    if !(eps > F::zero() && eps < F::one()) {
        return Err(invalid("eps", format!("must lie in (0, 1), got {eps:?}")));
    }
    build_bump_with_widths(eps, geometric_widths(eps), m_max)
}

/// General convolution of indicators of the given widths (`Σ w ≤ eps`).
pub fn build_bump_with_widths<F: BumpScalar>(eps: F, widths: Vec<F>, m_max: usize) -> Result<Bump<F>> {
    if !(eps > F::zero() && eps < F::one()) {
        return Err(invalid("eps", format!("must lie in (0, 1), got {eps:?}")));
    }
    if m_max < 1 {
        return Err(invalid("M_max", "must be at least 1"));
    }
    if widths.is_empty() || widths.iter().any(|&w| !(w > F::zero())) {
        return Err(invalid("widths", "need at least one positive width"));
    }
    let total = widths.iter().fold(F::zero(), |a, &w| a + w);
    if total > eps * cast(1.0 + 1e-9) {
        return Err(invalid("widths", format!("total width {total:?} exceeds eps {eps:?}")));
    }
    let pi = F::PI();
    let coefficient = |m: usize| -> F {
        let mf = cast::<F>(m as f64);
        widths.iter().fold(F::one(), |acc, &w| acc * sinc(pi * mf * w))
    };
    let table: Vec<F> = (0..=m_max).map(coefficient).collect();

    let decay_constant = table
        .iter()
        .enumerate()
        .map(|(m, &c)| c.abs() * (eps * cast(m as f64)).sqrt().exp())
        .fold(F::zero(), F::max);

    let tail_bound = sinc_tail_bound(&widths, m_max);
    Ok(Bump {
        eps,
        widths,
        table,
        decay_constant,
        tail_bound,
    })
}

/// Rigorous bound on `Σ_{m > m_max} |ĝ(m)|` from `|sinc(x)| ≤ min(1, 1/|x|)`.
///
/// Factors with `π (M+1) w ≥ 1` stay active for larger `m`, so with `a` of
/// them `|ĝ(m)| ≤ B(M+1) ((M+1)/m)^a` and the tail is at most
/// `B(M+1) (1 + (M+1)/(a-1))`.
fn sinc_tail_bound<F: BumpScalar>(widths: &[F], m_max: usize) -> F {
    let pi = F::PI();
    let m1 = cast::<F>((m_max + 1) as f64);
    let mut active = 0usize;
    let mut bound = F::one();
    for &w in widths {
        let x = pi * m1 * w;
        if x >= F::one() {
            active += 1;
            bound = bound / x;
        }
    }
    if active < 2 {
        return F::infinity();
    }
    bound * (F::one() + m1 / cast((active - 1) as f64))
}

impl<F: BumpScalar> Bump<F> {
    pub fn eps(&self) -> F {
        self.eps
    }

    pub fn m_max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn widths(&self) -> &[F] {
        &self.widths
    }

    /// Half-width of the support.
    pub fn support_radius(&self) -> F {
        self.widths.iter().fold(F::zero(), |a, &w| a + w) / cast(2.0)
    }

    /// Least `C` with `|ĝ(m)| ≤ C exp(-√(ε|m|))` over the table.
    pub fn decay_constant(&self) -> F {
        self.decay_constant
    }

    /// Upper bound on `Σ_{m > m_max} |ĝ(m)|` (one side).
    pub fn tail_bound(&self) -> F {
        self.tail_bound
    }

    pub fn fourier(&self, m: i64) -> Result<F> {
        self.table
            .get(m.unsigned_abs() as usize)
            .copied()
            .ok_or(Error::OutOfTable {
                index: m,
                max: self.m_max(),
            })
    }

    pub fn coefficients(&self) -> &[F] {
        &self.table
    }

    /// Truncated Fourier synthesis at `t` with its truncation error bound.
    pub fn eval(&self, t: F) -> (F, F) {
        let two_pi_t = F::TAU() * t;
        let mut v = self.table[0];
        for (m, &c) in self.table.iter().enumerate().skip(1) {
            v = v + cast::<F>(2.0) * c * (two_pi_t * cast(m as f64)).cos();
        }
        (v, cast::<F>(2.0) * self.tail_bound)
    }

    /// `∫ g² = Σ_m |ĝ(m)|²` with a bound on the omitted part.
    pub fn l2_mass(&self) -> (F, F) {
        let two = cast::<F>(2.0);
        let inner = self.table.iter().skip(1).fold(F::zero(), |a, &c| a + c * c);
        let v = self.table[0] * self.table[0] + two * inner;
        // each omitted |ĝ(m)| is itself below the tail bound
        (v, two * self.tail_bound * self.tail_bound.min(F::one()))
    }

    /// `ĥ(m) = Π_i ĝ(m_i)` for the tensor bump on `T^n`.
    pub fn tensor_coefficient(&self, m_vec: &[i64]) -> Result<F> {
        m_vec.iter().try_fold(F::one(), |acc, &m| Ok(acc * self.fourier(m)?))
    }

    /// Upper bound on `Σ_{||m||_∞ > T} |ĥ(m)|` on `T^n`, from the actual
    /// coefficients inside the table and the tail bound beyond it.
    pub fn box_tail_mass(&self, n: u32, t: usize) -> Result<F> {
        if t > self.m_max() {
            return Err(Error::OutOfTable {
                index: t as i64,
                max: self.m_max(),
            });
        }
        let two = cast::<F>(2.0);
        let inside = self.table[1..=t].iter().fold(F::zero(), |a, &c| a + c.abs()) * two + self.table[0].abs();
        let outside = self.table[t + 1..].iter().fold(F::zero(), |a, &c| a + c.abs()) * two + two * self.tail_bound;
        let all = inside + outside;
        // A^n - B^n = (A - B) Σ A^i B^{n-1-i}
        let mut s = F::zero();
        for i in 0..n {
            s = s + all.powi(i as i32) * inside.powi((n - 1 - i) as i32);
        }
        Ok(outside * s)
    }

    /// CSV with columns `m, coefficient, decay_bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,coefficient,decay_bound\n");
        for (m, &c) in self.table.iter().enumerate() {
            let bound = self.decay_constant * (-(self.eps * cast(m as f64)).sqrt()).exp();
            out.push_str(&format!(
                "{m},{:e},{:e}\n",
                c.to_f64().unwrap_or(f64::NAN),
                bound.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }
}

/// `⌊(4/ε) ln²(1/ε)⌋`, for `0 < ε ≤ 1/e`.
pub fn truncation_threshold(eps: f64) -> Result<u64> {
    // tolerate 1/e rounded to the nearest double
    if !(eps > 0.0 && eps <= (-1.0f64).exp() * (1.0 + 1e-15)) {
        return Err(invalid("eps", format!("must lie in (0, 1/e], got {eps}")));
    }
    let l = (1.0 / eps).ln();
    Ok(((4.0 / eps) * l * l).floor() as u64)
}

/// Upper bound on `Σ_{m ≥ T} exp(-√(ε m))` via the integral test.
pub fn decay_tail_sum(eps: f64, t: u64) -> f64 {
    let s = (eps * t as f64).sqrt();
    (-s).exp() * (1.0 + 2.0 / eps * (s + 1.0))
}

/// `2n C Σ_{m ≥ T(ε)} exp(-√(ε m))` with `T(ε)` from [`truncation_threshold`].
pub fn decay_tail_bound(eps: f64, n: u32, c: f64) -> Result<f64> {
    let t = truncation_threshold(eps)?;
    Ok(2.0 * n as f64 * c * decay_tail_sum(eps, t))
}

/// Largest `ε₁` on a geometric grid such that the decay-certificate tail bound
/// stays below 1/2 for every grid point `ε ≤ ε₁`.
pub fn eps1(n: u32, c: f64) -> f64 {
    let mut eps = 1e-12;
    let mut last_ok = 0.0;
    let top = (-1.0f64).exp();
    while eps <= top {
        match decay_tail_bound(eps, n, c) {
            Ok(v) if v < 0.5 => last_ok = eps,
            _ => break,
        }
        eps *= 1.01;
    }
    last_ok
}
