//! Regularized quantum periods of the weighted hypersurfaces and classical
//! periods of their Laurent polynomial mirrors.
//!
//! Series are truncated modulo `t^N`: a series of order `N` stores the
//! coefficients of `t^0, …, t^{N-1}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{format_rational, serialize_rational, LaurentPoly, Rational};
use crate::weierstrass::{hypersurface_data, WeierstrassError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodError {
    #[error("Fano index must be positive (got {0})")]
    NonPositiveIndex(i64),
    #[error("truncation order must be at least {min} (got {got})")]
    OrderTooSmall { min: usize, got: usize },
    #[error("hypersurface data does not satisfy d1 = a2 + a3 + a4")]
    NotHoriVafa,
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Rational::zero(); order] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    /// Index of the first differing coefficient, comparing up to the smaller order.
    pub fn first_mismatch(&self, other: &PowerSeries) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanoWeightData {
    pub weights: Vec<u32>,
    pub degree: u32,
}

impl FanoWeightData {
    pub fn new(weights: Vec<u32>, degree: u32) -> Result<Self, PeriodError> {
        let data = FanoWeightData { weights, degree };
        let i = data.index();
        if i <= 0 {
            return Err(PeriodError::NonPositiveIndex(i));
        }
        Ok(data)
    }

    pub fn catalog(d: u8) -> Result<Self, PeriodError> {
        let (w, d1) = hypersurface_data(d)?;
        Self::new(w.to_vec(), d1)
    }

    pub fn index(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum::<i64>() - self.degree as i64
    }

    /// The single-constraint Hori–Vafa condition `d1 = a2 + … + a_m` with `a1 = 1`.
    pub fn hori_vafa_applicable(&self) -> bool {
        self.weights.first() == Some(&1) && self.weights[1..].iter().sum::<u32>() == self.degree
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn rat_factorial(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Unnormalized series `Σ_j (d1 j)! / Π (a_i j)! t^{ι j}` truncated at order `n`.
fn raw_series(data: &FanoWeightData, n: usize) -> Vec<Rational> {
    let iota = data.index() as usize;
    let mut out = vec![Rational::zero(); n];
    let mut j = 0usize;
    while iota * j < n {
        let num = factorial(data.degree as u64 * j as u64);
        let den = data.weights.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a as u64 * j as u64));
        out[iota * j] = Rational::new(num, den);
        j += 1;
    }
    out
}

/// `G_X = e^{-αt} Σ_j (d1 j)!/Π(a_i j)! t^{ιj}` with `α` making the `t¹` coefficient vanish.
pub fn quantum_period(data: &FanoWeightData, order: usize) -> Result<(PowerSeries, Rational), PeriodError> {
    if order < 2 {
        return Err(PeriodError::OrderTooSmall { min: 2, got: order });
    }
    let s = raw_series(data, order);
    let alpha = s[1].clone();
    let mut exp = Vec::with_capacity(order);
    let mut term = Rational::one();
    for k in 0..order {
        if k > 0 {
            term = term * (-alpha.clone()) / Rational::from_integer(BigInt::from(k));
        }
        exp.push(term.clone());
    }
    let coeffs = (0..order).map(|n| (0..=n).fold(Rational::zero(), |acc, k| acc + &s[k] * &exp[n - k])).collect();
    Ok((PowerSeries::new(coeffs), alpha))
}

/// `Σ p_n t^n ↦ Σ n! p_n t^n`.
pub fn regularize(s: &PowerSeries) -> PowerSeries {
    PowerSeries::new(s.coeffs.iter().enumerate().map(|(n, c)| c * rat_factorial(n as u64)).collect())
}

/// `(1 + y₃ + y₄)^{d1} / (y₃^{a3} y₄^{a4})` in two variables.
pub fn przyjalkowski_g(d: u8) -> Result<LaurentPoly, PeriodError> {
    let data = FanoWeightData::catalog(d)?;
    let base = &(&LaurentPoly::one(2) + &LaurentPoly::var(2, 0)) + &LaurentPoly::var(2, 1);
    let shift = [-(data.weights[2] as i32), -(data.weights[3] as i32)];
    Ok(base.pow(data.degree).mul_monomial(&shift))
}

/// `π_f(t) = Σ c₀(f^n) t^n` modulo `t^order`.
pub fn classical_period(f: &LaurentPoly, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order);
    let mut power = LaurentPoly::one(f.nvars());
    for n in 0..order {
        if n > 0 {
            power = &power * f;
        }
        coeffs.push(power.constant_term());
    }
    PowerSeries::new(coeffs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MirrorCheck {
    pub d: u8,
    pub order: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    pub regularized_quantum: PowerSeries,
    pub classical: PowerSeries,
    pub first_mismatch: Option<usize>,
}

impl MirrorCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares `Ĝ_{X_d}` with `π_{g−α}` coefficient by coefficient.
pub fn mirror_check(d: u8, order: usize) -> Result<MirrorCheck, PeriodError> {
    let data = FanoWeightData::catalog(d)?;
    if !data.hori_vafa_applicable() {
        return Err(PeriodError::NotHoriVafa);
    }
    let (g_x, alpha) = quantum_period(&data, order)?;
    let reg = regularize(&g_x);
    let g = przyjalkowski_g(d)?;
    let f = &g - &LaurentPoly::constant(2, alpha.clone());
    let classical = classical_period(&f, order);
    let first_mismatch = reg.first_mismatch(&classical);
    Ok(MirrorCheck { d, order, alpha, regularized_quantum: reg, classical, first_mismatch })
}
