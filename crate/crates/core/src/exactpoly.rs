//! Exact polynomial arithmetic over the rationals.
//!
//! Three sparse representations share the same coefficient type:
//! [`UniPoly`] (one tagged variable), [`BiPoly`] (λ and x) and
//! [`LaurentPoly`] (any number of variables, negative exponents allowed).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable mismatch: {0:?} vs {1:?}")]
    VariableMismatch(Var, Var),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("expected degree 2 in y, found {0}")]
    WrongYDegree(i64),
    #[error("negative exponent where a polynomial was expected")]
    NegativeExponent,
    #[error("leading coefficient must be nonzero")]
    ZeroLeading,
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n/d"` or `"n"`; the result is reduced with positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let err = || PolyError::Parse(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Always emits `"num/den"`, including integers (`"5/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// For `#[serde(serialize_with = "…")]` on rational fields: writes `"n/d"`.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators: scale through the decimal exponent
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Lambda,
    Mu,
    X,
    Y,
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::Lambda => "λ",
            Var::Mu => "μ",
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        };
        f.write_str(s)
    }
}

/// Sparse univariate polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    var: Var,
    coeffs: BTreeMap<u32, Rational>,
}

#[derive(Clone, Copy, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Pow(u32),
    Derivative,
    /// `p(q)`: substitute the second operand for the variable of the first.
    Compose,
}

/// Checked entry point used by the CLI and bindings; the operator impls
/// panic on a variable mismatch instead.
pub fn arith(p: &UniPoly, q: &UniPoly, op: ArithOp) -> Result<UniPoly, PolyError> {
    match op {
        ArithOp::Pow(e) => Ok(p.pow(e)),
        ArithOp::Derivative => Ok(p.derivative()),
        ArithOp::Compose => Ok(p.compose(q)),
        _ => {
            if p.var != q.var {
                return Err(PolyError::VariableMismatch(p.var, q.var));
            }
            Ok(match op {
                ArithOp::Add => p + q,
                ArithOp::Sub => p - q,
                _ => p * q,
            })
        }
    }
}

impl UniPoly {
    pub fn zero(var: Var) -> Self {
        UniPoly { var, coeffs: BTreeMap::new() }
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::monomial(var, c, 0)
    }

    pub fn monomial(var: Var, c: Rational, e: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        UniPoly { var, coeffs }
    }

    /// The variable itself.
    pub fn gen(var: Var) -> Self {
        Self::monomial(var, Rational::one(), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(var: Var, terms: I) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from `(exponent, num, den)` triples.
    pub fn from_fracs(var: Var, terms: &[(u32, i64, i64)]) -> Self {
        Self::from_terms(var, terms.iter().map(|&(e, n, d)| (e, qf(n, d))))
    }

    fn add_term(&mut self, e: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: u32) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.values().next_back().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        UniPoly { var: self.var, coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.var, Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(self.var, self.coeffs.iter().filter(|(e, _)| **e > 0).map(|(e, c)| (e - 1, c * q(*e as i64))))
    }

    /// `self(q)`; the result lives in the variable of `q`.
    pub fn compose(&self, q: &UniPoly) -> Self {
        // Horner over the dense exponent range
        let mut acc = Self::zero(q.var);
        let Some(deg) = self.degree() else { return acc };
        for e in (0..=deg).rev() {
            acc = &acc * q;
            acc.add_term(0, self.coeff(e));
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let Some(deg) = self.degree() else { return Rational::zero() };
        let mut acc = Rational::zero();
        for e in (0..=deg).rev() {
            acc = acc * x + self.coeff(e);
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let Some(deg) = self.degree() else { return Complex64::new(0.0, 0.0) };
        let mut acc = Complex64::new(0.0, 0.0);
        for e in (0..=deg).rev() {
            acc = acc * z + rational_to_f64(&self.coeff(e));
        }
        acc
    }

    /// Dense `f64` coefficients, lowest degree first.
    pub fn to_f64_dense(&self) -> Vec<f64> {
        match self.degree() {
            None => vec![],
            Some(d) => (0..=d).map(|e| rational_to_f64(&self.coeff(e))).collect(),
        }
    }

    /// `self(var + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        let lin = Self::from_terms(self.var, [(1, Rational::one()), (0, c.clone())]);
        self.compose(&lin)
    }

    /// `μ^n · self(1/μ)` in the variable `var`; requires `n ≥ deg`.
    pub fn reverse(&self, n: u32, var: Var) -> Self {
        Self::from_terms(var, self.coeffs.iter().map(|(e, c)| (n - e, c.clone())))
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let lc = d.leading_coeff();
        let mut quo = Self::zero(self.var);
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff() / &lc;
            let t = Self::monomial(self.var, c, rd - dd);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Ok((quo, rem))
    }

    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly, PolyError> {
        let (quo, rem) = self.div_rem(d)?;
        if rem.is_zero() {
            Ok(quo)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Largest `k` with `(var - c)^k | self`.
    pub fn valuation_at(&self, c: &Rational) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let lin = Self::from_terms(self.var, [(1, Rational::one()), (0, -c.clone())]);
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (quo, rem) = cur.div_rem(&lin)?;
            if !rem.is_zero() {
                return Ok(k);
            }
            cur = quo;
            k += 1;
        }
    }

    /// Valuation at the origin: smallest stored exponent.
    pub fn order_at_zero(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    /// Yun's algorithm. Factors are monic, squarefree and pairwise coprime;
    /// their product with multiplicities equals `self` up to the leading
    /// coefficient.
    pub fn squarefree_factorization(&self) -> Result<Vec<(UniPoly, u32)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return Ok(out);
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0)?;
        let mut c = fp.exact_div(&a0)?;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = b.exact_div(&a)?;
            c = d.exact_div(&a)?;
            d = &c - &b.derivative();
            i += 1;
        }
        Ok(out)
    }

    /// Separable means `gcd(p, p')` is constant.
    pub fn is_separable(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Integer coefficients of the primitive integer multiple, lowest first,
    /// normalized to a positive leading coefficient.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let Some(deg) = self.degree() else { return vec![] };
        let mut lcm = BigInt::one();
        for c in self.coeffs.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> =
            (0..=deg).map(|e| (self.coeff(e) * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        let sign = if ints[deg as usize].is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in ints.iter_mut() {
            *c = &*c / &g * &sign;
        }
        ints
    }

    pub fn to_json_terms(&self) -> Vec<(u32, String)> {
        self.coeffs.iter().map(|(e, c)| (*e, format_rational(c))).collect()
    }

    pub fn from_json_terms(var: Var, terms: &[(u32, String)]) -> Result<Self, PolyError> {
        let mut p = Self::zero(var);
        for (e, s) in terms {
            p.add_term(*e, parse_rational(s)?);
        }
        Ok(p)
    }
}

fn fmt_coeff_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Rational, mono: &str) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    if mono.is_empty() {
        write!(f, "{}", a)
    } else if a.is_one() {
        f.write_str(mono)
    } else {
        write!(f, "{}*{}", a, mono)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let mono = match e {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, e),
            };
            fmt_coeff_term(f, i == 0, c, &mono)?;
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = UniPoly::zero(self.var);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(&-Rational::one())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

/// JSON carries no variable tag; deserialized polynomials are in λ.
impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<(u32, String)> = Vec::deserialize(d)?;
        UniPoly::from_json_terms(Var::Lambda, &terms).map_err(serde::de::Error::custom)
    }
}

/// Polynomial in (λ, x); keys are `(exp_λ, exp_x)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn from_fracs(terms: &[((u32, u32), i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, n, d)| (e, qf(n, d))))
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, el: u32, ex: u32) -> Rational {
        self.coeffs.get(&(el, ex)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_terms([((0, 0), Rational::one())]);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| k.1).max()
    }

    /// Coefficients of powers of x, as polynomials in λ.
    pub fn x_coeffs(&self) -> BTreeMap<u32, UniPoly> {
        let mut out: BTreeMap<u32, UniPoly> = BTreeMap::new();
        for ((el, ex), c) in &self.coeffs {
            let slot = out.entry(*ex).or_insert_with(|| UniPoly::zero(Var::Lambda));
            *slot = &*slot + &UniPoly::monomial(Var::Lambda, c.clone(), *el);
        }
        out
    }

    /// Exact division by `x^k`.
    pub fn div_x_pow(&self, k: u32) -> Result<Self, PolyError> {
        if self.coeffs.keys().any(|(_, ex)| *ex < k) {
            return Err(PolyError::InexactDivision);
        }
        Ok(Self::from_terms(self.coeffs.iter().map(|((el, ex), c)| ((*el, ex - k), c.clone()))))
    }

    pub fn to_json_terms(&self) -> Vec<([u32; 2], String)> {
        self.coeffs.iter().map(|((a, b), c)| ([*a, *b], format_rational(c))).collect()
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((a1, b1), c1) in &self.coeffs {
            for ((a2, b2), c2) in &rhs.coeffs {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((el, ex), c)) in self.coeffs.iter().rev().enumerate() {
            let mut parts = Vec::new();
            for (v, e) in [("λ", el), ("x", ex)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            fmt_coeff_term(f, i == 0, c, &parts.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<([u32; 2], String)> = Vec::deserialize(d)?;
        let mut p = BiPoly::zero();
        for (e, s) in terms {
            p.add_term((e[0], e[1]), parse_rational(&s).map_err(serde::de::Error::custom)?);
        }
        Ok(p)
    }
}

/// Sparse Laurent polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    coeffs: BTreeMap<Vec<i32>, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn monomial(c: Rational, exps: Vec<i32>) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The i-th variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, Rational)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: &[i32]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.nvars, self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, PolyError> {
        if self.nvars != rhs.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, rhs.nvars));
        }
        Ok(self + rhs)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        if self.nvars != rhs.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, rhs.nvars));
        }
        Ok(self * rhs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total degree of the largest monomial (sum of exponents).
    pub fn max_total_degree(&self) -> Option<i32> {
        self.coeffs.keys().map(|e| e.iter().sum()).max()
    }

    /// Maximal exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.coeffs.keys().map(|e| e[i]).max()
    }

    pub fn min_degree_in(&self, i: usize) -> Option<i32> {
        self.coeffs.keys().map(|e| e[i]).min()
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn mul_monomial(&self, shift: &[i32]) -> Self {
        Self::from_terms(
            self.nvars,
            self.coeffs.iter().map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())),
        )
    }

    /// Monomial substitution `y^e ↦ y^(M e)` for an integer matrix `M`
    /// (rows index new variables).
    pub fn monomial_substitution(&self, m: &[Vec<i32>]) -> Self {
        let n = m.len();
        Self::from_terms(
            n,
            self.coeffs.iter().map(|(e, c)| {
                let ne: Vec<i32> = m.iter().map(|row| row.iter().zip(e).map(|(a, b)| a * b).sum()).collect();
                (ne, c.clone())
            }),
        )
    }

    pub fn to_json_terms(&self) -> Vec<(Vec<i32>, String)> {
        self.coeffs.iter().map(|(e, c)| (e.clone(), format_rational(c))).collect()
    }

    pub fn from_json_terms(nvars: usize, terms: &[(Vec<i32>, String)]) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        for (e, s) in terms {
            if e.len() != nvars {
                return Err(PolyError::ArityMismatch(nvars, e.len()));
            }
            p.add_term(e.clone(), parse_rational(s)?);
        }
        Ok(p)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { nvars: self.nvars, coeffs: acc }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(j, k)| if *k == 1 { format!("y{j}") } else { format!("y{j}^{k}") })
                .collect();
            fmt_coeff_term(f, i == 0, c, &parts.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

/// `4a³ + 27b²`.
pub fn disc_cubic(a: &UniPoly, b: &UniPoly) -> UniPoly {
    &a.pow(3).scale(&q(4)) + &b.pow(2).scale(&q(27))
}

/// `B² − 4AC` for `q = A y² + B y + C`, where `q` is a polynomial in
/// (λ, x, y) stored as a three-variable [`LaurentPoly`].
pub fn disc_quadratic_in_y(qy: &LaurentPoly) -> Result<BiPoly, PolyError> {
    if qy.nvars() != 3 {
        return Err(PolyError::ArityMismatch(3, qy.nvars()));
    }
    if qy.terms().any(|(e, _)| e.iter().any(|k| *k < 0)) {
        return Err(PolyError::NegativeExponent);
    }
    let ydeg = qy.degree_in(2).unwrap_or(-1);
    if ydeg != 2 {
        return Err(PolyError::WrongYDegree(ydeg as i64));
    }
    let mut parts = [BiPoly::zero(), BiPoly::zero(), BiPoly::zero()];
    for (e, c) in qy.terms() {
        parts[e[2] as usize].add_term((e[0] as u32, e[1] as u32), c.clone());
    }
    let [c, b, a] = parts;
    Ok(&(&b * &b) - &(&a * &c).scale(&q(4)))
}

/// Brings `y² = A x³ + B x² + C x + D` to `Y² = X³ + a X + b`.
///
/// Uses `X = A x`, `Y = A y` (so the cubic becomes monic after multiplying
/// by `A²`) followed by the shift `X ↦ X − B/3`:
/// `a = AC − B²/3`, `b = A²D − ABC/3 + 2B³/27`.
pub fn depress_cubic(a3: &UniPoly, a2: &UniPoly, a1: &UniPoly, a0: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
    if a3.is_zero() {
        return Err(PolyError::ZeroLeading);
    }
    let ac = a3 * a1;
    let bb = a2 * a2;
    let a = &ac - &bb.scale(&qf(1, 3));
    let b = &(&(&(a3 * a3) * a0) - &(&ac * a2).scale(&qf(1, 3))) + &(&bb * a2).scale(&qf(2, 27));
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(terms: &[(u32, i64, i64)]) -> UniPoly {
        UniPoly::from_fracs(Var::Lambda, terms)
    }

    #[test]
    fn difference_of_squares() {
        let p = lam(&[(1, 1, 1), (0, 1, 1)]);
        let m = lam(&[(1, 1, 1), (0, -1, 1)]);
        assert_eq!(&p * &m, lam(&[(2, 1, 1), (0, -1, 1)]));
    }

    #[test]
    fn power_rule() {
        assert_eq!(lam(&[(4, 1, 3)]).derivative(), lam(&[(3, 4, 3)]));
    }

    #[test]
    fn arith_rejects_mixed_variables() {
        let p = UniPoly::gen(Var::Lambda);
        let m = UniPoly::gen(Var::Mu);
        assert_eq!(arith(&p, &m, ArithOp::Add), Err(PolyError::VariableMismatch(Var::Lambda, Var::Mu)));
        // composition legitimately changes variable
        assert_eq!(arith(&p, &m, ArithOp::Compose).unwrap(), m);
    }

    #[test]
    fn valuations() {
        assert_eq!(lam(&[(4, 1, 1)]).valuation_at(&q(0)).unwrap(), 4);
        let b3 = lam(&[(6, 2, 27), (5, -8, 3), (4, 16, 1)]);
        assert_eq!(b3.valuation_at(&q(0)).unwrap(), 4);
        assert_eq!(lam(&[(2, 1, 1), (0, -1, 1)]).valuation_at(&q(1)).unwrap(), 1);
        assert_eq!(UniPoly::zero(Var::Lambda).valuation_at(&q(0)), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn yun_examples() {
        let l = UniPoly::gen(Var::Lambda);
        let lm27 = lam(&[(1, 1, 1), (0, -27, 1)]);
        let p = &l.pow(8) * &lm27;
        assert_eq!(p.squarefree_factorization().unwrap(), vec![(lm27.clone(), 1), (l.clone(), 8)]);
        let sq = lam(&[(2, 1, 1), (0, 1, 1)]);
        assert_eq!(sq.squarefree_factorization().unwrap(), vec![(sq.clone(), 1)]);
        let lm1 = lam(&[(1, 1, 1), (0, -1, 1)]);
        let lm2 = lam(&[(1, 1, 1), (0, -2, 1)]);
        let p = &lm1.pow(2) * &lm2;
        assert_eq!(p.squarefree_factorization().unwrap(), vec![(lm2, 1), (lm1, 2)]);
    }

    #[test]
    fn disc_cubic_trivial() {
        assert_eq!(disc_cubic(&UniPoly::zero(Var::Lambda), &lam(&[(0, 1, 1)])), lam(&[(0, 27, 1)]));
    }

    #[test]
    fn quadratic_disc_simple() {
        // y² − c with c = λ
        let qy = LaurentPoly::from_terms(3, [(vec![0, 0, 2], q(1)), (vec![1, 0, 0], q(-1))]);
        let d = disc_quadratic_in_y(&qy).unwrap();
        assert_eq!(d, BiPoly::from_fracs(&[((1, 0), 4, 1)]));
        let lin = LaurentPoly::from_terms(3, [(vec![0, 0, 1], q(1))]);
        assert_eq!(disc_quadratic_in_y(&lin), Err(PolyError::WrongYDegree(1)));
    }

    #[test]
    fn depress_examples() {
        let c = |n: i64| UniPoly::constant(Var::Lambda, q(n));
        assert_eq!(depress_cubic(&c(1), &c(0), &c(5), &c(7)).unwrap(), (c(5), c(7)));
        assert_eq!(depress_cubic(&c(1), &c(3), &c(0), &c(0)).unwrap(), (c(-3), c(2)));
        assert!(depress_cubic(&c(0), &c(1), &c(0), &c(0)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-6/4").unwrap(), qf(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&qf(4, -6)), "-2/3");
    }

    #[test]
    fn json_round_trip() {
        let p = lam(&[(6, 2, 27), (5, -8, 3), (4, 16, 1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[[4,"16/1"],[5,"-8/3"],[6,"2/27"]]"#);
        let back: UniPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn primitive_integers() {
        let p = lam(&[(2, 1, 2), (0, -1, 3)]);
        let ints = p.primitive_integer_coeffs();
        assert_eq!(ints, vec![BigInt::from(-2), BigInt::zero(), BigInt::from(3)]);
    }
}
