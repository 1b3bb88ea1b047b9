//! Weierstrass forms `y² = x³ + a(λ)x + b(λ)`, global minimality and Kodaira
//! fiber types over P¹, plus the derivation of the catalog forms from the
//! Hori–Vafa fiber equation.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{
    depress_cubic, disc_cubic, disc_quadratic_in_y, format_rational, q, qf, BiPoly, LaurentPoly, PolyError, Rational,
    UniPoly, Var,
};
use crate::pathnum::{all_roots, CPoly, PathError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeierstrassError {
    #[error("degree must be 1, 2 or 3 (got {0})")]
    InvalidDegree(u8),
    #[error("perturbation parameter must be nonzero")]
    ZeroEpsilon,
    #[error("discriminant vanishes identically")]
    ZeroDiscriminant,
    #[error("degree bounds deg a ≤ 4, deg b ≤ 6 violated")]
    DegreeBound,
    #[error("irrational multiple root of the discriminant with undecidable fiber type: {0}")]
    UndecidableIrrational(String),
    #[error("form is not globally minimal: {0}")]
    NotMinimal(MinimalityViolation),
    #[error("Euler numbers sum to {0}, expected 12")]
    EulerSum(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeierstrassForm {
    pub a: UniPoly,
    pub b: UniPoly,
}

impl WeierstrassForm {
    pub fn new(a: UniPoly, b: UniPoly) -> Self {
        WeierstrassForm { a, b }
    }

    pub fn discriminant(&self) -> UniPoly {
        disc_cubic(&self.a, &self.b)
    }

    /// Cubic `x³ + a(λ)x + b(λ)` at a complex λ.
    pub fn cubic_at(&self, lambda: Complex64) -> CPoly {
        let z = Complex64::new(0.0, 0.0);
        CPoly::new(vec![self.b.eval_c64(lambda), self.a.eval_c64(lambda), z, Complex64::new(1.0, 0.0)])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Variant {
    Exact,
    Perturbed(Rational),
}

fn check_d(d: u8) -> Result<(), WeierstrassError> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(WeierstrassError::InvalidDegree(d))
    }
}

/// The three catalog surfaces; the perturbed variant adds `ε` to `a`.
pub fn catalog(d: u8, variant: &Variant) -> Result<WeierstrassForm, WeierstrassError> {
    check_d(d)?;
    let l = Var::Lambda;
    let (mut a, b) = match d {
        1 => (UniPoly::from_fracs(l, &[(4, -1, 3)]), UniPoly::from_fracs(l, &[(6, 2, 27), (5, -64, 1)])),
        2 => (UniPoly::from_fracs(l, &[(4, -1, 3), (3, 16, 1)]), UniPoly::from_fracs(l, &[(6, 2, 27), (5, -16, 3)])),
        _ => (
            UniPoly::from_fracs(l, &[(4, -1, 3), (3, 8, 1)]),
            UniPoly::from_fracs(l, &[(6, 2, 27), (5, -8, 3), (4, 16, 1)]),
        ),
    };
    if let Variant::Perturbed(eps) = variant {
        if eps.is_zero() {
            return Err(WeierstrassError::ZeroEpsilon);
        }
        a = &a + &UniPoly::constant(l, eps.clone());
    }
    Ok(WeierstrassForm { a, b })
}

/// Default perturbation `ε = 1/100`.
pub fn default_epsilon() -> Rational {
    qf(1, 100)
}

/// Weights `(a1..a4)` and degree `d1` of the weighted hypersurface.
pub fn hypersurface_data(d: u8) -> Result<([u32; 4], u32), WeierstrassError> {
    check_d(d)?;
    Ok(match d {
        1 => ([1, 1, 2, 3], 6),
        2 => ([1, 1, 1, 2], 4),
        _ => ([1, 1, 1, 1], 3),
    })
}

/// `λ₀ = d1^d1 / (a3^a3 a4^a4)`.
pub fn lambda0(d: u8) -> Result<Rational, WeierstrassError> {
    let (w, d1) = hypersurface_data(d)?;
    let pw = |b: u32, e: u32| Rational::from_integer(num_bigint::BigInt::from(b).pow(e));
    Ok(pw(d1, d1) / (pw(w[2], w[2]) * pw(w[3], w[3])))
}

/// `λ(1 − x/y − y)(x/y)^{a3} y^{a4} − 1` in variables (λ, x, y), multiplied
/// by the power of `y` that clears negative exponents.
pub fn hv_fiber_quadratic(d: u8) -> Result<LaurentPoly, WeierstrassError> {
    let (w, _) = hypersurface_data(d)?;
    let (a3, a4) = (w[2] as i32, w[3] as i32);
    let one = Rational::one();
    let factor = LaurentPoly::from_terms(
        3,
        [(vec![0, 0, 0], one.clone()), (vec![0, 1, -1], -one.clone()), (vec![0, 0, 1], -one.clone())],
    );
    let mono = LaurentPoly::monomial(one.clone(), vec![1, a3, a4 - a3]);
    let f = &(&factor * &mono) - &LaurentPoly::one(3);
    let low = f.min_degree_in(2).unwrap_or(0).min(0);
    Ok(f.mul_monomial(&[0, 0, -low]))
}

/// The y²-discriminant cubic in x (divided by x² for d = 1).
pub fn hv_discriminant(d: u8) -> Result<BiPoly, WeierstrassError> {
    let disc = disc_quadratic_in_y(&hv_fiber_quadratic(d)?)?;
    Ok(if d == 1 { disc.div_x_pow(2)? } else { disc })
}

pub fn hv_to_weierstrass(d: u8) -> Result<WeierstrassForm, WeierstrassError> {
    let disc = hv_discriminant(d)?;
    let xc = disc.x_coeffs();
    let get = |k: u32| xc.get(&k).cloned().unwrap_or_else(|| UniPoly::zero(Var::Lambda));
    let (a, b) = depress_cubic(&get(3), &get(2), &get(1), &get(0))?;
    Ok(WeierstrassForm { a, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    Smooth,
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
    NonMinimal,
}

impl KodairaType {
    /// Topological Euler number of the singular fiber.
    pub fn euler_number(&self) -> Option<u32> {
        Some(match self {
            KodairaType::Smooth => 0,
            KodairaType::I(n) => *n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
            KodairaType::NonMinimal => return None,
        })
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::Smooth => f.write_str("smooth"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IStar(n) => write!(f, "I*{n}"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
            KodairaType::NonMinimal => f.write_str("non-minimal"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Valuation with the zero polynomial mapped to `u32::MAX`.
fn val(p: &UniPoly, c: &Rational) -> u32 {
    if p.is_zero() {
        u32::MAX
    } else {
        p.valuation_at(c).expect("nonzero")
    }
}

/// Characteristic-zero Tate table on `(v(a), v(b), v(Δ))`.
pub fn classify_valuations(va: u32, vb: u32, vd: u32) -> KodairaType {
    use KodairaType::*;
    if vd == 0 {
        return Smooth;
    }
    if va == 0 {
        return I(vd);
    }
    if va >= 4 && vb >= 6 {
        return NonMinimal;
    }
    if vb == 1 {
        return II;
    }
    if va == 1 {
        return III;
    }
    if vb == 2 {
        return IV;
    }
    if vb >= 3 && va >= 2 && vd == 6 {
        return IStar(0);
    }
    if va == 2 && vb == 3 && vd > 6 {
        return IStar(vd - 6);
    }
    if vb == 4 {
        return IVStar;
    }
    if va == 3 {
        return IIIStar;
    }
    if vb == 5 {
        return IIStar;
    }
    NonMinimal
}

pub fn classify_fiber_at(w: &WeierstrassForm, c: &Rational) -> KodairaType {
    let disc = w.discriminant();
    classify_valuations(val(&w.a, c), val(&w.b, c), val(&disc, c))
}

/// `(μ⁴ a(1/μ), μ⁶ b(1/μ))`.
pub fn chart_at_infinity(w: &WeierstrassForm) -> Result<WeierstrassForm, WeierstrassError> {
    if w.a.degree().unwrap_or(0) > 4 || w.b.degree().unwrap_or(0) > 6 {
        return Err(WeierstrassError::DegreeBound);
    }
    Ok(WeierstrassForm { a: w.a.reverse(4, Var::Mu), b: w.b.reverse(6, Var::Mu) })
}

pub fn fiber_at_infinity(w: &WeierstrassForm) -> Result<KodairaType, WeierstrassError> {
    Ok(classify_fiber_at(&chart_at_infinity(w)?, &Rational::zero()))
}

/// Rational roots of a nonzero polynomial. Numerical roots are rounded to
/// the grid `1/L` (`L` the leading coefficient of the primitive integer
/// multiple, which every rational root's denominator divides) and each
/// candidate is confirmed by exact evaluation.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<Rational>, WeierstrassError> {
    let mut out: Vec<Rational> = Vec::new();
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let mut rest = p.clone();
    if let Some(k) = rest.order_at_zero() {
        if k > 0 {
            out.push(Rational::zero());
            rest = rest.exact_div(&UniPoly::monomial(p.var(), Rational::one(), k))?;
        }
    }
    if rest.is_constant() {
        return Ok(out);
    }
    let ints = rest.primitive_integer_coeffs();
    let lead = Rational::from_integer(ints.last().unwrap().clone());
    let sqf: UniPoly = rest
        .squarefree_factorization()?
        .into_iter()
        .fold(UniPoly::constant(p.var(), Rational::one()), |acc, (f, _)| &acc * &f);
    let cp = CPoly::from_real(&sqf.to_f64_dense());
    let roots = all_roots(&cp, 1e-6)?;
    for z in roots.roots {
        if z.im.abs() > 1e-6 * (1.0 + z.norm()) {
            continue;
        }
        let scaled = z.re * crate::exactpoly::rational_to_f64(&lead);
        let k = scaled.round() as i64;
        for cand in [k, k - 1, k + 1] {
            let c = q(cand) / &lead;
            if !out.contains(&c) && rest.eval(&c).is_zero() {
                out.push(c);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalityViolation {
    DegreeA(u32),
    DegreeB(u32),
    /// `Δ = c·(λ − r)¹²`.
    TwelfthPower(Rational),
    /// Constant Δ: all twelve zeros of the homogenized discriminant at ∞.
    TwelfthPowerAtInfinity,
    NonMinimalAt(Rational),
}

impl fmt::Display for MinimalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalityViolation::DegreeA(d) => write!(f, "deg a = {d} > 4"),
            MinimalityViolation::DegreeB(d) => write!(f, "deg b = {d} > 6"),
            MinimalityViolation::TwelfthPower(r) => write!(f, "Δ is a constant times (λ − {r})^12"),
            MinimalityViolation::TwelfthPowerAtInfinity => f.write_str("Δ is constant (twelfth power at ∞)"),
            MinimalityViolation::NonMinimalAt(c) => write!(f, "v(a) ≥ 4 and v(b) ≥ 6 at λ = {c}"),
        }
    }
}

/// `Ok(None)` when minimal, `Ok(Some(v))` with the first violated condition.
pub fn is_globally_minimal(w: &WeierstrassForm) -> Result<Option<MinimalityViolation>, WeierstrassError> {
    let disc = w.discriminant();
    if disc.is_zero() {
        return Err(WeierstrassError::ZeroDiscriminant);
    }
    if let Some(da) = w.a.degree() {
        if da > 4 {
            return Ok(Some(MinimalityViolation::DegreeA(da)));
        }
    }
    if let Some(db) = w.b.degree() {
        if db > 6 {
            return Ok(Some(MinimalityViolation::DegreeB(db)));
        }
    }
    if disc.is_constant() {
        return Ok(Some(MinimalityViolation::TwelfthPowerAtInfinity));
    }
    let sqf = disc.squarefree_factorization()?;
    if sqf.len() == 1 && sqf[0].1 == 12 && sqf[0].0.degree() == Some(1) {
        let root = -sqf[0].0.coeff(0);
        return Ok(Some(MinimalityViolation::TwelfthPower(root)));
    }
    // places where v(a) ≥ 4 and v(b) ≥ 6 are roots of gcd(a, b) of high multiplicity
    let g = if w.a.is_zero() {
        w.b.clone()
    } else if w.b.is_zero() {
        w.a.clone()
    } else {
        w.a.gcd(&w.b)
    };
    if !g.is_constant() {
        for c in rational_roots(&g)? {
            if val(&w.a, &c) >= 4 && val(&w.b, &c) >= 6 {
                return Ok(Some(MinimalityViolation::NonMinimalAt(c)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Rational(Rational),
    /// All roots of an irreducible-or-not squarefree factor without rational roots.
    RootsOf(UniPoly),
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Place::Rational(r) => s.serialize_str(&format_rational(r)),
            Place::RootsOf(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("roots_of", p)?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteFiber {
    pub place: Place,
    #[serde(rename = "type")]
    pub kodaira: KodairaType,
    /// Number of places represented (the degree of the factor for `RootsOf`).
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberConfiguration {
    pub finite: Vec<FiniteFiber>,
    pub infinity: KodairaType,
    pub euler_sum: u32,
}

impl FiberConfiguration {
    pub fn finite_count(&self) -> u32 {
        self.finite.iter().filter(|f| f.kodaira != KodairaType::Smooth).map(|f| f.count).sum()
    }

    /// The type at a rational place, if listed.
    pub fn at(&self, c: &Rational) -> Option<KodairaType> {
        self.finite.iter().find(|f| f.place == Place::Rational(c.clone())).map(|f| f.kodaira)
    }

    /// Compact description such as `0: IV*, 27: I1, ∞: I3`.
    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .finite
            .iter()
            .map(|f| match &f.place {
                Place::Rational(r) if r.denom().is_one() => format!("{}: {}", r.numer(), f.kodaira),
                Place::Rational(r) => format!("{}: {}", r, f.kodaira),
                Place::RootsOf(p) => {
                    format!("{} × {} (roots of deg-{} factor)", f.count, f.kodaira, p.degree().unwrap_or(0))
                }
            })
            .collect();
        parts.push(format!("∞: {}", self.infinity));
        parts.join(", ")
    }
}

pub fn fiber_configuration(w: &WeierstrassForm) -> Result<FiberConfiguration, WeierstrassError> {
    if let Some(v) = is_globally_minimal(w)? {
        return Err(WeierstrassError::NotMinimal(v));
    }
    let disc = w.discriminant();
    let mut rational = Vec::new();
    let mut grouped = Vec::new();
    for (f, m) in disc.squarefree_factorization()? {
        let roots = rational_roots(&f)?;
        let mut rest = f.clone();
        for c in &roots {
            rest = rest.exact_div(&UniPoly::from_terms(Var::Lambda, [(1, Rational::one()), (0, -c.clone())]))?;
            rational.push(FiniteFiber {
                place: Place::Rational(c.clone()),
                kodaira: classify_fiber_at(w, c),
                count: 1,
            });
        }
        if !rest.is_constant() {
            let ga = if w.a.is_zero() { rest.clone() } else { rest.gcd(&w.a) };
            let gb = if w.b.is_zero() { rest.clone() } else { rest.gcd(&w.b) };
            if !ga.is_constant() || !gb.is_constant() {
                return Err(WeierstrassError::UndecidableIrrational(rest.to_string()));
            }
            let n = rest.degree().unwrap();
            grouped.push(FiniteFiber { place: Place::RootsOf(rest), kodaira: KodairaType::I(m), count: n });
        }
    }
    rational.sort_by(|x, y| match (&x.place, &y.place) {
        (Place::Rational(a), Place::Rational(b)) => a.cmp(b),
        _ => std::cmp::Ordering::Equal,
    });
    rational.extend(grouped);
    let infinity = fiber_at_infinity(w)?;
    let mut euler = 0;
    for f in &rational {
        euler += f.count * f.kodaira.euler_number().ok_or(WeierstrassError::EulerSum(u32::MAX))?;
    }
    euler += infinity.euler_number().ok_or(WeierstrassError::EulerSum(u32::MAX))?;
    if euler != 12 {
        return Err(WeierstrassError::EulerSum(euler));
    }
    Ok(FiberConfiguration { finite: rational, infinity, euler_sum: euler })
}

#[cfg(test)]
mod tests {
    use super::*;
    use KodairaType::*;

    #[test]
    fn catalog_coefficients() {
        let w = catalog(1, &Variant::Exact).unwrap();
        assert_eq!(w.a, UniPoly::from_fracs(Var::Lambda, &[(4, -1, 3)]));
        assert_eq!(w.b, UniPoly::from_fracs(Var::Lambda, &[(6, 2, 27), (5, -64, 1)]));
        let w3 = catalog(3, &Variant::Perturbed(qf(1, 100))).unwrap();
        assert_eq!(w3.a.coeff(0), qf(1, 100));
        assert_eq!(w3.b, catalog(3, &Variant::Exact).unwrap().b);
        assert!(catalog(4, &Variant::Exact).is_err());
        assert!(catalog(2, &Variant::Perturbed(q(0))).is_err());
    }

    #[test]
    fn lambda0_values() {
        assert_eq!(lambda0(1).unwrap(), q(432));
        assert_eq!(lambda0(2).unwrap(), q(64));
        assert_eq!(lambda0(3).unwrap(), q(27));
    }

    #[test]
    fn tate_table_rows() {
        let w1 = catalog(1, &Variant::Exact).unwrap();
        let w3 = catalog(3, &Variant::Exact).unwrap();
        assert_eq!(classify_fiber_at(&w1, &q(0)), IIStar);
        assert_eq!(classify_fiber_at(&w3, &q(27)), I(1));
        assert_eq!(classify_fiber_at(&w3, &q(0)), IVStar);
        assert_eq!(classify_fiber_at(&w3, &q(5)), Smooth);
        assert_eq!(classify_valuations(2, 3, 8), IStar(2));
        assert_eq!(classify_valuations(3, 3, 6), IStar(0));
        assert_eq!(classify_valuations(4, 6, 12), NonMinimal);
        assert_eq!(classify_valuations(1, 1, 2), II);
        assert_eq!(classify_valuations(1, 2, 3), III);
        assert_eq!(classify_valuations(2, 2, 4), IV);
    }

    #[test]
    fn infinity_types() {
        assert_eq!(fiber_at_infinity(&catalog(3, &Variant::Exact).unwrap()).unwrap(), I(3));
        assert_eq!(fiber_at_infinity(&catalog(1, &Variant::Exact).unwrap()).unwrap(), I(1));
        assert_eq!(fiber_at_infinity(&catalog(2, &Variant::Perturbed(qf(1, 100))).unwrap()).unwrap(), I(2));
    }

    #[test]
    fn minimality_witnesses() {
        assert_eq!(is_globally_minimal(&catalog(1, &Variant::Exact).unwrap()).unwrap(), None);
        let l = Var::Lambda;
        let bad = WeierstrassForm::new(UniPoly::from_fracs(l, &[(5, 1, 1)]), UniPoly::zero(l));
        assert_eq!(is_globally_minimal(&bad).unwrap(), Some(MinimalityViolation::DegreeA(5)));
        let lm1 = UniPoly::from_fracs(l, &[(1, 1, 1), (0, -1, 1)]);
        let twelfth = WeierstrassForm::new(UniPoly::zero(l), lm1.pow(6));
        assert_eq!(is_globally_minimal(&twelfth).unwrap(), Some(MinimalityViolation::TwelfthPower(q(1))));
    }

    #[test]
    fn rational_roots_of_mixed_factor() {
        let l = Var::Lambda;
        // (3λ − 2)(λ² + 1)(λ + 5)
        let p = &(&UniPoly::from_fracs(l, &[(1, 3, 1), (0, -2, 1)]) * &UniPoly::from_fracs(l, &[(2, 1, 1), (0, 1, 1)]))
            * &UniPoly::from_fracs(l, &[(1, 1, 1), (0, 5, 1)]);
        assert_eq!(rational_roots(&p).unwrap(), vec![q(-5), qf(2, 3)]);
    }

    #[test]
    fn hv_intermediates() {
        let d3 = hv_discriminant(3).unwrap();
        // −4λ²x³ + (−λx + 1)² = −4λ²x³ + λ²x² − 2λx + 1
        assert_eq!(d3, BiPoly::from_fracs(&[((2, 3), -4, 1), ((2, 2), 1, 1), ((1, 1), -2, 1), ((0, 0), 1, 1)]));
        let d2 = hv_discriminant(2).unwrap();
        assert_eq!(d2, BiPoly::from_fracs(&[((2, 3), -4, 1), ((2, 2), 1, 1), ((1, 1), -4, 1)]));
        let d1 = hv_discriminant(1).unwrap();
        assert_eq!(d1, BiPoly::from_fracs(&[((2, 3), -4, 1), ((2, 2), 1, 1), ((1, 0), -4, 1)]));
    }

    #[test]
    fn hv_reproduces_catalog() {
        for d in 1..=3 {
            assert_eq!(hv_to_weierstrass(d).unwrap(), catalog(d, &Variant::Exact).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn catalog_configurations() {
        let c3 = fiber_configuration(&catalog(3, &Variant::Exact).unwrap()).unwrap();
        assert_eq!(c3.at(&q(0)), Some(IVStar));
        assert_eq!(c3.at(&q(27)), Some(I(1)));
        assert_eq!(c3.infinity, I(3));
        assert_eq!(c3.finite.len(), 2);
        let c1 = fiber_configuration(&catalog(1, &Variant::Exact).unwrap()).unwrap();
        assert_eq!(c1.at(&q(0)), Some(IIStar));
        assert_eq!(c1.at(&q(432)), Some(I(1)));
        assert_eq!(c1.infinity, I(1));
        let c2 = fiber_configuration(&catalog(2, &Variant::Exact).unwrap()).unwrap();
        assert_eq!(c2.at(&q(0)), Some(IIIStar));
        assert_eq!(c2.at(&q(64)), Some(I(1)));
        assert_eq!(c2.infinity, I(2));
    }

    #[test]
    fn perturbed_configurations() {
        for (d, n) in [(1u8, 11u32), (2, 10), (3, 9)] {
            let c = fiber_configuration(&catalog(d, &Variant::Perturbed(default_epsilon())).unwrap()).unwrap();
            assert_eq!(c.finite_count(), n);
            assert!(c.finite.iter().all(|f| f.kodaira == I(1)));
            assert_eq!(c.infinity, I(d as u32));
            assert_eq!(c.euler_sum, 12);
        }
    }
}
