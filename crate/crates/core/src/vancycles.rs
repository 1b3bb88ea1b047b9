//! Vanishing cycles of the perturbed fibrations: ordered critical values,
//! colliding roots along straight arcs from the reference fiber over 0, and
//! their classes in `H₁` of the reference fiber `y² = x³ + εx`.
//!
//! The class of each vanishing cycle is found by transporting the period
//! lattice of the fiber along the arc: at every accepted step the lattice of
//! the current fiber is recomputed from half-periods and the transported basis
//! is re-expressed in it by rounding. At the end of the arc the half-period
//! between the colliding roots is solved in the transported basis. As an
//! independent check the lift of the arc `δᵢ` (the union of the two colliding
//! root trajectories) is integrated in the reference fiber.

use std::fmt;

use num_complex::Complex64 as C64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{rational_to_f64, Rational};
use crate::pathnum::{
    all_roots, elliptic_integral_factored, match_points, real_coords, BranchSeed, CPoly, FactoredCubic, PathError,
    PathPolyline,
};
use crate::weierstrass::{catalog, lambda0, Variant, WeierstrassError, WeierstrassForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VanishingError {
    #[error("discriminant of the perturbed form is not separable")]
    NotSeparable,
    #[error("arc to critical value {index} passes within {distance:.2e} of another critical value")]
    ArcGuard { index: usize, distance: f64 },
    #[error("integer solve residual {residual:.2e} too large for arc {index}")]
    Residual { index: usize, residual: f64 },
    #[error("continuation along arc {index} failed: step underflow at t = {t}")]
    StepUnderflow { index: usize, t: f64 },
    #[error("class {0} is not primitive")]
    NotPrimitive(HomologyClass),
    #[error("no cycle at infinity with |m|, |n| ≤ 3 closes the monodromy")]
    NoInfinityCycle,
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

/// The class `m·a + n·b`; serializes as its display string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    pub m: i64,
    pub n: i64,
}

impl HomologyClass {
    pub const A: HomologyClass = HomologyClass { m: 1, n: 0 };
    pub const B: HomologyClass = HomologyClass { m: 0, n: 1 };

    pub fn new(m: i64, n: i64) -> Self {
        HomologyClass { m, n }
    }

    pub fn is_primitive(&self) -> bool {
        self.m.gcd(&self.n) == 1
    }

    pub fn neg(&self) -> Self {
        HomologyClass { m: -self.m, n: -self.n }
    }

    /// Sign making the first nonzero coordinate positive.
    pub fn normalized(&self) -> Self {
        if self.m < 0 || (self.m == 0 && self.n < 0) {
            self.neg()
        } else {
            *self
        }
    }

    pub fn same_up_to_sign(&self, other: &HomologyClass) -> bool {
        self == other || *self == other.neg()
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: i64, s: &str| match c {
            1 => s.to_string(),
            -1 => format!("-{s}"),
            _ => format!("{c}{s}"),
        };
        match (self.m, self.n) {
            (0, 0) => f.write_str("0"),
            (m, 0) => f.write_str(&term(m, "a")),
            (0, n) => f.write_str(&term(n, "b")),
            (m, n) => {
                let tail = term(n.abs(), "b");
                write!(f, "{}{}{}", term(m, "a"), if n < 0 { "-" } else { "+" }, tail)
            }
        }
    }
}

impl Serialize for HomologyClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::str::FromStr for HomologyClass {
    type Err = String;

    /// Parses expressions such as `a+b`, `-b`, `2a-3b`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '−' { '-' } else { c }).collect();
        if s.is_empty() {
            return Err("empty class".into());
        }
        let (mut m, mut n) = (0i64, 0i64);
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let sign_len = if rest.starts_with('+') || rest.starts_with('-') { 1 } else { 0 };
            let sign = if rest.starts_with('-') { -1 } else { 1 };
            rest = &rest[sign_len..];
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            rest = &rest[digits.len()..];
            let coef = if digits.is_empty() { 1 } else { digits.parse::<i64>().map_err(|e| e.to_string())? };
            match rest.chars().next() {
                Some('a') => m += sign * coef,
                Some('b') => n += sign * coef,
                _ if s == "0" => return Ok(HomologyClass::new(0, 0)),
                _ => return Err(format!("cannot parse class '{s}'")),
            }
            rest = &rest[1..];
        }
        Ok(HomologyClass { m, n })
    }
}

/// `⟨u, v⟩ = n₁m₂ − m₁n₂`, so that `⟨a, b⟩ = −1`.
pub fn h1_pair(u: &HomologyClass, v: &HomologyClass) -> i64 {
    u.n * v.m - u.m * v.n
}

/// Upper-triangular Seifert Gram matrix of an ordered list of classes.
pub fn seifert_gram(classes: &[HomologyClass]) -> Vec<Vec<i64>> {
    let n = classes.len();
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = 1;
        for j in i + 1..n {
            g[i][j] = h1_pair(&classes[i], &classes[j]);
        }
    }
    g
}

/// 2×2 integer matrix acting on column vectors `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SL2Matrix(pub [[i64; 2]; 2]);

impl SL2Matrix {
    pub const IDENTITY: SL2Matrix = SL2Matrix([[1, 0], [0, 1]]);

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        SL2Matrix(r)
    }

    pub fn pow(&self, e: u32) -> SL2Matrix {
        (0..e).fold(SL2Matrix::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn inverse(&self) -> SL2Matrix {
        let m = &self.0;
        SL2Matrix([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    pub fn apply(&self, v: &HomologyClass) -> HomologyClass {
        let m = &self.0;
        HomologyClass { m: m[0][0] * v.m + m[0][1] * v.n, n: m[1][0] * v.m + m[1][1] * v.n }
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }
}

/// Picard–Lefschetz transformation `v ↦ v + ⟨l, v⟩ l`.
pub fn dehn_twist(l: &HomologyClass) -> Result<SL2Matrix, VanishingError> {
    if !l.is_primitive() {
        return Err(VanishingError::NotPrimitive(*l));
    }
    let (m, n) = (l.m, l.n);
    Ok(SL2Matrix([[1 + n * m, -m * m], [n * n, 1 - m * n]]))
}

/// `T_{k-1} ⋯ T_1 T_0`: the twist of class 0 acts first.
pub fn total_monodromy(classes: &[HomologyClass]) -> Result<SL2Matrix, VanishingError> {
    classes.iter().try_fold(SL2Matrix::IDENTITY, |acc, l| Ok(dehn_twist(l)?.mul(&acc)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CompositionOrder {
    /// `T_c^d · M = I`.
    TwistAfter,
    /// `M · T_c^d = I`.
    TwistBefore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityCycle {
    pub class: HomologyClass,
    pub order: CompositionOrder,
}

/// Searches `c` with `|m|, |n| ≤ 3` such that `T_c^d` closes the monodromy.
pub fn infinity_cycle(classes: &[HomologyClass], d: u32) -> Result<InfinityCycle, VanishingError> {
    let total = total_monodromy(classes)?;
    for order in [CompositionOrder::TwistAfter, CompositionOrder::TwistBefore] {
        for m in 0..=3i64 {
            for n in -3..=3i64 {
                let c = HomologyClass::new(m, n);
                if (m == 0 && n <= 0) || !c.is_primitive() {
                    continue;
                }
                let t = dehn_twist(&c)?.pow(d);
                let prod = match order {
                    CompositionOrder::TwistAfter => t.mul(&total),
                    CompositionOrder::TwistBefore => total.mul(&t),
                };
                if prod == SL2Matrix::IDENTITY {
                    return Ok(InfinityCycle { class: c, order });
                }
            }
        }
    }
    Err(VanishingError::NoInfinityCycle)
}

/// Roots of `Δ̃` ordered starting at the one nearest `λ₀`, then clockwise:
/// decreasing argument in `(arg λ̃₀ − 2π, arg λ̃₀]`, ties by modulus.
pub fn critical_values_ordered(w: &WeierstrassForm, lambda0: f64) -> Result<Vec<C64>, VanishingError> {
    let disc = w.discriminant();
    if !disc.is_separable() {
        return Err(VanishingError::NotSeparable);
    }
    let p = CPoly::from_real(&disc.to_f64_dense());
    let roots = all_roots(&p, 1e-10)?.roots;
    let target = C64::new(lambda0, 0.0);
    let first = roots
        .iter()
        .copied()
        .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
        .expect("nonconstant discriminant");
    let th0 = first.arg();
    let key = |z: &C64| {
        let mut t = z.arg();
        while t > th0 + 1e-12 {
            t -= 2.0 * std::f64::consts::PI;
        }
        while t <= th0 - 2.0 * std::f64::consts::PI + 1e-12 {
            t += 2.0 * std::f64::consts::PI;
        }
        (-t, z.norm())
    };
    let mut out = roots;
    out.sort_by(|x, y| {
        let (kx, ky) = (key(x), key(y));
        kx.0.total_cmp(&ky.0).then(kx.1.total_cmp(&ky.1))
    });
    Ok(out)
}

/// `2∫ dx/y` on the straight segment from `e0` to `e1`, where `e0, e1, e2`
/// are the roots of the monic cubic.
fn half_period(e0: C64, e1: C64, e2: C64) -> Result<C64, PathError> {
    let fc = FactoredCubic { lead: C64::new(1.0, 0.0), roots: [e0, e1, e2] };
    Ok(elliptic_integral_factored(&fc, &PathPolyline::segment(e0, e1)?, BranchSeed::Sign(1.0))?.value * 2.0)
}

fn seg_distance(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// A basis of the period lattice from half-periods out of the root whose
/// two segments stay farthest from the remaining root.
fn lattice_basis(r: &[C64; 3]) -> Result<(C64, C64), PathError> {
    let mut best = (f64::NEG_INFINITY, 0, 1, 2);
    for c in 0..3 {
        let (j, k) = ((c + 1) % 3, (c + 2) % 3);
        let m = seg_distance(r[k], r[c], r[j]).min(seg_distance(r[j], r[c], r[k]));
        if m > best.0 {
            best = (m, c, j, k);
        }
    }
    let (_, c, j, k) = best;
    Ok((half_period(r[c], r[j], r[k])?, half_period(r[c], r[k], r[j])?))
}

fn round_in(w: C64, p1: C64, p2: C64) -> Option<((i64, i64), f64)> {
    let (x, y) = real_coords(w, p1, p2)?;
    let (rx, ry) = (x.round(), y.round());
    Some(((rx as i64, ry as i64), (x - rx).abs().max((y - ry).abs())))
}

/// Roots `[0, −√(−ε), √(−ε)]` of the reference fiber `x³ + εx`.
pub fn reference_roots(eps: f64) -> [C64; 3] {
    let s = eps.sqrt();
    [C64::new(0.0, 0.0), C64::new(0.0, -s), C64::new(0.0, s)]
}

/// `(ω_a, ω_b)`: half-periods from 0 to `−√(−ε)` and to `√(−ε)`, each with
/// the sign giving positive real part.
pub fn reference_lattice(eps: f64) -> Result<(C64, C64), PathError> {
    let r = reference_roots(eps);
    let fix = |w: C64| if w.re < 0.0 { -w } else { w };
    Ok((fix(half_period(r[0], r[1], r[2])?), fix(half_period(r[0], r[2], r[1])?)))
}

#[derive(Clone, Debug)]
pub struct VanishingOptions {
    pub initial_step: f64,
    pub min_step: f64,
    /// Rounding tolerance when re-expressing the transported basis.
    pub lattice_tol: f64,
    /// Stop once the closest pair is this fraction of the widest.
    pub collision_ratio: f64,
    pub guard: f64,
    pub residual_tol: f64,
}

impl Default for VanishingOptions {
    fn default() -> Self {
        VanishingOptions {
            initial_step: 1e-3,
            min_step: 1e-14,
            lattice_tol: 0.02,
            collision_ratio: 1e-3,
            guard: 1e-3,
            residual_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcRecord {
    pub critical_value: C64,
    /// Track labels refer to the reference roots `[0, −√(−ε), √(−ε)]`.
    pub colliding_pair: (usize, usize),
    pub t_final: f64,
    pub steps: usize,
    pub final_roots: [C64; 3],
    /// Trajectory of the first colliding root followed by the reversed trajectory of the second.
    pub delta: Vec<C64>,
    pub class: HomologyClass,
    pub raw_coords: (f64, f64),
    pub residual: f64,
    /// Class from integrating the lift of `δ` in the reference fiber, if the integral succeeded.
    pub delta_class: Option<HomologyClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingData {
    pub d: u8,
    pub epsilon: f64,
    pub omega_a: C64,
    pub omega_b: C64,
    pub critical_values: Vec<C64>,
    pub arcs: Vec<ArcRecord>,
}

impl VanishingData {
    pub fn classes(&self) -> Vec<HomologyClass> {
        self.arcs.iter().map(|a| a.class).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.arcs.iter().map(|a| a.residual).fold(0.0, f64::max)
    }

    /// Arcs whose `δ`-integral class disagrees (up to sign) with the transported class.
    pub fn delta_disagreements(&self) -> Vec<usize> {
        self.arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.delta_class.is_some_and(|c| c.same_up_to_sign(&a.class)))
            .map(|(i, _)| i)
            .collect()
    }
}

fn track_arc(
    w: &WeierstrassForm,
    eps: f64,
    base: (C64, C64),
    lam: C64,
    index: usize,
    opts: &VanishingOptions,
) -> Result<ArcRecord, VanishingError> {
    let roots_at = |l: C64| -> Result<[C64; 3], VanishingError> {
        let r = all_roots(&w.cubic_at(l), 1e-10)?.roots;
        Ok([r[0], r[1], r[2]])
    };
    let mut prev = reference_roots(eps);
    let (mut ca, mut cb) = base;
    let mut trail: Vec<[C64; 3]> = vec![prev];
    let (mut t, mut h, mut steps) = (0.0f64, opts.initial_step, 0usize);
    loop {
        let tn = (t + h).min(1.0);
        let raw = roots_at(lam * tn)?;
        let perm = match_points(&prev, &raw, |a, b| (a - b).norm());
        let r = [raw[perm[0]], raw[perm[1]], raw[perm[2]]];
        let disp = (0..3).map(|i| (r[i] - prev[i]).norm()).fold(0.0, f64::max);
        let sep = crate::pathnum::min_pairwise_distance(&r);
        let accepted = disp < sep / 3.0 && {
            let (p1, p2) = lattice_basis(&r)?;
            match (round_in(ca, p1, p2), round_in(cb, p1, p2)) {
                (Some((xa, ea)), Some((xb, eb))) if ea.max(eb) <= opts.lattice_tol => {
                    ca = p1 * xa.0 as f64 + p2 * xa.1 as f64;
                    cb = p1 * xb.0 as f64 + p2 * xb.1 as f64;
                    true
                }
                _ => false,
            }
        };
        if !accepted {
            h *= 0.5;
            if h < opts.min_step {
                return Err(VanishingError::StepUnderflow { index, t });
            }
            continue;
        }
        prev = r;
        t = tn;
        steps += 1;
        trail.push(r);
        h *= 1.5;
        let ds = [(r[0] - r[1]).norm(), (r[0] - r[2]).norm(), (r[1] - r[2]).norm()];
        let dmax = ds.iter().cloned().fold(0.0, f64::max);
        let dmin = ds.iter().cloned().fold(f64::INFINITY, f64::min);
        if dmin < opts.collision_ratio * dmax || t >= 1.0 {
            break;
        }
    }
    let r = prev;
    let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    let &(i, j, k) = pairs.iter().min_by(|x, y| (r[x.0] - r[x.1]).norm().total_cmp(&(r[y.0] - r[y.1]).norm())).unwrap();
    let vanishing = half_period(r[i], r[j], r[k])?;
    let ((m, n), residual) =
        round_in(vanishing, ca, cb).ok_or(VanishingError::Residual { index, residual: f64::NAN })?;
    let raw_coords = real_coords(vanishing, ca, cb).unwrap();
    if residual >= opts.residual_tol {
        return Err(VanishingError::Residual { index, residual });
    }
    let class = HomologyClass::new(m, n).normalized();
    if !class.is_primitive() {
        return Err(VanishingError::NotPrimitive(class));
    }
    let mut delta: Vec<C64> = trail.iter().map(|s| s[i]).collect();
    delta.extend(trail.iter().rev().map(|s| s[j]));
    let delta = thin_polyline(&delta, &reference_roots(eps), 1e-6 * eps.sqrt());
    let delta_class = delta_integral_class(eps, &delta, base);
    Ok(ArcRecord {
        critical_value: lam,
        colliding_pair: (i, j),
        t_final: t,
        steps,
        final_roots: r,
        delta,
        class,
        raw_coords,
        residual,
        delta_class,
    })
}

/// Drops interior nodes within `tol` of a root or of the previously kept node.
fn thin_polyline(pts: &[C64], roots: &[C64], tol: f64) -> Vec<C64> {
    let mut out = vec![pts[0]];
    let last = pts[pts.len() - 1];
    for &p in &pts[1..pts.len() - 1] {
        let near_root = roots.iter().any(|r| (p - r).norm() < tol);
        if !near_root && (p - out[out.len() - 1]).norm() >= tol && (p - last).norm() >= tol {
            out.push(p);
        }
    }
    out.push(last);
    out
}

/// Class of the double lift of the polyline `δ` (which joins two reference
/// roots) in the reference fiber.
fn delta_integral_class(eps: f64, delta: &[C64], base: (C64, C64)) -> Option<HomologyClass> {
    let fc = FactoredCubic { lead: C64::new(1.0, 0.0), roots: reference_roots(eps) };
    let path = PathPolyline::new(delta.to_vec()).ok()?;
    let v = elliptic_integral_factored(&fc, &path, BranchSeed::Sign(1.0)).ok()?.value * 2.0;
    let ((m, n), res) = round_in(v, base.0, base.1)?;
    (res < 1e-3).then(|| HomologyClass::new(m, n).normalized())
}

/// Vanishing data of `w` with reference fiber over 0.
pub fn vanishing_classes_for(
    d: u8,
    w: &WeierstrassForm,
    eps: f64,
    opts: &VanishingOptions,
) -> Result<VanishingData, VanishingError> {
    let lam0 = rational_to_f64(&lambda0(d)?);
    let cvs = critical_values_ordered(w, lam0)?;
    for (i, &lam) in cvs.iter().enumerate() {
        for (j, &other) in cvs.iter().enumerate() {
            if i != j {
                let dist = seg_distance(other, C64::new(0.0, 0.0), lam);
                if dist < opts.guard {
                    return Err(VanishingError::ArcGuard { index: i, distance: dist });
                }
            }
        }
    }
    let base = reference_lattice(eps)?;
    let arcs = cvs
        .par_iter()
        .enumerate()
        .map(|(i, &lam)| track_arc(w, eps, base, lam, i, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VanishingData { d, epsilon: eps, omega_a: base.0, omega_b: base.1, critical_values: cvs, arcs })
}

/// Vanishing data of the catalog surface perturbed by `ε`; on an arc-guard
/// failure `ε` is enlarged by the factor `18/17` and the computation retried.
pub fn vanishing_classes(d: u8, eps: &Rational) -> Result<VanishingData, VanishingError> {
    let opts = VanishingOptions::default();
    let mut eps = eps.clone();
    let mut attempts = 0;
    loop {
        let w = catalog(d, &Variant::Perturbed(eps.clone()))?;
        match vanishing_classes_for(d, &w, rational_to_f64(&eps), &opts) {
            Err(VanishingError::ArcGuard { .. }) if attempts < 5 => {
                attempts += 1;
                eps = eps * Rational::new(18.into(), 17.into());
            }
            other => return other,
        }
    }
}

/// Per-class sign vector `s` with `diag(s)·G·diag(s) = target`, by exhaustive search.
pub fn sign_diagonal_to(gram: &[Vec<i64>], target: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = gram.len();
    if n != target.len() || n > 20 {
        return None;
    }
    (0u32..1 << n).find_map(|mask| {
        let s: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let ok = (0..n).all(|i| (0..n).all(|j| s[i] * gram[i][j] * s[j] == target[i][j]));
        ok.then_some(s)
    })
}

/// The vanishing classes listed for the three surfaces, in order.
pub fn expected_classes(d: u8) -> Option<Vec<HomologyClass>> {
    let s = match d {
        1 => "a+b,a,b,a,b,a,b,a,b,a,b",
        2 => "a+b,a,b,a,a,a-b,b,b,a,b",
        3 => "a+b,b,a,b,a,b,a,b,a",
        _ => return None,
    };
    s.split(',').map(|c| c.parse().ok()).collect()
}
