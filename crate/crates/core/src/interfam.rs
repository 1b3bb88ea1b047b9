//! Interpolation families `u_s = e^{iπs}·p̃_from + s(p̃_from + p̃_to)`
//! between perturbed catalog surfaces: critical-value tracks on the Riemann
//! sphere, SVG figures, and candidate mutation words read off from the
//! braiding of the tracks around the basepoint 0.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::Rational;
use crate::pathnum::{all_roots, hungarian, CPoly, PathError};
use crate::pseudolattice::{self, ExceptionalBasis, LatticeError, Mutation, MutationWord, Side};
use crate::vancycles::expected_classes;
use crate::weierstrass::{catalog, default_epsilon, Variant, WeierstrassError, WeierstrassForm};

/// Number of critical points on the sphere: the discriminant has degree 12
/// in homogeneous coordinates.
pub const SPHERE_DEGREE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpolationError {
    #[error("s = {0} outside [0, 1]")]
    ParameterRange(f64),
    #[error("unresolved track crossing near s = {0}")]
    UnresolvedCrossing(f64),
    #[error("ambiguous swap at s = {0}: equal radii")]
    AmbiguousSwap(f64),
    #[error("a track passes through the basepoint near s = {0}")]
    ThroughBasepoint(f64),
    #[error("discriminant vanishes identically at s = {0}")]
    ZeroDiscriminant(f64),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub from: u8,
    pub to: u8,
    pub epsilon: Rational,
    pub w_from: WeierstrassForm,
    pub w_to: WeierstrassForm,
}

impl FamilySpec {
    pub fn new(from: u8, to: u8, epsilon: &Rational) -> Result<Self, InterpolationError> {
        let v = Variant::Perturbed(epsilon.clone());
        Ok(FamilySpec { from, to, epsilon: epsilon.clone(), w_from: catalog(from, &v)?, w_to: catalog(to, &v)? })
    }

    /// The `d → d−1` family at `ε = 1/100`.
    pub fn standard(from: u8) -> Result<Self, InterpolationError> {
        Self::new(from, from.wrapping_sub(1), &default_epsilon())
    }

    pub fn label(&self) -> String {
        format!("{}to{}", self.from, self.to)
    }
}

/// Complex Weierstrass coefficients `(a_s, b_s)` in increasing powers of `λ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexForm {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

fn dense(p: &crate::exactpoly::UniPoly, len: usize) -> Vec<C64> {
    let mut v: Vec<C64> = p.to_f64_dense().into_iter().map(|x| C64::new(x, 0.0)).collect();
    v.resize(len, C64::new(0.0, 0.0));
    v
}

fn combine(f: &[C64], g: &[C64], cf: C64, cg: C64, scale: C64) -> Vec<C64> {
    f.iter().zip(g).map(|(x, y)| (cf * x + cg * y) / scale).collect()
}

/// `(A/c, B/c)` with `A = (e^{iπs} + s)a_from + s·a_to` and `c = e^{iπs} + 2s`.
pub fn family_at(f: &FamilySpec, s: f64) -> Result<ComplexForm, InterpolationError> {
    if !(0.0..=1.0).contains(&s) {
        return Err(InterpolationError::ParameterRange(s));
    }
    let e = C64::from_polar(1.0, PI * s);
    let c = e + 2.0 * s;
    let (cf, ct) = (e + s, C64::new(s, 0.0));
    Ok(ComplexForm {
        a: combine(&dense(&f.w_from.a, 5), &dense(&f.w_to.a, 5), cf, ct, c),
        b: combine(&dense(&f.w_from.b, 7), &dense(&f.w_to.b, 7), cf, ct, c),
    })
}

fn poly_mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `4a³ + 27b²` padded to the 13 coefficients of a binary form of degree 12.
pub fn homogeneous_discriminant(w: &ComplexForm) -> Vec<C64> {
    let a3 = poly_mul(&poly_mul(&w.a, &w.a), &w.a);
    let b2 = poly_mul(&w.b, &w.b);
    let mut d = vec![C64::new(0.0, 0.0); SPHERE_DEGREE + 1];
    for (i, x) in a3.iter().enumerate() {
        d[i] += 4.0 * x;
    }
    for (i, x) in b2.iter().enumerate() {
        d[i] += 27.0 * x;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    Finite,
    Infinity,
}

/// A point of `P¹` stored in the chart where its coordinate has modulus ≤ 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePoint {
    pub chart: Chart,
    pub z: C64,
}

impl SpherePoint {
    pub const INFINITY: SpherePoint = SpherePoint { chart: Chart::Infinity, z: C64 { re: 0.0, im: 0.0 } };

    pub fn from_finite(lambda: C64) -> Self {
        if lambda.norm() <= 1.0 {
            SpherePoint { chart: Chart::Finite, z: lambda }
        } else {
            SpherePoint { chart: Chart::Infinity, z: 1.0 / lambda }
        }
    }

    fn homogeneous(&self) -> (C64, C64) {
        let one = C64::new(1.0, 0.0);
        match self.chart {
            Chart::Finite => (self.z, one),
            Chart::Infinity => (one, self.z),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.chart == Chart::Infinity && self.z.norm() == 0.0
    }

    /// `λ`, or `None` at ∞.
    pub fn lambda(&self) -> Option<C64> {
        match self.chart {
            Chart::Finite => Some(self.z),
            Chart::Infinity if self.z.norm() == 0.0 => None,
            Chart::Infinity => Some(1.0 / self.z),
        }
    }

    /// Chordal distance on the unit-diameter-2 sphere.
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        let (x1, y1) = self.homogeneous();
        let (x2, y2) = other.homogeneous();
        let n1 = (x1.norm_sqr() + y1.norm_sqr()).sqrt();
        let n2 = (x2.norm_sqr() + y2.norm_sqr()).sqrt();
        2.0 * (x1 * y2 - x2 * y1).norm() / (n1 * n2)
    }
}

/// Roots of a binary form of degree 12 given by its dehomogenized
/// coefficients; leading coefficients below `1e-13` of the largest one count
/// as zero, and the missing roots sit at ∞. Roots outside the unit disk are
/// recomputed in the chart at ∞.
pub fn sphere_roots(coeffs: &[C64]) -> Result<Vec<SpherePoint>, PathError> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(PathError::ConstantPolynomial);
    }
    let cut = 1e-13 * scale;
    let trimmed = |v: &[C64]| -> Vec<C64> {
        let mut v = v.to_vec();
        while v.len() > 1 && v.last().map_or(false, |c| c.norm() <= cut) {
            v.pop();
        }
        v
    };
    let fin = trimmed(coeffs);
    let degree = coeffs.len() - 1;
    let exact_inf = degree - (fin.len() - 1);
    // μ^{12} D(1/μ) divided by μ^{exact_inf}
    let inf: Vec<C64> = coeffs[..fin.len()].iter().rev().copied().collect();
    let finite_roots = if fin.len() > 1 { all_roots(&CPoly::new(fin.clone()), 1e-8)?.roots } else { Vec::new() };
    let inf_roots = if inf.len() > 1 { all_roots(&CPoly::new(inf), 1e-8)?.roots } else { Vec::new() };
    let mut out: Vec<SpherePoint> =
        finite_roots.iter().filter(|z| z.norm() <= 1.0).map(|&z| SpherePoint { chart: Chart::Finite, z }).collect();
    out.extend(inf_roots.into_iter().filter(|m| m.norm() < 1.0).map(|m| SpherePoint { chart: Chart::Infinity, z: m }));
    // roots on |λ| = 1 may be dropped or doubled by the two filters
    if out.len() != fin.len() - 1 {
        out = finite_roots.into_iter().map(SpherePoint::from_finite).collect();
    }
    out.extend(std::iter::repeat(SpherePoint::INFINITY).take(exact_inf));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartSwitch {
    pub s: f64,
    pub track: usize,
    pub to: Chart,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectorySet {
    pub family: String,
    pub samples: Vec<f64>,
    /// `points[k][i]`: track `i` at `samples[k]`.
    pub points: Vec<Vec<SpherePoint>>,
    pub chart_switches: Vec<ChartSwitch>,
}

impl TrajectorySet {
    pub fn track_count(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    pub fn finite_count(&self, k: usize) -> usize {
        self.points[k].iter().filter(|p| !p.is_infinite()).count()
    }

    pub fn endpoint_finite_counts(&self) -> (usize, usize) {
        (self.finite_count(0), self.finite_count(self.points.len() - 1))
    }

    /// Tracks that are at ∞ at `s = 0` and finite for some `s > 0`.
    pub fn tracks_leaving_infinity(&self) -> Vec<usize> {
        (0..self.track_count())
            .filter(|&i| self.points[0][i].is_infinite() && self.points.iter().any(|p| !p[i].is_infinite()))
            .collect()
    }

    /// `s,track,chart,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,track,chart,re,im\n");
        for (s, pts) in self.samples.iter().zip(&self.points) {
            for (i, p) in pts.iter().enumerate() {
                let chart = match p.chart {
                    Chart::Finite => "finite",
                    Chart::Infinity => "infinity",
                };
                let _ = writeln!(out, "{s:.9},{i},{chart},{:.12e},{:.12e}", p.z.re, p.z.im);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub samples: usize,
    pub min_ds: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { samples: 400, min_ds: 1e-9 }
    }
}

fn points_at(f: &FamilySpec, s: f64) -> Result<Vec<SpherePoint>, InterpolationError> {
    let w = family_at(f, s)?;
    let d = homogeneous_discriminant(&w);
    if d.iter().all(|c| c.norm() == 0.0) {
        return Err(InterpolationError::ZeroDiscriminant(s));
    }
    Ok(sphere_roots(&d)?)
}

/// Smallest chordal distance between tracks of `cur`, skipping pairs that
/// coincide at ∞ in `prev` or in `cur`.
fn separation(prev: &[SpherePoint], cur: &[SpherePoint]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..cur.len() {
        for j in i + 1..cur.len() {
            let both = |p: &[SpherePoint]| p[i].is_infinite() && p[j].is_infinite();
            if both(prev) || both(cur) {
                continue;
            }
            m = m.min(cur[i].chordal(&cur[j]));
        }
    }
    m
}

fn matched(prev: &[SpherePoint], raw: &[SpherePoint]) -> Vec<SpherePoint> {
    let cost: Vec<Vec<f64>> = prev.iter().map(|a| raw.iter().map(|b| a.chordal(b)).collect()).collect();
    hungarian(&cost).into_iter().map(|j| raw[j]).collect()
}

/// Tracks the 12 critical points of `u_s` on `P¹` over a uniform grid in
/// `s`, bisecting any interval where a track moves more than a third of the
/// current separation.
pub fn sweep(f: &FamilySpec, opts: &SweepOptions) -> Result<TrajectorySet, InterpolationError> {
    let mut samples = vec![0.0];
    let mut points = vec![points_at(f, 0.0)?];
    let mut switches = Vec::new();
    let n = opts.samples.max(1);
    for k in 1..=n {
        let target = k as f64 / n as f64;
        let mut stack = vec![target];
        while let Some(s) = stack.pop() {
            let s_prev = *samples.last().expect("nonempty");
            let prev = points.last().expect("nonempty").clone();
            let cur = matched(&prev, &points_at(f, s)?);
            let disp = prev.iter().zip(&cur).map(|(a, b)| a.chordal(b)).fold(0.0, f64::max);
            let sep = separation(&prev, &prev).min(separation(&prev, &cur));
            if disp < sep / 3.0 || disp < 1e-12 {
                for (i, (a, b)) in prev.iter().zip(&cur).enumerate() {
                    if a.chart != b.chart {
                        switches.push(ChartSwitch { s, track: i, to: b.chart });
                    }
                }
                samples.push(s);
                points.push(cur);
            } else {
                if s - s_prev < opts.min_ds {
                    return Err(InterpolationError::UnresolvedCrossing(s));
                }
                stack.push(s);
                stack.push(0.5 * (s_prev + s));
            }
        }
    }
    Ok(TrajectorySet { family: f.label(), samples, points, chart_switches: switches })
}

/// Angular key for the arc ordering: decreasing argument starting just
/// clockwise of the cut ray `θ_c`; points at ∞ sort last.
fn order_key(p: &SpherePoint, cut: f64) -> (u8, f64, f64) {
    match p.lambda() {
        None => (1, 0.0, 0.0),
        Some(z) => {
            let mut t = cut - z.arg();
            while t <= 0.0 {
                t += 2.0 * PI;
            }
            while t > 2.0 * PI {
                t -= 2.0 * PI;
            }
            (0, t, z.norm())
        }
    }
}

fn arc_order(pts: &[SpherePoint], cut: f64, tie: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (order_key(&pts[i], cut), order_key(&pts[j], cut));
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(tie.iter().position(|&x| x == i).cmp(&tie.iter().position(|&x| x == j)))
    });
    idx
}

fn radius(p: &SpherePoint) -> f64 {
    p.lambda().map_or(f64::INFINITY, |z| z.norm())
}

/// Candidate mutation word acting on the extended basis of the `to`
/// surface, read off from the tracks traversed from `s = 1` back to `s = 0`.
/// Each exchange of neighbouring positions in the arc order emits `R_i` when
/// the track moving from slot `i` to `i+1` passes farther from the
/// basepoint and `L_i` when it passes closer.
pub fn transposition_word(t: &TrajectorySet) -> Result<MutationWord, InterpolationError> {
    let last = t.points.len() - 1;
    let end = &t.points[last];
    // cut ray counterclockwise of the track nearest the positive real axis
    let first = end
        .iter()
        .filter_map(|p| p.lambda())
        .filter(|z| z.re > 0.0)
        .max_by(|a, b| (a.re / a.norm()).total_cmp(&(b.re / b.norm())).then(a.norm().total_cmp(&b.norm())));
    let th0 = first.map_or(0.0, |z| z.arg());
    let next_ccw = end
        .iter()
        .filter_map(|p| p.lambda())
        .map(|z| {
            let mut d = z.arg() - th0;
            while d <= 1e-12 {
                d += 2.0 * PI;
            }
            d
        })
        .fold(2.0 * PI, f64::min);
    let cut = th0 + 0.5 * next_ccw;
    let mut order = arc_order(end, cut, &(0..end.len()).collect::<Vec<_>>());
    let mut emitted: Vec<Mutation> = Vec::new();
    for k in (0..last).rev() {
        let pts = &t.points[k];
        if pts.iter().any(|p| p.lambda().map_or(false, |z| z.norm() < 1e-12)) {
            return Err(InterpolationError::ThroughBasepoint(t.samples[k]));
        }
        let target = arc_order(pts, cut, &order);
        // bubble the previous order into the new one by adjacent swaps
        let pos_new: Vec<usize> = {
            let mut p = vec![0; pts.len()];
            for (slot, &track) in target.iter().enumerate() {
                p[track] = slot;
            }
            p
        };
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..order.len() - 1 {
                let (x, y) = (order[i], order[i + 1]);
                if pos_new[x] > pos_new[y] {
                    let prev = &t.points[k + 1];
                    let rx = 0.5 * (radius(&prev[x]) + radius(&pts[x]));
                    let ry = 0.5 * (radius(&prev[y]) + radius(&pts[y]));
                    if (rx - ry).abs() <= 1e-9 * rx.max(ry) && rx.is_finite() {
                        return Err(InterpolationError::AmbiguousSwap(t.samples[k]));
                    }
                    let side = if rx > ry { Side::R } else { Side::L };
                    emitted.push(Mutation { side, slot: i });
                    order.swap(i, i + 1);
                    changed = true;
                }
            }
        }
    }
    emitted.reverse();
    Ok(MutationWord(emitted).reduced())
}

/// The finite mutation words relating consecutive extended bases.
pub fn reference_transition_word(from: u8) -> Option<MutationWord> {
    match from {
        3 => "R8 R7 R6 R5 R4 R3 R2 R1 R8 R7 L4".parse().ok(),
        2 => "R9 R8 R7 R6 R5 R4 L6".parse().ok(),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WordValidation {
    pub candidate: String,
    pub reference: String,
    /// Exact equality with the reference word as a basis transformation.
    pub equals_reference: bool,
    /// The candidate maps the extended classes of `to` onto those of `from`
    /// up to per-class sign.
    pub maps_classes: bool,
    pub error: Option<String>,
}

/// Checks a candidate word on the extended basis of the `to` surface.
pub fn validate_word(from: u8, to: u8, candidate: &MutationWord) -> Result<WordValidation, InterpolationError> {
    let reference = reference_transition_word(from).ok_or(LatticeError::InvalidDegree(from))?;
    let to_classes = pseudolattice::extended_classes(to, &expected_classes(to).ok_or(LatticeError::InvalidDegree(to))?);
    let from_classes =
        pseudolattice::extended_classes(from, &expected_classes(from).ok_or(LatticeError::InvalidDegree(from))?);
    let (p, basis, charge) = pseudolattice::from_boundaries(&to_classes)?;
    let run = |w: &MutationWord| -> Result<ExceptionalBasis, LatticeError> { pseudolattice::mutate(&p, &basis, w) };
    let (equals_reference, maps_classes, error) = match (run(candidate), run(&reference)) {
        (Ok(a), Ok(b)) => {
            let got = charge.charges(&a);
            let maps =
                got.len() == from_classes.len() && got.iter().zip(&from_classes).all(|(x, y)| x.same_up_to_sign(y));
            (a == b, maps, None)
        }
        (Err(e), _) | (_, Err(e)) => (false, false, Some(e.to_string())),
    };
    Ok(WordValidation {
        candidate: candidate.to_string(),
        reference: reference.to_string(),
        equals_reference,
        maps_classes,
        error,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SvgStyle {
    pub size: f64,
    /// Radial scale of the disk model `z ↦ z / (ρ + |z|)`.
    pub rho: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { size: 640.0, rho: 0.05 }
    }
}

fn disk(p: &SpherePoint, style: &SvgStyle) -> (f64, f64) {
    let half = style.size / 2.0;
    let r = 0.9 * half;
    match p.lambda() {
        None => (half + r, half),
        Some(z) => {
            let w = z / (style.rho + z.norm());
            (half + r * w.re, half - r * w.im)
        }
    }
}

/// Deterministic SVG of the tracks in the disk model of the sphere, where
/// the boundary circle is ∞. Red markers are the `s = 0` positions and green
/// markers the `s = 1` positions; tracks are Catmull–Rom cubic splines.
pub fn render_svg(t: Option<&TrajectorySet>, style: &SvgStyle) -> String {
    let size = style.size;
    let half = size / 2.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<circle cx="{half:.2}" cy="{half:.2}" r="{:.2}" fill="none" stroke="#999999" stroke-dasharray="4 3"/>"##,
        0.9 * half
    );
    let _ = writeln!(s, r##"<line x1="0" y1="{half:.2}" x2="{size:.2}" y2="{half:.2}" stroke="#000000"/>"##);
    let _ = writeln!(s, r##"<line x1="{half:.2}" y1="0" x2="{half:.2}" y2="{size:.2}" stroke="#000000"/>"##);
    if let Some(t) = t {
        for i in 0..t.track_count() {
            let pts: Vec<(f64, f64)> = t.points.iter().map(|p| disk(&p[i], style)).collect();
            let mut d = format!("M {:.2} {:.2}", pts[0].0, pts[0].1);
            for k in 0..pts.len() - 1 {
                let p0 = pts[k.saturating_sub(1)];
                let (p1, p2) = (pts[k], pts[k + 1]);
                let p3 = pts[(k + 2).min(pts.len() - 1)];
                let c1 = (p1.0 + (p2.0 - p0.0) / 6.0, p1.1 + (p2.1 - p0.1) / 6.0);
                let c2 = (p2.0 - (p3.0 - p1.0) / 6.0, p2.1 - (p3.1 - p1.1) / 6.0);
                let _ = write!(d, " C {:.2} {:.2} {:.2} {:.2} {:.2} {:.2}", c1.0, c1.1, c2.0, c2.1, p2.0, p2.1);
            }
            let _ = writeln!(s, r##"<path d="{d}" fill="none" stroke="#555555" stroke-width="1"/>"##);
        }
        for (k, color) in [(0, "#c0392b"), (t.points.len() - 1, "#27ae60")] {
            for (i, p) in t.points[k].iter().enumerate() {
                if p.is_infinite() {
                    continue;
                }
                let (x, y) = disk(p, style);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{color}"><title>{i}</title></circle>"#
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
