//! Floating-point kernels: polynomial roots (Aberth–Ehrlich), root
//! continuation along polylines, and integrals of `dx/y` on cubic curves.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("polynomial has degree 0")]
    ConstantPolynomial,
    #[error("root iteration did not converge (max residual {0:e})")]
    NonConvergence(f64),
    #[error("step size underflow at path parameter {0}")]
    StepUnderflow(f64),
    #[error("polyline needs at least two distinct consecutive nodes")]
    BadPolyline,
    #[error("family degree changed along the path")]
    DegreeChange,
    #[error("branch tracking failed near x = {0}")]
    BranchTracking(C64),
    #[error("quadrature did not reach the error target (estimate {0:e})")]
    Quadrature(f64),
    #[error("expected a cubic")]
    NotCubic,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
}

/// Dense complex polynomial, lowest degree first; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|c| C64::new(*c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and derivative by Horner.
    pub fn eval_d(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `Σ |a_i| max(1, |z|)^i`, the scale used for relative residuals.
    pub fn abs_scale(&self, z: C64) -> f64 {
        let r = z.norm().max(1.0);
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Relative residual `|p(z)| / Σ|a_i| max(1,|z|)^i`.
    pub fn residual(&self, z: C64) -> f64 {
        let s = self.abs_scale(z);
        if s == 0.0 {
            0.0
        } else {
            self.eval(z).norm() / s
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cluster {
    pub center: C64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<C64>,
    pub residuals: Vec<f64>,
    pub clusters: Vec<Cluster>,
}

const MAX_ABERTH_ITERS: usize = 800;

fn initial_circle(p: &CPoly) -> Vec<C64> {
    let n = p.degree();
    let lead = p.coeffs[n].norm();
    // radius from the geometric mean of root moduli, kept away from zero
    let r0 = (p.coeffs[0].norm() / lead).powf(1.0 / n as f64);
    let cauchy = 1.0 + p.coeffs[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let r = if r0.is_finite() && r0 > 0.0 { r0.min(cauchy) } else { cauchy.min(1.0) };
    (0..n).map(|k| C64::from_polar(r, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect()
}

/// Simultaneous Aberth–Ehrlich iteration from the given starting points.
pub fn aberth(p: &CPoly, init: &[C64], max_iters: usize) -> Vec<C64> {
    let n = p.degree();
    let mut z = init.to_vec();
    debug_assert_eq!(z.len(), n);
    let mut done = vec![false; n];
    for _ in 0..max_iters {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, dv) = p.eval_d(z[k]);
            if v.norm() <= 1e-300 {
                done[k] = true;
                continue;
            }
            let w = v / dv;
            let s: C64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let corr = w / (1.0 - w * s);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                let bump = C64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                all_done = false;
                continue;
            }
            z[k] -= corr;
            if corr.norm() <= 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

fn newton_polish(p: &CPoly, z: C64) -> C64 {
    let mut best = z;
    let mut best_res = p.residual(z);
    let mut cur = z;
    for _ in 0..4 {
        let (v, dv) = p.eval_d(cur);
        if dv.norm() == 0.0 {
            break;
        }
        cur -= v / dv;
        let r = p.residual(cur);
        if r < best_res {
            best = cur;
            best_res = r;
        } else {
            break;
        }
    }
    best
}

fn cluster_roots(roots: &[C64], rel: f64) -> Vec<Cluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= rel * (1.0 + roots[i].norm().max(roots[j].norm())) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, g)| Cluster {
            center: g.iter().map(|&i| roots[i]).sum::<C64>() / g.len() as f64,
            multiplicity: g.len(),
        })
        .collect()
}

/// All roots of `p`; residuals are relative backward errors and must be
/// below `tol`. Exact zero roots are split off before iterating.
pub fn all_roots(p: &CPoly, tol: f64) -> Result<RootSet, PathError> {
    if p.degree() == 0 {
        return Err(PathError::ConstantPolynomial);
    }
    let zeros = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = CPoly::new(p.coeffs[zeros..].to_vec());
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    if reduced.degree() > 0 {
        let init = initial_circle(&reduced);
        let found = aberth(&reduced, &init, MAX_ABERTH_ITERS);
        roots.extend(found.into_iter().map(|z| newton_polish(&reduced, z)));
    }
    let residuals: Vec<f64> = roots.iter().map(|z| p.residual(*z)).collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if !worst.is_finite() || worst >= tol {
        return Err(PathError::NonConvergence(worst));
    }
    let clusters = cluster_roots(&roots, 1e-6);
    Ok(RootSet { roots, residuals, clusters })
}

/// Minimum-cost perfect matching (Kuhn–Munkres); `cost[i][j]` is the cost of
/// assigning row `i` to column `j`. Returns the column for each row.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            ans[p[j] - 1] = j - 1;
        }
    }
    ans
}

/// Matches each previous point to a new point: nearest neighbours when that
/// is already a bijection, otherwise the Hungarian optimum. Returns the
/// index into `new` for every entry of `prev`.
pub fn match_points(prev: &[C64], new: &[C64], dist: impl Fn(C64, C64) -> f64) -> Vec<usize> {
    let n = prev.len();
    let cost: Vec<Vec<f64>> = prev.iter().map(|a| new.iter().map(|b| dist(*a, *b)).collect()).collect();
    let nearest: Vec<usize> = cost
        .iter()
        .map(|row| row.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(j, _)| j).unwrap_or(0))
        .collect();
    let mut seen = vec![false; n];
    let bijective = nearest.iter().all(|&j| !std::mem::replace(&mut seen[j], true));
    if bijective {
        nearest
    } else {
        hungarian(&cost)
    }
}

pub fn min_pairwise_distance(pts: &[C64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min((pts[i] - pts[j]).norm());
        }
    }
    m
}

/// Piecewise-linear path parameterized by normalized arclength on `[0, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct PathPolyline {
    nodes: Vec<C64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl PathPolyline {
    pub fn new(nodes: Vec<C64>) -> Result<Self, PathError> {
        if nodes.len() < 2 || nodes.windows(2).any(|w| w[0] == w[1]) {
            return Err(PathError::BadPolyline);
        }
        let mut cumulative = vec![0.0];
        for w in nodes.windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + (w[1] - w[0]).norm());
        }
        Ok(PathPolyline { nodes, cumulative })
    }

    pub fn segment(a: C64, b: C64) -> Result<Self, PathError> {
        Self::new(vec![a, b])
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn start(&self) -> C64 {
        self.nodes[0]
    }

    pub fn end(&self) -> C64 {
        *self.nodes.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut n = self.nodes.clone();
        n.reverse();
        Self::new(n).expect("reversal keeps validity")
    }

    pub fn point_at(&self, t: f64) -> C64 {
        if t >= 1.0 {
            return self.end();
        }
        if t <= 0.0 {
            return self.start();
        }
        let s = t * self.length();
        let k = self.cumulative.partition_point(|c| *c <= s).clamp(1, self.nodes.len() - 1);
        let (s0, s1) = (self.cumulative[k - 1], self.cumulative[k]);
        let f = (s - s0) / (s1 - s0);
        self.nodes[k - 1] + (self.nodes[k] - self.nodes[k - 1]) * f
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackedRoots {
    /// Path parameters of accepted steps, starting at 0 and ending at 1.
    pub params: Vec<f64>,
    /// Root tuples; `roots[k][i]` is track `i` at step `k`.
    pub roots: Vec<Vec<C64>>,
    pub residuals: Vec<Vec<f64>>,
    /// `permutations[k][i]`: index in the raw root list at step `k` assigned
    /// to track `i`.
    pub permutations: Vec<Vec<usize>>,
    /// The last step was accepted by the endpoint rule (roots colliding).
    pub final_snap: bool,
}

impl TrackedRoots {
    pub fn final_roots(&self) -> &[C64] {
        self.roots.last().expect("at least one step")
    }

    pub fn trajectory(&self, track: usize) -> Vec<C64> {
        self.roots.iter().map(|r| r[track]).collect()
    }

    /// `step,track_id,re,im,residual` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,track_id,re,im,residual\n");
        for (k, (rs, res)) in self.roots.iter().zip(&self.residuals).enumerate() {
            for (i, (z, r)) in rs.iter().zip(res).enumerate() {
                let _ = writeln!(s, "{k},{i},{:.12e},{:.12e},{:.3e}", z.re, z.im, r);
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ContinuationOptions {
    pub tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Remaining parameter below which the endpoint rule applies.
    pub end_snap: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            tol: 1e-10,
            initial_step: 1.0 / 64.0,
            max_step: 1.0 / 16.0,
            min_step: 1e-15,
            end_snap: 1e-9,
        }
    }
}

fn solve_seeded(p: &CPoly, seed: &[C64]) -> Vec<C64> {
    aberth(p, seed, 200).into_iter().map(|z| newton_polish(p, z)).collect()
}

/// Predictor–corrector continuation of all roots of `family(z)` as `z`
/// runs along `path`. A step is accepted when every residual is below
/// `tol` and the smallest pairwise root distance exceeds three times the
/// largest matching displacement; otherwise the step halves.
pub fn continue_roots<F>(family: F, path: &PathPolyline, opts: &ContinuationOptions) -> Result<TrackedRoots, PathError>
where
    F: Fn(C64) -> CPoly,
{
    let p0 = family(path.start());
    let deg = p0.degree();
    let start = all_roots(&p0, opts.tol)?;
    let mut out = TrackedRoots {
        params: vec![0.0],
        roots: vec![start.roots.clone()],
        residuals: vec![start.residuals.clone()],
        permutations: vec![(0..deg).collect()],
        final_snap: false,
    };
    let mut t = 0.0;
    let mut h = opts.initial_step;
    let mut prev = start.roots;
    let mut velocity: Option<Vec<C64>> = None;
    while t < 1.0 {
        let remaining = 1.0 - t;
        let snap = remaining <= opts.end_snap;
        let tn = if snap { 1.0 } else { (t + h).min(1.0) };
        let p = family(path.point_at(tn));
        if p.degree() != deg {
            return Err(PathError::DegreeChange);
        }
        let seed: Vec<C64> = match &velocity {
            Some(v) if !snap => prev.iter().zip(v).map(|(z, dz)| z + dz * (tn - t)).collect(),
            _ => prev.clone(),
        };
        let raw = solve_seeded(&p, &seed);
        let perm = match_points(&prev, &raw, |a, b| (a - b).norm());
        let cur: Vec<C64> = perm.iter().map(|&j| raw[j]).collect();
        let res: Vec<f64> = cur.iter().map(|z| p.residual(*z)).collect();
        let disp = prev.iter().zip(&cur).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let sep = min_pairwise_distance(&cur);
        let res_ok = res.iter().all(|r| *r < opts.tol);
        if snap || (res_ok && sep > 3.0 * disp) {
            if snap && !res_ok {
                return Err(PathError::NonConvergence(res.iter().cloned().fold(0.0, f64::max)));
            }
            velocity = Some(prev.iter().zip(&cur).map(|(a, b)| (b - a) / (tn - t)).collect());
            out.params.push(tn);
            out.roots.push(cur.clone());
            out.residuals.push(res);
            out.permutations.push(perm);
            out.final_snap = snap;
            prev = cur;
            t = tn;
            h = (h * 1.5).min(opts.max_step);
        } else {
            h *= 0.5;
            velocity = None;
            if h < opts.min_step {
                if 1.0 - t <= opts.end_snap.max(1e-6) {
                    // close enough that the endpoint rule applies next round
                    h = opts.min_step;
                    t = 1.0 - opts.end_snap * 0.5;
                    continue;
                }
                return Err(PathError::StepUnderflow(t));
            }
        }
    }
    Ok(out)
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const GL_ORDER: usize = 20;

fn gl_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(GL_ORDER))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Singular {
    None,
    Start(usize),
    End(usize),
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    z0: C64,
    z1: C64,
    sing: Singular,
}

impl Piece {
    /// `(x(v), dx/dv, x − root)` for `v ∈ [0, 1]`.
    fn map(&self, v: f64) -> (C64, C64, Option<C64>) {
        let d = self.z1 - self.z0;
        match self.sing {
            Singular::None => (self.z0 + d * v, d, None),
            Singular::Start(_) => {
                let off = d * (v * v);
                (self.z0 + off, d * (2.0 * v), Some(off))
            }
            Singular::End(_) => {
                let u = 1.0 - v;
                let off = -d * (u * u);
                (self.z1 + off, d * (2.0 * u), Some(off))
            }
        }
    }
}

/// Cubic `lead · Π (x − r_i)` in factored form.
#[derive(Clone, Debug)]
pub struct FactoredCubic {
    pub lead: C64,
    pub roots: [C64; 3],
}

impl FactoredCubic {
    pub fn from_cpoly(p: &CPoly) -> Result<Self, PathError> {
        if p.degree() != 3 {
            return Err(PathError::NotCubic);
        }
        let rs = all_roots(p, 1e-10)?;
        Ok(FactoredCubic { lead: p.coeffs[3], roots: [rs.roots[0], rs.roots[1], rs.roots[2]] })
    }

    fn y2(&self, x: C64, sing: Option<(usize, C64)>) -> C64 {
        let mut acc = self.lead;
        for (i, r) in self.roots.iter().enumerate() {
            acc *= match sing {
                Some((k, off)) if k == i => off,
                _ => x - r,
            };
        }
        acc
    }

    fn root_index(&self, z: C64) -> Option<usize> {
        let scale = 1.0 + self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        self.roots.iter().position(|r| (z - r).norm() <= 1e-9 * scale)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntegralValue {
    pub value: C64,
    pub error_estimate: f64,
    /// Branch of `y` at the first and last quadrature nodes.
    pub y_first: C64,
    pub y_last: C64,
}

/// How the branch of `y` is fixed at the first quadrature node.
#[derive(Clone, Copy, Debug)]
pub enum BranchSeed {
    /// `sign` times the principal square root.
    Sign(f64),
    /// The square root closest to the given value.
    Near(C64),
}

struct PanelRule<'a> {
    cubic: &'a FactoredCubic,
    pieces: Vec<Piece>,
}

impl PanelRule<'_> {
    fn panel_ok(&self, piece: &Piece, v0: f64, v1: f64) -> bool {
        let (xa, _, _) = piece.map(v0);
        let (xb, _, _) = piece.map(v1);
        let (xm, _, _) = piece.map(0.5 * (v0 + v1));
        let len = (xb - xa).norm().max((xm - xa).norm() * 2.0);
        let skip = match piece.sing {
            Singular::Start(k) | Singular::End(k) => Some(k),
            Singular::None => None,
        };
        let dist = self
            .cubic
            .roots
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, r)| (xm - r).norm())
            .fold(f64::INFINITY, f64::min);
        len <= 0.5 * dist
    }

    fn base_panels(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for (pi, piece) in self.pieces.iter().enumerate() {
            let mut stack = vec![(0.0, 1.0, 0u32)];
            let mut done = Vec::new();
            while let Some((a, b, depth)) = stack.pop() {
                if depth >= 40 || self.panel_ok(piece, a, b) {
                    done.push((a, b));
                } else {
                    let m = 0.5 * (a + b);
                    stack.push((m, b, depth + 1));
                    stack.push((a, m, depth + 1));
                }
            }
            done.sort_by(|x, y| x.0.total_cmp(&y.0));
            out.extend(done.into_iter().map(|(a, b)| (pi, a, b)));
        }
        out
    }

    /// Integrates with each base panel split into `split` equal parts,
    /// continuing the branch of `y` from `seed` at the first node.
    fn integrate(
        &self,
        panels: &[(usize, f64, f64)],
        split: usize,
        seed: BranchSeed,
    ) -> Result<(C64, C64, C64), PathError> {
        let (gx, gw) = gl_nodes();
        let mut total = C64::new(0.0, 0.0);
        let mut prev_y: Option<C64> = None;
        let mut first_y = None;
        for &(pi, a, b) in panels {
            let piece = &self.pieces[pi];
            let sing_idx = match piece.sing {
                Singular::Start(k) | Singular::End(k) => Some(k),
                Singular::None => None,
            };
            let hstep = (b - a) / split as f64;
            for s in 0..split {
                let (pa, pb) = (a + hstep * s as f64, a + hstep * (s + 1) as f64);
                let half = 0.5 * (pb - pa);
                let mid = 0.5 * (pa + pb);
                for (xi, wi) in gx.iter().zip(gw) {
                    let v = mid + half * xi;
                    let (x, dxdv, off) = piece.map(v);
                    let y2 = self.cubic.y2(x, sing_idx.zip(off));
                    let r = y2.sqrt();
                    let y = match prev_y {
                        None => {
                            let y0 = match seed {
                                BranchSeed::Sign(sg) => r * sg,
                                BranchSeed::Near(t) => {
                                    if (r - t).norm() <= (r + t).norm() {
                                        r
                                    } else {
                                        -r
                                    }
                                }
                            };
                            first_y = Some(y0);
                            y0
                        }
                        Some(py) => {
                            let (dp, dm) = ((r - py).norm(), (r + py).norm());
                            if dp.min(dm) > 0.9 * dp.max(dm) {
                                return Err(PathError::BranchTracking(x));
                            }
                            if dp <= dm {
                                r
                            } else {
                                -r
                            }
                        }
                    };
                    prev_y = Some(y);
                    total += dxdv / y * (wi * half);
                }
            }
        }
        let zero = C64::new(0.0, 0.0);
        Ok((total, first_y.unwrap_or(zero), prev_y.unwrap_or(zero)))
    }
}

/// `∫ dx / y` along `path` on `y² = cubic(x)`. Path endpoints (or interior
/// nodes) may sit on roots; such pieces use `x = root + (…)·v²`. The branch
/// of `y` is `seed_sign` times the principal root at the first quadrature
/// node and is continued along the path.
pub fn elliptic_integral(cubic: &CPoly, path: &PathPolyline, seed: BranchSeed) -> Result<IntegralValue, PathError> {
    let fc = FactoredCubic::from_cpoly(cubic)?;
    elliptic_integral_factored(&fc, path, seed)
}

pub fn elliptic_integral_factored(
    fc: &FactoredCubic,
    path: &PathPolyline,
    seed: BranchSeed,
) -> Result<IntegralValue, PathError> {
    let mut pieces = Vec::new();
    let nodes = path.nodes();
    for w in nodes.windows(2) {
        let (mut z0, mut z1) = (w[0], w[1]);
        let (r0, r1) = (fc.root_index(z0), fc.root_index(z1));
        if let Some(k) = r0 {
            z0 = fc.roots[k];
        }
        if let Some(k) = r1 {
            z1 = fc.roots[k];
        }
        match (r0, r1) {
            (Some(a), Some(b)) => {
                let m = 0.5 * (z0 + z1);
                pieces.push(Piece { z0, z1: m, sing: Singular::Start(a) });
                pieces.push(Piece { z0: m, z1, sing: Singular::End(b) });
            }
            (Some(a), None) => pieces.push(Piece { z0, z1, sing: Singular::Start(a) }),
            (None, Some(b)) => pieces.push(Piece { z0, z1, sing: Singular::End(b) }),
            (None, None) => pieces.push(Piece { z0, z1, sing: Singular::None }),
        }
    }
    let rule = PanelRule { cubic: fc, pieces };
    let panels = rule.base_panels();
    let (mut coarse, _, _) = rule.integrate(&panels, 1, seed)?;
    let mut split = 2;
    loop {
        let (fine, y_first, y_last) = rule.integrate(&panels, split, seed)?;
        let err = (fine - coarse).norm();
        if err < 1e-11 * (1.0 + fine.norm()) || split >= 16 {
            if err >= 1e-9 {
                return Err(PathError::Quadrature(err));
            }
            return Ok(IntegralValue { value: fine, error_estimate: err, y_first, y_last });
        }
        coarse = fine;
        split *= 2;
    }
}

/// Periods of `y² = x³ + εx`: `ω_a = 2∫` over `[−√(−ε), 0]` and
/// `ω_b = 2∫` over `[0, √(−ε)]`, principal-branch seeds.
pub fn period_lattice(eps: f64) -> Result<(C64, C64), PathError> {
    if !(eps > 0.0) {
        return Err(PathError::NonPositiveEpsilon);
    }
    let cubic = CPoly::from_real(&[0.0, eps, 0.0, 1.0]);
    let s = C64::new(0.0, eps.sqrt());
    let zero = C64::new(0.0, 0.0);
    let wa = elliptic_integral(&cubic, &PathPolyline::segment(-s, zero)?, BranchSeed::Sign(1.0))?.value * 2.0;
    let wb = elliptic_integral(&cubic, &PathPolyline::segment(zero, s)?, BranchSeed::Sign(1.0))?.value * 2.0;
    Ok((wa, wb))
}

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (na, nb) = (0.5 * (a + b), (a * b).sqrt());
        a = na;
        b = nb;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    a
}

/// Solves `w = m·p1 + n·p2` over the reals.
pub fn real_coords(w: C64, p1: C64, p2: C64) -> Option<(f64, f64)> {
    let det = p1.re * p2.im - p2.re * p1.im;
    if det.abs() < 1e-300 {
        return None;
    }
    let m = (w.re * p2.im - p2.re * w.im) / det;
    let n = (p1.re * w.im - w.re * p1.im) / det;
    Some((m, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quadratic_roots() {
        let rs = all_roots(&CPoly::from_real(&[-1.0, 0.0, 1.0]), 1e-12).unwrap();
        let mut re: Vec<f64> = rs.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn triple_zero_is_one_cluster() {
        let rs = all_roots(&CPoly::from_real(&[0.0, 0.0, 0.0, 1.0]), 1e-12).unwrap();
        assert_eq!(rs.clusters.len(), 1);
        assert_eq!(rs.clusters[0].multiplicity, 3);
    }

    #[test]
    fn hungarian_picks_optimum() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        assert_eq!(hungarian(&cost), vec![1, 0, 2]);
    }

    #[test]
    fn sqrt_family_collides_at_end() {
        let path = PathPolyline::segment(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let tr =
            continue_roots(|t| CPoly::new(vec![-t, c(0.0, 0.0), c(1.0, 0.0)]), &path, &Default::default()).unwrap();
        let end = tr.final_roots();
        assert!(end[0].norm() < 1e-4 && end[1].norm() < 1e-4);
        assert!(tr.final_snap);
        // tracks keep their sign of the real part along the way
        assert!(tr.roots.iter().all(|r| r[0].re * r[1].re <= 0.0));
    }

    #[test]
    fn constant_family_is_stationary() {
        let path = PathPolyline::segment(c(0.0, 0.0), c(1.0, 1.0)).unwrap();
        let p = CPoly::from_real(&[2.0, -3.0, 1.0]);
        let tr = continue_roots(|_| p.clone(), &path, &Default::default()).unwrap();
        let first = &tr.roots[0];
        for r in &tr.roots {
            for (a, b) in r.iter().zip(first) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn period_matches_agm() {
        let eps: f64 = 0.01;
        let (wa, wb) = period_lattice(eps).unwrap();
        let q = eps.powf(0.25);
        let expected = 2.0 * std::f64::consts::PI / agm(2f64.sqrt() * q, q);
        assert!((wa.norm() - expected).abs() < 1e-9, "{} vs {}", wa.norm(), expected);
        assert!((wb.norm() - expected).abs() < 1e-9);
        assert!((wa / wb).im.abs() > 0.1);
    }

    #[test]
    fn reversal_negates() {
        let cubic = CPoly::from_real(&[0.0, 0.01, 0.0, 1.0]);
        let path = PathPolyline::new(vec![c(0.3, 0.2), c(0.5, -0.1), c(0.2, -0.4)]).unwrap();
        let f = elliptic_integral(&cubic, &path, BranchSeed::Sign(1.0)).unwrap();
        let b = elliptic_integral(&cubic, &path.reversed(), BranchSeed::Near(f.y_last)).unwrap();
        assert!((f.value + b.value).norm() < 1e-9);
    }

    #[test]
    fn loop_without_roots_vanishes() {
        let cubic = CPoly::from_real(&[0.0, 0.01, 0.0, 1.0]);
        let sq = vec![c(1.0, 1.0), c(2.0, 1.0), c(2.0, 2.0), c(1.0, 2.0), c(1.0, 1.0)];
        let v = elliptic_integral(&cubic, &PathPolyline::new(sq).unwrap(), BranchSeed::Sign(1.0)).unwrap();
        assert!(v.value.norm() < 1e-9);
    }
}
