//! Integer symmetric lattices: short vectors, ADE recognition, the
//! hyperbolic model `I^{1,ℓ}`, fundamental weights, and the decomposition
//! of the charge kernel of a fibration pseudolattice.

use std::collections::HashSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{format_rational, Rational};
use crate::intmat::{self, IMat, IVec};
use crate::pseudolattice::{self, ChargeMap, LatticeError, Pseudolattice};

pub use crate::intmat::integer_kernel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is indefinite")]
    Indefinite,
    #[error("lattice is degenerate (radical rank {0})")]
    Degenerate(usize),
    #[error("not a root lattice: {0}")]
    NotRootLattice(String),
    #[error("simple roots are linearly dependent")]
    DependentRoots,
    #[error("no integral fundamental weight for simple root {0}")]
    NoIntegralWeight(usize),
    #[error("ℓ must be 6, 7 or 8 (got {0})")]
    InvalidEll(usize),
    #[error("decomposition check failed: {0}")]
    Decomposition(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntLattice {
    pub gram: IMat,
}

impl IntLattice {
    pub fn new(gram: IMat) -> Result<Self, RootError> {
        if !intmat::is_symmetric(&gram) {
            return Err(RootError::NotSymmetric);
        }
        Ok(IntLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn radical_rank(&self) -> usize {
        self.rank() - intmat::rank(&self.gram)
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        intmat::bilinear(&self.gram, v, v)
    }

    /// `+1` for positive definite, `−1` for negative definite.
    pub fn definiteness(&self) -> Result<i64, RootError> {
        let (pos, neg, zero) = intmat::signature(&self.gram);
        if zero > 0 {
            return Err(RootError::Degenerate(zero));
        }
        match (pos, neg) {
            (_, 0) => Ok(1),
            (0, _) => Ok(-1),
            _ => Err(RootError::Indefinite),
        }
    }

    fn scaled(&self, s: i64) -> IMat {
        self.gram.iter().map(|r| r.iter().map(|x| s * x).collect()).collect()
    }
}

/// All nonzero `v` with `|⟨v, v⟩| ≤ bound`, sorted lexicographically.
pub fn short_vectors(l: &IntLattice, bound: i64) -> Result<Vec<IVec>, RootError> {
    let sign = l.definiteness()?;
    let g = l.scaled(sign);
    let n = g.len();
    // q[i][i] and q[i][j] (j > i) with Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for m in k..n {
                q[k][m] -= q[k][i] * q[i][m];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    if n > 0 {
        enumerate(&q, &g, bound, n - 1, bound as f64, &mut x, &mut out);
    }
    out.sort();
    Ok(out)
}

fn enumerate(q: &[Vec<f64>], g: &IMat, bound: i64, i: usize, remaining: f64, x: &mut IVec, out: &mut Vec<IVec>) {
    let n = x.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = (remaining.max(0.0) / q[i][i]).sqrt() + 1e-9;
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for xi in lo..=hi {
        x[i] = xi;
        let t = xi as f64 - center;
        let rest = remaining - q[i][i] * t * t;
        if rest < -1e-9 {
            continue;
        }
        if i == 0 {
            if x.iter().any(|&c| c != 0) && intmat::bilinear(g, x, x) <= bound {
                out.push(x.clone());
            }
        } else {
            enumerate(q, g, bound, i - 1, rest, x, out);
        }
    }
    x[i] = 0;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSystemReport {
    pub definiteness: i64,
    pub abs_det: i64,
    pub root_count: usize,
    /// Simple roots in lattice coordinates.
    pub simple_roots: Vec<IVec>,
    pub cartan: IMat,
    pub dynkin_edges: Vec<(usize, usize)>,
    pub dynkin: String,
}

fn component_type(nodes: &[usize], adj: &[Vec<usize>]) -> Option<String> {
    let n = nodes.len();
    let branch: Vec<usize> = nodes.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
    if nodes.iter().any(|&v| adj[v].len() > 3) || branch.len() > 1 {
        return None;
    }
    let edges: usize = nodes.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges != n - 1 {
        return None;
    }
    let Some(&b) = branch.first() else {
        return Some(format!("A{n}"));
    };
    let mut legs: Vec<usize> = adj[b]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (b, start, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [w] => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => return len,
                }
            }
        })
        .collect();
    legs.sort();
    match legs.as_slice() {
        [1, 1, r] => Some(format!("D{}", r + 3)),
        [1, 2, 2] => Some("E6".into()),
        [1, 2, 3] => Some("E7".into()),
        [1, 2, 4] => Some("E8".into()),
        _ => None,
    }
}

/// Names the Dynkin diagram with the given edges on `n` nodes, components
/// joined by `+` in sorted order.
pub fn dynkin_type(n: usize, edges: &[(usize, usize)]) -> Option<String> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut names = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            for &w in &adj[comp[k]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        names.push(component_type(&comp, &adj)?);
    }
    names.sort();
    Some(names.join("+"))
}

pub fn root_system_identify(l: &IntLattice) -> Result<RootSystemReport, RootError> {
    let sign = l.definiteness()?;
    let g = l.scaled(sign);
    let n = l.rank();
    let roots = short_vectors(l, 2)?;
    let roots: Vec<IVec> = roots.into_iter().filter(|v| intmat::bilinear(&g, v, v) == 2).collect();
    let base = 2 * roots.iter().flatten().map(|x| x.abs()).max().unwrap_or(0) as i128 + 1;
    let weights: Vec<i128> = (0..n).map(|i| base.pow(i as u32)).collect();
    let height = |v: &IVec| -> i128 { v.iter().zip(&weights).map(|(&x, w)| x as i128 * w).sum() };
    let positive: Vec<&IVec> = roots.iter().filter(|v| height(v) > 0).collect();
    let pos_set: HashSet<&IVec> = positive.iter().copied().collect();
    let simple: Vec<IVec> = positive
        .iter()
        .filter(|a| {
            !positive.iter().any(|b| {
                let diff: IVec = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                pos_set.contains(&diff)
            })
        })
        .map(|v| (*v).clone())
        .collect();
    let cartan = intmat::gram_in_basis(&g, &simple);
    let k = simple.len();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            match cartan[i][j] {
                0 => {}
                -1 => edges.push((i, j)),
                x => return Err(RootError::NotRootLattice(format!("Cartan entry {x}"))),
            }
        }
    }
    let abs_det = intmat::det(&l.gram).abs().to_i64().unwrap_or(i64::MAX);
    let cartan_det = if k == 0 { 1 } else { intmat::det(&cartan).abs().to_i64().unwrap_or(i64::MAX) };
    if k != n || cartan_det != abs_det {
        return Err(RootError::NotRootLattice(format!(
            "{k} simple roots of rank {n}, |det Cartan| = {cartan_det}, |det L| = {abs_det}"
        )));
    }
    let dynkin = dynkin_type(k, &edges).ok_or_else(|| RootError::NotRootLattice("unrecognized Dynkin graph".into()))?;
    Ok(RootSystemReport {
        definiteness: sign,
        abs_det,
        root_count: roots.len(),
        simple_roots: simple,
        cartan,
        dynkin_edges: edges,
        dynkin,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicModel {
    pub ell: usize,
    pub gram: IMat,
    pub k: IVec,
    pub k_square: i64,
    /// Basis of `k⊥` in ambient coordinates.
    pub perp: Vec<IVec>,
    pub report: RootSystemReport,
}

impl HyperbolicModel {
    /// Simple roots of `k⊥` in ambient coordinates.
    pub fn simple_roots(&self) -> Vec<IVec> {
        self.report.simple_roots.iter().map(|c| lift(&self.perp, c)).collect()
    }
}

fn lift(basis: &[IVec], coords: &[i64]) -> IVec {
    let n = basis.first().map_or(0, |b| b.len());
    (0..n).map(|r| basis.iter().zip(coords).map(|(b, c)| b[r] * c).sum()).collect()
}

/// `I^{1,ℓ}` with `k_ℓ = (−3, 1, …, 1)` and the root system of `k⊥`.
pub fn hyperbolic_model(ell: usize) -> Result<HyperbolicModel, RootError> {
    if !(6..=8).contains(&ell) {
        return Err(RootError::InvalidEll(ell));
    }
    let n = ell + 1;
    let mut gram = intmat::zeros(n, n);
    gram[0][0] = 1;
    for i in 1..n {
        gram[i][i] = -1;
    }
    let mut k = vec![1; n];
    k[0] = -3;
    let k_square = intmat::bilinear(&gram, &k, &k);
    let row = vec![intmat::mat_vec(&gram, &k)];
    let perp = intmat::integer_kernel(&row, n);
    let report = root_system_identify(&IntLattice::new(intmat::gram_in_basis(&gram, &perp))?)?;
    Ok(HyperbolicModel { ell, gram, k, k_square, perp, report })
}

/// Integral `w_i` with `⟨w_i, β_j⟩ = δ_ij` in the ambient lattice.
pub fn fundamental_weights(ambient: &IntLattice, simple_roots: &[IVec]) -> Result<Vec<IVec>, RootError> {
    if intmat::rank(&simple_roots.to_vec()) != simple_roots.len() {
        return Err(RootError::DependentRoots);
    }
    let rows: IMat = simple_roots.iter().map(|b| intmat::mat_vec(&ambient.gram, b)).collect();
    (0..simple_roots.len())
        .map(|i| {
            let rhs: IVec = (0..simple_roots.len()).map(|j| (i == j) as i64).collect();
            intmat::solve_integer_system(&rows, &rhs).ok_or(RootError::NoIntegralWeight(i))
        })
        .collect()
}

/// Basis of `span(vectors) / ⟨p⟩` lifted to ambient coordinates, given that
/// `p` is primitive in the span.
fn complement_of(vectors: &[IVec], p: &[i64]) -> Result<Vec<IVec>, RootError> {
    let coords =
        intmat::solve_integer(vectors, p).ok_or_else(|| RootError::Decomposition("p not in the lattice".into()))?;
    let u =
        intmat::complete_to_unimodular(&coords).ok_or_else(|| RootError::Decomposition("p not primitive".into()))?;
    let k = vectors.len();
    Ok((1..k).map(|j| lift(vectors, &(0..k).map(|i| u[i][j]).collect::<IVec>())).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDecomposition {
    pub ell: usize,
    pub kernel: Vec<IVec>,
    pub point: IVec,
    pub point_in_kernel: bool,
    pub symmetric: bool,
    pub radical_is_point: bool,
    pub orthogonal: bool,
    /// Lifts of a basis of `ker / ⟨p⟩`.
    pub quotient_basis: Vec<IVec>,
    pub quotient_gram: IMat,
    pub root_system: RootSystemReport,
}

impl KernelDecomposition {
    pub fn passed(&self) -> bool {
        self.point_in_kernel
            && self.symmetric
            && self.radical_is_point
            && self.orthogonal
            && self.root_system.dynkin == format!("E{}", self.ell)
    }
}

pub fn kernel_decomposition(p: &Pseudolattice, c: &ChargeMap) -> Result<KernelDecomposition, RootError> {
    let kernel = pseudolattice::charge_kernel(p, c)?;
    let pt = pseudolattice::point_like(p)?;
    let point_in_kernel = c.charge(&pt).m == 0 && c.charge(&pt).n == 0;
    let gk = intmat::gram_in_basis(&p.gram, &kernel);
    let symmetric = intmat::is_symmetric(&gk);
    let radical = intmat::integer_kernel(&gk, kernel.len());
    let radical_is_point = radical.len() == 1 && {
        let r = lift(&kernel, &radical[0]);
        r == pt || r.iter().map(|x| -x).collect::<IVec>() == pt
    };
    let orthogonal = kernel.iter().all(|x| p.pair(&pt, x) == 0 && p.pair(x, &pt) == 0);
    let quotient_basis = complement_of(&kernel, &pt)?;
    let quotient_gram = intmat::gram_in_basis(&p.gram, &quotient_basis);
    let root_system = root_system_identify(&IntLattice::new(quotient_gram.clone())?)?;
    Ok(KernelDecomposition {
        ell: kernel.len() - 1,
        kernel,
        point: pt,
        point_in_kernel,
        symmetric,
        radical_is_point,
        orthogonal,
        quotient_basis,
        quotient_gram,
        root_system,
    })
}

pub type QVec = Vec<Rational>;

fn to_q(v: &[i64]) -> QVec {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

fn q_pair(g: &IMat, u: &[Rational], v: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if g[i][j] != 0 {
                s += ui * vj * Rational::from_integer(g[i][j].into());
            }
        }
    }
    s
}

fn q_axpy(u: &[Rational], c: &Rational, v: &[i64]) -> QVec {
    u.iter().zip(v).map(|(a, &b)| a - c * Rational::from_integer(b.into())).collect()
}

fn fmt_matrix(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramMismatch {
    pub row: usize,
    pub col: usize,
    pub computed: String,
    pub displayed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct KuznetsovReport {
    pub d: i64,
    /// `([O], k, β₁, …, β_ℓ, p)` in ambient coordinates.
    pub basis: Vec<Vec<String>>,
    pub gram: Vec<Vec<String>>,
    pub displayed: Vec<Vec<String>>,
    pub mismatches: Vec<GramMismatch>,
    pub root_system: RootSystemReport,
}

impl KuznetsovReport {
    /// All entries agree except possibly `⟨k, k⟩`, which Riemann–Roch
    /// gives as `−d` against the displayed `d`.
    pub fn matches_up_to_kk_sign(&self) -> bool {
        self.mismatches.iter().all(|m| {
            m.row == 1 && m.col == 1 && m.computed == format_rational(&Rational::from_integer((-self.d).into()))
        })
    }
}

/// The displayed Gram of `([O], k, β, p)`: `[[1, −d/2], [d/2, d]]`, the
/// Cartan block, and the `⟨O, p⟩ = ⟨p, O⟩ = 1` corner.
pub fn kuznetsov_display(d: i64, cartan: &IMat) -> Vec<Vec<Rational>> {
    let ell = cartan.len();
    let n = ell + 3;
    let mut m = vec![vec![Rational::zero(); n]; n];
    let half = Rational::new(d.into(), 2.into());
    m[0][0] = Rational::from_integer(1.into());
    m[0][1] = -half.clone();
    m[1][0] = half;
    m[1][1] = Rational::from_integer(d.into());
    m[0][n - 1] = Rational::from_integer(1.into());
    m[n - 1][0] = Rational::from_integer(1.into());
    for i in 0..ell {
        for j in 0..ell {
            m[2 + i][2 + j] = Rational::from_integer(cartan[i][j].into());
        }
    }
    m
}

/// Builds `([O], k, β₁, …, β_ℓ, p)` in a surface-like pseudolattice from a
/// rank-one exceptional vector `o`: `k` is `S·o − o` shifted by a multiple
/// of `p` to have vanishing second Chern character, and the `β_i` are
/// simple roots of `k⊥ ⊂ p⊥ / p` normalized the same way.
pub fn kuznetsov_basis_in(p: &Pseudolattice, o: &[i64]) -> Result<KuznetsovReport, RootError> {
    let pt = pseudolattice::point_like(p)?;
    pseudolattice::check_surface_like(p, &pt)?;
    let pt = if p.pair(&pt, o) < 0 { pt.iter().map(|x| -x).collect() } else { pt };
    if p.pair(&pt, o) != 1 || p.pair(o, o) != 1 {
        return Err(RootError::Decomposition("o is not a rank-one exceptional vector".into()));
    }
    let s = pseudolattice::serre(p)?;
    let so = intmat::mat_vec(&s, o);
    let k_lift: IVec = so.iter().zip(o).map(|(a, b)| a - b).collect();
    let d = -p.pair(&k_lift, &k_lift);
    let shift = Rational::from_integer(p.pair(o, &k_lift).into()) + Rational::new(d.into(), 2.into());
    let k = q_axpy(&to_q(&k_lift), &shift, &pt);

    let g = &p.gram;
    let rows = vec![intmat::mat_vec(&intmat::transpose(g), &pt), intmat::mat_vec(&intmat::transpose(g), &k_lift)];
    let perp = intmat::integer_kernel(&rows, p.rank());
    let quotient = complement_of(&perp, &pt)?;
    let report = root_system_identify(&IntLattice::new(intmat::gram_in_basis(g, &quotient))?)?;
    let betas: Vec<QVec> = report
        .simple_roots
        .iter()
        .map(|c| {
            let v = lift(&quotient, c);
            q_axpy(&to_q(&v), &Rational::from_integer(p.pair(o, &v).into()), &pt)
        })
        .collect();

    let mut basis = vec![to_q(o), k];
    basis.extend(betas);
    basis.push(to_q(&pt));
    let gram: Vec<Vec<Rational>> = basis.iter().map(|u| basis.iter().map(|v| q_pair(g, u, v)).collect()).collect();
    let displayed = kuznetsov_display(d, &report.cartan);
    let mut mismatches = Vec::new();
    for i in 0..gram.len() {
        for j in 0..gram.len() {
            if gram[i][j] != displayed[i][j] {
                mismatches.push(GramMismatch {
                    row: i,
                    col: j,
                    computed: format_rational(&gram[i][j]),
                    displayed: format_rational(&displayed[i][j]),
                });
            }
        }
    }
    Ok(KuznetsovReport {
        d,
        basis: fmt_matrix(&basis),
        gram: fmt_matrix(&gram),
        displayed: fmt_matrix(&displayed),
        mismatches,
        root_system: report,
    })
}

/// Kuznetsov basis in the `M_ℓ` model of `K₀(X_d)` with `[O] = e₀`.
pub fn kuznetsov_basis(d: u8) -> Result<KuznetsovReport, RootError> {
    if !(1..=3).contains(&d) {
        return Err(RootError::InvalidEll(9 - d as usize));
    }
    let p = Pseudolattice::new(pseudolattice::del_pezzo_gram(9 - d as usize))?;
    kuznetsov_basis_in(&p, &p.standard_basis().vectors[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub kernel_rank: usize,
    /// Two vectors completing `ker(c)` over `Q`, orthogonal to the `E_ℓ` part.
    pub complement: Vec<IVec>,
    pub charge_rank_on_complement: usize,
    pub max_cross_pairing: i64,
    pub passed: bool,
}

/// `K ⊗ Q = ker(c_Q) ⊕ W` with `W` orthogonal, modulo `p`, to `ker(c)`.
pub fn rational_splitting(p: &Pseudolattice, c: &ChargeMap) -> Result<SplittingReport, RootError> {
    let dec = kernel_decomposition(p, c)?;
    let g = &p.gram;
    let gt = intmat::transpose(g);
    let mut rows: IMat = Vec::new();
    for x in &dec.quotient_basis {
        rows.push(intmat::mat_vec(&gt, x));
        rows.push(intmat::mat_vec(g, x));
    }
    // vectors pairing to zero on both sides with the chosen E_ℓ lifts
    let w_full = intmat::integer_kernel(&rows, p.rank());
    let mut complement: Vec<IVec> = Vec::new();
    for w in &w_full {
        let mut cand = complement.clone();
        cand.push(w.clone());
        let charges: IMat = cand.iter().map(|v| vec![c.charge(v).m, c.charge(v).n]).collect();
        if intmat::rank(&charges) == cand.len() {
            complement = cand;
        }
        if complement.len() == 2 {
            break;
        }
    }
    let charges: IMat = complement.iter().map(|v| vec![c.charge(v).m, c.charge(v).n]).collect();
    let charge_rank_on_complement = if charges.is_empty() { 0 } else { intmat::rank(&charges) };
    let max_cross_pairing = complement
        .iter()
        .flat_map(|w| dec.quotient_basis.iter().map(move |x| (w, x)))
        .map(|(w, x)| p.pair(w, x).abs().max(p.pair(x, w).abs()))
        .max()
        .unwrap_or(0);
    let mut all = dec.kernel.clone();
    all.extend(complement.iter().cloned());
    let spans = intmat::rank(&all) == p.rank();
    Ok(SplittingReport {
        kernel_rank: dec.kernel.len(),
        passed: dec.passed() && charge_rank_on_complement == 2 && max_cross_pairing == 0 && spans,
        complement,
        charge_rank_on_complement,
        max_cross_pairing,
    })
}

/// Cartan matrix of a named simply-laced type in Bourbaki numbering.
pub fn cartan_matrix(name: &str) -> Option<IMat> {
    let (kind, n) = name.split_at(1);
    let n: usize = n.parse().ok()?;
    let mut edges: Vec<(usize, usize)> = match kind {
        "A" => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        "D" if n >= 4 => {
            let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
            e.push((n - 3, n - 1));
            e
        }
        "E" if (6..=8).contains(&n) => {
            let mut e = vec![(0, 2), (1, 3), (2, 3)];
            e.extend((3..n - 1).map(|i| (i, i + 1)));
            e
        }
        _ => return None,
    };
    edges.sort();
    let mut m = intmat::identity(n);
    for r in m.iter_mut() {
        for x in r.iter_mut() {
            *x *= 2;
        }
    }
    for (i, j) in edges {
        m[i][j] = -1;
        m[j][i] = -1;
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(name: &str) -> IntLattice {
        IntLattice::new(cartan_matrix(name).unwrap()).unwrap()
    }

    #[test]
    fn kernel_trivial_cases() {
        assert_eq!(integer_kernel(&vec![vec![1, 0]], 2), vec![vec![0, 1]]);
        assert!(integer_kernel(&intmat::identity(3), 3).is_empty());
    }

    #[test]
    fn root_counts() {
        assert_eq!(short_vectors(&lat("E8"), 2).unwrap().len(), 240);
        assert_eq!(short_vectors(&lat("E6"), 2).unwrap().len(), 72);
        assert_eq!(short_vectors(&IntLattice::new(vec![vec![2]]).unwrap(), 2).unwrap(), vec![vec![-1], vec![1]]);
        assert!(short_vectors(&IntLattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap(), 2).is_err());
    }

    #[test]
    fn identify_named_types() {
        for name in ["A1", "A4", "D4", "D6", "E6", "E7", "E8"] {
            let r = root_system_identify(&lat(name)).unwrap();
            assert_eq!(r.dynkin, name);
        }
        let neg: IMat = cartan_matrix("E7").unwrap().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let r = root_system_identify(&IntLattice::new(neg).unwrap()).unwrap();
        assert_eq!((r.dynkin.as_str(), r.definiteness, r.abs_det, r.root_count), ("E7", -1, 2, 126));
        assert!(matches!(
            root_system_identify(&IntLattice::new(vec![vec![4]]).unwrap()),
            Err(RootError::NotRootLattice(_))
        ));
    }

    #[test]
    fn hyperbolic_models() {
        for ell in 6..=8 {
            let h = hyperbolic_model(ell).unwrap();
            assert_eq!(h.k_square, 9 - ell as i64);
            assert_eq!(h.report.dynkin, format!("E{ell}"));
        }
    }

    #[test]
    fn weights_in_hyperbolic_lattice() {
        let h = hyperbolic_model(8).unwrap();
        let amb = IntLattice::new(h.gram.clone()).unwrap();
        let roots = h.simple_roots();
        let w = fundamental_weights(&amb, &roots).unwrap();
        for (i, wi) in w.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                assert_eq!(intmat::bilinear(&amb.gram, wi, b), (i == j) as i64);
            }
        }
        let dup = vec![roots[0].clone(), roots[0].clone()];
        assert_eq!(fundamental_weights(&amb, &dup), Err(RootError::DependentRoots));
        let small = IntLattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        assert!(fundamental_weights(&small, &[vec![1, 1]]).is_ok());
    }

    #[test]
    fn model_kuznetsov_gram() {
        for d in 1..=3u8 {
            let r = kuznetsov_basis(d).unwrap();
            assert_eq!(r.d, d as i64);
            assert!(r.matches_up_to_kk_sign(), "{:?}", r.mismatches);
            assert_eq!(r.gram[0][1], format_rational(&Rational::new((-(d as i64)).into(), 2.into())));
            assert_eq!(r.mismatches.len(), 1);
        }
    }
}
