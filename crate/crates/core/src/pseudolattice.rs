//! Pseudolattices with exceptional bases, numerical mutations, Serre
//! operators, point-like vectors and Néron–Severi lattices, and the
//! verification of the mutation sequences relating the vanishing-cycle
//! bases to the del Pezzo Gram matrices `M_ℓ`.
//!
//! Basis vectors are kept in ambient coordinates with respect to the fixed
//! Gram matrix; boundary classes are derived through the charge map.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::intmat::{self, IMat, IVec};
use crate::vancycles::{expected_classes, seifert_gram, HomologyClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("Gram matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("slot {slot} out of range for a basis of length {len}")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("basis lost exceptionality after {0}")]
    NotExceptional(String),
    #[error("im((I − S)²) has rank {0}, expected 1")]
    PointLikeRank(usize),
    #[error("point-like vector fails the surface-like axioms: {0}")]
    NotSurfaceLike(String),
    #[error("form restricted to p⊥ is not symmetric")]
    AsymmetricOnPerp,
    #[error("point-like vector is not in the charge kernel")]
    PointNotInKernel,
    #[error("cannot parse mutation word: {0}")]
    Parse(String),
    #[error("degree must be 1, 2 or 3 (got {0})")]
    InvalidDegree(u8),
    #[error("ℓ must be 6, 7 or 8 (got {0})")]
    InvalidEll(u8),
    #[error("rank too small for this operation")]
    RankTooSmall,
    #[error("coordinates exceed {COORD_LIMIT} in magnitude")]
    Overflow,
}

/// Largest coordinate a mutated vector may carry.
pub const COORD_LIMIT: i64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pseudolattice {
    pub gram: IMat,
}

impl Pseudolattice {
    pub fn new(gram: IMat) -> Result<Self, LatticeError> {
        if intmat::det(&gram) == 0.into() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Pseudolattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        intmat::bilinear(&self.gram, u, v)
    }

    pub fn standard_basis(&self) -> ExceptionalBasis {
        ExceptionalBasis { vectors: intmat::identity(self.rank()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExceptionalBasis {
    pub vectors: Vec<IVec>,
}

impl ExceptionalBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn gram(&self, p: &Pseudolattice) -> IMat {
        intmat::gram_in_basis(&p.gram, &self.vectors)
    }

    pub fn is_exceptional(&self, p: &Pseudolattice) -> bool {
        let g = self.gram(p);
        (0..g.len()).all(|i| g[i][i] == 1 && (0..i).all(|j| g[i][j] == 0))
    }

    pub fn truncated(&self, k: usize) -> ExceptionalBasis {
        ExceptionalBasis { vectors: self.vectors[..k].to_vec() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mutation {
    pub side: Side,
    pub slot: usize,
}

impl Mutation {
    pub fn inverse(&self) -> Mutation {
        let side = match self.side {
            Side::L => Side::R,
            Side::R => Side::L,
        };
        Mutation { side, slot: self.slot }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.side, self.slot)
    }
}

/// A product of mutations in written order; the rightmost factor acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MutationWord(pub Vec<Mutation>);

impl MutationWord {
    pub fn empty() -> Self {
        MutationWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other`: `other` acts first.
    pub fn then_after(&self, other: &MutationWord) -> MutationWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        MutationWord(v)
    }

    pub fn inverse(&self) -> MutationWord {
        MutationWord(self.0.iter().rev().map(|m| m.inverse()).collect())
    }

    /// Cancels adjacent `L_i R_i` and `R_i L_i` pairs.
    pub fn reduced(&self) -> MutationWord {
        let mut out: Vec<Mutation> = Vec::new();
        for m in &self.0 {
            if out.last() == Some(&m.inverse()) {
                out.pop();
            } else {
                out.push(*m);
            }
        }
        MutationWord(out)
    }

    pub fn max_slot(&self) -> Option<usize> {
        self.0.iter().map(|m| m.slot).max()
    }

    pub fn touches_slot_zero(&self) -> bool {
        self.0.iter().any(|m| m.slot == 0)
    }
}

impl fmt::Display for MutationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for MutationWord {
    type Err = LatticeError;

    /// Accepts tokens like `L1`, `R8` separated by spaces, commas, `·` or `*`.
    fn from_str(s: &str) -> Result<Self, LatticeError> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || matches!(c, ',' | '·' | '*' | '(' | ')')) {
            if tok.is_empty() {
                continue;
            }
            let side = match tok.chars().next() {
                Some('L') | Some('l') => Side::L,
                Some('R') | Some('r') => Side::R,
                _ => return Err(LatticeError::Parse(tok.to_string())),
            };
            let slot = tok[1..].parse::<usize>().map_err(|_| LatticeError::Parse(tok.to_string()))?;
            out.push(Mutation { side, slot });
        }
        Ok(MutationWord(out))
    }
}

fn combine(u: &[i64], c: i64, v: &[i64]) -> Result<IVec, LatticeError> {
    u.iter()
        .zip(v)
        .map(|(a, b)| {
            c.checked_mul(*b)
                .and_then(|cb| a.checked_sub(cb))
                .filter(|x| x.abs() <= COORD_LIMIT)
                .ok_or(LatticeError::Overflow)
        })
        .collect()
}

fn apply_one(p: &Pseudolattice, vecs: &mut [IVec], m: Mutation) -> Result<(), LatticeError> {
    let i = m.slot;
    if i + 1 >= vecs.len() {
        return Err(LatticeError::SlotOutOfRange { slot: i, len: vecs.len() });
    }
    let (ei, ej) = (vecs[i].clone(), vecs[i + 1].clone());
    let c = intmat::checked_bilinear(&p.gram, &ei, &ej).ok_or(LatticeError::Overflow)?;
    match m.side {
        Side::L => {
            vecs[i] = combine(&ej, c, &ei)?;
            vecs[i + 1] = ei;
        }
        Side::R => {
            vecs[i] = ej.clone();
            vecs[i + 1] = combine(&ei, c, &ej)?;
        }
    }
    Ok(())
}

/// Applies the word (rightmost factor first) and checks exceptionality.
pub fn mutate(
    p: &Pseudolattice,
    basis: &ExceptionalBasis,
    word: &MutationWord,
) -> Result<ExceptionalBasis, LatticeError> {
    let mut vecs = basis.vectors.clone();
    for m in word.0.iter().rev() {
        apply_one(p, &mut vecs, *m)?;
    }
    let out = ExceptionalBasis { vectors: vecs };
    if !out.is_exceptional(p) {
        return Err(LatticeError::NotExceptional(word.to_string()));
    }
    Ok(out)
}

/// Boundary classes of the ambient thimble basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeMap {
    pub columns: Vec<HomologyClass>,
}

impl ChargeMap {
    pub fn charge(&self, v: &[i64]) -> HomologyClass {
        let (m, n) = v.iter().zip(&self.columns).fold((0, 0), |(m, n), (c, h)| (m + c * h.m, n + c * h.n));
        HomologyClass::new(m, n)
    }

    pub fn charges(&self, basis: &ExceptionalBasis) -> Vec<HomologyClass> {
        basis.vectors.iter().map(|v| self.charge(v)).collect()
    }

    pub fn matrix(&self) -> IMat {
        vec![self.columns.iter().map(|c| c.m).collect(), self.columns.iter().map(|c| c.n).collect()]
    }
}

pub fn from_boundaries(
    classes: &[HomologyClass],
) -> Result<(Pseudolattice, ExceptionalBasis, ChargeMap), LatticeError> {
    let p = Pseudolattice::new(seifert_gram(classes))?;
    let basis = p.standard_basis();
    Ok((p, basis, ChargeMap { columns: classes.to_vec() }))
}

/// `S = G⁻¹ Gᵀ`.
pub fn serre(p: &Pseudolattice) -> Result<IMat, LatticeError> {
    let inv = intmat::integral_inverse(&p.gram)
        .ok_or_else(|| LatticeError::NotUnimodular(intmat::det(&p.gram).to_string()))?;
    Ok(intmat::mul(&inv, &intmat::transpose(&p.gram)))
}

/// Primitive generator of `im((I − S)²)`, first nonzero coordinate positive.
pub fn point_like(p: &Pseudolattice) -> Result<IVec, LatticeError> {
    let s = serre(p)?;
    let n = p.rank();
    let t = intmat::sub(&intmat::identity(n), &s);
    let t2 = intmat::mul(&t, &t);
    let cols = intmat::transpose(&t2);
    let span = intmat::span_basis(&cols);
    if span.len() != 1 {
        return Err(LatticeError::PointLikeRank(span.len()));
    }
    let v = intmat::normalize_sign(&span[0]);
    let g = intmat::content(&v);
    Ok(v.iter().map(|x| x / g).collect())
}

/// Checks the surface-like axioms for `pt` against every standard basis vector.
pub fn check_surface_like(p: &Pseudolattice, pt: &[i64]) -> Result<(), LatticeError> {
    if p.pair(pt, pt) != 0 {
        return Err(LatticeError::NotSurfaceLike("⟨p, p⟩ ≠ 0".into()));
    }
    let basis = p.standard_basis();
    for v in &basis.vectors {
        if p.pair(pt, v) != p.pair(v, pt) {
            return Err(LatticeError::NotSurfaceLike("⟨p, v⟩ ≠ ⟨v, p⟩".into()));
        }
    }
    let perp = perp_basis(p, pt);
    let g = intmat::gram_in_basis(&p.gram, &perp);
    if !intmat::is_symmetric(&g) {
        return Err(LatticeError::AsymmetricOnPerp);
    }
    Ok(())
}

fn perp_basis(p: &Pseudolattice, pt: &[i64]) -> Vec<IVec> {
    let row = vec![(0..p.rank()).map(|j| (0..p.rank()).map(|i| pt[i] * p.gram[i][j]).sum()).collect::<IVec>()];
    intmat::integer_kernel(&row, p.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankNorm {
    pub ranks: Vec<i64>,
    pub norm: i64,
}

pub fn rank_norm(p: &Pseudolattice, basis: &ExceptionalBasis) -> Result<RankNorm, LatticeError> {
    let pt = point_like(p)?;
    let ranks: Vec<i64> = basis.vectors.iter().map(|v| p.pair(&pt, v)).collect();
    let norm = ranks.iter().map(|r| r * r).sum();
    Ok(RankNorm { ranks, norm })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeronSeveri {
    pub point: IVec,
    /// Ambient vectors projecting to a basis of `p⊥ / p`.
    pub basis: Vec<IVec>,
    pub gram: IMat,
}

pub fn neron_severi(p: &Pseudolattice) -> Result<NeronSeveri, LatticeError> {
    let pt = point_like(p)?;
    check_surface_like(p, &pt)?;
    let perp = perp_basis(p, &pt);
    let coords = intmat::solve_integer(&perp, &pt).ok_or(LatticeError::NotSurfaceLike("p ∉ p⊥".into()))?;
    let u =
        intmat::complete_to_unimodular(&coords).ok_or(LatticeError::NotSurfaceLike("p not primitive in p⊥".into()))?;
    let k = perp.len();
    let basis: Vec<IVec> =
        (1..k).map(|j| (0..p.rank()).map(|r| (0..k).map(|i| perp[i][r] * u[i][j]).sum()).collect()).collect();
    let gram = intmat::gram_in_basis(&p.gram, &basis);
    if !intmat::is_symmetric(&gram) {
        return Err(LatticeError::AsymmetricOnPerp);
    }
    Ok(NeronSeveri { point: pt, basis, gram })
}

/// Odd, unimodular, signature `(1, r−1)` up to an overall sign: the
/// invariants that determine `I^{1,r−1}` among indefinite lattices.
pub fn is_odd_unimodular_hyperbolic(g: &IMat) -> bool {
    let r = g.len();
    let odd = (0..r).any(|i| g[i][i] % 2 != 0);
    let sig = intmat::signature(g);
    odd && intmat::abs_det_is_one(g) && sig.2 == 0 && (sig.0.min(sig.1) == 1 || r == 1) && r >= 1
}

/// Integer kernel of the charge map; checks that `p` lies in it.
pub fn charge_kernel(p: &Pseudolattice, charge: &ChargeMap) -> Result<Vec<IVec>, LatticeError> {
    let kernel = intmat::integer_kernel(&charge.matrix(), p.rank());
    if let Ok(pt) = point_like(p) {
        if charge.charge(&pt) != HomologyClass::new(0, 0) {
            return Err(LatticeError::PointNotInKernel);
        }
    }
    Ok(kernel)
}

/// `D = diag(±1)` with `D·G·D = target`, by propagating signs along nonzero
/// entries from the first index of every connected component.
pub fn sign_normalize(g: &IMat, target: &IMat) -> Option<Vec<i64>> {
    let n = g.len();
    if n != target.len() {
        return None;
    }
    let mut s = vec![0i64; n];
    for start in 0..n {
        if s[start] != 0 {
            continue;
        }
        s[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                for (a, b) in [(g[i][j], target[i][j]), (g[j][i], target[j][i])] {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let want = if a == b {
                        s[i]
                    } else if a == -b {
                        -s[i]
                    } else {
                        return None;
                    };
                    if s[j] == 0 {
                        s[j] = want;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    let ok = (0..n).all(|i| (0..n).all(|j| s[i] * g[i][j] * s[j] == target[i][j]));
    ok.then_some(s)
}

/// Exhaustive search over all `2ⁿ` diagonals (`n ≤ 16`).
pub fn sign_normalize_exhaustive(g: &IMat, target: &IMat) -> Option<Vec<i64>> {
    crate::vancycles::sign_diagonal_to(g, target)
}

/// The Gram matrix `M_ℓ` of the del Pezzo exceptional basis.
pub fn del_pezzo_gram(ell: usize) -> IMat {
    let n = ell + 3;
    let mut m = intmat::identity(n);
    m[0][1] = 3;
    m[0][2] = 3;
    m[1][2] = 3;
    for j in 3..n {
        m[0][j] = 1;
        m[1][j] = 2;
        m[2][j] = 1;
    }
    m
}

pub fn drop_zero(p: &Pseudolattice) -> Result<Pseudolattice, LatticeError> {
    if p.rank() < 2 {
        return Err(LatticeError::RankTooSmall);
    }
    Pseudolattice::new(p.gram[1..].iter().map(|r| r[1..].to_vec()).collect())
}

pub fn beta_word(d: u8) -> Result<MutationWord, LatticeError> {
    let b3 = "L1 L2 L3 L1 L3 L1 L4 L5 L6 L7 L3 L4 L5 L2 L3 L1";
    let s = match d {
        3 => b3.to_string(),
        2 => format!("{b3} R8 R7 R6 R5 R4 R3 R2 R1 R8 R7 L4"),
        1 => format!("{b3} R8 R7 R6 R5 R4 R3 R2 R1 R8 R7 L4 R9 R8 R7 R6 R5 R4 L6"),
        _ => return Err(LatticeError::InvalidDegree(d)),
    };
    s.parse()
}

/// The groups of `β₃` in the order they act, with the row of boundary
/// classes listed after each group.
pub fn beta3_rows() -> Vec<(MutationWord, Vec<HomologyClass>)> {
    let rows = [
        ("L1", "a+b,a-b,b,b,a,b,a,b,a"),
        ("L2 L3", "a+b,a-b,a-2b,b,b,b,a,b,a"),
        ("L3 L4 L5", "a+b,a-b,a-2b,a-3b,b,b,b,b,a"),
        ("L4 L5 L6 L7", "a+b,a-b,a-2b,a-3b,a-4b,b,b,b,b"),
        ("L3 L1", "a+b,-b,a-b,-b,a-3b,b,b,b,b"),
        ("L1", "a+b,a-2b,-b,-b,a-3b,b,b,b,b"),
        ("L2 L3", "a+b,a-2b,a-5b,-b,-b,b,b,b,b"),
        ("L1", "a+b,2a-b,a-2b,-b,-b,-b,-b,-b,-b"),
    ];
    rows.iter().map(|(w, r)| (w.parse().unwrap(), r.split(',').map(|c| c.parse().unwrap()).collect())).collect()
}

/// `(a+b, 2a−b, a−2b, −b, …, −b)` with `ℓ` copies of `−b`.
pub fn target_classes(ell: usize) -> Vec<HomologyClass> {
    let mut v = vec![HomologyClass::new(1, 1), HomologyClass::new(2, -1), HomologyClass::new(1, -2)];
    v.extend(std::iter::repeat(HomologyClass::new(0, -1)).take(ell));
    v
}

fn classes_match_up_to_sign(a: &[HomologyClass], b: &[HomologyClass]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_up_to_sign(y))
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub d: u8,
    pub ell: usize,
    pub word: String,
    pub word_avoids_slot_zero: bool,
    pub max_slot: usize,
    pub exceptional: bool,
    pub final_classes: Vec<HomologyClass>,
    pub classes_match: bool,
    pub gram: IMat,
    pub sign_diagonal: Option<Vec<i64>>,
    /// For d = 3: one flag per displayed intermediate row.
    pub rows_match: Option<Vec<bool>>,
    pub first_divergence: Option<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Vanishing classes extended by `d` copies of `b` (the cycles over ∞).
pub fn extended_classes(d: u8, classes: &[HomologyClass]) -> Vec<HomologyClass> {
    let mut v = classes.to_vec();
    v.extend(std::iter::repeat(HomologyClass::B).take(d as usize));
    v
}

pub fn verify_theorem(d: u8) -> Result<TheoremReport, LatticeError> {
    let classes = expected_classes(d).ok_or(LatticeError::InvalidDegree(d))?;
    verify_theorem_with(d, &classes)
}

/// Applies `β_d` to the extended basis built from `classes` and compares
/// with `M_ℓ` and the target boundary classes.
pub fn verify_theorem_with(d: u8, classes: &[HomologyClass]) -> Result<TheoremReport, LatticeError> {
    if !(1..=3).contains(&d) {
        return Err(LatticeError::InvalidDegree(d));
    }
    let ell = 9 - d as usize;
    let (p, basis, charge) = from_boundaries(&extended_classes(d, classes))?;
    let word = beta_word(d)?;
    let mut divergence: Option<String> = None;
    let mut note = |msg: String| {
        if divergence.is_none() {
            divergence = Some(msg);
        }
    };
    let out = mutate(&p, &basis, &word);
    let exceptional = out.is_ok();
    let out = out?;
    let head = out.truncated(ell + 3);
    let final_classes = charge.charges(&head);
    let classes_match = classes_match_up_to_sign(&final_classes, &target_classes(ell));
    if !classes_match {
        note(format!("final boundary classes {:?} differ from the target", final_classes));
    }
    let gram = head.gram(&p);
    let sign_diagonal = sign_normalize(&gram, &del_pezzo_gram(ell));
    if sign_diagonal.is_none() {
        note("Gram matrix does not sign-normalize to M_ℓ".into());
    }
    let rows_match = if d == 3 {
        let mut cur = basis.clone();
        let mut flags = Vec::new();
        for (i, (w, row)) in beta3_rows().into_iter().enumerate() {
            cur = mutate(&p, &cur, &w)?;
            let got = charge.charges(&cur.truncated(9));
            let ok = classes_match_up_to_sign(&got, &row);
            if !ok {
                note(format!("row {} after {}: got {:?}", i + 1, w, got));
            }
            flags.push(ok);
        }
        Some(flags)
    } else {
        None
    };
    let max_slot = word.max_slot().unwrap_or(0);
    let word_avoids_slot_zero = !word.touches_slot_zero();
    if !word_avoids_slot_zero {
        note("word mutates slot 0".into());
    }
    if d == 2 && max_slot + 1 >= 10 {
        note("word touches the classes over ∞".into());
    }
    Ok(TheoremReport {
        d,
        ell,
        word: word.to_string(),
        word_avoids_slot_zero,
        max_slot,
        exceptional,
        final_classes,
        classes_match,
        gram,
        sign_diagonal,
        rows_match,
        first_divergence: divergence,
    })
}

/// Exact equality of the two mutated bases.
pub fn word_identity(
    p: &Pseudolattice,
    basis: &ExceptionalBasis,
    w1: &MutationWord,
    w2: &MutationWord,
) -> Result<bool, LatticeError> {
    Ok(mutate(p, basis, w1)? == mutate(p, basis, w2)?)
}

/// Change of basis to `(A, B)` used for `E_8` and `E_7`: `a = A`, `b = A + B`.
pub fn to_ab_e8(c: &HomologyClass) -> HomologyClass {
    HomologyClass::new(c.m + c.n, c.n)
}

/// Change of basis used for `E_6`: `b = A`, `a = −(A + B)`.
pub fn to_ab_e6(c: &HomologyClass) -> HomologyClass {
    HomologyClass::new(c.n - c.m, -c.m)
}

/// The collections `Z_{E_ℓ}` in `(A, B)` coordinates.
pub fn ghs_target(ell: u8) -> Result<Vec<HomologyClass>, LatticeError> {
    let (a, b, apb) = (HomologyClass::new(1, 0), HomologyClass::new(0, 1), HomologyClass::new(-1, -1));
    Ok(match ell {
        8 => [a, apb].repeat(5),
        7 => [a, b, apb].repeat(3),
        6 => [a, apb].repeat(4),
        _ => return Err(LatticeError::InvalidEll(ell)),
    })
}

/// Vanishing classes with position 0 removed, in `(A, B)` coordinates; for
/// `ℓ = 7` followed by `L₂` and `R₇` (slots counted from 1).
pub fn ghs_sequences(ell: u8) -> Result<Vec<HomologyClass>, LatticeError> {
    let d = match ell {
        6..=8 => 9 - ell,
        _ => return Err(LatticeError::InvalidEll(ell)),
    };
    let classes = expected_classes(d).ok_or(LatticeError::InvalidDegree(d))?;
    ghs_sequences_with(ell, &classes)
}

pub fn ghs_sequences_with(ell: u8, classes: &[HomologyClass]) -> Result<Vec<HomologyClass>, LatticeError> {
    let rest = &classes[1..];
    match ell {
        8 => Ok(rest.iter().map(to_ab_e8).collect()),
        6 => Ok(rest.iter().map(to_ab_e6).collect()),
        7 => {
            let (p, basis, charge) = from_boundaries(rest)?;
            // slots 2 and 7 counted from 1 are 0-indexed slots 1 and 6
            let out = mutate(&p, &basis, &"R6 L1".parse()?)?;
            Ok(charge.charges(&out).iter().map(to_ab_e8).collect())
        }
        _ => Err(LatticeError::InvalidEll(ell)),
    }
}

pub fn ghs_matches(ell: u8) -> Result<bool, LatticeError> {
    Ok(classes_match_up_to_sign(&ghs_sequences(ell)?, &ghs_target(ell)?))
}

fn gram_distance(g: &IMat, t: &IMat) -> i64 {
    g.iter().flatten().zip(t.iter().flatten()).map(|(a, b)| (a.abs() - b.abs()).abs()).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub word: MutationWord,
    pub expanded: usize,
}

/// Best-first search over mutation words. Nodes are ordered by the distance
/// of their rank profile `|⟨p, e_i⟩|` from the target's, then by Gram
/// distance up to signs, then by word. Returns the first word whose output
/// sign-normalizes to `target`.
pub fn norm_guided_search(
    p: &Pseudolattice,
    basis: &ExceptionalBasis,
    target: &IMat,
    budget: usize,
) -> Option<SearchResult> {
    let k = target.len();
    let pt = point_like(p).ok();
    let target_ranks: Option<Vec<i64>> = Pseudolattice::new(target.clone()).ok().and_then(|tp| {
        let q = point_like(&tp).ok()?;
        Some(tp.standard_basis().vectors.iter().map(|v| tp.pair(&q, v).abs()).collect())
    });
    let score = |b: &ExceptionalBasis| -> (i64, i64) {
        let head = b.truncated(k);
        let dist = gram_distance(&head.gram(p), target);
        let profile = match (&pt, &target_ranks) {
            (Some(pt), Some(tr)) => head.vectors.iter().zip(tr).map(|(v, t)| (p.pair(pt, v).abs() - t).abs()).sum(),
            _ => 0,
        };
        (profile, dist)
    };
    let done = |b: &ExceptionalBasis| sign_normalize(&b.truncated(k).gram(p), target).is_some();
    if done(basis) {
        return Some(SearchResult { word: MutationWord::empty(), expanded: 0 });
    }
    let slots: Vec<Mutation> = (1..basis.len() - 1)
        .flat_map(|i| [Mutation { side: Side::L, slot: i }, Mutation { side: Side::R, slot: i }])
        .collect();
    let mut seen: HashSet<ExceptionalBasis> = HashSet::from([basis.clone()]);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((score(basis), 0usize, MutationWord::empty(), basis.clone())));
    let mut expanded = 0;
    while let Some(Reverse((_, len, word, cur))) = heap.pop() {
        if expanded >= budget {
            return None;
        }
        expanded += 1;
        for m in &slots {
            let mut vecs = cur.vectors.clone();
            if apply_one(p, &mut vecs, *m).is_err() {
                continue;
            }
            let next = ExceptionalBasis { vectors: vecs };
            if !seen.insert(next.clone()) {
                continue;
            }
            let mut w = vec![*m];
            w.extend(word.0.iter().copied());
            let nw = MutationWord(w);
            if done(&next) {
                return Some(SearchResult { word: nw, expanded });
            }
            heap.push(Reverse((score(&next), len + 1, nw, next)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(s: &str) -> Vec<HomologyClass> {
        s.split(',').map(|c| c.parse().unwrap()).collect()
    }

    #[test]
    fn example_gram_for_cubic() {
        let (p, _, _) = from_boundaries(&expected_classes(3).unwrap()).unwrap();
        assert_eq!(p.gram[0], vec![1, -1, 1, -1, 1, -1, 1, -1, 1]);
        assert_eq!(p.gram[1], vec![0, 1, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(p.gram[2], vec![0, 0, 1, -1, 0, -1, 0, -1, 0]);
    }

    #[test]
    fn first_mutation_row() {
        let (p, b, c) = from_boundaries(&expected_classes(3).unwrap()).unwrap();
        let out = mutate(&p, &b, &"L1".parse().unwrap()).unwrap();
        assert!(classes_match_up_to_sign(&c.charges(&out), &cls("a+b,a-b,b,b,a,b,a,b,a")));
    }

    #[test]
    fn left_right_inverse() {
        let (p, b, _) = from_boundaries(&expected_classes(2).unwrap()).unwrap();
        let w: MutationWord = "L3 R3 R5 L5".parse().unwrap();
        assert_eq!(mutate(&p, &b, &w).unwrap(), b);
        let w: MutationWord = "L1 L4 R7 L2".parse().unwrap();
        assert_eq!(mutate(&p, &b, &w.inverse().then_after(&w)).unwrap(), b);
        assert!(w.inverse().then_after(&w).reduced().is_empty());
    }

    #[test]
    fn parse_and_display() {
        let w: MutationWord = "L1 · (L2 L3), R8".parse().unwrap();
        assert_eq!(w.to_string(), "L1 L2 L3 R8");
        assert!("X1".parse::<MutationWord>().is_err());
    }

    #[test]
    fn serre_small_cases() {
        let id = Pseudolattice::new(intmat::identity(3)).unwrap();
        assert_eq!(serre(&id).unwrap(), intmat::identity(3));
        let p = Pseudolattice::new(vec![vec![1, -1], vec![0, 1]]).unwrap();
        assert_eq!(serre(&p).unwrap(), vec![vec![0, 1], vec![-1, 1]]);
        assert_eq!(point_like(&p), Err(LatticeError::PointLikeRank(2)));
    }

    #[test]
    fn del_pezzo_model_is_surface_like() {
        let p = Pseudolattice::new(del_pezzo_gram(6)).unwrap();
        let pt = point_like(&p).unwrap();
        check_surface_like(&p, &pt).unwrap();
        let rn = rank_norm(&p, &p.standard_basis()).unwrap();
        assert_eq!(rn.ranks[0].abs(), 1);
        let ns = neron_severi(&p).unwrap();
        assert_eq!(ns.gram.len(), 7);
        assert!(is_odd_unimodular_hyperbolic(&ns.gram));
    }

    #[test]
    fn sign_normalize_cases() {
        let t = del_pezzo_gram(2);
        assert_eq!(sign_normalize(&t, &t), Some(vec![1; 5]));
        let d = [1, -1, 1, -1, -1];
        let g: IMat = (0..5).map(|i| (0..5).map(|j| d[i] * t[i][j] * d[j]).collect()).collect();
        assert_eq!(sign_normalize(&g, &t), Some(d.to_vec()));
        let bad = vec![vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]];
        let tgt = vec![vec![1, 1, 1], vec![0, 1, -1], vec![0, 0, 1]];
        assert_eq!(sign_normalize(&bad, &tgt), None);
        assert_eq!(sign_normalize_exhaustive(&bad, &tgt), None);
    }

    #[test]
    fn drop_zero_of_model() {
        let p = Pseudolattice::new(del_pezzo_gram(6)).unwrap();
        let q = drop_zero(&p).unwrap();
        assert_eq!(q.rank(), 8);
        assert_eq!(q.gram[0][..2], [1, 3]);
        assert_eq!(q.gram[1][..2], [0, 1]);
    }
}
