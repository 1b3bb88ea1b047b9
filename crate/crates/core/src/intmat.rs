//! Small dense integer matrices: products, exact determinants and inverses,
//! Hermite normal form, integer kernels and unimodular completion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactpoly::Rational;

pub type IVec = Vec<i64>;
pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![0; c]; r]
}

pub fn transpose(m: &IMat) -> IMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()).collect()
}

pub fn mat_vec(m: &IMat, v: &[i64]) -> IVec {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `uᵀ G v`.
pub fn bilinear(g: &IMat, u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(g).map(|(ui, row)| ui * row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()).sum()
}

/// `uᵀ G v`, or `None` on overflow.
pub fn checked_bilinear(g: &IMat, u: &[i64], v: &[i64]) -> Option<i64> {
    let mut total = 0i64;
    for (ui, row) in u.iter().zip(g) {
        let mut inner = 0i64;
        for (a, b) in row.iter().zip(v) {
            inner = inner.checked_add(a.checked_mul(*b)?)?;
        }
        total = total.checked_add(ui.checked_mul(inner)?)?;
    }
    Some(total)
}

/// `Bᵀ G B` for a basis given as a list of vectors (the columns of `B`).
pub fn gram_in_basis(g: &IMat, basis: &[IVec]) -> IMat {
    basis.iter().map(|u| basis.iter().map(|v| bilinear(g, u, v)).collect()).collect()
}

pub fn sub(a: &IMat, b: &IMat) -> IMat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn is_symmetric(m: &IMat) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == m[j][i]))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn det_i64(m: &IMat) -> i64 {
    det(m).to_i64().expect("determinant fits in i64")
}

/// Exact inverse over the rationals, `None` if singular.
pub fn inverse_rational(m: &IMat) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational> = r.iter().map(|&x| Rational::from_integer(x.into())).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let inv = Rational::one() / a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse when it is integral.
pub fn integral_inverse(m: &IMat) -> Option<IMat> {
    let inv = inverse_rational(m)?;
    inv.into_iter()
        .map(|r| r.into_iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
        .collect()
}

pub fn rank(m: &IMat) -> usize {
    let (h, _) = hnf_rows(m);
    h.iter().filter(|r| r.iter().any(|&x| x != 0)).count()
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U·M = H`, `H` in row echelon form with positive pivots and reduced
/// entries above each pivot.
pub fn hnf_rows(m: &IMat) -> (IMat, IMat) {
    let r = m.len();
    let c = m.first().map_or(0, |x| x.len());
    let mut h: Vec<Vec<i128>> = m.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> =
        identity(r).into_iter().map(|row| row.into_iter().map(|x| x as i128).collect()).collect();
    let mut pivot_row = 0;
    for col in 0..c {
        if pivot_row == r {
            break;
        }
        // Euclid on column entries from pivot_row down
        loop {
            let nz: Vec<usize> = (pivot_row..r).filter(|&i| h[i][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let &best = nz.iter().min_by_key(|&&i| h[i][col].abs()).unwrap();
            h.swap(pivot_row, best);
            u.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..r {
                if h[i][col] != 0 {
                    let q = Integer::div_floor(&h[i][col], &h[pivot_row][col]);
                    for j in 0..c {
                        h[i][j] -= q * h[pivot_row][j];
                    }
                    for j in 0..r {
                        u[i][j] -= q * u[pivot_row][j];
                    }
                    if h[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][col] == 0 {
            continue;
        }
        if h[pivot_row][col] < 0 {
            for j in 0..c {
                h[pivot_row][j] = -h[pivot_row][j];
            }
            for j in 0..r {
                u[pivot_row][j] = -u[pivot_row][j];
            }
        }
        for i in 0..pivot_row {
            let q = Integer::div_floor(&h[i][col], &h[pivot_row][col]);
            if q != 0 {
                for j in 0..c {
                    h[i][j] -= q * h[pivot_row][j];
                }
                for j in 0..r {
                    u[i][j] -= q * u[pivot_row][j];
                }
            }
        }
        pivot_row += 1;
    }
    let cvt = |m: Vec<Vec<i128>>| -> IMat {
        m.into_iter().map(|r| r.into_iter().map(|x| i64::try_from(x).expect("HNF entry overflow")).collect()).collect()
    };
    (cvt(h), cvt(u))
}

/// Basis of the saturated lattice `{x ∈ Zⁿ : M x = 0}`.
pub fn integer_kernel(m: &IMat, n: usize) -> Vec<IVec> {
    if m.is_empty() {
        return identity(n);
    }
    let (h, u) = hnf_rows(&transpose(m));
    h.iter().zip(u).filter(|(row, _)| row.iter().all(|&x| x == 0)).map(|(_, urow)| urow).collect()
}

/// Basis of the lattice spanned by the given vectors.
pub fn span_basis(vectors: &[IVec]) -> Vec<IVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (h, _) = hnf_rows(&vectors.to_vec());
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    content(v) == 1
}

/// Sign making the first nonzero coordinate positive.
pub fn normalize_sign(v: &[i64]) -> IVec {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|y| -y).collect(),
        _ => v.to_vec(),
    }
}

/// A unimodular matrix whose first column is the primitive vector `p`.
pub fn complete_to_unimodular(p: &[i64]) -> Option<IMat> {
    if !is_primitive(p) {
        return None;
    }
    let col: IMat = p.iter().map(|&x| vec![x]).collect();
    let (h, u) = hnf_rows(&col);
    // U p = e₁ so p is the first column of U⁻¹
    if h[0][0] != 1 {
        return None;
    }
    integral_inverse(&u)
}

/// Solves `B x = v` for integer `x` with `B` given by columns, if possible.
pub fn solve_integer(columns: &[IVec], v: &[i64]) -> Option<IVec> {
    let n = columns.len();
    let rows = v.len();
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Rational> = columns.iter().map(|c| Rational::from_integer(c[i].into())).collect();
            r.push(Rational::from_integer(v[i].into()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..n {
        let Some(p) = (row..rows).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(p, row);
        let inv = Rational::one() / aug[row][c].clone();
        for x in aug[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != row && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                let pr = aug[row].clone();
                for (x, y) in aug[i].iter_mut().zip(pr) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if aug[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![0i64; n];
    for (r, &c) in pivots.iter().enumerate() {
        let val = &aug[r][n];
        if !val.is_integer() {
            return None;
        }
        x[c] = val.to_integer().to_i64()?;
    }
    Some(x)
}

/// Some integer solution of `A x = b` (`A` given by rows), if one exists.
pub fn solve_integer_system(a: &IMat, b: &[i64]) -> Option<IVec> {
    let n = a.first().map_or(0, |r| r.len());
    if a.is_empty() {
        return Some(vec![0; n]);
    }
    // U·Aᵀ = H, so A·Uᵀ = Hᵀ and x = Uᵀ y
    let (h, u) = hnf_rows(&transpose(a));
    let mut y = vec![0i64; n];
    let mut residual: Vec<i64> = b.to_vec();
    for (k, row) in h.iter().enumerate() {
        let Some(c) = row.iter().position(|&x| x != 0) else { break };
        if residual[c] % row[c] != 0 {
            return None;
        }
        y[k] = residual[c] / row[c];
        for (r, &hv) in residual.iter_mut().zip(row) {
            *r -= y[k] * hv;
        }
    }
    if residual.iter().any(|&r| r != 0) {
        return None;
    }
    Some((0..n).map(|j| (0..n).map(|k| u[k][j] * y[k]).sum()).collect())
}

/// Signature `(n₊, n₋, n₀)` of a symmetric integer matrix.
pub fn signature(m: &IMat) -> (usize, usize, usize) {
    let n = m.len();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j] as f64);
    let eig = nalgebra::SymmetricEigen::new(a);
    let scale = m.iter().flatten().map(|x| x.abs()).max().unwrap_or(1).max(1) as f64;
    let tol = 1e-9 * scale * n as f64;
    let mut s = (0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if e > tol {
            s.0 += 1;
        } else if e < -tol {
            s.1 += 1;
        } else {
            s.2 += 1;
        }
    }
    s
}

pub fn abs_det_is_one(m: &IMat) -> bool {
    det(m).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = vec![vec![1, -1, 1], vec![0, 1, 1], vec![0, 0, 1]];
        assert_eq!(det_i64(&m), 1);
        let inv = integral_inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(3));
        assert_eq!(det_i64(&vec![vec![2, 1], vec![4, 2]]), 0);
        assert_eq!(det_i64(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert!(integral_inverse(&vec![vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn hnf_is_unimodular_transform() {
        let m = vec![vec![2, 4, 6], vec![3, 5, 7], vec![1, 1, 1]];
        let (h, u) = hnf_rows(&m);
        assert_eq!(mul(&u, &m), h);
        assert!(abs_det_is_one(&u));
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn kernel_of_charge_like_map() {
        let m = vec![vec![1, 1, 0, 1], vec![1, 0, 1, 0]];
        let k = integer_kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn unimodular_completion() {
        let p = vec![3, 5, -2];
        let u = complete_to_unimodular(&p).unwrap();
        assert!(abs_det_is_one(&u));
        assert_eq!(u.iter().map(|r| r[0]).collect::<Vec<_>>(), p);
        assert!(complete_to_unimodular(&[2, 4]).is_none());
    }

    #[test]
    fn integer_solve() {
        let cols = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(solve_integer(&cols, &[2, 3, 5]), Some(vec![2, 3]));
        assert_eq!(solve_integer(&cols, &[2, 3, 4]), None);
        let a = vec![vec![2, 3, 0], vec![0, 1, 1]];
        let x = solve_integer_system(&a, &[1, 5]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![1, 5]);
        assert_eq!(solve_integer_system(&vec![vec![2, 4]], &[1]), None);
    }

    #[test]
    fn signature_of_hyperbolic() {
        let m = vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]];
        assert_eq!(signature(&m), (1, 2, 0));
    }
}
