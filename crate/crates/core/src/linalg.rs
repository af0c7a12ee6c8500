//! Dense linear algebra over the scalar field.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form; returns pivot columns. Rows are reduced in place
/// and zero rows dropped.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for c in col..ncols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    if !m[row][c].is_zero() {
                        m[r][c] = &m[r][c] - &(&f * &m[row][c]);
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        out.push(v);
    }
    out
}

pub fn rank(m: &Matrix, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Determinant by Gaussian elimination, fraction-free when every entry is a
/// polynomial.
pub fn det(m: &Matrix) -> Result<Scalar> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::input("determinant of a non-square matrix"));
    }
    if m.iter().flatten().all(|x| x.denom().is_one()) {
        return Ok(Scalar::from_poly(bareiss(m)));
    }
    let mut a = m.clone();
    let mut d = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(Scalar::zero());
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d = &d * &a[col][col];
        let inv = a[col][col].inv()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                a[r][c] = &a[r][c] - &(&f * &a[col][c]);
            }
        }
    }
    Ok(d)
}

/// Bareiss elimination: every division is exact, so no gcds are needed.
fn bareiss(m: &Matrix) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a: Vec<Vec<Poly>> = m.iter().map(|r| r.iter().map(|x| x.numer().clone()).collect()).collect();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        Poly::zero().sub(&d)
    } else {
        d
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor(m: &Matrix) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Matrix = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][j] * &det_cofactor(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = &(&(&s(1) * &v[0]) + &(&s(2) * &v[1])) + &(&s(3) * &v[2]);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn elimination_and_cofactor_agree() {
        let p = Scalar::param("p");
        let m = vec![
            vec![p.clone(), s(1), s(0)],
            vec![s(2), p.clone(), s(1)],
            vec![s(0), s(3), p.clone()],
        ];
        assert_eq!(det(&m).unwrap(), det_cofactor(&m));
    }
}
