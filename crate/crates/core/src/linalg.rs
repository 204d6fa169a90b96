//! Small dense linear algebra over a [`Scalar`] ring, pivoting on the
//! entry of least valuation so p-adic elimination stays stable.

use crate::error::{Error, Result};
use crate::poly::Scalar;

pub type Matrix<C> = Vec<Vec<C>>;

pub fn identity<C: Scalar>(n: usize, zero: &C) -> Matrix<C> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { zero.one_like() } else { zero.clone() }).collect())
        .collect()
}

pub fn transpose<C: Scalar>(a: &Matrix<C>) -> Matrix<C> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>, zero: &C) -> Matrix<C> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(zero.clone(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<C: Scalar>(a: &Matrix<C>, v: &[C], zero: &C) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(zero.clone(), |acc, (x, y)| acc + x.clone() * y.clone()))
        .collect()
}

pub fn dot<C: Scalar>(a: &[C], b: &[C], zero: &C) -> C {
    a.iter().zip(b).fold(zero.clone(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `a^T G b`.
pub fn bilinear<C: Scalar>(a: &[C], g: &Matrix<C>, b: &[C], zero: &C) -> C {
    dot(a, &mat_vec(g, b, zero), zero)
}

pub fn sub<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>) -> Matrix<C> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() - y.clone()).collect())
        .collect()
}

pub fn scale<C: Scalar>(a: &Matrix<C>, c: &C) -> Matrix<C> {
    a.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect()
}

/// Row-reduces `a` in place; returns the pivot columns.
fn row_reduce<C: Scalar>(a: &mut Matrix<C>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).min_by_key(|&i| a[i][c].pivot_key()).unwrap();
        if a[best][c].pivot_key() == i64::MAX {
            continue;
        }
        a.swap(r, best);
        let inv = a[r][c].try_inv().expect("nonzero pivot");
        for j in 0..cols {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero_s() {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    a[i][j] = a[i][j].clone() - factor.clone() * a[r][j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve<C: Scalar>(a: &Matrix<C>, b: &[C]) -> Result<Vec<C>> {
    let n = a.len();
    let mut aug: Matrix<C> = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return Err(Error::NonInvertible("singular linear system".into()));
    }
    Ok(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn inverse<C: Scalar>(a: &Matrix<C>, zero: &C) -> Result<Matrix<C>> {
    let n = a.len();
    let id = identity(n, zero);
    let mut aug: Matrix<C> = a.iter().zip(&id).map(|(r, e)| {
        let mut r = r.clone();
        r.extend(e.iter().cloned());
        r
    }).collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return Err(Error::NonInvertible("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant<C: Scalar>(a: &Matrix<C>, zero: &C) -> C {
    let n = a.len();
    let mut m = a.clone();
    let mut det = zero.one_like();
    for c in 0..n {
        let best = (c..n).min_by_key(|&i| m[i][c].pivot_key()).unwrap();
        if m[best][c].pivot_key() == i64::MAX {
            return zero.clone();
        }
        if best != c {
            m.swap(best, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det = det * piv.clone();
        let inv = piv.try_inv().expect("nonzero pivot");
        for i in c + 1..n {
            let factor = m[i][c].clone() * inv.clone();
            for j in c..n {
                m[i][j] = m[i][j].clone() - factor.clone() * m[c][j].clone();
            }
        }
    }
    det
}

/// Basis of the right kernel `{v : a v = 0}`.
pub fn kernel<C: Scalar>(a: &Matrix<C>, zero: &C) -> Vec<Vec<C>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![zero.clone(); cols];
            v[fc] = zero.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Indices of a maximal set of independent columns.
pub fn independent_columns<C: Scalar>(a: &Matrix<C>) -> Vec<usize> {
    let mut m = a.clone();
    row_reduce(&mut m)
}

/// Characteristic polynomial `det(T I - a)`, ascending coefficients, by
/// Faddeev-LeVerrier.
pub fn char_poly<C: Scalar>(a: &Matrix<C>, zero: &C) -> Result<Vec<C>> {
    let n = a.len();
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[n] = zero.one_like();
    let id = identity(n, zero);
    let mut m = vec![vec![zero.clone(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let am = mat_mul(a, &m, zero);
        m = am
            .iter()
            .zip(&id)
            .map(|(r, e)| r.iter().zip(e).map(|(x, y)| x.clone() + y.clone() * coeffs[n - k + 1].clone()).collect())
            .collect();
        let am = mat_mul(a, &m, zero);
        let tr = (0..n).fold(zero.clone(), |acc, i| acc + am[i][i].clone());
        coeffs[n - k] = -(tr.try_div(&zero.from_int_like(k as i64))?);
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[rat(3), rat(5)]).unwrap();
        assert_eq!(mat_vec(&a, &x, &Rational::zero()), vec![rat(3), rat(5)]);
        let inv = inverse(&a, &Rational::zero()).unwrap();
        assert_eq!(mat_mul(&a, &inv, &Rational::zero()), identity(2, &Rational::zero()));
        assert_eq!(determinant(&a, &Rational::zero()), rat(5));
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[rat(1), rat(1)]).is_err());
    }

    #[test]
    fn kernel_and_columns() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, &Rational::zero());
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v, &Rational::zero()).iter().all(|x| x.is_zero()));
        }
        assert_eq!(independent_columns(&a), vec![0]);
    }

    #[test]
    fn faddeev_leverrier() {
        // [[0, -1], [1, 0]] has char poly T^2 + 1
        let a = m(&[&[0, -1], &[1, 0]]);
        assert_eq!(char_poly(&a, &Rational::zero()).unwrap(), vec![rat(1), rat(0), rat(1)]);
        let b = m(&[&[2, 1, 0], &[0, 3, 1], &[0, 0, 5]]);
        // (T-2)(T-3)(T-5) = T^3 - 10T^2 + 31T - 30
        assert_eq!(char_poly(&b, &Rational::zero()).unwrap(), vec![rat(-30), rat(31), rat(-10), rat(1)]);
    }
}
