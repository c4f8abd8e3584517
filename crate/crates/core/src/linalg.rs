//! Exact linear algebra over the coefficient fields: kernels, determinants,
//! inverses. Matrices are dense row-major `Vec<Vec<C>>`; everything here is
//! small (dimensions bounded by the systems we handle).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Rational};

/// Basis of the right kernel {x : Mx = 0} of a rational matrix.
///
/// Elimination is exact with a deterministic pivot rule (first row with a
/// nonzero entry in column order). Basis vectors are normalized to coprime
/// integer entries (content 1) with the first nonzero entry positive, one
/// vector per free column in column order.
pub fn exact_kernel(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<Rational>> = m.to_vec();

    // forward elimination to row echelon form, remembering pivot columns
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| !a[i][c].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in &mut a[r] {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }

    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![Rational::zero(); cols];
        v[fc] = Rational::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[ri][fc].clone();
        }
        basis.push(normalize_content(&v));
    }
    basis
}

/// Clear denominators and divide by the integer content; flip sign so the
/// first nonzero entry is positive.
fn normalize_content(v: &[Rational]) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut content = BigInt::zero();
    for i in &ints {
        content = content.gcd(i);
    }
    if content.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|i| i / &content).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out.into_iter().map(Rational::from).collect()
}

/// Determinant by Gaussian elimination with row swaps.
pub fn determinant<C: Coeff>(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut det = C::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return C::zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = C::one().div(&a[c][c]);
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let t = a[c][j].mul(&f);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    det
}

/// Matrix inverse over a field; `SingularMatrix` when rank-deficient.
pub fn invert<C: Coeff>(m: &[Vec<C>]) -> Result<Vec<Vec<C>>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { C::one() } else { C::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(p, c);
        inv.swap(p, c);
        let d = C::one().div(&a[c][c]);
        for j in 0..n {
            a[c][j] = a[c][j].mul(&d);
            inv[c][j] = inv[c][j].mul(&d);
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = a[c][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                    let t = inv[c][j].mul(&f);
                    inv[i][j] = inv[i][j].sub(&t);
                }
            }
        }
    }
    Ok(inv)
}

pub fn mat_vec<C: Coeff>(m: &[Vec<C>], v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(C::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn rmat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = rmat(&[&[1, 0], &[0, 1]]);
        assert!(exact_kernel(&m).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_full() {
        let m = rmat(&[&[0, 0, 0], &[0, 0, 0]]);
        let b = exact_kernel(&m);
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let m = rmat(&[&[1, 1, 1]]);
        let b = exact_kernel(&m);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0], vec![rat(1, 1), rat(-1, 1), rat(0, 1)]);
        assert_eq!(b[1], vec![rat(1, 1), rat(0, 1), rat(-1, 1)]);
        // exactness: M x = 0
        for v in &b {
            let s = v.iter().fold(rat(0, 1), |acc, x| &acc + x);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn rank_nullity() {
        let m = rmat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let b = exact_kernel(&m);
        // rank 2, nullity 1
        assert_eq!(b.len(), 1);
        for v in &b {
            for row in &m {
                let dot = row
                    .iter()
                    .zip(v)
                    .fold(rat(0, 1), |acc, (a, x)| &acc + &(a * x));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn content_one_normalization() {
        let m = vec![vec![rat(1, 1), rat(1, 2)]];
        let b = exact_kernel(&m);
        assert_eq!(b.len(), 1);
        // kernel of [1, 1/2]: x1 = -x2/2, normalized to (1, -2)... first
        // nonzero positive: (1, -2)
        assert_eq!(b[0], vec![rat(1, 1), rat(-2, 1)]);
    }

    #[test]
    fn determinant_exact() {
        let m = rmat(&[&[2, 1], &[7, 4]]);
        assert_eq!(determinant(&m), rat(1, 1));
        let s = rmat(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&s), rat(0, 1));
    }

    #[test]
    fn inverse_round_trip() {
        let m = rmat(&[&[2, 1, 0], &[1, 1, 1], &[0, 3, 1]]);
        let inv = invert(&m).unwrap();
        for i in 0..3 {
            let e: Vec<Rational> = (0..3)
                .map(|j| if i == j { rat(1, 1) } else { rat(0, 1) })
                .collect();
            let col: Vec<Rational> = (0..3).map(|r| inv[r][i].clone()).collect();
            assert_eq!(mat_vec(&m, &col), e);
        }
        assert_eq!(invert(&rmat(&[&[1, 2], &[2, 4]])), Err(Error::SingularMatrix));
    }
}
