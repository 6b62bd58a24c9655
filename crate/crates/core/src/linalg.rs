//! Exact integer nullspaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{common_denominator, content, Rat};

/// Fraction-free Gauss-Jordan reduction. Returns the pivot columns; rows are
/// reduced in place so that each pivot column has a single nonzero entry.
fn reduce(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let g = f.gcd(&piv);
            let (a, b) = (&piv / &g, &f / &g);
            let (top, rest) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (x, y) in rest.iter_mut().zip(top.iter()) {
                *x = &a * &*x - &b * y;
            }
            normalize_row(rest);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn normalize_row(row: &mut [BigInt]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Primitive integer vector with first nonzero entry positive.
pub fn primitive_sign_normalized(mut v: Vec<BigInt>) -> Vec<BigInt> {
    normalize_row(&mut v);
    if v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

/// Basis of the rational kernel `{x : A x = 0}` of an integer matrix with
/// `cols` columns, as primitive integer vectors.
///
/// Vector `k` belongs to the `k`-th free column (in increasing order) and is
/// supported on that column and on pivot columns to its left, so the first
/// vector has the smallest possible last nonzero position.
pub fn integer_nullspace(matrix: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let pivots = reduce(&mut rows, cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let l = pivots
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, &pc)| acc.lcm(&rows[i][pc]));
        let mut v = vec![BigInt::zero(); cols];
        v[free] = l.clone();
        for (i, &pc) in pivots.iter().enumerate() {
            if pc < free {
                v[pc] = -(&l / &rows[i][pc]) * &rows[i][free];
            }
        }
        out.push(primitive_sign_normalized(v));
    }
    out
}

/// Rank of an integer matrix.
pub fn rank(matrix: &[Vec<BigInt>], cols: usize) -> usize {
    let mut rows = matrix.to_vec();
    reduce(&mut rows, cols).len()
}

/// Kernel of a rational matrix, by clearing each row's denominators first.
pub fn rational_nullspace(matrix: &[Vec<Rat>], cols: usize) -> Vec<Vec<BigInt>> {
    let ints: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            let d = common_denominator(row);
            row.iter()
                .map(|x| (x * Rat::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    integer_nullspace(&ints, cols)
}

/// Transpose of a dense matrix with `cols` columns.
pub fn transpose(matrix: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    (0..cols)
        .map(|c| matrix.iter().map(|r| r[c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mul(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    #[test]
    fn kernel_of_single_row() {
        let a = mat(&[&[2, 3]]);
        let k = integer_nullspace(&a, 2);
        assert_eq!(k, vec![vec![BigInt::from(3), BigInt::from(-2)]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = mat(&[&[1, 2, 3, 4], &[2, 4, 7, 1], &[3, 6, 10, 5]]);
        let k = integer_nullspace(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mul(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&a, 4), 2);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let a = mat(&[&[1, 0], &[0, 1]]);
        assert!(integer_nullspace(&a, 2).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let a = mat(&[&[0, 0, 0]]);
        assert_eq!(integer_nullspace(&a, 3).len(), 3);
    }
}
