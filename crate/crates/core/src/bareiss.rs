//! Fraction-free elimination over any integral domain with exact division.
//!
//! The same routine serves machine integers, big integers and fields: in a
//! field the divisions are ordinary divisions, in an integral domain they are
//! exact by Sylvester's identity.

use std::ops::{Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Scalars usable with fraction-free elimination.
pub trait DomainScalar:
    Clone + PartialEq + Zero + One + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
}

impl<T> DomainScalar for T where
    T: Clone + PartialEq + Zero + One + Sub<Output = T> + Mul<Output = T> + Div<Output = T> + Neg<Output = T>
{
}

/// Determinant of a square matrix given as rows. Empty matrix has determinant one.
pub fn det<T: DomainScalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return T::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = m[i][k].clone();
            for j in k + 1..n {
                let v = pivot.clone() * m[i][j].clone() - lead.clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
            m[i][k] = T::zero();
        }
        prev = pivot;
    }
    let d = if n == 0 { T::one() } else { m[n - 1][n - 1].clone() };
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Rank over the fraction field of a (possibly rectangular) matrix given as rows.
pub fn rank<T: DomainScalar>(mut m: Vec<Vec<T>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            let lead = m[i][c].clone();
            for j in c + 1..cols {
                let v = pivot.clone() * m[i][j].clone() - lead.clone() * m[r][j].clone();
                m[i][j] = v / prev.clone();
            }
            m[i][c] = T::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn brute_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * brute_det(&minor)
            })
            .sum()
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let cases = vec![
            vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -2, 2]],
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 0, 1], vec![0, 2, 3], vec![4, 5, 6]],
            vec![vec![1, 2], vec![2, 4]],
        ];
        for m in cases {
            assert_eq!(det(m.clone()), brute_det(&m));
            let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            assert_eq!(det(big), BigInt::from(brute_det(&m)));
        }
        assert_eq!(det::<i64>(vec![]), 1);
    }

    #[test]
    fn rank_of_rectangular() {
        assert_eq!(rank(vec![vec![1i64, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rank(vec![vec![0i64, 1], vec![1, 0], vec![1, 1]]), 2);
        assert_eq!(rank(vec![vec![0i64, 0]]), 0);
    }
}
