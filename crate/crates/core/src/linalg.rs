//! Fraction-free solve of integer linear systems with p-adic right-hand
//! sides. Bareiss elimination keeps every matrix entry an exact integer, so
//! the only p-adic divisions are by explicitly known integers and the
//! precision charge of each one is just ν_p of that integer.

use crate::padic::{PadicError, PadicNumber};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Solve `a x = b` for square nonsingular integer `a`. Pivots are the first
/// nonzero entry in each column, which keeps runs deterministic.
pub(crate) fn solve_integer_system(
    mut a: Vec<Vec<BigInt>>,
    mut b: Vec<PadicNumber>,
) -> Result<Vec<PadicNumber>, LinalgError> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n)
            .find(|&r| !a[r][k].is_zero())
            .ok_or(LinalgError::Singular)?;
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                debug_assert!((&t % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = t / &prev;
            }
            b[i] = b[i]
                .mul_bigint(&a[k][k])
                .sub(&b[k].mul_bigint(&a[i][k]))
                .div_bigint(&prev)?;
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = b;
    for i in (0..n).rev() {
        let mut acc = x[i].clone();
        for j in i + 1..n {
            acc = acc.sub(&x[j].mul_bigint(&a[i][j]));
        }
        x[i] = acc.div_bigint(&a[i][i])?;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn solves_a_small_dense_system() {
        let c = PadicContext::new(5, 12).unwrap();
        // x = 1, y = -2 for [[2,1],[1,3]] * (x,y) = (0,-5).
        let a = big(&[&[2, 1], &[1, 3]]);
        let b = vec![c.int(0), c.int(-5)];
        let x = solve_integer_system(a, b).unwrap();
        assert!(x[0].agrees(&c.int(1)));
        assert!(x[1].agrees(&c.int(-2)));
    }

    #[test]
    fn pivot_search_skips_leading_zeros() {
        let c = PadicContext::new(5, 12).unwrap();
        let a = big(&[&[0, 2], &[3, 1]]);
        let b = vec![c.int(4), c.int(5)];
        let x = solve_integer_system(a, b).unwrap();
        assert!(x[0].agrees(&c.int(1)));
        assert!(x[1].agrees(&c.int(2)));
    }

    #[test]
    fn charges_precision_only_for_p_in_the_pivots() {
        let c = PadicContext::new(5, 6).unwrap();
        // Divides by det = 5; one digit of absolute precision is the fee.
        let a = big(&[&[5]]);
        let b = vec![c.int(10)];
        let x = solve_integer_system(a, b).unwrap();
        assert!(x[0].agrees(&c.int(2)));
        assert_eq!(x[0].abs_prec(), Some(6 + 1 - 1));
    }

    #[test]
    fn reports_singular_matrices() {
        let c = PadicContext::new(5, 6).unwrap();
        let a = big(&[&[1, 2], &[2, 4]]);
        let b = vec![c.int(1), c.int(2)];
        assert_eq!(solve_integer_system(a, b), Err(LinalgError::Singular));
    }
}
