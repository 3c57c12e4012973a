//! Hermite normal forms and the lattice computations built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LatticeError};

/// Row echelon form by unimodular row operations, returning `(h, u)` with
/// `u * a == h`. Pivots are positive and entries above each pivot are
/// reduced into `[0, pivot)`, so `h` is the row-style Hermite normal form.
pub fn hermite_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid on column c below row r until a single nonzero remains.
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                if pivot.is_none_or(|p| h[(i, c)].abs() < h[(p, c)].abs()) {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(h[(i, c)].div_floor(&h[(r, c)]));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -(h[(i, c)].div_floor(&h[(r, c)]));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Canonical basis (nonzero rows of the Hermite normal form) of the lattice
/// spanned by `rows`.
pub fn hermite_basis(cols: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let a = IntMatrix::from_rows(cols, rows).expect("rows share a width");
    let (h, _) = hermite_with_transform(&a);
    h.to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// A ℤ-basis of `{m : a·m = 0}`, in Hermite normal form.
pub fn lattice_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    let (h, u) = hermite_with_transform(&a.transpose());
    let kernel: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    if kernel.is_empty() {
        return kernel;
    }
    hermite_basis(n, &kernel)
}

/// Unimodular matrix whose last row is the primitive vector `c`.
pub fn complete_to_unimodular(c: &[BigInt]) -> Result<IntMatrix, LatticeError> {
    let n = c.len();
    if n == 0 {
        return Err(LatticeError::NotPrimitive);
    }
    let mut unit = vec![BigInt::zero(); n];
    unit[n - 1] = BigInt::one();
    if c == unit.as_slice() {
        return Ok(IntMatrix::identity(n));
    }
    // u * c == e_1, so the first column of u^{-1} is c.
    let col = IntMatrix::from_rows(1, &c.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>())?;
    let (h, u) = hermite_with_transform(&col);
    if !h[(0, 0)].is_one() {
        return Err(LatticeError::NotPrimitive);
    }
    let inv_t = u.inverse_unimodular()?.transpose();
    let mut rows = inv_t.to_rows();
    let first = rows.remove(0);
    rows.push(first);
    let out = IntMatrix::from_rows(n, &rows)?;
    debug_assert_eq!(out.row(n - 1), c);
    Ok(out)
}

/// Saturation of the lattice spanned by `rows` inside ℤ^cols, i.e. the
/// integer points of its rational span, in Hermite normal form.
pub fn saturate(cols: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let a = IntMatrix::from_rows(cols, rows).expect("rows share a width");
    let orth = lattice_kernel(&a);
    if orth.is_empty() {
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    lattice_kernel(&IntMatrix::from_rows(cols, &orth).expect("kernel width"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::smith_normal_form;
    use crate::lattice::matrix::to_big;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows[0].len(), rows).unwrap()
    }

    /// Kernel via Smith normal form: the trailing columns of `v`.
    fn snf_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
        let s = smith_normal_form(a);
        (s.rank()..a.cols()).map(|j| s.v.column(j)).collect()
    }

    fn same_lattice(n: usize, a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> bool {
        hermite_basis(n, a) == hermite_basis(n, b)
    }

    fn is_saturated(n: usize, basis: &[Vec<BigInt>]) -> bool {
        if basis.is_empty() {
            return true;
        }
        let s = smith_normal_form(&IntMatrix::from_rows(n, basis).unwrap());
        s.rank() == basis.len() && s.invariant_factors().iter().all(|f| f.is_one())
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let k = lattice_kernel(&IntMatrix::zeros(1, 3));
        assert_eq!(k, vec![to_big(&[1, 0, 0]), to_big(&[0, 1, 0]), to_big(&[0, 0, 1])]);
    }

    #[test]
    fn conifold_kernel() {
        let a = m(&[vec![1, 1, -1, -1]]);
        let k = lattice_kernel(&a);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        assert!(is_saturated(4, &k));
        assert!(same_lattice(4, &k, &snf_kernel(&a)));
        assert_eq!(
            k,
            vec![to_big(&[1, 0, 0, 1]), to_big(&[0, 1, 0, 1]), to_big(&[0, 0, 1, -1])]
        );
    }

    #[test]
    fn example_weight_kernel_rank_four() {
        let a = m(&[vec![3, 1, 0, -1, -3, 0], vec![0, 1, 3, 0, -3, -1]]);
        let k = lattice_kernel(&a);
        assert_eq!(k.len(), 4);
        assert!(is_saturated(6, &k));
        assert!(same_lattice(6, &k, &snf_kernel(&a)));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = vec![to_big(&[2, 4, 6]), to_big(&[1, 1, 1])];
        let b = vec![to_big(&[1, 1, 1]), to_big(&[3, 5, 7])];
        assert_eq!(hermite_basis(3, &a), hermite_basis(3, &b));
    }

    #[test]
    fn unimodular_completion() {
        let c = to_big(&[2, 3, 5]);
        let p = complete_to_unimodular(&c).unwrap();
        assert_eq!(p.row(2), c.as_slice());
        assert!(p.determinant().unwrap().abs().is_one());
        assert!(complete_to_unimodular(&to_big(&[2, 4])).is_err());
    }

    #[test]
    fn saturation_of_sublattice() {
        let s = saturate(3, &[to_big(&[2, 0, 0]), to_big(&[0, 2, 2])]);
        assert_eq!(s, vec![to_big(&[1, 0, 0]), to_big(&[0, 1, 1])]);
    }

    proptest! {
        #[test]
        fn kernel_properties(rows in 1usize..4, cols in 1usize..6, seed in proptest::collection::vec(-6i64..7, 24)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 6..i * 6 + cols].to_vec()).collect();
            let a = IntMatrix::from_rows(cols, &data).unwrap();
            let k = lattice_kernel(&a);
            for v in &k {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
            prop_assert_eq!(k.len() + a.rank(), cols);
            prop_assert!(is_saturated(cols, &k));
            prop_assert!(same_lattice(cols, &k, &snf_kernel(&a)));
        }
    }
}
