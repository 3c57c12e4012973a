//! Exact phase-one simplex for systems `A x = b, x >= 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Finds some `x >= 0` with `a x = b`, or `None` if the system is infeasible.
/// Bland's rule guarantees termination; arithmetic is exact.
pub fn find_nonnegative_solution(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }

    // Tableau columns: n structural, m artificial, then rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { -&a[i][j] } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    // Objective row: minimize the sum of artificials, expressed in the
    // nonbasic structural columns (reduced costs).
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    for cell in obj.iter_mut().skip(n).take(m) {
        *cell = BigRational::zero();
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        // ratio test, ties broken by smallest basic index
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a phase-one objective
            unreachable!("phase-one objective is bounded below by zero");
        };
        pivot(&mut t, pr, enter);
        basis[pr] = enter;
    }

    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for x in t[pr].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (x, y) in row.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}
