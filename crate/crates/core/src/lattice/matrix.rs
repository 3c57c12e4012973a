use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LatticeError;

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed so that a matrix with zero
    /// rows still knows its width.
    pub fn from_rows<T>(cols: usize, rows: &[Vec<T>]) -> Result<Self, LatticeError>
    where
        T: Clone + Into<BigInt>,
    {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LatticeError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns<T>(rows: usize, columns: &[Vec<T>]) -> Result<Self, LatticeError>
    where
        T: Clone + Into<BigInt>,
    {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (k, &j) in columns.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.to_rational_rows())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect()
    }

    /// Inverse of a unimodular matrix, computed over the rationals and
    /// checked to be integral.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LatticeError> {
        let inv = rational_inverse(&self.to_rational_rows()).ok_or(LatticeError::Singular)?;
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if !inv[i][j].is_integer() {
                    return Err(LatticeError::NotUnimodular);
                }
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a rational matrix given by rows.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &pivot;
            for j in c..cols {
                let v = &factor * &m[rank][j];
                m[i][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Gauss–Jordan inverse; `None` when singular.
pub fn rational_inverse(rows: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pivot = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..2 * n {
                let v = &factor * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `x * basis = target` for a row vector `x` when the rows of `basis`
/// are linearly independent; `None` if `target` is outside their span.
pub fn solve_in_row_span(
    basis: &[Vec<BigRational>],
    target: &[BigRational],
) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = target.len();
    // Columns of the augmented system are the basis rows; eliminate on the transpose.
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let pivot = aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == r || aug[i][c].is_zero() {
                continue;
            }
            let factor = aug[i][c].clone();
            for j in 0..=k {
                let v = &factor * &aug[r][j];
                aug[i][j] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if aug[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][k].clone();
    }
    Some(x)
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rat_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Gcd of all entries (zero for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Scales a rational vector by a positive factor to the primitive integer
/// vector on the same ray. The zero vector maps to itself.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = content(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Sign-normalized primitive integer vector: first nonzero entry positive.
pub fn primitive_up_to_sign(v: &[BigInt]) -> Vec<BigInt> {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    out
}
