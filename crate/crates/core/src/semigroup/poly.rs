use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SemigroupError;

/// Graded reverse lexicographic comparison of exponent vectors.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| u64::from(x)).sum();
    let db: u64 = b.iter().map(|&x| u64::from(x)).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // the smaller last exponent is the larger monomial
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Polynomial with integer coefficients in named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePolynomial {
    pub fn zero(vars: &[String]) -> Self {
        SparsePolynomial {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, 1)
    }

    pub fn monomial(vars: &[String], exponents: Vec<u32>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exponents.len(), vars.len(), "exponent length");
        let mut p = Self::zero(vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn variable(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, 1)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// Terms in descending graded reverse lexicographic order.
    pub fn terms(&self) -> Vec<(&Vec<u32>, &BigInt)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        t
    }

    fn check(&self, other: &Self) -> Result<(), SemigroupError> {
        if self.vars != other.vars {
            return Err(SemigroupError::VariableMismatch);
        }
        Ok(())
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SemigroupError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SemigroupError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        SparsePolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SemigroupError> {
        self.check(other)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Parses sums of terms such as `a^3*b - 2 c d e`. Variables are matched
    /// greedily against `vars`, so juxtaposed names like `ab` work.
    pub fn parse(vars: &[String], s: &str) -> Result<Self, SemigroupError> {
        Parser {
            vars,
            src: s.as_bytes(),
            pos: 0,
        }
        .polynomial()
    }
}

struct Parser<'a> {
    vars: &'a [String],
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SemigroupError {
        SemigroupError::Parse {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn variable(&mut self) -> Option<usize> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let (i, len) = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty() && rest.starts_with(v.as_bytes()))
            .map(|(i, v)| (i, v.len()))
            .max_by_key(|&(_, len)| len)?;
        self.pos += len;
        Some(i)
    }

    fn polynomial(&mut self) -> Result<SparsePolynomial, SemigroupError> {
        let mut out = SparsePolynomial::zero(self.vars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return Err(self.err("empty polynomial")),
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    BigInt::one()
                }
                Some(b'-') => {
                    self.pos += 1;
                    -BigInt::one()
                }
                Some(_) if first => BigInt::one(),
                Some(_) => return Err(self.err("expected '+' or '-'")),
            };
            first = false;
            let (e, c) = self.term()?;
            out.add_term(e, sign * c);
        }
    }

    fn term(&mut self) -> Result<(Vec<u32>, BigInt), SemigroupError> {
        let mut e = vec![0u32; self.vars.len()];
        let coef = self.integer();
        let mut factors = 0;
        loop {
            if (factors > 0 || coef.is_some()) && self.peek() == Some(b'*') {
                self.pos += 1;
            }
            let Some(i) = self.variable() else { break };
            let mut k = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                k = self
                    .integer()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| self.err("expected exponent"))?;
            }
            e[i] += k;
            factors += 1;
        }
        if coef.is_none() && factors == 0 {
            return Err(self.err("expected a term"));
        }
        Ok((e, coef.unwrap_or_else(BigInt::one)))
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.abs();
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{x}", self.vars[i])
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for SparsePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Rectangular matrix of polynomials over a common variable list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SparsePolynomial>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<SparsePolynomial>>) -> Result<Self, SemigroupError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(SemigroupError::Shape("ragged rows".into()));
        }
        let entries: Vec<SparsePolynomial> = rows.into_iter().flatten().collect();
        if let Some(first) = entries.first() {
            if entries.iter().any(|p| p.vars != first.vars) {
                return Err(SemigroupError::VariableMismatch);
            }
        }
        Ok(PolyMatrix {
            rows: entries.len().checked_div(cols).unwrap_or(0),
            cols,
            entries,
        })
    }

    /// Parses a matrix given as rows of polynomial strings.
    pub fn parse(vars: &[String], rows: &[Vec<String>]) -> Result<Self, SemigroupError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| SparsePolynomial::parse(vars, s)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::from_rows(parsed)
    }

    pub fn scalar(vars: &[String], n: usize, f: &SparsePolynomial) -> Self {
        let mut entries = vec![SparsePolynomial::zero(vars); n * n];
        for i in 0..n {
            entries[i * n + i] = f.clone();
        }
        PolyMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn identity(vars: &[String], n: usize) -> Self {
        Self::scalar(vars, n, &SparsePolynomial::one(vars))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, SemigroupError> {
        if self.cols != other.rows {
            return Err(SemigroupError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let vars = match self.entries.first().or(other.entries.first()) {
            Some(p) => p.vars.clone(),
            None => Vec::new(),
        };
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = SparsePolynomial::zero(&vars);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }
}

pub fn poly_mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, SemigroupError> {
    a.mul(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub passes: bool,
    /// `+1` if `(d0, d1)` factors `f`, `-1` if it factors `-f`, `0` if neither.
    pub sign: i8,
    pub d0_d1: Vec<Vec<String>>,
    pub d1_d0: Vec<Vec<String>>,
    /// First entry `(i, j)` (1-based) of `d0·d1` differing from `f·I`.
    pub first_mismatch: Option<(usize, usize)>,
}

/// Checks `d0·d1 = d1·d0 = f·I`, also recording whether `−f` would work.
pub fn verify_matrix_factorization(
    d0: &PolyMatrix,
    d1: &PolyMatrix,
    f: &SparsePolynomial,
) -> Result<FactorizationReport, SemigroupError> {
    let n = d0.rows;
    if d0.cols != n || d1.rows != n || d1.cols != n {
        return Err(SemigroupError::Shape(
            "matrix factorization needs two square matrices of equal size".into(),
        ));
    }
    let ab = d0.mul(d1)?;
    let ba = d1.mul(d0)?;
    let vars = f.vars().to_vec();
    let plus = PolyMatrix::scalar(&vars, n, f);
    let minus = PolyMatrix::scalar(&vars, n, &f.neg());
    let sign = if ab == plus && ba == plus {
        1
    } else if ab == minus && ba == minus {
        -1
    } else {
        0
    };
    let first_mismatch = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| ab.get(i, j) != plus.get(i, j))
        .map(|(i, j)| (i + 1, j + 1));
    Ok(FactorizationReport {
        passes: sign == 1,
        sign,
        d0_d1: ab.to_strings(),
        d1_d0: ba.to_strings(),
        first_mismatch,
    })
}
