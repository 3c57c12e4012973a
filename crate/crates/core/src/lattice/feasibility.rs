//! Exact feasibility of homogeneous linear systems `⟨λ, v⟩ rel 0` with
//! checkable certificates.
//!
//! Strict constraints are normalized to `⟨λ, v⟩ >= 1`, which is equivalent
//! because the solution set is a cone. A feasible answer carries a witness
//! `λ`; an infeasible one carries Farkas multipliers `y` (one per
//! constraint, nonnegative except on equalities) with `Σ y_j v_j = 0` and a
//! strictly positive total weight on the strict constraints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::rat_dot;
use super::simplex::find_nonnegative_solution;
use super::LatticeError;

/// Dimension up to which Fourier–Motzkin is tried first.
pub const FOURIER_MOTZKIN_MAX_DIM: usize = 6;
/// Row budget for a single Fourier–Motzkin run before falling back to simplex.
const FOURIER_MOTZKIN_MAX_ROWS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    GreaterEq,
    #[serde(rename = "=")]
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<BigRational>,
    pub relation: Relation,
}

impl Constraint {
    pub fn new(normal: Vec<BigRational>, relation: Relation) -> Self {
        Constraint { normal, relation }
    }

    pub fn from_ints(normal: &[BigInt], relation: Relation) -> Self {
        Constraint {
            normal: normal
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
            relation,
        }
    }

    pub fn holds_at(&self, point: &[BigRational]) -> bool {
        let v = rat_dot(&self.normal, point);
        match self.relation {
            Relation::Greater => v.is_positive(),
            Relation::GreaterEq => !v.is_negative(),
            Relation::Equal => v.is_zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
}

/// Outcome of a feasibility or cone-membership query.
///
/// For [`feasibility`], `witness` is a solution `λ` and `separator` holds the
/// Farkas multipliers, indexed like the constraints. For
/// [`cone_contains`](super::cone_contains), `witness` holds the cone
/// coefficients and `separator` a separating functional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityCertificate {
    pub verdict: Verdict,
    #[serde(serialize_with = "crate::io::ser::opt_rat_vec")]
    pub witness: Option<Vec<BigRational>>,
    #[serde(serialize_with = "crate::io::ser::opt_rat_vec")]
    pub separator: Option<Vec<BigRational>>,
}

impl FeasibilityCertificate {
    pub fn feasible(witness: Vec<BigRational>) -> Self {
        FeasibilityCertificate {
            verdict: Verdict::Feasible,
            witness: Some(witness),
            separator: None,
        }
    }

    pub fn infeasible(separator: Vec<BigRational>) -> Self {
        FeasibilityCertificate {
            verdict: Verdict::Infeasible,
            witness: None,
            separator: Some(separator),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    /// Fourier–Motzkin in low dimension, simplex otherwise.
    #[default]
    Auto,
    FourierMotzkin,
    Simplex,
}

/// Decides whether some `λ ∈ ℚ^dim` satisfies every constraint.
pub fn feasibility(
    dim: usize,
    constraints: &[Constraint],
) -> Result<FeasibilityCertificate, LatticeError> {
    feasibility_with(dim, constraints, Method::Auto)
}

pub fn feasibility_with(
    dim: usize,
    constraints: &[Constraint],
    method: Method,
) -> Result<FeasibilityCertificate, LatticeError> {
    for c in constraints {
        if c.normal.len() != dim {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: c.normal.len(),
            });
        }
    }
    let cert = match method {
        Method::FourierMotzkin => fourier_motzkin(dim, constraints, usize::MAX)
            .expect("unbounded row budget never gives up"),
        Method::Simplex => simplex_route(dim, constraints)?,
        Method::Auto => {
            let fm = if dim <= FOURIER_MOTZKIN_MAX_DIM {
                fourier_motzkin(dim, constraints, FOURIER_MOTZKIN_MAX_ROWS)
            } else {
                None
            };
            match fm {
                Some(c) => c,
                None => simplex_route(dim, constraints)?,
            }
        }
    };
    if !verify_feasibility(dim, constraints, &cert) {
        return Err(LatticeError::CertificateRejected);
    }
    Ok(cert)
}

/// Re-checks a certificate by exact substitution.
pub fn verify_feasibility(
    dim: usize,
    constraints: &[Constraint],
    cert: &FeasibilityCertificate,
) -> bool {
    match cert.verdict {
        Verdict::Feasible => match &cert.witness {
            Some(w) => w.len() == dim && constraints.iter().all(|c| c.holds_at(w)),
            None => false,
        },
        Verdict::Infeasible => {
            let Some(y) = &cert.separator else {
                return false;
            };
            if y.len() != constraints.len() {
                return false;
            }
            let mut combo = vec![BigRational::zero(); dim];
            let mut strict_weight = BigRational::zero();
            for (yj, c) in y.iter().zip(constraints) {
                if c.relation != Relation::Equal && yj.is_negative() {
                    return false;
                }
                if c.relation == Relation::Greater {
                    strict_weight += yj;
                }
                for (acc, v) in combo.iter_mut().zip(&c.normal) {
                    *acc += yj * v;
                }
            }
            combo.iter().all(Zero::is_zero) && strict_weight.is_positive()
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    coef: Vec<BigRational>,
    rhs: BigRational,
    mult: Vec<BigRational>,
}

impl Row {
    fn combine(p: &Row, wp: &BigRational, n: &Row, wn: &BigRational) -> Row {
        Row {
            coef: p.coef.iter().zip(&n.coef).map(|(a, b)| a * wp + b * wn).collect(),
            rhs: &p.rhs * wp + &n.rhs * wn,
            mult: p.mult.iter().zip(&n.mult).map(|(a, b)| a * wp + b * wn).collect(),
        }
    }

    /// Divides by a positive scalar so the constraint part is primitive-ish;
    /// keeps numbers from growing across eliminations.
    fn normalize(&mut self) {
        let scale = self
            .coef
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|x| x.abs())
            .filter(|x| !x.is_zero())
            .max();
        if let Some(s) = scale {
            for x in self.coef.iter_mut().chain(self.mult.iter_mut()) {
                *x /= &s;
            }
            self.rhs /= &s;
        }
    }
}

/// Fourier–Motzkin elimination with multiplier tracking. Returns `None` when
/// the row budget is exceeded.
fn fourier_motzkin(
    dim: usize,
    constraints: &[Constraint],
    max_rows: usize,
) -> Option<FeasibilityCertificate> {
    let m = constraints.len();
    let unit = |j: usize, s: i64| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); m];
        v[j] = BigRational::from_integer(s.into());
        v
    };
    let mut rows: Vec<Row> = Vec::new();
    for (j, c) in constraints.iter().enumerate() {
        match c.relation {
            Relation::Greater => rows.push(Row {
                coef: c.normal.clone(),
                rhs: BigRational::one(),
                mult: unit(j, 1),
            }),
            Relation::GreaterEq => rows.push(Row {
                coef: c.normal.clone(),
                rhs: BigRational::zero(),
                mult: unit(j, 1),
            }),
            Relation::Equal => {
                rows.push(Row {
                    coef: c.normal.clone(),
                    rhs: BigRational::zero(),
                    mult: unit(j, 1),
                });
                rows.push(Row {
                    coef: c.normal.iter().map(|x| -x).collect(),
                    rhs: BigRational::zero(),
                    mult: unit(j, -1),
                });
            }
        }
    }

    // levels[k] holds the rows that only involve variables 0..=k.
    let mut levels: Vec<Vec<Row>> = vec![Vec::new(); dim];
    for k in (0..dim).rev() {
        if let Some(cert) = contradiction(&rows) {
            return Some(cert);
        }
        rows.retain(|r| r.coef.iter().any(|x| !x.is_zero()) || r.rhs.is_positive());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in &rows {
            if r.coef[k].is_positive() {
                pos.push(r);
            } else if r.coef[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r.clone());
            }
        }
        if rest.len() + pos.len() * neg.len() > max_rows {
            return None;
        }
        for p in &pos {
            for n in &neg {
                let wp = -&n.coef[k];
                let wn = p.coef[k].clone();
                let mut r = Row::combine(p, &wp, n, &wn);
                r.coef[k] = BigRational::zero();
                r.normalize();
                rest.push(r);
            }
        }
        dedup_rows(&mut rest);
        levels[k] = std::mem::replace(&mut rows, rest);
    }
    if let Some(cert) = contradiction(&rows) {
        return Some(cert);
    }

    // Back-substitution, choosing at each step the integer nearest zero
    // inside the allowed interval when one exists.
    let mut point: Vec<BigRational> = Vec::with_capacity(dim);
    for (k, level) in levels.iter().enumerate() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for r in level {
            let a = &r.coef[k];
            if a.is_zero() {
                continue;
            }
            let slack = &r.rhs - rat_dot(&r.coef[..k], &point);
            let bound = slack / a;
            if a.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        point.push(pick_value(lo, hi));
    }
    Some(FeasibilityCertificate::feasible(point))
}

fn contradiction(rows: &[Row]) -> Option<FeasibilityCertificate> {
    rows.iter()
        .find(|r| r.coef.iter().all(Zero::is_zero) && r.rhs.is_positive())
        .map(|r| FeasibilityCertificate::infeasible(r.mult.clone()))
}

fn dedup_rows(rows: &mut Vec<Row>) {
    let mut seen = std::collections::HashSet::new();
    rows.retain(|r| seen.insert((r.coef.clone(), r.rhs.clone())));
}

fn pick_value(lo: Option<BigRational>, hi: Option<BigRational>) -> BigRational {
    let candidate = match (&lo, &hi) {
        (Some(l), _) if l.is_positive() => l.ceil(),
        (_, Some(h)) if h.is_negative() => h.floor(),
        _ => BigRational::zero(),
    };
    let inside = lo.as_ref().is_none_or(|l| candidate >= *l) && hi.as_ref().is_none_or(|h| candidate <= *h);
    if inside {
        candidate
    } else {
        lo.expect("an empty interval would have produced a contradiction")
    }
}

/// Simplex route: the primal system in standard form, and on failure the
/// Farkas alternative, which is then guaranteed to be solvable.
fn simplex_route(
    dim: usize,
    constraints: &[Constraint],
) -> Result<FeasibilityCertificate, LatticeError> {
    if constraints.is_empty() {
        return Ok(FeasibilityCertificate::feasible(vec![BigRational::zero(); dim]));
    }
    let ineq: Vec<usize> = (0..constraints.len())
        .filter(|&j| constraints[j].relation != Relation::Equal)
        .collect();
    // variables: p (dim), q (dim), slack per inequality
    let nvars = 2 * dim + ineq.len();
    let mut a = Vec::with_capacity(constraints.len());
    let mut b = Vec::with_capacity(constraints.len());
    for (j, c) in constraints.iter().enumerate() {
        let mut row = vec![BigRational::zero(); nvars];
        for k in 0..dim {
            row[k] = c.normal[k].clone();
            row[dim + k] = -&c.normal[k];
        }
        if let Some(s) = ineq.iter().position(|&i| i == j) {
            row[2 * dim + s] = -BigRational::one();
        }
        a.push(row);
        b.push(if c.relation == Relation::Greater {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    if let Some(x) = find_nonnegative_solution(&a, &b) {
        let lambda = (0..dim).map(|k| &x[k] - &x[dim + k]).collect();
        return Ok(FeasibilityCertificate::feasible(lambda));
    }

    // Alternative: y >= 0 on inequalities, z = z+ - z- on equalities,
    // Σ y_j v_j + Σ z_j v_j = 0 and Σ_{strict} y_j = 1.
    let eq: Vec<usize> = (0..constraints.len())
        .filter(|&j| constraints[j].relation == Relation::Equal)
        .collect();
    let nalt = ineq.len() + 2 * eq.len();
    let mut alt = vec![vec![BigRational::zero(); nalt]; dim + 1];
    for (s, &j) in ineq.iter().enumerate() {
        for k in 0..dim {
            alt[k][s] = constraints[j].normal[k].clone();
        }
        if constraints[j].relation == Relation::Greater {
            alt[dim][s] = BigRational::one();
        }
    }
    for (s, &j) in eq.iter().enumerate() {
        for k in 0..dim {
            alt[k][ineq.len() + 2 * s] = constraints[j].normal[k].clone();
            alt[k][ineq.len() + 2 * s + 1] = -&constraints[j].normal[k];
        }
    }
    let mut rhs = vec![BigRational::zero(); dim + 1];
    rhs[dim] = BigRational::one();
    let y = find_nonnegative_solution(&alt, &rhs).ok_or(LatticeError::CertificateRejected)?;
    let mut multipliers = vec![BigRational::zero(); constraints.len()];
    for (s, &j) in ineq.iter().enumerate() {
        multipliers[j] = y[s].clone();
    }
    for (s, &j) in eq.iter().enumerate() {
        multipliers[j] = &y[ineq.len() + 2 * s] - &y[ineq.len() + 2 * s + 1];
    }
    Ok(FeasibilityCertificate::infeasible(multipliers))
}

/// Integer scaling of a rational witness that keeps it primitive.
pub fn integral_witness(witness: &[BigRational]) -> Vec<BigInt> {
    let lcm = witness.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = witness
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}
