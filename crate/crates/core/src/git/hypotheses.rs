use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{GitError, WeightConfig};
use crate::lattice::{
    cone_contains, feasibility, integral_witness, smith_normal_form, Constraint, IntMatrix,
    Relation,
};

/// `Σ β_i = 0` in `X(G)`, torsion included.
pub fn is_unimodular(w: &WeightConfig) -> bool {
    w.sum_of(0..w.len()).is_zero()
}

/// A one-parameter subgroup pairing positively with a single weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LonelyWeight {
    /// 1-based coordinate label.
    pub index: usize,
    #[serde(serialize_with = "crate::io::ser::big_vec")]
    pub lambda: Vec<BigInt>,
}

/// The three checkable genericity conditions and their evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    /// The weights generate `X(G)` as a group.
    pub generates_characters: bool,
    #[serde(serialize_with = "crate::io::ser::big_vec")]
    pub invariant_factors: Vec<BigInt>,
    /// `0` is interior to the cone spanned by the free parts.
    pub zero_interior: bool,
    /// Nonzero `λ` with `⟨λ, β_i⟩ <= 0` for all `i`, if any.
    #[serde(serialize_with = "crate::io::ser::opt_big_vec")]
    pub nonpositive_lambda: Option<Vec<BigInt>>,
    /// Every nonzero `λ` pairs positively with at least two weights.
    pub two_positive: bool,
    pub lonely: Option<LonelyWeight>,
    pub reasons: Vec<String>,
}

pub fn is_generic(w: &WeightConfig) -> Result<GenericityReport, GitError> {
    let r = w.free_rank();
    let t = w.torsion_orders().len();
    let d = w.len();
    let mut reasons = Vec::new();

    // G1: [β_1 .. β_d | diag(0, k_j)] has trivial cokernel.
    let mut m = IntMatrix::zeros(r + t, d + t);
    for (i, b) in w.weights().iter().enumerate() {
        for (k, x) in b.free.iter().chain(&b.torsion).enumerate() {
            m[(k, i)] = BigInt::from(*x);
        }
    }
    for (j, &k) in w.torsion_orders().iter().enumerate() {
        m[(r + j, d + j)] = BigInt::from(k);
    }
    let snf = smith_normal_form(&m);
    let invariant_factors = snf.invariant_factors();
    let generates = snf.rank() == r + t && invariant_factors.iter().all(One::is_one);
    if !generates {
        reasons.push(format!(
            "weights do not generate the character group (invariant factors {:?}, rank {} of {})",
            invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            snf.rank(),
            r + t
        ));
    }

    // G2: ±e_k ∈ cone(β) for every k.
    let gens = w.free_parts(&(0..d).collect::<Vec<_>>());
    let mut nonpositive: Option<Vec<BigInt>> = None;
    'outer: for k in 0..r {
        for s in [1, -1] {
            let mut e = vec![BigRational::zero(); r];
            e[k] = BigRational::from_integer(s.into());
            let cert = cone_contains(&gens, &e)?;
            if !cert.is_feasible() {
                let sep = cert.separator.expect("infeasible carries a separator");
                nonpositive = Some(integral_witness(&sep).into_iter().map(|x| -x).collect());
                break 'outer;
            }
        }
    }
    let zero_interior = nonpositive.is_none();
    if let Some(l) = &nonpositive {
        reasons.push(format!(
            "0 is not interior to the weight cone: λ = {} pairs nonpositively with every weight",
            fmt_vec(l)
        ));
    }

    // G3: no λ with exactly one positive pairing.
    let mut lonely = None;
    for j in 0..d {
        let cs: Vec<Constraint> = (0..d)
            .map(|i| {
                if i == j {
                    Constraint::from_ints(&w.free_part(i), Relation::Greater)
                } else {
                    let neg: Vec<BigInt> = w.free_part(i).into_iter().map(|x| -x).collect();
                    Constraint::from_ints(&neg, Relation::GreaterEq)
                }
            })
            .collect();
        let cert = feasibility(r, &cs)?;
        if cert.is_feasible() {
            let lambda = integral_witness(cert.witness.as_ref().expect("feasible has witness"));
            reasons.push(format!(
                "λ = {} pairs positively only with weight {}",
                fmt_vec(&lambda),
                j + 1
            ));
            lonely = Some(LonelyWeight {
                index: j + 1,
                lambda,
            });
            break;
        }
    }
    let two_positive = lonely.is_none() && zero_interior;

    Ok(GenericityReport {
        generic: generates && zero_interior && two_positive,
        generates_characters: generates,
        invariant_factors,
        zero_interior,
        nonpositive_lambda: nonpositive,
        two_positive,
        lonely,
        reasons,
    })
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}
