use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::feasibility::{feasibility, integral_witness, Constraint, FeasibilityCertificate, Relation, Verdict};
use super::matrix::rat_dot;
use super::simplex::find_nonnegative_solution;
use super::LatticeError;

/// Decides `target ∈ cone(generators)`.
///
/// A contained target comes with nonnegative coefficients `a` such that
/// `Σ a_i g_i = target`. Otherwise the certificate carries a separating
/// functional `λ` (primitive integral) with `⟨λ, g⟩ >= 0` for every
/// generator and `⟨λ, target⟩ < 0`.
pub fn cone_contains(
    generators: &[Vec<BigInt>],
    target: &[BigRational],
) -> Result<FeasibilityCertificate, LatticeError> {
    let dim = target.len();
    for g in generators {
        if g.len() != dim {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: g.len(),
            });
        }
    }
    if target.iter().all(Zero::is_zero) {
        return Ok(FeasibilityCertificate::feasible(vec![
            BigRational::zero();
            generators.len()
        ]));
    }

    let a: Vec<Vec<BigRational>> = (0..dim)
        .map(|k| {
            generators
                .iter()
                .map(|g| BigRational::from_integer(g[k].clone()))
                .collect()
        })
        .collect();
    let cert = if let Some(coefficients) = find_nonnegative_solution(&a, target) {
        FeasibilityCertificate::feasible(coefficients)
    } else {
        let mut cs: Vec<Constraint> = generators
            .iter()
            .map(|g| Constraint::from_ints(g, Relation::GreaterEq))
            .collect();
        cs.push(Constraint::new(
            target.iter().map(|x| -x).collect(),
            Relation::Greater,
        ));
        let sep = feasibility(dim, &cs)?;
        if sep.verdict != Verdict::Feasible {
            // Farkas: exactly one of the two systems is solvable.
            return Err(LatticeError::CertificateRejected);
        }
        let lambda = integral_witness(sep.witness.as_ref().expect("feasible has witness"));
        FeasibilityCertificate::infeasible(
            lambda.into_iter().map(BigRational::from_integer).collect(),
        )
    };
    if !verify_cone_certificate(generators, target, &cert) {
        return Err(LatticeError::CertificateRejected);
    }
    Ok(cert)
}

/// Re-checks a cone-membership certificate by exact substitution.
pub fn verify_cone_certificate(
    generators: &[Vec<BigInt>],
    target: &[BigRational],
    cert: &FeasibilityCertificate,
) -> bool {
    let dim = target.len();
    match cert.verdict {
        Verdict::Feasible => {
            let Some(coef) = &cert.witness else {
                return false;
            };
            if coef.len() != generators.len() || coef.iter().any(Signed::is_negative) {
                return false;
            }
            (0..dim).all(|k| {
                let s = coef
                    .iter()
                    .zip(generators)
                    .fold(BigRational::zero(), |acc, (c, g)| {
                        acc + c * BigRational::from_integer(g[k].clone())
                    });
                s == target[k]
            })
        }
        Verdict::Infeasible => {
            let Some(lambda) = &cert.separator else {
                return false;
            };
            if lambda.len() != dim {
                return false;
            }
            let gens_ok = generators.iter().all(|g| {
                let g: Vec<BigRational> =
                    g.iter().map(|x| BigRational::from_integer(x.clone())).collect();
                !rat_dot(lambda, &g).is_negative()
            });
            gens_ok && rat_dot(lambda, target).is_negative()
        }
    }
}
