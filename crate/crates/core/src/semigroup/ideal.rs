use serde::Serialize;

use super::SemigroupError;
use crate::git::{is_support_semistable, Character, SupportSet, WeightConfig};
use crate::lattice::FeasibilityCertificate;

/// Minimal primes of a squarefree monomial ideal in `x_1..x_d`, each given
/// by its set of vanishing coordinates (the minimal vertex covers of the
/// generator supports).
pub fn monomial_ideal_components(
    d: usize,
    generators: &[Vec<u32>],
) -> Result<Vec<SupportSet>, SemigroupError> {
    let mut supports = Vec::with_capacity(generators.len());
    for (k, g) in generators.iter().enumerate() {
        if g.len() != d {
            return Err(SemigroupError::Shape(format!(
                "generator {} has {} exponents, expected {d}",
                k + 1,
                g.len()
            )));
        }
        if g.iter().any(|&e| e > 1) {
            return Err(SemigroupError::NotSquarefree(k + 1));
        }
        supports.push(SupportSet::new(
            g.iter().enumerate().filter(|(_, &e)| e == 1).map(|(i, _)| i).collect(),
        ));
    }
    let mut covers: Vec<SupportSet> = vec![SupportSet::default()];
    for s in &supports {
        let mut next: Vec<SupportSet> = Vec::new();
        for c in &covers {
            if s.indices().iter().any(|&i| c.contains(i)) {
                next.push(c.clone());
            } else {
                for &i in s.indices() {
                    let mut v = c.indices().to_vec();
                    v.push(i);
                    next.push(SupportSet::new(v));
                }
            }
        }
        next.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        next.dedup();
        let mut minimal: Vec<SupportSet> = Vec::new();
        for c in next {
            if !minimal.iter().any(|m| m.is_subset(&c)) {
                minimal.push(c);
            }
        }
        covers = minimal;
    }
    covers.sort();
    Ok(covers)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCheck {
    /// Coordinates vanishing on the component.
    pub vanishing: SupportSet,
    /// Nonzero coordinates at a generic point of the component.
    pub support: SupportSet,
    pub semistable: bool,
    pub certificate: FeasibilityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokernelReport {
    /// Every component misses the semistable locus.
    pub unstable: bool,
    pub components: Vec<ComponentCheck>,
}

/// Checks that the zero set of a squarefree monomial ideal lies outside
/// `X^{ss,χ}`: the generic support of each component must be unstable.
pub fn cokernel_unstable_check(
    w: &WeightConfig,
    chi: &Character,
    generators: &[Vec<u32>],
) -> Result<CokernelReport, SemigroupError> {
    let d = w.len();
    let mut components = Vec::new();
    for z in monomial_ideal_components(d, generators)? {
        let support = z.complement(d);
        let cert = is_support_semistable(w, &support, chi)?;
        components.push(ComponentCheck {
            vanishing: z,
            support,
            semistable: cert.is_feasible(),
            certificate: cert,
        });
    }
    Ok(CokernelReport {
        unstable: components.iter().all(|c| !c.semistable),
        components,
    })
}

/// Exponent vector of the squarefree monomial on 1-based labels.
pub fn squarefree_monomial(d: usize, labels: &[usize]) -> Vec<u32> {
    let mut m = vec![0; d];
    for &i in labels {
        m[i - 1] = 1;
    }
    m
}
