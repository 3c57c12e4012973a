use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{check_enumerable, Character, GitError, SupportSet, WeightConfig};
use crate::lattice::matrix::{rational_rank, to_rational};
use crate::lattice::{
    cone_contains, feasibility, integral_witness, Constraint, FeasibilityCertificate, Relation,
};

/// Primitive `λ ≠ 0` with `⟨λ, β_i⟩ > 0` for every `i ∈ T`, if one exists.
pub fn unstable_witness(
    w: &WeightConfig,
    t: &SupportSet,
) -> Result<Option<Vec<BigInt>>, GitError> {
    t.check(w.len())?;
    let r = w.free_rank();
    if r == 0 {
        return Ok(None);
    }
    if t.is_empty() {
        let mut e = vec![BigInt::from(0); r];
        e[0] = BigInt::from(1);
        return Ok(Some(e));
    }
    let cs: Vec<Constraint> = t
        .indices()
        .iter()
        .map(|&i| Constraint::from_ints(&w.free_part(i), Relation::Greater))
        .collect();
    let cert = feasibility(r, &cs)?;
    Ok(cert
        .witness
        .filter(|_| cert.verdict == crate::lattice::Verdict::Feasible)
        .map(|x| integral_witness(&x)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnstableDimension {
    pub dim: usize,
    #[serde(serialize_with = "crate::io::ser::opt_big_vec")]
    pub lambda: Option<Vec<BigInt>>,
    pub support: Option<SupportSet>,
}

impl UnstableDimension {
    /// Re-checks the witness by substitution.
    pub fn verify(&self, w: &WeightConfig) -> bool {
        match (&self.lambda, &self.support) {
            (None, None) => self.dim == 0,
            (Some(l), Some(t)) => {
                t.len() == self.dim
                    && t.check(w.len()).is_ok()
                    && l.iter().any(|x| *x != BigInt::from(0))
                    && t.indices().iter().all(|&i| {
                        let p: BigInt = l.iter().zip(&w.weights()[i].free).map(|(a, b)| a * b).sum();
                        p > BigInt::from(0)
                    })
            }
            _ => false,
        }
    }
}

/// Largest support on which some one-parameter subgroup is strictly
/// positive. Ties go to the lexicographically smallest support.
pub fn unstable_dimension(w: &WeightConfig) -> Result<UnstableDimension, GitError> {
    check_enumerable(w)?;
    let mut best: Option<(Vec<usize>, Vec<BigInt>)> = None;
    let mut cur = Vec::new();
    search_unstable(w, 0, &mut cur, &mut |t, lambda| {
        if !t.is_empty() && best.as_ref().is_none_or(|(b, _)| t.len() > b.len()) {
            best = Some((t.to_vec(), lambda.to_vec()));
        }
        Ok(best.as_ref().map_or(0, |(b, _)| b.len()))
    })?;
    Ok(match best {
        Some((t, lambda)) => UnstableDimension {
            dim: t.len(),
            lambda: Some(lambda),
            support: Some(SupportSet::new(t)),
        },
        None => UnstableDimension {
            dim: 0,
            lambda: None,
            support: None,
        },
    })
}

type Visit<'a> = dyn FnMut(&[usize], &[BigInt]) -> Result<usize, GitError> + 'a;

/// Include-first depth-first walk over the down-closed family of unstable
/// supports, visiting them in lexicographic order. `visit` receives each
/// support with its witness and returns the current best size, which prunes
/// branches that cannot beat it.
fn search_unstable(
    w: &WeightConfig,
    next: usize,
    cur: &mut Vec<usize>,
    visit: &mut Visit<'_>,
) -> Result<(), GitError> {
    let Some(lambda) = unstable_witness(w, &SupportSet::new(cur.clone()))? else {
        return Ok(());
    };
    let best = visit(cur, &lambda)?;
    walk(w, next, cur, best, visit)?;
    Ok(())
}

fn walk(
    w: &WeightConfig,
    next: usize,
    cur: &mut Vec<usize>,
    mut best: usize,
    visit: &mut Visit<'_>,
) -> Result<usize, GitError> {
    for i in next..w.len() {
        if cur.len() + (w.len() - i) <= best {
            break;
        }
        cur.push(i);
        if let Some(lambda) = unstable_witness(w, &SupportSet::new(cur.clone()))? {
            best = visit(cur, &lambda)?;
            best = walk(w, i + 1, cur, best, visit)?;
        }
        cur.pop();
    }
    Ok(best)
}

/// `−χ ∈ cone(β_i : i ∈ T)`, with the cone certificate.
pub fn is_support_semistable(
    w: &WeightConfig,
    t: &SupportSet,
    chi: &Character,
) -> Result<FeasibilityCertificate, GitError> {
    t.check(w.len())?;
    let chi = w.character(chi.clone())?;
    let target: Vec<BigRational> = to_rational(&chi.free_big()).into_iter().map(|x| -x).collect();
    Ok(cone_contains(&w.free_parts(t.indices()), &target)?)
}

/// A rank-deficient flat whose cone contains `−χ`, if any.
pub fn chi_degeneracy(w: &WeightConfig, chi: &Character) -> Result<Option<SupportSet>, GitError> {
    check_enumerable(w)?;
    let chi = w.character(chi.clone())?;
    let r = w.free_rank();
    let target: Vec<BigRational> = to_rational(&chi.free_big()).into_iter().map(|x| -x).collect();
    let vecs: Vec<Vec<BigRational>> = (0..w.len()).map(|i| to_rational(&w.free_part(i))).collect();
    let rank_of = |s: &[usize]| -> usize {
        rational_rank(&s.iter().map(|&i| vecs[i].clone()).collect::<Vec<_>>())
    };
    let closure = |s: &[usize]| -> (Vec<usize>, usize) {
        let k = rank_of(s);
        let mut out: Vec<usize> = (0..w.len())
            .filter(|&i| {
                let mut t = s.to_vec();
                t.push(i);
                rank_of(&t) == k
            })
            .collect();
        out.sort_unstable();
        (out, k)
    };

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut frontier: BTreeSet<Vec<usize>> = BTreeSet::new();
    let (f0, k0) = closure(&[]);
    if k0 < r {
        frontier.insert(f0);
    }
    while let Some(flat) = frontier.pop_first() {
        if !seen.insert(flat.clone()) {
            continue;
        }
        if cone_contains(&w.free_parts(&flat), &target)?.is_feasible() {
            return Ok(Some(SupportSet::new(flat)));
        }
        for i in 0..w.len() {
            if flat.contains(&i) {
                continue;
            }
            let mut s = flat.clone();
            s.push(i);
            let (g, k) = closure(&s);
            if k < r && !seen.contains(&g) {
                frontier.insert(g);
            }
        }
    }
    Ok(None)
}

/// Every semistable support spans the full rank, so semistable points have
/// finite stabilizers.
pub fn is_chi_generic(w: &WeightConfig, chi: &Character) -> Result<bool, GitError> {
    Ok(chi_degeneracy(w, chi)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberBound {
    /// `max |T| − r` over unstable semistable supports, `−r` if there are none.
    pub bound: i64,
    pub support: Option<SupportSet>,
    #[serde(serialize_with = "crate::io::ser::opt_big_vec")]
    pub lambda: Option<Vec<BigInt>>,
}

pub fn fiber_dimension_bound(w: &WeightConfig, chi: &Character) -> Result<FiberBound, GitError> {
    check_enumerable(w)?;
    let chi = w.character(chi.clone())?;
    let r = w.free_rank() as i64;
    let mut best: Option<(Vec<usize>, Vec<BigInt>)> = None;
    let mut cur = Vec::new();
    search_unstable(w, 0, &mut cur, &mut |t, lambda| {
        let better = best.as_ref().is_none_or(|(b, _)| t.len() > b.len());
        if better && is_support_semistable(w, &SupportSet::new(t.to_vec()), &chi)?.is_feasible() {
            best = Some((t.to_vec(), lambda.to_vec()));
        }
        Ok(best.as_ref().map_or(0, |(b, _)| b.len()))
    })?;
    Ok(match best {
        Some((t, lambda)) => FiberBound {
            bound: t.len() as i64 - r,
            support: Some(SupportSet::new(t)),
            lambda: Some(lambda),
        },
        None => FiberBound {
            bound: -r,
            support: None,
            lambda: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::to_big;

    fn example() -> WeightConfig {
        WeightConfig::torus(
            2,
            &[vec![3, 0], vec![1, 1], vec![0, 3], vec![-1, 0], vec![-3, -3], vec![0, -1]],
        )
        .unwrap()
    }

    fn conifold() -> WeightConfig {
        WeightConfig::torus(1, &[vec![1], vec![1], vec![-1], vec![-1]]).unwrap()
    }

    fn chi(v: &[i64]) -> Character {
        Character::free(v.to_vec())
    }

    fn t(labels: &[usize]) -> SupportSet {
        SupportSet::from_one_based(labels)
    }

    /// All `2^d` supports, each decided independently.
    fn brute_unstable(w: &WeightConfig) -> usize {
        (1u32..1 << w.len())
            .filter(|mask| {
                let s = SupportSet::new((0..w.len()).filter(|i| mask >> i & 1 == 1).collect());
                unstable_witness(w, &s).unwrap().is_some()
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn brute_fiber(w: &WeightConfig, c: &Character) -> i64 {
        let r = w.free_rank() as i64;
        (0u32..1 << w.len())
            .filter(|mask| {
                let s = SupportSet::new((0..w.len()).filter(|i| mask >> i & 1 == 1).collect());
                unstable_witness(w, &s).unwrap().is_some()
                    && is_support_semistable(w, &s, c).unwrap().is_feasible()
            })
            .map(|m| m.count_ones() as i64 - r)
            .max()
            .unwrap_or(-r)
    }

    #[test]
    fn example_unstable_dimension() {
        let u = unstable_dimension(&example()).unwrap();
        assert_eq!(u.dim, 3);
        assert_eq!(u.support, Some(t(&[1, 2, 3])));
        assert_eq!(u.lambda, Some(to_big(&[1, 1])));
        assert!(u.verify(&example()));
        assert_eq!(brute_unstable(&example()), 3);
    }

    #[test]
    fn conifold_unstable_dimension() {
        let u = unstable_dimension(&conifold()).unwrap();
        assert_eq!(u.dim, 2);
        assert_eq!(u.support, Some(t(&[1, 2])));
        assert_eq!(u.lambda, Some(to_big(&[1])));
    }

    #[test]
    fn empty_weights() {
        let w = WeightConfig::torus(1, &[]).unwrap();
        let u = unstable_dimension(&w).unwrap();
        assert_eq!((u.dim, u.lambda, u.support), (0, None, None));
        assert_eq!(fiber_dimension_bound(&w, &chi(&[1])).unwrap().bound, -1);
    }

    #[test]
    fn example_semistability() {
        let w = example();
        let c = chi(&[1, -2]);
        assert!(!is_support_semistable(&w, &t(&[1, 5, 6]), &c).unwrap().is_feasible());
        assert!(!is_support_semistable(&w, &t(&[1, 2, 3, 6]), &c).unwrap().is_feasible());
        assert!(is_support_semistable(&w, &t(&[1, 2, 3, 4, 5, 6]), &c).unwrap().is_feasible());
        assert!(is_support_semistable(&w, &t(&[2, 3, 4]), &c).unwrap().is_feasible());
    }

    #[test]
    fn chi_genericity() {
        assert!(is_chi_generic(&example(), &chi(&[1, -2])).unwrap());
        assert_eq!(
            chi_degeneracy(&example(), &chi(&[3, 0])).unwrap(),
            Some(t(&[1, 4]))
        );
        assert!(is_chi_generic(&conifold(), &chi(&[1])).unwrap());
        assert!(!is_chi_generic(&conifold(), &chi(&[0])).unwrap());
    }

    #[test]
    fn fiber_bounds() {
        let f = fiber_dimension_bound(&example(), &chi(&[1, -2])).unwrap();
        assert_eq!(f.bound, 1);
        assert_eq!(f.bound, brute_fiber(&example(), &chi(&[1, -2])));
        let s = f.support.unwrap();
        assert_eq!(s.len(), 3);
        assert!(is_support_semistable(&example(), &s, &chi(&[1, -2])).unwrap().is_feasible());
        assert!(unstable_witness(&example(), &t(&[2, 3, 4])).unwrap().is_some());

        let f = fiber_dimension_bound(&conifold(), &chi(&[1])).unwrap();
        assert_eq!(f.bound, 1);
        assert_eq!(f.support, Some(t(&[3, 4])));
    }

    #[test]
    fn too_many_weights_refused() {
        let w = WeightConfig::torus(1, &vec![vec![1]; 25]).unwrap();
        assert!(matches!(
            unstable_dimension(&w),
            Err(GitError::TooManyWeights { found: 25, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn config() -> impl Strategy<Value = WeightConfig> {
            (1usize..3, 0usize..7).prop_flat_map(|(r, d)| {
                proptest::collection::vec(proptest::collection::vec(-3i64..4, r), d)
                    .prop_map(move |ws| WeightConfig::torus(r, &ws).unwrap())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn matches_brute_force(w in config()) {
                let u = unstable_dimension(&w).unwrap();
                prop_assert_eq!(u.dim, brute_unstable(&w));
                prop_assert!(u.verify(&w));
            }

            #[test]
            fn semistability_monotone_and_scale_invariant(
                w in config(), c in proptest::collection::vec(-3i64..4, 2), mask in 0u32..128, extra in 0u32..128, k in 1i64..5,
            ) {
                let r = w.free_rank();
                let c = chi(&c[..r]);
                let d = w.len();
                let small = SupportSet::new((0..d).filter(|i| mask >> i & 1 == 1).collect());
                let big = SupportSet::new((0..d).filter(|i| (mask | extra) >> i & 1 == 1).collect());
                let s = is_support_semistable(&w, &small, &c).unwrap().is_feasible();
                if s {
                    prop_assert!(is_support_semistable(&w, &big, &c).unwrap().is_feasible());
                }
                let kc = chi(&c.free.iter().map(|x| k * x).collect::<Vec<_>>());
                prop_assert_eq!(is_support_semistable(&w, &small, &kc).unwrap().is_feasible(), s);
            }

            #[test]
            fn fiber_bound_below_unstable_dimension(w in config(), c in proptest::collection::vec(-3i64..4, 2)) {
                let c = chi(&c[..w.free_rank()]);
                let f = fiber_dimension_bound(&w, &c).unwrap();
                prop_assert_eq!(f.bound, brute_fiber(&w, &c));
                let u = unstable_dimension(&w).unwrap();
                prop_assert!(f.bound <= u.dim as i64 - w.free_rank() as i64);
            }
        }
    }
}
