use std::collections::BTreeMap;

use serde::Serialize;

use super::DerivedError;
use crate::git::{check_enumerable, Character, SupportSet, WeightConfig};

/// Direction in which the Koszul terms move away from the base character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KoszulConvention {
    /// Terms `ν − Σ_{i∈I} β_i`.
    Subtract,
    /// Terms `ν + Σ_{i∈I} β_i`.
    Add,
}

impl KoszulConvention {
    pub fn sign(self) -> i64 {
        match self {
            KoszulConvention::Subtract => -1,
            KoszulConvention::Add => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulTerm {
    pub character: Character,
    /// Homological degree `|I|`.
    pub degree: usize,
    pub multiplicity: u64,
}

/// Characters of the Koszul complex on the coordinates where `λ` is
/// positive, twisted by `ν`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulCharacterComplex {
    pub lambda: Vec<i64>,
    pub nu: Character,
    /// `B_λ = {i : ⟨λ, β_i⟩ > 0}`.
    pub positive: SupportSet,
    pub convention: KoszulConvention,
    /// Sorted by degree, then character.
    pub terms: Vec<KoszulTerm>,
}

impl KoszulCharacterComplex {
    pub fn term_count(&self) -> u64 {
        self.terms.iter().map(|t| t.multiplicity).sum()
    }

    /// The term at `I = B_λ`.
    pub fn far_end(&self) -> &Character {
        &self.terms.last().expect("a complex has at least one term").character
    }

    /// Characters of all terms in degrees other than `skip`.
    pub fn characters_outside(&self, skip: usize) -> impl Iterator<Item = &Character> {
        self.terms.iter().filter(move |t| t.degree != skip).map(|t| &t.character)
    }
}

pub(crate) fn check_lambda(w: &WeightConfig, lambda: &[i64]) -> Result<(), DerivedError> {
    if lambda.len() != w.free_rank() {
        return Err(DerivedError::LambdaShape {
            expected: w.free_rank(),
            found: lambda.len(),
        });
    }
    if lambda.iter().all(|&x| x == 0) {
        return Err(DerivedError::ZeroLambda);
    }
    Ok(())
}

pub fn positive_set(w: &WeightConfig, lambda: &[i64]) -> SupportSet {
    SupportSet::new((0..w.len()).filter(|&i| w.pairing(lambda, i) > 0).collect())
}

/// `C_{λ,ν}` with terms `ν − Σ_{i∈I} β_i`.
pub fn koszul_characters(
    w: &WeightConfig,
    lambda: &[i64],
    nu: &Character,
) -> Result<KoszulCharacterComplex, DerivedError> {
    koszul_characters_with(w, lambda, nu, KoszulConvention::Subtract)
}

pub fn koszul_characters_with(
    w: &WeightConfig,
    lambda: &[i64],
    nu: &Character,
    convention: KoszulConvention,
) -> Result<KoszulCharacterComplex, DerivedError> {
    check_lambda(w, lambda)?;
    check_enumerable(w)?;
    let nu = w.character(nu.clone())?;
    let positive = positive_set(w, lambda);
    let b = positive.indices();
    let orders = w.torsion_orders();
    let sign = convention.sign();
    let mut counts: BTreeMap<(usize, Character), u64> = BTreeMap::new();
    for mask in 0u64..1 << b.len() {
        let mut c = nu.clone();
        for (k, &i) in b.iter().enumerate() {
            if mask >> k & 1 == 1 {
                c = c.add_scaled(&w.weights()[i], sign, orders);
            }
        }
        *counts.entry((mask.count_ones() as usize, c)).or_default() += 1;
    }
    let terms = counts
        .into_iter()
        .map(|((degree, character), multiplicity)| KoszulTerm {
            character,
            degree,
            multiplicity,
        })
        .collect();
    Ok(KoszulCharacterComplex {
        lambda: lambda.to_vec(),
        nu,
        positive,
        convention,
        terms,
    })
}

/// `⟨λ, χ⟩ < 0` on free parts.
pub fn exactness_eligible(
    w: &WeightConfig,
    lambda: &[i64],
    chi: &Character,
) -> Result<bool, DerivedError> {
    check_lambda(w, lambda)?;
    let chi = w.character(chi.clone())?;
    Ok(lambda.iter().zip(&chi.free).map(|(a, b)| a * b).sum::<i64>() < 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn example() -> WeightConfig {
        WeightConfig::torus(
            2,
            &[vec![3, 0], vec![1, 1], vec![0, 3], vec![-1, 0], vec![-3, -3], vec![0, -1]],
        )
        .unwrap()
    }

    fn chars(c: &KoszulCharacterComplex) -> Vec<Vec<i64>> {
        c.terms.iter().map(|t| t.character.free.clone()).collect()
    }

    #[test]
    fn upward_subgroup() {
        let nu = Character::free(vec![0, 0]);
        let c = koszul_characters(&example(), &[0, 1], &nu).unwrap();
        assert_eq!(c.positive.one_based(), vec![2, 3]);
        assert_eq!(chars(&c), vec![vec![0, 0], vec![-1, -1], vec![0, -3], vec![-1, -4]]);
        assert_eq!(c.terms.iter().map(|t| t.degree).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
        assert_eq!(c.far_end().free, vec![-1, -4]);
    }

    #[test]
    fn downward_subgroup() {
        let nu = Character::free(vec![2, 1]);
        let c = koszul_characters(&example(), &[0, -1], &nu).unwrap();
        assert_eq!(c.positive.one_based(), vec![5, 6]);
        assert_eq!(c.term_count(), 4);
        assert_eq!(chars(&c), vec![vec![2, 1], vec![2, 2], vec![5, 4], vec![5, 5]]);
    }

    #[test]
    fn add_convention_mirrors() {
        let nu = Character::free(vec![0, 0]);
        let c = koszul_characters_with(&example(), &[0, 1], &nu, KoszulConvention::Add).unwrap();
        assert_eq!(chars(&c), vec![vec![0, 0], vec![0, 3], vec![1, 1], vec![1, 4]]);
    }

    #[test]
    fn empty_positive_set() {
        let w = WeightConfig::torus(1, &[vec![-1], vec![-2]]).unwrap();
        let nu = Character::free(vec![5]);
        let c = koszul_characters(&w, &[1], &nu).unwrap();
        assert_eq!(c.terms.len(), 1);
        assert_eq!(c.terms[0].character, nu);
    }

    #[test]
    fn refusals() {
        let nu = Character::free(vec![0, 0]);
        assert_eq!(koszul_characters(&example(), &[0, 0], &nu), Err(DerivedError::ZeroLambda));
        assert!(matches!(
            koszul_characters(&example(), &[1], &nu),
            Err(DerivedError::LambdaShape { .. })
        ));
    }

    #[test]
    fn eligibility() {
        let w = example();
        let chi = Character::free(vec![1, -2]);
        assert!(exactness_eligible(&w, &[0, 1], &chi).unwrap());
        assert!(!exactness_eligible(&w, &[0, -1], &chi).unwrap());
        assert!(!exactness_eligible(&w, &[2, 1], &chi).unwrap());
    }

    #[test]
    fn multiplicities_collect_repeated_shifts() {
        let w = WeightConfig::torus(1, &[vec![1], vec![1], vec![1], vec![-1]]).unwrap();
        let c = koszul_characters(&w, &[1], &Character::free(vec![0])).unwrap();
        let m: Vec<(usize, u64)> = c.terms.iter().map(|t| (t.degree, t.multiplicity)).collect();
        assert_eq!(m, vec![(0, 1), (1, 3), (2, 3), (3, 1)]);
    }

    proptest! {
        #[test]
        fn terms_match_subsets(
            ws in proptest::collection::vec(proptest::collection::vec(-3i64..4, 2), 1..8),
            lambda in proptest::collection::vec(-2i64..3, 2),
            nu in proptest::collection::vec(-3i64..4, 2),
        ) {
            prop_assume!(lambda.iter().any(|&x| x != 0));
            let w = WeightConfig::torus(2, &ws).unwrap();
            let nu = Character::free(nu);
            let c = koszul_characters(&w, &lambda, &nu).unwrap();
            let b = c.positive.indices().to_vec();
            prop_assert_eq!(c.term_count(), 1u64 << b.len());
            for k in 0..=b.len() {
                let mut expected: Vec<Character> = b
                    .iter()
                    .combinations(k)
                    .map(|s| s.into_iter().fold(nu.clone(), |acc, &i| acc.add_scaled(&w.weights()[i], -1, &[])))
                    .collect();
                expected.sort();
                let mut got: Vec<Character> = c
                    .terms
                    .iter()
                    .filter(|t| t.degree == k)
                    .flat_map(|t| std::iter::repeat_n(t.character.clone(), t.multiplicity as usize))
                    .collect();
                got.sort();
                prop_assert_eq!(got, expected);
            }
        }
    }
}
