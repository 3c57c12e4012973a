use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::GitError;
use crate::lattice::matrix::to_big;
use crate::lattice::IntMatrix;

/// A character of `G = (k^*)^r × Π ℤ/k_j`: a free part in ℤ^r and a torsion
/// part with one residue per finite factor. Written additively.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl Character {
    pub fn free(free: Vec<i64>) -> Self {
        Character {
            free,
            torsion: Vec::new(),
        }
    }

    pub fn zero(rank: usize, torsion_len: usize) -> Self {
        Character {
            free: vec![0; rank],
            torsion: vec![0; torsion_len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|&x| x == 0)
    }

    /// `self + k * other`, with torsion reduced into `[0, order)`.
    pub fn add_scaled(&self, other: &Character, k: i64, orders: &[i64]) -> Character {
        Character {
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + k * b).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .zip(orders)
                .map(|((a, b), n)| (a + k * b).rem_euclid(*n))
                .collect(),
        }
    }

    pub fn free_big(&self) -> Vec<BigInt> {
        to_big(&self.free)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        write!(f, "({})", free.join(","))?;
        if !self.torsion.is_empty() {
            let t: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", t.join(","))?;
        }
        Ok(())
    }
}

/// The group `G` together with the weights `β_1..β_d` of the representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightConfig {
    free_rank: usize,
    torsion_orders: Vec<i64>,
    weights: Vec<Character>,
}

impl WeightConfig {
    pub fn new(
        free_rank: usize,
        torsion_orders: Vec<i64>,
        weights: Vec<Character>,
    ) -> Result<Self, GitError> {
        if let Some(&k) = torsion_orders.iter().find(|&&k| k < 2) {
            return Err(GitError::InvalidTorsionOrder(k));
        }
        let mut reduced = Vec::with_capacity(weights.len());
        for w in weights {
            reduced.push(Self::reduce_character(free_rank, &torsion_orders, w)?);
        }
        Ok(WeightConfig {
            free_rank,
            torsion_orders,
            weights: reduced,
        })
    }

    /// A torus representation (no finite factors).
    pub fn torus(free_rank: usize, weights: &[Vec<i64>]) -> Result<Self, GitError> {
        Self::new(
            free_rank,
            Vec::new(),
            weights.iter().cloned().map(Character::free).collect(),
        )
    }

    fn reduce_character(
        free_rank: usize,
        orders: &[i64],
        c: Character,
    ) -> Result<Character, GitError> {
        if c.free.len() != free_rank {
            return Err(GitError::CharacterShape {
                expected: free_rank,
                found: c.free.len(),
                part: "free",
            });
        }
        if c.torsion.len() != orders.len() {
            return Err(GitError::CharacterShape {
                expected: orders.len(),
                found: c.torsion.len(),
                part: "torsion",
            });
        }
        Ok(Character {
            torsion: c
                .torsion
                .iter()
                .zip(orders)
                .map(|(t, k)| t.rem_euclid(*k))
                .collect(),
            free: c.free,
        })
    }

    /// Validates a character against this group and reduces its torsion part.
    pub fn character(&self, c: Character) -> Result<Character, GitError> {
        Self::reduce_character(self.free_rank, &self.torsion_orders, c)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[i64] {
        &self.torsion_orders
    }

    pub fn weights(&self) -> &[Character] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn zero_character(&self) -> Character {
        Character::zero(self.free_rank, self.torsion_orders.len())
    }

    pub fn free_part(&self, i: usize) -> Vec<BigInt> {
        self.weights[i].free_big()
    }

    pub fn free_parts(&self, indices: &[usize]) -> Vec<Vec<BigInt>> {
        indices.iter().map(|&i| self.free_part(i)).collect()
    }

    /// The `r × d` matrix whose columns are the free parts of the weights.
    pub fn free_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<i64>> = self.weights.iter().map(|w| w.free.clone()).collect();
        IntMatrix::from_columns(self.free_rank, &cols).expect("weights validated")
    }

    /// `⟨λ, β_i⟩` for a one-parameter subgroup `λ ∈ ℤ^r`.
    pub fn pairing(&self, lambda: &[i64], i: usize) -> i64 {
        lambda.iter().zip(&self.weights[i].free).map(|(a, b)| a * b).sum()
    }

    /// `Σ_{i ∈ indices} β_i`.
    pub fn sum_of(&self, indices: impl IntoIterator<Item = usize>) -> Character {
        indices.into_iter().fold(self.zero_character(), |acc, i| {
            acc.add_scaled(&self.weights[i], 1, &self.torsion_orders)
        })
    }

    /// Weight of an exponent vector: `Σ m_i β_i`.
    pub fn weight_of(&self, exponents: &[u32]) -> Character {
        exponents
            .iter()
            .enumerate()
            .fold(self.zero_character(), |acc, (i, &m)| {
                acc.add_scaled(&self.weights[i], i64::from(m), &self.torsion_orders)
            })
    }
}

/// A set of coordinates `T ⊆ {0..d}`, standing for the stratum of points
/// whose nonzero coordinates are exactly `T`. Indices are zero-based and kept
/// sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        SupportSet(indices)
    }

    /// Builds a support from the 1-based coordinate labels `x_1..x_d`.
    pub fn from_one_based(labels: &[usize]) -> Self {
        Self::new(labels.iter().map(|&i| i - 1).collect())
    }

    pub fn full(d: usize) -> Self {
        SupportSet((0..d).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn complement(&self, d: usize) -> SupportSet {
        SupportSet((0..d).filter(|&i| !self.contains(i)).collect())
    }

    pub(crate) fn check(&self, d: usize) -> Result<(), GitError> {
        match self.0.last() {
            Some(&i) if i >= d => Err(GitError::IndexOutOfRange { index: i, len: d }),
            _ => Ok(()),
        }
    }
}

impl Serialize for SupportSet {
    /// Serialized as 1-based coordinate labels.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}
