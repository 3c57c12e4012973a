use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::koszul::{check_lambda, exactness_eligible, koszul_characters_with, KoszulConvention};
use super::DerivedError;
use crate::git::{Character, WeightConfig};
use crate::lattice::{lattice_kernel, IntMatrix};

/// Closed box `lo <= x <= hi` in the free part of `X(G)`; every torsion
/// residue is included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn cube(rank: usize, radius: i64) -> Self {
        Window {
            lo: vec![-radius; rank],
            hi: vec![radius; rank],
        }
    }

    pub fn contains(&self, c: &Character) -> bool {
        c.free.len() == self.lo.len()
            && c.free.iter().zip(&self.lo).zip(&self.hi).all(|((x, lo), hi)| lo <= x && x <= hi)
    }

    /// All characters in the box, graded by `Σ |x_i|`, then lexicographic.
    pub fn characters(&self, orders: &[i64]) -> Vec<Character> {
        let free = self.lo.iter().zip(&self.hi).map(|(&a, &b)| a..=b).multi_cartesian_product();
        let torsion: Vec<Vec<i64>> = orders.iter().map(|&n| 0..n).multi_cartesian_product().collect();
        let torsion = if orders.is_empty() { vec![Vec::new()] } else { torsion };
        let free: Vec<Vec<i64>> = if self.lo.is_empty() { vec![Vec::new()] } else { free.collect() };
        let mut out: Vec<Character> = free
            .into_iter()
            .cartesian_product(torsion)
            .map(|(free, torsion)| Character { free, torsion })
            .collect();
        out.sort_by_key(|c| (c.free.iter().map(|x| x.abs()).sum::<i64>(), c.clone()));
        out
    }

    fn validate(&self, rank: usize) -> Result<(), DerivedError> {
        if self.lo.len() != rank || self.hi.len() != rank {
            return Err(DerivedError::WindowShape {
                expected: rank,
                found: self.lo.len().max(self.hi.len()),
            });
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| a > b) {
            return Err(DerivedError::EmptyWindow);
        }
        Ok(())
    }
}

/// Which of the two complexes containing `ν` as an end term justified it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexEnd {
    /// `ν` is the degree-0 term of `C_{λ,ν}`.
    Start,
    /// `ν` is the top-degree term of `C_{λ, ν − Σ_{i∈B_λ} β_i}`.
    Finish,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationStep {
    pub added: Character,
    pub lambda: Vec<i64>,
    pub end: ComplexEnd,
    pub pass: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationState {
    pub known: BTreeSet<Character>,
    pub window: Window,
    pub convention: KoszulConvention,
    pub pool: Vec<Vec<i64>>,
    pub log: Vec<SaturationStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationOptions {
    pub convention: KoszulConvention,
    /// Pool of one-parameter subgroups; `None` uses [`default_lambda_pool`].
    pub pool: Option<Vec<Vec<i64>>>,
    /// Scan order of the window; `None` uses the graded order.
    pub scan_order: Option<Vec<Character>>,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        SaturationOptions {
            convention: KoszulConvention::Add,
            pool: None,
            scan_order: None,
        }
    }
}

/// Primitive normals of all rank `r − 1` sets of weights, both signs, with
/// `⟨λ, χ⟩ < 0`, sorted.
pub fn default_lambda_pool(w: &WeightConfig, chi: &Character) -> Result<Vec<Vec<i64>>, DerivedError> {
    let r = w.free_rank();
    let chi = w.character(chi.clone())?;
    if r == 0 {
        return Ok(Vec::new());
    }
    let mut pool = BTreeSet::new();
    for s in (0..w.len()).combinations(r - 1) {
        let rows: Vec<Vec<i64>> = s.iter().map(|&i| w.weights()[i].free.clone()).collect();
        let m = IntMatrix::from_rows(r, &rows)?;
        let ker = lattice_kernel(&m);
        if ker.len() != 1 {
            continue;
        }
        let v: Vec<i64> = ker[0]
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| DerivedError::Overflow))
            .collect::<Result<_, _>>()?;
        for sign in [1, -1] {
            let l: Vec<i64> = v.iter().map(|x| sign * x).collect();
            if exactness_eligible(w, &l, &chi)? {
                pool.insert(l);
            }
        }
    }
    Ok(pool.into_iter().collect())
}

/// The first `(λ, end)` whose complex has every term except `ν` in `known`.
fn justify(
    w: &WeightConfig,
    nu: &Character,
    pool: &[Vec<i64>],
    convention: KoszulConvention,
    known: &BTreeSet<Character>,
) -> Result<Option<(Vec<i64>, ComplexEnd)>, DerivedError> {
    for lambda in pool {
        let start = koszul_characters_with(w, lambda, nu, convention)?;
        if start.characters_outside(0).all(|c| known.contains(c)) {
            return Ok(Some((lambda.clone(), ComplexEnd::Start)));
        }
        let top = start.positive.len();
        let base = nu.add_scaled(&w.sum_of(start.positive.indices().iter().copied()), -1, w.torsion_orders());
        let finish = koszul_characters_with(w, lambda, &base, convention)?;
        if finish.far_end() == nu && finish.characters_outside(top).all(|c| known.contains(c)) {
            return Ok(Some((lambda.clone(), ComplexEnd::Finish)));
        }
    }
    Ok(None)
}

fn prepare(
    w: &WeightConfig,
    chi: &Character,
    seed: &[Character],
    window: &Window,
    pool: Option<&[Vec<i64>]>,
) -> Result<(BTreeSet<Character>, Vec<Vec<i64>>), DerivedError> {
    window.validate(w.free_rank())?;
    let chi = w.character(chi.clone())?;
    let mut known = BTreeSet::new();
    for c in seed {
        let c = w.character(c.clone())?;
        if !window.contains(&c) {
            return Err(DerivedError::SeedOutsideWindow(c));
        }
        known.insert(c);
    }
    let pool = match pool {
        None => default_lambda_pool(w, &chi)?,
        Some(p) => {
            let mut p: Vec<Vec<i64>> = p.to_vec();
            for l in &p {
                if !exactness_eligible(w, l, &chi)? {
                    return Err(DerivedError::Ineligible(l.clone()));
                }
            }
            p.sort();
            p.dedup();
            p
        }
    };
    Ok((known, pool))
}

/// Closes `seed` inside `window` under the Koszul enlargement rule with the
/// default options.
pub fn saturate_generators(
    w: &WeightConfig,
    chi: &Character,
    seed: &[Character],
    window: &Window,
) -> Result<SaturationState, DerivedError> {
    saturate_generators_with(w, chi, seed, window, &SaturationOptions::default())
}

pub fn saturate_generators_with(
    w: &WeightConfig,
    chi: &Character,
    seed: &[Character],
    window: &Window,
    options: &SaturationOptions,
) -> Result<SaturationState, DerivedError> {
    let (mut known, pool) = prepare(w, chi, seed, window, options.pool.as_deref())?;
    let scan = match &options.scan_order {
        None => window.characters(w.torsion_orders()),
        Some(order) => {
            let mut a: Vec<Character> = order.clone();
            let mut b = window.characters(w.torsion_orders());
            a.sort();
            b.sort();
            if a != b {
                return Err(DerivedError::ScanOrder);
            }
            order.clone()
        }
    };
    let mut log = Vec::new();
    let mut pass = 0;
    loop {
        pass += 1;
        let mut changed = false;
        for nu in &scan {
            if known.contains(nu) {
                continue;
            }
            if let Some((lambda, end)) = justify(w, nu, &pool, options.convention, &known)? {
                known.insert(nu.clone());
                log.push(SaturationStep {
                    added: nu.clone(),
                    lambda,
                    end,
                    pass,
                });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(SaturationState {
        known,
        window: window.clone(),
        convention: options.convention,
        pool,
        log,
    })
}

/// Replays `state.log` from `seed`, rechecking every step against the set
/// known before it, and compares the result with `state.known`.
pub fn replay_saturation(
    w: &WeightConfig,
    seed: &[Character],
    state: &SaturationState,
) -> Result<bool, DerivedError> {
    let mut known: BTreeSet<Character> =
        seed.iter().map(|c| w.character(c.clone())).collect::<Result<_, _>>()?;
    for step in &state.log {
        check_lambda(w, &step.lambda)?;
        if known.contains(&step.added) || !state.window.contains(&step.added) {
            return Ok(false);
        }
        let pool = [step.lambda.clone()];
        let ok = match justify(w, &step.added, &pool, state.convention, &known)? {
            Some((_, ComplexEnd::Start)) => true,
            Some((_, ComplexEnd::Finish)) => step.end == ComplexEnd::Finish,
            None => false,
        };
        if !ok {
            return Ok(false);
        }
        known.insert(step.added.clone());
    }
    Ok(known == state.known)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example() -> WeightConfig {
        WeightConfig::torus(
            2,
            &[vec![3, 0], vec![1, 1], vec![0, 3], vec![-1, 0], vec![-3, -3], vec![0, -1]],
        )
        .unwrap()
    }

    fn pts(v: &[(i64, i64)]) -> Vec<Character> {
        v.iter().map(|&(a, b)| Character::free(vec![a, b])).collect()
    }

    fn seed() -> Vec<Character> {
        pts(&[
            (0, 0), (1, 0), (-1, 0), (-2, 0), (0, -1), (-1, -1), (-2, -1),
            (1, 1), (0, 1), (-1, 1), (1, 2), (0, 2), (2, 1),
        ])
    }

    fn chi() -> Character {
        Character::free(vec![1, -2])
    }

    #[test]
    fn default_pool() {
        let pool = default_lambda_pool(&example(), &chi()).unwrap();
        assert_eq!(pool, vec![vec![-1, 0], vec![-1, 1], vec![0, 1]]);
    }

    #[test]
    fn empty_seed_stays_empty() {
        let s = saturate_generators(&example(), &chi(), &[], &Window::cube(2, 4)).unwrap();
        assert!(s.known.is_empty() && s.log.is_empty());
    }

    #[test]
    fn example_closure_covers_window() {
        let w = example();
        let window = Window::cube(2, 4);
        let s = saturate_generators(&w, &chi(), &seed(), &window).unwrap();
        assert_eq!(s.known.len(), 81);
        assert!(replay_saturation(&w, &seed(), &s).unwrap());
        let again: Vec<Character> = s.known.iter().cloned().collect();
        let t = saturate_generators(&w, &chi(), &again, &window).unwrap();
        assert!(t.log.is_empty());
    }

    #[test]
    fn subtract_convention_is_stuck() {
        let opts = SaturationOptions {
            convention: KoszulConvention::Subtract,
            ..Default::default()
        };
        let s = saturate_generators_with(&example(), &chi(), &seed(), &Window::cube(2, 4), &opts).unwrap();
        assert!(!s.known.contains(&Character::free(vec![3, 3])));
        assert!(!s.known.contains(&Character::free(vec![-3, -3])));
    }

    #[test]
    fn refusals() {
        let w = example();
        let far = pts(&[(5, 0)]);
        assert!(matches!(
            saturate_generators(&w, &chi(), &far, &Window::cube(2, 4)),
            Err(DerivedError::SeedOutsideWindow(_))
        ));
        let opts = SaturationOptions {
            pool: Some(vec![vec![0, -1]]),
            ..Default::default()
        };
        assert_eq!(
            saturate_generators_with(&w, &chi(), &seed(), &Window::cube(2, 4), &opts),
            Err(DerivedError::Ineligible(vec![0, -1]))
        );
    }

    #[test]
    fn tampered_log_fails_replay() {
        let w = example();
        let mut s = saturate_generators(&w, &chi(), &seed(), &Window::cube(2, 4)).unwrap();
        let last = s.log.len() - 1;
        s.log.swap(0, last);
        assert!(!replay_saturation(&w, &seed(), &s).unwrap());
    }

    fn random_seed(bits: u128, window: &Window) -> Vec<Character> {
        window
            .characters(&[])
            .into_iter()
            .enumerate()
            .filter(|(k, _)| bits >> (k % 128) & 1 == 1 && k % 3 == 0)
            .map(|(_, c)| c)
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn closure_is_monotone_idempotent_and_order_free(a in any::<u128>(), b in any::<u128>(), shuffle in any::<u64>()) {
            let w = example();
            let window = Window::cube(2, 3);
            let s1 = random_seed(a, &window);
            let mut s2 = s1.clone();
            s2.extend(random_seed(b, &window));
            let c1 = saturate_generators(&w, &chi(), &s1, &window).unwrap();
            let c2 = saturate_generators(&w, &chi(), &s2, &window).unwrap();
            prop_assert!(c1.known.is_subset(&c2.known));
            let fixed: Vec<Character> = c1.known.iter().cloned().collect();
            prop_assert_eq!(&saturate_generators(&w, &chi(), &fixed, &window).unwrap().known, &c1.known);
            let mut order = window.characters(&[]);
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
            let opts = SaturationOptions { scan_order: Some(order), ..Default::default() };
            prop_assert_eq!(&saturate_generators_with(&w, &chi(), &s1, &window, &opts).unwrap().known, &c1.known);
            prop_assert!(replay_saturation(&w, &s1, &c1).unwrap());
        }
    }
}
