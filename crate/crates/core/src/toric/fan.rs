use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::ToricError;
use crate::git::{is_support_semistable, Character, SupportSet, WeightConfig, MAX_ENUMERATED_WEIGHTS};
use crate::lattice::matrix::{solve_in_row_span, to_big, to_rational};
use crate::lattice::{
    complete_to_unimodular, feasibility, hermite_basis, lattice_kernel, smith_normal_form,
    Constraint, IntMatrix, Relation,
};

/// A fan in `N = ℤ^n` together with a chosen lattice vector on each ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackyFan {
    lattice_rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<SupportSet>,
}

impl StackyFan {
    pub fn new(
        lattice_rank: usize,
        rays: Vec<Vec<i64>>,
        cones: Vec<SupportSet>,
    ) -> Result<Self, ToricError> {
        for v in &rays {
            if v.len() != lattice_rank {
                return Err(ToricError::RayShape {
                    expected: lattice_rank,
                    found: v.len(),
                });
            }
        }
        let l = rays.len();
        let mut used = vec![false; l];
        for c in &cones {
            if let Some(&i) = c.indices().iter().find(|&&i| i >= l) {
                return Err(ToricError::IndexOutOfRange { index: i, len: l });
            }
            if c.is_empty() || !is_pointed(lattice_rank, &rays, c.indices())? {
                return Err(ToricError::NotPointed(c.clone()));
            }
            for &i in c.indices() {
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(ToricError::UnusedRay(i + 1));
        }
        let mut cones = cones;
        cones.sort();
        cones.dedup();
        Ok(StackyFan {
            lattice_rank,
            rays,
            cones,
        })
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[SupportSet] {
        &self.cones
    }

    /// The `l × n` matrix with rows `v_i`.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.lattice_rank, &self.rays).expect("validated shape")
    }
}

/// Some `m` pairs strictly positively with every ray of the cone.
fn is_pointed(n: usize, rays: &[Vec<i64>], cone: &[usize]) -> Result<bool, ToricError> {
    let cs: Vec<Constraint> = cone
        .iter()
        .map(|&i| Constraint::from_ints(&to_big(&rays[i]), Relation::Greater))
        .collect();
    Ok(feasibility(n, &cs)?.is_feasible())
}

fn small(x: &BigInt) -> Result<i64, ToricError> {
    x.to_i64().ok_or(ToricError::Overflow)
}

/// The rays `v_i ∈ N = M^∨` dual to the coordinate functionals on the
/// lattice `M` of relations among the weights, with the single cone they
/// span. A unimodular configuration is written in a basis where every ray
/// has last coordinate 1.
pub fn weights_to_stacky_fan(w: &WeightConfig) -> Result<StackyFan, ToricError> {
    if !w.torsion_orders().is_empty() {
        return Err(ToricError::Torsion);
    }
    let r = w.free_rank();
    let b = w.free_matrix();
    let rank = b.rank();
    if rank != r {
        return Err(ToricError::NotSpanning { rank, expected: r });
    }
    let d = w.len();
    let n = d - r;
    let mut basis = lattice_kernel(&b);
    let ones = vec![BigInt::one(); d];
    let unimodular = w.sum_of(0..d).is_zero();
    if unimodular && n > 0 {
        let rb: Vec<Vec<BigRational>> = basis.iter().map(|v| to_rational(v)).collect();
        let c = solve_in_row_span(&rb, &to_rational(&ones)).expect("(1,..,1) is a relation");
        let c: Vec<BigInt> = c.iter().map(|x| x.to_integer()).collect();
        let p = complete_to_unimodular(&c)?;
        let moved = p.mul(&IntMatrix::from_rows(d, &basis)?)?;
        let mut rows = moved.to_rows();
        let last = rows.pop().expect("n > 0");
        debug_assert_eq!(last, ones);
        let mut head = if rows.is_empty() {
            Vec::new()
        } else {
            hermite_basis(d, &rows)
        };
        for row in &mut head {
            let m = row.iter().min().cloned().unwrap_or_default();
            for x in row.iter_mut() {
                *x -= &m;
            }
        }
        head.push(last);
        basis = head;
    }
    let rays: Vec<Vec<i64>> = (0..d)
        .map(|i| basis.iter().map(|m| small(&m[i])).collect())
        .collect::<Result<_, _>>()?;
    let cones = if d == 0 {
        Vec::new()
    } else {
        vec![SupportSet::full(d)]
    };
    StackyFan::new(n, rays, cones)
}

/// Fan of the GIT quotient at `χ`: the cones are spanned by the rays outside
/// the minimal `χ`-semistable supports.
pub fn chamber_fan(w: &WeightConfig, chi: &Character) -> Result<StackyFan, ToricError> {
    let base = weights_to_stacky_fan(w)?;
    let d = w.len();
    if d > MAX_ENUMERATED_WEIGHTS {
        return Err(ToricError::Git(crate::git::GitError::TooManyWeights {
            found: d,
            limit: MAX_ENUMERATED_WEIGHTS,
        }));
    }
    let mut minimal: Vec<SupportSet> = Vec::new();
    for k in 0..=d {
        for t in (0..d).combinations(k) {
            let t = SupportSet::new(t);
            if minimal.iter().any(|m| m.is_subset(&t)) {
                continue;
            }
            if is_support_semistable(w, &t, chi)?.is_feasible() {
                minimal.push(t);
            }
        }
    }
    if minimal.is_empty() {
        return Err(ToricError::EmptyChamber);
    }
    let cones = minimal.iter().map(|t| t.complement(d)).collect();
    StackyFan::new(base.lattice_rank, base.rays, cones)
}

/// Presents `ℤ^l / ρ(M)` with `ρ(m) = (⟨m, v_i⟩)_i` as `ℤ^r ⊕ torsion` and
/// returns the images of the unit vectors. The free part is in Hermite
/// normal form.
pub fn stacky_fan_to_weights(fan: &StackyFan) -> Result<WeightConfig, ToricError> {
    let n = fan.lattice_rank;
    let l = fan.rays.len();
    let rho = fan.ray_matrix();
    let snf = smith_normal_form(&rho);
    if snf.rank() != n {
        return Err(ToricError::NotSpanning {
            rank: snf.rank(),
            expected: n,
        });
    }
    let factors = snf.invariant_factors();
    let torsion_rows: Vec<(usize, BigInt)> = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_one())
        .map(|(k, f)| (k, f.clone()))
        .collect();
    let free_rows: Vec<Vec<BigInt>> = (n..l).map(|k| snf.u.row(k).to_vec()).collect();
    let free = if free_rows.is_empty() {
        Vec::new()
    } else {
        hermite_basis(l, &free_rows)
    };
    let orders: Vec<i64> = torsion_rows.iter().map(|(_, f)| small(f)).collect::<Result<_, _>>()?;
    let mut weights = Vec::with_capacity(l);
    for i in 0..l {
        let free: Vec<i64> = free.iter().map(|row| small(&row[i])).collect::<Result<_, _>>()?;
        let torsion: Vec<i64> = torsion_rows
            .iter()
            .map(|(k, f)| small(&snf.u[(*k, i)].mod_floor(f)))
            .collect::<Result<_, _>>()?;
        weights.push(Character { free, torsion });
    }
    Ok(WeightConfig::new(l - n, orders, weights)?)
}
