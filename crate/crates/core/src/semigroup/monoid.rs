use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::SemigroupError;
use crate::git::{check_enumerable, Character, WeightConfig};
use crate::lattice::matrix::{primitive_integer, rational_inverse, solve_in_row_span, to_rational};
use crate::lattice::{hermite_basis, lattice_kernel, saturate, smith_normal_form, IntMatrix};
use crate::toric::{affine_chart, LatticePolytope, VertexOrder};

/// Calls `f` on every `m ∈ ℕ^d` with `Σ m_i = k`, in lexicographically
/// decreasing order.
pub fn for_each_exponent(d: usize, k: u32, f: &mut dyn FnMut(&[u32])) {
    fn go(m: &mut Vec<u32>, i: usize, left: u32, f: &mut dyn FnMut(&[u32])) {
        if i + 1 == m.len() {
            m[i] = left;
            f(m);
            return;
        }
        for x in (0..=left).rev() {
            m[i] = x;
            go(m, i + 1, left - x, f);
        }
        m[i] = 0;
    }
    if d == 0 {
        if k == 0 {
            f(&[]);
        }
        return;
    }
    go(&mut vec![0; d], 0, k, f);
}

fn dominates(m: &[u32], g: &[u32]) -> bool {
    g.iter().zip(m).all(|(a, b)| a <= b)
}

/// Exponent vectors of weight `target` that are minimal for the
/// componentwise order, up to total degree `max_degree`.
fn minimal_of_weight(
    w: &WeightConfig,
    target: &Character,
    min_degree: u32,
    max_degree: u32,
) -> Vec<Vec<u32>> {
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for k in min_degree..=max_degree {
        let mut found = Vec::new();
        for_each_exponent(w.len(), k, &mut |m| {
            if gens.iter().any(|g| dominates(m, g)) {
                return;
            }
            if w.weight_of(m) == *target {
                found.push(m.to_vec());
            }
        });
        gens.extend(found);
    }
    gens
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertBasis {
    /// Irreducible invariant exponent vectors, by degree then
    /// lexicographically decreasing.
    pub generators: Vec<Vec<u32>>,
    pub degree_bound: u32,
    /// Every irreducible element has degree at most this.
    pub a_priori_bound: u64,
    /// `a_priori_bound <= degree_bound`, so the list is the full basis.
    pub complete: bool,
}

/// Irreducible elements of `{m ∈ ℕ^d : Σ m_i β_i = 0}` up to `degree_bound`.
pub fn invariant_hilbert_basis(
    w: &WeightConfig,
    degree_bound: u32,
) -> Result<HilbertBasis, SemigroupError> {
    if degree_bound == 0 {
        return Err(SemigroupError::ZeroBound);
    }
    check_enumerable(w)?;
    let a_priori_bound = hilbert_degree_bound(w)?;
    let generators = minimal_of_weight(w, &w.zero_character(), 1, degree_bound);
    Ok(HilbertBasis {
        generators,
        degree_bound,
        a_priori_bound,
        complete: a_priori_bound <= u64::from(degree_bound),
    })
}

/// Which character the monomials of `M(μ)` carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CovariantConvention {
    /// Monomials of weight `μ`.
    Direct,
    /// Monomials of weight `−μ`.
    #[default]
    Negated,
}

/// Minimal generators of `M(μ)` over the invariant monoid, up to
/// `degree_bound`.
pub fn covariant_generators(
    w: &WeightConfig,
    mu: &Character,
    degree_bound: u32,
) -> Result<Vec<Vec<u32>>, SemigroupError> {
    covariant_generators_with(w, mu, degree_bound, CovariantConvention::default())
}

pub fn covariant_generators_with(
    w: &WeightConfig,
    mu: &Character,
    degree_bound: u32,
    convention: CovariantConvention,
) -> Result<Vec<Vec<u32>>, SemigroupError> {
    check_enumerable(w)?;
    let mu = w.character(mu.clone())?;
    let target = match convention {
        CovariantConvention::Direct => mu,
        CovariantConvention::Negated => w.zero_character().add_scaled(&mu, -1, w.torsion_orders()),
    };
    Ok(minimal_of_weight(w, &target, 0, degree_bound))
}

/// Basis (Hermite normal form) of `L = {m ∈ ℤ^d : Σ m_i β_i = 0 in X(G)}`.
pub fn invariant_lattice(w: &WeightConfig) -> Vec<Vec<BigInt>> {
    let (r, t, d) = (w.free_rank(), w.torsion_orders().len(), w.len());
    let mut a = IntMatrix::zeros(r + t, d + t);
    for (i, b) in w.weights().iter().enumerate() {
        for (k, x) in b.free.iter().chain(&b.torsion).enumerate() {
            a[(k, i)] = BigInt::from(*x);
        }
    }
    for (j, &k) in w.torsion_orders().iter().enumerate() {
        a[(r + j, d + j)] = BigInt::from(k);
    }
    let projected: Vec<Vec<BigInt>> = lattice_kernel(&a)
        .into_iter()
        .map(|v| v[..d].to_vec())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    if projected.is_empty() {
        return Vec::new();
    }
    hermite_basis(d, &projected)
}

/// Extreme rays of `ℝ^d_{>=0} ∩ L_ℝ`, each as the primitive vector of `L`
/// on the ray, in `L`-coordinates.
fn extreme_rays(w: &WeightConfig, basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = w.len();
    let b = w.free_matrix();
    let rank = b.rank();
    let rb: Vec<Vec<BigRational>> = basis.iter().map(|v| to_rational(v)).collect();
    let mut rays = BTreeSet::new();
    for k in 1..=(rank + 1).min(d) {
        for s in (0..d).combinations(k) {
            let ker = lattice_kernel(&b.select_columns(&s));
            if ker.len() != 1 {
                continue;
            }
            let v = &ker[0];
            let sign = if v.iter().all(Signed::is_positive) {
                1
            } else if v.iter().all(Signed::is_negative) {
                -1
            } else {
                continue;
            };
            let mut full = vec![BigRational::zero(); d];
            for (x, &i) in v.iter().zip(&s) {
                full[i] = BigRational::from_integer(x * sign);
            }
            let c = solve_in_row_span(&rb, &full).expect("kernel vector lies in L ⊗ ℚ");
            rays.insert(primitive_integer(&c));
        }
    }
    rays.into_iter().collect()
}

/// Degree bound for irreducible elements: an irreducible element is an
/// extreme ray generator or lies in the half-open fundamental parallelepiped
/// of a simplicial cone of a triangulation by extreme rays.
pub fn hilbert_degree_bound(w: &WeightConfig) -> Result<u64, SemigroupError> {
    let basis = invariant_lattice(w);
    if basis.is_empty() {
        return Ok(0);
    }
    let n = basis.len();
    let rays = extreme_rays(w, &basis);
    if rays.is_empty() {
        return Ok(0);
    }
    let grading: Vec<BigInt> = basis.iter().map(|v| v.iter().sum()).collect();
    let degree = |c: &[BigInt]| -> BigInt { c.iter().zip(&grading).map(|(a, b)| a * b).sum() };
    let degrees: Vec<BigInt> = rays.iter().map(|c| degree(c)).collect();
    let mut bound = degrees.iter().max().cloned().unwrap_or_default();

    // Cross-section at a common degree, triangulated by pulling.
    let common = degrees
        .iter()
        .fold(BigInt::from(1), |l, x| num_integer::Integer::lcm(&l, x));
    let section: Vec<Vec<i64>> = rays
        .iter()
        .zip(&degrees)
        .map(|(c, dg)| {
            let s = &common / dg;
            c.iter().map(|x| (x * &s).to_i64().ok_or(SemigroupError::Overflow)).collect()
        })
        .collect::<Result<_, _>>()?;
    let (k, local) = affine_chart(n, &section)?;
    let poly = LatticePolytope::from_points(k, &local)?;
    let simplices = if k == 0 {
        vec![vec![0]]
    } else {
        poly.pulling_triangulation(&VertexOrder::Lex)?
    };
    let ray_of_vertex: Vec<usize> = poly
        .vertices()
        .iter()
        .map(|v| local.iter().position(|p| p == v).expect("vertex is a section point"))
        .collect();

    for simplex in simplices {
        let gens: Vec<Vec<BigInt>> = simplex.iter().map(|&v| rays[ray_of_vertex[v]].clone()).collect();
        let gdeg: Vec<BigRational> = simplex
            .iter()
            .map(|&v| BigRational::from_integer(degrees[ray_of_vertex[v]].clone()))
            .collect();
        for point_degree in parallelepiped_degrees(n, &gens, &gdeg)? {
            bound = bound.max(point_degree);
        }
    }
    bound.to_u64().ok_or(SemigroupError::Overflow)
}

/// Degrees `Σ frac(λ_i) deg(g_i)` of the lattice points `Σ λ_i g_i` with
/// `0 <= λ_i < 1`, enumerated as coset representatives of the sublattice
/// spanned by `gens` in its saturation.
fn parallelepiped_degrees(
    n: usize,
    gens: &[Vec<BigInt>],
    gdeg: &[BigRational],
) -> Result<Vec<BigInt>, SemigroupError> {
    let sat = saturate(n, gens);
    let sb: Vec<Vec<BigRational>> = sat.iter().map(|v| to_rational(v)).collect();
    let local: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| solve_in_row_span(&sb, &to_rational(g)).expect("generator in its span"))
        .collect();
    let m = local.len();
    let r = IntMatrix::from_rows(
        m,
        &local
            .iter()
            .map(|row| row.iter().map(|x| x.to_integer()).collect())
            .collect::<Vec<Vec<BigInt>>>(),
    )?;
    let rinv = rational_inverse(&local).ok_or(SemigroupError::Inconsistent(
        "triangulation produced a degenerate simplex".into(),
    ))?;
    let snf = smith_normal_form(&r);
    let vinv = snf.v.inverse_unimodular()?;
    let factors: Vec<u64> = (0..m)
        .map(|k| snf.d[(k, k)].to_u64().ok_or(SemigroupError::Overflow))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for y in factors.iter().map(|&f| 0..f).multi_cartesian_product() {
        let p: Vec<BigRational> = (0..m)
            .map(|j| {
                let s: BigInt = y.iter().enumerate().map(|(k, &yk)| BigInt::from(yk) * &vinv[(k, j)]).sum();
                BigRational::from_integer(s)
            })
            .collect();
        let lambda: Vec<BigRational> = (0..m)
            .map(|i| p.iter().enumerate().map(|(j, pj)| pj * &rinv[j][i]).sum())
            .collect();
        let deg: BigRational = lambda
            .iter()
            .zip(gdeg)
            .map(|(l, g)| (l - l.floor()) * g)
            .sum();
        out.push(deg.to_integer());
    }
    if m == 0 {
        out.clear();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(r: usize, ws: &[&[i64]]) -> WeightConfig {
        WeightConfig::torus(r, &ws.iter().map(|w| w.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn example() -> WeightConfig {
        torus(2, &[&[3, 0], &[1, 1], &[0, 3], &[-1, 0], &[-3, -3], &[0, -1]])
    }

    fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn exponent_enumeration() {
        let mut seen = Vec::new();
        for_each_exponent(3, 2, &mut |m| seen.push(m.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![2, 0, 0]);
        assert_eq!(seen[5], vec![0, 0, 2]);
    }

    #[test]
    fn single_pair() {
        let hb = invariant_hilbert_basis(&torus(1, &[&[1], &[-1]]), 4).unwrap();
        assert_eq!(hb.generators, vec![vec![1, 1]]);
        assert!(hb.complete);
    }

    #[test]
    fn conifold_basis() {
        let hb = invariant_hilbert_basis(&torus(1, &[&[1], &[1], &[-1], &[-1]]), 4).unwrap();
        assert_eq!(
            hb.generators,
            vec![vec![1, 0, 1, 0], vec![1, 0, 0, 1], vec![0, 1, 1, 0], vec![0, 1, 0, 1]]
        );
        assert_eq!(hb.a_priori_bound, 2);
        assert!(hb.complete);
        let g = &hb.generators;
        assert_eq!(add(&g[0], &g[3]), add(&g[1], &g[2]));
    }

    #[test]
    fn example_basis_and_relation() {
        let hb = invariant_hilbert_basis(&example(), 9).unwrap();
        assert_eq!(hb.generators.len(), 5);
        assert!(hb.complete, "a priori bound {}", hb.a_priori_bound);
        let g = &hb.generators;
        // find a, b with 3a + b equal to the sum of the other three
        let found = (0..5).cartesian_product(0..5).any(|(a, b)| {
            if a == b {
                return false;
            }
            let lhs = add(&add(&add(&g[a], &g[a]), &g[a]), &g[b]);
            let rest: Vec<usize> = (0..5).filter(|&i| i != a && i != b).collect();
            lhs == add(&add(&g[rest[0]], &g[rest[1]]), &g[rest[2]])
        });
        assert!(found);
    }

    #[test]
    fn torsion_is_respected() {
        // ℤ/3 acting by (1, 2): invariants x^3, xy, y^3
        let w = WeightConfig::new(
            0,
            vec![3],
            vec![
                Character { free: vec![], torsion: vec![1] },
                Character { free: vec![], torsion: vec![2] },
            ],
        )
        .unwrap();
        let hb = invariant_hilbert_basis(&w, 6).unwrap();
        assert_eq!(hb.generators, vec![vec![1, 1], vec![3, 0], vec![0, 3]]);
        // (2,2) sits in the parallelepiped of (3,0), (0,3)
        assert_eq!(hb.a_priori_bound, 4);
        assert!(hb.complete);
    }

    #[test]
    fn covariant_counts() {
        let w = example();
        let count = |mu: [i64; 2]| covariant_generators(&w, &Character::free(mu.to_vec()), 10).unwrap().len();
        assert_eq!(count([0, 0]), 1);
        assert_eq!(count([0, -1]), 2);
        assert_eq!(count([1, 1]), 2);
        assert_eq!(count([-1, 1]), 3);
        assert_eq!(count([2, 1]), 3);
        assert_eq!(
            covariant_generators(&w, &Character::free(vec![0, 0]), 3).unwrap(),
            vec![vec![0; 6]]
        );
    }

    #[test]
    fn zero_bound_refused() {
        assert_eq!(
            invariant_hilbert_basis(&example(), 0),
            Err(SemigroupError::ZeroBound)
        );
    }
}
