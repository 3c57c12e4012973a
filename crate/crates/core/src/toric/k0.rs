use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{LatticePolytope, StackyFan, ToricError};
use crate::git::SupportSet;
use crate::lattice::{complete_to_unimodular, smith_normal_form, IntMatrix};

/// Rays rewritten in a basis of `N` where the primitive functional taking
/// the value 1 on every ray is the last coordinate.
pub fn height_one_rays(fan: &StackyFan) -> Result<Vec<Vec<i64>>, ToricError> {
    let n = fan.lattice_rank();
    let l = fan.rays().len();
    if n == 0 || l == 0 {
        return Err(ToricError::NotGorenstein);
    }
    // Solve ρ a = (1, .., 1) over ℤ through u ρ v = d.
    let snf = smith_normal_form(&fan.ray_matrix());
    let rhs: Vec<BigInt> = (0..l).map(|k| snf.u.row(k).iter().sum()).collect();
    let rank = snf.rank();
    let mut y = vec![BigInt::zero(); n];
    for (k, b) in rhs.iter().enumerate() {
        if k < rank {
            let dk = &snf.d[(k, k)];
            if !b.is_multiple_of(dk) {
                return Err(ToricError::NotGorenstein);
            }
            y[k] = b / dk;
        } else if !b.is_zero() {
            return Err(ToricError::NotGorenstein);
        }
    }
    let a = snf.v.mul_vec(&y)?;
    let p = complete_to_unimodular(&a)?;
    fan.rays()
        .iter()
        .map(|v| {
            let w = p.mul_vec(&crate::lattice::matrix::to_big(v))?;
            debug_assert!(w[n - 1] == BigInt::from(1));
            w.iter()
                .map(|x| x.to_i64().ok_or(ToricError::Overflow))
                .collect()
        })
        .collect()
}

/// The polytope `P` with `σ ∩ {height 1} = P × {1}`.
pub fn polytope_from_cone_section(fan: &StackyFan) -> Result<LatticePolytope, ToricError> {
    let n = fan.lattice_rank();
    let rays = height_one_rays(fan)?;
    let pts: Vec<Vec<i64>> = rays.iter().map(|v| v[..n - 1].to_vec()).collect();
    LatticePolytope::from_points(n - 1, &pts)
}

/// `(n−1)! Vol(P)`, computed by triangulation and cross-checked against the
/// leading Ehrhart coefficient.
pub fn k0_rank(fan: &StackyFan) -> Result<BigInt, ToricError> {
    let p = polytope_from_cone_section(fan)?;
    let vol = p.normalized_volume()?;
    let ehr = p.ehrhart_polynomial()?;
    if ehr.normalized_volume != vol {
        return Err(ToricError::Inconsistent(format!(
            "triangulation volume {vol} disagrees with Ehrhart volume {}",
            ehr.normalized_volume
        )));
    }
    Ok(vol)
}

/// Relation data for `K_0`: monomial relations `Π x_i^{⟨m_j, v_i⟩} = 1`
/// for the standard basis `m_j` of `M`, and `Π_{i ∈ I} (1 − x_i) = 0` for
/// the minimal non-faces `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Presentation {
    pub lattice_rank: usize,
    pub ray_count: usize,
    /// Row `j` holds the exponents of `x_1 .. x_l` in the `j`-th relation.
    pub exponents: Vec<Vec<i64>>,
    pub minimal_nonfaces: Vec<SupportSet>,
    /// Sum of `|det|` over the maximal cones when every one is a full
    /// simplicial cone.
    #[serde(serialize_with = "crate::io::ser::opt_big")]
    pub simplicial_rank: Option<BigInt>,
}

pub fn k0_presentation(fan: &StackyFan) -> K0Presentation {
    let n = fan.lattice_rank();
    let l = fan.rays().len();
    let exponents = (0..n).map(|j| fan.rays().iter().map(|v| v[j]).collect()).collect();

    let is_face = |s: &[usize]| fan.cones().iter().any(|c| s.iter().all(|&i| c.contains(i)));
    let mut nonfaces = Vec::new();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert(Vec::new());
    while !faces.is_empty() {
        let mut next = BTreeSet::new();
        for f in &faces {
            let start = f.last().map_or(0, |&x| x + 1);
            for i in start..l {
                let mut s = f.clone();
                s.push(i);
                // every subset one smaller must be a face
                let minimal = (0..s.len()).all(|k| {
                    let mut t = s.clone();
                    t.remove(k);
                    faces.contains(&t)
                });
                if !minimal {
                    continue;
                }
                if is_face(&s) {
                    next.insert(s);
                } else {
                    nonfaces.push(SupportSet::new(s));
                }
            }
        }
        faces = next;
    }
    nonfaces.sort();

    let simplicial_rank = fan
        .cones()
        .iter()
        .map(|c| {
            if c.len() != n {
                return None;
            }
            let rows: Vec<Vec<i64>> = c.indices().iter().map(|&i| fan.rays()[i].clone()).collect();
            let det = IntMatrix::from_rows(n, &rows).ok()?.determinant().ok()?.abs();
            (!det.is_zero()).then_some(det)
        })
        .sum();

    K0Presentation {
        lattice_rank: n,
        ray_count: l,
        exponents,
        minimal_nonfaces: nonfaces,
        simplicial_rank,
    }
}
