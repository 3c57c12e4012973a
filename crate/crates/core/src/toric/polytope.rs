use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ToricError;
use crate::lattice::matrix::{solve_in_row_span, to_big, to_rational};
use crate::lattice::{lattice_kernel, saturate, IntMatrix};

/// Supporting half-space `⟨normal, x⟩ >= offset` with primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    fn slack(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() - self.offset
    }
}

/// Convex hull of finitely many lattice points, stored by its vertices in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<Vec<i64>>,
    /// Empty unless the polytope is full-dimensional.
    facets: Vec<Facet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartData {
    /// `c_0 .. c_D` with `Ehr(t) = Σ c_k t^k`.
    #[serde(serialize_with = "crate::io::ser::rat_vec")]
    pub coefficients: Vec<BigRational>,
    /// `D! · c_D`.
    #[serde(serialize_with = "crate::io::ser::big")]
    pub normalized_volume: BigInt,
}

impl EhrhartData {
    pub fn evaluate(&self, t: i64) -> BigRational {
        let t = BigRational::from_integer(t.into());
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &t + c)
    }

    pub fn leading_coefficient(&self) -> &BigRational {
        self.coefficients.last().expect("degree >= 0")
    }
}

/// Vertex priority for pulling triangulations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum VertexOrder {
    #[default]
    Lex,
    ReverseLex,
    /// A permutation of vertex indices, highest priority first.
    Custom(Vec<usize>),
}

impl LatticePolytope {
    /// Convex hull of `points ⊂ ℤ^ambient_dim`.
    pub fn from_points(ambient_dim: usize, points: &[Vec<i64>]) -> Result<Self, ToricError> {
        if points.is_empty() {
            return Err(ToricError::EmptyPolytope);
        }
        for p in points {
            if p.len() != ambient_dim {
                return Err(ToricError::RayShape {
                    expected: ambient_dim,
                    found: p.len(),
                });
            }
        }
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let (dim, local) = affine_chart(ambient_dim, &pts)?;
        if dim == ambient_dim {
            let (idx, facets) = full_hull(ambient_dim, &pts)?;
            return Ok(LatticePolytope {
                ambient_dim,
                dim,
                vertices: idx.into_iter().map(|i| pts[i].clone()).collect(),
                facets,
            });
        }
        let (idx, _) = full_hull(dim, &local)?;
        let mut vertices: Vec<Vec<i64>> = idx.into_iter().map(|i| pts[i].clone()).collect();
        vertices.sort();
        Ok(LatticePolytope {
            ambient_dim,
            dim,
            vertices,
            facets: Vec::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    fn require_full(&self) -> Result<(), ToricError> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(ToricError::Degenerate {
                dim: self.dim,
                ambient: self.ambient_dim,
            })
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.contains_dilate(x, 1)
    }

    fn contains_dilate(&self, x: &[i64], t: i64) -> bool {
        self.facets.iter().all(|f| {
            f.normal.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() >= t * f.offset
        })
    }

    /// `#(tP ∩ ℤ^D)` by scanning the bounding box of `tP`.
    pub fn lattice_point_count(&self, t: u32) -> Result<u64, ToricError> {
        self.require_full()?;
        let t = i64::from(t);
        let d = self.ambient_dim;
        if d == 0 {
            return Ok(1);
        }
        let lo: Vec<i64> = (0..d).map(|k| t * self.vertices.iter().map(|v| v[k]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..d).map(|k| t * self.vertices.iter().map(|v| v[k]).max().unwrap()).collect();
        let mut x = lo.clone();
        let mut count = 0u64;
        loop {
            if self.contains_dilate(&x, t) {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == d {
                    return Ok(count);
                }
                if x[k] < hi[k] {
                    x[k] += 1;
                    break;
                }
                x[k] = lo[k];
                k += 1;
            }
        }
    }

    /// Ehrhart polynomial interpolated from the counts at `t = 0..=D`.
    pub fn ehrhart_polynomial(&self) -> Result<EhrhartData, ToricError> {
        self.require_full()?;
        let d = self.dim;
        let values: Vec<BigRational> = (0..=d as u32)
            .map(|t| self.lattice_point_count(t).map(|c| BigRational::from_integer(c.into())))
            .collect::<Result<_, _>>()?;
        let coefficients = interpolate_at_naturals(&values);
        let factorial: BigInt = (1..=d).map(BigInt::from).product();
        let scaled = &coefficients[d] * BigRational::from_integer(factorial);
        if !scaled.is_integer() {
            return Err(ToricError::Inconsistent(format!(
                "D! times leading Ehrhart coefficient is {scaled}, not an integer"
            )));
        }
        Ok(EhrhartData {
            coefficients,
            normalized_volume: scaled.to_integer(),
        })
    }

    /// `D!` times the Euclidean volume, from a pulling triangulation.
    pub fn normalized_volume(&self) -> Result<BigInt, ToricError> {
        self.normalized_volume_with(&VertexOrder::Lex)
    }

    pub fn normalized_volume_with(&self, order: &VertexOrder) -> Result<BigInt, ToricError> {
        let simplices = self.pulling_triangulation(order)?;
        Ok(simplices.iter().map(|s| self.simplex_volume(s)).sum())
    }

    /// `|det|` of the edge vectors of a full-dimensional simplex.
    pub fn simplex_volume(&self, simplex: &[usize]) -> BigInt {
        let v0 = &self.vertices[simplex[0]];
        let rows: Vec<Vec<i64>> = simplex[1..]
            .iter()
            .map(|&i| self.vertices[i].iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        if rows.is_empty() {
            return BigInt::one();
        }
        IntMatrix::from_rows(self.ambient_dim, &rows)
            .and_then(|m| m.determinant())
            .expect("square edge matrix")
            .abs()
    }

    /// Pulling triangulation: the first vertex in `order` is coned over a
    /// pulling triangulation of every facet not containing it, recursively.
    /// Simplices are lists of vertex indices.
    pub fn pulling_triangulation(&self, order: &VertexOrder) -> Result<Vec<Vec<usize>>, ToricError> {
        self.require_full()?;
        let n = self.vertices.len();
        let priority: Vec<usize> = match order {
            VertexOrder::Lex => (0..n).collect(),
            VertexOrder::ReverseLex => (0..n).rev().collect(),
            VertexOrder::Custom(p) => {
                let mut sorted = p.clone();
                sorted.sort_unstable();
                if sorted != (0..n).collect::<Vec<_>>() {
                    return Err(ToricError::InvalidOrder);
                }
                p.clone()
            }
        };
        let rank_of: Vec<usize> = {
            let mut r = vec![0; n];
            for (k, &v) in priority.iter().enumerate() {
                r[v] = k;
            }
            r
        };
        let tight: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| (0..n).filter(|&i| f.slack(&self.vertices[i]) == 0).collect())
            .collect();
        let mut all: Vec<usize> = (0..n).collect();
        all.sort_by_key(|&i| rank_of[i]);
        let mut out = Vec::new();
        self.pull(&all, self.dim, &tight, &rank_of, &mut Vec::new(), &mut out);
        for s in &mut out {
            s.sort_unstable();
        }
        out.sort();
        Ok(out)
    }

    fn pull(
        &self,
        face: &[usize],
        k: usize,
        tight: &[BTreeSet<usize>],
        rank_of: &[usize],
        apex: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if face.len() == k + 1 {
            let mut s = apex.clone();
            s.extend_from_slice(face);
            out.push(s);
            return;
        }
        let v = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in tight {
            let mut sub: Vec<usize> = face.iter().copied().filter(|i| t.contains(i)).collect();
            if sub.contains(&v) || sub.len() < k {
                continue;
            }
            if self.affine_rank(&sub) + 1 == k {
                sub.sort_by_key(|&i| rank_of[i]);
                subfaces.insert(sub);
            }
        }
        apex.push(v);
        for sub in subfaces {
            self.pull(&sub, k - 1, tight, rank_of, apex, out);
        }
        apex.pop();
    }

    fn affine_rank(&self, idx: &[usize]) -> usize {
        let v0 = &self.vertices[idx[0]];
        let rows: Vec<Vec<i64>> = idx[1..]
            .iter()
            .map(|&i| self.vertices[i].iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        if rows.is_empty() {
            return 0;
        }
        IntMatrix::from_rows(self.ambient_dim, &rows).expect("uniform width").rank()
    }
}

/// Coordinates of `points` in a basis of the saturated lattice spanned by
/// their differences, with `points[0]` as origin. Returns the affine
/// dimension and the local coordinates.
pub fn affine_chart(
    ambient_dim: usize,
    points: &[Vec<i64>],
) -> Result<(usize, Vec<Vec<i64>>), ToricError> {
    let Some(base) = points.first() else {
        return Err(ToricError::EmptyPolytope);
    };
    let diffs: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| to_big(&p.iter().zip(base).map(|(a, b)| a - b).collect::<Vec<_>>()))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let basis = if diffs.is_empty() {
        Vec::new()
    } else {
        saturate(ambient_dim, &diffs)
    };
    if basis.len() == ambient_dim {
        return Ok((ambient_dim, points.to_vec()));
    }
    let rb: Vec<Vec<BigRational>> = basis.iter().map(|b| to_rational(b)).collect();
    let mut local = Vec::with_capacity(points.len());
    for p in points {
        let d: Vec<BigInt> = to_big(&p.iter().zip(base).map(|(a, b)| a - b).collect::<Vec<_>>());
        let c = solve_in_row_span(&rb, &to_rational(&d)).expect("point lies in its affine span");
        local.push(
            c.iter()
                .map(|x| x.to_integer().to_i64().ok_or(ToricError::Overflow))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok((basis.len(), local))
}

/// Vertex indices and facets of the hull of full-dimensional `pts`.
fn full_hull(d: usize, pts: &[Vec<i64>]) -> Result<(Vec<usize>, Vec<Facet>), ToricError> {
    if d == 0 {
        return Ok((vec![0], Vec::new()));
    }
    let mut facets: BTreeSet<Facet> = BTreeSet::new();
    for s in (0..pts.len()).combinations(d) {
        let p0 = &pts[s[0]];
        let normal: Vec<BigInt> = if d == 1 {
            vec![BigInt::one()]
        } else {
            let rows: Vec<Vec<i64>> = s[1..]
                .iter()
                .map(|&i| pts[i].iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            let k = lattice_kernel(&IntMatrix::from_rows(d, &rows)?);
            if k.len() != 1 {
                continue;
            }
            k.into_iter().next().unwrap()
        };
        let normal: Vec<i64> = normal
            .iter()
            .map(|x| x.to_i64().ok_or(ToricError::Overflow))
            .collect::<Result<_, _>>()?;
        let offset: i64 = normal.iter().zip(p0).map(|(a, b)| a * b).sum();
        let f = Facet { normal, offset };
        let slacks: Vec<i64> = pts.iter().map(|p| f.slack(p)).collect();
        if slacks.iter().all(|&x| x >= 0) {
            facets.insert(f);
        } else if slacks.iter().all(|&x| x <= 0) {
            facets.insert(Facet {
                normal: f.normal.iter().map(|x| -x).collect(),
                offset: -f.offset,
            });
        }
    }
    let facets: Vec<Facet> = facets.into_iter().collect();
    let vertices = (0..pts.len())
        .filter(|&i| {
            let normals: Vec<Vec<i64>> = facets
                .iter()
                .filter(|f| f.slack(&pts[i]) == 0)
                .map(|f| f.normal.clone())
                .collect();
            !normals.is_empty()
                && IntMatrix::from_rows(d, &normals).expect("uniform width").rank() == d
        })
        .collect();
    Ok((vertices, facets))
}

/// Coefficients of the unique polynomial of degree `< values.len()` taking
/// `values[t]` at `t = 0, 1, ...`, via Newton forward differences.
pub fn interpolate_at_naturals(values: &[BigRational]) -> Vec<BigRational> {
    let n = values.len();
    let mut diffs = values.to_vec();
    let mut coefficients = vec![BigRational::zero(); n];
    // binom(t, k) as a polynomial in t
    let mut binom = vec![BigRational::one()];
    for k in 0..n {
        for (c, b) in coefficients.iter_mut().zip(&binom) {
            *c += &diffs[0] * b;
        }
        for i in 0..n - k - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        // binom(t, k+1) = binom(t, k) * (t - k) / (k + 1)
        let kq = BigRational::from_integer(BigInt::from(k));
        let denom = BigRational::from_integer(BigInt::from(k + 1));
        let mut next = vec![BigRational::zero(); binom.len() + 1];
        for (j, b) in binom.iter().enumerate() {
            next[j + 1] += b / &denom;
            next[j] -= b * &kq / &denom;
        }
        binom = next;
    }
    coefficients
}
