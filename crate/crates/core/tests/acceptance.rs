//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_nccr::derived::{
    saturate_generators, saturate_generators_with, KoszulConvention, SaturationOptions, Window,
};
use toric_nccr::git::{
    fiber_dimension_bound, is_chi_generic, is_generic, is_support_semistable, is_unimodular,
    nccr_criterion, unstable_dimension, Character, NccrVerdict, SupportSet, WeightConfig,
};
use toric_nccr::io::{FanDocument, MatrixFactorizationDocument, WeightConfigDocument};
use toric_nccr::lattice::{FeasibilityCertificate, Verdict};
use toric_nccr::semigroup::{
    cokernel_unstable_check, covariant_generators, invariant_hilbert_basis,
    monomial_ideal_components, verify_matrix_factorization,
};
use toric_nccr::toric::{
    k0_rank, polytope_from_cone_section, weights_to_stacky_fan, LatticePolytope, VertexOrder,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn example_doc() -> WeightConfigDocument {
    WeightConfigDocument::from_json(&std::fs::read_to_string(fixture("svdb-ex101.json")).unwrap())
        .unwrap()
}

fn example() -> (WeightConfigDocument, WeightConfig, Character) {
    let doc = example_doc();
    let w = doc.config().unwrap();
    let chi = doc.chi(&w).unwrap().unwrap();
    (doc, w, chi)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rat_dot(a: &[BigRational], b: &[i64]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from_integer(BigInt::from(*y)))
        .sum()
}

/// Re-checks a cone-membership certificate for `−χ ∈ cone(β_T)` by direct
/// substitution.
fn substitute(w: &WeightConfig, t: &SupportSet, chi: &Character, cert: &FeasibilityCertificate) -> bool {
    let zero = BigRational::from_integer(BigInt::from(0));
    match cert.verdict {
        Verdict::Feasible => {
            let a = cert.witness.as_ref().unwrap();
            a.len() == t.len()
                && a.iter().all(|x| *x >= zero)
                && (0..w.free_rank()).all(|k| {
                    let s: BigRational = a
                        .iter()
                        .zip(t.indices())
                        .map(|(c, &i)| c * BigRational::from_integer(BigInt::from(w.weights()[i].free[k])))
                        .sum();
                    s == BigRational::from_integer(BigInt::from(-chi.free[k]))
                })
        }
        Verdict::Infeasible => {
            let y = cert.separator.as_ref().unwrap();
            let neg: Vec<i64> = chi.free.iter().map(|x| -x).collect();
            t.indices().iter().all(|&i| rat_dot(y, &w.weights()[i].free) >= zero)
                && rat_dot(y, &neg) < zero
        }
    }
}

fn pipeline() -> Outcome {
    let (_, w, _) = example();
    ensure!(is_unimodular(&w), "not unimodular");
    ensure!(is_generic(&w).unwrap().generic, "not generic");
    let u = unstable_dimension(&w).unwrap();
    ensure!(u.dim == 3, "dim X^u = {}", u.dim);
    ensure!(u.verify(&w), "unstable witness does not verify");
    let c = nccr_criterion(&w).unwrap();
    let margin = c.dim_xu as i64 - c.dim_g as i64;
    ensure!(c.verdict == NccrVerdict::NccrGuaranteed, "verdict {}", c.verdict);
    ensure!(margin == 1, "margin {margin}");
    Ok(format!("dim X^u = 3, margin 3 - 2 = {margin}, verdict {}", c.verdict))
}

fn semistability() -> Outcome {
    let (_, w, chi) = example();
    for (labels, expected) in [(vec![1, 5, 6], false), (vec![1, 2, 3, 6], false), (vec![1, 2, 3, 4, 5, 6], true)] {
        let t = SupportSet::from_one_based(&labels);
        let cert = is_support_semistable(&w, &t, &chi).unwrap();
        ensure!(cert.is_feasible() == expected, "support {t}: semistable = {}", cert.is_feasible());
        ensure!(substitute(&w, &t, &chi, &cert), "certificate for {t} fails substitution");
    }
    ensure!(is_chi_generic(&w, &chi).unwrap(), "chi not generic");
    let f = fiber_dimension_bound(&w, &chi).unwrap();
    ensure!(f.bound == 1, "fiber bound {}", f.bound);
    Ok("{1,5,6}, {1,2,3,6} unstable; full support semistable; chi generic; fiber bound 1".into())
}

fn k0_ranks() -> Outcome {
    let (_, w, _) = example();
    let fan = weights_to_stacky_fan(&w).unwrap();
    let p = polytope_from_cone_section(&fan).unwrap();
    let ehr = p.ehrhart_polynomial().unwrap();
    let tri = p.normalized_volume().unwrap();
    let thirteen_sixths = BigRational::new(BigInt::from(13), BigInt::from(6));
    ensure!(p.dim() == 3, "polytope dim {}", p.dim());
    ensure!(*ehr.leading_coefficient() == thirteen_sixths, "volume {}", ehr.leading_coefficient());
    ensure!(tri == BigInt::from(13) && ehr.normalized_volume == tri, "ranks {tri} / {}", ehr.normalized_volume);
    ensure!(k0_rank(&fan).unwrap() == BigInt::from(13), "k0_rank");
    let con = WeightConfig::torus(1, &[vec![1], vec![1], vec![-1], vec![-1]]).unwrap();
    let r = k0_rank(&weights_to_stacky_fan(&con).unwrap()).unwrap();
    ensure!(r == BigInt::from(2), "conifold rank {r}");
    let simplex = FanDocument::from_json(&std::fs::read_to_string(fixture("unit-simplex.json")).unwrap())
        .unwrap()
        .fan()
        .unwrap();
    let r = k0_rank(&simplex).unwrap();
    ensure!(r == BigInt::from(1), "simplex rank {r}");
    Ok("volume 13/6, rank 13 (triangulation = Ehrhart); conifold 2; simplex 1".into())
}

fn matrix_factorization() -> Outcome {
    let doc = MatrixFactorizationDocument::from_json(&std::fs::read_to_string(fixture("svdb-mf.json")).unwrap())
        .unwrap();
    let (d0, d1, f) = doc.parse().unwrap();
    ensure!(f.to_string() == "a^3*b - c*d*e", "f = {f}");
    let rep = verify_matrix_factorization(&d0, &d1, &f).unwrap();
    ensure!(rep.passes && rep.sign == 1, "d0 d1 = d1 d0 = f I fails");
    let mut bad = doc.clone();
    bad.f = "a^3*b + c*d*e".into();
    let (d0, d1, g) = bad.parse().unwrap();
    let rep = verify_matrix_factorization(&d0, &d1, &g).unwrap();
    ensure!(!rep.passes && rep.sign == 0, "perturbed f passes");
    Ok("d0 d1 = d1 d0 = f I4 for f = a^3 b - cde; a^3 b + cde rejected".into())
}

fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn invariant_ring() -> Outcome {
    let (_, w, _) = example();
    let hb = invariant_hilbert_basis(&w, 9).unwrap();
    ensure!(hb.complete, "a priori bound {} not reached", hb.a_priori_bound);
    let g = &hb.generators;
    ensure!(g.len() == 5, "{} generators", g.len());
    let relation = (0..5).permutations(5).find(|p| {
        add(&add(&add(&g[p[0]], &g[p[0]]), &g[p[0]]), &g[p[1]]) == add(&add(&g[p[2]], &g[p[3]]), &g[p[4]])
    });
    ensure!(relation.is_some(), "no assignment with 3h_a + h_b = h_c + h_d + h_e");
    let mut counts = Vec::new();
    for mu in [[0, -1], [1, 1], [-1, 1], [2, 1]] {
        counts.push(covariant_generators(&w, &Character::free(mu.to_vec()), 8).unwrap().len());
    }
    ensure!(counts == vec![2, 2, 3, 3], "covariant counts {counts:?}");
    Ok("5 generators with 3a + b = c + d + e; covariant counts (2,2,3,3)".into())
}

fn cokernel_support() -> Outcome {
    let (doc, w, chi) = example();
    let gens = doc.ideal_exponents().unwrap().unwrap();
    let comps: Vec<Vec<usize>> = monomial_ideal_components(6, &gens).unwrap().iter().map(SupportSet::one_based).collect();
    ensure!(comps == vec![vec![2, 3, 4], vec![4, 5]], "components {comps:?}");
    let rep = cokernel_unstable_check(&w, &chi, &gens).unwrap();
    ensure!(rep.unstable, "cokernel support meets the semistable locus");
    for c in &rep.components {
        ensure!(substitute(&w, &c.support, &chi, &c.certificate), "certificate for {}", c.support);
    }
    Ok("components {x2,x3,x4}, {x4,x5}; both unstable for chi = (1,-2)".into())
}

fn saturation_calibration() -> Outcome {
    let (doc, w, chi) = example();
    let seed = doc.character_set(&w, "L").unwrap();
    let cm = doc.character_set(&w, "cm_weights").unwrap();
    ensure!(seed.len() == 13 && cm.len() == 37, "fixture sizes {} / {}", seed.len(), cm.len());
    let window = Window::cube(2, 4);
    let mut covering = Vec::new();
    for convention in [KoszulConvention::Add, KoszulConvention::Subtract] {
        let opts = SaturationOptions {
            convention,
            ..Default::default()
        };
        let s = saturate_generators_with(&w, &chi, &seed, &window, &opts).unwrap();
        if cm.iter().all(|c| s.known.contains(c)) {
            covering.push(convention);
        }
    }
    ensure!(covering == vec![KoszulConvention::Add], "conventions covering the CM weights: {covering:?}");
    let default = saturate_generators(&w, &chi, &seed, &window).unwrap();
    ensure!(cm.iter().all(|c| default.known.contains(c)), "default convention does not cover");
    Ok(format!("closure of L in [-4,4]^2 has {} characters and contains all 37 CM weights only under the additive convention", default.known.len()))
}

fn random_weights(rng: &mut ChaCha8Rng, r: usize, d: usize, max: i64) -> Vec<Vec<i64>> {
    (0..d).map(|_| (0..r).map(|_| rng.gen_range(-max..=max)).collect()).collect()
}

fn small_dimension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut found = 0;
    let mut tries = 0;
    while found < 200 {
        tries += 1;
        ensure!(tries < 200_000, "only {found} generic unimodular configurations found");
        let r = rng.gen_range(1..=3);
        let d = r + rng.gen_range(1..=3);
        let mut ws = random_weights(&mut rng, r, d - 1, 3);
        let last: Vec<i64> = (0..r).map(|k| -ws.iter().map(|v| v[k]).sum::<i64>()).collect();
        ws.push(last);
        let w = WeightConfig::torus(r, &ws).unwrap();
        if !is_unimodular(&w) || !is_generic(&w).unwrap().generic {
            continue;
        }
        found += 1;
        let u = unstable_dimension(&w).unwrap();
        ensure!(u.dim <= r + 1, "{ws:?}: dim X^u - r = {}", u.dim - r);
    }
    Ok(format!("200 generic unimodular configurations with d - r <= 3 ({tries} sampled)"))
}

/// `max_λ |{i : ⟨λ,β_i⟩ > 0}|` by enumerating `λ` in a box, which suffices
/// for rank <= 2 and entries <= 3; then the largest of the `2^d` supports
/// contained in one of those positive sets.
fn brute_unstable(ws: &[Vec<i64>], r: usize) -> usize {
    let box_ = if r == 1 { 1 } else { 6 };
    let mut positives: BTreeSet<Vec<usize>> = BTreeSet::new();
    for lambda in (0..r).map(|_| -box_..=box_).multi_cartesian_product() {
        if lambda.iter().all(|&x| x == 0) {
            continue;
        }
        positives.insert((0..ws.len()).filter(|&i| dot(&lambda, &ws[i]) > 0).collect());
    }
    (0u32..1 << ws.len())
        .filter(|mask| {
            positives
                .iter()
                .any(|p| (0..ws.len()).all(|i| mask >> i & 1 == 0 || p.contains(&i)))
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let cases = 300;
    for _ in 0..cases {
        let r = rng.gen_range(1..=2);
        let d = rng.gen_range(1..=8);
        let ws = random_weights(&mut rng, r, d, 3);
        let w = WeightConfig::torus(r, &ws).unwrap();
        let u = unstable_dimension(&w).unwrap();
        let b = brute_unstable(&ws, r);
        ensure!(u.dim == b, "{ws:?}: {} vs brute force {b}", u.dim);
        ensure!(u.verify(&w), "{ws:?}: witness fails");
    }
    Ok(format!("{cases} random configurations with d <= 8 match brute force"))
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..500 {
        let r = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=7);
        let ws = random_weights(&mut rng, r, d, 3);
        let w = WeightConfig::torus(r, &ws).unwrap();
        let chi = Character::free((0..r).map(|_| rng.gen_range(-3..=3)).collect());
        let t = SupportSet::new((0..d).filter(|_| rng.gen_bool(0.5)).collect());
        let bigger = SupportSet::new(
            t.indices().iter().copied().chain((0..d).filter(|_| rng.gen_bool(0.3))).collect(),
        );
        let k: i64 = rng.gen_range(1..=5);
        let scaled = Character::free(chi.free.iter().map(|x| k * x).collect());
        let a = is_support_semistable(&w, &t, &chi).unwrap();
        let b = is_support_semistable(&w, &bigger, &chi).unwrap();
        let c = is_support_semistable(&w, &t, &scaled).unwrap();
        ensure!(!a.is_feasible() || b.is_feasible(), "{ws:?} {chi}: {t} semistable but {bigger} not");
        ensure!(a.is_feasible() == c.is_feasible(), "{ws:?} {chi}: scaling by {k} changes {t}");
        for (s, ch, cert) in [(&t, &chi, &a), (&bigger, &chi, &b), (&t, &scaled, &c)] {
            ensure!(substitute(&w, s, ch, cert), "{ws:?}: certificate for {s} fails");
        }
    }
    Ok("500 random (T, chi, k) triples: monotone, scale invariant, certificates verify".into())
}

fn count_by_facets(p: &LatticePolytope, t: i64) -> u64 {
    let n = p.ambient_dim();
    let lo: Vec<i64> = (0..n).map(|k| p.vertices().iter().map(|v| v[k]).min().unwrap() * t).collect();
    let hi: Vec<i64> = (0..n).map(|k| p.vertices().iter().map(|v| v[k]).max().unwrap() * t).collect();
    (0..n)
        .map(|k| lo[k]..=hi[k])
        .multi_cartesian_product()
        .filter(|x| p.facets().iter().all(|f| dot(&f.normal, x) >= f.offset * t))
        .count() as u64
}

fn volume_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut done = 0;
    while done < 50 {
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(dim + 1..=dim + 4);
        let pts: Vec<Vec<i64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0..=3)).collect()).collect();
        let p = LatticePolytope::from_points(dim, &pts).unwrap();
        if !p.is_full_dimensional() {
            continue;
        }
        done += 1;
        let ehr = p.ehrhart_polynomial().unwrap();
        let lex = p.normalized_volume_with(&VertexOrder::Lex).unwrap();
        let rev = p.normalized_volume_with(&VertexOrder::ReverseLex).unwrap();
        ensure!(lex == ehr.normalized_volume && rev == lex, "{pts:?}: {lex} / {rev} / {}", ehr.normalized_volume);
        for t in [4, 5] {
            let direct = count_by_facets(&p, t);
            let poly = ehr.evaluate(t);
            ensure!(poly == BigRational::from_integer(BigInt::from(direct)), "{pts:?}: Ehr({t}) = {poly}, count {direct}");
        }
    }
    Ok("50 random polytopes of dimension <= 3: triangulation volumes equal Ehrhart; extrapolated counts exact".into())
}

fn saturation_properties() -> Outcome {
    let (_, w, chi) = example();
    let window = Window::cube(2, 3);
    let points = window.characters(&[]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..100 {
        let s1: Vec<Character> = points.iter().filter(|_| rng.gen_bool(0.15)).cloned().collect();
        let mut s2 = s1.clone();
        s2.extend(points.iter().filter(|_| rng.gen_bool(0.1)).cloned());
        let c1 = saturate_generators(&w, &chi, &s1, &window).unwrap();
        let c2 = saturate_generators(&w, &chi, &s2, &window).unwrap();
        ensure!(c1.known.is_subset(&c2.known), "closure not monotone in the seed");
        let fixed: Vec<Character> = c1.known.iter().cloned().collect();
        let again = saturate_generators(&w, &chi, &fixed, &window).unwrap();
        ensure!(again.known == c1.known && again.log.is_empty(), "closure not idempotent");
    }
    Ok("100 random seeds: idempotent and seed-monotone".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 example pipeline", pipeline),
        ("2 semistability", semistability),
        ("3 K0 rank", k0_ranks),
        ("4 matrix factorization", matrix_factorization),
        ("5 invariant ring", invariant_ring),
        ("6 cokernel support", cokernel_support),
        ("7 saturation calibration", saturation_calibration),
        ("8a small quotients", small_dimension),
        ("8b unstable dimension oracle", oracle_equivalence),
        ("8c semistability monotonicity and scaling", monotonicity),
        ("8d Ehrhart and triangulation volumes", volume_agreement),
        ("8e saturation idempotence and monotonicity", saturation_properties),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
