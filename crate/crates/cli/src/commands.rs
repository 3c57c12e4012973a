use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use toric_nccr::derived::{
    replay_saturation, saturate_generators_with, KoszulConvention, SaturationOptions, Window,
};
use toric_nccr::git::{
    chi_degeneracy, fiber_dimension_bound, nccr_criterion, Character, NccrVerdict, WeightConfig,
};
use toric_nccr::io::ser::{big_value, rat_value};
use toric_nccr::io::{
    FanDocument, MatrixFactorizationDocument, PolytopeDocument, WeightConfigDocument,
};
use toric_nccr::semigroup::{
    cokernel_unstable_check, covariant_generators_with, invariant_hilbert_basis,
    verify_matrix_factorization, CovariantConvention,
};
use toric_nccr::toric::{
    chamber_fan, k0_presentation, k0_rank, polytope_from_cone_section, stacky_fan_to_weights,
    weights_to_stacky_fan, LatticePolytope, StackyFan,
};

use crate::error::CliError;
use crate::report::Report;

pub fn read_input(path: &Path) -> Result<(String, Value), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::NoInput(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok((text, value))
}

fn load_weights(path: &Path) -> Result<(WeightConfigDocument, WeightConfig, Report), CliError> {
    let (text, value) = read_input(path)?;
    let doc = WeightConfigDocument::from_json(&text)?;
    let w = doc.config()?;
    Ok((doc, w, Report::new("", path, value)))
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{what}: {x:?} is not an integer")))
        })
        .collect()
}

/// `"1,-2"` or, with torsion, `"1,-2;1"`.
pub fn parse_character(s: &str, what: &str) -> Result<Character, CliError> {
    let (free, torsion) = s.split_once(';').unwrap_or((s, ""));
    Ok(Character {
        free: parse_ints(free, what)?,
        torsion: parse_ints(torsion, what)?,
    })
}

/// `"-4:4"` for a cube, or `"lo1,lo2:hi1,hi2"`.
pub fn parse_window(s: &str, rank: usize) -> Result<Window, CliError> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("window {s:?} is not of the form lo:hi")))?;
    let lo = parse_ints(lo, "window")?;
    let hi = parse_ints(hi, "window")?;
    let widen = |v: Vec<i64>| if v.len() == 1 { vec![v[0]; rank] } else { v };
    Ok(Window {
        lo: widen(lo),
        hi: widen(hi),
    })
}

fn chi_for(
    doc: &WeightConfigDocument,
    w: &WeightConfig,
    flag: Option<&str>,
) -> Result<Option<Character>, CliError> {
    match flag {
        Some(s) => Ok(Some(w.character(parse_character(s, "chi")?)?)),
        None => Ok(doc.chi(w)?),
    }
}

fn monomial(exponents: &[u32], labels: &[String]) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .zip(labels)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, x)| if e == 1 { x.clone() } else { format!("{x}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn labels(doc: &WeightConfigDocument) -> Vec<String> {
    doc.labels
        .clone()
        .unwrap_or_else(|| (1..=doc.weights.len()).map(|i| format!("x{i}")).collect())
}

pub fn check(path: &Path, chi_flag: Option<&str>) -> Result<Report, CliError> {
    let (doc, w, mut rep) = load_weights(path)?;
    rep.command = "check";
    let chi = chi_for(&doc, &w, chi_flag)?;
    let crit = rep.timed("criterion", || nccr_criterion(&w))?;

    let mut reasons = Vec::new();
    if !crit.unimodular {
        reasons.push("not unimodular".to_string());
    }
    reasons.extend(crit.genericity.reasons.iter().cloned());
    let margin = crit.dim_xu as i64 - crit.dim_g as i64;
    if crit.verdict == NccrVerdict::CriterionFails {
        reasons.push(format!("dim X^u - dim G = {margin} exceeds 1"));
    }
    rep.set("unimodular", crit.unimodular);
    rep.set("genericity", &crit.genericity);
    rep.set(
        "unstable_dimension",
        json!({
            "dim": crit.dim_xu,
            "lambda": crit.witness_lambda.as_ref().map(|l| l.iter().map(big_value).collect::<Vec<_>>()),
            "support": crit.witness_support,
        }),
    );
    rep.set(
        "criterion",
        json!({
            "verdict": crit.verdict,
            "dim_xu": crit.dim_xu,
            "dim_g": crit.dim_g,
            "margin": margin,
            "shortcut_applies": crit.shortcut_applies,
            "reasons": reasons,
        }),
    );
    rep.line("unimodular", crit.unimodular);
    rep.line("generic", crit.generic);
    rep.line("dim X^u", crit.dim_xu);
    rep.line("dim G", crit.dim_g);
    rep.line("verdict", crit.verdict);
    for r in &reasons {
        rep.line("reason", r);
    }

    if let Some(chi) = &chi {
        let flat = rep.timed("chi_generic", || chi_degeneracy(&w, chi))?;
        let fiber = rep.timed("fiber_bound", || fiber_dimension_bound(&w, chi))?;
        rep.set(
            "chi",
            json!({
                "character": chi,
                "generic": flat.is_none(),
                "degenerate_flat": flat,
                "fiber_bound": fiber,
            }),
        );
        rep.line("chi", chi);
        rep.line("chi generic", flat.is_none());
        rep.line("fiber bound", fiber.bound);
        if let Some(gens) = doc.ideal_exponents()? {
            let cok = rep.timed("cokernel", || cokernel_unstable_check(&w, chi, &gens))?;
            rep.line("cokernel unstable", cok.unstable);
            rep.set("cokernel", cok);
        }
    }
    rep.exit = match crit.verdict {
        NccrVerdict::NccrGuaranteed => 0,
        NccrVerdict::CriterionFails => 1,
        NccrVerdict::HypothesesFail => 2,
    };
    Ok(rep)
}

fn polytope_summary(rep: &mut Report, p: &LatticePolytope) -> Result<(), CliError> {
    let ehr = rep.timed("ehrhart", || p.ehrhart_polynomial())?;
    let vol = rep.timed("triangulation", || p.normalized_volume())?;
    if vol != ehr.normalized_volume {
        return Err(CliError::Refused(format!(
            "triangulation volume {vol} disagrees with Ehrhart volume {}",
            ehr.normalized_volume
        )));
    }
    rep.set("rank", big_value(&vol));
    rep.set("volume", rat_value(ehr.leading_coefficient()));
    rep.set("normalized_volume", big_value(&vol));
    rep.set("ehrhart", &ehr);
    rep.set("polytope", json!({ "dim": p.dim(), "vertices": p.vertices() }));
    rep.line("polytope dim", p.dim());
    rep.line("volume", rat_value(ehr.leading_coefficient()).to_string().trim_matches('"'));
    rep.line("rank", &vol);
    Ok(())
}

fn fan_summary(rep: &mut Report, fan: &StackyFan) -> Result<(), CliError> {
    let p = polytope_from_cone_section(fan)?;
    polytope_summary(rep, &p)?;
    let rank = k0_rank(fan)?;
    rep.set("fan", FanDocument::from_fan(fan));
    rep.set("presentation", k0_presentation(fan));
    rep.line("K0 rank", rank);
    Ok(())
}

pub fn k0(path: &Path, chi_flag: Option<&str>) -> Result<Report, CliError> {
    let (text, value) = read_input(path)?;
    let mut rep = Report::new("k0", path, value.clone());
    if value.get("weights").is_some() {
        let doc = WeightConfigDocument::from_json(&text)?;
        let w = doc.config()?;
        let fan = rep.timed("fan", || weights_to_stacky_fan(&w))?;
        fan_summary(&mut rep, &fan)?;
        if let Some(chi) = chi_for(&doc, &w, chi_flag)? {
            let ch = rep.timed("chamber", || chamber_fan(&w, &chi))?;
            let pres = k0_presentation(&ch);
            rep.set(
                "chamber",
                json!({
                    "chi": chi,
                    "fan": FanDocument::from_fan(&ch),
                    "simplicial_rank": pres.simplicial_rank.as_ref().map(big_value),
                }),
            );
            if let Some(r) = &pres.simplicial_rank {
                rep.line("chamber rank", r);
            }
        }
    } else if value.get("rays").is_some() {
        let fan = FanDocument::from_json(&text)?.fan()?;
        fan_summary(&mut rep, &fan)?;
    } else if value.get("points").is_some() {
        let p = PolytopeDocument::from_json(&text)?.polytope()?;
        polytope_summary(&mut rep, &p)?;
    } else {
        return Err(CliError::Usage(
            "expected a weight, fan or polytope document".into(),
        ));
    }
    Ok(rep)
}

pub fn hilbert(path: &Path, bound: Option<u32>) -> Result<Report, CliError> {
    let (doc, w, mut rep) = load_weights(path)?;
    rep.command = "hilbert";
    let bound = match bound {
        Some(b) => b,
        None => {
            let b = toric_nccr::semigroup::hilbert_degree_bound(&w)?;
            u32::try_from(b.max(1)).map_err(|_| CliError::Oversized(format!("degree bound {b}")))?
        }
    };
    let hb = rep.timed("hilbert_basis", || invariant_hilbert_basis(&w, bound))?;
    let names = labels(&doc);
    let monomials: Vec<String> = hb.generators.iter().map(|g| monomial(g, &names)).collect();
    rep.line("generators", hb.generators.len());
    rep.line("degree bound", hb.degree_bound);
    rep.line("a priori bound", hb.a_priori_bound);
    rep.line("complete", hb.complete);
    for m in &monomials {
        rep.line("generator", m);
    }
    rep.set("count", hb.generators.len());
    rep.set("monomials", monomials);
    rep.set("basis", hb);
    Ok(rep)
}

pub fn covariants(
    path: &Path,
    mu: &str,
    bound: u32,
    convention: CovariantConvention,
) -> Result<Report, CliError> {
    let (doc, w, mut rep) = load_weights(path)?;
    rep.command = "covariants";
    let mu = w.character(parse_character(mu, "mu")?)?;
    let gens = rep.timed("covariants", || covariant_generators_with(&w, &mu, bound, convention))?;
    let names = labels(&doc);
    let monomials: Vec<String> = gens.iter().map(|g| monomial(g, &names)).collect();
    rep.line("mu", &mu);
    rep.line("generators", gens.len());
    rep.line("monomials", monomials.join(", "));
    rep.set("mu", &mu);
    rep.set("convention", convention);
    rep.set("degree_bound", bound);
    rep.set("count", gens.len());
    rep.set("generators", gens);
    rep.set("monomials", monomials);
    Ok(rep)
}

pub struct SaturateArgs<'a> {
    pub seed: &'a str,
    pub chi: Option<&'a str>,
    pub window: &'a str,
    pub convention: KoszulConvention,
    pub log: Option<&'a PathBuf>,
}

pub fn saturate(path: &Path, args: &SaturateArgs<'_>) -> Result<Report, CliError> {
    let (doc, w, mut rep) = load_weights(path)?;
    rep.command = "saturate";
    let chi = chi_for(&doc, &w, args.chi)?
        .ok_or_else(|| CliError::Usage("no chi in the document and no --chi given".into()))?;
    let seed = doc.character_set(&w, args.seed)?;
    let window = parse_window(args.window, w.free_rank())?;
    let opts = SaturationOptions {
        convention: args.convention,
        ..Default::default()
    };
    let state = rep.timed("saturation", || saturate_generators_with(&w, &chi, &seed, &window, &opts))?;
    let replay = rep.timed("replay", || replay_saturation(&w, &seed, &state))?;
    rep.line("seed", format!("{} ({} characters)", args.seed, seed.len()));
    rep.line("closure", state.known.len());
    rep.line("added", state.log.len());
    rep.line("replay", replay);
    if doc.character_sets.contains_key("cm_weights") {
        let cm = doc.character_set(&w, "cm_weights")?;
        let missing: Vec<&Character> = cm.iter().filter(|c| !state.known.contains(*c)).collect();
        rep.line("cm weights covered", format!("{}/{}", cm.len() - missing.len(), cm.len()));
        rep.set(
            "cm_weights",
            json!({ "total": cm.len(), "contained": missing.is_empty(), "missing": missing }),
        );
    }
    if let Some(p) = args.log {
        let mut f = std::fs::File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
        for step in &state.log {
            let line = serde_json::to_string(step).expect("json");
            writeln!(f, "{line}").map_err(|e| CliError::Output(e.to_string()))?;
        }
    }
    rep.set("seed", args.seed);
    rep.set("chi", &chi);
    rep.set("count", state.known.len());
    rep.set("replay_ok", replay);
    rep.set("state", &state);
    if !replay {
        rep.exit = 1;
    }
    Ok(rep)
}

pub struct MfOverrides<'a> {
    pub d0: Option<&'a str>,
    pub d1: Option<&'a str>,
    pub f: Option<&'a str>,
}

pub fn verify_mf(path: &Path, o: &MfOverrides<'_>) -> Result<Report, CliError> {
    let (text, value) = read_input(path)?;
    let mut rep = Report::new("verify-mf", path, value);
    let mut doc = MatrixFactorizationDocument::from_json(&text)?;
    let matrix = |s: &str, name: &str| -> Result<Vec<Vec<String>>, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
    };
    if let Some(s) = o.d0 {
        doc.d0 = matrix(s, "d0")?;
    }
    if let Some(s) = o.d1 {
        doc.d1 = matrix(s, "d1")?;
    }
    if let Some(s) = o.f {
        doc.f = s.to_string();
    }
    let (d0, d1, f) = doc.parse()?;
    let r = rep.timed("verify", || verify_matrix_factorization(&d0, &d1, &f))?;
    rep.line("f", &f);
    rep.line("result", if r.passes { "pass" } else { "fail" });
    if let Some((i, j)) = r.first_mismatch {
        rep.line("first mismatch", format!("({i},{j})"));
    }
    rep.set("f", f.to_string());
    rep.set("result", if r.passes { "pass" } else { "fail" });
    rep.exit = if r.passes { 0 } else { 1 };
    rep.set("report", r);
    Ok(rep)
}

pub fn fan(path: &Path, chi_flag: Option<&str>) -> Result<Report, CliError> {
    let (text, value) = read_input(path)?;
    let mut rep = Report::new("fan", path, value.clone());
    if value.get("weights").is_some() {
        let doc = WeightConfigDocument::from_json(&text)?;
        let w = doc.config()?;
        let fan = rep.timed("fan", || weights_to_stacky_fan(&w))?;
        rep.line("lattice rank", fan.lattice_rank());
        rep.line("rays", fan.rays().len());
        rep.set("fan", FanDocument::from_fan(&fan));
        if let Some(chi) = chi_for(&doc, &w, chi_flag)? {
            let ch = rep.timed("chamber", || chamber_fan(&w, &chi))?;
            let cones: Vec<String> = ch.cones().iter().map(ToString::to_string).collect();
            rep.line("chamber cones", cones.join(" "));
            rep.set("chamber_fan", FanDocument::from_fan(&ch));
        }
    } else if value.get("rays").is_some() {
        let fan = FanDocument::from_json(&text)?.fan()?;
        let w = rep.timed("weights", || stacky_fan_to_weights(&fan))?;
        let ws: Vec<String> = w.weights().iter().map(ToString::to_string).collect();
        rep.line("rank", w.free_rank());
        rep.line("torsion", format!("{:?}", w.torsion_orders()));
        rep.line("weights", ws.join(" "));
        rep.set("weights", WeightConfigDocument::from_config(&w, None));
    } else {
        return Err(CliError::Usage("expected a weight or fan document".into()));
    }
    Ok(rep)
}
