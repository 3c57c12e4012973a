use num_bigint::BigInt;
use serde::Serialize;

use super::{
    is_generic, is_unimodular, unstable_dimension, GenericityReport, GitError, SupportSet,
    WeightConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NccrVerdict {
    #[serde(rename = "NCCR-guaranteed")]
    NccrGuaranteed,
    #[serde(rename = "criterion-fails")]
    CriterionFails,
    #[serde(rename = "hypotheses-fail")]
    HypothesesFail,
}

impl std::fmt::Display for NccrVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NccrVerdict::NccrGuaranteed => "NCCR-guaranteed",
            NccrVerdict::CriterionFails => "criterion-fails",
            NccrVerdict::HypothesesFail => "hypotheses-fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub unimodular: bool,
    /// Genericity in the operational sense of [`is_generic`].
    pub generic: bool,
    pub genericity: GenericityReport,
    pub dim_xu: usize,
    pub dim_g: usize,
    pub verdict: NccrVerdict,
    #[serde(serialize_with = "crate::io::ser::opt_big_vec")]
    pub witness_lambda: Option<Vec<BigInt>>,
    pub witness_support: Option<SupportSet>,
    /// Generic with `d − r <= 3`, where the criterion holds automatically.
    pub shortcut_applies: bool,
}

/// The NCCR existence criterion: unimodular, generic and
/// `dim X^u − dim G <= 1`.
pub fn nccr_criterion(w: &WeightConfig) -> Result<CriterionReport, GitError> {
    let unimodular = is_unimodular(w);
    let genericity = is_generic(w)?;
    let generic = genericity.generic;
    let u = unstable_dimension(w)?;
    let r = w.free_rank();
    let verdict = if !(unimodular && generic) {
        NccrVerdict::HypothesesFail
    } else if u.dim <= r + 1 {
        NccrVerdict::NccrGuaranteed
    } else {
        NccrVerdict::CriterionFails
    };
    Ok(CriterionReport {
        unimodular,
        generic,
        genericity,
        dim_xu: u.dim,
        dim_g: r,
        verdict,
        witness_lambda: u.lambda,
        witness_support: u.support,
        shortcut_applies: generic && w.len() <= r + 3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(r: usize, ws: &[&[i64]]) -> WeightConfig {
        WeightConfig::torus(r, &ws.iter().map(|w| w.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn example_has_nccr() {
        let w = torus(2, &[&[3, 0], &[1, 1], &[0, 3], &[-1, 0], &[-3, -3], &[0, -1]]);
        let rep = nccr_criterion(&w).unwrap();
        assert_eq!(rep.verdict, NccrVerdict::NccrGuaranteed);
        assert_eq!((rep.dim_xu, rep.dim_g), (3, 2));
        assert!(!rep.shortcut_applies);
    }

    #[test]
    fn conifold_has_nccr() {
        let rep = nccr_criterion(&torus(1, &[&[1], &[1], &[-1], &[-1]])).unwrap();
        assert_eq!(rep.verdict, NccrVerdict::NccrGuaranteed);
        assert!(rep.shortcut_applies);
    }

    #[test]
    fn non_unimodular_fails_hypotheses() {
        let rep = nccr_criterion(&torus(1, &[&[2], &[-1]])).unwrap();
        assert_eq!(rep.verdict, NccrVerdict::HypothesesFail);
        assert!(!rep.unimodular);
    }

    #[test]
    fn criterion_can_fail() {
        // three positive and three negative weights in rank one
        let rep = nccr_criterion(&torus(1, &[&[1], &[1], &[1], &[-1], &[-1], &[-1]])).unwrap();
        assert!(rep.unimodular && rep.generic);
        assert_eq!(rep.dim_xu, 3);
        assert_eq!(rep.verdict, NccrVerdict::CriterionFails);
    }
}
