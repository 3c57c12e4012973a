use serde::Serialize;

use super::DerivedError;
use crate::git::{Character, WeightConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduledCharacter {
    pub character: Character,
    /// 1-based index into the `μ` list.
    pub index: usize,
    pub j: u32,
    /// Power of `χ`: `l·j + m_i`.
    pub exponent: i64,
}

/// `μ_i + (l·j + m_i) χ` for `j = 0..=d`, ordered by exponent then `i`.
/// Requires `m_{i+1} − (m_i + l·d) >= gap`.
pub fn tilting_schedule(
    w: &WeightConfig,
    mus: &[Character],
    chi: &Character,
    l: i64,
    ms: &[i64],
    d: u32,
    gap: i64,
) -> Result<Vec<ScheduledCharacter>, DerivedError> {
    if l < 1 || gap < 1 {
        return Err(DerivedError::Gap(format!("l = {l} and gap = {gap} must be positive")));
    }
    if mus.len() != ms.len() {
        return Err(DerivedError::Gap(format!(
            "{} characters but {} offsets",
            mus.len(),
            ms.len()
        )));
    }
    let chi = w.character(chi.clone())?;
    let span = l.checked_mul(i64::from(d)).ok_or(DerivedError::Overflow)?;
    for (i, pair) in ms.windows(2).enumerate() {
        let end = pair[0].checked_add(span).ok_or(DerivedError::Overflow)?;
        if pair[1] - end < gap {
            return Err(DerivedError::Gap(format!(
                "m_{} = {} is within {gap} of m_{} + l·d = {end}",
                i + 2,
                pair[1],
                i + 1
            )));
        }
    }
    let mut out = Vec::new();
    for (i, (mu, &m)) in mus.iter().zip(ms).enumerate() {
        let mu = w.character(mu.clone())?;
        for j in 0..=d {
            let exponent = (l * i64::from(j)).checked_add(m).ok_or(DerivedError::Overflow)?;
            out.push(ScheduledCharacter {
                character: mu.add_scaled(&chi, exponent, w.torsion_orders()),
                index: i + 1,
                j,
                exponent,
            });
        }
    }
    out.sort_by_key(|s| (s.exponent, s.index));
    Ok(out)
}
