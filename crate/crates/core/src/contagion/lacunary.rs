//! One-dimensional analogue: where do generated sums of a lacunary sequence fall
//! relative to the gaps `(x_j / (1 + delta), x_j)` or `(x_j, (1 + delta) x_j)`?

use num::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{alt_representations, schur_representations, ContagionError, Representation, Result};
use crate::geometry::{self};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GapMode {
    /// Alternating sums against the intervals just below each `x_j`.
    BeforeGaps,
    /// Descendants against the intervals just above each `x_j`.
    AfterGaps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LacunaryEntry {
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    pub representation: Representation,
    pub generation: u32,
    /// 1-based index of the gap containing the value, if any.
    pub gap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LacunaryReport {
    pub mode: GapMode,
    pub pass: bool,
    pub checked: usize,
    pub outside: usize,
    pub entries: Vec<LacunaryEntry>,
}

fn gap_index(value: &Rational, xs: &[Rational], scale: &Rational, mode: GapMode) -> Option<usize> {
    xs.iter()
        .position(|x| match mode {
            GapMode::BeforeGaps => value < x && value * scale > *x,
            GapMode::AfterGaps => value > x && *value < x * scale,
        })
        .map(|i| i + 1)
}

/// Reports, point by point, whether generated sums land in the union of gaps.
///
/// `max_generation` bounds the descendants in `AfterGaps` mode; every
/// alternating sum is listed in `BeforeGaps` mode.
pub fn lacunary_gap_check(
    xs: &[Rational],
    delta: &Rational,
    mode: GapMode,
    max_generation: u32,
) -> Result<LacunaryReport> {
    if !delta.is_positive() {
        return Err(ContagionError::InvalidParameter("delta must be positive".into()));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_positive()) {
        return Err(ContagionError::InvalidParameter(format!("x = {x} is not positive")));
    }
    geometry::check_increasing(xs.iter())?;
    let scale = Rational::one() + delta;
    if let Some(w) = xs.windows(2).position(|w| w[1] < &w[0] * &scale) {
        return Err(ContagionError::SpacingViolated { position: w + 1 });
    }

    let reps: Vec<Representation> = match mode {
        GapMode::BeforeGaps => {
            let max_terms = if xs.len() % 2 == 1 { xs.len() } else { xs.len().saturating_sub(1) };
            alt_representations(xs.len(), max_terms.max(3))
        }
        GapMode::AfterGaps => schur_representations(xs.len(), max_generation),
    };
    let entries: Vec<LacunaryEntry> = reps
        .into_iter()
        .map(|r| {
            let value = r.evaluate(xs);
            LacunaryEntry {
                gap: gap_index(&value, xs, &scale, mode),
                generation: r.generation(),
                value,
                representation: r,
            }
        })
        .collect();
    let outside = entries.iter().filter(|e| e.gap.is_none()).count();
    Ok(LacunaryReport { mode, pass: outside == 0, checked: entries.len(), outside, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            lacunary_gap_check(&[int(1), ratio(3, 2)], &int(1), GapMode::AfterGaps, 2),
            Err(ContagionError::SpacingViolated { position: 1 })
        ));
        assert!(lacunary_gap_check(&ints(&[4, 1]), &int(1), GapMode::AfterGaps, 2).is_err());
        assert!(lacunary_gap_check(&ints(&[1, 4]), &int(0), GapMode::AfterGaps, 2).is_err());
        assert!(lacunary_gap_check(&ints(&[0, 4]), &int(1), GapMode::AfterGaps, 2).is_err());
    }

    #[test]
    fn short_sequences_are_vacuous_for_alternating_sums() {
        let r = lacunary_gap_check(&ints(&[1, 2]), &int(1), GapMode::BeforeGaps, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn after_gaps_report_lists_every_descendant() {
        let xs = ints(&[1, 4, 16]);
        let r = lacunary_gap_check(&xs, &int(1), GapMode::AfterGaps, 2).unwrap();
        // base 1: (n1, n2) with sum 1..=2 -> 5; base 2: n2 in 1..=2 -> 2; base 3: none
        assert_eq!(r.checked, 7);
        assert_eq!(r.outside, r.entries.iter().filter(|e| e.gap.is_none()).count());
        let first = &r.entries[0];
        // x_1 - dx_2 = 1 - 12
        assert_eq!(first.value, int(-11));
        assert_eq!(first.gap, None);
    }

    #[test]
    fn before_gaps_places_alternating_sums() {
        // 1 - 10 + 100 = 91 lies in (100/2, 100)
        let r = lacunary_gap_check(&ints(&[1, 10, 100]), &int(1), GapMode::BeforeGaps, 1).unwrap();
        assert_eq!(r.checked, 1);
        assert_eq!(r.entries[0].value, int(91));
        assert_eq!(r.entries[0].gap, Some(3));
        assert!(r.pass);
    }
}
