//! Signed integer combinations and the partial-sum description of descendants.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{schur_representations, PointSequence, Representation};
use crate::geometry::PlanePoint;

/// `sum eps_i x_i` with its coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedCombination {
    pub epsilons: Vec<i64>,
    pub value: PlanePoint,
}

impl SignedCombination {
    pub fn new(seq: &PointSequence, epsilons: Vec<i64>) -> Self {
        let value = seq.combine(&epsilons);
        SignedCombination { epsilons, value }
    }
}

/// The four partial-sum conditions, evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EpsilonConditions {
    pub full_sum_is_one: bool,
    pub partials_nonnegative: bool,
    pub positive_after_first_positive: bool,
    pub some_partial_exceeds_one: bool,
}

impl EpsilonConditions {
    pub fn all(&self) -> bool {
        self.full_sum_is_one
            && self.partials_nonnegative
            && self.positive_after_first_positive
            && self.some_partial_exceeds_one
    }
}

pub fn epsilon_conditions(eps: &[i64]) -> EpsilonConditions {
    let mut partial = 0i64;
    let mut seen_positive = false;
    let mut c = EpsilonConditions {
        full_sum_is_one: false,
        partials_nonnegative: true,
        positive_after_first_positive: true,
        some_partial_exceeds_one: false,
    };
    for e in eps {
        partial += e;
        if partial < 0 {
            c.partials_nonnegative = false;
        }
        if seen_positive && partial <= 0 {
            c.positive_after_first_positive = false;
        }
        if partial > 0 {
            seen_positive = true;
        }
        if partial > 1 {
            c.some_partial_exceeds_one = true;
        }
    }
    c.full_sum_is_one = partial == 1;
    c
}

/// Every `eps` in `{-1, 0, 1}^J` meeting the four conditions, in lexicographic order.
pub fn enumerate_s(seq: &PointSequence) -> Vec<SignedCombination> {
    let len = seq.len();
    let mut out = Vec::new();
    let mut eps = vec![-1i64; len];
    if len == 0 {
        return out;
    }
    loop {
        if epsilon_conditions(&eps).all() {
            out.push(SignedCombination::new(seq, eps.clone()));
        }
        // odometer over {-1, 0, 1}
        let mut k = len;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if eps[k] < 1 {
                eps[k] += 1;
                break;
            }
            eps[k] = -1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum Discrepancy {
    /// A descendant whose coefficient vector breaks one of the conditions.
    RepresentationFails {
        representation: Representation,
        epsilons: Vec<i64>,
        conditions: EpsilonConditions,
    },
    /// A qualifying coefficient vector that no descendant within the search bound produces.
    EpsilonUnmatched {
        epsilons: Vec<i64>,
        value: PlanePoint,
        search_generation: u32,
    },
    /// Matched representations that disagree on the point value.
    ValueMismatch {
        representation: Representation,
        epsilons: Vec<i64>,
        representation_value: PlanePoint,
        epsilon_value: PlanePoint,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub pass: bool,
    pub coefficient_bound: i64,
    pub max_generation: u32,
    pub search_generation: u32,
    pub representations_checked: usize,
    pub epsilons_checked: usize,
    pub matched_pairs: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Cross-checks the descendant representations against the partial-sum conditions.
///
/// Every descendant of generation at most `max_generation` must meet the four
/// conditions. Every vector with `|eps_i| <= bound` that meets them must come
/// from some descendant; the search depth is raised until that is decidable,
/// since partial sums of such vectors are at most `bound * m`.
pub fn check_epsilon_equivalence(seq: &PointSequence, bound: i64, max_generation: u32) -> EquivalenceReport {
    let len = seq.len();
    let needed: i64 = (1..len as i64).map(|m| (bound * m - 1).max(0)).sum();
    let search_generation = max_generation.max(needed as u32);
    let mut discrepancies = Vec::new();

    let mut by_epsilon: BTreeMap<Vec<i64>, Representation> = BTreeMap::new();
    let mut checked = 0usize;
    for rep in schur_representations(len, search_generation) {
        let eps = rep.epsilons(len);
        if rep.generation() <= max_generation {
            checked += 1;
            let conditions = epsilon_conditions(&eps);
            if !conditions.all() {
                discrepancies.push(Discrepancy::RepresentationFails {
                    representation: rep.clone(),
                    epsilons: eps.clone(),
                    conditions,
                });
            }
        }
        by_epsilon.entry(eps).or_insert(rep);
    }

    let mut matched = 0usize;
    let mut epsilons_checked = 0usize;
    if len > 0 && bound >= 0 {
        let mut eps = vec![-bound; len];
        'outer: loop {
            if epsilon_conditions(&eps).all() {
                epsilons_checked += 1;
                let value = seq.combine(&eps);
                match by_epsilon.get(&eps) {
                    Some(rep) => {
                        let rep_value = rep.evaluate(seq.points());
                        if rep_value != value {
                            discrepancies.push(Discrepancy::ValueMismatch {
                                representation: rep.clone(),
                                epsilons: eps.clone(),
                                representation_value: rep_value,
                                epsilon_value: value.clone(),
                            });
                        } else {
                            matched += 1;
                        }
                    }
                    None => discrepancies.push(Discrepancy::EpsilonUnmatched {
                        epsilons: eps.clone(),
                        value: value.clone(),
                        search_generation,
                    }),
                }
            }
            let mut k = len;
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                if eps[k] < bound {
                    eps[k] += 1;
                    break;
                }
                eps[k] = -bound;
            }
        }
    }

    EquivalenceReport {
        pass: discrepancies.is_empty(),
        coefficient_bound: bound,
        max_generation,
        search_generation,
        representations_checked: checked,
        epsilons_checked,
        matched_pairs: matched,
        discrepancies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contagion::enumerate_schur;
    use crate::geometry::CurveFamily;
    use crate::rational::int;
    use std::collections::BTreeSet;

    fn parabola_seq(us: &[i64]) -> PointSequence {
        let us: Vec<_> = us.iter().map(|&u| int(u)).collect();
        PointSequence::on_curve(&CurveFamily::unit_parabola(), &us).unwrap()
    }

    #[test]
    fn s_examples() {
        assert!(enumerate_s(&parabola_seq(&[0, 1])).is_empty());
        let s = enumerate_s(&parabola_seq(&[0, 1, 2]));
        assert!(s.iter().any(|c| c.epsilons == vec![1, 1, -1]));
        assert!(!s.iter().any(|c| c.epsilons == vec![1, -1, 1]));
        let c = s.iter().find(|c| c.epsilons == vec![1, 1, -1]).unwrap();
        assert_eq!(c.value, PlanePoint::from_ints(-1, -3));
    }

    #[test]
    fn conditions_by_hand() {
        assert!(epsilon_conditions(&[1, 1, -1]).all());
        assert!(!epsilon_conditions(&[1, -1, 1]).some_partial_exceeds_one);
        assert!(!epsilon_conditions(&[1, 0, 0]).some_partial_exceeds_one);
        assert!(epsilon_conditions(&[2, -1]).all());
        assert!(!epsilon_conditions(&[-1, 2]).partials_nonnegative);
        assert!(!epsilon_conditions(&[1, -1, 2, -1]).positive_after_first_positive);
    }

    #[test]
    fn s_values_are_descendants() {
        let seq = parabola_seq(&[0, 1, 3, 4]);
        let schur: BTreeSet<_> = enumerate_schur(&seq, 6).into_iter().map(|g| g.point).collect();
        for c in enumerate_s(&seq) {
            assert!(schur.contains(&c.value), "{:?}", c.epsilons);
        }
    }

    #[test]
    fn equivalence_on_small_parabola() {
        let r = check_epsilon_equivalence(&parabola_seq(&[0, 1, 2]), 3, 3);
        assert!(r.pass, "{:?}", r.discrepancies);
        assert!(r.epsilons_checked > 0);
        assert_eq!(r.matched_pairs, r.epsilons_checked);

        let r = check_epsilon_equivalence(&parabola_seq(&[0, 1]), 3, 3);
        assert!(r.pass);
        assert!(r.matched_pairs >= 1);
    }

    #[test]
    fn search_depth_covers_the_coefficient_bound() {
        // partial sums reach 3 and 6, so generations up to 2 + 5 are needed
        let seq = parabola_seq(&[0, 1, 2]);
        let r = check_epsilon_equivalence(&seq, 3, 3);
        assert!(r.search_generation >= 7);
        assert_eq!(r.representations_checked, enumerate_schur(&seq, 3).len());
    }
}
