use serde::Serialize;

use super::{canonical_key, SolutionSet};
use crate::actions::{apply, Automorphism};
use crate::commuting::NamedSet;
use crate::error::{Error, Result};
use crate::nilradical::FieldSpec;
use crate::ordering::TotalOrder;
use crate::roots::{Rank, Root, RootSet};
use crate::subspace::{is_elementary, leading_terms, EchelonSubspace};

/// Expected fiber: `{Lie(R)}` or `{exp(ad(a x_α)) · Lie(R) : a ∈ F_p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictedFamily {
    Singleton { set: RootSet },
    ExpAd { set: RootSet, generator: Root },
}

impl PredictedFamily {
    pub fn set(&self) -> &RootSet {
        match self {
            PredictedFamily::Singleton { set } | PredictedFamily::ExpAd { set, .. } => set,
        }
    }

    /// Members in parameter order (one for a singleton, `p` otherwise).
    pub fn members(&self, field: &FieldSpec, order: &TotalOrder) -> Result<Vec<EchelonSubspace>> {
        let base = EchelonSubspace::lie(self.set(), field, order)?;
        match self {
            PredictedFamily::Singleton { .. } => Ok(vec![base]),
            PredictedFamily::ExpAd { generator, .. } => (0..field.p() as i64)
                .map(|a| apply(&Automorphism::exp_ad(field, a, *generator)?, &base))
                .collect(),
        }
    }
}

pub fn predicted_family(tag: NamedSet, rank: Rank) -> Result<PredictedFamily> {
    let set = tag.resolve(rank)?;
    Ok(match super::gauge_for(tag, rank)? {
        None => PredictedFamily::Singleton { set },
        Some(g) => PredictedFamily::ExpAd { set, generator: g.generator },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub family: PredictedFamily,
    pub expected: usize,
    pub found: usize,
    /// Every family member is elementary with the right leading terms.
    pub members_in_fiber: bool,
    /// The family parameter gives pairwise different subspaces.
    pub members_distinct: bool,
    pub missing: Vec<EchelonSubspace>,
    pub unexpected: Vec<EchelonSubspace>,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub fn classify_fiber(solutions: &SolutionSet, family: &PredictedFamily, field: &FieldSpec, order: &TotalOrder) -> Result<Classification> {
    if !solutions.complete {
        return Err(Error::Precondition("cannot classify an incomplete fiber".into()));
    }
    let members = family.members(field, order)?;
    let members_in_fiber = members.iter().all(|e| is_elementary(e) && leading_terms(e) == *family.set());
    let mut keys: Vec<_> = members.iter().map(canonical_key).collect();
    keys.sort();
    keys.dedup();
    let members_distinct = keys.len() == members.len();
    let found: Vec<_> = solutions.solutions.iter().map(canonical_key).collect();
    let missing: Vec<EchelonSubspace> = members.iter().filter(|e| !found.contains(&canonical_key(e))).cloned().collect();
    let unexpected: Vec<EchelonSubspace> =
        solutions.solutions.iter().filter(|e| keys.binary_search(&canonical_key(e)).is_err()).cloned().collect();
    let matches = members_in_fiber && members_distinct && missing.is_empty() && unexpected.is_empty();
    Ok(Classification {
        family: family.clone(),
        expected: members.len(),
        found: solutions.len(),
        members_in_fiber,
        members_distinct,
        missing,
        unexpected,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::paper_order;
    use crate::solver::{lt_fiber, FiberProblem, Strategy};

    #[test]
    fn a5_cases_match_their_families() {
        let rank = Rank::new(5).unwrap();
        let f = FieldSpec::new(5, rank).unwrap();
        let ord = paper_order(rank).unwrap();
        for tag in [NamedSet::Rad(2), NamedSet::Rad(4), NamedSet::Odd] {
            let fam = predicted_family(tag, rank).unwrap();
            let sols = lt_fiber(&FiberProblem::named(&f, &ord, tag, Strategy::Search).unwrap()).unwrap();
            let c = classify_fiber(&sols, &fam, &f, &ord).unwrap();
            assert!(c.matches, "{tag}: {c:?}");
        }
    }

    #[test]
    fn mismatch_is_reported_with_witnesses() {
        let rank = Rank::new(5).unwrap();
        let f = FieldSpec::new(5, rank).unwrap();
        let ord = paper_order(rank).unwrap();
        let sols = lt_fiber(&FiberProblem::named(&f, &ord, NamedSet::Odd, Strategy::Search).unwrap()).unwrap();
        let wrong = PredictedFamily::Singleton { set: *predicted_family(NamedSet::Odd, rank).unwrap().set() };
        let c = classify_fiber(&sols, &wrong, &f, &ord).unwrap();
        assert!(!c.matches);
        assert_eq!(c.unexpected.len(), 4);
        assert!(c.missing.is_empty());
    }
}
