//! LT-fibers: all elementary subalgebras of `u` whose leading-term set is a
//! prescribed commuting set, by exhaustive search or by scripted replay, and
//! their comparison with the predicted one-parameter families.

mod classify;
mod experiments;
mod replay;
mod search;
mod system;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::commuting::{p_rank, NamedSet};
use crate::error::{Error, Result};
use crate::nilradical::FieldSpec;
use crate::ordering::TotalOrder;
use crate::roots::RootSet;
use crate::subspace::{is_elementary, leading_terms, reduce_echelon, EchelonSubspace};

pub use classify::{classify_fiber, predicted_family, Classification, PredictedFamily};
pub use experiments::{
    dichotomy_check, dichotomy_verdict, sampled_lt_lemma_check, DichotomyReport, DichotomyVerdict, LtLemmaReport,
};
pub use replay::{gauge_for, Elimination, Gauge, ReplayTrace};

pub const DEFAULT_FIBER_BUDGET: u64 = 10_000_000;

/// Largest fiber the search will hold in memory.
pub const MAX_FIBER_SOLUTIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Search,
    Replay,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "search" => Ok(Strategy::Search),
            "replay" => Ok(Strategy::Replay),
            other => Err(Error::Parse(format!("strategy must be search or replay, got {other:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Search => "search",
            Strategy::Replay => "replay",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberProblem {
    #[serde(flatten)]
    pub field: FieldSpec,
    pub order: TotalOrder,
    pub pivots: RootSet,
    pub strategy: Strategy,
    /// Named case the pivots were given as; replay uses its gauge.
    pub case: Option<NamedSet>,
    pub budget: u64,
}

impl FiberProblem {
    pub fn new(field: &FieldSpec, order: &TotalOrder, pivots: RootSet, strategy: Strategy) -> Self {
        FiberProblem { field: *field, order: order.clone(), pivots, strategy, case: None, budget: DEFAULT_FIBER_BUDGET }
    }

    pub fn named(field: &FieldSpec, order: &TotalOrder, tag: NamedSet, strategy: Strategy) -> Result<Self> {
        let pivots = tag.resolve(field.rank())?;
        Ok(FiberProblem { case: Some(tag), ..Self::new(field, order, pivots, strategy) })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionSet {
    pub solutions: Vec<EchelonSubspace>,
    /// False when the search budget ran out or replay left a branch open.
    pub complete: bool,
    pub nodes: u64,
    pub propagations: u64,
    pub unknowns: usize,
    pub equations: usize,
    pub p_power_vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<ReplayTrace>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

pub fn lt_fiber(problem: &FiberProblem) -> Result<SolutionSet> {
    let rank = problem.field.rank();
    rank.check(problem.pivots.rank())?;
    rank.check(problem.order.rank())?;
    if !problem.pivots.is_commuting() {
        let v = problem.pivots.to_vec();
        let (a, b) = v
            .iter()
            .flat_map(|&a| v.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !crate::roots::commutes(a, b))
            .expect("a non-commuting pair exists");
        return Err(Error::NonCommutingPivots(a.to_string(), b.to_string()));
    }
    if problem.pivots.len() > p_rank(rank) {
        return Err(Error::Precondition(format!(
            "{} pivots exceed the p-rank {} of {rank}",
            problem.pivots.len(),
            p_rank(rank)
        )));
    }
    if let Some(tag) = problem.case {
        if tag.resolve(rank)? != problem.pivots {
            return Err(Error::Precondition(format!("pivots are not the named set {tag}")));
        }
    }
    let sys = system::System::build(&problem.field, &problem.order, &problem.pivots)?;
    let (raw, complete, nodes, propagations, replay) = match problem.strategy {
        Strategy::Search => {
            let out = search::search(&sys, problem.budget, MAX_FIBER_SOLUTIONS);
            (out.solutions, out.complete, out.nodes, out.propagations, None)
        }
        Strategy::Replay => {
            let out = replay::replay(&sys, problem.case)?;
            (out.solutions, out.complete, 0, out.propagations, Some(out.trace))
        }
    };
    let mut solutions = Vec::with_capacity(raw.len());
    for values in raw {
        let e = reduce_echelon(&problem.field, &sys.vectors(&values)?, &problem.order)?;
        assert!(
            is_elementary(&e) && leading_terms(&e) == problem.pivots,
            "solver returned a subspace outside the fiber"
        );
        solutions.push(e);
    }
    solutions.sort_by_key(canonical_key);
    let before = solutions.len();
    solutions.dedup_by(|a, b| canonical_key(a) == canonical_key(b));
    assert_eq!(before, solutions.len(), "solver returned duplicate subspaces");
    Ok(SolutionSet {
        solutions,
        complete,
        nodes,
        propagations,
        unknowns: sys.num_unknowns(),
        equations: sys.constraints.len(),
        p_power_vacuous: sys.p_power_vacuous,
        replay,
    })
}

/// Basis coefficients of the reduced echelon form; equal keys under the same
/// order mean equal subspaces.
pub(crate) fn canonical_key(e: &EchelonSubspace) -> Vec<Vec<u32>> {
    let mut key: Vec<Vec<u32>> = e.basis().iter().map(|v| v.coeffs().to_vec()).collect();
    key.sort();
    key
}

/// Number of free echelon coefficients for these pivots.
pub fn fiber_unknowns(field: &FieldSpec, order: &TotalOrder, pivots: &RootSet) -> Result<usize> {
    Ok(system::System::build(field, order, pivots)?.num_unknowns())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::paper_order;
    use crate::roots::Rank;

    fn setup(n: usize, p: u32) -> (FieldSpec, TotalOrder) {
        let rank = Rank::new(n).unwrap();
        (FieldSpec::new(p, rank).unwrap(), paper_order(rank).unwrap())
    }

    #[test]
    fn a5_fibers() {
        let (f, ord) = setup(5, 5);
        for (tag, count) in [(NamedSet::Rad(2), 1), (NamedSet::Rad(4), 1), (NamedSet::Odd, 5)] {
            for strategy in [Strategy::Search, Strategy::Replay] {
                let sols = lt_fiber(&FiberProblem::named(&f, &ord, tag, strategy).unwrap()).unwrap();
                assert!(sols.complete, "{tag} {strategy}");
                assert_eq!(sols.len(), count, "{tag} {strategy}");
            }
        }
    }

    #[test]
    fn non_commuting_pivots_rejected() {
        let (f, ord) = setup(3, 5);
        let bad = RootSet::parse(Rank::new(3).unwrap(), "1-2,2-3").unwrap();
        let err = lt_fiber(&FiberProblem::new(&f, &ord, bad, Strategy::Search)).unwrap_err();
        assert!(matches!(err, Error::NonCommutingPivots(_, _)));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let (f, ord) = setup(5, 5);
        let prob = FiberProblem::named(&f, &ord, NamedSet::Odd, Strategy::Search).unwrap().with_budget(1);
        let sols = lt_fiber(&prob).unwrap();
        assert!(!sols.complete);
    }
}
