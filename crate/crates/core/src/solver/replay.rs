//! Scripted elimination: fix the one-parameter gauge of a named fiber, then
//! let propagation alone force every other coefficient, one case at a time.

use serde::Serialize;

use super::system::{Cause, Origin, State, System};
use crate::actions::{apply, Automorphism};
use crate::commuting::NamedSet;
use crate::error::{Error, Result};
use crate::roots::{Rank, Root};
use crate::subspace::EchelonSubspace;

/// The coefficient that carries the family parameter `a` of
/// `exp(ad(a x_generator)) · Lie(R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Gauge {
    pub pivot: Root,
    pub coefficient: Root,
    pub generator: Root,
}

/// Gauge for each named case; `None` for the rigid radical cases.
pub fn gauge_for(tag: NamedSet, rank: Rank) -> Result<Option<Gauge>> {
    let n = rank.n();
    let m = n / 2;
    let root = |i: usize, j: usize| Root::new(i, j, rank);
    match tag {
        NamedSet::Rad(_) => {
            tag.resolve(rank)?;
            Ok(None)
        }
        NamedSet::Odd | NamedSet::EvHigh => {
            tag.resolve(rank)?;
            Ok(Some(Gauge { pivot: root(1, m + 1)?, coefficient: root(1, m + 2)?, generator: root(m + 1, m + 2)? }))
        }
        NamedSet::EvLow => {
            tag.resolve(rank)?;
            Ok(Some(Gauge { pivot: root(m + 1, m + 2)?, coefficient: root(m, m + 2)?, generator: root(m, m + 1)? }))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub coefficient: String,
    pub value: u32,
    pub by: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayTrace {
    pub case: String,
    pub gauge: Option<Gauge>,
    pub branches: usize,
    /// Branches in which propagation left some coefficient undetermined.
    pub stalled: usize,
    /// Coefficients zero in every solution.
    pub forced_zero: Vec<String>,
    /// Elimination sequence of the branch with parameter 1 (or the only branch).
    pub eliminations: Vec<Elimination>,
}

pub(crate) struct ReplayOutcome {
    pub solutions: Vec<Vec<u32>>,
    pub complete: bool,
    pub propagations: u64,
    pub trace: ReplayTrace,
}

fn describe_cause(sys: &System, cause: Cause) -> String {
    match cause {
        Cause::Decision => "gauge".to_string(),
        Cause::Linear => "linear combination".to_string(),
        Cause::Unit(c) => match sys.constraints[c].origin {
            Origin::Bracket { a, b, at } => format!("[y[{a}], y[{b}]] at {at}"),
            Origin::PPower { pivot, i, j } => format!("y[{pivot}]^p entry ({i},{j})"),
        },
    }
}

pub(crate) fn replay(sys: &System, case: Option<NamedSet>) -> Result<ReplayOutcome> {
    let rank = sys.field.rank();
    let gauge = match case {
        Some(tag) => gauge_for(tag, rank)?,
        None => None,
    };
    let gauge_var = match gauge {
        Some(g) => {
            let v = sys
                .vars
                .iter()
                .position(|info| sys.pivots[info.vector] == g.pivot && info.root == g.coefficient)
                .ok_or_else(|| Error::Precondition(format!("gauge coefficient {} of y[{}] is not free", g.coefficient, g.pivot)))?;
            check_gauge_moves(sys, g, v)?;
            Some(v)
        }
        None => None,
    };

    let mut st = State::new(sys);
    st.enqueue_all();
    let mut solutions = Vec::new();
    let mut stalled = 0;
    let mut eliminations = Vec::new();
    let root_ok = st.propagate_with_closure();
    let p = sys.field.p();
    let params: Vec<Option<u32>> = match gauge_var {
        Some(_) => (0..p).map(Some).collect(),
        None => vec![None],
    };
    let branches = params.len();
    if root_ok {
        for a in params {
            let mark = st.mark();
            let mut ok = true;
            if let (Some(v), Some(a)) = (gauge_var, a) {
                match st.values[v] {
                    Some(x) => ok = x == a,
                    None => {
                        st.assign(v, a, Cause::Decision);
                        ok = st.propagate_with_closure();
                    }
                }
            }
            if a.unwrap_or(1) == 1 {
                eliminations = st
                    .trail
                    .iter()
                    .map(|&(v, cause)| Elimination {
                        coefficient: sys.describe_var(v),
                        value: st.values[v].expect("on trail"),
                        by: describe_cause(sys, cause),
                    })
                    .collect();
            }
            if ok {
                if st.is_full() {
                    solutions.push(st.full_values());
                } else {
                    stalled += 1;
                }
            }
            st.undo_to(mark);
        }
    }
    let forced_zero = (0..sys.num_unknowns())
        .filter(|&v| !solutions.is_empty() && solutions.iter().all(|s| s[v] == 0))
        .map(|v| sys.describe_var(v))
        .collect();
    let trace = ReplayTrace {
        case: case.map_or_else(|| "generic".to_string(), |t| t.to_string()),
        gauge,
        branches,
        stalled,
        forced_zero,
        eliminations,
    };
    Ok(ReplayOutcome { solutions, complete: stalled == 0, propagations: st.propagations, trace })
}

/// The family member with parameter 1 must be nonzero at the gauge
/// coefficient, otherwise fixing it would not separate the family.
fn check_gauge_moves(sys: &System, g: Gauge, v: usize) -> Result<()> {
    let pivots = crate::roots::RootSet::from_roots(sys.field.rank(), sys.pivots.iter().copied())?;
    let base = EchelonSubspace::lie(&pivots, &sys.field, &sys.order)?;
    let moved = apply(&Automorphism::exp_ad(&sys.field, 1, g.generator)?, &base)?;
    let values = sys.values_of(moved.basis())?;
    if values[v] == 0 {
        return Err(Error::Precondition(format!("exp_ad along {} does not move {}", g.generator, sys.describe_var(v))));
    }
    Ok(())
}
