//! Exhaustive DFS over the echelon unknowns.

use super::system::{Cause, State, System};

pub(crate) struct SearchOutcome {
    pub solutions: Vec<Vec<u32>>,
    pub complete: bool,
    pub nodes: u64,
    pub propagations: u64,
}

/// Stops with `complete = false` after `budget` nodes or once more than
/// `max_solutions` solutions have been collected.
pub(crate) fn search(sys: &System, budget: u64, max_solutions: usize) -> SearchOutcome {
    let mut st = State::new(sys);
    let mut out = SearchOutcome { solutions: Vec::new(), complete: true, nodes: 0, propagations: 0 };
    st.enqueue_all();
    if st.propagate_with_closure() {
        dfs(&mut st, budget, max_solutions, &mut out);
    }
    out.propagations = st.propagations;
    out
}

fn dfs(st: &mut State<'_>, budget: u64, max_solutions: usize, out: &mut SearchOutcome) {
    out.nodes += 1;
    if out.nodes > budget {
        out.complete = false;
        return;
    }
    let Some(v) = st.choose() else {
        debug_assert!(st.is_full());
        if out.solutions.len() >= max_solutions {
            out.complete = false;
        } else {
            out.solutions.push(st.full_values());
        }
        return;
    };
    let p = st.sys.field.p();
    for x in 0..p {
        let mark = st.mark();
        st.assign(v, x, Cause::Decision);
        if st.propagate_with_closure() {
            dfs(st, budget, max_solutions, out);
        }
        st.undo_to(mark);
        if !out.complete {
            return;
        }
    }
}
