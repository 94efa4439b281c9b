//! The polynomial system of an LT-fiber: unknown echelon coefficients, the
//! bracket and `p`-power equations they satisfy, and a propagation engine.

use crate::error::{Error, Result};
use crate::field::{rref_with_columns, Fp};
use crate::nilradical::{FieldSpec, UVector};
use crate::ordering::TotalOrder;
use crate::roots::{positive_roots, structure_constant, Root, RootSet};

pub(crate) type Var = usize;

/// A coefficient of the echelon template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Entry {
    Zero,
    One,
    Var(Var),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Term {
    pub coef: u32,
    /// Sorted, distinct.
    pub vars: Vec<Var>,
}

/// Multilinear polynomial over `F_p`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Poly {
    pub terms: Vec<Term>,
}

impl Poly {
    fn push(&mut self, coef: u32, mut vars: Vec<Var>) {
        vars.sort_unstable();
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "monomial is not multilinear");
        self.terms.push(Term { coef, vars });
    }

    fn normalize(&mut self, fp: Fp) {
        self.terms.sort_by(|a, b| a.vars.cmp(&b.vars));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.vars == t.vars => last.coef = fp.add(last.coef, t.coef),
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0);
        self.terms = merged;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.iter().flat_map(|t| t.vars.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Where an equation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Origin {
    /// Coordinate `at` of `[y_a, y_b]`, vectors named by their pivots.
    Bracket { a: Root, b: Root, at: Root },
    /// Matrix entry `(i, j)` of `y^p`.
    PPower { pivot: Root, i: u8, j: u8 },
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub poly: Poly,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct VarInfo {
    /// Index into `System::pivots`.
    pub vector: usize,
    pub root: Root,
}

pub(crate) struct System {
    pub field: FieldSpec,
    pub order: TotalOrder,
    /// Pivots in descending order; vector `k` has leading root `pivots[k]`.
    pub pivots: Vec<Root>,
    /// `entries[k][root index]`.
    pub entries: Vec<Vec<Entry>>,
    pub vars: Vec<VarInfo>,
    pub constraints: Vec<Constraint>,
    occurrences: Vec<Vec<usize>>,
    pub p_power_vacuous: bool,
}

impl System {
    pub fn build(field: &FieldSpec, order: &TotalOrder, pivots: &RootSet) -> Result<Self> {
        let rank = field.rank();
        rank.check(order.rank())?;
        rank.check(pivots.rank())?;
        let mut pv: Vec<Root> = pivots.to_vec();
        pv.sort_by(|a, b| order.cmp_roots(*b, *a));
        let roots = positive_roots(rank);
        let mut vars = Vec::new();
        let mut entries = Vec::with_capacity(pv.len());
        for (k, &pi) in pv.iter().enumerate() {
            let row = roots
                .iter()
                .map(|&beta| {
                    if beta == pi {
                        Entry::One
                    } else if pivots.contains(beta) || !order.greater(pi, beta) {
                        Entry::Zero
                    } else {
                        vars.push(VarInfo { vector: k, root: beta });
                        Entry::Var(vars.len() - 1)
                    }
                })
                .collect();
            entries.push(row);
        }
        let mut sys = System {
            field: *field,
            order: order.clone(),
            pivots: pv,
            entries,
            vars,
            constraints: Vec::new(),
            occurrences: Vec::new(),
            p_power_vacuous: true,
        };
        sys.add_bracket_constraints(&roots);
        sys.add_p_power_constraints();
        sys.occurrences = vec![Vec::new(); sys.vars.len()];
        for (c, con) in sys.constraints.iter().enumerate() {
            for v in con.poly.vars() {
                sys.occurrences[v].push(c);
            }
        }
        Ok(sys)
    }

    fn entry(&self, k: usize, r: Root) -> Entry {
        self.entries[k][self.field.rank().index_of(r)]
    }

    fn add_bracket_constraints(&mut self, roots: &[Root]) {
        let fp = self.field.fp();
        let rank = self.field.rank();
        let d = self.pivots.len();
        for k in 0..d {
            for l in k + 1..d {
                let mut by_target: Vec<Poly> = vec![Poly::default(); rank.num_positive()];
                for &alpha in roots {
                    let ea = self.entry(k, alpha);
                    if ea == Entry::Zero {
                        continue;
                    }
                    for &beta in roots {
                        let Some(gamma) = alpha.sum(beta) else { continue };
                        let eb = self.entry(l, beta);
                        if eb == Entry::Zero {
                            continue;
                        }
                        let coef = fp.from_i64(structure_constant(alpha, beta) as i64);
                        let vars = [ea, eb].iter().filter_map(|e| if let Entry::Var(v) = e { Some(*v) } else { None }).collect();
                        by_target[rank.index_of(gamma)].push(coef, vars);
                    }
                }
                for (t, mut poly) in by_target.into_iter().enumerate() {
                    poly.normalize(fp);
                    if !poly.is_zero() {
                        let origin = Origin::Bracket { a: self.pivots[k], b: self.pivots[l], at: rank.root_at(t) };
                        self.constraints.push(Constraint { poly, origin });
                    }
                }
            }
        }
    }

    /// Entry `(i, j)` of `y^p` is the sum over chains `i = j_0 < … < j_p = j`
    /// of the products of the coefficients at `(j_t, j_{t+1})`; within one
    /// vector these are distinct roots, so every monomial is multilinear.
    fn add_p_power_constraints(&mut self) {
        let fp = self.field.fp();
        let p = self.field.p() as usize;
        let dim = self.field.rank().dim();
        for k in 0..self.pivots.len() {
            for i in 1..=dim {
                for j in i + p..=dim {
                    let mut poly = Poly::default();
                    let mut chain = vec![i];
                    self.chains(k, j, p, &mut chain, &mut Vec::new(), &mut poly);
                    poly.normalize(fp);
                    if !poly.is_zero() {
                        self.p_power_vacuous = false;
                        let origin = Origin::PPower { pivot: self.pivots[k], i: i as u8, j: j as u8 };
                        self.constraints.push(Constraint { poly, origin });
                    }
                }
            }
        }
    }

    fn chains(&self, k: usize, end: usize, steps: usize, chain: &mut Vec<usize>, vars: &mut Vec<Var>, out: &mut Poly) {
        let here = *chain.last().expect("chain starts nonempty");
        if steps == 0 {
            if here == end {
                out.push(1, vars.clone());
            }
            return;
        }
        // Leave room for the remaining steps.
        for next in here + 1..=end + 1 - steps {
            let e = self.entry(k, Root::new_unchecked(here, next));
            if e == Entry::Zero {
                continue;
            }
            let pushed = if let Entry::Var(v) = e {
                vars.push(v);
                true
            } else {
                false
            };
            chain.push(next);
            self.chains(k, end, steps - 1, chain, vars, out);
            chain.pop();
            if pushed {
                vars.pop();
            }
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.vars.len()
    }

    /// Basis vectors for a full assignment.
    pub fn vectors(&self, values: &[u32]) -> Result<Vec<UVector>> {
        self.entries
            .iter()
            .map(|row| {
                let coeffs = row
                    .iter()
                    .map(|e| match e {
                        Entry::Zero => 0,
                        Entry::One => 1,
                        Entry::Var(v) => values[*v],
                    })
                    .collect();
                self.field.vector_from_coeffs(coeffs)
            })
            .collect()
    }

    /// Values of the unknowns for a subspace with these pivots, read off its
    /// reduced echelon basis.
    pub fn values_of(&self, basis: &[UVector]) -> Result<Vec<u32>> {
        let rank = self.field.rank();
        let mut by_pivot = Vec::with_capacity(self.pivots.len());
        for &pi in &self.pivots {
            let v = basis
                .iter()
                .find(|v| self.order.leading_root(v).ok() == Some(pi))
                .ok_or_else(|| Error::Precondition(format!("no basis vector with pivot {pi}")))?;
            by_pivot.push(v);
        }
        Ok(self.vars.iter().map(|info| by_pivot[info.vector].coeffs()[rank.index_of(info.root)]).collect())
    }

    pub fn describe_var(&self, v: Var) -> String {
        let info = self.vars[v];
        format!("y[{}]@{}", self.pivots[info.vector], info.root)
    }
}

/// Outcome of evaluating one equation under a partial assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Eval {
    Satisfied,
    Conflict,
    /// Affine in a single unknown with nonzero slope; forces its value.
    Unit(Var, u32),
    Open,
}

/// Why an unknown received its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cause {
    Decision,
    Unit(usize),
    Linear,
}

pub(crate) struct State<'a> {
    pub sys: &'a System,
    pub values: Vec<Option<u32>>,
    pub trail: Vec<(Var, Cause)>,
    pub propagations: u64,
    queue: Vec<usize>,
    queued: Vec<bool>,
}

impl<'a> State<'a> {
    pub fn new(sys: &'a System) -> Self {
        State {
            sys,
            values: vec![None; sys.vars.len()],
            trail: Vec::new(),
            propagations: 0,
            queue: Vec::new(),
            queued: vec![false; sys.constraints.len()],
        }
    }

    fn fp(&self) -> Fp {
        self.sys.field.fp()
    }

    pub fn eval(&self, c: usize) -> Eval {
        let fp = self.fp();
        let mut c0 = 0u32;
        let mut c1 = 0u32;
        let mut single: Option<Var> = None;
        for t in &self.sys.constraints[c].poly.terms {
            let mut prod = t.coef;
            let mut open: Option<Var> = None;
            let mut many = false;
            for &v in &t.vars {
                match self.values[v] {
                    Some(x) => {
                        prod = fp.mul(prod, x);
                        if prod == 0 {
                            break;
                        }
                    }
                    None if open.is_none() => open = Some(v),
                    None => many = true,
                }
            }
            if prod == 0 {
                continue;
            }
            match open {
                None => c0 = fp.add(c0, prod),
                Some(_) if many => return Eval::Open,
                Some(v) => match single {
                    Some(u) if u != v => return Eval::Open,
                    _ => {
                        single = Some(v);
                        c1 = fp.add(c1, prod);
                    }
                },
            }
        }
        match single {
            Some(v) if c1 != 0 => Eval::Unit(v, fp.mul(fp.neg(c0), fp.inv(c1))),
            _ if c0 == 0 => Eval::Satisfied,
            _ => Eval::Conflict,
        }
    }

    pub fn assign(&mut self, v: Var, x: u32, cause: Cause) {
        debug_assert!(self.values[v].is_none());
        self.values[v] = Some(x);
        self.trail.push((v, cause));
        for &c in &self.sys.occurrences[v] {
            if !self.queued[c] {
                self.queued[c] = true;
                self.queue.push(c);
            }
        }
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, _) = self.trail.pop().expect("trail above mark");
            self.values[v] = None;
        }
        self.clear_queue();
    }

    fn clear_queue(&mut self) {
        for c in self.queue.drain(..) {
            self.queued[c] = false;
        }
    }

    pub fn enqueue_all(&mut self) {
        self.clear_queue();
        for c in 0..self.sys.constraints.len() {
            self.queued[c] = true;
            self.queue.push(c);
        }
    }

    /// Unit propagation to a fixpoint. Returns false on contradiction.
    pub fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop() {
            self.queued[c] = false;
            match self.eval(c) {
                Eval::Conflict => {
                    self.clear_queue();
                    return false;
                }
                Eval::Unit(v, x) => {
                    self.propagations += 1;
                    self.assign(v, x, Cause::Unit(c));
                }
                Eval::Satisfied | Eval::Open => {}
            }
        }
        true
    }

    /// Row-reduces every equation that is currently affine (no monomial with
    /// two open unknowns) and assigns the unknowns it determines. Returns
    /// `None` on contradiction, otherwise whether anything was assigned.
    pub fn linear_closure(&mut self) -> Option<bool> {
        let fp = self.fp();
        let mut cols: Vec<Var> = Vec::new();
        let mut forms: Vec<(u32, Vec<(Var, u32)>)> = Vec::new();
        'constraints: for con in &self.sys.constraints {
            let mut c0 = 0u32;
            let mut lin: Vec<(Var, u32)> = Vec::new();
            for t in &con.poly.terms {
                let mut prod = t.coef;
                let mut open = None;
                for &v in &t.vars {
                    match self.values[v] {
                        Some(x) => prod = fp.mul(prod, x),
                        None if open.is_none() => open = Some(v),
                        None => {
                            if prod != 0 && t.vars.iter().all(|&w| self.values[w] != Some(0)) {
                                continue 'constraints;
                            }
                            prod = 0;
                        }
                    }
                }
                if prod == 0 {
                    continue;
                }
                match open {
                    None => c0 = fp.add(c0, prod),
                    Some(v) => lin.push((v, prod)),
                }
            }
            if lin.is_empty() {
                continue;
            }
            for &(v, _) in &lin {
                if !cols.contains(&v) {
                    cols.push(v);
                }
            }
            forms.push((c0, lin));
        }
        if forms.is_empty() {
            return Some(false);
        }
        let width = cols.len() + 1;
        let mut rows: Vec<Vec<u32>> = forms
            .iter()
            .map(|(c0, lin)| {
                let mut row = vec![0u32; width];
                for &(v, a) in lin {
                    let j = cols.iter().position(|&w| w == v).expect("column registered");
                    row[j] = fp.add(row[j], a);
                }
                row[width - 1] = *c0;
                row
            })
            .collect();
        let order: Vec<usize> = (0..width).collect();
        let pivots = rref_with_columns(fp, &mut rows, &order);
        if pivots.last() == Some(&(width - 1)) {
            return None;
        }
        let mut progress = false;
        for (row, &pc) in rows.iter().zip(&pivots) {
            let others = row[..width - 1].iter().enumerate().any(|(j, &a)| j != pc && a != 0);
            if !others {
                let v = cols[pc];
                if self.values[v].is_none() {
                    self.assign(v, fp.neg(row[width - 1]), Cause::Linear);
                    progress = true;
                }
            }
        }
        Some(progress)
    }

    /// Unit propagation interleaved with linear closure until neither makes
    /// progress.
    pub fn propagate_with_closure(&mut self) -> bool {
        loop {
            if !self.propagate() {
                return false;
            }
            match self.linear_closure() {
                None => {
                    self.clear_queue();
                    return false;
                }
                Some(true) => continue,
                Some(false) => return true,
            }
        }
    }

    /// Branching unknown: the lowest-numbered open unknown of the open
    /// equation with the fewest open unknowns; else any unassigned unknown.
    pub fn choose(&self) -> Option<Var> {
        let mut best: Option<(usize, Var)> = None;
        for (c, con) in self.sys.constraints.iter().enumerate() {
            if self.eval(c) != Eval::Open {
                continue;
            }
            let open: Vec<Var> = con.poly.vars().into_iter().filter(|&v| self.values[v].is_none()).collect();
            if best.is_none_or(|(n, _)| open.len() < n) {
                best = Some((open.len(), open[0]));
                if open.len() == 2 {
                    break;
                }
            }
        }
        best.map(|(_, v)| v).or_else(|| self.values.iter().position(Option::is_none))
    }

    pub fn is_full(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn full_values(&self) -> Vec<u32> {
        self.values.iter().map(|v| v.expect("full assignment")).collect()
    }
}
