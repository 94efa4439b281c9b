//! The `verify` suite: every acceptance criterion, restricted to `n ≤ n_max`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{apply, random_unipotent_from, weyl_conjugacy_brute_force, weyl_conjugacy_search};
use crate::commuting::{
    max_commuting_size, max_table, named_set, p_rank, size_equation_solutions, Level, NamedSet, DEFAULT_NODE_BUDGET,
};
use crate::error::Result;
use crate::nilradical::FieldSpec;
use crate::ordering::{check_stratification, paper_order, paper_strata};
use crate::report::{Check, VerifyReport};
use crate::roots::{highest_root, is_ideal, parabolic_radical, positive_roots, weyl_apply_strict, Permutation, Rank, Root, RootSet};
use crate::solver::{classify_fiber, dichotomy_check, lt_fiber, predicted_family, sampled_lt_lemma_check, FiberProblem, Strategy};
use crate::subspace::{leading_terms, reduce_echelon};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "p-rank"),
    (2, "max tables"),
    (3, "size equation"),
    (4, "ordering"),
    (5, "fibers"),
    (6, "LT lemmas"),
    (7, "conjugacy"),
    (8, "ideals"),
    (9, "LT invariance"),
    (10, "dichotomy"),
];

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub seed: u64,
    /// Replaces the per-criterion sample counts when set.
    pub samples: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n_max: 6, seed: 0, samples: None }
    }
}

impl VerifyOptions {
    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn ranks(&self, lo: usize, hi: usize) -> impl Iterator<Item = Rank> {
        (lo..=hi.min(self.n_max)).map(|n| Rank::new(n).expect("rank in range"))
    }
}

fn rank(n: usize) -> Rank {
    Rank::new(n).expect("rank in range")
}

fn simple(k: usize, r: Rank) -> Root {
    Root::simple(k, r).expect("simple root in range")
}

fn rad(k: usize, r: Rank) -> RootSet {
    parabolic_radical(&[k], r).expect("k in range")
}

struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, criterion: u8) -> Check {
        let name = CRITERIA[criterion as usize - 1].1.to_string();
        let passed = self.failures.is_empty();
        let detail = if passed { self.notes.join("; ") } else { self.failures.join("; ") };
        Check { criterion, name, passed, detail }
    }
}

pub fn run_suite(criteria: &[u8], opts: &VerifyOptions) -> Result<VerifyReport> {
    let checks = criteria.iter().map(|&c| run_criterion(c, opts)).collect::<Result<Vec<_>>>()?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { criteria: criteria.to_vec(), n_max: opts.n_max, seed: opts.seed, checks, passed })
}

pub fn run_criterion(criterion: u8, opts: &VerifyOptions) -> Result<Check> {
    let mut t = Tally::new();
    match criterion {
        1 => p_rank_check(opts, &mut t)?,
        2 => tables_check(opts, &mut t)?,
        3 => size_equation_check(&mut t),
        4 => ordering_check(opts, &mut t)?,
        5 => fiber_check(opts, &mut t)?,
        6 => lt_lemma_check(opts, &mut t)?,
        7 => conjugacy_check(opts, &mut t)?,
        8 => ideal_check(opts, &mut t)?,
        9 => invariance_check(opts, &mut t)?,
        10 => dichotomy(opts, &mut t)?,
        other => return Err(crate::Error::Parse(format!("no criterion {other}; expected 1..=10"))),
    }
    Ok(t.finish(criterion))
}

fn formula(n: usize) -> usize {
    let m = n / 2;
    if n % 2 == 1 {
        (m + 1) * (m + 1)
    } else {
        m * (m + 1)
    }
}

fn p_rank_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    let small = [(2, 2), (3, 4), (4, 6)];
    for r in opts.ranks(2, 9) {
        let got = max_commuting_size(r, DEFAULT_NODE_BUDGET)?;
        t.expect(got == formula(r.n()) && got == p_rank(r), || format!("A{}: brute force {got}, formula {}", r.n(), formula(r.n())));
        if let Some(&(_, v)) = small.iter().find(|(n, _)| *n == r.n()) {
            t.expect(got == v, || format!("A{}: {got} differs from the small-rank value {v}", r.n()));
        }
        t.notes.push(format!("A{}={got}", r.n()));
    }
    Ok(())
}

fn tables_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    for r in opts.ranks(3, 6) {
        let tab = max_table(r, Level::Rk, DEFAULT_NODE_BUDGET)?;
        t.expect(tab.matches == Some(true), || format!("Max(Φ) differs for A{}", r.n()));
    }
    for (r, count) in opts.ranks(5, 6).map(|r| (r, if r.n() == 5 { 3 } else { 2 })) {
        let tab = max_table(r, Level::Submax, DEFAULT_NODE_BUDGET)?;
        let got = tab.computed.as_ref().map_or(0, |c| c.len());
        t.expect(tab.matches == Some(true) && got == count, || format!("Max_(rk-1) for A{}: {got} sets, match {:?}", r.n(), tab.matches));
        t.notes.push(format!("A{} submax {got} sets", r.n()));
    }
    Ok(())
}

fn size_equation_check(t: &mut Tally) {
    for n in [5, 7, 9] {
        let m = n / 2;
        let got = size_equation_solutions(rank(n), p_rank(rank(n)) - 1);
        t.expect(got == vec![m, m + 2], || format!("A{n}: {got:?}"));
    }
    for n in [6, 8] {
        let got = size_equation_solutions(rank(n), p_rank(rank(n)) - 1);
        t.expect(got.is_empty(), || format!("A{n}: {got:?}"));
    }
    t.notes.push("odd 5,7,9 and even 6,8".into());
}

fn ordering_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    for n in 2..=13 {
        let r = rank(n);
        let ok = check_stratification(&paper_order(r)?, &paper_strata(r)?)?;
        t.expect(ok, || format!("stratification fails for A{n}"));
    }
    for r in opts.ranks(2, 8) {
        let ord = paper_order(r)?;
        let roots = positive_roots(r);
        for &a in &roots {
            for &b in &roots {
                if let Some(s) = a.sum(b) {
                    t.expect(ord.greater(b, s), || format!("A{}: {a}+{b} not below {b}", r.n()));
                }
                if !ord.greater(a, b) {
                    continue;
                }
                for &g in &roots {
                    if let (Some(ag), Some(bg)) = (a.sum(g), b.sum(g)) {
                        t.expect(ord.greater(ag, bg), || format!("A{}: translation by {g} reverses {a} > {b}", r.n()));
                    }
                }
            }
        }
    }
    t.notes.push(format!("stratification n<=13, exhaustive pairs n<={}", opts.n_max.min(8)));
    Ok(())
}

fn fiber_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    let cases = [
        (5, 5, &[(NamedSet::Rad(2), 1), (NamedSet::Rad(4), 1), (NamedSet::Odd, 5)][..]),
        (6, 2, &[(NamedSet::EvLow, 2), (NamedSet::EvHigh, 2)]),
    ];
    for (n, p, tags) in cases {
        if n > opts.n_max {
            continue;
        }
        let r = rank(n);
        let f = FieldSpec::new(p, r)?;
        let ord = paper_order(r)?;
        for &(tag, count) in tags {
            let sols = lt_fiber(&FiberProblem::named(&f, &ord, tag, Strategy::Search)?)?;
            if !sols.complete {
                t.failures.push(format!("A{n} {tag}: search incomplete"));
                continue;
            }
            let class = classify_fiber(&sols, &predicted_family(tag, r)?, &f, &ord)?;
            t.expect(sols.len() == count && class.matches, || format!("A{n} p={p} {tag}: {} solutions, family match {}", sols.len(), class.matches));
            t.notes.push(format!("A{n} {tag}={}", sols.len()));
        }
    }
    Ok(())
}

fn lt_lemma_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    for (n, p, samples) in [(5, 5, 1000), (6, 2, 1000), (7, 3, 200)] {
        if n > opts.n_max {
            continue;
        }
        let r = rank(n);
        let rep = sampled_lt_lemma_check(r, &FieldSpec::new(p, r)?, opts.samples(samples), opts.seed)?;
        t.expect(rep.passed(), || format!("A{n} p={p}: {} violations, {} inconclusive", rep.violations, rep.inconclusive));
        t.notes.push(format!("A{n} {} samples", rep.samples));
    }
    Ok(())
}

/// `(R1, R2, k)` with `s_k(R1) = R2`, from the ideal table.
pub fn named_identities(r: Rank) -> Result<Vec<(NamedSet, RootSet, usize)>> {
    let n = r.n();
    let m = n / 2;
    let minus = |k: usize| rad(k, r).without(simple(k, r));
    Ok(if n % 2 == 1 {
        vec![(NamedSet::Odd, minus(m + 1), m + 1)]
    } else {
        vec![(NamedSet::EvHigh, minus(m + 1), m + 1), (NamedSet::EvLow, minus(m), m)]
    })
}

/// Pairs that no Weyl element relates.
pub fn non_conjugate_pairs(r: Rank) -> Vec<(RootSet, RootSet)> {
    let n = r.n();
    let m = n / 2;
    if n % 2 == 1 {
        vec![(rad(m, r), rad(m + 2, r))]
    } else {
        let g = highest_root(r);
        vec![(rad(m, r).without(g), rad(m + 1, r).without(g))]
    }
}

fn conjugacy_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    for r in opts.ranks(5, 8) {
        for (tag, target, k) in named_identities(r)? {
            let src = named_set(tag, r)?;
            let s = Permutation::simple_reflection(r, k)?;
            t.expect(weyl_apply_strict(&s, &src)?.as_ref() == Some(&target), || format!("A{}: s_{k} does not map {tag}", r.n()));
            let found = weyl_conjugacy_search(&src, &target)?;
            let verified = match &found {
                Some(w) => weyl_apply_strict(w, &src)?.as_ref() == Some(&target),
                None => false,
            };
            t.expect(verified, || format!("A{}: search found no witness for {tag}", r.n()));
        }
        for (a, b) in non_conjugate_pairs(r) {
            let fast = weyl_conjugacy_search(&a, &b)?;
            let slow = weyl_conjugacy_brute_force(&a, &b)?;
            t.expect(fast.is_none() && slow.is_none(), || format!("A{}: {a} and {b} reported conjugate", r.n()));
        }
        t.notes.push(format!("A{}", r.n()));
    }
    Ok(())
}

/// Entries of both ideal tables for `A_n`.
pub fn ideal_table(r: Rank) -> Vec<RootSet> {
    let n = r.n();
    let m = n / 2;
    let minus = |k: usize| rad(k, r).without(simple(k, r));
    if n % 2 == 1 {
        vec![rad(m, r), rad(m + 2, r), minus(m + 1), rad(m + 1, r)]
    } else {
        vec![minus(m), minus(m + 1), rad(m, r), rad(m + 1, r)]
    }
}

fn ideal_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    for r in opts.ranks(5, 9) {
        for set in ideal_table(r) {
            t.expect(is_ideal(&set), || format!("A{}: {set} is not an ideal", r.n()));
        }
        t.notes.push(format!("A{}", r.n()));
    }
    Ok(())
}

fn invariance_check(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    let per = opts.samples(100);
    for r in opts.ranks(5, 7) {
        let f = FieldSpec::new(FieldSpec::default_prime(r), r)?;
        let ord = paper_order(r)?;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ r.n() as u64);
        let dim = r.num_positive();
        let spaces = (0..per)
            .map(|_| {
                let k = rng.gen_range(1..=dim);
                let vs = (0..k)
                    .map(|_| f.vector_from_coeffs((0..dim).map(|_| rng.gen_range(0..f.p())).collect()))
                    .collect::<Result<Vec<_>>>()?;
                reduce_echelon(&f, &vs, &ord)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut violations = 0;
        for _ in 0..per {
            let g = random_unipotent_from(&mut rng, &f, true);
            for e in &spaces {
                if leading_terms(&apply(&g, e)?) != leading_terms(e) {
                    violations += 1;
                }
            }
        }
        t.expect(violations == 0, || format!("A{}: {violations} violations", r.n()));
        t.notes.push(format!("A{} {}x{}", r.n(), per, per));
    }
    Ok(())
}

fn dichotomy(opts: &VerifyOptions, t: &mut Tally) -> Result<()> {
    for (n, p) in [(5, 5), (6, 2)] {
        if n > opts.n_max {
            continue;
        }
        let r = rank(n);
        let rep = dichotomy_check(r, &FieldSpec::new(p, r)?, opts.samples(500), opts.seed)?;
        t.expect(rep.passed(), || format!("A{n} p={p}: {} violations, {} inconclusive", rep.violations, rep.inconclusive));
        t.notes.push(format!("A{n} {} maximal, {} extendable", rep.maximal, rep.extendable));
    }
    Ok(())
}
