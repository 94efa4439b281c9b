//! Seeded sampling experiments over `B`-conjugates of the table subalgebras.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::actions::{apply, random_unipotent_from};
use crate::commuting::{named_set, p_rank, predicted_tags, Level};
use crate::error::{Error, Result};
use crate::nilradical::FieldSpec;
use crate::ordering::paper_order;
use crate::roots::{Rank, RootSet};
use crate::subspace::{
    is_elementary, is_maximal_elementary, leading_terms, reduce_echelon, EchelonSubspace, Maximality, DEFAULT_COSET_BUDGET,
};

const CONJUGATING_GROUP: &str = "random unipotent times torus (B only; other G-conjugates are not sampled)";
const MAX_WITNESSES: usize = 5;

fn check_lemma_range(rank: Rank) -> Result<()> {
    if rank.n() < 5 {
        return Err(Error::Precondition(format!("the LT lemmas need n >= 5, got {}", rank.n())));
    }
    Ok(())
}

fn pool(rank: Rank, level: Level) -> Result<Vec<RootSet>> {
    predicted_tags(rank, level)?.into_iter().map(|t| named_set(t, rank)).collect()
}

/// Membership in `Max_{rk−1}(Φ)` by definition: a commuting set of size
/// `rk − 1` with no commuting single-root extension.
fn in_submax(set: &RootSet) -> bool {
    set.len() == p_rank(set.rank()) - 1 && set.is_maximal_commuting()
}

#[derive(Debug, Clone, Serialize)]
pub struct LtLemmaReport {
    pub n: usize,
    pub p: u32,
    pub samples: usize,
    pub seed: u64,
    pub pool: Vec<RootSet>,
    pub pool_valid: bool,
    pub violations: usize,
    pub inconclusive: usize,
    pub witnesses: Vec<String>,
    pub conjugating_group: &'static str,
}

impl LtLemmaReport {
    pub fn passed(&self) -> bool {
        self.pool_valid && self.violations == 0 && self.inconclusive == 0
    }
}

/// Conjugates `Lie(R)`, `R` drawn from the `Max_{rk−1}` table, by random
/// elements of `B` and checks each image is maximal elementary with leading
/// terms in `Max_{rk−1}(Φ)`.
pub fn sampled_lt_lemma_check(rank: Rank, field: &FieldSpec, samples: usize, seed: u64) -> Result<LtLemmaReport> {
    rank.check(field.rank())?;
    check_lemma_range(rank)?;
    let order = paper_order(rank)?;
    let pool = pool(rank, Level::Submax)?;
    let bases = pool.iter().map(|r| EchelonSubspace::lie(r, field, &order)).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LtLemmaReport {
        n: rank.n(),
        p: field.p(),
        samples,
        seed,
        pool_valid: pool.iter().all(in_submax),
        pool: pool.clone(),
        violations: 0,
        inconclusive: 0,
        witnesses: Vec::new(),
        conjugating_group: CONJUGATING_GROUP,
    };
    for s in 0..samples {
        let k = rng.gen_range(0..bases.len());
        let g = random_unipotent_from(&mut rng, field, true);
        let e = apply(&g, &bases[k])?;
        let lt = leading_terms(&e);
        let ok = match is_maximal_elementary(&e, DEFAULT_COSET_BUDGET)? {
            Maximality::Maximal => in_submax(&lt),
            Maximality::Extendable { .. } => false,
            Maximality::Inconclusive { .. } => {
                report.inconclusive += 1;
                continue;
            }
        };
        if !ok {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(format!("sample {s}: from {} got LT {}", pool[k], lt));
            }
        }
    }
    Ok(report)
}

/// Which side of the dichotomy an elementary subalgebra falls on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DichotomyVerdict {
    Maximal { lt: RootSet, lt_in_submax: bool },
    Extends { dim: usize, extension_elementary: bool },
    Inconclusive { cosets: String },
}

impl DichotomyVerdict {
    /// Holds for an elementary subalgebra of dimension `rk − 1`.
    pub fn holds(&self, rk: usize) -> bool {
        match self {
            DichotomyVerdict::Maximal { lt_in_submax, .. } => *lt_in_submax,
            DichotomyVerdict::Extends { dim, extension_elementary } => *extension_elementary && *dim == rk,
            DichotomyVerdict::Inconclusive { .. } => false,
        }
    }
}

pub fn dichotomy_verdict(e: &EchelonSubspace, budget: u64) -> Result<DichotomyVerdict> {
    Ok(match is_maximal_elementary(e, budget)? {
        Maximality::Maximal => {
            let lt = leading_terms(e);
            DichotomyVerdict::Maximal { lt_in_submax: in_submax(&lt), lt }
        }
        Maximality::Extendable { witness } => {
            let bigger = e.extended(&[witness])?;
            DichotomyVerdict::Extends { dim: bigger.dim(), extension_elementary: is_elementary(&bigger) }
        }
        Maximality::Inconclusive { cosets } => DichotomyVerdict::Inconclusive { cosets: cosets.to_string() },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    pub n: usize,
    pub p: u32,
    pub samples: usize,
    pub seed: u64,
    pub maximal: usize,
    pub extendable: usize,
    pub violations: usize,
    pub inconclusive: usize,
    pub witnesses: Vec<String>,
    pub conjugating_group: &'static str,
}

impl DichotomyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.inconclusive == 0
    }
}

/// Samples `(rk − 1)`-dimensional elementary subalgebras (alternately a random
/// hyperplane of a conjugate of `Lie(I)`, `I` in the `Max(Φ)` table, and a
/// conjugate of `Lie(R)`, `R` in the `Max_{rk−1}` table) and checks each is
/// either maximal with leading terms in `Max_{rk−1}(Φ)` or extends to
/// dimension `rk`.
pub fn dichotomy_check(rank: Rank, field: &FieldSpec, samples: usize, seed: u64) -> Result<DichotomyReport> {
    rank.check(field.rank())?;
    check_lemma_range(rank)?;
    let order = paper_order(rank)?;
    let rk = p_rank(rank);
    let lie = |sets: Vec<RootSet>| sets.iter().map(|r| EchelonSubspace::lie(r, field, &order)).collect::<Result<Vec<_>>>();
    let top = lie(pool(rank, Level::Rk)?)?;
    let sub = lie(pool(rank, Level::Submax)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DichotomyReport {
        n: rank.n(),
        p: field.p(),
        samples,
        seed,
        maximal: 0,
        extendable: 0,
        violations: 0,
        inconclusive: 0,
        witnesses: Vec::new(),
        conjugating_group: CONJUGATING_GROUP,
    };
    for s in 0..samples {
        let g = random_unipotent_from(&mut rng, field, true);
        let e = if s % 2 == 0 {
            let big = apply(&g, top.choose(&mut rng).expect("table is nonempty"))?;
            loop {
                let combos = (0..rk - 1)
                    .map(|_| {
                        let mut w = field.zero();
                        for v in big.basis() {
                            let a = rng.gen_range(0..field.p());
                            w = w.add(&v.scaled(a))?;
                        }
                        Ok(w)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let h = reduce_echelon(field, &combos, &order)?;
                if h.dim() == rk - 1 {
                    break h;
                }
            }
        } else {
            apply(&g, sub.choose(&mut rng).expect("table is nonempty"))?
        };
        if !is_elementary(&e) {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(format!("sample {s}: not elementary"));
            }
            continue;
        }
        let verdict = dichotomy_verdict(&e, DEFAULT_COSET_BUDGET)?;
        match &verdict {
            DichotomyVerdict::Maximal { .. } => report.maximal += 1,
            DichotomyVerdict::Extends { .. } => report.extendable += 1,
            DichotomyVerdict::Inconclusive { .. } => {
                report.inconclusive += 1;
                continue;
            }
        }
        if !verdict.holds(rk) {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(format!("sample {s}: {}", serde_json::to_string(&verdict).expect("verdict serializes")));
            }
        }
    }
    Ok(report)
}
