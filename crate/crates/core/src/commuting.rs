//! Commuting root subsets: enumeration of `Com_r` / `Max_r`, the `p`-rank and
//! the named sets that populate the maximal-subset tables.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{commuting_masks, parabolic_radical, phi_positive, Rank, RootSet};

/// Default node budget for commuting-set enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// `(m+1)²` for `n = 2m+1`, `m(m+1)` for `n = 2m`.
pub fn p_rank(rank: Rank) -> usize {
    let n = rank.n();
    let m = n / 2;
    if n % 2 == 1 {
        (m + 1) * (m + 1)
    } else {
        m * (m + 1)
    }
}

/// All `s ∈ {1, …, n}` with `s(n+1−s) = target`.
pub fn size_equation_solutions(rank: Rank, target: usize) -> Vec<usize> {
    (1..=rank.n()).filter(|&s| s * (rank.dim() - s) == target).collect()
}

/// Named root sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedSet {
    /// `Φ_k^rad`.
    Rad(usize),
    /// `Φ^odd_{m+1,m+2} = φ({1,…,m,m+2}) ∩ Φ⁺` for `n = 2m+1`.
    Odd,
    /// `Φ^ev_{m,m+1} = φ({1,…,m−1,m+1}) ∩ Φ⁺` for `n = 2m`.
    EvLow,
    /// `Φ^ev_{m+1,m+2} = φ({1,…,m,m+2}) ∩ Φ⁺` for `n = 2m`.
    EvHigh,
}

impl NamedSet {
    pub fn resolve(self, rank: Rank) -> Result<RootSet> {
        named_set(self, rank)
    }

    /// The index set `J` with `φ(J) ∩ Φ⁺` equal to this set.
    pub fn index_set(self, rank: Rank) -> Result<Vec<usize>> {
        let n = rank.n();
        let m = n / 2;
        let mismatch = || Error::ParityMismatch { tag: self.to_string(), n };
        match self {
            NamedSet::Rad(k) if (1..=n).contains(&k) => Ok((1..=k).collect()),
            NamedSet::Rad(_) => Err(mismatch()),
            NamedSet::Odd | NamedSet::EvHigh => {
                let parity_ok = if self == NamedSet::Odd { n % 2 == 1 } else { n.is_multiple_of(2) };
                if !parity_ok || m < 1 {
                    return Err(mismatch());
                }
                let mut j: Vec<usize> = (1..=m).collect();
                j.push(m + 2);
                Ok(j)
            }
            NamedSet::EvLow => {
                if n % 2 == 1 || m < 1 {
                    return Err(mismatch());
                }
                let mut j: Vec<usize> = (1..m).collect();
                j.push(m + 1);
                Ok(j)
            }
        }
    }
}

impl fmt::Display for NamedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSet::Rad(k) => write!(f, "rad:{k}"),
            NamedSet::Odd => write!(f, "odd"),
            NamedSet::EvLow => write!(f, "ev-low"),
            NamedSet::EvHigh => write!(f, "ev-high"),
        }
    }
}

impl FromStr for NamedSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "odd" => Ok(NamedSet::Odd),
            "ev-low" => Ok(NamedSet::EvLow),
            "ev-high" => Ok(NamedSet::EvHigh),
            other => other
                .strip_prefix("rad:")
                .and_then(|k| k.parse().ok())
                .map(NamedSet::Rad)
                .ok_or_else(|| Error::UnknownNamedSet(other.to_string())),
        }
    }
}

impl Serialize for NamedSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn named_set(tag: NamedSet, rank: Rank) -> Result<RootSet> {
    match tag {
        NamedSet::Rad(k) => {
            tag.index_set(rank)?;
            parabolic_radical(&[k], rank)
        }
        _ => phi_positive(&tag.index_set(rank)?, rank),
    }
}

/// The named set equal to `set`, if any.
pub fn identify_named(set: &RootSet) -> Option<NamedSet> {
    let rank = set.rank();
    [NamedSet::Odd, NamedSet::EvLow, NamedSet::EvHigh]
        .into_iter()
        .chain((1..=rank.n()).map(NamedSet::Rad))
        .find(|&t| named_set(t, rank).ok().as_ref() == Some(set))
}

/// All pairwise-commuting `r`-subsets of `Φ⁺` in canonical (lexicographic)
/// order; with `maximal_only`, only those admitting no commuting extension.
/// Visiting more than `budget` search nodes is an error.
pub fn enumerate_commuting(rank: Rank, r: usize, maximal_only: bool, budget: u64) -> Result<Vec<RootSet>> {
    let total = rank.num_positive();
    if r > total {
        return Err(Error::Precondition(format!("r={r} exceeds |Φ⁺|={total}")));
    }
    let masks = commuting_masks(rank);
    let full = RootSet::full(rank).bits();
    let mut search = CliqueSearch { masks: &masks, budget, nodes: 0 };
    let mut out = Vec::new();
    search.enumerate(0, full, r, &mut |chosen| {
        if maximal_only {
            let ext = masks_intersection(&masks, chosen, full) & !chosen;
            if ext != 0 {
                return;
            }
        }
        out.push(RootSet::from_bits(rank, chosen));
    })?;
    Ok(out)
}

fn masks_intersection(masks: &[u128], chosen: u128, start: u128) -> u128 {
    let mut acc = start;
    let mut bits = chosen;
    while bits != 0 {
        let k = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        acc &= masks[k];
    }
    acc
}

struct CliqueSearch<'a> {
    masks: &'a [u128],
    budget: u64,
    nodes: u64,
}

impl CliqueSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::BudgetExceeded { what: "commuting-set enumeration".into(), budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Extends `chosen` by members of `cand` with larger index than any chosen root.
    fn enumerate(&mut self, chosen: u128, cand: u128, r: usize, emit: &mut dyn FnMut(u128)) -> Result<()> {
        self.tick()?;
        let size = chosen.count_ones() as usize;
        if size == r {
            emit(chosen);
            return Ok(());
        }
        if size + (cand.count_ones() as usize) < r {
            return Ok(());
        }
        let mut rest = cand;
        while rest != 0 {
            if size + (rest.count_ones() as usize) < r {
                break;
            }
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.enumerate(chosen | 1u128 << k, rest & self.masks[k], r, emit)?;
        }
        Ok(())
    }

    fn max_clique(&mut self, size: usize, cand: u128, best: &mut usize) -> Result<()> {
        self.tick()?;
        if cand == 0 {
            *best = (*best).max(size);
            return Ok(());
        }
        let mut rest = cand;
        while rest != 0 {
            if size + color_bound(self.masks, rest) <= *best {
                return Ok(());
            }
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.max_clique(size + 1, rest & self.masks[k], best)?;
        }
        Ok(())
    }
}

/// Greedy colouring of the commuting graph on `cand`; the number of colour
/// classes bounds any clique inside `cand`.
fn color_bound(masks: &[u128], cand: u128) -> usize {
    let mut uncolored = cand;
    let mut colors = 0;
    while uncolored != 0 {
        colors += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let k = avail.trailing_zeros() as usize;
            avail &= !(1u128 << k);
            avail &= !masks[k];
            uncolored &= !(1u128 << k);
        }
    }
    colors
}

/// Largest pairwise-commuting subset of `Φ⁺`, by branch and bound over the
/// commuting graph.
pub fn max_commuting_size(rank: Rank, budget: u64) -> Result<usize> {
    let masks = commuting_masks(rank);
    let mut search = CliqueSearch { masks: &masks, budget, nodes: 0 };
    let mut best = 0;
    search.max_clique(0, RootSet::full(rank).bits(), &mut best)?;
    Ok(best)
}

/// `max_J |φ(J) ∩ Φ⁺|` over all non-trivial proper `J`.
pub fn max_phi_size(rank: Rank) -> usize {
    let d = rank.dim();
    (1u32..(1 << d) - 1)
        .map(|mask| {
            let j: Vec<usize> = (1..=d).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            phi_positive(&j, rank).map(|s| s.len()).unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Which maximal-subset table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Level {
    /// `Max(Φ)`: order `rk_p(g)`.
    #[serde(rename = "rk")]
    Rk,
    /// `Max_{rk−1}(Φ)`.
    #[serde(rename = "submax")]
    Submax,
}

impl Level {
    pub fn order(self, rank: Rank) -> usize {
        match self {
            Level::Rk => p_rank(rank),
            Level::Submax => p_rank(rank) - 1,
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk" | "max" => Ok(Level::Rk),
            "submax" | "rk-1" => Ok(Level::Submax),
            other => Err(Error::Parse(format!("level must be rk or submax, got {other:?}"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Rk => "rk",
            Level::Submax => "submax",
        })
    }
}

/// Table rows as named sets: `Max(Φ)` or `Max_{rk−1}(Φ)`.
pub fn predicted_tags(rank: Rank, level: Level) -> Result<Vec<NamedSet>> {
    let n = rank.n();
    if n < 2 {
        return Err(Error::Precondition(format!("tables need n >= 2, got {n}")));
    }
    let m = n / 2;
    Ok(match (level, n % 2 == 1) {
        (Level::Rk, true) => vec![NamedSet::Rad(m + 1)],
        (Level::Rk, false) => vec![NamedSet::Rad(m + 1), NamedSet::Rad(m)],
        (Level::Submax, true) => vec![NamedSet::Rad(m), NamedSet::Rad(m + 2), NamedSet::Odd],
        (Level::Submax, false) => vec![NamedSet::EvHigh, NamedSet::EvLow],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictedEntry {
    pub tag: NamedSet,
    pub roots: RootSet,
}

/// Table prediction next to the brute-force enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct MaxTable {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub n: usize,
    pub level: Level,
    pub order: usize,
    pub predicted: Vec<PredictedEntry>,
    /// `None` when the enumeration was refused for budget.
    pub computed: Option<Vec<RootSet>>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refused: Option<String>,
}

pub fn max_table(rank: Rank, level: Level, budget: u64) -> Result<MaxTable> {
    let predicted = predicted_tags(rank, level)?
        .into_iter()
        .map(|tag| Ok(PredictedEntry { tag, roots: named_set(tag, rank)? }))
        .collect::<Result<Vec<_>>>()?;
    let order = level.order(rank);
    let (computed, refused) = match enumerate_commuting(rank, order, true, budget) {
        Ok(sets) => (Some(sets), None),
        Err(e @ Error::BudgetExceeded { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let matches = computed.as_ref().map(|c| {
        let mut want: Vec<RootSet> = predicted.iter().map(|e| e.roots).collect();
        want.sort();
        want.dedup();
        let mut got = c.clone();
        got.sort();
        want == got
    });
    Ok(MaxTable {
        lie_type: format!("A{}", rank.n()),
        n: rank.n(),
        level,
        order,
        predicted,
        computed,
        matches,
        refused,
    })
}
