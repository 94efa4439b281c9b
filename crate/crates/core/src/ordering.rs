//! Reverse-lexicographic total orders on `Φ⁺`.
//!
//! A [`Precedence`] lists the simple roots from least to greatest
//! (`π_1 ≺ π_2 ≺ ⋯`). Two positive roots are compared on their simple-root
//! coefficient vectors at the first position of the precedence where they
//! differ; the root with the smaller coefficient there is the greater one.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::nilradical::UVector;
use crate::roots::{positive_roots, Rank, Root, RootSet};

/// Permutation of the simple-root indices `1..=n`, least element first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Precedence(Vec<usize>);

impl Precedence {
    pub fn new(rank: Rank, seq: Vec<usize>) -> Result<Self> {
        let n = rank.n();
        let mut seen = vec![false; n + 1];
        if seq.len() != n {
            return Err(Error::InvalidPrecedence(format!("{seq:?} has length {} (need {n})", seq.len())));
        }
        for &k in &seq {
            if k == 0 || k > n || seen[k] {
                return Err(Error::InvalidPrecedence(format!("{seq:?} is not a permutation of 1..={n}")));
            }
            seen[k] = true;
        }
        Ok(Precedence(seq))
    }

    /// The orders fixed for the submaximal-rank analysis:
    /// `α_{m+1} ≺ α_1 ≺ ⋯ ≺ α_{2m+1}` for `n = 2m+1` and
    /// `α_{m+1} ≺ α_m ≺ α_1 ≺ ⋯ ≺ α_{2m}` for `n = 2m`.
    pub fn paper(rank: Rank) -> Result<Self> {
        let n = rank.n();
        if n < 2 {
            return Err(Error::Precondition(format!("the standard order needs n >= 2, got {n}")));
        }
        let m = n / 2;
        let head: Vec<usize> = if n % 2 == 1 { vec![m + 1] } else { vec![m + 1, m] };
        let mut seq = head.clone();
        seq.extend((1..=n).filter(|k| !head.contains(k)));
        Precedence::new(rank, seq)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Strict total order on `Φ⁺`, stored as a rank per canonical root index.
#[derive(Clone, PartialEq, Eq)]
pub struct TotalOrder {
    rank: Rank,
    precedence: Precedence,
    ranks: Vec<u16>,
    by_rank: Vec<u16>,
}

impl TotalOrder {
    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn precedence(&self) -> &Precedence {
        &self.precedence
    }

    /// Position of a root: `0` is the least, `|Φ⁺| − 1` the greatest.
    #[inline]
    pub fn position(&self, r: Root) -> usize {
        self.ranks[self.rank.index_of(r)] as usize
    }

    #[inline]
    pub fn position_of_index(&self, idx: usize) -> usize {
        self.ranks[idx] as usize
    }

    /// Canonical index of the root at a given position.
    #[inline]
    pub fn index_at(&self, position: usize) -> usize {
        self.by_rank[position] as usize
    }

    /// Canonical indices from greatest to least.
    pub fn descending(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_rank.iter().rev().map(|&k| k as usize)
    }

    pub fn greater(&self, a: Root, b: Root) -> bool {
        self.position(a) > self.position(b)
    }

    pub fn cmp_roots(&self, a: Root, b: Root) -> Ordering {
        self.position(a).cmp(&self.position(b))
    }

    /// `"revlex:3,1,2,4,5"`.
    pub fn descriptor(&self) -> String {
        let body: Vec<String> = self.precedence.0.iter().map(|k| k.to_string()).collect();
        format!("revlex:{}", body.join(","))
    }

    /// Accepts `"paper"` or `"revlex:<comma separated simple roots>"`.
    pub fn parse(rank: Rank, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "paper" {
            return paper_order(rank);
        }
        let body = text
            .strip_prefix("revlex:")
            .ok_or_else(|| Error::Parse(format!("order must be \"paper\" or \"revlex:...\", got {text:?}")))?;
        let seq = if body.trim_start().starts_with('[') {
            serde_json::from_str::<Vec<usize>>(body).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            body.split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(reverse_lex(&Precedence::new(rank, seq)?, rank))
    }

    /// The greatest root with nonzero coefficient.
    pub fn leading_root(&self, v: &UVector) -> Result<Root> {
        self.leading_index(v.coeffs())
            .map(|k| self.rank.root_at(k))
            .ok_or(Error::ZeroVector)
    }

    pub(crate) fn leading_index(&self, coeffs: &[u32]) -> Option<usize> {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .max_by_key(|(k, _)| self.ranks[*k])
            .map(|(k, _)| k)
    }
}

impl fmt::Debug for TotalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalOrder({}, {})", self.rank, self.descriptor())
    }
}

impl Serialize for TotalOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

fn compare(prec: &Precedence, a: Root, b: Root) -> Ordering {
    for &k in &prec.0 {
        let ca = a.contains_simple(k);
        let cb = b.contains_simple(k);
        if ca != cb {
            // The smaller coefficient wins.
            return if ca { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

/// Builds the reverse-lexicographic order induced by `prec`.
pub fn reverse_lex(prec: &Precedence, rank: Rank) -> TotalOrder {
    let roots = positive_roots(rank);
    let mut idx: Vec<usize> = (0..roots.len()).collect();
    idx.sort_by(|&x, &y| compare(prec, roots[x], roots[y]));
    let mut ranks = vec![0u16; roots.len()];
    for (pos, &k) in idx.iter().enumerate() {
        ranks[k] = pos as u16;
    }
    debug_assert!(idx.windows(2).all(|w| compare(prec, roots[w[0]], roots[w[1]]) == Ordering::Less));
    TotalOrder {
        rank,
        precedence: prec.clone(),
        ranks,
        by_rank: idx.into_iter().map(|k| k as u16).collect(),
    }
}

pub fn paper_order(rank: Rank) -> Result<TotalOrder> {
    Ok(reverse_lex(&Precedence::paper(rank)?, rank))
}

/// True iff every root of `strata[k]` is greater than every root of `strata[k+1]`.
pub fn check_stratification(order: &TotalOrder, strata: &[RootSet]) -> Result<bool> {
    for (a, sa) in strata.iter().enumerate() {
        order.rank.check(sa.rank())?;
        for sb in &strata[a + 1..] {
            if let Some(r) = sa.intersection(sb).iter().next() {
                return Err(Error::StrataOverlap(r.to_string()));
            }
        }
    }
    Ok(strata.windows(2).all(|w| {
        let lo = w[0].indices().map(|k| order.ranks[k]).min();
        let hi = w[1].indices().map(|k| order.ranks[k]).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => lo > hi,
            _ => true,
        }
    }))
}

/// The chain `Φ⁺∖Φ_{m+1}^rad ≻ Φ_{m+1}^rad` (odd `n`) or the four-stratum chain
/// `Φ⁺∖(Φ_m ∪ Φ_{m+1}) ≻ Φ_m∖Φ_{m+1} ≻ Φ_{m+1}∖Φ_m ≻ Φ_m ∩ Φ_{m+1}` (even `n`).
pub fn paper_strata(rank: Rank) -> Result<Vec<RootSet>> {
    let n = rank.n();
    if n < 2 {
        return Err(Error::Precondition(format!("the standard strata need n >= 2, got {n}")));
    }
    let m = n / 2;
    let all = RootSet::full(rank);
    if n % 2 == 1 {
        let mid = crate::roots::parabolic_radical(&[m + 1], rank)?;
        Ok(vec![all.difference(&mid), mid])
    } else {
        let a = crate::roots::parabolic_radical(&[m], rank)?;
        let b = crate::roots::parabolic_radical(&[m + 1], rank)?;
        Ok(vec![
            all.difference(&a.union(&b)),
            a.difference(&b),
            b.difference(&a),
            a.intersection(&b),
        ])
    }
}
