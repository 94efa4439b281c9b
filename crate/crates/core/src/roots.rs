//! Positive roots of type A_n, root subsets and the symmetric-group action.
//!
//! A positive root `ε_i − ε_j` (1 ≤ i < j ≤ n+1) is stored as the index pair
//! `(i, j)`. Root sets are dense bitmasks over the canonical row-major
//! enumeration `(1,2), (1,3), …, (1,n+1), (2,3), …`.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported rank; `n(n+1)/2` must fit in a `u128` mask.
pub const MAX_RANK: usize = 15;

/// The subscript `n` of `A_n`. Roots live on the indices `1..=n+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Rank(usize);

impl Rank {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_RANK).contains(&n) {
            Ok(Rank(n))
        } else {
            Err(Error::RankOutOfRange(n))
        }
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    /// Number of indices, `n + 1`.
    #[inline]
    pub fn dim(self) -> usize {
        self.0 + 1
    }

    /// `|Φ⁺| = n(n+1)/2`.
    #[inline]
    pub fn num_positive(self) -> usize {
        self.0 * (self.0 + 1) / 2
    }

    /// Canonical index of `(i, j)`.
    #[inline]
    pub fn index_of(self, root: Root) -> usize {
        let i = root.i as usize;
        let j = root.j as usize;
        let before = (i - 1) * self.dim() - (i - 1) * i / 2;
        before + (j - i - 1)
    }

    pub fn root_at(self, index: usize) -> Root {
        debug_assert!(index < self.num_positive());
        let mut rest = index;
        let mut i = 1;
        loop {
            let row = self.dim() - i;
            if rest < row {
                return Root::new_unchecked(i, i + 1 + rest);
            }
            rest -= row;
            i += 1;
        }
    }

    pub fn check(self, other: Rank) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RankMismatch { left: self.0, right: other.0 })
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}", self.0)
    }
}

/// Positive root `ε_i − ε_j` with `i < j` (1-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub i: u8,
    pub j: u8,
}

impl Root {
    pub fn new(i: usize, j: usize, rank: Rank) -> Result<Self> {
        if i >= 1 && i < j && j <= rank.dim() {
            Ok(Self::new_unchecked(i, j))
        } else {
            Err(Error::InvalidRoot(format!("{i}-{j} in {rank}")))
        }
    }

    #[inline]
    pub(crate) fn new_unchecked(i: usize, j: usize) -> Self {
        Root { i: i as u8, j: j as u8 }
    }

    /// Simple root `α_k = ε_k − ε_{k+1}`.
    pub fn simple(k: usize, rank: Rank) -> Result<Self> {
        Root::new(k, k + 1, rank)
    }

    pub fn is_simple(self) -> bool {
        self.j == self.i + 1
    }

    /// Height, i.e. the number of simple roots in the support.
    pub fn height(self) -> usize {
        (self.j - self.i) as usize
    }

    /// Whether `α_k` occurs in the root (coefficient 1), i.e. `i ≤ k < j`.
    #[inline]
    pub fn contains_simple(self, k: usize) -> bool {
        (self.i as usize) <= k && k < self.j as usize
    }

    /// `a + b` if it is a (necessarily positive) root.
    #[inline]
    pub fn sum(self, other: Root) -> Option<Root> {
        if self.j == other.i {
            Some(Root { i: self.i, j: other.j })
        } else if other.j == self.i {
            Some(Root { i: other.i, j: self.j })
        } else {
            None
        }
    }

    pub fn fits(self, rank: Rank) -> bool {
        self.i >= 1 && self.i < self.j && (self.j as usize) <= rank.dim()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.i, self.j)
    }
}

impl FromStr for Root {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRoot(s.to_string());
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let i: usize = a.trim().parse().map_err(|_| bad())?;
        let j: usize = b.trim().parse().map_err(|_| bad())?;
        if i >= 1 && i < j && j <= u8::MAX as usize {
            Ok(Root::new_unchecked(i, j))
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All positive roots in canonical row-major order.
pub fn positive_roots(rank: Rank) -> Vec<Root> {
    let d = rank.dim();
    (1..d)
        .flat_map(|i| (i + 1..=d).map(move |j| Root::new_unchecked(i, j)))
        .collect()
}

/// True iff `a + b` is not a root.
pub fn commutes(a: Root, b: Root) -> bool {
    a.j != b.i && b.j != a.i
}

/// Checked variant of [`commutes`] for roots tagged with their rank.
pub fn commutes_in(rank: Rank, a: Root, b: Root) -> Result<bool> {
    for r in [a, b] {
        if !r.fits(rank) {
            return Err(Error::InvalidRoot(format!("{r} in {rank}")));
        }
    }
    Ok(commutes(a, b))
}

/// `N_{a,b}` in the matrix-unit model: `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj`.
pub fn structure_constant(a: Root, b: Root) -> i8 {
    if a.j == b.i {
        1
    } else if b.j == a.i {
        -1
    } else {
        0
    }
}

/// `ε_1 − ε_{n+1}`.
pub fn highest_root(rank: Rank) -> Root {
    Root::new_unchecked(1, rank.dim())
}

/// Subset of `Φ⁺` for a fixed rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootSet {
    rank: Rank,
    bits: u128,
}

impl RootSet {
    pub fn empty(rank: Rank) -> Self {
        RootSet { rank, bits: 0 }
    }

    pub fn full(rank: Rank) -> Self {
        let n = rank.num_positive();
        let bits = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        RootSet { rank, bits }
    }

    pub fn from_bits(rank: Rank, bits: u128) -> Self {
        debug_assert_eq!(bits & !Self::full(rank).bits, 0);
        RootSet { rank, bits }
    }

    pub fn from_roots<I: IntoIterator<Item = Root>>(rank: Rank, roots: I) -> Result<Self> {
        let mut set = Self::empty(rank);
        for r in roots {
            if !r.fits(rank) {
                return Err(Error::InvalidRoot(format!("{r} in {rank}")));
            }
            set.insert(r);
        }
        Ok(set)
    }

    /// Parses `["1-3", "2-4"]` or a bare comma list `1-3,2-4`.
    pub fn parse(rank: Rank, text: &str) -> Result<Self> {
        let text = text.trim();
        let names: Vec<String> = if text.starts_with('[') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        } else if text.is_empty() {
            Vec::new()
        } else {
            text.split(',').map(|s| s.trim().to_string()).collect()
        };
        let roots = names.iter().map(|s| s.parse::<Root>()).collect::<Result<Vec<_>>>()?;
        Self::from_roots(rank, roots)
    }

    #[inline]
    pub fn rank(&self) -> Rank {
        self.rank
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, r: Root) -> bool {
        r.fits(self.rank) && self.bits >> self.rank.index_of(r) & 1 == 1
    }

    #[inline]
    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits >> idx & 1 == 1
    }

    pub fn insert(&mut self, r: Root) {
        self.bits |= 1u128 << self.rank.index_of(r);
    }

    pub fn remove(&mut self, r: Root) {
        if r.fits(self.rank) {
            self.bits &= !(1u128 << self.rank.index_of(r));
        }
    }

    pub fn with(mut self, r: Root) -> Self {
        self.insert(r);
        self
    }

    pub fn without(mut self, r: Root) -> Self {
        self.remove(r);
        self
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        RootSet { rank: self.rank, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &RootSet) -> RootSet {
        RootSet { rank: self.rank, bits: self.bits & other.bits }
    }

    pub fn difference(&self, other: &RootSet) -> RootSet {
        RootSet { rank: self.rank, bits: self.bits & !other.bits }
    }

    pub fn complement(&self) -> RootSet {
        RootSet::full(self.rank).difference(self)
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(k)
            }
        })
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Root> + '_ {
        self.indices().map(move |k| self.rank.root_at(k))
    }

    pub fn to_vec(&self) -> Vec<Root> {
        self.iter().collect()
    }

    /// Pairwise commuting (including each root with itself, which is vacuous).
    pub fn is_commuting(&self) -> bool {
        let roots = self.to_vec();
        roots
            .iter()
            .enumerate()
            .all(|(k, &a)| roots[k + 1..].iter().all(|&b| commutes(a, b)))
    }

    /// Roots outside the set that commute with every member.
    pub fn commuting_extensions(&self) -> RootSet {
        let table = commuting_masks(self.rank);
        let mut allowed = RootSet::full(self.rank).bits & !self.bits;
        for k in self.indices() {
            allowed &= table[k];
        }
        RootSet { rank: self.rank, bits: allowed }
    }

    /// Commuting and admitting no commuting single-root extension.
    pub fn is_maximal_commuting(&self) -> bool {
        self.is_commuting() && self.commuting_extensions().is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("root set serializes")
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.rank)?;
        for (k, r) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

impl PartialOrd for RootSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorts by rank, then by member list in canonical order (lexicographic).
impl Ord for RootSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for r in self.iter() {
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

/// `table[k]` = mask of roots commuting with root `k` (root `k` itself excluded).
pub fn commuting_masks(rank: Rank) -> Vec<u128> {
    let roots = positive_roots(rank);
    roots
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            roots.iter().enumerate().fold(0u128, |m, (l, &b)| {
                if l != k && commutes(a, b) {
                    m | 1u128 << l
                } else {
                    m
                }
            })
        })
        .collect()
}

/// `φ(J) ∩ Φ⁺ = {ε_i − ε_j : i ∈ J, j ∉ J, i < j}`.
pub fn phi_positive(subset: &[usize], rank: Rank) -> Result<RootSet> {
    let d = rank.dim();
    let mut member = vec![false; d + 1];
    for &i in subset {
        if i == 0 || i > d {
            return Err(Error::InvalidIndexSet(format!("index {i} outside 1..={d}")));
        }
        member[i] = true;
    }
    let size = member.iter().filter(|&&b| b).count();
    if size == 0 || size == d {
        return Err(Error::InvalidIndexSet("J must be a non-trivial proper subset".into()));
    }
    let roots = positive_roots(rank)
        .into_iter()
        .filter(|r| member[r.i as usize] && !member[r.j as usize]);
    RootSet::from_roots(rank, roots)
}

/// `Φ_S^rad`: positive roots whose support meets the simple roots `S`.
pub fn parabolic_radical(simple: &[usize], rank: Rank) -> Result<RootSet> {
    if let Some(&k) = simple.iter().find(|&&k| k == 0 || k > rank.n()) {
        return Err(Error::InvalidIndexSet(format!("simple root index {k} outside 1..={}", rank.n())));
    }
    let roots = positive_roots(rank)
        .into_iter()
        .filter(|r| simple.iter().any(|&k| r.contains_simple(k)));
    RootSet::from_roots(rank, roots)
}

/// Closed under adding positive roots that land in `Φ⁺`.
pub fn is_ideal(set: &RootSet) -> bool {
    let all = positive_roots(set.rank());
    set.iter().all(|a| {
        all.iter()
            .filter_map(|&b| a.sum(b))
            .all(|s| set.contains(s))
    })
}

/// Bijection of `{1, …, n+1}`; `images[k]` is `w(k+1)` (1-based values).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(rank: Rank) -> Self {
        Permutation { images: (1..=rank.dim() as u8).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d + 1];
        for &x in &images {
            if x == 0 || x > d || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    /// The transposition `(a b)`.
    pub fn transposition(rank: Rank, a: usize, b: usize) -> Result<Self> {
        let d = rank.dim();
        if a == 0 || b == 0 || a > d || b > d {
            return Err(Error::InvalidPermutation(format!("({a} {b}) on 1..={d}")));
        }
        let mut w = Self::identity(rank);
        w.images.swap(a - 1, b - 1);
        Ok(w)
    }

    /// Simple reflection `s_k = (k, k+1)`.
    pub fn simple_reflection(rank: Rank, k: usize) -> Result<Self> {
        if k == 0 || k > rank.n() {
            return Err(Error::InvalidPermutation(format!("s_{k} in {rank}")));
        }
        Self::transposition(rank, k, k + 1)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "permutation degree mismatch");
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x as usize - 1] = (k + 1) as u8;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    /// Image of a positive root as a signed root: `(root, positive?)`.
    pub fn act_on_root(&self, r: Root) -> (Root, bool) {
        let a = self.apply(r.i as usize);
        let b = self.apply(r.j as usize);
        if a < b {
            (Root::new_unchecked(a, b), true)
        } else {
            (Root::new_unchecked(b, a), false)
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// `ε_i − ε_j ↦ ε_{w(i)} − ε_{w(j)}`, with negative images replaced by their negatives.
pub fn weyl_apply(w: &Permutation, set: &RootSet) -> Result<RootSet> {
    check_degree(w, set.rank())?;
    let mut out = RootSet::empty(set.rank());
    for r in set.iter() {
        out.insert(w.act_on_root(r).0);
    }
    Ok(out)
}

/// The signed action: `None` if some member is sent to a negative root.
pub fn weyl_apply_strict(w: &Permutation, set: &RootSet) -> Result<Option<RootSet>> {
    check_degree(w, set.rank())?;
    let mut out = RootSet::empty(set.rank());
    for r in set.iter() {
        match w.act_on_root(r) {
            (img, true) => out.insert(img),
            (_, false) => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn check_degree(w: &Permutation, rank: Rank) -> Result<()> {
    if w.degree() == rank.dim() {
        Ok(())
    } else {
        Err(Error::InvalidPermutation(format!("degree {} acting on {rank}", w.degree())))
    }
}
