//! Automorphisms of `u` and their action on subspaces: `exp(ad(a x_α))`,
//! diagonal torus scalings and Weyl (permutation) conjugation. Also the
//! search for a Weyl element carrying one root set onto another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nilradical::{FieldSpec, UVector};
use crate::roots::{positive_roots, structure_constant, Permutation, Rank, Root, RootSet};
use crate::subspace::{reduce_echelon, EchelonSubspace};

/// One factor of an [`Automorphism`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `x ↦ x + a [x_α, x]`.
    ExpAd { a: u32, root: Root },
    /// `x_{ij} ↦ d_i d_j^{-1} x_{ij}`.
    Torus { scalars: Vec<u32> },
    /// `x_{ij} ↦ x_{w(i) w(j)}`.
    Weyl { perm: Permutation },
}

/// Composite of generators, applied first to last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    #[serde(skip)]
    field: FieldSpec,
    generators: Vec<Generator>,
}

impl Automorphism {
    pub fn identity(field: &FieldSpec) -> Self {
        Automorphism { field: *field, generators: Vec::new() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn provenance_json(&self) -> String {
        serde_json::to_string(&self.generators).expect("generators serialize")
    }

    /// `exp(ad(a x_α))`. On `u` in type A, `ad(x_α)²` vanishes, so the series
    /// stops after the linear term; this is checked on every basis vector.
    pub fn exp_ad(field: &FieldSpec, a: i64, alpha: Root) -> Result<Self> {
        let rank = field.rank();
        if !alpha.fits(rank) {
            return Err(Error::InvalidRoot(format!("{alpha} in {rank}")));
        }
        for beta in positive_roots(rank) {
            if let Some(s) = alpha.sum(beta) {
                assert!(
                    alpha.sum(s).is_none(),
                    "ad(x_{alpha})^2 does not vanish on x_{beta}; exp(ad) would need higher terms"
                );
            }
        }
        Ok(Automorphism {
            field: *field,
            generators: vec![Generator::ExpAd { a: field.fp().from_i64(a), root: alpha }],
        })
    }

    pub fn torus(field: &FieldSpec, scalars: &[u32]) -> Result<Self> {
        let d = field.rank().dim();
        if scalars.len() != d {
            return Err(Error::Precondition(format!("torus needs {d} scalars, got {}", scalars.len())));
        }
        let reduced: Vec<u32> = scalars.iter().map(|&s| s % field.p()).collect();
        if reduced.contains(&0) {
            return Err(Error::Precondition("torus scalars must be nonzero".into()));
        }
        Ok(Automorphism { field: *field, generators: vec![Generator::Torus { scalars: reduced }] })
    }

    pub fn weyl(field: &FieldSpec, perm: Permutation) -> Result<Self> {
        if perm.degree() != field.rank().dim() {
            return Err(Error::InvalidPermutation(format!("degree {} on {}", perm.degree(), field.rank())));
        }
        Ok(Automorphism { field: *field, generators: vec![Generator::Weyl { perm }] })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Automorphism) -> Result<Self> {
        self.field.check(&next.field)?;
        let mut generators = self.generators.clone();
        generators.extend(next.generators.iter().cloned());
        Ok(Automorphism { field: self.field, generators })
    }

    pub fn inverse(&self) -> Self {
        let fp = self.field.fp();
        let generators = self
            .generators
            .iter()
            .rev()
            .map(|g| match g {
                Generator::ExpAd { a, root } => Generator::ExpAd { a: fp.neg(*a), root: *root },
                Generator::Torus { scalars } => Generator::Torus { scalars: scalars.iter().map(|&s| fp.inv(s)).collect() },
                Generator::Weyl { perm } => Generator::Weyl { perm: perm.inverse() },
            })
            .collect();
        Automorphism { field: self.field, generators }
    }

    /// True when built only from `exp_ad` and torus factors (elements of `B`).
    pub fn is_borel(&self) -> bool {
        self.generators.iter().all(|g| !matches!(g, Generator::Weyl { .. }))
    }

    pub fn apply_vector(&self, v: &UVector) -> Result<UVector> {
        self.field.check(v.field())?;
        let mut cur = v.clone();
        for g in &self.generators {
            cur = apply_generator(&self.field, g, &cur)?;
        }
        Ok(cur)
    }

    /// Images of the root vectors, in canonical order (rows = images).
    pub fn matrix(&self) -> Result<Vec<Vec<u32>>> {
        positive_roots(self.field.rank())
            .into_iter()
            .map(|r| Ok(self.apply_vector(&self.field.root_vector(r))?.into_coeffs()))
            .collect()
    }
}

fn apply_generator(field: &FieldSpec, g: &Generator, v: &UVector) -> Result<UVector> {
    let rank = field.rank();
    let fp = field.fp();
    match g {
        Generator::ExpAd { a, root } => {
            let mut out = v.clone();
            if *a == 0 {
                return Ok(out);
            }
            for (k, &c) in v.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let beta = rank.root_at(k);
                if let Some(s) = root.sum(beta) {
                    let n = fp.from_i64(structure_constant(*root, beta) as i64);
                    let idx = rank.index_of(s);
                    let slot = &mut out.coeffs_mut()[idx];
                    *slot = fp.add(*slot, fp.mul(*a, fp.mul(n, c)));
                }
            }
            Ok(out)
        }
        Generator::Torus { scalars } => {
            let mut out = v.clone();
            for (k, c) in out.coeffs_mut().iter_mut().enumerate() {
                if *c != 0 {
                    let r = rank.root_at(k);
                    let weight = fp.mul(scalars[r.i as usize - 1], fp.inv(scalars[r.j as usize - 1]));
                    *c = fp.mul(*c, weight);
                }
            }
            Ok(out)
        }
        Generator::Weyl { perm } => {
            let mut out = field.zero();
            for (k, &c) in v.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let r = rank.root_at(k);
                match perm.act_on_root(r) {
                    (img, true) => out.coeffs_mut()[rank.index_of(img)] = c,
                    (_, false) => return Err(Error::ImageOutsideU(r.to_string())),
                }
            }
            Ok(out)
        }
    }
}

/// Image subspace, re-echelonized under the subspace's own order.
pub fn apply(aut: &Automorphism, e: &EchelonSubspace) -> Result<EchelonSubspace> {
    aut.field.check(e.field())?;
    let images = e.basis().iter().map(|v| aut.apply_vector(v)).collect::<Result<Vec<_>>>()?;
    reduce_echelon(e.field(), &images, e.order())
}

/// Seeded product of `exp(ad(t_α x_α))` over all positive roots in canonical
/// order, optionally followed by a random torus element.
pub fn random_unipotent(seed: u64, field: &FieldSpec, with_torus: bool) -> Automorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unipotent_from(&mut rng, field, with_torus)
}

pub fn random_unipotent_from(rng: &mut impl Rng, field: &FieldSpec, with_torus: bool) -> Automorphism {
    let p = field.p();
    let mut generators: Vec<Generator> = positive_roots(field.rank())
        .into_iter()
        .map(|root| Generator::ExpAd { a: rng.gen_range(0..p), root })
        .collect();
    if with_torus {
        let scalars = (0..field.rank().dim()).map(|_| rng.gen_range(1..p)).collect();
        generators.push(Generator::Torus { scalars });
    }
    Automorphism { field: *field, generators }
}

/// Vertex data for `{(i, j) : ε_i − ε_j ∈ R}` as a directed graph on `1..=n+1`.
struct RootGraph {
    adj: Vec<Vec<bool>>,
    degrees: Vec<(usize, usize)>,
}

impl RootGraph {
    fn new(set: &RootSet) -> Self {
        let d = set.rank().dim();
        let mut adj = vec![vec![false; d + 1]; d + 1];
        let mut degrees = vec![(0, 0); d + 1];
        for r in set.iter() {
            adj[r.i as usize][r.j as usize] = true;
            degrees[r.i as usize].0 += 1;
            degrees[r.j as usize].1 += 1;
        }
        RootGraph { adj, degrees }
    }

    fn degree_profile(&self) -> Vec<(usize, usize)> {
        let mut v = self.degrees[1..].to_vec();
        v.sort_unstable();
        v
    }
}

/// A permutation `w` with `w(R1) = R2` as sets of (positive) roots, if any.
///
/// Exhaustive backtracking over `S_{n+1}`, assigning `w(1), w(2), …` in
/// increasing order; candidates must match (out-degree, in-degree) and every
/// pair already placed must map roots to roots and non-roots to non-roots.
pub fn weyl_conjugacy_search(r1: &RootSet, r2: &RootSet) -> Result<Option<Permutation>> {
    r1.rank().check(r2.rank())?;
    if r1.len() != r2.len() {
        return Ok(None);
    }
    let g1 = RootGraph::new(r1);
    let g2 = RootGraph::new(r2);
    if g1.degree_profile() != g2.degree_profile() {
        return Ok(None);
    }
    let d = r1.rank().dim();
    let mut images = vec![0usize; d + 1];
    let mut used = vec![false; d + 1];
    if extend(&g1, &g2, d, 1, &mut images, &mut used) {
        let w = Permutation::from_images(images[1..].to_vec())?;
        debug_assert_eq!(crate::roots::weyl_apply_strict(&w, r1).ok().flatten().as_ref(), Some(r2));
        Ok(Some(w))
    } else {
        Ok(None)
    }
}

fn extend(g1: &RootGraph, g2: &RootGraph, d: usize, v: usize, images: &mut [usize], used: &mut [bool]) -> bool {
    if v > d {
        return true;
    }
    for t in 1..=d {
        if used[t] || g1.degrees[v] != g2.degrees[t] {
            continue;
        }
        let consistent = (1..v).all(|u| {
            let a = images[u];
            let forward = a < t && g2.adj[a][t];
            let backward = t < a && g2.adj[t][a];
            g1.adj[u][v] == forward && !backward
        });
        if !consistent {
            continue;
        }
        images[v] = t;
        used[t] = true;
        if extend(g1, g2, d, v + 1, images, used) {
            return true;
        }
        used[t] = false;
    }
    false
}

/// Brute-force reference: scans all of `S_{n+1}` in lexicographic order.
pub fn weyl_conjugacy_brute_force(r1: &RootSet, r2: &RootSet) -> Result<Option<Permutation>> {
    r1.rank().check(r2.rank())?;
    let d = r1.rank().dim();
    let mut perm: Vec<usize> = (1..=d).collect();
    loop {
        let w = Permutation::from_images(perm.clone())?;
        if crate::roots::weyl_apply_strict(&w, r1)?.as_ref() == Some(r2) {
            return Ok(Some(w));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `s_k` as an automorphism, for convenience.
pub fn simple_reflection(field: &FieldSpec, k: usize) -> Result<Automorphism> {
    Automorphism::weyl(field, Permutation::simple_reflection(field.rank(), k)?)
}

/// Root set of a rank, re-exported for callers building conjugacy queries.
pub fn rank_of(set: &RootSet) -> Rank {
    set.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilradical::bracket;
    use crate::ordering::paper_order;
    use crate::roots::{highest_root, parabolic_radical, phi_positive};
    use crate::subspace::leading_terms;

    fn rk(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn r(i: usize, j: usize) -> Root {
        Root { i: i as u8, j: j as u8 }
    }

    fn f55() -> FieldSpec {
        FieldSpec::new(5, rk(5)).unwrap()
    }

    #[test]
    fn exp_ad_examples() {
        let f = f55();
        for a in 0..5i64 {
            let g = Automorphism::exp_ad(&f, a, r(3, 4)).unwrap();
            let img = g.apply_vector(&f.root_vector(r(4, 5))).unwrap();
            assert_eq!(img, f.vector_from(&[(r(4, 5), 1), (r(3, 5), a)]).unwrap());
        }
        let id = Automorphism::exp_ad(&f, 0, r(3, 4)).unwrap();
        let x = f.vector_from(&[(r(1, 3), 2), (r(4, 6), 3), (r(2, 3), 1)]).unwrap();
        assert_eq!(id.apply_vector(&x).unwrap(), x);
        let there = Automorphism::exp_ad(&f, 3, r(3, 4)).unwrap();
        let back = Automorphism::exp_ad(&f, -3, r(3, 4)).unwrap();
        assert_eq!(there.then(&back).unwrap().apply_vector(&x).unwrap(), x);
    }

    #[test]
    fn weyl_moves_odd_set_into_radical() {
        let f = f55();
        let ord = paper_order(rk(5)).unwrap();
        let odd = phi_positive(&[1, 2, 4], rk(5)).unwrap();
        let target = parabolic_radical(&[3], rk(5)).unwrap().without(r(3, 4));
        let e = EchelonSubspace::lie(&odd, &f, &ord).unwrap();
        let img = apply(&simple_reflection(&f, 3).unwrap(), &e).unwrap();
        assert_eq!(img, EchelonSubspace::lie(&target, &f, &ord).unwrap());
        assert_eq!(apply(&Automorphism::identity(&f), &e).unwrap(), e);
        // s_1 sends x_{α_1} out of u.
        let a1 = EchelonSubspace::lie(&RootSet::from_roots(rk(5), [r(1, 2)]).unwrap(), &f, &ord).unwrap();
        assert!(matches!(apply(&simple_reflection(&f, 1).unwrap(), &a1), Err(Error::ImageOutsideU(_))));
    }

    #[test]
    fn exp_ad_keeps_leading_terms() {
        let f = f55();
        let ord = paper_order(rk(5)).unwrap();
        let odd = phi_positive(&[1, 2, 4], rk(5)).unwrap();
        let e = EchelonSubspace::lie(&odd, &f, &ord).unwrap();
        for a in 0..5 {
            let img = apply(&Automorphism::exp_ad(&f, a, r(3, 4)).unwrap(), &e).unwrap();
            assert_eq!(leading_terms(&img), odd);
        }
    }

    #[test]
    fn random_unipotent_is_deterministic_and_invertible() {
        let f = f55();
        let g = random_unipotent(7, &f, true);
        assert_eq!(g, random_unipotent(7, &f, true));
        assert_ne!(g, random_unipotent(8, &f, true));
        let x = f.vector_from(&[(r(1, 2), 1), (r(2, 6), 4), (r(3, 5), 2)]).unwrap();
        assert_eq!(g.inverse().apply_vector(&g.apply_vector(&x).unwrap()).unwrap(), x);
        let zeros: Vec<Generator> = positive_roots(rk(5)).into_iter().map(|root| Generator::ExpAd { a: 0, root }).collect();
        let trivial = Automorphism { field: f, generators: zeros };
        assert_eq!(trivial.apply_vector(&x).unwrap(), x);
    }

    #[test]
    fn automorphism_preserves_brackets() {
        let f = FieldSpec::new(7, rk(4)).unwrap();
        let g = random_unipotent(3, &f, true);
        for a in positive_roots(rk(4)) {
            for b in positive_roots(rk(4)) {
                let lhs = g.apply_vector(&bracket(&f.root_vector(a), &f.root_vector(b)).unwrap()).unwrap();
                let ga = g.apply_vector(&f.root_vector(a)).unwrap();
                let gb = g.apply_vector(&f.root_vector(b)).unwrap();
                assert_eq!(lhs, bracket(&ga, &gb).unwrap());
            }
        }
    }

    #[test]
    fn conjugacy_examples() {
        let r5 = rk(5);
        let odd = phi_positive(&[1, 2, 4], r5).unwrap();
        let target = parabolic_radical(&[3], r5).unwrap().without(r(3, 4));
        let w = weyl_conjugacy_search(&odd, &target).unwrap().expect("conjugate");
        assert_eq!(crate::roots::weyl_apply(&w, &odd).unwrap(), target);

        let rad2 = parabolic_radical(&[2], r5).unwrap();
        let rad4 = parabolic_radical(&[4], r5).unwrap();
        assert_eq!(weyl_conjugacy_search(&rad2, &rad4).unwrap(), None);
        assert_eq!(weyl_conjugacy_brute_force(&rad2, &rad4).unwrap(), None);

        let r6 = rk(6);
        let gamma = highest_root(r6);
        let a = parabolic_radical(&[3], r6).unwrap().without(gamma);
        let b = parabolic_radical(&[4], r6).unwrap().without(gamma);
        assert_eq!(weyl_conjugacy_search(&a, &b).unwrap(), None);
        assert_eq!(weyl_conjugacy_brute_force(&a, &b).unwrap(), None);
    }

    #[test]
    fn search_agrees_with_brute_force_on_small_sets() {
        let rank = rk(3);
        let total = rank.num_positive();
        for b1 in 0u128..1 << total {
            for b2 in [0b000111u128, 0b010110, 0b101001, 0b110000, b1 ^ 0b1] {
                let s1 = RootSet::from_bits(rank, b1);
                let s2 = RootSet::from_bits(rank, b2 & RootSet::full(rank).bits());
                let fast = weyl_conjugacy_search(&s1, &s2).unwrap();
                let slow = weyl_conjugacy_brute_force(&s1, &s2).unwrap();
                assert_eq!(fast.is_some(), slow.is_some(), "{s1:?} {s2:?}");
            }
        }
    }

    #[test]
    fn provenance_records() {
        let f = f55();
        let g = Automorphism::exp_ad(&f, 2, r(3, 4))
            .unwrap()
            .then(&Automorphism::torus(&f, &[1, 2, 3, 4, 1, 1]).unwrap())
            .unwrap();
        assert_eq!(
            g.provenance_json(),
            r#"[{"kind":"exp_ad","a":2,"root":"3-4"},{"kind":"torus","scalars":[1,2,3,4,1,1]}]"#
        );
        assert!(Automorphism::torus(&f, &[1, 0, 1, 1, 1, 1]).is_err());
    }
}
