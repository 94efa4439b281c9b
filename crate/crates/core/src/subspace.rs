//! Reduced echelon forms of subspaces of `u`, leading terms, centralizers and
//! maximality of elementary subalgebras inside `u`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{nullspace, rref_with_columns};
use crate::nilradical::{bracket, is_p_nilpotent, lie_span, FieldSpec, UVector};
use crate::ordering::TotalOrder;
use crate::roots::{positive_roots, structure_constant, RootSet};

/// Subspace of `u` in reduced echelon form with respect to a total order.
///
/// Basis vectors are sorted by decreasing pivot. Each pivot coefficient is 1
/// and every other basis vector vanishes at that pivot, so two subspaces are
/// equal iff their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EchelonSubspace {
    #[serde(skip)]
    field: FieldSpec,
    p: u32,
    n: usize,
    order: TotalOrder,
    pivots: RootSet,
    basis: Vec<UVector>,
}

impl EchelonSubspace {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn order(&self) -> &TotalOrder {
        &self.order
    }

    pub fn basis(&self) -> &[UVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> RootSet {
        self.pivots
    }

    pub fn zero(field: &FieldSpec, order: &TotalOrder) -> Self {
        Self {
            field: *field,
            p: field.p(),
            n: field.rank().n(),
            order: order.clone(),
            pivots: RootSet::empty(field.rank()),
            basis: Vec::new(),
        }
    }

    /// `Lie(R)` in echelon form.
    pub fn lie(set: &RootSet, field: &FieldSpec, order: &TotalOrder) -> Result<Self> {
        reduce_echelon(field, lie_span(set, field)?.vectors(), order)
    }

    /// Reduces `v` modulo the subspace (clears every pivot coordinate).
    pub fn reduce(&self, v: &UVector) -> Result<UVector> {
        self.field.check(v.field())?;
        let fp = self.field.fp();
        let mut out = v.clone();
        for b in &self.basis {
            let k = self.field.rank().index_of(self.order.leading_root(b)?);
            let c = out.coeffs()[k];
            if c != 0 {
                fp.axpy(fp.neg(c), b.coeffs(), out.coeffs_mut());
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &UVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    pub fn is_subspace_of(&self, other: &EchelonSubspace) -> Result<bool> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The subspace spanned by `self` and `extra`.
    pub fn extended(&self, extra: &[UVector]) -> Result<Self> {
        let mut all = self.basis.clone();
        all.extend_from_slice(extra);
        reduce_echelon(&self.field, &all, &self.order)
    }

    /// Same subspace re-reduced under a different order.
    pub fn reordered(&self, order: &TotalOrder) -> Result<Self> {
        reduce_echelon(&self.field, &self.basis, order)
    }
}

/// Gaussian elimination with columns taken in decreasing order.
pub fn reduce_echelon(field: &FieldSpec, vectors: &[UVector], order: &TotalOrder) -> Result<EchelonSubspace> {
    field.rank().check(order.rank())?;
    for v in vectors {
        field.check(v.field())?;
    }
    let mut rows: Vec<Vec<u32>> = vectors
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.coeffs().to_vec())
        .collect();
    let cols: Vec<usize> = order.descending().collect();
    let pivot_cols = rref_with_columns(field.fp(), &mut rows, &cols);
    let pivots = RootSet::from_bits(field.rank(), pivot_cols.iter().fold(0u128, |m, &k| m | 1u128 << k));
    let basis = rows
        .into_iter()
        .map(|row| field.vector_from_coeffs(row))
        .collect::<Result<Vec<_>>>()?;
    Ok(EchelonSubspace {
        field: *field,
        p: field.p(),
        n: field.rank().n(),
        order: order.clone(),
        pivots,
        basis,
    })
}

/// The pivot set `LT(e)`.
pub fn leading_terms(e: &EchelonSubspace) -> RootSet {
    e.pivots
}

/// Abelian with every basis vector `p`-nilpotent.
pub fn is_elementary(e: &EchelonSubspace) -> bool {
    is_abelian(e) && e.basis.iter().all(is_p_nilpotent)
}

pub fn is_abelian(e: &EchelonSubspace) -> bool {
    e.basis.iter().enumerate().all(|(k, a)| {
        e.basis[k + 1..]
            .iter()
            .all(|b| bracket(a, b).map(|c| c.is_zero()).unwrap_or(false))
    })
}

/// `{x ∈ u : [x, v] = 0 for all v ∈ e}`.
pub fn centralizer_in_u(e: &EchelonSubspace) -> Result<EchelonSubspace> {
    let field = e.field;
    let rank = field.rank();
    let fp = field.fp();
    let roots = positive_roots(rank);
    let dim = roots.len();
    // One block of rows per basis vector v: row s, column c holds the
    // coefficient of x_s in [x_c, v].
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(e.dim() * dim);
    for v in &e.basis {
        let mut block = vec![vec![0u32; dim]; dim];
        for (c, &rc) in roots.iter().enumerate() {
            for (b, &vb) in v.coeffs().iter().enumerate() {
                if vb == 0 {
                    continue;
                }
                if let Some(s) = rc.sum(roots[b]) {
                    let n = fp.from_i64(structure_constant(rc, roots[b]) as i64);
                    let row = &mut block[rank.index_of(s)];
                    row[c] = fp.add(row[c], fp.mul(n, vb));
                }
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|&x| x != 0)));
    }
    let kernel = nullspace(fp, &rows, dim)
        .into_iter()
        .map(|c| field.vector_from_coeffs(c))
        .collect::<Result<Vec<_>>>()?;
    reduce_echelon(&field, &kernel, &e.order)
}

/// Outcome of the maximality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Maximality {
    Maximal,
    /// `e ⊕ k·witness` is elementary.
    Extendable { witness: UVector },
    /// `p^(dim c − dim e)` exceeded the budget.
    Inconclusive { cosets: u128 },
}

impl Maximality {
    pub fn is_maximal(&self) -> bool {
        matches!(self, Maximality::Maximal)
    }
}

pub const DEFAULT_COSET_BUDGET: u64 = 1_000_000;

/// Maximality of an elementary `e` among elementary subalgebras of `u`.
///
/// For `x` in the centralizer `c` and `v ∈ e`, `(x + v)^p = x^p`, so one
/// representative per projective point of `c / e` decides the question.
pub fn is_maximal_elementary(e: &EchelonSubspace, budget: u64) -> Result<Maximality> {
    if !is_elementary(e) {
        return Err(Error::Precondition("subspace is not elementary".into()));
    }
    let c = centralizer_in_u(e)?;
    let complement = complement_in(e, &c)?;
    let d = complement.len();
    if d == 0 {
        return Ok(Maximality::Maximal);
    }
    let p = e.field.p() as u128;
    let cosets = p.checked_pow(d as u32).unwrap_or(u128::MAX);
    if cosets > budget as u128 {
        return Ok(Maximality::Inconclusive { cosets });
    }
    let fp = e.field.fp();
    let mut found = None;
    for_each_projective_point(e.field.p(), d, |coords| {
        let mut w = e.field.zero();
        for (a, v) in coords.iter().zip(&complement) {
            fp.axpy(*a, v.coeffs(), w.coeffs_mut());
        }
        if is_p_nilpotent(&w) {
            found = Some(w);
            false
        } else {
            true
        }
    });
    Ok(match found {
        Some(witness) => Maximality::Extendable { witness },
        None => Maximality::Maximal,
    })
}

/// Vectors spanning a complement of `e` inside `c` (`e ⊆ c` assumed), each
/// vanishing at the pivots of `e`.
pub fn complement_in(e: &EchelonSubspace, c: &EchelonSubspace) -> Result<Vec<UVector>> {
    let reduced = c
        .basis
        .iter()
        .map(|v| e.reduce(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce_echelon(&e.field, &reduced, &e.order)?.basis)
}

/// Calls `visit` on one representative per line of `F_p^d` (first nonzero
/// coordinate equal to 1) until it returns `false`.
pub fn for_each_projective_point(p: u32, d: usize, mut visit: impl FnMut(&[u32]) -> bool) {
    let mut coords = vec![0u32; d];
    for lead in 0..d {
        coords.iter_mut().for_each(|c| *c = 0);
        coords[lead] = 1;
        loop {
            if !visit(&coords) {
                return;
            }
            // Odometer over the coordinates after `lead`.
            let mut wrapped = true;
            for k in (lead + 1..d).rev() {
                coords[k] += 1;
                if coords[k] < p {
                    wrapped = false;
                    break;
                }
                coords[k] = 0;
            }
            if wrapped {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::paper_order;
    use crate::roots::{parabolic_radical, phi_positive, Rank, Root};

    fn rk(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn r(i: usize, j: usize) -> Root {
        Root { i: i as u8, j: j as u8 }
    }

    fn a5() -> (FieldSpec, TotalOrder) {
        (FieldSpec::new(5, rk(5)).unwrap(), paper_order(rk(5)).unwrap())
    }

    #[test]
    fn echelon_examples() {
        let (f, ord) = a5();
        // (1,2) ≻ (3,4) under the A_5 order.
        let a = r(1, 2);
        let b = r(3, 4);
        assert!(ord.greater(a, b));
        let v = f.vector_from(&[(a, 1), (b, 1)]).unwrap();
        let e = reduce_echelon(&f, &[v, f.root_vector(b)], &ord).unwrap();
        assert_eq!(e.basis(), &[f.root_vector(a), f.root_vector(b)]);
        assert_eq!(leading_terms(&e), RootSet::from_roots(rk(5), [a, b]).unwrap());

        let rad = parabolic_radical(&[2], rk(5)).unwrap();
        let lie = EchelonSubspace::lie(&rad, &f, &ord).unwrap();
        assert_eq!(leading_terms(&lie), rad);
        assert_eq!(lie.dim(), rad.len());

        let x = f.vector_from(&[(r(1, 3), 1), (r(3, 4), 1)]).unwrap();
        let line = reduce_echelon(&f, &[x.clone(), x.scaled(2)], &ord).unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(leading_terms(&line), RootSet::from_roots(rk(5), [r(1, 3)]).unwrap());
    }

    #[test]
    fn elementary_examples() {
        let (f, ord) = a5();
        let rad3 = parabolic_radical(&[3], rk(5)).unwrap();
        assert!(is_elementary(&EchelonSubspace::lie(&rad3, &f, &ord).unwrap()));
        let f2 = FieldSpec::new(5, rk(2)).unwrap();
        let o2 = paper_order(rk(2)).unwrap();
        let e = reduce_echelon(&f2, &[f2.root_vector(r(1, 2)), f2.root_vector(r(2, 3))], &o2).unwrap();
        assert!(!is_elementary(&e));
        assert!(is_elementary(&EchelonSubspace::zero(&f, &ord)));
    }

    #[test]
    fn centralizer_examples() {
        let (f, ord) = a5();
        for k in [2, 3] {
            let rad = parabolic_radical(&[k], rk(5)).unwrap();
            let lie = EchelonSubspace::lie(&rad, &f, &ord).unwrap();
            assert_eq!(centralizer_in_u(&lie).unwrap(), lie);
        }
        let zero = EchelonSubspace::zero(&f, &ord);
        assert_eq!(centralizer_in_u(&zero).unwrap().dim(), 15);
    }

    #[test]
    fn maximality_examples() {
        let (f, ord) = a5();
        let rad2 = parabolic_radical(&[2], rk(5)).unwrap();
        let rad3 = parabolic_radical(&[3], rk(5)).unwrap();
        let lie = |s: &RootSet| EchelonSubspace::lie(s, &f, &ord).unwrap();
        assert_eq!(is_maximal_elementary(&lie(&rad2), 1000).unwrap(), Maximality::Maximal);
        assert_eq!(is_maximal_elementary(&lie(&rad3), 1000).unwrap(), Maximality::Maximal);
        let sub = rad3.without(r(3, 4));
        match is_maximal_elementary(&lie(&sub), 1000).unwrap() {
            Maximality::Extendable { witness } => {
                let ext = lie(&sub).extended(&[witness]).unwrap();
                assert_eq!(ext.dim(), 9);
                assert!(is_elementary(&ext));
            }
            other => panic!("expected extendable, got {other:?}"),
        }
        let f2 = FieldSpec::new(5, rk(2)).unwrap();
        let o2 = paper_order(rk(2)).unwrap();
        let bad = reduce_echelon(&f2, &[f2.root_vector(r(1, 2)), f2.root_vector(r(2, 3))], &o2).unwrap();
        assert!(is_maximal_elementary(&bad, 10).is_err());
    }

    #[test]
    fn odd_set_is_maximal_in_u() {
        let (f, ord) = a5();
        let odd = phi_positive(&[1, 2, 4], rk(5)).unwrap();
        let lie = EchelonSubspace::lie(&odd, &f, &ord).unwrap();
        assert!(is_maximal_elementary(&lie, 1000).unwrap().is_maximal());
    }

    #[test]
    fn projective_points_count() {
        for (p, d) in [(2, 1), (2, 3), (3, 2), (5, 3)] {
            let mut seen = std::collections::HashSet::new();
            for_each_projective_point(p, d, |c| {
                let lead = c.iter().position(|&x| x != 0).unwrap();
                assert_eq!(c[lead], 1);
                assert!(seen.insert(c.to_vec()));
                true
            });
            let expected = (p.pow(d as u32) - 1) / (p - 1);
            assert_eq!(seen.len() as u32, expected, "p={p} d={d}");
        }
    }
}
