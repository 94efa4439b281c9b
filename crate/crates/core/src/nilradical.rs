//! The nilradical `u` of `sl_{n+1}` over `F_p`: strictly upper-triangular
//! matrices, written in the root-vector basis `x_{ij} = E_{ij}`.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{mat_mul, rank_of, Fp};
use crate::roots::{positive_roots, structure_constant, Rank, Root, RootSet};

/// A prime together with the rank it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    fp: Fp,
    rank: Rank,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("p", &self.p())?;
        m.serialize_entry("n", &self.rank.n())?;
        m.serialize_entry("standard", &self.is_standard())?;
        m.end()
    }
}

impl FieldSpec {
    /// Requires `p` prime with `p ∤ n+1`.
    pub fn new(p: u32, rank: Rank) -> Result<Self> {
        let spec = Self::new_nonstandard(p, rank)?;
        if rank.dim().is_multiple_of(p as usize) {
            return Err(Error::NonStandardPrime { p, n_plus_one: rank.dim() });
        }
        Ok(spec)
    }

    /// Skips the `p ∤ n+1` guard.
    pub fn new_nonstandard(p: u32, rank: Rank) -> Result<Self> {
        Ok(FieldSpec { fp: Fp::new(p)?, rank })
    }

    /// Smallest prime not dividing `n + 1`.
    pub fn default_prime(rank: Rank) -> u32 {
        (2u32..)
            .find(|&p| crate::field::is_prime(p) && !rank.dim().is_multiple_of(p as usize))
            .expect("some prime does not divide n+1")
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.fp.p()
    }

    #[inline]
    pub fn fp(&self) -> Fp {
        self.fp
    }

    #[inline]
    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn is_standard(&self) -> bool {
        !self.rank.dim().is_multiple_of(self.p() as usize)
    }

    pub fn check(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                p1: self.p(),
                n1: self.rank.n(),
                p2: other.p(),
                n2: other.rank.n(),
            })
        }
    }

    /// `dim u`.
    pub fn dim(&self) -> usize {
        self.rank.num_positive()
    }

    pub fn zero(&self) -> UVector {
        UVector { field: *self, coeffs: vec![0; self.dim()] }
    }

    pub fn root_vector(&self, r: Root) -> UVector {
        let mut v = self.zero();
        v.coeffs[self.rank.index_of(r)] = 1;
        v
    }

    pub fn vector_from(&self, terms: &[(Root, i64)]) -> Result<UVector> {
        let mut v = self.zero();
        for &(r, c) in terms {
            if !r.fits(self.rank) {
                return Err(Error::InvalidRoot(format!("{r} in {}", self.rank)));
            }
            let k = self.rank.index_of(r);
            v.coeffs[k] = self.fp.add(v.coeffs[k], self.fp.from_i64(c));
        }
        Ok(v)
    }

    pub fn vector_from_coeffs(&self, coeffs: Vec<u32>) -> Result<UVector> {
        if coeffs.len() != self.dim() {
            return Err(Error::Parse(format!("expected {} coefficients, got {}", self.dim(), coeffs.len())));
        }
        let p = self.p();
        Ok(UVector { field: *self, coeffs: coeffs.into_iter().map(|c| c % p).collect() })
    }
}

/// Element of `u`; coefficient `k` belongs to the `k`-th positive root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UVector {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl UVector {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [u32] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn coeff(&self, r: Root) -> u32 {
        self.coeffs[self.field.rank.index_of(r)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Roots with nonzero coefficient.
    pub fn support(&self) -> RootSet {
        let bits = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(0u128, |m, (k, _)| m | 1u128 << k);
        RootSet::from_bits(self.field.rank, bits)
    }

    pub fn add(&self, other: &UVector) -> Result<UVector> {
        self.field.check(&other.field)?;
        let mut out = self.clone();
        self.field.fp.axpy(1, &other.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn sub(&self, other: &UVector) -> Result<UVector> {
        self.field.check(&other.field)?;
        let mut out = self.clone();
        self.field.fp.axpy(self.field.p() - 1, &other.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn scaled(&self, a: u32) -> UVector {
        let mut out = self.clone();
        self.field.fp.scale(a % self.field.p(), &mut out.coeffs);
        out
    }

    /// `(n+1) × (n+1)` row-major matrix.
    pub fn to_matrix(&self) -> Vec<u32> {
        let d = self.field.rank.dim();
        let mut m = vec![0u32; d * d];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let r = self.field.rank.root_at(k);
                m[(r.i as usize - 1) * d + r.j as usize - 1] = c;
            }
        }
        m
    }

    /// Reads the strictly upper part of a matrix; `None` if anything else is nonzero.
    pub fn from_matrix(field: &FieldSpec, m: &[u32]) -> Option<UVector> {
        let d = field.rank.dim();
        let mut v = field.zero();
        for i in 0..d {
            for j in 0..d {
                let c = m[i * d + j] % field.p();
                if c == 0 {
                    continue;
                }
                if i >= j {
                    return None;
                }
                v.coeffs[field.rank.index_of(Root::new_unchecked(i + 1, j + 1))] = c;
            }
        }
        Some(v)
    }
}

impl Serialize for UVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a UVector);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let v = self.0;
                let nz = v.coeffs.iter().filter(|&&c| c != 0).count();
                let mut map = s.serialize_map(Some(nz))?;
                for (k, &c) in v.coeffs.iter().enumerate() {
                    if c != 0 {
                        map.serialize_entry(&v.field.rank.root_at(k).to_string(), &c)?;
                    }
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("p", &self.field.p())?;
        map.serialize_entry("n", &self.field.rank.n())?;
        map.serialize_entry("coeffs", &Coeffs(self))?;
        map.end()
    }
}

#[derive(Deserialize)]
struct UVectorJson {
    p: u32,
    n: usize,
    coeffs: BTreeMap<String, i64>,
}

impl UVector {
    /// Parses `{"p": 5, "n": 5, "coeffs": {"1-3": 1}}`.
    pub fn from_json(text: &str, allow_nonstandard: bool) -> Result<UVector> {
        let raw: UVectorJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rank = Rank::new(raw.n)?;
        let field = if allow_nonstandard {
            FieldSpec::new_nonstandard(raw.p, rank)?
        } else {
            FieldSpec::new(raw.p, rank)?
        };
        let terms = raw
            .coeffs
            .iter()
            .map(|(k, &c)| Ok((k.parse::<Root>()?, c)))
            .collect::<Result<Vec<_>>>()?;
        field.vector_from(&terms)
    }
}

/// Bilinear extension of `[x_a, x_b] = N_{a,b} x_{a+b}`.
pub fn bracket(x: &UVector, y: &UVector) -> Result<UVector> {
    x.field.check(&y.field)?;
    let rank = x.field.rank;
    let fp = x.field.fp;
    let roots = positive_roots(rank);
    let mut out = x.field.zero();
    let xs: Vec<usize> = (0..roots.len()).filter(|&k| x.coeffs[k] != 0).collect();
    let ys: Vec<usize> = (0..roots.len()).filter(|&k| y.coeffs[k] != 0).collect();
    for &a in &xs {
        for &b in &ys {
            if let Some(s) = roots[a].sum(roots[b]) {
                let n = fp.from_i64(structure_constant(roots[a], roots[b]) as i64);
                let term = fp.mul(n, fp.mul(x.coeffs[a], y.coeffs[b]));
                let k = rank.index_of(s);
                out.coeffs[k] = fp.add(out.coeffs[k], term);
            }
        }
    }
    Ok(out)
}

/// `x^p = 0` as a matrix power.
pub fn is_p_nilpotent(x: &UVector) -> bool {
    let fp = x.field.fp;
    let d = x.field.rank.dim();
    let m = x.to_matrix();
    let mut acc = m.clone();
    for _ in 1..x.field.p() {
        if acc.iter().all(|&c| c == 0) {
            return true;
        }
        acc = mat_mul(fp, &acc, &m, d);
    }
    acc.iter().all(|&c| c == 0)
}

/// Linearly independent list of vectors in `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SubspaceBasis {
    vectors: Vec<UVector>,
}

impl SubspaceBasis {
    pub fn new(field: &FieldSpec, vectors: Vec<UVector>) -> Result<Self> {
        for v in &vectors {
            field.check(v.field())?;
        }
        let rows: Vec<Vec<u32>> = vectors.iter().map(|v| v.coeffs.clone()).collect();
        if rank_of(field.fp, &rows, field.dim()) != vectors.len() {
            return Err(Error::Precondition("basis vectors are linearly dependent".into()));
        }
        Ok(SubspaceBasis { vectors })
    }

    pub fn vectors(&self) -> &[UVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<UVector> {
        self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `Lie(R) = span{x_α : α ∈ R}` in canonical root order.
pub fn lie_span(set: &RootSet, field: &FieldSpec) -> Result<SubspaceBasis> {
    field.rank.check(set.rank())?;
    Ok(SubspaceBasis { vectors: set.iter().map(|r| field.root_vector(r)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{parabolic_radical, phi_positive};

    fn rk(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn r(i: usize, j: usize) -> Root {
        Root::new_unchecked(i, j)
    }

    #[test]
    fn field_guard() {
        assert!(FieldSpec::new(2, rk(5)).is_err());
        assert!(FieldSpec::new(3, rk(5)).is_err());
        assert!(FieldSpec::new(5, rk(5)).is_ok());
        assert!(FieldSpec::new_nonstandard(2, rk(5)).is_ok());
        assert!(FieldSpec::new(4, rk(5)).is_err());
        assert_eq!(FieldSpec::default_prime(rk(5)), 5);
        assert_eq!(FieldSpec::default_prime(rk(6)), 2);
        assert_eq!(FieldSpec::default_prime(rk(7)), 3);
    }

    #[test]
    fn bracket_examples() {
        let f = FieldSpec::new(5, rk(5)).unwrap();
        let b = bracket(&f.root_vector(r(1, 2)), &f.root_vector(r(2, 3))).unwrap();
        assert_eq!(b, f.root_vector(r(1, 3)));
        assert!(bracket(&f.root_vector(r(1, 3)), &f.root_vector(r(2, 4))).unwrap().is_zero());
        let x = f.vector_from(&[(r(1, 2), 2), (r(2, 4), 3), (r(4, 6), 1)]).unwrap();
        assert!(bracket(&x, &x).unwrap().is_zero());
        let g = FieldSpec::new(7, rk(5)).unwrap();
        assert!(bracket(&x, &g.zero()).is_err());
    }

    #[test]
    fn bracket_matches_commutator_on_basis() {
        for (n, p) in [(3, 5), (5, 7), (6, 2)] {
            let f = FieldSpec::new(p, rk(n)).unwrap();
            let d = rk(n).dim();
            for a in positive_roots(rk(n)) {
                for b in positive_roots(rk(n)) {
                    let xa = f.root_vector(a);
                    let xb = f.root_vector(b);
                    let ab = mat_mul(f.fp(), &xa.to_matrix(), &xb.to_matrix(), d);
                    let ba = mat_mul(f.fp(), &xb.to_matrix(), &xa.to_matrix(), d);
                    let comm: Vec<u32> = ab.iter().zip(&ba).map(|(&u, &v)| f.fp().sub(u, v)).collect();
                    assert_eq!(UVector::from_matrix(&f, &comm).unwrap(), bracket(&xa, &xb).unwrap());
                }
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        let f = FieldSpec::new(5, rk(5)).unwrap();
        assert!(is_p_nilpotent(&f.vector_from(&[(r(1, 3), 1), (r(3, 4), 1)]).unwrap()));
        let chain: Vec<(Root, i64)> = (1..=5).map(|k| (r(k, k + 1), 1)).collect();
        let x = f.vector_from(&chain).unwrap();
        assert!(!is_p_nilpotent(&x));
        // x^5 is E_{1,6}.
        let m = x.to_matrix();
        let mut acc = m.clone();
        for _ in 1..5 {
            acc = mat_mul(f.fp(), &acc, &m, 6);
        }
        assert_eq!(UVector::from_matrix(&f, &acc).unwrap(), f.root_vector(r(1, 6)));
        assert!(is_p_nilpotent(&f.zero()));
    }

    #[test]
    fn lie_span_examples() {
        let f = FieldSpec::new(5, rk(5)).unwrap();
        let rad3 = parabolic_radical(&[3], rk(5)).unwrap();
        assert_eq!(lie_span(&rad3, &f).unwrap().len(), 9);
        assert!(lie_span(&RootSet::empty(rk(5)), &f).unwrap().is_empty());
        let odd = phi_positive(&[1, 2, 4], rk(5)).unwrap();
        let span = lie_span(&odd, &f).unwrap();
        assert_eq!(span.len(), 8);
        for a in span.vectors() {
            for b in span.vectors() {
                assert!(bracket(a, b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = FieldSpec::new(5, rk(5)).unwrap();
        let v = f.vector_from(&[(r(3, 4), 1), (r(1, 3), 1)]).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"p":5,"n":5,"coeffs":{"1-3":1,"3-4":1}}"#);
        assert_eq!(UVector::from_json(&text, false).unwrap(), v);
        assert!(UVector::from_json(r#"{"p":2,"n":5,"coeffs":{}}"#, false).is_err());
        assert!(UVector::from_json(r#"{"p":2,"n":5,"coeffs":{}}"#, true).is_ok());
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = FieldSpec::new(5, rk(3)).unwrap();
        let x = f.root_vector(r(1, 2));
        assert!(SubspaceBasis::new(&f, vec![x.clone(), x.scaled(2)]).is_err());
    }
}
