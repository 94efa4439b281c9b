//! Arithmetic in `F_p` and dense row reduction.

use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime field `F_p`, elements as canonical representatives `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Fp { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Reduces a signed integer.
    #[inline]
    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element (Fermat).
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// `a · x + y`, elementwise into `y`.
    pub fn axpy(self, a: u32, x: &[u32], y: &mut [u32]) {
        if a == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(a, xi));
            }
        }
    }

    pub fn scale(self, a: u32, x: &mut [u32]) {
        for xi in x.iter_mut() {
            *xi = self.mul(a, *xi);
        }
    }
}

/// Row-reduces `rows` in place over the column sequence `cols` (a permutation
/// of, or subset of, the column indices). Returns the pivot column of each
/// surviving row; zero rows are dropped. Pivots are 1 and every other row is 0
/// at each pivot column.
pub fn rref_with_columns(f: Fp, rows: &mut Vec<Vec<u32>>, cols: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for &c in cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(next, found);
        let inv = f.inv(rows[next][c]);
        f.scale(inv, &mut rows[next]);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row[c] != 0 {
                let factor = f.neg(row[c]);
                f.axpy(factor, &pivot_row, row);
            }
        }
        pivots.push(c);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `ncols`.
pub fn nullspace(f: Fp, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let cols: Vec<usize> = (0..ncols).collect();
    let pivots = rref_with_columns(f, &mut m, &cols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; ncols];
            v[free] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            v
        })
        .collect()
}

pub fn rank_of(f: Fp, rows: &[Vec<u32>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    let cols: Vec<usize> = (0..ncols).collect();
    rref_with_columns(f, &mut m, &cols).len()
}

/// Square matrix product over `F_p`, row-major `d × d`.
pub fn mat_mul(f: Fp, a: &[u32], b: &[u32], d: usize) -> Vec<u32> {
    let mut out = vec![0u32; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0 {
                continue;
            }
            for j in 0..d {
                let bkj = b[k * d + j];
                if bkj != 0 {
                    out[i * d + j] = f.add(out[i * d + j], f.mul(aik, bkj));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u32> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(Fp::new(9).is_err());
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 13] {
            let f = Fp::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            assert_eq!(f.from_i64(-1), p - 1);
        }
    }

    #[test]
    fn nullspace_is_kernel() {
        let f = Fp::new(5).unwrap();
        let rows = vec![vec![1, 2, 0, 4], vec![2, 4, 1, 3]];
        let ker = nullspace(f, &rows, 4);
        assert_eq!(ker.len(), 4 - rank_of(f, &rows, 4));
        for v in &ker {
            for row in &rows {
                let dot = row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }
}
