//! Subspaces of `F_p^n` in canonical reduced row echelon form.
//!
//! Intersection uses the Zassenhaus sum-intersection reduction. The distance
//! of `S` from `F` is `codim_S(S ∩ F)` and the increment is `S + F`; Γ acts by
//! invertible matrices on column vectors.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Ambient, Closed};
use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d: &u64| d * d <= p as u64)
            .all(|d| !(p as u64).is_multiple_of(d))
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Reduced row echelon form with zero rows dropped.
fn rref(p: u32, mut rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, scale, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(factor, y, p)) % p;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceBasis {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
}

impl fmt::Debug for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.rows)
    }
}

impl SubspaceBasis {
    /// Span of `rows` in `F_p^dim`.
    pub fn new(p: u32, dim: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        for r in &rows {
            if r.len() != dim {
                return Err(Error::Shape(format!("row {r:?} does not have length {dim}")));
            }
            if let Some(x) = r.iter().find(|&&x| x >= p) {
                return Err(Error::Invalid(format!("entry {x} is not reduced modulo {p}")));
            }
        }
        Ok(SubspaceBasis {
            p,
            dim,
            rows: rref(p, rows),
        })
    }

    pub fn zero(p: u32, dim: usize) -> Self {
        SubspaceBasis {
            p,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn full(p: u32, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| u32::from(i == j)).collect())
            .collect();
        SubspaceBasis { p, dim, rows }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn check_shape(&self, other: &SubspaceBasis) -> Result<()> {
        if self.p != other.p || self.dim != other.dim {
            return Err(Error::Shape(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.p, self.dim, other.p, other.dim
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        rref(self.p, rows).len() == self.rank()
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.check_shape(other)?;
        Ok(self.sum_unchecked(other))
    }

    fn sum_unchecked(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        SubspaceBasis {
            p: self.p,
            dim: self.dim,
            rows: rref(self.p, rows),
        }
    }

    pub fn intersect(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.check_shape(other)?;
        Ok(self.intersect_unchecked(other))
    }

    fn intersect_unchecked(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let n = self.dim;
        let mut block = Vec::with_capacity(self.rank() + other.rank());
        for r in &self.rows {
            block.push(r.iter().chain(r).copied().collect::<Vec<_>>());
        }
        for r in &other.rows {
            block.push(r.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        let reduced = rref(self.p, block);
        let rows = reduced
            .into_iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        SubspaceBasis {
            p: self.p,
            dim: n,
            rows: rref(self.p, rows),
        }
    }

    /// `dim(S) − dim(S ∩ T)`.
    pub fn codim(&self, other: &SubspaceBasis) -> Result<u64> {
        Ok((self.rank() - self.intersect(other)?.rank()) as u64)
    }

    /// Every vector of the subspace, if there are at most `cap` of them.
    pub fn vectors(&self, cap: usize) -> Result<Vec<Vec<u32>>> {
        let count = (self.p as u128).checked_pow(self.rank() as u32);
        if count.is_none_or(|c| c > cap as u128) {
            return Err(Error::EnumerationCapExceeded(format!(
                "subspace has {}^{} vectors",
                self.p,
                self.rank()
            )));
        }
        let mut out = vec![vec![0u32; self.dim]];
        for row in &self.rows {
            let mut next = Vec::with_capacity(out.len() * self.p as usize);
            for v in &out {
                for c in 0..self.p {
                    next.push(
                        v.iter()
                            .zip(row)
                            .map(|(&x, &y)| (x + mul_mod(c, y, self.p)) % self.p)
                            .collect(),
                    );
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// A square matrix over `F_p`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: Vec<Vec<u32>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

impl Matrix {
    /// An invertible `n × n` matrix over `F_p`.
    pub fn invertible(p: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("matrix is not square".into()));
        }
        let span = SubspaceBasis::new(p, n, rows.clone())?;
        if span.rank() != n {
            return Err(Error::InvalidAction(format!("matrix {rows:?} is singular modulo {p}")));
        }
        Ok(Matrix { p, rows })
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Matrix {
            p,
            rows: SubspaceBasis::full(p, n).rows,
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, self.p)) % self.p)
            })
            .collect()
    }
}

/// `{Mv : v ∈ S}`.
pub fn matrix_action(m: &Matrix, s: &SubspaceBasis) -> Result<SubspaceBasis> {
    if m.p != s.p || m.size() != s.dim {
        return Err(Error::InvalidAction(format!(
            "a {}x{} matrix over F_{} cannot act on F_{}^{}",
            m.size(),
            m.size(),
            m.p,
            s.p,
            s.dim
        )));
    }
    Ok(act_unchecked(m, s))
}

fn act_unchecked(m: &Matrix, s: &SubspaceBasis) -> SubspaceBasis {
    SubspaceBasis {
        p: s.p,
        dim: s.dim,
        rows: rref(s.p, s.rows.iter().map(|r| m.apply(r)).collect()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectLattice {
    pub p: u32,
    pub dim: usize,
}

impl Ambient for VectLattice {
    type Elem = SubspaceBasis;
    type Action = Matrix;

    fn meet(&self, x: &SubspaceBasis, y: &SubspaceBasis) -> SubspaceBasis {
        x.intersect_unchecked(y)
    }

    fn join(&self, x: &SubspaceBasis, y: &SubspaceBasis) -> SubspaceBasis {
        x.sum_unchecked(y)
    }

    fn measure(&self, x: &SubspaceBasis, y: &SubspaceBasis) -> u64 {
        (x.rank() - x.intersect_unchecked(y).rank()) as u64
    }

    fn increment(&self, s: &SubspaceBasis, f: &SubspaceBasis) -> SubspaceBasis {
        s.sum_unchecked(f)
    }

    fn act(&self, g: &Matrix, x: &SubspaceBasis) -> SubspaceBasis {
        act_unchecked(g, x)
    }

    fn level_cap(&self) -> u64 {
        self.dim as u64
    }

    fn random_sub_element(&self, x: &SubspaceBasis, rng: &mut ChaCha8Rng) -> SubspaceBasis {
        let count = rng.gen_range(0..=x.rank());
        let rows = (0..count)
            .map(|_| {
                let coeffs: Vec<u32> = x.rows.iter().map(|_| rng.gen_range(0..self.p)).collect();
                (0..self.dim)
                    .map(|j| {
                        x.rows
                            .iter()
                            .zip(&coeffs)
                            .fold(0, |acc, (r, &c)| (acc + mul_mod(c, r[j], self.p)) % self.p)
                    })
                    .collect()
            })
            .collect();
        SubspaceBasis {
            p: self.p,
            dim: self.dim,
            rows: rref(self.p, rows),
        }
    }
}

/// Seeds and Γ generators for the vector-space case.
#[derive(Clone, Debug)]
pub struct VectInstance {
    pub p: u32,
    pub dim: usize,
    pub seeds: Vec<SubspaceBasis>,
    pub gamma: Vec<Matrix>,
}

impl VectInstance {
    pub fn new(p: u32, dim: usize, seeds: Vec<SubspaceBasis>, gamma: Vec<Matrix>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if seeds.is_empty() {
            return Err(Error::Empty("vector instance needs at least one seed"));
        }
        if let Some(s) = seeds.iter().find(|s| s.p != p || s.dim != dim) {
            return Err(Error::Shape(format!("seed {s:?} does not live in F_{p}^{dim}")));
        }
        if let Some(m) = gamma.iter().find(|m| m.p != p || m.size() != dim) {
            return Err(Error::InvalidAction(format!(
                "matrix {m:?} does not act on F_{p}^{dim}"
            )));
        }
        Ok(VectInstance { p, dim, seeds, gamma })
    }

    pub fn close(&self, max_orbit: usize) -> Result<Closed<VectLattice>> {
        Closed::new(
            VectLattice {
                p: self.p,
                dim: self.dim,
            },
            &self.seeds,
            self.gamma.clone(),
            max_orbit,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn span(p: u32, dim: usize, rows: &[&[u32]]) -> SubspaceBasis {
        SubspaceBasis::new(p, dim, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(7919));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(9));
        assert!(SubspaceBasis::new(4, 1, vec![]).is_err());
    }

    #[test]
    fn canonical_form() {
        let a = span(3, 2, &[&[2, 1], &[1, 1]]);
        assert_eq!(a, SubspaceBasis::full(3, 2));
        assert_eq!(
            span(2, 3, &[&[1, 1, 0], &[0, 1, 0]]),
            span(2, 3, &[&[1, 0, 0], &[0, 1, 0]])
        );
        assert_eq!(span(5, 2, &[&[0, 0]]), SubspaceBasis::zero(5, 2));
        assert_eq!(span(5, 2, &[&[2, 4]]).rows(), &[vec![1, 2]]);
    }

    #[test]
    fn codim_examples() {
        let e1 = span(2, 2, &[&[1, 0]]);
        let e2 = span(2, 2, &[&[0, 1]]);
        assert_eq!(e1.codim(&SubspaceBasis::full(2, 2)).unwrap(), 0);
        assert_eq!(SubspaceBasis::full(2, 2).codim(&e1).unwrap(), 1);
        assert_eq!(e1.codim(&e2).unwrap(), 1);
        assert!(e1.codim(&SubspaceBasis::zero(3, 2)).is_err());
    }

    #[test]
    fn intersect_and_sum_examples() {
        let plane12 = span(2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let plane23 = span(2, 3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(plane12.intersect(&plane23).unwrap(), span(2, 3, &[&[0, 1, 0]]));
        assert_eq!(plane12.intersect(&plane12).unwrap(), plane12);
        assert_eq!(plane12.sum(&plane12).unwrap(), plane12);
        let l1 = span(2, 2, &[&[1, 0]]);
        let l2 = span(2, 2, &[&[1, 1]]);
        assert_eq!(l1.sum(&l2).unwrap(), SubspaceBasis::full(2, 2));
        assert_eq!(l1.intersect(&l2).unwrap(), SubspaceBasis::zero(2, 2));
    }

    #[test]
    fn matrix_action_examples() {
        let plane12 = span(2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(matrix_action(&Matrix::identity(2, 3), &plane12).unwrap(), plane12);
        // e1 -> e2 -> e3 -> e1
        let cyc = Matrix::invertible(2, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            matrix_action(&cyc, &plane12).unwrap(),
            span(2, 3, &[&[0, 1, 0], &[0, 0, 1]])
        );
        let scalar = Matrix::invertible(5, vec![vec![3, 0], vec![0, 3]]).unwrap();
        let line = span(5, 2, &[&[1, 4]]);
        assert_eq!(matrix_action(&scalar, &line).unwrap(), line);
        assert!(matches!(
            Matrix::invertible(2, vec![vec![1, 1], vec![1, 1]]),
            Err(Error::InvalidAction(_))
        ));
        assert!(matrix_action(&Matrix::identity(2, 2), &plane12).is_err());
    }

    #[test]
    fn vectors_enumerates_the_span() {
        let plane = span(3, 3, &[&[1, 0, 2], &[0, 1, 1]]);
        let vs = plane.vectors(100).unwrap();
        assert_eq!(vs.len(), 9);
        assert!(vs.iter().all(|v| plane.contains(v)));
        assert!(SubspaceBasis::full(2, 12).vectors(1000).is_err());
    }

    /// Every subspace of `F_2^n`, by brute force over spans of vector subsets.
    fn all_subspaces_f2(n: usize) -> Vec<SubspaceBasis> {
        let vectors: Vec<Vec<u32>> = (0..1u32 << n).map(|m| (0..n).map(|i| m >> i & 1).collect()).collect();
        let mut out = vec![SubspaceBasis::zero(2, n)];
        let mut next = 0;
        while next < out.len() {
            let s = out[next].clone();
            next += 1;
            for v in &vectors {
                let t = s.sum(&SubspaceBasis::new(2, n, vec![v.clone()]).unwrap()).unwrap();
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out
    }

    #[test]
    fn sum_increment_satisfies_condition_three() {
        for n in 1..=4 {
            let subs = all_subspaces_f2(n);
            for f in &subs {
                for s in &subs {
                    for t in subs.iter().filter(|t| t.is_subspace_of(s)) {
                        let (ct, cs) = (t.codim(f).unwrap(), s.codim(f).unwrap());
                        assert!(ct <= cs);
                        if ct == cs {
                            assert_eq!(t.sum(f).unwrap(), s.sum(f).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subspace_counts_of_f2() {
        // Gaussian binomial sums: 2, 5, 16, 67.
        let counts: Vec<usize> = (1..=4).map(|n| all_subspaces_f2(n).len()).collect();
        assert_eq!(counts, vec![2, 5, 16, 67]);
    }

    fn subspace(p: u32, dim: usize) -> impl Strategy<Value = SubspaceBasis> {
        prop::collection::vec(prop::collection::vec(0..p, dim), 0..=dim)
            .prop_map(move |rows| SubspaceBasis::new(p, dim, rows).unwrap())
    }

    proptest! {
        #[test]
        fn modular_dimension_identity(s in subspace(3, 4), t in subspace(3, 4)) {
            let meet = s.intersect(&t).unwrap();
            let join = s.sum(&t).unwrap();
            prop_assert_eq!(s.rank() + t.rank(), meet.rank() + join.rank());
            prop_assert!(meet.is_subspace_of(&s) && meet.is_subspace_of(&t));
            prop_assert!(s.is_subspace_of(&join) && t.is_subspace_of(&join));
        }

        #[test]
        fn intersection_contains_exactly_common_vectors(s in subspace(2, 4), t in subspace(2, 4)) {
            let meet = s.intersect(&t).unwrap();
            for v in s.vectors(64).unwrap() {
                prop_assert_eq!(meet.contains(&v), t.contains(&v));
            }
        }

        #[test]
        fn canonical_rows_identify_equal_subspaces(s in subspace(5, 3), extra in prop::collection::vec(0u32..5, 3)) {
            // Adding a combination of existing rows leaves the canonical form unchanged.
            let mut rows = s.rows().to_vec();
            if let Some(first) = rows.first().cloned() {
                let c = extra[0];
                rows.push(first.iter().map(|&x| x * c % 5).collect());
            }
            prop_assert_eq!(SubspaceBasis::new(5, 3, rows).unwrap(), s);
        }
    }
}
