//! Linear algebra over F_2 on bit vectors of up to 64 coordinates.

use rand::Rng;

use crate::error::{Error, Result};

#[inline]
pub fn dot(x: u64, y: u64) -> u64 {
    ((x & y).count_ones() & 1) as u64
}

#[inline]
fn width_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A linear map `F_2^n_in -> F_2^n_out`. Row `r` is the bit mask of input
/// coordinates whose parity gives output coordinate `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinLinearMap {
    n_in: u32,
    n_out: u32,
    rows: Vec<u64>,
}

impl BinLinearMap {
    pub fn new(n_in: u32, rows: Vec<u64>) -> Result<Self> {
        let mask = width_mask(n_in);
        if n_in > 64 || rows.len() > 64 {
            return Err(Error::TooLarge { m: n_in.max(rows.len() as u32), limit: 64 });
        }
        if let Some(r) = rows.iter().find(|&&r| r & !mask != 0) {
            return Err(Error::WrongDimension { expected: n_in, found: 64 - r.leading_zeros() });
        }
        Ok(BinLinearMap { n_in, n_out: rows.len() as u32, rows })
    }

    pub fn identity(n: u32) -> Self {
        BinLinearMap { n_in: n, n_out: n, rows: (0..n).map(|r| 1u64 << r).collect() }
    }

    pub fn zero(n_in: u32, n_out: u32) -> Self {
        BinLinearMap { n_in, n_out, rows: vec![0; n_out as usize] }
    }

    /// The linear map agreeing with `f` on the unit vectors. `f` must itself
    /// be linear for the result to agree with it everywhere.
    pub fn from_fn(n_in: u32, n_out: u32, f: impl Fn(u64) -> u64) -> Self {
        let mut rows = vec![0u64; n_out as usize];
        for j in 0..n_in {
            let image = f(1 << j);
            for (r, row) in rows.iter_mut().enumerate() {
                *row |= (image >> r & 1) << j;
            }
        }
        BinLinearMap { n_in, n_out, rows }
    }

    pub fn random(n_in: u32, n_out: u32, rng: &mut impl Rng) -> Self {
        let mask = width_mask(n_in);
        BinLinearMap { n_in, n_out, rows: (0..n_out).map(|_| rng.gen::<u64>() & mask).collect() }
    }

    pub fn random_invertible(n: u32, rng: &mut impl Rng) -> Self {
        loop {
            let l = Self::random(n, n, rng);
            if l.is_invertible() {
                return l;
            }
        }
    }

    pub fn n_in(&self) -> u32 {
        self.n_in
    }

    pub fn n_out(&self) -> u32 {
        self.n_out
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Image of each unit vector.
    pub fn columns(&self) -> Vec<u64> {
        (0..self.n_in)
            .map(|j| self.rows.iter().enumerate().fold(0, |acc, (r, row)| acc | (row >> j & 1) << r))
            .collect()
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        self.rows.iter().enumerate().fold(0, |acc, (r, &row)| acc | dot(row, x) << r)
    }

    /// `self . inner`.
    pub fn compose(&self, inner: &BinLinearMap) -> Result<BinLinearMap> {
        if inner.n_out != self.n_in {
            return Err(Error::WrongDimension { expected: self.n_in, found: inner.n_out });
        }
        Ok(Self::from_fn(inner.n_in, self.n_out, |x| self.apply(inner.apply(x))))
    }

    pub fn add(&self, other: &BinLinearMap) -> Result<BinLinearMap> {
        if (self.n_in, self.n_out) != (other.n_in, other.n_out) {
            return Err(Error::WrongDimension { expected: self.n_in, found: other.n_in });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect();
        Ok(BinLinearMap { n_in: self.n_in, n_out: self.n_out, rows })
    }

    /// Adjoint for the coordinate dot product.
    pub fn transpose(&self) -> BinLinearMap {
        BinLinearMap { n_in: self.n_out, n_out: self.n_in, rows: self.columns() }
    }

    pub fn rank(&self) -> u32 {
        Echelon::from_vectors(self.rows.iter().copied()).dim()
    }

    pub fn is_invertible(&self) -> bool {
        self.n_in == self.n_out && self.rank() == self.n_in
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<BinLinearMap> {
        if self.n_in != self.n_out {
            return Err(Error::Singular);
        }
        let n = self.n_in as usize;
        let mut a = self.rows.clone();
        let mut b: Vec<u64> = (0..n).map(|r| 1u64 << r).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    b[r] ^= b[col];
                }
            }
        }
        Ok(BinLinearMap { n_in: self.n_in, n_out: self.n_out, rows: b })
    }

    /// Basis of `{x : self(x) = 0}`.
    pub fn kernel_basis(&self) -> Vec<u64> {
        let ech = Echelon::from_vectors(self.rows.iter().copied());
        let pivots: u64 = ech.rows.iter().fold(0, |acc, r| acc | 1 << ech.pivot(*r));
        (0..self.n_in)
            .filter(|j| pivots >> j & 1 == 0)
            .map(|free| {
                ech.rows.iter().filter(|r| *r >> free & 1 == 1).fold(1u64 << free, |v, r| v | 1 << ech.pivot(*r))
            })
            .collect()
    }

    /// Output coordinates `lo..hi` as a map of their own.
    pub fn output_slice(&self, lo: u32, hi: u32) -> BinLinearMap {
        BinLinearMap { n_in: self.n_in, n_out: hi - lo, rows: self.rows[lo as usize..hi as usize].to_vec() }
    }

    /// Stacks `self` (low output coordinates) on top of `lower`.
    pub fn stack(&self, lower: &BinLinearMap) -> Result<BinLinearMap> {
        if self.n_in != lower.n_in {
            return Err(Error::WrongDimension { expected: self.n_in, found: lower.n_in });
        }
        let rows = self.rows.iter().chain(&lower.rows).copied().collect();
        Ok(BinLinearMap { n_in: self.n_in, n_out: self.n_out + lower.n_out, rows })
    }
}

/// Fully reduced row echelon form. Each row's pivot is its highest set
/// bit, and no other row has that bit set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Echelon {
    pub(crate) rows: Vec<u64>,
}

impl Echelon {
    pub(crate) fn from_vectors(vs: impl IntoIterator<Item = u64>) -> Self {
        let mut e = Echelon::default();
        for v in vs {
            e.insert(v);
        }
        e
    }

    #[inline]
    pub(crate) fn pivot(&self, row: u64) -> u32 {
        63 - row.leading_zeros()
    }

    /// Canonical representative of `v + span`: all pivot bits cleared.
    #[inline]
    pub(crate) fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            if v >> self.pivot(r) & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub(crate) fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = self.pivot(v);
        for r in &mut self.rows {
            if *r >> p & 1 == 1 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub(crate) fn dim(&self) -> u32 {
        self.rows.len() as u32
    }
}
