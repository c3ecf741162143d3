//! Representations of functions `F: GF(2^m) -> GF(2^m)`: lookup tables,
//! univariate polynomials and the algebraic normal form of component
//! functions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2m::{Elem, FieldCtx};

/// Interpolation is quadratic in the field size; above this it is refused.
pub const INTERPOLATE_LIMIT: u32 = 16;

/// A function on GF(2^m) stored as its full table of values.
#[derive(Clone, Debug)]
pub struct FuncTable {
    ctx: Arc<FieldCtx>,
    values: Vec<Elem>,
}

impl PartialEq for FuncTable {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.values == other.values
    }
}

impl Eq for FuncTable {}

impl FuncTable {
    pub fn from_fn(ctx: &Arc<FieldCtx>, mut f: impl FnMut(Elem) -> Elem) -> Self {
        let mask = ctx.mask();
        let values = ctx.elements().map(|x| f(x) & mask).collect();
        FuncTable { ctx: Arc::clone(ctx), values }
    }

    pub fn from_values(ctx: &Arc<FieldCtx>, values: Vec<Elem>) -> Result<Self> {
        if values.len() != ctx.size() {
            return Err(Error::BadTableLength { expected: ctx.size(), found: values.len() });
        }
        if let Some((index, &v)) = values.iter().enumerate().find(|(_, &v)| v > ctx.mask()) {
            return Err(Error::BadTableEntry { index, value: v as u64 });
        }
        Ok(FuncTable { ctx: Arc::clone(ctx), values })
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_fn(ctx, |x| x)
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_fn(ctx, |_| 0)
    }

    /// The power map `x -> x^d`.
    pub fn power(ctx: &Arc<FieldCtx>, d: u64) -> Self {
        Self::from_fn(ctx, |x| ctx.pow(x, d))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn m(&self) -> u32 {
        self.ctx.m()
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: Elem) -> Elem {
        self.values[x as usize]
    }

    fn check_ctx(&self, other: &FuncTable) -> Result<()> {
        if *self.ctx != *other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// `x -> self(g(x))`.
    pub fn compose(&self, g: &FuncTable) -> Result<FuncTable> {
        self.check_ctx(g)?;
        let values = g.values.iter().map(|&y| self.values[y as usize]).collect();
        Ok(FuncTable { ctx: Arc::clone(&self.ctx), values })
    }

    /// Pointwise sum (XOR of bit patterns).
    pub fn add(&self, g: &FuncTable) -> Result<FuncTable> {
        self.check_ctx(g)?;
        let values = self.values.iter().zip(&g.values).map(|(a, b)| a ^ b).collect();
        Ok(FuncTable { ctx: Arc::clone(&self.ctx), values })
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![0u64; self.values.len().div_ceil(64)];
        for &y in &self.values {
            let (w, b) = (y as usize / 64, y % 64);
            if seen[w] >> b & 1 == 1 {
                return false;
            }
            seen[w] |= 1 << b;
        }
        true
    }

    pub fn invert(&self) -> Result<FuncTable> {
        if !self.is_permutation() {
            return Err(Error::NotAPermutation);
        }
        let mut values = vec![0; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            values[y as usize] = x as Elem;
        }
        Ok(FuncTable { ctx: Arc::clone(&self.ctx), values })
    }

    /// Component function `x -> tr(c F(x))` as a truth table.
    pub fn component(&self, c: Elem) -> BoolTable {
        let ctx = &self.ctx;
        let bits = self.values.iter().map(|&y| ctx.trace(ctx.mul(c, y)) == 1);
        BoolTable::from_bits(self.m(), bits)
    }

    /// Coordinate function `x -> bit j of F(x)` as a truth table.
    pub fn coordinate(&self, j: u32) -> BoolTable {
        BoolTable::from_bits(self.m(), self.values.iter().map(|&y| y >> j & 1 == 1))
    }
}

/// A Boolean function on `m` variables, packed 64 entries per word.
/// Entry `x` holds `f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolTable {
    m: u32,
    words: Vec<u64>,
}

impl BoolTable {
    pub fn from_bits(m: u32, bits: impl IntoIterator<Item = bool>) -> Self {
        let len = 1usize << m;
        let mut words = vec![0u64; len.div_ceil(64)];
        let mut n = 0;
        for (x, b) in bits.into_iter().enumerate() {
            if b {
                words[x / 64] |= 1 << (x % 64);
            }
            n += 1;
        }
        assert_eq!(n, len, "truth table length must be 2^m");
        BoolTable { m, words }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// In-place binary Möbius transform: truth table to ANF coefficients
    /// (and back, the transform is an involution).
    pub fn mobius(&mut self) {
        // within-word levels
        const MASKS: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0f0f_0f0f_0f0f_0f0f,
            0x00ff_00ff_00ff_00ff,
            0x0000_ffff_0000_ffff,
            0x0000_0000_ffff_ffff,
        ];
        let inner = self.m.min(6);
        for (level, &mask) in MASKS.iter().enumerate().take(inner as usize) {
            let shift = 1 << level;
            for w in &mut self.words {
                *w ^= (*w & mask) << shift;
            }
        }
        if self.m < 6 {
            // bits above 2^m are zero and stay zero
            let keep = if self.m == 0 { 1 } else { (1u64 << (1 << self.m)) - 1 };
            self.words[0] &= keep;
        }
        let mut step = 1;
        while step < self.words.len() {
            for block in (0..self.words.len()).step_by(2 * step) {
                for k in block..block + step {
                    self.words[k + step] ^= self.words[k];
                }
            }
            step *= 2;
        }
    }

    /// ANF coefficients: bit `u` is set iff the monomial `prod x_i^{u_i}`
    /// appears.
    pub fn anf(&self) -> BoolTable {
        let mut t = self.clone();
        t.mobius();
        t
    }

    /// Algebraic degree; 0 for constants (including the zero function).
    pub fn degree(&self) -> u32 {
        let anf = self.anf();
        let mut best = 0;
        for (wi, &w) in anf.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros();
                w &= w - 1;
                best = best.max(((wi as u32) << 6 | b).count_ones());
            }
        }
        best
    }
}

/// Sparse univariate polynomial `sum c_i x^i` with `0 <= i <= 2^m - 1`.
#[derive(Clone, Debug)]
pub struct UnivariatePoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<u64, Elem>,
}

impl PartialEq for UnivariatePoly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}

impl Eq for UnivariatePoly {}

impl UnivariatePoly {
    pub fn new(ctx: &Arc<FieldCtx>) -> Self {
        UnivariatePoly { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Exponents
    /// are reduced to `[0, 2^m - 1]` without changing the function;
    /// repeated exponents are summed and zero coefficients dropped.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: impl IntoIterator<Item = (u64, Elem)>) -> Self {
        let mut p = Self::new(ctx);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, e: u64, c: Elem) -> Self {
        Self::from_terms(ctx, [(e, c)])
    }

    pub fn add_term(&mut self, e: u64, c: Elem) {
        let e = self.ctx.reduce_exponent(e);
        let c = c & self.ctx.mask();
        let slot = self.terms.entry(e).or_insert(0);
        *slot ^= c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &UnivariatePoly) -> Result<UnivariatePoly> {
        if *self.ctx != *other.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<u64, Elem> {
        &self.terms
    }

    pub fn coeff(&self, e: u64) -> Elem {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: Elem) -> Elem {
        self.terms.iter().fold(0, |acc, (&e, &c)| acc ^ self.ctx.mul(c, self.ctx.pow(x, e)))
    }

    pub fn evaluate(&self) -> FuncTable {
        FuncTable::from_fn(&self.ctx, |x| self.eval(x))
    }

    /// Maximum 2-weight over exponents with nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&e| two_weight(e)).max().unwrap_or(0)
    }
}

/// Number of ones in the binary expansion of `k`.
pub fn two_weight(k: u64) -> u32 {
    k.count_ones()
}

/// The unique polynomial of degree `< 2^m` whose evaluation is `f`.
///
/// With `N = 2^m - 1`: `c_0 = F(0)`, `c_k = sum_{x != 0} F(x) x^{-k}` for
/// `1 <= k < N`, and `c_N = sum_x F(x)`. Quadratic in the field size, so
/// restricted to `m <= INTERPOLATE_LIMIT`.
pub fn interpolate(f: &FuncTable) -> Result<UnivariatePoly> {
    let ctx = f.ctx();
    if ctx.m() > INTERPOLATE_LIMIT {
        return Err(Error::TooLarge { m: ctx.m(), limit: INTERPOLATE_LIMIT });
    }
    let n = ctx.order();
    let g = ctx.generator();
    // samples[j] = F(g^j)
    let mut samples = Vec::with_capacity(n as usize);
    let mut x = 1;
    for _ in 0..n {
        samples.push(f.get(x));
        x = ctx.mul(x, g);
    }
    let ginv = ctx.inv(g).expect("generator is nonzero");
    let mut poly = UnivariatePoly::new(ctx);
    poly.add_term(0, f.get(0));
    let mut step = 1; // g^{-k}
    for k in 1..n {
        step = ctx.mul(step, ginv);
        let mut acc = 0;
        let mut w = 1; // g^{-jk}
        for &s in &samples {
            acc ^= ctx.mul(s, w);
            w = ctx.mul(w, step);
        }
        poly.add_term(k, acc);
    }
    let total = f.values().iter().fold(0, |a, &v| a ^ v);
    if total != 0 {
        poly.terms.insert(n, total);
    }
    Ok(poly)
}

/// Algebraic degree of `F`, the maximum ANF degree over its coordinate
/// functions. Equals the maximum 2-weight of the univariate exponents.
pub fn algebraic_degree(f: &FuncTable) -> u32 {
    (0..f.m()).map(|j| f.coordinate(j).degree()).max().unwrap_or(0)
}

/// ANF degree of the component `x -> tr(c F(x))`; 0 when `c = 0`.
pub fn component_degree(f: &FuncTable, c: Elem) -> u32 {
    if c == 0 {
        return 0;
    }
    f.component(c).degree()
}
