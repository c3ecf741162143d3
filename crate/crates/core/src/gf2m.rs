//! Arithmetic in GF(2^m) with elements stored as polynomial-basis bit
//! patterns: bit `k` of an element is the coefficient of `x^k`.

use std::fmt;

use crate::error::{Error, Result};

/// A field element. Only the low `m` bits may be set.
pub type Elem = u32;

/// Fields up to this degree carry log/exp tables for multiplication.
const TABLE_LIMIT: u32 = 16;

/// Carry-less product of two polynomials over F_2.
#[inline]
pub(crate) fn clmul(mut a: u64, mut b: u64) -> u64 {
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

#[inline]
fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// Remainder of `v` modulo `p` over F_2. `p` must be nonzero.
fn poly_rem(mut v: u64, p: u64) -> u64 {
    let dp = degree(p);
    while v != 0 && degree(v) >= dp {
        v ^= p << (degree(v) - dp);
    }
    v
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style irreducibility test for a polynomial of exact degree `m`:
/// `gcd(x^(2^k) - x mod p, p) = 1` for all `1 <= k < m` and
/// `x^(2^m) = x mod p`.
pub fn is_irreducible(poly: u64, m: u32) -> bool {
    if poly == 0 || degree(poly) != m || m == 0 {
        return false;
    }
    if poly & 1 == 0 {
        return m == 1;
    }
    let mut r = 2u64 % poly; // x
    for k in 1..=m {
        r = poly_rem(clmul(r, r), poly);
        if k < m {
            if poly_gcd(poly, r ^ 2) != 1 {
                return false;
            }
        } else if r != 2 {
            return false;
        }
    }
    true
}

/// All irreducible polynomials of degree `m` in increasing numeric order.
pub fn irreducibles(m: u32) -> impl Iterator<Item = u64> {
    let lo = 1u64 << m;
    (lo..lo << 1).filter(move |&p| is_irreducible(p, m))
}

/// Lowest-numbered irreducible polynomial of degree `m`.
pub fn default_poly(m: u32) -> Result<u64> {
    if !(2..=32).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    Ok(irreducibles(m).next().expect("irreducibles exist in every degree"))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

struct LogTables {
    // exp has length 2*(2^m - 1) so that log x + log y indexes directly.
    exp: Vec<Elem>,
    log: Vec<u32>,
}

/// Context for GF(2^m): degree, reduction polynomial and a fixed primitive
/// element. Immutable after construction.
pub struct FieldCtx {
    m: u32,
    poly: u64,
    generator: Elem,
    trace_mask: Elem,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("poly", &format_args!("{:#x}", self.poly))
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(2^m) over `poly`, or over [`default_poly`] when `poly` is
    /// `None`.
    pub fn new(m: u32, poly: Option<u64>) -> Result<Self> {
        if !(2..=32).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let poly = match poly {
            Some(p) => {
                let found = if p == 0 { 0 } else { degree(p) };
                if found != m {
                    return Err(Error::WrongPolyDegree { poly: p, expected: m, found });
                }
                if !is_irreducible(p, m) {
                    return Err(Error::RejectsReducible(p));
                }
                p
            }
            None => default_poly(m)?,
        };
        let mut ctx = FieldCtx { m, poly, generator: 0, trace_mask: 0, tables: None };
        ctx.generator = ctx.find_generator();
        ctx.trace_mask = (0..m).map(|j| ctx.trace_by_definition(1 << j) << j).fold(0, |acc, b| acc | b);
        if m <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Reduction polynomial including the `x^m` bit.
    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Number of field elements, `2^m`.
    pub fn size(&self) -> usize {
        1usize << self.m
    }

    /// Order of the multiplicative group, `2^m - 1`.
    pub fn order(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    pub fn mask(&self) -> Elem {
        self.order() as Elem
    }

    /// Iterator over all field elements in ascending bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..=self.mask()
    }

    fn find_generator(&self) -> Elem {
        let n = self.order();
        let factors = prime_factors(n);
        (2..=self.mask())
            .chain(std::iter::once(1))
            .find(|&g| factors.iter().all(|&q| self.pow_slow(g, n / q) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let n = self.order() as usize;
        let mut exp = vec![0; 2 * n];
        let mut log = vec![0; n + 1];
        let mut x: Elem = 1;
        for k in 0..n {
            exp[k] = x;
            exp[k + n] = x;
            log[x as usize] = k as u32;
            x = self.mul_slow(x, self.generator);
        }
        LogTables { exp, log }
    }

    #[inline]
    fn mul_slow(&self, x: Elem, y: Elem) -> Elem {
        let mut v = clmul(x as u64, y as u64);
        let m = self.m;
        let mut bit = 2 * m - 2;
        while bit >= m {
            if (v >> bit) & 1 == 1 {
                v ^= self.poly << (bit - m);
            }
            bit -= 1;
        }
        v as Elem
    }

    fn pow_slow(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if x == 0 || y == 0 {
                    0
                } else {
                    t.exp[(t.log[x as usize] + t.log[y as usize]) as usize]
                }
            }
            None => self.mul_slow(x, y),
        }
    }

    #[inline]
    pub fn square(&self, x: Elem) -> Elem {
        self.mul(x, x)
    }

    /// `x^e`, with `0^0 = 1` and `0^e = 0` for `e > 0`.
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = self.order();
        match &self.tables {
            Some(t) => {
                let k = (t.log[x as usize] as u64 * (e % n)) % n;
                t.exp[k as usize]
            }
            None => self.pow_slow(x, e % n + if e.is_multiple_of(n) { n } else { 0 }),
        }
    }

    /// `x^(2^k)`.
    pub fn frobenius(&self, mut x: Elem, k: u32) -> Elem {
        for _ in 0..k % self.m {
            x = self.square(x);
        }
        x
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = self.order() as u32;
                let l = t.log[x as usize];
                t.exp[((n - l) % n) as usize]
            }
            None => self.pow_slow(x, self.order() - 1),
        })
    }

    /// `x / y`; panics on `y = 0`.
    pub fn div(&self, x: Elem, y: Elem) -> Elem {
        self.mul(x, self.inv(y).expect("division by zero"))
    }

    /// Discrete log base the generator; `None` for zero.
    pub fn log(&self, x: Elem) -> Option<u64> {
        if x == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[x as usize] as u64);
        }
        let mut y = 1;
        (0..self.order()).find(|_| {
            let hit = y == x;
            y = self.mul(y, self.generator);
            hit
        })
    }

    /// Absolute trace `x + x^2 + ... + x^(2^(m-1))`, as 0 or 1.
    #[inline]
    pub fn trace(&self, x: Elem) -> Elem {
        (x & self.trace_mask).count_ones() & 1
    }

    /// The bit mask `t` with `tr(x) = parity(x & t)`.
    pub fn trace_mask(&self) -> Elem {
        self.trace_mask
    }

    fn trace_by_definition(&self, x: Elem) -> Elem {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.m {
            acc ^= y;
            y = self.mul_slow(y, y);
        }
        acc
    }

    /// Relative trace onto the subfield F_{2^n}:
    /// `x + x^(2^n) + ... + x^(2^((m/n - 1) n))`.
    pub fn rel_trace(&self, x: Elem, n: u32) -> Result<Elem> {
        if n == 0 || !self.m.is_multiple_of(n) {
            return Err(Error::NotADivisor { n, m: self.m });
        }
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.m / n {
            acc ^= y;
            y = self.frobenius(y, n);
        }
        Ok(acc)
    }

    /// Absolute trace of the subfield F_{2^n} applied to an element of it.
    pub fn subfield_trace(&self, x: Elem, n: u32) -> Result<Elem> {
        if n == 0 || !self.m.is_multiple_of(n) {
            return Err(Error::NotADivisor { n, m: self.m });
        }
        let mut acc = 0;
        let mut y = x;
        for _ in 0..n {
            acc ^= y;
            y = self.square(y);
        }
        Ok(acc)
    }

    /// Whether `x` lies in the subfield F_{2^n}, i.e. `x^(2^n) = x`.
    pub fn in_subfield(&self, x: Elem, n: u32) -> bool {
        self.frobenius(x, n) == x
    }

    /// All elements of the subfield F_{2^n} in ascending order.
    pub fn subfield(&self, n: u32) -> Result<Vec<Elem>> {
        if n == 0 || !self.m.is_multiple_of(n) {
            return Err(Error::NotADivisor { n, m: self.m });
        }
        Ok(self.elements().filter(|&x| self.in_subfield(x, n)).collect())
    }

    /// `d` with `e*d = 1 mod 2^m - 1`, so that `(x^e)^d = x` for all `x`.
    pub fn inverse_exponent(&self, e: u64) -> Result<u64> {
        let n = self.order() as i128;
        let (mut r0, mut r1) = (n, (e as i128).rem_euclid(n));
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return Err(Error::NotInvertible { e, m: self.m });
        }
        let d = s0.rem_euclid(n) as u64;
        Ok(if d == 0 { 1 } else { d })
    }

    /// Reduces an exponent modulo `2^m - 1` without changing the power map:
    /// zero stays zero and nonzero multiples of `2^m - 1` become `2^m - 1`.
    pub fn reduce_exponent(&self, d: u64) -> u64 {
        if d == 0 {
            0
        } else {
            (d - 1) % self.order() + 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_polys_are_lowest() {
        assert_eq!(default_poly(2).unwrap(), 0b111);
        assert_eq!(default_poly(3).unwrap(), 0b1011);
        assert_eq!(default_poly(4).unwrap(), 0b10011);
        assert_eq!(default_poly(5).unwrap(), 0b100101);
        assert_eq!(default_poly(8).unwrap(), 0x11b);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of irreducible polynomials of degree m over F_2
        let expected = [(2, 1), (3, 2), (4, 3), (5, 6), (6, 9), (7, 18), (8, 30)];
        for (m, n) in expected {
            assert_eq!(irreducibles(m).count(), n, "m={m}");
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FieldCtx::new(5, Some(0b10011)).unwrap_err(),
            Error::WrongPolyDegree { poly: 0b10011, expected: 5, found: 4 }
        );
        assert_eq!(FieldCtx::new(6, Some(0b1000100)).unwrap_err(), Error::RejectsReducible(0b1000100));
        assert_eq!(FieldCtx::new(1, None).unwrap_err(), Error::UnsupportedDegree(1));
        assert_eq!(FieldCtx::new(33, None).unwrap_err(), Error::UnsupportedDegree(33));
    }

    #[test]
    fn gf4_multiplication_table() {
        let ctx = FieldCtx::new(2, Some(0b111)).unwrap();
        // elements 0, 1, a, a+1 with a^2 = a + 1
        let table = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(ctx.mul(x, y), table[x as usize][y as usize]);
            }
        }
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        let ctx = FieldCtx::new(7, None).unwrap();
        for x in ctx.elements() {
            for y in ctx.elements().step_by(5) {
                assert_eq!(ctx.mul(x, y), ctx.mul_slow(x, y));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in 2..=4 {
            let ctx = FieldCtx::new(m, None).unwrap();
            for x in ctx.elements() {
                assert_eq!(ctx.mul(x, 1), x);
                assert_eq!(ctx.mul(0, x), 0);
                for y in ctx.elements() {
                    assert_eq!(ctx.mul(x, y), ctx.mul(y, x));
                    for z in ctx.elements() {
                        assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
                        assert_eq!(ctx.mul(x, y ^ z), ctx.mul(x, y) ^ ctx.mul(x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        let ctx = FieldCtx::new(3, None).unwrap();
        let g = ctx.generator();
        let mut y = 1;
        for k in 1..=7 {
            y = ctx.mul(y, g);
            assert_eq!(y == 1, k == 7, "k={k}");
        }
        for m in [10, 17, 24] {
            let ctx = FieldCtx::new(m, None).unwrap();
            assert_eq!(ctx.pow(ctx.generator(), ctx.order()), 1);
        }
    }

    #[test]
    fn pow_conventions() {
        for m in [4, 5, 18] {
            let ctx = FieldCtx::new(m, None).unwrap();
            assert_eq!(ctx.pow(0, 0), 1);
            assert_eq!(ctx.pow(0, 3), 0);
            for x in (1..=ctx.mask()).step_by(97) {
                assert_eq!(ctx.pow(x, ctx.order()), 1);
                assert_eq!(ctx.pow(x, 1), x);
                assert_eq!(ctx.pow(x, 0), 1);
            }
        }
    }

    #[test]
    fn inverse_is_power_2m_minus_2() {
        let ctx = FieldCtx::new(4, None).unwrap();
        assert_eq!(ctx.inv(0), Err(Error::ZeroInverse));
        assert_eq!(ctx.inv(1), Ok(1));
        for x in 1..16 {
            let y = ctx.inv(x).unwrap();
            assert_eq!(ctx.mul(x, y), 1);
            assert_eq!(y, ctx.pow(x, 14));
            assert_eq!(ctx.inv(y).unwrap(), x);
        }
        let big = FieldCtx::new(20, None).unwrap();
        for x in [1, 2, 12345, 0xfffff] {
            assert_eq!(big.mul(x, big.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn trace_properties() {
        for m in 2..=10 {
            let ctx = FieldCtx::new(m, None).unwrap();
            assert_eq!(ctx.trace(0), 0);
            let ones = ctx.elements().filter(|&x| ctx.trace(x) == 1).count();
            assert_eq!(ones, 1 << (m - 1));
            for x in ctx.elements() {
                assert_eq!(ctx.trace(x), ctx.trace_by_definition(x));
                assert_eq!(ctx.trace(x), ctx.trace(ctx.square(x)));
            }
            if m % 2 == 1 {
                assert_eq!(ctx.trace(1), 1);
            }
        }
    }

    #[test]
    fn relative_trace_properties() {
        let ctx = FieldCtx::new(6, None).unwrap();
        assert_eq!(ctx.rel_trace(5, 4), Err(Error::NotADivisor { n: 4, m: 6 }));
        for x in ctx.elements() {
            assert_eq!(ctx.rel_trace(x, 6).unwrap(), x);
            for n in [1, 2, 3] {
                let t = ctx.rel_trace(x, n).unwrap();
                assert!(ctx.in_subfield(t, n));
                assert_eq!(ctx.subfield_trace(t, n).unwrap(), ctx.trace(x));
            }
        }
        // F_{2^n}-linearity on the subfield
        let ctx = FieldCtx::new(8, None).unwrap();
        for n in [2, 4] {
            let sub = ctx.subfield(n).unwrap();
            assert_eq!(sub.len(), 1 << n);
            for &c in &sub {
                for x in ctx.elements() {
                    assert_eq!(ctx.rel_trace(ctx.mul(c, x), n).unwrap(), ctx.mul(c, ctx.rel_trace(x, n).unwrap()));
                }
            }
        }
    }

    #[test]
    fn inverse_exponents() {
        let ctx = FieldCtx::new(5, None).unwrap();
        assert_eq!(ctx.inverse_exponent(3), Ok(21));
        assert_eq!(21, 1 + 4 + 16);
        assert_eq!(ctx.inverse_exponent(1), Ok(1));
        for x in ctx.elements() {
            assert_eq!(ctx.pow(ctx.pow(x, 3), 21), x);
        }
        let ctx4 = FieldCtx::new(4, None).unwrap();
        assert_eq!(ctx4.inverse_exponent(3), Err(Error::NotInvertible { e: 3, m: 4 }));
    }

    #[test]
    fn reduce_exponent_keeps_power_map() {
        let ctx = FieldCtx::new(5, None).unwrap();
        for d in [0u64, 1, 31, 62, 100, 33] {
            let r = ctx.reduce_exponent(d);
            assert!(r <= 31);
            for x in ctx.elements() {
                assert_eq!(ctx.pow(x, d), ctx.pow(x, r));
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn pow_adds_exponents(x in 1u32..(1 << 12), e in 0u64..100_000, f in 0u64..100_000) {
            let ctx = FieldCtx::new(12, None).unwrap();
            prop_assert_eq!(ctx.mul(ctx.pow(x, e), ctx.pow(x, f)), ctx.pow(x, e + f));
        }

        #[test]
        fn untabled_pow_matches_repeated_mul(x in 1u32..u32::MAX, e in 0u64..64) {
            let ctx = FieldCtx::new(32, None).unwrap();
            let mut acc = 1;
            for _ in 0..e {
                acc = ctx.mul(acc, x);
            }
            prop_assert_eq!(ctx.pow(x, e), acc);
        }
    }
}
