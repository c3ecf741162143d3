//! Reference implementations straight from the definitions. They share no
//! code with the library: field arithmetic is shift-and-add, traces are
//! sums of squares and every spectrum is a direct count.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub struct Gf {
    pub m: u32,
    pub poly: u64,
}

impl Gf {
    pub fn new(m: u32, poly: u64) -> Self {
        Gf { m, poly }
    }

    pub fn size(&self) -> u64 {
        1 << self.m
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b, mut r) = (a, b, 0u64);
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.m & 1 == 1 {
                a ^= self.poly;
            }
        }
        r
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let (mut base, mut r) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.size() - 2)
    }

    /// `sum_{k < m/n} x^{2^{kn}}`.
    pub fn rel_trace(&self, x: u64, n: u32) -> u64 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.m / n {
            acc ^= y;
            for _ in 0..n {
                y = self.mul(y, y);
            }
        }
        acc
    }

    pub fn trace(&self, x: u64) -> u64 {
        self.rel_trace(x, 1)
    }
}

/// `sum_x (-1)^{tr(b F(x) + a x)}`.
pub fn walsh(gf: &Gf, f: &[u64], a: u64, b: u64) -> i64 {
    (0..gf.size()).map(|x| if gf.trace(gf.mul(b, f[x as usize]) ^ gf.mul(a, x)) == 0 { 1 } else { -1 }).sum()
}

pub fn walsh_distribution(gf: &Gf, f: &[u64]) -> BTreeMap<i64, u64> {
    let mut d = BTreeMap::new();
    for a in 0..gf.size() {
        for b in 1..gf.size() {
            *d.entry(walsh(gf, f, a, b)).or_insert(0) += 1;
        }
    }
    d
}

pub fn delta_distribution(f: &[u64]) -> BTreeMap<u64, u64> {
    let n = f.len() as u64;
    let mut d = BTreeMap::new();
    for a in 1..n {
        let mut counts = vec![0u64; n as usize];
        for x in 0..n {
            counts[(f[x as usize] ^ f[(x ^ a) as usize]) as usize] += 1;
        }
        for c in counts {
            *d.entry(c).or_insert(0) += 1;
        }
    }
    d
}

pub fn differential_uniformity(f: &[u64]) -> u64 {
    *delta_distribution(f).keys().next_back().unwrap()
}

pub fn nonlinearity(gf: &Gf, f: &[u64]) -> i64 {
    let max = walsh_distribution(gf, f).keys().map(|v| v.abs()).max().unwrap();
    (gf.size() as i64 - max) / 2
}

/// ANF coefficient `a_u = xor_{x subset of u} f(x)` for each output bit.
pub fn algebraic_degree(m: u32, f: &[u64]) -> u32 {
    let mut best = 0;
    for u in 0..1u64 << m {
        let mut acc = 0;
        let mut x = u;
        loop {
            acc ^= f[x as usize];
            if x == 0 {
                break;
            }
            x = (x - 1) & u;
        }
        if acc != 0 {
            best = best.max(u.count_ones());
        }
    }
    best
}

pub fn is_permutation(f: &[u64]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Degree of `tr(c F)` from its ANF.
pub fn component_degree(gf: &Gf, f: &[u64], c: u64) -> u32 {
    let bits: Vec<u64> = f.iter().map(|&y| gf.trace(gf.mul(c, y))).collect();
    algebraic_degree(gf.m, &bits)
}

/// First `c != 0` whose component degree is outside `{0, 1, deg F}`.
pub fn ea_power_witness(gf: &Gf, f: &[u64]) -> Option<u64> {
    let deg = algebraic_degree(gf.m, f);
    (1..gf.size()).find(|&c| {
        let d = component_degree(gf, f, c);
        d > 1 && d != deg
    })
}

/// First irreducible polynomials of degree `m` by brute-force root and
/// factor search.
pub fn irreducibles(m: u32, count: usize) -> Vec<u64> {
    fn pmod(mut a: u64, b: u64) -> u64 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        a
    }
    ((1u64 << m)..(1u64 << (m + 1)))
        .filter(|&p| (2..1u64 << (m / 2 + 1)).all(|q| pmod(p, q) != 0))
        .take(count)
        .collect()
}
