//! Walsh and differential spectra, nonlinearity and the APN / AB verdicts.
//!
//! The inner product on GF(2^m) is `x . y = tr(xy)`. The fast path runs the
//! Walsh-Hadamard transform in coordinates and re-indexes through the trace
//! dual basis, so it agrees pointwise with the defining sum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::{Elem, FieldCtx};
use crate::par;
use crate::vbf::FuncTable;

/// Largest field degree accepted by the full-spectrum routines.
pub const SPECTRUM_LIMIT: u32 = 24;
/// Largest field degree for which the dense `lambda(a, b)` matrix is built.
pub const MATRIX_LIMIT: u32 = 12;

/// Multiset of `lambda_F(a, b)` over all `a` and all `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub distribution: BTreeMap<i64, u64>,
    pub max_abs: i64,
}

/// Multiset of `delta_F(a, b)` over all `a != 0` and all `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSpectrum {
    pub distribution: BTreeMap<u64, u64>,
    pub max: u64,
}

impl WalshSpectrum {
    /// Distinct values taken.
    pub fn support(&self) -> Vec<i64> {
        self.distribution.keys().copied().collect()
    }
}

/// `dual(a)` is the bit vector with `tr(a x) = parity(dual(a) & x)`.
pub fn trace_dual(ctx: &FieldCtx, a: Elem) -> Elem {
    (0..ctx.m()).fold(0, |acc, j| acc | ctx.trace(ctx.mul(a, 1 << j)) << j)
}

fn dual_table(ctx: &FieldCtx) -> Vec<Elem> {
    // dual is linear: fill from the basis images
    let m = ctx.m();
    let basis: Vec<Elem> = (0..m).map(|j| trace_dual(ctx, 1 << j)).collect();
    let mut out = vec![0; ctx.size()];
    for a in 1..ctx.size() {
        let low = a.trailing_zeros();
        out[a] = out[a & (a - 1)] ^ basis[low as usize];
    }
    out
}

/// Naive `lambda_F(a, b) = sum_x (-1)^{tr(b F(x)) + tr(a x)}`.
pub fn walsh_value(f: &FuncTable, a: Elem, b: Elem) -> i64 {
    let ctx = f.ctx();
    ctx.elements()
        .map(|x| {
            let bit = ctx.trace(ctx.mul(b, f.get(x))) ^ ctx.trace(ctx.mul(a, x));
            1 - 2 * bit as i64
        })
        .sum()
}

/// In-place fast Walsh-Hadamard transform of a +-1 (or any integer) vector.
pub fn fwht(v: &mut [i64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for k in block..block + h {
                let (x, y) = (v[k], v[k + h]);
                v[k] = x + y;
                v[k + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Walsh coefficients in coordinate order: `out[w] = sum_x (-1)^{tr(b F(x)) + w.x}`.
fn coordinate_row(f: &FuncTable, bdual: Elem, buf: &mut Vec<i64>) {
    buf.clear();
    buf.extend(f.values().iter().map(|&y| 1 - 2 * ((bdual & y).count_ones() & 1) as i64));
    fwht(buf);
}

fn check_size(m: u32, limit: u32) -> Result<()> {
    if m > limit {
        return Err(Error::TooLarge { m, limit });
    }
    Ok(())
}

/// Dense `lambda(a, b)` table indexed `[b][a]`, including `b = 0`.
pub fn walsh_matrix(f: &FuncTable) -> Result<Vec<Vec<i64>>> {
    check_size(f.m(), MATRIX_LIMIT)?;
    let ctx = f.ctx();
    let dual = dual_table(ctx);
    let mut buf = Vec::new();
    Ok(ctx
        .elements()
        .map(|b| {
            coordinate_row(f, dual[b as usize], &mut buf);
            ctx.elements().map(|a| buf[dual[a as usize] as usize]).collect()
        })
        .collect())
}

/// `lambda(a, b)` for a fixed `b`, indexed by `a`.
pub fn walsh_row(f: &FuncTable, b: Elem) -> Result<Vec<i64>> {
    check_size(f.m(), SPECTRUM_LIMIT)?;
    let ctx = f.ctx();
    let dual = dual_table(ctx);
    let mut buf = Vec::new();
    coordinate_row(f, dual[b as usize], &mut buf);
    Ok(ctx.elements().map(|a| buf[dual[a as usize] as usize]).collect())
}

/// Full Walsh spectrum with multiplicities.
pub fn walsh_spectrum(f: &FuncTable) -> Result<WalshSpectrum> {
    let m = f.m();
    check_size(m, SPECTRUM_LIMIT)?;
    let ctx = f.ctx();
    let size = ctx.size();
    let dual = dual_table(ctx);
    // counts[v + 2^m] = multiplicity of v; the row is a permutation of the
    // coordinate transform, so the a-reindexing does not affect counts
    let counts = par::fold_range(
        size as u64 - 1,
        || (vec![0u64; 2 * size + 1], Vec::new()),
        |(mut counts, mut buf), k| {
            let b = k as usize + 1;
            coordinate_row(f, dual[b], &mut buf);
            for &v in buf.iter() {
                counts[(v + size as i64) as usize] += 1;
            }
            (counts, buf)
        },
        |(mut a, buf), (b, _)| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            (a, buf)
        },
    )
    .0;
    let distribution: BTreeMap<i64, u64> =
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i as i64 - size as i64, c)).collect();
    let max_abs = distribution.keys().map(|v| v.abs()).max().unwrap_or(0);
    Ok(WalshSpectrum { distribution, max_abs })
}

/// `2^{m-1} - max|lambda| / 2`.
pub fn nonlinearity_from(spectrum: &WalshSpectrum, m: u32) -> i64 {
    (1i64 << (m - 1)) - spectrum.max_abs / 2
}

pub fn nonlinearity(f: &FuncTable) -> Result<i64> {
    Ok(nonlinearity_from(&walsh_spectrum(f)?, f.m()))
}

/// AB from a precomputed spectrum: `m` odd and the spectrum inside
/// `{0, +-2^{(m+1)/2}}`, cross-checked against the nonlinearity bound.
pub fn is_ab_from(spectrum: &WalshSpectrum, m: u32) -> bool {
    if m.is_multiple_of(2) {
        return false;
    }
    let peak = 1i64 << m.div_ceil(2);
    let by_support = spectrum.distribution.keys().all(|&v| v == 0 || v.abs() == peak);
    let by_bound = nonlinearity_from(spectrum, m) == (1i64 << (m - 1)) - (1i64 << ((m - 1) / 2));
    debug_assert_eq!(by_support, by_bound, "AB characterizations disagree");
    by_support && by_bound
}

pub fn is_ab(f: &FuncTable) -> Result<bool> {
    Ok(is_ab_from(&walsh_spectrum(f)?, f.m()))
}

/// Support inside `{0, +-2^{(m+s)/2}}`.
pub fn is_three_valued_from(spectrum: &WalshSpectrum, m: u32, s: u32) -> Result<bool> {
    if !(m + s).is_multiple_of(2) {
        return Err(Error::ParityMismatch { m, s });
    }
    let peak = 1i64 << ((m + s) / 2);
    Ok(spectrum.distribution.keys().all(|&v| v == 0 || v.abs() == peak))
}

pub fn is_three_valued(f: &FuncTable, s: u32) -> Result<bool> {
    if !(f.m() + s).is_multiple_of(2) {
        return Err(Error::ParityMismatch { m: f.m(), s });
    }
    is_three_valued_from(&walsh_spectrum(f)?, f.m(), s)
}

/// Row `delta_F(a, .)` for one `a`.
pub fn differential_row(f: &FuncTable, a: Elem) -> Vec<u64> {
    let mut row = vec![0u64; f.ctx().size()];
    for (x, &y) in f.values().iter().enumerate() {
        row[(y ^ f.get(x as Elem ^ a)) as usize] += 1;
    }
    row
}

pub fn differential_spectrum(f: &FuncTable) -> Result<DifferentialSpectrum> {
    let m = f.m();
    check_size(m, SPECTRUM_LIMIT)?;
    let size = f.ctx().size();
    let counts = par::fold_range(
        size as u64 - 1,
        || (vec![0u64; size + 1], vec![0u32; size]),
        |(mut counts, mut row), k| {
            let a = k as Elem + 1;
            row.iter_mut().for_each(|r| *r = 0);
            for (x, &y) in f.values().iter().enumerate() {
                row[(y ^ f.get(x as Elem ^ a)) as usize] += 1;
            }
            for &r in &row {
                counts[r as usize] += 1;
            }
            (counts, row)
        },
        |(mut a, row), (b, _)| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            (a, row)
        },
    )
    .0;
    let distribution: BTreeMap<u64, u64> =
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(v, &c)| (v as u64, c)).collect();
    let max = distribution.keys().copied().max().unwrap_or(0);
    Ok(DifferentialSpectrum { distribution, max })
}

/// Differential uniformity exactly 2.
pub fn is_apn(f: &FuncTable) -> Result<bool> {
    Ok(differential_spectrum(f)?.max == 2)
}

/// Both spectra and the verdicts derived from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub walsh: WalshSpectrum,
    pub differential: DifferentialSpectrum,
    pub nonlinearity: i64,
    pub differential_uniformity: u64,
    pub is_apn: bool,
    pub is_ab: bool,
}

pub fn spectrum_report(f: &FuncTable) -> Result<SpectrumReport> {
    let walsh = walsh_spectrum(f)?;
    let differential = differential_spectrum(f)?;
    let m = f.m();
    Ok(SpectrumReport {
        nonlinearity: nonlinearity_from(&walsh, m),
        differential_uniformity: differential.max,
        is_apn: differential.max == 2,
        is_ab: is_ab_from(&walsh, m),
        walsh,
        differential,
    })
}
