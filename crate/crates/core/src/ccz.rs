//! Graph transforms and CCZ-equivalence.
//!
//! Points of `F_2^{2m}` are encoded as `x | y << m`, so the graph of `F` is
//! `{x | F(x) << m}`. A 2m x 2m map `L` splits into `L1` (output
//! coordinates `0..m`) and `L2` (coordinates `m..2m`).

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2m::{gcd_u64, Elem, FieldCtx};
use crate::linalg::{BinLinearMap, Echelon};
use crate::par;
use crate::spectra::trace_dual;
use crate::vbf::{algebraic_degree, component_degree, interpolate, FuncTable, UnivariatePoly};

#[inline]
pub fn pair(m: u32, x: Elem, y: Elem) -> u64 {
    x as u64 | (y as u64) << m
}

#[inline]
pub fn unpair(m: u32, v: u64) -> (Elem, Elem) {
    let mask = (1u64 << m) - 1;
    ((v & mask) as Elem, (v >> m & mask) as Elem)
}

/// Linear map on `F_{2^m}^2` from a closure on pairs of field elements.
pub fn pair_map(ctx: &FieldCtx, f: impl Fn(Elem, Elem) -> (Elem, Elem)) -> BinLinearMap {
    let m = ctx.m();
    BinLinearMap::from_fn(2 * m, 2 * m, |v| {
        let (x, y) = unpair(m, v);
        let (u, w) = f(x, y);
        pair(m, u, w)
    })
}

/// Linear map on `F_{2^m}` from a closure on field elements.
pub fn field_map(ctx: &FieldCtx, f: impl Fn(Elem) -> Elem) -> BinLinearMap {
    BinLinearMap::from_fn(ctx.m(), ctx.m(), |v| f(v as Elem) as u64)
}

/// Table of a linear map `F_2^m -> F_2^m` on the field.
pub fn map_table(ctx: &Arc<FieldCtx>, l: &BinLinearMap) -> FuncTable {
    FuncTable::from_fn(ctx, |x| l.apply(x as u64) as Elem)
}

/// Image `L(G_F)` written as the two coordinate functions.
#[derive(Clone, Debug)]
pub struct CczWitness {
    pub map: BinLinearMap,
    pub f1: FuncTable,
    pub f2: FuncTable,
}

/// `F1(x) = L1(x, F(x))`, `F2(x) = L2(x, F(x))`.
pub fn graph_image(l: &BinLinearMap, f: &FuncTable) -> Result<CczWitness> {
    let m = f.m();
    if l.n_in() != 2 * m || l.n_out() != 2 * m {
        return Err(Error::WrongDimension { expected: 2 * m, found: l.n_in() });
    }
    if !l.is_invertible() {
        return Err(Error::Singular);
    }
    let ctx = f.ctx();
    let images: Vec<(Elem, Elem)> = ctx.elements().map(|x| unpair(m, l.apply(pair(m, x, f.get(x))))).collect();
    let f1 = FuncTable::from_fn(ctx, |x| images[x as usize].0);
    let f2 = FuncTable::from_fn(ctx, |x| images[x as usize].1);
    Ok(CczWitness { map: l.clone(), f1, f2 })
}

/// The function whose graph is `L(G_F)`, i.e. `F2 . F1^{-1}`.
pub fn ccz_transform(l: &BinLinearMap, f: &FuncTable) -> Result<FuncTable> {
    ccz_transform_affine(l, (0, 0), f)
}

/// As [`ccz_transform`] with the affine permutation `v -> L(v) + (c1, c2)`.
pub fn ccz_transform_affine(l: &BinLinearMap, shift: (Elem, Elem), f: &FuncTable) -> Result<FuncTable> {
    let w = graph_image(l, f)?;
    let f1_inv = w.f1.invert()?;
    let (c1, c2) = shift;
    Ok(FuncTable::from_fn(f.ctx(), |x| w.f2.get(f1_inv.get(x ^ c1)) ^ c2))
}

/// A subgroup of `F_2^{2m}` (or any `F_2^n`, `n <= 64`) in canonical
/// reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: u32,
    echelon: Echelon,
}

impl Subspace {
    pub fn span(ambient: u32, vs: impl IntoIterator<Item = u64>) -> Self {
        Subspace { ambient, echelon: Echelon::from_vectors(vs) }
    }

    /// Accepts `points` only if they form a subgroup: their span has exactly
    /// as many elements as there are distinct points.
    pub fn from_point_set(ambient: u32, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        let distinct: HashSet<u64> = points.into_iter().collect();
        let s = Self::span(ambient, distinct.iter().copied());
        if distinct.len() as u64 != 1u64 << s.dim() {
            return Err(Error::ConditionViolated(format!(
                "{} points span a space of dimension {}; not a subgroup",
                distinct.len(),
                s.dim()
            )));
        }
        Ok(s)
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn dim(&self) -> u32 {
        self.echelon.dim()
    }

    pub fn basis(&self) -> &[u64] {
        &self.echelon.rows
    }

    pub fn contains(&self, v: u64) -> bool {
        self.echelon.reduce(v) == 0
    }

    /// Canonical representative of the coset `v + V`.
    pub fn coset_label(&self, v: u64) -> u64 {
        self.echelon.reduce(v)
    }

    /// `L(V)`.
    pub fn image(&self, l: &BinLinearMap) -> Subspace {
        Subspace::span(l.n_out(), self.basis().iter().map(|&v| l.apply(v)))
    }

    /// `{(0, x)}`: the subgroup whose cosets index graph points by `x`.
    pub fn vertical(m: u32) -> Subspace {
        Subspace::span(2 * m, (0..m).map(|j| 1u64 << (m + j)))
    }

    /// `{(x, 0)}`.
    pub fn horizontal(m: u32) -> Subspace {
        Subspace::span(2 * m, (0..m).map(|j| 1u64 << j))
    }
}

/// Whether `G_F` meets every coset of `V` exactly once.
pub fn is_transversal(f: &FuncTable, v: &Subspace) -> Result<bool> {
    let m = f.m();
    if v.ambient() != 2 * m || v.dim() != m {
        return Err(Error::WrongDimension { expected: m, found: v.dim() });
    }
    let mut labels: Vec<u64> = f.ctx().elements().map(|x| v.coset_label(pair(m, x, f.get(x)))).collect();
    labels.sort_unstable();
    Ok(labels.windows(2).all(|w| w[0] != w[1]))
}

/// Whether `A_F = {(a, F(x+a)+F(x)) : a != 0}` avoids `V`.
pub fn avoids(f: &FuncTable, v: &Subspace) -> Result<bool> {
    let m = f.m();
    if v.ambient() != 2 * m {
        return Err(Error::WrongDimension { expected: 2 * m, found: v.ambient() });
    }
    let size = f.ctx().size();
    let mut seen = vec![false; size];
    for a in 1..size as Elem {
        seen.iter_mut().for_each(|s| *s = false);
        for x in f.ctx().elements() {
            let d = f.get(x) ^ f.get(x ^ a);
            if !seen[d as usize] {
                seen[d as usize] = true;
                if v.contains(pair(m, a, d)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The subgroups transversal to the graph of a Gold function used in the
/// constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    /// `(0, F \ H_a) u (a, F \ H_a)` for odd `m`, `(0, H_a) u (a, F \ H_a)`
    /// for even `m`, with `H_a = {x : tr(a^{-(2^i+1)} x) = [m odd]}`.
    GoldDerivative { a: Elem, i: u32 },
    /// `{(b, x) : b in F_{2^n}, tr_{m/n}(x) = 0}`.
    RelativeTraceKernel { n: u32 },
}

/// `H_a = {F(x+a) + F(x)}` for `F = x^{2^i+1}`, by its hyperplane formula.
pub fn gold_derivative_image(ctx: &FieldCtx, a: Elem, i: u32) -> Result<Vec<Elem>> {
    if a == 0 {
        return Err(Error::ZeroElement);
    }
    let odd = (ctx.m() % 2) as Elem;
    let e = (1u64 << i) + 1;
    let scale = ctx.inv(ctx.pow(a, e))?;
    Ok(ctx.elements().filter(|&x| ctx.trace(ctx.mul(scale, x)) == odd).collect())
}

pub fn build_subgroup(ctx: &FieldCtx, kind: SubgroupKind) -> Result<Subspace> {
    let m = ctx.m();
    let points: Vec<u64> = match kind {
        SubgroupKind::GoldDerivative { a, i } => {
            let h = gold_derivative_image(ctx, a, i)?;
            let in_h: HashSet<Elem> = h.iter().copied().collect();
            let outside: Vec<Elem> = ctx.elements().filter(|x| !in_h.contains(x)).collect();
            let first: &[Elem] = if m % 2 == 1 { &outside } else { &h };
            first.iter().map(|&y| pair(m, 0, y)).chain(outside.iter().map(|&y| pair(m, a, y))).collect()
        }
        SubgroupKind::RelativeTraceKernel { n } => {
            let sub = ctx.subfield(n)?;
            let mut kernel = Vec::new();
            for x in ctx.elements() {
                if ctx.rel_trace(x, n)? == 0 {
                    kernel.push(x);
                }
            }
            sub.iter().flat_map(|&b| kernel.iter().map(move |&x| pair(m, b, x))).collect()
        }
    };
    let s = Subspace::from_point_set(2 * m, points)?;
    if s.dim() != m {
        return Err(Error::WrongDimension { expected: m, found: s.dim() });
    }
    Ok(s)
}

/// Completes `L1: F_2^{2m} -> F_2^m` to an invertible `(L1, L2)` where `L2`
/// maps `Ker(L1)` bijectively onto `F_2^m` and vanishes on a complement.
pub fn complete_to_permutation(l1: &BinLinearMap, f: &FuncTable) -> Result<BinLinearMap> {
    let m = f.m();
    if l1.n_in() != 2 * m || l1.n_out() != m {
        return Err(Error::WrongDimension { expected: 2 * m, found: l1.n_in() });
    }
    let f1 = FuncTable::from_fn(f.ctx(), |x| l1.apply(pair(m, x, f.get(x))) as Elem);
    if !f1.is_permutation() {
        return Err(Error::NotAPermutation);
    }
    if l1.rank() != m {
        return Err(Error::RankDeficient);
    }
    let kernel = l1.kernel_basis();
    debug_assert_eq!(kernel.len() as u32, m);
    let mut ech = Echelon::from_vectors(kernel.iter().copied());
    let complement: Vec<u64> = (0..2 * m).map(|j| 1u64 << j).filter(|&e| ech.insert(e)).collect();
    // basis matrix B with columns [kernel | complement]; L2 = T B^{-1}
    let basis: Vec<u64> = kernel.iter().chain(&complement).copied().collect();
    let b = BinLinearMap::from_fn(2 * m, 2 * m, |v| {
        (0..2 * m).filter(|j| v >> j & 1 == 1).fold(0, |acc, j| acc ^ basis[j as usize])
    });
    let t = BinLinearMap::from_fn(2 * m, m, |v| v & ((1u64 << m) - 1));
    let l2 = t.compose(&b.inverse()?)?;
    let l = l1.stack(&l2)?;
    if !l.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(l)
}

/// The graph map realizing `R1 . F . R2 + R` (or `R1 . F^{-1} . R2 + R`
/// with `use_inverse`) as a CCZ transform.
pub fn ea_to_ccz_map(
    r1: &BinLinearMap,
    r2: &BinLinearMap,
    r: &BinLinearMap,
    use_inverse: bool,
) -> Result<BinLinearMap> {
    let m = r1.n_in();
    for map in [r1, r2, r] {
        if map.n_in() != m || map.n_out() != m {
            return Err(Error::WrongDimension { expected: m, found: map.n_in() });
        }
    }
    let r2_inv = r2.inverse()?;
    if !r1.is_invertible() {
        return Err(Error::Singular);
    }
    let mask = (1u64 << m) - 1;
    Ok(BinLinearMap::from_fn(2 * m, 2 * m, |v| {
        let (x, y) = (v & mask, v >> m & mask);
        let (u, w) = if use_inverse {
            let t = r2_inv.apply(y);
            (t, r.apply(t) ^ r1.apply(x))
        } else {
            let t = r2_inv.apply(x);
            (t, r1.apply(y) ^ r.apply(t))
        };
        u | w << m
    }))
}

/// Outcome of the sufficient test for EA-inequivalence to power maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EaVerdict {
    /// Some component `tr(cF)` has degree outside `{0, 1, deg F}`.
    ProvenInequivalent {
        c: Elem,
    },
    Inconclusive,
}

pub fn ea_power_test(f: &FuncTable) -> EaVerdict {
    let deg = algebraic_degree(f);
    let n = f.ctx().size() as u64 - 1;
    let hit = par::find_first(n, 64, |k| {
        let c = k as Elem + 1;
        let d = component_degree(f, c);
        (d != 0 && d != 1 && d != deg).then_some(c)
    });
    match hit {
        Some(c) => EaVerdict::ProvenInequivalent { c },
        None => EaVerdict::Inconclusive,
    }
}

fn check_linearized(p: &UnivariatePoly) -> Result<()> {
    match p.terms().keys().find(|e| !e.is_power_of_two()) {
        Some(&e) => Err(Error::NotLinearized(e)),
        None => Ok(()),
    }
}

/// Matrix of `x -> sum c_k x^{2^k}` in the polynomial basis.
pub fn linearized_to_matrix(poly: &UnivariatePoly) -> Result<BinLinearMap> {
    check_linearized(poly)?;
    Ok(field_map(poly.ctx(), |x| poly.eval(x)))
}

/// The linearized polynomial of a linear map on the field.
pub fn matrix_to_linearized(ctx: &Arc<FieldCtx>, l: &BinLinearMap) -> Result<UnivariatePoly> {
    if l.n_in() != ctx.m() || l.n_out() != ctx.m() {
        return Err(Error::WrongDimension { expected: ctx.m(), found: l.n_in() });
    }
    let p = interpolate(&map_table(ctx, l))?;
    check_linearized(&p)?;
    Ok(p)
}

/// Adjoint for `x . y = tr(xy)`: `L*(v) = sum (c_k v)^{2^{m-k}}`.
pub fn linearized_adjoint(poly: &UnivariatePoly) -> Result<UnivariatePoly> {
    check_linearized(poly)?;
    let ctx = poly.ctx();
    let m = ctx.m();
    let terms = poly.terms().iter().map(|(&e, &c)| {
        let k = e.trailing_zeros();
        let back = (m - k) % m;
        (1u64 << back, ctx.frobenius(c, back))
    });
    Ok(UnivariatePoly::from_terms(ctx, terms))
}

/// The trace-form adjoint of a matrix, `D^{-1} M^T D` with `D` the trace
/// dual map.
pub fn trace_adjoint_matrix(ctx: &FieldCtx, l: &BinLinearMap) -> Result<BinLinearMap> {
    let d = field_map(ctx, |a| trace_dual(ctx, a));
    d.inverse()?.compose(&l.transpose())?.compose(&d)
}

fn check_gcd(i: u32, m: u32) -> Result<()> {
    if i == 0 || gcd_u64(i as u64, m as u64) != 1 {
        return Err(Error::GcdViolation { i, m });
    }
    Ok(())
}

/// Whether `L(x^{2^i+1}) + L'(x)` is a permutation, decided by: for all
/// `u != 0` and all `v` with `tr(v) = tr(1)`, `L(u^{2^i+1} v) != L'(u)`.
pub fn gold_perm_criterion(lp: &UnivariatePoly, lq: &UnivariatePoly, i: u32) -> Result<bool> {
    check_linearized(lp)?;
    check_linearized(lq)?;
    if *lp.ctx() != *lq.ctx() {
        return Err(Error::ContextMismatch);
    }
    let ctx = lp.ctx();
    check_gcd(i, ctx.m())?;
    let l = lp.evaluate();
    let lprime = lq.evaluate();
    let t1 = ctx.trace(1);
    let vs: Vec<Elem> = ctx.elements().filter(|&v| ctx.trace(v) == t1).collect();
    let e = (1u64 << i) + 1;
    for u in 1..=ctx.mask() {
        let p = ctx.pow(u, e);
        let target = lprime.get(u);
        if vs.iter().any(|&v| l.get(ctx.mul(p, v)) == target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of the even-degree criterion with a record of whether the verdict
/// was the same for every choice of `(2^i+1)`-th root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvenCriterion {
    pub permutation: bool,
    pub root_choice_consistent: bool,
}

/// Whether `L(x^{2^i+1}) + x` is a permutation for even `m`: every `v`
/// with `L*(v) != 0` needs `L*(v) = u^{2^i+1}` and `tr_{m/2}(v/u) != 0`.
pub fn gold_perm_criterion_even(lp: &UnivariatePoly, i: u32) -> Result<bool> {
    Ok(gold_perm_criterion_even_detailed(lp, i)?.permutation)
}

pub fn gold_perm_criterion_even_detailed(lp: &UnivariatePoly, i: u32) -> Result<EvenCriterion> {
    let ctx = lp.ctx();
    let m = ctx.m();
    if m % 2 == 1 {
        return Err(Error::OddDegree(m));
    }
    check_gcd(i, m)?;
    let adj = linearized_adjoint(lp)?.evaluate();
    let e = (1u64 << i) + 1;
    let mut roots: Vec<Vec<Elem>> = vec![Vec::new(); ctx.size()];
    for u in 1..=ctx.mask() {
        roots[ctx.pow(u, e) as usize].push(u);
    }
    let mut permutation = true;
    let mut consistent = true;
    for v in ctx.elements() {
        let w = adj.get(v);
        if w == 0 {
            continue;
        }
        let rs = &roots[w as usize];
        if rs.is_empty() {
            permutation = false;
            continue;
        }
        let ok: Vec<bool> = rs.iter().map(|&u| ctx.rel_trace(ctx.div(v, u), 2).unwrap() != 0).collect();
        if ok.iter().any(|&b| b != ok[0]) {
            consistent = false;
        }
        if !ok[0] {
            permutation = false;
        }
    }
    Ok(EvenCriterion { permutation, root_choice_consistent: consistent })
}

/// Result of searching for a linear `L` with `F + L` a permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionSearch {
    pub witness: Option<BinLinearMap>,
    /// Candidates examined (for a timed-out exhaustive scan, the size of the
    /// scanned blocks).
    pub candidates: u64,
    /// A witness was found or the whole space of `m x m` matrices was
    /// covered.
    pub conclusive: bool,
    /// The time budget ran out first.
    pub timed_out: bool,
}

/// Limits on a search: a number of candidates, a wall-clock duration, or
/// both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub candidates: Option<u64>,
    pub time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn candidates(n: u64) -> Self {
        SearchBudget { candidates: Some(n), time: None }
    }

    pub fn time(d: Duration) -> Self {
        SearchBudget { candidates: None, time: Some(d) }
    }

    fn is_unlimited(&self) -> bool {
        self.candidates.is_none() && self.time.is_none()
    }
}

/// Largest `m` searched exhaustively without a budget.
pub const EXHAUSTIVE_LIMIT: u32 = 5;

fn matrix_from_index(m: u32, k: u64) -> BinLinearMap {
    let mask = (1u64 << m) - 1;
    let rows = (0..m).map(|r| (k >> (m * (m - 1 - r))) & mask).collect();
    BinLinearMap::new(m, rows).expect("rows fit")
}

/// `F + L` is injective, with `L` given by its column images. Walks the
/// inputs in Gray-code order and stops at the first repeated value.
fn sum_is_permutation(values: &[Elem], cols: &[u64], seen: &mut [u64]) -> bool {
    seen.iter_mut().for_each(|w| *w = 0);
    let mut x = 0usize;
    let mut lx = 0u64;
    for t in 0..values.len() {
        if t > 0 {
            let bit = t.trailing_zeros() as usize;
            x ^= 1 << bit;
            lx ^= cols[bit];
        }
        let v = (values[x] as u64 ^ lx) as usize;
        let (w, b) = (v / 64, v % 64);
        if seen[w] >> b & 1 == 1 {
            return false;
        }
        seen[w] |= 1 << b;
    }
    true
}

fn candidate_is_witness(values: &[Elem], m: u32, k: u64) -> bool {
    let mask = (1u64 << m) - 1;
    let mut cols = [0u64; 32];
    for r in 0..m {
        let row = (k >> (m * (m - 1 - r))) & mask;
        for (j, col) in cols.iter_mut().enumerate().take(m as usize) {
            *col |= (row >> j & 1) << r;
        }
    }
    let mut seen = vec![0u64; values.len().div_ceil(64)];
    sum_is_permutation(values, &cols[..m as usize], &mut seen)
}

/// Searches linear maps `L` (as `m x m` bit matrices) for one making
/// `F + L` a permutation.
///
/// Without a budget the full space of `2^{m^2}` matrices is scanned in
/// row-major numeric order (row 0 most significant) and the first witness
/// in that order is returned; this requires `m <= 5`. With a budget and
/// `m <= 5` the first `budget` matrices in that order are scanned; for
/// larger `m`, `budget` matrices are drawn from a fixed-seed generator.
pub fn linear_completion_search(f: &FuncTable, budget: Option<u64>) -> Result<CompletionSearch> {
    let budget = budget.map_or(SearchBudget::unlimited(), SearchBudget::candidates);
    linear_completion_search_within(f, budget)
}

/// As [`linear_completion_search`] with an optional time limit as well.
pub fn linear_completion_search_within(f: &FuncTable, budget: SearchBudget) -> Result<CompletionSearch> {
    const BLOCK: u64 = 1 << 14;
    let m = f.m();
    let values = f.values();
    let deadline = budget.time.map(|d| Instant::now() + d);
    let expired = || deadline.is_some_and(|t| Instant::now() >= t);
    if m <= EXHAUSTIVE_LIMIT {
        let total = 1u64 << (m * m);
        let limit = budget.candidates.map_or(total, |b| b.min(total));
        let timed_out = AtomicBool::new(false);
        let scanned = AtomicU64::new(0);
        let hit = par::find_block_first(limit, BLOCK, |lo, hi| {
            if timed_out.load(Ordering::Relaxed) || expired() {
                timed_out.store(true, Ordering::Relaxed);
                return None;
            }
            scanned.fetch_add(hi - lo, Ordering::Relaxed);
            (lo..hi).find(|&k| candidate_is_witness(values, m, k))
        });
        let timed_out = timed_out.into_inner() && hit.is_none();
        return Ok(CompletionSearch {
            witness: hit.map(|k| matrix_from_index(m, k)),
            candidates: match hit {
                Some(k) => k + 1,
                None if timed_out => scanned.into_inner(),
                None => limit,
            },
            conclusive: hit.is_some() || (limit == total && !timed_out),
            timed_out,
        });
    }
    if budget.is_unlimited() {
        return Err(Error::BudgetRequired(m));
    }
    if m > 32 {
        return Err(Error::TooLarge { m, limit: 32 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut seen = vec![0u64; values.len().div_ceil(64)];
    let limit = budget.candidates.unwrap_or(u64::MAX);
    for n in 0..limit {
        if n % 1024 == 0 && expired() {
            return Ok(CompletionSearch { witness: None, candidates: n, conclusive: false, timed_out: true });
        }
        let l = BinLinearMap::random(m, m, &mut rng);
        if sum_is_permutation(values, &l.columns(), &mut seen) {
            return Ok(CompletionSearch { witness: Some(l), candidates: n + 1, conclusive: true, timed_out: false });
        }
    }
    Ok(CompletionSearch { witness: None, candidates: limit, conclusive: false, timed_out: false })
}
