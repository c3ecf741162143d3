//! Power-function families and Gold-derived AB/APN constructions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ccz::{graph_image, pair_map, CczWitness};
use crate::error::{Error, Result};
use crate::gf2m::{gcd_u64, Elem, FieldCtx};
use crate::linalg::BinLinearMap;
use crate::vbf::FuncTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gold,
    Kasami,
    Welch,
    Niho,
    Inverse,
    Dobbertin,
    Thm1,
    Thm2,
    Thm3,
    Thm4,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Gold,
        Family::Kasami,
        Family::Welch,
        Family::Niho,
        Family::Inverse,
        Family::Dobbertin,
        Family::Thm1,
        Family::Thm2,
        Family::Thm3,
        Family::Thm4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gold => "gold",
            Family::Kasami => "kasami",
            Family::Welch => "welch",
            Family::Niho => "niho",
            Family::Inverse => "inverse",
            Family::Dobbertin => "dobbertin",
            Family::Thm1 => "thm1",
            Family::Thm2 => "thm2",
            Family::Thm3 => "thm3",
            Family::Thm4 => "thm4",
        }
    }

    pub fn is_power(self) -> bool {
        !matches!(self, Family::Thm1 | Family::Thm2 | Family::Thm3 | Family::Thm4)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::ConditionViolated(format!("unknown family '{s}'")))
    }
}

/// Whether `gcd(i, m) = 1` is enforced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GcdMode {
    #[default]
    Strict,
    /// Allows `gcd(i, m) = s > 1`; outputs are only claimed to share the
    /// spectra of `x^{2^i+1}`.
    Relaxed,
}

/// A family instance. `i` is used by Gold, Kasami and the four
/// constructions; `n` only by `Thm4`. Welch and Niho derive `t` from `m`,
/// Dobbertin derives `i` from `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub m: u32,
    pub i: Option<u32>,
    pub n: Option<u32>,
    pub gcd_mode: GcdMode,
}

impl FamilySpec {
    pub fn new(family: Family, m: u32) -> Self {
        FamilySpec { family, m, i: None, n: None, gcd_mode: GcdMode::Strict }
    }

    pub fn with_i(mut self, i: u32) -> Self {
        self.i = Some(i);
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn relaxed(mut self) -> Self {
        self.gcd_mode = GcdMode::Relaxed;
        self
    }

    fn need_i(&self) -> Result<u32> {
        self.i.ok_or_else(|| Error::ConditionViolated(format!("family {} needs parameter i", self.family)))
    }

    /// Checks every parameter condition without building a field.
    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        if self.family.is_power() {
            return family_exponent(self).map(|_| ());
        }
        let i = self.need_i()?;
        match self.family {
            Family::Thm1 => theorem12_conditions(1, m, i, self.gcd_mode),
            Family::Thm2 => theorem12_conditions(2, m, i, self.gcd_mode),
            Family::Thm3 => theorem3_conditions(m, i),
            Family::Thm4 => {
                let n = self.n.ok_or_else(|| Error::ConditionViolated("family thm4 needs parameter n".into()))?;
                theorem4_conditions(m, n, i)
            }
            _ => unreachable!(),
        }
    }

    /// Label used in reports: relaxed instances with `gcd(i, m) > 1` are not
    /// claimed to be APN or AB.
    pub fn label(&self) -> String {
        match (self.gcd_mode, self.i) {
            (GcdMode::Relaxed, Some(i)) if gcd_u64(i as u64, self.m as u64) > 1 => {
                format!("{} (three-valued family)", self.family)
            }
            _ => self.family.to_string(),
        }
    }

    pub fn build(&self, ctx: &Arc<FieldCtx>) -> Result<FuncTable> {
        if ctx.m() != self.m {
            return Err(Error::WrongDimension { expected: self.m, found: ctx.m() });
        }
        self.validate()?;
        if self.family.is_power() {
            return Ok(FuncTable::power(ctx, family_exponent(self)?));
        }
        let i = self.need_i()?;
        match self.family {
            Family::Thm1 => theorem1(ctx, i, self.gcd_mode),
            Family::Thm2 => theorem2(ctx, i, self.gcd_mode),
            Family::Thm3 => theorem3(ctx, i),
            Family::Thm4 => theorem4(ctx, self.n.unwrap_or(0), i),
            _ => unreachable!(),
        }
    }
}

fn require_gcd(i: u32, m: u32) -> Result<()> {
    if i == 0 || gcd_u64(i as u64, m as u64) != 1 {
        return Err(Error::GcdViolation { i, m });
    }
    Ok(())
}

fn odd_split(family: Family, m: u32) -> Result<u32> {
    if m.is_multiple_of(2) {
        return Err(Error::ConditionViolated(format!("{family} needs m = 2t+1 odd, got m={m}")));
    }
    Ok(m / 2)
}

/// The exponent `d` of a power family, after checking its conditions.
pub fn family_exponent(spec: &FamilySpec) -> Result<u64> {
    let m = spec.m;
    if !(2..=32).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    let d = match spec.family {
        Family::Gold => {
            let i = spec.need_i()?;
            require_gcd(i, m)?;
            (1u64 << i) + 1
        }
        Family::Kasami => {
            let i = spec.need_i()?;
            require_gcd(i, m)?;
            (1u64 << (2 * i)) - (1u64 << i) + 1
        }
        Family::Welch => (1u64 << odd_split(spec.family, m)?) + 3,
        Family::Niho => {
            let t = odd_split(spec.family, m)?;
            if t % 2 == 0 {
                (1u64 << t) + (1u64 << (t / 2)) - 1
            } else {
                (1u64 << t) + (1u64 << (3 * t).div_ceil(2)) - 1
            }
        }
        Family::Inverse => (1u64 << m) - 2,
        Family::Dobbertin => {
            if !m.is_multiple_of(5) {
                return Err(Error::ConditionViolated(format!("dobbertin needs m = 5i, got m={m}")));
            }
            let i = m / 5;
            (1u64 << (4 * i)) + (1u64 << (3 * i)) + (1u64 << (2 * i)) + (1u64 << i) - 1
        }
        f => return Err(Error::ConditionViolated(format!("{f} is not a power family"))),
    };
    Ok(d)
}

/// Every instance of the known APN power families at `m`.
pub fn apn_power_instances(m: u32) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for family in [Family::Gold, Family::Kasami] {
        for i in 1..m {
            let spec = FamilySpec::new(family, m).with_i(i);
            if spec.validate().is_ok() {
                out.push(spec);
            }
        }
    }
    for family in [Family::Welch, Family::Niho, Family::Dobbertin] {
        let spec = FamilySpec::new(family, m);
        if spec.validate().is_ok() {
            out.push(spec);
        }
    }
    if m % 2 == 1 {
        out.push(FamilySpec::new(Family::Inverse, m));
    }
    out
}

/// Every instance of the known AB power families at odd `m`.
pub fn ab_power_instances(m: u32) -> Vec<FamilySpec> {
    if m.is_multiple_of(2) {
        return Vec::new();
    }
    apn_power_instances(m).into_iter().filter(|s| !matches!(s.family, Family::Inverse | Family::Dobbertin)).collect()
}

fn theorem12_conditions(which: u32, m: u32, i: u32, mode: GcdMode) -> Result<()> {
    match which {
        1 if m.is_multiple_of(2) => return Err(Error::ParityViolated(format!("m must be odd, got m={m}"))),
        1 if m <= 3 => return Err(Error::ConditionViolated(format!("m must exceed 3, got m={m}"))),
        2 if m % 2 == 1 => return Err(Error::ParityViolated(format!("m must be even, got m={m}"))),
        2 if m < 4 => return Err(Error::ConditionViolated(format!("m must be at least 4, got m={m}"))),
        _ => {}
    }
    if i == 0 || i >= m {
        return Err(Error::ConditionViolated(format!("i must satisfy 0 < i < m, got i={i}")));
    }
    if mode == GcdMode::Strict {
        require_gcd(i, m)?;
    }
    Ok(())
}

fn gold_exp(i: u32) -> u64 {
    (1u64 << i) + 1
}

fn theorem1_raw(ctx: &Arc<FieldCtx>, i: u32) -> FuncTable {
    let q = 1u64 << i;
    FuncTable::from_fn(ctx, |x| {
        let g = ctx.pow(x, q + 1);
        let t = ctx.trace(g ^ x);
        g ^ if t == 1 { ctx.pow(x, q) ^ x } else { 0 }
    })
}

fn theorem2_raw(ctx: &Arc<FieldCtx>, i: u32) -> FuncTable {
    let q = 1u64 << i;
    FuncTable::from_fn(ctx, |x| {
        let g = ctx.pow(x, q + 1);
        g ^ if ctx.trace(g) == 1 { ctx.pow(x, q) ^ x ^ 1 } else { 0 }
    })
}

/// `x^{2^i+1} + (x^{2^i} + x) tr(x^{2^i+1} + x)` for odd `m > 3`.
pub fn theorem1(ctx: &Arc<FieldCtx>, i: u32, mode: GcdMode) -> Result<FuncTable> {
    theorem12_conditions(1, ctx.m(), i, mode)?;
    Ok(theorem1_raw(ctx, i))
}

/// `x^{2^i+1} + (x^{2^i} + x + 1) tr(x^{2^i+1})` for even `m >= 4`.
pub fn theorem2(ctx: &Arc<FieldCtx>, i: u32, mode: GcdMode) -> Result<FuncTable> {
    theorem12_conditions(2, ctx.m(), i, mode)?;
    Ok(theorem2_raw(ctx, i))
}

fn theorem3_conditions(m: u32, i: u32) -> Result<()> {
    if !m.is_multiple_of(6) {
        return Err(Error::DivisibilityViolated(format!("m must be divisible by 6, got m={m}")));
    }
    require_gcd(i, m)
}

/// `x + tr_{m/3}(x^{2(2^i+1)} + x^{4(2^i+1)})`.
pub fn theorem3_f1(ctx: &Arc<FieldCtx>, i: u32) -> Result<FuncTable> {
    theorem3_conditions(ctx.m(), i)?;
    let e = gold_exp(i);
    Ok(FuncTable::from_fn(ctx, |x| {
        let g = ctx.pow(x, e);
        x ^ ctx.rel_trace(ctx.square(g) ^ ctx.pow(g, 4), 3).expect("3 divides m")
    }))
}

/// `f` composed with itself `k` times (`k = 0` gives the identity).
pub fn iterate(f: &FuncTable, k: u32) -> FuncTable {
    let mut acc = FuncTable::identity(f.ctx());
    for _ in 0..k {
        acc = f.compose(&acc).expect("same field");
    }
    acc
}

/// Smallest `k` in `1..=limit` with `f^k = id`.
pub fn permutation_order(f: &FuncTable, limit: u32) -> Option<u32> {
    let id = FuncTable::identity(f.ctx());
    let mut acc = f.clone();
    for k in 1..=limit {
        if acc == id {
            return Some(k);
        }
        acc = f.compose(&acc).expect("same field");
    }
    None
}

/// The degree-4 APN function for `m` divisible by 6, computed as
/// `x^{2^i+1} . F1^{-1}`.
pub fn theorem3(ctx: &Arc<FieldCtx>, i: u32) -> Result<FuncTable> {
    let f1 = theorem3_f1(ctx, i)?;
    let gold = FuncTable::power(ctx, gold_exp(i));
    gold.compose(&f1.invert()?)
}

/// `[x + tr_{m/3}(x^{2(2^i+1)} + x^{4(2^i+1)}) + tr(x) tr_{m/3}(x^{2^i+1} +
/// x^{2^{2i}(2^i+1)})]^{2^i+1}` evaluated directly.
pub fn theorem3_formula(ctx: &Arc<FieldCtx>, i: u32) -> Result<FuncTable> {
    theorem3_conditions(ctx.m(), i)?;
    let e = gold_exp(i);
    let rt = |x| ctx.rel_trace(x, 3).expect("3 divides m");
    Ok(FuncTable::from_fn(ctx, |x| {
        let g = ctx.pow(x, e);
        let mut inner = x ^ rt(ctx.square(g) ^ ctx.pow(g, 4));
        if ctx.trace(x) == 1 {
            inner ^= rt(g ^ ctx.frobenius(g, 2 * i));
        }
        ctx.pow(inner, e)
    }))
}

/// The fully expanded expression with `T(x) = tr_{m/3}(x^{2^i+1})` and
/// `s = i mod 3`.
pub fn theorem3_expanded(ctx: &Arc<FieldCtx>, i: u32) -> Result<FuncTable> {
    theorem3_conditions(ctx.m(), i)?;
    let e = gold_exp(i);
    let s = i % 3;
    let q = 1u64 << i;
    Ok(FuncTable::from_fn(ctx, |x| {
        let g = ctx.pow(x, e);
        let t = ctx.rel_trace(g, 3).expect("3 divides m");
        let tr = ctx.trace(x);
        let tt = |k: u32| ctx.frobenius(t, k);
        let mut r = g ^ ctx.mul(t, tt(s)) ^ ctx.mul(ctx.trace(g), tt(2 * s));
        r ^= ctx.mul(x, tt(0) ^ tt(2 * s)) ^ ctx.mul(ctx.pow(x, q), tt(1) ^ tt(2));
        if tr == 1 {
            r ^= tt(0) ^ tt(2);
            r ^= ctx.mul(x, tt(0) ^ tt(s));
            r ^= ctx.mul(ctx.pow(x, q), tt(0) ^ tt(2 * s));
        }
        r
    }))
}

/// Whether `(u^{2^i+1} w)^2 + (u^{2^i+1} w)^4 != u` for all `u, w` in
/// `F_8^*` with `tr(w) = 0`, and how many pairs were examined.
pub fn f8_side_condition(i: u32) -> (bool, u32) {
    let ctx = FieldCtx::new(3, None).expect("GF(8) exists");
    // 2^i mod 7 only depends on i mod 3
    let e = gold_exp(i % 3);
    let mut pairs = 0;
    let mut holds = true;
    for u in 1..8 {
        for w in (1..8).filter(|&w| ctx.trace(w) == 0) {
            pairs += 1;
            let z = ctx.mul(ctx.pow(u, e), w);
            if ctx.square(z) ^ ctx.pow(z, 4) == u {
                holds = false;
            }
        }
    }
    (holds, pairs)
}

fn theorem4_conditions(m: u32, n: u32, i: u32) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::ParityViolated(format!("m must be odd, got m={m}")));
    }
    if n == 0 || !m.is_multiple_of(n) {
        return Err(Error::DivisibilityViolated(format!("n must divide m, got n={n}, m={m}")));
    }
    if n == m {
        return Err(Error::ConditionViolated(format!("n must differ from m, got n=m={m}")));
    }
    require_gcd(i, m)
}

struct Thm4 {
    q: u64,
    root: u64,
    root_q: u64,
    n: u32,
}

impl Thm4 {
    fn new(ctx: &FieldCtx, n: u32, i: u32) -> Result<Self> {
        theorem4_conditions(ctx.m(), n, i)?;
        let q = 1u64 << i;
        let root = ctx.inverse_exponent(q + 1)?;
        let root_q = ctx.reduce_exponent(root * q % ctx.order());
        Ok(Thm4 { q, root, root_q, n })
    }

    fn rt(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        ctx.rel_trace(x, self.n).expect("n divides m")
    }

    /// `W = tr(x)^{2^i+1} + tr(x^{2^i+1}) + tr(x)` with `tr = tr_{m/n}`.
    fn w(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let t = self.rt(ctx, x);
        ctx.pow(t, self.q + 1) ^ self.rt(ctx, ctx.pow(x, self.q + 1)) ^ t
    }
}

/// The AB function built from the subgroup `{(b, x) : b in F_{2^n},
/// tr_{m/n}(x) = 0}`, by its closed formula.
pub fn theorem4(ctx: &Arc<FieldCtx>, n: u32, i: u32) -> Result<FuncTable> {
    let p = Thm4::new(ctx, n, i)?;
    let q = p.q;
    Ok(FuncTable::from_fn(ctx, |x| {
        let t = p.rt(ctx, x);
        let tq = ctx.pow(t, q);
        let xq = ctx.pow(x, q);
        let g = ctx.pow(x, q + 1);
        let w = p.w(ctx, x);
        g ^ p.rt(ctx, g)
            ^ ctx.mul(xq, t)
            ^ ctx.mul(x, tq)
            ^ ctx.mul(ctx.pow(w, p.root), xq ^ tq ^ 1)
            ^ ctx.mul(ctx.pow(w, p.root_q), x ^ t)
    }))
}

/// `y + W(y)^{1/(2^i+1)} + tr_{m/n}(y)`, the inverse of
/// `F1(x) = x + tr_{m/n}(x) + tr_{m/n}(x^{2^i+1})`.
pub fn theorem4_f1_inverse(ctx: &FieldCtx, n: u32, i: u32, y: Elem) -> Result<Elem> {
    let p = Thm4::new(ctx, n, i)?;
    Ok(y ^ ctx.pow(p.w(ctx, y), p.root) ^ p.rt(ctx, y))
}

/// `x + tr_{m/n}(x) + tr_{m/n}(x^{2^i+1})`.
pub fn theorem4_f1(ctx: &Arc<FieldCtx>, n: u32, i: u32) -> Result<FuncTable> {
    let p = Thm4::new(ctx, n, i)?;
    Ok(FuncTable::from_fn(ctx, |x| x ^ p.rt(ctx, x) ^ p.rt(ctx, ctx.pow(x, p.q + 1))))
}

/// `x^{2^i+1} + tr_{m/n}(x)`.
pub fn theorem4_f2(ctx: &Arc<FieldCtx>, n: u32, i: u32) -> Result<FuncTable> {
    let p = Thm4::new(ctx, n, i)?;
    Ok(FuncTable::from_fn(ctx, |x| ctx.pow(x, p.q + 1) ^ p.rt(ctx, x)))
}

/// `F2 . F1^{-1}` using the closed-form inverse.
pub fn theorem4_composed(ctx: &Arc<FieldCtx>, n: u32, i: u32) -> Result<FuncTable> {
    let f2 = theorem4_f2(ctx, n, i)?;
    let p = Thm4::new(ctx, n, i)?;
    Ok(FuncTable::from_fn(ctx, |y| f2.get(y ^ ctx.pow(p.w(ctx, y), p.root) ^ p.rt(ctx, y))))
}

/// Residual of `u^{2^i+1} + u^{2^i} t + u t^{2^i} + tr_{m/n}(y^{2^i+1}) + t`
/// with `t = tr_{m/n}(y)` and `u = F1^{-1}(y) + y`.
pub fn theorem4_u_residual(ctx: &FieldCtx, n: u32, i: u32, y: Elem) -> Result<Elem> {
    let p = Thm4::new(ctx, n, i)?;
    let u = theorem4_f1_inverse(ctx, n, i, y)? ^ y;
    let t = p.rt(ctx, y);
    Ok(ctx.pow(u, p.q + 1)
        ^ ctx.mul(ctx.pow(u, p.q), t)
        ^ ctx.mul(u, ctx.pow(t, p.q))
        ^ p.rt(ctx, ctx.pow(y, p.q + 1))
        ^ t)
}

/// A witness map together with the identities it is expected to satisfy.
#[derive(Clone, Debug)]
pub struct WitnessCheck {
    pub witness: CczWitness,
    /// `L . L = id`.
    pub map_involution: bool,
    /// `F1 . F1 = id`.
    pub f1_involution: bool,
    /// `F2 . F1^{-1}(x) = a^{2^i+1} F'(x/a)` for all `x`.
    pub scaling_identity: bool,
}

impl WitnessCheck {
    pub fn all_hold(&self) -> bool {
        self.map_involution && self.f1_involution && self.scaling_identity
    }
}

/// The graph map taking `x^{2^i+1}` to a scaled copy of the `which`-th
/// construction (1: odd `m`, 2: even `m`), and the checks on it.
pub fn theorem12_ccz_witness(ctx: &Arc<FieldCtx>, which: u32, i: u32, a: Elem) -> Result<WitnessCheck> {
    let m = ctx.m();
    if a == 0 {
        return Err(Error::ZeroElement);
    }
    match which {
        1 if m.is_multiple_of(2) => return Err(Error::ParityViolated(format!("m must be odd, got m={m}"))),
        2 if m % 2 == 1 => return Err(Error::ParityViolated(format!("m must be even, got m={m}"))),
        1 | 2 => {}
        _ => return Err(Error::ConditionViolated(format!("no construction number {which}"))),
    }
    let e = gold_exp(i);
    let a_inv = ctx.inv(a)?;
    let ae = ctx.pow(a, e);
    let ae_inv = ctx.inv(ae)?;
    let map = pair_map(ctx, |x, y| {
        let ty = ctx.trace(ctx.mul(ae_inv, y));
        if which == 1 {
            let tx = ctx.trace(ctx.mul(a_inv, x));
            let u = x ^ if tx ^ ty == 1 { a } else { 0 };
            let w = y ^ if tx ^ ty == 1 { ae } else { 0 };
            (u, w)
        } else {
            (x ^ if ty == 1 { a } else { 0 }, y)
        }
    });
    let gold = FuncTable::power(ctx, e);
    let witness = graph_image(&map, &gold)?;
    let map_involution = map.compose(&map)? == BinLinearMap::identity(2 * m);
    let f1_involution = witness.f1.compose(&witness.f1)? == FuncTable::identity(ctx);
    let f_prime = if which == 1 { theorem1_raw(ctx, i) } else { theorem2_raw(ctx, i) };
    let f1_inv = witness.f1.invert()?;
    let scaling_identity =
        ctx.elements().all(|x| witness.f2.get(f1_inv.get(x)) == ctx.mul(ae, f_prime.get(ctx.mul(x, a_inv))));
    Ok(WitnessCheck { witness, map_involution, f1_involution, scaling_identity })
}

/// The map `(x + tr(x) + L(y), y + tr(x))` with `L` the inverse of
/// `x + x^{2^i} + tr(x)`, and its checks.
#[derive(Clone, Debug)]
pub struct ExampleCheck {
    pub witness: CczWitness,
    pub l: BinLinearMap,
    pub map_invertible: bool,
    pub f1_permutation: bool,
    /// `L(x + x^{2^i} + tr(x)) = x` for all `x`.
    pub l_inverse_identity: bool,
    /// For `i = 1`, whether `L(y) = sum_{j=0}^{n-s} y^{2^{2j+s}}` with
    /// `m = 2n+1`, `s = n mod 2`.
    pub closed_form: Option<bool>,
}

pub fn example1_witness(ctx: &Arc<FieldCtx>, i: u32) -> Result<ExampleCheck> {
    let m = ctx.m();
    if m.is_multiple_of(2) {
        return Err(Error::ParityViolated(format!("m must be odd, got m={m}")));
    }
    require_gcd(i, m)?;
    let q = 1u64 << i;
    let lin = BinLinearMap::from_fn(m, m, |x| {
        let x = x as Elem;
        (x ^ ctx.pow(x, q) ^ ctx.trace(x)) as u64
    });
    let l = lin.inverse()?;
    let map = pair_map(ctx, |x, y| {
        let t = ctx.trace(x);
        (x ^ t ^ l.apply(y as u64) as Elem, y ^ t)
    });
    let map_invertible = map.is_invertible();
    let gold = FuncTable::power(ctx, q + 1);
    let witness = graph_image(&map, &gold)?;
    let f1_permutation = witness.f1.is_permutation();
    let l_inverse_identity = ctx.elements().all(|x| l.apply(lin.apply(x as u64)) == x as u64);
    let closed_form = (i == 1).then(|| {
        let n = (m - 1) / 2;
        let s = n % 2;
        ctx.elements().all(|y| {
            let sum = (0..=n - s).fold(0, |acc, j| acc ^ ctx.frobenius(y, 2 * j + s));
            sum as u64 == l.apply(y as u64)
        })
    });
    Ok(ExampleCheck { witness, l, map_invertible, f1_permutation, l_inverse_identity, closed_form })
}
