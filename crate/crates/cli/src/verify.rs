//! `vbf verify <claim>`: runs the checks behind each claim and prints one
//! line per check.

use std::sync::Arc;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vbf_core::ccz::{
    ccz_transform, ea_power_test, ea_to_ccz_map, gold_perm_criterion, gold_perm_criterion_even_detailed,
    linear_completion_search_within, EaVerdict, SearchBudget,
};
use vbf_core::constructions::{
    example1_witness, f8_side_condition, iterate, theorem1, theorem12_ccz_witness, theorem2, theorem3,
    theorem3_expanded, theorem3_f1, theorem3_formula, theorem4, theorem4_composed, theorem4_f1, theorem4_f1_inverse,
    theorem4_u_residual, GcdMode,
};
use vbf_core::gf2m::gcd_u64;
use vbf_core::spectra::{differential_spectrum, is_ab, is_apn, is_three_valued, walsh_spectrum};
use vbf_core::vbf::{algebraic_degree, component_degree};
use vbf_core::{BinLinearMap, Elem, FieldCtx, FuncTable, UnivariatePoly};

use crate::{parse_budget, CmdResult, Failure, Params, EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Remark4,
    Example1,
    PropGoldPerm,
    PropGoldPermEven,
    F8Check,
    CczInvariance,
}

#[derive(Args)]
pub struct VerifyArgs {
    claim: Claim,
    #[command(flatten)]
    params: Params,
    /// Nonzero field element (hex) for the witness maps.
    #[arg(long, value_parser = crate::parse_poly)]
    a: Option<u64>,
    /// Search limit: `<n>s` for seconds or a candidate count.
    #[arg(long, value_parser = parse_budget)]
    budget: Option<SearchBudget>,
    /// Random samples for the sampled checks.
    #[arg(long, default_value_t = 200)]
    samples: u64,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Default)]
struct Checks {
    failed: usize,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: impl AsRef<str>) {
        let detail = detail.as_ref();
        let sep = if detail.is_empty() { "" } else { ": " };
        println!("{} {name}{sep}{detail}", if ok { "ok  " } else { "FAIL" });
        self.failed += !ok as usize;
    }

    fn code(&self) -> u8 {
        if self.failed == 0 {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

fn gold(ctx: &Arc<FieldCtx>, i: u32) -> FuncTable {
    FuncTable::power(ctx, (1u64 << i) + 1)
}

fn same_spectra(f: &FuncTable, g: &FuncTable) -> Result<bool, Failure> {
    Ok(walsh_spectrum(f)? == walsh_spectrum(g)? && differential_spectrum(f)? == differential_spectrum(g)?)
}

fn ea_check(c: &mut Checks, f: &FuncTable) {
    match ea_power_test(f) {
        EaVerdict::ProvenInequivalent { c: w } => c.check(
            "EA-inequivalent to power functions",
            true,
            format!("tr({w:#x} F) has degree outside {{0, 1, deg F}}"),
        ),
        EaVerdict::Inconclusive => c.check("EA-inequivalent to power functions", false, "test inconclusive"),
    }
}

fn gold_trace(c: &mut Checks, f: &FuncTable, i: u32) {
    let ctx = f.ctx();
    let e = (1u64 << i) + 1;
    let ok = ctx.elements().all(|x| ctx.trace(f.get(x)) == ctx.trace(ctx.pow(x, e)));
    c.check("tr(F'(x)) = tr(x^(2^i+1))", ok, "");
}

fn element(ctx: &FieldCtx, a: Option<u64>) -> Result<Elem, Failure> {
    let a = a.unwrap_or(1);
    if a == 0 || a > ctx.mask() as u64 {
        return Err(Failure(EXIT_USAGE, format!("--a {a:#x} is not a nonzero element of GF(2^{})", ctx.m())));
    }
    Ok(a as Elem)
}

fn theorem12(args: &VerifyArgs, which: u32) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let i = p.need_i()?;
    let m = ctx.m();
    let f = if which == 1 { theorem1(&ctx, i, p.gcd_mode())? } else { theorem2(&ctx, i, p.gcd_mode())? };
    let g = gold(&ctx, i);
    let s = gcd_u64(i as u64, m as u64) as u32;
    let mut c = Checks::default();
    if s == 1 {
        if which == 1 {
            c.check("AB", is_ab(&f)?, "");
        } else {
            c.check("APN", is_apn(&f)?, "");
        }
    } else {
        if m % 2 == 1 {
            c.check(&format!("Walsh support {{0, +-2^{}}}", (m + s) / 2), is_three_valued(&f, s)?, "");
        }
        c.check("same spectra as the Gold function", same_spectra(&f, &g)?, "");
    }
    let deg = algebraic_degree(&f);
    c.check("algebraic degree 3", deg == 3, format!("degree {deg}"));
    let cd = component_degree(&f, 1);
    c.check("tr(F') has degree 2", cd == 2, format!("degree {cd}"));
    gold_trace(&mut c, &f, i);
    ea_check(&mut c, &f);
    let a = element(&ctx, args.a)?;
    let w = theorem12_ccz_witness(&ctx, which, i, a)?;
    c.check("witness map is an involution", w.map_involution, format!("a={a:#x}"));
    c.check("F1 is an involution", w.f1_involution, "");
    c.check("F2 . F1^-1 (x) = a^(2^i+1) F'(x/a)", w.scaling_identity, "");
    if a == 1 {
        c.check("CCZ image of the Gold graph is the graph of F'", ccz_transform(&w.witness.map, &g)? == f, "");
    }
    Ok(c.code())
}

fn thm3(args: &VerifyArgs) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let i = p.need_i()?;
    let f = theorem3(&ctx, i)?;
    let f1 = theorem3_f1(&ctx, i)?;
    let mut c = Checks::default();
    c.check("F1 is a permutation", f1.is_permutation(), "");
    c.check("F1^6 = id", iterate(&f1, 6) == FuncTable::identity(&ctx), "");
    c.check("F1^5 = F1^-1", iterate(&f1, 5) == f1.invert()?, "");
    let (holds, pairs) = f8_side_condition(i);
    c.check("GF(8) side condition", holds, format!("{pairs} pairs"));
    c.check("closed formula = x^(2^i+1) . F1^-1", theorem3_formula(&ctx, i)? == f, "");
    c.check("expanded formula = x^(2^i+1) . F1^-1", theorem3_expanded(&ctx, i)? == f, "");
    c.check("APN", is_apn(&f)?, "");
    let deg = algebraic_degree(&f);
    c.check("algebraic degree 4", deg == 4, format!("degree {deg}"));
    Ok(c.code())
}

fn thm4(args: &VerifyArgs) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let i = p.need_i()?;
    let n = p.n.ok_or_else(|| Failure(EXIT_USAGE, "--n is required".into()))?;
    let f = theorem4(&ctx, n, i)?;
    let f1 = theorem4_f1(&ctx, n, i)?;
    let mut c = Checks::default();
    let mut bad_inverse = 0;
    let mut bad_residual = 0;
    for y in ctx.elements() {
        bad_inverse += (f1.get(theorem4_f1_inverse(&ctx, n, i, y)?) != y) as usize;
        bad_residual += (theorem4_u_residual(&ctx, n, i, y)? != 0) as usize;
    }
    c.check("closed-form F1^-1 inverts F1", bad_inverse == 0, format!("{bad_inverse} bad points of {}", ctx.size()));
    c.check("u solves its defining equation", bad_residual == 0, format!("{bad_residual} bad points"));
    let composed = theorem4_composed(&ctx, n, i)?;
    let offset_ok = ctx.elements().all(|x| f.get(x) ^ ctx.rel_trace(x, n).unwrap_or(0) == composed.get(x));
    c.check("F' + tr_{m/n}(x) = F2 . F1^-1", offset_ok, "");
    c.check("AB", is_ab(&f)?, "");
    let deg = algebraic_degree(&f);
    c.check(&format!("algebraic degree n+2 = {}", n + 2), deg == n + 2, format!("degree {deg}"));
    ea_check(&mut c, &f);
    if n == 1 {
        c.check("equals the n = 1 case of thm1", f == theorem1(&ctx, i, GcdMode::Strict)?, "");
    }
    Ok(c.code())
}

fn remark4(args: &VerifyArgs) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let i = p.need_i()?;
    let f = theorem1(&ctx, i, p.gcd_mode())?;
    let budget = args.budget.unwrap_or_default();
    let r = linear_completion_search_within(&f, budget)?;
    match &r.witness {
        Some(l) => {
            println!(
                "FAIL no linear L makes F'+L a permutation: L rows {:x?} after {} candidates",
                l.rows(),
                r.candidates
            );
            Ok(EXIT_FAILED)
        }
        None if r.conclusive => {
            println!("ok   no linear L makes F'+L a permutation: {} candidates", r.candidates);
            Ok(EXIT_OK)
        }
        None => {
            let why = if r.timed_out { "time" } else { "candidate" };
            println!("budget exceeded: {why} budget ran out after {} candidates without a witness", r.candidates);
            Ok(EXIT_BUDGET)
        }
    }
}

fn example1(args: &VerifyArgs) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let i = p.need_i()?;
    let e = example1_witness(&ctx, i)?;
    let mut c = Checks::default();
    c.check("witness map is invertible", e.map_invertible, "");
    c.check("F1 is a permutation", e.f1_permutation, "");
    c.check("L(x + x^(2^i) + tr(x)) = x", e.l_inverse_identity, "");
    if let Some(ok) = e.closed_form {
        c.check("L(y) = sum y^(2^(2j+s))", ok, "");
    }
    let g = gold(&ctx, i);
    let image = ccz_transform(&e.witness.map, &g)?;
    c.check("CCZ image has the Gold spectra", same_spectra(&image, &g)?, "");
    Ok(c.code())
}

fn random_linearized(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> UnivariatePoly {
    let terms: Vec<_> = (0..ctx.m()).map(|k| (1u64 << k, rng.gen::<u32>() & ctx.mask())).collect();
    UnivariatePoly::from_terms(ctx, terms)
}

fn brute_perm(ctx: &FieldCtx, lp: &UnivariatePoly, lq: &UnivariatePoly, i: u32) -> bool {
    let e = (1u64 << i) + 1;
    FuncTable::from_fn(lp.ctx(), |x| lp.eval(ctx.pow(x, e)) ^ lq.eval(x)).is_permutation()
}

/// All monomials `c x^{2^k}` plus `samples` random linearized polynomials.
fn linearized_cases(ctx: &Arc<FieldCtx>, samples: u64, rng: &mut ChaCha8Rng) -> Vec<UnivariatePoly> {
    let mut cases = vec![UnivariatePoly::new(ctx)];
    for k in 0..ctx.m() {
        for c in 1..=ctx.mask() {
            cases.push(UnivariatePoly::monomial(ctx, 1 << k, c));
        }
    }
    cases.extend((0..samples).map(|_| random_linearized(ctx, rng)));
    cases
}

fn prop_gold_perm(args: &VerifyArgs, even: bool) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let i = p.need_i()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let id = UnivariatePoly::monomial(&ctx, 1, 1);
    let mut c = Checks::default();
    let mut mismatches = 0;
    let mut inconsistent = 0;
    let mut perms = 0;
    let cases = linearized_cases(&ctx, args.samples, &mut rng);
    for lp in &cases {
        let lq = if even || rng.gen_bool(0.5) { id.clone() } else { random_linearized(&ctx, &mut rng) };
        let brute = brute_perm(&ctx, lp, &lq, i);
        let verdict = if even {
            let r = gold_perm_criterion_even_detailed(lp, i)?;
            inconsistent += !r.root_choice_consistent as usize;
            r.permutation
        } else {
            gold_perm_criterion(lp, &lq, i)?
        };
        perms += brute as usize;
        mismatches += (verdict != brute) as usize;
    }
    let name = if even { "even-m criterion agrees with brute force" } else { "criterion agrees with brute force" };
    c.check(name, mismatches == 0, format!("{} cases, {perms} permutations, {mismatches} mismatches", cases.len()));
    if even {
        c.check("verdict independent of the choice of root", inconsistent == 0, format!("{inconsistent} cases differ"));
    }
    Ok(c.code())
}

fn f8_check(args: &VerifyArgs) -> CmdResult {
    let i = args.params.i.unwrap_or(1);
    let (holds, pairs) = f8_side_condition(i);
    let mut c = Checks::default();
    c.check("(u^(2^i+1) w)^2 + (u^(2^i+1) w)^4 != u on GF(8)", holds, format!("i={i}, {pairs} pairs"));
    c.check("pair count", pairs == 21, "");
    Ok(c.code())
}

fn ccz_invariance(args: &VerifyArgs) -> CmdResult {
    let p = &args.params;
    let ctx = p.field()?;
    let m = ctx.m();
    let i = p.i.unwrap_or(1);
    let f = gold(&ctx, i);
    let (w0, d0) = (walsh_spectrum(&f)?, differential_spectrum(&f)?);
    let same =
        |g: &FuncTable| -> Result<bool, Failure> { Ok(walsh_spectrum(g)? == w0 && differential_spectrum(g)? == d0) };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut c = Checks::default();
    let (mut admissible, mut bad) = (0, 0);
    for _ in 0..args.samples {
        let l = BinLinearMap::random_invertible(2 * m, &mut rng);
        if let Ok(g) = ccz_transform(&l, &f) {
            admissible += 1;
            bad += !same(&g)? as usize;
        }
    }
    c.check(
        "uniform random maps",
        bad == 0,
        format!("{admissible}/{} admissible, {bad} changed spectra", args.samples),
    );
    let mut bad = 0;
    for _ in 0..args.samples {
        let r1 = BinLinearMap::random_invertible(m, &mut rng);
        let r2 = BinLinearMap::random_invertible(m, &mut rng);
        let r = BinLinearMap::random(m, m, &mut rng);
        let g = ccz_transform(&ea_to_ccz_map(&r1, &r2, &r, false)?, &f)?;
        bad += !same(&g)? as usize;
    }
    c.check("EA-derived maps", bad == 0, format!("{} maps, {bad} changed spectra", args.samples));
    let which = if m % 2 == 1 { 1 } else { 2 };
    let mut bad = 0;
    for _ in 0..args.samples {
        let a = rng.gen_range(1..=ctx.mask());
        let w = theorem12_ccz_witness(&ctx, which, i, a)?;
        let g = ccz_transform(&w.witness.map, &f)?;
        bad += !same(&g)? as usize;
    }
    c.check("witness maps", bad == 0, format!("{} maps, {bad} changed spectra", args.samples));
    Ok(c.code())
}

pub fn run(args: &VerifyArgs) -> CmdResult {
    match args.claim {
        Claim::Thm1 => theorem12(args, 1),
        Claim::Thm2 => theorem12(args, 2),
        Claim::Thm3 => thm3(args),
        Claim::Thm4 => thm4(args),
        Claim::Remark4 => remark4(args),
        Claim::Example1 => example1(args),
        Claim::PropGoldPerm => prop_gold_perm(args, false),
        Claim::PropGoldPermEven => prop_gold_perm(args, true),
        Claim::F8Check => f8_check(args),
        Claim::CczInvariance => ccz_invariance(args),
    }
}
