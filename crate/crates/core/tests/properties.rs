mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::Gf;
use vbf_core::ccz::{
    avoids, ccz_transform, complete_to_permutation, ea_to_ccz_map, is_transversal, linearized_adjoint,
    linearized_to_matrix, map_table, trace_adjoint_matrix, Subspace,
};
use vbf_core::constructions::{theorem1, theorem2, theorem4, theorem4_f1_inverse, theorem4_u_residual, GcdMode};
use vbf_core::report::{parse_lut, write_lut, AnalysisReport};
use vbf_core::spectra::{differential_spectrum, walsh_row, walsh_spectrum, walsh_value};
use vbf_core::vbf::{algebraic_degree, interpolate};
use vbf_core::{BinLinearMap, FieldCtx, FuncTable, UnivariatePoly};

fn field(m: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::new(m, None).unwrap())
}

fn table(m: u32, seed: Vec<u32>) -> FuncTable {
    let ctx = field(m);
    let mask = ctx.mask();
    FuncTable::from_values(&ctx, seed.into_iter().map(|v| v & mask).collect()).unwrap()
}

fn small_table() -> impl Strategy<Value = FuncTable> {
    (2u32..=5).prop_flat_map(|m| prop::collection::vec(any::<u32>(), 1 << m).prop_map(move |v| table(m, v)))
}

fn oracle_values(f: &FuncTable) -> Vec<u64> {
    f.values().iter().map(|&v| v as u64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectra_match_the_definitions(f in small_table()) {
        let ctx = f.ctx();
        let gf = Gf::new(ctx.m(), ctx.poly());
        let v = oracle_values(&f);
        prop_assert_eq!(walsh_spectrum(&f).unwrap().distribution, common::walsh_distribution(&gf, &v));
        prop_assert_eq!(differential_spectrum(&f).unwrap().distribution, common::delta_distribution(&v));
        prop_assert_eq!(algebraic_degree(&f), common::algebraic_degree(ctx.m(), &v));
        for b in 0..ctx.size() as u32 {
            let row = walsh_row(&f, b).unwrap();
            for a in ctx.elements() {
                prop_assert_eq!(row[a as usize], walsh_value(&f, a, b));
            }
        }
    }

    #[test]
    fn parseval_and_delta_totals(f in small_table()) {
        let n = f.ctx().size() as i64;
        let w = walsh_spectrum(&f).unwrap();
        // for each b != 0, sum_a lambda(a,b)^2 = 2^{2m}
        let total: i64 = w.distribution.iter().map(|(k, c)| k * k * *c as i64).sum();
        prop_assert_eq!(total, (n - 1) * n * n);
        let d = differential_spectrum(&f).unwrap();
        prop_assert_eq!(d.distribution.values().sum::<u64>(), ((n - 1) * n) as u64);
        prop_assert!(d.distribution.keys().all(|k| k % 2 == 0));
    }

    #[test]
    fn interpolation_round_trip(f in small_table()) {
        let p = interpolate(&f).unwrap();
        prop_assert_eq!(p.evaluate(), f.clone());
        let univariate = p.terms().keys().map(|e| e.count_ones()).max().unwrap_or(0);
        prop_assert_eq!(univariate, algebraic_degree(&f));
    }

    #[test]
    fn ccz_images_keep_spectra(seed in any::<u64>(), m in 3u32..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = field(m);
        let f = FuncTable::power(&ctx, 3);
        let r1 = BinLinearMap::random_invertible(m, &mut rng);
        let r2 = BinLinearMap::random_invertible(m, &mut rng);
        let r = BinLinearMap::random(m, m, &mut rng);
        let inverse = m % 2 == 1 && seed % 2 == 0;
        let l = ea_to_ccz_map(&r1, &r2, &r, inverse).unwrap();
        let g = ccz_transform(&l, &f).unwrap();
        prop_assert_eq!(walsh_spectrum(&g).unwrap(), walsh_spectrum(&f).unwrap());
        prop_assert_eq!(differential_spectrum(&g).unwrap(), differential_spectrum(&f).unwrap());
        let direct = map_table(&ctx, &r1)
            .compose(&(if inverse { f.invert().unwrap() } else { f.clone() }).compose(&map_table(&ctx, &r2)).unwrap())
            .unwrap()
            .add(&map_table(&ctx, &r))
            .unwrap();
        prop_assert_eq!(g, direct);
    }

    #[test]
    fn transversality_decides_admissibility(seed in any::<u64>(), f in small_table()) {
        let m = f.m();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = BinLinearMap::random_invertible(2 * m, &mut rng);
        let v = Subspace::vertical(m).image(&l.inverse().unwrap());
        let transversal = is_transversal(&f, &v).unwrap();
        prop_assert_eq!(transversal, avoids(&f, &v).unwrap());
        prop_assert_eq!(transversal, ccz_transform(&l, &f).is_ok());
    }

    #[test]
    fn completion_gives_admissible_maps(seed in any::<u64>(), m in 3u32..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = field(m);
        let f = FuncTable::power(&ctx, if m % 2 == 1 { 3 } else { 7 });
        // L1 = (A, B) with B invertible and A = 0 always works for permutations
        let b = BinLinearMap::random_invertible(m, &mut rng);
        let l1 = BinLinearMap::from_fn(2 * m, m, |v| b.apply(v >> m));
        let l = complete_to_permutation(&l1, &f).unwrap();
        prop_assert!(l.is_invertible());
        let g = ccz_transform(&l, &f).unwrap();
        prop_assert_eq!(differential_spectrum(&g).unwrap(), differential_spectrum(&f).unwrap());
    }

    #[test]
    fn adjoint_is_trace_adjoint(coeffs in prop::collection::vec(any::<u32>(), 6), m in 3u32..=6) {
        let ctx = field(m);
        let terms = coeffs.iter().take(m as usize).enumerate().map(|(k, &c)| (1u64 << k, c & ctx.mask()));
        let p = UnivariatePoly::from_terms(&ctx, terms);
        let adj = linearized_adjoint(&p).unwrap();
        prop_assert_eq!(
            trace_adjoint_matrix(&ctx, &linearized_to_matrix(&p).unwrap()).unwrap(),
            linearized_to_matrix(&adj).unwrap()
        );
        prop_assert_eq!(linearized_adjoint(&adj).unwrap(), p);
    }

    #[test]
    fn lut_round_trip(f in small_table()) {
        let text = write_lut(&f);
        prop_assert_eq!(parse_lut(&text).unwrap(), f.clone());
        let r = AnalysisReport::analyze(&f).unwrap();
        prop_assert_eq!(AnalysisReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn construction_traces_follow_gold(x in any::<u32>(), i in 1u32..7) {
        for m in [5u32, 7] {
            if let Ok(f) = theorem1(&field(m), i, GcdMode::Strict) {
                let ctx = f.ctx();
                let x = x & ctx.mask();
                prop_assert_eq!(ctx.trace(f.get(x)), ctx.trace(ctx.pow(x, (1 << i) + 1)));
            }
        }
        for m in [4u32, 6] {
            if let Ok(f) = theorem2(&field(m), i, GcdMode::Strict) {
                let ctx = f.ctx();
                let x = x & ctx.mask();
                prop_assert_eq!(ctx.trace(f.get(x)), ctx.trace(ctx.pow(x, (1 << i) + 1)));
            }
        }
    }

    #[test]
    fn theorem4_inverse_pointwise(y in any::<u32>(), (m, n) in prop::sample::select(vec![(9u32, 3u32), (15, 5), (15, 3)])) {
        let ctx = field(m);
        let y = y & ctx.mask();
        let x = theorem4_f1_inverse(&ctx, n, 1, y).unwrap();
        let forward = x ^ ctx.rel_trace(x, n).unwrap() ^ ctx.rel_trace(ctx.pow(x, 3), n).unwrap();
        prop_assert_eq!(forward, y);
        prop_assert_eq!(theorem4_u_residual(&ctx, n, 1, y).unwrap(), 0);
    }
}

#[test]
fn theorem4_at_fifteen() {
    let ctx = field(15);
    let f = theorem4(&ctx, 5, 1).unwrap();
    assert_eq!(algebraic_degree(&f), 7);
    assert!(vbf_core::spectra::is_ab(&f).unwrap());
}
