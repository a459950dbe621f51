use proptest::prelude::*;

use hermitian_core::classify::{census_closed, delta_class, DeltaKind};
use hermitian_core::codes::{check_matrix, min_distance_by_supports, phase_params};
use hermitian_core::curve::{act_on_parabola, lambda_elements, LambdaAut};
use hermitian_core::gf::LinMap;
use hermitian_core::oracle::{brute_census, brute_count};
use hermitian_core::{classify, Elem, FieldCtx, Parabola, RunOptions};

fn elem(ctx: &FieldCtx, k: u32) -> Elem {
    // k == order encodes zero, so proptest hits it
    if k as u64 == ctx.size() - 1 {
        Elem::Zero
    } else {
        Elem::Pow(k)
    }
}

proptest! {
    #[test]
    fn norm_multiplicative_trace_additive(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25]),
                                          i in 0u32..1000, j in 0u32..1000) {
        let ctx = FieldCtx::for_q(q).unwrap();
        let n = ctx.size() as u32;
        let (x, y) = (elem(&ctx, i % n), elem(&ctx, j % n));
        prop_assert_eq!(ctx.norm(ctx.mul(x, y)), ctx.mul(ctx.norm(x), ctx.norm(y)));
        prop_assert_eq!(ctx.trace(ctx.add(x, y)), ctx.add(ctx.trace(x), ctx.trace(y)));
        prop_assert!(ctx.in_subfield(ctx.norm(x)) && ctx.in_subfield(ctx.trace(x)));
        prop_assert_eq!(ctx.frob(ctx.frob(x)), x);
    }

    #[test]
    fn linmap_solutions_negate(q in prop::sample::select(vec![3u64, 5, 7, 9]), i in 0u32..1000, j in 0u32..1000) {
        let ctx = FieldCtx::for_q(q).unwrap();
        let n = ctx.size() as u32;
        let a = Elem::Pow(i % (n - 1));
        let k = elem(&ctx, j % n);
        for map in [LinMap::TwoAxMinusFrob, LinMap::FrobMinusTwoAx] {
            let plus = ctx.linmap_solve(a, k, map).unwrap();
            let mut minus: Vec<Elem> = ctx
                .linmap_solve(a, ctx.neg(k), map)
                .unwrap()
                .into_iter()
                .map(|x| ctx.neg(x))
                .collect();
            minus.sort();
            prop_assert_eq!(&plus, &minus);
            for x in plus {
                prop_assert_eq!(ctx.linmap_apply(a, map, x), k);
            }
        }
    }

    #[test]
    fn classify_constant_on_orbits(q in prop::sample::select(vec![4u64, 5, 7, 8, 9]),
                                   ai in 0u32..10_000, bi in 0u32..10_000, ci in 0u32..10_000,
                                   si in 0usize..10_000) {
        let ctx = FieldCtx::for_q(q).unwrap();
        let n = ctx.size() as u32;
        let p = Parabola { a: Elem::Pow(ai % (n - 1)), b: elem(&ctx, bi % n), c: elem(&ctx, ci % n) };
        let lam = lambda_elements(&ctx);
        let s: LambdaAut = lam[si % lam.len()];
        let moved = act_on_parabola(&ctx, s, p);
        prop_assert_eq!(classify(&ctx, &p).unwrap().count, classify(&ctx, &moved).unwrap().count);
        prop_assert_eq!(classify(&ctx, &p).unwrap().count, brute_count(&ctx, &p).unwrap());
    }
}

#[test]
fn classifier_matches_oracle_for_every_parabola_q3() {
    let ctx = FieldCtx::for_q(3).unwrap();
    for a in ctx.nonzero() {
        for b in ctx.elements() {
            for c in ctx.elements() {
                let p = Parabola { a, b, c };
                assert_eq!(classify(&ctx, &p).unwrap().count, brute_count(&ctx, &p).unwrap(), "{p}");
            }
        }
    }
}

#[test]
fn char_sum_identity_q3_5_7() {
    for q in [3u64, 5, 7] {
        let ctx = FieldCtx::for_q(q).unwrap();
        let four = ctx.from_prime(4);
        for a in ctx.subfield().filter(|x| !x.is_zero()) {
            let eta_a = ctx.quad_char(a).unwrap() as i64;
            for b in ctx.subfield() {
                for c in ctx.subfield() {
                    let d = ctx.sub(ctx.mul(b, b), ctx.mul(four, ctx.mul(a, c)));
                    let want = if d.is_zero() { (q as i64 - 1) * eta_a } else { -eta_a };
                    assert_eq!(ctx.char_sum(a, b, c).unwrap(), want);
                }
            }
        }
    }
}

/// At Δ = 0 the invariant `2ab^q + b` vanishes exactly when `−b` lies in the
/// image of `x ↦ 2ax − x^q`, i.e. when the linear term can be removed.
#[test]
fn b_invariant_zero_iff_linear_term_removable() {
    for q in [3u64, 5, 7, 9] {
        let ctx = FieldCtx::for_q(q).unwrap();
        let two = ctx.from_prime(2);
        for a in ctx.nonzero() {
            if delta_class(&ctx, a).unwrap().kind != DeltaKind::Zero {
                continue;
            }
            assert_eq!(ctx.linmap_kernel_dim(a, LinMap::TwoAxMinusFrob).unwrap(), 1);
            for b in ctx.elements() {
                let big_b = ctx.add(ctx.mul(ctx.mul(two, a), ctx.frob(b)), b);
                let removable = !ctx
                    .linmap_solve(a, ctx.neg(b), LinMap::TwoAxMinusFrob)
                    .unwrap()
                    .is_empty();
                assert_eq!(big_b.is_zero(), removable, "q={q} a={a} b={b}");
            }
        }
    }
}

#[test]
fn census_independent_of_modulus() {
    // x^2 + 1 is irreducible over GF(3) but X is not primitive there
    let ctx = FieldCtx::with_modulus(3, 1, &[1, 0, 1]).unwrap();
    let t = brute_census(&ctx, &RunOptions::default()).unwrap();
    assert!(t.same_rows(&census_closed(3)));

    let default = FieldCtx::for_q(9).unwrap();
    let other = FieldCtx::with_modulus(3, 2, &[2, 1, 0, 0, 1]).unwrap();
    assert_ne!(default.spec(), other.spec());
    let opts = RunOptions::default();
    assert!(brute_census(&other, &opts).unwrap().same_rows(&brute_census(&default, &opts).unwrap()));
}

#[test]
fn second_phase_distances_q3() {
    let ctx = FieldCtx::for_q(3).unwrap();
    let opts = RunOptions::default();
    for (m, d) in [(8u64, 4u64), (9, 6)] {
        let spec = phase_params(3, m).unwrap();
        assert_eq!((spec.phase, spec.d), (2, d), "m={m}");
        let h = check_matrix(&ctx, m).unwrap();
        assert_eq!(min_distance_by_supports(&ctx, &h, d as usize, &opts), Some(d), "m={m}");
    }
}
