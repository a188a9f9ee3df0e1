//! Law suites: ring axioms, star-product structure, morphisms and
//! transform round trips on randomized inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starcalc_core::laplace::{inverse_laplace, laplace, laplace_window};
use starcalc_core::lower::lower_w;
use starcalc_core::param::ParamScalar;
use starcalc_core::poly::{pairing, XuPoly};
use starcalc_core::render::{render_sw, render_tw, render_w};
use starcalc_core::sample;
use starcalc_core::swsym::{iota, res_s, SwSymbol};
use starcalc_core::twsym::{iota_t, PrecisionWindow, TwSymbol};
use starcalc_core::wsym::WSymbol;
use starcalc_core::{Rat, VarContext};

type P = XuPoly<ParamScalar>;
type W = WSymbol<ParamScalar>;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn arb_poly(n: usize) -> impl Strategy<Value = P> {
    any::<u64>().prop_map(move |seed| sample::xupoly(&mut rng_for(seed), n, 2, 3, 1))
}

fn arb_wsymbol(n: usize) -> impl Strategy<Value = W> {
    any::<u64>().prop_map(move |seed| sample::wsymbol(&mut rng_for(seed), n, -2, 1, 2, 2, 1))
}

fn arb_swsymbol(n: usize) -> impl Strategy<Value = SwSymbol<ParamScalar>> {
    any::<u64>().prop_map(move |seed| sample::swsymbol(&mut rng_for(seed), n, 4, -2, 1, 2, 2, 1))
}

fn arb_twsymbol(n: usize) -> impl Strategy<Value = TwSymbol<ParamScalar>> {
    (any::<u64>(), -1i64..=1).prop_map(move |(seed, m)| {
        sample::twsymbol(&mut rng_for(seed), n, 3, m, m - 2, 2, 2, 1)
    })
}

fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    any::<u64>().prop_map(move |seed| sample::invertible_matrix(&mut rng_for(seed), n, 3))
}

mod poly_ring {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associative(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn commutative(a in arb_poly(2), b in arb_poly(2)) {
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn distributive(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn derivatives_commute(a in arb_poly(2)) {
            // d_x^beta d_u^alpha = d_u^alpha d_x^beta
            let alpha = [1, 0];
            let beta = [0, 1];
            let zero = [0, 0];
            let ab = a.derive(&alpha, &zero).derive(&zero, &beta);
            let ba = a.derive(&zero, &beta).derive(&alpha, &zero);
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(a.derive(&alpha, &beta), a.derive(&alpha, &zero).derive(&zero, &beta));
        }

        #[test]
        fn substitution_is_multiplicative(a in arb_poly(2), b in arb_poly(2), m in arb_matrix(2)) {
            let lhs = (&a * &b).affine_substitute(&m).unwrap();
            let rhs = &a.affine_substitute(&m).unwrap() * &b.affine_substitute(&m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pairing_is_affine_invariant(a in arb_poly(2), b in arb_poly(2), m in arb_matrix(2)) {
            // sum_i d_u_i(subst a) d_x_i(subst b) = subst(sum_i d_u_i(a) d_x_i(b))
            let lhs = pairing(&a.affine_substitute(&m).unwrap(), &b.affine_substitute(&m).unwrap());
            let rhs = pairing(&a, &b).affine_substitute(&m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

mod w_algebra {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn star_associative(a in arb_wsymbol(2), b in arb_wsymbol(2), c in arb_wsymbol(2)) {
            prop_assert_eq!(a.star(&b).star(&c), a.star(&b.star(&c)));
        }

        #[test]
        fn filtration_subadditive(a in arb_wsymbol(2), b in arb_wsymbol(2)) {
            let prod = a.star(&b);
            if let (Some(ma), Some(mb), Some(mp)) = (a.order(), b.order(), prod.order()) {
                prop_assert!(mp <= ma + mb);
            }
        }

        #[test]
        fn principal_symbol_multiplicative(a in arb_wsymbol(2), b in arb_wsymbol(2)) {
            // whenever the product of principal symbols is nonzero
            if let (Some((ma, pa)), Some((mb, pb))) = (a.principal_symbol(), b.principal_symbol()) {
                let lead = &pa * &pb;
                if !lead.is_zero() {
                    prop_assert_eq!(a.star(&b).principal_symbol(), Some((ma + mb, lead)));
                }
            }
        }

        #[test]
        fn canonical_commutation(i in 0usize..2, j in 0usize..2) {
            let u = W::from_poly(P::u_var(2, i));
            let x = W::from_poly(P::x_var(2, j));
            let expected = if i == j { W::hbar_power(2, 1) } else { W::zero(2) };
            prop_assert_eq!(u.commutator(&x), expected);
        }

        #[test]
        fn affine_covariance(a in arb_wsymbol(2), b in arb_wsymbol(2), m in arb_matrix(2)) {
            let lhs = a.affine_substitute(&m).unwrap().star(&b.affine_substitute(&m).unwrap());
            let rhs = a.star(&b).affine_substitute(&m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn scalars_are_central(a in arb_wsymbol(2), seed in any::<u64>()) {
            let c = sample::param_scalar(&mut rng_for(seed), 1, 3);
            let s = W::constant(2, c);
            prop_assert_eq!(s.star(&a), a.star(&s));
        }

        #[test]
        fn unit_laws(a in arb_wsymbol(2)) {
            let one = W::one(2);
            prop_assert_eq!(one.star(&a), a.clone());
            prop_assert_eq!(a.star(&one), a);
        }
    }
}

mod s_algebra {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn convolution_commutative(seed1 in any::<u64>(), seed2 in any::<u64>()) {
            let a = sample::slaurent(&mut rng_for(seed1), 1, 4, 2, 2, 1);
            let b = sample::slaurent(&mut rng_for(seed2), 1, 4, 2, 2, 1);
            prop_assert_eq!(a.convolve(&b), b.convolve(&a));
        }

        #[test]
        fn convolution_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let a = sample::slaurent(&mut rng_for(s1), 1, 4, 1, 2, 0);
            let b = sample::slaurent(&mut rng_for(s2), 1, 4, 1, 2, 0);
            let c = sample::slaurent(&mut rng_for(s3), 1, 4, 1, 2, 0);
            prop_assert_eq!(a.convolve(&b).convolve(&c), a.convolve(&b.convolve(&c)));
        }

        #[test]
        fn sw_star_associative(a in arb_swsymbol(1), b in arb_swsymbol(1), c in arb_swsymbol(1)) {
            prop_assert_eq!(a.star(&b).star(&c), a.star(&b.star(&c)));
        }

        #[test]
        fn sw_unit(a in arb_swsymbol(1)) {
            let one = SwSymbol::unit(1, 4);
            prop_assert_eq!(one.star(&a), a.clone());
            prop_assert_eq!(a.star(&one), a);
        }

        #[test]
        fn sw_filtration(a in arb_swsymbol(1), b in arb_swsymbol(1)) {
            if let (Some(ma), Some(mb), Some(mp)) = (a.order(), b.order(), a.star(&b).order()) {
                prop_assert!(mp <= ma + mb);
            }
        }

        #[test]
        fn iota_morphism_and_section(a in arb_wsymbol(1), b in arb_wsymbol(1)) {
            let ia = iota(&a, 4);
            let ib = iota(&b, 4);
            // algebra morphism
            prop_assert_eq!(ia.star(&ib), iota(&a.star(&b), 4));
            // injective: recovered by the residue, which is also a morphism
            prop_assert_eq!(res_s(&ia), a.clone());
            prop_assert_eq!(res_s(&ia.star(&ib)), res_s(&ia).star(&res_s(&ib)));
        }
    }
}

mod laplace_bridge {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn morphism_inside_windows(a in arb_swsymbol(1), b in arb_swsymbol(1)) {
            let d = 4;
            let la = laplace(&a, d);
            let lb = laplace(&b, d);
            let lhs = laplace(&a.star(&b), d);
            let rhs = la.star(&lb);
            let window = laplace_window(&a.star(&b), d)
                .intersect(&PrecisionWindow::product(&la, &laplace_window(&a, d), &lb, &laplace_window(&b, d)));
            prop_assert!(lhs.eq_within(&rhs, &window));
        }

        #[test]
        fn round_trip(a in arb_swsymbol(1)) {
            // inverse after forward: depth matches the input depth
            let tw = laplace(&a, a.s_trunc());
            prop_assert!(tw.satisfies_filtration(), "transforms land inside the filtration");
            let back = inverse_laplace(&tw).unwrap();
            prop_assert_eq!(back, a.clone());
            // forward after inverse on a valid t-side symbol
            let again = laplace(&inverse_laplace(&tw).unwrap(), a.s_trunc());
            prop_assert_eq!(again, tw);
        }

        #[test]
        fn tw_star_associative(a in arb_twsymbol(1), b in arb_twsymbol(1), c in arb_twsymbol(1)) {
            prop_assert_eq!(a.star(&b).star(&c), a.star(&b.star(&c)));
        }

        #[test]
        fn tw_filtration_closure(a in arb_twsymbol(1), b in arb_twsymbol(1)) {
            prop_assert!(a.satisfies_filtration());
            prop_assert!(b.satisfies_filtration());
            let prod = a.star(&b);
            prop_assert_eq!(prod.order(), a.order() + b.order());
            prop_assert!(prod.satisfies_filtration());
        }

        #[test]
        fn hbar_shift_preserves_invariant(a in arb_twsymbol(1), k in -2i64..=2) {
            let shifted = a.mul_hbar_pow(k);
            prop_assert_eq!(shifted.order(), a.order() - k);
            prop_assert!(shifted.satisfies_filtration());
            prop_assert_eq!(shifted.mul_hbar_pow(-k), a);
        }

        #[test]
        fn iota_res_identity(a in arb_wsymbol(1)) {
            let f = iota_t(&a, 3);
            prop_assert_eq!(f.res_t(), a.clone());
            prop_assert!(f.satisfies_filtration());
            // the t-side embedding is the Laplace image of the s-side one
            prop_assert_eq!(f, laplace(&iota(&a, 3), 3));
        }

        #[test]
        fn iota_t_morphism(a in arb_wsymbol(1), b in arb_wsymbol(1)) {
            let lhs = iota_t(&a, 3).star(&iota_t(&b, 3));
            let rhs = iota_t(&a.star(&b), 3);
            // data agrees; declared orders may differ (tight vs additive),
            // so compare levels through the residue of the difference
            prop_assert!(lhs.eq_within(&rhs, &PrecisionWindow::full(i64::MIN / 2, 3)));
        }

        #[test]
        fn res_t_morphism(a in arb_twsymbol(1), b in arb_twsymbol(1)) {
            prop_assert_eq!(a.star(&b).res_t(), a.res_t().star(&b.res_t()));
        }
    }

    // The window contract validated against deeper recomputation: lower
    // both floors by five levels, extend the data arbitrarily there, and
    // the products must agree wherever the shallow window claims exactness.
    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn product_window_oracle(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let d = 3;
            let deep_a = sample::twsymbol(&mut rng_for(s1), 1, d, 0, -7, 2, 2, 1);
            let deep_b = sample::twsymbol(&mut rng_for(s2), 1, d, 0, -7, 2, 2, 1);
            let _ = s3;
            // shallow views: drop levels below -2
            let shallow = |sym: &TwSymbol<ParamScalar>| {
                TwSymbol::from_levels(
                    1,
                    d,
                    sym.order(),
                    sym.levels().filter(|(j, _)| *j >= -2).map(|(j, tp)| (j, tp.clone())),
                )
                .with_floor(-2)
            };
            let sa = shallow(&deep_a);
            let sb = shallow(&deep_b);
            let shallow_prod = sa.star(&sb);
            let deep_prod = deep_a.star(&deep_b);
            let window = PrecisionWindow::product(
                &sa,
                &PrecisionWindow::of_symbol(&sa),
                &sb,
                &PrecisionWindow::of_symbol(&sb),
            );
            prop_assert!(shallow_prod.eq_within(&deep_prod, &window));
        }
    }
}

mod front_end {
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn parser_never_panics(src in "[ -~]{0,48}") {
            let ctx = VarContext::new(2, ["theta"]);
            let _ = starcalc_core::parse::parse_expr(&src, &ctx);
        }

        #[test]
        fn printer_round_trip_w(seed in any::<u64>()) {
            let ctx = VarContext::new(2, ["theta"]);
            let sym = sample::wsymbol(&mut rng_for(seed), 2, -2, 2, 2, 3, 1);
            let printed = render_w(&sym, &ctx);
            prop_assert_eq!(lower_w(&printed, &ctx).unwrap(), sym);
        }

        #[test]
        fn printer_round_trip_sw(seed in any::<u64>()) {
            let ctx = VarContext::new(2, ["theta"]);
            let sym = sample::swsymbol(&mut rng_for(seed), 2, 3, -2, 1, 2, 2, 1);
            let printed = render_sw(&sym, &ctx);
            prop_assert_eq!(starcalc_core::lower::lower_sw(&printed, &ctx, 3).unwrap(), sym);
        }

        #[test]
        fn printer_round_trip_tw(seed in any::<u64>()) {
            let ctx = VarContext::new(2, ["theta"]);
            let sym = sample::twsymbol(&mut rng_for(seed), 2, 3, 0, -2, 2, 2, 1);
            let printed = render_tw(&sym, &ctx);
            let reparsed = starcalc_core::lower::lower_tw(&printed, &ctx, 3).unwrap();
            // lowering re-declares the tightest order; compare against the
            // same normalization
            prop_assert!(reparsed.eq_within(&sym, &PrecisionWindow::full(i64::MIN / 2, 3)));
            prop_assert!(reparsed.order() <= sym.order());
        }
    }
}

mod gevrey_laws {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Pow};
    use starcalc_core::gevrey::{coeff_norm, fit_gevrey_tail};
    use starcalc_core::scalar::factorial;
    use std::collections::BTreeMap;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn norm_subadditive_submultiplicative(s1 in any::<u64>(), s2 in any::<u64>()) {
            let theta = Rat::new(BigInt::from(2), BigInt::from(3));
            let assign = [theta];
            let a = sample::xupoly(&mut rng_for(s1), 2, 2, 3, 1);
            let b = sample::xupoly(&mut rng_for(s2), 2, 2, 3, 1);
            let na = coeff_norm(&a, &assign).unwrap();
            let nb = coeff_norm(&b, &assign).unwrap();
            prop_assert!(coeff_norm(&(&a + &b), &assign).unwrap() <= na.clone() + nb.clone());
            prop_assert!(coeff_norm(&(&a * &b), &assign).unwrap() <= na * nb);
        }

        #[test]
        fn star_closure_on_gevrey_tails(s1 in any::<u64>(), s2 in any::<u64>(), depth in 2usize..=6) {
            // structured tails a_j = eps0^{-j} (-j)! x1^{e_j}: the fitted
            // eps of the product stays within a factor of 3 of eps0
            let eps0 = Rat::new(BigInt::from(1), BigInt::from(2));
            let mut rng1 = rng_for(s1);
            let mut rng2 = rng_for(s2);
            let mk = |rng: &mut ChaCha8Rng| {
                let levels: Vec<(i64, P)> = (0..=depth as i64)
                    .map(|k| {
                        let coeff = ParamScalar::from_rat(
                            eps0.clone().pow(k as i32) * Rat::from_integer(factorial(k as usize)),
                        );
                        let e = rand::Rng::gen_range(rng, 0..=2u32);
                        (-k, P::monomial(1, vec![e], vec![0], coeff))
                    })
                    .collect();
                W::from_levels(1, levels)
            };
            let a = mk(&mut rng1);
            let b = mk(&mut rng2);
            let prod = a.star(&b);
            let tail: BTreeMap<i64, P> = prod.levels().filter(|(j, _)| *j < 0).map(|(j, p)| (j, p.clone())).collect();
            let threshold = Rat::new(BigInt::from(3), BigInt::one()) * eps0.clone();
            let report = fit_gevrey_tail(&tail, &[], &threshold).unwrap();
            prop_assert!(report.verdict);
        }
    }
}
