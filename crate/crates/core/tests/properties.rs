use proptest::prelude::*;

use psi11_core::algebra::{GaussianRational, LaurentPoly, Monomial, QLaurentSeries, QTerm, Ring, SymbolTable};
use psi11_core::corpus::psi11::{psi11_lhs_num, psi11_rhs_num};
use psi11_core::ncalg::{ordered_prod, Mat};
use psi11_core::number_theory::{r2_divisor, r4_divisor, rs_bruteforce, rs_bruteforce_table};
use psi11_core::numeric::NumericContext;
use psi11_core::roots::{build_root_system, Family, WeylGroupData};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -2i64..=2, -2i64..=2, -2i64..=2), 1..5).prop_map(|ts| {
        let mut p = LaurentPoly::zero();
        for (c, e0, e1, e2) in ts {
            let m = Monomial::var(0, e0) * Monomial::var(1, e1) * Monomial::var(2, e2);
            p.add_term(m, &GaussianRational::from_int(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_division_recovers_factor(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.div_exact(&b).unwrap(), a);
    }

    #[test]
    fn series_product_commutes(a in poly(), b in poly(), k in 0i64..4) {
        let ring = Ring::new(SymbolTable::new(&["x", "y", "z"]).unwrap(), 10);
        let sa = QLaurentSeries::from_poly(&ring, a, 10).mul_one_minus(&QTerm::q_power(1 + k)).unwrap();
        let sb = QLaurentSeries::from_poly(&ring, b, 10).div_one_minus(&QTerm::symbol(0, 1)).unwrap();
        let ab = sa.mul(&sb).unwrap();
        let ba = sb.mul(&sa).unwrap();
        prop_assert!(ab.agree_to_order(&ba, 10).unwrap().equal);
    }

    #[test]
    fn divisor_formulas_match_enumeration(n in 1u64..400) {
        prop_assert_eq!(r2_divisor(n), rs_bruteforce(n, 2));
        prop_assert_eq!(r4_divisor(n), rs_bruteforce(n, 4));
    }

    #[test]
    fn counts_convolve(n in 0u64..60, s in 1u32..4, t in 1u32..4) {
        let a = rs_bruteforce_table(s, n);
        let b = rs_bruteforce_table(t, n);
        let conv: u64 = (0..=n as usize).map(|k| a.counts[k] * b.counts[n as usize - k]).sum();
        prop_assert_eq!(conv, rs_bruteforce(n, s + t));
    }

    #[test]
    fn ordered_products_telescope(m in -4i64..4, n in -6i64..6, p in -6i64..6) {
        // ∏_{m}^{n} · ∏_{n+1}^{p} = ∏_{m}^{p} under the three-case convention
        let ctx = NumericContext::parse(128, "0.5", 1e-20).unwrap();
        let f = |i: i64| Ok(Mat::scalar(1, &ctx.num(1.0 + 0.25 * i as f64 + if i == -4 { 0.1 } else { 0.0 })));
        let left = &ordered_prod(1, 128, m, n, f).unwrap() * &ordered_prod(1, 128, n + 1, p, f).unwrap();
        let whole = ordered_prod(1, 128, m, p, f).unwrap();
        prop_assert!((&left - &whole).norm() < 1e-25 * (1.0 + whole.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn psi11_numeric_inside_region(q in 0.1f64..0.5, a in 1.5f64..4.0, zf in 0.2f64..0.7, bf in 0.05f64..0.6) {
        // b chosen so that |b/(az)| = bf < 1
        let ctx = NumericContext::parse(256, &format!("{q:.4}"), 1e-25).unwrap();
        let (a, z) = (ctx.parse_num(&format!("{a:.4}")).unwrap(), ctx.parse_num(&format!("{zf:.4}")).unwrap());
        let b = &(&a * &z) * &ctx.num(bf);
        let l = psi11_lhs_num(&ctx, &a, &b, &z).unwrap();
        let r = psi11_rhs_num(&ctx, &a, &b, &z).unwrap();
        prop_assert!((&l.value - &r.value).abs_f64() < 1e-25);
    }

    #[test]
    fn precision_doubling_stays_within_certificate(a in 1.5f64..3.0, zf in 0.2f64..0.6) {
        let lo = NumericContext::parse(128, "0.3", 1e-15).unwrap();
        let hi = NumericContext::parse(256, "0.3", 5e-16).unwrap();
        let val = |ctx: &NumericContext| {
            let (a, z) = (ctx.parse_num(&format!("{a:.4}")).unwrap(), ctx.parse_num(&format!("{zf:.4}")).unwrap());
            let b = ctx.parse_num("0.05").unwrap();
            psi11_lhs_num(ctx, &a, &b, &z).unwrap()
        };
        let (x, y) = (val(&lo), val(&hi));
        let gap = (&x.value - &y.value).abs_f64();
        prop_assert!(gap <= x.error + y.error, "gap {gap} vs {}", x.error);
    }
}

#[test]
fn weyl_groups_permute_roots() {
    for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::D, 4)] {
        let sys = build_root_system(f, n).unwrap();
        let w = WeylGroupData::generate(&sys);
        assert_eq!(w.len(), sys.weyl_order());
        for g in &w.elements {
            let mut image: Vec<Vec<i64>> = sys.roots.iter().map(|r| WeylGroupData::act(g, r)).collect();
            image.sort();
            let mut roots = sys.roots.clone();
            roots.sort();
            assert_eq!(image, roots);
        }
    }
}
