use proptest::prelude::*;
use wh_core::approx::{chain_rule_coefficients, rational_transform, ApproxChain};
use wh_core::factor::winding_number;
use wh_core::jordan::bm_matrix;
use wh_core::linalg::{identity, max_abs, C64};
use wh_core::wiener::{hilbert_transform, riesz_project, split, Side};
use wh_core::{CayleyGrid, CircleFunction};

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn circle() -> impl Strategy<Value = CircleFunction> {
    (-20i64..5, prop::collection::vec(c64(), 1..40)).prop_map(|(lo, c)| CircleFunction::new(lo, c))
}

proptest! {
    #[test]
    fn split_is_exact(f in circle()) {
        let (p, m) = split(&f);
        for k in f.lo()..=f.hi() {
            prop_assert_eq!(p.coeff(k) + m.coeff(k), f.coeff(k));
        }
        prop_assert_eq!(riesz_project(&p, Side::Minus).l1_norm(), 0.0);
    }

    #[test]
    fn hilbert_is_an_involution(f in circle()) {
        let s2 = hilbert_transform(&hilbert_transform(&f));
        for k in f.lo()..=f.hi() {
            prop_assert_eq!(s2.coeff(k), f.coeff(k));
        }
    }

    #[test]
    fn b_matrix_group_law(m in 1usize..6, z1 in c64(), z2 in c64()) {
        let lhs = bm_matrix(m, z1) * bm_matrix(m, z2);
        prop_assert!(max_abs(&(lhs - bm_matrix(m, z1 + z2))) < 1e-13);
        prop_assert!(max_abs(&(bm_matrix(m, z1) * bm_matrix(m, -z1) - identity(m))) < 1e-13);
    }

    #[test]
    fn winding_of_monomial(k in -5i64..6, r in 0.1..0.9f64) {
        let grid = CayleyGrid::new(8).unwrap();
        let samples: Vec<C64> = grid.z().iter().map(|z| z.powi(k as i32) + r).collect();
        let w = winding_number(&samples, &grid).unwrap();
        let expect = if k == 0 { 0.0 } else { k as f64 };
        prop_assert!((w - expect).abs() < 1e-9);
    }

    #[test]
    fn transform_poles_stay_below_axis(b in prop::collection::vec(-5.0..5.0f64, 1..30), flip in any::<bool>()) {
        let mut chain = ApproxChain::from_coefficients(b);
        chain.flip = flip;
        let rt = rational_transform(&chain);
        for (k, p) in rt.poles.iter().enumerate() {
            let im = if flip { -p.im } else { p.im };
            prop_assert_eq!(im, -((k + 1) as f64));
            prop_assert_eq!(p.re, 0.0);
        }
    }

    #[test]
    fn chain_rule_coefficients_sum(j in 0usize..10) {
        // D^j e^{-x} evaluated with φ ≡ 1 gives (−1)^j e^{-x}, so Σ_l c_{j,l} δ_{l,0} = (−1)^j.
        let c = chain_rule_coefficients(j);
        prop_assert_eq!(c[0], if j % 2 == 0 { 1.0 } else { -1.0 });
        prop_assert_eq!(c[j], c[0]);
    }
}
