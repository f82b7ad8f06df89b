use wh_core::factor::{factorize_symbol, log_cayley, FactorizeOptions, ShiftVariant};
use wh_core::linalg::{identity, max_abs, C64};
use wh_core::symbol::builtin;
use wh_core::{parse_symbol_spec, Error};

const OMEGA: [f64; 2] = [1.0, 0.0];

fn opts() -> FactorizeOptions {
    FactorizeOptions::default()
}

#[test]
fn identity_is_trivially_factored() {
    let r = factorize_symbol(&builtin("identity").unwrap(), &OMEGA, &opts()).unwrap();
    assert_eq!(r.kappa_partial, vec![0, 0]);
    assert!(r.residual() < 1e-12);
    assert!(r.assembly_report().residual < 1e-12);
}

#[test]
fn halfplane_middle_factor_is_inverse_square_root() {
    let r = factorize_symbol(&builtin("halfplane_scalar").unwrap(), &OMEGA, &opts()).unwrap();
    assert_eq!(r.kappa_total(), 0);
    assert!((r.zeta()[0] - C64::new(-0.5, 0.0)).norm() < 1e-12);
    let worst = r
        .grid
        .t()
        .iter()
        .zip(&r.assembly.d_middle)
        .map(|(&t, d)| (d[(0, 0)] - (log_cayley(t) * -0.5).exp()).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
    assert!(r.assembly_report().residual < 1e-8);
}

#[test]
fn lower_triangular_polynomial_symbol() {
    let sym = parse_symbol_spec(r#"{"dim": 2, "mu": 1, "entries": [["t + 1i", "0"], ["1", "t - 2i"]]}"#).unwrap();
    let r = factorize_symbol(&sym, &OMEGA, &opts()).unwrap();
    assert_eq!(r.kappa_total(), 1);
    assert_eq!(r.kappa_partial, vec![1, 0]);
    assert!(r.residual() < 1e-8);
    assert!(r.assembly_report().residual < 1e-8);
}

#[test]
fn canonical_symbol_with_singular_square_sections() {
    let spec = r#"{"dim": 2, "mu": 0, "entries": [["(t - 1i)/(t + 1i)", "1/(t + 3i)"], ["0", "(t + 1i)/(t - 1i)"]]}"#;
    let r = factorize_symbol(&parse_symbol_spec(spec).unwrap(), &OMEGA, &opts()).unwrap();
    assert_eq!(r.kappa_partial, vec![0, 0]);
    assert!(r.residual() < 1e-8);
    let n = 2;
    assert!(max_abs(&(r.a_plus.value_at_one() - identity(n))) < 1e-8);
}

#[test]
fn mixed_symbol_indices() {
    let spec = r#"{"dim": 2, "mu": 1, "entries": [["t + 1i", "2"], ["1/(t - 5i)", "-t + 1i"]]}"#;
    let r = factorize_symbol(&parse_symbol_spec(spec).unwrap(), &OMEGA, &opts()).unwrap();
    assert_eq!(r.kappa_partial, vec![1, 0]);
    assert!(r.residual() < 1e-8);
    assert!(r.assembly_report().residual < 1e-8);
}

#[test]
fn cayley_shift_raises_every_partial_index() {
    let sym = builtin("jordan2").unwrap().with_cayley_power(1);
    let r = factorize_symbol(&sym, &OMEGA, &opts()).unwrap();
    assert_eq!(r.kappa_partial, vec![1, 1]);
    assert_eq!(r.exponents, vec![1, 1]);
    assert!(matches!(r.variant, ShiftVariant::Left | ShiftVariant::Right));
}

#[test]
fn rejects_symbol_vanishing_on_the_line() {
    let sym = parse_symbol_spec(r#"{"dim": 1, "mu": 1, "entries": [["t"]]}"#).unwrap();
    let err = factorize_symbol(&sym, &OMEGA, &opts()).unwrap_err();
    assert!(matches!(err, Error::Ellipticity { .. }), "{err}");
}

#[test]
fn doubling_the_grid_keeps_the_factorization() {
    let sym = builtin("rational_scalar").unwrap();
    let a = factorize_symbol(&sym, &OMEGA, &opts()).unwrap();
    let b = factorize_symbol(
        &sym,
        &OMEGA,
        &FactorizeOptions {
            log2_grid: 13,
            ..opts()
        },
    )
    .unwrap();
    for k in 0..8 {
        let d = (a.a_plus.entry(0, 0).coeff(k) - b.a_plus.entry(0, 0).coeff(k)).norm();
        assert!(d < 1e-12, "coefficient {k}: {d}");
    }
}
