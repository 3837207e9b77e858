mod common;

use common::identities::*;
use common::{algebras, unit_vector};
use liedolb::calculus::exp_ad;
use liedolb::C64;

const TOL: f64 = 1e-10;
const TRIALS: usize = 100;

fn check(name: &str, what: &str, residual: f64) {
    assert!(residual < TOL, "{name}: {what}: {residual:e}");
}

#[test]
fn lie_derivatives_anticommute_to_bracket() {
    for (name, alg) in algebras() {
        check(name, "bracket", lie_derivatives_bracket(&alg, 1, TRIALS));
    }
}

#[test]
fn lie_derivative_and_contraction() {
    for (name, alg) in algebras() {
        check(name, "contraction", lie_derivative_contraction(&alg, 2, TRIALS));
    }
}

#[test]
fn type_01_lie_derivative_is_contraction_with_delbar_phi() {
    for (name, alg) in algebras() {
        check(name, "type (0,1)", type_01_is_contraction(&alg, 3, TRIALS));
    }
}

#[test]
fn type_10_lie_derivatives_anticommute_to_bracket() {
    for (name, alg) in algebras() {
        check(name, "type (1,0)", type_10_bracket(&alg, 4, TRIALS));
    }
}

#[test]
fn delbar_anticommutes_with_type_10_lie_derivative() {
    for (name, alg) in algebras() {
        check(name, "∂̄ anticommutator", delbar_anticommutes(&alg, 5, TRIALS));
    }
}

#[test]
fn contraction_of_brackets_by_d() {
    for (name, alg) in algebras() {
        check(name, "i_[X,Y]", bracket_contractions(&alg));
    }
}

#[test]
fn differentials_square_to_zero_on_every_basis_element() {
    for (name, alg) in algebras() {
        check(name, "squares", differentials_square_to_zero(&alg));
    }
}

#[test]
fn bracket_matches_closed_form() {
    for (name, alg) in algebras() {
        check(name, "closed form", bracket_vs_closed_form(&alg, 6, TRIALS));
    }
}

#[test]
fn deformed_delbar_squares_to_lie_derivative() {
    for (name, alg) in algebras() {
        check(name, "(∂̄ − L_φ)²", deformed_delbar_square(&alg, 7, 10));
    }
}

#[test]
fn exp_ad_is_an_automorphism() {
    for (name, alg) in algebras() {
        check(name, "exp ad", exp_ad_automorphism(&alg, 8, TRIALS));
    }
}

#[test]
fn exp_ad_on_iwasawa_terminates() {
    let alg = liedolb::workbench::catalog("iwasawa").unwrap();
    let e = exp_ad(&alg, &unit_vector(6, 0));
    let image: Vec<C64> = e.column(1).iter().copied().collect();
    let mut want = unit_vector(6, 1);
    want[2] = C64::new(-1.0, 0.0);
    for (a, b) in image.iter().zip(&want) {
        assert!((a - b).norm() < 1e-14);
    }
    let abelian = liedolb::workbench::catalog("abelian:2").unwrap();
    let e = exp_ad(&abelian, &[C64::new(0.3, 0.1); 4]);
    assert_eq!(e, nalgebra::DMatrix::identity(4, 4));
}
