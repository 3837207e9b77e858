//! Operator identities as worst-residual measurements, shared by the identity
//! tests and the acceptance report.

use super::{diff, rand_form, rand_scalar, rand_vector_valued, rc, rng, unit_vector as unit};
use liedolb::calculus::{
    apply_diff, contract, dbar_phi, delbar, exp_ad, fn_bracket, fn_bracket_sparse, interior_basis, lie_derivative,
    lie_derivative_10, to_sparse, Diff, SparseForm,
};
use liedolb::{BasisLabel, Form, FormSpace, LieAlgebra, ModuleSpec, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const MODULES: [&str; 8] = ["1", "T", "T^", "W1", "W2", "T*T", "T^*W1", "W1*T"];

fn graded_commutator(a: &SparseForm, b: &SparseForm, sign: f64) -> SparseForm {
    let mut out = a.clone();
    out.add_form(b, C64::new(-sign, 0.0));
    out
}

fn rand_phi(r: &mut ChaCha8Rng, n: usize) -> Form {
    rand_form(r, &FormSpace::new(n, 0, 1, ModuleSpec::tangent()).unwrap())
}

/// `L_K L_L + L_L L_K = L_{[K,L]}` for vector-valued 1-forms.
pub fn lie_derivatives_bracket(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let dim = alg.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let k = rand_vector_valued(&mut r, dim, 1, 2);
        let l = rand_vector_valued(&mut r, dim, 1, 2);
        let deg = r.gen_range(0..=3.min(dim));
        let w = rand_scalar(&mut r, dim, deg, 3);
        let lhs = graded_commutator(
            &lie_derivative(alg, &k, &lie_derivative(alg, &l, &w, Diff::D), Diff::D),
            &lie_derivative(alg, &l, &lie_derivative(alg, &k, &w, Diff::D), Diff::D),
            -1.0,
        );
        let rhs = lie_derivative(alg, &fn_bracket_sparse(alg, &k, &l), &w, Diff::D);
        worst = worst.max(diff(&lhs, &rhs));
    }
    worst
}

/// `L_K i_L − i_L L_K = i_{[K,L]} − L_{i_L K}`.
pub fn lie_derivative_contraction(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let dim = alg.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let k = rand_vector_valued(&mut r, dim, 1, 2);
        let l = rand_vector_valued(&mut r, dim, 1, 2);
        let deg = r.gen_range(0..=3.min(dim));
        let w = rand_scalar(&mut r, dim, deg, 3);
        let lhs = graded_commutator(
            &lie_derivative(alg, &k, &contract(&l, &w), Diff::D),
            &contract(&l, &lie_derivative(alg, &k, &w, Diff::D)),
            1.0,
        );
        let mut rhs = contract(&fn_bracket_sparse(alg, &k, &l), &w);
        rhs.add_form(&lie_derivative(alg, &contract(&l, &k), &w, Diff::D), C64::new(-1.0, 0.0));
        worst = worst.max(diff(&lhs, &rhs));
    }
    worst
}

/// `L^{0,1}_φ = −i_{∂̄φ}`.
pub fn type_01_is_contraction(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let phi = rand_phi(&mut r, alg.n());
        let dphi = to_sparse(&delbar(alg, &phi).unwrap());
        let deg = r.gen_range(0..=alg.dim().min(4));
        let w = rand_scalar(&mut r, alg.dim(), deg, 3);
        let lhs = lie_derivative(alg, &to_sparse(&phi), &w, Diff::Delbar);
        let rhs = contract(&dphi, &w).scaled(C64::new(-1.0, 0.0));
        worst = worst.max(diff(&lhs, &rhs));
    }
    worst
}

/// `L^{1,0}_φ L^{1,0}_ψ + L^{1,0}_ψ L^{1,0}_φ = L^{1,0}_{[φ,ψ]}`.
pub fn type_10_bracket(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let phi = rand_phi(&mut r, alg.n());
        let psi = rand_phi(&mut r, alg.n());
        let (a, b) = (to_sparse(&phi), to_sparse(&psi));
        let deg = r.gen_range(0..=alg.dim().min(4));
        let w = rand_scalar(&mut r, alg.dim(), deg, 3);
        let mut lhs = lie_derivative(alg, &a, &lie_derivative(alg, &b, &w, Diff::Del), Diff::Del);
        lhs.add_form(&lie_derivative(alg, &b, &lie_derivative(alg, &a, &w, Diff::Del), Diff::Del), C64::new(1.0, 0.0));
        let br = to_sparse(&fn_bracket(alg, &phi, &psi).unwrap());
        worst = worst.max(diff(&lhs, &lie_derivative(alg, &br, &w, Diff::Del)));
    }
    worst
}

/// `∂̄ L^{1,0}_φ + L^{1,0}_φ ∂̄ = L^{1,0}_{∂̄φ}`.
pub fn delbar_anticommutes(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let phi = rand_phi(&mut r, alg.n());
        let a = to_sparse(&phi);
        let dphi = to_sparse(&delbar(alg, &phi).unwrap());
        let deg = r.gen_range(0..=alg.dim().min(4));
        let w = rand_scalar(&mut r, alg.dim(), deg, 3);
        let mut lhs = apply_diff(alg, &lie_derivative(alg, &a, &w, Diff::Del), Diff::Delbar);
        lhs.add_form(&lie_derivative(alg, &a, &apply_diff(alg, &w, Diff::Delbar), Diff::Del), C64::new(1.0, 0.0));
        worst = worst.max(diff(&lhs, &lie_derivative(alg, &dphi, &w, Diff::Del)));
    }
    worst
}

/// `ω([X,Y]) = i_X i_Y dω` and `i_{[X,Y]} dω = i_X d i_Y dω − i_Y d i_X dω` on all generator pairs.
pub fn bracket_contractions(alg: &LieAlgebra) -> f64 {
    let dim = alg.dim();
    let mut worst: f64 = 0.0;
    for x in 0..dim {
        for y in 0..dim {
            let br = alg.bracket(&unit(dim, x), &unit(dim, y));
            for c in 0..dim {
                let dw = apply_diff(alg, &SparseForm::scalar(1 << c, C64::new(1.0, 0.0)), Diff::D);
                let rhs = interior_basis(x, &interior_basis(y, &dw)).terms.get(&(0, 0)).copied().unwrap_or_default();
                worst = worst.max((br[c] - rhs).norm());

                let mut k = SparseForm::new();
                for (z, v) in br.iter().enumerate() {
                    k.add(0, z as u32, *v);
                }
                let mut rhs2 = interior_basis(x, &apply_diff(alg, &interior_basis(y, &dw), Diff::D));
                rhs2.add_form(&interior_basis(y, &apply_diff(alg, &interior_basis(x, &dw), Diff::D)), C64::new(-1.0, 0.0));
                worst = worst.max(diff(&contract(&k, &dw), &rhs2));
            }
        }
    }
    worst
}

/// `d², ∂², ∂̄², ∂∂̄ + ∂̄∂` on every basis element, and `∂̄²` on module-valued forms.
pub fn differentials_square_to_zero(alg: &LieAlgebra) -> f64 {
    let n = alg.n();
    let mut worst: f64 = 0.0;
    for m in MODULES {
        let module = ModuleSpec::parse(m).unwrap();
        if module.check(n).is_err() {
            continue;
        }
        for p in 0..=n {
            for q in 0..=n {
                let space = FormSpace::new(n, p, q, module.clone()).unwrap();
                for i in 0..space.dim() {
                    let b = Form::basis(space.clone(), i);
                    if q + 2 <= n {
                        worst = worst.max(delbar(alg, &delbar(alg, &b).unwrap()).unwrap().norm());
                    }
                    if module.is_trivial() {
                        let w = to_sparse(&b);
                        for which in [Diff::D, Diff::Del, Diff::Delbar] {
                            worst = worst.max(apply_diff(alg, &apply_diff(alg, &w, which), which).max_abs());
                        }
                        let mut mixed = apply_diff(alg, &apply_diff(alg, &w, Diff::Del), Diff::Delbar);
                        mixed.add_form(&apply_diff(alg, &apply_diff(alg, &w, Diff::Delbar), Diff::Del), C64::new(1.0, 0.0));
                        worst = worst.max(mixed.max_abs());
                    }
                }
            }
        }
    }
    worst
}

/// `[φ,φ] = φ_α^β φ_λ^γ z̄^{αλ}⊗[z_β,z_γ] − 2 φ_α^τ φ_λ^γ C^{ᾱ}_{β̄γ} z̄^{βλ}⊗z_τ`, expanded directly.
pub fn bracket_closed_form(alg: &LieAlgebra, phi: &Form) -> Form {
    let n = alg.n();
    let space = FormSpace::new(n, 0, 2, ModuleSpec::tangent()).unwrap();
    let mut out = Form::zeros(space.clone());
    let f = |form: usize, vec: usize| phi.coeffs[form * n + vec];
    let mut put = |a: usize, b: usize, slot: usize, v: C64| {
        if a == b {
            return;
        }
        let (lo, hi, s) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let label = BasisLabel {
            one_zero: vec![],
            zero_one: vec![lo, hi],
            module: vec![liedolb::algebra::FactorIndex::Vector(slot)],
        };
        let i = space.index_of(&label).unwrap();
        out.coeffs[i] += v * s;
    };
    for alpha in 0..n {
        for lambda in 0..n {
            for beta in 0..n {
                for gamma in 0..n {
                    for z in 0..n {
                        let c = alg.c(beta, gamma, z);
                        if c.norm() > 0.0 {
                            put(alpha, lambda, z, f(alpha, beta) * f(lambda, gamma) * c);
                        }
                    }
                }
            }
        }
    }
    for alpha in 0..n {
        for tau in 0..n {
            for lambda in 0..n {
                for gamma in 0..n {
                    for beta in 0..n {
                        let c = alg.c(n + beta, gamma, n + alpha);
                        if c.norm() > 0.0 {
                            put(beta, lambda, tau, f(alpha, tau) * f(lambda, gamma) * c * -2.0);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Decomposable bracket against the closed form.
pub fn bracket_vs_closed_form(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let phi = rand_phi(&mut r, alg.n());
        let a = fn_bracket(alg, &phi, &phi).unwrap();
        worst = worst.max(a.sub(&bracket_closed_form(alg, &phi)).unwrap().norm());
    }
    worst
}

/// `(∂̄ − L^{1,0}_φ)² = L^{1,0}_{½[φ,φ] − ∂̄φ}` on a basis.
pub fn deformed_delbar_square(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let n = alg.n();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let phi = rand_phi(&mut r, n).scale(C64::new(0.3, 0.0));
        let br = fn_bracket(alg, &phi, &phi).unwrap();
        let k = br.scale(C64::new(0.5, 0.0)).sub(&delbar(alg, &phi).unwrap()).unwrap();
        for p in 0..=n {
            for q in 0..n.saturating_sub(1) {
                let space = FormSpace::new(n, p, q, ModuleSpec::trivial()).unwrap();
                for i in 0..space.dim() {
                    let b = Form::basis(space.clone(), i);
                    let sq = dbar_phi(alg, &phi, &dbar_phi(alg, &phi, &b).unwrap()).unwrap();
                    let rhs = lie_derivative_10(alg, &k, &b).unwrap();
                    worst = worst.max(sq.sub(&rhs).unwrap().norm());
                }
            }
        }
    }
    worst
}

/// `e^{ad X}[u, v] = [e^{ad X}u, e^{ad X}v]`.
pub fn exp_ad_automorphism(alg: &LieAlgebra, seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let dim = alg.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x: Vec<C64> = (0..dim).map(|_| rc(&mut r) * 0.5).collect();
        let e = exp_ad(alg, &x);
        let u: Vec<C64> = (0..dim).map(|_| rc(&mut r)).collect();
        let v: Vec<C64> = (0..dim).map(|_| rc(&mut r)).collect();
        let apply = |w: &[C64]| -> Vec<C64> { (&e * nalgebra::DVector::from_column_slice(w)).iter().copied().collect() };
        let lhs = apply(&alg.bracket(&u, &v));
        let rhs = alg.bracket(&apply(&u), &apply(&v));
        worst = worst.max(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
    }
    worst
}

/// Every identity above at `trials` random inputs, as `(name, worst residual)`.
pub fn suite(alg: &LieAlgebra, trials: usize) -> Vec<(&'static str, f64)> {
    vec![
        ("L_K L_L + L_L L_K = L_[K,L]", lie_derivatives_bracket(alg, 1, trials)),
        ("[L_K, i_L] = i_[K,L] - L_(i_L K)", lie_derivative_contraction(alg, 2, trials)),
        ("L^{0,1}_phi = -i_(dbar phi)", type_01_is_contraction(alg, 3, trials)),
        ("{L^{1,0}_phi, L^{1,0}_psi} = L^{1,0}_[phi,psi]", type_10_bracket(alg, 4, trials)),
        ("{dbar, L^{1,0}_phi} = L^{1,0}_(dbar phi)", delbar_anticommutes(alg, 5, trials)),
        ("i_[X,Y] = i_X i_Y d", bracket_contractions(alg)),
        ("d^2 = del^2 = dbar^2 = 0", differentials_square_to_zero(alg)),
        ("FN bracket closed form", bracket_vs_closed_form(alg, 6, trials)),
        ("exp(ad X) automorphism", exp_ad_automorphism(alg, 8, trials)),
    ]
}
