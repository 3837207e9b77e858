//! Exterior calculus on invariant forms.
//!
//! Internally forms are sparse maps over generator bitmasks (see
//! [`SparseForm`]); the functions here convert to and from canonical
//! [`Form`] coordinates. Conventions:
//!
//! * `dω(x, y) = −ω([x, y])`, extended as an antiderivation.
//! * `i_{φ⊗X} ω = φ ∧ i_X ω`.
//! * `L_K = i_K D − (−1)^{k−1} D i_K` for a vector-valued `k`-form `K`.
//! * Module-valued `∂̄` acts on the form slot and on each module factor with
//!   the Koszul sign of everything to its left.

mod bracket;
mod exp;
mod module_ops;
mod ops;
mod sparse;
mod transport;

pub use bracket::fn_bracket_sparse;
pub use exp::{exp_ad, expm};
pub use module_ops::{FactorActions, ModuleDelbar, PhiAction};
pub use ops::{apply_diff, contract, d_monomial, lie_derivative, Diff};
pub use sparse::{interior, interior_basis, interior_sign, wedge, wedge_right, wedge_sign, SparseForm};
pub use transport::{deformed_frame, transport_coframe};

use crate::algebra::{Form, FormSpace, LieAlgebra, ModuleSpec};
use crate::error::{Error, Result};

/// Canonical coordinates to sparse form (slot = module index).
pub fn to_sparse(f: &Form) -> SparseForm {
    let mut out = SparseForm::new();
    for (i, &c) in f.coeffs.iter().enumerate() {
        if c.norm() != 0.0 {
            let (mask, m) = f.space.full_parts(i);
            out.add(mask, m as u32, c);
        }
    }
    out
}

/// Projects a sparse form onto the canonical basis of `space`, dropping other components.
pub fn from_sparse(space: &FormSpace, f: &SparseForm) -> Form {
    let mut out = Form::zeros(space.clone());
    for (&(mask, slot), &c) in &f.terms {
        if let Some(i) = space.index_of_full(mask, slot as usize) {
            out.coeffs[i] += c;
        }
    }
    out
}

fn check_n(alg: &LieAlgebra, f: &Form) -> Result<()> {
    if f.space.n != alg.n() {
        return Err(Error::ShapeMismatch(format!("form has n = {}, algebra n = {}", f.space.n, alg.n())));
    }
    Ok(())
}

fn check_vector_valued(alg: &LieAlgebra, f: &Form) -> Result<()> {
    check_n(alg, f)?;
    if f.space.p != 0 || f.space.module != ModuleSpec::tangent() {
        return Err(Error::ShapeMismatch(format!("expected Λ^{{0,q}}⊗T, got {}", f.space)));
    }
    Ok(())
}

/// `∂̄ : Λ^{p,q}⊗𝔈 → Λ^{p,q+1}⊗𝔈`.
pub fn delbar(alg: &LieAlgebra, f: &Form) -> Result<Form> {
    check_n(alg, f)?;
    let op = ModuleDelbar::new(alg, &f.space.module);
    Ok(from_sparse(&f.space.with_q(f.space.q + 1), &op.apply(&to_sparse(f))))
}

/// `∂ : Λ^{p,q} → Λ^{p+1,q}` on scalar forms.
pub fn del(alg: &LieAlgebra, f: &Form) -> Result<Form> {
    check_n(alg, f)?;
    if !f.space.module.is_trivial() {
        return Err(Error::ShapeMismatch("∂ is defined on scalar forms only".into()));
    }
    Ok(from_sparse(&f.space.with_p(f.space.p + 1), &apply_diff(alg, &to_sparse(f), Diff::Del)))
}

/// `d` on a scalar form, as a sparse form (it mixes bidegrees).
pub fn d(alg: &LieAlgebra, f: &Form) -> Result<SparseForm> {
    check_n(alg, f)?;
    Ok(apply_diff(alg, &to_sparse(f), Diff::D))
}

/// `i_φ ω` for `φ ∈ Λ^{0,q'}⊗T` and a scalar form `ω ∈ Λ^{p,q}`.
pub fn contract_form(alg: &LieAlgebra, phi: &Form, omega: &Form) -> Result<Form> {
    check_vector_valued(alg, phi)?;
    check_n(alg, omega)?;
    let s = &omega.space;
    if s.p == 0 {
        return Ok(Form::zeros(FormSpace::new_unchecked(s.n, 0, s.q + phi.space.q, s.module.clone())));
    }
    let target = FormSpace::new_unchecked(s.n, s.p - 1, s.q + phi.space.q, s.module.clone());
    Ok(from_sparse(&target, &contract(&to_sparse(phi), &to_sparse(omega))))
}

/// `L^{1,0}_φ = i_φ ∂ − (−1)^{k−1} ∂ i_φ` on scalar forms.
pub fn lie_derivative_10(alg: &LieAlgebra, phi: &Form, omega: &Form) -> Result<Form> {
    check_vector_valued(alg, phi)?;
    check_n(alg, omega)?;
    let s = &omega.space;
    let target = FormSpace::new_unchecked(s.n, s.p, s.q + phi.space.q, s.module.clone());
    Ok(from_sparse(&target, &lie_derivative(alg, &to_sparse(phi), &to_sparse(omega), Diff::Del)))
}

/// Frölicher–Nijenhuis bracket `Λ^{0,k}⊗T × Λ^{0,l}⊗T → Λ^{0,k+l}⊗T`.
pub fn fn_bracket(alg: &LieAlgebra, phi: &Form, psi: &Form) -> Result<Form> {
    check_vector_valued(alg, phi)?;
    check_vector_valued(alg, psi)?;
    let target = FormSpace::new_unchecked(alg.n(), 0, phi.space.q + psi.space.q, ModuleSpec::tangent());
    Ok(from_sparse(&target, &fn_bracket_sparse(alg, &to_sparse(phi), &to_sparse(psi))))
}

/// `⟨φ|σ` for `φ ∈ Λ^{0,1}⊗T` and `σ ∈ Λ^{p,q}⊗𝔈`.
pub fn phi_action(alg: &LieAlgebra, phi: &Form, sigma: &Form) -> Result<Form> {
    check_vector_valued(alg, phi)?;
    check_n(alg, sigma)?;
    let op = PhiAction::new(alg, &sigma.space.module, &to_sparse(phi));
    Ok(from_sparse(&sigma.space.with_q(sigma.space.q + 1), &op.apply(&to_sparse(sigma))))
}

/// `∂̄_φ σ = ∂̄σ − ⟨φ|σ`.
pub fn dbar_phi(alg: &LieAlgebra, phi: &Form, sigma: &Form) -> Result<Form> {
    delbar(alg, sigma)?.sub(&phi_action(alg, phi, sigma)?)
}
