use super::gram::space_gram;
use crate::algebra::{Form, FormSpace, LieAlgebra};
use crate::calculus::{apply_diff, from_sparse, to_sparse, Diff, ModuleDelbar, PhiAction, SparseForm};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::C64;
use nalgebra::DMatrix;

/// Operator to assemble on a bigraded space.
#[derive(Debug, Clone, Copy)]
pub enum Operator<'a> {
    /// `∂̄ : Λ^{p,q}⊗𝔈 → Λ^{p,q+1}⊗𝔈`.
    Delbar,
    /// `∂ : Λ^{p,q} → Λ^{p+1,q}` (scalar forms).
    Del,
    /// `⟨φ| : Λ^{p,q}⊗𝔈 → Λ^{p,q+1}⊗𝔈`.
    PhiAction(&'a Form),
    /// `∂̄_φ = ∂̄ − ⟨φ|`.
    DelbarPhi(&'a Form),
}

/// Matrix of a linear map between canonical bases, with the Gram matrices of both sides.
#[derive(Debug, Clone)]
pub struct LinearOperatorMatrix {
    pub domain: FormSpace,
    pub codomain: FormSpace,
    pub matrix: DMatrix<C64>,
    pub gram_domain: DMatrix<C64>,
    pub gram_codomain: DMatrix<C64>,
    pub orthonormal: bool,
    /// Natural size of the operator, used as a floor for the rank cut.
    pub scale: f64,
}

impl LinearOperatorMatrix {
    pub fn from_matrix(alg: &LieAlgebra, domain: FormSpace, codomain: FormSpace, matrix: DMatrix<C64>) -> Self {
        let gram_domain = space_gram(alg, &domain);
        let gram_codomain = space_gram(alg, &codomain);
        Self {
            domain,
            codomain,
            matrix,
            gram_domain,
            gram_codomain,
            orthonormal: alg.is_orthonormal(),
            scale: 1.0 + alg.max_constant(),
        }
    }
}

/// Assembles `op` on `domain`, one column per basis element.
pub fn assemble(alg: &LieAlgebra, op: Operator, domain: &FormSpace) -> Result<LinearOperatorMatrix> {
    assemble_with(alg, op, domain, Exec::default())
}

pub fn assemble_with(alg: &LieAlgebra, op: Operator, domain: &FormSpace, exec: Exec) -> Result<LinearOperatorMatrix> {
    if domain.n != alg.n() {
        return Err(Error::ShapeMismatch(format!("space has n = {}, algebra n = {}", domain.n, alg.n())));
    }
    let codomain = match op {
        Operator::Del => {
            if !domain.module.is_trivial() {
                return Err(Error::ShapeMismatch("∂ is assembled on scalar forms only".into()));
            }
            domain.with_p(domain.p + 1)
        }
        _ => domain.with_q(domain.q + 1),
    };
    let module = &domain.module;
    let delbar = ModuleDelbar::new(alg, module);
    let phi = match op {
        Operator::PhiAction(f) | Operator::DelbarPhi(f) => {
            if f.space.n != alg.n() || f.space.p != 0 || f.space.q != 1 || !matches!(f.space.module.factors(), [crate::algebra::Factor::T]) {
                return Err(Error::ShapeMismatch(format!("φ must lie in Λ^{{0,1}}⊗T, got {}", f.space)));
            }
            Some(PhiAction::new(alg, module, &to_sparse(f)))
        }
        _ => None,
    };
    let apply = |f: &SparseForm| -> SparseForm {
        match op {
            Operator::Delbar => delbar.apply(f),
            Operator::Del => apply_diff(alg, f, Diff::Del),
            Operator::PhiAction(_) => phi.as_ref().expect("phi").apply(f),
            Operator::DelbarPhi(_) => delbar.apply(f).sub(&phi.as_ref().expect("phi").apply(f)),
        }
    };
    let cols = par::map_range(exec, domain.dim(), |j| {
        let (mask, m) = domain.full_parts(j);
        from_sparse(&codomain, &apply(&SparseForm::single(mask, m as u32, C64::new(1.0, 0.0)))).coeffs
    });
    let mut matrix = DMatrix::zeros(codomain.dim(), domain.dim());
    for (j, c) in cols.iter().enumerate() {
        matrix.set_column(j, c);
    }
    Ok(LinearOperatorMatrix::from_matrix(alg, domain.clone(), codomain, matrix))
}
