use crate::algebra::{Form, FormSpace, LieAlgebra, Monomial, PolyForm, PolyScalar};
use crate::error::{Error, Result};
use crate::kuranishi::{Bilinear, KuranishiFamily, EXACT_TOL, OBSTRUCTION_REL};
use crate::par::{self, Exec};
use crate::spectral::{assemble_with, harmonic_space_of, moore_penrose, HarmonicSpace, LinearOperatorMatrix, Operator, PseudoInverse};

/// Operators needed to deform classes of `Λ^{0,q}⊗𝔈` along a family.
#[derive(Debug, Clone)]
pub struct ClassContext {
    pub space: FormSpace,
    /// `⟨e_a|` for the basis `e_a` of `Λ^{0,1}⊗T`.
    pub action: Bilinear,
    /// `∂̄ : Λ^{0,q}⊗𝔈 → Λ^{0,q+1}⊗𝔈`.
    pub dbar: LinearOperatorMatrix,
    pub dbar_pinv: PseudoInverse,
    pub harmonic: HarmonicSpace,
    pub harmonic_next: HarmonicSpace,
}

impl ClassContext {
    pub fn new(alg: &LieAlgebra, fam: &KuranishiFamily, space: &FormSpace, rel_tol: Option<f64>, exec: Exec) -> Result<Self> {
        if space.n != alg.n() || space.p != 0 {
            return Err(Error::ShapeMismatch(format!("expected Λ^{{0,q}}⊗𝔈, got {space}")));
        }
        let s1 = fam.space().clone();
        let mats = par::map_range(exec, s1.dim(), |a| {
            let e = Form::basis(s1.clone(), a);
            assemble_with(alg, Operator::PhiAction(&e), space, Exec::Sequential).map(|m| m.matrix)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let dbar = assemble_with(alg, Operator::Delbar, space, exec)?;
        let dbar_pinv = moore_penrose(&dbar, rel_tol)?;
        let harmonic = harmonic_space_of(alg, space, rel_tol, exec)?;
        let harmonic_next = harmonic_space_of(alg, &space.with_q(space.q + 1), rel_tol, exec)?;
        Ok(Self {
            space: space.clone(),
            action: Bilinear {
                mats,
                out_dim: space.with_q(space.q + 1).dim(),
            },
            dbar,
            dbar_pinv,
            harmonic,
            harmonic_next,
        })
    }
}

/// Power series `σ(t)` extending a class, with its obstruction functionals.
#[derive(Debug, Clone)]
pub struct ClassDeformation {
    pub sigma0: Form,
    pub sigma: PolyForm,
    /// `⟨η^{(q+1)}_μ, ⟨φ(t)|σ(t)⟩⟩` through degree `order + 1`.
    pub obstruction: Vec<PolyScalar>,
    pub exact: bool,
}

/// Runs `σ_k = ∂̄† Σ_{j=1}^{k} ⟨φ_j|σ_{k−j}⟩`.
pub fn deform_class(fam: &KuranishiFamily, ctx: &ClassContext, sigma0: &Form, order: usize, exec: Exec) -> Result<ClassDeformation> {
    if sigma0.space != ctx.space {
        return Err(Error::ShapeMismatch(format!("class lies in {}, context is {}", sigma0.space, ctx.space)));
    }
    let closed = (&ctx.dbar.matrix * &sigma0.coeffs).norm();
    if closed > 1e-9 * (1.0 + sigma0.norm()) {
        return Err(Error::NotClosed(closed));
    }
    let r = fam.r();
    let next_dim = ctx.action.out_dim;
    let mut sigma = PolyForm::zero(r, order, ctx.space.dim());
    sigma.add_term(Monomial::one(r), &sigma0.coeffs);
    let dagger = &ctx.dbar_pinv.pinv;
    for k in 1..=order {
        for (m, v) in PolyForm::bilinear_degree(&fam.phi, &sigma, k, next_dim, exec, |u, v| ctx.action.apply(u, v)) {
            let c = dagger * v;
            if c.norm() > 1e-14 {
                sigma.add_term(m, &c);
            }
        }
    }
    let mut image = PolyForm::zero(r, order + 1, next_dim);
    for k in 1..=order + 1 {
        for (m, v) in PolyForm::bilinear_degree(&fam.phi, &sigma, k, next_dim, exec, |u, v| ctx.action.apply(u, v)) {
            image.add_term(m, &v);
        }
    }
    let raw: Vec<PolyScalar> = ctx.harmonic_next.functionals().iter().map(|w| image.functional(w)).collect();
    let largest = raw.iter().map(PolyScalar::max_abs).fold(0.0, f64::max);
    let obstruction = raw.iter().map(|p| p.pruned_abs(OBSTRUCTION_REL * largest.max(1.0))).collect();
    let exact = fam.exact && (order / 2 + 1..=order).all(|k| sigma.degree_norm(k) < EXACT_TOL);
    Ok(ClassDeformation {
        sigma0: sigma0.clone(),
        sigma,
        obstruction,
        exact,
    })
}

/// Deforms every basis class of `ℋ^{0,q}(𝔈)`.
pub fn deform_all(fam: &KuranishiFamily, ctx: &ClassContext, order: usize, exec: Exec) -> Result<Vec<ClassDeformation>> {
    par::map(exec, &ctx.harmonic.basis, |b| deform_class(fam, ctx, b, order, Exec::Sequential))
        .into_iter()
        .collect()
}
