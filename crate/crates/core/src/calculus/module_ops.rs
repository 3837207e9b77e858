use super::bracket::fn_bracket_sparse;
use super::ops::{apply_diff, lie_derivative, Diff};
use super::sparse::{interior_basis, wedge_sign, SparseForm};
use crate::algebra::{subsets, Factor, LieAlgebra, ModuleSpec, SubsetIndex};
use crate::C64;
use nalgebra::DMatrix;

/// Action matrices `mats[j][δ]` of `z̄_δ` on module factor `j` (column = input basis vector).
#[derive(Debug, Clone)]
pub struct FactorActions {
    pub mats: Vec<Vec<DMatrix<C64>>>,
}

/// Matrix of `ψ ↦ i_{z̄_δ} op(ψ)` on `Λ^{k,0}`.
fn wedge_factor_matrix(
    alg: &LieAlgebra,
    k: usize,
    delta: usize,
    op: &dyn Fn(&SparseForm) -> SparseForm,
) -> DMatrix<C64> {
    let n = alg.n();
    let basis = subsets(n, k);
    let mut m = DMatrix::zeros(basis.len(), basis.len());
    for (col, &mask) in basis.iter().enumerate() {
        let image = interior_basis(n + delta, &op(&SparseForm::scalar(mask, C64::new(1.0, 0.0))));
        for (&(mm, _), &c) in &image.terms {
            if mm >> n == 0 && mm.count_ones() as usize == k {
                m[(SubsetIndex::rank(n, mm), col)] += c;
            }
        }
    }
    m
}

impl FactorActions {
    /// Undeformed action: `z̄_δ·z_α = [z̄_δ, z_α]^{1,0}` on `T`, `i_{z̄_δ}∂̄` on wedge factors.
    pub fn standard(alg: &LieAlgebra, module: &ModuleSpec) -> Self {
        let n = alg.n();
        let delbar = |f: &SparseForm| apply_diff(alg, f, Diff::Delbar);
        let mats = module
            .factors()
            .iter()
            .map(|f| {
                (0..n)
                    .map(|delta| match f {
                        Factor::T => DMatrix::from_fn(n, n, |g, a| alg.c(n + delta, a, g)),
                        Factor::TDual => wedge_factor_matrix(alg, 1, delta, &delbar),
                        Factor::Wedge(k) => wedge_factor_matrix(alg, *k, delta, &delbar),
                    })
                    .collect()
            })
            .collect();
        Self { mats }
    }

    /// Deformation terms: `i_{z̄_δ}[φ, X]` on `T`, `i_{z̄_δ} L^{1,0}_φ` on wedge factors.
    pub fn deformation(alg: &LieAlgebra, module: &ModuleSpec, phi: &SparseForm) -> Self {
        let n = alg.n();
        let lie = |f: &SparseForm| lie_derivative(alg, phi, f, Diff::Del);
        let tangent = module.factors().contains(&Factor::T).then(|| {
            let mut mats = vec![DMatrix::zeros(n, n); n];
            for a in 0..n {
                let x = SparseForm::single(0, a as u32, C64::new(1.0, 0.0));
                for (&(mask, g), &c) in &fn_bracket_sparse(alg, phi, &x).terms {
                    if mask.count_ones() == 1 && mask >> n != 0 && (g as usize) < n {
                        let delta = (mask >> n).trailing_zeros() as usize;
                        mats[delta][(g as usize, a)] += c;
                    }
                }
            }
            mats
        });
        let mats = module
            .factors()
            .iter()
            .map(|f| match f {
                Factor::T => tangent.clone().expect("tangent factor present"),
                Factor::TDual => (0..n).map(|d| wedge_factor_matrix(alg, 1, d, &lie)).collect(),
                Factor::Wedge(k) => (0..n).map(|d| wedge_factor_matrix(alg, *k, d, &lie)).collect(),
            })
            .collect();
        Self { mats }
    }

    /// Adds `Σ_j (−1)^{|ω| + deg e_1 + … + deg e_{j−1}} Σ_δ (ω ∧ z̄^δ) ⊗ … ⊗ A_δ e_j ⊗ …`.
    pub fn apply_into(&self, alg: &LieAlgebra, module: &ModuleSpec, f: &SparseForm, out: &mut SparseForm) {
        let n = alg.n();
        let factors = module.factors();
        for (&(m, slot), &c) in &f.terms {
            let parts = module.split_index(n, slot as usize);
            let mut koszul = m.count_ones() as usize;
            for (j, fac) in factors.iter().enumerate() {
                let sign = if koszul % 2 == 0 { 1.0 } else { -1.0 };
                for (delta, mat) in self.mats[j].iter().enumerate() {
                    let bit = 1u32 << (n + delta);
                    let Some(ws) = wedge_sign(m, bit) else { continue };
                    let col = parts[j];
                    for row in 0..mat.nrows() {
                        let v = mat[(row, col)];
                        if v == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut np = parts.clone();
                        np[j] = row;
                        out.add(m | bit, module.join_index(n, &np) as u32, c * v * ws * sign);
                    }
                }
                koszul += fac.degree();
            }
        }
    }
}

/// `∂̄` on `Λ^{p,q} ⊗ 𝔈`.
#[derive(Debug, Clone)]
pub struct ModuleDelbar<'a> {
    alg: &'a LieAlgebra,
    module: ModuleSpec,
    actions: FactorActions,
}

impl<'a> ModuleDelbar<'a> {
    pub fn new(alg: &'a LieAlgebra, module: &ModuleSpec) -> Self {
        Self {
            alg,
            module: module.clone(),
            actions: FactorActions::standard(alg, module),
        }
    }

    pub fn apply(&self, f: &SparseForm) -> SparseForm {
        let mut out = apply_diff(self.alg, f, Diff::Delbar);
        self.actions.apply_into(self.alg, &self.module, f, &mut out);
        out
    }
}

/// `⟨φ|` on `Λ^{p,q} ⊗ 𝔈`: `L^{1,0}_φ` on the form slot plus the deformation
/// terms on each module factor.
#[derive(Debug, Clone)]
pub struct PhiAction<'a> {
    alg: &'a LieAlgebra,
    module: ModuleSpec,
    phi: SparseForm,
    actions: FactorActions,
}

impl<'a> PhiAction<'a> {
    pub fn new(alg: &'a LieAlgebra, module: &ModuleSpec, phi: &SparseForm) -> Self {
        Self {
            alg,
            module: module.clone(),
            phi: phi.clone(),
            actions: FactorActions::deformation(alg, module, phi),
        }
    }

    pub fn apply(&self, f: &SparseForm) -> SparseForm {
        let mut out = lie_derivative(self.alg, &self.phi, f, Diff::Del);
        self.actions.apply_into(self.alg, &self.module, f, &mut out);
        out
    }
}
