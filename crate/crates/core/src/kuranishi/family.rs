use super::bilinear::{bracket_norm_constant, Bilinear, NormConstant};
use crate::algebra::{Form, FormSpace, LieAlgebra, Monomial, ModuleSpec, PolyForm, PolyScalar};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::spectral::{harmonic_space_of, DelbarPair, HarmonicSpace};
use crate::C64;
use nalgebra::DVector;

/// Coefficients below this norm are dropped while running the recursion.
const RECURSION_FLOOR: f64 = 1e-14;
/// Obstruction coefficients below `OBSTRUCTION_REL · max(1, largest)` are dropped.
pub const OBSTRUCTION_REL: f64 = 1e-12;
/// Degree parts below this norm count as vanishing for the exactness flag.
pub const EXACT_TOL: f64 = 1e-12;

/// Options for [`kuranishi_family`].
#[derive(Debug, Clone, Copy)]
pub struct FamilyOptions {
    pub order: usize,
    pub rel_tol: Option<f64>,
    pub exec: Exec,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            order: 6,
            rel_tol: None,
            exec: Exec::default(),
        }
    }
}

/// Truncated Kuranishi family `φ(t) = Σ_k φ_k(t)` with its obstruction.
#[derive(Debug, Clone)]
pub struct KuranishiFamily {
    pub order: usize,
    /// Harmonic basis `η_1..η_r` of `ℋ^{0,1}(T)`.
    pub eta: HarmonicSpace,
    /// Harmonic basis of `ℋ^{0,2}(T)`.
    pub eta2: HarmonicSpace,
    pub param_names: Vec<String>,
    /// `φ(t)` in `Λ^{0,1}⊗T`, degrees `1..=order`.
    pub phi: PolyForm,
    /// `⟨η^{(2)}_μ, [φ(t), φ(t)]⟩` through degree `order + 1`, one per harmonic class.
    pub obstruction: Vec<PolyScalar>,
    pub exact: bool,
    /// Largest coefficient norm of `φ_k`, `k = 1..=order`.
    pub degree_norms: Vec<f64>,
    pub bracket_constant: NormConstant,
    /// Operator norm of `∂̄† : Λ^{0,2}⊗T → Λ^{0,1}⊗T`.
    pub dbar_dagger_norm: f64,
    /// `∂̄ : Λ^{0,1}⊗T → Λ^{0,2}⊗T` and neighbours, with pseudo-inverses.
    pub pair1: DelbarPair,
    pub bracket: Bilinear,
}

impl KuranishiFamily {
    pub fn r(&self) -> usize {
        self.eta.dim()
    }

    pub fn space(&self) -> &FormSpace {
        &self.eta.space
    }

    /// `φ(t)` as a form.
    pub fn eval(&self, t: &[C64]) -> Result<Form> {
        Form::from_coeffs(self.space().clone(), self.phi.eval(t)?)
    }

    /// Obstruction polynomials that are not identically zero.
    pub fn nonzero_obstructions(&self) -> Vec<(usize, &PolyScalar)> {
        self.obstruction.iter().enumerate().filter(|(_, p)| !p.terms.is_empty()).collect()
    }

    /// Largest obstruction value at `t`.
    pub fn obstruction_at(&self, t: &[C64]) -> f64 {
        self.obstruction.iter().map(|p| p.eval(t).norm()).fold(0.0, f64::max)
    }

    /// Resolves a parameter name (`t3` by position or `t_23` by label) to its index.
    pub fn param_index(&self, name: &str) -> Option<usize> {
        let key = name.trim().replace(['{', '}'], "");
        if let Some(i) = self.param_names.iter().position(|p| p.replace(['{', '}'], "") == key) {
            return Some(i);
        }
        let rest = key.strip_prefix('t')?;
        if rest.starts_with('_') {
            return None;
        }
        let k: usize = rest.parse().ok()?;
        (1..=self.r()).contains(&k).then(|| k - 1)
    }
}

/// Labels `t_{iλ}` when `η_ν = z̄^λ ⊗ z_i`, otherwise `s_ν`.
fn parameter_names(eta: &HarmonicSpace) -> Vec<String> {
    let n = eta.space.n;
    (0..eta.dim())
        .map(|nu| match eta.canonical_index(nu) {
            Some(ci) => format!("t_{}{}", ci % n + 1, ci / n + 1),
            None => format!("s_{}", nu + 1),
        })
        .collect()
}

/// Runs `φ_1 = Σ η_ν t_ν`, `φ_k = ½ ∂̄† Σ_{j=1}^{k−1} [φ_j, φ_{k−j}]`.
pub fn kuranishi_family(alg: &LieAlgebra, opts: FamilyOptions) -> Result<KuranishiFamily> {
    if opts.order == 0 {
        return Err(Error::Parse("order must be at least 1".into()));
    }
    let n = alg.n();
    let exec = opts.exec;
    let s1 = FormSpace::new(n, 0, 1, ModuleSpec::tangent())?;
    let s2 = s1.with_q(2);
    let eta = harmonic_space_of(alg, &s1, opts.rel_tol, exec)?;
    let eta2 = harmonic_space_of(alg, &s2, opts.rel_tol, exec)?;
    let pair1 = DelbarPair::new(alg, &s1, opts.rel_tol, exec)?;
    // pair1.outgoing is ∂̄ : Λ^{0,1}⊗T → Λ^{0,2}⊗T; its pseudo-inverse is ∂̄†.
    let dagger = pair1.outgoing_pinv.pinv.clone();
    let bracket = Bilinear::fn_bracket(alg, &s1, &s1, exec);
    let r = eta.dim();
    let k_max = opts.order;
    let param_names = parameter_names(&eta);

    let mut phi = PolyForm::zero(r, k_max, s1.dim());
    for (nu, b) in eta.basis.iter().enumerate() {
        phi.add_term(Monomial::var(r, nu), &b.coeffs);
    }
    let half = C64::new(0.5, 0.0);
    for k in 2..=k_max {
        let s = PolyForm::bilinear_degree(&phi, &phi, k, s2.dim(), exec, |u, v| bracket.apply(u, v));
        for (m, v) in s {
            let c = &dagger * v * half;
            if c.norm() > RECURSION_FLOOR {
                phi.add_term(m, &c);
            }
        }
    }

    let mut sq = PolyForm::zero(r, k_max + 1, s2.dim());
    for k in 2..=k_max + 1 {
        for (m, v) in PolyForm::bilinear_degree(&phi, &phi, k, s2.dim(), exec, |u, v| bracket.apply(u, v)) {
            sq.add_term(m, &v);
        }
    }
    let raw: Vec<PolyScalar> = eta2.functionals().iter().map(|w| sq.functional(w)).collect();
    let largest = raw.iter().map(PolyScalar::max_abs).fold(0.0, f64::max);
    let obstruction = raw
        .iter()
        .map(|p| p.pruned_abs(OBSTRUCTION_REL * largest.max(1.0)))
        .collect();

    let degree_norms: Vec<f64> = (1..=k_max).map(|k| phi.degree_norm(k)).collect();
    let exact = (k_max / 2 + 1..=k_max).all(|k| degree_norms[k - 1] < EXACT_TOL);
    let bracket_constant = bracket_norm_constant(alg, &bracket, &s1);
    let dbar_dagger_norm = pair1
        .outgoing_pinv
        .gap
        .smallest_kept
        .map(|s| 1.0 / s)
        .unwrap_or(0.0);
    Ok(KuranishiFamily {
        order: k_max,
        eta,
        eta2,
        param_names,
        phi,
        obstruction,
        exact,
        degree_norms,
        bracket_constant,
        dbar_dagger_norm,
        pair1,
        bracket,
    })
}

/// `∂̄φ(t) − ½[φ(t), φ(t)]` through the family's order.
pub fn mc_residual(fam: &KuranishiFamily) -> PolyForm {
    let s2dim = fam.eta2.space.dim();
    let dbar = &fam.pair1.outgoing.matrix;
    let mut out = fam.phi.map_linear(dbar);
    out.order = fam.order;
    let half = C64::new(-0.5, 0.0);
    for k in 2..=fam.order {
        for (m, v) in PolyForm::bilinear_degree(&fam.phi, &fam.phi, k, s2dim, Exec::default(), |u, v| fam.bracket.apply(u, v)) {
            out.add_term(m, &(v * half));
        }
    }
    out
}

/// Evaluates `∂̄ψ − ½[ψ, ψ]` for a single form.
pub fn mc_defect(fam: &KuranishiFamily, psi: &DVector<C64>) -> DVector<C64> {
    &fam.pair1.outgoing.matrix * psi - fam.bracket.apply(psi, psi) * C64::new(0.5, 0.0)
}

/// Solves `φ = Σ η_ν t_ν + ½ ∂̄†[φ, φ]` at numeric `t` by fixed-point iteration from `init`.
pub fn solve_fixed_point(fam: &KuranishiFamily, t: &[C64], init: &DVector<C64>, max_iter: usize) -> Result<DVector<C64>> {
    if t.len() != fam.r() {
        return Err(Error::ShapeMismatch(format!("{} parameters for r = {}", t.len(), fam.r())));
    }
    let mut lin = DVector::zeros(fam.space().dim());
    for (b, &tv) in fam.eta.basis.iter().zip(t) {
        lin += &b.coeffs * tv;
    }
    let dagger = &fam.pair1.outgoing_pinv.pinv;
    let mut phi = init.clone();
    for _ in 0..max_iter {
        let next = &lin + dagger * fam.bracket.apply(&phi, &phi) * C64::new(0.5, 0.0);
        let step = (&next - &phi).norm();
        phi = next;
        if !step.is_finite() {
            return Err(Error::NonFinite("fixed-point iteration".into()));
        }
        if step <= 1e-15 * (1.0 + phi.norm()) {
            return Ok(phi);
        }
    }
    Err(Error::NoConvergence((dagger * fam.bracket.apply(&phi, &phi) * C64::new(0.5, 0.0) + &lin - &phi).norm()))
}
