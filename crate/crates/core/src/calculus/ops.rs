use super::sparse::{interior_basis, interior_sign, wedge_sign, SparseForm};
use crate::algebra::LieAlgebra;
use crate::C64;

/// Which exterior differential to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diff {
    D,
    Del,
    Delbar,
}

#[inline]
fn bidegree(n: usize, m: u32) -> (u32, u32) {
    let low = (1u32 << n) - 1;
    ((m & low).count_ones(), (m >> n).count_ones())
}

/// `d g^M` for one monomial, from `dg^c = -Σ_{a<b} C^c_{ab} g^a ∧ g^b`.
pub fn d_monomial(alg: &LieAlgebra, m: u32) -> SparseForm {
    let mut out = SparseForm::new();
    for &(a, b, c, v) in alg.nonzero_constants() {
        if a >= b {
            continue;
        }
        let Some((rest, s1)) = interior_sign(m, c) else { continue };
        let ab = (1u32 << a) | (1u32 << b);
        if let Some(s2) = wedge_sign(ab, rest) {
            out.add(ab | rest, 0, -v * s1 * s2);
        }
    }
    out
}

/// Applies `d`, `∂` or `∂̄` to the form part; slots are passive.
pub fn apply_diff(alg: &LieAlgebra, f: &SparseForm, which: Diff) -> SparseForm {
    let n = alg.n();
    let mut out = SparseForm::new();
    for (&(m, slot), &c) in &f.terms {
        let (p, q) = bidegree(n, m);
        for (&(mm, _), &v) in &d_monomial(alg, m).terms {
            let keep = match which {
                Diff::D => true,
                Diff::Del => bidegree(n, mm) == (p + 1, q),
                Diff::Delbar => bidegree(n, mm) == (p, q + 1),
            };
            if keep {
                out.add(mm, slot, c * v);
            }
        }
    }
    out
}

/// `i_K f = Σ K_{M,a} g^M ∧ i_{g_a} f` for a vector-valued form `K`
/// (slot = frame index); the result keeps the slots of `f`.
pub fn contract(k: &SparseForm, f: &SparseForm) -> SparseForm {
    let mut out = SparseForm::new();
    for (&(mk, a), &ck) in &k.terms {
        let inner = interior_basis(a as usize, f);
        for (&(mi, slot), &ci) in &inner.terms {
            if let Some(s) = wedge_sign(mk, mi) {
                out.add(mk | mi, slot, ck * ci * s);
            }
        }
    }
    out
}

/// `L_K = i_K D - (-1)^{k-1} D i_K`, summed over the homogeneous parts of `K`.
pub fn lie_derivative(alg: &LieAlgebra, k: &SparseForm, f: &SparseForm, which: Diff) -> SparseForm {
    let mut out = SparseForm::new();
    for deg in k.degrees() {
        let kk = k.degree_part(deg);
        let first = contract(&kk, &apply_diff(alg, f, which));
        let second = apply_diff(alg, &contract(&kk, f), which);
        let sign = if deg % 2 == 1 { -1.0 } else { 1.0 };
        out.add_form(&first, C64::new(1.0, 0.0));
        out.add_form(&second, C64::new(sign, 0.0));
    }
    out
}

/// Vector-valued form `g^M ⊗ [X, Y]` pieces: bracket of frame vectors as a slot expansion.
pub(crate) fn bracket_slots(alg: &LieAlgebra, a: usize, b: usize) -> Vec<(usize, C64)> {
    let d = alg.dim();
    (0..d)
        .map(|c| (c, alg.c(a, b, c)))
        .filter(|(_, v)| *v != C64::new(0.0, 0.0))
        .collect()
}
