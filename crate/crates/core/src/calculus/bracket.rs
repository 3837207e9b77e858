use super::ops::{apply_diff, bracket_slots, Diff};
use super::sparse::{interior_basis, wedge, SparseForm};
use crate::algebra::LieAlgebra;
use crate::C64;
use std::collections::HashMap;

struct MonomialCache<'a> {
    alg: &'a LieAlgebra,
    d: HashMap<u32, SparseForm>,
}

impl<'a> MonomialCache<'a> {
    fn d(&mut self, m: u32) -> SparseForm {
        let alg = self.alg;
        self.d
            .entry(m)
            .or_insert_with(|| apply_diff(alg, &SparseForm::scalar(m, C64::new(1.0, 0.0)), Diff::D))
            .clone()
    }
}

/// `L_X ψ = i_X dψ + d i_X ψ` for a frame vector `X = g_a`.
fn lie_vector(alg: &LieAlgebra, cache: &mut MonomialCache, a: usize, psi: u32) -> SparseForm {
    let mut out = interior_basis(a, &cache.d(psi));
    let inner = interior_basis(a, &SparseForm::scalar(psi, C64::new(1.0, 0.0)));
    out.add_form(&apply_diff(alg, &inner, Diff::D), C64::new(1.0, 0.0));
    out
}

/// Frölicher–Nijenhuis bracket of vector-valued forms (slot = frame index).
///
/// On decomposable terms
/// `[φ⊗X, ψ⊗Y] = φ∧ψ⊗[X,Y] + φ∧L_Xψ⊗Y − L_Yφ∧ψ⊗X
///              + (−1)^k (dφ∧i_Xψ⊗Y + i_Yφ∧dψ⊗X)`, `k = deg φ`.
pub fn fn_bracket_sparse(alg: &LieAlgebra, k: &SparseForm, l: &SparseForm) -> SparseForm {
    let mut cache = MonomialCache {
        alg,
        d: HashMap::new(),
    };
    let one = C64::new(1.0, 0.0);
    let mut out = SparseForm::new();
    for (&(mphi, x), &ck) in &k.terms {
        let deg = mphi.count_ones();
        let sgn = if deg % 2 == 0 { 1.0 } else { -1.0 };
        let phi = SparseForm::scalar(mphi, one);
        let dphi = cache.d(mphi);
        for (&(mpsi, y), &cl) in &l.terms {
            let c = ck * cl;
            let psi = SparseForm::scalar(mpsi, one);
            let (x, y) = (x as usize, y as usize);

            let phipsi = wedge(&phi, &psi);
            for (z, v) in bracket_slots(alg, x, y) {
                out.add_form(&phipsi.with_slot(z as u32), c * v);
            }

            let t2 = wedge(&phi, &lie_vector(alg, &mut cache, x, mpsi));
            out.add_form(&t2.with_slot(y as u32), c);

            let t3 = wedge(&lie_vector(alg, &mut cache, y, mphi), &psi);
            out.add_form(&t3.with_slot(x as u32), -c);

            let t4 = wedge(&dphi, &interior_basis(x, &psi));
            out.add_form(&t4.with_slot(y as u32), c * sgn);

            let dpsi = cache.d(mpsi);
            let t5 = wedge(&interior_basis(y, &phi), &dpsi);
            out.add_form(&t5.with_slot(x as u32), c * sgn);
        }
    }
    out
}
