use crate::C64;
use std::collections::BTreeMap;

/// Sparse element of `∧𝔤_ℂ* ⊗ V`, keyed by `(generator mask, slot)`.
///
/// The mask lists the covectors `g^a` in increasing order. The slot indexes a
/// basis of `V`: a module index for module-valued forms, a frame index for
/// vector-valued forms, always 0 for scalar forms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseForm {
    pub terms: BTreeMap<(u32, u32), C64>,
}

impl SparseForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(mask: u32, slot: u32, c: C64) -> Self {
        let mut f = Self::new();
        f.add(mask, slot, c);
        f
    }

    pub fn scalar(mask: u32, c: C64) -> Self {
        Self::single(mask, 0, c)
    }

    #[inline]
    pub fn add(&mut self, mask: u32, slot: u32, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry((mask, slot)).or_insert(C64::new(0.0, 0.0)) += c;
    }

    pub fn add_form(&mut self, other: &SparseForm, s: C64) {
        for (&(m, k), &c) in &other.terms {
            self.add(m, k, c * s);
        }
    }

    pub fn scaled(&self, s: C64) -> SparseForm {
        let mut out = SparseForm::new();
        out.add_form(self, s);
        out
    }

    pub fn sub(&self, other: &SparseForm) -> SparseForm {
        let mut out = self.clone();
        out.add_form(other, C64::new(-1.0, 0.0));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms of form degree `k`.
    pub fn degree_part(&self, k: u32) -> SparseForm {
        SparseForm {
            terms: self
                .terms
                .iter()
                .filter(|((m, _), _)| m.count_ones() == k)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// Distinct form degrees present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|(m, _)| m.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Same terms with the slot replaced.
    pub fn with_slot(&self, slot: u32) -> SparseForm {
        let mut out = SparseForm::new();
        for (&(m, _), &c) in &self.terms {
            out.add(m, slot, c);
        }
        out
    }
}

/// Sign of `g^A ∧ g^B` relative to the sorted monomial, `None` if they overlap.
#[inline]
pub fn wedge_sign(a: u32, b: u32) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> j).count_ones();
    }
    Some(if inversions % 2 == 0 { 1.0 } else { -1.0 })
}

/// `i_{g_k} g^A`: returns the remaining mask and sign.
#[inline]
pub fn interior_sign(mask: u32, k: usize) -> Option<(u32, f64)> {
    let bit = 1u32 << k;
    if mask & bit == 0 {
        return None;
    }
    let before = (mask & (bit - 1)).count_ones();
    Some((mask ^ bit, if before % 2 == 0 { 1.0 } else { -1.0 }))
}

/// Wedge of a scalar form (slot ignored) with a slotted form.
pub fn wedge(a: &SparseForm, b: &SparseForm) -> SparseForm {
    let mut out = SparseForm::new();
    for (&(ma, _), &ca) in &a.terms {
        for (&(mb, sb), &cb) in &b.terms {
            if let Some(s) = wedge_sign(ma, mb) {
                out.add(ma | mb, sb, ca * cb * s);
            }
        }
    }
    out
}

/// Wedge of a slotted form with a scalar form (slot of the left factor kept).
pub fn wedge_right(a: &SparseForm, b: &SparseForm) -> SparseForm {
    let mut out = SparseForm::new();
    for (&(ma, sa), &ca) in &a.terms {
        for (&(mb, _), &cb) in &b.terms {
            if let Some(s) = wedge_sign(ma, mb) {
                out.add(ma | mb, sa, ca * cb * s);
            }
        }
    }
    out
}

/// `i_X` for a vector `X` in frame coordinates.
pub fn interior(x: &[C64], f: &SparseForm) -> SparseForm {
    let mut out = SparseForm::new();
    for (&(m, slot), &c) in &f.terms {
        let mut rest = m;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if x[k] == C64::new(0.0, 0.0) {
                continue;
            }
            let (mm, s) = interior_sign(m, k).expect("bit present");
            out.add(mm, slot, c * x[k] * s);
        }
    }
    out
}

/// `i_{g_k}` on a form.
pub fn interior_basis(k: usize, f: &SparseForm) -> SparseForm {
    let mut out = SparseForm::new();
    for (&(m, slot), &c) in &f.terms {
        if let Some((mm, s)) = interior_sign(m, k) {
            out.add(mm, slot, c * s);
        }
    }
    out
}
