use super::module::{Factor, ModuleSpec};
use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DVector;
use std::fmt;

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All `k`-subsets of `0..n` as bitmasks, lexicographic in the increasing sequence.
pub fn subsets(n: usize, k: usize) -> Vec<u32> {
    (0..binomial(n, k)).map(|r| SubsetIndex::unrank(n, k, r)).collect()
}

/// Lexicographic ranking of subsets of `0..n`.
pub struct SubsetIndex;

impl SubsetIndex {
    pub fn rank(n: usize, mask: u32) -> usize {
        let k = mask.count_ones() as usize;
        let mut rank = 0;
        let mut next = 0;
        let mut i = 0;
        for a in 0..n {
            if mask & (1 << a) == 0 {
                continue;
            }
            for j in next..a {
                rank += binomial(n - 1 - j, k - 1 - i);
            }
            next = a + 1;
            i += 1;
        }
        rank
    }

    pub fn unrank(n: usize, k: usize, mut rank: usize) -> u32 {
        let mut mask = 0u32;
        let mut next = 0;
        for i in 0..k {
            let mut a = next;
            loop {
                let c = binomial(n - 1 - a, k - 1 - i);
                if rank < c {
                    break;
                }
                rank -= c;
                a += 1;
            }
            mask |= 1 << a;
            next = a + 1;
        }
        mask
    }
}

pub(crate) fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn indices_mask(idx: &[usize]) -> u32 {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

/// Basis index within one module factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FactorIndex {
    Vector(usize),
    Covector(usize),
    Wedge(Vec<usize>),
}

/// Canonical basis element `z^J ∧ z̄^I ⊗ e_1 ⊗ … ⊗ e_m` (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct BasisLabel {
    pub one_zero: Vec<usize>,
    pub zero_one: Vec<usize>,
    pub module: Vec<FactorIndex>,
}

fn fmt_set(idx: &[usize]) -> String {
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("")
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut form = Vec::new();
        if !self.one_zero.is_empty() {
            form.push(format!("z^{}", fmt_set(&self.one_zero)));
        }
        if !self.zero_one.is_empty() {
            form.push(format!("zb^{}", fmt_set(&self.zero_one)));
        }
        parts.push(if form.is_empty() { "1".to_string() } else { form.join("∧") });
        for m in &self.module {
            parts.push(match m {
                FactorIndex::Vector(a) => format!("z_{}", a + 1),
                FactorIndex::Covector(a) => format!("z^{}", a + 1),
                FactorIndex::Wedge(s) if s.is_empty() => "1".to_string(),
                FactorIndex::Wedge(s) => format!("z^{}", fmt_set(s)),
            });
        }
        write!(f, "{}", parts.join("⊗"))
    }
}

/// The space `Λ^{p,q} ⊗ 𝔈` with its canonical ordered basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormSpace {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub module: ModuleSpec,
}

impl FormSpace {
    pub fn new(n: usize, p: usize, q: usize, module: ModuleSpec) -> Result<Self> {
        if p > n || q > n {
            return Err(Error::BidegreeOutOfRange { p, q, n });
        }
        module.check(n)?;
        Ok(Self { n, p, q, module })
    }

    /// Space with possibly out-of-range degrees, which then has dimension zero.
    pub fn new_unchecked(n: usize, p: usize, q: usize, module: ModuleSpec) -> Self {
        Self { n, p, q, module }
    }

    pub fn with_q(&self, q: usize) -> Self {
        Self::new_unchecked(self.n, self.p, q, self.module.clone())
    }

    pub fn with_p(&self, p: usize) -> Self {
        Self::new_unchecked(self.n, p, self.q, self.module.clone())
    }

    pub fn module_dim(&self) -> usize {
        self.module.dim(self.n)
    }

    pub fn dim(&self) -> usize {
        binomial(self.n, self.p) * binomial(self.n, self.q) * self.module_dim()
    }

    /// Total form degree of the form slot.
    pub fn form_degree(&self) -> usize {
        self.p + self.q
    }

    /// `(J mask, I mask, module index)` of basis element `i`.
    pub fn parts(&self, i: usize) -> (u32, u32, usize) {
        let me = self.module_dim();
        let cq = binomial(self.n, self.q);
        let m = i % me;
        let rest = i / me;
        let iq = rest % cq;
        let ip = rest / cq;
        (
            SubsetIndex::unrank(self.n, self.p, ip),
            SubsetIndex::unrank(self.n, self.q, iq),
            m,
        )
    }

    /// Mask over all `2n` generators (`J | I << n`) and module index.
    pub fn full_parts(&self, i: usize) -> (u32, usize) {
        let (j, k, m) = self.parts(i);
        (j | (k << self.n), m)
    }

    pub fn index_of_parts(&self, jmask: u32, imask: u32, m: usize) -> Option<usize> {
        if jmask.count_ones() as usize != self.p
            || imask.count_ones() as usize != self.q
            || m >= self.module_dim()
            || jmask >> self.n != 0
            || imask >> self.n != 0
        {
            return None;
        }
        let ip = SubsetIndex::rank(self.n, jmask);
        let iq = SubsetIndex::rank(self.n, imask);
        Some((ip * binomial(self.n, self.q) + iq) * self.module_dim() + m)
    }

    /// Index for a full mask over `2n` generators.
    pub fn index_of_full(&self, mask: u32, m: usize) -> Option<usize> {
        let low = (1u32 << self.n) - 1;
        self.index_of_parts(mask & low, mask >> self.n, m)
    }

    pub fn label(&self, i: usize) -> BasisLabel {
        let (j, k, m) = self.parts(i);
        let n = self.n;
        let module = self
            .module
            .factors()
            .iter()
            .zip(self.module.split_index(n, m))
            .map(|(f, x)| match f {
                Factor::T => FactorIndex::Vector(x),
                Factor::TDual => FactorIndex::Covector(x),
                Factor::Wedge(kk) => FactorIndex::Wedge(mask_indices(SubsetIndex::unrank(n, *kk, x))),
            })
            .collect();
        BasisLabel {
            one_zero: mask_indices(j),
            zero_one: mask_indices(k),
            module,
        }
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        let n = self.n;
        if label.one_zero.iter().chain(&label.zero_one).any(|&i| i >= n) {
            return None;
        }
        if label.module.len() != self.module.factors().len() {
            return None;
        }
        let mut parts = Vec::with_capacity(label.module.len());
        for (f, x) in self.module.factors().iter().zip(&label.module) {
            let v = match (f, x) {
                (Factor::T, FactorIndex::Vector(a)) | (Factor::TDual, FactorIndex::Covector(a)) if *a < n => *a,
                (Factor::Wedge(k), FactorIndex::Wedge(s)) if s.len() == *k && s.iter().all(|&a| a < n) => {
                    let mask = indices_mask(s);
                    if mask.count_ones() as usize != *k {
                        return None;
                    }
                    SubsetIndex::rank(n, mask)
                }
                _ => return None,
            };
            parts.push(v);
        }
        let m = self.module.join_index(n, &parts);
        self.index_of_parts(indices_mask(&label.one_zero), indices_mask(&label.zero_one), m)
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }
}

impl fmt::Display for FormSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{{{},{}}}⊗{}", self.p, self.q, self.module)
    }
}

/// Element of a [`FormSpace`] in canonical coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    pub space: FormSpace,
    pub coeffs: DVector<C64>,
}

impl Form {
    pub fn zeros(space: FormSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            coeffs: DVector::zeros(d),
        }
    }

    pub fn basis(space: FormSpace, i: usize) -> Self {
        let mut f = Self::zeros(space);
        f.coeffs[i] = C64::new(1.0, 0.0);
        f
    }

    pub fn from_coeffs(space: FormSpace, coeffs: DVector<C64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                space.dim()
            )));
        }
        Ok(Self { space, coeffs })
    }

    /// Euclidean coefficient norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.same_space(other)?;
        Ok(Form {
            space: self.space.clone(),
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.same_space(other)?;
        Ok(Form {
            space: self.space.clone(),
            coeffs: &self.coeffs - &other.coeffs,
        })
    }

    pub fn scale(&self, s: C64) -> Form {
        Form {
            space: self.space.clone(),
            coeffs: &self.coeffs * s,
        }
    }

    fn same_space(&self, other: &Form) -> Result<()> {
        if self.space != other.space {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.space, other.space)));
        }
        Ok(())
    }

    /// Nonzero terms as `(label, coefficient)`.
    pub fn terms(&self, tol: f64) -> Vec<(BasisLabel, C64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(i, c)| (self.space.label(i), *c))
            .collect()
    }

    /// Complex conjugate `Λ^{p,q} → Λ^{q,p}`, trivial module only.
    ///
    /// Uses `conj(z^J ∧ z̄^I) = (-1)^{pq} z^I ∧ z̄^J` in a frame where conjugation
    /// swaps `z^α` and `z̄^α`.
    pub fn conjugate(&self) -> Result<Form> {
        if !self.space.module.is_trivial() {
            return Err(Error::ModuleNotSelfConjugate);
        }
        let s = &self.space;
        let target = FormSpace::new_unchecked(s.n, s.q, s.p, ModuleSpec::trivial());
        let sign = if (s.p * s.q) % 2 == 1 { -1.0 } else { 1.0 };
        let mut out = Form::zeros(target.clone());
        for i in 0..s.dim() {
            let (j, k, _) = s.parts(i);
            let t = target.index_of_parts(k, j, 0).expect("conjugate index");
            out.coeffs[t] = self.coeffs[i].conj() * sign;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        let s = subsets(4, 2);
        let seqs: Vec<Vec<usize>> = s.iter().map(|&m| mask_indices(m)).collect();
        assert_eq!(
            seqs,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        for (r, &m) in s.iter().enumerate() {
            assert_eq!(SubsetIndex::rank(4, m), r);
        }
    }

    #[test]
    fn dimension_counts() {
        let sp = FormSpace::new(3, 1, 1, ModuleSpec::trivial()).unwrap();
        assert_eq!(sp.dim(), 9);
        let sp = FormSpace::new(3, 0, 2, ModuleSpec::tangent()).unwrap();
        assert_eq!(sp.dim(), 9);
        assert!(FormSpace::new(2, 3, 0, ModuleSpec::trivial()).is_err());
    }

    #[test]
    fn conjugate_of_pure_form() {
        let sp = FormSpace::new(2, 0, 2, ModuleSpec::trivial()).unwrap();
        let f = Form::basis(sp, 0).scale(C64::new(0.0, 1.0));
        let g = f.conjugate().unwrap();
        assert_eq!(g.space.p, 2);
        assert_eq!(g.coeffs[0], C64::new(0.0, -1.0));
    }
}
