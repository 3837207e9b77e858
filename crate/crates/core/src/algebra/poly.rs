use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::C64;
use nalgebra::DVector;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, t: &[C64]) -> C64 {
        let mut v = C64::new(1.0, 0.0);
        for (x, &e) in t.iter().zip(&self.0) {
            if e > 0 {
                v *= x.powu(e as u32);
            }
        }
        v
    }

    /// Human-readable form using the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Scalar polynomial in `nvars` complex variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyScalar {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, C64>,
}

#[derive(Serialize)]
struct TermJson<'a> {
    exponents: &'a [u16],
    re: f64,
    im: f64,
}

impl PolyScalar {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C64) {
        *self.terms.entry(m).or_insert(C64::new(0.0, 0.0)) += c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| *c == C64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops terms with `|c| ≤ rel · max|c|` and exact zeros.
    pub fn pruned(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > cut && c.norm() > 0.0)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Drops terms with `|c| ≤ abs`.
    pub fn pruned_abs(&self, abs: f64) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > abs)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    pub fn eval(&self, t: &[C64]) -> C64 {
        self.terms.iter().map(|(m, c)| c * m.eval(t)).sum()
    }

    pub fn add(&self, other: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> PolyScalar {
        PolyScalar {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().filter(|(_, c)| c.norm() > 0.0).map(|(m, _)| m.degree()).max()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                exponents: &m.0,
                re: c.re,
                im: c.im,
            })
            .collect();
        serde_json::to_value(terms).expect("polynomial serializes")
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("({:+.6e}{:+.6e}i)*{}", c.re, c.im, m.render(names)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Truncated polynomial with vector coefficients: `Σ_m c_m t^m`, degree ≤ `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyForm {
    pub nvars: usize,
    pub order: usize,
    pub dim: usize,
    pub terms: BTreeMap<Monomial, DVector<C64>>,
}

impl PolyForm {
    pub fn zero(nvars: usize, order: usize, dim: usize) -> Self {
        Self {
            nvars,
            order,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `c · m`, ignoring monomials beyond the truncation order.
    pub fn add_term(&mut self, m: Monomial, c: &DVector<C64>) {
        if m.degree() > self.order {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => *v += c,
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn homogeneous(&self, k: usize) -> impl Iterator<Item = (&Monomial, &DVector<C64>)> {
        self.terms.iter().filter(move |(m, _)| m.degree() == k)
    }

    /// Homogeneous part of degree `k` as its own polynomial.
    pub fn degree_part(&self, k: usize) -> PolyForm {
        PolyForm {
            nvars: self.nvars,
            order: self.order,
            dim: self.dim,
            terms: self.homogeneous(k).map(|(m, v)| (m.clone(), v.clone())).collect(),
        }
    }

    /// Largest coefficient norm among degree-`k` terms.
    pub fn degree_norm(&self, k: usize) -> f64 {
        self.homogeneous(k).map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, t: &[C64]) -> Result<DVector<C64>> {
        if t.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "{} parameters given, family has {}",
                t.len(),
                self.nvars
            )));
        }
        let mut out = DVector::zeros(self.dim);
        for (m, v) in &self.terms {
            out += v * m.eval(t);
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm> {
        if self.dim != other.dim || self.nvars != other.nvars {
            return Err(Error::ShapeMismatch("polynomial shapes differ".into()));
        }
        let mut out = self.clone();
        out.order = self.order.max(other.order);
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> PolyForm {
        PolyForm {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * s)).collect(),
            ..self.clone()
        }
    }

    /// Applies a linear map coefficient-wise.
    pub fn map_linear(&self, m: &nalgebra::DMatrix<C64>) -> PolyForm {
        PolyForm {
            nvars: self.nvars,
            order: self.order,
            dim: m.nrows(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), m * v)).collect(),
        }
    }

    /// Drops terms with coefficient norm `≤ abs`.
    pub fn pruned(&self, abs: f64) -> PolyForm {
        PolyForm {
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| v.norm() > abs)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
            ..self.clone()
        }
    }

    /// Scalar polynomial of one coordinate functional `c ↦ ⟨w, c⟩ = w^* c`.
    pub fn functional(&self, w: &DVector<C64>) -> PolyScalar {
        let mut p = PolyScalar::zero(self.nvars);
        for (m, v) in &self.terms {
            p.add_term(m.clone(), w.dotc(v));
        }
        p
    }

    /// Degree-`k` part of `B(a, b)` for a bilinear `B`, over all term pairs
    /// whose degrees add to `k`. Work on the left factor's terms is spread
    /// according to `exec`; partial sums are merged in term order.
    pub fn bilinear_degree<F>(
        a: &PolyForm,
        b: &PolyForm,
        k: usize,
        out_dim: usize,
        exec: Exec,
        f: F,
    ) -> BTreeMap<Monomial, DVector<C64>>
    where
        F: Fn(&DVector<C64>, &DVector<C64>) -> DVector<C64> + Sync + Send,
    {
        let left: Vec<(&Monomial, &DVector<C64>)> = a.terms.iter().filter(|(m, _)| m.degree() <= k).collect();
        let partial = par::map(exec, &left, |(ma, va)| {
            let da = ma.degree();
            let mut acc: Vec<(Monomial, DVector<C64>)> = Vec::new();
            for (mb, vb) in b.homogeneous(k - da) {
                let v = f(va, vb);
                debug_assert_eq!(v.len(), out_dim);
                acc.push((ma.mul(mb), v));
            }
            acc
        });
        let mut out: BTreeMap<Monomial, DVector<C64>> = BTreeMap::new();
        for chunk in partial {
            for (m, v) in chunk {
                match out.get_mut(&m) {
                    Some(x) => *x += &v,
                    None => {
                        out.insert(m, v);
                    }
                }
            }
        }
        out
    }
}
