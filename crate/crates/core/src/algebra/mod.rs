//! Bigraded Lie algebras, module words, bases, forms and polynomial families.

mod basis;
mod file;
mod module;
mod poly;

pub use basis::{binomial, subsets, BasisLabel, FactorIndex, Form, FormSpace, SubsetIndex};
pub use file::{assemble_unvalidated, build_algebra, AlgebraFile, BracketEntry, MetricEntry, TermEntry};
pub use module::{Factor, ModuleSpec};
pub use poly::{Monomial, PolyForm, PolyScalar};

use crate::error::{Error, Result, ValidationKind};
use crate::C64;
use nalgebra::DMatrix;
use std::collections::BTreeMap;

/// Hermitian metric on the frame `g_0..g_{2n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Orthonormal,
    Gram(DMatrix<C64>),
}

/// Outcome of a single structural check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub kind: ValidationKind,
    pub passed: bool,
    pub residual: f64,
    pub witness: String,
}

/// All structural checks, in a fixed order.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_kinds(&self) -> Vec<ValidationKind> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.kind).collect()
    }

    /// Error for the first failing check.
    pub fn first_error(&self) -> Option<Error> {
        self.checks.iter().find(|c| !c.passed).map(|c| Error::Validation {
            kind: c.kind,
            witness: c.witness.clone(),
            residual: c.residual,
        })
    }
}

/// Complex Lie algebra `𝔤_ℂ` of dimension `2n` in a type-split frame.
///
/// Frame indices `0..n` span `𝔤^{1,0}` and `n..2n` span `𝔤^{0,1}`. With a
/// reality structure, conjugation maps `g_a` to `g_{a±n}`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    n: usize,
    names: Vec<String>,
    reality: bool,
    table: Vec<C64>,
    metric: Metric,
    nonzero: Vec<(usize, usize, usize, C64)>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.names == other.names
            && self.reality == other.reality
            && self.table == other.table
            && self.metric == other.metric
    }
}

/// Incremental construction of a [`LieAlgebra`].
///
/// Brackets given for `[x, y]` fill `[y, x]` by antisymmetry unless that
/// orientation was given explicitly. With reality on, a bracket of two
/// generators of the same type also fills its conjugate bracket unless given.
/// Mixed-type conjugates are never inferred.
#[derive(Debug, Clone)]
pub struct AlgebraBuilder {
    n: usize,
    names: Vec<String>,
    reality: bool,
    given: BTreeMap<(usize, usize), Vec<C64>>,
    metric: Metric,
}

impl AlgebraBuilder {
    pub fn new(n: usize) -> Self {
        let mut names: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        names.extend((1..=n).map(|i| format!("zb{i}")));
        Self {
            n,
            names,
            reality: false,
            given: BTreeMap::new(),
            metric: Metric::Orthonormal,
        }
    }

    pub fn names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.names = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn reality(mut self, on: bool) -> Self {
        self.reality = on;
        self
    }

    pub fn metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    /// Sets `[g_x, g_y] = Σ value_c g_c`. Repeated calls for the same pair add.
    pub fn bracket(mut self, x: usize, y: usize, value: &[(usize, C64)]) -> Self {
        let dim = 2 * self.n;
        let entry = self.given.entry((x, y)).or_insert_with(|| vec![C64::new(0.0, 0.0); dim]);
        for &(c, v) in value {
            entry[c] += v;
        }
        self
    }

    /// Assembles the structure constants without validating them.
    pub fn assemble(self) -> Result<LieAlgebra> {
        let n = self.n;
        let dim = 2 * n;
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        if self.names.len() != dim {
            return Err(Error::Parse(format!(
                "expected {dim} generator names, got {}",
                self.names.len()
            )));
        }
        for (&(x, y), v) in &self.given {
            if x >= dim || y >= dim || v.len() != dim {
                return Err(Error::Parse(format!("bracket index ({x},{y}) out of range")));
            }
        }
        if let Metric::Gram(g) = &self.metric {
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::Parse(format!("metric must be {dim}x{dim}")));
            }
        }
        let conj_idx = |a: usize| if a < n { a + n } else { a - n };
        let mut table = vec![C64::new(0.0, 0.0); dim * dim * dim];
        let mut set = vec![false; dim * dim];
        for (&(x, y), v) in &self.given {
            for c in 0..dim {
                table[(x * dim + y) * dim + c] = v[c];
            }
            set[x * dim + y] = true;
        }
        for (&(x, y), v) in &self.given {
            if !set[y * dim + x] {
                for c in 0..dim {
                    table[(y * dim + x) * dim + c] = -v[c];
                }
                set[y * dim + x] = true;
            }
        }
        if self.reality {
            for (&(x, y), v) in &self.given {
                let same_type = (x < n) == (y < n);
                let (cx, cy) = (conj_idx(x), conj_idx(y));
                if !same_type || set[cx * dim + cy] {
                    continue;
                }
                for c in 0..dim {
                    let val = v[c].conj();
                    table[(cx * dim + cy) * dim + conj_idx(c)] = val;
                    table[(cy * dim + cx) * dim + conj_idx(c)] = -val;
                }
                set[cx * dim + cy] = true;
                set[cy * dim + cx] = true;
            }
        }
        Ok(LieAlgebra::from_table(n, self.names, self.reality, table, self.metric))
    }

    /// Assembles and validates.
    pub fn build(self) -> Result<LieAlgebra> {
        let alg = self.assemble()?;
        match alg.validate().first_error() {
            Some(e) => Err(e),
            None => Ok(alg),
        }
    }
}

impl LieAlgebra {
    /// Wraps a dense table `c[(a·2n + b)·2n + c] = C^c_{ab}` as is.
    pub fn from_table(
        n: usize,
        names: Vec<String>,
        reality: bool,
        table: Vec<C64>,
        metric: Metric,
    ) -> Self {
        let dim = 2 * n;
        assert_eq!(table.len(), dim * dim * dim, "structure table has wrong size");
        let mut nonzero = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let v = table[(a * dim + b) * dim + c];
                    if v != C64::new(0.0, 0.0) {
                        nonzero.push((a, b, c, v));
                    }
                }
            }
        }
        Self {
            n,
            names,
            reality,
            table,
            metric,
            nonzero,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_reality(&self) -> bool {
        self.reality
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Structure constant `C^c_{ab}` with `[g_a, g_b] = Σ_c C^c_{ab} g_c`.
    #[inline]
    pub fn c(&self, a: usize, b: usize, c: usize) -> C64 {
        let d = 2 * self.n;
        self.table[(a * d + b) * d + c]
    }

    /// Nonzero structure constants `(a, b, c, C^c_{ab})`.
    pub fn nonzero_constants(&self) -> &[(usize, usize, usize, C64)] {
        &self.nonzero
    }

    pub fn table(&self) -> &[C64] {
        &self.table
    }

    pub fn max_constant(&self) -> f64 {
        self.table.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Index of the conjugate generator.
    #[inline]
    pub fn conj_index(&self, a: usize) -> usize {
        if a < self.n {
            a + self.n
        } else {
            a - self.n
        }
    }

    /// Bracket of two vectors in frame coordinates.
    pub fn bracket(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); d];
        for &(a, b, c, v) in &self.nonzero {
            out[c] += x[a] * y[b] * v;
        }
        out
    }

    /// Matrix of `ad x` in the frame.
    pub fn ad(&self, x: &[C64]) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for &(a, b, c, v) in &self.nonzero {
            m[(c, b)] += x[a] * v;
        }
        m
    }

    /// Frame Gram matrix `h(g_a, g_b)`.
    pub fn gram(&self) -> DMatrix<C64> {
        match &self.metric {
            Metric::Orthonormal => DMatrix::identity(self.dim(), self.dim()),
            Metric::Gram(g) => g.clone(),
        }
    }

    /// Complex conjugate of a form, available only with a reality structure.
    pub fn conjugate_form(&self, f: &Form) -> Result<Form> {
        if !self.reality {
            return Err(Error::RealityUnavailable);
        }
        if f.space.n != self.n {
            return Err(Error::ShapeMismatch(format!("form on n = {}, algebra has n = {}", f.space.n, self.n)));
        }
        f.conjugate()
    }

    pub fn is_orthonormal(&self) -> bool {
        matches!(self.metric, Metric::Orthonormal)
    }

    /// Same structure constants with a different metric.
    pub fn with_metric(&self, metric: Metric) -> Self {
        let mut out = self.clone();
        out.metric = metric;
        out
    }

    /// Same algebra with the structure table replaced (no validation).
    pub fn with_table(&self, table: Vec<C64>) -> Self {
        Self::from_table(self.n, self.names.clone(), self.reality, table, self.metric.clone())
    }

    /// Validation tolerance `1e-10 · (1 + max |C|)`.
    pub fn tolerance(&self) -> f64 {
        1e-10 * (1.0 + self.max_constant())
    }

    /// Runs every structural check.
    pub fn validate(&self) -> ValidationReport {
        let tol = self.tolerance();
        let d = self.dim();
        let n = self.n;
        let name = |a: usize| self.names[a].clone();
        let mut checks = Vec::new();

        let mut worst = (0.0, String::new());
        for a in 0..d {
            for b in a..d {
                for c in 0..d {
                    let r = (self.c(a, b, c) + self.c(b, a, c)).norm();
                    if r > worst.0 {
                        worst = (r, format!("[{},{}] component {}", name(a), name(b), name(c)));
                    }
                }
            }
        }
        checks.push(Check {
            kind: ValidationKind::Antisymmetry,
            passed: worst.0 <= tol,
            residual: worst.0,
            witness: worst.1,
        });

        let mut worst = (0.0, String::new());
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    for e in 0..d {
                        let mut s = C64::new(0.0, 0.0);
                        for m in 0..d {
                            s += self.c(a, b, m) * self.c(m, c, e)
                                + self.c(b, c, m) * self.c(m, a, e)
                                + self.c(c, a, m) * self.c(m, b, e);
                        }
                        if s.norm() > worst.0 {
                            worst = (s.norm(), format!("({},{},{})", name(a), name(b), name(c)));
                        }
                    }
                }
            }
        }
        checks.push(Check {
            kind: ValidationKind::Jacobi,
            passed: worst.0 <= tol,
            residual: worst.0,
            witness: worst.1,
        });

        let mut worst = (0.0, String::new());
        for a in 0..d {
            for b in 0..d {
                if (a < n) != (b < n) {
                    continue;
                }
                let other = if a < n { n..d } else { 0..n };
                for c in other {
                    let r = self.c(a, b, c).norm();
                    if r > worst.0 {
                        worst = (r, format!("[{},{}] has {} component", name(a), name(b), name(c)));
                    }
                }
            }
        }
        checks.push(Check {
            kind: ValidationKind::Integrability,
            passed: worst.0 <= tol,
            residual: worst.0,
            witness: worst.1,
        });

        let mut worst = (0.0, String::new());
        if self.reality {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let r = (self.c(a, b, c).conj()
                            - self.c(self.conj_index(a), self.conj_index(b), self.conj_index(c)))
                        .norm();
                        if r > worst.0 {
                            worst = (
                                r,
                                format!(
                                    "conj[{},{}] vs [{},{}]",
                                    name(a),
                                    name(b),
                                    name(self.conj_index(a)),
                                    name(self.conj_index(b))
                                ),
                            );
                        }
                    }
                }
            }
            if let Metric::Gram(g) = &self.metric {
                for a in 0..d {
                    for b in 0..d {
                        let r = (g[(a, b)].conj() - g[(self.conj_index(a), self.conj_index(b))]).norm();
                        if r > worst.0 {
                            worst = (r, format!("metric entry ({},{})", name(a), name(b)));
                        }
                    }
                }
            }
        }
        checks.push(Check {
            kind: ValidationKind::Reality,
            passed: worst.0 <= tol,
            residual: worst.0,
            witness: worst.1,
        });

        let (residual, witness) = self.metric_defect();
        checks.push(Check {
            kind: ValidationKind::Metric,
            passed: residual <= tol,
            residual,
            witness,
        });

        ValidationReport { tolerance: tol, checks }
    }

    fn metric_defect(&self) -> (f64, String) {
        let g = match &self.metric {
            Metric::Orthonormal => return (0.0, String::new()),
            Metric::Gram(g) => g,
        };
        let d = self.dim();
        let n = self.n;
        let mut worst = (0.0, String::new());
        for a in 0..d {
            for b in 0..d {
                let r = (g[(a, b)] - g[(b, a)].conj()).norm();
                if r > worst.0 {
                    worst = (r, format!("not Hermitian at ({a},{b})"));
                }
                if (a < n) != (b < n) && g[(a, b)].norm() > worst.0 {
                    worst = (g[(a, b)].norm(), format!("types not orthogonal at ({a},{b})"));
                }
            }
        }
        if !is_positive_definite(g) {
            worst = (f64::INFINITY, "not positive definite".into());
        }
        worst
    }
}

/// Smallest eigenvalue test on the real form `[[Re G, -Im G], [Im G, Re G]]`.
///
/// Complex Cholesky cannot be used here: it takes complex square roots of
/// negative pivots instead of failing.
pub(crate) fn is_positive_definite(g: &DMatrix<C64>) -> bool {
    let d = g.nrows();
    let h = (g + g.adjoint()) * C64::new(0.5, 0.0);
    let e = DMatrix::<f64>::from_fn(2 * d, 2 * d, |i, j| {
        let z = h[(i % d, j % d)];
        match (i < d, j < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let scale = e.amax().max(1.0);
    e.symmetric_eigenvalues().iter().all(|&l| l > 1e-12 * scale)
}
