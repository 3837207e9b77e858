use super::deform::{deform_all, ClassContext, ClassDeformation};
use crate::algebra::{Form, FormSpace, LieAlgebra, ModuleSpec, PolyScalar};
use crate::calculus::transport_coframe;
use crate::error::{Error, Result};
use crate::kuranishi::KuranishiFamily;
use crate::par::{self, Exec};
use crate::spectral::{assemble_with, hodge_table, hodge_table_with, moore_penrose, pinv_scaled, HodgeTable, Operator, SpectralGap};
use crate::C64;
use nalgebra::DMatrix;
use serde::Serialize;

/// Obstruction values above this at a sample put it outside the Kuranishi base.
pub const BASE_TOL: f64 = 1e-10;

/// Named parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub label: String,
    pub t: Vec<C64>,
}

fn rank(m: &DMatrix<C64>, rel_tol: Option<f64>, scale: f64) -> Result<(usize, SpectralGap)> {
    let p = pinv_scaled(m, None, None, rel_tol, scale)?;
    Ok((p.rank, p.gap))
}

fn stack(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// `∂̄` and `∂̄_φ` out of one degree.
struct Level {
    dim: usize,
    d_pinv: DMatrix<C64>,
    d_rank: usize,
    dphi: DMatrix<C64>,
    dphi_rank: usize,
}

impl Level {
    fn empty(dim: usize) -> Self {
        Level {
            dim,
            d_pinv: DMatrix::zeros(0, dim),
            d_rank: 0,
            dphi: DMatrix::zeros(dim, 0),
            dphi_rank: 0,
        }
    }
}

/// Dimension bookkeeping for `H^{0,q}_{∂̄_φ}(𝔈)` at one parameter value.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DeformedDim {
    pub q: usize,
    /// `dim H^{0,q}_{∂̄_φ}` by rank–nullity.
    pub dim: usize,
    /// `dim H^{0,q}_{∂̄}` and `dim H^{0,q−1}_{∂̄}`.
    pub h: usize,
    pub h_prev: usize,
    /// `dim (ker ∂̄_φ ∩ ker ∂̄†)` in degrees `q` and `q−1`.
    pub kernel: usize,
    pub kernel_prev: usize,
    /// `dim (ker ∂̄† ∩ Im ∂̄_φ)` in degrees `q+1` and `q`.
    pub image_next: usize,
    pub image: usize,
    /// `v^q = h − kernel`, `v^{q−1} = h_prev − kernel_prev`.
    pub v: i64,
    pub v_prev: i64,
    /// `h = dim + v^q + v^{q−1}`.
    pub jump_identity: bool,
    /// `h = kernel + image_next`.
    pub split_identity: bool,
    /// `dim = kernel − image`.
    pub quotient_identity: bool,
}

impl DeformedDim {
    pub fn all_identities(&self) -> bool {
        self.jump_identity && self.split_identity && self.quotient_identity
    }
}

/// Computes [`DeformedDim`] for `φ` on `Λ^{0,q}⊗𝔈`.
pub fn deformed_dim_at(alg: &LieAlgebra, phi: &Form, module: &ModuleSpec, q: usize, rel_tol: Option<f64>) -> Result<DeformedDim> {
    let n = alg.n();
    if q > n {
        return Err(Error::BidegreeOutOfRange { p: 0, q, n });
    }
    module.check(n)?;
    let scale = 1.0 + alg.max_constant();
    let level = |k: isize| -> Result<Level> {
        if k < 0 {
            return Ok(Level::empty(0));
        }
        let s = FormSpace::new_unchecked(n, 0, k as usize, module.clone());
        let d = assemble_with(alg, Operator::Delbar, &s, Exec::Sequential)?;
        let dp = moore_penrose(&d, rel_tol)?;
        let dphi = assemble_with(alg, Operator::DelbarPhi(phi), &s, Exec::Sequential)?.matrix;
        let (dphi_rank, _) = rank(&dphi, rel_tol, scale)?;
        Ok(Level {
            dim: s.dim(),
            d_pinv: dp.pinv,
            d_rank: dp.rank,
            dphi,
            dphi_rank,
        })
    };
    let q = q as isize;
    let l2 = level(q - 2)?;
    let l1 = level(q - 1)?;
    let l0 = level(q)?;
    let h_of = |cur: &Level, prev: &Level| cur.dim - cur.d_rank - prev.d_rank;
    let kernel_of = |cur: &Level, prev: &Level| -> Result<usize> {
        if cur.dim == 0 {
            return Ok(0);
        }
        let m = stack(&cur.dphi, &prev.d_pinv);
        Ok(cur.dim - rank(&m, rel_tol, scale)?.0)
    };
    let image_of = |cur: &Level| -> Result<usize> {
        if cur.dim == 0 || cur.dphi.nrows() == 0 {
            return Ok(0);
        }
        let m = &cur.d_pinv * &cur.dphi;
        Ok(cur.dphi_rank - rank(&m, rel_tol, scale)?.0)
    };
    let h = h_of(&l0, &l1);
    let h_prev = if q >= 1 { h_of(&l1, &l2) } else { 0 };
    let kernel = kernel_of(&l0, &l1)?;
    let kernel_prev = if q >= 1 { kernel_of(&l1, &l2)? } else { 0 };
    let image_next = image_of(&l0)?;
    let image = if q >= 1 { image_of(&l1)? } else { 0 };
    let dim = l0.dim - l0.dphi_rank - l1.dphi_rank;
    let v = h as i64 - kernel as i64;
    let v_prev = h_prev as i64 - kernel_prev as i64;
    Ok(DeformedDim {
        q: q as usize,
        dim,
        h,
        h_prev,
        kernel,
        kernel_prev,
        image_next,
        image,
        v,
        v_prev,
        jump_identity: h as i64 == dim as i64 + v + v_prev,
        split_identity: h == kernel + image_next,
        quotient_identity: dim as i64 == kernel as i64 - image as i64,
    })
}

/// Checks that `t` lies in the Kuranishi base.
pub fn check_in_base(fam: &KuranishiFamily, sample: &Sample) -> Result<()> {
    let v = fam.obstruction_at(&sample.t);
    if v > BASE_TOL {
        return Err(Error::SampleOutsideBase {
            label: sample.label.clone(),
            value: v,
        });
    }
    Ok(())
}

/// [`deformed_dim_at`] at `φ(t)`.
pub fn deformed_dim(alg: &LieAlgebra, fam: &KuranishiFamily, sample: &Sample, module: &ModuleSpec, q: usize, rel_tol: Option<f64>) -> Result<DeformedDim> {
    check_in_base(fam, sample)?;
    let phi = fam.eval(&sample.t)?;
    deformed_dim_at(alg, &phi, module, q, rel_tol)
}

/// Hodge tables of `∂̄_{φ(t)}` against those of the algebra in the frame adapted to `J_{φ(t)}`.
#[derive(Debug, Clone, Serialize)]
pub struct Crosscheck {
    pub deformed: HodgeTable,
    pub transported: HodgeTable,
    pub deformed_tangent: HodgeTable,
    pub transported_tangent: HodgeTable,
    pub matches: bool,
}

pub fn extension_crosscheck(alg: &LieAlgebra, fam: &KuranishiFamily, sample: &Sample, rel_tol: Option<f64>, exec: Exec) -> Result<Crosscheck> {
    check_in_base(fam, sample)?;
    let phi = fam.eval(&sample.t)?;
    let moved = transport_coframe(alg, &phi)?;
    if let Some(e) = moved.validate().first_error() {
        return Err(Error::Numerical(format!("transported algebra fails validation: {e}")));
    }
    let deformed = hodge_table_with(alg, &ModuleSpec::trivial(), Some(&phi), rel_tol, exec)?;
    let transported = hodge_table(&moved, &ModuleSpec::trivial(), rel_tol)?;
    let deformed_tangent = hodge_table_with(alg, &ModuleSpec::tangent(), Some(&phi), rel_tol, exec)?;
    let transported_tangent = hodge_table(&moved, &ModuleSpec::tangent(), rel_tol)?;
    let matches = deformed == transported && deformed_tangent == transported_tangent;
    Ok(Crosscheck {
        deformed,
        transported,
        deformed_tangent,
        transported_tangent,
        matches,
    })
}

/// Generators of the rank strata of the obstruction matrix.
#[derive(Debug, Clone)]
pub struct MinorSet {
    pub size: usize,
    pub generators: Vec<PolyScalar>,
}

/// Evaluation of the jump locus at one sample.
#[derive(Debug, Clone, Serialize)]
pub struct SampleResult {
    pub label: String,
    pub t: Vec<[f64; 2]>,
    pub rank: usize,
    /// `dim V_t^q = N − rank M(t)`.
    pub dim_v: usize,
    /// `V_t^q = V`: every class extends.
    pub in_base_v: bool,
    pub dim_direct: usize,
    pub dim_recursion: i64,
    pub consistent: bool,
    pub bookkeeping: DeformedDim,
    pub gap: SpectralGap,
    /// Truncation order when the series did not terminate.
    pub truncated_at: Option<usize>,
}

/// Obstruction matrix, deformed classes and per-sample ranks.
#[derive(Debug, Clone)]
pub struct JumpLocusReport {
    pub module: ModuleSpec,
    pub q: usize,
    pub classes: Vec<ClassDeformation>,
    pub harmonic_labels: Vec<String>,
    pub next_labels: Vec<String>,
    /// `matrix[l][μ]`: obstruction of class `l` along harmonic class `μ` of degree `q+1`.
    pub matrix: Vec<Vec<PolyScalar>>,
    pub samples: Vec<SampleResult>,
    pub minors: Option<Vec<MinorSet>>,
    pub exact: bool,
}

/// Settings for [`jump_locus`].
#[derive(Debug, Clone, Copy)]
pub struct LocusOptions {
    pub order: usize,
    pub rel_tol: Option<f64>,
    pub exec: Exec,
}

impl Default for LocusOptions {
    fn default() -> Self {
        Self {
            order: 6,
            rel_tol: None,
            exec: Exec::default(),
        }
    }
}

fn eval_matrix(m: &[Vec<PolyScalar>], t: &[C64], cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(m.len(), cols, |l, mu| m[l][mu].eval(t))
}

fn class_matrix(alg: &LieAlgebra, fam: &KuranishiFamily, space: &FormSpace, opts: &LocusOptions) -> Result<(ClassContext, Vec<ClassDeformation>, Vec<Vec<PolyScalar>>)> {
    let ctx = ClassContext::new(alg, fam, space, opts.rel_tol, opts.exec)?;
    let classes = deform_all(fam, &ctx, opts.order, opts.exec)?;
    let matrix = classes.iter().map(|c| c.obstruction.clone()).collect();
    Ok((ctx, classes, matrix))
}

fn det(m: &[Vec<&PolyScalar>], nvars: usize) -> PolyScalar {
    match m.len() {
        0 => PolyScalar::constant(nvars, C64::new(1.0, 0.0)),
        1 => m[0][0].clone(),
        k => {
            let mut acc = PolyScalar::zero(nvars);
            for j in 0..k {
                if m[0][j].terms.is_empty() {
                    continue;
                }
                let sub: Vec<Vec<&PolyScalar>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| *p).collect())
                    .collect();
                let term = m[0][j].mul(&det(&sub, nvars));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::algebra::subsets(n, k)
        .into_iter()
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// All `s × s` minors of the nonzero block, for blocks up to 6 × 6.
fn minor_sets(matrix: &[Vec<PolyScalar>], nvars: usize) -> Option<Vec<MinorSet>> {
    let rows = matrix.len();
    let cols: Vec<usize> = (0..matrix.first().map_or(0, Vec::len))
        .filter(|&c| matrix.iter().any(|r| !r[c].terms.is_empty()))
        .collect();
    if rows > 6 || cols.len() > 6 {
        return None;
    }
    let mut out = Vec::new();
    for s in 1..=rows.min(cols.len()) {
        let mut generators = Vec::new();
        for rs in combinations(rows, s) {
            for cs in combinations(cols.len(), s) {
                let sub: Vec<Vec<&PolyScalar>> = rs.iter().map(|&r| cs.iter().map(|&c| &matrix[r][cols[c]]).collect()).collect();
                let d = det(&sub, nvars).pruned_abs(1e-14);
                if !d.terms.is_empty() && !generators.contains(&d) {
                    generators.push(d);
                }
            }
        }
        out.push(MinorSet { size: s, generators });
    }
    Some(out)
}

/// Deforms a basis of `ℋ^{0,q}(𝔈)` and evaluates the rank stratification at samples.
pub fn jump_locus(alg: &LieAlgebra, fam: &KuranishiFamily, module: &ModuleSpec, q: usize, samples: &[Sample], opts: LocusOptions) -> Result<JumpLocusReport> {
    let n = alg.n();
    let space = FormSpace::new(n, 0, q, module.clone())?;
    for s in samples {
        if s.t.len() != fam.r() {
            return Err(Error::ShapeMismatch(format!("sample `{}` has {} parameters, family has {}", s.label, s.t.len(), fam.r())));
        }
        check_in_base(fam, s)?;
    }
    let (ctx, classes, matrix) = class_matrix(alg, fam, &space, &opts)?;
    let prev = if q >= 1 {
        Some(class_matrix(alg, fam, &space.with_q(q - 1), &opts)?)
    } else {
        None
    };
    let exact = classes.iter().all(|c| c.exact) && prev.as_ref().is_none_or(|p| p.1.iter().all(|c| c.exact));
    let cols = ctx.harmonic_next.dim();
    let scale = 1.0 + alg.max_constant();
    let n_classes = classes.len();
    let results = par::map(opts.exec, samples, |s| -> Result<SampleResult> {
        let (rk, gap) = rank(&eval_matrix(&matrix, &s.t, cols), opts.rel_tol, scale)?;
        let dim_v = n_classes - rk;
        let dim_recursion = match &prev {
            None => dim_v as i64,
            Some((pctx, pclasses, pm)) => {
                let (prk, _) = rank(&eval_matrix(pm, &s.t, pctx.harmonic_next.dim()), opts.rel_tol, scale)?;
                let pdim_v = pclasses.len() - prk;
                dim_v as i64 + pdim_v as i64 - pctx.harmonic.dim() as i64
            }
        };
        let phi = fam.eval(&s.t)?;
        let bookkeeping = deformed_dim_at(alg, &phi, module, q, opts.rel_tol)?;
        Ok(SampleResult {
            label: s.label.clone(),
            t: s.t.iter().map(|c| [c.re, c.im]).collect(),
            rank: rk,
            dim_v,
            in_base_v: rk == 0,
            dim_direct: bookkeeping.dim,
            dim_recursion,
            consistent: bookkeeping.dim as i64 == dim_recursion,
            bookkeeping,
            gap,
            truncated_at: (!exact).then_some(opts.order),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let minors = minor_sets(&matrix, fam.r());
    Ok(JumpLocusReport {
        module: module.clone(),
        q,
        harmonic_labels: ctx.harmonic.basis.iter().map(describe).collect(),
        next_labels: ctx.harmonic_next.basis.iter().map(describe).collect(),
        classes,
        matrix,
        samples: results,
        minors,
        exact,
    })
}

/// Compact rendering of a form as a sum of labelled terms.
pub fn describe(f: &Form) -> String {
    let terms = f.terms(1e-12);
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(l, c)| {
            if (c - C64::new(1.0, 0.0)).norm() < 1e-12 {
                l.to_string()
            } else {
                format!("({:.6}{:+.6}i)·{}", c.re, c.im, l)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
