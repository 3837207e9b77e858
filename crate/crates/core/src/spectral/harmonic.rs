use super::assemble::{assemble_with, LinearOperatorMatrix, Operator};
use super::gram::space_gram;
use super::svd::EmbeddedSvd;
use super::pinv::{moore_penrose, PseudoInverse, SpectralGap};
use crate::algebra::{Form, FormSpace, LieAlgebra, ModuleSpec};
use crate::error::Result;
use crate::par::Exec;
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// `∂̄` into and out of one degree, with their Moore–Penrose inverses.
#[derive(Debug, Clone)]
pub struct DelbarPair {
    /// `∂̄ : Λ^{p,q-1} → Λ^{p,q}`.
    pub incoming: LinearOperatorMatrix,
    pub incoming_pinv: PseudoInverse,
    /// `∂̄ : Λ^{p,q} → Λ^{p,q+1}`.
    pub outgoing: LinearOperatorMatrix,
    pub outgoing_pinv: PseudoInverse,
}

impl DelbarPair {
    pub fn new(alg: &LieAlgebra, space: &FormSpace, rel_tol: Option<f64>, exec: Exec) -> Result<Self> {
        let below = if space.q == 0 {
            FormSpace::new_unchecked(space.n, space.p, 0, space.module.clone())
        } else {
            space.with_q(space.q - 1)
        };
        let incoming = if space.q == 0 {
            LinearOperatorMatrix::from_matrix(alg, below, space.clone(), DMatrix::zeros(space.dim(), 0))
        } else {
            assemble_with(alg, Operator::Delbar, &below, exec)?
        };
        let outgoing = assemble_with(alg, Operator::Delbar, space, exec)?;
        let incoming_pinv = moore_penrose(&incoming, rel_tol)?;
        let outgoing_pinv = moore_penrose(&outgoing, rel_tol)?;
        Ok(Self {
            incoming,
            incoming_pinv,
            outgoing,
            outgoing_pinv,
        })
    }

    /// `ℋ = 1 − ∂̄∂̄† − ∂̄†∂̄` on this degree.
    pub fn harmonic_projector(&self) -> DMatrix<C64> {
        let d = self.outgoing.domain.dim();
        let mut p = DMatrix::<C64>::identity(d, d);
        p -= &self.incoming.matrix * &self.incoming_pinv.pinv;
        p -= &self.outgoing_pinv.pinv * &self.outgoing.matrix;
        p
    }

    pub fn harmonic_dim(&self) -> usize {
        self.outgoing.domain.dim() - self.incoming_pinv.rank - self.outgoing_pinv.rank
    }
}

/// Orthonormal basis of `ker ∂̄ ∩ ker ∂̄†` in one degree.
#[derive(Debug, Clone)]
pub struct HarmonicSpace {
    pub space: FormSpace,
    pub basis: Vec<Form>,
    pub projector: DMatrix<C64>,
    pub gram: DMatrix<C64>,
    pub gaps: [SpectralGap; 2],
}

impl HarmonicSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates `⟨η_ν, v⟩` of `v` in the basis.
    pub fn coordinates(&self, v: &DVector<C64>) -> Vec<C64> {
        let gv = &self.gram * v;
        self.basis.iter().map(|b| b.coeffs.dotc(&gv)).collect()
    }

    /// Covectors `w_ν = G η_ν` so that `⟨η_ν, v⟩ = w_ν^* v`.
    pub fn functionals(&self) -> Vec<DVector<C64>> {
        self.basis.iter().map(|b| &self.gram * &b.coeffs).collect()
    }

    /// Index of the canonical basis element equal to `η_ν`, if there is one.
    pub fn canonical_index(&self, nu: usize) -> Option<usize> {
        let c = &self.basis[nu].coeffs;
        let nz: Vec<usize> = (0..c.len()).filter(|&i| c[i].norm() > 1e-12).collect();
        match nz.as_slice() {
            [i] if (c[*i] - C64::new(1.0, 0.0)).norm() < 1e-12 => Some(*i),
            _ => None,
        }
    }
}

/// Reduced row echelon form of the rows of `m` with partial pivoting in column order.
fn rref_rows(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, a[(i, c)].norm()))
            .fold((r, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        a.swap_rows(r, best);
        let inv = C64::new(1.0, 0.0) / a[(r, c)];
        for j in 0..cols {
            a[(r, j)] *= inv;
        }
        for i in 0..rows {
            if i != r {
                let f = a[(i, c)];
                if f != C64::new(0.0, 0.0) {
                    for j in 0..cols {
                        let v = a[(r, j)];
                        a[(i, j)] -= f * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..r).map(|i| a.row(i).transpose()).collect()
}

/// Gram–Schmidt in order under `⟨x, y⟩ = x^* G y`.
fn gram_schmidt(vs: Vec<DVector<C64>>, g: &DMatrix<C64>) -> Vec<DVector<C64>> {
    let mut out: Vec<DVector<C64>> = Vec::new();
    for mut v in vs {
        for _ in 0..2 {
            for u in &out {
                let c = u.dotc(&(g * &v));
                v -= u * c;
            }
        }
        let nrm = v.dotc(&(g * &v)).re.sqrt();
        if nrm > 1e-10 {
            out.push(v / C64::new(nrm, 0.0));
        }
    }
    out
}

fn clean(v: &mut DVector<C64>) {
    for c in v.iter_mut() {
        if c.re.abs() < 1e-15 {
            c.re = 0.0;
        }
        if c.im.abs() < 1e-15 {
            c.im = 0.0;
        }
    }
}

/// Harmonic space of `Λ^{p,q}⊗𝔈` with a canonical orthonormal basis.
///
/// The basis is the reduced echelon form of the harmonic projector's range,
/// orthonormalized in pivot order, so a harmonic space spanned by canonical
/// basis vectors gets exactly those vectors.
pub fn harmonic_space_of(alg: &LieAlgebra, space: &FormSpace, rel_tol: Option<f64>, exec: Exec) -> Result<HarmonicSpace> {
    let pair = DelbarPair::new(alg, space, rel_tol, exec)?;
    let projector = pair.harmonic_projector();
    let h = pair.harmonic_dim();
    let gram = space_gram(alg, space);
    let mut rows = rref_rows(&projector.transpose(), 1e-8);
    if rows.len() != h {
        rows = projector_range_svd(&projector, h);
    }
    let mut basis_vecs = gram_schmidt(rows, &gram);
    basis_vecs.truncate(h);
    let basis = basis_vecs
        .into_iter()
        .map(|mut v| {
            clean(&mut v);
            Form {
                space: space.clone(),
                coeffs: v,
            }
        })
        .collect();
    Ok(HarmonicSpace {
        space: space.clone(),
        basis,
        projector,
        gram,
        gaps: [pair.incoming_pinv.gap, pair.outgoing_pinv.gap],
    })
}

fn projector_range_svd(p: &DMatrix<C64>, h: usize) -> Vec<DVector<C64>> {
    EmbeddedSvd::new(p).leading_left(h)
}

/// `ℋ^{0,q}(𝔈)`.
pub fn harmonic_space(alg: &LieAlgebra, q: usize, module: &ModuleSpec, rel_tol: Option<f64>) -> Result<HarmonicSpace> {
    let space = FormSpace::new(alg.n(), 0, q, module.clone())?;
    harmonic_space_of(alg, &space, rel_tol, Exec::default())
}
