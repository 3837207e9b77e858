use crate::algebra::{FormSpace, LieAlgebra};
use crate::calculus::{fn_bracket_sparse, from_sparse, SparseForm};
use crate::par::{self, Exec};
use crate::spectral::space_gram;
use crate::C64;
use crate::spectral::EmbeddedSvd;
use nalgebra::{DMatrix, DVector};

/// Bilinear map `B(u, v) = Σ_a u_a M_a v` in canonical coordinates.
#[derive(Debug, Clone)]
pub struct Bilinear {
    pub mats: Vec<DMatrix<C64>>,
    pub out_dim: usize,
}

impl Bilinear {
    pub fn apply(&self, u: &DVector<C64>, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.out_dim);
        for (a, m) in self.mats.iter().enumerate() {
            if u[a] != C64::new(0.0, 0.0) {
                out += m * v * u[a];
            }
        }
        out
    }

    /// Frölicher–Nijenhuis bracket `Λ^{0,k}⊗T × Λ^{0,l}⊗T → Λ^{0,k+l}⊗T`.
    pub fn fn_bracket(alg: &LieAlgebra, left: &FormSpace, right: &FormSpace, exec: Exec) -> Self {
        let target = left.with_q(left.q + right.q);
        let mats = par::map_range(exec, left.dim(), |a| {
            let (ma, sa) = left.full_parts(a);
            let ka = SparseForm::single(ma, sa as u32, C64::new(1.0, 0.0));
            let mut m = DMatrix::zeros(target.dim(), right.dim());
            for b in 0..right.dim() {
                let (mb, sb) = right.full_parts(b);
                let kb = SparseForm::single(mb, sb as u32, C64::new(1.0, 0.0));
                m.set_column(b, &from_sparse(&target, &fn_bracket_sparse(alg, &ka, &kb)).coeffs);
            }
            m
        });
        Self {
            mats,
            out_dim: target.dim(),
        }
    }
}

/// Operator-norm estimate of a bilinear map under the induced metrics.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NormConstant {
    /// Best value found by multi-start alternating power iteration (a lower bound).
    pub estimate: f64,
    /// Certified upper bound `‖[M̃_1; …; M̃_r]‖₂`.
    pub upper_bound: f64,
}

fn top_singular(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    EmbeddedSvd::new(m).top()
}

fn whitening(g: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let l = g.clone().cholesky().expect("Gram positive definite").l();
    let inv_adj = l.clone().try_inverse().expect("invertible").adjoint();
    (l.adjoint(), inv_adj)
}

/// Constant `C` with `‖B(u, v)‖ ≤ C ‖u‖ ‖v‖` for `B = [·,·]` on `Λ^{0,1}⊗T`.
pub fn bracket_norm_constant(alg: &LieAlgebra, b: &Bilinear, space: &FormSpace) -> NormConstant {
    let dim = space.dim();
    if dim == 0 || b.out_dim == 0 {
        return NormConstant {
            estimate: 0.0,
            upper_bound: 0.0,
        };
    }
    let (_, wd) = whitening(&space_gram(alg, space));
    let (wc, _) = whitening(&space_gram(alg, &space.with_q(2 * space.q)));
    let mats: Vec<DMatrix<C64>> = (0..dim)
        .map(|a| {
            let mut m = DMatrix::<C64>::zeros(b.out_dim, dim);
            for (bb, mb) in b.mats.iter().enumerate() {
                if wd[(bb, a)] != C64::new(0.0, 0.0) {
                    m += mb * wd[(bb, a)];
                }
            }
            &wc * m * &wd
        })
        .collect();
    let mut stack = DMatrix::<C64>::zeros(b.out_dim * dim, dim);
    for (a, m) in mats.iter().enumerate() {
        stack.view_mut((a * b.out_dim, 0), (b.out_dim, dim)).copy_from(m);
    }
    let upper_bound = top_singular(&stack).0;
    let mut estimate: f64 = 0.0;
    for start in 0..dim {
        let mut v = DVector::<C64>::zeros(dim);
        v[start] = C64::new(1.0, 0.0);
        let mut best = 0.0;
        for _ in 0..30 {
            let cols: Vec<DVector<C64>> = mats.iter().map(|m| m * &v).collect();
            let nu = DMatrix::from_columns(&cols);
            let (_, u) = top_singular(&nu);
            let mut mu = DMatrix::<C64>::zeros(b.out_dim, dim);
            for (a, m) in mats.iter().enumerate() {
                mu += m * u[a];
            }
            let (s, vn) = top_singular(&mu);
            v = vn;
            if s <= best * (1.0 + 1e-13) {
                best = best.max(s);
                break;
            }
            best = s;
        }
        estimate = estimate.max(best);
    }
    NormConstant {
        estimate,
        upper_bound,
    }
}
