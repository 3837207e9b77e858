use crate::algebra::{subsets, Factor, FormSpace, LieAlgebra, Metric};
use crate::C64;
use nalgebra::DMatrix;

fn minor_det(m: &DMatrix<C64>, rows: u32, cols: u32) -> C64 {
    let r: Vec<usize> = (0..32).filter(|i| rows & (1 << i) != 0).collect();
    let c: Vec<usize> = (0..32).filter(|i| cols & (1 << i) != 0).collect();
    if r.is_empty() {
        return C64::new(1.0, 0.0);
    }
    DMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])]).determinant()
}

/// Gram matrix of the canonical basis of `space` induced by the frame metric.
///
/// Covector blocks use `(G^{-1})^T` of the corresponding type block, wedge
/// powers use minors (compound matrices) and tensor factors multiply.
pub fn space_gram(alg: &LieAlgebra, space: &FormSpace) -> DMatrix<C64> {
    let dim = space.dim();
    let g = match alg.metric() {
        Metric::Orthonormal => return DMatrix::identity(dim, dim),
        Metric::Gram(g) => g,
    };
    let n = alg.n();
    let g10 = g.view((0, 0), (n, n)).into_owned();
    let g01 = g.view((n, n), (n, n)).into_owned();
    let inv_t = |m: &DMatrix<C64>| m.clone().try_inverse().expect("metric block invertible").transpose();
    let d10 = inv_t(&g10);
    let d01 = inv_t(&g01);
    let factor_gram: Vec<DMatrix<C64>> = space
        .module
        .factors()
        .iter()
        .map(|f| match f {
            Factor::T => g10.clone(),
            Factor::TDual => d10.clone(),
            Factor::Wedge(k) => {
                let s = subsets(n, *k);
                DMatrix::from_fn(s.len(), s.len(), |i, j| minor_det(&d10, s[i], s[j]))
            }
        })
        .collect();
    DMatrix::from_fn(dim, dim, |i, j| {
        let (ji, ii, mi) = space.parts(i);
        let (jj, ij, mj) = space.parts(j);
        let mut v = minor_det(&d10, ji, jj) * minor_det(&d01, ii, ij);
        let pi = space.module.split_index(n, mi);
        let pj = space.module.split_index(n, mj);
        for (k, fg) in factor_gram.iter().enumerate() {
            v *= fg[(pi[k], pj[k])];
        }
        v
    })
}
