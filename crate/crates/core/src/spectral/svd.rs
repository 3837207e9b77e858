//! Complex SVD through the real embedding `A ↦ [[Re A, −Im A], [Im A, Re A]]`.
//!
//! The embedding is a `*`-homomorphism, so singular values come in equal pairs
//! and `E(A)† = E(A†)`.

use crate::C64;
use nalgebra::{DMatrix, DVector};

fn embed(a: &DMatrix<C64>) -> DMatrix<f64> {
    let (m, n) = a.shape();
    DMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let c = a[(i % m, j % n)];
        match (i < m, j < n) {
            (true, true) | (false, false) => c.re,
            (true, false) => -c.im,
            (false, true) => c.im,
        }
    })
}

/// Real SVD of the embedding, triplets sorted by descending singular value.
pub(crate) struct EmbeddedSvd {
    m: usize,
    n: usize,
    /// `(σ, u, v)` of `E(A)`.
    triplets: Vec<(f64, DVector<f64>, DVector<f64>)>,
}

impl EmbeddedSvd {
    pub(crate) fn new(a: &DMatrix<C64>) -> Self {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Self { m, n, triplets: Vec::new() };
        }
        let svd = embed(a).svd(true, true);
        let u = svd.u.expect("U requested");
        let vt = svd.v_t.expect("V requested");
        let mut triplets: Vec<_> = (0..svd.singular_values.len())
            .map(|i| (svd.singular_values[i], u.column(i).into_owned(), vt.row(i).transpose()))
            .collect();
        triplets.sort_by(|x, y| y.0.total_cmp(&x.0));
        Self { m, n, triplets }
    }

    /// Singular values of `A`, descending (one per pair).
    pub(crate) fn singular_values(&self) -> Vec<f64> {
        self.triplets.iter().step_by(2).map(|t| t.0).collect()
    }

    /// `A†` keeping the `k` largest singular values of `A`.
    pub(crate) fn pinv(&self, k: usize) -> DMatrix<C64> {
        let (m, n) = (self.m, self.n);
        let mut r = DMatrix::<f64>::zeros(2 * n, 2 * m);
        for (s, u, v) in self.triplets.iter().take(2 * k) {
            r += v * u.transpose() / *s;
        }
        DMatrix::from_fn(n, m, |i, j| C64::new(r[(i, j)], r[(n + i, j)]))
    }

    /// Largest singular value with a right singular vector.
    pub(crate) fn top(&self) -> (f64, DVector<C64>) {
        match self.triplets.first() {
            None => (0.0, DVector::zeros(self.n)),
            Some((s, _, v)) => {
                let n = self.n;
                let c = DVector::from_fn(n, |i, _| C64::new(v[i], v[n + i]));
                let nrm = c.norm();
                (*s, c / C64::new(nrm, 0.0))
            }
        }
    }

    /// Orthonormal basis of the span of the `k` leading left singular vectors of `A`.
    pub(crate) fn leading_left(&self, k: usize) -> Vec<DVector<C64>> {
        let m = self.m;
        let mut out: Vec<DVector<C64>> = Vec::new();
        for (_, u, _) in self.triplets.iter().take(2 * k) {
            let mut c = DVector::from_fn(m, |i, _| C64::new(u[i], u[m + i]));
            for _ in 0..2 {
                for b in &out {
                    let p = b.dotc(&c);
                    c -= b * p;
                }
            }
            let nrm = c.norm();
            if nrm > 1e-6 && out.len() < k {
                out.push(c / C64::new(nrm, 0.0));
            }
        }
        out
    }
}
