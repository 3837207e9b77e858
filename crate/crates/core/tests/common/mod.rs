#![allow(dead_code)]

pub mod identities;

use liedolb::calculus::SparseForm;
use liedolb::workbench::catalog;
use liedolb::{Form, FormSpace, LieAlgebra, C64};
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const CATALOG: [&str; 5] = ["abelian:2", "abelian:3", "iwasawa", "kodaira_thurston", "nakamura"];

pub fn algebras() -> Vec<(&'static str, LieAlgebra)> {
    CATALOG.iter().map(|&n| (n, catalog(n).unwrap())).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn rc(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random mask with `k` of the lowest `dim` bits set.
pub fn rand_mask(rng: &mut ChaCha8Rng, dim: usize, k: usize) -> u32 {
    let mut idx: Vec<usize> = (0..dim).collect();
    for i in 0..k {
        let j = rng.gen_range(i..dim);
        idx.swap(i, j);
    }
    idx[..k].iter().fold(0, |m, &i| m | (1 << i))
}

/// Random scalar form of degree `k` on `𝔤_ℂ` of dimension `dim`, with up to `terms` terms.
pub fn rand_scalar(rng: &mut ChaCha8Rng, dim: usize, k: usize, terms: usize) -> SparseForm {
    let mut f = SparseForm::new();
    for _ in 0..terms {
        let m = rand_mask(rng, dim, k);
        f.add(m, 0, rc(rng));
    }
    f
}

/// Random vector-valued `k`-form (slot = frame index).
pub fn rand_vector_valued(rng: &mut ChaCha8Rng, dim: usize, k: usize, terms: usize) -> SparseForm {
    let mut f = SparseForm::new();
    for _ in 0..terms {
        let m = rand_mask(rng, dim, k);
        let slot = rng.gen_range(0..dim) as u32;
        f.add(m, slot, rc(rng));
    }
    f
}

pub fn rand_form(rng: &mut ChaCha8Rng, space: &FormSpace) -> Form {
    let v = DVector::from_fn(space.dim(), |_, _| rc(rng));
    Form::from_coeffs(space.clone(), v).unwrap()
}

pub fn diff(a: &SparseForm, b: &SparseForm) -> f64 {
    a.sub(b).max_abs()
}

/// Random `k × k` unitary from the QR factorization of a Gaussian-like matrix.
pub fn rand_unitary(rng: &mut ChaCha8Rng, k: usize) -> nalgebra::DMatrix<C64> {
    let m = nalgebra::DMatrix::from_fn(k, k, |_, _| rc(rng));
    m.qr().q()
}

/// The same algebra in the frame `g'_a = Σ_x U_{xa} g_x`, `U = diag(A, Ā)`.
pub fn rotate(alg: &LieAlgebra, a: &nalgebra::DMatrix<C64>) -> LieAlgebra {
    let n = alg.n();
    let d = alg.dim();
    let mut u = nalgebra::DMatrix::<C64>::zeros(d, d);
    u.view_mut((0, 0), (n, n)).copy_from(a);
    u.view_mut((n, n), (n, n)).copy_from(&a.map(|c| c.conj()));
    let ui = u.clone().try_inverse().unwrap();
    let mut table = vec![C64::new(0.0, 0.0); d * d * d];
    for &(x, y, z, v) in alg.nonzero_constants() {
        for a_ in 0..d {
            for b in 0..d {
                let s = u[(x, a_)] * u[(y, b)] * v;
                if s == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    table[(a_ * d + b) * d + c] += s * ui[(c, z)];
                }
            }
        }
    }
    LieAlgebra::from_table(n, alg.names().to_vec(), alg.has_reality(), table, alg.metric().clone())
}

pub fn unit_vector(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[i] = C64::new(1.0, 0.0);
    v
}
