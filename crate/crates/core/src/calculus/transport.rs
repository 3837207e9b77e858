use crate::algebra::{Form, LieAlgebra, Metric, ModuleSpec};
use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DMatrix;

/// Change-of-frame matrix whose columns are `u_λ = z_λ − conj(φ_λ^α) z̄_α` and
/// `ū_λ = z̄_λ − φ_λ^α z_α`.
pub fn deformed_frame(alg: &LieAlgebra, phi: &Form) -> Result<DMatrix<C64>> {
    let n = alg.n();
    let s = &phi.space;
    if s.n != n || s.p != 0 || s.q != 1 || s.module != ModuleSpec::tangent() {
        return Err(Error::ShapeMismatch(format!("expected Λ^{{0,1}}⊗T, got {s}")));
    }
    let mut p = DMatrix::<C64>::identity(2 * n, 2 * n);
    for lambda in 0..n {
        for alpha in 0..n {
            let c = phi.coeffs[lambda * n + alpha];
            p[(n + alpha, lambda)] = -c.conj();
            p[(alpha, n + lambda)] = -c;
        }
    }
    Ok(p)
}

/// Structure constants of the same real algebra in the frame adapted to `J_φ`.
///
/// The metric is carried by `P^* G P` and compressed to its type-diagonal
/// blocks so that the new `(1,0)` and `(0,1)` spaces stay orthogonal.
pub fn transport_coframe(alg: &LieAlgebra, phi: &Form) -> Result<LieAlgebra> {
    if !alg.has_reality() {
        return Err(Error::RealityUnavailable);
    }
    let p = deformed_frame(alg, phi)?;
    if phi.coeffs.iter().all(|c| c.norm() == 0.0) {
        return Ok(alg.clone());
    }
    let n = alg.n();
    let d = 2 * n;
    let pinv = p
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("deformed frame is singular".into()))?;
    let mut table = vec![C64::new(0.0, 0.0); d * d * d];
    let cols: Vec<Vec<C64>> = (0..d).map(|a| p.column(a).iter().copied().collect()).collect();
    for a in 0..d {
        for b in 0..d {
            let br = nalgebra::DVector::from_vec(alg.bracket(&cols[a], &cols[b]));
            let coords = &pinv * br;
            for c in 0..d {
                table[(a * d + b) * d + c] = coords[c];
            }
        }
    }
    let metric = match alg.metric() {
        Metric::Orthonormal if phi.coeffs.iter().all(|c| c.norm() == 0.0) => Metric::Orthonormal,
        m => {
            let g = match m {
                Metric::Orthonormal => DMatrix::identity(d, d),
                Metric::Gram(g) => g.clone(),
            };
            let mut h = p.adjoint() * g * &p;
            for a in 0..d {
                for b in 0..d {
                    if (a < n) != (b < n) {
                        h[(a, b)] = C64::new(0.0, 0.0);
                    }
                }
            }
            Metric::Gram(h)
        }
    };
    let mut names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    names.extend((1..=n).map(|i| format!("ub{i}")));
    Ok(LieAlgebra::from_table(n, names, true, table, metric))
}
