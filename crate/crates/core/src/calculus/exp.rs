use crate::algebra::LieAlgebra;
use crate::C64;
use nalgebra::DMatrix;

/// Matrix exponential by scaling and squaring with a Taylor series run to convergence.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let d = a.nrows();
    let norm1 = (0..d)
        .map(|j| (0..d).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm1 * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let b = a * C64::new(scale, 0.0);
    let mut sum = DMatrix::<C64>::identity(d, d);
    let mut term = DMatrix::<C64>::identity(d, d);
    for k in 1..64 {
        term = &term * &b * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if term.norm() <= f64::EPSILON * 1e-3 * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `e^{ad X}` in the frame.
pub fn exp_ad(alg: &LieAlgebra, x: &[C64]) -> DMatrix<C64> {
    expm(&alg.ad(x))
}
