use super::assemble::LinearOperatorMatrix;
use super::svd::EmbeddedSvd;
use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DMatrix;
use serde::Serialize;

/// Moore–Penrose inverse with respect to Gram-weighted inner products.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    /// `A†`, mapping codomain coordinates to domain coordinates.
    pub pinv: DMatrix<C64>,
    pub rank: usize,
    /// Singular values of the whitened operator, descending.
    pub singular_values: Vec<f64>,
    /// Absolute cut: singular values above it are kept.
    pub threshold: f64,
    pub gap: SpectralGap,
}

/// Smallest kept and largest dropped singular value.
#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq)]
pub struct SpectralGap {
    pub smallest_kept: Option<f64>,
    pub largest_dropped: Option<f64>,
}

/// Default relative rank tolerance `max(m, n) · ε`.
pub fn default_rel_tol(m: usize, n: usize) -> f64 {
    m.max(n).max(1) as f64 * f64::EPSILON
}

fn check_finite(a: &DMatrix<C64>) -> Result<()> {
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("operator matrix".into()));
    }
    Ok(())
}

/// Lower Cholesky factor `L` with `G = L L^*`.
fn cholesky(g: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if !crate::algebra::is_positive_definite(g) {
        return Err(Error::MetricNotPositive);
    }
    g.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or(Error::MetricNotPositive)
}

/// `A†` for `A : (ℂ^n, G_d) → (ℂ^m, G_c)`; `None` Grams mean identity.
pub fn pinv_weighted(
    a: &DMatrix<C64>,
    g_dom: Option<&DMatrix<C64>>,
    g_cod: Option<&DMatrix<C64>>,
    rel_tol: Option<f64>,
) -> Result<PseudoInverse> {
    pinv_scaled(a, g_dom, g_cod, rel_tol, 0.0)
}

/// [`pinv_weighted`] with the cut `rel · max(σ_max, scale)`.
///
/// `scale` is the natural size of the operator (for assembled operators,
/// `1 + max |C^c_{ab}|`), so that an operator that vanishes up to rounding
/// gets rank 0 instead of having its noise promoted to full rank.
pub fn pinv_scaled(
    a: &DMatrix<C64>,
    g_dom: Option<&DMatrix<C64>>,
    g_cod: Option<&DMatrix<C64>>,
    rel_tol: Option<f64>,
    scale: f64,
) -> Result<PseudoInverse> {
    check_finite(a)?;
    let (m, n) = a.shape();
    let rel = rel_tol.unwrap_or_else(|| default_rel_tol(m, n));
    if m == 0 || n == 0 {
        return Ok(PseudoInverse {
            pinv: DMatrix::zeros(n, m),
            rank: 0,
            singular_values: vec![],
            threshold: 0.0,
            gap: SpectralGap::default(),
        });
    }
    let ld = g_dom.map(cholesky).transpose()?;
    let lc = g_cod.map(cholesky).transpose()?;
    let ld_inv_adj = match &ld {
        Some(l) => Some(
            l.clone()
                .try_inverse()
                .ok_or(Error::MetricNotPositive)?
                .adjoint(),
        ),
        None => None,
    };
    let mut w = a.clone();
    if let Some(l) = &lc {
        w = l.adjoint() * w;
    }
    if let Some(li) = &ld_inv_adj {
        w = w * li;
    }
    let svd = EmbeddedSvd::new(&w);
    let sv = svd.singular_values();
    let smax = sv.first().copied().unwrap_or(0.0);
    if !smax.is_finite() {
        return Err(Error::NonFinite("singular values".into()));
    }
    let threshold = rel * smax.max(scale);
    let rank = sv.iter().filter(|&&s| s > threshold && s > 0.0).count();
    let wp = svd.pinv(rank);
    let mut pinv = wp;
    if let Some(li) = &ld_inv_adj {
        pinv = li * pinv;
    }
    if let Some(l) = &lc {
        pinv = pinv * l.adjoint();
    }
    let gap = SpectralGap {
        smallest_kept: if rank > 0 { Some(sv[rank - 1]) } else { None },
        largest_dropped: sv.get(rank).copied(),
    };
    Ok(PseudoInverse {
        pinv,
        rank,
        singular_values: sv,
        threshold,
        gap,
    })
}

/// Moore–Penrose inverse of an assembled operator.
pub fn moore_penrose(op: &LinearOperatorMatrix, rel_tol: Option<f64>) -> Result<PseudoInverse> {
    if op.orthonormal {
        pinv_scaled(&op.matrix, None, None, rel_tol, op.scale)
    } else {
        pinv_scaled(&op.matrix, Some(&op.gram_domain), Some(&op.gram_codomain), rel_tol, op.scale)
    }
}

/// Relative residuals of the four Penrose conditions (Gram-weighted adjoints).
pub fn penrose_residuals(
    a: &DMatrix<C64>,
    x: &DMatrix<C64>,
    g_dom: Option<&DMatrix<C64>>,
    g_cod: Option<&DMatrix<C64>>,
) -> [f64; 4] {
    let ax = a * x;
    let xa = x * a;
    let r1 = (&ax * a - a).norm() / (1.0 + a.norm());
    let r2 = (&xa * x - x).norm() / (1.0 + x.norm());
    let herm = |g: Option<&DMatrix<C64>>, p: &DMatrix<C64>| {
        let gp = match g {
            Some(g) => g * p,
            None => p.clone(),
        };
        (&gp - gp.adjoint()).norm() / (1.0 + gp.norm())
    };
    [r1, r2, herm(g_cod, &ax), herm(g_dom, &xa)]
}
