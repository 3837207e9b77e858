use super::family::{mc_defect, KuranishiFamily};
use crate::algebra::{Form, FormSpace, LieAlgebra, ModuleSpec};
use crate::calculus::exp_ad;
use crate::error::{Error, Result};
use crate::spectral::{assemble, moore_penrose, Operator};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};

/// `ψ̃ = Ã^{-1} B̃` for the coframe `w^i = z^i + ψ^i_β z̄^β` pulled back by `e^{ad X}`.
#[derive(Debug, Clone)]
pub struct GaugeTransformation {
    pub psi_tilde: Form,
    pub exp_ad: DMatrix<C64>,
    pub a_tilde: DMatrix<C64>,
    pub b_tilde: DMatrix<C64>,
}

fn check_phi_shape(alg: &LieAlgebra, psi: &Form) -> Result<()> {
    let s = &psi.space;
    if s.n != alg.n() || s.p != 0 || s.q != 1 || s.module != ModuleSpec::tangent() {
        return Err(Error::ShapeMismatch(format!("expected Λ^{{0,1}}⊗T, got {s}")));
    }
    Ok(())
}

/// Complex structure `J_ψ` pulled back by `e^{ad X}` for `X ∈ 𝔤^{1,0}`.
pub fn apply_gauge(alg: &LieAlgebra, psi: &Form, x: &[C64]) -> Result<GaugeTransformation> {
    if !alg.has_reality() {
        return Err(Error::RealityUnavailable);
    }
    check_phi_shape(alg, psi)?;
    let n = alg.n();
    if x.len() != n {
        return Err(Error::ShapeMismatch(format!("X has {} components, expected {n}", x.len())));
    }
    let mut full = vec![C64::new(0.0, 0.0); 2 * n];
    full[..n].copy_from_slice(x);
    let e = exp_ad(alg, &full);
    let mut w = DMatrix::<C64>::zeros(n, 2 * n);
    for i in 0..n {
        w[(i, i)] = C64::new(1.0, 0.0);
        for beta in 0..n {
            w[(i, n + beta)] = psi.coeffs[beta * n + i];
        }
    }
    let we = &w * &e;
    let a_tilde = we.view((0, 0), (n, n)).into_owned();
    let b_tilde = we.view((0, n), (n, n)).into_owned();
    let inv = a_tilde
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("Ã is singular".into()))?;
    let m = &inv * &b_tilde;
    let mut out = Form::zeros(psi.space.clone());
    for alpha in 0..n {
        for beta in 0..n {
            out.coeffs[beta * n + alpha] = m[(alpha, beta)];
        }
    }
    Ok(GaugeTransformation {
        psi_tilde: out,
        exp_ad: e,
        a_tilde,
        b_tilde,
    })
}

/// Settings for [`gauge_normalize`].
#[derive(Debug, Clone, Copy)]
pub struct GaugeOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Inputs with `‖ψ‖` above this are rejected.
    pub max_norm: f64,
    /// Inputs with `‖∂̄ψ − ½[ψ,ψ]‖` above this are rejected.
    pub mc_tol: f64,
}

impl Default for GaugeOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-13,
            max_norm: 0.5,
            mc_tol: 1e-9,
        }
    }
}

/// Result of moving `ψ` into the gauge `∂̄†ψ̃ = 0`.
#[derive(Debug, Clone)]
pub struct GaugeNormalization {
    pub x: DVector<C64>,
    pub psi_tilde: Form,
    pub t: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
    pub trace: Vec<f64>,
    /// `‖ψ̃ − φ(t)‖` against the truncated family.
    pub family_distance: f64,
}

/// Finds `X ∈ (ker ∂̄)^⊥ ∩ 𝔤^{1,0}` with `∂̄†ψ̃ = 0` and reads off `t`.
///
/// Iterates `X ← X + ∂̄†ψ̃(X)`, projected to `(ker ∂̄)^⊥`, halving the step
/// whenever the residual grows.
pub fn gauge_normalize(alg: &LieAlgebra, fam: &KuranishiFamily, psi: &Form, opts: GaugeOptions) -> Result<GaugeNormalization> {
    if !alg.has_reality() {
        return Err(Error::RealityUnavailable);
    }
    check_phi_shape(alg, psi)?;
    let norm = psi.norm();
    if norm > opts.max_norm {
        return Err(Error::OutsideSmallBall(norm));
    }
    let defect = mc_defect(fam, &psi.coeffs).norm();
    if defect > opts.mc_tol {
        return Err(Error::NotMaurerCartan(defect));
    }
    let n = alg.n();
    let s0 = FormSpace::new(n, 0, 0, ModuleSpec::tangent())?;
    let d0 = assemble(alg, Operator::Delbar, &s0)?;
    let d0p = moore_penrose(&d0, None)?;
    let dagger = &d0p.pinv;
    let proj = dagger * &d0.matrix;

    let residual_at = |x: &DVector<C64>| -> Result<(Form, DVector<C64>)> {
        let xs: Vec<C64> = x.iter().copied().collect();
        let g = apply_gauge(alg, psi, &xs)?;
        let r = dagger * &g.psi_tilde.coeffs;
        Ok((g.psi_tilde, r))
    };

    let mut x = DVector::<C64>::zeros(n);
    let (mut psi_t, mut r) = residual_at(&x)?;
    let mut res = r.norm();
    let mut trace = vec![res];
    let mut step = 1.0;
    let mut iterations = 0;
    while res > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NoConvergence(res));
        }
        iterations += 1;
        let candidate = &proj * (&x + &r * C64::new(step, 0.0));
        let (pt, rn) = residual_at(&candidate)?;
        let new_res = rn.norm();
        if !new_res.is_finite() {
            return Err(Error::NonFinite("gauge iteration".into()));
        }
        if new_res > res {
            step *= 0.5;
            trace.push(new_res);
            continue;
        }
        x = candidate;
        psi_t = pt;
        r = rn;
        res = new_res;
        trace.push(res);
    }
    let t = fam.eta.coordinates(&psi_t.coeffs);
    let family_distance = (fam.phi.eval(&t)? - &psi_t.coeffs).norm();
    Ok(GaugeNormalization {
        x,
        psi_tilde: psi_t,
        t,
        residual: res,
        iterations,
        trace,
        family_distance,
    })
}

/// `(ker ∂̄)^⊥ ∩ 𝔤^{1,0}`, the slice in which gauge vectors are sought, as a projector.
pub fn gauge_slice(alg: &LieAlgebra) -> Result<DMatrix<C64>> {
    let s0 = FormSpace::new(alg.n(), 0, 0, ModuleSpec::tangent())?;
    let d0 = assemble(alg, Operator::Delbar, &s0)?;
    let d0p = moore_penrose(&d0, None)?;
    Ok(&d0p.pinv * &d0.matrix)
}

/// One `t_0, X_0 → ψ → (X, t)` round trip.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub t0: Vec<C64>,
    pub x0: Vec<C64>,
    pub normalization: GaugeNormalization,
    /// `max_ν |t_ν − t0_ν|`.
    pub t_error: f64,
}

fn random_vector<R: Rng>(rng: &mut R, len: usize, radius: f64) -> DVector<C64> {
    let v = DVector::from_fn(len, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    v * C64::new(radius * rng.gen_range(0.2..1.0) / norm, 0.0)
}

/// Draws `‖t_0‖, ‖X_0‖ ≤ radius` from `seed`, gauges `φ(t_0)` by `X_0` and normalizes back.
pub fn gauge_roundtrip(alg: &LieAlgebra, fam: &KuranishiFamily, seed: u64, radius: f64, opts: GaugeOptions) -> Result<RoundTrip> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let slice = gauge_slice(alg)?;
    let t0: Vec<C64> = random_vector(&mut rng, fam.r(), radius).iter().copied().collect();
    let raw = &slice * random_vector(&mut rng, alg.n(), 1.0);
    let x0: Vec<C64> = if raw.norm() > 0.0 {
        let scale = radius * rng.gen_range(0.2..1.0) / raw.norm();
        raw.iter().map(|c| c * scale).collect()
    } else {
        raw.iter().copied().collect()
    };
    let phi = fam.eval(&t0)?;
    let psi = apply_gauge(alg, &phi, &x0)?.psi_tilde;
    let normalization = gauge_normalize(alg, fam, &psi, opts)?;
    let t_error = normalization
        .t
        .iter()
        .zip(&t0)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(RoundTrip {
        t0,
        x0,
        normalization,
        t_error,
    })
}
