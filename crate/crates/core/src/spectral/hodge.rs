use super::assemble::{assemble_with, Operator};
use super::pinv::{moore_penrose, SpectralGap};
use crate::algebra::{Form, FormSpace, LieAlgebra, ModuleSpec};
use crate::error::Result;
use crate::par::{self, Exec};
use serde::Serialize;

/// Dimensions of `H^{p,q}` (trivial module, rows `p = 0..=n`) or `H^{0,q}(𝔈)` (one row).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeTable {
    pub module: String,
    pub rows: Vec<Vec<usize>>,
}

impl HodgeTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.rows[p][q]
    }
}

/// Ranks and cohomology dimensions of one row `Λ^{p,•}⊗𝔈` of a complex.
#[derive(Debug, Clone, Serialize)]
pub struct RowDims {
    pub ranks: Vec<usize>,
    pub dims: Vec<usize>,
    pub gaps: Vec<SpectralGap>,
}

/// Cohomology of `(Λ^{p,•}⊗𝔈, ∂̄)` or, with `φ`, of `∂̄_φ`, by rank–nullity.
pub fn row_dims(
    alg: &LieAlgebra,
    p: usize,
    module: &ModuleSpec,
    phi: Option<&Form>,
    rel_tol: Option<f64>,
    exec: Exec,
) -> Result<RowDims> {
    let n = alg.n();
    let spaces: Vec<FormSpace> = (0..=n)
        .map(|q| FormSpace::new(n, p, q, module.clone()))
        .collect::<Result<_>>()?;
    let results = par::map(exec, &spaces, |s| -> Result<(usize, SpectralGap)> {
        let op = match phi {
            Some(f) => Operator::DelbarPhi(f),
            None => Operator::Delbar,
        };
        let m = assemble_with(alg, op, s, Exec::Sequential)?;
        let pi = moore_penrose(&m, rel_tol)?;
        Ok((pi.rank, pi.gap))
    });
    let mut ranks = Vec::with_capacity(n + 1);
    let mut gaps = Vec::with_capacity(n + 1);
    for r in results {
        let (rk, g) = r?;
        ranks.push(rk);
        gaps.push(g);
    }
    let dims = (0..=n)
        .map(|q| {
            let before = if q == 0 { 0 } else { ranks[q - 1] };
            spaces[q].dim() - ranks[q] - before
        })
        .collect();
    Ok(RowDims { ranks, dims, gaps })
}

/// Hodge numbers of `∂̄`.
pub fn hodge_table(alg: &LieAlgebra, module: &ModuleSpec, rel_tol: Option<f64>) -> Result<HodgeTable> {
    hodge_table_with(alg, module, None, rel_tol, Exec::default())
}

/// Hodge numbers of `∂̄` or `∂̄_φ`.
pub fn hodge_table_with(
    alg: &LieAlgebra,
    module: &ModuleSpec,
    phi: Option<&Form>,
    rel_tol: Option<f64>,
    exec: Exec,
) -> Result<HodgeTable> {
    module.check(alg.n())?;
    let ps: Vec<usize> = if module.is_trivial() { (0..=alg.n()).collect() } else { vec![0] };
    let rows = par::map(exec, &ps, |&p| row_dims(alg, p, module, phi, rel_tol, Exec::Sequential).map(|r| r.dims))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(HodgeTable {
        module: module.to_string(),
        rows,
    })
}
