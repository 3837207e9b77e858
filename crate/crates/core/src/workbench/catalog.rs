use crate::algebra::{AlgebraBuilder, LieAlgebra};
use crate::error::{Error, Result};
use crate::C64;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 4] = ["abelian:n", "iwasawa", "kodaira_thurston", "nakamura"];

/// Abelian algebra `ℂ^{2n}` with the standard complex structure.
pub fn abelian(n: usize) -> Result<LieAlgebra> {
    AlgebraBuilder::new(n).reality(true).build()
}

/// Iwasawa: `[z_1, z_2] = −z_3` and its conjugate.
pub fn iwasawa() -> LieAlgebra {
    AlgebraBuilder::new(3)
        .reality(true)
        .bracket(0, 1, &[(2, c(-1.0, 0.0))])
        .build()
        .expect("iwasawa validates")
}

/// Kodaira–Thurston: `[z_1, z̄_1] = i z_2 + i z̄_2`.
pub fn kodaira_thurston() -> LieAlgebra {
    AlgebraBuilder::new(2)
        .reality(true)
        .bracket(0, 2, &[(1, c(0.0, 1.0)), (3, c(0.0, 1.0))])
        .build()
        .expect("kodaira-thurston validates")
}

/// Frame of the Nakamura solvmanifold: `[e_1, e_2] = −e_2`, `[e_1, e_3] = e_3`,
/// `[e_1, f_2] = −f_2`, `[e_1, f_3] = f_3`; no reality structure.
pub fn nakamura() -> LieAlgebra {
    AlgebraBuilder::new(3)
        .names(["e1", "e2", "e3", "f1", "f2", "f3"])
        .bracket(0, 1, &[(1, c(-1.0, 0.0))])
        .bracket(0, 2, &[(2, c(1.0, 0.0))])
        .bracket(0, 4, &[(4, c(-1.0, 0.0))])
        .bracket(0, 5, &[(5, c(1.0, 0.0))])
        .build()
        .expect("nakamura validates")
}

/// Looks up a catalog algebra: `abelian:n` (or `abelianN`), `iwasawa`,
/// `kodaira_thurston`, `nakamura`.
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let key = name.trim().to_ascii_lowercase().replace('-', "_");
    if let Some(rest) = key.strip_prefix("abelian") {
        let digits = rest.strip_prefix(':').unwrap_or(rest);
        let n: usize = digits.parse().map_err(|_| Error::UnknownCatalog(name.to_string()))?;
        if n == 0 || n > 8 {
            return Err(Error::UnknownCatalog(name.to_string()));
        }
        return abelian(n);
    }
    match key.as_str() {
        "iwasawa" => Ok(iwasawa()),
        "kodaira_thurston" | "kt" => Ok(kodaira_thurston()),
        "nakamura" => Ok(nakamura()),
        _ => Err(Error::UnknownCatalog(name.to_string())),
    }
}
