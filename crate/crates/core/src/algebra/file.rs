use super::{AlgebraBuilder, LieAlgebra, Metric, ValidationReport};
use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// One term `c · gen` of a bracket value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub gen: String,
    pub c: [f64; 2],
}

/// `[x, y] = Σ value`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub x: String,
    pub y: String,
    pub value: Vec<TermEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum MetricEntry {
    Named(String),
    Gram(Vec<Vec<[f64; 2]>>),
}

/// On-disk algebra description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub reality: bool,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricEntry>,
}

impl AlgebraFile {
    pub fn builder(&self) -> Result<AlgebraBuilder> {
        let n = self.n;
        let mut b = AlgebraBuilder::new(n).reality(self.reality);
        if let Some(g) = &self.generators {
            if g.len() != 2 * n {
                return Err(Error::Parse(format!("expected {} generator names, got {}", 2 * n, g.len())));
            }
            let mut sorted = g.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != g.len() {
                return Err(Error::Parse("generator names must be distinct".into()));
            }
            b = b.names(g.clone());
        }
        let names = b.names.clone();
        let lookup = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{s}`")))
        };
        for br in &self.brackets {
            let x = lookup(&br.x)?;
            let y = lookup(&br.y)?;
            let mut value = Vec::new();
            for t in &br.value {
                if !t.c[0].is_finite() || !t.c[1].is_finite() {
                    return Err(Error::Parse(format!("non-finite coefficient in [{},{}]", br.x, br.y)));
                }
                value.push((lookup(&t.gen)?, C64::new(t.c[0], t.c[1])));
            }
            b = b.bracket(x, y, &value);
        }
        match &self.metric {
            None => {}
            Some(MetricEntry::Named(s)) if s == "orthonormal" => {}
            Some(MetricEntry::Named(s)) => return Err(Error::Parse(format!("unknown metric `{s}`"))),
            Some(MetricEntry::Gram(rows)) => {
                let d = 2 * n;
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::Parse(format!("metric must be {d}x{d}")));
                }
                let g = DMatrix::from_fn(d, d, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
                b = b.metric(Metric::Gram(g));
            }
        }
        Ok(b)
    }

    /// Canonical description: every nonzero bracket `[g_a, g_b]` with `a < b`.
    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let d = alg.dim();
        let names = alg.names();
        let mut brackets = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let value: Vec<TermEntry> = (0..d)
                    .filter(|&c| alg.c(a, b, c) != C64::new(0.0, 0.0))
                    .map(|c| {
                        let v = alg.c(a, b, c);
                        TermEntry {
                            gen: names[c].clone(),
                            c: unsigned_zero(v),
                        }
                    })
                    .collect();
                if !value.is_empty() {
                    brackets.push(BracketEntry {
                        x: names[a].clone(),
                        y: names[b].clone(),
                        value,
                    });
                }
            }
        }
        let metric = match alg.metric() {
            Metric::Orthonormal => MetricEntry::Named("orthonormal".into()),
            Metric::Gram(g) => MetricEntry::Gram(
                (0..d).map(|i| (0..d).map(|j| unsigned_zero(g[(i, j)])).collect()).collect(),
            ),
        };
        Self {
            n: alg.n(),
            generators: Some(names.to_vec()),
            reality: alg.has_reality(),
            brackets,
            metric: Some(metric),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra file serializes")
    }
}

/// Parses a JSON description, assembles the algebra and validates it.
///
/// Returns the first failing check as [`Error::Validation`]; the full report
/// is available through [`LieAlgebra::validate`].
pub fn build_algebra(text: &str) -> Result<(LieAlgebra, ValidationReport)> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let alg = file.builder()?.assemble()?;
    let report = alg.validate();
    if let Some(e) = report.first_error() {
        return Err(e);
    }
    Ok((alg, report))
}

/// Parses and assembles without rejecting invalid algebras.
pub fn assemble_unvalidated(text: &str) -> Result<LieAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.builder()?.assemble()
}

/// `[re, im]` with `-0.0` written as `0.0`, so the canonical form is sign-stable.
fn unsigned_zero(c: C64) -> [f64; 2] {
    [c.re + 0.0, c.im + 0.0]
}
