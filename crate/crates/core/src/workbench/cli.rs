use super::catalog::catalog;
use super::report::{digest, fmt_complex, Format, Report, Table, TolerancePolicy};
use super::samples::{parse_assignments, parse_samples};
use crate::algebra::{assemble_unvalidated, build_algebra, AlgebraFile, Form, FormSpace, LieAlgebra, ModuleSpec, PolyForm, PolyScalar};
use crate::classes::{
    check_in_base, deform_all, deformed_dim_at, describe, extension_crosscheck, jump_locus, ClassContext, LocusOptions, Sample, BASE_TOL,
};
use crate::error::{Error, Result};
use crate::kuranishi::{gauge_roundtrip, kuranishi_family, FamilyOptions, GaugeOptions, KuranishiFamily, OBSTRUCTION_REL};
use crate::par::Exec;
use crate::spectral::{row_dims, HodgeTable};
use crate::C64;
use clap::{Parser, Subcommand};
use nalgebra::DVector;
use serde_json::{json, Value};
use std::io::Read;
use std::path::Path;

/// Coefficients at or below this magnitude are omitted from printed polynomials.
const PRINT_FLOOR: f64 = 1e-14;

#[derive(Debug, Parser)]
#[command(name = "liedolb", version, about = "Dolbeault cohomology, Kuranishi families and jump loci of Lie algebras")]
struct Cli {
    /// Relative singular-value cut for rank decisions (default max(m,n)·ε).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check antisymmetry, Jacobi, integrability, reality and the metric.
    Validate { file: String },
    /// Dolbeault numbers h^{p,q} (trivial module) or h^{0,q}(E).
    Hodge {
        file: String,
        #[arg(long, default_value = "1")]
        module: String,
    },
    /// Kuranishi family and obstruction polynomials.
    Kuranishi {
        file: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Deform a harmonic basis of H^{0,q}(E) along the Kuranishi family.
    DeformClasses {
        file: String,
        #[arg(long, default_value = "1")]
        module: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Obstruction matrix and sampled rank strata.
    JumpLocus {
        file: String,
        #[arg(long, default_value = "1")]
        module: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long)]
        samples: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Evaluate the family at one parameter value.
    Eval {
        file: String,
        /// Comma-separated NAME=VALUE pairs, e.g. t_23=0.05+0.01i.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        crosscheck: bool,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Gauge a random family member and normalize it back.
    GaugeRoundtrip {
        file: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Print a catalog algebra in canonical JSON.
    Example { name: String },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_json(kind: &str, message: &str, code: i32) -> String {
    let mut s = serde_json::to_string(&json!({ "error": kind, "message": message, "exit_code": code })).expect("error serializes");
    s.push('\n');
    s
}

/// Runs the CLI on `argv` (including the program name).
pub fn run_cli<I, S>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutcome {
                    code: 0,
                    stdout: e.render().to_string(),
                    stderr: String::new(),
                },
                _ => CliOutcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: error_json("UsageError", e.render().to_string().trim(), 2),
                },
            };
        }
    };
    match dispatch(&cli) {
        Ok((out, code)) => CliOutcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            CliOutcome {
                code,
                stdout: String::new(),
                stderr: error_json(e.kind(), &e.to_string(), code),
            }
        }
    }
}

struct Input {
    label: String,
    text: String,
}

fn read_source(file: &str) -> Result<Input> {
    if file == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(Input { label: "-".into(), text });
    }
    if Path::new(file).exists() {
        return Ok(Input {
            label: file.into(),
            text: std::fs::read_to_string(file)?,
        });
    }
    match catalog(file) {
        Ok(alg) => Ok(Input {
            label: file.into(),
            text: AlgebraFile::from_algebra(&alg).to_json(),
        }),
        Err(_) if file.contains('/') || file.ends_with(".json") => Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{file}: no such file"),
        ))),
        Err(e) => Err(e),
    }
}

fn load(file: &str) -> Result<(Input, LieAlgebra)> {
    let input = read_source(file)?;
    let (alg, _) = build_algebra(&input.text)?;
    Ok((input, alg))
}

struct Ctx {
    rel_tol: Option<f64>,
    exec: Exec,
}

impl Ctx {
    fn report(&self, command: &str, input: &Input, extra: &[&[u8]], alg: Option<&LieAlgebra>) -> Report {
        let mut parts: Vec<&[u8]> = vec![input.text.as_bytes()];
        parts.extend_from_slice(extra);
        Report {
            command: command.into(),
            input: input.label.clone(),
            input_digest: digest(&parts),
            tolerance: TolerancePolicy {
                rank_rel_tol: self.rel_tol,
                validation: alg.map_or(0.0, LieAlgebra::tolerance),
                obstruction_prune_rel: OBSTRUCTION_REL,
                base_tol: BASE_TOL,
                print_floor: PRINT_FLOOR,
            },
            results: Value::Null,
            diagnostics: Value::Null,
            tables: Vec::new(),
        }
    }

    fn family(&self, alg: &LieAlgebra, order: usize) -> Result<KuranishiFamily> {
        kuranishi_family(
            alg,
            FamilyOptions {
                order,
                rel_tol: self.rel_tol,
                exec: self.exec,
            },
        )
    }
}

fn cjson(c: C64) -> Value {
    json!([c.re, c.im])
}

fn form_json(f: &Form) -> Value {
    Value::Array(
        f.terms(PRINT_FLOOR)
            .into_iter()
            .map(|(l, c)| json!({ "basis": l.to_string(), "value": cjson(c) }))
            .collect(),
    )
}

fn poly_json(p: &PolyScalar) -> Value {
    p.pruned_abs(PRINT_FLOOR).to_json()
}

/// Nonzero coordinate polynomials of a vector-valued family.
fn components(pf: &PolyForm, space: &FormSpace) -> Vec<(String, PolyScalar)> {
    (0..pf.dim)
        .filter_map(|i| {
            let mut e = DVector::zeros(pf.dim);
            e[i] = C64::new(1.0, 0.0);
            let p = pf.functional(&e).pruned_abs(PRINT_FLOOR);
            (!p.terms.is_empty()).then(|| (space.label(i).to_string(), p))
        })
        .collect()
}

fn component_rows(p: &PolyForm, space: &FormSpace, names: &[String]) -> (Value, Vec<Vec<String>>) {
    let comps = components(p, space);
    let json = comps.iter().map(|(l, p)| json!({ "component": l, "poly": poly_json(p) })).collect();
    let rows = comps.into_iter().map(|(l, p)| vec![l, p.render(names)]).collect();
    (Value::Array(json), rows)
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(Error::Parse(format!("--tol must lie in (0, 1), got {t}")));
        }
    }
    let ctx = Ctx {
        rel_tol: cli.tol,
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
    };
    let mut code = 0;
    let report = match &cli.command {
        Command::Example { name } => {
            let alg = catalog(name)?;
            return Ok((AlgebraFile::from_algebra(&alg).to_json() + "\n", 0));
        }
        Command::Validate { file } => {
            let input = read_source(file)?;
            let alg = assemble_unvalidated(&input.text)?;
            let v = alg.validate();
            if !v.passed() {
                code = 1;
            }
            let mut r = ctx.report("validate", &input, &[], Some(&alg));
            let mut t = Table::new("checks", &["check", "passed", "residual", "witness"]);
            for c in &v.checks {
                t.push(vec![c.kind.to_string(), c.passed.to_string(), format!("{:.3e}", c.residual), c.witness.clone()]);
            }
            r.results = json!({
                "passed": v.passed(),
                "n": alg.n(),
                "generators": alg.names(),
                "reality": alg.has_reality(),
                "checks": v.checks,
            });
            r.tables.push(t);
            r
        }
        Command::Hodge { file, module } => {
            let (input, alg) = load(file)?;
            let module = ModuleSpec::parse(module)?;
            module.check(alg.n())?;
            hodge_report(&ctx, &input, &alg, &module)?
        }
        Command::Kuranishi { file, order } => {
            let (input, alg) = load(file)?;
            let fam = ctx.family(&alg, *order)?;
            kuranishi_report(&ctx, &input, &alg, &fam)
        }
        Command::DeformClasses { file, module, degree, order } => {
            let (input, alg) = load(file)?;
            let module = ModuleSpec::parse(module)?;
            let fam = ctx.family(&alg, *order)?;
            let space = FormSpace::new(alg.n(), 0, *degree, module.clone())?;
            let cctx = ClassContext::new(&alg, &fam, &space, ctx.rel_tol, ctx.exec)?;
            let classes = deform_all(&fam, &cctx, *order, ctx.exec)?;
            let mut r = ctx.report("deform-classes", &input, &[module.to_string().as_bytes(), &degree.to_le_bytes()], Some(&alg));
            let mut t = Table::new("classes", &["class", "exact", "obstruction"]);
            let mut out = Vec::new();
            for (l, c) in classes.iter().enumerate() {
                let (sigma, _) = component_rows(&c.sigma, &space, &fam.param_names);
                let obs: Vec<Value> = c
                    .obstruction
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.terms.is_empty())
                    .map(|(mu, p)| json!({ "class": describe(&cctx.harmonic_next.basis[mu]), "poly": poly_json(p) }))
                    .collect();
                let rendered: Vec<String> = c
                    .obstruction
                    .iter()
                    .filter(|p| !p.terms.is_empty())
                    .map(|p| p.render(&fam.param_names))
                    .collect();
                t.push(vec![
                    format!("{}: {}", l + 1, describe(&c.sigma0)),
                    c.exact.to_string(),
                    if rendered.is_empty() { "0".into() } else { rendered.join("; ") },
                ]);
                out.push(json!({
                    "sigma0": form_json(&c.sigma0),
                    "sigma": sigma,
                    "obstruction": obs,
                    "exact": c.exact,
                }));
            }
            r.results = json!({
                "module": module.to_string(),
                "degree": degree,
                "order": order,
                "parameters": fam.param_names,
                "classes": out,
            });
            r.diagnostics = json!({
                "truncated_at": (!classes.iter().all(|c| c.exact)).then_some(order),
                "harmonic_gaps": cctx.harmonic.gaps,
            });
            r.tables.push(t);
            r
        }
        Command::JumpLocus { file, module, degree, samples, order } => {
            let (input, alg) = load(file)?;
            let module = ModuleSpec::parse(module)?;
            let fam = ctx.family(&alg, *order)?;
            let text = std::fs::read_to_string(samples)?;
            let list = parse_samples(&text, &fam)?;
            let rep = jump_locus(
                &alg,
                &fam,
                &module,
                *degree,
                &list,
                LocusOptions {
                    order: *order,
                    rel_tol: ctx.rel_tol,
                    exec: ctx.exec,
                },
            )?;
            let mut r = ctx.report(
                "jump-locus",
                &input,
                &[module.to_string().as_bytes(), &degree.to_le_bytes(), text.as_bytes()],
                Some(&alg),
            );
            let mut t = Table::new("samples", &["sample", "rank", "dim V", "dim H", "dim H (recursion)", "V_t = V", "identities"]);
            for s in &rep.samples {
                t.push(vec![
                    s.label.clone(),
                    s.rank.to_string(),
                    s.dim_v.to_string(),
                    s.dim_direct.to_string(),
                    s.dim_recursion.to_string(),
                    s.in_base_v.to_string(),
                    s.bookkeeping.all_identities().to_string(),
                ]);
            }
            let mut mt = Table::new("obstruction matrix", &["class", "along", "entry"]);
            for (l, row) in rep.matrix.iter().enumerate() {
                for (mu, p) in row.iter().enumerate() {
                    if !p.terms.is_empty() {
                        mt.push(vec![rep.harmonic_labels[l].clone(), rep.next_labels[mu].clone(), p.render(&fam.param_names)]);
                    }
                }
            }
            r.results = json!({
                "module": module.to_string(),
                "degree": degree,
                "parameters": fam.param_names,
                "classes": rep.harmonic_labels,
                "next_classes": rep.next_labels,
                "matrix": rep.matrix.iter().map(|row| row.iter().map(poly_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "samples": rep.samples,
                "minors": rep.minors.as_ref().map(|ms| ms
                    .iter()
                    .map(|m| json!({ "size": m.size, "generators": m.generators.iter().map(poly_json).collect::<Vec<_>>() }))
                    .collect::<Vec<_>>()),
            });
            r.diagnostics = json!({ "exact": rep.exact, "truncated_at": (!rep.exact).then_some(order) });
            r.tables.push(t);
            r.tables.push(mt);
            r
        }
        Command::Eval { file, at, module, crosscheck, order } => {
            let (input, alg) = load(file)?;
            let fam = ctx.family(&alg, *order)?;
            let t = parse_assignments(at, &fam)?;
            let sample = Sample { label: "at".into(), t };
            check_in_base(&fam, &sample)?;
            let module = match module {
                Some(m) => ModuleSpec::parse(m)?,
                None => ModuleSpec::trivial(),
            };
            module.check(alg.n())?;
            let phi = fam.eval(&sample.t)?;
            let mut r = ctx.report("eval", &input, &[at.as_bytes(), module.to_string().as_bytes()], Some(&alg));
            let (table, gaps) = table_with_gaps(&ctx, &alg, &module, Some(&phi))?;
            let dims = (0..=alg.n())
                .map(|q| deformed_dim_at(&alg, &phi, &module, q, ctx.rel_tol))
                .collect::<Result<Vec<_>>>()?;
            let mut ht = Table::new("deformed dimensions", &hodge_header(alg.n()));
            push_rows(&mut ht, &table);
            let mut bt = Table::new("bookkeeping", &["q", "dim", "h", "v", "v_prev", "identities"]);
            for d in &dims {
                bt.push(vec![d.q.to_string(), d.dim.to_string(), d.h.to_string(), d.v.to_string(), d.v_prev.to_string(), d.all_identities().to_string()]);
            }
            let cross = if *crosscheck {
                let c = extension_crosscheck(&alg, &fam, &sample, ctx.rel_tol, ctx.exec)?;
                let mut ct = Table::new("transported", &hodge_header(alg.n()));
                push_rows(&mut ct, &c.transported);
                r.tables.push(ct);
                if !c.matches {
                    code = 3;
                }
                Some(c)
            } else {
                None
            };
            r.results = json!({
                "t": fam.param_names.iter().zip(&sample.t).map(|(n, c)| json!({ "name": n, "value": cjson(*c) })).collect::<Vec<_>>(),
                "phi": form_json(&phi),
                "obstruction_at": fam.obstruction_at(&sample.t),
                "module": module.to_string(),
                "hodge": table,
                "bookkeeping": dims,
                "crosscheck": cross,
            });
            r.diagnostics = json!({ "gaps": gaps, "exact": fam.exact, "truncated_at": (!fam.exact).then_some(order) });
            r.tables.insert(0, ht);
            r.tables.insert(1, bt);
            r
        }
        Command::GaugeRoundtrip { file, seed, radius, order } => {
            let (input, alg) = load(file)?;
            if !alg.has_reality() {
                return Err(Error::RealityUnavailable);
            }
            let fam = ctx.family(&alg, *order)?;
            let rt = gauge_roundtrip(&alg, &fam, *seed, *radius, GaugeOptions::default())?;
            let mut r = ctx.report("gauge-roundtrip", &input, &[&seed.to_le_bytes(), &radius.to_le_bytes()], Some(&alg));
            let mut t = Table::new("parameters", &["name", "t0", "t"]);
            for (k, name) in fam.param_names.iter().enumerate() {
                t.push(vec![name.clone(), fmt_complex(rt.t0[k]), fmt_complex(rt.normalization.t[k])]);
            }
            let mut s = Table::new("summary", &["t error", "residual", "iterations"]);
            s.push(vec![format!("{:.3e}", rt.t_error), format!("{:.3e}", rt.normalization.residual), rt.normalization.iterations.to_string()]);
            r.results = json!({
                "seed": seed,
                "radius": radius,
                "parameters": fam.param_names,
                "t0": rt.t0.iter().map(|c| cjson(*c)).collect::<Vec<_>>(),
                "x0": rt.x0.iter().map(|c| cjson(*c)).collect::<Vec<_>>(),
                "t": rt.normalization.t.iter().map(|c| cjson(*c)).collect::<Vec<_>>(),
                "x": rt.normalization.x.iter().map(|c| cjson(*c)).collect::<Vec<_>>(),
                "t_error": rt.t_error,
                "residual": rt.normalization.residual,
                "family_distance": rt.normalization.family_distance,
            });
            r.diagnostics = json!({ "iterations": rt.normalization.iterations, "trace": rt.normalization.trace });
            r.tables.push(t);
            r.tables.push(s);
            r
        }
    };
    Ok((report.render(cli.format)?, code))
}

fn hodge_header(n: usize) -> Vec<&'static str> {
    const H: [&str; 10] = ["p", "q=0", "q=1", "q=2", "q=3", "q=4", "q=5", "q=6", "q=7", "q=8"];
    H[..(n + 2).min(H.len())].to_vec()
}

fn push_rows(t: &mut Table, table: &HodgeTable) {
    for (p, row) in table.rows.iter().enumerate() {
        t.push(std::iter::once(p.to_string()).chain(row.iter().map(usize::to_string)).collect());
    }
}

fn table_with_gaps(ctx: &Ctx, alg: &LieAlgebra, module: &ModuleSpec, phi: Option<&Form>) -> Result<(HodgeTable, Value)> {
    let ps: Vec<usize> = if module.is_trivial() { (0..=alg.n()).collect() } else { vec![0] };
    let rows = crate::par::map(ctx.exec, &ps, |&p| row_dims(alg, p, module, phi, ctx.rel_tol, Exec::Sequential))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let gaps = json!(rows.iter().map(|r| &r.gaps).collect::<Vec<_>>());
    Ok((
        HodgeTable {
            module: module.to_string(),
            rows: rows.into_iter().map(|r| r.dims).collect(),
        },
        gaps,
    ))
}

fn hodge_report(ctx: &Ctx, input: &Input, alg: &LieAlgebra, module: &ModuleSpec) -> Result<Report> {
    let (table, gaps) = table_with_gaps(ctx, alg, module, None)?;
    let mut r = ctx.report("hodge", input, &[module.to_string().as_bytes()], Some(alg));
    let mut t = Table::new(&format!("h^{{p,q}}({module})"), &hodge_header(alg.n()));
    push_rows(&mut t, &table);
    r.results = json!({ "module": table.module, "rows": table.rows });
    r.diagnostics = json!({ "gaps": gaps });
    r.tables.push(t);
    Ok(r)
}

fn kuranishi_report(ctx: &Ctx, input: &Input, alg: &LieAlgebra, fam: &KuranishiFamily) -> Report {
    let mut r = ctx.report("kuranishi", input, &[&fam.order.to_le_bytes()], Some(alg));
    let mut pt = Table::new("parameters", &["name", "eta"]);
    for (name, eta) in fam.param_names.iter().zip(&fam.eta.basis) {
        pt.push(vec![name.clone(), describe(eta)]);
    }
    let (phi, phi_rows) = component_rows(&fam.phi, fam.space(), &fam.param_names);
    let mut ft = Table::new("phi", &["component", "polynomial"]);
    for row in phi_rows {
        ft.push(row);
    }
    let mut ot = Table::new("obstruction", &["class", "polynomial"]);
    let obs: Vec<Value> = fam
        .nonzero_obstructions()
        .into_iter()
        .map(|(mu, p)| {
            let class = describe(&fam.eta2.basis[mu]);
            ot.push(vec![class.clone(), p.render(&fam.param_names)]);
            json!({ "class": class, "poly": poly_json(p) })
        })
        .collect();
    r.results = json!({
        "r": fam.r(),
        "order": fam.order,
        "parameters": fam.param_names.iter().zip(&fam.eta.basis).map(|(n, e)| json!({ "name": n, "eta": form_json(e) })).collect::<Vec<_>>(),
        "phi": phi,
        "obstruction": obs,
        "exact": fam.exact,
    });
    r.diagnostics = json!({
        "degree_norms": fam.degree_norms,
        "bracket_constant": fam.bracket_constant,
        "dbar_dagger_norm": fam.dbar_dagger_norm,
        "harmonic_gaps": fam.eta.gaps,
        "truncated_at": (!fam.exact).then_some(fam.order),
    });
    r.tables.extend([pt, ft, ot]);
    r
}
