mod common;

use common::{algebras, rng};
use liedolb::algebra::{binomial, AlgebraBuilder, AlgebraFile, Factor, Metric};
use liedolb::error::ValidationKind;
use liedolb::workbench::catalog;
use liedolb::{build_algebra, Error, Form, FormSpace, LieAlgebra, ModuleSpec, C64};
use nalgebra::DMatrix;
use rand::Rng;
use std::collections::BTreeSet;

const IWASAWA: &str = r#"{
  "n": 3,
  "reality": true,
  "brackets": [
    {"x": "z1", "y": "z2", "value": [{"gen": "z3", "c": [-1, 0]}]},
    {"x": "zb1", "y": "zb2", "value": [{"gen": "zb3", "c": [-1, 0]}]}
  ]
}"#;

#[test]
fn abelian_is_valid_with_zero_residuals() {
    let (_, report) = build_algebra(r#"{"n": 2, "reality": true}"#).unwrap();
    assert!(report.passed());
    assert!(report.checks.iter().all(|c| c.residual == 0.0));
    assert_eq!(report.checks.len(), 5);
}

#[test]
fn iwasawa_file_matches_catalog() {
    let (alg, report) = build_algebra(IWASAWA).unwrap();
    assert!(report.passed());
    assert_eq!(alg, catalog("iwasawa").unwrap());
}

#[test]
fn mixed_bracket_without_conjugate_breaks_reality() {
    let text = IWASAWA.replace(
        "\"brackets\": [",
        "\"brackets\": [\n    {\"x\": \"z1\", \"y\": \"zb2\", \"value\": [{\"gen\": \"z3\", \"c\": [1, 0]}]},",
    );
    match build_algebra(&text) {
        Err(Error::Validation { kind, residual, .. }) => {
            assert_eq!(kind, ValidationKind::Reality);
            assert!((residual - 1.0).abs() < 1e-12);
        }
        other => panic!("expected reality failure, got {other:?}"),
    }
    let alg = liedolb::algebra::assemble_unvalidated(&text).unwrap();
    assert_eq!(alg.validate().failed_kinds(), vec![ValidationKind::Reality]);
}

/// `[x, y]` straight from the table, written independently of the library.
fn bracket(t: &[C64], d: usize, x: &[C64], y: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d];
    for a in 0..d {
        for b in 0..d {
            let s = x[a] * y[b];
            if s == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..d {
                out[c] += s * t[(a * d + b) * d + c];
            }
        }
    }
    out
}

fn unit(d: usize, a: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[a] = C64::new(1.0, 0.0);
    v
}

/// Brute-force verdicts for every check, in the library's order.
fn oracle(t: &[C64], n: usize, reality: bool, tol: f64) -> Vec<ValidationKind> {
    let d = 2 * n;
    let at = |a: usize, b: usize, c: usize| t[(a * d + b) * d + c];
    let conj = |a: usize| (a + n) % d;
    let mut failed = Vec::new();

    let anti = (0..d)
        .flat_map(|a| (0..d).flat_map(move |b| (0..d).map(move |c| (a, b, c))))
        .map(|(a, b, c)| (at(a, b, c) + at(b, a, c)).norm())
        .fold(0.0, f64::max);
    if anti > tol {
        failed.push(ValidationKind::Antisymmetry);
    }

    let mut jac: f64 = 0.0;
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let (x, y, z) = (unit(d, a), unit(d, b), unit(d, c));
                let j1 = bracket(t, d, &bracket(t, d, &x, &y), &z);
                let j2 = bracket(t, d, &bracket(t, d, &y, &z), &x);
                let j3 = bracket(t, d, &bracket(t, d, &z, &x), &y);
                for e in 0..d {
                    jac = jac.max((j1[e] + j2[e] + j3[e]).norm());
                }
            }
        }
    }
    if jac > tol {
        failed.push(ValidationKind::Jacobi);
    }

    let mut integ: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let same = (a < n) == (b < n);
                if same && (c < n) != (a < n) {
                    integ = integ.max(at(a, b, c).norm());
                }
            }
        }
    }
    if integ > tol {
        failed.push(ValidationKind::Integrability);
    }

    if reality {
        let mut r: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    r = r.max((at(a, b, c).conj() - at(conj(a), conj(b), conj(c))).norm());
                }
            }
        }
        if r > tol {
            failed.push(ValidationKind::Reality);
        }
    }
    failed
}

#[test]
fn perturbations_flag_exactly_the_broken_checks() {
    let mut r = rng(7);
    let mut seen = BTreeSet::new();
    for (name, alg) in algebras() {
        let n = alg.n();
        let d = 2 * n;
        for trial in 0..50 {
            let mut t = alg.table().to_vec();
            let (a, b, c) = (r.gen_range(0..d), r.gen_range(0..d), r.gen_range(0..d));
            let delta = C64::new(1e-3, 0.0);
            t[(a * d + b) * d + c] += delta;
            // Half the time keep antisymmetry, and sometimes the conjugate entry too.
            if trial % 2 == 0 && a != b {
                t[(b * d + a) * d + c] -= delta;
                if trial % 4 == 0 {
                    let cj = |x: usize| (x + n) % d;
                    t[(cj(a) * d + cj(b)) * d + cj(c)] += delta;
                    t[(cj(b) * d + cj(a)) * d + cj(c)] -= delta;
                }
            }
            let pert = LieAlgebra::from_table(n, alg.names().to_vec(), alg.has_reality(), t.clone(), Metric::Orthonormal);
            let got = pert.validate().failed_kinds();
            let want = oracle(&t, n, alg.has_reality(), pert.tolerance());
            assert_eq!(got, want, "{name} trial {trial}: C^{c}_{{{a}{b}}}");
            for k in got {
                seen.insert(k.to_string());
            }
        }
    }
    for k in ["antisymmetry", "jacobi", "integrability", "reality"] {
        assert!(seen.contains(k), "no perturbation exercised {k}");
    }
}

#[test]
fn non_hermitian_or_indefinite_metric_fails() {
    let alg = AlgebraBuilder::new(2).build().unwrap();
    let mut g = DMatrix::<C64>::identity(4, 4);
    g[(0, 1)] = C64::new(0.5, 0.0);
    let report = alg.with_metric(Metric::Gram(g.clone())).validate();
    assert_eq!(report.failed_kinds(), vec![ValidationKind::Metric]);
    g[(1, 0)] = C64::new(0.5, 0.0);
    assert!(alg.with_metric(Metric::Gram(g.clone())).validate().passed());
    g[(0, 1)] = C64::new(2.0, 0.0);
    g[(1, 0)] = C64::new(2.0, 0.0);
    assert_eq!(alg.with_metric(Metric::Gram(g)).validate().failed_kinds(), vec![ValidationKind::Metric]);
}

#[test]
fn catalog_algebras_validate() {
    for (name, alg) in algebras() {
        assert!(alg.validate().passed(), "{name}");
    }
    assert!(matches!(catalog("heisenberg"), Err(Error::UnknownCatalog(_))));
}

#[test]
fn basis_examples() {
    let sp = FormSpace::new(3, 0, 2, ModuleSpec::trivial()).unwrap();
    let labels: Vec<String> = sp.labels().iter().map(|l| l.to_string()).collect();
    assert_eq!(labels, ["zb^12", "zb^13", "zb^23"]);

    let sp = FormSpace::new(3, 0, 1, ModuleSpec::tangent()).unwrap();
    let labels: Vec<String> = sp.labels().iter().map(|l| l.to_string()).collect();
    assert_eq!(labels.len(), 9);
    assert_eq!(labels[0], "zb^1⊗z_1");
    assert_eq!(labels[1], "zb^1⊗z_2");
    assert_eq!(labels[3], "zb^2⊗z_1");

    let sp = FormSpace::new(2, 1, 1, ModuleSpec::cotangent()).unwrap();
    assert_eq!(sp.labels().len(), 8);

    assert!(matches!(
        FormSpace::new(3, 0, 4, ModuleSpec::trivial()),
        Err(Error::BidegreeOutOfRange { .. })
    ));
}

#[test]
fn basis_is_a_bijection_with_product_dimension() {
    let modules = ["1", "T", "T^", "W0", "W2", "T*T^", "W1*T", "T^*T^"];
    for n in 1..=3 {
        for m in modules {
            let module = ModuleSpec::parse(m).unwrap();
            if module.check(n).is_err() {
                continue;
            }
            for p in 0..=n {
                for q in 0..=n {
                    let sp = FormSpace::new(n, p, q, module.clone()).unwrap();
                    assert_eq!(sp.dim(), binomial(n, p) * binomial(n, q) * module.dim(n));
                    let labels = sp.labels();
                    assert_eq!(labels, sp.labels(), "labels are stable");
                    let distinct: BTreeSet<String> = labels.iter().map(|l| l.to_string()).collect();
                    assert_eq!(distinct.len(), labels.len());
                    for (i, l) in labels.iter().enumerate() {
                        assert_eq!(sp.index_of(l), Some(i));
                        assert!(l.one_zero.windows(2).all(|w| w[0] < w[1]));
                        assert!(l.zero_one.windows(2).all(|w| w[0] < w[1]));
                    }
                }
            }
        }
    }
}

#[test]
fn module_grammar() {
    let m = ModuleSpec::parse("T * T^ * W2").unwrap();
    assert_eq!(m.factors(), &[Factor::T, Factor::TDual, Factor::Wedge(2)]);
    assert_eq!(m.dim(3), 27);
    assert_eq!(m.to_string().parse::<ModuleSpec>().unwrap(), m);
    assert!(ModuleSpec::parse("1").unwrap().is_trivial());
    assert!(ModuleSpec::parse("W4").unwrap().check(3).is_err());
    for bad in ["", "X", "T**T", "W", "Wx"] {
        assert!(matches!(ModuleSpec::parse(bad), Err(Error::Parse(_))), "{bad:?}");
    }
}

#[test]
fn conjugation_examples() {
    let iw = catalog("iwasawa").unwrap();
    let one0 = FormSpace::new(3, 1, 0, ModuleSpec::trivial()).unwrap();
    let z1 = Form::basis(one0, 0);
    let c = iw.conjugate_form(&z1).unwrap();
    assert_eq!((c.space.p, c.space.q), (0, 1));
    assert_eq!(c.terms(0.0).len(), 1);
    assert_eq!(c.terms(0.0)[0].0.to_string(), "zb^1");

    let zero2 = FormSpace::new(3, 0, 2, ModuleSpec::trivial()).unwrap();
    let f = Form::basis(zero2, 0).scale(C64::new(0.0, 1.0));
    let c = iw.conjugate_form(&f).unwrap();
    let terms = c.terms(0.0);
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].0.to_string(), "z^12");
    assert_eq!(terms[0].1, C64::new(0.0, -1.0));

    let mixed = FormSpace::new(3, 1, 1, ModuleSpec::trivial()).unwrap();
    let f = Form::basis(mixed.clone(), mixed.index_of_parts(0b001, 0b010, 0).unwrap());
    let c = iw.conjugate_form(&f).unwrap();
    assert_eq!(c.terms(0.0)[0].1, C64::new(-1.0, 0.0), "z^1∧zb^2 conjugates to -z^2∧zb^1");
    assert_eq!(iw.conjugate_form(&c).unwrap(), f);

    let nak = catalog("nakamura").unwrap();
    let e1 = Form::basis(FormSpace::new(3, 1, 0, ModuleSpec::trivial()).unwrap(), 0);
    assert!(matches!(nak.conjugate_form(&e1), Err(Error::RealityUnavailable)));

    let t = Form::basis(FormSpace::new(3, 0, 1, ModuleSpec::tangent()).unwrap(), 0);
    assert!(matches!(iw.conjugate_form(&t), Err(Error::ModuleNotSelfConjugate)));
}

#[test]
fn file_round_trip() {
    for (name, alg) in algebras() {
        let text = AlgebraFile::from_algebra(&alg).to_json();
        let (back, _) = build_algebra(&text).unwrap();
        assert_eq!(back, alg, "{name}");
    }
    let kt = catalog("kodaira_thurston").unwrap();
    let mut g = DMatrix::<C64>::identity(4, 4);
    g[(0, 1)] = C64::new(0.25, 0.1);
    g[(1, 0)] = C64::new(0.25, -0.1);
    g[(2, 3)] = C64::new(0.25, -0.1);
    g[(3, 2)] = C64::new(0.25, 0.1);
    let weighted = kt.with_metric(Metric::Gram(g));
    assert!(weighted.validate().passed());
    let (back, _) = build_algebra(&AlgebraFile::from_algebra(&weighted).to_json()).unwrap();
    assert_eq!(back, weighted);
}

#[test]
fn parse_errors() {
    let cases = [
        "not json",
        r#"{"n": 2, "brackets": [{"x": "z1", "y": "q", "value": []}]}"#,
        r#"{"n": 2, "metric": "round"}"#,
        r#"{"n": 2, "metric": [[[1, 0]]]}"#,
        r#"{"n": 2, "generators": ["a", "a", "b", "c"]}"#,
        r#"{"n": 2, "color": "red"}"#,
        r#"{"n": 0}"#,
    ];
    for text in cases {
        assert!(matches!(build_algebra(text), Err(Error::Parse(_))), "{text}");
    }
}
