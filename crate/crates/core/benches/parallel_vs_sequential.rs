use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liedolb::classes::{jump_locus, LocusOptions, Sample};
use liedolb::kuranishi::{kuranishi_family, FamilyOptions};
use liedolb::par::Exec;
use liedolb::spectral::{assemble_with, hodge_table_with, Operator};
use liedolb::workbench::catalog;
use liedolb::{FormSpace, ModuleSpec, C64};
use rand::{Rng, SeedableRng};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn assembly(c: &mut Criterion) {
    let alg = catalog("abelian:5").unwrap();
    let space = FormSpace::new(5, 2, 2, ModuleSpec::parse("T*W1").unwrap()).unwrap();
    let mut g = c.benchmark_group("assemble delbar abelian:5 (2,2) T*W1");
    for (label, exec) in MODES {
        g.bench_function(label, |b| b.iter(|| assemble_with(black_box(&alg), Operator::Delbar, &space, exec).unwrap()));
    }
    g.finish();
}

fn kuranishi(c: &mut Criterion) {
    let mut g = c.benchmark_group("kuranishi family");
    g.sample_size(20);
    for name in ["iwasawa", "nakamura"] {
        let alg = catalog(name).unwrap();
        for (label, exec) in MODES {
            let opts = FamilyOptions { order: 8, exec, ..Default::default() };
            g.bench_with_input(BenchmarkId::new(label, name), &alg, |b, alg| b.iter(|| kuranishi_family(alg, opts).unwrap()));
        }
    }
    g.finish();
}

fn hodge(c: &mut Criterion) {
    let alg = catalog("iwasawa").unwrap();
    let fam = kuranishi_family(&alg, FamilyOptions::default()).unwrap();
    let t: Vec<C64> = (0..fam.r()).map(|k| C64::new(0.01 * (k + 1) as f64, -0.005)).collect();
    let phi = fam.eval(&t).unwrap();
    let mut g = c.benchmark_group("deformed hodge table iwasawa");
    g.sample_size(20);
    for (label, exec) in MODES {
        g.bench_function(label, |b| b.iter(|| hodge_table_with(&alg, &ModuleSpec::trivial(), Some(black_box(&phi)), None, exec).unwrap()));
    }
    g.finish();
}

fn locus(c: &mut Criterion) {
    let alg = catalog("iwasawa").unwrap();
    let fam = kuranishi_family(&alg, FamilyOptions::default()).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let samples: Vec<Sample> = (0..32)
        .map(|i| Sample {
            label: format!("s{i}"),
            t: (0..fam.r()).map(|_| C64::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05))).collect(),
        })
        .collect();
    let mut g = c.benchmark_group("jump locus iwasawa T q=1, 32 samples");
    g.sample_size(10);
    for (label, exec) in MODES {
        let opts = LocusOptions { exec, ..Default::default() };
        g.bench_function(label, |b| b.iter(|| jump_locus(&alg, &fam, &ModuleSpec::tangent(), 1, black_box(&samples), opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, assembly, kuranishi, hodge, locus);
criterion_main!(benches);
