use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use hopfc_bench::{rewriting_inputs, trefoil_presentation};
use hopfc_core::corpus::{random_pure_braid, rng, trefoil_plus_one};
use hopfc_core::eval::Evaluator;
use hopfc_core::kirby::uniform_alpha;
use hopfc_core::oracle::{check_retraction, RibbonModule};
use hopfc_core::tangle::{braid_to_tangle, extract_presentation, to_handle, Mode};
use hopfc_core::{builtin_bundle, canonicalize, eliminate_antipodes, invariant_tau, psi_full};

fn rewriting(c: &mut Criterion) {
    let terms = rewriting_inputs(100);
    c.bench_function("eliminate_antipodes x100", |b| {
        b.iter(|| terms.iter().map(|t| eliminate_antipodes(black_box(t)).len()).sum::<usize>())
    });
    c.bench_function("canonicalize x100", |b| b.iter(|| terms.iter().map(|t| canonicalize(black_box(t)).len()).sum::<usize>()));
}

fn translation(c: &mut Criterion) {
    let t = trefoil_plus_one();
    c.bench_function("extract trefoil", |b| b.iter(|| extract_presentation(black_box(&t)).unwrap()));
    let p = trefoil_presentation();
    c.bench_function("psi_full trefoil", |b| b.iter(|| psi_full(black_box(&p)).unwrap()));
}

fn evaluation(c: &mut Criterion) {
    let bundle = builtin_bundle("zmod4").unwrap();
    let p = trefoil_presentation();
    let d = psi_full(&p).unwrap();
    c.bench_function("eval_diagram trefoil zmod4", |b| {
        b.iter_batched(|| Evaluator::new(&bundle), |ev| ev.eval_diagram(black_box(&d)), BatchSize::SmallInput)
    });
    let alpha = uniform_alpha(bundle.dim);
    c.bench_function("invariant_tau trefoil zmod4", |b| b.iter(|| invariant_tau(black_box(&p), &alpha, &bundle).unwrap()));
    c.bench_function("check_retraction trefoil zmod4", |b| b.iter(|| check_retraction(black_box(&p), &bundle).unwrap()));
}

fn tangles(c: &mut Criterion) {
    let m = RibbonModule::from_test_module(&builtin_bundle("zmod3").unwrap().modules[0]).unwrap();
    let braid = braid_to_tangle(&random_pure_braid(&mut rng(5), 4, 6, true));
    let handle = to_handle(&braid).unwrap();
    let mut g = c.benchmark_group("tangle evaluation");
    g.bench_function("network string link", |b| b.iter(|| m.evaluate(black_box(&braid), Mode::StringLink).unwrap()));
    g.bench_function("sweep string link", |b| b.iter(|| m.evaluate_sweep(black_box(&braid), Mode::StringLink).unwrap()));
    g.bench_function("network handle", |b| b.iter(|| m.evaluate(black_box(&handle), Mode::Handle).unwrap()));
    g.finish();
}

criterion_group!(benches, rewriting, translation, evaluation, tangles);
criterion_main!(benches);
