//! Axiom-suite throughput with and without the rayon pool.  The checks are
//! independent samples of the same laws, so this measures pure scheduling
//! overhead against parallel speedup on the heaviest realistic workload.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pseudoalg::hopf::HCtx;
use pseudoalg::lie::LieAlgebra;
use pseudoalg::par::Parallelism;
use pseudoalg::pseudo::{verify_axioms, PseudoAlgebra};
use pseudoalg::sample::SampleCfg;

fn verify_modes(c: &mut Criterion) {
    let ctx = HCtx::new(LieAlgebra::nonabelian2()).unwrap();
    let alg = PseudoAlgebra::cend(ctx, 1);
    let cfg = SampleCfg {
        max_deg: 3,
        samples: 8,
        seed: 17,
    };

    let mut group = c.benchmark_group("verify_axioms");
    group.sample_size(10);
    for (name, mode) in [
        ("sequential", Parallelism::Sequential),
        ("rayon", Parallelism::Rayon),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, mode| {
            b.iter(|| {
                let report = verify_axioms(&alg, &cfg, *mode).unwrap();
                assert!(report.ok);
                report
            })
        });
    }
    group.finish();
}

criterion_group!(benches, verify_modes);
criterion_main!(benches);
