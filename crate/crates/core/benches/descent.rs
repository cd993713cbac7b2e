//! Sequential against pooled descent on cubes, cross-polytopes and a
//! three-candidate voting polytope.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polyvol::descent::{descend_with, DescentOptions};
use polyvol::linalg::Rat;
use polyvol::polytope::{
    dual_convert, ConstraintSystem, HomogenizedPolytope, PolytopeInput, VDescription,
};
use polyvol::voting::{build_event, EventKind, Rule, VotingEvent};
use polyvol::Int;

fn cube(d: usize) -> HomogenizedPolytope {
    let mut inequalities = Vec::new();
    for i in 0..d {
        let mut lo = vec![Int::from(0); d + 1];
        lo[i] = Int::from(1);
        let mut hi = vec![Int::from(0); d + 1];
        hi[i] = Int::from(-1);
        hi[d] = Int::from(1);
        inequalities.push(lo);
        inequalities.push(hi);
    }
    let mut grading_form = vec![Int::from(0); d + 1];
    grading_form[d] = Int::from(1);
    let sys = ConstraintSystem {
        ambient_dim: d + 1,
        inequalities,
        equations: Vec::new(),
        grading_form,
    };
    dual_convert(&PolytopeInput::H(sys)).unwrap()
}

fn cross(d: usize) -> HomogenizedPolytope {
    let mut points = Vec::new();
    for i in 0..d {
        for s in [1, -1] {
            let mut v = vec![Rat::from_integer(Int::from(0)); d];
            v[i] = Rat::from_integer(Int::from(s));
            points.push(v);
        }
    }
    dual_convert(&PolytopeInput::V(VDescription {
        ambient_dim: d,
        points,
    }))
    .unwrap()
}

fn strong_borda() -> HomogenizedPolytope {
    let ev = VotingEvent::new(
        4,
        EventKind::ReverseStrongBorda {
            rule: Rule::Plurality,
        },
    );
    dual_convert(&PolytopeInput::H(build_event(&ev).unwrap())).unwrap()
}

fn bench(c: &mut Criterion) {
    let cases = [
        ("cube-9", cube(9)),
        ("cross-9", cross(9)),
        ("reverse-strong-borda-pr", strong_borda()),
    ];
    let mut group = c.benchmark_group("descent");
    group.sample_size(10);
    for (name, p) in &cases {
        for (mode, threads) in [("sequential", 1), ("parallel", 0)] {
            let options = DescentOptions {
                threads,
                ..DescentOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(mode, name), p, |b, p| {
                b.iter(|| descend_with(p, &options).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
