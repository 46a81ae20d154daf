use std::hint::black_box;

use actfloor_core::actsim::{bi_rrt_path, simulate, BiRrtParams, Partition, Scene};
use actfloor_core::furnish::{place_primary_furniture, PlacementPolicy};
use actfloor_core::grid::{Mask, Pos, Rect};
use actfloor_core::metrics::{hu_distance, nmi};
use actfloor_core::synth;
use actfloor_core::vectorize::vectorize;
use criterion::{criterion_group, criterion_main, Criterion};

fn scene(seed: u64) -> Scene {
    let fp = synth::floorplan(seed);
    let furniture = place_primary_furniture(&fp, &PlacementPolicy::default(), seed).unwrap();
    Scene::from_floorplan(&fp, &furniture).unwrap()
}

fn rrt(c: &mut Criterion) {
    // open square with a wall across the middle, gap at the bottom
    let wall = Rect::new(126, 0, 4, 200);
    let free = Mask::from_fn(256, 256, |p| !wall.contains(p));
    let params = BiRrtParams::default();
    c.bench_function("bi_rrt_path around a wall", |b| {
        b.iter(|| {
            bi_rrt_path(
                &free,
                Pos::new(20, 40),
                Pos::new(230, 40),
                &params,
                black_box(3),
            )
        })
    });
    let s = scene(5);
    let living = s.free_mask(Partition::Living).clone();
    let pts: Vec<Pos> = living.set_positions().step_by(997).take(2).collect();
    c.bench_function("bi_rrt_path in a living area", |b| {
        b.iter(|| bi_rrt_path(&living, pts[0], pts[1], &params, black_box(3)))
    });
}

fn activity(c: &mut Criterion) {
    let s = scene(7);
    let params = BiRrtParams::default();
    c.bench_function("simulate one plan", |b| {
        b.iter(|| simulate(&s, &params, black_box(1)).unwrap())
    });
}

fn vectorization(c: &mut Criterion) {
    let fp = synth::floorplan(9);
    let map = simulate(&scene(9), &BiRrtParams::default(), 0).unwrap().map;
    c.bench_function("vectorize one plan", |b| {
        b.iter(|| vectorize(black_box(fp.category()), &map).unwrap())
    });
}

fn metrics(c: &mut Criterion) {
    let a = simulate(&scene(11), &BiRrtParams::default(), 0)
        .unwrap()
        .map;
    let b = simulate(&scene(12), &BiRrtParams::default(), 0)
        .unwrap()
        .map;
    c.bench_function("nmi 256x256", |bench| {
        bench.iter(|| nmi(black_box(&a), &b).unwrap())
    });
    let x = synth::floorplan(11);
    let y = synth::floorplan(12);
    c.bench_function("hu_distance 256x256", |bench| {
        bench.iter(|| hu_distance(black_box(x.inside()), y.inside()).unwrap())
    });
}

criterion_group!(benches, rrt, activity, vectorization, metrics);
criterion_main!(benches);
