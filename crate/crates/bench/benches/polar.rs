use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cqpolar::channels::{bob_channel, build_channel};
use cqpolar::polarize::evolve_scalar;
use cqpolar::qpolar::{encode, monte_carlo_classical, monte_carlo_quantum};
use cqpolar::wiretap::{partition_channels, WiretapCode};
use cqpolar::{ChannelFamilySpec, CqChannel, EvolveMode};

fn bench_encode(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let u: Vec<u8> = (0..1 << 20).map(|_| rng.random_range(0..2)).collect();
    c.bench_function("encode 2^20", |b| {
        b.iter_batched(|| u.clone(), |u| encode(&u).unwrap(), BatchSize::LargeInput)
    });
}

fn bench_evolve(c: &mut Criterion) {
    let w = CqChannel::bec(0.5).unwrap();
    c.bench_function("evolve_scalar BEC n=16", |b| {
        b.iter(|| evolve_scalar(&w, 16, EvolveMode::ExactClassical).unwrap())
    });
    let ad =
        bob_channel(&build_channel(&ChannelFamilySpec::amplitude_damping(0.1)).unwrap()).unwrap();
    c.bench_function("evolve_scalar bounds AD n=16", |b| {
        b.iter(|| evolve_scalar(&ad, 16, EvolveMode::FidelityBounds).unwrap())
    });
}

fn code_for(spec: &ChannelFamilySpec, n: usize) -> (CqChannel, WiretapCode) {
    let ch = build_channel(spec).unwrap();
    let bob = bob_channel(&ch).unwrap();
    let eve = cqpolar::channels::eve_channel(&ch).unwrap();
    let (p, _) = partition_channels(&bob, &eve, n, 0.2).unwrap();
    (bob, WiretapCode::new(p, 1))
}

fn bench_decoders(c: &mut Criterion) {
    let (bec, code) = code_for(&ChannelFamilySpec::erasure(0.25), 10);
    c.bench_function("classical SC N=1024, 100 trials", |b| {
        b.iter(|| monte_carlo_classical(&bec, &code, 100, 3).unwrap())
    });
    let (ad, code) = code_for(&ChannelFamilySpec::amplitude_damping(0.1), 3);
    c.bench_function("quantum SC N=8, 100 trials", |b| {
        b.iter(|| monte_carlo_quantum(&ad, &code, 100, 3).unwrap())
    });
}

criterion_group!(benches, bench_encode, bench_evolve, bench_decoders);
criterion_main!(benches);
