use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::Rng;
use std::hint::black_box;

use bicm_core::channel::{apply_channel, draw_channel};
use bicm_core::ldpc::{build_code, BpDecoder};
use bicm_core::link::{ergodic_samples, llr_values};
use bicm_core::quant::design_boundaries_empirical;
use bicm_core::special::bessel_k0;
use bicm_core::{Constellation, ConstellationKind, Domain, Fading, LinkConfig, MasterSeed, MaxLogDemodulator};

fn maxlog(c: &mut Criterion) {
    let link = LinkConfig::new(2, 2, 0.1, ConstellationKind::Qam16Gray, Fading::Ergodic).unwrap();
    let cons = Constellation::new(ConstellationKind::Qam16Gray);
    let mut rng = MasterSeed(1).stream(Domain::Test, 0);
    let h = draw_channel(&link, &mut rng);
    let x = vec![cons.points()[3], cons.points()[9]];
    let y = apply_channel(&h, &x, link.sigma2, &mut rng).unwrap();
    let mut demod = MaxLogDemodulator::new(cons, 2);
    let mut out = vec![0.0; 8];
    c.bench_function("maxlog_2x2_16qam", |b| {
        b.iter(|| demod.demodulate_into(black_box(&y), &h, link.sigma2, &mut out).unwrap())
    });
}

fn bp(c: &mut Criterion) {
    let code = build_code(8000, 3, 6, MasterSeed(1)).unwrap();
    let mut dec = BpDecoder::new(&code);
    let mut rng = MasterSeed(2).stream(Domain::Test, 0);
    // all-zero codeword over BPSK/AWGN near the waterfall
    let llrs: Vec<f64> = (0..code.n()).map(|_| -2.0 + 2.0 * rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
    c.bench_function("bp_decode_n8000", |b| b.iter(|| dec.decode(black_box(&llrs), 50)));
}

fn k0(c: &mut Criterion) {
    let xs: Vec<f64> = (1..=1000).map(|i| i as f64 * 0.01).collect();
    c.bench_function("bessel_k0_x1000", |b| b.iter(|| xs.iter().map(|&x| bessel_k0(black_box(x))).sum::<f64>()));
}

fn boundaries(c: &mut Criterion) {
    let link = LinkConfig::new(2, 2, 0.1, ConstellationKind::Qam16Gray, Fading::Ergodic).unwrap();
    let llrs = llr_values(&ergodic_samples(&link, MasterSeed(3), Domain::Test, 12_500).unwrap());
    c.bench_function("equiprobable_boundaries_k8_1e5", |b| {
        b.iter_batched(|| llrs.clone(), |l| design_boundaries_empirical(&l, 8).unwrap(), BatchSize::LargeInput)
    });
}

criterion_group!(benches, maxlog, bp, k0, boundaries);
criterion_main!(benches);
