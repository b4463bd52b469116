use std::fs;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use gcdxor::{
    avalanche_bytes, chi_square, decrypt_file, encrypt_byte, encrypt_file, substitution_table,
    FlipBit, Histogram,
};
use gcdxor_bench::{random_corpus, text_corpus};

fn per_byte(c: &mut Criterion) {
    c.bench_function("encrypt_byte/all_256", |b| {
        b.iter(|| {
            let mut acc = 0u8;
            for p in 0..=255u8 {
                acc ^= encrypt_byte(black_box(p)).0;
            }
            acc
        })
    });
    c.bench_function("substitution_table", |b| b.iter(substitution_table));
}

fn files(c: &mut Criterion) {
    let dir = tempfile::tempdir().unwrap();
    let mut group = c.benchmark_group("file");
    for &len in &[4 * 1024, 64 * 1024, 1024 * 1024] {
        let src = dir.path().join(format!("src{len}"));
        let ct = dir.path().join(format!("ct{len}"));
        let key = dir.path().join(format!("key{len}"));
        let out = dir.path().join(format!("out{len}"));
        fs::write(&src, random_corpus(len, len as u64)).unwrap();
        group.throughput(Throughput::Bytes(len as u64));
        group.bench_with_input(BenchmarkId::new("encrypt", len), &len, |b, _| {
            b.iter(|| encrypt_file(&src, &ct, &key).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("decrypt", len), &len, |b, _| {
            b.iter(|| decrypt_file(&ct, &key, &out).unwrap())
        });
    }
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let data = text_corpus(64 * 1024);
    let enc: Vec<u8> = data.iter().map(|&b| encrypt_byte(b).0).collect();
    let mut group = c.benchmark_group("analysis");
    group.throughput(Throughput::Bytes(data.len() as u64));
    group.bench_function("histogram+chi_square", |b| {
        b.iter(|| chi_square(&Histogram::from_bytes(&data), &Histogram::from_bytes(&enc)).unwrap())
    });
    group.bench_function("avalanche", |b| {
        b.iter(|| avalanche_bytes(&data, FlipBit::DEFAULT).unwrap())
    });
    group.finish();
}

criterion_group!(benches, per_byte, files, analysis);
criterion_main!(benches);
