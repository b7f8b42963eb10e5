// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use wordpack::container::{self, Deflate};
use wordpack::{decode, detokenize, encode, estimate, tokenize, EncodeOptions};
use wordpack_bench::corpus;

fn stages(c: &mut Criterion) {
    let (text, dict) = corpus(8);
    let tokens = tokenize(&text);
    let payload = encode(&tokens, &dict).unwrap();
    let plain = container::compress(
        &text,
        &dict,
        EncodeOptions {
            second_stage: false,
        },
    )
    .unwrap();
    let deflated = container::compress(&text, &dict, EncodeOptions { second_stage: true }).unwrap();

    let mut g = c.benchmark_group("stages");
    g.throughput(Throughput::Bytes(text.len() as u64));
    g.bench_function("tokenize", |b| b.iter(|| tokenize(black_box(&text))));
    g.bench_function("detokenize", |b| {
        b.iter(|| detokenize(black_box(&tokens)).unwrap())
    });
    g.bench_function("estimate", |b| {
        b.iter(|| estimate(black_box(&tokens), &dict).unwrap())
    });
    g.bench_function("encode", |b| {
        b.iter(|| encode(black_box(&tokens), &dict).unwrap())
    });
    g.bench_function("decode", |b| {
        b.iter(|| decode(black_box(&payload.bits), &dict).unwrap())
    });
    g.finish();

    let mut g = c.benchmark_group("container");
    g.throughput(Throughput::Bytes(text.len() as u64));
    for (name, second_stage) in [("plain", false), ("deflate", true)] {
        g.bench_function(format!("compress/{name}"), |b| {
            b.iter(|| {
                container::compress(black_box(&text), &dict, EncodeOptions { second_stage })
                    .unwrap()
            })
        });
    }
    g.bench_function("decompress/plain", |b| {
        b.iter(|| container::decompress(black_box(&plain), &dict).unwrap())
    });
    g.bench_function("decompress/deflate", |b| {
        b.iter(|| container::decompress(black_box(&deflated), &dict).unwrap())
    });
    g.bench_function("deflate only", |b| {
        use wordpack::SecondStage;
        b.iter(|| Deflate::default().deflate(black_box(&text)))
    });
    g.finish();
}

fn lookup(c: &mut Criterion) {
    let (text, dict) = corpus(1);
    let words = wordpack::tokenizer::vocabulary(&tokenize(&text));
    c.bench_function("lookup_code", |b| {
        b.iter(|| {
            for w in &words {
                black_box(dict.lookup_code(w, true));
            }
        })
    });
}

criterion_group!(benches, stages, lookup);
criterion_main!(benches);
