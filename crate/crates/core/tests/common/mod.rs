#![allow(dead_code)]

use lrs_core::code::LrsCode;
use lrs_core::field::{ExtElement, ExtField, Field};
use lrs_core::sum_rank::BlockVector;
use lrs_oracles::Mat;

/// `m × len` expansion over a prime base field as plain integers.
pub fn expansion(f: &ExtField, block: &[ExtElement]) -> Mat {
    let cols: Vec<Vec<u32>> = block
        .iter()
        .map(|&x| f.ext_expand(x).iter().map(|c| c.index() as u32).collect())
        .collect();
    (0..f.degree()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Sum-rank weight computed with the oracle's own elimination.
pub fn oracle_weight(f: &ExtField, x: &BlockVector) -> usize {
    let p = f.base().characteristic();
    x.blocks().map(|b| lrs_oracles::rank(&expansion(f, b), p)).sum()
}

pub fn oracle_distance(f: &ExtField, x: &BlockVector, y: &BlockVector) -> usize {
    oracle_weight(f, &x.sub(f, y).unwrap())
}

/// Every codeword, by encoding every message.
pub fn all_codewords(code: &LrsCode) -> Vec<BlockVector> {
    let f = code.field();
    let size = f.order() as usize;
    let k = code.k();
    (0..size.pow(k as u32))
        .map(|mut idx| {
            let coeffs = (0..k)
                .map(|_| {
                    let e = f.element((idx % size) as u64);
                    idx /= size;
                    e
                })
                .collect();
            code.encode(&code.message(coeffs).unwrap()).unwrap()
        })
        .collect()
}

/// Every vector of the ambient space.
pub fn all_words(code: &LrsCode) -> Vec<BlockVector> {
    let f = code.field();
    let size = f.order() as usize;
    let n = code.n();
    (0..size.pow(n as u32))
        .map(|mut idx| {
            let data = (0..n)
                .map(|_| {
                    let e = f.element((idx % size) as u64);
                    idx /= size;
                    e
                })
                .collect();
            BlockVector::new(data, code.partition().clone()).unwrap()
        })
        .collect()
}
