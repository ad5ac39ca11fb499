//! Chunked, order-deterministic Monte Carlo engine.
//!
//! Work is cut into chunks of [`CHUNK_SIZE`] probes. Chunk `c` draws from
//! `stream.substream(c)` and partial results are merged in chunk order, so the
//! output is bit-identical for any number of worker threads.

use crate::estimate::{Estimate, Moments};
use crate::rng::RandomStream;
use rayon::prelude::*;

pub const CHUNK_SIZE: u64 = 4096;

/// Number of chunks covering `n` probes.
pub fn chunk_count(n: u64) -> u64 {
    n.div_ceil(CHUNK_SIZE)
}

/// Runs `kernel(chunk_stream, probes_in_chunk)` for every chunk in parallel and
/// returns the per-chunk results in chunk order.
pub fn map_chunks<A, F>(n: u64, stream: &RandomStream, kernel: F) -> Vec<A>
where
    A: Send,
    F: Fn(RandomStream, usize) -> A + Sync + Send,
{
    (0..chunk_count(n))
        .into_par_iter()
        .map(|c| {
            let len = (n - c * CHUNK_SIZE).min(CHUNK_SIZE) as usize;
            kernel(stream.substream(c), len)
        })
        .collect()
}

/// Mean of `f(x)` over `n` standard normal probes in `R^dim`.
pub fn mean_of<F>(dim: usize, n: u64, stream: &RandomStream, f: F) -> Estimate
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let parts = map_chunks(n, stream, |mut s, len| {
        let mut x = vec![0.0; dim];
        let mut m = Moments::new();
        for _ in 0..len {
            s.fill_normals(&mut x);
            m.push(f(&x));
        }
        m
    });
    let mut total = Moments::new();
    parts.iter().for_each(|p| total.merge(p));
    Estimate::from_moments(&total)
}

/// Proportion of `n` standard normal probes satisfying `pred`.
pub fn proportion_of<F>(dim: usize, n: u64, stream: &RandomStream, pred: F) -> Estimate
where
    F: Fn(&[f64]) -> bool + Sync + Send,
{
    let hits: u64 = map_chunks(n, stream, |mut s, len| {
        let mut x = vec![0.0; dim];
        let mut h = 0u64;
        for _ in 0..len {
            s.fill_normals(&mut x);
            h += pred(&x) as u64;
        }
        h
    })
    .into_iter()
    .sum();
    Estimate::bernoulli(hits, n)
}

/// Means of `k` quantities computed jointly on shared probes; `f` writes the
/// `k` values for a probe into its output slice.
pub fn means_of<F>(dim: usize, k: usize, n: u64, stream: &RandomStream, f: F) -> Vec<Moments>
where
    F: Fn(&[f64], &mut [f64]) + Sync + Send,
{
    let parts = map_chunks(n, stream, |mut s, len| {
        let mut x = vec![0.0; dim];
        let mut out = vec![0.0; k];
        let mut ms = vec![Moments::new(); k];
        for _ in 0..len {
            s.fill_normals(&mut x);
            f(&x, &mut out);
            for (m, &v) in ms.iter_mut().zip(&out) {
                m.push(v);
            }
        }
        ms
    });
    let mut total = vec![Moments::new(); k];
    for p in &parts {
        for (t, m) in total.iter_mut().zip(p) {
            t.merge(m);
        }
    }
    total
}
