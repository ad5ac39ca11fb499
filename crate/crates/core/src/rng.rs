//! Counter-based random streams (Philox4x32-10).
//!
//! A stream is the triple `(seed, stream_id, counter)`. Block `c` of stream `s`
//! is `philox(key = seed, ctr = (c, s))`, so any block is addressable without
//! generating its predecessors and distinct stream ids never share counter state.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;

#[inline(always)]
fn round(c: [u32; 4], k: [u32; 2]) -> [u32; 4] {
    let p0 = (M0 as u64) * (c[0] as u64);
    let p1 = (M1 as u64) * (c[2] as u64);
    [
        ((p1 >> 32) as u32) ^ c[1] ^ k[0],
        p1 as u32,
        ((p0 >> 32) as u32) ^ c[3] ^ k[1],
        p0 as u32,
    ]
}

/// The Philox4x32 bijection with ten rounds.
#[inline]
pub fn philox4x32_10(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = ctr;
    let mut k = key;
    c = round(c, k);
    for _ in 1..10 {
        k[0] = k[0].wrapping_add(W0);
        k[1] = k[1].wrapping_add(W1);
        c = round(c, k);
    }
    c
}

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn unit_open_closed(bits: u64) -> f64 {
    // (0, 1]
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn unit_closed_open(bits: u64) -> f64 {
    // [0, 1)
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Deterministic, splittable random stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::at(seed, stream_id, 0)
    }

    pub fn at(seed: u64, stream_id: u64, counter: u64) -> Self {
        RandomStream {
            seed,
            stream_id,
            counter,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Child stream `index`, starting at counter zero. Children of distinct
    /// parents or distinct indices get unrelated stream ids.
    pub fn substream(&self, index: u64) -> RandomStream {
        let id = splitmix(splitmix(self.stream_id ^ 0x5851_F42D_4C95_7F2D) ^ index);
        RandomStream::new(self.seed, id)
    }

    /// Raw block at the current counter; advances the counter by one.
    #[inline]
    pub fn next_block(&mut self) -> [u64; 2] {
        let ctr = [
            self.counter as u32,
            (self.counter >> 32) as u32,
            self.stream_id as u32,
            (self.stream_id >> 32) as u32,
        ];
        let key = [self.seed as u32, (self.seed >> 32) as u32];
        let r = philox4x32_10(ctr, key);
        self.counter = self.counter.wrapping_add(1);
        [
            (r[0] as u64) | ((r[1] as u64) << 32),
            (r[2] as u64) | ((r[3] as u64) << 32),
        ]
    }

    /// 64 random bits (one block; the second half is discarded).
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.next_block()[0]
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        unit_closed_open(self.next_u64())
    }

    /// Uniform integer in `0..bound` by widening multiply (bias below `bound / 2^64`).
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Two independent standard normals from one block (Box-Muller).
    #[inline]
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let [a, b] = self.next_block();
        let r = (-2.0 * unit_open_closed(a).ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * unit_closed_open(b)).sin_cos();
        (r * c, r * s)
    }

    /// Fills `out` with standard normals, consuming `ceil(len / 2)` blocks.
    pub fn fill_normals(&mut self, out: &mut [f64]) {
        let mut chunks = out.chunks_exact_mut(2);
        for pair in &mut chunks {
            let (a, b) = self.normal_pair();
            pair[0] = a;
            pair[1] = b;
        }
        if let [last] = chunks.into_remainder() {
            *last = self.normal_pair().0;
        }
    }

    /// Single standard normal (one block).
    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.normal_pair().0
    }
}

/// A vector of `n` i.i.d. standard normals.
pub fn std_normal_vector(stream: &mut RandomStream, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut v = vec![0.0; n];
    stream.fill_normals(&mut v);
    Ok(v)
}

/// `(z, rho*z + sqrt(1-rho^2)*g)` with `z`, `g` independent standard normal vectors.
pub fn correlated_pair(
    stream: &mut RandomStream,
    n: usize,
    rho: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::param(format!("correlation {rho} outside [-1, 1]")));
    }
    let mut z = vec![0.0; n];
    let mut zp = vec![0.0; n];
    fill_correlated(stream, rho, &mut z, &mut zp);
    Ok((z, zp))
}

/// In-place variant of [`correlated_pair`]; `rho` is assumed valid.
pub fn fill_correlated(stream: &mut RandomStream, rho: f64, z: &mut [f64], zp: &mut [f64]) {
    stream.fill_normals(z);
    stream.fill_normals(zp);
    let c = (1.0 - rho * rho).max(0.0).sqrt();
    for (a, b) in z.iter().zip(zp.iter_mut()) {
        *b = rho * a + c * *b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn philox_known_answers() {
        assert_eq!(
            philox4x32_10([0; 4], [0; 2]),
            [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]
        );
        assert_eq!(
            philox4x32_10([u32::MAX; 4], [u32::MAX; 2]),
            [0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd]
        );
        assert_eq!(
            philox4x32_10(
                [0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344],
                [0xa4093822, 0x299f31d0]
            ),
            [0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1]
        );
    }

    #[test]
    fn same_state_same_vector() {
        let mut a = RandomStream::new(0, 0);
        let mut b = RandomStream::new(0, 0);
        assert_eq!(
            std_normal_vector(&mut a, 7).unwrap(),
            std_normal_vector(&mut b, 7).unwrap()
        );
        assert_eq!(a.counter(), 4);
    }

    #[test]
    fn counter_is_addressable() {
        let mut s = RandomStream::new(9, 3);
        for _ in 0..10 {
            s.next_block();
        }
        let direct = RandomStream::at(9, 3, 10).next_block();
        assert_eq!(s.next_block(), direct);
    }

    #[test]
    fn zero_dimension_rejected() {
        let mut s = RandomStream::new(0, 0);
        assert_eq!(std_normal_vector(&mut s, 0), Err(Error::InvalidDimension(0)));
        assert!(correlated_pair(&mut s, 3, 1.5).is_err());
    }

    #[test]
    fn substreams_differ() {
        let s = RandomStream::new(1, 0);
        let a = s.substream(0).next_block();
        let b = s.substream(1).next_block();
        let c = s.substream(0).substream(0).next_block();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn coordinate_mean_is_zero() {
        let mut s = RandomStream::new(0, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += s.normal();
        }
        assert!((sum / n as f64).abs() < 4e-3);
    }

    #[test]
    fn squared_norm_mean_matches_chi2_mean() {
        let mut s = RandomStream::new(5, 0);
        let trials = 100_000;
        let mut acc = 0.0;
        let mut v = vec![0.0; 10];
        for _ in 0..trials {
            s.fill_normals(&mut v);
            acc += v.iter().map(|x| x * x).sum::<f64>();
        }
        assert!((acc / trials as f64 / 10.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn rho_one_copies() {
        let mut s = RandomStream::new(2, 0);
        let (z, zp) = correlated_pair(&mut s, 5, 1.0).unwrap();
        assert_eq!(z, zp);
    }

    #[test]
    fn correlation_matches_rho() {
        for (rho, tol) in [(0.0, 0.004), (0.5, 0.01)] {
            let mut s = RandomStream::new(11, 1);
            let (mut z, mut zp) = ([0.0], [0.0]);
            let n = 1_000_000;
            let mut acc = 0.0;
            for _ in 0..n {
                fill_correlated(&mut s, rho, &mut z, &mut zp);
                acc += z[0] * zp[0];
            }
            assert!((acc / n as f64 - rho).abs() < tol, "rho {rho}");
        }
    }

    #[test]
    fn below_stays_in_range() {
        let mut s = RandomStream::new(3, 3);
        for b in [1u64, 2, 7, 1000] {
            for _ in 0..100 {
                assert!(s.below(b) < b);
            }
        }
    }
}
