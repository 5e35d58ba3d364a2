//! Deterministic sampling and exhaustive enumeration of vectors over F_p.
//!
//! Samplers are ChaCha streams seeded from `(p, n, tag)`, so a failing sample
//! can be replayed from the tag alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Prime;

fn seed(p: Prime, n: usize, tag: &str) -> u64 {
    // FNV-1a over the tag bytes, then the parameters.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    tag.bytes().for_each(&mut eat);
    p.get().to_le_bytes().into_iter().for_each(&mut eat);
    (n as u64).to_le_bytes().into_iter().for_each(&mut eat);
    h
}

pub struct Sampler {
    rng: ChaCha8Rng,
    p: Prime,
}

impl Sampler {
    pub fn new(p: Prime, n: usize, tag: &str) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed(p, n, tag)), p }
    }

    pub fn scalar(&mut self) -> u32 {
        self.rng.random_range(0..self.p.get())
    }

    pub fn nonzero_scalar(&mut self) -> u32 {
        self.rng.random_range(1..self.p.get())
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn vector(&mut self, len: usize) -> Vec<u32> {
        (0..len).map(|_| self.scalar()).collect()
    }

    /// A vector with at least two nonzero entries, when `len >= 2`.
    pub fn non_basis_vector(&mut self, len: usize) -> Vec<u32> {
        loop {
            let v = self.vector(len);
            if len < 2 || v.iter().filter(|&&x| x != 0).count() >= 2 {
                return v;
            }
        }
    }
}

/// All `p^n` vectors of F_p^n in lexicographic order.
pub fn all_vectors(p: Prime, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p.get() as u64).checked_pow(n as u32).expect("enumeration size overflows");
    let q = p.get() as u64;
    (0..total).map(move |mut k| {
        let mut v = vec![0u32; n];
        for slot in v.iter_mut().rev() {
            *slot = (k % q) as u32;
            k /= q;
        }
        v
    })
}

/// `p^n` if it fits in `u64`.
pub fn space_size(p: Prime, n: usize) -> Option<u64> {
    (p.get() as u64).checked_pow(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order() {
        let p = Prime::new(2).unwrap();
        let all: Vec<_> = all_vectors(p, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn samplers_replay() {
        let p = Prime::new(5).unwrap();
        let a = Sampler::new(p, 3, "tag").vector(20);
        let b = Sampler::new(p, 3, "tag").vector(20);
        let c = Sampler::new(p, 3, "other").vector(20);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
