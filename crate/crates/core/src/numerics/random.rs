use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Seeded, reproducible random stream.
///
/// Backed by ChaCha12, a counter-based generator: the seed fixes the key and
/// every substream is a distinct ChaCha stream id under that key, so
/// substreams never overlap and are reproducible independently of the order
/// in which they are consumed.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent substream number `index` of this stream.
    ///
    /// Depends only on the seed, this stream's id and `index`, never on how
    /// much of the parent has been consumed.
    pub fn split(&self, index: u64) -> Self {
        Self::with_stream(self.seed, splitmix64(self.stream ^ splitmix64(index.wrapping_add(1))))
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Gamma(shape, 1) variate; `shape > 0`.
    pub(crate) fn gamma(&mut self, shape: f64) -> f64 {
        Gamma::new(shape, 1.0).expect("shape validated by caller").sample(&mut self.rng)
    }

    /// Fair ±1.
    pub fn sign(&mut self) -> f64 {
        if self.rng.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RandomStream::new(42);
        let mut b = RandomStream::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = RandomStream::new(43);
        assert_ne!(RandomStream::new(42).next_u64(), c.next_u64());
    }

    #[test]
    fn split_is_reproducible_and_distinct() {
        let parent = RandomStream::new(7);
        let mut consumed = parent.clone();
        for _ in 0..10 {
            consumed.next_u64();
        }
        let mut s1 = parent.split(3);
        let mut s1_again = consumed.split(3);
        let mut s2 = parent.split(4);
        let x: Vec<u64> = (0..8).map(|_| s1.next_u64()).collect();
        let y: Vec<u64> = (0..8).map(|_| s1_again.next_u64()).collect();
        let z: Vec<u64> = (0..8).map(|_| s2.next_u64()).collect();
        assert_eq!(x, y);
        assert_ne!(x, z);
        let mut p = parent.clone();
        let w: Vec<u64> = (0..8).map(|_| p.next_u64()).collect();
        assert_ne!(x, w);
    }

    // Frozen first outputs guard against silent changes in the generator.
    #[test]
    fn stable_output() {
        assert_eq!(RandomStream::new(2024).next_u64(), 15155537918699842955);
        let u = RandomStream::new(1).uniform_open();
        assert!(u > 0.0 && u < 1.0);
    }
}
