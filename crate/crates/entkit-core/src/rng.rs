//! Splittable counter-based pseudo-random generator.
//!
//! Output i is a bijective mix of `key + i·φ` (the SplitMix64 recipe), so
//! the stream is a pure function of (seed, counter) and independent child
//! generators can be forked for parallel work without coordination. Every
//! stochastic routine in the crate takes one of these explicitly.

#[allow(unused_imports)]
use crate::fmath::*;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct SplitRng {
    key: u64,
    counter: u64,
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitRng {
    pub fn new(seed: u64) -> Self {
        SplitRng {
            key: mix(seed ^ GOLDEN),
            counter: 0,
        }
    }

    /// Forks an independent stream; the parent advances by one step.
    pub fn split(&mut self) -> SplitRng {
        let child_key = mix(self.next_u64() ^ 0x6A09_E667_F3BC_C909);
        SplitRng {
            key: child_key,
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter = c.wrapping_add(1);
        mix(self.key.wrapping_add(c.wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, 1).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, n).
    pub fn next_usize(&mut self, n: usize) -> usize {
        (self.next_f64() * n as f64) as usize % n.max(1)
    }

    /// Standard normal via Box–Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u = loop {
            let u = self.next_f64();
            if u > 1e-300 {
                break u;
            }
        };
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * (2.0 * core::f64::consts::PI * v).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_split_independent() {
        let mut a = SplitRng::new(42);
        let mut b = SplitRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut child = a.split();
        let xs: alloc::vec::Vec<u64> = (0..8).map(|_| child.next_u64()).collect();
        let ys: alloc::vec::Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn uniform_mean() {
        let mut rng = SplitRng::new(1);
        let n = 20_000;
        let mean: f64 = (0..n).map(|_| rng.next_f64()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01);
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = SplitRng::new(2);
        let n = 20_000;
        let xs: alloc::vec::Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }
}
