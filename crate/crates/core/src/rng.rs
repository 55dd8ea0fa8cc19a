//! Counter-based deterministic RNG.
//!
//! Every report embeds the seed, and replaying with the same seed must give
//! byte-identical output on any platform, so we avoid platform-dependent
//! generators. Each draw hashes (seed, counter) with the SplitMix64 finalizer.

#[derive(Clone, Debug)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    /// Independent stream for a named sub-task; streams do not collide as long
    /// as labels differ.
    pub fn stream(&self, label: &str) -> Self {
        let mut h = self.seed;
        for b in label.bytes() {
            h = splitmix64(h ^ u64::from(b));
        }
        CounterRng { seed: h, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = splitmix64(self.seed ^ splitmix64(self.counter));
        self.counter += 1;
        v
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n).
    pub fn next_below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
