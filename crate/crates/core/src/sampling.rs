//! Deterministic parameter sampling.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Constraint;
use crate::rational::{rat, QRational};

/// Preferred values for `k`, tried before random draws.
pub fn default_k_pool() -> Vec<QRational> {
    vec![rat(1, 3), rat(2, 5), rat(5, 7), rat(-1, 2), rat(3, 1)]
}

/// Preferred values for `a`.
pub fn default_a_pool() -> Vec<QRational> {
    vec![rat(2, 3), rat(-3, 7), rat(5, 2), rat(1, 4)]
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn random_rational(&mut self) -> QRational {
        loop {
            let n: i64 = self.rng.random_range(-12..=12);
            let d: i64 = self.rng.random_range(1..=11);
            let r = rat(n, d);
            // 0 and 1 are degenerate for nearly every parameter here
            if !r.is_zero() && !r.abs().is_one() {
                return r;
            }
        }
    }

    /// `count` distinct values for `param`: admissible entries of `preferred`
    /// first, then seeded random rationals.
    pub fn draw(
        &mut self,
        param: &str,
        preferred: &[QRational],
        count: usize,
        constraints: &[Constraint],
    ) -> Vec<QRational> {
        let admits = |r: &QRational| constraints.iter().filter(|c| c.param == param).all(|c| c.admits(r));
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(count);
        for r in preferred {
            if out.len() == count {
                return out;
            }
            if admits(r) && seen.insert(r.clone()) {
                out.push(r.clone());
            }
        }
        while out.len() < count {
            let r = self.random_rational();
            if admits(&r) && seen.insert(r.clone()) {
                out.push(r);
            }
        }
        out
    }
}
