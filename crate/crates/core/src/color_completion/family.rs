//! Set families with private elements against any `Δ` other sets.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

use super::CcError;

/// A tuple `(i0; i1..iΔ)` whose first set keeps too few private elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-based set index.
    pub i0: usize,
    pub others: Vec<usize>,
    pub private: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} keeps {} elements against {:?}", self.i0, self.private, self.others)
    }
}

/// How [`SetFamily::verify`] covers the tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyCheck {
    /// Every `i0` against every `Δ`-subset of the other sets.
    Exhaustive,
    /// This many random tuples; not a proof.
    Sampled(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct FamilyOptions {
    pub max_attempts: usize,
    /// Largest `n` verified exhaustively.
    pub exhaustive_limit: usize,
    pub samples: usize,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { max_attempts: 20, exhaustive_limit: 12, samples: 100_000 }
    }
}

/// Sets `F_1..F_n` over the universe `1..=m`, stored as bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub n: usize,
    pub delta: usize,
    pub m: usize,
    words: usize,
    sets: Vec<Vec<u64>>,
    /// How the family was verified, if it was.
    pub check: Option<FamilyCheck>,
}

/// `⌈23 Δ² log₂ n⌉`.
pub fn universe_size(n: usize, delta: usize) -> usize {
    (23.0 * (delta * delta) as f64 * (n as f64).log2()).ceil() as usize
}

impl SetFamily {
    /// Family from explicit element lists (1-based elements of `1..=m`).
    pub fn from_sets(delta: usize, m: usize, sets: &[Vec<usize>]) -> Result<Self, CcError> {
        let words = m.div_ceil(64);
        let mut bits = vec![vec![0u64; words]; sets.len()];
        for (s, elems) in sets.iter().enumerate() {
            for &x in elems {
                if x == 0 || x > m {
                    return Err(CcError::InvalidFamily(format!("element {x} outside 1..={m}")));
                }
                bits[s][(x - 1) / 64] |= 1 << ((x - 1) % 64);
            }
        }
        Ok(SetFamily { n: sets.len(), delta, m, words, sets: bits, check: None })
    }

    fn random(n: usize, delta: usize, seed: u64) -> Self {
        let m = universe_size(n, delta);
        let words = m.div_ceil(64);
        // with probability 1 every set would be the whole universe
        let q = delta.max(2) as u32;
        let make = |i: usize| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut set = vec![0u64; words];
            for x in 0..m {
                if rng.random_ratio(1, q) {
                    set[x / 64] |= 1 << (x % 64);
                }
            }
            set
        };
        #[cfg(feature = "parallel")]
        let sets = {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(make).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let sets = (0..n).map(make).collect();
        SetFamily { n, delta, m, words, sets, check: None }
    }

    /// Whether `x` (1-based) belongs to `F_i` (1-based).
    pub fn contains(&self, i: usize, x: usize) -> bool {
        x >= 1 && x <= self.m && self.sets[i - 1][(x - 1) / 64] >> ((x - 1) % 64) & 1 == 1
    }

    /// Elements of `F_i` in increasing order.
    pub fn elements(&self, i: usize) -> Vec<usize> {
        (1..=self.m).filter(|&x| self.contains(i, x)).collect()
    }

    /// `|F_i0 ∖ ⋃ F_j|` over `others` (all 1-based).
    pub fn private_count(&self, i0: usize, others: &[usize]) -> usize {
        (0..self.words)
            .map(|w| {
                let union = others.iter().fold(0u64, |acc, &j| acc | self.sets[j - 1][w]);
                (self.sets[i0 - 1][w] & !union).count_ones() as usize
            })
            .sum()
    }

    fn tuple_ok(&self, i0: usize, others: &[usize]) -> Result<(), Violation> {
        let private = self.private_count(i0, others);
        if private > self.delta {
            Ok(())
        } else {
            Err(Violation { i0, others: others.to_vec(), private })
        }
    }

    /// Checks `|F_i0 ∖ ⋃ F_ij| > Δ`. Subsets smaller than `Δ` are implied by
    /// the full-size ones, so only `min(Δ, n-1)`-subsets are enumerated.
    pub fn verify(&self, check: FamilyCheck, seed: u64) -> Result<(), Violation> {
        let r = self.delta.min(self.n.saturating_sub(1));
        match check {
            FamilyCheck::Exhaustive => {
                for i0 in 1..=self.n {
                    let pool: Vec<usize> = (1..=self.n).filter(|&j| j != i0).collect();
                    let mut idx: Vec<usize> = (0..r).collect();
                    loop {
                        let others: Vec<usize> = idx.iter().map(|&t| pool[t]).collect();
                        self.tuple_ok(i0, &others)?;
                        if !next_combination(&mut idx, pool.len()) {
                            break;
                        }
                    }
                }
                Ok(())
            }
            FamilyCheck::Sampled(samples) => {
                let one = |s: usize| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s as u64);
                    let i0 = rng.random_range(1..=self.n);
                    let others: Vec<usize> = sample(&mut rng, self.n - 1, r)
                        .into_iter()
                        .map(|t| if t + 1 >= i0 { t + 2 } else { t + 1 })
                        .collect();
                    self.tuple_ok(i0, &others)
                };
                #[cfg(feature = "parallel")]
                {
                    use rayon::prelude::*;
                    (0..samples).into_par_iter().map(one).collect::<Result<Vec<()>, _>>().map(|_| ())
                }
                #[cfg(not(feature = "parallel"))]
                {
                    (0..samples).try_for_each(one)
                }
            }
        }
    }
}

/// Advances `idx` to the next `idx.len()`-subset of `0..pool` in lexicographic order.
fn next_combination(idx: &mut [usize], pool: usize) -> bool {
    let r = idx.len();
    for i in (0..r).rev() {
        if idx[i] < pool - r + i {
            idx[i] += 1;
            for t in i + 1..r {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Random family for `(n, Δ)`, resampled until it passes verification.
pub fn build_set_family(n: usize, delta: usize, seed: u64) -> Result<SetFamily, CcError> {
    build_set_family_with(n, delta, seed, &FamilyOptions::default())
}

pub fn build_set_family_with(
    n: usize,
    delta: usize,
    seed: u64,
    opts: &FamilyOptions,
) -> Result<SetFamily, CcError> {
    if n < 2 || delta < 1 {
        return Err(CcError::InvalidFamily(format!("need n >= 2 and delta >= 1, got n={n}, delta={delta}")));
    }
    let check = if n <= opts.exhaustive_limit {
        FamilyCheck::Exhaustive
    } else {
        FamilyCheck::Sampled(opts.samples)
    };
    let mut last = None;
    for attempt in 0..opts.max_attempts {
        let attempt_seed = seed.wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut fam = SetFamily::random(n, delta, attempt_seed);
        match fam.verify(check, attempt_seed ^ 0x5bd1_e995) {
            Ok(()) => {
                fam.check = Some(check);
                return Ok(fam);
            }
            Err(v) => {
                log::debug!("set family attempt {attempt} rejected: {v}");
                last = Some(v);
            }
        }
    }
    Err(CcError::NotFound {
        attempts: opts.max_attempts,
        violation: last.map(|v| v.to_string()).unwrap_or_else(|| "no attempt made".into()),
    })
}
