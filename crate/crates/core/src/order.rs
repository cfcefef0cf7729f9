//! Arrival orders: permutations of an instance's id set, full enumeration for
//! exact expectations, and seeded uniform sampling for Monte Carlo runs.

use std::collections::HashSet;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::interval::IntervalId;

/// Version tag of the seed-to-permutation mapping below. Bump only with a
/// deliberate format break: reports and frozen test expectations depend on
/// the mapping staying stable across releases.
pub const PERMUTATION_SCHEME_VERSION: u32 = 1;

/// A permutation of an instance's ids: the online arrival sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalOrder(pub Vec<IntervalId>);

impl ArrivalOrder {
    pub fn identity(inst: &Instance) -> Self {
        ArrivalOrder(inst.ids().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff this is a bijection on the instance's id set.
    pub fn is_valid_for(&self, inst: &Instance) -> bool {
        if self.0.len() != inst.len() {
            return false;
        }
        let ours: HashSet<IntervalId> = self.0.iter().copied().collect();
        ours.len() == self.0.len() && inst.ids().all(|id| ours.contains(&id))
    }

    /// Uniform random order from a 64-bit seed (scheme v1, stable):
    /// ChaCha8 keyed by the little-endian seed in the first 8 key bytes,
    /// driving a Fisher-Yates shuffle with masked-rejection bounded draws.
    pub fn sampled(inst: &Instance, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let mut ids: Vec<IntervalId> = inst.ids().collect();
        shuffle(&mut ids, &mut rng);
        ArrivalOrder(ids)
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Unbiased draw from `0..bound` by masking and rejection.
pub fn bounded_u64(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let mask = bound.next_power_of_two().wrapping_sub(1);
    loop {
        let v = rng.next_u64() & mask;
        if v < bound {
            return v;
        }
    }
}

/// Uniform double in `[0, 1)` from the top 53 bits of one draw.
pub fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = bounded_u64(rng, (i + 1) as u64) as usize;
        items.swap(i, j);
    }
}

/// Visit every permutation of `items` exactly once (Heap's algorithm),
/// calling `f` with each arrangement. `0! = 1`: the empty arrangement is
/// visited once.
pub fn for_each_permutation<T: Clone, F: FnMut(&[T])>(items: &[T], mut f: F) {
    let mut work: Vec<T> = items.to_vec();
    let n = work.len();
    f(&work);
    if n < 2 {
        return;
    }
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                work.swap(0, i);
            } else {
                work.swap(c[i], i);
            }
            f(&work);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Visit every arrival order of the instance.
pub fn for_each_order<F: FnMut(&ArrivalOrder)>(inst: &Instance, mut f: F) {
    let ids: Vec<IntervalId> = inst.ids().collect();
    let mut order = ArrivalOrder(Vec::new());
    for_each_permutation(&ids, |perm| {
        order.0.clear();
        order.0.extend_from_slice(perm);
        f(&order);
    });
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
