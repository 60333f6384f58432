//! Deterministic random sampling for law checks.
//!
//! Everything is driven by a seeded ChaCha stream so that two runs with the
//! same seed produce byte-identical reports.

use crate::dual::XElt;
use crate::hopf::HElt;
use crate::multiindex::MultiIndex;
use crate::scalar::{int, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Sampling knobs shared by the verification entry points.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SampleCfg {
    pub max_deg: u32,
    pub samples: u32,
    pub seed: u64,
}

impl Default for SampleCfg {
    fn default() -> Self {
        SampleCfg {
            max_deg: 4,
            samples: 32,
            seed: 0,
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero integer in [-3, 3].
pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 {
            return int(v);
        }
    }
}

/// Uniform degree in 0..=max_deg, then a uniform spread over coordinates.
pub fn random_index(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> MultiIndex {
    let d = rng.gen_range(0..=max_deg);
    let mut parts = vec![0u32; n];
    for _ in 0..d {
        parts[rng.gen_range(0..n)] += 1;
    }
    MultiIndex(parts)
}

pub fn random_helt(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: u32) -> HElt {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut out = HElt::zero();
    for _ in 0..terms {
        out.add_term(random_index(rng, n, max_deg), small_scalar(rng));
    }
    out
}

pub fn random_xelt(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: u32) -> XElt {
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut out = XElt::zero();
    for _ in 0..terms {
        out.add_term(random_index(rng, n, max_deg), small_scalar(rng));
    }
    out
}
