//! Counter-based stream derivation.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by the
//! master seed and positioned on a stream selected by [`StreamId`]. A replicate's
//! randomness therefore depends only on `(master seed, replicate, tag, level,
//! branch)`, never on which worker thread ran it or in what order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type StreamRng = ChaCha8Rng;

/// Which subsystem consumes a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum ModuleTag {
    Sampler = 1,
    Composition = 2,
    Estimator = 3,
    Entropy = 4,
    Outer = 5,
    Drift = 6,
}

/// Identifies one independent stream below a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub replicate: u64,
    pub tag: ModuleTag,
    pub level: u8,
    pub branch: u8,
}

/// Replicate indices must fit below this bound so the packed stream word is injective.
pub const MAX_REPLICATES: u64 = 1 << 40;

impl StreamId {
    pub fn new(replicate: u64, tag: ModuleTag) -> Self {
        Self {
            replicate,
            tag,
            level: 0,
            branch: 0,
        }
    }

    pub fn with_level(self, level: u8) -> Self {
        Self { level, ..self }
    }

    pub fn with_branch(self, branch: u8) -> Self {
        Self { branch, ..self }
    }

    /// 40 bits replicate | 8 bits tag | 8 bits level | 8 bits branch.
    pub fn word(&self) -> u64 {
        assert!(self.replicate < MAX_REPLICATES, "replicate index overflow");
        (self.replicate << 24) | ((self.tag as u64) << 16) | ((self.level as u64) << 8) | self.branch as u64
    }
}

/// Provenance of a realized path: enough to regenerate it bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProvenance {
    pub master_seed: u64,
    pub stream: u64,
}

/// A random stream together with its provenance record.
pub struct Stream {
    pub rng: StreamRng,
    pub provenance: SeedProvenance,
}

impl Stream {
    pub fn new(master_seed: u64, id: StreamId) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        let word = id.word();
        rng.set_stream(word);
        Self {
            rng,
            provenance: SeedProvenance {
                master_seed,
                stream: word,
            },
        }
    }
}

/// Hands out per-level, per-branch streams for one replicate.
#[derive(Debug, Clone, Copy)]
pub struct ReplicateStreams {
    pub master_seed: u64,
    pub replicate: u64,
    pub tag: ModuleTag,
}

impl ReplicateStreams {
    pub fn new(master_seed: u64, replicate: u64, tag: ModuleTag) -> Self {
        Self {
            master_seed,
            replicate,
            tag,
        }
    }

    pub fn stream(&self, level: u8, branch: u8) -> Stream {
        Stream::new(
            self.master_seed,
            StreamId::new(self.replicate, self.tag)
                .with_level(level)
                .with_branch(branch),
        )
    }

    /// Same replicate index under a different tag, e.g. for outer-process draws.
    pub fn retag(&self, tag: ModuleTag) -> Self {
        Self { tag, ..*self }
    }
}
