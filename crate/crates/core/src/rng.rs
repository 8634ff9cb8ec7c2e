//! Seed derivation for reproducible parallel replicas.
//!
//! Every random choice made by the harness comes from a ChaCha8 stream keyed
//! by the user seed. Replica `r` and purpose `k` use stream number
//! `r * STREAMS_PER_REPLICA + k`, so each replica owns a fixed set of
//! independent streams no matter which worker executes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const STREAMS_PER_REPLICA: u64 = 8;

/// Independent random streams consumed by one replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    /// Switch-chain moves while sampling a graph.
    Graph = 0,
    /// Edge survival verdicts.
    Percolation = 1,
    /// Exploration structure choices (permutations, new-component seeds).
    Structure = 2,
    /// Binomially thinned degree sequences.
    Degrees = 3,
}

pub fn stream_rng(seed: u64, replica: u64, stream: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica.wrapping_mul(STREAMS_PER_REPLICA) + stream as u64);
    rng
}

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on `(0, 1]`. An edge survives at level `p` iff its draw is
/// `<= p`, so `p = 0` removes every edge and `p = 1` keeps every edge.
#[inline]
pub fn unit_open_closed<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}
