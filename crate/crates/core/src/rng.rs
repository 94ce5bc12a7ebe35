//! Deterministic random streams derived from a base seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// First 8 bytes of SHA-256 over the base seed and each length-prefixed part.
pub fn derive_seed(base: u64, parts: &[&[u8]]) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Seed of one experiment cell.
pub fn cell_seed(
    base: u64,
    application: &str,
    mechanism: &str,
    epsilon_index: usize,
    run_index: usize,
) -> u64 {
    derive_seed(
        base,
        &[
            application.as_bytes(),
            mechanism.as_bytes(),
            &(epsilon_index as u64).to_le_bytes(),
            &(run_index as u64).to_le_bytes(),
        ],
    )
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cell_rng(
    base: u64,
    application: &str,
    mechanism: &str,
    epsilon_index: usize,
    run_index: usize,
) -> ChaCha8Rng {
    rng_from_seed(cell_seed(
        base,
        application,
        mechanism,
        epsilon_index,
        run_index,
    ))
}
