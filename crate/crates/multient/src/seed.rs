//! Per-item seed derivation.
//!
//! All randomness in the crate flows from a single run seed. Work items
//! (sweep rows, solver restarts, sampled points) derive their own RNG seed
//! by hashing `(seed, index)`, so results are independent of evaluation
//! order and worker count.

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a deterministic per-item seed from a run seed and an item index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x51_7C_C1_B7_27_22_0A_95)))
}
