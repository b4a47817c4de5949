//! Stable content fingerprints for catalog files, so a report carries
//! reproducible evidence of exactly which inputs produced it.

/// 64-bit FNV-1a over the raw bytes.
pub fn fnv1a(data: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
