//! FNV-1a hashing of n-grams into embedding buckets.

const OFFSET_BASIS: u32 = 0x811C_9DC5;
const PRIME: u32 = 0x0100_0193;

/// 32-bit FNV-1a over raw bytes.
#[inline]
pub fn fnv1a32(bytes: &[u8]) -> u32 {
    let mut h = OFFSET_BASIS;
    for &b in bytes {
        h ^= u32::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Bucket of `ngram` in a table of `buckets` rows.
///
/// `buckets` must be non-zero; values above 2^32 leave the hash unreduced.
#[inline]
pub fn hash_ngram(ngram: &str, buckets: u64) -> u64 {
    debug_assert!(buckets >= 1);
    u64::from(fnv1a32(ngram.as_bytes())) % buckets
}

/// 64-bit FNV-1a, used to fingerprint models.
#[derive(Clone, Debug)]
pub struct Fnv64(u64);

impl Default for Fnv64 {
    fn default() -> Self {
        Fnv64(0xCBF2_9CE4_8422_2325)
    }
}

impl Fnv64 {
    pub fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01B3);
        }
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_vectors() {
        assert_eq!(hash_ngram("", 1 << 32), 2_166_136_261);
        assert_eq!(hash_ngram("a", 1 << 32), 0xE40C_292C);
        assert_eq!(hash_ngram("foobar", 1 << 32), 0xBF9C_F968);
        let mut h = Fnv64::default();
        h.write(b"a");
        assert_eq!(h.finish(), 0xAF63_DC4C_8601_EC8C);
    }

    #[test]
    fn reduction() {
        assert_eq!(hash_ngram("a", 7), 0xE40C_292Cu64 % 7);
        assert_eq!(hash_ngram("a", 7), 5);
        assert_eq!(hash_ngram("anything", 1), 0);
    }
}
