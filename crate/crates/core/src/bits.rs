//! Word-packed binary sequences, bit `j` at position `j % 64` of word `j / 64`.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSeq {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitSeq {
    pub fn zeros(len: usize) -> Self {
        BitSeq {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = BitSeq::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            s.set(j, b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len);
        self.words[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, j: usize, b: bool) {
        assert!(j < self.len);
        let mask = 1u64 << (j % 64);
        if b {
            self.words[j / 64] |= mask;
        } else {
            self.words[j / 64] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|j| self.get(j))
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitSeq) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitSeq) -> BitSeq {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Hamming distance.
    pub fn xor_count(&self, other: &BitSeq) -> u32 {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Bits moved to lower indices: `out[j] = self[j + k]`.
    fn shifted_down(&self, k: usize) -> BitSeq {
        let mut out = BitSeq::zeros(self.len);
        let (q, r) = (k / 64, k % 64);
        for w in 0..out.words.len() {
            let lo = self.words.get(w + q).copied().unwrap_or(0);
            let hi = self.words.get(w + q + 1).copied().unwrap_or(0);
            out.words[w] = if r == 0 { lo } else { (lo >> r) | (hi << (64 - r)) };
        }
        out.mask_tail();
        out
    }

    /// Bits moved to higher indices: `out[j] = self[j - k]`.
    fn shifted_up(&self, k: usize) -> BitSeq {
        let mut out = BitSeq::zeros(self.len);
        let (q, r) = (k / 64, k % 64);
        for w in 0..out.words.len() {
            let cur = if w >= q { self.words[w - q] } else { 0 };
            let prev = if w > q { self.words[w - q - 1] } else { 0 };
            out.words[w] = if r == 0 { cur } else { (cur << r) | (prev >> (64 - r)) };
        }
        out.mask_tail();
        out
    }

    /// Cyclic shift with `out[j] = self[(j + u) mod N]`.
    pub fn rotated(&self, u: usize) -> BitSeq {
        if self.len == 0 {
            return self.clone();
        }
        let u = u % self.len;
        if u == 0 {
            return self.clone();
        }
        let mut out = self.shifted_down(u);
        let wrap = self.shifted_up(self.len - u);
        for (a, b) in out.words.iter_mut().zip(&wrap.words) {
            *a |= b;
        }
        out
    }

    /// Byte `j / 8` holds bit `j` at position `7 - j % 8`; padding bits are zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for j in 0..self.len {
            if self.get(j) {
                bytes[j / 8] |= 0x80 >> (j % 8);
            }
        }
        bytes
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "expected {} bytes for {len} bits, found {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let mut s = BitSeq::zeros(len);
        for (i, &b) in bytes.iter().enumerate() {
            for k in 0..8 {
                let j = 8 * i + k;
                let bit = b & (0x80 >> k) != 0;
                if j >= len {
                    if bit {
                        return Err(Error::Format("nonzero padding bits".into()));
                    }
                } else {
                    s.set(j, bit);
                }
            }
        }
        Ok(s)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Format(format!("bad hex row: {e}")))?;
        BitSeq::from_bytes(len, &bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_rotate(bits: &[bool], u: usize) -> Vec<bool> {
        let n = bits.len();
        (0..n).map(|j| bits[(j + u) % n]).collect()
    }

    #[test]
    fn hex_layout_is_msb_first() {
        let s = BitSeq::from_bools(&[true, false, false, false, false, false, false, false, false, true]);
        assert_eq!(s.to_hex(), "8040");
        assert_eq!(BitSeq::from_hex(10, "8040").unwrap(), s);
        assert!(BitSeq::from_hex(10, "8041").is_err());
        assert!(BitSeq::from_hex(10, "80").is_err());
    }

    proptest! {
        #[test]
        fn rotation_matches_naive(bits in prop::collection::vec(any::<bool>(), 1..300), u in 0usize..600) {
            let s = BitSeq::from_bools(&bits);
            let r = s.rotated(u);
            prop_assert_eq!(r.iter().collect::<Vec<_>>(), naive_rotate(&bits, u % bits.len()));
        }

        #[test]
        fn hex_round_trip(bits in prop::collection::vec(any::<bool>(), 1..200)) {
            let s = BitSeq::from_bools(&bits);
            prop_assert_eq!(BitSeq::from_hex(bits.len(), &s.to_hex()).unwrap(), s);
        }

        #[test]
        fn xor_count_is_hamming(a in prop::collection::vec(any::<bool>(), 130), b in prop::collection::vec(any::<bool>(), 130)) {
            let h = a.iter().zip(&b).filter(|(x, y)| x != y).count() as u32;
            prop_assert_eq!(BitSeq::from_bools(&a).xor_count(&BitSeq::from_bools(&b)), h);
        }
    }
}
