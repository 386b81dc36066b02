//! Dense GF(2) row operations on 64-bit words, enough for parity solves.

/// Bit matrix with rows packed into `u64` words.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        let w = self.data[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let word = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *word |= 1 << (c % 64);
        } else {
            *word &= !(1 << (c % 64));
        }
    }

    /// XORs row `src` into row `dst`.
    #[inline]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let wpr = self.words_per_row;
        let (src_off, dst_off) = (src * wpr, dst * wpr);
        for i in 0..wpr {
            let s = self.data[src_off + i];
            self.data[dst_off + i] ^= s;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Parity of `row . x` for a packed vector `x` of `cols` bits.
    #[inline]
    pub fn row_dot(&self, r: usize, x: &[u64]) -> bool {
        let row = self.row_words(r);
        let mut acc = 0u64;
        for (a, b) in row.iter().zip(x) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

/// Packs bits (0/1 bytes) into u64 words, little-endian within the word.
pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b != 0 {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}
