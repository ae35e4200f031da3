//! Bit-packed vectors and square matrices over Z/2.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Z2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Z2Vector {
    pub fn zeros(len: usize) -> Self {
        Z2Vector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Low `len` bits of `mask`, bit `i` being coordinate `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == WORD { mask } else { mask & ((1 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn add_assign(&mut self, other: &Z2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn sum(&self, other: &Z2Vector) -> Z2Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Standard dot product mod 2.
    pub fn dot(&self, other: &Z2Vector) -> bool {
        assert_eq!(self.len, other.len);
        self.and_count(other) % 2 == 1
    }

    pub(crate) fn and_count(&self, other: &Z2Vector) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

impl fmt::Display for Z2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Z2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z2Vector({self})")
    }
}

/// Square matrix over Z/2 stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Z2Matrix {
    rows: Vec<Z2Vector>,
}

impl Z2Matrix {
    pub fn zeros(n: usize) -> Self {
        Z2Matrix {
            rows: vec![Z2Vector::zeros(n); n],
        }
    }

    pub fn from_rows(rows: Vec<Z2Vector>) -> Option<Self> {
        let n = rows.len();
        rows.iter().all(|r| r.len() == n).then_some(Z2Matrix { rows })
    }

    /// Parses rows written as strings of `0`/`1`.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Option<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .chars()
                    .map(|c| match c {
                        '0' => Some(false),
                        '1' => Some(true),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .map(Z2Vector::from_bits)
            })
            .collect::<Option<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Intersection matrix of a path: entries `(j, j+1)` and `(j+1, j)` set.
    pub fn chain(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for j in 1..n {
            m.set(j - 1, j, true);
            m.set(j, j - 1, true);
        }
        m
    }

    /// Standard symplectic matrix with pairs `(2i, 2i+1)`.
    pub fn standard_symplectic(pairs: usize) -> Self {
        let mut m = Self::zeros(2 * pairs);
        for i in 0..pairs {
            m.set(2 * i, 2 * i + 1, true);
            m.set(2 * i + 1, 2 * i, true);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &Z2Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Z2Vector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.size()).all(|i| !self.get(i, i))
    }

    /// `u^T M v` over Z/2.
    pub fn bilinear(&self, u: &Z2Vector, v: &Z2Vector) -> bool {
        u.ones().fold(false, |acc, i| acc ^ self.rows[i].dot(v))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let n = self.size();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.add_assign(&pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.size()
    }
}

impl fmt::Debug for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| r.to_string())).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_span_multiple_words() {
        let mut v = Z2Vector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        let w = Z2Vector::unit(130, 64);
        assert!(v.dot(&w));
        v.add_assign(&w);
        assert!(!v.get(64));
    }

    #[test]
    fn from_mask_truncates() {
        let v = Z2Vector::from_mask(3, 0b1111);
        assert_eq!(v.to_string(), "111");
        assert_eq!(v.count_ones(), 3);
    }

    #[test]
    fn chain_rank_alternates() {
        for n in 1..12 {
            let expected = if n % 2 == 0 { n } else { n - 1 };
            assert_eq!(Z2Matrix::chain(n).rank(), expected, "n = {n}");
        }
    }

    #[test]
    fn bilinear_on_standard_form() {
        let m = Z2Matrix::standard_symplectic(2);
        let a = Z2Vector::from_bits([true, false, true, false]);
        let b = Z2Vector::from_bits([false, true, false, false]);
        assert!(m.bilinear(&a, &b));
        assert!(!m.bilinear(&a, &a));
    }

    #[test]
    fn parse_rows() {
        let m = Z2Matrix::from_strings(&["01", "10"]).unwrap();
        assert_eq!(m, Z2Matrix::standard_symplectic(1));
        assert!(Z2Matrix::from_strings(&["01", "1"]).is_none());
        assert!(Z2Matrix::from_strings(&["0x", "10"]).is_none());
    }
}
