//! Binary linear `(n, k, d)` codes over GF(2).
//!
//! Bit strings are at most 64 bits long. Position `i` of a string (written
//! left to right, starting at 0) is bit `i` of the backing word.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::{Error, Result};

/// Longest supported bit string.
pub const MAX_LEN: usize = 64;
/// Largest code dimension for exhaustive minimum-distance computation.
pub const MAX_K: usize = 16;

/// A fixed-length bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    word: u64,
}

impl Bits {
    pub fn new(len: usize, word: u64) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::InvalidBits(format!("length {len} exceeds {MAX_LEN}")));
        }
        if len < 64 && word >> len != 0 {
            return Err(Error::InvalidBits(format!("word {word:#x} has bits beyond length {len}")));
        }
        Ok(Self { len, word })
    }

    pub fn zeros(len: usize) -> Self {
        Self { len, word: 0 }
    }

    /// The unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        Self { len, word: 1 << i }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut word = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::InvalidBits(format!("{bits:?}")));
            }
            word |= u64::from(b) << i;
        }
        Self::new(bits.len(), word)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let word = if len == 64 { rng.random() } else { rng.random::<u64>() & ((1u64 << len) - 1) };
        Self { len, word }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn word(&self) -> u64 {
        self.word
    }

    pub fn get(&self, i: usize) -> u8 {
        ((self.word >> i) & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.word == 0
    }

    pub fn weight(&self) -> u32 {
        self.word.count_ones()
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Bytes holding the string, position 0 in the low bit of the first byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.word.to_le_bytes()[..self.len.div_ceil(8)].to_vec()
    }

    pub fn xor(&self, other: &Bits) -> Result<Bits> {
        same_len(self, other)?;
        Ok(Bits { len: self.len, word: self.word ^ other.word })
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidBits(s.to_string())),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }
}

fn same_len(a: &Bits, b: &Bits) -> Result<()> {
    if a.len != b.len {
        return Err(Error::LengthMismatch { expected: a.len, actual: b.len });
    }
    Ok(())
}

/// Scalar product mod 2: the parity of `c AND r`.
pub fn dot_parity(c: &Bits, r: &Bits) -> Result<u8> {
    same_len(c, r)?;
    Ok(((c.word & r.word).count_ones() & 1) as u8)
}

/// A binary linear code given by a full-rank `k x n` generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    rows: Vec<u64>,
    min_distance: Option<usize>,
}

impl LinearCode {
    /// Validates that `rows` are `n`-bit and linearly independent.
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::InvalidCodeParams(format!("n = {n} outside 1..={MAX_LEN}")));
        }
        if rows.is_empty() || rows.len() > n {
            return Err(Error::InvalidCodeParams(format!("k = {} outside 1..=n", rows.len())));
        }
        if n < 64 && rows.iter().any(|r| r >> n != 0) {
            return Err(Error::InvalidCodeParams(format!("generator row wider than n = {n}")));
        }
        if gf2_rank(&rows) != rows.len() {
            return Err(Error::InvalidCodeParams("generator rows are linearly dependent".into()));
        }
        Ok(Self { n, rows, min_distance: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn row(&self, i: usize) -> Bits {
        Bits { len: self.n, word: self.rows[i] }
    }

    pub fn rows(&self) -> impl Iterator<Item = Bits> + '_ {
        (0..self.k()).map(|i| self.row(i))
    }

    /// The minimum distance if it has been computed.
    pub fn cached_min_distance(&self) -> Option<usize> {
        self.min_distance
    }

    /// Minimum Hamming weight over the `2^k - 1` nonzero codewords (cached).
    pub fn min_distance(&mut self) -> Result<usize> {
        if let Some(d) = self.min_distance {
            return Ok(d);
        }
        let d = self.compute_min_distance()?;
        self.min_distance = Some(d);
        Ok(d)
    }

    fn compute_min_distance(&self) -> Result<usize> {
        if self.k() > MAX_K {
            return Err(Error::CapExceeded(format!("exhaustive distance needs k <= {MAX_K}, got {}", self.k())));
        }
        // Gray-code walk: each step xors one generator row
        let mut word = 0u64;
        let mut best = usize::MAX;
        for step in 1u64..(1u64 << self.k()) {
            word ^= self.rows[step.trailing_zeros() as usize];
            best = best.min(word.count_ones() as usize);
        }
        Ok(best)
    }

    /// `m · G` over GF(2); bit `i` of `m` selects row `i`.
    pub fn encode_message(&self, m: &Bits) -> Result<Bits> {
        if m.len() != self.k() {
            return Err(Error::LengthMismatch { expected: self.k(), actual: m.len() });
        }
        let word = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| m.get(*i) == 1)
            .fold(0u64, |acc, (_, r)| acc ^ r);
        Ok(Bits { len: self.n, word })
    }

    /// Whether `c` lies in the row space of `G`.
    pub fn is_codeword(&self, c: &Bits) -> Result<bool> {
        if c.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: c.len() });
        }
        let mut with_c = self.rows.clone();
        with_c.push(c.word());
        Ok(gf2_rank(&with_c) == self.k())
    }

    /// Every codeword, indexed by message word.
    pub fn codewords(&self) -> Result<Vec<Bits>> {
        if self.k() > MAX_K {
            return Err(Error::CapExceeded(format!("enumeration needs k <= {MAX_K}, got {}", self.k())));
        }
        (0..1u64 << self.k())
            .map(|m| self.encode_message(&Bits { len: self.k(), word: m }))
            .collect()
    }

    /// True when `r` has even overlap with every codeword.
    pub fn is_orthogonal(&self, r: &Bits) -> Result<bool> {
        for row in self.rows() {
            if dot_parity(&row, r)? == 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A uniformly random codeword `c` with `dot_parity(c, r) = target`.
    ///
    /// If `r` is not orthogonal to the code, exactly half the codewords have
    /// each parity, so rejection sampling over uniform messages terminates
    /// quickly and stays uniform.
    pub fn sample_codeword_with_parity<R: Rng + ?Sized>(&self, r: &Bits, target: u8, rng: &mut R) -> Result<Bits> {
        if r.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: r.len() });
        }
        if r.is_zero() {
            return Err(Error::ZeroParityString);
        }
        if self.is_orthogonal(r)? {
            return if target & 1 == 0 {
                self.encode_message(&Bits::random(self.k(), rng))
            } else {
                Err(Error::ParityUnattainable)
            };
        }
        loop {
            let c = self.encode_message(&Bits::random(self.k(), rng))?;
            if dot_parity(&c, r)? == target & 1 {
                return Ok(c);
            }
        }
    }

    /// Text form: a header line `n k`, then `k` rows of `0`/`1` characters.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k());
        for row in self.rows() {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::CodeFormat("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::CodeFormat(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [n, k] = nums[..] else {
            return Err(Error::CodeFormat(format!("header {header:?} must be `n k`")));
        };
        let rows: Vec<u64> = lines
            .map(|l| {
                let bits: Bits = l.parse().map_err(|_| Error::CodeFormat(format!("bad row {l:?}")))?;
                if bits.len() != n {
                    return Err(Error::CodeFormat(format!("row {l:?} has length {} != {n}", bits.len())));
                }
                Ok(bits.word())
            })
            .collect::<Result<_>>()?;
        if rows.len() != k {
            return Err(Error::CodeFormat(format!("expected {k} rows, found {}", rows.len())));
        }
        Self::from_rows(n, rows)
    }
}

/// Draws random `k x n` generators until one has rank `k` and minimum
/// distance at least `min_d`.
pub fn generate_code<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    min_d: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<LinearCode> {
    if n > MAX_LEN || k > MAX_K {
        return Err(Error::CapExceeded(format!("codes need n <= {MAX_LEN} and k <= {MAX_K}, got n={n} k={k}")));
    }
    if n == 0 || k == 0 || k > n || min_d == 0 {
        return Err(Error::InvalidCodeParams(format!("need 1 <= k <= n and min_d >= 1; got n={n} k={k} min_d={min_d}")));
    }
    // Singleton bound: no attempt can succeed
    if min_d <= n - k + 1 {
        for _ in 0..max_attempts {
            let rows: Vec<u64> = (0..k).map(|_| Bits::random(n, rng).word()).collect();
            let Ok(mut code) = LinearCode::from_rows(n, rows) else {
                continue;
            };
            if code.min_distance()? >= min_d {
                return Ok(code);
            }
        }
    }
    Err(Error::CodeNotFound { n, k, min_d, attempts: max_attempts })
}

/// Rank over GF(2) by Gaussian elimination on bit masks.
fn gf2_rank(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let mask = 1u64 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & mask != 0 {
                *r ^= p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
