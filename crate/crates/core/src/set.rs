use std::cmp::Ordering;
use std::fmt;

use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

/// Bit set over `0..universe`. One inline word covers `n <= 64`; larger
/// universes spill to the heap behind the same interface.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: SmallVec<[u64; 1]>,
    universe: usize,
    count: usize,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(WORD).max(1)
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: smallvec![0; word_count(universe)],
            universe,
            count: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * WORD;
            let hi = (lo + WORD).min(universe);
            if hi > lo {
                *word = low_mask(hi - lo);
            }
        }
        s.count = universe;
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "from_mask needs universe <= 64");
        let mask = mask & low_mask(universe);
        ElementSet {
            words: smallvec![mask],
            universe,
            count: mask.count_ones() as usize,
        }
    }

    /// Low 64 bits of the membership vector.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Returns true when `i` was newly inserted.
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "element {i} outside universe {}",
            self.universe
        );
        let bit = 1u64 << (i % WORD);
        let word = &mut self.words[i / WORD];
        if *word & bit == 0 {
            *word |= bit;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, i: usize) -> bool {
        if i >= self.universe {
            return false;
        }
        let bit = 1u64 << (i % WORD);
        let word = &mut self.words[i / WORD];
        if *word & bit != 0 {
            *word &= !bit;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words[0],
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Members with index `<= i`.
    pub fn prefix(&self, i: usize) -> Self {
        let mut out = Self::empty(self.universe);
        if self.universe == 0 {
            return out;
        }
        let last = i.min(self.universe - 1);
        let full_words = last / WORD;
        for w in 0..full_words {
            out.words[w] = self.words[w];
        }
        out.words[full_words] = self.words[full_words] & low_mask(last % WORD + 1);
        out.recount();
        out
    }

    /// Members with index `< i`.
    pub fn prefix_below(&self, i: usize) -> Self {
        if i == 0 {
            Self::empty(self.universe)
        } else {
            self.prefix(i - 1)
        }
    }

    pub fn max_element(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return Some(w * WORD + (WORD - 1 - word.leading_zeros() as usize));
            }
        }
        None
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        Self::full(self.universe).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Lowercase big-endian hex with bit `i` standing for element `i`.
    pub fn to_hex(&self) -> String {
        let digits = self.universe.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let word = self.words.get(bit / WORD).copied().unwrap_or(0);
            let nibble = (word >> (bit % WORD)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(universe: usize, hex: &str) -> Option<Self> {
        let mut s = Self::empty(universe);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16)? as u64;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= universe {
                        return None;
                    }
                    s.insert(i);
                }
            }
        }
        Some(s)
    }

    /// Order by the ascending member sequence, shorter prefix first.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        self.check_universe(other);
        let words: SmallVec<[u64; 1]> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let count = words.iter().map(|w| w.count_ones() as usize).sum();
        ElementSet {
            words,
            universe: self.universe,
            count,
        }
    }

    fn recount(&mut self) {
        self.count = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn check_universe(&self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe, "mixed universes");
    }
}

fn low_mask(bits: usize) -> u64 {
    if bits >= WORD {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * WORD + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// All subsets of `{0..n-1}` of size `k`, as masks in increasing order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n < WORD, "combination scan needs n < 64");
    let limit = 1u64 << n;
    let mut next = if k == 0 {
        Some(0)
    } else if k <= n {
        Some((1u64 << k) - 1)
    } else {
        None
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(cur)
    })
}
