//! Finite windows `[1, N]` of subsets of the natural numbers.
//!
//! A [`WindowSet`] is a packed bitset where bit `x - 1` records membership
//! of `x`. Zero is never a member. Everything that leaves the window is
//! truncated, and operations that truncate report how much they dropped.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone)]
pub struct WindowSet {
    window_len: usize,
    words: Vec<u64>,
    label: String,
}

impl PartialEq for WindowSet {
    fn eq(&self, other: &Self) -> bool {
        self.window_len == other.window_len && self.words == other.words
    }
}

impl Eq for WindowSet {}

impl fmt::Debug for WindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let preview: Vec<usize> = self.iter().take(16).collect();
        f.debug_struct("WindowSet")
            .field("window_len", &self.window_len)
            .field("cardinality", &self.len())
            .field("head", &preview)
            .field("label", &self.label)
            .finish()
    }
}

impl Serialize for WindowSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("WindowSet", 3)?;
        s.serialize_field("window_len", &self.window_len)?;
        s.serialize_field("cardinality", &self.len())?;
        s.serialize_field("members", &self.to_vec())?;
        s.end()
    }
}

fn word_count(window_len: usize) -> usize {
    window_len.div_ceil(WORD)
}

impl WindowSet {
    pub fn empty(window_len: usize) -> Result<Self> {
        if window_len == 0 {
            return Err(Error::validation("window_len", "the window [1, N] needs N >= 1"));
        }
        Ok(Self {
            window_len,
            words: vec![0; word_count(window_len)],
            label: String::new(),
        })
    }

    pub fn full(window_len: usize) -> Result<Self> {
        let mut set = Self::empty(window_len)?;
        set.words.iter_mut().for_each(|w| *w = u64::MAX);
        set.trim();
        set.label = "full".into();
        Ok(set)
    }

    /// Builds a set from arbitrary members; anything outside `[1, N]` is an error.
    pub fn from_members<I>(window_len: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(window_len)?;
        for x in members {
            if x == 0 || x > window_len {
                return Err(Error::OutOfWindow {
                    line: 0,
                    value: x as u64,
                    window_len,
                });
            }
            set.insert(x);
        }
        Ok(set)
    }

    pub fn from_fn(window_len: usize, mut member: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut set = Self::empty(window_len)?;
        for x in 1..=window_len {
            if member(x) {
                set.insert(x);
            }
        }
        Ok(set)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub(crate) fn insert(&mut self, x: usize) {
        debug_assert!(x >= 1 && x <= self.window_len);
        let bit = x - 1;
        self.words[bit / WORD] |= 1 << (bit % WORD);
    }

    fn trim(&mut self) {
        let tail = self.window_len % WORD;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        if x == 0 || x > self.window_len {
            return false;
        }
        let bit = x - 1;
        self.words[bit / WORD] >> (bit % WORD) & 1 == 1
    }

    /// Cardinality, i.e. the population count of the indicator.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Members<'_> {
        Members {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of members in `[lo, hi]`, clamped to the window.
    pub fn count_range(&self, lo: usize, hi: usize) -> usize {
        let lo = lo.max(1);
        let hi = hi.min(self.window_len);
        if lo > hi {
            return 0;
        }
        let (a, b) = (lo - 1, hi - 1);
        let (wa, wb) = (a / WORD, b / WORD);
        let low_mask = u64::MAX << (a % WORD);
        let high_mask = u64::MAX >> (WORD - 1 - b % WORD);
        if wa == wb {
            return (self.words[wa] & low_mask & high_mask).count_ones() as usize;
        }
        let mut total = (self.words[wa] & low_mask).count_ones() as usize;
        total += self.words[wa + 1..wb]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>();
        total + (self.words[wb] & high_mask).count_ones() as usize
    }

    pub fn any_in_range(&self, lo: usize, hi: usize) -> bool {
        self.first_in_range(lo, hi).is_some()
    }

    /// Smallest member in `[lo, hi]`.
    pub fn first_in_range(&self, lo: usize, hi: usize) -> Option<usize> {
        let x = self.next_member(lo.max(1) - 1)?;
        (x <= hi).then_some(x)
    }

    /// Smallest member strictly greater than `after`.
    pub fn next_member(&self, after: usize) -> Option<usize> {
        if after >= self.window_len {
            return None;
        }
        let bit = after; // bit index of `after + 1`
        let mut w = bit / WORD;
        let mut word = self.words[w] & (u64::MAX << (bit % WORD));
        loop {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize + 1);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn is_subset(&self, other: &WindowSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Bits `[start, start + 64)` of the indicator, where bit `i` stands for
    /// member `i + 1`. Positions outside the window read as zero.
    #[inline]
    fn bits_from(&self, start: isize) -> u64 {
        let n = self.words.len() as isize;
        let w = start.div_euclid(WORD as isize);
        let off = start.rem_euclid(WORD as isize) as u32;
        let get = |i: isize| if i >= 0 && i < n { self.words[i as usize] } else { 0 };
        if off == 0 {
            get(w)
        } else {
            (get(w) >> off) | (get(w + 1) << (WORD as u32 - off))
        }
    }

    /// The set `{x in [1, new_len] : x + offset in self}` over window `new_len`.
    ///
    /// `offset` may be negative, which translates members upward.
    pub fn translate_down(&self, offset: isize, new_len: usize) -> Result<WindowSet> {
        let mut out = WindowSet::empty(new_len)?;
        for (i, w) in out.words.iter_mut().enumerate() {
            *w = self.bits_from((i * WORD) as isize + offset);
        }
        out.trim();
        Ok(out)
    }

    /// `{x + k : x in self}` clipped to the window, with the number of dropped members.
    pub fn shift(&self, k: i64) -> Result<Shifted> {
        let n = self.window_len as i64;
        if k.abs() >= n {
            return Err(Error::Range {
                what: "shift",
                value: k,
                lo: -(n - 1),
                hi: n - 1,
            });
        }
        let set = self
            .translate_down(-(k as isize), self.window_len)?
            .with_label(format!("{}+({k})", self.label));
        let dropped = self.len() - set.len();
        Ok(Shifted { set, dropped })
    }

    /// `self ∩ ⋂_s (self − s)`, evaluated over `[1, N − max(shifts)]`.
    pub fn intersect_translate(&self, shifts: &[usize]) -> Result<WindowSet> {
        let n = self.window_len;
        if let Some(&bad) = shifts.iter().find(|&&s| s >= n) {
            return Err(Error::range("shift", bad, 0, n - 1));
        }
        let mut out = self.clone();
        let limit = n - shifts.iter().copied().max().unwrap_or(0);
        for &s in shifts {
            for (i, w) in out.words.iter_mut().enumerate() {
                *w &= self.bits_from((i * WORD + s) as isize);
            }
        }
        out.clear_above(limit);
        Ok(out.with_label(format!("{}∩translates", self.label)))
    }

    pub(crate) fn clear_above(&mut self, limit: usize) {
        if limit >= self.window_len {
            return;
        }
        let w = limit / WORD;
        let off = limit % WORD;
        self.words[w] &= if off == 0 { 0 } else { (1u64 << off) - 1 };
        for word in &mut self.words[w + 1..] {
            *word = 0;
        }
    }

    pub fn intersection(&self, other: &WindowSet) -> Result<WindowSet> {
        self.same_window(other)?;
        let mut out = self.clone();
        out.intersect_with(other);
        Ok(out)
    }

    pub(crate) fn intersect_with(&mut self, other: &WindowSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// In place: keep `x` only if `x + offset` is in `other`.
    pub(crate) fn intersect_with_translate(&mut self, other: &WindowSet, offset: usize) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w &= other.bits_from((i * WORD + offset) as isize);
        }
    }

    /// `|{x in [1, upto] : x in self and x + offset in other}|`.
    pub fn count_with_translate(&self, other: &WindowSet, offset: usize, upto: usize) -> usize {
        let upto = upto.min(self.window_len);
        if upto == 0 {
            return 0;
        }
        let full = upto / WORD;
        let mut total: usize = (0..full)
            .map(|i| (self.words[i] & other.bits_from((i * WORD + offset) as isize)).count_ones() as usize)
            .sum();
        let rest = upto % WORD;
        if rest != 0 {
            let w = self.words[full] & other.bits_from((full * WORD + offset) as isize);
            total += (w & ((1u64 << rest) - 1)).count_ones() as usize;
        }
        total
    }

    /// `|{x in [1, N] : x in self and T^shift(x) in self}|` for the cyclic
    /// map `T(x) = x + 1 (mod N)` on `[1, N]`.
    pub fn cyclic_self_overlap(&self, shift: usize) -> usize {
        let n = self.window_len;
        let shift = shift % n;
        if shift == 0 {
            return self.len();
        }
        // x + shift stays in the window for x <= N - shift; the rest wraps to x + shift - N.
        let straight = self.count_with_translate(self, shift, n - shift);
        let wrapped = (n - shift + 1..=n)
            .filter(|&x| self.contains(x) && self.contains(x + shift - n))
            .count();
        straight + wrapped
    }

    pub(crate) fn same_window(&self, other: &WindowSet) -> Result<()> {
        if self.window_len != other.window_len {
            return Err(Error::validation(
                "window_len",
                format!("windows differ ({} vs {})", self.window_len, other.window_len),
            ));
        }
        Ok(())
    }
}

/// Result of [`WindowSet::shift`].
#[derive(Clone, Debug, PartialEq)]
pub struct Shifted {
    pub set: WindowSet,
    pub dropped: usize,
}

pub struct Members<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
        let tz = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * WORD + tz + 1)
    }
}

impl<'a> IntoIterator for &'a WindowSet {
    type Item = usize;
    type IntoIter = Members<'a>;

    fn into_iter(self) -> Members<'a> {
        self.iter()
    }
}
