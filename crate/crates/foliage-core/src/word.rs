//! Anticommuting letter combinatorics for the unitary coframe.
//!
//! A word is a wedge product of distinct letters `omega^a` (holomorphic) and
//! `conj(omega^a)` (antiholomorphic), stored canonically: holomorphic letters
//! in ascending index order, then antiholomorphic letters ascending. The
//! bitmask layout makes wedge signs and contractions cheap popcounts.

use std::fmt;

/// Maximum complex codimension supported by the bitmask layout.
pub const MAX_N: usize = 8;

/// One coframe letter.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Letter {
    /// 1-based frame index `a`.
    pub index: usize,
    /// True for `conj(omega^a)`.
    pub barred: bool,
}

impl Letter {
    pub(crate) fn bit(&self) -> u32 {
        debug_assert!(self.index >= 1 && self.index <= MAX_N);
        let shift = if self.barred { 16 } else { 0 };
        1u32 << (shift + self.index - 1)
    }
}

/// A canonical wedge word over the unitary coframe.
///
/// Bit `i` (0..16) holds `omega^{i+1}`, bit `16+i` holds `conj(omega^{i+1})`.
/// Canonical letter order is ascending bit position, which matches the
/// "holomorphic block then antiholomorphic block" convention.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoframeWord(u32);

impl CoframeWord {
    /// The empty word (degree 0).
    pub fn empty() -> Self {
        CoframeWord(0)
    }

    /// Single letter word.
    pub fn letter(index: usize, barred: bool) -> Self {
        CoframeWord(Letter { index, barred }.bit())
    }

    /// Word from explicit holomorphic / antiholomorphic index sets (1-based).
    pub fn from_sets(holo: &[usize], anti: &[usize]) -> Self {
        let mut m = 0u32;
        for &a in holo {
            m |= Letter { index: a, barred: false }.bit();
        }
        for &a in anti {
            m |= Letter { index: a, barred: true }.bit();
        }
        CoframeWord(m)
    }

    /// Raw mask (used for dense indexing).
    pub fn mask(&self) -> u32 {
        self.0
    }

    /// Word from a raw mask.
    pub fn from_mask(mask: u32) -> Self {
        CoframeWord(mask)
    }

    /// Total degree `r + s`.
    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Bidegree `(r, s)`.
    pub fn bidegree(&self) -> (usize, usize) {
        let r = (self.0 & 0xFFFF).count_ones() as usize;
        let s = (self.0 >> 16).count_ones() as usize;
        (r, s)
    }

    /// Whether the letter occurs in the word.
    pub fn contains(&self, letter: Letter) -> bool {
        self.0 & letter.bit() != 0
    }

    /// Letters in canonical order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.degree());
        for pos in 0..32 {
            if self.0 & (1u32 << pos) != 0 {
                out.push(Letter { index: (pos % 16) as usize + 1, barred: pos >= 16 });
            }
        }
        out
    }

    /// Wedge of two canonical words.
    ///
    /// Returns `None` when a letter repeats; otherwise the canonical result
    /// together with the reordering sign of the concatenation
    /// `self.letters ++ other.letters`.
    pub fn wedge(&self, other: &CoframeWord) -> Option<(i32, CoframeWord)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Merging two internally sorted letter lists: the inversion count is,
        // for each letter of `other`, the number of letters of `self` sitting
        // strictly above it.
        let mut inversions = 0u32;
        for pos in 0..32 {
            if other.0 & (1u32 << pos) != 0 {
                let above = self.0 & !((1u32 << pos) | ((1u32 << pos) - 1));
                inversions += above.count_ones();
            }
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, CoframeWord(self.0 | other.0)))
    }

    /// Remove one letter (interior product against its dual frame vector).
    ///
    /// Returns `None` when the letter is absent; otherwise the reduced word
    /// and the sign `(-1)^position`.
    pub fn contract(&self, letter: Letter) -> Option<(i32, CoframeWord)> {
        let bit = letter.bit();
        if self.0 & bit == 0 {
            return None;
        }
        let before = (self.0 & (bit - 1)).count_ones();
        let sign = if before % 2 == 0 { 1 } else { -1 };
        Some((sign, CoframeWord(self.0 & !bit)))
    }

    /// Complex conjugation: swaps the two letter families.
    ///
    /// Pointwise conjugation produces the antiholomorphic block first, so the
    /// reordering sign is `(-1)^{r s}`.
    pub fn conjugate(&self) -> (i32, CoframeWord) {
        let (r, s) = self.bidegree();
        let holo = self.0 & 0xFFFF;
        let anti = self.0 >> 16;
        let swapped = CoframeWord((anti & 0xFFFF) | (holo << 16));
        let sign = if (r * s) % 2 == 0 { 1 } else { -1 };
        (sign, swapped)
    }

    /// All words of the given total degree over frame indices `1..=n`,
    /// ascending by mask.
    pub fn all_of_degree(n: usize, degree: usize) -> Vec<CoframeWord> {
        Self::enumerate(n, |w| w.degree() == degree)
    }

    /// All words of the given bidegree over frame indices `1..=n`.
    pub fn all_of_bidegree(n: usize, r: usize, s: usize) -> Vec<CoframeWord> {
        Self::enumerate(n, |w| w.bidegree() == (r, s))
    }

    /// All words over frame indices `1..=n`.
    pub fn all(n: usize) -> Vec<CoframeWord> {
        Self::enumerate(n, |_| true)
    }

    fn enumerate(n: usize, keep: impl Fn(&CoframeWord) -> bool) -> Vec<CoframeWord> {
        assert!(n <= MAX_N);
        let mut out = Vec::new();
        for holo in 0u32..(1 << n) {
            for anti in 0u32..(1 << n) {
                let w = CoframeWord(holo | (anti << 16));
                if keep(&w) {
                    out.push(w);
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for CoframeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for l in self.letters() {
            if !first {
                write!(f, "^")?;
            }
            first = false;
            if l.barred {
                write!(f, "ob{}", l.index)?;
            } else {
                write!(f, "o{}", l.index)?;
            }
        }
        Ok(())
    }
}

/// A wedge word over the real coframe `theta^a`, `J theta^a`.
///
/// Bit `i` (0..16) holds `theta^{i+1}`, bit `16+i` holds `J theta^{i+1}`;
/// canonical order is ascending bit position. Used for presenting forms in
/// real components (the unitary normalization drops out there).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RealWord(pub u32);

impl RealWord {
    pub fn empty() -> Self {
        RealWord(0)
    }

    /// Single letter: `theta^index` or `J theta^index`.
    pub fn letter(index: usize, j_half: bool) -> Self {
        let shift = if j_half { 16 } else { 0 };
        RealWord(1u32 << (shift + index - 1))
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Same merge-sign wedge as [`CoframeWord::wedge`].
    pub fn wedge(&self, other: &RealWord) -> Option<(i32, RealWord)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for pos in 0..32 {
            if other.0 & (1u32 << pos) != 0 {
                let above = self.0 & !((1u32 << pos) | ((1u32 << pos) - 1));
                inversions += above.count_ones();
            }
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, RealWord(self.0 | other.0)))
    }
}

impl fmt::Display for RealWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for pos in 0..32 {
            if self.0 & (1u32 << pos) != 0 {
                if !first {
                    write!(f, "^")?;
                }
                first = false;
                if pos >= 16 {
                    write!(f, "Jt{}", pos - 16 + 1)?;
                } else {
                    write!(f, "t{}", pos + 1)?;
                }
            }
        }
        Ok(())
    }
}
