//! Word-parallel triangulations for polygons with at most 128 diagonals.
//!
//! The diagonals of an m-gon are numbered in ascending `(a, b)` order and a
//! triangulation becomes a `u128` mask over that numbering. Shared-diagonal
//! tests are a single AND; one-off tests use per-diagonal crossing masks.

use crate::classify::PairClass;
use crate::triangulation::{Diagonal, Triangulation};

pub type ChordSet = u128;

/// Largest polygon whose diagonals fit in a [`ChordSet`] (m(m-3)/2 <= 128).
pub const MAX_POLYGON: u32 = 17;

const NO_CHORD: u8 = u8::MAX;

#[derive(Debug, Clone)]
pub struct ChordIndex {
    m: u32,
    chords: Vec<Diagonal>,
    index: Vec<u8>,
    crossing: Vec<ChordSet>,
}

impl ChordIndex {
    /// `None` when the m-gon has more than 128 diagonals.
    pub fn new(m: u32) -> Option<Self> {
        if !(3..=MAX_POLYGON).contains(&m) {
            return None;
        }
        let mut chords = Vec::new();
        for a in 0..m {
            for b in a + 2..m {
                let d = Diagonal::new(a, b);
                if d.is_diagonal_of(m) {
                    chords.push(d);
                }
            }
        }
        let mut index = vec![NO_CHORD; (m * m) as usize];
        for (i, d) in chords.iter().enumerate() {
            index[(d.a * m + d.b) as usize] = i as u8;
        }
        let crossing = chords
            .iter()
            .map(|d| {
                chords
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| d.crosses(e))
                    .fold(0, |acc, (j, _)| acc | (1u128 << j))
            })
            .collect();
        Some(ChordIndex {
            m,
            chords,
            index,
            crossing,
        })
    }

    pub fn polygon_size(&self) -> u32 {
        self.m
    }

    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    pub fn chord(&self, i: usize) -> Diagonal {
        self.chords[i]
    }

    pub fn index_of(&self, d: Diagonal) -> Option<usize> {
        let d = Diagonal::new(d.a, d.b);
        if d.b >= self.m {
            return None;
        }
        let i = self.index[(d.a * self.m + d.b) as usize];
        (i != NO_CHORD).then_some(i as usize)
    }

    pub fn mask(&self, tri: &Triangulation) -> ChordSet {
        debug_assert_eq!(tri.polygon_size(), self.m);
        tri.diagonals()
            .iter()
            .fold(0, |acc, &d| acc | (1u128 << self.index_of(d).expect("valid diagonal")))
    }

    pub fn to_triangulation(&self, set: ChordSet) -> Triangulation {
        let diagonals = bits(set).map(|i| self.chords[i]).collect();
        Triangulation::from_sorted_unchecked(self.m, diagonals)
    }

    fn is_edge(&self, set: ChordSet, u: u32, v: u32) -> bool {
        let (a, b) = (u.min(v), u.max(v));
        if b - a == 1 || (a == 0 && b == self.m - 1) {
            return true;
        }
        let i = self.index[(a * self.m + b) as usize];
        i != NO_CHORD && set & (1u128 << i) != 0
    }

    /// Flips diagonal number `chord` (which must be in `set`), returning the new set.
    pub fn flip(&self, set: ChordSet, chord: usize) -> ChordSet {
        let d = self.chords[chord];
        let mut apex = [0u32; 2];
        let mut found = 0;
        for p in 0..self.m {
            if p != d.a && p != d.b && self.is_edge(set, d.a, p) && self.is_edge(set, p, d.b) {
                apex[found] = p;
                found += 1;
                if found == 2 {
                    break;
                }
            }
        }
        debug_assert_eq!(found, 2);
        let new = self.index[(apex[0] * self.m + apex[1]) as usize] as usize;
        (set & !(1u128 << chord)) | (1u128 << new)
    }

    /// Diagonals outside `set` that cross exactly one diagonal of `set`:
    /// exactly the diagonals one flip away from it.
    pub fn one_flip_targets(&self, set: ChordSet) -> ChordSet {
        let mut out = 0;
        for (i, &cross) in self.crossing.iter().enumerate() {
            if set & (1u128 << i) == 0 && (cross & set).count_ones() == 1 {
                out |= 1u128 << i;
            }
        }
        out
    }

    /// Classifies a pair given both sets and their one-flip targets.
    #[inline]
    pub fn classify_prepared(s: ChordSet, s_targets: ChordSet, t: ChordSet, t_targets: ChordSet) -> PairClass {
        if s & t != 0 {
            PairClass::HasCommon
        } else if (s & t_targets) | (t & s_targets) != 0 {
            PairClass::OneOff
        } else {
            PairClass::Difficult
        }
    }

    pub fn classify(&self, s: ChordSet, t: ChordSet) -> PairClass {
        Self::classify_prepared(s, self.one_flip_targets(s), t, self.one_flip_targets(t))
    }
}

/// Indices of set bits, ascending.
pub fn bits(mut set: ChordSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::enumerate_triangulations;

    #[test]
    fn universe_sizes() {
        for m in 3..=MAX_POLYGON {
            let idx = ChordIndex::new(m).unwrap();
            assert_eq!(idx.chord_count() as u32, m * (m - 3) / 2);
        }
        assert!(ChordIndex::new(MAX_POLYGON + 1).is_none());
        assert!(ChordIndex::new(2).is_none());
    }

    #[test]
    fn masks_round_trip_and_flips_agree() {
        for n in 1..=7u32 {
            let idx = ChordIndex::new(n + 2).unwrap();
            for t in enumerate_triangulations(n) {
                let set = idx.mask(&t);
                assert_eq!(idx.to_triangulation(set), t);
                for (k, &d) in t.diagonals().iter().enumerate() {
                    let chord = bits(set).nth(k).unwrap();
                    assert_eq!(idx.chord(chord), d);
                    let (flipped, _) = t.flip(d).unwrap();
                    assert_eq!(idx.flip(set, chord), idx.mask(&flipped));
                }
            }
        }
    }

    #[test]
    fn one_flip_targets_are_flip_results() {
        for n in 2..=7u32 {
            let idx = ChordIndex::new(n + 2).unwrap();
            for t in enumerate_triangulations(n) {
                let set = idx.mask(&t);
                let expected = bits(set).fold(0, |acc, c| acc | (idx.flip(set, c) & !set));
                assert_eq!(idx.one_flip_targets(set), expected);
            }
        }
    }
}
