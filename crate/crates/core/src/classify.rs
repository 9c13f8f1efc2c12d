//! Common edges, one-off edges and difficulty of a tree pair.
//!
//! Pairs are handled on the triangulation side: a common edge of the trees is
//! a shared diagonal, and a one-off edge is a diagonal of one triangulation
//! that crosses exactly one diagonal of the other (flipping that one diagonal
//! introduces it).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::triangulation::{Diagonal, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("size mismatch: {left}-gon vs {right}-gon")]
    SizeMismatch { left: u32, right: u32 },
    #[error("classification needs size at least 2, got {0}")]
    DegenerateSize(usize),
    #[error("{0} is not a common diagonal of the pair")]
    NotCommon(Diagonal),
}

/// A rotation distance instance `(S, T)` in triangulation form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePairProblem {
    s: Triangulation,
    t: Triangulation,
}

impl TreePairProblem {
    pub fn new(s: Triangulation, t: Triangulation) -> Result<Self, ClassifyError> {
        if s.polygon_size() != t.polygon_size() {
            return Err(ClassifyError::SizeMismatch {
                left: s.polygon_size(),
                right: t.polygon_size(),
            });
        }
        Ok(TreePairProblem { s, t })
    }

    pub fn s(&self) -> &Triangulation {
        &self.s
    }

    pub fn t(&self) -> &Triangulation {
        &self.t
    }

    pub fn size(&self) -> usize {
        self.s.size()
    }

    pub fn swapped(&self) -> TreePairProblem {
        TreePairProblem {
            s: self.t.clone(),
            t: self.s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairClass {
    HasCommon,
    OneOff,
    Difficult,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairClass::HasCommon => "HAS_COMMON",
            PairClass::OneOff => "ONE_OFF",
            PairClass::Difficult => "DIFFICULT",
        })
    }
}

/// Which triangulation of the pair holds a diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    S,
    T,
}

/// `target` lies on `side`; flipping `flipped` in the other triangulation
/// introduces `target` there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OneOffWitness {
    pub side: Side,
    pub target: Diagonal,
    pub flipped: Diagonal,
}

impl Serialize for Diagonal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shared diagonals, ascending.
pub fn common_diagonals(pair: &TreePairProblem) -> Vec<Diagonal> {
    let (mut i, mut j) = (0, 0);
    let (s, t) = (pair.s.diagonals(), pair.t.diagonals());
    let mut out = Vec::new();
    while i < s.len() && j < t.len() {
        match s[i].cmp(&t[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(s[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn witnesses_from(holder: &Triangulation, other: &Triangulation, side: Side, out: &mut Vec<OneOffWitness>) {
    for &target in holder.diagonals() {
        if other.contains(target) {
            continue;
        }
        let mut crossed = other.diagonals().iter().filter(|e| target.crosses(e));
        if let (Some(&flipped), None) = (crossed.next(), crossed.next()) {
            out.push(OneOffWitness { side, target, flipped });
        }
    }
}

/// All one-off witnesses, side S first, then by target diagonal.
pub fn one_off_diagonals(pair: &TreePairProblem) -> Vec<OneOffWitness> {
    let mut out = Vec::new();
    witnesses_from(&pair.s, &pair.t, Side::S, &mut out);
    witnesses_from(&pair.t, &pair.s, Side::T, &mut out);
    out
}

fn has_one_off(holder: &Triangulation, other: &Triangulation) -> bool {
    holder
        .diagonals()
        .iter()
        .any(|&d| !other.contains(d) && other.crossings(d, 2) == 1)
}

/// Defined for size >= 2; a size-1 pair has no diagonals at all.
pub fn classify_pair(pair: &TreePairProblem) -> Result<PairClass, ClassifyError> {
    if pair.size() < 2 {
        return Err(ClassifyError::DegenerateSize(pair.size()));
    }
    if !common_diagonals(pair).is_empty() {
        Ok(PairClass::HasCommon)
    } else if has_one_off(&pair.s, &pair.t) || has_one_off(&pair.t, &pair.s) {
        Ok(PairClass::OneOff)
    } else {
        Ok(PairClass::Difficult)
    }
}

/// Performs the flip named by a witness, making `target` common.
pub fn apply_one_off(pair: &TreePairProblem, witness: &OneOffWitness) -> TreePairProblem {
    let flip = |tri: &Triangulation| {
        let (flipped, new) = tri.flip(witness.flipped).expect("witness diagonal is present");
        debug_assert_eq!(new, witness.target);
        flipped
    };
    match witness.side {
        Side::S => TreePairProblem {
            s: pair.s.clone(),
            t: flip(&pair.t),
        },
        Side::T => TreePairProblem {
            s: flip(&pair.s),
            t: pair.t.clone(),
        },
    }
}

/// Restricts a triangulation to a sorted vertex subset, relabeling in order.
fn restrict(tri: &Triangulation, vertices: &[u32]) -> Triangulation {
    let m = tri.polygon_size() as usize;
    let mut relabel = vec![u32::MAX; m];
    for (new, &old) in vertices.iter().enumerate() {
        relabel[old as usize] = new as u32;
    }
    let k = vertices.len() as u32;
    let mut diagonals: Vec<Diagonal> = tri
        .diagonals()
        .iter()
        .filter_map(|d| {
            let (a, b) = (relabel[d.a as usize], relabel[d.b as usize]);
            (a != u32::MAX && b != u32::MAX)
                .then(|| Diagonal::new(a, b))
                .filter(|d| d.is_diagonal_of(k))
        })
        .collect();
    diagonals.sort_unstable();
    Triangulation::from_sorted_unchecked(k, diagonals)
}

/// Cuts the pair along a shared diagonal `(a, b)`.
///
/// The first part is the polygon on vertices `a..=b` (its root side is the
/// cut), the second the polygon on the remaining side, which keeps the
/// original root side. Part sizes sum to the original size.
pub fn split_common(pair: &TreePairProblem, d: Diagonal) -> Result<(TreePairProblem, TreePairProblem), ClassifyError> {
    let d = Diagonal::new(d.a, d.b);
    if !(pair.s.contains(d) && pair.t.contains(d)) {
        return Err(ClassifyError::NotCommon(d));
    }
    let m = pair.s.polygon_size();
    let inner: Vec<u32> = (d.a..=d.b).collect();
    let outer: Vec<u32> = (0..=d.a).chain(d.b..m).collect();
    let part = |vertices: &[u32]| TreePairProblem {
        s: restrict(&pair.s, vertices),
        t: restrict(&pair.t, vertices),
    };
    Ok((part(&inner), part(&outer)))
}

/// Terminal pieces after exhaustive reduction, and the one-off moves spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub parts: Vec<TreePairProblem>,
    pub one_off_moves: usize,
}

/// Reduces by common edges and one-off moves until only difficult pieces remain.
///
/// Policy: split along the least common diagonal while one exists; otherwise
/// apply the least one-off witness (side S before side T, then by target)
/// and count one move. Pieces of size <= 1 are dropped. Parts come out in
/// left-to-right polygon order of discovery.
pub fn reduce_fully(pair: &TreePairProblem) -> Reduction {
    let mut parts = Vec::new();
    let mut moves = 0;
    let mut stack = vec![pair.clone()];
    while let Some(p) = stack.pop() {
        if p.size() <= 1 {
            continue;
        }
        if let Some(&d) = common_diagonals(&p).first() {
            let (inner, outer) = split_common(&p, d).expect("common diagonal");
            stack.push(outer);
            stack.push(inner);
        } else if let Some(w) = one_off_diagonals(&p).first() {
            moves += 1;
            stack.push(apply_one_off(&p, w));
        } else {
            parts.push(p);
        }
    }
    Reduction {
        parts,
        one_off_moves: moves,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{enumerate_triangulations, DihedralElement};

    fn pair(s: &str, t: &str) -> TreePairProblem {
        TreePairProblem::new(s.parse().unwrap(), t.parse().unwrap()).unwrap()
    }

    fn d(a: u32, b: u32) -> Diagonal {
        Diagonal::new(a, b)
    }

    const SNOW_S: &str = "6:(0,2),(2,4),(0,4)";
    const SNOW_T: &str = "6:(1,3),(3,5),(1,5)";

    #[test]
    fn size_mismatch_rejected() {
        let err = TreePairProblem::new("5:(0,2),(0,3)".parse().unwrap(), "4:(0,2)".parse().unwrap());
        assert_eq!(err, Err(ClassifyError::SizeMismatch { left: 5, right: 4 }));
    }

    #[test]
    fn common_examples() {
        let x = "5:(0,2),(0,3)";
        assert_eq!(common_diagonals(&pair(x, x)), vec![d(0, 2), d(0, 3)]);
        assert!(common_diagonals(&pair(x, "5:(1,3),(1,4)")).is_empty());
        assert_eq!(common_diagonals(&pair(x, "5:(0,2),(2,4)")), vec![d(0, 2)]);
    }

    #[test]
    fn one_off_examples() {
        let w = one_off_diagonals(&pair("4:(0,2)", "4:(1,3)"));
        assert_eq!(
            w,
            vec![
                OneOffWitness {
                    side: Side::S,
                    target: d(0, 2),
                    flipped: d(1, 3)
                },
                OneOffWitness {
                    side: Side::T,
                    target: d(1, 3),
                    flipped: d(0, 2)
                },
            ]
        );
        let w = one_off_diagonals(&pair("5:(0,2),(0,3)", "5:(1,3),(1,4)"));
        assert!(w.contains(&OneOffWitness {
            side: Side::T,
            target: d(1, 3),
            flipped: d(0, 2)
        }));
        assert!(one_off_diagonals(&pair(SNOW_S, SNOW_T)).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_pair(&pair(SNOW_S, SNOW_T)), Ok(PairClass::Difficult));
        assert_eq!(
            classify_pair(&pair("5:(0,2),(0,3)", "5:(1,3),(1,4)")),
            Ok(PairClass::OneOff)
        );
        for n in 2..=5 {
            for x in enumerate_triangulations(n) {
                let p = TreePairProblem::new(x.clone(), x).unwrap();
                assert_eq!(classify_pair(&p), Ok(PairClass::HasCommon));
            }
        }
        assert_eq!(classify_pair(&pair("3:", "3:")), Err(ClassifyError::DegenerateSize(1)));
    }

    #[test]
    fn split_examples() {
        let p = pair("5:(0,2),(0,3)", "5:(0,2),(2,4)");
        let (inner, outer) = split_common(&p, d(0, 2)).unwrap();
        assert_eq!(inner, pair("3:", "3:"));
        assert_eq!(outer, pair("4:(0,2)", "4:(1,3)"));
        assert_eq!(inner.size() + outer.size(), p.size());
        assert_eq!(split_common(&p, d(0, 3)), Err(ClassifyError::NotCommon(d(0, 3))));

        let x = "7:(0,2),(0,4),(2,4),(4,6)";
        let (a, b) = split_common(&pair(x, x), d(0, 4)).unwrap();
        assert_eq!(a.s(), a.t());
        assert_eq!(b.s(), b.t());
    }

    #[test]
    fn reduce_examples() {
        let x = "6:(0,2),(2,4),(0,4)";
        let r = reduce_fully(&pair(x, x));
        assert!(r.parts.is_empty());
        assert_eq!(r.one_off_moves, 0);
        let r = reduce_fully(&pair("4:(0,2)", "4:(1,3)"));
        assert!(r.parts.is_empty());
        assert_eq!(r.one_off_moves, 1);
        let snow = pair(SNOW_S, SNOW_T);
        let r = reduce_fully(&snow);
        assert_eq!(r.parts, vec![snow]);
        assert_eq!(r.one_off_moves, 0);
    }

    #[test]
    fn witnesses_are_sound_and_complete() {
        for n in 2..=6u32 {
            let all: Vec<_> = enumerate_triangulations(n).collect();
            for s in &all {
                for t in &all {
                    let p = TreePairProblem::new(s.clone(), t.clone()).unwrap();
                    let common = common_diagonals(&p).len();
                    let witnesses = one_off_diagonals(&p);
                    for w in &witnesses {
                        let q = apply_one_off(&p, w);
                        assert!(common_diagonals(&q).contains(&w.target));
                    }
                    // Brute force: does any single flip of S or T add a new common diagonal?
                    let gains = |a: &Triangulation, b: &Triangulation| {
                        a.diagonals().iter().any(|&diag| {
                            let (f, _) = a.flip(diag).unwrap();
                            let q = TreePairProblem::new(f, b.clone()).unwrap();
                            common_diagonals(&q)
                                .iter()
                                .any(|c| !p.s().contains(*c) || !p.t().contains(*c))
                        })
                    };
                    let brute = gains(s, t) || gains(t, s);
                    assert_eq!(brute, !witnesses.is_empty(), "{s} vs {t}, common {common}");
                }
            }
        }
    }

    #[test]
    fn classification_is_symmetric_and_dihedral_invariant() {
        for n in 2..=6u32 {
            let all: Vec<_> = enumerate_triangulations(n).collect();
            let group: Vec<_> = DihedralElement::all(n + 2).collect();
            for (i, s) in all.iter().enumerate() {
                for t in all.iter().skip(i % 3).step_by(3) {
                    let p = TreePairProblem::new(s.clone(), t.clone()).unwrap();
                    let class = classify_pair(&p).unwrap();
                    assert_eq!(classify_pair(&p.swapped()).unwrap(), class);
                    for &g in &group {
                        let q = TreePairProblem::new(s.apply_dihedral(g), t.apply_dihedral(g)).unwrap();
                        assert_eq!(classify_pair(&q).unwrap(), class);
                    }
                }
            }
        }
    }

    #[test]
    fn difficult_pairs_at_size_four() {
        let all: Vec<_> = enumerate_triangulations(4).collect();
        let mut difficult = 0;
        for s in &all {
            for t in &all {
                let p = TreePairProblem::new(s.clone(), t.clone()).unwrap();
                if classify_pair(&p).unwrap() == PairClass::Difficult {
                    difficult += 1;
                }
            }
        }
        assert_eq!(difficult, 8);
    }
}
