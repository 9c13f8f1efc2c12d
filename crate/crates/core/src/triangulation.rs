//! Triangulations of a convex polygon, stored as sorted diagonal lists.
//!
//! Vertices are labeled `0..m` clockwise. The side `(0, m-1)` is the marked
//! root side; it is never a diagonal.
//!
//! Text form: `m:(a,b),(c,d),...` with diagonals sorted ascending, e.g.
//! `5:(0,2),(0,3)`. A triangle is written `3:`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{enumerate_trees, BinaryTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagonal {
    pub a: u32,
    pub b: u32,
}

impl Diagonal {
    /// Chord between two vertices, endpoints stored in ascending order.
    pub fn new(u: u32, v: u32) -> Self {
        Diagonal {
            a: u.min(v),
            b: u.max(v),
        }
    }

    /// Strict interior crossing. Chords sharing an endpoint do not cross.
    pub fn crosses(&self, other: &Diagonal) -> bool {
        diagonals_cross(*self, *other)
    }

    /// True if the chord is a genuine diagonal of the m-gon.
    pub fn is_diagonal_of(&self, m: u32) -> bool {
        self.b < m && self.b >= self.a + 2 && !(self.a == 0 && self.b == m - 1)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

pub fn diagonals_cross(d1: Diagonal, d2: Diagonal) -> bool {
    (d1.a < d2.a && d2.a < d1.b && d1.b < d2.b) || (d2.a < d1.a && d1.a < d2.b && d2.b < d1.b)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    m: u32,
    diagonals: Vec<Diagonal>,
}

/// One violated triangulation invariant. Indices refer to the input order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("polygon must have at least 3 vertices, got {0}")]
    TooFewVertices(u32),
    #[error("wrong diagonal count: {found} != {expected}")]
    WrongCount { expected: usize, found: usize },
    #[error("diagonal #{index} {diagonal} has a vertex out of range")]
    OutOfRange { index: usize, diagonal: Diagonal },
    #[error("diagonal #{index} {diagonal} is a polygon side, not a diagonal")]
    NotADiagonal { index: usize, diagonal: Diagonal },
    #[error("diagonal #{second} duplicates diagonal #{first} {diagonal}")]
    Duplicate {
        first: usize,
        second: usize,
        diagonal: Diagonal,
    },
    #[error("diagonal #{first} {d1} crosses diagonal #{second} {d2}")]
    Crossing {
        first: usize,
        second: usize,
        d1: Diagonal,
        d2: Diagonal,
    },
}

/// Every violation found in a candidate diagonal set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid triangulation: {}", display_list(.0))]
pub struct ValidationErrors(pub Vec<ValidationError>);

fn display_list(errors: &[ValidationError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("{0} is a polygon side and cannot be flipped")]
    IsSide(Diagonal),
    #[error("{0} is not a diagonal of the triangulation")]
    NotPresent(Diagonal),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseTriangulationError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: &'static str },
    #[error("number at offset {offset} is out of range")]
    Number { offset: usize },
    #[error(transparent)]
    Invalid(#[from] ValidationErrors),
}

/// Checks the triangulation invariants for `m` vertices.
pub fn validate(m: u32, diagonals: &[Diagonal]) -> Result<(), ValidationErrors> {
    let mut errors = Vec::new();
    if m < 3 {
        errors.push(ValidationError::TooFewVertices(m));
        return Err(ValidationErrors(errors));
    }
    let expected = (m - 3) as usize;
    if diagonals.len() != expected {
        errors.push(ValidationError::WrongCount {
            expected,
            found: diagonals.len(),
        });
    }
    let mut well_formed = Vec::with_capacity(diagonals.len());
    for (index, &d) in diagonals.iter().enumerate() {
        if d.a >= m || d.b >= m {
            errors.push(ValidationError::OutOfRange { index, diagonal: d });
        } else if !Diagonal::new(d.a, d.b).is_diagonal_of(m) {
            errors.push(ValidationError::NotADiagonal { index, diagonal: d });
        } else {
            well_formed.push((index, Diagonal::new(d.a, d.b)));
        }
    }
    let mut sorted = well_formed.clone();
    sorted.sort_by_key(|&(i, d)| (d, i));
    for w in sorted.windows(2) {
        if w[0].1 == w[1].1 {
            errors.push(ValidationError::Duplicate {
                first: w[0].0,
                second: w[1].0,
                diagonal: w[0].1,
            });
        }
    }
    for (i, &(first, d1)) in well_formed.iter().enumerate() {
        for &(second, d2) in &well_formed[i + 1..] {
            if d1.crosses(&d2) {
                errors.push(ValidationError::Crossing { first, second, d1, d2 });
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(ValidationErrors(errors))
    }
}

impl Triangulation {
    /// Validates and stores the diagonals in canonical sorted order.
    pub fn new(m: u32, diagonals: Vec<Diagonal>) -> Result<Self, ValidationErrors> {
        validate(m, &diagonals)?;
        let mut diagonals: Vec<Diagonal> = diagonals.into_iter().map(|d| Diagonal::new(d.a, d.b)).collect();
        diagonals.sort_unstable();
        Ok(Triangulation { m, diagonals })
    }

    /// Caller guarantees validity and sort order.
    pub(crate) fn from_sorted_unchecked(m: u32, diagonals: Vec<Diagonal>) -> Self {
        debug_assert!(diagonals.windows(2).all(|w| w[0] < w[1]));
        Triangulation { m, diagonals }
    }

    /// Re-checks all invariants.
    pub fn validate(&self) -> Result<(), ValidationErrors> {
        validate(self.m, &self.diagonals)?;
        if self.diagonals.windows(2).all(|w| w[0] < w[1]) {
            Ok(())
        } else {
            Err(ValidationErrors(vec![]))
        }
    }

    /// Number of polygon vertices `m`.
    pub fn polygon_size(&self) -> u32 {
        self.m
    }

    /// Size of the dual tree, `m - 2`.
    pub fn size(&self) -> usize {
        self.m as usize - 2
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn contains(&self, d: Diagonal) -> bool {
        self.diagonals.binary_search(&d).is_ok()
    }

    /// True for polygon sides and for diagonals of this triangulation.
    pub fn is_edge(&self, u: u32, v: u32) -> bool {
        let d = Diagonal::new(u, v);
        d.b - d.a == 1 || (d.a == 0 && d.b == self.m - 1) || self.contains(d)
    }

    /// Number of diagonals of this triangulation crossed by `d`, stopping at `cap`.
    pub fn crossings(&self, d: Diagonal, cap: usize) -> usize {
        let mut count = 0;
        for e in &self.diagonals {
            if d.crosses(e) {
                count += 1;
                if count >= cap {
                    break;
                }
            }
        }
        count
    }

    /// The two apexes of the triangles on either side of `d`.
    fn apexes(&self, d: Diagonal) -> (u32, u32) {
        let mut found = (self.m, self.m);
        for p in 0..self.m {
            if p == d.a || p == d.b || !self.is_edge(d.a, p) || !self.is_edge(p, d.b) {
                continue;
            }
            if p > d.a && p < d.b {
                found.0 = p;
            } else {
                found.1 = p;
            }
        }
        found
    }

    /// Replaces `d` by the other diagonal of its quadrilateral.
    pub fn flip(&self, d: Diagonal) -> Result<(Triangulation, Diagonal), FlipError> {
        let d = Diagonal::new(d.a, d.b);
        if !d.is_diagonal_of(self.m) {
            return Err(FlipError::IsSide(d));
        }
        let Ok(pos) = self.diagonals.binary_search(&d) else {
            return Err(FlipError::NotPresent(d));
        };
        let (inner, outer) = self.apexes(d);
        let flipped = Diagonal::new(inner, outer);
        let mut diagonals = self.diagonals.clone();
        diagonals.remove(pos);
        let at = diagonals.binary_search(&flipped).unwrap_err();
        diagonals.insert(at, flipped);
        Ok((Triangulation::from_sorted_unchecked(self.m, diagonals), flipped))
    }

    pub fn apply_dihedral(&self, g: DihedralElement) -> Triangulation {
        let mut diagonals: Vec<Diagonal> = self
            .diagonals
            .iter()
            .map(|d| Diagonal::new(g.apply(d.a, self.m), g.apply(d.b, self.m)))
            .collect();
        diagonals.sort_unstable();
        Triangulation::from_sorted_unchecked(self.m, diagonals)
    }

    /// Lexicographically least image under the dihedral group, with orbit size.
    pub fn canonical_form(&self) -> (Triangulation, usize) {
        let mut best = self.clone();
        let mut stabilizer = 0;
        for g in DihedralElement::all(self.m) {
            let image = self.apply_dihedral(g);
            if image == *self {
                stabilizer += 1;
            }
            if image.diagonals < best.diagonals {
                best = image;
            }
        }
        (best, 2 * self.m as usize / stabilizer)
    }

    pub fn to_tree(&self) -> BinaryTree {
        BinaryTree::from_triangulation(self)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.m)?;
        for (i, d) in self.diagonals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Triangulation {
    type Err = ParseTriangulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_triangulation(s)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8, expected: &'static str) -> Result<(), ParseTriangulationError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseTriangulationError::Syntax {
                offset: self.pos,
                expected,
            })
        }
    }

    fn number(&mut self) -> Result<u32, ParseTriangulationError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseTriangulationError::Syntax {
                offset: start,
                expected: "a vertex number",
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(ParseTriangulationError::Number { offset: start })
    }
}

/// Parses `m:(a,b),(c,d),...`. Diagonals may appear in any order and
/// orientation; whitespace between tokens is ignored.
pub fn parse_triangulation(text: &str) -> Result<Triangulation, ParseTriangulationError> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let m = cur.number()?;
    cur.expect(b':', "':'")?;
    let mut diagonals = Vec::new();
    if cur.peek().is_some() {
        loop {
            cur.expect(b'(', "'('")?;
            let a = cur.number()?;
            cur.expect(b',', "','")?;
            let b = cur.number()?;
            cur.expect(b')', "')'")?;
            diagonals.push(Diagonal { a, b });
            match cur.peek() {
                None => break,
                Some(b',') => cur.pos += 1,
                Some(_) => {
                    return Err(ParseTriangulationError::Syntax {
                        offset: cur.pos,
                        expected: "',' or end of input",
                    })
                }
            }
        }
    }
    Ok(Triangulation::new(m, diagonals)?)
}

/// A symmetry of the regular m-gon: optional reflection `v -> m-1-v`,
/// followed by rotation `v -> v + shift (mod m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DihedralElement {
    pub shift: u32,
    pub reflected: bool,
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement {
        shift: 0,
        reflected: false,
    };

    pub fn apply(&self, v: u32, m: u32) -> u32 {
        let v = if self.reflected { m - 1 - v } else { v };
        (v + self.shift) % m
    }

    /// All `2m` elements: rotations first, then reflections.
    pub fn all(m: u32) -> impl Iterator<Item = DihedralElement> {
        [false, true]
            .into_iter()
            .flat_map(move |reflected| (0..m).map(move |shift| DihedralElement { shift, reflected }))
    }
}

/// All triangulations of the (n+2)-gon, in the order of [`enumerate_trees`].
pub fn enumerate_triangulations(size: u32) -> impl Iterator<Item = Triangulation> {
    enumerate_trees(size as usize)
        .filter(move |_| size >= 1)
        .map(|tree| tree.to_triangulation())
}

/// One canonical representative per dihedral orbit, with the orbit size.
pub fn enumerate_class_representatives(size: u32) -> impl Iterator<Item = (Triangulation, usize)> {
    enumerate_triangulations(size).filter_map(|tri| {
        let (canonical, orbit) = tri.canonical_form();
        (canonical == tri).then_some((tri, orbit))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    fn tri(s: &str) -> Triangulation {
        s.parse().unwrap()
    }

    fn d(a: u32, b: u32) -> Diagonal {
        Diagonal::new(a, b)
    }

    #[test]
    fn crossing_examples() {
        assert!(diagonals_cross(d(0, 2), d(1, 3)));
        assert!(diagonals_cross(d(1, 3), d(0, 2)));
        assert!(!diagonals_cross(d(0, 2), d(2, 4)));
        assert!(!diagonals_cross(d(1, 3), d(0, 4)));
        assert!(!diagonals_cross(d(1, 3), d(1, 3)));
    }

    #[test]
    fn validate_examples() {
        assert!(validate(5, &[d(0, 2), d(0, 3)]).is_ok());
        assert_eq!(
            validate(5, &[d(0, 2)]).unwrap_err().0,
            vec![ValidationError::WrongCount { expected: 2, found: 1 }]
        );
        let errs = validate(6, &[d(0, 2), d(1, 3), d(0, 4)]).unwrap_err().0;
        assert_eq!(
            errs,
            vec![ValidationError::Crossing {
                first: 0,
                second: 1,
                d1: d(0, 2),
                d2: d(1, 3)
            }]
        );
    }

    #[test]
    fn validate_reports_every_violation() {
        let errs = validate(6, &[d(0, 5), d(0, 9), d(1, 2), d(2, 4), d(4, 2)])
            .unwrap_err()
            .0;
        assert!(errs.contains(&ValidationError::WrongCount { expected: 3, found: 5 }));
        assert!(errs.contains(&ValidationError::NotADiagonal {
            index: 0,
            diagonal: d(0, 5)
        }));
        assert!(errs.contains(&ValidationError::OutOfRange {
            index: 1,
            diagonal: d(0, 9)
        }));
        assert!(errs.contains(&ValidationError::NotADiagonal {
            index: 2,
            diagonal: d(1, 2)
        }));
        assert!(errs.iter().any(|e| matches!(
            e,
            ValidationError::Duplicate {
                first: 3,
                second: 4,
                ..
            }
        )));
        assert_eq!(
            validate(2, &[]).unwrap_err().0,
            vec![ValidationError::TooFewVertices(2)]
        );
    }

    #[test]
    fn text_format() {
        assert_eq!(tri("5:(0,3),(2,0)").to_string(), "5:(0,2),(0,3)");
        assert_eq!(tri(" 6 : (0,2) , (2,4),(0, 4) ").to_string(), "6:(0,2),(0,4),(2,4)");
        assert_eq!(tri("3:").diagonals().len(), 0);
        assert!(matches!(
            parse_triangulation("5:(0,2)(0,3)"),
            Err(ParseTriangulationError::Syntax { offset: 7, .. })
        ));
        assert!(matches!(
            parse_triangulation("5(0,2)"),
            Err(ParseTriangulationError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_triangulation("99999999999:"),
            Err(ParseTriangulationError::Number { offset: 0 })
        ));
        assert!(matches!(
            parse_triangulation("5:(0,2),"),
            Err(ParseTriangulationError::Syntax { offset: 8, .. })
        ));
        assert!(matches!(
            parse_triangulation("5:(0,2)"),
            Err(ParseTriangulationError::Invalid(_))
        ));
    }

    #[test]
    fn flip_examples() {
        let (t, new) = tri("5:(0,2),(0,3)").flip(d(0, 3)).unwrap();
        assert_eq!(t, tri("5:(0,2),(2,4)"));
        assert_eq!(new, d(2, 4));
        let (t, new) = tri("4:(1,3)").flip(d(1, 3)).unwrap();
        assert_eq!(t, tri("4:(0,2)"));
        assert_eq!(new, d(0, 2));
        assert_eq!(tri("5:(0,2),(0,3)").flip(d(1, 3)), Err(FlipError::NotPresent(d(1, 3))));
        assert_eq!(tri("5:(0,2),(0,3)").flip(d(0, 1)), Err(FlipError::IsSide(d(0, 1))));
        assert_eq!(tri("5:(0,2),(0,3)").flip(d(0, 4)), Err(FlipError::IsSide(d(0, 4))));
    }

    #[test]
    fn flip_is_an_involution_exhaustively() {
        for m in 4..=9u32 {
            for t in enumerate_triangulations(m - 2) {
                let mut seen = HashSet::new();
                for &diag in t.diagonals() {
                    let (flipped, new) = t.flip(diag).unwrap();
                    assert!(flipped.validate().is_ok());
                    assert!(!t.contains(new));
                    let (back, old) = flipped.flip(new).unwrap();
                    assert_eq!(back, t);
                    assert_eq!(old, diag);
                    assert!(seen.insert(flipped));
                }
                assert_eq!(seen.len(), (m - 3) as usize);
            }
        }
    }

    #[test]
    fn dihedral_examples() {
        let snowflake = tri("6:(0,2),(2,4),(0,4)");
        let g = DihedralElement {
            shift: 2,
            reflected: false,
        };
        assert_eq!(snowflake.apply_dihedral(g), snowflake);
        let fan = tri("5:(0,2),(0,3)");
        let g = DihedralElement {
            shift: 1,
            reflected: false,
        };
        assert_eq!(fan.apply_dihedral(g), tri("5:(1,3),(1,4)"));
        for t in enumerate_triangulations(5) {
            assert_eq!(t.apply_dihedral(DihedralElement::IDENTITY), t);
        }
        assert_eq!(DihedralElement::all(7).count(), 14);
    }

    #[test]
    fn canonical_examples() {
        let (c, orbit) = tri("5:(1,3),(1,4)").canonical_form();
        assert_eq!(c, tri("5:(0,2),(0,3)"));
        assert_eq!(orbit, 5);
        let (_, orbit) = tri("6:(0,2),(2,4),(0,4)").canonical_form();
        assert_eq!(orbit, 2);
    }

    #[test]
    fn canonical_form_is_constant_on_orbits() {
        for m in 4..=8u32 {
            for t in enumerate_triangulations(m - 2) {
                let (c, orbit) = t.canonical_form();
                assert_eq!(c.canonical_form(), (c.clone(), orbit));
                assert_eq!((2 * m as usize) % orbit, 0);
                for g in DihedralElement::all(m) {
                    let image = t.apply_dihedral(g);
                    assert!(image.validate().is_ok());
                    assert_eq!(image.canonical_form(), (c.clone(), orbit));
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_triangulations(4).count(), 14);
        let five: Vec<_> = enumerate_triangulations(3).collect();
        assert_eq!(five.len(), 5);
        assert!(five.iter().all(|t| t.diagonals().len() == 2));
        assert_eq!(enumerate_triangulations(0).count(), 0);
    }

    #[test]
    fn class_representatives_small() {
        let hexagon: Vec<_> = enumerate_class_representatives(4).collect();
        assert_eq!(hexagon.len(), 3);
        let mut orbits: Vec<usize> = hexagon.iter().map(|&(_, o)| o).collect();
        orbits.sort_unstable();
        assert_eq!(orbits, vec![2, 6, 6]);
        let pentagon: Vec<_> = enumerate_class_representatives(3).collect();
        assert_eq!(pentagon.len(), 1);
        assert_eq!(pentagon[0].1, 5);
    }

    #[test]
    fn canonical_buckets_partition_all_triangulations() {
        for n in 1..=9u32 {
            let mut buckets: HashMap<Triangulation, usize> = HashMap::new();
            let mut total = 0usize;
            for t in enumerate_triangulations(n) {
                let (c, orbit) = t.canonical_form();
                let e = buckets.entry(c).or_insert(orbit);
                assert_eq!(*e, orbit);
                total += 1;
            }
            assert_eq!(buckets.values().sum::<usize>(), total);
            assert_eq!(buckets.len(), enumerate_class_representatives(n).count());
        }
    }
}
