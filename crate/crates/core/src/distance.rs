//! Exact flip distance by bidirectional breadth-first search.

use std::collections::HashMap;

use thiserror::Error;

use crate::chords::{bits, ChordIndex, ChordSet, MAX_POLYGON};
use crate::classify::TreePairProblem;
use crate::triangulation::Triangulation;

/// Default refusal threshold: the flip graph at size 13 has 742 900 vertices.
pub const DEFAULT_SIZE_CAP: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceResult {
    pub distance: usize,
    /// States discovered by both searches together.
    pub explored: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("size {size} exceeds the search cap {cap}; raise the cap to force it")]
    AboveCap { size: usize, cap: usize },
    #[error("size {size} is beyond what exact search supports (max {max})")]
    Unsupported { size: usize, max: usize },
}

/// Triangulations one flip away, in diagonal order.
pub fn flip_neighbors(tri: &Triangulation) -> Vec<Triangulation> {
    tri.diagonals()
        .iter()
        .map(|&d| tri.flip(d).expect("diagonal present").0)
        .collect()
}

/// Minimum number of flips between the two triangulations of `pair`.
pub fn exact_distance(pair: &TreePairProblem, size_cap: usize) -> Result<DistanceResult, DistanceError> {
    let size = pair.size();
    if size > size_cap {
        return Err(DistanceError::AboveCap { size, cap: size_cap });
    }
    let index = ChordIndex::new(pair.s().polygon_size()).ok_or(DistanceError::Unsupported {
        size,
        max: MAX_POLYGON as usize - 2,
    })?;
    Ok(search(&index, index.mask(pair.s()), index.mask(pair.t())))
}

fn search(index: &ChordIndex, source: ChordSet, target: ChordSet) -> DistanceResult {
    if source == target {
        return DistanceResult {
            distance: 0,
            explored: 1,
        };
    }
    let mut seen = [HashMap::from([(source, 0usize)]), HashMap::from([(target, 0usize)])];
    let mut frontier = [vec![source], vec![target]];
    let mut depth = [0usize; 2];
    loop {
        // Expand the smaller frontier by one full layer.
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let other = 1 - side;
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for &state in &frontier[side] {
            for chord in bits(state) {
                let neighbor = index.flip(state, chord);
                if seen[side].contains_key(&neighbor) {
                    continue;
                }
                seen[side].insert(neighbor, depth[side] + 1);
                if let Some(&d) = seen[other].get(&neighbor) {
                    let total = depth[side] + 1 + d;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                next.push(neighbor);
            }
        }
        depth[side] += 1;
        if let Some(distance) = best {
            return DistanceResult {
                distance,
                explored: seen[0].len() + seen[1].len(),
            };
        }
        assert!(!next.is_empty(), "flip graph is connected");
        frontier[side] = next;
    }
}
