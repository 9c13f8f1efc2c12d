//! Rooted binary trees (every internal node has exactly two children).
//!
//! A tree is stored as its preorder word: `true` for an internal node and
//! `false` for a leaf. The word of a size-`n` tree has length `2n + 1`, and
//! two trees are equal exactly when their shapes are equal.
//!
//! Text form: `tree := "L" | "(" tree tree ")"`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::triangulation::{Diagonal, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryTree {
    word: Vec<bool>,
}

/// In-order rank of an internal node (0-based, among internal nodes only).
///
/// In-order traversal alternates leaf, internal, leaf, ..., so the node with
/// rank `k` sits between leaves `k` and `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeAddress(pub usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseTreeError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at offset {offset}: unexpected {found:?}")]
    Syntax { offset: usize, found: char },
    #[error("unbalanced parentheses: input ends at offset {offset} inside an open node")]
    UnexpectedEnd { offset: usize },
    #[error("trailing input at offset {offset} after a complete tree")]
    Trailing { offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RotationError {
    #[error("node address {address} out of range for a tree with {size} internal nodes")]
    AddressOutOfRange { address: usize, size: usize },
    #[error("cannot rotate left at node {0}: its right child is a leaf")]
    RightChildIsLeaf(usize),
    #[error("cannot rotate right at node {0}: its left child is a leaf")]
    LeftChildIsLeaf(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("tree size must be at least 1")]
pub struct ZeroSizeError;

/// Layout facts about one internal node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InternalNode {
    /// Position in the preorder word.
    pub position: usize,
    /// First leaf (in-order index) under this node.
    pub first_leaf: usize,
    /// Last leaf under this node.
    pub last_leaf: usize,
    pub address: NodeAddress,
}

impl BinaryTree {
    /// Builds a tree from a preorder word, checking that it is well formed.
    pub fn from_preorder(word: Vec<bool>) -> Option<Self> {
        let mut need = 1usize;
        for (i, &internal) in word.iter().enumerate() {
            if need == 0 {
                return None;
            }
            need -= 1;
            if internal {
                need += 2;
            }
            if need == 0 && i + 1 != word.len() {
                return None;
            }
        }
        (need == 0).then_some(BinaryTree { word })
    }

    pub fn preorder(&self) -> &[bool] {
        &self.word
    }

    /// The single leaf, a tree of size 0.
    pub fn leaf() -> Self {
        BinaryTree { word: vec![false] }
    }

    /// Every internal node is the left child of its parent: `(((LL)L)L)`.
    pub fn left_comb(size: usize) -> Self {
        let mut word = vec![true; size];
        word.extend(std::iter::repeat_n(false, size + 1));
        BinaryTree { word }
    }

    /// Every internal node is the right child of its parent: `(L(L(LL)))`.
    pub fn right_comb(size: usize) -> Self {
        let mut word = Vec::with_capacity(2 * size + 1);
        for _ in 0..size {
            word.push(true);
            word.push(false);
        }
        word.push(false);
        BinaryTree { word }
    }

    /// Number of internal nodes.
    pub fn size(&self) -> usize {
        self.word.len() / 2
    }

    pub fn leaf_count(&self) -> usize {
        self.size() + 1
    }

    /// Exclusive end, in the preorder word, of the subtree starting at each position.
    fn subtree_ends(&self) -> Vec<usize> {
        let w = &self.word;
        let mut end = vec![0; w.len()];
        let mut stack: Vec<usize> = Vec::new();
        for i in (0..w.len()).rev() {
            if w[i] {
                let _left = stack.pop();
                let right = stack.pop().expect("well-formed preorder word");
                end[i] = right;
                stack.push(right);
            } else {
                end[i] = i + 1;
                stack.push(i + 1);
            }
        }
        end
    }

    /// Internal nodes in preorder with their leaf spans and addresses.
    pub fn internal_nodes(&self) -> Vec<InternalNode> {
        let w = &self.word;
        let end = self.subtree_ends();
        let mut leaves_before = Vec::with_capacity(w.len() + 1);
        let mut count = 0;
        for &internal in w {
            leaves_before.push(count);
            if !internal {
                count += 1;
            }
        }
        leaves_before.push(count);
        w.iter()
            .enumerate()
            .filter(|(_, &internal)| internal)
            .map(|(p, _)| InternalNode {
                position: p,
                first_leaf: leaves_before[p],
                last_leaf: leaves_before[end[p]] - 1,
                address: NodeAddress(leaves_before[end[p + 1]] - 1),
            })
            .collect()
    }

    fn locate(&self, at: NodeAddress) -> Result<(usize, Vec<usize>), RotationError> {
        if at.0 >= self.size() {
            return Err(RotationError::AddressOutOfRange {
                address: at.0,
                size: self.size(),
            });
        }
        let node = self
            .internal_nodes()
            .into_iter()
            .find(|node| node.address == at)
            .expect("every rank below size is present");
        Ok((node.position, self.subtree_ends()))
    }

    /// Addresses of the internal children (left, right) of the addressed node.
    pub fn children(&self, at: NodeAddress) -> Result<(Option<NodeAddress>, Option<NodeAddress>), RotationError> {
        let (p, end) = self.locate(at)?;
        let nodes = self.internal_nodes();
        let address_at = |pos: usize| {
            self.word[pos].then(|| {
                nodes
                    .iter()
                    .find(|n| n.position == pos)
                    .map(|n| n.address)
                    .expect("internal position")
            })
        };
        Ok((address_at(p + 1), address_at(end[p + 1])))
    }

    /// Left rotation at `at`: `M(A, N(B, C))` becomes `N(M(A, B), C)`.
    pub fn rotate_left(&self, at: NodeAddress) -> Result<BinaryTree, RotationError> {
        let (p, end) = self.locate(at)?;
        // Preorder `1 A 1 B C` becomes `1 1 A B C`.
        let a_end = end[p + 1];
        if !self.word[a_end] {
            return Err(RotationError::RightChildIsLeaf(at.0));
        }
        let mut word = self.word.clone();
        word[p + 1..=a_end].rotate_right(1);
        Ok(BinaryTree { word })
    }

    /// Right rotation at `at`: `N(M(A, B), C)` becomes `M(A, N(B, C))`.
    pub fn rotate_right(&self, at: NodeAddress) -> Result<BinaryTree, RotationError> {
        let (p, end) = self.locate(at)?;
        if !self.word[p + 1] {
            return Err(RotationError::LeftChildIsLeaf(at.0));
        }
        let a_end = end[p + 2];
        let mut word = self.word.clone();
        word[p + 1..a_end].rotate_left(1);
        Ok(BinaryTree { word })
    }

    /// All trees reachable by one rotation, left rotations first, by address.
    pub fn rotation_neighbors(&self) -> Vec<BinaryTree> {
        let n = self.size();
        let lefts = (0..n).filter_map(|a| self.rotate_left(NodeAddress(a)).ok());
        let rights = (0..n).filter_map(|a| self.rotate_right(NodeAddress(a)).ok());
        lefts.chain(rights).collect()
    }

    /// The dual triangulation of the (n+2)-gon.
    ///
    /// Leaf `i` is the side `(i, i+1)`, the root is the side `(0, n+1)` and a
    /// non-root internal node over leaves `i..=j` is the diagonal `(i, j+1)`.
    pub fn to_triangulation(&self) -> Triangulation {
        let m = (self.size() + 2) as u32;
        let mut diagonals: Vec<Diagonal> = self
            .internal_nodes()
            .into_iter()
            .skip(1)
            .map(|node| Diagonal::new(node.first_leaf as u32, node.last_leaf as u32 + 1))
            .collect();
        diagonals.sort_unstable();
        Triangulation::from_sorted_unchecked(m, diagonals)
    }

    /// Inverse of [`BinaryTree::to_triangulation`].
    pub fn from_triangulation(tri: &Triangulation) -> BinaryTree {
        let m = tri.polygon_size() as usize;
        // Neighbours of each vertex with a larger label, sorted ascending.
        let mut upper: Vec<Vec<u32>> = vec![Vec::new(); m];
        for (v, list) in upper.iter_mut().enumerate().take(m.saturating_sub(1)) {
            list.push(v as u32 + 1);
        }
        for d in tri.diagonals() {
            upper[d.a as usize].push(d.b);
        }
        for list in &mut upper {
            list.sort_unstable();
        }
        let mut word = Vec::with_capacity(2 * m - 3);
        let mut stack = vec![(0u32, m as u32 - 1)];
        while let Some((a, b)) = stack.pop() {
            if b - a == 1 {
                word.push(false);
                continue;
            }
            word.push(true);
            // The apex over chord (a, b) is the largest neighbour of a below b.
            let list = &upper[a as usize];
            let idx = list.partition_point(|&x| x < b);
            let apex = list[idx - 1];
            stack.push((apex, b));
            stack.push((a, apex));
        }
        BinaryTree { word }
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tree(self))
    }
}

impl FromStr for BinaryTree {
    type Err = ParseTreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

/// Parses the parenthesized text form. ASCII whitespace is ignored.
pub fn parse_tree(text: &str) -> Result<BinaryTree, ParseTreeError> {
    let mut word = Vec::new();
    // Children seen so far for each open node.
    let mut open: Vec<u8> = Vec::new();
    let mut complete = false;
    let mut seen_any = false;

    for (offset, ch) in text.char_indices() {
        if ch.is_ascii_whitespace() {
            continue;
        }
        seen_any = true;
        if complete {
            return Err(ParseTreeError::Trailing { offset });
        }
        match ch {
            '(' | 'L' => {
                if open.last() == Some(&2) {
                    return Err(ParseTreeError::Syntax { offset, found: ch });
                }
                if ch == '(' {
                    word.push(true);
                    open.push(0);
                    continue;
                }
                word.push(false);
            }
            ')' => {
                if open.last() != Some(&2) {
                    return Err(ParseTreeError::Syntax { offset, found: ch });
                }
                open.pop();
            }
            _ => return Err(ParseTreeError::Syntax { offset, found: ch }),
        }
        match open.last_mut() {
            Some(children) => *children += 1,
            None => complete = true,
        }
    }

    if !seen_any {
        return Err(ParseTreeError::Empty);
    }
    if !complete {
        return Err(ParseTreeError::UnexpectedEnd { offset: text.len() });
    }
    Ok(BinaryTree { word })
}

/// Canonical text form with no whitespace.
pub fn render_tree(tree: &BinaryTree) -> String {
    let mut out = String::with_capacity(tree.word.len() + tree.size() * 2);
    let mut remaining: Vec<u8> = Vec::new();
    for &internal in &tree.word {
        if internal {
            out.push('(');
            remaining.push(2);
            continue;
        }
        out.push('L');
        while let Some(r) = remaining.last_mut() {
            *r -= 1;
            if *r > 0 {
                break;
            }
            remaining.pop();
            out.push(')');
        }
    }
    out
}

/// Uniform random tree with `size` internal nodes, by Rémy's growth procedure.
///
/// Nodes are numbered in creation order. Step `i` (for `i = 1..=size`) draws
/// `rng.gen_range(0..2i-1)` to pick an existing node `x`, then `rng.gen::<bool>()`
/// for the side: `true` puts the new leaf on the left of the new internal node
/// (with `x` on the right), `false` on the right. The new internal node takes
/// the place of `x` under its former parent.
pub fn remy_sample<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Result<BinaryTree, ZeroSizeError> {
    if size == 0 {
        return Err(ZeroSizeError);
    }
    const NONE: usize = usize::MAX;
    let total = 2 * size + 1;
    let mut left = vec![NONE; total];
    let mut right = vec![NONE; total];
    let mut parent = vec![NONE; total];
    let mut root = 0usize;

    for i in 1..=size {
        let x = rng.gen_range(0..2 * i - 1);
        let leaf_on_left = rng.gen::<bool>();
        let internal = 2 * i - 1;
        let leaf = 2 * i;

        let p = parent[x];
        if p == NONE {
            root = internal;
        } else if left[p] == x {
            left[p] = internal;
        } else {
            right[p] = internal;
        }
        parent[internal] = p;

        let (l, r) = if leaf_on_left { (leaf, x) } else { (x, leaf) };
        left[internal] = l;
        right[internal] = r;
        parent[l] = internal;
        parent[r] = internal;
    }

    let mut word = Vec::with_capacity(total);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if left[v] == NONE {
            word.push(false);
        } else {
            word.push(true);
            stack.push(right[v]);
            stack.push(left[v]);
        }
    }
    Ok(BinaryTree { word })
}

/// All trees of a given size, each exactly once.
///
/// Order: lexicographic on preorder words with leaf < internal. The right comb
/// `(L(L(...)))` comes first and the left comb comes last.
pub fn enumerate_trees(size: usize) -> TreeIter {
    TreeIter {
        size,
        current: None,
        done: false,
    }
}

pub struct TreeIter {
    size: usize,
    current: Option<Vec<bool>>,
    done: bool,
}

impl TreeIter {
    /// Smallest completion of `word[..from]`, given the open slots and internal
    /// nodes still to place.
    fn fill_min(word: &mut Vec<bool>, mut need: usize, mut internal_left: usize) {
        while need > 0 {
            if need > 1 || internal_left == 0 {
                word.push(false);
                need -= 1;
            } else {
                word.push(true);
                internal_left -= 1;
                need += 1;
            }
        }
    }

    fn successor(word: &[bool], size: usize) -> Option<Vec<bool>> {
        // Open slots and internal nodes used before each position.
        let mut need_before = Vec::with_capacity(word.len());
        let mut used_before = Vec::with_capacity(word.len());
        let (mut need, mut used) = (1usize, 0usize);
        for &internal in word {
            need_before.push(need);
            used_before.push(used);
            if internal {
                need += 1;
                used += 1;
            } else {
                need -= 1;
            }
        }
        for i in (0..word.len()).rev() {
            if word[i] || used_before[i] >= size {
                continue;
            }
            let mut next = word[..i].to_vec();
            next.push(true);
            Self::fill_min(&mut next, need_before[i] + 1, size - used_before[i] - 1);
            return Some(next);
        }
        None
    }
}

impl Iterator for TreeIter {
    type Item = BinaryTree;

    fn next(&mut self) -> Option<BinaryTree> {
        if self.done {
            return None;
        }
        let next = match &self.current {
            None => {
                let mut word = Vec::with_capacity(2 * self.size + 1);
                Self::fill_min(&mut word, 1, self.size);
                Some(word)
            }
            Some(word) => Self::successor(word, self.size),
        };
        match next {
            Some(word) => {
                self.current = Some(word.clone());
                Some(BinaryTree { word })
            }
            None => {
                self.done = true;
                None
            }
        }
    }
}
