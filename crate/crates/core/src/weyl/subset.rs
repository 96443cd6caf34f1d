use std::fmt;

/// A subset of the simple-reflection index set, stored as a bitset.
///
/// Bit `i` stands for node `i + 1` in Bourbaki numbering; every public
/// rendering (display, parsing, serialization) is 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeSubset(u32);

impl NodeSubset {
    pub const EMPTY: NodeSubset = NodeSubset(0);

    pub fn from_bits(bits: u32) -> Self {
        NodeSubset(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// All nodes `0..rank` (0-based).
    pub fn full(rank: usize) -> Self {
        if rank >= 32 {
            NodeSubset(u32::MAX)
        } else {
            NodeSubset((1u32 << rank) - 1)
        }
    }

    pub fn singleton(node: usize) -> Self {
        NodeSubset(1 << node)
    }

    /// Builds a subset from 0-based node indices.
    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        NodeSubset(nodes.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// Builds a subset from 1-based node labels.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_nodes(labels.into_iter().map(|l| l - 1))
    }

    pub fn contains(self, node: usize) -> bool {
        self.0 >> node & 1 == 1
    }

    pub fn insert(&mut self, node: usize) {
        self.0 |= 1 << node;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: NodeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: NodeSubset) -> Self {
        NodeSubset(self.0 & other.0)
    }

    pub fn union(self, other: NodeSubset) -> Self {
        NodeSubset(self.0 | other.0)
    }

    pub fn difference(self, other: NodeSubset) -> Self {
        NodeSubset(self.0 & !other.0)
    }

    /// 0-based node indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Image under a permutation of nodes (`perm[i]` is the image of `i`).
    pub fn map(self, perm: &[usize]) -> Self {
        Self::from_nodes(self.iter().map(|i| perm[i]))
    }

    /// Every subset of `0..rank`, ordered by bit pattern.
    pub fn all(rank: usize) -> impl Iterator<Item = NodeSubset> {
        (0..1u32 << rank).map(NodeSubset)
    }
}

impl fmt::Display for NodeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.labels().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NodeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
