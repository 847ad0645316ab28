use std::collections::BTreeSet;
use std::fmt;

/// One coordinate of a vertex-edge tuple. Indices are 0-based; `Display` is 1-based.
///
/// The derived order puts every vertex before every edge, then orders by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Vertex(usize),
    Edge(usize),
}

impl Slot {
    pub fn is_edge(self) -> bool {
        matches!(self, Slot::Edge(_))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Vertex(i) => write!(f, "v{}", i + 1),
            Slot::Edge(j) => write!(f, "e{}", j + 1),
        }
    }
}

/// A cell of the product cube structure on `C_k^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexEdgeTuple {
    slots: Vec<Slot>,
}

impl VertexEdgeTuple {
    pub fn new(slots: Vec<Slot>) -> Self {
        VertexEdgeTuple { slots }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of edge slots.
    pub fn dim(&self) -> usize {
        self.slots.iter().filter(|s| s.is_edge()).count()
    }

    pub fn vertex_support(&self) -> BTreeSet<usize> {
        self.slots
            .iter()
            .filter_map(|s| match *s {
                Slot::Vertex(i) => Some(i),
                Slot::Edge(_) => None,
            })
            .collect()
    }

    pub fn edge_support(&self) -> BTreeSet<usize> {
        self.slots
            .iter()
            .filter_map(|s| match *s {
                Slot::Edge(j) => Some(j),
                Slot::Vertex(_) => None,
            })
            .collect()
    }

    /// Vertex support as a bitmask; callers guarantee indices below 64.
    pub(crate) fn vertex_mask(&self) -> u64 {
        self.slots.iter().fold(0, |m, s| match *s {
            Slot::Vertex(i) => m | 1 << i,
            Slot::Edge(_) => m,
        })
    }

    pub(crate) fn with_slot(&self, pos: usize, slot: Slot) -> VertexEdgeTuple {
        let mut slots = self.slots.clone();
        slots[pos] = slot;
        VertexEdgeTuple { slots }
    }
}

impl fmt::Display for VertexEdgeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}
