//! Arriving building blocks and the record of where they were placed.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BondType, Edge, VertexId};

/// Largest simplex size the engine supports. Subsets of a simplex are
/// enumerated as bit masks, and 16 keeps a full power set well under a
/// million entries.
pub const MAX_SIMPLEX_SIZE: usize = 16;

/// An arriving clique of `size` vertices (local ids `0..size`), carrying at
/// most one defect edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexSpec {
    size: usize,
    defect: Option<(usize, usize)>,
}

impl SimplexSpec {
    pub fn pure(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(SimplexSpec { size, defect: None })
    }

    pub fn with_defect(size: usize, a: usize, b: usize) -> Result<Self> {
        check_size(size)?;
        if a == b || a >= size || b >= size {
            return Err(Error::InvalidSimplex(format!(
                "defect edge ({a},{b}) is not an edge of a {size}-clique"
            )));
        }
        Ok(SimplexSpec {
            size,
            defect: Some((a.min(b), a.max(b))),
        })
    }

    /// Vertex count `n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Order `q_max = n - 1`.
    pub fn order(&self) -> usize {
        self.size - 1
    }

    pub fn defect_edge(&self) -> Option<(usize, usize)> {
        self.defect
    }

    pub fn has_defect(&self) -> bool {
        self.defect.is_some()
    }

    /// Bond type of the local edge `(i, j)`.
    pub fn bond(&self, i: usize, j: usize) -> BondType {
        match self.defect {
            Some((a, b)) if (i, j) == (a, b) || (j, i) == (a, b) => BondType::Defect,
            _ => BondType::Pure,
        }
    }

    /// Whether the local vertex subset contains both defect endpoints.
    pub fn contains_defect(&self, vertices: &[usize]) -> bool {
        match self.defect {
            Some((a, b)) => vertices.contains(&a) && vertices.contains(&b),
            None => false,
        }
    }
}

fn check_size(size: usize) -> Result<()> {
    if !(2..=MAX_SIMPLEX_SIZE).contains(&size) {
        return Err(Error::InvalidSimplex(format!(
            "size {size} outside 2..={MAX_SIMPLEX_SIZE}"
        )));
    }
    Ok(())
}

/// A face of an arriving simplex: `q + 1` local vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub contains_defect: bool,
}

impl Face {
    pub fn order(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// All faces of order `level` (subsets of `level + 1` vertices) in
/// lexicographic order. Valid levels are `0..=q_max - 1`; the simplex itself
/// is never a docking face.
pub fn face_subsets(spec: &SimplexSpec, level: usize) -> Result<Vec<Face>> {
    let max = spec.order() - 1;
    if level > max {
        return Err(Error::LevelOutOfRange {
            level,
            size: spec.size(),
            max,
        });
    }
    Ok((0..spec.size())
        .combinations(level + 1)
        .map(|vertices| {
            let contains_defect = spec.contains_defect(&vertices);
            Face {
                vertices,
                contains_defect,
            }
        })
        .collect())
}

/// A simplex after placement: global vertex ids in local order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedSimplex {
    pub vertices: Vec<VertexId>,
    pub defect_edge: Option<Edge>,
    /// Growth step at which the simplex arrived (0 for the seed simplex).
    pub step: usize,
    /// Order of the shared face; `None` for the seed simplex.
    pub shared_order: Option<usize>,
}
