//! Implicit regular grid, its Kuhn triangulation and the edge-nested
//! decimation hierarchy.
//!
//! Nothing is stored per vertex: every topology query is index arithmetic
//! against small static tables. Level `0` is the coarsest grid, level `h`
//! the finest (the input resolution). A vertex is identified by its
//! row-major index into the finest grid (`x` fastest, then `y`, then `z`)
//! at every level it appears on.
//!
//! The Kuhn triangulation runs its cell diagonals along `+(1,1)` in 2D and
//! `+(1,1,1)` in 3D. This fixes the canonical neighbor order used for link
//! polarity bits: axis offsets first (`+x, -x, +y, -y[, +z, -z]`), then the
//! in-diagonal face offsets, then the body diagonal, each as `+offset`
//! followed by `-offset`. Offsets that leave the grid are clipped, the
//! order of the remaining neighbors is preserved.

use crate::error::Error;
use crate::Result;

/// Index of a vertex in the finest grid, row-major.
///
/// Doubles as the injectivity offset of the vertex: comparisons fall back
/// to this index, so it is the symbolic perturbation of the input field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl std::fmt::Debug for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Per-axis vertex counts of a 2- or 3-dimensional grid.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GridDims {
    dims: [usize; 3],
    rank: usize,
}

impl GridDims {
    /// Builds grid dimensions from 2 or 3 axis lengths, each at least 2.
    pub fn new(axes: &[usize]) -> Result<GridDims> {
        if !(axes.len() == 2 || axes.len() == 3) || axes.iter().any(|&a| a < 2) {
            return Err(Error::InvalidDims(axes.to_vec()));
        }
        let mut dims = [1usize; 3];
        dims[..axes.len()].copy_from_slice(axes);
        Ok(GridDims {
            dims,
            rank: axes.len(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn axes(&self) -> &[usize] {
        &self.dims[..self.rank]
    }

    pub fn vertex_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    #[inline]
    fn index_of(&self, c: [usize; 3]) -> usize {
        c[0] + self.dims[0] * (c[1] + self.dims[1] * c[2])
    }

    #[inline]
    fn coords_of(&self, index: usize) -> [usize; 3] {
        let x = index % self.dims[0];
        let rest = index / self.dims[0];
        [x, rest % self.dims[1], rest / self.dims[1]]
    }

    #[inline]
    fn contains(&self, c: [i64; 3]) -> bool {
        (0..3).all(|a| c[a] >= 0 && (c[a] as usize) < self.dims[a])
    }
}

/// Canonical neighbor offsets of the 2D Kuhn triangulation.
const OFFSETS_2D: [[i64; 3]; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [1, 1, 0],
    [-1, -1, 0],
];

/// Canonical neighbor offsets of the 3D Kuhn triangulation.
const OFFSETS_3D: [[i64; 3]; 14] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
    [1, 1, 0],
    [-1, -1, 0],
    [1, 0, 1],
    [-1, 0, -1],
    [0, 1, 1],
    [0, -1, -1],
    [1, 1, 1],
    [-1, -1, -1],
];

/// Link edges of an interior 2D vertex, as pairs of offset indices: the
/// hexagon around the vertex.
const LINK_PAIRS_2D: [(u8, u8); 6] = [(0, 3), (0, 4), (1, 2), (1, 5), (2, 4), (3, 5)];

/// Link edges of an interior 3D vertex, as pairs of offset indices. The
/// link is a 14-vertex triangulated sphere with 36 edges and 24 triangles.
const LINK_PAIRS_3D: [(u8, u8); 36] = [
    (0, 3),
    (0, 5),
    (0, 6),
    (0, 8),
    (0, 11),
    (0, 12),
    (1, 2),
    (1, 4),
    (1, 7),
    (1, 9),
    (1, 10),
    (1, 13),
    (2, 5),
    (2, 6),
    (2, 9),
    (2, 10),
    (2, 12),
    (3, 4),
    (3, 7),
    (3, 8),
    (3, 11),
    (3, 13),
    (4, 7),
    (4, 8),
    (4, 10),
    (4, 12),
    (5, 6),
    (5, 9),
    (5, 11),
    (5, 13),
    (6, 12),
    (7, 13),
    (8, 12),
    (9, 13),
    (10, 12),
    (11, 13),
];

pub const MAX_LINK_SIZE: usize = 14;
pub const MAX_LINK_EDGES: usize = 36;

/// Hierarchy depth never exceeds this, so monotony offset increments
/// `2^(h-i)` stay far away from `i64` overflow.
pub const MAX_DEPTH: u32 = 32;

pub fn offsets(rank: usize) -> &'static [[i64; 3]] {
    if rank == 2 {
        &OFFSETS_2D
    } else {
        &OFFSETS_3D
    }
}

fn link_pairs(rank: usize) -> &'static [(u8, u8)] {
    if rank == 2 {
        &LINK_PAIRS_2D
    } else {
        &LINK_PAIRS_3D
    }
}

/// Clipped neighbor list of a vertex, in canonical order.
#[derive(Clone, Copy)]
pub struct Neighbors {
    ids: [VertexId; MAX_LINK_SIZE],
    len: u8,
}

impl Neighbors {
    pub fn as_slice(&self) -> &[VertexId] {
        &self.ids[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl std::ops::Index<usize> for Neighbors {
    type Output = VertexId;
    fn index(&self, i: usize) -> &VertexId {
        &self.as_slice()[i]
    }
}

impl<'a> IntoIterator for &'a Neighbors {
    type Item = &'a VertexId;
    type IntoIter = std::slice::Iter<'a, VertexId>;
    fn into_iter(self) -> Self::IntoIter {
        self.as_slice().iter()
    }
}

/// Link edges of a vertex, as index pairs into its clipped neighbor list.
#[derive(Clone, Copy)]
pub struct LinkEdges {
    pairs: [(u8, u8); MAX_LINK_EDGES],
    len: u8,
}

impl LinkEdges {
    pub fn as_slice(&self) -> &[(u8, u8)] {
        &self.pairs[..self.len as usize]
    }
}

/// The edge-nested multiresolution hierarchy of a regular grid.
///
/// `level_dims[i]` are the grid dimensions of level `i`; each coarser level
/// halves every axis (`(n - 1) / 2 + 1`), so new vertices of level `i` sit
/// at midpoints of level `i-1` edges and new edges connect only new
/// vertices.
#[derive(Clone, Debug)]
pub struct GridHierarchy {
    level_dims: Vec<GridDims>,
    depth: u32,
}

/// Builds the hierarchy for `dims` with at most `max_levels` decimations.
///
/// The usable depth is capped by the 2-adic valuation of `axis_count - 1`
/// over all axes: an axis of even vertex count cannot be halved at all, so
/// such grids degenerate to a single-level (exact) hierarchy.
pub fn build_hierarchy(dims: GridDims, max_levels: u32) -> GridHierarchy {
    let mut depth = max_levels.min(MAX_DEPTH);
    for &n in dims.axes() {
        depth = depth.min((n - 1).trailing_zeros());
    }
    let mut level_dims = vec![dims; depth as usize + 1];
    for i in (0..depth as usize).rev() {
        let finer = level_dims[i + 1];
        let mut dims = [1usize; 3];
        for (a, d) in dims.iter_mut().enumerate() {
            *d = if a < finer.rank() {
                (finer.dims[a] - 1) / 2 + 1
            } else {
                1
            };
        }
        level_dims[i] = GridDims {
            dims,
            rank: finer.rank(),
        };
    }
    GridHierarchy { level_dims, depth }
}

impl GridHierarchy {
    /// Number of decimation levels (`h`); the hierarchy has `h + 1` grids.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn finest(&self) -> GridDims {
        self.level_dims[self.depth as usize]
    }

    pub fn rank(&self) -> usize {
        self.finest().rank()
    }

    pub fn level_dims(&self, level: u32) -> Result<GridDims> {
        self.level_dims
            .get(level as usize)
            .copied()
            .ok_or(Error::InvalidLevel {
                level,
                depth: self.depth,
            })
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        0..=self.depth
    }

    /// Spacing of level-`level` vertices in finest-grid coordinates.
    #[inline]
    fn stride(&self, level: u32) -> usize {
        1 << (self.depth - level)
    }

    pub fn vertex_count(&self, level: u32) -> Result<usize> {
        Ok(self.level_dims(level)?.vertex_count())
    }

    /// Level-local coordinates of `v`, or an error if `v` is not a vertex
    /// of that level.
    pub fn level_coords(&self, level: u32, v: VertexId) -> Result<[usize; 3]> {
        let dims = self.level_dims(level)?;
        let finest = self.finest();
        if v.0 >= finest.vertex_count() {
            return Err(Error::InvalidVertex(v, level));
        }
        let c = finest.coords_of(v.0);
        let stride = self.stride(level);
        if c.iter().any(|&x| x % stride != 0) {
            return Err(Error::InvalidVertex(v, level));
        }
        let local = [c[0] / stride, c[1] / stride, c[2] / stride];
        debug_assert!(dims.contains([local[0] as i64, local[1] as i64, local[2] as i64]));
        Ok(local)
    }

    #[inline]
    fn id_at(&self, level: u32, local: [usize; 3]) -> VertexId {
        let stride = self.stride(level);
        let finest = self.finest();
        VertexId(finest.index_of([local[0] * stride, local[1] * stride, local[2] * stride]))
    }

    /// All vertices of a level, ascending by vertex id.
    pub fn vertices(&self, level: u32) -> impl Iterator<Item = VertexId> + '_ {
        let dims = self.level_dims(level).expect("valid level");
        (0..dims.vertex_count()).map(move |i| self.id_at(level, dims.coords_of(i)))
    }

    /// A vertex is new at its insertion level: some level-local coordinate
    /// is odd. Level 0 vertices are never new.
    pub fn is_new(&self, level: u32, v: VertexId) -> Result<bool> {
        let local = self.level_coords(level, v)?;
        Ok(level > 0 && local.iter().any(|&c| c % 2 == 1))
    }

    /// New vertices of a level, ascending by level-local index.
    pub fn new_vertices(&self, level: u32) -> impl Iterator<Item = VertexId> + '_ {
        let dims = self.level_dims(level).expect("valid level");
        (0..dims.vertex_count()).filter_map(move |i| {
            let c = dims.coords_of(i);
            (level > 0 && c.iter().any(|&x| x % 2 == 1)).then(|| self.id_at(level, c))
        })
    }

    /// Bitmask of canonical offsets that stay inside the grid at `v`.
    ///
    /// The mask of an old vertex is identical on every level it lives on,
    /// which is what keeps polarity bit positions stable across levels.
    pub fn neighbor_mask(&self, level: u32, v: VertexId) -> Result<u16> {
        let local = self.level_coords(level, v)?;
        let dims = self.level_dims(level)?;
        let mut mask = 0u16;
        for (k, o) in offsets(dims.rank()).iter().enumerate() {
            let c = [
                local[0] as i64 + o[0],
                local[1] as i64 + o[1],
                local[2] as i64 + o[2],
            ];
            if dims.contains(c) {
                mask |= 1 << k;
            }
        }
        Ok(mask)
    }

    /// Link vertices of `v` in the level triangulation, canonical order,
    /// out-of-grid offsets clipped.
    pub fn neighbors(&self, level: u32, v: VertexId) -> Result<Neighbors> {
        let local = self.level_coords(level, v)?;
        let dims = self.level_dims(level)?;
        let mut ids = [VertexId(0); MAX_LINK_SIZE];
        let mut len = 0u8;
        for o in offsets(dims.rank()) {
            let c = [
                local[0] as i64 + o[0],
                local[1] as i64 + o[1],
                local[2] as i64 + o[2],
            ];
            if dims.contains(c) {
                ids[len as usize] =
                    self.id_at(level, [c[0] as usize, c[1] as usize, c[2] as usize]);
                len += 1;
            }
        }
        Ok(Neighbors { ids, len })
    }

    /// Pairs `(i, j)` of clipped neighbor positions that are adjacent in
    /// the link of `v`, i.e. span a triangle of the triangulation with `v`.
    ///
    /// Derived from the static interior table: a candidate pair survives at
    /// the boundary exactly when both offsets stay inside the grid.
    pub fn link_edges(&self, level: u32, v: VertexId) -> Result<LinkEdges> {
        let mask = self.neighbor_mask(level, v)?;
        let rank = self.level_dims(level)?.rank();
        let mut position = [u8::MAX; MAX_LINK_SIZE];
        let mut next = 0u8;
        for (k, slot) in position.iter_mut().enumerate().take(offsets(rank).len()) {
            if mask & (1 << k) != 0 {
                *slot = next;
                next += 1;
            }
        }
        let mut pairs = [(0u8, 0u8); MAX_LINK_EDGES];
        let mut len = 0u8;
        for &(a, b) in link_pairs(rank) {
            if mask & (1 << a) != 0 && mask & (1 << b) != 0 {
                pairs[len as usize] = (position[a as usize], position[b as usize]);
                len += 1;
            }
        }
        Ok(LinkEdges { pairs, len })
    }

    /// The two old endpoints of the level-`level - 1` edge whose midpoint
    /// is `new_vertex`. The edge direction is the parity pattern of the
    /// level-local coordinates; the lower-coordinate endpoint comes first.
    pub fn edge_parents(&self, level: u32, new_vertex: VertexId) -> Result<(VertexId, VertexId)> {
        let local = self.level_coords(level, new_vertex)?;
        if !self.is_new(level, new_vertex)? {
            return Err(Error::NotNewVertex(new_vertex, level));
        }
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        for a in 0..3 {
            let p = local[a] % 2;
            lo[a] = local[a] - p;
            hi[a] = local[a] + p;
        }
        Ok((self.id_at(level, lo), self.id_at(level, hi)))
    }
}
