//! Brute-force simplicial machinery shared by the oracle tests.
//!
//! Builds the Kuhn triangulation of a grid explicitly (triangles in 2D,
//! tetrahedra split along axis-permutation paths in 3D) and derives links,
//! criticality and Euler characteristics from the explicit simplices. None
//! of it touches the implicit index arithmetic under test.

// not every test target uses every helper
#![allow(dead_code)]

use std::collections::BTreeSet;

use persifold::grid::GridDims;

pub struct ExplicitComplex {
    pub vertex_count: usize,
    /// undirected edges, each stored once with the smaller id first
    pub edges: BTreeSet<(usize, usize)>,
    pub triangles: BTreeSet<[usize; 3]>,
}

fn index_2d(dims: &[usize], x: usize, y: usize) -> usize {
    x + dims[0] * y
}

fn index_3d(dims: &[usize], x: usize, y: usize, z: usize) -> usize {
    x + dims[0] * (y + dims[1] * z)
}

fn insert_simplex(complex: &mut ExplicitComplex, vertices: &[usize]) {
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let (a, b) = (vertices[i].min(vertices[j]), vertices[i].max(vertices[j]));
            complex.edges.insert((a, b));
            for k in (j + 1)..vertices.len() {
                let mut tri = [vertices[i], vertices[j], vertices[k]];
                tri.sort_unstable();
                complex.triangles.insert(tri);
            }
        }
    }
}

pub fn kuhn_complex(dims: GridDims) -> ExplicitComplex {
    let axes = dims.axes().to_vec();
    let mut complex = ExplicitComplex {
        vertex_count: dims.vertex_count(),
        edges: BTreeSet::new(),
        triangles: BTreeSet::new(),
    };
    if axes.len() == 2 {
        for y in 0..axes[1] - 1 {
            for x in 0..axes[0] - 1 {
                let corner = |dx, dy| index_2d(&axes, x + dx, y + dy);
                insert_simplex(&mut complex, &[corner(0, 0), corner(1, 0), corner(1, 1)]);
                insert_simplex(&mut complex, &[corner(0, 0), corner(0, 1), corner(1, 1)]);
            }
        }
    } else {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for z in 0..axes[2] - 1 {
            for y in 0..axes[1] - 1 {
                for x in 0..axes[0] - 1 {
                    for perm in perms {
                        let mut c = [x, y, z];
                        let mut tet = vec![index_3d(&axes, c[0], c[1], c[2])];
                        for axis in perm {
                            c[axis] += 1;
                            tet.push(index_3d(&axes, c[0], c[1], c[2]));
                        }
                        insert_simplex(&mut complex, &tet);
                    }
                }
            }
        }
    }
    complex
}

impl ExplicitComplex {
    pub fn link_vertices(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Edges of the link of `v`: pairs forming a triangle with `v`.
    pub fn link_edges(&self, v: usize) -> BTreeSet<(usize, usize)> {
        self.triangles
            .iter()
            .filter(|t| t.contains(&v))
            .map(|t| {
                let others: Vec<usize> = t.iter().copied().filter(|&u| u != v).collect();
                (others[0].min(others[1]), others[0].max(others[1]))
            })
            .collect()
    }

    /// Connected components of the sub-link spanned by `keep`.
    fn component_count(&self, v: usize, keep: &BTreeSet<usize>) -> usize {
        let mut remaining: BTreeSet<usize> = keep.clone();
        let link_edges = self.link_edges(v);
        let mut components = 0;
        while let Some(&start) = remaining.iter().next() {
            components += 1;
            let mut stack = vec![start];
            remaining.remove(&start);
            while let Some(u) = stack.pop() {
                let adjacent: Vec<usize> = remaining
                    .iter()
                    .copied()
                    .filter(|&w| link_edges.contains(&(u.min(w), u.max(w))))
                    .collect();
                for w in adjacent {
                    remaining.remove(&w);
                    stack.push(w);
                }
            }
        }
        components
    }

    /// `(lower components, upper components, lower vertices, lower edges)`
    /// of `v` under the order `less`.
    pub fn link_split(
        &self,
        v: usize,
        less: &dyn Fn(usize, usize) -> bool,
    ) -> (usize, usize, usize, usize) {
        let link = self.link_vertices(v);
        let lower: BTreeSet<usize> = link.iter().copied().filter(|&u| less(u, v)).collect();
        let upper: BTreeSet<usize> = link.iter().copied().filter(|&u| !less(u, v)).collect();
        let lower_edges = self
            .link_edges(v)
            .iter()
            .filter(|&&(a, b)| lower.contains(&a) && lower.contains(&b))
            .count();
        (
            self.component_count(v, &lower),
            self.component_count(v, &upper),
            lower.len(),
            lower_edges,
        )
    }
}

/// Brute-force criticality from the explicit link.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BruteKind {
    Minimum,
    Maximum,
    Saddle,
    Regular,
}

pub fn brute_classify(
    complex: &ExplicitComplex,
    v: usize,
    less: &dyn Fn(usize, usize) -> bool,
) -> (BruteKind, usize, usize) {
    let (lower, upper, _, _) = complex.link_split(v, less);
    let kind = match (lower, upper) {
        (0, _) => BruteKind::Minimum,
        (_, 0) => BruteKind::Maximum,
        (1, 1) => BruteKind::Regular,
        _ => BruteKind::Saddle,
    };
    (kind, lower, upper)
}
