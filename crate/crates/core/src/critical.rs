//! Explicit criticality classification at the finest level.
//!
//! A vertex is classified by counting connected components of its lower
//! and upper link, restricted to link edges whose endpoints share the
//! polarity. Links have at most 14 vertices, so a fixed-capacity
//! union-find on the stack does the counting.

use rayon::prelude::*;

use crate::field::FieldState;
use crate::grid::{GridHierarchy, VertexId, MAX_LINK_SIZE};
use crate::scalar::Scalar;
use crate::traversal::PolarityState;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle1,
    Saddle2,
    Regular,
    /// 3D vertex acting as both a 1-saddle and a 2-saddle.
    Degenerate,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Criticality {
    pub kind: CriticalKind,
    pub lower_components: u8,
    pub upper_components: u8,
}

/// Union-find over link-local indices, small enough to live on the stack.
struct LinkComponents {
    parent: [u8; MAX_LINK_SIZE],
}

impl LinkComponents {
    fn new(len: usize) -> LinkComponents {
        let mut parent = [0u8; MAX_LINK_SIZE];
        for (i, p) in parent.iter_mut().enumerate().take(len) {
            *p = i as u8;
        }
        LinkComponents { parent }
    }

    fn find(&mut self, mut i: u8) -> u8 {
        while self.parent[i as usize] != i {
            let up = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = up;
            i = up;
        }
        i
    }

    fn union(&mut self, a: u8, b: u8) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Lower/upper link component counts of `v` in the finest triangulation.
fn link_component_counts<S: Scalar>(
    hier: &GridHierarchy,
    field: &FieldState<S>,
    v: VertexId,
) -> (u8, u8) {
    let level = hier.depth();
    let neighbors = hier.neighbors(level, v).expect("finest vertex");
    let len = neighbors.len();
    let mut upper = 0u16;
    for (k, &u) in neighbors.as_slice().iter().enumerate() {
        if field.cmp_vertices(u, v) == std::cmp::Ordering::Greater {
            upper |= 1 << k;
        }
    }
    let mut components = LinkComponents::new(len);
    for &(a, b) in hier.link_edges(level, v).expect("finest vertex").as_slice() {
        if (upper >> a) & 1 == (upper >> b) & 1 {
            components.union(a, b);
        }
    }
    let mut lower_count = 0u8;
    let mut upper_count = 0u8;
    for k in 0..len as u8 {
        if components.find(k) == k {
            if (upper >> k) & 1 == 1 {
                upper_count += 1;
            } else {
                lower_count += 1;
            }
        }
    }
    (lower_count, upper_count)
}

/// Classifies one vertex of the finest level.
pub fn classify<S: Scalar>(
    hier: &GridHierarchy,
    field: &FieldState<S>,
    v: VertexId,
) -> Criticality {
    let (lower, upper) = link_component_counts(hier, field, v);
    let rank = hier.rank();
    let kind = match (lower, upper) {
        (0, _) => CriticalKind::Minimum,
        (_, 0) => CriticalKind::Maximum,
        (1, 1) => CriticalKind::Regular,
        _ if rank == 2 => CriticalKind::Saddle1,
        (l, u) if l >= 2 && u >= 2 => CriticalKind::Degenerate,
        (l, _) if l >= 2 => CriticalKind::Saddle1,
        _ => CriticalKind::Saddle2,
    };
    Criticality {
        kind,
        lower_components: lower,
        upper_components: upper,
    }
}

/// Classifies every vertex the sweep could not certify as regular;
/// vertices that turn out regular are omitted. Sorted by vertex id.
pub fn extract_critical_points<S: Scalar>(
    hier: &GridHierarchy,
    field: &FieldState<S>,
    polarity: &PolarityState,
) -> Vec<(VertexId, Criticality)> {
    let candidates: Vec<VertexId> = hier
        .vertices(hier.depth())
        .filter(|&v| polarity.needs_criticality(v))
        .collect();
    candidates
        .par_iter()
        .filter_map(|&v| {
            let c = classify(hier, field, v);
            (c.kind != CriticalKind::Regular).then_some((v, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_hierarchy, GridDims};

    fn classify_all(dims: &[usize], values: Vec<f64>) -> Vec<(VertexId, Criticality)> {
        let gd = GridDims::new(dims).unwrap();
        let hier = build_hierarchy(gd, 0);
        let field = FieldState::new(values).unwrap();
        hier.vertices(0)
            .map(|v| (v, classify(&hier, &field, v)))
            .collect()
    }

    #[test]
    fn row_major_ramp_on_3x3() {
        let all = classify_all(&[3, 3], (0..9).map(f64::from).collect());
        assert_eq!(all[0].1.kind, CriticalKind::Minimum);
        assert_eq!(all[8].1.kind, CriticalKind::Maximum);
        assert_eq!(all[4].1.kind, CriticalKind::Regular);
    }

    #[test]
    fn alternating_hexagon_is_a_monkey_saddle() {
        // around the hexagonal link the cycle order is
        // +x, +diag, +y, -x, -diag, -y; alternate above/below the center
        let mut values = vec![0.0; 9];
        values[4] = 10.0; // center (1,1)
        values[5] = 20.0; // +x    up
        values[8] = 2.0; //  +diag down
        values[7] = 22.0; // +y    up
        values[3] = 3.0; //  -x    down
        values[0] = 21.0; // -diag up
        values[1] = 1.0; //  -y    down
        let all = classify_all(&[3, 3], values);
        let c = all[4].1;
        assert_eq!(c.kind, CriticalKind::Saddle1);
        assert_eq!(c.lower_components, 3);
        assert_eq!(c.upper_components, 3);
    }

    #[test]
    fn all_lower_neighbors_make_a_maximum() {
        let mut values = vec![1.0; 9];
        values[4] = 9.0;
        for (i, v) in values.iter_mut().enumerate() {
            if i != 4 {
                *v = i as f64 * 0.1;
            }
        }
        let all = classify_all(&[3, 3], values);
        assert_eq!(all[4].1.kind, CriticalKind::Maximum);
        assert_eq!(all[4].1.upper_components, 0);
    }

    #[test]
    fn center_vertex_acting_as_both_saddles_is_degenerate() {
        use crate::synth;
        let gd = GridDims::new(&[3, 3, 3]).unwrap();
        let hier = build_hierarchy(gd, 0);
        // found by scanning noise fields for a split in both links
        let field = FieldState::new(synth::uniform_noise(gd, 266)).unwrap();
        let c = classify(&hier, &field, VertexId(13));
        assert_eq!(c.kind, CriticalKind::Degenerate);
        assert_eq!(c.lower_components, 2);
        assert_eq!(c.upper_components, 2);
    }

    #[test]
    fn ramp_extraction_finds_exactly_the_two_corner_extrema() {
        use crate::synth;
        use crate::traversal::{sweep, FoldingPolicy};
        let gd = GridDims::new(&[9, 9]).unwrap();
        let hier = build_hierarchy(gd, 32);
        let mut field = FieldState::new(synth::ramp(gd)).unwrap();
        let policy = FoldingPolicy::from_percent(5.0, field.range()).unwrap();
        let state = sweep(&hier, &mut field, &policy).unwrap();
        let crits = extract_critical_points(&hier, &field, &state);
        assert_eq!(crits.len(), 2);
        assert_eq!(
            crits[0],
            (VertexId(0), classify(&hier, &field, VertexId(0)))
        );
        assert_eq!(crits[0].1.kind, CriticalKind::Minimum);
        assert_eq!(crits[1].0, VertexId(80));
        assert_eq!(crits[1].1.kind, CriticalKind::Maximum);
    }

    #[test]
    fn extraction_skips_certified_vertices_and_sorts_by_id() {
        use crate::synth;
        use crate::traversal::{sweep, FoldingPolicy};
        let gd = GridDims::new(&[17, 17]).unwrap();
        let hier = build_hierarchy(gd, 32);
        let mut field = FieldState::new(synth::uniform_noise(gd, 9)).unwrap();
        let state = sweep(&hier, &mut field, &FoldingPolicy::exact()).unwrap();
        let crits = extract_critical_points(&hier, &field, &state);
        assert!(crits.windows(2).all(|w| w[0].0 < w[1].0));
        for (v, c) in &crits {
            assert!(state.needs_criticality(*v));
            assert_ne!(c.kind, CriticalKind::Regular);
        }
        // certified vertices really are regular
        for v in hier.vertices(hier.depth()) {
            if !state.needs_criticality(v) {
                assert_eq!(classify(&hier, &field, v).kind, CriticalKind::Regular);
            }
        }
    }
}
