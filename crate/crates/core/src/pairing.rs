//! Saddle/extremum persistence pairing from critical points.
//!
//! For each saddle, one backward integral line per lower-link component
//! descends to a minimum; the discovered minima form merge triplets which,
//! replayed in ascending saddle order through a union-find, produce the
//! minimum/saddle pairs under the Elder rule. The saddle/maximum side runs
//! the same machinery on the reversed order. The global pair (global
//! minimum, global maximum) is always emitted.
//!
//! Integral lines memoize their terminal extremum per visited vertex.
//! Every vertex has a unique terminal (descent is deterministic under the
//! total order), so racing line computations publish identical values and
//! the result is independent of scheduling.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::critical::Criticality;
use crate::field::{Direction, FieldState, TotalOrder};
use crate::grid::{GridHierarchy, VertexId, MAX_LINK_SIZE};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairType {
    MinSaddle,
    SaddleMax,
    Global,
}

impl PairType {
    pub fn label(&self) -> &'static str {
        match self {
            PairType::MinSaddle => "min-saddle",
            PairType::SaddleMax => "saddle-max",
            PairType::Global => "global",
        }
    }
}

/// Which finite pair families to compute; the global pair always appears.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairSelector {
    MinSaddle,
    SaddleMax,
    Both,
}

impl PairSelector {
    fn wants_min_side(&self) -> bool {
        matches!(self, PairSelector::MinSaddle | PairSelector::Both)
    }

    fn wants_max_side(&self) -> bool {
        matches!(self, PairSelector::SaddleMax | PairSelector::Both)
    }
}

/// A merge of the components of two extrema at a saddle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MergeTriplet {
    pub saddle: VertexId,
    pub extremum_a: VertexId,
    pub extremum_b: VertexId,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PersistencePair {
    pub birth_vertex: VertexId,
    pub death_vertex: VertexId,
    pub birth: f64,
    pub death: f64,
    pub pair_type: PairType,
    pub certain: bool,
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

#[derive(Clone, Debug)]
pub struct PersistenceDiagram {
    pub pairs: Vec<PersistencePair>,
    pub epsilon_abs: f64,
    pub field_range: (f64, f64),
}

impl PersistenceDiagram {
    pub fn global_pair(&self) -> Option<&PersistencePair> {
        self.pairs.iter().find(|p| p.pair_type == PairType::Global)
    }
}

/// Write-once memo of terminal extrema for integral lines.
pub struct IntegralMemo {
    slots: Vec<AtomicU64>,
}

const MEMO_EMPTY: u64 = u64::MAX;

impl IntegralMemo {
    pub fn new(vertex_count: usize) -> IntegralMemo {
        let mut slots = Vec::with_capacity(vertex_count);
        slots.resize_with(vertex_count, || AtomicU64::new(MEMO_EMPTY));
        IntegralMemo { slots }
    }

    #[inline]
    fn get(&self, v: VertexId) -> Option<VertexId> {
        match self.slots[v.0].load(AtomicOrdering::Relaxed) {
            MEMO_EMPTY => None,
            m => Some(VertexId(m as usize)),
        }
    }

    #[inline]
    fn publish(&self, v: VertexId, terminal: VertexId) {
        // competing writers hold the same terminal; first write wins
        let _ = self.slots[v.0].compare_exchange(
            MEMO_EMPTY,
            terminal.0 as u64,
            AtomicOrdering::Relaxed,
            AtomicOrdering::Relaxed,
        );
    }
}

/// Follows the steepest descent under `order` from `start` to its terminal
/// extremum, publishing the terminal for every vertex on the path.
pub fn integral_line<S: Scalar>(
    start: VertexId,
    order: &TotalOrder<'_, S>,
    hier: &GridHierarchy,
    memo: &IntegralMemo,
) -> VertexId {
    let level = hier.depth();
    let mut path: Vec<VertexId> = Vec::new();
    let mut current = start;
    let terminal = loop {
        if let Some(t) = memo.get(current) {
            break t;
        }
        let neighbors = hier.neighbors(level, current).expect("finest vertex");
        let mut lowest = current;
        for &u in neighbors.as_slice() {
            if order.cmp(u, lowest) == Ordering::Less {
                lowest = u;
            }
        }
        if lowest == current {
            break current;
        }
        path.push(current);
        current = lowest;
    };
    memo.publish(terminal, terminal);
    for v in path {
        memo.publish(v, terminal);
    }
    terminal
}

/// Representatives (the per-component extremal link vertex) of the
/// direction-relative lower-link components of `saddle`.
fn component_representatives<S: Scalar>(
    saddle: VertexId,
    order: &TotalOrder<'_, S>,
    hier: &GridHierarchy,
) -> Vec<VertexId> {
    let level = hier.depth();
    let neighbors = hier.neighbors(level, saddle).expect("finest vertex");
    let len = neighbors.len();
    let mut below = [false; MAX_LINK_SIZE];
    for (k, &u) in neighbors.as_slice().iter().enumerate() {
        below[k] = order.cmp(u, saddle) == Ordering::Less;
    }
    // same tiny union-find as the classifier, but over the relative order
    let mut parent: [u8; MAX_LINK_SIZE] = [0; MAX_LINK_SIZE];
    for (i, p) in parent.iter_mut().enumerate().take(len) {
        *p = i as u8;
    }
    fn find(parent: &mut [u8; MAX_LINK_SIZE], mut i: u8) -> u8 {
        while parent[i as usize] != i {
            let up = parent[parent[i as usize] as usize];
            parent[i as usize] = up;
            i = up;
        }
        i
    }
    for &(a, b) in hier
        .link_edges(level, saddle)
        .expect("finest vertex")
        .as_slice()
    {
        if below[a as usize] && below[b as usize] {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    }
    let mut rep_of_root: [Option<VertexId>; MAX_LINK_SIZE] = [None; MAX_LINK_SIZE];
    let mut order_of_roots: Vec<u8> = Vec::new();
    for k in 0..len as u8 {
        if !below[k as usize] {
            continue;
        }
        let root = find(&mut parent, k);
        let u = neighbors[k as usize];
        match &mut rep_of_root[root as usize] {
            Some(rep) => {
                if order.cmp(u, *rep) == Ordering::Less {
                    *rep = u;
                }
            }
            slot @ None => {
                *slot = Some(u);
                order_of_roots.push(root);
            }
        }
    }
    order_of_roots
        .iter()
        .map(|&r| rep_of_root[r as usize].expect("root has a representative"))
        .collect()
}

struct ElderUnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    birth: Vec<VertexId>,
}

impl ElderUnionFind {
    fn new(births: &[VertexId]) -> ElderUnionFind {
        ElderUnionFind {
            parent: (0..births.len()).collect(),
            rank: vec![0; births.len()],
            birth: births.to_vec(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            let up = self.parent[self.parent[i]];
            self.parent[i] = up;
            i = up;
        }
        i
    }

    /// Merges two roots; the surviving root keeps `birth`.
    fn union(&mut self, a: usize, b: usize, birth: VertexId) {
        let (mut a, mut b) = (a, b);
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        self.birth[a] = birth;
    }
}

/// Replays sorted merge triplets through a union-find, emitting one pair
/// per actual component merge: the younger extremum dies at the saddle.
pub fn replay_triplets<S: Scalar>(
    triplets: &[MergeTriplet],
    extrema: &[VertexId],
    order: &TotalOrder<'_, S>,
) -> Vec<PersistencePair> {
    let index: HashMap<VertexId, usize> =
        extrema.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = ElderUnionFind::new(extrema);
    let mut pairs = Vec::new();
    let field = order.field();
    for t in triplets {
        let ra = uf.find(index[&t.extremum_a]);
        let rb = uf.find(index[&t.extremum_b]);
        if ra == rb {
            continue;
        }
        let (elder_root, younger_root) = if order.cmp(uf.birth[ra], uf.birth[rb]) == Ordering::Less
        {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let elder = uf.birth[elder_root];
        let younger = uf.birth[younger_root];
        pairs.push(match order.direction() {
            Direction::Ascending => PersistencePair {
                birth_vertex: younger,
                death_vertex: t.saddle,
                birth: field.approx(younger).to_f64(),
                death: field.approx(t.saddle).to_f64(),
                pair_type: PairType::MinSaddle,
                certain: true,
            },
            Direction::Descending => PersistencePair {
                birth_vertex: t.saddle,
                death_vertex: younger,
                birth: field.approx(t.saddle).to_f64(),
                death: field.approx(younger).to_f64(),
                pair_type: PairType::SaddleMax,
                certain: true,
            },
        });
        uf.union(ra, rb, elder);
    }
    pairs
}

fn one_side<S: Scalar>(
    hier: &GridHierarchy,
    field: &FieldState<S>,
    critical_points: &[(VertexId, Criticality)],
    direction: Direction,
) -> Vec<PersistencePair> {
    let order = TotalOrder::new(field, direction);
    let saddles: Vec<VertexId> = critical_points
        .iter()
        .filter(|(_, c)| {
            let components = match direction {
                Direction::Ascending => c.lower_components,
                Direction::Descending => c.upper_components,
            };
            components >= 2
        })
        .map(|&(v, _)| v)
        .collect();
    let extrema: Vec<VertexId> = critical_points
        .iter()
        .filter(|(_, c)| {
            matches!(
                (direction, c.lower_components, c.upper_components),
                (Direction::Ascending, 0, _) | (Direction::Descending, _, 0)
            )
        })
        .map(|&(v, _)| v)
        .collect();

    let memo = IntegralMemo::new(field.len());
    let mut triplets: Vec<MergeTriplet> = saddles
        .par_iter()
        .map(|&s| {
            let reps = component_representatives(s, &order, hier);
            let minima: Vec<VertexId> = reps
                .iter()
                .map(|&rep| integral_line(rep, &order, hier, &memo))
                .collect();
            minima[1..]
                .iter()
                .map(|&m| MergeTriplet {
                    saddle: s,
                    extremum_a: minima[0],
                    extremum_b: m,
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    // stable parallel sort; triplets of one saddle keep their fan-out order
    triplets.par_sort_by(|a, b| {
        if a.saddle == b.saddle {
            Ordering::Equal
        } else {
            order.cmp(a.saddle, b.saddle)
        }
    });
    replay_triplets(&triplets, &extrema, &order)
}

fn canonical_sort(pairs: &mut [PersistencePair]) {
    fn type_rank(t: PairType) -> u8 {
        match t {
            PairType::MinSaddle => 0,
            PairType::SaddleMax => 1,
            PairType::Global => 2,
        }
    }
    pairs.sort_by(|a, b| {
        type_rank(a.pair_type)
            .cmp(&type_rank(b.pair_type))
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
            .then(a.birth_vertex.cmp(&b.birth_vertex))
            .then(a.death_vertex.cmp(&b.death_vertex))
    });
}

/// Assembles the persistence diagram from the classified critical points.
pub fn compute_diagram<S: Scalar>(
    hier: &GridHierarchy,
    field: &FieldState<S>,
    critical_points: &[(VertexId, Criticality)],
    epsilon_abs: f64,
    selector: PairSelector,
) -> PersistenceDiagram {
    let mut pairs = Vec::new();
    if selector.wants_min_side() {
        pairs.extend(one_side(hier, field, critical_points, Direction::Ascending));
    }
    if selector.wants_max_side() {
        pairs.extend(one_side(
            hier,
            field,
            critical_points,
            Direction::Descending,
        ));
    }

    let order = TotalOrder::ascending(field);
    let mut global_min = VertexId(0);
    let mut global_max = VertexId(0);
    for i in 1..field.len() {
        let v = VertexId(i);
        if order.cmp(v, global_min) == Ordering::Less {
            global_min = v;
        }
        if order.cmp(v, global_max) == Ordering::Greater {
            global_max = v;
        }
    }
    pairs.push(PersistencePair {
        birth_vertex: global_min,
        death_vertex: global_max,
        birth: field.approx(global_min).to_f64(),
        death: field.approx(global_max).to_f64(),
        pair_type: PairType::Global,
        certain: true,
    });

    for p in &mut pairs {
        p.certain = epsilon_abs == 0.0 || p.persistence() > 2.0 * epsilon_abs;
    }
    canonical_sort(&mut pairs);
    PersistenceDiagram {
        pairs,
        epsilon_abs,
        field_range: field.range(),
    }
}

/// `(certain, uncertain)` pair counts: a pair is uncertain when its
/// persistence is at most `2 * epsilon_abs`.
pub fn classify_certainty(diagram: &PersistenceDiagram) -> (usize, usize) {
    let certain = diagram.pairs.iter().filter(|p| p.certain).count();
    (certain, diagram.pairs.len() - certain)
}
