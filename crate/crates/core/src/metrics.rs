//! Diagram and field distances.
//!
//! Both diagram metrics solve the optimal matching problem exactly: the
//! Wasserstein distance with a dense O(n^3) Hungarian assignment on the
//! diagonal-augmented square cost matrix, the bottleneck distance by a
//! binary search over candidate distances with a Hopcroft-Karp feasibility
//! matching. Validation diagrams stay small enough (a few thousand points)
//! that exact solvers are the right trade-off.

use std::collections::VecDeque;

use crate::error::Error;
use crate::pairing::PersistenceDiagram;
use crate::Result;

/// A diagram point in birth/death coordinates (`death >= birth`).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DiagramPoint {
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64) -> DiagramPoint {
        DiagramPoint { birth, death }
    }

    pub fn is_diagonal(&self) -> bool {
        self.birth == self.death
    }

    /// Orthogonal projection onto the diagonal.
    pub fn projection(&self) -> DiagramPoint {
        let m = (self.birth + self.death) * 0.5;
        DiagramPoint { birth: m, death: m }
    }

    /// Distance to the own diagonal projection under `norm`.
    fn diagonal_distance(&self, norm: Norm) -> f64 {
        point_distance(*self, self.projection(), norm)
    }
}

pub fn diagram_points(diagram: &PersistenceDiagram) -> Vec<DiagramPoint> {
    diagram
        .pairs
        .iter()
        .map(|p| DiagramPoint::new(p.birth, p.death))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

/// Pointwise distance in the birth/death plane; zero when both points lie
/// on the diagonal (diagonal points are identified).
pub fn point_distance(a: DiagramPoint, b: DiagramPoint, norm: Norm) -> f64 {
    if a.is_diagonal() && b.is_diagonal() {
        return 0.0;
    }
    let dx = (a.birth - b.birth).abs();
    let dy = (a.death - b.death).abs();
    match norm {
        Norm::L1 => dx + dy,
        Norm::L2 => dx.hypot(dy),
        Norm::LInf => dx.max(dy),
    }
}

/// Dense Hungarian assignment on a square cost matrix; returns the total
/// cost of the optimal assignment.
fn hungarian(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    if n == 0 {
        return 0.0;
    }
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n)
        .filter(|&j| p[j] > 0)
        .map(|j| cost[p[j] - 1][j - 1])
        .sum()
}

fn q_exponent(norm: Norm) -> f64 {
    match norm {
        Norm::L1 => 1.0,
        Norm::L2 => 2.0,
        Norm::LInf => unreachable!("handled by bottleneck"),
    }
}

/// L_q-Wasserstein distance between two diagrams with diagonal
/// augmentation: every point may match a point of the other diagram or its
/// own diagonal projection. `Norm::LInf` converges to the bottleneck
/// distance and is forwarded there.
pub fn wasserstein(d1: &[DiagramPoint], d2: &[DiagramPoint], norm: Norm) -> f64 {
    if norm == Norm::LInf {
        return bottleneck(d1, d2);
    }
    let (n, m) = (d1.len(), d2.len());
    let size = n + m;
    if size == 0 {
        return 0.0;
    }
    let q = q_exponent(norm);
    // rows: points of d1 then m diagonal slots; columns: points of d2 then
    // n diagonal slots. Diagonal slots are interchangeable, so the cost of
    // any slot is the row/column point's own projection distance.
    let mut cost = vec![vec![0.0f64; size]; size];
    for i in 0..n {
        let proj = d1[i].diagonal_distance(norm).powf(q);
        for j in 0..size {
            cost[i][j] = if j < m {
                point_distance(d1[i], d2[j], norm).powf(q)
            } else {
                proj
            };
        }
    }
    for (j, b) in d2.iter().enumerate() {
        let proj = b.diagonal_distance(norm).powf(q);
        for row in cost.iter_mut().skip(n) {
            row[j] = proj;
        }
    }
    hungarian(&cost).max(0.0).powf(1.0 / q)
}

/// One point-to-point assignment of the optimal bottleneck matching;
/// points absent from `matched` are matched to the diagonal.
#[derive(Clone, Debug)]
pub struct BottleneckMatching {
    pub value: f64,
    /// `(index into d1, index into d2)` pairs.
    pub matched: Vec<(usize, usize)>,
}

struct BottleneckInstance<'a> {
    d1: &'a [DiagramPoint],
    d2: &'a [DiagramPoint],
    diag1: Vec<f64>,
    diag2: Vec<f64>,
}

impl<'a> BottleneckInstance<'a> {
    fn new(d1: &'a [DiagramPoint], d2: &'a [DiagramPoint]) -> Self {
        BottleneckInstance {
            d1,
            d2,
            diag1: d1.iter().map(|p| p.diagonal_distance(Norm::LInf)).collect(),
            diag2: d2.iter().map(|p| p.diagonal_distance(Norm::LInf)).collect(),
        }
    }

    /// Maximum matching where every left node (d1 points, then d2 diagonal
    /// slots) pairs with a right node (d2 points, then d1 diagonal slots)
    /// at distance at most `r`. Returns the matching if it is perfect.
    fn feasible(&self, r: f64) -> Option<Vec<(usize, usize)>> {
        let (n, m) = (self.d1.len(), self.d2.len());
        let size = n + m;
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); size];
        for (i, a) in self.d1.iter().enumerate() {
            for (j, b) in self.d2.iter().enumerate() {
                if point_distance(*a, *b, Norm::LInf) <= r {
                    adjacency[i].push(j as u32);
                }
            }
            if self.diag1[i] <= r {
                adjacency[i].push((m + i) as u32);
            }
        }
        for j in 0..m {
            if self.diag2[j] <= r {
                adjacency[n + j].push(j as u32);
            }
            for i in 0..n {
                adjacency[n + j].push((m + i) as u32);
            }
        }
        let matching = hopcroft_karp(&adjacency, size);
        let complete = matching.iter().filter(|x| x.is_some()).count() == size;
        complete.then(|| {
            (0..n)
                .filter_map(|i| match matching[i] {
                    Some(j) if (j as usize) < m => Some((i, j as usize)),
                    _ => None,
                })
                .collect()
        })
    }
}

/// Maximum bipartite matching; `matches[left] = right`.
fn hopcroft_karp(adjacency: &[Vec<u32>], right_count: usize) -> Vec<Option<u32>> {
    let left_count = adjacency.len();
    let mut match_left: Vec<Option<u32>> = vec![None; left_count];
    let mut match_right: Vec<Option<u32>> = vec![None; right_count];
    loop {
        // BFS layers from free left vertices
        let mut dist: Vec<u32> = vec![u32::MAX; left_count];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (l, m) in match_left.iter().enumerate() {
            if m.is_none() {
                dist[l] = 0;
                queue.push_back(l);
            }
        }
        let mut found_augmenting = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adjacency[l] {
                match match_right[r as usize] {
                    None => found_augmenting = true,
                    Some(l2) => {
                        if dist[l2 as usize] == u32::MAX {
                            dist[l2 as usize] = dist[l] + 1;
                            queue.push_back(l2 as usize);
                        }
                    }
                }
            }
        }
        if !found_augmenting {
            break;
        }
        fn dfs(
            l: usize,
            adjacency: &[Vec<u32>],
            dist: &mut [u32],
            match_left: &mut [Option<u32>],
            match_right: &mut [Option<u32>],
        ) -> bool {
            for k in 0..adjacency[l].len() {
                let r = adjacency[l][k] as usize;
                let advance = match match_right[r] {
                    None => true,
                    Some(l2) => {
                        dist[l2 as usize] == dist[l] + 1
                            && dfs(l2 as usize, adjacency, dist, match_left, match_right)
                    }
                };
                if advance {
                    match_left[l] = Some(r as u32);
                    match_right[r] = Some(l as u32);
                    dist[l] = u32::MAX;
                    return true;
                }
            }
            dist[l] = u32::MAX;
            false
        }
        for l in 0..left_count {
            if match_left[l].is_none() && dist[l] == 0 {
                dfs(l, adjacency, &mut dist, &mut match_left, &mut match_right);
            }
        }
    }
    match_left
}

/// Bottleneck distance: the smallest `r` admitting a perfect matching of
/// the diagonal-augmented diagrams with all pairwise distances at most `r`.
pub fn bottleneck(d1: &[DiagramPoint], d2: &[DiagramPoint]) -> f64 {
    bottleneck_with_matching(d1, d2).value
}

/// Bottleneck distance along with the realized optimal matching.
pub fn bottleneck_with_matching(d1: &[DiagramPoint], d2: &[DiagramPoint]) -> BottleneckMatching {
    if d1.is_empty() && d2.is_empty() {
        return BottleneckMatching {
            value: 0.0,
            matched: Vec::new(),
        };
    }
    let instance = BottleneckInstance::new(d1, d2);
    let mut candidates: Vec<f64> =
        Vec::with_capacity(d1.len() * d2.len() + d1.len() + d2.len() + 1);
    candidates.push(0.0);
    candidates.extend(instance.diag1.iter().copied());
    candidates.extend(instance.diag2.iter().copied());
    for a in d1 {
        for b in d2 {
            candidates.push(point_distance(*a, *b, Norm::LInf));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // smallest feasible candidate by bisection (feasibility is monotone)
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(instance.feasible(candidates[hi]).is_some());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if instance.feasible(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = candidates[lo];
    let matched = instance.feasible(value).expect("feasible at the optimum");
    BottleneckMatching { value, matched }
}

/// Unnormalized L2 and L-infinity distances between two fields.
pub fn field_norms(f: &[f64], g: &[f64]) -> Result<(f64, f64)> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch(f.len(), g.len()));
    }
    let mut sum_sq = 0.0;
    let mut max = 0.0f64;
    for (a, b) in f.iter().zip(g) {
        let d = (a - b).abs();
        sum_sq += d * d;
        max = max.max(d);
    }
    Ok((sum_sq.sqrt(), max))
}

/// Pair counts reported next to the distances.
#[derive(Clone, Copy, Debug)]
pub struct PairCounts {
    pub approx_total: usize,
    pub approx_uncertain: usize,
    pub exact_total: usize,
}

/// Accuracy of an approximate result against the exact reference.
#[derive(Clone, Copy, Debug)]
pub struct DiagramMetricReport {
    pub w_inf: f64,
    pub w2: f64,
    pub field_l2: f64,
    pub field_l_inf: f64,
    pub pair_counts: PairCounts,
}

pub fn report(
    approx: &PersistenceDiagram,
    exact: &PersistenceDiagram,
    approx_field: &[f64],
    exact_field: &[f64],
) -> Result<DiagramMetricReport> {
    let pa = diagram_points(approx);
    let pe = diagram_points(exact);
    let (field_l2, field_l_inf) = field_norms(approx_field, exact_field)?;
    Ok(DiagramMetricReport {
        w_inf: bottleneck(&pa, &pe),
        w2: wasserstein(&pa, &pe, Norm::L2),
        field_l2,
        field_l_inf,
        pair_counts: PairCounts {
            approx_total: approx.pairs.len(),
            approx_uncertain: approx.pairs.iter().filter(|p| !p.certain).count(),
            exact_total: exact.pairs.len(),
        },
    })
}
