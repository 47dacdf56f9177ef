//! Validation references: the staircase quantization baseline and an
//! independent exact diagram oracle.
//!
//! The oracle is a plain sublevel-set union-find sweep over the sorted
//! vertices. It deliberately shares nothing with the traversal/pairing
//! pipeline beyond the grid neighbor queries, so agreement between the two
//! is meaningful evidence of correctness.

use std::cmp::Ordering;

use crate::error::Error;
use crate::grid::{GridHierarchy, VertexId};
use crate::pairing::{PairType, PersistenceDiagram, PersistencePair};
use crate::scalar::Scalar;
use crate::Result;

/// Quantizes `values` onto plateaus of width `2 * epsilon_abs`, mapping
/// each value to its bin center, which keeps `max |q(v) - v|` strictly
/// below `epsilon_abs`.
///
/// Values landing exactly on a bin edge sit at distance `epsilon_abs` from
/// both adjacent centers; they are nudged to just inside the bound instead
/// so the strict inequality survives (this also covers `v == min f`).
/// Output is `f64` regardless of the input type: integer inputs cannot
/// represent fractional bin centers without violating the bound.
pub fn staircase<S: Scalar>(values: &[S], epsilon_abs: f64) -> Result<Vec<f64>> {
    if epsilon_abs.is_nan() || epsilon_abs <= 0.0 {
        return Err(Error::NonPositiveQuantizationStep(epsilon_abs));
    }
    let min = values
        .iter()
        .map(|v| v.to_f64())
        .fold(f64::INFINITY, f64::min);
    let step = 2.0 * epsilon_abs;
    Ok(values
        .iter()
        .map(|v| {
            let v = v.to_f64();
            let bin = ((v - min) / step).floor();
            let center = min + (bin + 0.5) * step;
            if (center - v).abs() >= epsilon_abs {
                v + (center - v).signum() * epsilon_abs * (1.0 - 1e-9)
            } else {
                center
            }
        })
        .collect())
}

struct SweepUnionFind {
    parent: Vec<u32>,
    birth: Vec<u32>,
}

impl SweepUnionFind {
    fn new(n: usize) -> SweepUnionFind {
        SweepUnionFind {
            parent: (0..n as u32).collect(),
            birth: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let up = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = up;
            i = up;
        }
        i
    }
}

/// Exact extremum/saddle diagram by an ascending sublevel sweep (and the
/// symmetric descending sweep for the maxima side), Elder rule, global
/// pair appended. Works on the raw `values` at the finest level only.
pub fn exact_sweep_diagram<S: Scalar>(
    values: &[S],
    hier: &GridHierarchy,
) -> Result<PersistenceDiagram> {
    let n = hier.finest().vertex_count();
    if values.len() != n {
        return Err(Error::FieldSizeMismatch {
            expected: n,
            got: values.len(),
        });
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite_value() {
            return Err(Error::NonFiniteValue(i));
        }
        min = min.min(v.to_f64());
        max = max.max(v.to_f64());
    }

    // (value, index) is the same symbolic order the pipeline uses when
    // nothing is folded
    let cmp = |a: usize, b: usize| -> Ordering {
        match values[a].partial_cmp(&values[b]) {
            Some(Ordering::Less) => Ordering::Less,
            Some(Ordering::Greater) => Ordering::Greater,
            _ => a.cmp(&b),
        }
    };
    let mut sorted: Vec<u32> = (0..n as u32).collect();
    sorted.sort_by(|&a, &b| cmp(a as usize, b as usize));

    let mut pairs = Vec::new();
    for ascending in [true, false] {
        let level = hier.depth();
        let mut seen = vec![false; n];
        let mut uf = SweepUnionFind::new(n);
        let order: Box<dyn Iterator<Item = &u32>> = if ascending {
            Box::new(sorted.iter())
        } else {
            Box::new(sorted.iter().rev())
        };
        for &v in order {
            let vi = v as usize;
            let mut roots: Vec<u32> = Vec::new();
            for &u in hier.neighbors(level, VertexId(vi))?.as_slice() {
                if seen[u.0] {
                    let r = uf.find(u.0 as u32);
                    if !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
            seen[vi] = true;
            if roots.is_empty() {
                // a fresh extremum starts its own component (birth is the
                // vertex itself, preset in the union-find)
                continue;
            }
            // keep the eldest component; every other one dies here
            let mut elder = roots[0];
            for &r in &roots[1..] {
                let r_first = cmp(
                    uf.birth[r as usize] as usize,
                    uf.birth[elder as usize] as usize,
                ) == Ordering::Less;
                let (e, y) = if ascending == r_first {
                    (r, elder)
                } else {
                    (elder, r)
                };
                let younger_birth = uf.birth[y as usize] as usize;
                pairs.push(if ascending {
                    PersistencePair {
                        birth_vertex: VertexId(younger_birth),
                        death_vertex: VertexId(vi),
                        birth: values[younger_birth].to_f64(),
                        death: values[vi].to_f64(),
                        pair_type: PairType::MinSaddle,
                        certain: true,
                    }
                } else {
                    PersistencePair {
                        birth_vertex: VertexId(vi),
                        death_vertex: VertexId(younger_birth),
                        birth: values[vi].to_f64(),
                        death: values[younger_birth].to_f64(),
                        pair_type: PairType::SaddleMax,
                        certain: true,
                    }
                });
                uf.parent[y as usize] = e;
                elder = e;
            }
            let root = uf.find(elder);
            uf.parent[vi] = root;
        }
    }

    let global_min = sorted[0] as usize;
    let global_max = sorted[n - 1] as usize;
    pairs.push(PersistencePair {
        birth_vertex: VertexId(global_min),
        death_vertex: VertexId(global_max),
        birth: values[global_min].to_f64(),
        death: values[global_max].to_f64(),
        pair_type: PairType::Global,
        certain: true,
    });

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
    Ok(PersistenceDiagram {
        pairs,
        epsilon_abs: 0.0,
        field_range: (min, max),
    })
}
