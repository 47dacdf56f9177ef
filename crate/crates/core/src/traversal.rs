//! Coarse-to-fine hierarchy sweep: link polarity maintenance, vertex
//! folding and topological-invariance bookkeeping.
//!
//! Levels run strictly in sequence. Within a level the work is
//! parallelized over vertices in two phases: first every new vertex is
//! classified against its parent edge (and folded when its folding error
//! stays below the threshold), then polarity bits and invariance flags are
//! refreshed for all vertices of the level. Decisions only ever read the
//! state left by the previous level, so the result does not depend on the
//! number of worker threads.

use rayon::prelude::*;

use crate::error::Error;
use crate::field::FieldState;
use crate::grid::{GridHierarchy, VertexId};
use crate::scalar::Scalar;
use crate::Result;

/// Folding threshold: vertices fold when their folding error is strictly
/// below `epsilon_abs`. Zero disables folding and makes the sweep exact.
#[derive(Clone, Copy, Debug)]
pub struct FoldingPolicy {
    epsilon_abs: f64,
    epsilon_percent: Option<f64>,
}

impl FoldingPolicy {
    /// Threshold as a percentage of the data range, the usual convention.
    pub fn from_percent(percent: f64, range: (f64, f64)) -> Result<FoldingPolicy> {
        if !(0.0..=100.0).contains(&percent) {
            return Err(Error::EpsilonPercentOutOfRange(percent));
        }
        Ok(FoldingPolicy {
            epsilon_abs: percent / 100.0 * (range.1 - range.0),
            epsilon_percent: Some(percent),
        })
    }

    /// Threshold in absolute field units.
    pub fn from_absolute(epsilon_abs: f64) -> Result<FoldingPolicy> {
        if epsilon_abs.is_nan() || epsilon_abs < 0.0 {
            return Err(Error::NegativeEpsilon(epsilon_abs));
        }
        Ok(FoldingPolicy {
            epsilon_abs,
            epsilon_percent: None,
        })
    }

    pub fn exact() -> FoldingPolicy {
        FoldingPolicy {
            epsilon_abs: 0.0,
            epsilon_percent: Some(0.0),
        }
    }

    pub fn epsilon_abs(&self) -> f64 {
        self.epsilon_abs
    }

    pub fn epsilon_percent(&self) -> Option<f64> {
        self.epsilon_percent
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum TiStatus {
    /// Never certified; criticality must be computed explicitly.
    Unknown,
    /// Certified regular at insertion and polarity-stable ever since.
    Regular,
    /// Polarity changed after certification was possible.
    Dirty,
}

/// Per-level sweep counters.
#[derive(Clone, Copy, Debug, Default)]
pub struct LevelStats {
    pub vertices: usize,
    pub ti_old: usize,
    pub ti_new: usize,
    pub folded: usize,
    pub non_monotonic: usize,
}

/// Polarity bits and invariance flags produced by [`sweep`].
#[derive(Clone, Debug)]
pub struct PolarityState {
    polarity: Vec<u16>,
    polarity_known: Vec<bool>,
    status: Vec<TiStatus>,
    per_level: Vec<LevelStats>,
    max_folding_error: f64,
}

impl PolarityState {
    /// Link polarity bits of `v` at the last level it was refreshed on
    /// (the finest level, once the sweep completes). Bit `k` is set when
    /// the `k`-th clipped neighbor lies in the upper link.
    pub fn polarity(&self, v: VertexId) -> u16 {
        self.polarity[v.0]
    }

    pub fn polarity_known(&self, v: VertexId) -> bool {
        self.polarity_known[v.0]
    }

    /// Vertices never certified regular need an explicit criticality
    /// computation at the finest level.
    pub fn needs_criticality(&self, v: VertexId) -> bool {
        self.status[v.0] != TiStatus::Regular
    }

    pub fn needs_criticality_count(&self) -> usize {
        self.status
            .iter()
            .filter(|&&s| s != TiStatus::Regular)
            .count()
    }

    pub fn level_stats(&self) -> &[LevelStats] {
        &self.per_level
    }

    /// Largest folding error applied during the sweep; equals
    /// `max |f_hat - f|` over folded vertices.
    pub fn max_folding_error(&self) -> f64 {
        self.max_folding_error
    }
}

#[derive(Clone, Copy)]
enum NewVertexFate {
    Monotonic,
    Fold(f64),
    NonMonotonic,
}

fn polarity_bits<S: Scalar>(
    hier: &GridHierarchy,
    field: &FieldState<S>,
    level: u32,
    v: VertexId,
) -> u16 {
    let neighbors = hier.neighbors(level, v).expect("level vertex");
    let mut bits = 0u16;
    for (k, &u) in neighbors.as_slice().iter().enumerate() {
        if field.cmp_vertices(u, v) == std::cmp::Ordering::Greater {
            bits |= 1 << k;
        }
    }
    bits
}

/// Sweeps the hierarchy from the coarsest to the finest level, folding
/// non-monotonic vertices under `policy` and maintaining polarity and
/// invariance flags.
pub fn sweep<S: Scalar>(
    hier: &GridHierarchy,
    field: &mut FieldState<S>,
    policy: &FoldingPolicy,
) -> Result<PolarityState> {
    let n = hier.finest().vertex_count();
    if field.len() != n {
        return Err(Error::FieldSizeMismatch {
            expected: n,
            got: field.len(),
        });
    }
    let mut state = PolarityState {
        polarity: vec![0; n],
        polarity_known: vec![false; n],
        status: vec![TiStatus::Unknown; n],
        per_level: Vec::with_capacity(hier.depth() as usize + 1),
        max_folding_error: 0.0,
    };
    // set only for unfolded non-monotonic vertices of the current level
    let mut non_monotonic = vec![false; n];

    for level in hier.levels() {
        let mut stats = LevelStats {
            vertices: hier.vertex_count(level)?,
            ..LevelStats::default()
        };

        let new_ids: Vec<VertexId> = if level > 0 {
            hier.new_vertices(level).collect()
        } else {
            Vec::new()
        };

        if !new_ids.is_empty() {
            // Phase one: classify each new vertex against its parent edge.
            // Parents are old vertices, so decisions only read values
            // settled at the previous level and can run in any order.
            let fates: Vec<NewVertexFate> = new_ids
                .par_iter()
                .map(|&nv| {
                    let (o0, o1) = hier.edge_parents(level, nv).expect("new vertex");
                    if field.is_monotonic(nv, o0, o1) {
                        NewVertexFate::Monotonic
                    } else {
                        let delta = field.folding_error(nv, o0, o1);
                        if delta < policy.epsilon_abs() {
                            NewVertexFate::Fold(delta)
                        } else {
                            NewVertexFate::NonMonotonic
                        }
                    }
                })
                .collect();
            for (&nv, fate) in new_ids.iter().zip(&fates) {
                match *fate {
                    NewVertexFate::Monotonic => {}
                    NewVertexFate::Fold(delta) => {
                        field.fold_vertex(hier, level, nv)?;
                        stats.folded += 1;
                        state.max_folding_error = state.max_folding_error.max(delta);
                    }
                    NewVertexFate::NonMonotonic => {
                        non_monotonic[nv.0] = true;
                        stats.non_monotonic += 1;
                    }
                }
            }
        }

        // Phase two: refresh polarity bits, detect invariant vertices.
        let ids: Vec<VertexId> = hier.vertices(level).collect();
        let updates: Vec<(u16, bool, bool)> = ids
            .par_iter()
            .map(|&v| {
                let bits = polarity_bits(hier, field, level, v);
                let is_new = hier.is_new(level, v).expect("level vertex");
                if is_new {
                    // monotonic, and every new neighbor monotonic: the
                    // vertex is provably regular at this level
                    let ti = !non_monotonic[v.0]
                        && hier
                            .neighbors(level, v)
                            .expect("level vertex")
                            .as_slice()
                            .iter()
                            .all(|&u| {
                                !hier.is_new(level, u).expect("level vertex") || !non_monotonic[u.0]
                            });
                    (bits, true, ti)
                } else {
                    let unchanged = bits == state.polarity[v.0];
                    (bits, false, unchanged)
                }
            })
            .collect();
        for (&v, &(bits, is_new, flag)) in ids.iter().zip(&updates) {
            if is_new {
                if flag {
                    state.status[v.0] = TiStatus::Regular;
                    stats.ti_new += 1;
                }
            } else if level > 0 {
                if flag {
                    // unchanged polarity keeps the previous certification
                    stats.ti_old += 1;
                } else {
                    state.status[v.0] = TiStatus::Dirty;
                }
            }
            state.polarity[v.0] = bits;
            state.polarity_known[v.0] = true;
        }

        for &nv in &new_ids {
            non_monotonic[nv.0] = false;
        }
        state.per_level.push(stats);
    }
    Ok(state)
}

/// Per-level and total fractions of topologically invariant vertices, over
/// the summed vertex counts of all hierarchy levels.
#[derive(Clone, Debug)]
pub struct TiStatistics {
    pub per_level: Vec<LevelTi>,
    pub total_ti: usize,
    pub total_vertices: usize,
    pub percent: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct LevelTi {
    pub level: u32,
    pub ti: usize,
    pub vertices: usize,
    pub percent: f64,
}

pub fn ti_statistics(state: &PolarityState) -> TiStatistics {
    let mut per_level = Vec::with_capacity(state.per_level.len());
    let mut total_ti = 0;
    let mut total_vertices = 0;
    for (level, stats) in state.per_level.iter().enumerate() {
        let ti = stats.ti_old + stats.ti_new;
        total_ti += ti;
        total_vertices += stats.vertices;
        per_level.push(LevelTi {
            level: level as u32,
            ti,
            vertices: stats.vertices,
            percent: if stats.vertices > 0 {
                100.0 * ti as f64 / stats.vertices as f64
            } else {
                0.0
            },
        });
    }
    TiStatistics {
        per_level,
        total_ti,
        total_vertices,
        percent: if total_vertices > 0 {
            100.0 * total_ti as f64 / total_vertices as f64
        } else {
            0.0
        },
    }
}
