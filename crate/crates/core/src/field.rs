//! Field storage and the total vertex order.
//!
//! A [`FieldState`] keeps the original scalars `f`, the approximated
//! scalars `f_hat` (equal to `f` until a vertex is folded), the signed
//! monotony offsets and the folded flags. The injectivity offset of a
//! vertex is its row-major index, so it is never stored.
//!
//! Every comparison in the pipeline goes through the same strict total
//! order: lexicographic on `(f_hat, monotony offset, vertex index)`. The
//! monotony offset out-ranks the index so that folds on plateau values
//! (common on integer fields, where the midpoint quantizes onto one of its
//! edge endpoints) stay strictly between their edge endpoints.

use std::cmp::Ordering;

use crate::error::Error;
use crate::grid::{GridHierarchy, VertexId};
use crate::scalar::Scalar;
use crate::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Ascending,
    Descending,
}

/// Original and approximated scalars plus the folding bookkeeping.
#[derive(Clone, Debug)]
pub struct FieldState<S: Scalar> {
    original: Vec<S>,
    approx: Vec<S>,
    monotony: Vec<i64>,
    folded: Vec<bool>,
    range: (f64, f64),
}

impl<S: Scalar> FieldState<S> {
    /// Wraps raw per-vertex values. Non-finite values are rejected with
    /// the offending vertex index.
    pub fn new(values: Vec<S>) -> Result<FieldState<S>> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite_value() {
                return Err(Error::NonFiniteValue(i));
            }
            let x = v.to_f64();
            min = min.min(x);
            max = max.max(x);
        }
        let n = values.len();
        Ok(FieldState {
            approx: values.clone(),
            original: values,
            monotony: vec![0; n],
            folded: vec![false; n],
            range: (min, max),
        })
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    #[inline]
    pub fn original(&self, v: VertexId) -> S {
        self.original[v.0]
    }

    #[inline]
    pub fn approx(&self, v: VertexId) -> S {
        self.approx[v.0]
    }

    #[inline]
    pub fn monotony(&self, v: VertexId) -> i64 {
        self.monotony[v.0]
    }

    #[inline]
    pub fn is_folded(&self, v: VertexId) -> bool {
        self.folded[v.0]
    }

    /// `(min f, max f)` of the original field.
    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn original_values(&self) -> &[S] {
        &self.original
    }

    pub fn approx_values(&self) -> &[S] {
        &self.approx
    }

    pub fn folded_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.folded
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(VertexId(i)))
    }

    pub fn folded_count(&self) -> usize {
        self.folded.iter().filter(|&&f| f).count()
    }

    /// Strict comparison of two distinct vertices under the
    /// `(f_hat, monotony, index)` order. Never returns `Equal`.
    pub fn compare(&self, a: VertexId, b: VertexId) -> Result<Ordering> {
        if a == b {
            return Err(Error::CompareSameVertex(a));
        }
        Ok(self.cmp_vertices(a, b))
    }

    #[inline]
    pub(crate) fn cmp_vertices(&self, a: VertexId, b: VertexId) -> Ordering {
        debug_assert_ne!(a, b);
        match self.approx[a.0].partial_cmp(&self.approx[b.0]) {
            Some(Ordering::Less) => Ordering::Less,
            Some(Ordering::Greater) => Ordering::Greater,
            // values are finite by construction, so this is a numeric tie
            _ => match self.monotony[a.0].cmp(&self.monotony[b.0]) {
                Ordering::Equal => a.0.cmp(&b.0),
                ord => ord,
            },
        }
    }

    /// Reinterpolation error a fold of `n` would incur: the distance in
    /// `f64` between the edge midpoint (computed in the field's numeric
    /// type, i.e. the value a fold would actually store) and `f(n)`.
    pub fn folding_error(&self, n: VertexId, o0: VertexId, o1: VertexId) -> f64 {
        let mid = S::midpoint(self.approx[o0.0], self.approx[o1.0]);
        (mid.to_f64() - self.original[n.0].to_f64()).abs()
    }

    /// `max |f_hat - f|` over folded vertices; equals the L-infinity
    /// distance between the approximated and the original field.
    pub fn max_fold_deviation(&self) -> f64 {
        self.folded_vertices()
            .map(|v| (self.approx[v.0].to_f64() - self.original[v.0].to_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// Is `n` strictly between the endpoints of its parent edge under the
    /// total order?
    pub(crate) fn is_monotonic(&self, n: VertexId, o0: VertexId, o1: VertexId) -> bool {
        let (lo, hi) = if self.cmp_vertices(o0, o1) == Ordering::Less {
            (o0, o1)
        } else {
            (o1, o0)
        };
        self.cmp_vertices(lo, n) == Ordering::Less && self.cmp_vertices(n, hi) == Ordering::Less
    }

    /// Folds the new vertex `n` of `level`: replaces its value by the
    /// midpoint of its edge parents and assigns a monotony offset that puts
    /// `n` strictly between them under the total order.
    ///
    /// When the midpoint ties an endpoint numerically, the tie either
    /// resolves correctly through the vertex indices (the offset of the
    /// tied parent is copied) or contradicts the required monotony, in
    /// which case the parent's offset is shifted by `2^(h - level)`. That
    /// step dominates every adjustment later levels can make, leaving room
    /// for further subdivision of the plateau.
    pub fn fold_vertex(&mut self, hier: &GridHierarchy, level: u32, n: VertexId) -> Result<()> {
        let (o0, o1) = hier.edge_parents(level, n)?;
        let step = 1i64 << (hier.depth() - level);
        let (lo, hi) = if self.cmp_vertices(o0, o1) == Ordering::Less {
            (o0, o1)
        } else {
            (o1, o0)
        };
        let mid = S::midpoint(self.approx[o0.0], self.approx[o1.0]);
        let ties_lo = mid == self.approx[lo.0];
        let ties_hi = mid == self.approx[hi.0];
        let offset = match (ties_lo, ties_hi) {
            (false, false) => 0,
            // n must land above the tied lower endpoint
            (true, false) => {
                if n.0 > lo.0 {
                    self.monotony[lo.0]
                } else {
                    self.monotony[lo.0] + step
                }
            }
            // n must land below the tied upper endpoint
            (false, true) => {
                if n.0 < hi.0 {
                    self.monotony[hi.0]
                } else {
                    self.monotony[hi.0] - step
                }
            }
            // the whole edge is one plateau value
            (true, true) => {
                if self.monotony[lo.0] == self.monotony[hi.0] {
                    // index order runs from lo to hi along the edge, so the
                    // midpoint index already sits strictly between
                    self.monotony[lo.0]
                } else {
                    // parent offsets were set at coarser levels and differ
                    // by at least 2 * step
                    self.monotony[lo.0] + step
                }
            }
        };
        self.approx[n.0] = mid;
        self.monotony[n.0] = offset;
        self.folded[n.0] = true;
        debug_assert!(self.is_monotonic(n, o0, o1));
        Ok(())
    }
}

/// The strict total order over vertices of a field, optionally reversed.
///
/// The descending direction is the order of the negated field and drives
/// the saddle/maximum side of the pipeline.
#[derive(Clone, Copy)]
pub struct TotalOrder<'a, S: Scalar> {
    field: &'a FieldState<S>,
    direction: Direction,
}

impl<'a, S: Scalar> TotalOrder<'a, S> {
    pub fn new(field: &'a FieldState<S>, direction: Direction) -> Self {
        TotalOrder { field, direction }
    }

    pub fn ascending(field: &'a FieldState<S>) -> Self {
        Self::new(field, Direction::Ascending)
    }

    pub fn descending(field: &'a FieldState<S>) -> Self {
        Self::new(field, Direction::Descending)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn field(&self) -> &'a FieldState<S> {
        self.field
    }

    #[inline]
    pub fn cmp(&self, a: VertexId, b: VertexId) -> Ordering {
        let ord = self.field.cmp_vertices(a, b);
        match self.direction {
            Direction::Ascending => ord,
            Direction::Descending => ord.reverse(),
        }
    }

    /// The smallest of two vertices under this order.
    #[inline]
    pub fn min(&self, a: VertexId, b: VertexId) -> VertexId {
        if self.cmp(a, b) == Ordering::Less {
            a
        } else {
            b
        }
    }
}
