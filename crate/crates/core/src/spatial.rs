//! Nearest-unassigned-point queries over a static point set.
//!
//! A k-d tree is built once by median splits; points are never moved
//! afterwards. Assignment removes a point logically: an alive mark plus
//! per-node subtree counters let searches prune fully-dead subtrees, so
//! queries stay fast even when most points are gone. A full frontier
//! query (`nearest_alive_to_set` over `m` query points) costs
//! `O(m log n)` on balanced data.

use crate::dataset::Dataset;
use crate::error::Error;
use crate::scalar::{dist_sq, Scalar};
use crate::Result;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    /// Index of the dataset point stored at this node.
    point: u32,
    axis: u32,
    left: u32,
    right: u32,
    parent: u32,
    /// Alive points in the subtree rooted here, this node included.
    alive_in_subtree: u32,
}

/// Best candidate so far: squared distance with index tie-break.
#[derive(Debug, Clone, Copy)]
struct Best<F> {
    d2: F,
    idx: u32,
}

impl<F: Scalar> Best<F> {
    fn none() -> Self {
        Self {
            d2: F::infinity(),
            idx: NONE,
        }
    }

    /// Lexicographic improvement on (distance, index); equal candidates
    /// do not replace the incumbent.
    #[inline]
    fn offer(&mut self, d2: F, idx: u32) -> bool {
        if d2 < self.d2 || (d2 == self.d2 && idx < self.idx) {
            self.d2 = d2;
            self.idx = idx;
            true
        } else {
            false
        }
    }
}

/// k-d tree over all points of a dataset with logical deletion.
#[derive(Debug)]
pub struct SpatialIndex<'a, F> {
    ds: &'a Dataset<F>,
    nodes: Vec<Node>,
    root: u32,
    /// node id holding each point index
    node_of_point: Vec<u32>,
    alive: Vec<bool>,
    alive_count: usize,
}

impl<'a, F: Scalar> SpatialIndex<'a, F> {
    /// Builds the tree by recursive median splits, cycling the split
    /// axis with depth. Costs `O(n log n)`; all points start alive.
    pub fn build(ds: &'a Dataset<F>) -> Self {
        let n = ds.n();
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut index = Self {
            ds,
            nodes: Vec::with_capacity(n),
            root: NONE,
            node_of_point: vec![NONE; n],
            alive: vec![true; n],
            alive_count: n,
        };
        index.root = index.build_rec(&mut order, 0, NONE);
        index
    }

    fn build_rec(&mut self, order: &mut [u32], depth: usize, parent: u32) -> u32 {
        if order.is_empty() {
            return NONE;
        }
        let axis = depth % self.ds.dim();
        let mid = order.len() / 2;
        // Total order on (coordinate, point index) keeps construction
        // deterministic even with duplicate coordinates.
        let ds = self.ds;
        order.select_nth_unstable_by(mid, |&a, &b| {
            ds.coords(a as usize)[axis]
                .partial_cmp(&ds.coords(b as usize)[axis])
                .expect("finite coordinates")
                .then(a.cmp(&b))
        });
        let point = order[mid];
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            point,
            axis: axis as u32,
            left: NONE,
            right: NONE,
            parent,
            alive_in_subtree: order.len() as u32,
        });
        self.node_of_point[point as usize] = id;
        let (lo, rest) = order.split_at_mut(mid);
        let hi = &mut rest[1..];
        let left = self.build_rec(lo, depth + 1, id);
        let right = self.build_rec(hi, depth + 1, id);
        self.nodes[id as usize].left = left;
        self.nodes[id as usize].right = right;
        id
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn is_alive(&self, i: usize) -> bool {
        self.alive[i]
    }

    pub fn dim(&self) -> usize {
        self.ds.dim()
    }

    /// Logically deletes point `i`; subsequent queries will not return
    /// it. Deleting a dead point is a contract violation.
    pub fn mark_assigned(&mut self, i: usize) -> Result<()> {
        if !self.alive[i] {
            return Err(Error::Logic(format!(
                "point {i} marked assigned twice; the growth loop must not revisit points"
            )));
        }
        self.alive[i] = false;
        self.alive_count -= 1;
        let mut node = self.node_of_point[i];
        while node != NONE {
            self.nodes[node as usize].alive_in_subtree -= 1;
            node = self.nodes[node as usize].parent;
        }
        Ok(())
    }

    /// Returns the alive point nearest to `q` (Euclidean), ties broken
    /// by smallest point index, together with its distance.
    pub fn nearest_alive(&self, q: &[F]) -> Result<(usize, F)> {
        let (idx, d, _) = self.nearest_alive_stats(q)?;
        Ok((idx, d))
    }

    /// Same as [`Self::nearest_alive`] but also reports the number of
    /// tree nodes visited, as a measurable proxy for query cost.
    pub fn nearest_alive_stats(&self, q: &[F]) -> Result<(usize, F, usize)> {
        assert_eq!(q.len(), self.ds.dim(), "query dimension mismatch");
        if self.alive_count == 0 {
            return Err(Error::Exhausted);
        }
        let mut best = Best::none();
        let mut visited = 0usize;
        self.search(self.root, q, &mut best, &mut visited);
        Ok((best.idx as usize, best.d2.sqrt(), visited))
    }

    /// Nearest alive point over a set of query points: minimizes over
    /// the product of queries and alive points. Returns the winning
    /// point index, its distance, and the position of the closest query
    /// point within `qs`. Ties break by smallest point index, then
    /// smallest query position.
    pub fn nearest_alive_to_set(&self, qs: &[&[F]]) -> Result<(usize, F, usize)> {
        if qs.is_empty() {
            return Err(Error::InvalidArgument(
                "nearest_alive_to_set requires at least one query point".into(),
            ));
        }
        if self.alive_count == 0 {
            return Err(Error::Exhausted);
        }
        let mut best = Best::none();
        let mut which_q = 0usize;
        let mut visited = 0usize;
        for (qi, q) in qs.iter().enumerate() {
            assert_eq!(q.len(), self.ds.dim(), "query dimension mismatch");
            let before = (best.d2, best.idx);
            self.search(self.root, q, &mut best, &mut visited);
            if (best.d2, best.idx) != before {
                which_q = qi;
            }
        }
        Ok((best.idx as usize, best.d2.sqrt(), which_q))
    }

    fn search(&self, id: u32, q: &[F], best: &mut Best<F>, visited: &mut usize) {
        if id == NONE {
            return;
        }
        let node = &self.nodes[id as usize];
        if node.alive_in_subtree == 0 {
            return;
        }
        *visited += 1;
        let pi = node.point as usize;
        if self.alive[pi] {
            best.offer(dist_sq(q, self.ds.coords(pi)), node.point);
        }
        let axis = node.axis as usize;
        let delta = q[axis] - self.ds.coords(pi)[axis];
        let (near, far) = if delta < F::zero() {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.search(near, q, best, visited);
        // The far side may still hold an equal-distance point with a
        // smaller index, so it is cut only when strictly farther.
        if delta * delta <= best.d2 {
            self.search(far, q, best, visited);
        }
    }

    /// All alive points within `radius` (inclusive) of `q`, ascending
    /// by index.
    pub fn within_radius(&self, q: &[F], radius: F) -> Vec<usize> {
        assert_eq!(q.len(), self.ds.dim(), "query dimension mismatch");
        let mut out = Vec::new();
        self.range_rec(self.root, q, radius * radius, &mut out);
        out.sort_unstable();
        out
    }

    fn range_rec(&self, id: u32, q: &[F], r2: F, out: &mut Vec<usize>) {
        if id == NONE {
            return;
        }
        let node = &self.nodes[id as usize];
        if node.alive_in_subtree == 0 {
            return;
        }
        let pi = node.point as usize;
        if self.alive[pi] && dist_sq(q, self.ds.coords(pi)) <= r2 {
            out.push(pi);
        }
        let axis = node.axis as usize;
        let delta = q[axis] - self.ds.coords(pi)[axis];
        let (near, far) = if delta < F::zero() {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.range_rec(near, q, r2, out);
        if delta * delta <= r2 {
            self.range_rec(far, q, r2, out);
        }
    }
}
