//! Bounding volume hierarchy over subgrid active brick regions.

use crate::geom::{longest_axis, Aabb, Vec3};
use crate::scalar::Scalar;

/// Maximum number of subgrids per leaf.
pub const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone)]
pub enum BvhNodeKind {
    Leaf { first: usize, count: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct BvhNode<T> {
    pub bounds: Aabb<T>,
    pub kind: BvhNodeKind,
}

/// Binary BVH; node 0 is the root, leaves reference ranges of `prim_indices`.
#[derive(Debug, Clone)]
pub struct Bvh<T> {
    pub nodes: Vec<BvhNode<T>>,
    pub prim_indices: Vec<usize>,
}

impl<T: Scalar> Bvh<T> {
    /// Builds over `regions` by recursive median split on the longest centroid-bounds axis.
    pub fn build(regions: &[Aabb<T>]) -> Self {
        let mut bvh = Bvh { nodes: Vec::new(), prim_indices: (0..regions.len()).collect() };
        if !regions.is_empty() {
            let centroids: Vec<Vec3<T>> = regions.iter().map(Aabb::center).collect();
            bvh.build_node(regions, &centroids, 0, regions.len());
        }
        bvh
    }

    fn build_node(&mut self, regions: &[Aabb<T>], centroids: &[Vec3<T>], first: usize, end: usize) -> usize {
        let prims = &mut self.prim_indices[first..end];
        let bounds = prims.iter().fold(Aabb::empty(), |b, &i| b.union(&regions[i]));
        let node = self.nodes.len();
        self.nodes.push(BvhNode { bounds, kind: BvhNodeKind::Leaf { first, count: end - first } });
        if end - first <= LEAF_SIZE {
            return node;
        }
        let cb = prims.iter().fold(Aabb::empty(), |b, &i| b.grow(centroids[i]));
        let axis = longest_axis(cb.extent());
        prims.sort_by(|&a, &b| {
            centroids[a][axis]
                .partial_cmp(&centroids[b][axis])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mid = first + (end - first) / 2;
        let left = self.build_node(regions, centroids, first, mid);
        let right = self.build_node(regions, centroids, mid, end);
        self.nodes[node].kind = BvhNodeKind::Inner { left, right };
        node
    }

    pub fn root_bounds(&self) -> Option<Aabb<T>> {
        self.nodes.first().map(|n| n.bounds)
    }

    /// Calls `visit` with every primitive whose leaf box contains `p`.
    ///
    /// Candidates still need an exact region test by the caller.
    pub fn for_each_candidate(&self, p: Vec3<T>, mut visit: impl FnMut(usize)) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = [0usize; 64];
        let mut sp = 1;
        while sp > 0 {
            sp -= 1;
            let node = &self.nodes[stack[sp]];
            if !node.bounds.contains(p) {
                continue;
            }
            match node.kind {
                BvhNodeKind::Leaf { first, count } => {
                    self.prim_indices[first..first + count].iter().for_each(|&i| visit(i))
                }
                BvhNodeKind::Inner { left, right } => {
                    stack[sp] = right;
                    stack[sp + 1] = left;
                    sp += 2;
                }
            }
        }
    }

    /// Leaves as `(bounds, primitive indices)`.
    pub fn leaves(&self) -> impl Iterator<Item = (&Aabb<T>, &[usize])> {
        self.nodes.iter().filter_map(move |n| match n.kind {
            BvhNodeKind::Leaf { first, count } => Some((&n.bounds, &self.prim_indices[first..first + count])),
            BvhNodeKind::Inner { .. } => None,
        })
    }
}
