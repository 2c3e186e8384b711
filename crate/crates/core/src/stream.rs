//! Streaming solver: a balanced tree of segment summaries.
//!
//! Samples arrive in any order; the engine keeps them in a height-balanced
//! search tree ordered by `(score, arrival id)` and stores at every node
//! the [`SegmentSummary`] of its subtree. An insert rebuilds summaries
//! along one root-to-leaf path, costing a logarithmic number of summary
//! merges, after which the optimal rectangle reads off the root.

use std::cmp::Ordering;
use std::mem;

use crate::error::FitError;
use crate::merge::SegmentSummary;
use crate::model::{LossValue, RectFit, Sample, Score};

struct Node<Z> {
    x: Score,
    z: Z,
    id: u64,
    height: u32,
    summary: SegmentSummary<Z>,
    left: Link<Z>,
    right: Link<Z>,
}

type Link<Z> = Option<Box<Node<Z>>>;

/// Online optimal-rectangle engine.
///
/// Inserting the `n`-th sample performs `O(log n)` summary merges; equal
/// scores are kept in arrival order, so the engine's state after any
/// prefix equals the offline solution over that prefix's samples ordered
/// by `(score, id)` with ids assigned by arrival.
pub struct StreamEngine<Z> {
    root: Link<Z>,
    len: usize,
    next_id: u64,
    merges: u64,
}

impl<Z: LossValue> StreamEngine<Z> {
    pub fn new() -> Self {
        StreamEngine {
            root: None,
            len: 0,
            next_id: 0,
            merges: 0,
        }
    }

    /// Inserts one sample and returns its arrival id. The score must be
    /// finite and the loss finite.
    pub fn insert(&mut self, x: Score, z: Z) -> Result<u64, FitError> {
        if !x.is_finite() {
            return Err(FitError::NonFiniteScore(x.get()));
        }
        if !z.is_finite_loss() {
            return Err(FitError::NonFiniteLoss(z.to_f64()));
        }
        let id = self.next_id;
        self.next_id += 1;
        self.len += 1;
        insert_at(&mut self.root, x, z, id, &mut self.merges);
        Ok(id)
    }

    /// The optimal rectangle over everything inserted so far; canonical
    /// empty when nothing was.
    pub fn current_fit(&self) -> RectFit<Z> {
        match &self.root {
            Some(node) => node.summary.rect,
            None => RectFit::empty(Z::ZERO),
        }
    }

    /// Summary of the full stream, equal to folding the sorted samples.
    pub fn summary(&self) -> SegmentSummary<Z> {
        match &self.root {
            Some(node) => node.summary,
            None => SegmentSummary::empty(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Total summary merges performed since construction or [`reset`].
    ///
    /// [`reset`]: StreamEngine::reset
    pub fn merge_invocations(&self) -> u64 {
        self.merges
    }

    /// All samples in `(score, id)` order.
    pub fn samples(&self) -> Vec<Sample<Z>> {
        let mut out = Vec::with_capacity(self.len);
        collect(&self.root, &mut out);
        out
    }

    /// Drops all samples and zeroes the counters.
    pub fn reset(&mut self) {
        *self = StreamEngine::new();
    }
}

impl<Z: LossValue> Default for StreamEngine<Z> {
    fn default() -> Self {
        StreamEngine::new()
    }
}

fn collect<Z: LossValue>(link: &Link<Z>, out: &mut Vec<Sample<Z>>) {
    if let Some(node) = link {
        collect(&node.left, out);
        out.push(Sample::new(node.x, node.z, node.id));
        collect(&node.right, out);
    }
}

fn height<Z>(link: &Link<Z>) -> u32 {
    link.as_ref().map_or(0, |n| n.height)
}

/// Recomputes a node's height and subtree summary from its children:
/// at most two merges.
fn refresh<Z: LossValue>(node: &mut Node<Z>, merges: &mut u64) {
    node.height = 1 + height(&node.left).max(height(&node.right));
    let mut summary = SegmentSummary::leaf(node.x, node.z);
    if let Some(left) = &node.left {
        summary = left.summary.merge_unchecked(&summary);
        *merges += 1;
    }
    if let Some(right) = &node.right {
        summary = summary.merge_unchecked(&right.summary);
        *merges += 1;
    }
    node.summary = summary;
}

fn rotate_left<Z: LossValue>(node: &mut Box<Node<Z>>, merges: &mut u64) {
    let mut r = node.right.take().expect("rotation needs a right child");
    node.right = r.left.take();
    refresh(node, merges);
    mem::swap(node, &mut r);
    node.left = Some(r);
    refresh(node, merges);
}

fn rotate_right<Z: LossValue>(node: &mut Box<Node<Z>>, merges: &mut u64) {
    let mut l = node.left.take().expect("rotation needs a left child");
    node.left = l.right.take();
    refresh(node, merges);
    mem::swap(node, &mut l);
    node.right = Some(l);
    refresh(node, merges);
}

fn rebalance<Z: LossValue>(node: &mut Box<Node<Z>>, merges: &mut u64) {
    refresh(node, merges);
    let lh = height(&node.left);
    let rh = height(&node.right);
    if lh > rh + 1 {
        let left = node
            .left
            .as_mut()
            .expect("left-heavy node has a left child");
        if height(&left.left) < height(&left.right) {
            rotate_left(left, merges);
        }
        rotate_right(node, merges);
    } else if rh > lh + 1 {
        let right = node
            .right
            .as_mut()
            .expect("right-heavy node has a right child");
        if height(&right.right) < height(&right.left) {
            rotate_right(right, merges);
        }
        rotate_left(node, merges);
    }
}

fn insert_at<Z: LossValue>(link: &mut Link<Z>, x: Score, z: Z, id: u64, merges: &mut u64) {
    match link {
        None => {
            *link = Some(Box::new(Node {
                x,
                z,
                id,
                height: 1,
                summary: SegmentSummary::leaf(x, z),
                left: None,
                right: None,
            }));
        }
        Some(node) => {
            // Ids are unique, so the key order is total.
            match (x, id).cmp(&(node.x, node.id)) {
                Ordering::Less => insert_at(&mut node.left, x, z, id, merges),
                Ordering::Greater | Ordering::Equal => insert_at(&mut node.right, x, z, id, merges),
            }
            rebalance(node, merges);
        }
    }
}
