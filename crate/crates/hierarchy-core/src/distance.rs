//! Exact tree distances streamed in row batches.
//!
//! `all_pairs_distances` yields the full N x N distance matrix a few rows
//! at a time so downstream consumers never hold more than
//! `batch_rows * N` entries. Each row is an independent breadth-first
//! sweep over the undirected tree, so results do not depend on how rows
//! are grouped into batches.

use std::collections::VecDeque;

use crate::Hierarchy;

/// A contiguous block of distance-matrix rows.
///
/// `rows[i][v]` is the path length (in edges) between node
/// `start_row + i` and node `v`, in pre-order index space.
#[derive(Debug, Clone)]
pub struct DistanceBatch {
    pub start_row: usize,
    pub rows: Vec<Vec<u32>>,
}

/// Streaming iterator over the tree's distance matrix. See
/// [`all_pairs_distances`].
pub struct AllPairsDistances<'a> {
    h: &'a Hierarchy,
    neighbors: Vec<Vec<usize>>,
    batch_rows: usize,
    next_row: usize,
}

/// Streams the all-pairs distance matrix of `h` in batches of at most
/// `batch_rows` rows. `batch_rows` must be at least 1.
pub fn all_pairs_distances(h: &Hierarchy, batch_rows: usize) -> AllPairsDistances<'_> {
    assert!(batch_rows >= 1, "batch_rows must be at least 1");
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); h.len()];
    for i in 0..h.len() {
        if let Some(p) = h.parent(i) {
            neighbors[i].push(p);
        }
        neighbors[i].extend(h.children(i).iter().copied());
    }
    AllPairsDistances {
        h,
        neighbors,
        batch_rows,
        next_row: 0,
    }
}

impl AllPairsDistances<'_> {
    fn bfs_row(&self, source: usize) -> Vec<u32> {
        let n = self.h.len();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::with_capacity(n);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

impl Iterator for AllPairsDistances<'_> {
    type Item = DistanceBatch;

    fn next(&mut self) -> Option<DistanceBatch> {
        let n = self.h.len();
        if self.next_row >= n {
            return None;
        }
        let start_row = self.next_row;
        let end = (start_row + self.batch_rows).min(n);
        let rows = (start_row..end).map(|u| self.bfs_row(u)).collect();
        self.next_row = end;
        Some(DistanceBatch { start_row, rows })
    }
}
