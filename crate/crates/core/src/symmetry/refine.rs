//! Ordered partitions and equitable refinement.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::ColoredGraph;

/// Ordered partition of the nodes. Cells are contiguous runs of `lab`,
/// identified by their start position.
#[derive(Clone, Debug)]
pub(crate) struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    /// start of the cell holding each node
    cell_of: Vec<u32>,
    /// end (exclusive) of the cell starting at each position
    cell_end: Vec<u32>,
    num_cells: usize,
}

impl Partition {
    /// Cells are the color classes in increasing color order.
    pub fn from_colors(colors: &[u32]) -> Partition {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut p = Partition {
            pos: vec![0; n],
            cell_of: vec![0; n],
            cell_end: vec![0; n],
            lab,
            num_cells: 0,
        };
        let mut start = 0;
        while start < n {
            let c = colors[p.lab[start] as usize];
            let mut end = start;
            while end < n && colors[p.lab[end] as usize] == c {
                end += 1;
            }
            p.cell_end[start] = end as u32;
            for i in start..end {
                p.cell_of[p.lab[i] as usize] = start as u32;
            }
            p.num_cells += 1;
            start = end;
        }
        for (i, &v) in p.lab.iter().enumerate() {
            p.pos[v as usize] = i as u32;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.lab.len()
    }

    pub fn lab(&self) -> &[u32] {
        &self.lab
    }

    pub fn is_discrete(&self) -> bool {
        self.num_cells == self.lab.len()
    }

    #[cfg(test)]
    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn cell(&self, start: usize) -> &[u32] {
        &self.lab[start..self.cell_end[start] as usize]
    }

    /// Cell starts in order.
    pub fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        std::iter::from_fn(move || {
            (s < self.lab.len()).then(|| {
                let cur = s;
                s = self.cell_end[cur] as usize;
                cur
            })
        })
    }

    /// First smallest non-singleton cell.
    pub fn target_cell(&self) -> Option<usize> {
        self.cell_starts()
            .filter(|&s| self.cell_end[s] as usize - s > 1)
            .min_by_key(|&s| self.cell_end[s] as usize - s)
    }

    /// Splits `v` off the front of its cell and refines; returns the
    /// refinement trace hash.
    pub fn individualize(&mut self, g: &ColoredGraph, v: usize, scratch: &mut Scratch) -> u64 {
        let start = self.cell_of[v] as usize;
        let end = self.cell_end[start] as usize;
        debug_assert!(end - start > 1);
        let other = self.lab[start];
        let pv = self.pos[v] as usize;
        self.lab.swap(start, pv);
        self.pos[other as usize] = pv as u32;
        self.pos[v] = start as u32;
        self.cell_end[start] = start as u32 + 1;
        self.cell_end[start + 1] = end as u32;
        for i in start + 1..end {
            self.cell_of[self.lab[i] as usize] = start as u32 + 1;
        }
        self.num_cells += 1;
        self.refine(g, &[start], scratch)
    }

    /// Equitable refinement driven by the splitter cells in `queue`.
    /// Processing order depends only on cell positions and counts, so
    /// isomorphic inputs give isomorphic outputs with equal traces.
    pub fn refine(&mut self, g: &ColoredGraph, initial: &[usize], s: &mut Scratch) -> u64 {
        s.ensure(self.len());
        let mut trace = Trace::new();
        // lowest queued start first
        let mut queue: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
        for &c in initial {
            if !s.in_queue[c] {
                s.in_queue[c] = true;
                queue.push(Reverse(c));
            }
        }
        while !self.is_discrete() {
            let Some(Reverse(splitter)) = queue.pop() else { break };
            s.in_queue[splitter] = false;
            trace.push(splitter as u64);

            s.touched.clear();
            for i in splitter..self.cell_end[splitter] as usize {
                for &u in g.neighbors(self.lab[i] as usize) {
                    if s.count[u as usize] == 0 {
                        s.touched.push(u);
                    }
                    s.count[u as usize] += 1;
                }
            }
            s.cells.clear();
            for &u in &s.touched {
                let c = self.cell_of[u as usize];
                if !s.cell_seen[c as usize] {
                    s.cell_seen[c as usize] = true;
                    s.cells.push(c);
                }
            }
            s.cells.sort_unstable();
            for ci in 0..s.cells.len() {
                let c = s.cells[ci] as usize;
                s.cell_seen[c] = false;
                self.split_cell(c, &mut queue, &mut trace, s);
            }
            for &u in &s.touched {
                s.count[u as usize] = 0;
            }
        }
        for Reverse(c) in queue {
            s.in_queue[c] = false;
        }
        trace.finish(self.num_cells as u64)
    }

    fn split_cell(&mut self, start: usize, queue: &mut BinaryHeap<Reverse<usize>>, trace: &mut Trace, s: &mut Scratch) {
        let end = self.cell_end[start] as usize;
        if end - start == 1 {
            return;
        }
        let count = &s.count;
        let first = count[self.lab[start] as usize];
        if self.lab[start..end].iter().all(|&v| count[v as usize] == first) {
            return;
        }
        self.lab[start..end].sort_unstable_by_key(|&v| (count[v as usize], v));
        let was_queued = s.in_queue[start];
        let mut frags: Vec<(usize, usize)> = Vec::new();
        let mut a = start;
        while a < end {
            let k = count[self.lab[a] as usize];
            let mut b = a;
            while b < end && count[self.lab[b] as usize] == k {
                b += 1;
            }
            trace.push(((start as u64) << 32) ^ ((k as u64) << 16) ^ (b - a) as u64);
            frags.push((a, b));
            a = b;
        }
        for &(a, b) in &frags {
            self.cell_end[a] = b as u32;
            for i in a..b {
                let v = self.lab[i] as usize;
                self.cell_of[v] = a as u32;
                self.pos[v] = i as u32;
            }
        }
        self.num_cells += frags.len() - 1;
        let largest = frags.iter().enumerate().max_by_key(|(i, (a, b))| (b - a, usize::MAX - i)).unwrap().0;
        for (i, &(a, _)) in frags.iter().enumerate() {
            if (was_queued || i != largest) && !s.in_queue[a] {
                s.in_queue[a] = true;
                queue.push(Reverse(a));
            }
        }
    }
}

/// Reusable buffers for [`Partition::refine`].
#[derive(Default)]
pub(crate) struct Scratch {
    count: Vec<u32>,
    in_queue: Vec<bool>,
    cell_seen: Vec<bool>,
    touched: Vec<u32>,
    cells: Vec<u32>,
}

impl Scratch {
    fn ensure(&mut self, n: usize) {
        if self.count.len() < n {
            self.count.resize(n, 0);
            self.in_queue.resize(n, false);
            self.cell_seen.resize(n, false);
        }
    }
}

struct Trace(u64);

impl Trace {
    fn new() -> Trace {
        Trace(0xcbf2_9ce4_8422_2325)
    }

    fn push(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0x0100_0000_01b3).rotate_left(29);
    }

    fn finish(mut self, x: u64) -> u64 {
        self.push(x);
        self.0
    }
}
