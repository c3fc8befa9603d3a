//! Dinic max-flow on small integer capacities.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), out: vec![Vec::new(); nodes], level: Vec::new(), cursor: Vec::new() }
    }

    /// Adds `from -> to` and returns the arc index; its reverse is `index ^ 1`.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.out[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0 });
        self.out[to].push(id + 1);
        id
    }

    /// Flow currently pushed along arc `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.arcs[id ^ 1].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level = vec![-1; self.out.len()];
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[x] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, x: usize, t: usize, pushed: i64) -> i64 {
        if x == t {
            return pushed;
        }
        while self.cursor[x] < self.out[x].len() {
            let a = self.out[x][self.cursor[x]];
            let Arc { to, cap } = self.arcs[a];
            if cap > 0 && self.level[to] == self.level[x] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.cursor[x] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.cursor = vec![0; self.out.len()];
            loop {
                let got = self.dfs(s, t, i64::MAX);
                if got == 0 {
                    break;
                }
                total += got;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.out[x] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}
