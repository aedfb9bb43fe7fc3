//! Capacitated networks and Dinic's max-flow algorithm.

use std::collections::VecDeque;

/// Residual capacities at or below this are treated as saturated.
const FLOW_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    num_nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < num_nodes && sink < num_nodes && source != sink);
        Self {
            num_nodes,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: f64) -> usize {
        debug_assert!(capacity >= 0.0);
        debug_assert!(to != self.source && from != self.sink);
        self.arcs.push(Arc { from, to, capacity });
        self.arcs.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Total capacity of arcs leaving the node set `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        self.arcs
            .iter()
            .filter(|a| side[a.from] && !side[a.to])
            .map(|a| a.capacity)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxFlow {
    pub value: f64,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

struct Residual {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<f64>,
}

const NIL: usize = usize::MAX;

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let mut r = Residual {
            head: vec![NIL; net.num_nodes],
            next: Vec::with_capacity(2 * net.arcs.len()),
            to: Vec::with_capacity(2 * net.arcs.len()),
            cap: Vec::with_capacity(2 * net.arcs.len()),
        };
        for a in &net.arcs {
            r.push(a.from, a.to, a.capacity);
            r.push(a.to, a.from, 0.0);
        }
        r
    }

    fn push(&mut self, from: usize, to: usize, cap: f64) {
        self.to.push(to);
        self.cap.push(cap);
        self.next.push(self.head[from]);
        self.head[from] = self.to.len() - 1;
    }

    fn bfs(&self, s: usize, level: &mut [usize]) {
        level.iter_mut().for_each(|l| *l = NIL);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut a = self.head[u];
            while a != NIL {
                let v = self.to[a];
                if self.cap[a] > FLOW_EPS && level[v] == NIL {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
                a = self.next[a];
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: f64, level: &[usize], iter: &mut [usize]) -> f64 {
        if u == t {
            return limit;
        }
        while iter[u] != NIL {
            let a = iter[u];
            let v = self.to[a];
            if self.cap[a] > FLOW_EPS && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, limit.min(self.cap[a]), level, iter);
                if pushed > 0.0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            iter[u] = self.next[a];
        }
        0.0
    }
}

/// Dinic's algorithm: BFS level graphs and blocking flows until the sink
/// becomes unreachable. The returned cut is the residual reachability set.
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let mut res = Residual::new(net);
    let n = net.num_nodes;
    let (s, t) = (net.source, net.sink);
    let mut level = vec![NIL; n];
    let mut iter = vec![NIL; n];
    let mut value = 0.0;
    loop {
        res.bfs(s, &mut level);
        if level[t] == NIL {
            break;
        }
        iter.copy_from_slice(&res.head);
        loop {
            let pushed = res.augment(s, t, f64::INFINITY, &level, &mut iter);
            if pushed <= 0.0 {
                break;
            }
            value += pushed;
        }
    }
    MaxFlow {
        value,
        source_side: level.iter().map(|&l| l != NIL).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 5.0);
        assert_eq!(max_flow(&net).value, 5.0);
    }

    #[test]
    fn diamond() {
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 3.0);
        net.add_arc(0, 2, 2.0);
        net.add_arc(1, 3, 2.0);
        net.add_arc(2, 3, 3.0);
        let mf = max_flow(&net);
        assert_eq!(mf.value, 4.0);
        assert_eq!(net.cut_capacity(&mf.source_side), 4.0);
    }

    #[test]
    fn infinite_arc_avoided() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, 1e9);
        net.add_arc(1, 2, 1.5);
        let mf = max_flow(&net);
        assert_eq!(mf.value, 1.5);
        assert!(mf.source_side[1]);
    }

    #[test]
    fn disconnected_sink() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, 1.0);
        let mf = max_flow(&net);
        assert_eq!(mf.value, 0.0);
        assert_eq!(mf.source_side, vec![true, true, false]);
    }
}
