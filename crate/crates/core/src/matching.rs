//! Maximum-cardinality matching in general graphs (Edmonds' blossom algorithm).

use crate::prelude::*;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Searches an augmenting path from `root`; returns its free end.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for k in 0..self.adj[v].len() {
                let to = self.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        NONE
    }
}

/// Indices into `edges` of a maximum matching of the graph on `n` vertices.
///
/// Self-loops and repeated edges are ignored.
pub fn max_matching(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a != b && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut st = Blossom {
        adj: &adj,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    // greedy start
    for &(a, b) in edges {
        if a != b && st.mate[a] == NONE && st.mate[b] == NONE {
            st.mate[a] = b;
            st.mate[b] = a;
        }
    }
    for v in 0..n {
        if st.mate[v] != NONE {
            continue;
        }
        let mut end = st.find_path(v);
        while end != NONE {
            let pv = st.parent[end];
            let next = st.mate[pv];
            st.mate[end] = pv;
            st.mate[pv] = end;
            end = next;
        }
    }
    let mut out = Vec::new();
    let mut taken = vec![false; n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a != b && st.mate[a] == b && !taken[a] {
            taken[a] = true;
            taken[b] = true;
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_matching(n: usize, edges: &[(usize, usize)], m: &[usize]) -> bool {
        let mut used = vec![false; n];
        m.iter().all(|&i| {
            let (a, b) = edges[i];
            let ok = !used[a] && !used[b];
            used[a] = true;
            used[b] = true;
            ok
        })
    }

    #[test]
    fn examples() {
        let path = [(0, 1), (1, 2), (2, 3)];
        assert_eq!(max_matching(4, &path).len(), 2);
        assert_eq!(max_matching(3, &[(0, 1), (1, 2), (2, 0)]).len(), 1);
        let mut pet = Vec::new();
        for i in 0..5 {
            pet.push((i, (i + 1) % 5));
            pet.push((i, i + 5));
            pet.push((5 + i, 5 + (i + 2) % 5));
        }
        let m = max_matching(10, &pet);
        assert_eq!(m.len(), 5);
        assert!(is_matching(10, &pet, &m));
        assert!(max_matching(3, &[]).is_empty());
    }

    #[test]
    fn blossom_needed() {
        // odd cycle 0..5 with a stem at 0 and a pendant at 3
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (3, 6), (6, 7)];
        let m = max_matching(8, &edges);
        assert_eq!(m.len(), 4);
        assert!(is_matching(8, &edges, &m));
    }
}
