//! Canonical labeling of vertex-coloured graphs by individualization and
//! equitable refinement.
//!
//! Leaves are ranked by their refinement trace and then by the relabelled
//! graph. Automorphisms come from leaves equivalent to the first or best
//! leaf, and prune later branches by orbits of the prefix stabilizer.

use std::collections::VecDeque;

/// Default node budget for one search.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(b as u32);
        self.adj[b].push(a as u32);
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }
}

#[derive(Clone, Debug)]
pub struct Labeling {
    /// `position[v]` is the canonical label of vertex `v`.
    pub position: Vec<u32>,
    pub certificate: Vec<u32>,
    /// Generators of the automorphism group, as vertex images.
    pub automorphisms: Vec<Vec<u32>>,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded(pub usize);

#[derive(Clone, Copy)]
struct Mix(u64);

impl Mix {
    fn add(&mut self, x: u64) {
        let mut z = (self.0 ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.0 = z ^ (z >> 31);
    }
}

#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    /// Start of the cell holding each vertex.
    cell: Vec<u32>,
    /// End of the cell starting at each position.
    end: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn from_colours(colours: &[u32]) -> Partition {
        let n = colours.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colours[v as usize], v));
        let mut p = Partition { elems, pos: vec![0; n], cell: vec![0; n], end: vec![0; n], cells: 0 };
        let mut start = 0;
        while start < n {
            let c = colours[p.elems[start] as usize];
            let mut stop = start;
            while stop < n && colours[p.elems[stop] as usize] == c {
                stop += 1;
            }
            p.end[start] = stop as u32;
            for i in start..stop {
                p.cell[p.elems[i] as usize] = start as u32;
            }
            p.cells += 1;
            start = stop;
        }
        for (i, &v) in p.elems.iter().enumerate() {
            p.pos[v as usize] = i as u32;
        }
        p
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.elems.len() {
            out.push(s as u32);
            s = self.end[s] as usize;
        }
        out
    }

    /// First smallest cell with more than one vertex.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < self.elems.len() {
            let e = self.end[s] as usize;
            let size = e - s;
            if size > 1 && best.is_none_or(|(_, b)| size < b) {
                best = Some((s, size));
            }
            s = e;
        }
        best.map(|(s, _)| s)
    }

    /// Splits `v` off the front of its cell; returns the new singleton start.
    fn individualize(&mut self, v: u32) -> u32 {
        let start = self.cell[v as usize];
        let e = self.end[start as usize];
        let i = self.pos[v as usize];
        let other = self.elems[start as usize];
        self.elems.swap(start as usize, i as usize);
        self.pos[other as usize] = i;
        self.pos[v as usize] = start;
        self.end[start as usize] = start + 1;
        self.end[start as usize + 1] = e;
        for k in start + 1..e {
            self.cell[self.elems[k as usize] as usize] = start + 1;
        }
        self.cells += 1;
        start
    }
}

fn refine(g: &Graph, p: &mut Partition, initial: &[u32], trace: &mut Mix) {
    let n = g.order();
    let mut queue: VecDeque<u32> = initial.iter().copied().collect();
    let mut queued = vec![false; n];
    for &s in initial {
        queued[s as usize] = true;
    }
    let mut count = vec![0u32; n];
    let mut touched = Vec::new();
    let mut cells = Vec::new();
    let mut frags = Vec::new();
    while let Some(w) = queue.pop_front() {
        queued[w as usize] = false;
        if p.is_discrete() {
            break;
        }
        for i in w..p.end[w as usize] {
            let x = p.elems[i as usize];
            for &y in &g.adj[x as usize] {
                if count[y as usize] == 0 {
                    touched.push(y);
                }
                count[y as usize] += 1;
            }
        }
        cells.clear();
        cells.extend(touched.iter().map(|&y| p.cell[y as usize]));
        cells.sort_unstable();
        cells.dedup();
        trace.add(u64::from(w) << 32 | cells.len() as u64);
        for &c in &cells {
            let (c, e) = (c as usize, p.end[c as usize] as usize);
            if e - c == 1 {
                trace.add((c as u64) << 32 | u64::from(count[p.elems[c] as usize]));
                continue;
            }
            p.elems[c..e].sort_unstable_by_key(|&v| (count[v as usize], v));
            for i in c..e {
                p.pos[p.elems[i] as usize] = i as u32;
            }
            frags.clear();
            let mut s = c;
            while s < e {
                let k = count[p.elems[s] as usize];
                let mut t = s + 1;
                while t < e && count[p.elems[t] as usize] == k {
                    t += 1;
                }
                trace.add((s as u64) << 40 | (k as u64) << 20 | (t - s) as u64);
                frags.push((s, t));
                s = t;
            }
            if frags.len() == 1 {
                continue;
            }
            for &(s, t) in &frags {
                p.end[s] = t as u32;
                for i in s..t {
                    p.cell[p.elems[i] as usize] = s as u32;
                }
            }
            p.cells += frags.len() - 1;
            if queued[c] {
                for &(s, _) in &frags[1..] {
                    queue.push_back(s as u32);
                    queued[s] = true;
                }
            } else {
                let largest = frags.iter().enumerate().max_by_key(|&(i, &(s, t))| (t - s, std::cmp::Reverse(i))).unwrap().0;
                for (i, &(s, _)) in frags.iter().enumerate() {
                    if i != largest {
                        queue.push_back(s as u32);
                        queued[s] = true;
                    }
                }
            }
        }
        for &y in &touched {
            count[y as usize] = 0;
        }
        touched.clear();
    }
    trace.add(p.cells as u64);
}

#[derive(Clone)]
struct Leaf {
    traces: Vec<u64>,
    certificate: Vec<u32>,
    position: Vec<u32>,
    path: Vec<u32>,
}

struct Search<'a> {
    g: &'a Graph,
    header: Vec<u32>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<u32>>,
    nodes: usize,
    budget: usize,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn certificate(&self, p: &Partition) -> Vec<u32> {
        let mut cert = self.header.clone();
        for &v in &p.elems {
            let mut nb: Vec<u32> = self.g.adj[v as usize].iter().map(|&w| p.pos[w as usize]).collect();
            nb.sort_unstable();
            cert.push(nb.len() as u32);
            cert.extend(nb);
        }
        cert
    }

    fn leaf(&mut self, p: &Partition, path: &[u32], traces: &[u64]) -> Option<usize> {
        let certificate = self.certificate(p);
        let leaf = Leaf { traces: traces.to_vec(), certificate, position: p.pos.clone(), path: path.to_vec() };
        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return None;
        };
        let equivalent = |other: &Leaf| other.traces == leaf.traces && other.certificate == leaf.certificate;
        if equivalent(first) {
            let level = common_prefix(path, &first.path);
            let aut = self.automorphism(first, &leaf);
            self.automorphisms.push(aut);
            return Some(level);
        }
        let best = self.best.as_ref().unwrap();
        match (&leaf.traces, &leaf.certificate).cmp(&(&best.traces, &best.certificate)) {
            std::cmp::Ordering::Equal => {
                let level = common_prefix(path, &best.path);
                let aut = self.automorphism(best, &leaf);
                self.automorphisms.push(aut);
                Some(level)
            }
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    /// Maps each vertex to the vertex with the same label at `target`.
    fn automorphism(&self, target: &Leaf, leaf: &Leaf) -> Vec<u32> {
        let mut inv = vec![0u32; target.position.len()];
        for (v, &i) in target.position.iter().enumerate() {
            inv[i as usize] = v as u32;
        }
        leaf.position.iter().map(|&i| inv[i as usize]).collect()
    }

    fn prunable(&self, traces: &[u64]) -> bool {
        let (Some(first), Some(best)) = (&self.first, &self.best) else {
            return false;
        };
        let k = traces.len();
        let against = |l: &Leaf| l.traces.get(..k).unwrap_or(&l.traces).cmp(traces);
        against(first) != std::cmp::Ordering::Equal && against(best) == std::cmp::Ordering::Less
    }

    /// Orbit representative of each vertex under the automorphisms found so
    /// far that fix `path` pointwise.
    fn orbit_roots(&self, path: &[u32]) -> Vec<u32> {
        let n = self.g.order();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for a in &self.automorphisms {
            if path.iter().any(|&v| a[v as usize] != v) {
                continue;
            }
            for v in 0..n as u32 {
                let (r1, r2) = (find(&mut parent, v), find(&mut parent, a[v as usize]));
                if r1 != r2 {
                    parent[r1.max(r2) as usize] = r1.min(r2);
                }
            }
        }
        (0..n as u32).map(|v| find(&mut parent, v)).collect()
    }

    fn node(&mut self, p: Partition, path: &mut Vec<u32>, traces: &mut Vec<u64>) -> Result<Option<usize>, BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded(self.budget));
        }
        if p.is_discrete() {
            return Ok(self.leaf(&p, path, traces));
        }
        if self.prunable(traces) {
            return Ok(None);
        }
        let level = path.len();
        let target = p.target_cell().expect("partition is not discrete");
        let mut candidates: Vec<u32> = p.elems[target..p.end[target] as usize].to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut seen_automorphisms = usize::MAX;
        let mut roots = Vec::new();
        for v in candidates {
            if seen_automorphisms != self.automorphisms.len() {
                roots = self.orbit_roots(path);
                seen_automorphisms = self.automorphisms.len();
            }
            if explored.iter().any(|&w| roots[w as usize] == roots[v as usize]) {
                continue;
            }
            let mut child = p.clone();
            let mut trace = Mix(level as u64 + 1);
            let s = child.individualize(v);
            refine(self.g, &mut child, &[s], &mut trace);
            path.push(v);
            traces.push(trace.0);
            let jump = self.node(child, path, traces)?;
            path.pop();
            traces.pop();
            explored.push(v);
            if let Some(j) = jump {
                if j < level {
                    return Ok(Some(j));
                }
            }
        }
        Ok(None)
    }
}

/// Canonical labeling of `g` whose vertices carry `colours`; colours are
/// ordered, so only permutations preserving each colour are considered.
pub fn canonical_labeling(g: &Graph, colours: &[u32], budget: usize) -> Result<Labeling, BudgetExceeded> {
    let n = g.order();
    assert_eq!(colours.len(), n);
    let mut p = Partition::from_colours(colours);
    let mut header = vec![n as u32];
    let starts = p.cell_starts();
    header.extend(starts.iter().map(|&s| p.end[s as usize] - s));
    let mut trace = Mix(0);
    refine(g, &mut p, &starts, &mut trace);
    let mut search =
        Search { g, header, first: None, best: None, automorphisms: Vec::new(), nodes: 0, budget };
    search.node(p, &mut Vec::new(), &mut vec![trace.0])?;
    let best = search.best.expect("search reaches a leaf");
    Ok(Labeling { position: best.position, certificate: best.certificate, automorphisms: search.automorphisms, nodes: search.nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{PermGroup, Permutation};

    fn cycle_graph(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    fn group_order(l: &Labeling, n: usize) -> u128 {
        let gens = l.automorphisms.iter().map(|a| Permutation::from_images(a.iter().map(|&x| x as usize).collect()).unwrap());
        PermGroup::new(n, gens).unwrap().order()
    }

    #[test]
    fn cycle_automorphisms() {
        for n in 3..9 {
            let l = canonical_labeling(&cycle_graph(n), &vec![0; n], DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(group_order(&l, n), 2 * n as u128);
        }
    }

    #[test]
    fn petersen() {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
            g.add_edge(i, 5 + i);
        }
        let l = canonical_labeling(&g, &[0; 10], DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(group_order(&l, 10), 120);
    }

    #[test]
    fn colours_restrict_automorphisms() {
        let mut colours = vec![0; 6];
        colours[0] = 1;
        let l = canonical_labeling(&cycle_graph(6), &colours, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(group_order(&l, 6), 2);
    }

    #[test]
    fn relabelled_graphs_share_certificate() {
        let g = cycle_graph(7);
        let mut h = Graph::new(7);
        let perm = [3, 6, 0, 5, 1, 4, 2];
        for i in 0..7 {
            h.add_edge(perm[i], perm[(i + 1) % 7]);
        }
        let a = canonical_labeling(&g, &[0; 7], DEFAULT_NODE_BUDGET).unwrap();
        let b = canonical_labeling(&h, &[0; 7], DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(a.certificate, b.certificate);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(canonical_labeling(&cycle_graph(8), &[0; 8], 1).unwrap_err(), BudgetExceeded(1));
    }
}
