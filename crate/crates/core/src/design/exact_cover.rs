//! Dancing-links exact cover.
//!
//! Column choice is minimum remaining values with ties broken by the lowest
//! item index, so the enumeration order is fully determined by the input.

use std::ops::ControlFlow;

#[derive(Clone, Debug, Default)]
pub struct ExactCover {
    num_items: usize,
    options: Vec<Vec<usize>>,
}

/// Result of a capped enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solutions {
    pub solutions: Vec<Vec<usize>>,
    /// False when the cap stopped the search before it was exhausted.
    pub exhaustive: bool,
}

impl ExactCover {
    pub fn new(num_items: usize) -> Self {
        ExactCover { num_items, options: Vec::new() }
    }

    /// Adds an option covering `items`; returns its index.
    pub fn add_option(&mut self, items: &[usize]) -> usize {
        debug_assert!(items.iter().all(|&i| i < self.num_items));
        self.options.push(items.to_vec());
        self.options.len() - 1
    }

    pub fn num_options(&self) -> usize {
        self.options.len()
    }

    /// Visits every solution (as sorted option indices) until `visit` breaks.
    /// Options in `forced` are selected up front. Returns `false` if the
    /// visitor stopped the search.
    pub fn solve_with<F>(&self, forced: &[usize], mut visit: F) -> bool
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut links = Links::build(self.num_items, &self.options);
        let mut chosen = Vec::new();
        for &opt in forced {
            let first = links.option_start[opt];
            let len = self.options[opt].len();
            // all items of a forced option must still be available
            for k in 0..len {
                let col = links.top[first + k];
                if links.is_removed(col) {
                    return true;
                }
            }
            for k in 0..len {
                let col = links.top[first + k];
                links.cover(col);
            }
            chosen.push(opt);
        }
        links.search(&mut chosen, &mut visit).is_continue()
    }

    pub fn solve<F>(&self, visit: F) -> bool
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.solve_with(&[], visit)
    }

    /// Up to `cap` solutions; `None` means no cap.
    pub fn solutions(&self, cap: Option<usize>) -> Solutions {
        let mut solutions = Vec::new();
        let exhaustive = self.solve(|s| {
            if cap.is_some_and(|c| solutions.len() >= c) {
                return ControlFlow::Break(());
            }
            solutions.push(s.to_vec());
            ControlFlow::Continue(())
        });
        Solutions { solutions, exhaustive }
    }

    pub fn first(&self) -> Option<Vec<usize>> {
        let mut out = None;
        self.solve(|s| {
            out = Some(s.to_vec());
            ControlFlow::Break(())
        });
        out
    }
}

/// Node 0 is the root, nodes `1..=n` are item headers, the remaining nodes
/// hold the options, each option occupying a contiguous run.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    top: Vec<usize>,
    len: Vec<usize>,
    row: Vec<usize>,
    option_start: Vec<usize>,
    option_len: Vec<usize>,
}

impl Links {
    fn build(num_items: usize, options: &[Vec<usize>]) -> Links {
        let headers = num_items + 1;
        let total = headers + options.iter().map(Vec::len).sum::<usize>();
        let mut l = Links {
            left: (0..headers).map(|i| if i == 0 { num_items } else { i - 1 }).collect(),
            right: (0..headers).map(|i| if i == num_items { 0 } else { i + 1 }).collect(),
            up: (0..total).collect(),
            down: (0..total).collect(),
            top: vec![0; total],
            len: vec![0; headers],
            row: vec![usize::MAX; total],
            option_start: Vec::with_capacity(options.len()),
            option_len: Vec::with_capacity(options.len()),
        };
        let mut node = headers;
        for (r, opt) in options.iter().enumerate() {
            l.option_start.push(node);
            l.option_len.push(opt.len());
            for &item in opt {
                let col = item + 1;
                let last = l.up[col];
                l.up[node] = last;
                l.down[node] = col;
                l.down[last] = node;
                l.up[col] = node;
                l.top[node] = col;
                l.row[node] = r;
                l.len[col] += 1;
                node += 1;
            }
        }
        l
    }

    fn is_removed(&self, col: usize) -> bool {
        let mut c = self.right[0];
        while c != 0 {
            if c == col {
                return false;
            }
            c = self.right[c];
        }
        true
    }

    /// Nodes of the option containing `node`, starting after it and wrapping.
    fn row_others(&self, node: usize) -> impl DoubleEndedIterator<Item = usize> {
        let r = self.row[node];
        let (start, len) = (self.option_start[r], self.option_len[r]);
        let offset = node - start;
        (1..len).map(move |k| start + (offset + k) % len)
    }

    fn cover(&mut self, col: usize) {
        let (l, r) = (self.left[col], self.right[col]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[col];
        while i != col {
            for j in self.row_others(i) {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.len[self.top[j]] -= 1;
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, col: usize) {
        let mut i = self.up[col];
        while i != col {
            for j in self.row_others(i).rev() {
                let (u, d) = (self.up[j], self.down[j]);
                self.len[self.top[j]] += 1;
                self.down[u] = j;
                self.up[d] = j;
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[col], self.right[col]);
        self.right[l] = col;
        self.left[r] = col;
    }

    fn choose_column(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut c = self.right[0];
        while c != 0 {
            if best.is_none_or(|b| self.len[c] < self.len[b]) {
                best = Some(c);
                if self.len[c] == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn search<F>(&mut self, chosen: &mut Vec<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let Some(col) = self.choose_column() else {
            let mut sol = chosen.clone();
            sol.sort_unstable();
            return visit(&sol);
        };
        if self.len[col] == 0 {
            return ControlFlow::Continue(());
        }
        self.cover(col);
        let mut r = self.down[col];
        let mut flow = ControlFlow::Continue(());
        while r != col {
            chosen.push(self.row[r]);
            for j in self.row_others(r) {
                self.cover(self.top[j]);
            }
            flow = self.search(chosen, visit);
            for j in self.row_others(r).rev() {
                self.uncover(self.top[j]);
            }
            chosen.pop();
            if flow.is_break() {
                break;
            }
            r = self.down[r];
        }
        self.uncover(col);
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(num_items: usize, options: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << options.len()) {
            let mut count = vec![0; num_items];
            let mut chosen = Vec::new();
            for (i, o) in options.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    chosen.push(i);
                    for &x in o {
                        count[x] += 1;
                    }
                }
            }
            if count.iter().all(|&c| c == 1) {
                out.push(chosen);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn knuth_example() {
        // Knuth's seven-column example has the unique solution {0, 3, 4}.
        let options = vec![vec![2, 4, 5], vec![0, 3, 6], vec![1, 2, 5], vec![0, 3], vec![1, 6], vec![3, 4, 6]];
        let mut ec = ExactCover::new(7);
        for o in &options {
            ec.add_option(o);
        }
        let sols = ec.solutions(None);
        assert!(sols.exhaustive);
        assert_eq!(sols.solutions, vec![vec![0, 3, 4]]);
        assert_eq!(brute_force(7, &options), sols.solutions);
    }

    #[test]
    fn matches_brute_force_on_pairs() {
        // all 2-subsets of a 6-set: solutions are perfect matchings of K6 (15)
        let mut options = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                options.push(vec![a, b]);
            }
        }
        let mut ec = ExactCover::new(6);
        for o in &options {
            ec.add_option(o);
        }
        let mut sols = ec.solutions(None).solutions;
        sols.sort();
        assert_eq!(sols.len(), 15);
        assert_eq!(sols, brute_force(6, &options));
        let capped = ec.solutions(Some(4));
        assert_eq!(capped.solutions.len(), 4);
        assert!(!capped.exhaustive);
    }

    #[test]
    fn forced_options() {
        let mut options = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                options.push(vec![a, b]);
            }
        }
        let mut ec = ExactCover::new(6);
        for o in &options {
            ec.add_option(o);
        }
        let mut with_first = Vec::new();
        ec.solve_with(&[0], |s| {
            with_first.push(s.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(with_first.len(), 3);
        assert!(with_first.iter().all(|s| s.contains(&0)));
        // options 0 = {0,1} and 1 = {0,2} clash
        let mut none = 0;
        ec.solve_with(&[0, 1], |_| {
            none += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(none, 0);
    }

    #[test]
    fn unsolvable_and_empty() {
        let mut ec = ExactCover::new(3);
        ec.add_option(&[0, 1]);
        ec.add_option(&[1, 2]);
        assert_eq!(ec.first(), None);
        assert_eq!(ExactCover::new(0).solutions(None).solutions, vec![Vec::<usize>::new()]);
    }
}
