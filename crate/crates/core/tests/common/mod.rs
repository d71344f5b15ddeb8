//! Brute-force oracles and generators shared by the integration tests.
//!
//! Everything here works from the raw relation tables of the structures and
//! never calls the library's search code.

#![allow(dead_code)]

use proptest::prelude::*;
use ramdeg::structures::{Signature, Structure};

/// Every injective map `0..n -> 0..m`, in lexicographic order.
pub fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for y in 0..m {
            if !cur.contains(&y) {
                cur.push(y);
                go(n, m, cur, out);
                cur.pop();
            }
        }
    }
    go(n, m, &mut cur, &mut out);
    out
}

/// Every tuple of length `arity` over `0..n`.
pub fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether `map` preserves and reflects every relation and preserves constants.
pub fn preserves(map: &[usize], a: &Structure, b: &Structure) -> bool {
    if a.signature() != b.signature() || map.len() != a.size() {
        return false;
    }
    for (rel, sym) in a.signature().relations().iter().enumerate() {
        for t in tuples(a.size(), sym.arity) {
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if a.holds(rel, &t) != b.holds(rel, &image) {
                return false;
            }
        }
    }
    a.constants().iter().zip(b.constants()).all(|(&x, &y)| map[x] == y)
}

pub fn oracle_embeddings(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    injections(a.size(), b.size())
        .into_iter()
        .filter(|m| preserves(m, a, b))
        .collect()
}

fn compose(after: &[usize], before: &[usize]) -> Vec<usize> {
    before.iter().map(|&x| after[x]).collect()
}

/// The coloring problem of `c -> (b)^a`: the colored elements and, for each
/// `w: b -> c`, the elements it sees.
pub struct Problem {
    pub domain: usize,
    pub blocks: Vec<Vec<usize>>,
}

pub fn problem(c: &Structure, b: &Structure, a: &Structure, copies: bool) -> Problem {
    let key = |m: Vec<usize>| {
        if copies {
            let mut m = m;
            m.sort_unstable();
            m
        } else {
            m
        }
    };
    let mut domain: Vec<Vec<usize>> = oracle_embeddings(a, c).into_iter().map(key).collect();
    domain.sort();
    domain.dedup();
    let inner = oracle_embeddings(a, b);
    let blocks = oracle_embeddings(b, c)
        .into_iter()
        .map(|w| {
            let mut seen: Vec<usize> = inner
                .iter()
                .map(|u| {
                    let k = key(compose(&w, u));
                    domain.iter().position(|d| *d == k).unwrap()
                })
                .collect();
            seen.sort_unstable();
            seen.dedup();
            seen
        })
        .collect();
    Problem {
        domain: domain.len(),
        blocks,
    }
}

/// Every function `0..d -> 0..k`.
pub fn all_colorings(d: usize, k: usize) -> Vec<Vec<usize>> {
    tuples(k, d)
}

/// One coloring per partition of `0..d` (restricted growth strings).
pub fn partitions(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn go(d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for c in 0..=next {
            cur.push(c);
            go(d, cur, out);
            cur.pop();
        }
    }
    go(d, &mut cur, &mut out);
    out
}

pub fn seen_colors(block: &[usize], colors: &[usize]) -> usize {
    let mut c: Vec<usize> = block.iter().map(|&i| colors[i]).collect();
    c.sort_unstable();
    c.dedup();
    c.len()
}

impl Problem {
    pub fn refutes(&self, colors: &[usize], t: usize) -> bool {
        self.blocks.iter().all(|b| seen_colors(b, colors) > t)
    }

    /// The arrow with exactly `k` colors available.
    pub fn holds(&self, k: usize, t: usize) -> bool {
        all_colorings(self.domain, k).iter().all(|c| !self.refutes(c, t))
    }

    /// The arrow for every number of colors.
    pub fn holds_for_all_k(&self, t: usize) -> bool {
        partitions(self.domain).iter().all(|c| !self.refutes(c, t))
    }

    /// Largest over colorings of the fewest colors some block sees.
    pub fn max_min(&self) -> usize {
        partitions(self.domain)
            .iter()
            .map(|c| self.blocks.iter().map(|b| seen_colors(b, c)).min().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

pub fn oracle_arrow(c: &Structure, b: &Structure, a: &Structure, k: usize, t: usize, copies: bool) -> bool {
    problem(c, b, a, copies).holds(k, t)
}

/// Big degree of `a` in the host `s`, at least 1.
pub fn oracle_big_degree(s: &Structure, a: &Structure, copies: bool) -> usize {
    problem(s, s, a, copies).max_min().max(1)
}

/// Small degree of `a` relative to a pool, colors unbounded.
pub fn oracle_small_degree(pool: &[Structure], a: &Structure, copies: bool) -> usize {
    let problems: Vec<Vec<Problem>> = pool
        .iter()
        .map(|b| pool.iter().map(|c| problem(c, b, a, copies)).collect())
        .collect();
    (1..)
        .find(|&t| problems.iter().all(|row| row.iter().any(|p| p.holds_for_all_k(t))))
        .unwrap()
}

/// Least `n` such that every 2-coloring of the edges of `K_n` has a
/// monochromatic triangle.
pub fn ramsey_three_three() -> usize {
    (1..).find(|&n| complete_graph_forces_triangle(n)).unwrap()
}

pub fn complete_graph_forces_triangle(n: usize) -> bool {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let index = |x: usize, y: usize| edges.iter().position(|&e| e == (x.min(y), x.max(y))).unwrap();
    (0u64..1 << edges.len()).all(|mask| {
        (0..n).any(|x| {
            (x + 1..n).any(|y| {
                (y + 1..n).any(|z| {
                    let c = |p, q| mask >> index(p, q) & 1;
                    c(x, y) == c(y, z) && c(y, z) == c(x, z)
                })
            })
        })
    })
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::empty(Signature::relational([("E", 2)]).unwrap(), n).unwrap();
    for &(x, y) in edges {
        s.insert("E", &[x, y]).unwrap();
        s.insert("E", &[y, x]).unwrap();
    }
    s
}

pub fn graph_from_mask(n: usize, mask: u64) -> Structure {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &p)| p)
        .collect();
    graph(n, &edges)
}

/// Loopless directed graph from an adjacency bitmask.
pub fn digraph_from_mask(n: usize, mask: u64) -> Structure {
    let mut s = Structure::empty(Signature::relational([("E", 2)]).unwrap(), n).unwrap();
    let mut bit = 0;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                if mask >> bit & 1 == 1 {
                    s.insert("E", &[x, y]).unwrap();
                }
                bit += 1;
            }
        }
    }
    s
}

pub fn chain(n: usize) -> Structure {
    let mut s = Structure::empty(Signature::relational([("<", 2)]).unwrap(), n).unwrap();
    for x in 0..n {
        for y in x + 1..n {
            s.insert("<", &[x, y]).unwrap();
        }
    }
    s
}

/// Relabels `s` along the bijection `perm` (element `x` becomes `perm[x]`).
pub fn relabel(s: &Structure, perm: &[usize]) -> Structure {
    let mut out = Structure::empty(s.signature().clone(), s.size()).unwrap();
    for (rel, sym) in s.signature().relations().iter().enumerate() {
        for t in s.tuples(rel) {
            let image: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
            out.insert(&sym.name, &image).unwrap();
        }
    }
    for (i, &c) in s.constants().iter().enumerate() {
        out.set_constant(i, perm[c]).unwrap();
    }
    out
}

pub fn arb_graph(max: usize) -> impl Strategy<Value = Structure> {
    (0..=max).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        (Just(n), 0u64..1 << pairs).prop_map(|(n, m)| graph_from_mask(n, m))
    })
}

pub fn arb_digraph(max: usize) -> impl Strategy<Value = Structure> {
    (0..=max).prop_flat_map(|n| {
        let slots = n * n.saturating_sub(1);
        (Just(n), 0u64..1 << slots).prop_map(|(n, m)| digraph_from_mask(n, m))
    })
}

pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}
