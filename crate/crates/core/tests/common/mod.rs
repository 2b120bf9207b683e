//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solvers or builders it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use cliquelab::grammars::{Grammar, Symbol};
use cliquelab::graphs::Graph;
use rand::Rng;

/// Whether some `size` nodes are pairwise adjacent, by bitmask enumeration.
pub fn brute_clique(g: &Graph, size: usize) -> bool {
    let n = g.n();
    if size == 0 {
        return true;
    }
    if size > n {
        return false;
    }
    (0u32..1 << n).filter(|m| m.count_ones() as usize == size).any(|m| {
        let nodes: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect();
        nodes.iter().enumerate().all(|(a, &u)| nodes[a + 1..].iter().all(|&v| g.has_edge(u, v)))
    })
}

/// `⌈log₂ x⌉` by doubling.
pub fn clog2(x: usize) -> usize {
    let mut w = 0;
    while (1usize << w) < x {
        w += 1;
    }
    w
}

pub fn width(n: usize) -> usize {
    2 * clog2(n + 1)
}

/// All k-subsets that are cliques, by bitmask enumeration.
pub fn clique_sets(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect::<Vec<_>>())
        .filter(|t| t.iter().enumerate().all(|(a, &u)| t[a + 1..].iter().all(|&v| g.has_edge(u, v))))
        .collect();
    out.sort();
    out
}

/// Classic quadratic LCS.
pub fn lcs(x: &[String], y: &[String]) -> u64 {
    let mut d = vec![vec![0u64; y.len() + 1]; x.len() + 1];
    for i in 1..=x.len() {
        for j in 1..=y.len() {
            d[i][j] = if x[i - 1] == y[j - 1] { d[i - 1][j - 1] + 1 } else { d[i - 1][j].max(d[i][j - 1]) };
        }
    }
    d[x.len()][y.len()]
}

/// Stack scan for ASCII bracket strings.
pub fn balanced(s: &[String]) -> bool {
    let mut stack = Vec::new();
    for t in s {
        match t.as_str() {
            "(" | "[" => stack.push(t.as_str()),
            ")" => {
                if stack.pop() != Some("(") {
                    return false;
                }
            }
            "]" => {
                if stack.pop() != Some("[") {
                    return false;
                }
            }
            _ => return false,
        }
    }
    stack.is_empty()
}

/// Membership in the original (non-normalized) grammar.
///
/// Computes by fixpoint the set of `(A, i, j)` with `A ⇒* s[i..j]`, pushing
/// each rule body left to right over reachable positions. Handles ε and
/// unit rules without any preprocessing.
pub fn derives(g: &Grammar, s: &[String]) -> bool {
    let n = s.len();
    let names: Vec<&str> = g.nonterminals().iter().map(String::as_str).collect();
    let idx = |a: &str| names.iter().position(|&x| x == a).unwrap();
    let mut d = vec![vec![vec![false; n + 1]; n + 1]; names.len()];
    loop {
        let mut changed = false;
        for r in g.rules() {
            let head = idx(&r.head);
            for i in 0..=n {
                let mut reach = vec![false; n + 1];
                reach[i] = true;
                for sym in &r.body {
                    let mut next = vec![false; n + 1];
                    for p in (0..=n).filter(|&p| reach[p]) {
                        match sym {
                            Symbol::T(t) => {
                                if p < n && &s[p] == t {
                                    next[p + 1] = true;
                                }
                            }
                            Symbol::N(b) => {
                                let b = idx(b);
                                for e in p..=n {
                                    if d[b][p][e] {
                                        next[e] = true;
                                    }
                                }
                            }
                        }
                    }
                    reach = next;
                }
                for j in i..=n {
                    if reach[j] && !d[head][i][j] {
                        d[head][i][j] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    d[idx(g.start())][0][n]
}

/// Random derivation from the original grammar with at most `max` terminals.
///
/// Only rules whose cheapest completion still fits are chosen, so the walk
/// always terminates.
pub fn sample_member<R: Rng>(g: &Grammar, max: usize, rng: &mut R) -> Option<Vec<String>> {
    let minlen = min_lengths(g);
    let cost = |sym: &Symbol| match sym {
        Symbol::T(_) => 1,
        Symbol::N(a) => minlen[a.as_str()],
    };
    let start = g.start().to_owned();
    if minlen[start.as_str()] > max {
        return None;
    }
    let mut out = Vec::new();
    // pending symbols, leftmost on top
    let mut stack = vec![Symbol::N(start)];
    let mut committed_min = minlen[g.start()];
    while let Some(sym) = stack.pop() {
        match sym {
            Symbol::T(t) => out.push(t),
            Symbol::N(a) => {
                let base = committed_min - minlen[a.as_str()];
                let options: Vec<_> = g
                    .rules()
                    .iter()
                    .filter(|r| r.head == a && base + r.body.iter().map(&cost).sum::<usize>() <= max)
                    .collect();
                let r = options[rng.gen_range(0..options.len())];
                committed_min = base + r.body.iter().map(&cost).sum::<usize>();
                stack.extend(r.body.iter().rev().cloned());
            }
        }
    }
    Some(out)
}

fn min_lengths(g: &Grammar) -> BTreeMap<&str, usize> {
    let mut m: BTreeMap<&str, usize> = g.nonterminals().iter().map(|a| (a.as_str(), usize::MAX)).collect();
    loop {
        let mut changed = false;
        for r in g.rules() {
            let mut total = 0usize;
            for s in &r.body {
                total = total.saturating_add(match s {
                    Symbol::T(_) => 1,
                    Symbol::N(b) => m[b.as_str()],
                });
            }
            if total < m[r.head.as_str()] {
                m.insert(r.head.as_str(), total);
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

/// Random grammar over `{a, b}` with nonterminals `S A B`.
pub fn random_grammar<R: Rng>(rng: &mut R) -> Grammar {
    let symbols = ["a", "b", "S", "A", "B"];
    let mut text = String::from("start: S\nterminals: a b\nnonterminals: S A B\n");
    let mut seen = HashSet::new();
    for _ in 0..rng.gen_range(2..=7) {
        let head = ["S", "S", "A", "B"][rng.gen_range(0..4)];
        let len = rng.gen_range(0..=3);
        let body: Vec<&str> = (0..len).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect();
        let body = if body.is_empty() { "eps".to_owned() } else { body.join(" ") };
        if seen.insert((head, body.clone())) {
            text.push_str(&format!("{head} -> {body}\n"));
        }
    }
    Grammar::parse(&text).unwrap()
}

/// Every string over `alphabet` of length at most `max`.
pub fn all_strings(alphabet: &[&str], max: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &layer {
            for &a in alphabet {
                let mut t: Vec<String> = s.clone();
                t.push(a.to_owned());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
