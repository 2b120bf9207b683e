use crate::graphs::{enumerate_k_cliques, Clique, Graph};
use crate::tokens::TokenSequence;

use super::{bits, repeat, reverse, BuildMetadata};

fn ng(g: &Graph, v: usize) -> TokenSequence {
    let mut s = TokenSequence::new();
    s.push("#");
    s.extend_from(&bits(v, g.n()));
    s.push("#");
    s
}

fn lg(g: &Graph, v: usize) -> TokenSequence {
    let mut s = TokenSequence::new();
    s.push("#");
    for u in g.neighbors(v) {
        s.push("$");
        s.extend_from(&reverse(&bits(u, g.n())));
        s.push("$");
    }
    s.push("#");
    s
}

fn cng(g: &Graph, t: &Clique, k: usize) -> TokenSequence {
    let mut s = TokenSequence::new();
    for &v in t.nodes() {
        s.extend_from(&repeat(&ng(g, v), k));
    }
    s
}

fn clg(g: &Graph, t: &Clique, k: usize) -> TokenSequence {
    let mut once = TokenSequence::new();
    for &v in t.nodes() {
        once.extend_from(&lg(g, v));
    }
    repeat(&once, k)
}

/// The three clique gadgets of `t`, in the order α, β, γ.
pub fn cfg_gadgets(g: &Graph, t: &Clique, k: usize) -> [TokenSequence; 3] {
    let node = cng(g, t, k);
    let list = clg(g, t, k);
    let wrap = |x: &str, left: &TokenSequence, right: &TokenSequence| {
        let mut s = TokenSequence::new();
        s.push(format!("{x}_start"));
        s.extend_from(left);
        s.push(format!("{x}_mid"));
        s.extend_from(right);
        s.push(format!("{x}_end"));
        s
    };
    [wrap("a", &node, &node), wrap("b", &list, &node), wrap("c", &list, &list)]
}

/// String over the terminals of the clique grammar; in the language iff
/// `g` has a `3k`-clique. Empty when `g` has no `k`-clique.
pub fn build_cfg_string(g: &Graph, k: usize) -> TokenSequence {
    let gadgets: Vec<[TokenSequence; 3]> =
        enumerate_k_cliques(g, k).iter().map(|t| cfg_gadgets(g, t, k)).collect();
    let mut w = TokenSequence::new();
    for kind in 0..3 {
        for gs in &gadgets {
            w.extend_from(&gs[kind]);
        }
    }
    w
}

/// Sidecar for a CFG string of `tokens` tokens.
pub fn cfg_metadata(g: &Graph, k: usize, tokens: usize) -> BuildMetadata {
    BuildMetadata::new("cfg", g, k, enumerate_k_cliques(g, k).len(), tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_k1() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let w = build_cfg_string(&g, 1);
        // node 1 = 0001, node 2 = 0010
        let expected = "a_start # 0 0 0 1 # a_mid # 0 0 0 1 # a_end \
             a_start # 0 0 1 0 # a_mid # 0 0 1 0 # a_end \
             b_start # $ 0 1 0 0 $ # b_mid # 0 0 0 1 # b_end \
             b_start # $ 1 0 0 0 $ # b_mid # 0 0 1 0 # b_end \
             c_start # $ 0 1 0 0 $ # c_mid # $ 0 1 0 0 $ # c_end \
             c_start # $ 1 0 0 0 $ # c_mid # $ 1 0 0 0 $ # c_end";
        assert_eq!(w, TokenSequence::parse(expected));
    }

    #[test]
    fn no_cliques_gives_empty_string() {
        assert!(build_cfg_string(&Graph::empty(3), 2).is_empty());
    }
}
