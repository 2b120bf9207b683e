use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::folding::WeightedSequence;
use crate::graphs::{ceil_log2, encoding_width, enumerate_k_cliques, Clique, Graph};
use crate::tokens::{MatchedAlphabet, TokenSequence};

use super::{bits, mark, prime_reverse, repeat, BuildMetadata, ReductionError, Thresholds, TypeMark};

/// Weights and score thresholds of the weighted RNA instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RnaParams {
    pub n: usize,
    pub k: usize,
    /// `⌈log₂ n⌉`, at least 1.
    pub log_n: u64,
    pub width: usize,
    pub l1: u64,
    pub l2: u64,
    pub l3: u64,
}

impl RnaParams {
    pub fn new(n: usize, k: usize) -> Self {
        let log_n = u64::from(ceil_log2(n as u64)).max(1);
        let k2 = (k * k) as u64;
        let l1 = 10 * k2 * n as u64 * log_n;
        let l2 = 10 * k2 * l1;
        let l3 = 10 * l2;
        Self { n, k, log_n, width: encoding_width(n), l1, l2, l3 }
    }

    pub fn dollar_weight(&self) -> u64 {
        10 * self.log_n
    }

    /// Weight per base letter, for all 18 letters.
    pub fn weights(&self) -> BTreeMap<String, u64> {
        let mut w = BTreeMap::new();
        for m in TypeMark::ALL {
            for (base, weight) in
                [("0", 1), ("1", 1), ("$", self.dollar_weight()), ("#", self.l1), ("g", self.l2)]
            {
                w.insert(format!("{base}_{}", m.suffix()), weight);
            }
        }
        for base in ["alpha", "beta", "gamma"] {
            w.insert(base.to_owned(), self.l3);
        }
        w
    }

    pub fn alphabet() -> MatchedAlphabet {
        let mut bases = Vec::new();
        for m in TypeMark::ALL {
            for base in ["0", "1", "$", "#", "g"] {
                bases.push(format!("{base}_{}", m.suffix()));
            }
        }
        bases.extend(["alpha", "beta", "gamma"].map(String::from));
        MatchedAlphabet::primed(bases).expect("distinct letters")
    }

    pub fn thresholds(&self, cliques: usize) -> Thresholds {
        let k2 = (self.k * self.k) as u64;
        let e1 = 2 * self.n as u64 * self.dollar_weight() + self.width as u64;
        let e2 = 2 * k2 * self.l1 + k2 * e1;
        let e3 = 6 * self.l2 + 3 * e2;
        let ec = 6 * cliques as u64 * self.l3 + e3;
        Thresholds { e1, e2, e3, el: None, ec, cliques }
    }
}

/// Unmarked building blocks of the RNA construction.
pub struct RnaGadgets<'a> {
    g: &'a Graph,
    k: usize,
}

impl<'a> RnaGadgets<'a> {
    pub fn node(&self, v: usize) -> TokenSequence {
        let n = self.g.n();
        let mut s = TokenSequence::new();
        s.push_repeated("$", 2 * n);
        s.extend_from(&bits(v, n));
        s.push_repeated("$", 2 * n);
        s
    }

    pub fn list(&self, v: usize) -> TokenSequence {
        let n = self.g.n();
        let mut s = TokenSequence::new();
        for u in self.g.neighbors(v) {
            s.push("$");
            s.extend_from(&bits(u, n));
            s.push("$");
        }
        s.push_repeated("$", 2 * (n - self.g.degree(v)));
        s
    }

    pub fn clique_node(&self, t: &Clique) -> TokenSequence {
        let mut s = TokenSequence::new();
        for &v in t.nodes() {
            let mut block = TokenSequence::new();
            block.push("#");
            block.extend_from(&self.node(v));
            block.push("#");
            s.extend_from(&repeat(&block, self.k));
        }
        s
    }

    pub fn clique_list(&self, t: &Clique) -> TokenSequence {
        let mut once = TokenSequence::new();
        for &v in t.nodes() {
            once.push("#");
            once.extend_from(&self.list(v));
            once.push("#");
        }
        repeat(&once, self.k)
    }

    /// `[g CNG(t) g]_xy ∘ [g' p(CLG(t))ᴿ g']_x'y'` for the type of `kind`
    /// (0, 1, 2 for α, β, γ).
    pub fn clique(&self, t: &Clique, kind: usize) -> TokenSequence {
        let (first, second) = match kind {
            0 => (TypeMark::AlphaGamma, TypeMark::AlphaBeta),
            1 => (TypeMark::AlphaBeta, TypeMark::BetaGamma),
            _ => (TypeMark::BetaGamma, TypeMark::AlphaGamma),
        };
        let mut open = TokenSequence::new();
        open.push("g");
        open.extend_from(&self.clique_node(t));
        open.push("g");
        let mut close = TokenSequence::new();
        close.push("g");
        close.extend_from(&self.clique_list(t));
        close.push("g");
        let mut s = mark(&open, first).expect("unmarked");
        s.extend_from(&mark(&prime_reverse(&close), second).expect("unmarked"));
        s
    }
}

pub fn rna_gadgets(g: &Graph, k: usize) -> RnaGadgets<'_> {
    RnaGadgets { g, k }
}

/// The weighted RNA instance built from `g`.
#[derive(Clone, Debug)]
pub struct RnaInstance {
    pub sequence: WeightedSequence,
    pub params: RnaParams,
    pub thresholds: Thresholds,
    pub metadata: BuildMetadata,
}

pub fn build_rna_instance(g: &Graph, k: usize) -> Result<RnaInstance, ReductionError> {
    let params = RnaParams::new(g.n(), k);
    let cliques = enumerate_k_cliques(g, k);
    let gadgets = rna_gadgets(g, k);
    let weights = params.weights();
    let alphabet = RnaParams::alphabet();

    let flank = 2 * g.n().pow(k as u32);
    let mut s = TokenSequence::new();
    for (kind, letter) in ["alpha", "beta", "gamma"].into_iter().enumerate() {
        let primed = format!("{letter}'");
        s.push_repeated(letter, flank);
        for t in &cliques {
            let cg = gadgets.clique(t, kind);
            let weight: u64 = cg.iter().map(|x| weight_of(&alphabet, &weights, x)).sum();
            if params.l3 <= weight {
                return Err(ReductionError::Separation(format!(
                    "clique gadget weight {weight} is not below l3 = {}",
                    params.l3
                )));
            }
            s.push(primed.as_str());
            s.extend_from(&cg);
            s.push(primed.as_str());
        }
        s.push_repeated(letter, flank);
    }
    for t in &cliques {
        for part in [gadgets.clique_node(t), gadgets.clique_list(t)] {
            let weight: u64 = part.iter().map(|x| unmarked_weight(&params, x)).sum();
            if params.l2 <= weight {
                return Err(ReductionError::Separation(format!(
                    "clique node/list weight {weight} is not below l2 = {}",
                    params.l2
                )));
            }
        }
    }

    let thresholds = params.thresholds(cliques.len());
    let mut metadata = BuildMetadata::new("rna", g, k, cliques.len(), s.len());
    metadata.ell = Some(vec![params.l1, params.l2, params.l3]);
    metadata.thresholds = Some(thresholds.clone());
    metadata.weights = Some(weights.clone());
    let sequence = WeightedSequence::new(s, alphabet, &weights).expect("builder alphabet is closed");
    Ok(RnaInstance { sequence, params, thresholds, metadata })
}

fn weight_of(alphabet: &MatchedAlphabet, weights: &BTreeMap<String, u64>, token: &str) -> u64 {
    let code = alphabet.code(token).expect("builder letter");
    weights[alphabet.pairs()[(code / 2) as usize].0.as_str()]
}

fn unmarked_weight(p: &RnaParams, token: &str) -> u64 {
    match token.trim_end_matches('\'') {
        "0" | "1" => 1,
        "$" => p.dollar_weight(),
        "#" => p.l1,
        other => unreachable!("unexpected letter {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_for_small_n() {
        let p = RnaParams::new(3, 1);
        assert_eq!(p.log_n, 2);
        assert_eq!((p.l1, p.l2, p.l3), (60, 600, 6000));
        assert_eq!(p.weights().len(), 18);
        assert_eq!(RnaParams::alphabet().pair_count(), 18);
        let t = p.thresholds(3);
        assert_eq!(t.e1, 2 * 3 * 20 + 4);
        assert_eq!(t.e2, 2 * 60 + t.e1);
        assert_eq!(t.e3, 6 * 600 + 3 * t.e2);
        assert_eq!(t.ec, 18 * 6000 + t.e3);
    }

    #[test]
    fn list_gadget_has_filler_blocks() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let gs = rna_gadgets(&g, 1);
        assert_eq!(gs.list(1), TokenSequence::parse("$ 0 0 1 0 $ $ $ $ $"));
        assert_eq!(gs.list(3), TokenSequence::parse("$ $ $ $ $ $"));
    }
}
