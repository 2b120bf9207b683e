use serde::{Deserialize, Serialize};

use crate::graphs::{encoding_width, enumerate_k_cliques, Clique, Graph};
use crate::tokens::{BracketAlphabet, TokenSequence};

use super::{bits, mark, prime_reverse, repeat, BuildMetadata, ReductionError, Thresholds, TypeMark};

/// Default cap on the number of tokens a build may emit.
pub const DEFAULT_TOKEN_BUDGET: u64 = 5_000_000;

/// Run lengths `ℓ₀ … ℓ₅` of the padding symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "schedule")]
pub enum DyckPadding {
    /// `ℓᵢ = (1000·n²)^(i+1)`. Only usable for length accounting.
    PaperExact,
    /// `ℓᵢ = b^(i+1)`.
    Geometric { base: u64 },
    /// Compact lengths with margin `b`: `ℓ₀` is the least even number above
    /// half the encoding width `L`, `ℓ₁ = (2n-1)·ℓ₀`, `ℓ₂ = ℓ₁ + 2`,
    /// `ℓ₃ = ℓ₂ + 2`, `ℓ₄ = 2ℓ₃ + k²(2ℓ₂ + 2nℓ₀ + L) + b` (the matches
    /// available to one pair of gadget halves, plus `b`) and `ℓ₅ = ℓ₄ + b`.
    Scaled { base: u64 },
    Explicit { ell: [u64; 6] },
}

impl DyckPadding {
    pub fn name(&self) -> &'static str {
        match self {
            DyckPadding::PaperExact => "paper-exact",
            DyckPadding::Geometric { .. } => "geometric",
            DyckPadding::Scaled { .. } => "scaled",
            DyckPadding::Explicit { .. } => "explicit",
        }
    }

    pub fn base(&self) -> Option<u64> {
        match *self {
            DyckPadding::Geometric { base } | DyckPadding::Scaled { base } => Some(base),
            _ => None,
        }
    }

    /// Lengths for an `n`-node graph; `None` when they overflow `u128`.
    pub fn lengths(&self, n: usize, k: usize) -> Option<[u128; 6]> {
        let mut ell = [0u128; 6];
        match *self {
            DyckPadding::PaperExact => {
                let b = 1000u128 * (n as u128) * (n as u128);
                let mut x = 1u128;
                for l in ell.iter_mut() {
                    x = x.checked_mul(b)?;
                    *l = x;
                }
            }
            DyckPadding::Geometric { base } => {
                let mut x = 1u128;
                for l in ell.iter_mut() {
                    x = x.checked_mul(base as u128)?;
                    *l = x;
                }
            }
            DyckPadding::Scaled { base } => {
                let (n, k2, w, b) = (n as u128, (k * k) as u128, encoding_width(n) as u128, base as u128);
                let half = w / 2 + 1;
                ell[0] = half + half % 2;
                ell[1] = (2 * n).saturating_sub(1).max(2) * ell[0];
                ell[2] = ell[1] + 2;
                ell[3] = ell[2] + 2;
                let pair_matches = (2 * ell[2] + 2 * n * ell[0] + w).checked_mul(k2)?;
                ell[4] = (2 * ell[3] + pair_matches).checked_add(b)?;
                ell[5] = ell[4].checked_add(b)?;
            }
            DyckPadding::Explicit { ell: e } => {
                for (l, x) in ell.iter_mut().zip(e) {
                    *l = x as u128;
                }
            }
        }
        Some(ell)
    }
}

fn validate(ell: &[u128; 6]) -> Result<(), ReductionError> {
    let ok = ell.iter().all(|&l| l >= 2 && l % 2 == 0) && ell.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(ReductionError::BadPadding(ell.to_vec()))
    }
}

/// Closed-form lengths of the gadgets, in `u128` with overflow checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Sizes {
    clique_node: u128,
    clique_list: u128,
    gadget: [u128; 3],
}

fn sizes(n: usize, k: usize, ell: &[u128; 6]) -> Option<Sizes> {
    let (n, k2, w) = (n as u128, (k * k) as u128, encoding_width(n as usize) as u128);
    let node = ell[1].checked_mul(2)?.checked_add(w)?;
    let list = ell[0].checked_mul(2)?.checked_add(w)?.checked_mul(n)?;
    let clique_node = ell[2].checked_mul(2)?.checked_add(node)?.checked_mul(k2)?;
    let clique_list = ell[2].checked_mul(2)?.checked_add(list)?.checked_mul(k2)?;
    let open = ell[3].checked_mul(2)?.checked_add(clique_node)?;
    let close = ell[3].checked_mul(2)?.checked_add(clique_list)?;
    let frame = ell[4].checked_add(ell[5])?.checked_mul(2)?;
    let gadget = [
        frame.checked_add(open)?.checked_add(open)?,
        frame.checked_add(close)?.checked_add(open)?,
        frame.checked_add(close)?.checked_add(close)?,
    ];
    Some(Sizes { clique_node, clique_list, gadget })
}

/// Token count of the full instance, or `None` past `u128`.
pub fn dyck_instance_length(n: usize, k: usize, cliques: usize, padding: &DyckPadding) -> Option<u128> {
    let ell = padding.lengths(n, k)?;
    let s = sizes(n, k, &ell)?;
    let per_clique = s.gadget[0].checked_add(s.gadget[1])?.checked_add(s.gadget[2])?;
    per_clique.checked_mul(cliques as u128)?.checked_add(ell[5].checked_mul(6)?)
}

fn dyck_thresholds(n: usize, k: usize, cliques: usize, ell: &[u128; 6]) -> Result<Thresholds, ReductionError> {
    let s = sizes(n, k, ell).expect("lengths fit");
    let (nn, w) = (n as u128, encoding_width(n) as u128);
    if ell[1] < nn * ell[0] {
        return Err(ReductionError::Separation(format!(
            "l1 = {} is below n·l0 = {}",
            ell[1],
            nn * ell[0]
        )));
    }
    let e1 = (nn - 1) * w / 2 + ell[1] - nn * ell[0];
    let e2 = (k * k) as u128 * e1;
    let e3 = 3 * (ell[4] + e2);
    let el = s.gadget.map(|len| (len - 2 * ell[4]) / 2);
    let ec = (cliques as u128).saturating_sub(1) * el.iter().sum::<u128>() + e3;
    let narrow = |x: u128| u64::try_from(x).expect("threshold fits u64");
    Ok(Thresholds {
        e1: narrow(e1),
        e2: narrow(e2),
        e3: narrow(e3),
        el: Some(el.map(narrow)),
        ec: narrow(ec),
        cliques,
    })
}

/// Building blocks of the Dyck construction for fixed padding.
pub struct DyckGadgets<'a> {
    g: &'a Graph,
    k: usize,
    ell: [usize; 6],
}

impl<'a> DyckGadgets<'a> {
    pub fn node(&self, v: usize) -> TokenSequence {
        let mut s = TokenSequence::new();
        s.push_repeated("$", self.ell[1]);
        s.extend_from(&bits(v, self.g.n()));
        s.push_repeated("$", self.ell[1]);
        s
    }

    pub fn list(&self, v: usize) -> TokenSequence {
        let n = self.g.n();
        let zero = TokenSequence::from_tokens(std::iter::repeat("0").take(encoding_width(n)));
        let mut s = TokenSequence::new();
        let fillers = n - self.g.degree(v);
        for block in self.g.neighbors(v).map(|u| bits(u, n)).chain(std::iter::repeat(zero).take(fillers)) {
            s.push_repeated("$", self.ell[0]);
            s.extend_from(&block);
            s.push_repeated("$", self.ell[0]);
        }
        s
    }

    fn hashed(&self, inner: TokenSequence) -> TokenSequence {
        let mut s = TokenSequence::new();
        s.push_repeated("#", self.ell[2]);
        s.extend_from(&inner);
        s.push_repeated("#", self.ell[2]);
        s
    }

    pub fn clique_node(&self, t: &Clique) -> TokenSequence {
        let mut s = TokenSequence::new();
        for &v in t.nodes() {
            s.extend_from(&repeat(&self.hashed(self.node(v)), self.k));
        }
        s
    }

    pub fn clique_list(&self, t: &Clique) -> TokenSequence {
        let mut once = TokenSequence::new();
        for &v in t.nodes() {
            once.extend_from(&self.hashed(self.list(v)));
        }
        repeat(&once, self.k)
    }

    fn guarded(&self, inner: TokenSequence) -> TokenSequence {
        let mut s = TokenSequence::new();
        s.push_repeated("g", self.ell[3]);
        s.extend_from(&inner);
        s.push_repeated("g", self.ell[3]);
        s
    }

    /// `[g^ℓ₃ CNG(t) g^ℓ₃]_xy`
    pub fn open_half(&self, t: &Clique, xy: TypeMark) -> TokenSequence {
        mark(&self.guarded(self.clique_node(t)), xy).expect("unmarked")
    }

    /// `[(g')^ℓ₃ p(CLG(t))ᴿ (g')^ℓ₃]_xy`
    pub fn close_half(&self, t: &Clique, xy: TypeMark) -> TokenSequence {
        mark(&prime_reverse(&self.guarded(self.clique_list(t))), xy).expect("unmarked")
    }

    /// Clique gadget of type α, β or γ (`kind` 0, 1, 2).
    pub fn clique(&self, t: &Clique, kind: usize) -> TokenSequence {
        let (frame, name, middle) = match kind {
            0 => (
                "a",
                "alpha",
                [self.open_half(t, TypeMark::AlphaGamma), self.open_half(t, TypeMark::AlphaBeta)],
            ),
            1 => (
                "b",
                "beta",
                [self.close_half(t, TypeMark::AlphaBeta), self.open_half(t, TypeMark::BetaGamma)],
            ),
            _ => (
                "c",
                "gamma",
                [self.close_half(t, TypeMark::BetaGamma), self.close_half(t, TypeMark::AlphaGamma)],
            ),
        };
        let mut s = TokenSequence::new();
        s.push_repeated(frame, self.ell[4]);
        s.push_repeated(&format!("x_{name}'"), self.ell[5]);
        for half in &middle {
            s.extend_from(half);
        }
        s.push_repeated(&format!("y_{name}"), self.ell[5]);
        s.push_repeated(&format!("{frame}'"), self.ell[4]);
        s
    }
}

/// Gadget builder for explicit padding lengths.
pub fn dyck_gadgets(g: &Graph, k: usize, ell: [usize; 6]) -> DyckGadgets<'_> {
    DyckGadgets { g, k, ell }
}

/// The 24 opening letters with their closing partners.
pub fn dyck_alphabet() -> BracketAlphabet {
    let mut bases: Vec<String> = Vec::new();
    for m in TypeMark::ALL {
        for base in ["0", "1", "$", "#", "g"] {
            bases.push(format!("{base}_{}", m.suffix()));
        }
    }
    bases.extend(["a", "b", "c"].map(String::from));
    for name in ["alpha", "beta", "gamma"] {
        bases.push(format!("x_{name}"));
        bases.push(format!("y_{name}"));
    }
    BracketAlphabet::primed(bases).expect("distinct letters")
}

#[derive(Clone, Debug)]
pub struct DyckInstance {
    pub tokens: TokenSequence,
    pub ell: [u64; 6],
    pub thresholds: Thresholds,
    pub metadata: BuildMetadata,
}

pub fn build_dyck_instance(g: &Graph, k: usize, padding: &DyckPadding) -> Result<DyckInstance, ReductionError> {
    build_dyck_instance_with_budget(g, k, padding, DEFAULT_TOKEN_BUDGET)
}

/// Refuses with the computed length when the instance exceeds `budget` tokens.
pub fn build_dyck_instance_with_budget(
    g: &Graph,
    k: usize,
    padding: &DyckPadding,
    budget: u64,
) -> Result<DyckInstance, ReductionError> {
    let cliques = enumerate_k_cliques(g, k);
    let n = g.n();
    let over = |length: String| ReductionError::OverBudget { length, budget };
    let ell = padding.lengths(n, k).ok_or_else(|| over("more than 2^128".into()))?;
    let length =
        dyck_instance_length(n, k, cliques.len(), padding).ok_or_else(|| over("more than 2^128".into()))?;
    if length > budget as u128 {
        return Err(over(length.to_string()));
    }
    validate(&ell)?;
    let thresholds = dyck_thresholds(n, k, cliques.len(), &ell)?;
    let ell_usize = ell.map(|l| l as usize);
    let gadgets = dyck_gadgets(g, k, ell_usize);

    let mut s = TokenSequence::new();
    for (kind, name) in ["alpha", "beta", "gamma"].into_iter().enumerate() {
        s.push_repeated(&format!("x_{name}"), ell_usize[5]);
        for t in &cliques {
            s.extend_from(&gadgets.clique(t, kind));
        }
        s.push_repeated(&format!("y_{name}'"), ell_usize[5]);
    }
    debug_assert_eq!(s.len() as u128, length);

    let ell = ell.map(|l| l as u64);
    let mut metadata = BuildMetadata::new("dyck", g, k, cliques.len(), s.len());
    metadata.schedule = Some(padding.name().to_owned());
    metadata.base = padding.base();
    metadata.ell = Some(ell.to_vec());
    metadata.thresholds = Some(thresholds.clone());
    Ok(DyckInstance { tokens: s, ell, thresholds, metadata })
}
